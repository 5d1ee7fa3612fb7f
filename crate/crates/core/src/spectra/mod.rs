//! Dirichlet, Neumann and periodic/antiperiodic spectra, Floquet exponents and
//! the assembled spectral table.
//!
//! Roots are found by Newton's method on a mesh frozen per eigenvalue cluster.
//! Low indices are seeded by the Galerkin oracle, higher ones by the leading
//! asymptotics inside the isolating disc |λ − n²π²| < π²/4. Periodic pairs are
//! resolved from F = Δ² − 4 = (y1 − y2′)² + 4 y1′ y2, whose product form keeps
//! relative accuracy when the two eigenvalues of a cluster nearly coincide.

mod galerkin;
mod table;

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

pub use galerkin::{galerkin_oracle, galerkin_periodic_merged};
pub use table::{build_table, build_table_with, SpectralRow, SpectralTable, TableOptions};

use crate::error::{HillError, Result};
use crate::odecore::{check_tol, MonodromyJet, Shooter};
use crate::potential::{Pairing, Potential};
use crate::scalar::{cast_complex, lex_cmp, Real};

/// Boundary condition on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Dirichlet,
    Neumann,
    Periodic,
    Antiperiodic,
}

/// Isolating-disc radius in units of π².
pub const DISC_RADIUS: f64 = 0.25;
/// Gap below which a periodic pair is flagged near-degenerate.
pub const NEAR_DEGENERATE_GAP: f64 = 1e-7;
const MAX_NEWTON: usize = 60;

/// Number of Galerkin modes used for seeding and cross-checks.
pub fn oracle_modes<T: Real>(q: &Potential<T>, n_max: usize) -> usize {
    (4 * n_max).max(96).max(4 * q.bandwidth() as usize + 32)
}

/// First index from which asymptotic seeds are trusted: the predicted
/// deviation from n²π² stays below half the disc radius for every m ≥ n.
pub fn asymptotic_start<T: Real>(q: &Potential<T>) -> usize {
    let pi2 = T::PI() * T::PI();
    let s = q.coeff_l1();
    let limit = T::lit(DISC_RADIUS) * pi2 / T::lit(2.0);
    let dev = |n: usize| {
        let ni = n as i64;
        q.coeff(ni).norm()
            + q.coeff(-ni).norm()
            + T::lit(2.0) * s * s / (T::from_usize_lossy(2 * n - 1) * pi2)
    };
    let m = q.bandwidth() as usize + 1;
    (1..=m + 1)
        .find(|&n| (n..=m.max(n) + 1).all(|k| dev(k) < limit))
        .unwrap_or(m + 1)
}

/// Where a root search starts and how far it may wander.
#[derive(Debug, Clone, Copy)]
struct Disc<T> {
    seed: Complex<T>,
    center: Complex<T>,
    radius: T,
}

impl<T: Real> Disc<T> {
    fn contains(&self, z: Complex<T>) -> bool {
        (z - self.center).norm() < self.radius
    }
}

fn n2pi2<T: Real>(n: usize) -> T {
    let x = T::from_usize_lossy(n) * T::PI();
    x * x
}

fn converged<T: Real>(step: Complex<T>, lambda: Complex<T>, tol: T) -> bool {
    step.norm() <= tol * lambda.norm().max(T::one())
}

/// Damped Newton iteration on g(λ) with g and g′ read off the monodromy jet.
fn newton<T: Real>(
    shooter: &Shooter<T>,
    disc: Disc<T>,
    n: usize,
    tol: T,
    g: impl Fn(&MonodromyJet<T>) -> (Complex<T>, Complex<T>),
) -> Result<Complex<T>> {
    let mut lam = disc.seed;
    let mut done = false;
    for _ in 0..MAX_NEWTON {
        let (v, d) = g(&shooter.jet(lam, 1));
        if d.is_zero() {
            return Err(HillError::Multiplicity {
                n,
                reason: "vanishing derivative of the root function".into(),
            });
        }
        let mut step = v / d;
        let mut next = lam - step;
        let mut halvings = 0;
        while !disc.contains(next) {
            halvings += 1;
            if halvings > 40 {
                return Err(HillError::RootNotFound {
                    n,
                    reason: format!("iterate left the isolating disc around {}", disc.center),
                });
            }
            step = step / T::lit(2.0);
            next = lam - step;
        }
        lam = next;
        if done {
            return Ok(lam);
        }
        // one extra iteration after the step criterion is met
        done = converged(step, lam, tol);
    }
    Err(HillError::Multiplicity {
        n,
        reason: "Newton iteration did not converge quadratically".into(),
    })
}

/// Oracle eigenvalues in precision T.
fn oracle_values<T: Real>(q: &Potential<T>, b: Boundary, modes: usize) -> Result<Vec<Complex<T>>> {
    let v = match b {
        Boundary::Periodic | Boundary::Antiperiodic => galerkin_periodic_merged(&q.cast(), modes)?,
        _ => galerkin_oracle(&q.cast(), b, modes)?,
    };
    Ok(v.into_iter().map(cast_complex).collect())
}

/// Disc around oracle value `vals[i]` reaching halfway to its neighbours.
fn oracle_disc<T: Real>(vals: &[Complex<T>], i: usize, cluster: &[usize]) -> Disc<T> {
    let center = cluster
        .iter()
        .fold(Complex::zero(), |a, &k| a + vals[k])
        / T::from_usize_lossy(cluster.len());
    let seed = vals[i];
    let mut gap = T::infinity();
    for (k, v) in vals.iter().enumerate() {
        if !cluster.contains(&k) {
            gap = gap.min((*v - center).norm());
        }
    }
    let spread = cluster
        .iter()
        .map(|&k| (vals[k] - center).norm())
        .fold(T::zero(), T::max);
    Disc {
        seed,
        center,
        radius: (gap / T::lit(2.0)).max(spread * T::lit(2.0)),
    }
}

fn asymptotic_disc<T: Real>(n: usize, seed: Complex<T>) -> Disc<T> {
    Disc {
        seed,
        center: Complex::from(n2pi2::<T>(n)),
        radius: T::lit(DISC_RADIUS) * T::PI() * T::PI(),
    }
}

fn cos_pairing<T: Real>(q: &Potential<T>, n: usize) -> Complex<T> {
    q.pairing(Pairing::Cos(n as i64)).expect("n ≥ 1")
}

/// Solves a simple-root family (Dirichlet or Neumann) for indices in `range`.
fn simple_family<T: Real>(
    q: &Potential<T>,
    boundary: Boundary,
    indices: std::ops::RangeInclusive<usize>,
    tol: T,
) -> Result<Vec<(Complex<T>, Shooter<T>)>> {
    let tol = check_tol(tol)?;
    let n_max = *indices.end();
    let n0 = asymptotic_start(q);
    let lowest = *indices.start();
    let oracle = if lowest < n0 {
        Some(oracle_values(q, boundary, oracle_modes(q, n_max))?)
    } else {
        None
    };
    // oracle list index of eigenvalue n: Dirichlet starts at μ_1, Neumann at η_0
    let offset = if boundary == Boundary::Dirichlet { 1 } else { 0 };
    let idx: Vec<usize> = indices.collect();
    idx.par_iter()
        .map(|&n| {
            let disc = match &oracle {
                Some(vals) if n < n0 => oracle_disc(vals, n - offset, &[n - offset]),
                _ => {
                    let shift = cos_pairing(q, n);
                    let seed = Complex::from(n2pi2::<T>(n))
                        + if boundary == Boundary::Dirichlet { -shift } else { shift };
                    asymptotic_disc(n, seed)
                }
            };
            let shooter = Shooter::new(q, disc.seed, tol)?;
            let lam = match boundary {
                Boundary::Dirichlet => newton(&shooter, disc, n, tol, |j| (j.y2[0], j.y2[1]))?,
                _ => newton(&shooter, disc, n, tol, |j| (j.dy1[0], j.dy1[1]))?,
            };
            Ok((lam, shooter))
        })
        .collect()
}

/// Dirichlet eigenvalues μ_1..μ_{n_max}: zeros of y2(1, λ).
pub fn dirichlet_eigs<T: Real>(q: &Potential<T>, n_max: usize, tol: T) -> Result<Vec<Complex<T>>> {
    check_n_max(n_max)?;
    Ok(simple_family(q, Boundary::Dirichlet, 1..=n_max, tol)?
        .into_iter()
        .map(|(l, _)| l)
        .collect())
}

/// Neumann eigenvalues η_0..η_{n_max}: zeros of y1′(1, λ).
pub fn neumann_eigs<T: Real>(q: &Potential<T>, n_max: usize, tol: T) -> Result<Vec<Complex<T>>> {
    check_n_max(n_max)?;
    Ok(simple_family(q, Boundary::Neumann, 0..=n_max, tol)?
        .into_iter()
        .map(|(l, _)| l)
        .collect())
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(HillError::Domain("n_max must be at least 1".into()));
    }
    Ok(())
}

/// One periodic cluster {λ_{2n−1}, λ_{2n}}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicPair<T> {
    pub lo: Complex<T>,
    pub hi: Complex<T>,
    /// Set when the computed gap is below [`NEAR_DEGENERATE_GAP`].
    pub near_degenerate: bool,
}

/// λ_0 and the pairs for n = 1..n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSpectrum<T> {
    pub lambda0: Complex<T>,
    pub pairs: Vec<PeriodicPair<T>>,
}

/// F = (y1 − y2′)² + 4 y1′ y2 and its first two λ-derivatives.
fn product_form<T: Real>(j: &MonodromyJet<T>) -> [Complex<T>; 3] {
    let d: Vec<Complex<T>> = (0..3).map(|k| j.y1[k] - j.dy2[k]).collect();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let f = d[0] * d[0] + j.dy1[0] * j.y2[0] * four;
    let f1 = d[0] * d[1] * two + (j.dy1[1] * j.y2[0] + j.dy1[0] * j.y2[1]) * four;
    let f2 = (d[1] * d[1] + d[0] * d[2]) * two
        + (j.dy1[2] * j.y2[0] + j.dy1[1] * j.y2[1] * two + j.dy1[0] * j.y2[2]) * four;
    [f, f1, f2]
}

fn solve_cluster<T: Real>(
    q: &Potential<T>,
    n: usize,
    disc: Disc<T>,
    tol: T,
) -> Result<PeriodicPair<T>> {
    let shooter = Shooter::new(q, disc.center, tol)?;
    // critical point of F by Newton on F′
    let mut c = disc.seed;
    let mut done = false;
    let mut ok = false;
    for _ in 0..MAX_NEWTON {
        let [_, f1, f2] = product_form(&shooter.jet(c, 2));
        if f2.is_zero() {
            break;
        }
        let mut step = f1 / f2;
        let mut halvings = 0;
        while !disc.contains(c - step) && halvings < 40 {
            step = step / T::lit(2.0);
            halvings += 1;
        }
        c = c - step;
        if done {
            ok = true;
            break;
        }
        done = converged(step, c, tol);
    }
    if !ok {
        return Err(HillError::RootNotFound {
            n,
            reason: "no critical point of Δ² − 4 in the isolating disc".into(),
        });
    }
    let [f, _, f2] = product_form(&shooter.jet(c, 2));
    let ratio = -f * T::lit(2.0) / f2;
    let half = if q.is_real() {
        Complex::from(ratio.re.max(T::zero()).sqrt())
    } else {
        ratio.sqrt()
    };
    let mut roots = [c - half, c + half];
    if half.norm() > T::lit(1e-5) * c.norm().max(T::one()) {
        for (k, r) in roots.iter_mut().enumerate() {
            let start = *r;
            let mut x = *r;
            let mut done = false;
            for _ in 0..MAX_NEWTON {
                let [f, f1, _] = product_form(&shooter.jet(x, 2));
                if f1.is_zero() {
                    break;
                }
                let step = f / f1;
                x = x - step;
                if (x - start).norm() > half.norm() / T::lit(2.0) {
                    return Err(HillError::Labeling {
                        n,
                        reason: format!("root {k} of the cluster drifted to the other branch"),
                    });
                }
                if done {
                    break;
                }
                done = converged(step, x, tol);
            }
            *r = if q.is_real() { Complex::from(x.re) } else { x };
        }
    }
    for r in &roots {
        if !disc.contains(*r) {
            return Err(HillError::Labeling {
                n,
                reason: "cluster root outside its isolating disc".into(),
            });
        }
    }
    roots.sort_by(lex_cmp);
    Ok(PeriodicPair {
        lo: roots[0],
        hi: roots[1],
        near_degenerate: (roots[1] - roots[0]).norm() < T::lit(NEAR_DEGENERATE_GAP),
    })
}

/// Periodic (Δ = 2) and antiperiodic (Δ = −2) eigenvalues, merged and labeled.
pub fn periodic_eigs<T: Real>(q: &Potential<T>, n_max: usize, tol: T) -> Result<PeriodicSpectrum<T>> {
    check_n_max(n_max)?;
    let tol = check_tol(tol)?;
    let n0 = asymptotic_start(q);
    let oracle = oracle_values(q, Boundary::Periodic, oracle_modes(q, n_max))?;
    let lambda0 = {
        let disc = oracle_disc(&oracle, 0, &[0]);
        let shooter = Shooter::new(q, disc.seed, tol)?;
        let two = T::lit(2.0);
        newton(&shooter, disc, 0, tol, |j| (j.y1[0] + j.dy2[0] - two, j.y1[1] + j.dy2[1]))?
    };
    let idx: Vec<usize> = (1..=n_max).collect();
    let pairs = idx
        .par_iter()
        .map(|&n| {
            let disc = if n < n0 {
                let mut d = oracle_disc(&oracle, 2 * n - 1, &[2 * n - 1, 2 * n]);
                d.seed = d.center;
                d
            } else {
                asymptotic_disc(n, Complex::from(n2pi2::<T>(n)))
            };
            solve_cluster(q, n, disc, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PeriodicSpectrum { lambda0, pairs })
}

/// κ_n with its two-expression consistency certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetExponent<T> {
    pub kappa: Complex<T>,
    /// |log((−1)^n y2′(1, μ_n)) + log((−1)^n y1(1, μ_n))|.
    pub mismatch: T,
}

/// Maximum allowed mismatch between the two expressions for κ_n, raised to
/// `1e3·tol` when the working tolerance is coarse (as in single precision).
pub const KAPPA_MISMATCH_TOL: f64 = 1e-8;

fn kappa_at<T: Real>(q: &Potential<T>, n: usize, mu: Complex<T>, shooter: &Shooter<T>) -> Result<FloquetExponent<T>> {
    let f = shooter.fundamental(mu);
    let sgn = if n % 2 == 0 { T::one() } else { -T::one() };
    let a = f.dy2_1 * sgn;
    let b = f.y1_1 * sgn;
    if q.is_real() && !(b.re > T::zero()) {
        return Err(HillError::Branch {
            n,
            reason: format!("(-1)^n y1(1, μ_n) = {b} is not positive"),
        });
    }
    let ka = a.ln();
    let kb = -b.ln();
    let mismatch = (ka - kb).norm();
    if mismatch > T::lit(KAPPA_MISMATCH_TOL).max(shooter.tol() * T::lit(1e3)) {
        return Err(HillError::Consistency(format!(
            "κ_{n}: the two expressions differ by {mismatch}"
        )));
    }
    let mut kappa = (ka + kb) / T::lit(2.0);
    if q.is_real() {
        kappa.im = T::zero();
    }
    Ok(FloquetExponent { kappa, mismatch })
}

/// κ_n = log((−1)^n y2′(1, μ_n)) = −log((−1)^n y1(1, μ_n)) for n = 1, 2, ….
pub fn floquet_exponents<T: Real>(
    q: &Potential<T>,
    mu: &[Complex<T>],
    tol: T,
) -> Result<Vec<FloquetExponent<T>>> {
    let tol = check_tol(tol)?;
    mu.par_iter()
        .enumerate()
        .map(|(i, &m)| kappa_at(q, i + 1, m, &Shooter::new(q, m, tol)?))
        .collect()
}

/// Dirichlet eigenvalues together with their Floquet exponents, sharing meshes.
pub fn dirichlet_with_kappa<T: Real>(
    q: &Potential<T>,
    n_max: usize,
    tol: T,
) -> Result<Vec<(Complex<T>, FloquetExponent<T>)>> {
    check_n_max(n_max)?;
    let sols = simple_family(q, Boundary::Dirichlet, 1..=n_max, tol)?;
    sols.par_iter()
        .enumerate()
        .map(|(i, (mu, sh))| Ok((*mu, kappa_at(q, i + 1, *mu, sh)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn two_cos() -> Potential<f64> {
        Potential::cos_term(Complex::new(2.0, 0.0), 1).unwrap()
    }

    #[test]
    fn free_spectra() {
        let q = Potential::<f64>::zero();
        let mu = dirichlet_eigs(&q, 8, 1e-12).unwrap();
        let eta = neumann_eigs(&q, 8, 1e-12).unwrap();
        let p = periodic_eigs(&q, 8, 1e-12).unwrap();
        assert!(eta[0].norm() < 1e-10);
        assert!(p.lambda0.norm() < 1e-10);
        for n in 1..=8 {
            let e = (n as f64 * PI).powi(2);
            for v in [mu[n - 1], eta[n], p.pairs[n - 1].lo, p.pairs[n - 1].hi] {
                assert!((v.re - e).abs() < 1e-10 * e, "n={n} {v} vs {e}");
            }
        }
    }

    #[test]
    fn two_cos_against_oracle() {
        let q = two_cos();
        let mu = dirichlet_eigs(&q, 12, 1e-12).unwrap();
        let or = galerkin_oracle(&q, Boundary::Dirichlet, 96).unwrap();
        for n in 0..12 {
            assert!((mu[n] - or[n]).norm() < 1e-8 * or[n].norm(), "{n}");
        }
        let p = periodic_eigs(&q, 12, 1e-12).unwrap();
        let po = galerkin_periodic_merged(&q, 96).unwrap();
        assert!((p.lambda0 - po[0]).norm() < 1e-8);
        for n in 1..=12 {
            let pr = p.pairs[n - 1];
            assert!((pr.lo - po[2 * n - 1]).norm() < 1e-8 * po[2 * n].norm());
            assert!((pr.hi - po[2 * n]).norm() < 1e-8 * po[2 * n].norm());
        }
    }

    #[test]
    fn small_gap_of_weak_cosine() {
        let eps = 0.05;
        let q = Potential::cos_term(Complex::new(2.0 * eps, 0.0), 1).unwrap();
        let p = periodic_eigs(&q, 2, 1e-12).unwrap();
        let g: f64 = p.pairs[0].hi.re - p.pairs[0].lo.re;
        assert!((g - 2.0 * eps).abs() < 0.01 * eps, "{g}");
    }

    #[test]
    fn kappa_of_even_potential_vanishes() {
        let q = two_cos();
        let dk = dirichlet_with_kappa(&q, 10, 1e-12).unwrap();
        for (_, k) in dk {
            assert!(k.kappa.norm() < 1e-9);
        }
    }

    #[test]
    fn kappa_leading_order_for_sine() {
        let q = Potential::sin_term(Complex::new(1.0, 0.0), 1).unwrap();
        let dk = dirichlet_with_kappa(&q, 1, 1e-12).unwrap();
        let v = 2.0 * PI * dk[0].1.kappa.re;
        assert!((v - 0.5).abs() < 0.2, "{v}");
    }
}

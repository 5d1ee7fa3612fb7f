//! Discrete Hilbert transform and infinite products with certified tails.
//!
//! Sequences are the base a⁰_m = m²π² plus a perturbation α_m that is stored
//! explicitly for m ≤ L and bounded by a power law |α_m| ≤ c m^{−p} beyond.
//! Products over the unperturbed base use the sine product
//! sin√λ/√λ = Π_{m≥1} (m²π² − λ)/(m²π²), so nothing is truncated silently.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{HillError, Result};
use crate::scalar::Real;

/// (Hα)_n = Σ_{m≠n} α_m (1/(n−m) + 1/(n+m)) for n = 1..=out_len, with
/// `alpha[m − 1]` = α_m.
pub fn hilbert_transform<T: Real>(alpha: &[Complex<T>], out_len: usize) -> Vec<Complex<T>> {
    (1..=out_len)
        .into_par_iter()
        .map(|n| {
            let nf = T::from_usize_lossy(n);
            alpha
                .iter()
                .enumerate()
                .filter(|(i, _)| i + 1 != n)
                .fold(Complex::zero(), |acc, (i, a)| {
                    let m = T::from_usize_lossy(i + 1);
                    acc + *a * (T::one() / (nf - m) + T::one() / (nf + m))
                })
        })
        .collect()
}

fn l2<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt()
}

/// Outcome of a seeded Monte Carlo test of ‖H‖ ≤ 2π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertNormReport {
    pub trials: usize,
    pub support: usize,
    /// Largest observed ‖Hα‖ for unit α.
    pub max_norm: f64,
    pub bound: f64,
}

impl HilbertNormReport {
    pub fn passed(&self) -> bool {
        self.max_norm <= self.bound
    }
}

/// Applies H to `trials` random unit vectors supported on 1..=support.
pub fn hilbert_norm_check(trials: usize, support: usize, seed: u64) -> HilbertNormReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<Complex<f64>>> = (0..trials)
        .map(|_| {
            let v: Vec<Complex<f64>> = (0..support)
                .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let s = l2(&v);
            v.into_iter().map(|z| z / s).collect()
        })
        .collect();
    let max_norm = inputs
        .par_iter()
        .map(|a| l2(&hilbert_transform(a, 4 * support)))
        .reduce(|| 0.0, f64::max);
    HilbertNormReport {
        trials,
        support,
        max_norm,
        bound: 2.0 * std::f64::consts::PI,
    }
}

/// |x_m| ≤ c m^{−p} for every m beyond the explicit part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw<T> {
    pub c: T,
    pub p: T,
}

impl<T: Real> PowerLaw<T> {
    /// Σ_{m>L} c m^{−s} ≤ c / ((s−1) L^{s−1}) for s > 1 and L ≥ 1.
    fn tail_sum(&self, extra: T, l: usize) -> Result<T> {
        let s = self.p + extra;
        if !(s > T::one()) || l == 0 {
            return Err(HillError::Domain(format!(
                "tail c·m^(-{s}) is not summable from m = {}",
                l + 1
            )));
        }
        Ok(self.c / ((s - T::one()) * T::from_usize_lossy(l).powf(s - T::one())))
    }
}

/// A product value with a certified bound |exact − value| ≤ radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductValue<T> {
    pub value: Complex<T>,
    /// ℓ¹ norm of the omitted factors' deviations from 1.
    pub tail_l1: T,
    pub radius: T,
}

impl<T: Real> ProductValue<T> {
    fn new(value: Complex<T>, tail_l1: T) -> Self {
        // |Π_tail − 1| ≤ Π(1 + |a_m|) − 1 ≤ e^S − 1
        Self {
            value,
            tail_l1,
            radius: value.norm() * tail_l1.exp_m1(),
        }
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        (z - self.value).norm() <= self.radius
    }
}

/// Π_{m≥1}(1 + a_m) from the explicit terms and an optional ℓ¹ tail law.
pub fn product_eval<T: Real>(terms: &[Complex<T>], tail: Option<PowerLaw<T>>) -> Result<ProductValue<T>> {
    let value = terms
        .iter()
        .fold(Complex::from(T::one()), |acc, a| acc * (Complex::from(T::one()) + a));
    let tail_l1 = match tail {
        Some(law) => law.tail_sum(T::zero(), terms.len())?,
        None => T::zero(),
    };
    Ok(ProductValue::new(value, tail_l1))
}

/// Left and right sides of |Π(1 + a_m) − 1| ≤ |A|e^S + |B|e^{S+S²}.
pub fn lemma_product_bound<T: Real>(a: &[Complex<T>]) -> Result<(T, T)> {
    if a.iter().any(|x| x.norm() > T::lit(0.5)) {
        return Err(HillError::Domain("the bound needs |a_m| ≤ 1/2".into()));
    }
    let lhs = (product_eval(a, None)?.value - T::one()).norm();
    let big_a = a.iter().fold(Complex::<T>::zero(), |s, x| s + x).norm();
    let big_b = a.iter().fold(T::zero(), |s, x| s + x.norm_sqr());
    let s = a.iter().fold(T::zero(), |acc, x| acc + x.norm());
    Ok((lhs, big_a * s.exp() + big_b * (s + s * s).exp()))
}

/// Outcome of checking the product bound on random sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaBoundReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest observed lhs / rhs.
    pub max_ratio: f64,
}

/// Draws `trials` sequences a_m = u e^{iθ} m^{−p}/2 (m ≤ len) with u, θ and
/// p ∈ [1.1, 3] random, and counts violations of the product bound.
pub fn lemma_bound_check(trials: usize, len: usize, seed: u64) -> LemmaBoundReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seqs: Vec<Vec<Complex<f64>>> = (0..trials)
        .map(|_| {
            let p: f64 = rng.random_range(1.1..3.0);
            (1..=len)
                .map(|m| {
                    let u: f64 = rng.random_range(0.0..1.0);
                    let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    Complex::from_polar(0.5 * u * (m as f64).powf(-p), th)
                })
                .collect()
        })
        .collect();
    let ratios: Vec<f64> = seqs
        .par_iter()
        .map(|a| {
            let (lhs, rhs) = lemma_product_bound(a).expect("terms bounded by 1/2");
            if rhs > 0.0 {
                lhs / rhs
            } else {
                0.0
            }
        })
        .collect();
    LemmaBoundReport {
        trials,
        violations: ratios.iter().filter(|&&r| r > 1.0 + 1e-12).count(),
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
    }
}

/// a_m = m²π² + α_m with α explicit up to L and power-law bounded after.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedSequence<T> {
    /// `alpha[m − 1]` = α_m.
    pub alpha: Vec<Complex<T>>,
    pub tail: Option<PowerLaw<T>>,
}

impl<T: Real> PerturbedSequence<T> {
    pub fn base() -> Self {
        Self {
            alpha: Vec::new(),
            tail: None,
        }
    }

    /// α_m = f(m) for m ≤ len with the given tail law.
    pub fn from_fn(len: usize, f: impl Fn(usize) -> Complex<T>, tail: Option<PowerLaw<T>>) -> Self {
        Self {
            alpha: (1..=len).map(f).collect(),
            tail,
        }
    }

    pub fn perturbation(&self, m: usize) -> Complex<T> {
        self.alpha.get(m - 1).copied().unwrap_or_else(Complex::zero)
    }

    pub fn term(&self, m: usize) -> Complex<T> {
        Complex::from(m2pi2::<T>(m)) + self.perturbation(m)
    }

    fn tail_c(&self) -> T {
        self.tail.map_or(T::zero(), |t| t.c)
    }
}

fn m2pi2<T: Real>(m: usize) -> T {
    let x = T::from_usize_lossy(m) * T::PI();
    x * x
}

/// Discs U_n with parameters (n0, r, ρ): custom discs for n ≤ n0 and
/// D_r^n = {|λ − n²π²| < rπ²} beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolatingFamily<T> {
    pub n0: usize,
    pub r: T,
    pub rho: T,
    /// Centers z_1 < … < z_{n0}; the rest are n²π².
    pub centers: Vec<T>,
    pub radii: Vec<T>,
}

impl<T: Real> IsolatingFamily<T> {
    /// U_n = D_r^n for every n with ρ = 1/(π²(1 − 2r/3)).
    pub fn standard(r: T) -> Result<Self> {
        let pi2 = T::PI() * T::PI();
        let rho = T::one() / (pi2 * (T::one() - T::lit(2.0) * r / T::lit(3.0)));
        Self::new(0, r, rho, Vec::new(), Vec::new())
    }

    pub fn new(n0: usize, r: T, rho: T, centers: Vec<T>, radii: Vec<T>) -> Result<Self> {
        let fam = Self {
            n0,
            r,
            rho,
            centers,
            radii,
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn center(&self, n: usize) -> T {
        if n <= self.n0 {
            self.centers[n - 1]
        } else {
            m2pi2(n)
        }
    }

    pub fn radius(&self, n: usize) -> T {
        if n <= self.n0 {
            self.radii[n - 1]
        } else {
            self.r * T::PI() * T::PI()
        }
    }

    pub fn contains(&self, n: usize, z: Complex<T>) -> bool {
        n >= 1 && (z - self.center(n)).norm() < self.radius(n)
    }

    /// Checks U_n ⊆ D_r^n, ordering, disjointness and the separation
    /// |λ − μ| ≥ |n² − m²|/ρ.
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(HillError::Domain(s));
        let pi2 = T::PI() * T::PI();
        if !(self.r > T::zero() && self.rho > T::zero()) {
            return bad("r and ρ must be positive".into());
        }
        if self.centers.len() != self.n0 || self.radii.len() != self.n0 {
            return bad("need one center and radius for each n ≤ n0".into());
        }
        for n in 1..=self.n0 {
            let (z, rad) = (self.center(n), self.radius(n));
            if !(rad > T::zero()) || (z - m2pi2(n)).abs() + rad > self.r * pi2 {
                return bad(format!("U_{n} is not inside D_r^{n}"));
            }
        }
        // beyond the explicit discs: |λ − μ| ≥ (|n² − m²| − 2r)π² and |n² − m²| ≥ 3
        // equality is admissible, so compare with a rounding allowance
        let slack = T::one() - T::lit(1e-12);
        if !(T::lit(3.0) * (pi2 - T::one() / self.rho) >= T::lit(2.0) * self.r * pi2 * slack) {
            return bad("separation fails for the standard discs".into());
        }
        let top = self.n0 + 2;
        for n in 1..=top {
            for m in n + 1..=top {
                let gap = (self.center(m) - self.center(n)) - self.radius(m) - self.radius(n);
                let need = T::from_usize_lossy(m * m - n * n) / self.rho;
                if !(gap > T::zero() && gap >= need * slack) {
                    return bad(format!("U_{n} and U_{m} violate the separation"));
                }
            }
        }
        Ok(())
    }
}

/// f_n(λ_n) = Π_{m≠n} (a_m − λ_n)/(b_m − λ_n) with a certified tail.
pub fn ratio_product<T: Real>(
    a: &PerturbedSequence<T>,
    b: &PerturbedSequence<T>,
    lambda_n: Complex<T>,
    n: usize,
    fam: &IsolatingFamily<T>,
) -> Result<ProductValue<T>> {
    if n == 0 {
        return Err(HillError::Domain("n must be at least 1".into()));
    }
    if !fam.contains(n, lambda_n) {
        return Err(HillError::Domain(format!("λ_{n} is not in U_{n}")));
    }
    let len = a.alpha.len().max(b.alpha.len()).max(n);
    for m in 1..=len {
        if !fam.contains(m, b.term(m)) {
            return Err(HillError::Domain(format!("b_{m} is not in U_{m}")));
        }
    }
    let pi2 = T::PI() * T::PI();
    if b.tail_c() / T::from_usize_lossy(len + 1).powf(b.tail.map_or(T::one(), |t| t.p))
        >= fam.r * pi2
    {
        return Err(HillError::Domain("tail of b leaves the isolating discs".into()));
    }
    let value = (1..=len).filter(|&m| m != n).fold(Complex::from(T::one()), |acc, m| {
        acc * (a.term(m) - lambda_n) / (b.term(m) - lambda_n)
    });
    // |a_{nm}| ≤ ρ|α_m − β_m|/(m² − n²) and m² − n² ≥ m²(1 − n²/(L+1)²) for m > L
    let tail_l1 = match (a.tail, b.tail) {
        (None, None) => T::zero(),
        (ta, tb) => {
            let p = match (ta, tb) {
                (Some(x), Some(y)) => x.p.min(y.p),
                (Some(x), None) | (None, Some(x)) => x.p,
                _ => unreachable!(),
            };
            let law = PowerLaw {
                c: a.tail_c() + b.tail_c(),
                p,
            };
            let nl = T::from_usize_lossy(n) / T::from_usize_lossy(len + 1);
            fam.rho * law.tail_sum(T::lit(2.0), len)? / (T::one() - nl * nl)
        }
    };
    Ok(ProductValue::new(value, tail_l1))
}

/// Π_{m≠n} (m²π² − λ)/(m²π²) from the sine product.
pub fn base_product_excluding<T: Real>(lambda: Complex<T>, n: usize) -> Complex<T> {
    let e = m2pi2::<T>(n);
    let d = lambda - e;
    if d.is_zero() {
        let sgn = if n % 2 == 0 { -T::one() } else { T::one() };
        return Complex::from(sgn / T::lit(2.0));
    }
    let w = lambda.sqrt();
    let g = if lambda.is_zero() {
        Complex::from(T::one())
    } else {
        w.sin() / w
    };
    g / (-d / e)
}

/// Π_{m≠n} (a_m − λ_n)/(m²π²), which tends to (−1)^{n+1}/2.
pub fn sine_normalized_product<T: Real>(
    a: &PerturbedSequence<T>,
    lambda_n: Complex<T>,
    n: usize,
) -> Result<ProductValue<T>> {
    if n == 0 {
        return Err(HillError::Domain("n must be at least 1".into()));
    }
    let len = a.alpha.len().max(n);
    let mut value = base_product_excluding(lambda_n, n);
    for m in (1..=len).filter(|&m| m != n) {
        let base = Complex::from(m2pi2::<T>(m)) - lambda_n;
        value = value * (Complex::from(T::one()) + a.perturbation(m) / base);
    }
    let tail_l1 = match a.tail {
        None => T::zero(),
        Some(law) => {
            // |m²π² − λ| ≥ m²π² − |λ| ≥ m²π²(1 − |λ|/((L+1)²π²)) for m > L
            let shrink = T::one() - lambda_n.norm() / m2pi2::<T>(len + 1);
            if !(shrink > T::zero()) {
                return Err(HillError::Domain("explicit part too short for the tail bound".into()));
            }
            law.tail_sum(T::lit(2.0), len)? / (T::PI() * T::PI() * shrink)
        }
    };
    Ok(ProductValue::new(value, tail_l1))
}

/// One row of a product-asymptotics check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductRow<T> {
    pub n: usize,
    pub value: Complex<T>,
    pub radius: T,
    /// n · |value − limit|.
    pub residual: T,
}

/// Rows of n·|Π_{m≠n}(a_m − λ_n)/(m²π²) − (−1)^{n+1}/2| for n in `ns`.
pub fn sine_product_check<T: Real>(
    a: &PerturbedSequence<T>,
    lambda: impl Fn(usize) -> Complex<T> + Sync,
    ns: &[usize],
) -> Result<Vec<ProductRow<T>>> {
    ns.par_iter()
        .map(|&n| {
            let p = sine_normalized_product(a, lambda(n), n)?;
            let sgn = if n % 2 == 0 { -T::one() } else { T::one() };
            let limit = Complex::from(sgn / T::lit(2.0));
            Ok(ProductRow {
                n,
                value: p.value,
                radius: p.radius,
                residual: T::from_usize_lossy(n) * ((p.value - limit).norm() + p.radius),
            })
        })
        .collect()
}

/// Rows of n·|f_n(λ_n) − 1| for n in `ns`.
pub fn ratio_product_check<T: Real>(
    a: &PerturbedSequence<T>,
    b: &PerturbedSequence<T>,
    lambda: impl Fn(usize) -> Complex<T> + Sync,
    fam: &IsolatingFamily<T>,
    ns: &[usize],
) -> Result<Vec<ProductRow<T>>> {
    ns.par_iter()
        .map(|&n| {
            let p = ratio_product(a, b, lambda(n), n, fam)?;
            Ok(ProductRow {
                n,
                value: p.value,
                radius: p.radius,
                residual: T::from_usize_lossy(n) * ((p.value - T::one()).norm() + p.radius),
            })
        })
        .collect()
}

/// The perturbation α_m = √6/(πm), which has ‖α‖_ℓ² = 1, stored for m ≤ len
/// with its 1/m tail law.
pub fn unit_harmonic_sequence<T: Real>(len: usize) -> PerturbedSequence<T> {
    let c = T::lit(6.0).sqrt() / T::PI();
    PerturbedSequence::from_fn(
        len,
        |m| Complex::from(c / T::from_usize_lossy(m)),
        Some(PowerLaw { c, p: T::one() }),
    )
}

/// n·|Π_{m≠n}(a_m − λ_n)/(m²π²) − (−1)^{n+1}/2| for the unit harmonic
/// perturbation and λ_n = n²π² + shift.
pub fn corollary24_check<T: Real>(ns: &[usize], shift: Complex<T>) -> Result<Vec<ProductRow<T>>> {
    let n_hi = ns.iter().copied().max().unwrap_or(1);
    let a = unit_harmonic_sequence::<T>(64 * n_hi);
    sine_product_check(&a, |n| Complex::from(m2pi2::<T>(n)) + shift, ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    #[test]
    fn hilbert_of_unit_vector() {
        let h = hilbert_transform(&[C::new(1.0, 0.0)], 6);
        assert_eq!(h[0], C::zero());
        for n in 2..=6 {
            let nf = n as f64;
            assert!((h[n - 1].re - (1.0 / (nf - 1.0) + 1.0 / (nf + 1.0))).abs() < 1e-15);
        }
        assert!(hilbert_transform(&[C::zero(); 4], 5).iter().all(|z| z.is_zero()));
    }

    #[test]
    fn monte_carlo_norm_is_seeded() {
        let a = hilbert_norm_check(20, 32, 7);
        let b = hilbert_norm_check(20, 32, 7);
        assert_eq!(a, b);
        assert!(a.passed());
    }

    #[test]
    fn sine_product_closed_form() {
        let lam = 1.0;
        let terms: Vec<C> = (1..=2000)
            .map(|m| C::new(-lam / (m as f64 * PI).powi(2), 0.0))
            .collect();
        let tail = PowerLaw { c: lam / (PI * PI), p: 2.0 };
        let p = product_eval(&terms, Some(tail)).unwrap();
        assert!(p.contains(C::new(1f64.sin(), 0.0)));
        assert!(p.radius < 1e-4);
        assert!(product_eval(&terms, Some(PowerLaw { c: 1.0, p: 1.0 })).is_err());
    }

    #[test]
    fn lemma_bound_holds() {
        let r = lemma_bound_check(200, 40, 3);
        assert_eq!(r.violations, 0);
        assert!(r.max_ratio > 0.0 && r.max_ratio <= 1.0);
    }

    #[test]
    fn unit_harmonic_norm() {
        let a = unit_harmonic_sequence::<f64>(1 << 16);
        let head: f64 = a.alpha.iter().map(|z| z.norm_sqr()).sum();
        // the remaining tail is about 6/(π² L)
        assert!((head + 6.0 / (PI * PI * 65536.0) - 1.0).abs() < 1e-8);
        let rows = corollary24_check(&[8, 16, 32], C::new(0.1, 0.0)).unwrap();
        assert!(rows.iter().all(|r| r.residual < 5.0));
    }

    #[test]
    fn empty_product() {
        let p = product_eval::<f64>(&[C::zero(); 5], None).unwrap();
        assert_eq!(p.value, C::new(1.0, 0.0));
        assert_eq!(p.radius, 0.0);
    }

    #[test]
    fn family_validation() {
        let f = IsolatingFamily::<f64>::standard(0.25).unwrap();
        assert!(f.contains(3, C::new(9.0 * PI * PI + 1.0, 0.5)));
        assert!(IsolatingFamily::<f64>::standard(1.6).is_err());
        assert!(IsolatingFamily::new(1, 0.25, 0.2, vec![PI * PI], vec![0.2]).is_ok());
        // disc reaching outside D_r^1
        assert!(IsolatingFamily::new(1, 0.25, 0.2, vec![PI * PI + 2.0], vec![0.9]).is_err());
    }

    #[test]
    fn equal_sequences_give_one() {
        let fam = IsolatingFamily::<f64>::standard(0.25).unwrap();
        let a = PerturbedSequence::from_fn(10, |m| C::new(1.0 / m as f64, 0.0), None);
        let p = ratio_product(&a, &a, C::new(16.0 * PI * PI + 0.3, 0.0), 4, &fam).unwrap();
        assert!((p.value - 1.0).norm() < 1e-14);
    }

    #[test]
    fn separation_violation_is_rejected() {
        let fam = IsolatingFamily::<f64>::standard(0.25).unwrap();
        let b = PerturbedSequence::from_fn(3, |m| C::new(if m == 2 { 5.0 } else { 0.0 }, 0.0), None);
        let a = PerturbedSequence::base();
        assert!(ratio_product(&a, &b, C::new(PI * PI, 0.0), 1, &fam).is_err());
    }
}

//! Truncated-matrix eigenvalue oracle in boundary-adapted bases.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;

use crate::error::{HillError, Result};
use crate::potential::Potential;
use crate::scalar::lex_cmp;

use super::Boundary;

type C64 = Complex<f64>;

/// ∫_0^1 cos(pπx) e^{2πimx} dx for p ≥ 0.
fn cos_exp_integral(p: i64, m: i64) -> C64 {
    if p % 2 == 0 {
        let h = p / 2;
        let hits = (m == h) as i32 + (m == -h) as i32;
        C64::new(0.5 * hits as f64, 0.0)
    } else {
        let (p, m) = (p as f64, m as f64);
        C64::new(0.0, (1.0 / (2.0 * m + p) + 1.0 / (2.0 * m - p)) / std::f64::consts::PI)
    }
}

/// Σ_m q̂_m ∫ cos(pπx) e^{2πimx} dx = ∫ q(x) cos(pπx) dx.
fn q_cos(q: &Potential<f64>, p: i64) -> C64 {
    q.coeffs()
        .iter()
        .map(|(m, c)| c * cos_exp_integral(p.abs(), *m))
        .sum()
}

fn assemble(q: &Potential<f64>, boundary: Boundary, modes: usize) -> DMatrix<C64> {
    let pi2 = std::f64::consts::PI.powi(2);
    match boundary {
        Boundary::Dirichlet => DMatrix::from_fn(modes, modes, |r, c| {
            let (j, k) = (r as i64 + 1, c as i64 + 1);
            let mut v = q_cos(q, j - k) - q_cos(q, j + k);
            if j == k {
                v += (j * j) as f64 * pi2;
            }
            v
        }),
        Boundary::Neumann => DMatrix::from_fn(modes + 1, modes + 1, |r, c| {
            let (j, k) = (r as i64, c as i64);
            let w = match (j == 0, k == 0) {
                (true, true) => 1.0,
                (true, false) | (false, true) => std::f64::consts::FRAC_1_SQRT_2,
                (false, false) => 1.0,
            };
            let mut v = (q_cos(q, j - k) + q_cos(q, j + k)) * w;
            if j == 0 && k == 0 {
                v = q_cos(q, 0);
            }
            if j == k {
                v += (j * j) as f64 * pi2;
            }
            v
        }),
        Boundary::Periodic => {
            let kk = modes as i64;
            DMatrix::from_fn(2 * modes + 1, 2 * modes + 1, |r, c| {
                let (j, k) = (r as i64 - kk, c as i64 - kk);
                let mut v = q.coeff(j - k);
                if j == k {
                    v += 4.0 * (j * j) as f64 * pi2;
                }
                v
            })
        }
        Boundary::Antiperiodic => {
            let kk = modes as i64 + 1;
            DMatrix::from_fn(2 * modes + 2, 2 * modes + 2, |r, c| {
                let (j, k) = (r as i64 - kk, c as i64 - kk);
                let mut v = q.coeff(j - k);
                if j == k {
                    v += ((2 * j + 1) * (2 * j + 1)) as f64 * pi2;
                }
                v
            })
        }
    }
}

/// All eigenvalues of the truncated operator, sorted (real order for real q,
/// lexicographic otherwise).
///
/// Bases: √2 sin(kπx) for Dirichlet, {1, √2 cos(kπx)} for Neumann,
/// e^{2πikx} (|k| ≤ modes) for periodic and e^{iπ(2k+1)x} for antiperiodic.
pub fn galerkin_oracle(q: &Potential<f64>, boundary: Boundary, modes: usize) -> Result<Vec<C64>> {
    if modes == 0 {
        return Err(HillError::Domain("oracle needs at least one mode".into()));
    }
    let m = assemble(q, boundary, modes);
    let mut ev: Vec<C64> = if q.is_real() {
        // Hermitian in every basis when q is real
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .map(|x| C64::new(*x, 0.0))
            .collect()
    } else {
        m.eigenvalues()
            .ok_or_else(|| HillError::Consistency("oracle eigensolver failed".into()))?
            .iter()
            .copied()
            .collect()
    };
    ev.sort_by(lex_cmp);
    Ok(ev)
}

/// Merged periodic and antiperiodic oracle spectrum λ_0, λ_1, λ_2, ….
pub fn galerkin_periodic_merged(q: &Potential<f64>, modes: usize) -> Result<Vec<C64>> {
    let mut ev = galerkin_oracle(q, Boundary::Periodic, modes)?;
    ev.extend(galerkin_oracle(q, Boundary::Antiperiodic, modes)?);
    ev.sort_by(lex_cmp);
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn two_cos() -> Potential<f64> {
        Potential::cos_term(C64::new(2.0, 0.0), 1).unwrap()
    }

    #[test]
    fn free_oracle_is_diagonal() {
        let q = Potential::<f64>::zero();
        let d = galerkin_oracle(&q, Boundary::Dirichlet, 8).unwrap();
        for (i, v) in d.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((v.re - n * n * PI * PI).abs() < 1e-10);
        }
        let p = galerkin_periodic_merged(&q, 8).unwrap();
        assert!(p[0].norm() < 1e-12);
        assert!((p[1].re - PI * PI).abs() < 1e-10 && (p[2].re - PI * PI).abs() < 1e-10);
    }

    #[test]
    fn self_convergence() {
        let q = two_cos();
        let a = galerkin_oracle(&q, Boundary::Dirichlet, 96).unwrap();
        let b = galerkin_oracle(&q, Boundary::Dirichlet, 128).unwrap();
        for n in 0..20 {
            assert!((a[n] - b[n]).norm() < 1e-9);
        }
    }

    #[test]
    fn neumann_and_dirichlet_interlace_with_periodic() {
        let q = two_cos();
        let d = galerkin_oracle(&q, Boundary::Dirichlet, 96).unwrap();
        let nm = galerkin_oracle(&q, Boundary::Neumann, 96).unwrap();
        let p = galerkin_periodic_merged(&q, 96).unwrap();
        assert!(nm[0].re - p[0].re < 1e-9);
        for n in 1..=10 {
            let (lo, hi) = (p[2 * n - 1].re, p[2 * n].re);
            for v in [d[n - 1].re, nm[n].re] {
                assert!(v >= lo - 1e-8 && v <= hi + 1e-8);
            }
        }
    }
}

//! WKB special solutions z_N = y1 + α_N(0,ν) y2 and their remainders
//! r_N = (2iν)^{N+1} (z_N − w_N), with α_N(x,ν) = iν + Σ_{k≤N} s_k(x)/(2iν)^k and
//! w_N = exp(∫_0^x α_N).

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use super::{check_tol, gauss_legendre_unit, integrate_fundamental};
use crate::diffpoly::{a_k, sk};
use crate::error::{HillError, Result};
use crate::fourier::FourierSeries;
use crate::potential::Potential;
use crate::scalar::{cpowi, Real};

/// z_N, w_N and r_N (with x-derivatives) at x = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbSolution<T> {
    pub order: usize,
    pub nu: Complex<T>,
    pub z_1: Complex<T>,
    pub dz_1: Complex<T>,
    pub w_1: Complex<T>,
    pub r_1: Complex<T>,
    pub dr_1: Complex<T>,
}

fn i_times<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(-z.im, z.re)
}

/// α_N(0, ν).
fn alpha_at_zero<T: Real>(q: &Potential<T>, order: usize, nu: Complex<T>) -> Complex<T> {
    let t = i_times(nu) * T::lit(2.0);
    (1..=order).fold(i_times(nu), |acc, k| {
        acc + sk(k).eval_at(q, T::zero()) / cpowi(t, k as u32)
    })
}

/// Special solution of order N at ν (ν ≠ 0).
pub fn wkb<T: Real>(q: &Potential<T>, order: usize, nu: Complex<T>, tol: T) -> Result<WkbSolution<T>> {
    if nu.is_zero() {
        return Err(HillError::Domain("wkb needs ν ≠ 0".into()));
    }
    let f = integrate_fundamental(q, nu * nu, tol)?;
    let t = i_times(nu) * T::lit(2.0);
    let alpha0 = alpha_at_zero(q, order, nu);
    let z_1 = f.y1_1 + alpha0 * f.y2_1;
    let dz_1 = f.dy1_1 + alpha0 * f.dy2_1;
    // ∫_0^1 α_N uses the exact means a_k
    let exponent = (1..=order).fold(i_times(nu), |acc, k| acc + a_k(k, q) / cpowi(t, k as u32));
    let w_1 = exponent.exp();
    let tn = cpowi(t, order as u32 + 1);
    Ok(WkbSolution {
        order,
        nu,
        z_1,
        dz_1,
        w_1,
        r_1: tn * (z_1 - w_1),
        // α_N is periodic, so α_N(1, ν) = α_N(0, ν)
        dr_1: tn * (dz_1 - alpha0 * w_1),
    })
}

/// Deterministic part of r_N(1, ±ν_n):
/// (−1)^n a_{N+1} + (−1)^{n+1} (±2inπ)^N q̂_{∓n} ± (−1)^n a_{N+2}/(2inπ).
pub fn remainder_prediction<T: Real>(q: &Potential<T>, order: usize, n: usize, plus: bool) -> Complex<T> {
    let sgn_n = if n % 2 == 0 { T::one() } else { -T::one() };
    let pm = if plus { T::one() } else { -T::one() };
    let ni = n as i64;
    let two_i_n_pi = Complex::new(T::zero(), T::TAU() * T::from_i64_lossy(ni));
    // ∫ q e^{±2inπx} dx = q̂_{∓n}
    let qhat = q.coeff(if plus { -ni } else { ni });
    a_k(order + 1, q) * sgn_n - cpowi(two_i_n_pi * pm, order as u32) * qhat * sgn_n
        + a_k(order + 2, q) * (pm * sgn_n) / two_i_n_pi
}

/// One row of a remainder check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderRow<T> {
    pub n: usize,
    /// +1 for ν_n, −1 for −ν_n.
    pub sign: i8,
    pub nu: Complex<T>,
    pub r: Complex<T>,
    pub predicted: Complex<T>,
    /// n · |r − predicted|.
    pub scaled: T,
}

/// Evaluates r_N(1, ±ν_n) against its prediction for each (n, ν_n).
pub fn remainder_asymptotics_check<T: Real>(
    q: &Potential<T>,
    order: usize,
    nu_seq: &[(usize, Complex<T>)],
    tol: T,
) -> Result<Vec<RemainderRow<T>>> {
    check_tol(tol)?;
    let jobs: Vec<(usize, Complex<T>, bool)> = nu_seq
        .iter()
        .flat_map(|&(n, nu)| [(n, nu, true), (n, nu, false)])
        .collect();
    jobs.par_iter()
        .map(|&(n, nu, plus)| {
            let v = if plus { nu } else { -nu };
            let w = wkb(q, order, v, tol)?;
            let predicted = remainder_prediction(q, order, n, plus);
            Ok(RemainderRow {
                n,
                sign: if plus { 1 } else { -1 },
                nu: v,
                r: w.r_1,
                predicted,
                scaled: T::from_usize_lossy(n) * (w.r_1 - predicted).norm(),
            })
        })
        .collect()
}

fn eval_series<T: Real>(s: &FourierSeries<Complex<T>>, x: T) -> Complex<T> {
    s.iter()
        .map(|(n, c)| *c * Complex::from_polar(T::one(), T::TAU() * T::from_i64_lossy(n) * x))
        .fold(Complex::zero(), |a, b| a + b)
}

/// ∫_0^x of a series with mean.
fn eval_primitive<T: Real>(s: &FourierSeries<Complex<T>>, x: T) -> Complex<T> {
    s.iter()
        .map(|(n, c)| {
            if n == 0 {
                *c * x
            } else {
                let k = Complex::new(T::zero(), T::TAU() * T::from_i64_lossy(n));
                *c * (Complex::from_polar(T::one(), T::TAU() * T::from_i64_lossy(n) * x) - T::one()) / k
            }
        })
        .fold(Complex::zero(), |a, b| a + b)
}

/// The forcing F = 2iν f_N(x, ν) of the remainder equation
/// r_N″ = (q − ν²) r_N + F, where
/// f_N = s_{N+1} w_N − Σ_{k=1}^N (Σ_{k≤l≤N} s_{N+k−l} s_l) w_N/(2iν)^k.
pub fn wkb_forcing<T: Real>(
    q: &Potential<T>,
    order: usize,
    nu: Complex<T>,
) -> impl Fn(T) -> Complex<T> + Send + Sync {
    let dens: Vec<FourierSeries<Complex<T>>> =
        (1..=order + 1).map(|k| sk(k).eval_density(q)).collect();
    let t = i_times(nu) * T::lit(2.0);
    let pair_sums: Vec<FourierSeries<Complex<T>>> = (1..=order)
        .map(|k| {
            (k..=order).fold(FourierSeries::zero(), |acc, l| {
                acc.add(&dens[order + k - l - 1].mul(&dens[l - 1]))
            })
        })
        .collect();
    move |x: T| {
        let mut expo = i_times(nu) * x;
        for k in 1..=order {
            expo = expo + eval_primitive(&dens[k - 1], x) / cpowi(t, k as u32);
        }
        let w = expo.exp();
        let mut f = eval_series(&dens[order], x) * w;
        for k in 1..=order {
            f = f - eval_series(&pair_sums[k - 1], x) * w / cpowi(t, k as u32);
        }
        t * f
    }
}

/// Bound (R²/|ν| + 4R³/|ν|² (1 + 1/|ν|)) ‖h‖ on |r(x, ν)| for
/// r″ = (q − ν²) r + h e^{iνx}, r(0) = r′(0) = 0, with R = exp(|Im ν| + ‖q‖).
pub fn forced_remainder_bound<T: Real>(q: &Potential<T>, nu: Complex<T>, h_norm: T) -> T {
    let r = (nu.im.abs() + q.sobolev_norm(0)).exp();
    let a = nu.norm();
    (r * r / a + T::lit(4.0) * r * r * r / (a * a) * (T::one() + T::one() / a)) * h_norm
}

/// L² norm on [0, 1] by composite 5-point Gauss–Legendre quadrature.
pub fn l2_norm_unit<T: Real>(f: &dyn Fn(T) -> Complex<T>, panels: usize) -> T {
    let (x, w) = gauss_legendre_unit(5);
    let h = T::one() / T::from_usize_lossy(panels);
    let mut acc = T::zero();
    for p in 0..panels {
        let x0 = T::from_usize_lossy(p) * h;
        for (xi, wi) in x.iter().zip(&w) {
            acc = acc + T::lit(*wi) * h * f(x0 + T::lit(*xi) * h).norm_sqr();
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_wkb_is_exact() {
        let q = Potential::<f64>::zero();
        for order in 0..3 {
            let w = wkb(&q, order, Complex::new(7.3, 0.0), 1e-12).unwrap();
            assert!((w.z_1 - Complex::new(0.0, 7.3).exp()).norm() < 1e-11);
            assert!(w.r_1.norm() < 1e-8);
        }
        assert!(wkb(&q, 1, Complex::zero(), 1e-12).is_err());
    }

    #[test]
    fn forcing_reproduces_remainder() {
        let q = Potential::cos_term(Complex::new(2.0, 0.0), 1).unwrap();
        let nu = Complex::new(16.0 * PI, 0.0);
        for order in 0..2 {
            let w = wkb(&q, order, nu, 1e-13).unwrap();
            let f = wkb_forcing(&q, order, nu);
            let (r, dr) = super::super::solve_forced(&q, nu * nu, &f, 1e-13).unwrap();
            assert!((r - w.r_1).norm() < 1e-6 * (1.0 + w.r_1.norm()), "{r} vs {}", w.r_1);
            assert!((dr - w.dr_1).norm() < 1e-5 * (1.0 + w.dr_1.norm()));
        }
    }
}

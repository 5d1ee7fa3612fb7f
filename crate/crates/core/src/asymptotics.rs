//! Expansion coefficients of the spectral asymptotics and the deterministic
//! right-hand sides they feed.
//!
//! With F(z) = Σ_l (−1)^l a_{2l+1} z^{2l+1} / 2^{2l+1}, the odd series
//! ρ(z) = Σ b_{2k+1} z^{2k+1} solves ρ = F(z / (π + zρ)), and
//! m_n = n²π² + Σ_{2≤2j≤N+1} c_{2j} n^{−2j} comes from squaring nπ + ρ(1/n).
//!
//! Writing 1/(π + zρ) = t/(1 + tzρ) with t = 1/π shows ρ(z) = R(z/π) for a
//! π-free series R, so everything here works over any ring that contains t.
//! [`PiLaurent`] is such a ring with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::diffpoly::{a_k, a_k_exact, TauPolynomial};
use crate::error::{HillError, Result};
use crate::potential::{Pairing, Potential};
use crate::scalar::Real;

/// Commutative ring with rational constants, enough for truncated series.
pub trait SeriesRing:
    Clone + PartialEq + fmt::Debug + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl<T: Real> SeriesRing for Complex<T> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::from(T::from_i64_lossy(num) / T::from_i64_lossy(den))
    }
}

impl SeriesRing for Complex<BigRational> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
}

/// Finite Laurent polynomial Σ_k c_k π^k with exact complex rational c_k.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiLaurent {
    terms: BTreeMap<i32, Complex<BigRational>>,
}

fn czero() -> Complex<BigRational> {
    Complex::new(BigRational::zero(), BigRational::zero())
}

impl PiLaurent {
    pub fn monomial(c: Complex<BigRational>, k: i32) -> Self {
        Self::from_terms([(k, c)])
    }

    /// 1/π.
    pub fn pi_inv() -> Self {
        Self::monomial(Complex::new(BigRational::one(), BigRational::zero()), -1)
    }

    fn from_terms(it: impl IntoIterator<Item = (i32, Complex<BigRational>)>) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            let e = terms.entry(k).or_insert_with(czero);
            *e = &*e + c;
        }
        terms.retain(|_, c: &mut Complex<BigRational>| !c.is_zero());
        Self { terms }
    }

    pub fn coeff(&self, k: i32) -> Complex<BigRational> {
        self.terms.get(&k).cloned().unwrap_or_else(czero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Complex<BigRational>)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// True when no π power appears with a nonzero imaginary coefficient.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        let pi = T::PI();
        self.terms
            .iter()
            .map(|(k, c)| {
                let f = |r: &BigRational| T::lit(r.to_f64().unwrap_or(f64::NAN));
                Complex::new(f(&c.re), f(&c.im)) * pi.powi(*k)
            })
            .fold(Complex::zero(), |a, b| a + b)
    }
}

impl From<&TauPolynomial> for PiLaurent {
    /// (2πi)^K = (2i)^K π^K.
    fn from(t: &TauPolynomial) -> Self {
        let two_i = Complex::new(BigRational::zero(), BigRational::from_integer(2.into()));
        Self::from_terms(t.terms.iter().map(|(k, c)| {
            let mut p = Complex::new(BigRational::one(), BigRational::zero());
            for _ in 0..*k {
                p = p * two_i.clone();
            }
            (*k as i32, c.clone() * p)
        }))
    }
}

impl Add for PiLaurent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_terms(self.terms.into_iter().chain(o.terms))
    }
}

impl Neg for PiLaurent {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_terms(self.terms.into_iter().map(|(k, c)| (k, -c)))
    }
}

impl Sub for PiLaurent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for PiLaurent {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Vec::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                out.push((i + j, a * b));
            }
        }
        Self::from_terms(out)
    }
}

impl Zero for PiLaurent {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for PiLaurent {
    fn one() -> Self {
        Self::monomial(Complex::new(BigRational::one(), BigRational::zero()), 0)
    }
}

impl SeriesRing for PiLaurent {
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::monomial(Complex::<BigRational>::from_ratio(num, den), 0)
    }
}

impl fmt::Display for PiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let coef = if c.im.is_zero() {
                    c.re.to_string()
                } else {
                    format!("({} + {}i)", c.re, c.im)
                };
                match k {
                    0 => coef,
                    1 => format!("{coef}*pi"),
                    _ => format!("{coef}*pi^{k}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Truncated power series multiplication, keeping `len` coefficients.
fn series_mul<C: SeriesRing>(a: &[C], b: &[C], len: usize) -> Vec<C> {
    let mut out = vec![C::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// F(w) for a series w without constant term.
fn compose_f<C: SeriesRing>(a_odd: &[C], w: &[C], len: usize) -> Vec<C> {
    let w2 = series_mul(w, w, len);
    let mut pow = w.to_vec();
    let mut out = vec![C::zero(); len];
    let mut den = 2i64;
    for (l, a) in a_odd.iter().enumerate() {
        if 2 * l + 1 >= len {
            break;
        }
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let c = a.clone() * C::from_ratio(sign, den);
        for (o, p) in out.iter_mut().zip(&pow) {
            *o = o.clone() + c.clone() * p.clone();
        }
        pow = series_mul(&pow, &w2, len);
        den *= 4;
    }
    out
}

/// z / (π + zρ(z)) = tz / (1 + tzρ(z)) truncated to `len` terms.
fn argument<C: SeriesRing>(rho: &[C], t: &C, len: usize) -> Vec<C> {
    let mut g = vec![C::zero(); len];
    for k in 1..len {
        g[k] = t.clone() * rho[k - 1].clone();
    }
    let neg_g: Vec<C> = g.iter().map(|x| -x.clone()).collect();
    let mut inv = vec![C::zero(); len];
    inv[0] = C::one();
    let mut term = inv.clone();
    for _ in 1..len {
        term = series_mul(&term, &neg_g, len);
        for (i, x) in inv.iter_mut().zip(&term) {
            *i = i.clone() + x.clone();
        }
    }
    let mut w = vec![C::zero(); len];
    for k in 1..len {
        w[k] = t.clone() * inv[k - 1].clone();
    }
    w
}

/// All coefficients ρ_0..ρ_{2K+1} of ρ, given a_odd[l] = a_{2l+1} and t = 1/π.
pub fn rho_series<C: SeriesRing>(a_odd: &[C], k_max: usize, pi_inv: &C) -> Vec<C> {
    let len = 2 * k_max + 2;
    let mut rho = vec![C::zero(); len];
    // coefficient k of the update only reads coefficients < k of ρ
    for _ in 0..len {
        rho = compose_f(a_odd, &argument(&rho, pi_inv, len), len);
    }
    rho
}

/// b_1, b_3, …, b_{2K+1}.
pub fn rho_coeffs<C: SeriesRing>(a_odd: &[C], k_max: usize, pi_inv: &C) -> Vec<C> {
    rho_series(a_odd, k_max, pi_inv).into_iter().skip(1).step_by(2).collect()
}

/// Coefficients of G(z, ρ(z)) = ρ(z) − F(z/(π + zρ(z))) through order 2K+1.
pub fn composition_residual<C: SeriesRing>(a_odd: &[C], rho: &[C], pi_inv: &C) -> Vec<C> {
    let len = rho.len();
    let f = compose_f(a_odd, &argument(rho, pi_inv, len), len);
    rho.iter().zip(f).map(|(r, v)| r.clone() - v).collect()
}

/// c_{2j} for 2 ≤ 2j ≤ N+1 from b_odd[k] = b_{2k+1}:
/// c_{2j} = 2π b_{2j+1} + Σ_{k+k′=j−1} b_{2k+1} b_{2k′+1}.
pub fn mn_coeffs<C: SeriesRing>(b_odd: &[C], order: usize, two_pi: &C) -> Result<Vec<C>> {
    if b_odd.first().is_some_and(|b| !b.is_zero()) {
        return Err(HillError::Domain("mn_coeffs needs b_1 = 0".into()));
    }
    let b = |k: usize| b_odd.get(k).cloned().unwrap_or_else(C::zero);
    Ok((1..=(order + 1) / 2)
        .map(|j| {
            (0..j).fold(two_pi.clone() * b(j), |acc, k| acc + b(k) * b(j - 1 - k))
        })
        .collect())
}

/// Theorem-specific deterministic predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Kappa,
    Mu,
    Eta,
    Tau,
    LambdaPair,
    LambdaReal,
    Gap,
    TauMinusMu,
}

impl std::str::FromStr for Quantity {
    type Err = HillError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "kappa" => Self::Kappa,
            "mu" => Self::Mu,
            "eta" => Self::Eta,
            "tau" => Self::Tau,
            "lambda_pair" => Self::LambdaPair,
            "lambda_real" => Self::LambdaReal,
            "gap" => Self::Gap,
            "tau_minus_mu" => Self::TauMinusMu,
            _ => return Err(HillError::Parse(format!("unknown quantity {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction<T> {
    Value(Complex<T>),
    /// Unordered pair; `Value`-like consumers should match optimally.
    Pair(Complex<T>, Complex<T>),
}

impl<T: Real> Prediction<T> {
    pub fn value(&self) -> Option<Complex<T>> {
        match self {
            Prediction::Value(v) => Some(*v),
            Prediction::Pair(..) => None,
        }
    }
}

/// a, b and c coefficients of order N for one potential.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticModel<T: Real> {
    pub order: usize,
    /// a_{2l+1} for 1 ≤ 2l+1 ≤ N+2.
    pub a_odd: Vec<Complex<T>>,
    /// b_{2k+1} for 1 ≤ 2k+1 ≤ N+2.
    pub b_odd: Vec<Complex<T>>,
    /// c_{2j} for 2 ≤ 2j ≤ N+1.
    pub c_even: Vec<Complex<T>>,
    pub potential: Potential<T>,
}

fn odd_count(order: usize) -> usize {
    order.div_ceil(2) + 1
}

impl<T: Real> AsymptoticModel<T> {
    pub fn new(q: &Potential<T>, order: usize) -> Result<Self> {
        let n_odd = odd_count(order);
        let a_odd: Vec<Complex<T>> = (0..n_odd).map(|l| a_k(2 * l + 1, q)).collect();
        let pi_inv = Complex::from(T::one() / T::PI());
        let b_odd = rho_coeffs(&a_odd, n_odd - 1, &pi_inv);
        let c_even = mn_coeffs(&b_odd, order, &Complex::from(T::TAU()))?;
        Ok(Self {
            order,
            a_odd,
            b_odd,
            c_even,
            potential: q.clone(),
        })
    }

    /// m_n = n²π² + Σ_{2≤2j≤N+1} c_{2j}/n^{2j}.
    pub fn m_n(&self, n: usize) -> Complex<T> {
        let nf = T::from_usize_lossy(n);
        let inv2 = T::one() / (nf * nf);
        let mut p = T::one();
        let mut out = Complex::from(nf * nf * T::PI() * T::PI());
        for c in &self.c_even {
            p = p * inv2;
            out = out + *c * p;
        }
        out
    }

    pub fn predict(&self, what: Quantity, n: usize) -> Result<Prediction<T>> {
        if n == 0 {
            return Err(HillError::Domain("predictions need n ≥ 1".into()));
        }
        let q = &self.potential;
        let ni = n as i64;
        let cos = q.pairing(Pairing::Cos(ni))?;
        let m = self.m_n(n);
        let need_real = || {
            if q.is_real() {
                Ok(())
            } else {
                Err(HillError::Domain(format!("{what:?} prediction needs a real potential")))
            }
        };
        Ok(match what {
            Quantity::Kappa => {
                let sin = q.pairing(Pairing::Sin(ni))?;
                Prediction::Value(sin / (T::TAU() * T::from_usize_lossy(n)))
            }
            Quantity::Mu => Prediction::Value(m - cos),
            Quantity::Eta => Prediction::Value(m + cos),
            Quantity::Tau => Prediction::Value(m),
            Quantity::TauMinusMu => Prediction::Value(cos),
            Quantity::LambdaPair => {
                let s = (q.coeff(ni) * q.coeff(-ni)).sqrt();
                Prediction::Pair(m - s, m + s)
            }
            Quantity::LambdaReal => {
                need_real()?;
                let a = q.coeff(ni).norm();
                Prediction::Pair(m - a, m + a)
            }
            Quantity::Gap => {
                need_real()?;
                Prediction::Value(Complex::from(T::lit(2.0) * q.coeff(ni).norm()))
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let arr = |v: &[Complex<T>]| -> Value {
            v.iter()
                .map(|z| json!([z.re.to_f64(), z.im.to_f64()]))
                .collect()
        };
        json!({
            "N": self.order,
            "potential_hash": self.potential.fingerprint(),
            "a_odd": arr(&self.a_odd),
            "b_odd": arr(&self.b_odd),
            "c_even": arr(&self.c_even),
        })
    }
}

/// Exact mirror of [`AsymptoticModel`] for rational potentials.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactModel {
    pub order: usize,
    pub a_odd: Vec<PiLaurent>,
    pub b_odd: Vec<PiLaurent>,
    pub c_even: Vec<PiLaurent>,
}

impl ExactModel {
    pub fn new(q: &Potential<BigRational>, order: usize) -> Result<Self> {
        let n_odd = odd_count(order);
        let a_odd: Vec<PiLaurent> = (0..n_odd)
            .map(|l| PiLaurent::from(&a_k_exact(2 * l + 1, q)))
            .collect();
        let b_odd = rho_coeffs(&a_odd, n_odd - 1, &PiLaurent::pi_inv());
        let two_pi = PiLaurent::monomial(Complex::<BigRational>::from_ratio(2, 1), 1);
        let c_even = mn_coeffs(&b_odd, order, &two_pi)?;
        Ok(Self {
            order,
            a_odd,
            b_odd,
            c_even,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::rational;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn c(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn zero_a_gives_zero_b() {
        let b = rho_coeffs(&[c(0.0); 4], 3, &c(1.0 / PI));
        assert!(b.iter().all(|x| x.norm() == 0.0));
        let cc = mn_coeffs(&b, 5, &c(2.0 * PI)).unwrap();
        assert!(cc.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn b3_closed_form() {
        let a3 = 1.7;
        let b = rho_coeffs(&[c(0.0), c(a3)], 1, &c(1.0 / PI));
        assert_eq!(b[0], c(0.0));
        assert!((b[1].re + a3 / (8.0 * PI.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn composition_vanishes_exactly() {
        let a: Vec<Complex<BigRational>> = [(0, 1), (3, 2), (-5, 7), (1, 3), (2, 9)]
            .iter()
            .map(|&(n, d)| Complex::new(rational(n, d), rational(d, 11)))
            .collect();
        let t = Complex::new(rational(2, 5), rational(0, 1));
        let rho = rho_series(&a, 4, &t);
        for r in composition_residual(&a, &rho, &t) {
            assert!(r.is_zero());
        }
        // oddness
        for k in (0..rho.len()).step_by(2) {
            assert!(rho[k].is_zero(), "ρ_{k}");
        }
    }

    #[test]
    fn b1_must_vanish() {
        assert!(mn_coeffs(&[c(0.1)], 3, &c(2.0 * PI)).is_err());
    }

    #[test]
    fn squaring_by_hand() {
        // b_3 only: c_2 = 2πb_3, c_4 = 2πb_5 = 0, c_6 = b_3²
        let b = [c(0.0), c(0.3), c(0.0), c(0.0)];
        let cc = mn_coeffs(&b, 5, &c(2.0 * PI)).unwrap();
        assert_eq!(cc.len(), 3);
        assert!((cc[0].re - 2.0 * PI * 0.3).abs() < 1e-15);
        assert!(cc[1].norm() < 1e-15);
        assert!((cc[2].re - 0.09).abs() < 1e-15);
    }

    #[test]
    fn two_cos_model() {
        let q = Potential::cos_term(c(2.0), 1).unwrap();
        let m = AsymptoticModel::new(&q, 3).unwrap();
        assert!((m.a_odd[1].re + 2.0).abs() < 1e-13);
        assert!((m.c_even[0].re - 1.0 / (2.0 * PI * PI)).abs() < 1e-14);
        let m4 = m.m_n(4);
        let expect = 16.0 * PI * PI + m.c_even[0].re / 16.0 + m.c_even[1].re / 256.0;
        assert!((m4.re - expect).abs() < 1e-12);
        let g = m.predict(Quantity::Gap, 1).unwrap().value().unwrap();
        assert!((g.re - 2.0).abs() < 1e-14);
        let mu = AsymptoticModel::new(&q, 0).unwrap().predict(Quantity::Mu, 1).unwrap();
        assert!((mu.value().unwrap().re - (PI * PI - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn m_n_empty_range() {
        let q = Potential::cos_term(c(2.0), 1).unwrap();
        for order in 0..=0 {
            let m = AsymptoticModel::new(&q, order).unwrap();
            assert!(m.c_even.is_empty());
            assert_eq!(m.m_n(3), c(9.0 * PI * PI));
        }
        assert_eq!(AsymptoticModel::new(&q, 1).unwrap().c_even.len(), 1);
    }

    #[test]
    fn kappa_prediction_for_sine() {
        let q = Potential::sin_term(c(1.0), 1).unwrap();
        let m = AsymptoticModel::new(&q, 0).unwrap();
        let k = m.predict(Quantity::Kappa, 1).unwrap().value().unwrap();
        assert!((k.re - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn reality_checks() {
        let q = Potential::exp_term(C::new(0.3, 0.1), 1).unwrap();
        let m = AsymptoticModel::new(&q, 2).unwrap();
        assert!(m.predict(Quantity::Gap, 1).is_err());
        assert!(m.predict(Quantity::LambdaReal, 1).is_err());
        assert!(m.predict(Quantity::LambdaPair, 1).is_ok());
    }

    #[test]
    fn exact_matches_float() {
        let qr = Potential::from_rational([
            (1, rational(1, 1), rational(1, 3)),
            (-1, rational(1, 1), rational(-1, 3)),
            (2, rational(-1, 2), rational(0, 1)),
            (-2, rational(-1, 2), rational(0, 1)),
        ])
        .unwrap();
        let ex = ExactModel::new(&qr, 5).unwrap();
        let fl = AsymptoticModel::new(&qr.to_f64(), 5).unwrap();
        for (e, f) in ex.c_even.iter().zip(&fl.c_even) {
            let v: C = e.to_complex();
            assert!((v - f).norm() < 1e-12 * (1.0 + f.norm()), "{e} vs {f}");
            assert!(e.is_real());
        }
    }
}

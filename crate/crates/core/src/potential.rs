//! Zero-mean, band-limited periodic potentials q(x) = Σ_{n≠0} q̂_n e^{2πinx}.
//!
//! Pairing convention used by every predictor in the crate:
//! ⟨q, e^{2πinx}⟩ := ∫ q e^{-2πinx} dx = q̂_n, and the cosine and sine pairings are
//! the literal integrals ∫ q cos(2πnx) dx and ∫ q sin(2πnx) dx.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HillError, Result};
use crate::fourier::{FourierSeries, Ring};
use crate::scalar::{cpowi, two_pi_i, Real};

/// Which test function q is paired against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// ⟨q, e^{2πinx}⟩ = q̂_n.
    Exp(i64),
    /// ∫ q cos(2πnx) dx, n ≥ 1.
    Cos(i64),
    /// ∫ q sin(2πnx) dx, n ≥ 1.
    Sin(i64),
}

/// Finite Fourier representation of a zero-mean potential.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    coeffs: BTreeMap<i64, Complex<T>>,
    bandwidth: u64,
    is_real: bool,
}

impl<T> Potential<T>
where
    T: Ring,
{
    /// Builds a potential from (n, q̂_n) pairs. Repeated frequencies are summed and
    /// exact zeros dropped. A nonzero mean coefficient is rejected.
    pub fn new(coeffs: impl IntoIterator<Item = (i64, Complex<T>)>) -> Result<Self> {
        let series = FourierSeries::from_coeffs(coeffs);
        if !series.coeff(0).is_zero() {
            return Err(HillError::Domain(
                "potential must have zero mean (q̂_0 = 0)".into(),
            ));
        }
        let coeffs: BTreeMap<i64, Complex<T>> =
            series.iter().map(|(n, c)| (n, c.clone())).collect();
        let bandwidth = coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0).max(1);
        let is_real = coeffs
            .iter()
            .all(|(n, c)| coeffs.get(&-n).is_some_and(|d| *d == c.conj()));
        Ok(Self {
            coeffs,
            bandwidth,
            is_real,
        })
    }

    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
            bandwidth: 1,
            is_real: true,
        }
    }

    /// `amp · cos(2πkx)`.
    pub fn cos_term(amp: Complex<T>, k: i64) -> Result<Self> {
        let half = amp / Self::two();
        Self::new([(k, half.clone()), (-k, half)])
    }

    /// `amp · sin(2πkx)`.
    pub fn sin_term(amp: Complex<T>, k: i64) -> Result<Self> {
        // amp/(2i) e^{2πikx} − amp/(2i) e^{−2πikx}
        let c = amp * Complex::new(T::zero(), -T::one()) / Self::two();
        Self::new([(k, c.clone()), (-k, -c)])
    }

    /// `amp · e^{2πikx}`.
    pub fn exp_term(amp: Complex<T>, k: i64) -> Result<Self> {
        Self::new([(k, amp)])
    }

    fn two() -> Complex<T> {
        Complex::new(T::one() + T::one(), T::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .chain(other.coeffs.iter())
                .map(|(n, c)| (*n, c.clone())),
        )
        .expect("sum of zero-mean potentials has zero mean")
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|(n, c)| (*n, c.clone() * s.clone())))
            .expect("scaling preserves zero mean")
    }

    /// q̂_n, zero when not stored.
    pub fn coeff(&self, n: i64) -> Complex<T> {
        self.coeffs.get(&n).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex<T>> {
        &self.coeffs
    }

    pub fn bandwidth(&self) -> u64 {
        self.bandwidth
    }

    /// True iff q̂_{−n} = conj(q̂_n) holds exactly for every stored n.
    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for real potentials that are even in x, i.e. q̂_n = q̂_{−n} real.
    pub fn is_even_real(&self) -> bool {
        self.is_real
            && self
                .coeffs
                .iter()
                .all(|(n, c)| c.im.is_zero() && self.coeff(-n) == *c)
    }

    /// Exact pairing against exp/cos/sin test functions.
    pub fn pairing(&self, mode: Pairing) -> Result<Complex<T>> {
        match mode {
            Pairing::Exp(n) => Ok(self.coeff(n)),
            Pairing::Cos(n) | Pairing::Sin(n) if n <= 0 => Err(HillError::Domain(format!(
                "cos/sin pairing needs n ≥ 1, got {n}"
            ))),
            Pairing::Cos(n) => Ok((self.coeff(n) + self.coeff(-n)) / Self::two()),
            // ∫ q sin(2πnx) dx = (q̂_{−n} − q̂_n)/(2i) = i(q̂_n − q̂_{−n})/2
            Pairing::Sin(n) => Ok((self.coeff(n) - self.coeff(-n))
                * Complex::new(T::zero(), T::one())
                / Self::two()),
        }
    }

    /// Coefficients as a Fourier series.
    pub fn series(&self) -> FourierSeries<Complex<T>> {
        FourierSeries::from_coeffs(self.coeffs.iter().map(|(n, c)| (*n, c.clone())))
    }
}

impl<T: Real> Potential<T> {
    /// ‖q‖_N = (Σ |n|^{2N} |q̂_n|²)^{1/2}.
    pub fn sobolev_norm(&self, n_order: u32) -> T {
        self.coeffs
            .iter()
            .map(|(n, c)| {
                let w = T::from_u64(n.unsigned_abs()).unwrap().powi(2 * n_order as i32);
                w * c.norm_sqr()
            })
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Σ |q̂_n|, an upper bound for sup |q|.
    pub fn coeff_l1(&self) -> T {
        self.coeffs
            .values()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn evaluate(&self, x: T) -> Complex<T> {
        self.coeffs
            .iter()
            .map(|(n, c)| *c * Complex::from_polar(T::one(), T::TAU() * T::from_i64_lossy(*n) * x))
            .fold(Complex::zero(), |a, b| a + b)
    }

    /// k-th derivative: q̂_n ↦ (2πin)^k q̂_n.
    pub fn derivative(&self, k: u32) -> Potential<T> {
        let tau = two_pi_i::<T>();
        Potential::new(
            self.coeffs
                .iter()
                .map(|(n, c)| (*n, *c * cpowi(tau * T::from_i64_lossy(*n), k))),
        )
        .expect("derivative keeps zero mean")
    }

    /// The translate x ↦ q(x + t): q̂_n ↦ q̂_n e^{2πint}.
    pub fn translate(&self, t: T) -> Potential<T> {
        let mut out = Potential::new(self.coeffs.iter().map(|(n, c)| {
            (*n, *c * Complex::from_polar(T::one(), T::TAU() * T::from_i64_lossy(*n) * t))
        }))
        .expect("translation keeps zero mean");
        // Rounding can break exact conjugate symmetry; restore it for real input.
        if self.is_real {
            out.symmetrize();
        }
        out
    }

    fn symmetrize(&mut self) {
        let keys: Vec<i64> = self.coeffs.keys().copied().filter(|n| *n > 0).collect();
        for n in keys {
            let c = self.coeff(n);
            self.coeffs.insert(-n, c.conj());
        }
        self.is_real = true;
    }

    /// Converts coefficients to another float precision.
    pub fn cast<U: Real>(&self) -> Potential<U> {
        let mut out = Potential::new(
            self.coeffs
                .iter()
                .map(|(n, c)| (*n, crate::scalar::cast_complex::<T, U>(*c))),
        )
        .expect("cast keeps zero mean");
        if self.is_real {
            out.symmetrize();
        }
        out
    }

    /// Lossless-for-f64 JSON descriptor.
    pub fn descriptor(&self) -> PotentialDescriptor {
        PotentialDescriptor {
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| CoeffEntry {
                    n: *n,
                    re: c.re.to_f64().unwrap(),
                    im: c.im.to_f64().unwrap(),
                })
                .collect(),
            real: self.is_real,
        }
    }

    pub fn from_descriptor(d: &PotentialDescriptor) -> Result<Self> {
        let p = Potential::new(d.coeffs.iter().map(|e| {
            (
                e.n,
                Complex::new(T::lit(e.re), T::lit(e.im)),
            )
        }))?;
        if d.real && !p.is_real {
            return Err(HillError::Domain(
                "descriptor marked real but coefficients are not conjugate-symmetric".into(),
            ));
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.descriptor()).expect("descriptor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: PotentialDescriptor =
            serde_json::from_str(s).map_err(|e| HillError::Parse(e.to_string()))?;
        Self::from_descriptor(&d)
    }

    /// SHA-256 of the canonical JSON descriptor, hex encoded.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Potential<BigRational> {
    /// Exact potential from rational (n, re, im) triples.
    pub fn from_rational(
        coeffs: impl IntoIterator<Item = (i64, BigRational, BigRational)>,
    ) -> Result<Self> {
        Self::new(coeffs.into_iter().map(|(n, re, im)| (n, Complex::new(re, im))))
    }

    /// Exact value of ∫ q² = Σ q̂_n q̂_{−n}.
    pub fn integral_of_square(&self) -> Complex<BigRational> {
        self.series().mean_of_product(&self.series())
    }

    pub fn to_f64(&self) -> Potential<f64> {
        use num_traits::ToPrimitive;
        let conv = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let mut p = Potential::new(
            self.coeffs
                .iter()
                .map(|(n, c)| (*n, Complex::new(conv(&c.re), conv(&c.im)))),
        )
        .expect("zero mean preserved");
        if self.is_real {
            p.symmetrize();
        }
        p
    }
}

impl<T: Ring> Default for Potential<T> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Serialized form `{"coeffs": [{"n", "re", "im"}, ...], "real": bool}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialDescriptor {
    pub coeffs: Vec<CoeffEntry>,
    pub real: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

/// Rational `a` as an exact complex coefficient.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cos() -> Potential<f64> {
        Potential::cos_term(Complex::new(2.0, 0.0), 1).unwrap()
    }

    #[test]
    fn sobolev_norms_of_two_cos() {
        let q = two_cos();
        assert!((q.sobolev_norm(0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((q.sobolev_norm(2) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Potential::<f64>::zero().sobolev_norm(3), 0.0);
    }

    #[test]
    fn pairings() {
        let q = two_cos();
        assert!((q.pairing(Pairing::Cos(1)).unwrap() - 1.0).norm() < 1e-15);
        assert!(q.pairing(Pairing::Sin(1)).unwrap().norm() < 1e-15);
        let s = Potential::sin_term(Complex::new(1.0, 0.0), 1).unwrap();
        assert!((s.pairing(Pairing::Sin(1)).unwrap() - 0.5).norm() < 1e-15);
        assert!(s.pairing(Pairing::Cos(0)).is_err());
    }

    #[test]
    fn evaluation_and_derivatives() {
        let q = two_cos();
        assert!((q.evaluate(0.0) - 2.0).norm() < 1e-15);
        assert!(q.evaluate(0.25).norm() < 1e-15);
        let s = Potential::sin_term(Complex::new(1.0, 0.0), 1).unwrap();
        let ds = s.derivative(1);
        let expect = Potential::cos_term(Complex::new(std::f64::consts::TAU, 0.0), 1).unwrap();
        for n in [-1, 1] {
            assert!((ds.coeff(n) - expect.coeff(n)).norm() < 1e-13);
        }
        let d2 = q.derivative(2);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((d2.coeff(1) - (-4.0 * pi2)).norm() < 1e-12);
        assert_eq!(q.derivative(0), q);
    }

    #[test]
    fn nonzero_mean_is_rejected() {
        assert!(Potential::new([(0, Complex::new(1.0, 0.0))]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let q = two_cos().add(&Potential::sin_term(Complex::new(0.3, 0.0), 3).unwrap());
        let back = Potential::<f64>::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
        assert_eq!(back.fingerprint(), q.fingerprint());
    }

    #[test]
    fn reality_and_evenness() {
        assert!(two_cos().is_even_real());
        let s = Potential::sin_term(Complex::new(1.0, 0.0), 1).unwrap();
        assert!(s.is_real() && !s.is_even_real());
        let c = Potential::sin_term(Complex::new(0.0, 0.05), 1).unwrap();
        assert!(!c.is_real());
    }
}

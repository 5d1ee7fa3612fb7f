//! Finite Fourier series Σ c_n e^{2πinx} over an arbitrary coefficient ring.

use std::collections::BTreeMap;
use std::ops::Neg;

use num_traits::Num;

/// Coefficient ring used by the exact and floating paths alike.
pub trait Ring: Clone + Num + Neg<Output = Self> + PartialEq + std::fmt::Debug {}

impl<R> Ring for R where R: Clone + Num + Neg<Output = R> + PartialEq + std::fmt::Debug {}

/// Sparse trigonometric polynomial; the mean (n = 0) is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries<C> {
    coeffs: BTreeMap<i64, C>,
}

impl<C: Ring> Default for FourierSeries<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Ring> FourierSeries<C> {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs([(0, c)])
    }

    /// Builds a series, dropping exact zeros and merging repeated frequencies.
    pub fn from_coeffs(it: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut s = Self::zero();
        for (n, c) in it {
            s.add_term(n, c);
        }
        s
    }

    fn add_term(&mut self, n: i64, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(n).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn coeff(&self, n: i64) -> C {
        self.coeffs.get(&n).cloned().unwrap_or_else(C::zero)
    }

    pub fn mean(&self) -> C {
        self.coeff(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |n| with a nonzero coefficient (0 for constants and zero).
    pub fn bandwidth(&self) -> u64 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_term(n, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_coeffs(self.iter().map(|(n, c)| (n, c.clone() * s.clone())))
    }

    /// Pointwise product of the represented functions (coefficient convolution).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::<i64, C>::new();
        for (n, a) in self.iter() {
            for (m, b) in other.iter() {
                let slot = out.entry(n + m).or_insert_with(C::zero);
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out)
    }

    /// Mean of the product, ∫ f g, without forming the full convolution.
    pub fn mean_of_product(&self, other: &Self) -> C {
        let mut acc = C::zero();
        for (n, a) in self.iter() {
            if let Some(b) = other.coeffs.get(&-n) {
                acc = acc + a.clone() * b.clone();
            }
        }
        acc
    }

    pub fn map<D: Ring>(&self, f: impl Fn(i64, &C) -> D) -> FourierSeries<D> {
        FourierSeries::from_coeffs(self.iter().map(|(n, c)| (n, f(n, c))))
    }
}

//! Exact differential polynomials in q, the densities s_k and their integrals a_k.
//!
//! The densities follow s_1 = q, s_2 = −q′ and
//! s_{k+1} = −∂s_k − Σ_{j=1}^{k−1} s_{k−j} s_j.
//!
//! Evaluation on a potential is graded by the total derivative order K: a factor
//! ∂^k q contributes the series n^k q̂_n and the whole monomial picks up (2πi)^K.
//! The exact path keeps that grading, so a vanishing integral is certified
//! independently of π.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{HillError, Result};
use crate::fourier::{FourierSeries, Ring};
use crate::potential::Potential;
use crate::scalar::{cpowi, two_pi_i, Real};

/// Default maximum depth for symbolic densities.
pub const DEFAULT_MAX_DEPTH: usize = 12;

/// `coeff · ∏ ∂^{orders[i]} q` with `orders` sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffMonomial {
    pub coeff: BigRational,
    pub orders: Vec<u32>,
}

impl DiffMonomial {
    /// Twice the isobaric degree: q counts 2, each derivative counts 1.
    pub fn twice_degree(&self) -> u32 {
        2 * self.orders.len() as u32 + self.orders.iter().sum::<u32>()
    }

    pub fn max_order(&self) -> u32 {
        self.orders.iter().copied().max().unwrap_or(0)
    }
}

/// Isobaric degree of a differential polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsobaricDegree {
    /// All monomials share the degree `twice / 2`.
    Homogeneous { twice: u32 },
    Inhomogeneous,
}

impl fmt::Display for IsobaricDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsobaricDegree::Homogeneous { twice } if twice % 2 == 0 => write!(f, "{}", twice / 2),
            IsobaricDegree::Homogeneous { twice } => write!(f, "{twice}/2"),
            IsobaricDegree::Inhomogeneous => write!(f, "inhomogeneous"),
        }
    }
}

/// Differential polynomial in merged canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffPolynomial {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The polynomial `c · ∂^k q`.
    pub fn derivative_of_q(k: u32, c: BigRational) -> Self {
        Self::from_monomials([DiffMonomial {
            coeff: c,
            orders: vec![k],
        }])
    }

    pub fn q() -> Self {
        Self::derivative_of_q(0, BigRational::one())
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = DiffMonomial>) -> Self {
        let mut p = Self::zero();
        for m in ms {
            let mut orders = m.orders;
            orders.sort_unstable();
            p.add_term(orders, m.coeff);
        }
        p
    }

    fn add_term(&mut self, orders: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(orders.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&orders);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> Vec<DiffMonomial> {
        self.terms
            .iter()
            .map(|(o, c)| DiffMonomial {
                coeff: c.clone(),
                orders: o.clone(),
            })
            .collect()
    }

    pub fn coeff_of(&self, orders: &[u32]) -> BigRational {
        let mut o = orders.to_vec();
        o.sort_unstable();
        self.terms.get(&o).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (o, c) in &other.terms {
            out.add_term(o.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(o, c)| (o.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (oa, ca) in &self.terms {
            for (ob, cb) in &other.terms {
                let mut o = oa.clone();
                o.extend_from_slice(ob);
                o.sort_unstable();
                out.add_term(o, ca * cb);
            }
        }
        out
    }

    /// ∂_x by the Leibniz rule.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (o, c) in &self.terms {
            for i in 0..o.len() {
                let mut d = o.clone();
                d[i] += 1;
                d.sort_unstable();
                out.add_term(d, c.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to the jet variable ∂^j q.
    pub fn partial(&self, j: u32) -> Self {
        let mut out = Self::zero();
        for (o, c) in &self.terms {
            let m = o.iter().filter(|&&k| k == j).count();
            if m == 0 {
                continue;
            }
            let mut rest = o.clone();
            let at = rest.iter().position(|&k| k == j).expect("present");
            rest.remove(at);
            out.add_term(rest, c * BigRational::from_integer(BigInt::from(m)));
        }
        out
    }

    /// Euler operator Σ_j (−∂)^j ∂P/∂(∂^j q).
    pub fn variational_derivative(&self) -> Self {
        let mut out = Self::zero();
        for j in 0..=self.max_order() {
            let mut t = self.partial(j);
            for _ in 0..j {
                t = t.derivative().neg();
            }
            out = out.add(&t);
        }
        out
    }

    /// True when P = ∂R for some differential polynomial R, so that ∫_0^1 P
    /// vanishes for every periodic q. The test is the vanishing of the Euler
    /// operator, which characterizes total derivatives among polynomials
    /// without constant term.
    pub fn is_total_derivative(&self) -> bool {
        self.terms.keys().all(|o| !o.is_empty()) && self.variational_derivative().is_zero()
    }

    pub fn isobaric_degree(&self) -> IsobaricDegree {
        let mut degs = self.terms.keys().map(|o| 2 * o.len() as u32 + o.iter().sum::<u32>());
        match degs.next() {
            None => IsobaricDegree::Inhomogeneous,
            Some(d) if degs.all(|e| e == d) => IsobaricDegree::Homogeneous { twice: d },
            Some(_) => IsobaricDegree::Inhomogeneous,
        }
    }

    /// Highest derivative order appearing anywhere.
    pub fn max_order(&self) -> u32 {
        self.terms.keys().flatten().copied().max().unwrap_or(0)
    }

    /// Largest number of factors in any monomial.
    pub fn max_factors(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Fourier series of the density graded by total derivative order K:
    /// p(q) = Σ_K (2πi)^K · out[K].
    pub fn graded_density<C: FromRational>(
        &self,
        q: &BTreeMap<i64, C>,
    ) -> BTreeMap<u32, FourierSeries<C>> {
        let mut factors = FactorCache::new(q);
        let mut out: BTreeMap<u32, FourierSeries<C>> = BTreeMap::new();
        for (orders, c) in &self.terms {
            let mut acc = FourierSeries::constant(C::from_rational(c));
            for &k in orders {
                acc = acc.mul(factors.get(k));
            }
            let k_total: u32 = orders.iter().sum();
            let slot = out.entry(k_total).or_default();
            *slot = slot.add(&acc);
        }
        out.retain(|_, s| !s.is_zero());
        out
    }

    /// Means of the graded density, ∫ p(q) = Σ_K (2πi)^K · out[K].
    pub fn graded_integral<C: FromRational>(&self, q: &BTreeMap<i64, C>) -> BTreeMap<u32, C> {
        let mut factors = FactorCache::new(q);
        let mut out: BTreeMap<u32, C> = BTreeMap::new();
        for (orders, c) in &self.terms {
            let (last, head) = orders.split_last().expect("monomials have at least one factor");
            let mut acc = FourierSeries::constant(C::from_rational(c));
            for &k in head {
                acc = acc.mul(factors.get(k));
            }
            let m = acc.mean_of_product(factors.get(*last));
            let k_total: u32 = orders.iter().sum();
            let slot = out.entry(k_total).or_insert_with(C::zero);
            *slot = slot.clone() + m;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Density evaluated on a floating potential, mean included.
    pub fn eval_density<T: Real>(&self, q: &Potential<T>) -> FourierSeries<Complex<T>>
    {
        let tau = two_pi_i::<T>();
        self.graded_density(q.coeffs())
            .into_iter()
            .fold(FourierSeries::zero(), |acc, (k, s)| {
                acc.add(&s.scale(&cpowi(tau, k)))
            })
    }

    /// ∫_0^1 p(q) dx for a floating potential.
    pub fn integrate<T: Real>(&self, q: &Potential<T>) -> Complex<T>
    {
        let tau = two_pi_i::<T>();
        self.graded_integral(q.coeffs())
            .into_iter()
            .fold(Complex::zero(), |acc, (k, c)| acc + c * cpowi(tau, k))
    }

    /// Exact ∫_0^1 p(q) dx for a rational potential.
    pub fn integrate_exact(&self, q: &Potential<BigRational>) -> TauPolynomial {
        TauPolynomial {
            terms: self.graded_integral(q.coeffs()),
        }
    }

    /// Pointwise value p(q)(x).
    pub fn eval_at<T: Real>(&self, q: &Potential<T>, x: T) -> Complex<T>
    {
        self.eval_density(q)
            .iter()
            .map(|(n, c)| *c * Complex::from_polar(T::one(), T::TAU() * T::from_i64_lossy(n) * x))
            .fold(Complex::zero(), |a, b| a + b)
    }
}

struct FactorCache<'a, C> {
    q: &'a BTreeMap<i64, C>,
    cache: BTreeMap<u32, FourierSeries<C>>,
}

impl<'a, C: FromRational> FactorCache<'a, C> {
    fn new(q: &'a BTreeMap<i64, C>) -> Self {
        Self {
            q,
            cache: BTreeMap::new(),
        }
    }

    /// Series n^k q̂_n, i.e. ∂^k q without its (2πi)^k factor.
    fn get(&mut self, k: u32) -> &FourierSeries<C> {
        let q = self.q;
        self.cache.entry(k).or_insert_with(|| {
            FourierSeries::from_coeffs(q.iter().map(|(n, c)| {
                let w = C::from_rational(&BigRational::from_integer(BigInt::from(*n).pow(k)));
                (*n, c.clone() * w)
            }))
        })
    }
}

/// Coefficient types that can absorb exact rational constants.
pub trait FromRational: Ring {
    fn from_rational(r: &BigRational) -> Self;
}

impl FromRational for Complex<BigRational> {
    fn from_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }
}

impl<T: Real> FromRational for Complex<T> {
    fn from_rational(r: &BigRational) -> Self {
        Complex::new(T::from_f64(r.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(T::nan), T::zero())
    }
}

/// Exact value Σ_K c_K (2πi)^K with rational complex c_K.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TauPolynomial {
    pub terms: BTreeMap<u32, Complex<BigRational>>,
}

impl TauPolynomial {
    /// Certified zero: every graded coefficient vanishes exactly.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Zero::is_zero)
    }

    pub fn coeff(&self, k: u32) -> Complex<BigRational> {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Complex::new(BigRational::zero(), BigRational::zero()))
    }

    pub fn to_f64(&self) -> Complex<f64> {
        let tau = two_pi_i::<f64>();
        self.terms
            .iter()
            .map(|(k, c)| {
                Complex::new(c.re.to_f64().unwrap(), c.im.to_f64().unwrap()) * cpowi(tau, *k)
            })
            .fold(Complex::zero(), |a, b| a + b)
    }
}

impl fmt::Display for TauPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let cs = if c.im.is_zero() {
                    format!("{}", c.re)
                } else {
                    format!("({} + {}i)", c.re, c.im)
                };
                match k {
                    0 => cs,
                    1 => format!("{cs}*(2*pi*i)"),
                    _ => format!("{cs}*(2*pi*i)^{k}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn sk_cache() -> &'static Mutex<Vec<Arc<DiffPolynomial>>> {
    static CACHE: OnceLock<Mutex<Vec<Arc<DiffPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(vec![
            Arc::new(DiffPolynomial::q()),
            Arc::new(DiffPolynomial::derivative_of_q(1, -BigRational::one())),
        ])
    })
}

/// The density s_k (k ≥ 1), memoized.
pub fn sk(k: usize) -> Arc<DiffPolynomial> {
    assert!(k >= 1, "s_k is defined for k ≥ 1");
    let mut cache = sk_cache().lock().expect("s_k cache poisoned");
    while cache.len() < k {
        // cache holds s_1..s_m; build s_{m+1}
        let m = cache.len();
        let mut next = cache[m - 1].derivative().neg();
        for j in 1..m {
            next = next.sub(&cache[m - j - 1].mul(&cache[j - 1]));
        }
        cache.push(Arc::new(next));
    }
    Arc::clone(&cache[k - 1])
}

/// s_k with an explicit depth limit.
pub fn sk_checked(k: usize, max_depth: usize) -> Result<Arc<DiffPolynomial>> {
    if k == 0 {
        return Err(HillError::Domain("s_k needs k ≥ 1".into()));
    }
    if k > max_depth {
        return Err(HillError::DepthLimit { k, limit: max_depth });
    }
    Ok(sk(k))
}

/// Splits s_k = (−1)^{k−1} ∂^{k−1} q + rest, checking that every monomial of the
/// rest has at least two factors and derivative order at most k − 3.
pub fn leading_split(k: usize) -> Result<(DiffMonomial, DiffPolynomial)> {
    if k < 2 {
        return Err(HillError::Domain("leading_split needs k ≥ 2".into()));
    }
    let s = sk(k);
    let sign = if (k - 1) % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    let lead = DiffMonomial {
        coeff: sign.clone(),
        orders: vec![(k - 1) as u32],
    };
    if s.coeff_of(&lead.orders) != sign {
        return Err(HillError::Consistency(format!(
            "s_{k} does not have leading term {}∂^{}q",
            if sign.is_positive() { "+" } else { "-" },
            k - 1
        )));
    }
    let rest = s.sub(&DiffPolynomial::from_monomials([lead.clone()]));
    for m in rest.monomials() {
        if m.orders.len() < 2 || (m.max_order() as i64) > k as i64 - 3 {
            return Err(HillError::Consistency(format!(
                "s_{k}: monomial with orders {:?} violates the leading-term structure",
                m.orders
            )));
        }
    }
    Ok((lead, rest))
}

/// a_k = ∫_0^1 s_k(x) dx for a floating potential.
pub fn a_k<T: Real>(k: usize, q: &Potential<T>) -> Complex<T> {
    sk(k).integrate(q)
}

/// Exact a_k for a rational potential, graded by powers of 2πi.
pub fn a_k_exact(k: usize, q: &Potential<BigRational>) -> TauPolynomial {
    sk(k).integrate_exact(q)
}

fn factor_name(k: u32) -> String {
    match k {
        0..=3 => format!("q{}", "'".repeat(k as usize)),
        _ => format!("q^({k})"),
    }
}

fn monomial_body(orders: &[u32]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < orders.len() {
        let k = orders[i];
        let mut j = i;
        while j < orders.len() && orders[j] == k {
            j += 1;
        }
        let p = j - i;
        parts.push(if p == 1 {
            factor_name(k)
        } else {
            format!("{}^{p}", factor_name(k))
        });
        i = j;
    }
    parts.join("*")
}

impl fmt::Display for DiffPolynomial {
    /// Canonical text such as `q'' - q^2`: fewer factors first, then higher
    /// derivatives first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ms = self.monomials();
        ms.sort_by(|a, b| {
            a.orders
                .len()
                .cmp(&b.orders.len())
                .then_with(|| b.orders.iter().rev().cmp(a.orders.iter().rev()))
        });
        for (idx, m) in ms.iter().enumerate() {
            let neg = m.coeff.is_negative();
            let mag = m.coeff.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", monomial_body(&m.orders))?;
        }
        Ok(())
    }
}

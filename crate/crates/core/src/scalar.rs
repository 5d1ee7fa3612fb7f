//! Floating-point scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the numerical core is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("representable integer")
    }

    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("representable integer")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number with `Real` parts.
pub type Cx<T> = Complex<T>;

/// `2πi`.
pub(crate) fn two_pi_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::TAU())
}

/// Integer power of a complex number by repeated squaring.
pub(crate) fn cpowi<T: Real>(z: Complex<T>, k: u32) -> Complex<T> {
    let mut acc = Complex::new(T::one(), T::zero());
    let mut base = z;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// Converts a complex value between floating precisions.
pub fn cast_complex<T: Real, U: Real>(z: Complex<T>) -> Complex<U> {
    Complex::new(
        U::from_f64(z.re.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(U::nan),
        U::from_f64(z.im.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(U::nan),
    )
}

/// Lexicographic order on complex numbers: real part first, then imaginary part.
pub fn lex_cmp<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

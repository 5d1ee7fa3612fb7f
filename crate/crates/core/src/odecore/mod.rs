//! Fundamental solutions, discriminant, λ-derivatives and WKB special solutions.

mod collocation;
mod wkb;

use num_complex::Complex;
use num_traits::Zero;

pub use collocation::Mesh;
pub use wkb::{
    forced_remainder_bound, l2_norm_unit, remainder_asymptotics_check, remainder_prediction, wkb, wkb_forcing,
    RemainderRow, WkbSolution,
};

use crate::error::{HillError, Result};
use crate::potential::Potential;
use crate::scalar::Real;

pub(crate) use collocation::gauss_legendre_unit;

/// Default integration tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// y1, y2 and their x-derivatives at x = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalSolution<T> {
    pub lambda: Complex<T>,
    pub y1_1: Complex<T>,
    pub y2_1: Complex<T>,
    pub dy1_1: Complex<T>,
    pub dy2_1: Complex<T>,
    /// |y1 y2′ − y1′ y2 − 1|.
    pub wronskian_defect: T,
    pub tol_used: T,
}

impl<T: Real> FundamentalSolution<T> {
    /// Δ(λ) = y1(1) + y2′(1).
    pub fn discriminant(&self) -> Complex<T> {
        self.y1_1 + self.dy2_1
    }
}

/// Values of y1, y2, y1′, y2′ at x = 1 and their λ-derivatives; index j holds ∂_λ^j.
#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyJet<T> {
    pub y1: Vec<Complex<T>>,
    pub y2: Vec<Complex<T>>,
    pub dy1: Vec<Complex<T>>,
    pub dy2: Vec<Complex<T>>,
}

/// Integrator bound to a potential with a mesh frozen at a reference λ.
///
/// Keeping the mesh fixed makes the computed monodromy an analytic function of λ
/// whose λ-derivatives are exact derivatives of the discrete map.
#[derive(Debug, Clone)]
pub struct Shooter<T> {
    mesh: Mesh<T>,
    tol: T,
}

pub(crate) fn check_tol<T: Real>(tol: T) -> Result<T> {
    // the floor keeps f32 usable, whose 16ε already exceeds 1e-6
    let floor = T::epsilon() * T::lit(16.0);
    let hi = (T::lit(1e-6) * T::lit(1.0 + 1e-6)).max(floor);
    if !(tol >= T::lit(1e-14) * T::lit(1.0 - 1e-6) && tol <= hi) {
        return Err(HillError::Domain(format!(
            "tolerance {tol} outside [1e-14, 1e-6]"
        )));
    }
    Ok(tol.max(floor))
}

pub(crate) fn scale_for<T: Real>(lambda: Complex<T>) -> T {
    lambda.norm().sqrt().max(T::one())
}

fn identity_cols<T: Real>() -> Vec<[Complex<T>; 2]> {
    let one = Complex::from(T::one());
    vec![[one, Complex::zero()], [Complex::zero(), one]]
}

impl<T: Real> Shooter<T> {
    pub fn new(q: &Potential<T>, lambda_ref: Complex<T>, tol: T) -> Result<Self> {
        let tol = check_tol(tol)?;
        let (mesh, _) = Mesh::adaptive(
            q,
            lambda_ref,
            scale_for(lambda_ref),
            tol,
            identity_cols(),
            None,
        )?;
        Ok(Self { mesh, tol })
    }

    pub fn mesh(&self) -> &Mesh<T> {
        &self.mesh
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    /// Monodromy values with λ-derivatives up to `order`.
    pub fn jet(&self, lambda: Complex<T>, order: usize) -> MonodromyJet<T> {
        let phi = self.mesh.propagate(lambda, order);
        let s = Complex::from(self.mesh.scale);
        MonodromyJet {
            y1: phi.iter().map(|p| p[0][0]).collect(),
            dy1: phi.iter().map(|p| p[0][1] * s).collect(),
            y2: phi.iter().map(|p| p[1][0] / s).collect(),
            dy2: phi.iter().map(|p| p[1][1]).collect(),
        }
    }

    pub fn fundamental(&self, lambda: Complex<T>) -> FundamentalSolution<T> {
        let j = self.jet(lambda, 0);
        let w = j.y1[0] * j.dy2[0] - j.dy1[0] * j.y2[0];
        FundamentalSolution {
            lambda,
            y1_1: j.y1[0],
            y2_1: j.y2[0],
            dy1_1: j.dy1[0],
            dy2_1: j.dy2[0],
            wronskian_defect: (w - T::one()).norm(),
            tol_used: self.tol,
        }
    }
}

/// Adaptive integration of the fundamental system at λ.
pub fn integrate_fundamental<T: Real>(
    q: &Potential<T>,
    lambda: Complex<T>,
    tol: T,
) -> Result<FundamentalSolution<T>> {
    Ok(Shooter::new(q, lambda, tol)?.fundamental(lambda))
}

/// Δ(λ) = y1(1, λ) + y2′(1, λ).
pub fn discriminant<T: Real>(q: &Potential<T>, lambda: Complex<T>, tol: T) -> Result<Complex<T>> {
    Ok(integrate_fundamental(q, lambda, tol)?.discriminant())
}

/// λ-derivatives (∂_λ y1(1), ∂_λ y2(1), ∂_λ y1′(1), ∂_λ y2′(1)).
pub fn dlambda<T: Real>(
    q: &Potential<T>,
    lambda: Complex<T>,
    tol: T,
) -> Result<[Complex<T>; 4]> {
    let j = Shooter::new(q, lambda, tol)?.jet(lambda, 1);
    Ok([j.y1[1], j.y2[1], j.dy1[1], j.dy2[1]])
}

/// Solves r″ = (q − λ) r + F(x) with r(0) = r′(0) = 0; returns (r(1), r′(1)).
pub fn solve_forced<T: Real>(
    q: &Potential<T>,
    lambda: Complex<T>,
    forcing: &dyn Fn(T) -> Complex<T>,
    tol: T,
) -> Result<(Complex<T>, Complex<T>)> {
    let tol = check_tol(tol)?;
    let scale = scale_for(lambda);
    let (_, cols) = Mesh::adaptive(
        q,
        lambda,
        scale,
        tol,
        vec![[Complex::zero(), Complex::zero()]],
        Some(forcing),
    )?;
    Ok((cols[0][0], cols[0][1] * scale))
}

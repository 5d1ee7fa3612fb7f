//! Five-stage Gauss–Legendre collocation (order 10) for the scaled first-order
//! form of −y″ + q y = λ y.
//!
//! With a scale s > 0 the state is u = (y, y′/s) and
//! u′ = A(x) u,  A = [[0, s], [(q − λ)/s, 0]].
//! The method preserves the Wronskian exactly (it is a quadratic invariant) and,
//! on a fixed mesh, commutes with differentiation in λ. λ-jets are propagated
//! through the block-triangular system Y_j′ = A Y_j + j A_λ Y_{j−1}.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{HillError, Result};
use crate::potential::Potential;
use crate::scalar::Real;

pub(crate) const S: usize = 5;
const D: usize = 2 * S;

type C<T> = Complex<T>;
pub(crate) type Vec2<T> = [C<T>; 2];

/// Butcher tableau of the s = 5 Gauss method.
#[derive(Debug, Clone)]
pub(crate) struct Tableau<T> {
    pub c: [T; S],
    pub b: [T; S],
    pub a: [[T; S]; S],
}

impl<T: Real> Tableau<T> {
    pub fn new() -> Self {
        let (x, w) = gauss_legendre_unit(S);
        let lagrange = |j: usize, t: f64| -> f64 {
            (0..S)
                .filter(|&m| m != j)
                .map(|m| (t - x[m]) / (x[j] - x[m]))
                .product()
        };
        let mut a = [[T::zero(); S]; S];
        for i in 0..S {
            for j in 0..S {
                // ∫_0^{c_i} L_j, exact with the same 5-point rule
                let v: f64 = (0..S).map(|k| w[k] * lagrange(j, x[i] * x[k])).sum::<f64>() * x[i];
                a[i][j] = T::lit(v);
            }
        }
        Self {
            c: std::array::from_fn(|i| T::lit(x[i])),
            b: std::array::from_fn(|i| T::lit(w[i])),
            a,
        }
    }
}

/// Gauss–Legendre nodes and weights on [0, 1].
pub(crate) fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (z * p - p0) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        // map from [-1, 1] (descending) to [0, 1] ascending
        x[n - 1 - i] = 0.5 * (1.0 - z);
        w[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Dense LU with partial pivoting for the 10×10 stage system.
struct StageLu<T> {
    m: [[C<T>; D]; D],
    perm: [usize; D],
}

impl<T: Real> StageLu<T> {
    fn factor(mut m: [[C<T>; D]; D]) -> Self {
        let mut perm = std::array::from_fn(|i| i);
        for k in 0..D {
            let p = (k..D)
                .max_by(|&i, &j| m[i][k].norm().partial_cmp(&m[j][k].norm()).unwrap())
                .unwrap();
            m.swap(k, p);
            perm.swap(k, p);
            let pivot = m[k][k];
            for i in k + 1..D {
                let f = m[i][k] / pivot;
                m[i][k] = f;
                for j in k + 1..D {
                    let t = m[k][j];
                    m[i][j] = m[i][j] - f * t;
                }
            }
        }
        Self { m, perm }
    }

    fn solve(&self, rhs: &[C<T>; D]) -> [C<T>; D] {
        let mut y: [C<T>; D] = std::array::from_fn(|i| rhs[self.perm[i]]);
        for i in 0..D {
            for j in 0..i {
                y[i] = y[i] - self.m[i][j] * y[j];
            }
        }
        for i in (0..D).rev() {
            for j in i + 1..D {
                y[i] = y[i] - self.m[i][j] * y[j];
            }
            y[i] = y[i] / self.m[i][i];
        }
        y
    }
}

/// One collocation step for a set of jet columns.
///
/// `state[j][c]` holds column c of the j-th λ-derivative; `forcing` adds
/// (0, f_i) to the right-hand side of the undifferentiated columns.
pub(crate) fn step<T: Real>(
    tab: &Tableau<T>,
    h: T,
    scale: T,
    lambda: C<T>,
    qst: &[C<T>; S],
    state: &mut [Vec<Vec2<T>>],
    forcing: Option<&[C<T>; S]>,
) {
    let s = scale;
    let low: [C<T>; S] = std::array::from_fn(|i| (qst[i] - lambda) / s);
    let mut m = [[C::zero(); D]; D];
    for i in 0..S {
        for j in 0..S {
            let ha = h * tab.a[i][j];
            // block (i, j) = δ_ij I − h a_ij A_i
            m[2 * i][2 * j + 1] = C::from(-ha * s);
            m[2 * i + 1][2 * j] = -low[i] * ha;
        }
        m[2 * i][2 * i] = m[2 * i][2 * i] + T::one();
        m[2 * i + 1][2 * i + 1] = m[2 * i + 1][2 * i + 1] + T::one();
    }
    let lu = StageLu::factor(m);
    let ncols = state[0].len();
    let mut prev_stage: Vec<[Vec2<T>; S]> = vec![[[C::zero(); 2]; S]; ncols];
    for j in 0..state.len() {
        let jf = T::from_usize_lossy(j);
        for (col, u) in state[j].iter_mut().enumerate() {
            let mut rhs = [C::zero(); D];
            for i in 0..S {
                rhs[2 * i] = u[1] * s;
                rhs[2 * i + 1] = low[i] * u[0];
                if j > 0 {
                    // j A_λ Ȳ_{j−1},  A_λ = [[0, 0], [−1/s, 0]]
                    rhs[2 * i + 1] = rhs[2 * i + 1] - prev_stage[col][i][0] * (jf / s);
                } else if let Some(f) = forcing {
                    rhs[2 * i + 1] = rhs[2 * i + 1] + f[i];
                }
            }
            let k = lu.solve(&rhs);
            let mut stage = [[C::zero(); 2]; S];
            for i in 0..S {
                let mut acc = *u;
                for l in 0..S {
                    let ha = h * tab.a[i][l];
                    acc[0] = acc[0] + k[2 * l] * ha;
                    acc[1] = acc[1] + k[2 * l + 1] * ha;
                }
                stage[i] = acc;
            }
            for i in 0..S {
                let hb = h * tab.b[i];
                u[0] = u[0] + k[2 * i] * hb;
                u[1] = u[1] + k[2 * i + 1] * hb;
            }
            prev_stage[col] = stage;
        }
    }
}

/// A frozen integration mesh with q tabulated at the collocation points.
#[derive(Debug, Clone)]
pub struct Mesh<T> {
    pub(crate) scale: T,
    pub(crate) nodes: Vec<T>,
    pub(crate) qstage: Vec<[C<T>; S]>,
    pub(crate) tab: Tableau<T>,
}

/// Scalar forcing F(x) in r″ = (q − λ) r + F.
pub(crate) type Forcing<'a, T> = &'a dyn Fn(T) -> C<T>;

impl<T: Real> Mesh<T> {
    /// Builds a mesh by step doubling at a reference λ.
    ///
    /// `init` are the initial columns in scaled variables. Returns the mesh and
    /// the columns propagated to x = 1.
    pub(crate) fn adaptive(
        q: &Potential<T>,
        lambda: C<T>,
        scale: T,
        tol: T,
        init: Vec<Vec2<T>>,
        forcing: Option<Forcing<'_, T>>,
    ) -> Result<(Self, Vec<Vec2<T>>)> {
        let tab = Tableau::<T>::new();
        let two_pi_m = T::TAU() * T::from_u64(q.bandwidth()).unwrap();
        let h_max = (T::lit(2.5) / scale.max(two_pi_m)).min(T::lit(0.25));
        let h_min = T::epsilon() * T::lit(256.0);
        let stage_q = |x0: T, h: T| -> [C<T>; S] { std::array::from_fn(|i| q.evaluate(x0 + tab.c[i] * h)) };
        let stage_f = |x0: T, h: T| -> Option<[C<T>; S]> {
            forcing.map(|f| std::array::from_fn(|i| f(x0 + tab.c[i] * h) / scale))
        };
        let inv_order = T::lit(0.1);
        let mut x = T::zero();
        let mut h = h_max;
        let mut cols = init;
        let mut nodes = vec![T::zero()];
        let mut qstage = Vec::new();
        while x < T::one() {
            let last = x + h >= T::one() - T::epsilon() * T::lit(4.0);
            if last {
                h = T::one() - x;
            }
            let q_full = stage_q(x, h);
            let hh = h / T::lit(2.0);
            let q_a = stage_q(x, hh);
            let q_b = stage_q(x + hh, hh);
            let mut full = vec![cols.clone()];
            step(&tab, h, scale, lambda, &q_full, &mut full, stage_f(x, h).as_ref());
            let mut half = vec![cols.clone()];
            step(&tab, hh, scale, lambda, &q_a, &mut half, stage_f(x, hh).as_ref());
            step(&tab, hh, scale, lambda, &q_b, &mut half, stage_f(x + hh, hh).as_ref());
            let mut diff = T::zero();
            let mut mag = T::one();
            for (a, b) in full[0].iter().zip(half[0].iter()) {
                for r in 0..2 {
                    diff = diff.max((a[r] - b[r]).norm());
                    mag = mag.max(b[r].norm());
                }
            }
            let err = diff / (mag * T::lit(1023.0));
            let allowed = tol * h;
            if err <= allowed {
                cols = half.pop().unwrap();
                nodes.push(x + hh);
                nodes.push(if last { T::one() } else { x + h });
                qstage.push(q_a);
                qstage.push(q_b);
                x = if last { T::one() } else { x + h };
            }
            let fac = if !err.is_finite() {
                T::lit(0.2)
            } else if err > T::zero() {
                (T::lit(0.9) * (allowed / err).powf(inv_order))
                    .max(T::lit(0.2))
                    .min(T::lit(4.0))
            } else {
                T::lit(4.0)
            };
            h = (h * fac).min(h_max);
            if x < T::one() && h < h_min {
                return Err(HillError::IntegrationFailure {
                    x: x.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok((
            Self {
                scale,
                nodes,
                qstage,
                tab,
            },
            cols,
        ))
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn steps(&self) -> usize {
        self.qstage.len()
    }

    /// Propagates the identity through the mesh at `lambda`, with λ-jets up to
    /// `order`. Returns Φ_j as [column 0, column 1] for j = 0..=order.
    pub(crate) fn propagate(&self, lambda: C<T>, order: usize) -> Vec<Vec<Vec2<T>>> {
        let one = C::from(T::one());
        let zero = C::zero();
        let mut state: Vec<Vec<Vec2<T>>> = (0..=order)
            .map(|j| {
                if j == 0 {
                    vec![[one, zero], [zero, one]]
                } else {
                    vec![[zero, zero], [zero, zero]]
                }
            })
            .collect();
        for (w, qst) in self.nodes.windows(2).zip(&self.qstage) {
            step(&self.tab, w[1] - w[0], self.scale, lambda, qst, &mut state, None);
        }
        state
    }
}

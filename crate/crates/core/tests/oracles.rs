//! Reference values for q = 2cos(2πx) frozen from independent computations:
//! Fourier–Galerkin matrices assembled here with nalgebra and a fixed-step RK4
//! propagator. Each oracle is rerun against its frozen values, and the solvers
//! are checked against the same values.

use std::f64::consts::PI;

use hill_spectra::asymptotics::AsymptoticModel;
use hill_spectra::odecore::{integrate_fundamental, wkb};
use hill_spectra::spectra::{dirichlet_eigs, neumann_eigs, periodic_eigs};
use hill_spectra::{Potential, Potential64};
use nalgebra::DMatrix;
use num_complex::Complex64;

const MU: [f64; 5] = [8.8570989513510, 39.469974548564, 88.832612469349, 157.91704740862, 246.74222089929];
const ETA: [f64; 5] = [-0.050603841998, 10.856778202314, 39.520577487705, 88.832933216956, 157.91704831148];
const LAMBDA: [f64; 6] = [
    -0.050603841998,
    8.8570989513510,
    10.856778202314,
    39.469974548564,
    39.520577487705,
    88.832612469349,
];
/// y1(1, 0) and y1′(1, 0).
const Y1_AT_ZERO: (f64, f64) = (0.97467506298016, -0.055731084074045);

fn two_cos() -> Potential64 {
    Potential::cos_term(Complex64::new(2.0, 0.0), 1).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

fn sorted_eigs(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// 2cos(2πx) couples modes two steps apart in the half-integer frequency grid.
fn galerkin(kind: &str, n: usize) -> Vec<f64> {
    match kind {
        "dirichlet" => {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = ((i + 1) as f64 * PI).powi(2);
                if i + 2 < n {
                    m[(i, i + 2)] = 1.0;
                    m[(i + 2, i)] = 1.0;
                }
            }
            // sin(−πx) = −sin(πx) folds back onto the first mode
            m[(0, 0)] -= 1.0;
            sorted_eigs(m)
        }
        "neumann" => {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = (i as f64 * PI).powi(2);
                if i + 2 < n {
                    let v = if i == 0 { 2f64.sqrt() } else { 1.0 };
                    m[(i, i + 2)] = v;
                    m[(i + 2, i)] = v;
                }
            }
            m[(1, 1)] += 1.0;
            sorted_eigs(m)
        }
        _ => {
            // e^{iπjx} for |j| ≤ n, both parities at once
            let size = 2 * n + 1;
            let mut m = DMatrix::<f64>::zeros(size, size);
            for i in 0..size {
                m[(i, i)] = ((i as f64 - n as f64) * PI).powi(2);
                if i + 2 < size {
                    m[(i, i + 2)] = 1.0;
                    m[(i + 2, i)] = 1.0;
                }
            }
            sorted_eigs(m)
        }
    }
}

fn rk4_y1(lambda: f64, steps: usize) -> (f64, f64) {
    let f = |x: f64, y: [f64; 2]| [y[1], (2.0 * (2.0 * PI * x).cos() - lambda) * y[0]];
    let h = 1.0 / steps as f64;
    let mut y = [1.0, 0.0];
    for s in 0..steps {
        let x = s as f64 * h;
        let k1 = f(x, y);
        let k2 = f(x + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(x + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    (y[0], y[1])
}

#[test]
fn oracles_reproduce_frozen_values() {
    let (d, n, p) = (galerkin("dirichlet", 40), galerkin("neumann", 40), galerkin("periodic", 40));
    for (k, &v) in MU.iter().enumerate() {
        assert!(close(d[k], v, 1e-12), "μ_{} {} vs {v}", k + 1, d[k]);
    }
    for (k, &v) in ETA.iter().enumerate() {
        assert!(close(n[k], v, 1e-11), "η_{k} {} vs {v}", n[k]);
    }
    for (k, &v) in LAMBDA.iter().enumerate() {
        assert!(close(p[k], v, 1e-11), "λ_{k} {} vs {v}", p[k]);
    }
    let (y, dy) = rk4_y1(0.0, 20000);
    assert!((y - Y1_AT_ZERO.0).abs() < 1e-12 && (dy - Y1_AT_ZERO.1).abs() < 1e-12, "{y:e} {dy:e}");
}

#[test]
fn solvers_match_frozen_values() {
    let q = two_cos();
    let mu = dirichlet_eigs(&q, 5, 1e-12).unwrap();
    let eta = neumann_eigs(&q, 4, 1e-12).unwrap();
    let per = periodic_eigs(&q, 3, 1e-12).unwrap();
    for (k, &v) in MU.iter().enumerate() {
        assert!(close(mu[k].re, v, 1e-11), "μ_{} {} vs {v}", k + 1, mu[k]);
    }
    for (k, &v) in ETA.iter().enumerate() {
        assert!(close(eta[k].re, v, 1e-11), "η_{k} {} vs {v}", eta[k]);
    }
    let flat: Vec<f64> = std::iter::once(per.lambda0.re)
        .chain(per.pairs.iter().flat_map(|p| [p.lo.re, p.hi.re]))
        .collect();
    for (k, &v) in LAMBDA.iter().enumerate() {
        assert!(close(flat[k], v, 1e-11), "λ_{k} {} vs {v}", flat[k]);
    }
    let f = integrate_fundamental(&q, Complex64::new(0.0, 0.0), 1e-12).unwrap();
    assert!((f.y1_1.re - Y1_AT_ZERO.0).abs() < 1e-11);
    assert!((f.dy1_1.re - Y1_AT_ZERO.1).abs() < 1e-11);
    // Δ(λ_0) = 2 at the bottom of the periodic spectrum
    let g = integrate_fundamental(&q, Complex64::new(LAMBDA[0], 0.0), 1e-12).unwrap();
    assert!((g.discriminant() - 2.0).norm() < 1e-8);
}

#[test]
fn wkb_reduces_to_y1_at_dirichlet_eigenvalues() {
    let q = Potential::sin_term(Complex64::new(1.0, 0.0), 1).unwrap();
    let mu1 = dirichlet_eigs(&q, 1, 1e-13).unwrap()[0];
    let nu = mu1.sqrt();
    let (zp, zm) = (wkb(&q, 0, nu, 1e-12).unwrap(), wkb(&q, 0, -nu, 1e-12).unwrap());
    let y1 = integrate_fundamental(&q, mu1, 1e-12).unwrap().y1_1;
    assert!((zp.z_1 * zm.z_1 - y1 * y1).norm() < 1e-9, "{} vs {}", zp.z_1 * zm.z_1, y1 * y1);
}

#[test]
fn fourth_order_coefficient_matches_eigenvalues() {
    // for 2cos(2πx), ⟨q, cos 2πnx⟩ = 0 when n ≥ 2, so μ_n and η_n track m_n
    let q = two_cos();
    let m = AsymptoticModel::new(&q, 3).unwrap();
    let (c2, c4) = (m.c_even[0].re, m.c_even[1].re);
    assert!((c2 - 1.0 / (2.0 * PI * PI)).abs() < 1e-14);
    let mu = dirichlet_eigs(&q, 12, 1e-13).unwrap();
    let eta = neumann_eigs(&q, 12, 1e-13).unwrap();
    for n in [8usize, 10, 12] {
        let nf = n as f64;
        let tau = (mu[n - 1].re + eta[n].re) / 2.0;
        let rest = (tau - (nf * PI).powi(2) - c2 / (nf * nf)) * nf.powi(4);
        // the next correction is O(1/n²) relative to c_4
        assert!((rest - c4).abs() < 0.05 * c4.abs(), "n={n}: {rest} vs c_4 = {c4}");
    }
    // a c_4 equal to b_3² instead of 2πb_5 would be off by a factor of about 100
    let b3 = m.b_odd[1].re;
    assert!((c4 - b3 * b3).abs() > 10.0 * c4.abs().min(b3 * b3));
}

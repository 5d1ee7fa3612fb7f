use hill_spectra::spectra::{build_table, dirichlet_with_kappa, periodic_eigs};
use hill_spectra::{Potential, Potential64};
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn two_cos() -> Potential64 {
    Potential::cos_term(c(2.0), 1).unwrap()
}

fn mixed() -> Potential64 {
    Potential::sin_term(c(0.3), 1)
        .unwrap()
        .add(&Potential::cos_term(c(0.1), 3).unwrap())
}

#[test]
fn two_cos_table_passes_invariants() {
    let t = build_table(&two_cos(), 24, 1e-12).unwrap();
    assert!(t.oracle_deviation < 1e-7, "{}", t.oracle_deviation);
    for r in &t.rows {
        assert!((r.tau - (r.lambda_lo + r.lambda_hi) / 2.0).norm() < 1e-12 * r.tau.norm());
    }
}

#[test]
fn mixed_table_passes_invariants() {
    let t = build_table(&mixed(), 24, 1e-12).unwrap();
    assert!(t.oracle_deviation < 1e-7);
    assert!(!t.lexicographic);
}

#[test]
fn complex_potential_table() {
    let q = Potential::exp_term(Complex64::new(0.5, 0.2), 1)
        .unwrap()
        .add(&Potential::exp_term(Complex64::new(-0.3, 0.1), -2).unwrap());
    let t = build_table(&q, 12, 1e-12).unwrap();
    assert!(t.lexicographic);
    assert!(t.oracle_deviation < 1e-7, "{}", t.oracle_deviation);
}

#[test]
fn wronskian_at_dirichlet_eigenvalues() {
    for q in [two_cos(), mixed()] {
        for (i, (mu, _)) in dirichlet_with_kappa(&q, 16, 1e-12).unwrap().into_iter().enumerate() {
            let f = hill_spectra::odecore::integrate_fundamental(&q, mu, 1e-12).unwrap();
            let p = f.y1_1 * f.dy2_1;
            assert!((p - 1.0).norm() < 1e-9, "n={} {p}", i + 1);
        }
    }
}

#[test]
fn even_potential_pairs_with_periodic() {
    let q = Potential::cos_term(c(1.5), 1)
        .unwrap()
        .add(&Potential::cos_term(c(-0.7), 2).unwrap());
    let t = build_table(&q, 16, 1e-12).unwrap();
    for r in &t.rows {
        let d = |v: Complex64| (v - r.lambda_lo).norm().min((v - r.lambda_hi).norm());
        assert!(d(r.mu) <= 1e-7 * r.mu.norm(), "n={}", r.n);
        assert!(d(r.eta) <= 1e-7 * r.eta.norm(), "n={}", r.n);
        if r.gap.norm() > 1e-6 {
            let s = |a: Complex64, b: Complex64| {
                ((a - r.lambda_lo).norm() + (b - r.lambda_hi).norm())
                    .min((a - r.lambda_hi).norm() + (b - r.lambda_lo).norm())
            };
            assert!(s(r.mu, r.eta) < 1e-7 * r.tau.norm(), "n={}", r.n);
        }
    }
}

#[test]
fn translation_isospectrality() {
    let q = mixed();
    let a = periodic_eigs(&q, 12, 1e-12).unwrap();
    let b = periodic_eigs(&q.translate(0.137), 12, 1e-12).unwrap();
    assert!((a.lambda0 - b.lambda0).norm() < 1e-9);
    for (x, y) in a.pairs.iter().zip(&b.pairs) {
        assert!((x.lo - y.lo).norm() < 1e-9 * x.lo.norm().max(1.0));
        assert!((x.hi - y.hi).norm() < 1e-9 * x.hi.norm().max(1.0));
    }
}

#[test]
fn single_precision_tracks_double() {
    let q = mixed();
    let q32 = q.cast::<f32>();
    let mu64 = dirichlet_with_kappa(&q, 6, 1e-12).unwrap();
    let mu32 = dirichlet_with_kappa(&q32, 6, 1e-6f32).unwrap();
    for (a, b) in mu64.iter().zip(&mu32) {
        let d = (a.0.re as f32 - b.0.re).abs();
        assert!(d < 1e-4 * a.0.re.abs().max(1.0) as f32, "{} vs {}", a.0, b.0);
        assert!((a.1.kappa.re as f32 - b.1.kappa.re).abs() < 1e-4);
    }
    let p = periodic_eigs(&q32, 4, 1e-6f32).unwrap();
    assert!(p.pairs.iter().all(|r| r.lo.re.is_finite() && r.hi.re.is_finite()));
}

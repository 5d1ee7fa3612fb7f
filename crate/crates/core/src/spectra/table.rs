use std::fmt::Write as _;

use num_complex::Complex;
use serde_json::{json, Value};

use super::{
    dirichlet_with_kappa, galerkin_oracle, galerkin_periodic_merged, neumann_eigs, oracle_modes,
    periodic_eigs, Boundary,
};
use crate::error::{HillError, Result};
use crate::potential::Potential;
use crate::scalar::Real;

/// One index n of a spectral table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRow<T> {
    pub n: usize,
    pub lambda_lo: Complex<T>,
    pub lambda_hi: Complex<T>,
    pub mu: Complex<T>,
    pub eta: Complex<T>,
    pub kappa: Complex<T>,
    pub tau: Complex<T>,
    pub gap: Complex<T>,
    pub near_degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable<T> {
    pub n_max: usize,
    pub lambda0: Complex<T>,
    pub eta0: Complex<T>,
    pub rows: Vec<SpectralRow<T>>,
    /// Set for complex q, whose pairs are ordered lexicographically.
    pub lexicographic: bool,
    pub tol: T,
    /// Galerkin modes used for the oracle cross-check (0 if skipped).
    pub oracle_modes: usize,
    /// Largest relative deviation from the oracle over the checked indices.
    pub oracle_deviation: T,
    pub potential: Value,
}

#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    /// Cross-check the first `oracle_check_n` indices against the Galerkin oracle.
    pub oracle_check: bool,
    pub oracle_check_n: usize,
    pub oracle_rel_tol: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            oracle_check: true,
            oracle_check_n: 20,
            oracle_rel_tol: 1e-7,
        }
    }
}

pub const CSV_HEADER: &str = "n,lambda_lo_re,lambda_lo_im,lambda_hi_re,lambda_hi_im,mu_re,mu_im,\
eta_re,eta_im,kappa_re,kappa_im,tau_re,tau_im,gap_re,gap_im";

/// Assembles all spectra with default options.
pub fn build_table<T: Real>(q: &Potential<T>, n_max: usize, tol: T) -> Result<SpectralTable<T>> {
    build_table_with(q, n_max, tol, TableOptions::default())
}

pub fn build_table_with<T: Real>(
    q: &Potential<T>,
    n_max: usize,
    tol: T,
    opts: TableOptions,
) -> Result<SpectralTable<T>> {
    let (per, dk, eta) = {
        let ((per, dk), eta) = rayon::join(
            || rayon::join(|| periodic_eigs(q, n_max, tol), || dirichlet_with_kappa(q, n_max, tol)),
            || neumann_eigs(q, n_max, tol),
        );
        (per?, dk?, eta?)
    };
    let two = T::lit(2.0);
    let rows: Vec<SpectralRow<T>> = (1..=n_max)
        .map(|n| {
            let p = per.pairs[n - 1];
            SpectralRow {
                n,
                lambda_lo: p.lo,
                lambda_hi: p.hi,
                mu: dk[n - 1].0,
                eta: eta[n],
                kappa: dk[n - 1].1.kappa,
                tau: (p.lo + p.hi) / two,
                gap: p.hi - p.lo,
                near_degenerate: p.near_degenerate,
            }
        })
        .collect();
    let mut table = SpectralTable {
        n_max,
        lambda0: per.lambda0,
        eta0: eta[0],
        rows,
        lexicographic: !q.is_real(),
        tol,
        oracle_modes: 0,
        oracle_deviation: T::zero(),
        potential: serde_json::to_value(q.descriptor()).unwrap_or(Value::Null),
    };
    if q.is_real() {
        table.check_real_invariants()?;
    }
    if opts.oracle_check {
        table.cross_check(q, opts)?;
    }
    Ok(table)
}

fn slack<T: Real>(z: Complex<T>) -> T {
    T::lit(1e-8) * z.norm().max(T::one())
}

fn rel_dev<T: Real>(a: Complex<T>, b: Complex<f64>) -> T {
    let b = Complex::new(T::lit(b.re), T::lit(b.im));
    (a - b).norm() / b.norm().max(T::one())
}

impl<T: Real> SpectralTable<T> {
    /// Ordering η_0 ≤ λ_0 < λ_1 ≤ λ_2 < … and λ_{2n−1} ≤ μ_n, η_n ≤ λ_{2n}.
    fn check_real_invariants(&self) -> Result<()> {
        let mut prev = self.lambda0.re;
        // the Neumann form domain contains the periodic one, so η_0 ≤ λ_0
        if self.eta0.re > prev + slack(self.eta0) {
            return Err(HillError::Labeling {
                n: 0,
                reason: "η_0 above λ_0".into(),
            });
        }
        for r in &self.rows {
            let s = slack(r.lambda_hi);
            if r.lambda_lo.re <= prev || r.lambda_lo.re > r.lambda_hi.re {
                return Err(HillError::Labeling {
                    n: r.n,
                    reason: "periodic eigenvalues out of order".into(),
                });
            }
            for (name, v) in [("μ", r.mu), ("η", r.eta)] {
                if v.re < r.lambda_lo.re - s || v.re > r.lambda_hi.re + s {
                    return Err(HillError::Labeling {
                        n: r.n,
                        reason: format!("{name}_{} = {} not interlaced", r.n, v.re),
                    });
                }
            }
            prev = r.lambda_hi.re;
        }
        Ok(())
    }

    fn cross_check(&mut self, q: &Potential<T>, opts: TableOptions) -> Result<()> {
        let modes = oracle_modes(q, self.n_max);
        let qf: Potential<f64> = q.cast();
        let (d, (nm, p)) = rayon::join(
            || galerkin_oracle(&qf, Boundary::Dirichlet, modes),
            || {
                rayon::join(
                    || galerkin_oracle(&qf, Boundary::Neumann, modes),
                    || galerkin_periodic_merged(&qf, modes),
                )
            },
        );
        let (d, nm, p) = (d?, nm?, p?);
        let mut worst = rel_dev(self.lambda0, p[0]).max(rel_dev(self.eta0, nm[0]));
        for r in self.rows.iter().take(opts.oracle_check_n) {
            let n = r.n;
            for dev in [
                rel_dev(r.mu, d[n - 1]),
                rel_dev(r.eta, nm[n]),
                rel_dev(r.lambda_lo, p[2 * n - 1]),
                rel_dev(r.lambda_hi, p[2 * n]),
            ] {
                worst = worst.max(dev);
            }
        }
        self.oracle_modes = modes;
        self.oracle_deviation = worst;
        if !(worst <= T::lit(opts.oracle_rel_tol)) {
            return Err(HillError::Consistency(format!(
                "shooting and Galerkin spectra differ by {worst:e} (relative)"
            )));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{}", r.n);
            for z in [r.lambda_lo, r.lambda_hi, r.mu, r.eta, r.kappa, r.tau, r.gap] {
                let _ = write!(out, ",{:.17e},{:.17e}", z.re, z.im);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let c = |z: Complex<T>| json!([z.re.to_f64(), z.im.to_f64()]);
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "lambda_lo": c(r.lambda_lo),
                    "lambda_hi": c(r.lambda_hi),
                    "mu": c(r.mu),
                    "eta": c(r.eta),
                    "kappa": c(r.kappa),
                    "tau": c(r.tau),
                    "gap": c(r.gap),
                    "near_degenerate": r.near_degenerate,
                })
            })
            .collect();
        json!({
            "n_max": self.n_max,
            "lambda0": c(self.lambda0),
            "eta0": c(self.eta0),
            "lexicographic": self.lexicographic,
            "tol": self.tol.to_f64(),
            "oracle_modes": self.oracle_modes,
            "oracle_deviation": self.oracle_deviation.to_f64(),
            "potential": self.potential,
            "rows": rows,
        })
    }
}

//! `hill-spectra`: spectra, asymptotics and theorem checks for Hill operators.

mod spec;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hill_spectra::diffpoly::{a_k, sk_checked, DEFAULT_MAX_DEPTH};
use hill_spectra::odecore::remainder_asymptotics_check;
use hill_spectra::products::{corollary24_check, hilbert_norm_check, lemma_bound_check};
use hill_spectra::spectra::{build_table_with, dirichlet_eigs, TableOptions};
use hill_spectra::verify::{
    even_potential_suite, uniformity_scan, verify_theorem, ResidualReport, Status, TheoremId,
    VerifyConfig, REPORT_CSV_HEADER,
};
use hill_spectra::{HillError, Potential64};
use num_complex::Complex64;
use serde_json::{json, Value};

const MAX_N: usize = 256;

#[derive(Parser)]
#[command(name = "hill-spectra", version, about = "Spectral asymptotics of Hill operators -y'' + q y")]
struct Cli {
    /// Worker threads (overrides HILL_SPECTRA_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dirichlet, Neumann and periodic spectra with Floquet exponents.
    Spectrum(SpectrumArgs),
    /// Residuals of an asymptotic formula with slope and boundedness gates.
    Verify(VerifyArgs),
    /// Symbolic densities s_k and, given a potential, their integrals a_k.
    Sk(SkArgs),
    /// Hilbert transform and infinite-product diagnostics.
    Products(ProductsArgs),
    /// WKB remainder r_N(1, ±ν_n) against its prediction.
    Wkb(WkbArgs),
    /// Checks that an even potential has μ_n, η_n filling each periodic pair.
    Even(EvenArgs),
    /// Prints the JSON descriptor of a potential.
    Potential(PotentialArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Potential, e.g. "2*cos(2*pi*x)", inline JSON, or @file.json.
    #[arg(short = 'q', long = "potential")]
    potential: String,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..=MAX_N as u64))]
    n_max: u64,
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tol)]
    tol: f64,
    /// Skip the Galerkin cross-check.
    #[arg(long)]
    no_oracle: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short = 'q', long = "potential")]
    potential: String,
    /// 1, 2, 3, 4 (both 4mu and 4eta), 4mu, 4eta, B, gap or cor32.
    #[arg(long)]
    theorem: String,
    /// Expansion orders, comma separated.
    #[arg(long = "N", value_delimiter = ',', default_value = "0")]
    orders: Vec<usize>,
    #[arg(long, default_value = "6:48", value_parser = parse_range)]
    window: (usize, usize),
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tol)]
    tol: f64,
    /// Cap on scaled residuals (default 10·max(1, ‖q‖_N²)).
    #[arg(long)]
    cap: Option<f64>,
    /// Scan the family {t·q} over these scale factors instead of q alone.
    #[arg(long, value_delimiter = ',')]
    family_scales: Option<Vec<f64>>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SkArgs {
    #[arg(long)]
    k: usize,
    /// Also print a_k for this potential.
    #[arg(short = 'q', long = "potential")]
    potential: Option<String>,
}

#[derive(Args)]
struct ProductsArgs {
    /// Monte Carlo test of ‖H‖ ≤ 2π on random unit vectors.
    #[arg(long)]
    hilbert_norm_check: bool,
    /// Random test of |Π(1+a_m) − 1| ≤ |A|e^S + |B|e^{S+S²}.
    #[arg(long)]
    bound_check: bool,
    /// Residuals n·|Π_{m≠n}(a_m − λ_n)/(m²π²) − (−1)^{n+1}/2| for a unit perturbation.
    #[arg(long)]
    corollary24: bool,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=MAX_N as u64))]
    support: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "8:64", value_parser = parse_range)]
    n: (usize, usize),
    /// λ_n − n²π² for the product check.
    #[arg(long, default_value_t = 0.1)]
    shift: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct WkbArgs {
    #[arg(short = 'q', long = "potential")]
    potential: String,
    #[arg(long = "N", default_value_t = 0)]
    order: usize,
    #[arg(long, default_value = "8:32", value_parser = parse_range)]
    n: (usize, usize),
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tol)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EvenArgs {
    #[arg(short = 'q', long = "potential")]
    potential: String,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..=MAX_N as u64))]
    n_max: u64,
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tol)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct PotentialArgs {
    #[arg(short = 'q', long = "potential")]
    potential: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (1e-14..=1e-6).contains(&v) {
        Ok(v)
    } else {
        Err(format!("tolerance {v} outside [1e-14, 1e-6]"))
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: usize = a.trim().parse().map_err(|_| format!("bad lower bound '{a}'"))?;
    let hi: usize = b.trim().parse().map_err(|_| format!("bad upper bound '{b}'"))?;
    if lo == 0 || lo > hi || hi > MAX_N {
        return Err(format!("range {lo}:{hi} must satisfy 1 ≤ lo ≤ hi ≤ {MAX_N}"));
    }
    Ok((lo, hi))
}

/// Failure modes of a command, mapped onto exit codes.
enum Failure {
    /// Bad input or a solver error: exit 1.
    Usage(String),
}

impl From<HillError> for Failure {
    fn from(e: HillError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn emit(out: &Output, csv: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> Result<(), Failure> {
    let text = match out.format {
        Format::Csv => csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json()).expect("serializable");
            s.push('\n');
            s
        }
    };
    write_text(out.output.as_ref(), &text)
}

fn write_text(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_spectrum(a: &SpectrumArgs) -> CmdResult {
    let q = spec::load_potential(&a.potential)?;
    let opts = TableOptions {
        oracle_check: !a.no_oracle,
        ..TableOptions::default()
    };
    let table = build_table_with(&q, a.n_max as usize, a.tol, opts)?;
    if table.oracle_modes > 0 {
        eprintln!(
            "oracle: {} modes, max relative deviation {:.2e}",
            table.oracle_modes, table.oracle_deviation
        );
    }
    emit(&a.out, || table.to_csv(), || table.to_json())?;
    Ok(0)
}

fn theorems(name: &str) -> Result<Vec<TheoremId>, Failure> {
    if name == "4" {
        return Ok(vec![TheoremId::T4Mu, TheoremId::T4Eta]);
    }
    Ok(vec![TheoremId::from_str(name)?])
}

fn describe(r: &ResidualReport) -> String {
    let s = &r.summary;
    let slope = s.slope.map_or("n/a".to_string(), |v| format!("{v:.3}"));
    format!(
        "theorem {} N={}: slope {slope} over {} points (gate {:.1}), max scaled {:.3e}, l2 {:.3e}, cap {:.3e}: {}",
        r.theorem, r.order, s.fitted_points, s.slope_gate, s.max_scaled, s.l2_partial, s.cap, s.status
    )
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let q = spec::load_potential(&a.potential)?;
    let ths = theorems(&a.theorem)?;
    let mut reports: Vec<(Option<f64>, ResidualReport)> = Vec::new();
    let mut statuses = Vec::new();
    for &order in &a.orders {
        let cfg = VerifyConfig {
            cap: a.cap,
            tol: a.tol,
            ..VerifyConfig::new(order, a.window.0, a.window.1)
        };
        for &th in &ths {
            match &a.family_scales {
                None => {
                    let r = verify_theorem(&q, th, &cfg)?;
                    eprintln!("{}", describe(&r));
                    statuses.push(r.summary.status);
                    reports.push((None, r));
                }
                Some(scales) => {
                    let family: Vec<Potential64> = scales
                        .iter()
                        .map(|&t| q.scale(&Complex64::new(t, 0.0)))
                        .collect();
                    let radius = family
                        .iter()
                        .map(|p| p.sobolev_norm(order as u32))
                        .fold(0.0, f64::max);
                    let u = uniformity_scan(&family, th, &cfg, radius)?;
                    eprintln!(
                        "theorem {th} N={order}: family of {}, max scaled {:.3e}, cap {:.3e}: {}",
                        family.len(),
                        u.max_scaled,
                        u.cap,
                        u.status
                    );
                    statuses.push(u.status);
                    reports.extend(scales.iter().copied().map(Some).zip(u.reports));
                }
            }
        }
    }
    let status = Status::combine(statuses);
    emit(
        &a.out,
        || {
            let mut s = String::new();
            if a.family_scales.is_some() {
                s.push_str("scale,");
            }
            s.push_str(REPORT_CSV_HEADER);
            s.push('\n');
            for (t, r) in &reports {
                let mut rows = String::new();
                r.write_csv_rows(&mut rows);
                match t {
                    None => s.push_str(&rows),
                    Some(t) => rows.lines().for_each(|l| {
                        let _ = writeln!(s, "{t},{l}");
                    }),
                }
            }
            s
        },
        || {
            let items: Vec<Value> = reports
                .iter()
                .map(|(t, r)| {
                    let mut v = r.to_json();
                    if let Some(t) = t {
                        v["scale"] = json!(t);
                    }
                    v
                })
                .collect();
            json!({ "status": status.to_string(), "exit_code": status.exit_code(), "reports": items })
        },
    )?;
    Ok(status.exit_code() as u8)
}

fn cmd_sk(a: &SkArgs) -> CmdResult {
    let s = sk_checked(a.k, DEFAULT_MAX_DEPTH)?;
    println!("s_{} = {}", a.k, s);
    if let Some(src) = &a.potential {
        let q = spec::load_potential(src)?;
        let v = a_k(a.k, &q);
        println!("a_{} = {:.17e} {:+.17e}i", a.k, v.re, v.im);
    }
    Ok(0)
}

fn cmd_products(a: &ProductsArgs) -> CmdResult {
    if !(a.hilbert_norm_check || a.bound_check || a.corollary24) {
        return Err(Failure::Usage(
            "choose --hilbert-norm-check, --bound-check or --corollary24".into(),
        ));
    }
    let mut code = 0;
    if a.hilbert_norm_check {
        let r = hilbert_norm_check(a.trials, a.support as usize, a.seed);
        eprintln!(
            "hilbert: {} trials, support {}, seed {}: max ratio {:.6} (bound {:.6}): {}",
            r.trials,
            r.support,
            a.seed,
            r.max_norm,
            r.bound,
            if r.passed() { "pass" } else { "fail" }
        );
        if !r.passed() {
            code = 2;
        }
    }
    if a.bound_check {
        let r = lemma_bound_check(a.trials, a.support as usize, a.seed);
        eprintln!(
            "product bound: {} trials, seed {}: {} violations, max lhs/rhs {:.6}",
            r.trials, a.seed, r.violations, r.max_ratio
        );
        if r.violations > 0 {
            code = 2;
        }
    }
    if a.corollary24 {
        let ns: Vec<usize> = (a.n.0..=a.n.1).collect();
        let rows = corollary24_check(&ns, Complex64::new(a.shift, 0.0))?;
        emit(
            &a.out,
            || {
                let mut s = String::from("n,value_re,value_im,radius,residual\n");
                for r in &rows {
                    let _ = writeln!(
                        s,
                        "{},{:.17e},{:.17e},{:.17e},{:.17e}",
                        r.n, r.value.re, r.value.im, r.radius, r.residual
                    );
                }
                s
            },
            || {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({"n": r.n, "value": [r.value.re, r.value.im], "radius": r.radius, "residual": r.residual}))
                    .collect();
                json!({ "shift": a.shift, "rows": v })
            },
        )?;
    }
    Ok(code)
}

fn cmd_wkb(a: &WkbArgs) -> CmdResult {
    let q = spec::load_potential(&a.potential)?;
    let mu = dirichlet_eigs(&q, a.n.1, a.tol)?;
    let nus: Vec<(usize, Complex64)> = (a.n.0..=a.n.1).map(|n| (n, mu[n - 1].sqrt())).collect();
    let rows = remainder_asymptotics_check(&q, a.order, &nus, a.tol)?;
    let max = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    eprintln!("wkb N={}: max n·|r - prediction| = {max:.3e}", a.order);
    emit(
        &a.out,
        || {
            let mut s = String::from("N,n,sign,nu_re,nu_im,r_re,r_im,predicted_re,predicted_im,scaled\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                    a.order, r.n, r.sign, r.nu.re, r.nu.im, r.r.re, r.r.im, r.predicted.re, r.predicted.im, r.scaled
                );
            }
            s
        },
        || {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n, "sign": r.sign, "nu": [r.nu.re, r.nu.im], "r": [r.r.re, r.r.im],
                        "predicted": [r.predicted.re, r.predicted.im], "scaled": r.scaled,
                    })
                })
                .collect();
            json!({ "N": a.order, "max_scaled": max, "rows": v })
        },
    )?;
    Ok(0)
}

fn cmd_even(a: &EvenArgs) -> CmdResult {
    let q = spec::load_potential(&a.potential)?;
    let r = even_potential_suite(&q, a.n_max as usize, a.tol)?;
    eprintln!(
        "even: max distance {:.3e}, max |κ| {:.3e}: {}",
        r.max_distance,
        r.max_kappa,
        if r.passed { "pass" } else { "fail" }
    );
    emit(
        &a.out,
        || {
            let mut s = String::from("n,mu_distance,eta_distance,pairing_distance,kappa\n");
            for row in &r.rows {
                let _ = writeln!(
                    s,
                    "{},{:.17e},{:.17e},{:.17e},{:.17e}",
                    row.n, row.mu_distance, row.eta_distance, row.pairing_distance, row.kappa
                );
            }
            s
        },
        || {
            json!({
                "ground_distance": r.ground_distance,
                "max_distance": r.max_distance,
                "max_kappa": r.max_kappa,
                "passed": r.passed,
            })
        },
    )?;
    Ok(if r.passed { 0 } else { 2 })
}

fn cmd_potential(a: &PotentialArgs) -> CmdResult {
    let q = spec::load_potential(&a.potential)?;
    let mut s = q.to_json();
    s.push('\n');
    write_text(a.output.as_ref(), &s)?;
    Ok(0)
}

fn init_threads(flag: Option<usize>) -> Result<(), Failure> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("HILL_SPECTRA_THREADS") {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("HILL_SPECTRA_THREADS={v:?} is not a count")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(Failure::Usage("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    init_threads(cli.threads)?;
    match &cli.cmd {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sk(a) => cmd_sk(a),
        Command::Products(a) => cmd_products(a),
        Command::Wkb(a) => cmd_wkb(a),
        Command::Even(a) => cmd_even(a),
        Command::Potential(a) => cmd_potential(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors; every usage error exits 1
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

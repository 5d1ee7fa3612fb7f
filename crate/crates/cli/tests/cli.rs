use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hill-spectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap_or(-1)
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["spectrum", "-q", "2*cos(2*pi*x)", "--n-max", "4"]), 0);
    assert_eq!(code(&["spectrum", "-q", "2*cos(2*pi*x)", "--n-max", "0"]), 1);
    assert_eq!(code(&["spectrum", "-q", "2*tan(2*pi*x)"]), 1);
    assert_eq!(code(&["spectrum", "-q", "0", "--tol", "1e-3"]), 1);
    assert_eq!(code(&["verify", "-q", "i*sin(2*pi*x)", "--theorem", "B"]), 1);
    assert_eq!(code(&["sk", "--k", "13"]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn verify_statuses() {
    let q = "2*cos(2*pi*x)";
    assert_eq!(code(&["verify", "-q", q, "--theorem", "4", "--N", "0,1,2", "--window", "6:32"]), 0);
    // κ_n of a single sine is below double-precision resolution across the window
    assert_eq!(code(&["verify", "-q", "sin(2*pi*x)", "--theorem", "1"]), 3);
}

#[test]
fn sk_printing() {
    assert_eq!(stdout(&["sk", "--k", "3"]).trim(), "s_3 = q'' - q^2");
    let a2 = stdout(&["sk", "--k", "2", "-q", "2*cos(2*pi*x)"]);
    assert!(a2.contains("a_2"), "{a2}");
}

#[test]
fn spectrum_csv_shape() {
    let csv = stdout(&["spectrum", "-q", "2*cos(2*pi*x)", "--n-max", "5"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with('n') || lines[0].contains(','), "{}", lines[0]);
    assert!(lines.len() >= 6);
}

#[test]
fn products_checks_pass() {
    assert_eq!(code(&["products", "--hilbert-norm-check", "--trials", "50"]), 0);
    assert_eq!(code(&["products", "--bound-check", "--trials", "50"]), 0);
}

#[test]
fn json_potential_round_trip() {
    let json = stdout(&["potential", "-q", "sin(2*pi*x) + (0.1,-0.2)*exp(2*pi*i*3*x)"]);
    let dir = std::env::temp_dir().join(format!("hill-spectra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q.json");
    std::fs::write(&path, &json).unwrap();
    let from_file = stdout(&["potential", "-q", &format!("@{}", path.display())]);
    let inline = stdout(&["potential", "-q", json.trim()]);
    assert_eq!(json, from_file);
    assert_eq!(json, inline);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["spectrum", "-q", "0.3*sin(2*pi*x) + 0.1*cos(6*pi*x)", "--n-max", "12", "--format", "json"];
    let a = stdout(&args);
    let b = stdout(&[&["--threads", "1"][..], &args[..]].concat());
    let c = stdout(&[&["--threads", "4"][..], &args[..]].concat());
    assert_eq!(a, b);
    assert_eq!(a, c);
}

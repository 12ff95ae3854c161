use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
problem = "gauge_laplacian"
mesh = 6
mass = 0.3
function = "invsqrt"
quadrature = "stieltjes"
j = 12
k = 4
n_quad = 20
engines = ["arnoldi", "v2", "v3"]
sequence_length = 2
epsilon = 1e-3
"#;

fn rfom2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfom2")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("cfg.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let csv = dir.path().join("out.csv");
    let out = rfom2(&["run", &cfg, "-o", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("problem_index,engine"));
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
}

#[test]
fn sweep_prints_one_row_per_engine_and_size() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = rfom2(&["sweep", &cfg, "--nquad", "8,16,32", "--set", "engines=[\"v2\"]"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let sizes: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(sizes, ["8", "16", "32"]);
}

#[test]
fn bad_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "j = 0\n");
    let out = rfom2(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("j must be at least 1"));

    let out = rfom2(&["run", &dir.path().join("missing.toml").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_rows_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    // indefinite matrix: the inverse square root is undefined
    let cfg = write_config(dir.path(), &SMALL.replace("mass = 0.3", "mass = -1.0"));
    let out = rfom2(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("error:FunctionUndefined"));
}

use std::process::{Command, Output};

fn fraclap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraclap")).args(args).output().expect("binary runs")
}

#[test]
fn apply_cosine_half_order() {
    let out = fraclap(&["apply", "--n", "1", "--sigma", "0.5", "--grid", "64", "--method", "spectral", "--v", "cos:1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# n=1 N=64"));
    for (j, line) in lines.enumerate() {
        let z = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (j + 1) as f64 / 64.0;
        let value: f64 = line.parse().unwrap();
        assert!((value - z.cos()).abs() < 1e-14);
    }
}

#[test]
fn methods_agree_through_cli() {
    for method in ["kernel", "extension"] {
        let out = fraclap(&["apply", "--sigma", "0.3", "--grid", "32", "--method", method, "--v", "random:4", "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{method}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn transfer_example_passes() {
    let out = fraclap(&["transfer", "--n", "1", "--sigma", "0.3", "--v", "cos:1", "--phi", "gauss:0.5", "--tol", "1e-7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let residual: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("residual = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual <= 1e-7);
    assert!(text.contains("status = PASS"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let runs = [
        vec!["apply", "--n", "2", "--grid", "16", "--v", "random:3", "--seed", "11"],
        vec!["hoelder", "--sigma", "0.2", "--alpha", "0.9", "--samples", "5", "--grid", "32", "--seed", "5"],
        vec!["harnack", "--trials", "10", "--seed", "2"],
    ];
    for args in runs {
        let a = fraclap(&args);
        let b = fraclap(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let unknown = fraclap(&["apply", "--frobnicate", "3"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("--frobnicate"));
    assert_eq!(fraclap(&["apply", "--method", "kernel", "--grid", "8"]).status.code(), Some(2));
    assert_eq!(fraclap(&["apply", "--n", "3", "--method", "kernel", "--grid", "64"]).status.code(), Some(2));
    assert_eq!(fraclap(&["hoelder", "--case", "3", "--alpha", "0.2", "--sigma", "0.6"]).status.code(), Some(2));
    assert_eq!(fraclap(&["apply", "--sigma", "1.5"]).status.code(), Some(2));
    // a tolerance no method can meet is a check failure
    assert_eq!(fraclap(&["bessel", "--sigma", "0.3", "--tol", "1e-40"]).status.code(), Some(1));
}

#[test]
fn manifest_records_run() {
    let dir = std::env::temp_dir().join(format!("fraclap-manifest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    let out_path = dir.join("kernel.csv");
    let out = fraclap(&[
        "kernel", "--n", "2", "--sigma", "0.4", "--grid", "8",
        "--manifest", path.to_str().unwrap(), "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["subcommand"], "kernel");
    assert_eq!(json["parameters"]["sigma"], 0.4);
    assert!(json["parameters"]["kernel_constant_printed"].is_number());
    assert!(json["error_budget"]["lattice_tail"].is_number());
    assert_eq!(std::fs::read_to_string(&out_path).unwrap().lines().count(), 1 + 63);
    std::fs::remove_dir_all(&dir).unwrap();
}

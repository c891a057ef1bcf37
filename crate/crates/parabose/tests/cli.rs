//! End-to-end tests of the `parabose` binary: output contracts, exit codes,
//! determinism, config precedence, and file output.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parabose"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn poly_hermite_golden_coefficients() {
    let out = run(&["poly", "hermite", "--n", "2", "--p", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["family"], "hermite");
    assert_eq!(v["n"], 2);
    assert_eq!(v["p"], "2");
    assert_eq!(v["coeffs"], serde_json::json!(["-4", "0", "4"]));
}

#[test]
fn poly_legendre_golden_coefficients() {
    let out = run(&["poly", "legendre", "--n", "1", "--p", "5"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!(["0", "1"]));
}

#[test]
fn poly_accepts_rational_order() {
    // [1] = p, so the constant coefficient of H_2 is -2p = -5 at p = 5/2.
    let out = run(&["poly", "hermite", "--n", "2", "--p", "5/2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["p"], "5/2");
    assert_eq!(v["coeffs"], serde_json::json!(["-5", "0", "4"]));
}

#[test]
fn poly_eval_prints_fixed_format_float() {
    // H_2(2) = 4*4 - 4 = 12 at p = 2.
    let out = run(&["poly", "hermite", "--n", "2", "--p", "2", "--eval", "2.0"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["eval_at"], "2.0000000000000000e0");
    assert_eq!(v["eval"], "1.2000000000000000e1");
}

#[test]
fn poly_csv_shape() {
    let out = run(&["poly", "hermite", "--n", "2", "--p", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,p,coeffs"));
    assert_eq!(lines.next(), Some("hermite,2,2,-4 0 4"));
    assert_eq!(lines.next(), None);
}

#[test]
fn norms_closed_form_matches_first_excitation() {
    let out = run(&["norms", "--nmax", "2", "--p", "3", "--r", "0.5"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let rows: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    let closed: f64 = rows[1]["closed_form"].as_str().unwrap().parse().unwrap();
    let expected = 3.0 * 0.5_f64.cosh() * 0.5_f64.cosh();
    assert!((closed - expected).abs() < 1e-12 * expected);
}

#[test]
fn norms_csv_header() {
    let out = run(&["norms", "--nmax", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    assert_eq!(
        text.lines().next(),
        Some("p,n,r,numeric,closed_form,abs_diff,rel_diff")
    );
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn verify_passing_scope_exits_zero_with_json_lines() {
    let out = run(&["verify", "--scope", "polynomials"]);
    assert_eq!(code(&out), 0);
    for line in stdout_str(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass", "unexpected failure: {line}");
        for key in ["id", "scope", "params", "deviation", "tol"] {
            assert!(v.get(key).is_some(), "missing {key} in {line}");
        }
    }
}

#[test]
fn verify_csv_header() {
    let out = run(&["verify", "--scope", "algebra", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_str(&out).lines().next(),
        Some("id,scope,params,deviation,tol,status")
    );
}

#[test]
fn verify_fault_injection_flips_exit_and_names_check() {
    let out = run(&[
        "verify",
        "--scope",
        "algebra",
        "--inject-fault",
        "algebra-vacuum-order",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout_str(&out);
    assert!(text
        .lines()
        .any(|l| l.contains("\"id\":\"algebra-vacuum-order\"") && l.contains("\"status\":\"fail\"")));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("algebra-vacuum-order"));
}

#[test]
fn usage_error_exits_two() {
    let out = run(&["no-such-subcommand"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_format_exits_two() {
    let out = run(&["poly", "hermite", "--n", "1", "--p", "2", "--format", "xml"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
}

#[test]
fn state_too_small_space_exits_two() {
    // |n = 10, r = 1> does not fit a 16-level space; the tool must say so
    // rather than return a silently clipped vector.
    let out = run(&["state", "--n", "10", "--r", "1.0", "--dim", "16"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
}

#[test]
fn state_compare_reports_small_difference() {
    let out = run(&["state", "--n", "2", "--r", "0.5", "--p", "2", "--compare"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    let diff: f64 = v["max_abs_diff"].as_str().unwrap().parse().unwrap();
    assert!(diff < 1e-10, "closed vs numeric diff {diff:e}");
    assert_eq!(v["amplitudes"].as_array().unwrap().len(), 64);
}

#[test]
fn propagator_boundary_time_matches_overlap() {
    let out = run(&[
        "propagator",
        "--p",
        "2",
        "--t0",
        "0.3",
        "--times",
        "0.3",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("p,omega,k,t0,t,"));
    assert!(header.ends_with("abs_diff"));
    let mut rows = 0;
    for line in lines {
        let abs_diff: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(abs_diff < 1e-10, "boundary sample differs: {line}");
        rows += 1;
    }
    assert_eq!(rows, 9, "3 labels x 1 time x 3 labels");
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--scope", "polynomials", "--format", "csv"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn header_flag_prepends_version_line() {
    let out = run(&["poly", "hermite", "--n", "1", "--p", "2", "--header"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    assert_eq!(
        text.lines().next(),
        Some(concat!("# parabose ", env!("CARGO_PKG_VERSION")))
    );
}

#[test]
fn out_flag_writes_identical_bytes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let args = ["norms", "--nmax", "3", "--format", "csv"];
    let direct = run(&args);
    assert_eq!(code(&direct), 0);

    let mut with_out: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap();
    with_out.extend_from_slice(&["--out", path_str]);
    let redirected = run(&with_out);
    assert_eq!(code(&redirected), 0);
    assert!(redirected.stdout.is_empty(), "stdout silent when --out given");
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn config_file_fills_defaults_but_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("defaults.conf");
    std::fs::write(
        &cfg,
        "# shared defaults\nnmax=5\nr=0.25\np=3\n\n",
    )
    .unwrap();
    let out = run(&[
        "norms",
        "--config",
        cfg.to_str().unwrap(),
        "--nmax",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let rows: Vec<serde_json::Value> = stdout_str(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    // --nmax 2 beats the config's nmax=5; p and r come from the file.
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["p"], 3);
    assert_eq!(rows[0]["r"].as_str().unwrap(), "2.5000000000000000e-1");
}

#[test]
fn missing_config_file_exits_two() {
    let out = run(&[
        "norms",
        "--nmax",
        "1",
        "--config",
        "/nonexistent/path/defaults.conf",
    ]);
    assert_eq!(code(&out), 2);
}

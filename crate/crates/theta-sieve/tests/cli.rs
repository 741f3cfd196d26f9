//! End-to-end checks of the command-line surface: exit codes, wire
//! formats, and byte-level determinism of repeated invocations.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_theta-sieve"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn member_exit_codes_and_json() {
    let ok = run(&["member", "--n", "12", "--theta", "sigma+1", "--mode", "B"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), r#"{"member":true,"n":12}"#);

    let no = run(&["member", "--n", "4", "--theta", "n+1", "--mode", "D"]);
    assert_eq!(no.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&no).trim()).unwrap();
    assert_eq!(v["member"], false);
    assert_eq!(v["witness"]["value"], 4);

    let trivial = run(&["member", "--n", "1", "--theta", "linear:2", "--mode", "B"]);
    assert_eq!(trivial.status.code(), Some(0));

    let bad = run(&["member", "--n", "3", "--theta", "no-such-family"]);
    assert_eq!(bad.status.code(), Some(2));

    let usage = run(&["member", "--n", "not-a-number", "--theta", "2^n"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn count_wire_format() {
    let out = run(&["count", "--x", "10", "--theta", "linear:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        r#"{"count":5,"theta":"linear:2","x":10.0}"#
    );
}

#[test]
fn enumerate_streams_one_integer_per_line() {
    let out = run(&["enumerate", "--x", "10", "--theta", "sigma+1"]);
    let mut got: Vec<u64> = stdout(&out)
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    got.sort_unstable();
    assert_eq!(got, vec![1, 2, 4, 6, 8]);
}

#[test]
fn phi_accepts_infinity() {
    let out = run(&["phi", "--x", "10", "--y", "inf"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["phi"], 1);
    let bad = run(&["phi", "--x", "10", "--y", "1.5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn lambda_table_is_deterministic_and_complete() {
    let first = run(&["lambda-table"]);
    let second = run(&["table1"]); // alias
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "outputs must be byte-identical");
    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,lambda"));
    assert_eq!(lines.count(), 22);
    assert!(text.contains("1.5,5.985847722e-1"));
}

#[test]
fn density_json_fields() {
    let out = run(&["density", "--theta", "2^n", "--width", "1e-3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let lo: f64 = v["density_lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = v["density_hi"].as_str().unwrap().parse().unwrap();
    assert!(lo <= 0.2265 && 0.2265 <= hi);
    // unsupported family: nonzero exit, diagnostic on stderr
    let err = run(&["density", "--theta", "sigma+1"]);
    assert_eq!(err.status.code(), Some(1));
    assert!(String::from_utf8(err.stderr.clone()).unwrap().contains("tail"));
}

#[test]
fn verify_identity_suite_passes() {
    let out = run(&["verify", "identity", "--x", "1000", "--theta", "sigma+1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
    assert!(text.contains("summary,3 passed,0 failed"));

    let bad = run(&["verify", "no-such-suite"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn fa_and_buchstab_emit_csv_headers() {
    let fa = run(&["fa", "--a", "1", "--zmax", "2", "--out-step", "0.5"]);
    let text = stdout(&fa);
    assert_eq!(text.lines().next(), Some("z,f"));
    assert_eq!(text.lines().count(), 6); // header + z = 0, .5, 1, 1.5, 2
    let b = run(&["buchstab", "--u-max", "3", "--out-step", "0.5"]);
    let text = stdout(&b);
    assert_eq!(text.lines().next(), Some("u,omega,omega_prime"));
    assert!(text.contains("1.500000000e0,6.666666667e-1"));
}

#[test]
fn verify_bounds_omega_and_zero_free_pass() {
    let bounds = run(&["verify", "bounds", "--a-grid", "1:10:1"]);
    assert_eq!(bounds.status.code(), Some(0), "{}", stdout(&bounds));
    let omega = run(&["verify", "omega"]);
    assert_eq!(omega.status.code(), Some(0), "{}", stdout(&omega));
    let zf = run(&["verify", "zero-free"]);
    assert_eq!(zf.status.code(), Some(0), "{}", stdout(&zf));
    assert!(stdout(&zf).contains("summary,14 passed,0 failed"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let default = run(&["lambda-table"]);
    let capped = bin()
        .args(["lambda-table"])
        .env("THETA_SIEVE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(default.stdout, capped.stdout);
}

#[test]
fn report_goes_to_stderr_only() {
    let with = bin()
        .args(["count", "--x", "10", "--theta", "2^n", "--report"])
        .output()
        .unwrap();
    let without = run(&["count", "--x", "10", "--theta", "2^n"]);
    assert_eq!(with.stdout, without.stdout, "report must not touch stdout");
    let report: serde_json::Value =
        serde_json::from_str(String::from_utf8(with.stderr).unwrap().trim()).unwrap();
    assert_eq!(report["command"], "count");
    assert!(report["wall_time_ms"].as_f64().unwrap() >= 0.0);
}

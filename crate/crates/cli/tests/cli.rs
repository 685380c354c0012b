use std::io::Write;
use std::process::Command;

use massey_cli::{run, Output};

const QUINTIC: &str = "x0^5 + x1^5 + x2^5";

fn massey(args: &[&str]) -> Output {
    run(std::iter::once("massey").chain(args.iter().copied()))
}

fn file_with(lines: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(lines.as_bytes()).unwrap();
    f
}

#[test]
fn smooth_reports_hilbert_function() {
    let out = massey(&["smooth", "--curve", QUINTIC]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("1 3 6 10 12 12 10 6 3 1 0"), "{}", out.stdout);
    assert_eq!(massey(&["smooth", "--curve", "x0^3"]).code, 3);
    assert_eq!(massey(&["smooth", "--curve", "x0^3 + x1^"]).code, 2);
    assert_eq!(massey(&["smooth", "--curve", "x0^2 + x1^2 + x2^2"]).code, 2);
}

#[test]
fn massey_second_example() {
    let out = massey(&[
        "massey", "--curve", QUINTIC, "--u0", "-1/6*x0^3*x1^2*x2^2", "--u1", "x2^2", "--u2", "2/9*x0^4*x2^3",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("<U0,U1,U2> = 1/8640000"), "{}", out.stdout);
}

#[test]
fn massey_json_document() {
    let out = massey(&[
        "--json", "massey", "--curve", QUINTIC, "--u0", "-1/6*x0^3*x1^2*x2^2", "--u1", "x2^2", "--u2",
        "2/9*x0^4*x2^3",
    ]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["manifest"]["command"], "massey");
    assert_eq!(v["curve"]["genus"], 6);
    assert_eq!(v["result"]["value"], "1/8640000");
    assert_eq!(v["result"]["det_g"], "8000000*x0^7*x1^7*x2^7");
}

#[test]
fn obstruction_and_degree_errors() {
    let out = massey(&["massey", "--curve", QUINTIC, "--u0", "x0^2*x1^2*x2^3", "--u1", "x0*x1", "--u2", "x0^7"]);
    assert_eq!(out.code, 4);
    assert!(out.stderr.contains("U0*U1"), "{}", out.stderr);
    let out = massey(&["massey", "--curve", QUINTIC, "--u0", "x0^6", "--u1", "x2^2", "--u2", "x0^7"]);
    assert_eq!(out.code, 2);
    assert_eq!(massey(&["cup", "--curve", QUINTIC, "--ua", "x0", "--ub", "x1"]).code, 2);
}

#[test]
fn cup_pairing_and_witness() {
    let out = massey(&["cup", "--curve", QUINTIC, "--ua", "x2^2", "--ub", "2/9*x0^4*x2^3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("2/45*x0^4*x2"), "{}", out.stdout);
    let out = massey(&["--json", "cup", "--curve", QUINTIC, "--ua", "x0*x1", "--ub", "x0^2*x1^2*x2^3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["result"]["vanishing"], false);
    assert_eq!(v["result"]["pairing"], "1/8000");
}

#[test]
fn inputs_from_files() {
    let curve = file_with("# Fermat quintic\n\nx0^5 + x1^5 + x2^5\n");
    let path = curve.path().to_str().unwrap();
    assert_eq!(massey(&["smooth", "--curve", path]).code, 0);

    let witnesses = file_with(
        "# R(01)\n0\n0\n-1/30*x0^3*x1^2\n# R(12)\n2/45*x2^5\n0\n0\n",
    );
    let out = massey(&[
        "massey", "--curve", path, "--u0", "-1/6*x0^3*x1^2*x2^2", "--u1", "x2^2", "--u2", "2/9*x0^4*x2^3",
        "--witness-file", witnesses.path().to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("<U0,U1,U2> = 0"), "{}", out.stdout);

    let bad = file_with("0\n0\nx0^5\n0\n0\n0\n");
    let out = massey(&[
        "massey", "--curve", path, "--u0", "-1/6*x0^3*x1^2*x2^2", "--u1", "x2^2", "--u2", "2/9*x0^4*x2^3",
        "--witness-file", bad.path().to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2);
}

#[test]
fn search_is_reproducible() {
    let a = massey(&["--json", "search", "--curve", "x0^4 + x1^4 + x2^4", "--seed", "3"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let b = massey(&["--json", "--threads", "1", "search", "--curve", "x0^4 + x1^4 + x2^4", "--seed", "3"]);
    let strip = |s: &str| {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        v["manifest"]["timestamp"] = serde_json::Value::Null;
        v
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
    let out = massey(&["search", "--curve", "x0^8 + x1^8 + x2^8", "--max-terms", "100", "--budget", "3"]);
    assert_eq!(out.code, 5);
}

#[test]
fn experiment_is_thread_independent() {
    let args = ["experiment", "--n-range", "3..5", "--ell", "1,inf", "--samples", "120", "--seed", "7"];
    let one = massey(&[&["--threads", "1"][..], &args[..]].concat());
    let four = massey(&[&["--threads", "4"][..], &args[..]].concat());
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, four.stdout);
    assert!(one.stdout.starts_with("n,ell,samples,vanish_count,ratio_num,ratio_den,seed,elapsed_ms\n"));
    assert_eq!(one.stdout.lines().count(), 1 + 3 * 2);
    assert_eq!(massey(&["experiment", "--ell", "0", "--samples", "5"]).code, 2);
    assert_eq!(massey(&["experiment", "--n-range", "2..4"]).code, 2);
}

#[test]
fn verify_paper_detects_corruption() {
    let out = massey(&["verify-paper"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("7/7 fixtures passed"));
    for name in ["det_g_fermat_quintic", "example1_u1u2", "example2_massey"] {
        let out = massey(&["verify-paper", "--corrupt", name]);
        assert_ne!(out.code, 0, "{name}");
        assert!(out.stdout.contains("6/7 fixtures passed"), "{}", out.stdout);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_massey");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["verify-paper"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(status(&["smooth", "--curve", "x0^3"]).status.code(), Some(3));
    assert_eq!(status(&["bogus"]).status.code(), Some(2));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}

//! CLI acceptance: output determinism (criterion 10) and the exit-code
//! contract (0 success, 2 usage or bad input, 3 numeric failure, 4
//! unsupported combination).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn c2dl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_c2dl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn run_compare(out: &Path) -> Vec<u8> {
    let status = c2dl(
        &[
            "compare",
            "--model",
            "paper-ex1",
            "--h",
            "0.4",
            "--method",
            "tustin,zoh,impulse,loewner",
            "--e2",
            "impulse",
            "--out",
            out.to_str().unwrap(),
        ],
        out,
    );
    assert!(
        status.status.success(),
        "compare failed: {}",
        String::from_utf8_lossy(&status.stderr)
    );
    fs::read(out.join("compare.csv")).expect("compare.csv written")
}

#[test]
fn criterion_10_repeated_compare_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a");
    let second = tmp.path().join("b");
    fs::create_dir_all(&first).unwrap();
    fs::create_dir_all(&second).unwrap();
    let bytes_a = run_compare(&first);
    let bytes_b = run_compare(&second);
    let ok = bytes_a == bytes_b;
    println!(
        "{} criterion 10 (determinism): two compare runs, {} bytes each, identical = {ok}",
        if ok { "PASS" } else { "FAIL" },
        bytes_a.len()
    );
    assert!(ok, "compare.csv differs between identical runs");
}

#[test]
fn pinned_csv_headers_are_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let bytes = run_compare(tmp.path());
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("# config = {"));
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "method,order,stable,e_inf,e_inf_rel,argmax_omega,e2_pct"
    );

    let out = c2dl(
        &[
            "sweep", "--model", "paper-ex1", "--h", "0.4", "--m", "12", "--kmax", "5",
            "--out", tmp.path().to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "k,e_rel_unproj,e_rel_proj,stable_unproj,order_proj,gap_to_exact"
    );

    let out = c2dl(
        &[
            "respond", "--model", "paper-ex1", "--h", "0.4", "--method", "zoh",
            "--signal", "step", "--out", tmp.path().to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(tmp.path().join("respond_zoh.csv")).unwrap();
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "t,y_continuous,y_held_discrete,error"
    );
}

#[test]
fn missing_required_flag_exits_with_usage_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = c2dl(&["discretize", "--model", "paper-ex1"], tmp.path());
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn invalid_period_exits_with_usage_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = c2dl(
        &["discretize", "--model", "paper-ex1", "--h", "0"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn classic_rule_on_a_delay_network_exits_unsupported() {
    let tmp = tempfile::tempdir().unwrap();
    let out = c2dl(
        &["compare", "--model", "paper-tds", "--h", "0.2", "--method", "tustin"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn singular_bilinear_transform_exits_with_numeric_code() {
    let tmp = tempfile::tempdir().unwrap();
    let model = tmp.path().join("pole.json");
    // A has eigenvalue 2/h = 5, which the bilinear rule cannot map.
    fs::write(
        &model,
        r#"{"type":"css","A":[[5.0]],"B":[[1.0]],"C":[[1.0]],"D":[[0.0]]}"#,
    )
    .unwrap();
    let out = c2dl(
        &[
            "compare",
            "--model",
            model.to_str().unwrap(),
            "--h",
            "0.4",
            "--method",
            "tustin",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

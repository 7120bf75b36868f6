use std::process::Command;

fn verify(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn degenerate_order_exits_inconclusive() {
    let out = verify(&["thm1", "--nmax", "2", "--order", "16"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(2), "{stdout}");
    assert!(stdout.contains("INCONCLUSIVE"));
    assert!(!stdout.contains("FAIL "));
}

#[test]
fn repeated_runs_write_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let common = [
        "counterexample",
        "--order",
        "4096",
        "--seed",
        "7",
        "--workers",
        "2",
    ];
    for path in [&a, &b] {
        let mut args = common.to_vec();
        args.extend(["--out", path.to_str().unwrap()]);
        verify(&args);
    }
    let ja = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ja, std::fs::read_to_string(&b).unwrap());
    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["environment"]["seed"], 7);
}

#[test]
fn csv_directory_receives_norm_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = verify(&[
        "bflq",
        "--nmax",
        "8",
        "--order",
        "256",
        "--csv",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.code().is_some());
    let csv = std::fs::read_to_string(dir.path().join("bflq_norms.csv")).unwrap();
    assert!(csv.starts_with(
        "N,aplus_truncated,aplus_certified,arclength_measured,arclength_predicted,rel_err"
    ));
    assert_eq!(csv.lines().count(), 8);
}

#[test]
fn invalid_configuration_is_rejected() {
    let out = verify(&["thm2", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--p"));
    let out = verify(&["thm7"]);
    assert!(!out.status.success());
}

use std::process::{Command, Output};

fn qfreq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfreq")).args(args).output().unwrap()
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["fidelity-bound", "--gamma", "-1"][..],
        &["mle-curve", "--n-atoms", "5"],
        &["trajectories", "--paths", "0"],
        &["precision-curve", "--n-atoms", "x"],
        &["fidelity-bound", "--eta-h", "1.5"],
    ] {
        let out = qfreq(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(qfreq(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn out_file_and_config_replay() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    let out = qfreq(&["mle-curve", "--nu", "500", "--points", "8", "--out", first.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let replay = qfreq(&[
        "mle-curve",
        "--config",
        first.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(replay.status.success());
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    let text = std::fs::read_to_string(&first).unwrap();
    assert!(text.lines().nth(2).unwrap().starts_with("T,delta_omega_dfs,bound_dfs,delta_omega_product,bound_product"));
    let wrong = qfreq(&["fidelity-bound", "--config", first.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn json_format_and_trajectory_summary() {
    let out = qfreq(&["fidelity-bound", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert_eq!(v["config"]["command"], "fidelity-bound");

    let out = qfreq(&["trajectories", "--paths", "5000", "--seed", "123"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 123);
    assert_eq!(v["n_paths"], 5000);
    assert_eq!(v["method"], "exact");
    assert!(v["analytic_magnitude"].as_f64().unwrap() > 0.0);
}

#[test]
fn csv_uses_scientific_notation() {
    let out = qfreq(&["fidelity-bound", "--n-atoms", "14"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(3).unwrap();
    let value = row.split(',').nth(1).unwrap();
    let (mantissa, _) = value.split_once('e').unwrap();
    assert_eq!(mantissa.replace(['.', '-'], "").len(), 17);
    assert!(!text.contains('\r'));
}

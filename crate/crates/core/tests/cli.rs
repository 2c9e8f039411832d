//! The `symfid` binary: exit codes, column sets, and byte-stable output.

use std::process::{Command, Output};

fn symfid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symfid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn header(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

#[test]
fn unknown_command_exits_with_usage_error() {
    let o = symfid(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_and_malformed_flags_are_usage_errors() {
    assert_eq!(symfid(&[]).status.code(), Some(2));
    assert_eq!(symfid(&["limits", "--k-max", "two"]).status.code(), Some(2));
    assert_eq!(
        symfid(&["table1", "--format", "xml"]).status.code(),
        Some(2)
    );
}

#[test]
fn runtime_errors_exit_with_one() {
    let o = symfid(&["fig1", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(
        symfid(&["inverse", "--n", "3", "--k", "2"]).status.code(),
        Some(1)
    );
    let o = symfid(&["limits", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inverse_prints_one_fourteenth() {
    let o = symfid(&["inverse", "--n", "4", "--k", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "N,k,fidelity\n4,2,0.0714285714286\n");
}

#[test]
fn column_sets() {
    let cases: [(&[&str], &str); 8] = [
        (&["table1"], "N,k,fs_closed,fs_numeric,abs_diff"),
        (&["fig1", "--n-max", "6"], "N,k,fs_symmetric,f_full"),
        (&["limits"], "k,limit,fs_at_large_n,abs_diff"),
        (&["ce-sweep", "--points", "3"], "eps,fidelity,residual_norm"),
        (
            &["lu-check", "--n", "2", "--trials", "2", "--restarts", "2"],
            "trial,value_independent,value_symmetric,gap",
        ),
        (&["inverse"], "N,k,fidelity"),
        (&["symfid"], "N,k,kp,fs,x,xp,y,converged"),
        (&["oracle"], "N,k,kp,fs_formula,fs_brute_force,abs_diff"),
    ];
    for (args, expected) in cases {
        let o = symfid(args);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(header(&o), expected, "{args:?}");
    }
}

#[test]
fn fig1_rows_start_at_n_equal_2k() {
    let o = symfid(&["fig1", "--n-max", "12"]);
    let out = stdout(&o);
    for k in 2..=6 {
        let first_n: usize = out
            .lines()
            .skip(1)
            .map(|l| {
                l.split(',')
                    .map(|c| c.parse::<f64>().unwrap())
                    .collect::<Vec<_>>()
            })
            .find(|r| r[1] as usize == k)
            .map(|r| r[0] as usize)
            .unwrap();
        assert_eq!(first_n, 2 * k);
    }
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &[
            "lu-check",
            "--n",
            "3",
            "--trials",
            "3",
            "--restarts",
            "5",
            "--seed",
            "7",
        ][..],
        &["fig1", "--n-max", "10"][..],
        &["ce-sweep", "--n", "6", "--k", "3", "--format", "json"][..],
    ] {
        let (a, b) = (symfid(args), symfid(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn lu_check_reports_seed_and_gap() {
    let o = symfid(&["lu-check", "--n", "3", "--trials", "20"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("seed=42"));
    let gap: f64 = err
        .lines()
        .find_map(|l| l.strip_prefix("max_gap="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(gap <= 1e-6);
}

#[test]
fn symfid_and_oracle_agree() {
    let field = |o: &Output, col: &str| -> f64 {
        let out = stdout(o);
        let mut lines = out.lines();
        let idx = lines
            .next()
            .unwrap()
            .split(',')
            .position(|c| c == col)
            .unwrap();
        lines
            .next()
            .unwrap()
            .split(',')
            .nth(idx)
            .unwrap()
            .parse()
            .unwrap()
    };
    let args = ["--n", "4", "--k", "1", "--kp", "2"];
    let s = symfid(&[&["symfid"][..], &args].concat());
    let o = symfid(&[&["oracle"][..], &args].concat());
    assert!((field(&s, "fs") - field(&o, "fs_brute_force")).abs() < 1e-5);
}

#[test]
fn json_and_file_output() {
    let dir = std::env::temp_dir().join(format!("symfid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("limits.json");
    let o = symfid(&[
        "limits",
        "--k-max",
        "4",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["k"], 3);
    assert!((rows[1]["limit"].as_f64().unwrap() - 0.322).abs() < 5e-4);
    std::fs::remove_dir_all(&dir).unwrap();
}

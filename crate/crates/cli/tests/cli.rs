use std::process::{Command, Output};

fn giant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_giant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_prints_six_decimals() {
    let o = giant(&["solve", "--pmf", "1:0.5,3:0.5"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "mu,nu,z_tilde,xi\n2.000000,1.500000,0.333333,0.814815\n"
    );

    let o = giant(&["solve", "--pmf", "3:1.0"]);
    assert_eq!(
        stdout(&o),
        "mu,nu,z_tilde,xi\n3.000000,2.000000,0.000000,1.000000\n"
    );
}

#[test]
fn solve_json_is_full_precision() {
    let o = giant(&["solve", "--pmf", "1:0.5,3:0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["xi"].as_f64().unwrap() - 22.0 / 27.0).abs() < 1e-13);
}

#[test]
fn validation_errors_exit_2() {
    let o = giant(&["solve", "--pmf", "2:1.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("2-regular"));

    let o = giant(&["solve", "--pmf", "2:1.0", "--error-json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "DegenerateTwoRegular");
    assert_eq!(v["exit_code"], 2);

    assert_eq!(
        giant(&["solve", "--pmf", "1:0.5,3:0.4"]).status.code(),
        Some(2)
    );
    assert_eq!(giant(&["solve"]).status.code(), Some(2));
    assert_eq!(
        giant(&["bounds", "--prefix", "0.7,0,0", "--mu", "1.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table1_csv() {
    let o = giant(&["table1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "prefix,mu,L,p_gt_L,lower_prop1,lower_thm_a,upper_thm_b"
    );
    assert_eq!(lines.len(), 7);
    let expected = [
        "0.9140,0.9504,0.9508",
        "0.5896,0.9019,0.9103",
        "0.7023,0.7247,0.7318",
        "0.7023,0.8319,0.8366",
        "0.7047,0.7553,0.7680",
        "0.7047,0.8836,0.8851",
    ];
    for (line, want) in lines[1..].iter().zip(expected) {
        assert!(line.ends_with(want), "{line}");
    }
}

#[test]
fn bounds_single_row() {
    let o = giant(&["bounds", "--prefix", "0.7,0,0", "--mu", "2"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().nth(1).unwrap(),
        "\"(0.7, 0, 0)\",2,3,0.3000,0.7023,0.7247,0.7318"
    );
}

#[test]
fn simulate_is_deterministic_and_needs_seed() {
    let args = [
        "simulate", "--pmf", "3:1.0", "--n", "10000", "--reps", "2", "--seed", "7", "--format",
        "json",
    ];
    let a = giant(&args);
    let b = giant(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["fractions"].as_array().unwrap().len(), 2);

    let one = giant(&[
        "simulate",
        "--pmf",
        "1:0.5,3:0.5",
        "--n",
        "5000",
        "--reps",
        "4",
        "--seed",
        "3",
        "--threads",
        "1",
    ]);
    let many = giant(&[
        "simulate",
        "--pmf",
        "1:0.5,3:0.5",
        "--n",
        "5000",
        "--reps",
        "4",
        "--seed",
        "3",
        "--threads",
        "4",
    ]);
    assert_eq!(one.stdout, many.stdout);

    let o = giant(&["simulate", "--pmf", "3:1.0", "--n", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn maxgap_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let run = |threads: &str| {
        let o = giant(&[
            "maxgap",
            "--lengths",
            "2",
            "--mu-lo",
            "1.8",
            "--mu-hi",
            "2.2",
            "--threads",
            threads,
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        ["maxgap.json", "table2.csv", "figure3.csv"].map(|f| std::fs::read(out.join(f)).unwrap())
    };
    let a = run("1");
    let b = run("3");
    assert_eq!(a, b);
    let table2 = String::from_utf8(a[1].clone()).unwrap();
    let row = table2.lines().nth(1).unwrap();
    assert!(row.starts_with("2,0.0557,"), "{row}");
    assert!(row.ends_with(",2,0.7059,0.7616"), "{row}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"pmf": "3:1.0", "format": "json"}"#).unwrap();
    let o = giant(&["solve", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["xi"], 1.0);

    let o = giant(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--pmf",
        "1:0.5,3:0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&o),
        "mu,nu,z_tilde,xi\n2.000000,1.500000,0.333333,0.814815\n"
    );

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(
        giant(&["solve", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn pmf_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let pmf = dir.path().join("f.txt");
    std::fs::write(&pmf, "# degree\tprob\n1\t0.5\n3\t0.5\n").unwrap();
    let out = dir.path().join("solve.csv");
    let o = giant(&[
        "solve",
        "--pmf-file",
        pmf.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("0.814815"));
}

#[test]
fn figures_emit_csv_and_warn_on_empty_series() {
    let o = giant(&["figures", "1a"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("control,xi,nu\n0,1,"));
    assert_eq!(text.lines().count(), 47);

    let o = giant(&["figures", "2b"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(giant(&["figures", "3"]).status.code(), Some(2));
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opdyn"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const TABLE: &str = r#"{
  "space": {"kind": "table", "vertices": [0, 1, 2], "metric": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]},
  "weight": {"kind": "table", "entries": [[0, "1"], [1, "1/2"], [2, "1/3"]]},
  "symbol": {"kind": "table", "entries": [[0, 1], [1, 2], [2, 0]], "inverse": true},
  "horizons": {"rmax": 2, "nmax": 16, "search_radius": 2, "k": 2}
}"#;

#[test]
fn exit_codes_follow_the_verdict() {
    let grid = example("grid_geometric.json");
    let line = example("line_shift_reciprocal.json");
    let cases: [(&[&str], &Path, i32); 6] = [
        (&["bounded-little", "--rmax", "80"], &grid, 0),
        (&["bounded-little"], &example("grid_unweighted.json"), 1),
        (&["hc-check"], &line, 0),
        (&["hc-check"], &example("ray_identity.json"), 1),
        (
            &["hc-sequence"],
            &example("ray_geometric_decreasing.json"),
            0,
        ),
        (&["norm"], &line, 0),
    ];
    for (args, config, code) in cases {
        let out = bin().args(args).arg(config).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(code),
            "{args:?} {}:\n{}",
            config.display(),
            stdout(&out)
        );
    }
}

#[test]
fn malformed_json_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"space\": {\n    \"kind\": ray\n  }\n}").unwrap();
    let out = run(&["norm", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn missing_file_and_bad_arguments_are_usage_errors() {
    assert_eq!(
        run(&["norm", "/nonexistent/instance.json"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    let line = example("line_shift_reciprocal.json");
    assert_eq!(
        run(&["norm", line.to_str().unwrap(), "--tol", "-1/2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["norm", line.to_str().unwrap(), "--rmax", "0"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn unknown_kinds_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.json");
    fs::write(&path, r#"{"space":{"kind":"torus"},"weight":{"kind":"constant_one"},"symbol":{"kind":"identity"}}"#).unwrap();
    let out = run(&["norm", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("torus"));
}

#[test]
fn leaving_a_table_is_a_horizon_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    fs::write(&path, TABLE).unwrap();
    let out = run(&["norm", path.to_str().unwrap(), "--rmax", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("horizon"), "{}", stderr(&out));
    assert!(stderr(&out).contains("table radius 2"));

    let out = run(&["hc-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("decisive obstruction: periodic-point"));
}

#[test]
fn csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    let line = example("line_shift_reciprocal.json");
    let cases: [(&str, PathBuf, &str); 5] = [
        ("norm", line.clone(), "radius,value_num,value_den,witness"),
        (
            "hc-sequence",
            line.clone(),
            "k,n_k,forward_num,forward_den,backward_num,backward_den",
        ),
        (
            "hc-vector",
            line.clone(),
            "n,target_index,error_num,error_den",
        ),
        ("orbit", line.clone(), "n,target_index,error_num,error_den"),
        ("hc-check", line, "obstruction,status,detail"),
    ];
    for (cmd, config, header) in cases {
        let csv = dir.path().join(format!("{cmd}.csv"));
        let out = bin()
            .arg(cmd)
            .arg(&config)
            .arg("--csv")
            .arg(&csv)
            .arg("--quiet")
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", stderr(&out));
        let text = fs::read_to_string(&csv).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{cmd}");
        assert!(text.lines().count() > 1, "{cmd} wrote no rows");
    }
    let csv = dir.path().join("selftest.csv");
    let out = bin()
        .args(["selftest", "--quiet", "--csv"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("suite,cases,passed,failure"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn norm_profile_rows_are_exact() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let out = bin()
        .arg("norm")
        .arg(example("line_shift_reciprocal.json"))
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 41);
    assert!(rows.iter().all(|r| r.ends_with(",2,1,0")), "{rows:?}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let line = example("line_shift_reciprocal.json");
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2", "1"].iter().enumerate() {
        let csv = dir.path().join(format!("run{i}.csv"));
        let out = bin()
            .arg("hc-vector")
            .arg(&line)
            .arg("--csv")
            .arg(&csv)
            .env("OPDYN_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        outputs.push((out.stdout, fs::read(&csv).unwrap()));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn tolerance_flag_overrides_the_config() {
    let grid = example("grid_geometric.json");
    let strict = run(&["bounded-little", grid.to_str().unwrap(), "--rmax", "30"]);
    assert_eq!(strict.status.code(), Some(2), "{}", stdout(&strict));
    let loose = run(&[
        "bounded-little",
        grid.to_str().unwrap(),
        "--rmax",
        "30",
        "--tol",
        "1/2",
    ]);
    assert_eq!(loose.status.code(), Some(0), "{}", stdout(&loose));
}

#[test]
fn quiet_prints_one_line() {
    let out = run(&[
        "hc-check",
        example("grid_projection.json").to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).lines().count(), 1, "{}", stdout(&out));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("9 of 9 suites passed"));
}

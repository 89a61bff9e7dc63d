use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reflectode"))
}

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_problem(dir: &tempfile::TempDir, name: &str, json: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn solve_lebesgue_exp_matches_closed_form() {
    let p = problem("lebesgue_exp.json");
    let o = run(&["solve", "--problem", p.to_str().unwrap(), "--grid", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("t,u\n"));
    let rows = parse_csv(&text);
    assert_eq!(rows.len(), 101);
    let a = (1.0 - 2.0 * 0.5f64.sinh()) / (2.0 * 0.5f64.sin());
    for (i, row) in rows.iter().enumerate() {
        let t = -0.5 + i as f64 / 100.0;
        assert!((row[0] - t).abs() < 1e-15);
        assert!((row[1] - (t.cosh() + a * (t.cos() - t.sin()))).abs() < 1e-6);
    }
    assert!(stderr(&o).contains("residual"));
}

#[test]
fn every_shipped_problem_has_small_residuals() {
    for entry in std::fs::read_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems")).unwrap() {
        let path = entry.unwrap().path();
        if path.file_name().unwrap().to_str().unwrap().starts_with("resonant") {
            continue;
        }
        let o = run(&["solve", "--problem", path.to_str().unwrap(), "--grid", "200"]);
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
        let err = stderr(&o);
        let value = |prefix: &str| -> f64 {
            let line = err.lines().find(|l| l.starts_with(prefix)).unwrap();
            line.rsplit(' ').next().unwrap().parse().unwrap()
        };
        assert!(value("equation residual") < 1e-5, "{}: {err}", path.display());
        assert!(value("boundary residual") < 1e-6, "{}: {err}", path.display());
    }
}

#[test]
fn solve_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let p = problem("periodic_exp.json");
    let o = run(&[
        "solve",
        "--problem",
        p.to_str().unwrap(),
        "--grid",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows = parse_csv(&std::fs::read_to_string(out).unwrap());
    assert_eq!(rows.len(), 5);
    assert!((rows[2][1] - 1.0).abs() < 1e-9);
}

#[test]
fn resonant_functional_exits_3() {
    let p = problem("resonant_functional.json");
    let o = run(&["solve", "--problem", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("F(cos mt) = F(sin mt)"));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_expression_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(
        &dir,
        "bad.json",
        r#"{"m": 1, "T": 0.5, "h": "2**t", "bc": {"type": "periodic"}}"#,
    );
    let o = run(&["solve", "--problem", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 2"), "{}", stderr(&o));
}

#[test]
fn schema_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (i, json) in [
        r#"{"m": 1, "T": 0.5, "h": "t", "bc": {"type": "periodic"}, "extra": 0}"#,
        r#"{"m": 1, "T": 0.5, "h": "t", "bc": {"type": "lambda"}}"#,
        r#"{"m": 1, "T": 0.5, "h": "t"#,
        r#"{"m": 1, "T": 0.5, "h": "t", "bc": {"type": "functional", "F": {"atoms": [{"t": 3, "a": 1}]}, "c": 1}}"#,
    ]
    .iter()
    .enumerate()
    {
        let p = write_problem(&dir, &format!("p{i}.json"), json);
        let o = run(&["solve", "--problem", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{json}: {}", stderr(&o));
    }
    let o = run(&["solve", "--problem", "/nonexistent/problem.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn periodic_resonance_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(
        &dir,
        "r.json",
        r#"{"m": 6.283185307179586, "T": 0.5, "h": "1", "bc": {"type": "periodic"}}"#,
    );
    assert_eq!(run(&["solve", "--problem", p.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn lambda_override() {
    let p = problem("lambda_jump.json");
    let o = run(&[
        "solve",
        "--problem",
        p.to_str().unwrap(),
        "--grid",
        "10",
        "--lambda",
        "-0.5",
    ]);
    assert!(o.status.success());
    let rows = parse_csv(&stdout(&o));
    assert!((rows[0][1] - rows[10][1] + 0.5).abs() < 1e-8);
    let o = run(&["solve", "--problem", p.to_str().unwrap(), "--c", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn green_lattice() {
    let o = run(&["green", "--kind", "gbar", "--m", "1", "--T", "0.5", "--grid", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("t,s,value\n"));
    let rows = parse_csv(&text);
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r[2].is_finite()));

    let o = run(&["green", "--kind", "gbar", "--m", "1", "--T", "0.5", "--grid", "40"]);
    let sup = (1.0 + 1.0 / 0.5f64.sin()) / 2.0;
    assert!(parse_csv(&stdout(&o)).iter().all(|r| r[2] <= sup + 1e-6));

    for kind in ["hbar", "h"] {
        let o = run(&[
            "green",
            "--kind",
            kind,
            "--m",
            "3.141592653589793",
            "--T",
            "0.5",
            "--grid",
            "4",
        ]);
        assert_eq!(o.status.code(), Some(3), "{kind}");
    }
    let o = run(&["green", "--kind", "h", "--m", "0", "--T", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["green", "--kind", "hbar", "--m", "0", "--T", "0.5", "--grid", "2"]);
    assert!(o.status.success());
}

#[test]
fn positivity_report() {
    let p = problem("lebesgue_exp.json");
    let o = run(&["positivity", "--problem", p.to_str().unwrap(), "--threshold"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let k2 = json["computed"]["k2"].as_f64().unwrap();
    assert!((k2 - 4.91464).abs() < 1e-4);
    let c_star = json["computed"]["empirical_threshold"].as_f64().unwrap();
    assert!(c_star > 0.0 && c_star <= k2);
    assert_eq!(json["published"]["threshold"].as_f64(), Some(0.850502));
    assert_eq!(json["computed"]["certified"].as_bool(), Some(false));

    let o = run(&["positivity", "--problem", p.to_str().unwrap(), "--c", "5"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["computed"]["certified"].as_bool(), Some(true));
    assert!(json["computed"]["empirical_threshold"].is_null());
}

#[test]
fn positivity_hypotheses_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(
        &dir,
        "wide.json",
        r#"{"m": 1.8, "T": 0.5, "h": "exp(t)", "bc": {"type": "functional", "F": {"density": "1"}, "c": 1}}"#,
    );
    let o = run(&["positivity", "--problem", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let p = write_problem(
        &dir,
        "flipped.json",
        r#"{"m": 1, "T": 0.5, "h": "exp(t)", "bc": {"type": "functional", "F": {"density": "-1"}, "c": 1}}"#,
    );
    let o = run(&["positivity", "--problem", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("orientation"));
    let o = run(&[
        "positivity",
        "--problem",
        problem("periodic_exp.json").to_str().unwrap(),
    ]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn verify_commands() {
    let o = run(&["verify", "--kind", "antiperiodic", "--m", "1", "--T", "0.5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["verify", "--kind", "periodic", "--m", "1", "--T", "0.5"]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.contains("row integral")));
    let o = run(&[
        "verify",
        "--kind",
        "periodic",
        "--m",
        &format!("{:?}", 2.0 * (std::f64::consts::PI - 1e-12)),
        "--T",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["verify", "--kind", "periodic", "--m", "1", "--T", "0.5", "--table"]);
    assert!(stdout(&o).contains("pass"));
}

#[test]
fn log_level_from_environment_goes_to_stderr() {
    let p = problem("lebesgue_exp.json");
    let quiet = run(&["positivity", "--problem", p.to_str().unwrap(), "--threshold"]);
    let loud = bin()
        .args(["positivity", "--problem", p.to_str().unwrap(), "--threshold"])
        .env("REFLECTODE_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(String::from_utf8_lossy(&loud.stderr).contains("threshold bracket"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn primesum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primesum"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_large_sieve_passes() {
    let out = primesum(&["verify", "large-sieve", "--seed", "7"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let line = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert_eq!(v["check_name"], "large-sieve");
    assert_eq!(v["passed"], true);
}

#[test]
fn failing_check_exits_one() {
    let out = primesum(&["verify", "goal-g", "--set", "Q=16", "--set", "epsilon=0.01"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_names_exit_two() {
    assert_eq!(
        primesum(&["verify", "no-such-check"]).status.code(),
        Some(2)
    );
    assert_eq!(
        primesum(&["experiment", "no-such-run", "--config", "x.toml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        primesum(&["expsum", "--alpha", "sqrt:4", "--x", "100"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_appends_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports.jsonl");
    let out_s = out.to_str().unwrap();
    for _ in 0..2 {
        let o = primesum(&["verify", "hyperbola", "--set", "x=1000", "--out", out_s]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        "alpha = \"golden\"\nfn_kind = \"von-mangoldt\"\nx_grid = [100, 10]\n",
        "alpha = \"golden\"\nfn_kind = \"von-mangoldt\"\nx_grid = [100]\nunknown = 3\n",
        "alpha = \"golden\"\nx_grid = [",
    ] {
        let cfg = write_config(dir.path(), body);
        let out = primesum(&["experiment", "scaling-lambda", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{body}");
    }
}

#[test]
fn experiment_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "alpha = \"golden\"\nfn_kind = \"von-mangoldt\"\nx_grid = [10000, 20000]\ny_rule = { power_of_x = 0.28 }\n",
    );
    let csv = dir.path().join("out.csv");
    let out = primesum(&[
        "experiment",
        "scaling-lambda",
        "--config",
        &cfg,
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "x,y,Q,S,normalizer,ratio,sup_prefix,R,wall_time_seconds"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("10000,13,"));
}

#[test]
fn empty_grid_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "alpha = \"sqrt:2\"\nfn_kind = \"von-mangoldt\"\nx_grid = []\n",
    );
    let csv = dir.path().join("empty.csv");
    let out = primesum(&[
        "experiment",
        "scaling-lambda",
        "--config",
        &cfg,
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read_to_string(&csv).unwrap(),
        "x,y,Q,S,normalizer,ratio,sup_prefix,R,wall_time_seconds\n"
    );
}

#[test]
fn repeated_runs_match() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "alpha = \"sqrt:2\"\nfn_kind = \"von-mangoldt\"\nx_grid = [10000, 50000]\ny_rule = { power_of_x = 0.3 }\nseed = 5\n",
    );
    let mut bodies = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let csv = dir.path().join(format!("run{i}.csv"));
        let out = primesum(&[
            "--threads",
            threads,
            "experiment",
            "sup-growth",
            "--config",
            &cfg,
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let body: Vec<String> = fs::read_to_string(&csv)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect();
        bodies.push(body);
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn query_commands_print_json() {
    let out = primesum(&["expsum", "--kind", "one", "--alpha", "0/1", "--x", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["re"], 10.0);
    let out = primesum(&["major-arcs", "--alpha", "sqrt:2", "--Q", "10", "--y", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["fractions"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["a"] == 7 && f["q"] == 5));
    let out = primesum(&["sieve", "--kind", "divisor", "--hi", "5", "--print"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "1,1\n2,2\n3,2\n4,3\n5,2\n"
    );
}

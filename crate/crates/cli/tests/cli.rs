use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_domkernel"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn kernelize_writes_artifacts_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("k");
    let graph = fixture("path_triangle.gr");
    let out = run(&["--graph", graph.to_str().unwrap(), "-k", "4", "--out", prefix.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let line = stdout(&out);
    let k_prime: i64 = line.trim().rsplit("k=").next().unwrap().parse().unwrap();
    for ext in ["gr", "trace", "stats"] {
        assert!(dir.path().join(format!("k.{ext}")).exists());
    }
    let stats = fs::read_to_string(dir.path().join("k.stats")).unwrap();
    assert!(stats.starts_with("problem=ds\nn_in=14\n"));
    let kernel = dir.path().join("k.gr");
    let k_prime_s = k_prime.to_string();
    let args = [
        "--mode",
        "verify",
        "--graph",
        graph.to_str().unwrap(),
        "-k",
        "4",
        "--kernel",
        kernel.to_str().unwrap(),
        "--k-prime",
        &k_prime_s,
    ];
    let ok = run(&args);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("k=4 PASS"));
}

#[test]
fn corrupted_parameter_fails_verification_at_the_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("k");
    let graph = fixture("path_triangle.gr");
    // γ of the fixture is 5, so k = 5 is the smallest yes-value.
    let out = run(&["--graph", graph.to_str().unwrap(), "-k", "5", "--out", prefix.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let k_prime: i64 = stdout(&out).trim().rsplit("k=").next().unwrap().parse().unwrap();
    let wrong = (k_prime - 1).to_string();
    let kernel = dir.path().join("k.gr");
    let args = [
        "--mode",
        "verify",
        "--graph",
        graph.to_str().unwrap(),
        "-k",
        "5",
        "--kernel",
        kernel.to_str().unwrap(),
        "--k-prime",
        &wrong,
    ];
    let bad = run(&args);
    assert_eq!(code(&bad), 3);
    assert!(stdout(&bad).contains("k=5 FAIL"));
}

#[test]
fn verify_all_parameters() {
    let graph = fixture("path_triangle.gr");
    let out = run(&["--mode", "verify", "--graph", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verify: 15/15 PASS"));
    let cds = run(&["--mode", "verify", "--problem", "cds", "--graph", graph.to_str().unwrap(), "--size-limit", "4"]);
    assert_eq!(code(&cds), 0, "{}", String::from_utf8_lossy(&cds.stderr));
}

#[test]
fn verify_respects_the_guard() {
    let graph = fixture("path_triangle.gr");
    let out = run(&["--mode", "verify", "--graph", graph.to_str().unwrap(), "--guard-n", "10"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn empty_graph_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("empty.gr");
    fs::write(&g, "p ds 0 0\n").unwrap();
    let out = run(&["--mode", "verify", "--graph", g.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verify: 1/1 PASS"));
}

#[test]
fn zero_budget_is_a_no_instance() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("k");
    let graph = fixture("path_triangle.gr");
    let out = run(&["--graph", graph.to_str().unwrap(), "-k", "0", "--out", prefix.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("no-instance:"));
    assert_eq!(fs::read_to_string(dir.path().join("k.gr")).unwrap(), "p ds 0 0\n");
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.gr");
    fs::write(&g, "p ds 2 1\ne 1 3\n").unwrap();
    assert_eq!(code(&run(&["--graph", g.to_str().unwrap(), "-k", "1"])), 2);
    assert_eq!(code(&run(&["--graph", "/nonexistent/graph.gr", "-k", "1"])), 2);
    let graph = fixture("path_triangle.gr");
    assert_eq!(code(&run(&["--graph", graph.to_str().unwrap()])), 2);
}

#[test]
fn kernelize_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let graph = fixture("path_triangle.gr");
    for name in ["a", "b"] {
        let prefix = dir.path().join(name);
        let out = run(&["--graph", graph.to_str().unwrap(), "-k", "6", "--out", prefix.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    for ext in ["gr", "trace", "stats"] {
        let a = fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext} differs");
    }
}

#[test]
fn tables_match_fixtures_and_reject_large_boundaries() {
    let dir = tempfile::tempdir().unwrap();
    for (problem, t, s, name) in
        [("ds", "1", "3", "ds_t1_s3.tbl"), ("ds", "0", "2", "ds_t0_s2.tbl"), ("cds", "1", "3", "cds_t1_s3.tbl")]
    {
        let path = dir.path().join(name);
        let out = run(&[
            "--mode",
            "tables",
            "--problem",
            problem,
            "--t",
            t,
            "--size-limit",
            s,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains("classes="));
        assert_eq!(fs::read(&path).unwrap(), fs::read(fixture(name)).unwrap(), "{name}");
    }
    let out = run(&["--mode", "tables", "--t", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn loaded_tables_must_match_the_problem() {
    let graph = fixture("path_triangle.gr");
    let table = fixture("ds_t1_s3.tbl");
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("k");
    let ok = run(&[
        "--graph",
        graph.to_str().unwrap(),
        "-k",
        "6",
        "--tables",
        table.to_str().unwrap(),
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&ok), 0);
    let stats = fs::read_to_string(dir.path().join("k.stats")).unwrap();
    assert!(stats.contains("xi=4\n"));
    let mismatch =
        run(&["--graph", graph.to_str().unwrap(), "-k", "6", "--problem", "cds", "--tables", table.to_str().unwrap()]);
    assert_eq!(code(&mismatch), 2);
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("table is for ds"));
}

#[test]
fn approx_reports_a_dominating_set() {
    let graph = fixture("path_triangle.gr");
    let out = run(&["--mode", "approx", "--graph", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("certified=true"));
    assert!(text.lines().any(|l| l.starts_with("solution ")));
}

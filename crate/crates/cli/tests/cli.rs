use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pcsf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcsf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const PATH: &str = "pcsf 1\nnodes 3\nedge 1 2 1\nedge 2 3 1\npair 1 3 1.5\n";

#[test]
fn solve_both_algorithms() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "path.txt", PATH);
    for alg in ["ipcsf", "pcsf3"] {
        let out = pcsf(&["solve", &inst, "--algorithm", alg]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert_eq!(stdout(&out), "cost 3/2\npay 1 3\n");
    }
    let cheap = write(
        &dir,
        "cheap.txt",
        "pcsf 1\nnodes 2\nedge 1 2 10\npair 1 2 100\n",
    );
    assert_eq!(stdout(&pcsf(&["solve", &cheap])), "cost 10\nbuy 1 2\n");
}

#[test]
fn trace_file() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "cheap.txt",
        "pcsf 1\nnodes 2\nedge 1 2 10\npair 1 2 100\n",
    );
    let trace = dir.path().join("trace.log");
    let out = pcsf(&[
        "solve",
        &inst,
        "--algorithm",
        "pcsf3",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&trace).unwrap(),
        "singletons 2\ngrow 5 0 1\nbuy 0 1 2\nmerge 0 1 2\ndeactivate 2\n"
    );

    let out = pcsf(&["solve", &inst, "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let log = fs::read_to_string(&trace).unwrap();
    assert!(log.starts_with("# level 0\nsingletons 2\n"));
    assert!(log.ends_with("# iterations\nlevel 0 q1 [] cost1 10 cost2 - chosen 1\n"));
}

#[test]
fn exact_and_oracle_limit() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "path.txt", PATH);
    let out = pcsf(&["exact", &inst]);
    assert_eq!(stdout(&out), "cost 3/2\npay 1 3\n");

    let mut big = String::from("pcsf 1\nnodes 8\n");
    for u in 1..=8 {
        for v in u + 1..=8 {
            big += &format!("edge {u} {v} 1\n");
        }
    }
    let big = write(&dir, "big.txt", &big);
    assert_eq!(pcsf(&["exact", &big]).status.code(), Some(3));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "path.txt", PATH);
    let good = write(&dir, "good.txt", "cost 2\nbuy 1 2\nbuy 3 2\n");
    let out = pcsf(&["verify", &inst, &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ok cost 2\n");

    let unserved = write(&dir, "unserved.txt", "cost 1\nbuy 1 2\n");
    let out = pcsf(&["verify", &inst, &unserved]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("pair 1 3 is neither connected nor paid"));

    let wrong_cost = write(&dir, "wrong.txt", "cost 7/2\npay 1 3\n");
    assert_eq!(pcsf(&["verify", &inst, &wrong_cost]).status.code(), Some(1));

    let garbage = write(&dir, "garbage.txt", "cost x\n");
    assert_eq!(pcsf(&["verify", &inst, &garbage]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "pcsf 1\nnodes 2\nedge 1 1 5\n");
    let out = pcsf(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    assert_eq!(
        pcsf(&["solve", "/nonexistent/instance"]).status.code(),
        Some(2)
    );
    assert_eq!(pcsf(&["bogus"]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_solvable() {
    let args = [
        "gen", "--nodes", "6", "--edges", "8", "--pairs", "4", "--seed", "9",
    ];
    let a = pcsf(&args);
    let b = pcsf(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "gen.txt", &stdout(&a));
    let sol_text = stdout(&pcsf(&["solve", &inst]));
    let sol = write(&dir, "sol.txt", &sol_text);
    assert_eq!(pcsf(&["verify", &inst, &sol]).status.code(), Some(0));

    let too_many = pcsf(&["gen", "--nodes", "3", "--edges", "4", "--pairs", "1"]);
    assert_eq!(too_many.status.code(), Some(2));
}

#[test]
fn ratio_test_runs() {
    let args = [
        "ratio-test",
        "--trials",
        "40",
        "--max-nodes",
        "6",
        "--seed",
        "3",
    ];
    let out = pcsf(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.starts_with("trials 40 failures 0 worst-ratio "),
        "{text}"
    );
    assert_eq!(pcsf(&args).stdout, out.stdout);

    let empty = pcsf(&[
        "ratio-test",
        "--trials",
        "0",
        "--max-nodes",
        "8",
        "--seed",
        "1",
    ]);
    assert_eq!(stdout(&empty), "trials 0 failures 0 worst-ratio -\n");

    let limit = pcsf(&[
        "ratio-test",
        "--trials",
        "1",
        "--max-nodes",
        "9",
        "--max-edges",
        "30",
    ]);
    assert_eq!(limit.status.code(), Some(3));
}

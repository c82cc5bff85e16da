mod common;

use std::process::{Command, Output};

use common::data_path;
use serde_json::Value;

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn cdcl_trace_learns_p_or_q() {
    let o = workbench(&[
        "--mode",
        "cdcl",
        "--input",
        &data_path("pqrs.cnf"),
        "--trace",
    ]);
    assert_eq!(code(&o), 10);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "learn P∨Q backjump 1"), "{out}");
    assert!(out.contains("s SATISFIABLE"));
}

#[test]
fn cdcl_unsat_exit_code() {
    let dir = tempdir();
    let f = dir.join("unsat.cnf");
    std::fs::write(&f, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let o = workbench(&["--mode", "cdcl", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 20);
    assert!(stdout(&o).contains("s UNSATISFIABLE"));
}

#[test]
fn replay_prints_derivation_and_unsat() {
    let o = workbench(&[
        "--mode",
        "resolution-replay",
        "--counter-n",
        "4",
        "--replay",
        &data_path("counter4.replay"),
    ]);
    assert_eq!(code(&o), 20);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "7 : ¬P(x1,x2,0,0) ∨ P(x1,x2,1,0)  [Res 2.2 3.1]");
    assert_eq!(lines[5], "12 : ¬P(0,0,0,0) ∨ P(1,1,1,1)  [Res 11.2 10.1]");
    assert_eq!(*lines.last().unwrap(), "Unsat");
}

#[test]
fn replay_from_file_matches_generator() {
    let script = data_path("counter4.replay");
    let a = workbench(&[
        "--mode",
        "resolution-replay",
        "--counter-n",
        "4",
        "--replay",
        &script,
    ]);
    let b = workbench(&[
        "--mode",
        "resolution-replay",
        "--input",
        &data_path("counter4.bs"),
        "--replay",
        &script,
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_replay_step_is_a_usage_error() {
    let dir = tempdir();
    let f = dir.join("bad.replay");
    std::fs::write(&f, "2.2 Res 3.1\n2.1 Res 3.1\n").unwrap();
    let o = workbench(&[
        "--mode",
        "resolution-replay",
        "--counter-n",
        "4",
        "--replay",
        f.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("script line 2"));
}

#[test]
fn scl_counter_exit_codes() {
    let o = workbench(&["--mode", "scl", "--counter-n", "4"]);
    assert_eq!(code(&o), 20);
    assert!(stdout(&o).contains("stats propagations=16 decisions=0 trail=16"));
    let dir = tempdir();
    let f = dir.join("sat.bs");
    std::fs::write(&f, "P(0,0).\n-P(x,0) | P(x,1).\n").unwrap();
    let o = workbench(&["--mode", "scl", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 10);
}

#[test]
fn resolution_exit_codes() {
    assert_eq!(
        code(&workbench(&["--mode", "resolution", "--counter-n", "3"])),
        20
    );
    let dir = tempdir();
    let f = dir.join("c4-goal.bs");
    let text = std::fs::read_to_string(data_path("counter4.bs")).unwrap();
    let without_goal: String = text
        .lines()
        .filter(|l| !l.starts_with("6:"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&f, without_goal).unwrap();
    let o = workbench(&[
        "--mode",
        "resolution",
        "--input",
        f.to_str().unwrap(),
        "--selection",
        "none",
    ]);
    assert_eq!(code(&o), 10);
    assert!(stdout(&o).contains("stats generated=0 "));
    let o = workbench(&[
        "--mode",
        "resolution",
        "--counter-n",
        "10",
        "--max-steps",
        "5",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn lia_propagate_outcomes() {
    let pair = data_path("crafted_pair.lia");
    let o = workbench(&[
        "--mode",
        "lia-propagate",
        "--input",
        &pair,
        "--max-steps",
        "0",
    ]);
    assert_eq!(code(&o), 10);
    assert_eq!(stdout(&o).lines().last(), Some("fixpoint"));
    let o = workbench(&[
        "--mode",
        "lia-propagate",
        "--input",
        &pair,
        "--decision",
        "x >= 0",
        "--max-steps",
        "100",
    ]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(
        out.starts_with(
            "bound x >= 0 <- decision\nbound y >= 0 <- ineq 1\nbound x >= 1 <- ineq 2\n"
        ),
        "{out}"
    );
    let o = workbench(&[
        "--mode",
        "lia-propagate",
        "--input",
        &pair,
        "--decision",
        "x >= 0",
        "--decision",
        "x <= -1",
    ]);
    assert_eq!(code(&o), 20);
}

#[test]
fn lia_decide_outcomes() {
    let o = workbench(&["--mode", "lia-decide", "--input", &data_path("example.lia")]);
    assert_eq!(code(&o), 10);
    let out = stdout(&o);
    assert!(out.starts_with("box m=2 n=2 a=1 bound=64\n"), "{out}");
    assert!(out.ends_with("Sat x=0 y=1\n"), "{out}");
    let o = workbench(&[
        "--mode",
        "lia-decide",
        "--input",
        &data_path("crafted_pair.lia"),
        "--int",
        "big",
    ]);
    assert_eq!(code(&o), 20);
}

#[test]
fn machine_ints_overflow_is_reported() {
    let dir = tempdir();
    let f = dir.join("wide.lia");
    std::fs::write(
        &f,
        "1000000*x - 1000000*y + 1000000*z <= 0\nx + y + z <= 0\nx - z <= 0\n",
    )
    .unwrap();
    let o = workbench(&["--mode", "lia-decide", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--int"));
}

#[test]
fn counter_experiment_table() {
    let o = workbench(&[
        "--mode",
        "counter-experiment",
        "--counter-n",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|v| v["kind"] == "row")
        .collect();
    let props: Vec<u64> = rows
        .iter()
        .map(|r| r["scl_propagations"].as_u64().unwrap())
        .collect();
    assert_eq!(props, [2, 4, 8, 16]);
    assert_eq!(rows[3]["scl_result"], "unsat");
    assert_eq!(rows[3]["resolution_result"], "unsat");
    let o = workbench(&["--mode", "counter-experiment", "--counter-n", "13"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn json_lines_mirror_text() {
    for args in [
        vec!["--mode", "scl", "--counter-n", "3", "--trace"],
        vec!["--mode", "resolution", "--counter-n", "3", "--trace"],
    ] {
        let text = stdout(&workbench(&args));
        let mut json_args = args.clone();
        json_args.extend(["--format", "json"]);
        let json = stdout(&workbench(&json_args));
        let mirrored: Vec<String> = json
            .lines()
            .map(|l| {
                serde_json::from_str::<Value>(l).unwrap()["line"]
                    .as_str()
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert_eq!(mirrored, text.lines().collect::<Vec<_>>());
    }
}

#[test]
fn runs_are_deterministic() {
    for args in [
        vec![
            "--mode",
            "cdcl",
            "--input",
            &data_path("pqrs.cnf"),
            "--trace",
        ],
        vec!["--mode", "resolution", "--counter-n", "5", "--trace"],
        vec!["--mode", "scl", "--counter-n", "5", "--trace"],
    ] {
        assert_eq!(workbench(&args).stdout, workbench(&args).stdout);
    }
}

#[test]
fn usage_errors() {
    assert_eq!(code(&workbench(&["--mode", "cdcl"])), 2);
    assert_eq!(
        code(&workbench(&["--mode", "cdcl", "--input", "x", "--bogus"])),
        2
    );
    assert_eq!(
        code(&workbench(&[
            "--mode",
            "scl",
            "--counter-n",
            "3",
            "--replay",
            "x"
        ])),
        2
    );
    assert_eq!(
        code(&workbench(&[
            "--mode",
            "resolution",
            "--counter-n",
            "3",
            "--max-steps",
            "0"
        ])),
        2
    );
    assert_eq!(
        code(&workbench(&[
            "--mode",
            "resolution",
            "--counter-n",
            "3",
            "--selection",
            "all"
        ])),
        2
    );
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempdir();
    let f = dir.join("bad.bs");
    std::fs::write(&f, "P(0).\n-P(x) | .\n").unwrap();
    let o = workbench(&["--mode", "resolution", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column"));
}

/// A fresh directory under the target dir, unique per test.
fn tempdir() -> std::path::PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static N: AtomicUsize = AtomicUsize::new(0);
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!(
        "cli-{}-{}",
        std::process::id(),
        N.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

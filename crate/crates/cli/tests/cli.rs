use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tm2smm"))
}

fn machine(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/machines")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn compile_to(dir: &TempDir, spec: &Path) -> PathBuf {
    let out = dir.path().join("prog.smm");
    let o = run(&[
        "compile",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn compile_reports_directions_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let spec = machine("collatz.tm");
    let a = dir.path().join("a.smm");
    let b = dir.path().join("b.smm");
    let o = run(&[
        "compile",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("directions: 6"), "{text}");
    assert!(text.contains("prologue: "));
    assert!(text.contains("step: "));
    run(&[
        "compile",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn compile_rejects_a_malformed_spec() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "bad.tm",
        "symbols b 0\nstates A\nrule A 0 1 R A\nstart A\n",
    );
    let out = dir.path().join("bad.smm");
    let o = run(&[
        "compile",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["oracle", "--spec", "/nonexistent/x.tm", "--steps", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn run_writes_trace_and_snapshots() {
    let dir = TempDir::new().unwrap();
    let prog = compile_to(&dir, &machine("collatz.tm"));
    let trace = dir.path().join("t.tsv");
    let dots = dir.path().join("dots");
    let o = run(&[
        "run",
        "--program",
        prog.to_str().unwrap(),
        "--steps",
        "12",
        "--dot-every",
        "1",
        "--dot-dir",
        dots.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<String> = fs::read_to_string(&trace)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect();
    assert_eq!(rows[0], "step\tstate\thead\ttape");
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[1], "0\tA\t0\t2 0 1");
    assert_eq!(rows[8], "7\tC\t0\tb 1 0 0 2");
    assert_eq!(fs::read_dir(&dots).unwrap().count(), 13);

    let first = fs::read_to_string(dots.join("step-00000.dot")).unwrap();
    assert!(first.starts_with("digraph smm {"));
    assert!(!first.contains("[label=\"o\"]"));
    assert!(!first.contains("[label=\"b0\"]"));
    assert!(first.contains("[label=\"f\"]"));
}

#[test]
fn run_zero_steps_is_the_prologue() {
    let dir = TempDir::new().unwrap();
    let prog = compile_to(&dir, &machine("collatz.tm"));
    let o = run(&["run", "--program", prog.to_str().unwrap(), "--steps", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "step\tstate\thead\ttape\n0\tA\t0\t2 0 1\n");
}

#[test]
fn run_reports_a_stop() {
    let dir = TempDir::new().unwrap();
    let prog = compile_to(&dir, &machine("busy_beaver_2.tm"));
    let o = run(&["run", "--program", prog.to_str().unwrap(), "--steps", "100"]);
    assert!(o.status.success());
    // Configurations 0..=6, the last of which has no transition.
    assert_eq!(stdout(&o).lines().count(), 1 + 7);
    assert!(
        stderr(&o).contains("stopped at step 6: HALT H"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn run_fuel_exhaustion_has_its_own_exit_code() {
    let dir = TempDir::new().unwrap();
    let prog = compile_to(&dir, &machine("collatz.tm"));
    let o = run(&[
        "run",
        "--program",
        prog.to_str().unwrap(),
        "--steps",
        "5",
        "--fuel",
        "30",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("fuel"));
}

#[test]
fn run_invalid_path_names_section_and_line() {
    let dir = TempDir::new().unwrap();
    let prog = write(
        &dir,
        "p.smm",
        "; plan: symbols b\n; plan: states A\n; plan: symbol-bits 1\n; plan: state-bits 1\n\
         .directions f o e w b0\n.section prologue\n1 new origin\n2 center q\n.section step\n",
    );
    let o = run(&["run", "--program", prog.to_str().unwrap(), "--steps", "1"]);
    assert_eq!(o.status.code(), Some(1));
    // `q` is not declared, so the program itself is rejected at line 2.
    assert!(stderr(&o).contains("prologue:2"), "{}", stderr(&o));

    let prog = write(
        &dir,
        "p.smm",
        "; plan: symbols b\n; plan: states A\n; plan: symbol-bits 1\n; plan: state-bits 1\n\
         .directions f o e w b0\n.section prologue\n1 center @\n2 new origin\n.section step\n",
    );
    let o = run(&["run", "--program", prog.to_str().unwrap(), "--steps", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("prologue:1: no center"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn run_needs_a_plan_header() {
    let dir = TempDir::new().unwrap();
    let prog = write(
        &dir,
        "p.smm",
        ".directions f o\n.section prologue\n1 new origin\n.section step\n",
    );
    let o = run(&["run", "--program", prog.to_str().unwrap(), "--steps", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("plan header"));
}

#[test]
fn oracle_trace_matches_run_trace() {
    let dir = TempDir::new().unwrap();
    let spec = machine("collatz.tm");
    let prog = compile_to(&dir, &spec);
    let a = run(&["oracle", "--spec", spec.to_str().unwrap(), "--steps", "40"]);
    let b = run(&["run", "--program", prog.to_str().unwrap(), "--steps", "40"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().last().unwrap().split('\t').count(), 4);
}

#[test]
fn oracle_on_a_machine_without_rules_halts_at_zero() {
    let o = run(&[
        "oracle",
        "--spec",
        machine("halt_now.tm").to_str().unwrap(),
        "--steps",
        "5",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(stderr(&o).contains("halted at step 0"));
}

#[test]
fn diff_exit_codes_and_report() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let o = run(&[
        "diff",
        "--spec",
        machine("collatz.tm").to_str().unwrap(),
        "--steps",
        "300",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equivalent: 301 configurations"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["status"]["status"], "equivalent");
    assert_eq!(json["steps_compared"], 301);
    assert_eq!(json["node_counts"].as_array().unwrap().len(), 301);

    let o = run(&[
        "diff",
        "--spec",
        machine("busy_beaver_2.tm").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("both halted at step 6"));

    let o = run(&[
        "diff",
        "--spec",
        machine("collatz.tm").to_str().unwrap(),
        "--steps",
        "3",
        "--fuel",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn readout_prints_step_and_value() {
    let spec = machine("collatz.tm");
    let args = |steps: &'static str| {
        [
            "readout",
            "--spec",
            spec.to_str().unwrap(),
            "--steps",
            steps,
            "--state",
            "C",
            "--symbol",
            "b",
            "--base",
            "3",
        ]
        .map(str::to_owned)
    };
    let o = bin().args(args("7")).output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "7 29\n");
    let o = bin().args(args("6")).output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let o = run(&[
        "readout",
        "--spec",
        spec.to_str().unwrap(),
        "--steps",
        "5",
        "--state",
        "Z",
        "--symbol",
        "b",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dot_replays_and_dumps_one_snapshot() {
    let dir = TempDir::new().unwrap();
    let prog = compile_to(&dir, &machine("collatz.tm"));
    let o = run(&["dot", "--program", prog.to_str().unwrap(), "--steps", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    // 11 nodes after seven steps, each drawn with its f, e and w edges.
    assert_eq!(
        text.lines()
            .filter(|l| l.contains("[label=\""))
            .filter(|l| !l.contains("->"))
            .count(),
        11
    );
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 11 * 3);

    let out = dir.path().join("all.dot");
    let o = run(&[
        "dot",
        "--program",
        prog.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--all-edges",
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 7 * 6);

    let o = run(&[
        "dot",
        "--program",
        prog.to_str().unwrap(),
        "--omit",
        "o,e,w,b0,b1",
    ]);
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("->")).count(), 7);
}

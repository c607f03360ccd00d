use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn defset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defset")).args(args).output().expect("run defset")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn certificate_on_empty_grid() {
    let o = defset(&["verify", "--rect", &data("empty_222.rect")]);
    assert_eq!(code(&o), 1);
    assert_eq!(
        stdout(&o),
        "verdict: not-defining\nmethod: certificate\ncert rect 2 2 2 pair 1 2\nM1: (1,1) (2,2)\nM2: (2,1) (1,2)\n\
         rect 2 2 2\n2,2 | 1,1\n1,1 | 2,2\n"
    );
}

#[test]
fn one_full_cell_defines_the_small_square() {
    let o = defset(&["verify", "--rect", &data("one_cell_222.rect"), "--mode", "oracle"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("verdict: defining\nmethod: oracle\ncompletions-found: 1\n"), "{out}");
    assert!(out.contains("monitor observed 1 events 0 verbatim 0 corrected 0"));
}

#[test]
fn certificate_mode_without_certificate_is_unknown() {
    let o = defset(&["verify", "--rect", &data("one_cell_222.rect"), "--mode", "certificate"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("verdict: unknown"));
}

#[test]
fn design_certificate_lines() {
    let o = defset(&["verify", "--design", &data("f73_minus_swap.design"), "--mode", "certificate"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().take(5).collect();
    assert_eq!(
        lines,
        [
            "verdict: not-defining",
            "method: certificate",
            "cert design 7 3 pair 6 7",
            "F1: {1,2} {1,3} {4,5}",
            "F2: {2,3} {1,4} {1,5}"
        ]
    );
}

#[test]
fn full_design_is_defined_by_nothing() {
    let o = defset(&["verify", "--design", &data("f43_empty.design")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("verdict: defining"));
}

#[test]
fn bound_lines() {
    let o = defset(&["bound", "--rect", "3", "3", "3", "--variant", "all"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("rect 3 3 3 theorem2 verbatim value 10.040064 ceil 11 "), "{out}");
    assert!(out.contains("rect 3 3 3 theorem2 corrected value 5.463275 ceil 6 "));

    let o = defset(&["bound", "--design", "9", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("design 9 3 theorem5 value 28.644149 ceil 29 "));

    let o = defset(&["bound", "--design", "5", "5"]);
    assert!(stdout(&o).lines().all(|l| l.ends_with("vacuous 1")));
}

#[test]
fn bad_parameters_and_input_exit_three() {
    assert_eq!(code(&defset(&["bound", "--design", "3", "3"])), 3);
    assert_eq!(code(&defset(&["bound", "--rect", "0", "2", "2"])), 3);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rect");
    std::fs::write(&bad, "rect 2 2 2\n1,2 | 3\n. | .\n").unwrap();
    let o = defset(&["verify", "--rect", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.rect"));

    assert_eq!(code(&defset(&["verify", "--rect", "/nonexistent/x.rect"])), 3);
}

#[test]
fn oracle_counts() {
    let o = defset(&["oracle", "count", "--rect", &data("empty_222.rect")]);
    assert_eq!(stdout(&o), "count 3\nstatus complete\n");
    let o = defset(&["oracle", "count", "--rect", &data("empty_222.rect"), "--up-to-isomorphism"]);
    assert!(stdout(&o).starts_with("count 2\n"));
    let o = defset(&["oracle", "count", "--design", &data("f43_empty.design")]);
    assert_eq!(stdout(&o), "count 1\nstatus complete\n");
}

#[test]
fn oracle_stream_separates_records() {
    let o = defset(&["oracle", "stream", "--rect", &data("empty_222.rect")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("rect 2 2 2").count(), 3);
    assert_eq!(stdout(&o).matches("---").count(), 2);
}

#[test]
fn node_budget_reports_exhaustion() {
    let o = defset(&["oracle", "count", "--rect", &data("worked_partial.rect"), "--max-nodes", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("status budget-exhausted nodes"), "{}", stdout(&o));
}

#[test]
fn search_flags_verbatim_violation_on_small_rectangle() {
    let o = defset(&["search", "--rect", "2", "3", "3", "--restarts", "8"]);
    assert_eq!(code(&o), 4);
    let out = stdout(&o);
    assert!(out.contains("best restart 0 size 5\n"));
    assert!(out.contains("FALSIFIED rect 2 3 3 theorem2 verbatim bound 6.000000 size 5"));
}

#[test]
fn search_on_f43_finds_empty_set() {
    let o = defset(&["search", "--design", "4", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("best restart 0 size 0\n"));
}

#[test]
fn tables_are_tsv() {
    let o = defset(&["tables", "--rect", "--max-n", "4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let widths: Vec<usize> = out.lines().map(|l| l.split('\t').count()).collect();
    assert_eq!(widths.len(), 4);
    assert!(widths.iter().all(|&w| w == widths[0]));

    let o = defset(&["tables", "--design", "--max-v", "9", "--k", "3,4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("v\tk\ttheorem5_bound"));
}

#[test]
fn intersection_on_defining_set() {
    let o = defset(&["intersect", "--rect", &data("one_cell_222.rect")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("violations 0"));
}

use std::path::Path;
use std::process::{Command, Output};

const SPEC: &str = r#"{"type":"discrete","atoms":[["0","2/5"],["7/10","7/20"],["3/2","1/4"]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feasible"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dist_of_synthesized_spec_is_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SPEC);
    let built = dir.path().join("built.json");
    let o = run(&["synthesize", "--spec", &spec, "--output", built.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["dist", "--spec", built.to_str().unwrap()]);
    assert_eq!(stdout(&o), "value,prob\n0,2/5\n7/10,7/20\n3/2,1/4\n");
    let o = run(&["dist", "--spec", &spec, "--format", "decimal"]);
    assert_eq!(stdout(&o), "value,prob\n0,0.4\n0.7,0.35\n1.5,0.25\n");
}

#[test]
fn verify_passes_and_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SPEC);
    let o = run(&["verify", "--spec", &spec, "--n", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"overall\": true"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS telescoping"));
}

#[test]
fn sample_writes_n_rows() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SPEC);
    let o = run(&["sample", "--spec", &spec, "--n", "500", "--seed", "3"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "distance");
    assert_eq!(rows.len(), 501);
    assert!(rows[1..].iter().all(|r| ["0", "7/10", "3/2"].contains(r)));
    // Seed changes the draws.
    assert_ne!(text, stdout(&run(&["sample", "--spec", &spec, "--n", "500", "--seed", "4"])));
}

#[test]
fn fw_table_has_one_row_per_alpha_and_grid_point() {
    let o = run(&["fw-table", "--grid", "101", "--alpha", "0.05,0.125"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 2 * 101);
    assert!(text.starts_with("t,alpha,F_W\n"));
}

#[test]
fn missing_file_is_an_io_error() {
    let o = run(&["dist", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad_mass = write(
        dir.path(),
        "bad.json",
        r#"{"type":"discrete","atoms":[["0","1/2"],["1","1/4"]]}"#,
    );
    assert_eq!(run(&["synthesize", "--spec", &bad_mass]).status.code(), Some(3));
    let no_zero = write(
        dir.path(),
        "nozero.json",
        r#"{"type":"discrete","atoms":[["1","1/2"],["2","1/2"]]}"#,
    );
    assert_eq!(run(&["synthesize", "--spec", &no_zero]).status.code(), Some(3));
    let garbage = write(dir.path(), "garbage.json", "{not json");
    assert_eq!(run(&["dist", "--spec", &garbage]).status.code(), Some(3));
    assert_eq!(run(&["fw-table", "--alpha", "0.5"]).status.code(), Some(3));
    assert_eq!(run(&["sample", "--delta", "2", "--spec", &bad_mass]).status.code(), Some(3));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
}

#[test]
fn density_spec_round_trips_through_transform_document() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "density.json",
        r#"{"type":"density","knots":[["0","1"],["1","1"]],"c":"9/10","C":"11/10"}"#,
    );
    let built = dir.path().join("t.json");
    assert!(run(&["synthesize", "--spec", &spec, "--output", built.to_str().unwrap()])
        .status
        .success());
    let a = stdout(&run(&["sample", "--spec", &spec, "--n", "200"]));
    let b = stdout(&run(&["sample", "--spec", built.to_str().unwrap(), "--n", "200"]));
    assert_eq!(a, b);
    let o = run(&["dist", "--spec", &spec, "--grid", "3"]);
    assert_eq!(stdout(&o), "t,cdf\n0,0\n0.5,0.5\n1,1\n");
}

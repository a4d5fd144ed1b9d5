use std::process::Command;

fn gpmaj(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gpmaj")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn run_prints_a_record() {
    let (code, out) = gpmaj(&["run", "--problem", "majority", "--n", "20", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("success: true"));
    assert!(out.contains("evaluations: "));
}

#[test]
fn exit_codes() {
    assert_eq!(gpmaj(&["run", "--problem", "nope", "--n", "3"]).0, 1);
    assert_eq!(gpmaj(&["run", "--problem", "majority"]).0, 1);
    assert_eq!(
        gpmaj(&["run", "--problem", "majority", "--n", "3", "--set", "colour=red"]).0,
        1
    );
    assert_eq!(gpmaj(&["run", "--bogus-flag"]).0, 1);
    assert_eq!(gpmaj(&["summarize", "/nonexistent/results.csv"]).0, 2);
    assert_eq!(gpmaj(&["experiment", "/nonexistent/spec.txt"]).0, 2);
    assert_eq!(gpmaj(&["distribution", "--n", "100", "--tolerance", "0"]).0, 3);
}

#[test]
fn experiment_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.txt");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &spec,
        "# small sweep\nproblem = two-thirds-majority\nn_values = 10,20,40\nrepetitions = 5\n",
    )
    .unwrap();
    let (code, _) = gpmaj(&["experiment", spec.to_str().unwrap(), "--output", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out) = gpmaj(&["summarize", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("two-thirds-majority")).count(), 3);
    assert!(out.contains("fit two-thirds-majority"));
}

#[test]
fn quick_verify_passes() {
    let (code, out) = gpmaj(&["verify", "--individuals", "300", "--steps", "500", "--samples", "100"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

mod common;

use std::ffi::OsString;
use std::path::PathBuf;

use mwp_core::cli::{run_cli, Output, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn corpus(path: &str) -> String {
    common::corpus_root().join(path).display().to_string()
}

fn mwp(args: &[&str]) -> Output {
    let argv: Vec<OsString> = std::iter::once("mwp")
        .chain(args.iter().copied())
        .map(OsString::from)
        .collect();
    run_cli(argv)
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mwp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn analyze_reports_bounds() {
    let f = corpus("poly/countdown.c");
    let out = mwp(&["analyze", &f]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("f: polynomial"), "{}", out.stdout);
    assert!(out.stdout.contains("y' ≤ max(x)"), "{}", out.stdout);
}

#[test]
fn analyze_json_has_the_documented_keys() {
    let f = corpus("poly/countdown.c");
    let out = mwp(&["analyze", "--format", "json", &f]);
    assert_eq!(out.code, EXIT_OK);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["file"], f.as_str());
    let fun = &v["functions"][0];
    for key in [
        "function",
        "choice_points",
        "feasible",
        "feasible_complete",
        "bounds",
        "matrix",
    ] {
        assert!(!fun[key].is_null(), "missing {key}: {fun}");
    }
    assert_eq!(fun["function"], "f");
    assert_eq!(fun["bounds"]["y"], "y' ≤ max(x)");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["analyze", "--format", "json"],
        vec!["bound"],
        vec!["hoist"],
        vec!["fission", "--pragma"],
        vec!["depgraph", "--format", "dot"],
    ] {
        for (name, _, _) in common::all_corpus() {
            let f = corpus(&format!("{name}.c"));
            let mut full = args.clone();
            full.push(&f);
            let a = mwp(&full);
            let b = mwp(&full);
            assert_eq!(a, b, "{args:?} {name}");
        }
    }
}

#[test]
fn strict_mode_fails_on_exponential_programs() {
    let f = corpus("exp/times_two.c");
    assert_eq!(mwp(&["analyze", &f]).code, EXIT_OK);
    let out = mwp(&["analyze", "--strict", &f]);
    assert_eq!(out.code, EXIT_INFEASIBLE);
    assert!(out.stdout.contains("no polynomial bound"), "{}", out.stdout);
    let ok = corpus("poly/countdown.c");
    assert_eq!(mwp(&["analyze", "--strict", &ok]).code, EXIT_OK);
}

#[test]
fn bad_input_exits_with_code_two() {
    let bad = temp_file("division.c", "void f(int n) { n = n / 2; }");
    let out = mwp(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(
        out.stderr.contains("1:23: unsupported construct: division"),
        "{}",
        out.stderr
    );

    let out = mwp(&["analyze", "/definitely/not/here.c"]);
    assert_eq!(out.code, EXIT_INPUT);

    let f = corpus("poly/countdown.c");
    let out = mwp(&["hoist", "--format", "dot", &f]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("only valid for depgraph"));

    assert_eq!(mwp(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(mwp(&["interp", &f, "--input", "n=x"]).code, EXIT_INPUT);
}

#[test]
fn fission_prints_the_split_program() {
    let f = corpus("golden/fission_example.c");
    let out = mwp(&["fission", &f]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let want = std::fs::read_to_string(corpus("golden/fission_example.expected.c")).unwrap();
    let got = mwp_core::frontend::parse(&out.stdout).unwrap();
    let want = mwp_core::frontend::parse(&want).unwrap();
    let canon = |p: &mwp_core::frontend::Program| {
        let mut p = p.without_spans();
        p.renumber();
        p
    };
    assert_eq!(canon(&got), canon(&want));
    assert!(out.stderr.contains("split into 2 loops"), "{}", out.stderr);

    let out = mwp(&["fission", "--pragma", &f]);
    assert!(out.stdout.contains("#pragma omp parallel sections"));
}

#[test]
fn fission_json_lists_the_groups() {
    let f = corpus("golden/fission_example.c");
    let out = mwp(&["fission", "--format", "json", &f]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let rw = &v["rewrites"][0];
    assert_eq!(rw["kind"], "fission");
    assert_eq!(rw["groups"].as_array().unwrap().len(), 2);
    assert!(v["program"]
        .as_str()
        .unwrap()
        .contains("for (int i = 1; i < 10; i++)"));
}

#[test]
fn hoist_reports_the_peel_count() {
    let f = corpus("transform/hoist_invariant.c");
    let out = mwp(&["hoist", "--format", "json", "--verify", "50", &f]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["rewrites"][0]["peels"], 1);
    assert_eq!(v["rewrites"][0]["degrees"]["s4"], "inf");
}

#[test]
fn depgraph_renders_dot() {
    let f = corpus("golden/fission_example.c");
    let out = mwp(&["depgraph", "--format", "dot", &f]);
    assert_eq!(out.code, EXIT_OK);
    assert!(
        out.stdout.starts_with("digraph \"main@4:5\" {"),
        "{}",
        out.stdout
    );
    assert_eq!(out.stdout.matches("->").count(), 6);
    assert!(!out.stdout.contains("s2 -> s3"));
}

#[test]
fn interp_runs_with_given_inputs() {
    let f = corpus("poly/countdown.c");
    let out = mwp(&["interp", &f, "--input", "n=3,x=2"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["scalars"]["n"], "0");
    assert_eq!(v["scalars"]["y"], "2");
    assert_eq!(v["steps"], 11);

    let arr = temp_file("arr.c", "void g(int s) { int a[3]; s = a[0] + a[2]; }");
    let out = mwp(&[
        "interp",
        arr.to_str().unwrap(),
        "--input",
        "s=0",
        "--array",
        "a=1,2,3",
    ]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["scalars"]["s"], "4");
}

#[test]
fn interp_needs_every_parameter() {
    let f = corpus("poly/countdown.c");
    let out = mwp(&["interp", &f, "--input", "n=3"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("parameter `x`"), "{}", out.stderr);
}

#[test]
fn seeded_verification_is_reproducible() {
    let f = corpus("transform/hoist_then_split.c");
    let args = ["hoist", "--verify", "25", "--seed", "7", f.as_str()];
    let a = mwp(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a, mwp(&args));
}

#[test]
fn interp_reports_fuel_exhaustion() {
    let f = temp_file("spin.c", "void f(int x) { while (x > 0) { x = x + 1; } }");
    let out = mwp(&[
        "interp",
        f.to_str().unwrap(),
        "--input",
        "x=1",
        "--fuel",
        "100",
    ]);
    assert_ne!(out.code, EXIT_OK);
    assert!(out.stderr.contains("fuel"), "{}", out.stderr);
}

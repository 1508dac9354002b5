mod common;

use mwp_core::depfission::{fission_plan, quasi_invariant_block, DepError, LoopInfo};
use mwp_core::frontend::{
    emit, normalize_function, parse, walk_block, BinOp, Expr, LValue, Program, Stmt, StmtKind,
};
use mwp_core::interp::{random_store, run, Store};
use mwp_core::transform::{
    apply_all, check_equivalence, fission, hoist, IdGen, Options, RewriteKind, TransformError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn canon(p: &Program) -> Program {
    let mut p = p.without_spans();
    p.renumber();
    p
}

fn source(name: &str) -> Program {
    common::all_corpus()
        .into_iter()
        .find(|(n, _, _)| n == name)
        .unwrap_or_else(|| panic!("no corpus program {name}"))
        .2
}

const HOIST: Options = Options {
    hoist: true,
    fission: false,
    pragmas: false,
};
const FISSION: Options = Options {
    hoist: false,
    fission: true,
    pragmas: false,
};

fn first_loop(p: &Program) -> &Stmt {
    p.functions[0]
        .body
        .iter()
        .find(|s| matches!(s.kind, StmtKind::While { .. } | StmtKind::For { .. }))
        .unwrap()
}

fn assert_equivalent(a: &Program, b: &Program, runs: usize, seed: u64) {
    let f = &a.functions[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..runs {
        let inputs = random_store(f, &mut rng, -3, 12);
        let eq = check_equivalence(a, b, &f.name, &inputs, 200_000);
        assert!(
            eq.holds(),
            "{}\non {inputs:?}: {eq:?}\n{}",
            emit(a),
            emit(b)
        );
    }
}

#[test]
fn hoisting_peels_the_invariant_statement() {
    let p = source("transform/hoist_invariant");
    let (out, rewrites) = apply_all(&p, HOIST).unwrap();
    let want = "\
void f(int n, int c, int x) {
    int t;
    int i;
    t = 0;
    i = 0;
    if (i < n) {
        t = c * c;
        x = x + t;
        i = i + 1;
    }
    for (; i < n; i++) {
        x = x + t;
    }
}
";
    assert_eq!(emit(&out), want);
    assert_eq!(rewrites.len(), 1);
    assert_eq!(rewrites[0].kind, RewriteKind::Hoist);
    let json = rewrites[0].to_json();
    assert_eq!(json["kind"], "hoist");
    assert_eq!(json["peels"], 1);
    assert_eq!(json["loop_span"], "4:5");
}

#[test]
fn hoisted_statement_runs_once() {
    let p = source("transform/hoist_invariant");
    let (out, _) = apply_all(&p, HOIST).unwrap();
    let inputs = Store::new()
        .with_scalar("n", 10)
        .with_scalar("c", 3)
        .with_scalar("x", 0);
    let before = run(&p, "f", &inputs, 10_000).unwrap();
    let after = run(&out, "f", &inputs, 10_000).unwrap();
    let count = |r: &mwp_core::interp::RunResult, prog: &Program| {
        let mut n = 0;
        walk_block(&prog.functions[0].body, &mut |s: &Stmt| {
            if let StmtKind::Assign {
                target: LValue::Var(v),
                expr: Expr::Bin(BinOp::Mul, ..),
            } = &s.kind
            {
                if v == "t" {
                    n += r.stmt_counts.get(&s.id).copied().unwrap_or(0);
                }
            }
        });
        n
    };
    assert_eq!(count(&before, &p), 10);
    assert_eq!(count(&after, &out), 1);
    assert!(after.steps < before.steps);
    assert_eq!(after.final_store.scalar("x"), Some(&90.into()));
}

#[test]
fn peeling_two_iterations_matches_a_hand_expansion() {
    let p = source("transform/hoist_chain");
    let (out, rewrites) = apply_all(&p, HOIST).unwrap();
    assert_eq!(rewrites[0].to_json()["peels"], 2);
    let manual = parse(
        "void f(int n, int x, int y, int z) { int i; i = 0; \
         if (i < n) { x = y; y = z; i = i + 1; if (i < n) { x = y; y = z; i = i + 1; } } \
         while (i < n) { i = i + 1; } }",
    )
    .unwrap();
    assert_equivalent(&p, &manual, 200, 1);
    assert_equivalent(&out, &manual, 200, 1);
}

#[test]
fn peel_count_semantics_on_the_corpus() {
    let mut loops = 0;
    for (name, _, p) in common::all_corpus() {
        for f in &p.functions {
            for lp in f.body.iter() {
                let Ok(Some(d)) = quasi_invariant_block(lp) else {
                    continue;
                };
                let mut ids = IdGen::for_program(&p);
                let rw = hoist(lp, f, &mut ids).unwrap();
                let peels = rw
                    .degrees
                    .values()
                    .filter_map(|x| x.finite())
                    .max()
                    .unwrap();
                assert_eq!(peels, d, "{name}");
                let mut g = f.clone();
                let at = g.body.iter().position(|s| s.id == lp.id).unwrap();
                g.body.splice(at..=at, rw.replacement.clone());
                normalize_function(&mut g);
                let mut q = p.clone();
                *q.functions.iter_mut().find(|h| h.name == f.name).unwrap() = g;
                let q = parse(&emit(&q)).unwrap_or_else(|e| panic!("{name}: {e}"));
                if p.functions.len() == 1 {
                    assert_equivalent(&p, &q, 100, 2);
                }
                loops += 1;
            }
        }
    }
    assert!(loops >= 3, "only {loops} fully invariant loops");
}

#[test]
fn nothing_to_hoist_from_an_accumulator() {
    let p = parse("void f(int n, int x) { for (int i = 0; i < n; i++) { x = x + i; } }").unwrap();
    let mut ids = IdGen::for_program(&p);
    let e = hoist(first_loop(&p), &p.functions[0], &mut ids).unwrap_err();
    assert_eq!(e, TransformError::NothingToHoist);
    let (out, rewrites) = apply_all(&p, HOIST).unwrap();
    assert!(rewrites.is_empty());
    assert_eq!(canon(&out), canon(&p));
}

#[test]
fn the_fission_example_splits_into_the_expected_listing() {
    let p = source("golden/fission_example");
    let (out, rewrites) = apply_all(&p, FISSION).unwrap();
    let path = common::corpus_root().join("golden/fission_example.expected.c");
    let want = parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(canon(&out), canon(&want));
    assert_eq!(rewrites.len(), 1);
    let json = rewrites[0].to_json();
    assert_eq!(json["kind"], "fission");
    assert_eq!(json["groups"].as_array().unwrap().len(), 2);
    assert_eq!(json["pragma"], false);
    let inputs = Store::new();
    let r = run(&out, "main", &inputs, 10_000).unwrap();
    for a in ["a", "b"] {
        assert_eq!(r.final_store.arrays[a][9], 45.into());
    }
}

#[test]
fn pragmas_wrap_independent_loops_in_sections() {
    let p = source("golden/fission_example");
    let opts = Options {
        pragmas: true,
        ..FISSION
    };
    let (out, rewrites) = apply_all(&p, opts).unwrap();
    assert!(rewrites[0].pragma);
    let text = emit(&out);
    assert!(text.contains("#pragma omp parallel sections"), "{text}");
    assert_eq!(text.matches("#pragma omp section\n").count(), 2, "{text}");
    let back = parse(&text).unwrap();
    assert_eq!(canon(&back), canon(&out));
    assert_equivalent(&p, &out, 5, 3);
}

#[test]
fn unsplittable_loops_are_left_alone() {
    let p = source("transform/fission_chain");
    let lp = first_loop(&p);
    assert!(matches!(fission_plan(lp), Err(DepError::NoSplit(_))));
    let (out, rewrites) = apply_all(&p, FISSION).unwrap();
    assert!(rewrites.is_empty());
    assert_eq!(canon(&out), canon(&p));
}

#[test]
fn fission_rejects_a_single_group_plan() {
    let p = source("golden/fission_example");
    let lp = first_loop(&p).clone();
    let mut plan = fission_plan(&lp).unwrap();
    plan.groups.truncate(1);
    let mut f = p.functions[0].clone();
    let mut ids = IdGen::for_program(&p);
    let e = fission(&lp, &plan, false, &mut f, &mut ids).unwrap_err();
    assert!(matches!(e, TransformError::Dep(DepError::NoSplit(_))));
}

#[test]
fn every_split_loop_keeps_its_control() {
    for name in [
        "transform/fission_while",
        "transform/fission_scalars",
        "transform/fission_three",
    ] {
        let p = source(name);
        let (out, rewrites) = apply_all(&p, FISSION).unwrap();
        assert_eq!(rewrites.len(), 1, "{name}");
        let loops = out.functions[0]
            .body
            .iter()
            .filter(|s| LoopInfo::of(s).is_ok())
            .count();
        assert_eq!(loops, rewrites[0].groups.len(), "{name}\n{}", emit(&out));
        assert_equivalent(&p, &out, 300, 4);
    }
}

#[test]
fn rewrites_preserve_behaviour_on_the_whole_corpus() {
    let both = Options {
        hoist: true,
        fission: true,
        pragmas: true,
    };
    let mut rewritten = 0;
    for (name, _, p) in common::all_corpus() {
        if name.ends_with(".expected") {
            continue;
        }
        let (out, rewrites) = apply_all(&p, both).unwrap_or_else(|e| panic!("{name}: {e}"));
        rewritten += usize::from(!rewrites.is_empty());
        let again = parse(&emit(&out)).unwrap_or_else(|e| panic!("{name}: {e}\n{}", emit(&out)));
        assert_eq!(canon(&again), canon(&out), "{name}");
        let f = p.entry_function().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let inputs = random_store(f, &mut rng, -3, 10);
            let eq = check_equivalence(&p, &out, &f.name, &inputs, 100_000);
            assert!(eq.holds(), "{name} on {inputs:?}: {eq:?}\n{}", emit(&out));
        }
    }
    assert!(rewritten >= 10, "only {rewritten} programs rewritten");
}

#[test]
fn equivalence_reports_a_difference() {
    let a = parse("void f(int x) { x = x + 1; }").unwrap();
    let b = parse("void f(int x) { x = x + 2; }").unwrap();
    let inputs = Store::new().with_scalar("x", 0);
    assert!(!check_equivalence(&a, &b, "f", &inputs, 100).holds());
    assert!(check_equivalence(&a, &a, "f", &inputs, 100).holds());
}

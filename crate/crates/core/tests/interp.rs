mod common;

use mwp_core::frontend::{parse, Program};
use mwp_core::interp::{
    classify_growth, growth_probe, log2_abs, parse_array, parse_scalars, random_store, run,
    GrowthClass, InterpError, Store,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn program(src: &str) -> Program {
    parse(src).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn counted_loop_costs_and_result() {
    let p = program("void f(int x) { for (int i = 0; i < 3; i++) { x = x + 1; } }");
    let r = run(&p, "f", &Store::new().with_scalar("x", 5), 100).unwrap();
    assert_eq!(r.final_store.scalar("x"), Some(&big(8)));
    // Initializer, four tests, three bodies and three increments.
    assert_eq!(r.steps, 11);
}

#[test]
fn the_fission_example_fills_both_arrays() {
    let (_, _, p) = common::corpus("golden")
        .into_iter()
        .find(|(n, _, _)| n == "golden/fission_example")
        .unwrap();
    let r = run(&p, "main", &Store::new(), 10_000).unwrap();
    let want: Vec<BigInt> = (0..10).map(|k| big(k * (k + 1) / 2)).collect();
    assert_eq!(r.final_store.arrays["a"], want);
    assert_eq!(r.final_store.arrays["b"], want);
}

#[test]
fn runs_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (name, _, p) in common::all_corpus() {
        let f = p.entry_function().unwrap();
        let inputs = random_store(f, &mut rng, -3, 8);
        let a = run(&p, &f.name, &inputs, 50_000);
        let b = run(&p, &f.name, &inputs, 50_000);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn calls_pass_values_and_return_results() {
    let p = program("int sq(int a) { a = a * a; return a; }\nvoid f(int x, int y) { y = sq(x); }");
    let r = run(
        &p,
        "f",
        &Store::new().with_scalar("x", -7).with_scalar("y", 0),
        100,
    )
    .unwrap();
    assert_eq!(r.final_store.scalar("y"), Some(&big(49)));
    assert_eq!(r.final_store.scalar("x"), Some(&big(-7)));
}

#[test]
fn values_do_not_overflow() {
    let p = program("void f(int n, int x) { for (int i = 0; i < n; i++) { x = x * x; } }");
    let r = run(
        &p,
        "f",
        &Store::new().with_scalar("n", 7).with_scalar("x", 3),
        1000,
    )
    .unwrap();
    let want = num_traits::pow(big(3), 128);
    assert_eq!(r.final_store.scalar("x"), Some(&want));
    assert_eq!(r.max_abs["x"], want);
    assert!((log2_abs(&want) - 128.0 * 3f64.log2()).abs() < 1e-9);
}

#[test]
fn max_abs_tracks_the_peak_magnitude() {
    let p = program("void f(int x) { x = x - 10; x = x + 12; }");
    let r = run(&p, "f", &Store::new().with_scalar("x", 1), 100).unwrap();
    assert_eq!(r.final_store.scalar("x"), Some(&big(3)));
    assert_eq!(r.max_abs["x"], big(9));
}

#[test]
fn runtime_errors() {
    let p = program("void f(int n) { int a[4]; a[n] = 1; }");
    let e = run(&p, "f", &Store::new().with_scalar("n", 4), 100).unwrap_err();
    assert!(
        matches!(e, InterpError::IndexOutOfBounds { len: 4, .. }),
        "{e}"
    );
    let e = run(&p, "f", &Store::new().with_scalar("n", -1), 100).unwrap_err();
    assert!(matches!(e, InterpError::IndexOutOfBounds { .. }), "{e}");

    let p = program("void f(int x) { int t; x = t; }");
    let e = run(&p, "f", &Store::new().with_scalar("x", 0), 100).unwrap_err();
    assert!(
        matches!(e, InterpError::UninitializedRead { ref var, .. } if var == "t"),
        "{e}"
    );

    let p = program("void f(int x) { while (x > 0) { x = x + 1; } }");
    let e = run(&p, "f", &Store::new().with_scalar("x", 1), 500).unwrap_err();
    assert!(matches!(e, InterpError::FuelExhausted(_)), "{e}");

    let e = run(&p, "f", &Store::new(), 500).unwrap_err();
    assert_eq!(e, InterpError::MissingInput("x".into()));
    let e = run(&p, "g", &Store::new(), 500).unwrap_err();
    assert_eq!(e, InterpError::UnknownFunction("g".into()));
}

#[test]
fn input_parsing() {
    let mut s = Store::new();
    parse_scalars("x=3, y=-4", &mut s).unwrap();
    parse_array("a=1,2,3", &mut s).unwrap();
    assert_eq!(s.scalar("x"), Some(&big(3)));
    assert_eq!(s.scalar("y"), Some(&big(-4)));
    assert_eq!(s.arrays["a"], vec![big(1), big(2), big(3)]);
    assert!(parse_scalars("x", &mut s).is_err());
    assert!(parse_scalars("x=abc", &mut s).is_err());
    assert!(parse_array("a=1,q", &mut s).is_err());
    assert!(parse_array("a", &mut s).is_err());
}

#[test]
fn preset_arrays_are_used() {
    let p = program("void f(int s) { int a[3]; s = a[0] + a[1] + a[2]; }");
    let mut inputs = Store::new().with_scalar("s", 0);
    parse_array("a=4,5,6", &mut inputs).unwrap();
    let r = run(&p, "f", &inputs, 100).unwrap();
    assert_eq!(r.final_store.scalar("s"), Some(&big(15)));
    let r = run(&p, "f", &Store::new().with_scalar("s", 9), 100).unwrap();
    assert_eq!(r.final_store.scalar("s"), Some(&big(0)));
}

#[test]
fn random_stores_keep_array_lengths_non_negative() {
    let p = program("void f(int n, int x) { int a[n]; x = 1; }");
    let f = &p.functions[0];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let s = random_store(f, &mut rng, -5, 5);
        assert!(s.scalar("n").unwrap() >= &big(0));
        assert!(run(&p, "f", &s, 100).is_ok());
    }
}

#[test]
fn growth_probe_separates_doubling_from_summing() {
    let poly = program("void f(int n, int x) { for (int i = 0; i < n; i++) { x = x + n; } }");
    let exp = program("void f(int n, int x) { for (int i = 0; i < n; i++) { x = x + x; } }");
    let scales = [2, 4, 8, 16];
    let tp = growth_probe(&poly, "f", &scales, 1_000_000).unwrap();
    let te = growth_probe(&exp, "f", &scales, 1_000_000).unwrap();
    assert_eq!(tp.rows.len(), 4);
    assert_eq!(tp.rows[3].1["x"], big(16 + 16 * 16));
    assert_eq!(te.rows[3].1["x"], big(16) << 16);
    assert_eq!(classify_growth(&tp), GrowthClass::Polynomial);
    assert_eq!(classify_growth(&te), GrowthClass::SuperPolynomial);
    assert!(tp.slopes().iter().all(|s| *s <= 2.0 + 1e-9));
}

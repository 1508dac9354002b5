mod common;

use mwp_core::algebra::{
    all_assignments, ChoiceAssignment, Delta, DeltaPoly, Monomial, MwpMatrix, MwpScalar,
    ALL_SCALARS,
};
use proptest::prelude::*;

use common::naive;
use MwpScalar::*;

const K: u32 = 3;

fn scalar() -> impl Strategy<Value = MwpScalar> {
    prop::sample::select(ALL_SCALARS.to_vec())
}

fn nonzero() -> impl Strategy<Value = MwpScalar> {
    prop::sample::select(vec![M, W, P, Inf])
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (
        nonzero(),
        prop::collection::vec(prop::option::of(0u8..3), K as usize),
    )
        .prop_map(|(c, picks)| {
            let deltas: Vec<Delta> = picks
                .iter()
                .enumerate()
                .filter_map(|(i, p)| p.map(|c| Delta::new(c, i as u32)))
                .collect();
            Monomial::new(c, deltas).unwrap()
        })
}

fn raw_monomials() -> impl Strategy<Value = Vec<Monomial>> {
    prop::collection::vec(monomial(), 0..6)
}

fn poly() -> impl Strategy<Value = DeltaPoly> {
    raw_monomials().prop_map(DeltaPoly::from_monomials)
}

fn matrix(n: usize) -> impl Strategy<Value = MwpMatrix> {
    prop::collection::vec(prop::option::weighted(0.5, poly()), n * n).prop_map(move |cells| {
        let mut m = MwpMatrix::zero((0..n).map(|i| format!("x{i}")).collect());
        for (k, c) in cells.into_iter().enumerate() {
            if let Some(p) = c {
                m.set(k / n, k % n, p);
            }
        }
        m
    })
}

fn sigmas() -> Vec<ChoiceAssignment> {
    all_assignments(K).collect()
}

/// Evaluation straight from a monomial list, without any canonical form.
fn eval_raw(monos: &[Monomial], sigma: &ChoiceAssignment) -> MwpScalar {
    monos
        .iter()
        .filter(|m| {
            m.deltas
                .iter()
                .all(|d| sigma.get(d.index) == Some(d.choice))
        })
        .fold(O, |acc, m| acc + m.coeff)
}

fn same_everywhere(a: &DeltaPoly, b: &DeltaPoly) -> bool {
    sigmas()
        .iter()
        .all(|s| a.eval(s).unwrap() == b.eval(s).unwrap())
}

#[test]
fn scalar_semiring_laws_hold_exhaustively() {
    for &a in &ALL_SCALARS {
        assert_eq!(a + O, a);
        assert_eq!(a * M, a);
        assert_eq!(a * O, O);
        assert_eq!(a + a, a);
        for &b in &ALL_SCALARS {
            assert_eq!(a + b, b + a);
            assert_eq!(a * b, b * a);
            assert_eq!(a + b, a.max(b));
            for &c in &ALL_SCALARS {
                assert_eq!((a + b) + c, a + (b + c));
                assert_eq!((a * b) * c, a * (b * c));
                assert_eq!(a * (b + c), a * b + a * c);
            }
        }
    }
    assert_eq!(O * Inf, O);
    assert_eq!(W * P, P);
}

#[test]
fn scalar_text_round_trips() {
    for &a in &ALL_SCALARS {
        let back: MwpScalar = a.to_string().parse().unwrap();
        assert_eq!(back, a);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<MwpScalar>(&json).unwrap(), a);
    }
}

#[test]
fn lifting_merges_all_three_options() {
    let j = 4;
    let p = DeltaPoly::from_monomials(
        (0..3).map(|c| Monomial::new(W, vec![Delta::new(c, j)]).unwrap()),
    );
    assert_eq!(p, DeltaPoly::constant(W));
    // Two options only: nothing to merge.
    let q = DeltaPoly::from_monomials(
        (0..2).map(|c| Monomial::new(W, vec![Delta::new(c, j)]).unwrap()),
    );
    assert_eq!(q.monomials().len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn canonical_form_preserves_evaluation(monos in raw_monomials()) {
        let p = DeltaPoly::from_monomials(monos.clone());
        for s in sigmas() {
            prop_assert_eq!(p.eval(&s).unwrap(), eval_raw(&monos, &s));
        }
        let again = DeltaPoly::from_monomials(p.monomials().to_vec());
        prop_assert_eq!(again, p);
    }

    #[test]
    fn canonical_form_has_no_dominated_monomials(p in poly()) {
        let ms = p.monomials();
        for (i, a) in ms.iter().enumerate() {
            for (j, b) in ms.iter().enumerate() {
                prop_assert!(i == j || !a.dominated_by(b), "{} dominated by {}", i, j);
            }
        }
    }

    #[test]
    fn polynomial_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert!(same_everywhere(&p.add(&q).add(&r), &p.add(&q.add(&r))));
        prop_assert!(same_everywhere(&p.mul(&q), &q.mul(&p)));
        prop_assert!(same_everywhere(&p.mul(&q).mul(&r), &p.mul(&q.mul(&r))));
        prop_assert!(same_everywhere(&p.mul(&q.add(&r)), &p.mul(&q).add(&p.mul(&r))));
        prop_assert_eq!(p.add(&DeltaPoly::zero()), p.clone());
        prop_assert_eq!(p.mul(&DeltaPoly::constant(M)), p.clone());
        prop_assert!(p.mul(&DeltaPoly::zero()).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), c in scalar()) {
        for s in sigmas() {
            let (x, y) = (p.eval(&s).unwrap(), q.eval(&s).unwrap());
            prop_assert_eq!(p.add(&q).eval(&s).unwrap(), x + y);
            prop_assert_eq!(p.mul(&q).eval(&s).unwrap(), x * y);
            prop_assert_eq!(p.scale(c).eval(&s).unwrap(), c * x);
        }
    }

    #[test]
    fn guard_restricts_to_its_choice(p in poly(), c in 0u8..3, j in 0u32..K) {
        let g = p.guard(Delta::new(c, j));
        for s in sigmas() {
            let want = if s.get(j) == Some(c) { p.eval(&s).unwrap() } else { O };
            prop_assert_eq!(g.eval(&s).unwrap(), want);
        }
    }

    #[test]
    fn poly_json_round_trips(p in poly()) {
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<DeltaPoly>(&text).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn matrix_operations_commute_with_evaluation(a in matrix(3), b in matrix(3)) {
        let sum = a.add(&b).unwrap();
        let prod = a.mul(&b).unwrap();
        let star = a.star().unwrap();
        let sparse = a.star_sparse().unwrap();
        for s in sigmas() {
            let (x, y) = (a.eval(&s).unwrap(), b.eval(&s).unwrap());
            prop_assert_eq!(sum.eval(&s).unwrap(), naive::add(&x, &y));
            prop_assert_eq!(prod.eval(&s).unwrap(), naive::mul(&x, &y));
            prop_assert_eq!(star.eval(&s).unwrap(), naive::star(&x));
            prop_assert_eq!(sparse.eval(&s).unwrap(), naive::star(&x));
        }
    }

    #[test]
    fn star_is_a_fixpoint_and_idempotent(a in matrix(3)) {
        let st = a.star().unwrap();
        let id = MwpMatrix::identity(a.vars().to_vec());
        let unfolded = id.add(&a.mul(&st).unwrap()).unwrap();
        let twice = st.star().unwrap();
        for s in sigmas() {
            prop_assert_eq!(unfolded.eval(&s).unwrap(), st.eval(&s).unwrap());
            prop_assert_eq!(twice.eval(&s).unwrap(), st.eval(&s).unwrap());
        }
    }

    #[test]
    fn matrix_product_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        for s in sigmas() {
            prop_assert_eq!(l.eval(&s).unwrap(), r.eval(&s).unwrap());
        }
    }

    #[test]
    fn matrix_json_round_trips(a in matrix(3)) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<MwpMatrix>(&text).unwrap(), a);
    }
}

#[test]
fn matrices_over_different_variables_do_not_combine() {
    let a = MwpMatrix::identity(vec!["x".into()]);
    let b = MwpMatrix::identity(vec!["y".into()]);
    assert!(a.add(&b).is_err());
    assert!(a.mul(&b).is_err());
}

#[test]
fn evaluation_needs_every_mentioned_choice() {
    let p = DeltaPoly::monomial(P, vec![Delta::new(1, 2)]);
    assert!(p.eval(&ChoiceAssignment::from_slice(&[0, 0])).is_err());
    assert_eq!(
        p.eval(&ChoiceAssignment::from_slice(&[0, 0, 1])).unwrap(),
        P
    );
}

use std::sync::Arc;

use braidcat::algebra::{Algebra, AlgebraKind, AlgebraSpec, Vertex};
use braidcat::braid::{geometric_rep, BraidOracle, BraidWord, GroupId, GroupPresentation, OracleStatus, ReflectionMatrix};
use braidcat::complex::{ChainMap, ProjComplex};
use braidcat::homotopy::{homotopy_equivalent, homotopy_hom_dim, is_isomorphism, EquivalenceStatus};
use braidcat::minimize::{minimize, minimize_with, PivotStrategy};
use braidcat::scalar::{Rational, F32003};
use braidcat::twist::{word_apply, FunctorWord, TwistLetter};
use proptest::prelude::*;

type Q = Rational;

fn algebra(kind: AlgebraKind, n: usize) -> Algebra {
    Arc::new(AlgebraSpec::build(kind, n).unwrap())
}

fn kind_strategy() -> impl Strategy<Value = AlgebraKind> {
    prop_oneof![Just(AlgebraKind::Nakayama), Just(AlgebraKind::Zigzag)]
}

/// Signed letter indices in `1..=n`.
fn letters(n: usize, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec((1..=n as i64, any::<bool>()).prop_map(|(i, pos)| if pos { i } else { -i }), 0..=max_len)
}

fn functor_word(kind: AlgebraKind, signed: &[i64]) -> FunctorWord {
    FunctorWord::new(
        signed
            .iter()
            .map(|&s| {
                let i = s.unsigned_abs() as usize;
                match (kind, s > 0) {
                    (AlgebraKind::Nakayama, true) => TwistLetter::f(i),
                    (AlgebraKind::Nakayama, false) => TwistLetter::f_inv(i),
                    (AlgebraKind::Zigzag, true) => TwistLetter::r(i),
                    (AlgebraKind::Zigzag, false) => TwistLetter::r_inv(i),
                }
            })
            .collect(),
    )
}

#[derive(Debug, Clone)]
struct Sample {
    kind: AlgebraKind,
    n: usize,
    word: Vec<i64>,
    vertex: Vertex,
    junk_vertex: Vertex,
    junk_degree: i64,
}

fn sample() -> impl Strategy<Value = Sample> {
    (kind_strategy(), 2usize..=4).prop_flat_map(|(kind, n)| {
        (letters(n, 3), 1..=n, 1..=n, -2i64..=2).prop_map(move |(word, vertex, junk_vertex, junk_degree)| Sample {
            kind,
            n,
            word,
            vertex,
            junk_vertex,
            junk_degree,
        })
    })
}

/// A word image with a contractible `Cone(id)` summand glued on, so the
/// result is generally not minimal.
fn build(s: &Sample) -> ProjComplex<Q> {
    let a = algebra(s.kind, s.n);
    let x = word_apply(&functor_word(s.kind, &s.word), &ProjComplex::stalk(a.clone(), s.vertex, 0).unwrap()).unwrap();
    let junk = ProjComplex::stalk(a, s.junk_vertex, s.junk_degree).unwrap();
    x.direct_sum(&ChainMap::identity(&junk).cone().unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn minimize_preserves_homotopy_type(s in sample(), probe_vertex in 1usize..=4, probe_deg in -3i64..=3) {
        let x = build(&s);
        let m = minimize(&x);
        prop_assert!(m.is_minimal());
        prop_assert_eq!(minimize(&m), m.clone());
        prop_assert_eq!(x.euler_characteristic(), m.euler_characteristic());
        let probe = ProjComplex::stalk(x.algebra().clone(), 1 + (probe_vertex - 1) % s.n, probe_deg).unwrap();
        prop_assert_eq!(homotopy_hom_dim(&x, &probe).unwrap(), homotopy_hom_dim(&m, &probe).unwrap());
        prop_assert_eq!(homotopy_hom_dim(&probe, &x).unwrap(), homotopy_hom_dim(&probe, &m).unwrap());
    }

    #[test]
    fn cancellation_order_does_not_change_summands(s in sample(), seed in any::<u64>()) {
        let x = build(&s);
        let base = minimize_with(&x, PivotStrategy::Markowitz).summand_multisets();
        prop_assert_eq!(&minimize_with(&x, PivotStrategy::FirstFound).summand_multisets(), &base);
        prop_assert_eq!(&minimize_with(&x, PivotStrategy::Seeded(seed)).summand_multisets(), &base);
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(s in sample(), t in sample(), seed in any::<u64>()) {
        let x = build(&s);
        let v = homotopy_equivalent(&x, &minimize(&x), 16, seed).unwrap();
        prop_assert_eq!(v.status, EquivalenceStatus::Equivalent);
        prop_assert!(is_isomorphism(v.witness.as_ref().unwrap()));
        if s.kind == t.kind && s.n == t.n {
            let y = build(&t);
            let xy = homotopy_equivalent(&x, &y, 16, seed).unwrap();
            let yx = homotopy_equivalent(&y, &x, 16, seed ^ 1).unwrap();
            prop_assert_eq!(xy.status, yx.status);
            if let Some(w) = &xy.witness {
                prop_assert!(is_isomorphism(w));
            }
        }
    }

    #[test]
    fn word_then_inverse_is_identity(kind in kind_strategy(), n in 2usize..=5, v in 1usize..=5, word in letters(5, 6)) {
        let v = 1 + (v - 1) % n;
        let word: Vec<i64> = word.into_iter().map(|s| s.signum() * (1 + (s.abs() - 1) % n as i64)).collect();
        let w = functor_word(kind, &word);
        let p = ProjComplex::<Q>::stalk(algebra(kind, n), v, 0).unwrap();
        prop_assert_eq!(word_apply(&w.inverse().then_apply(&w), &p).unwrap(), p.clone());
        prop_assert_eq!(word_apply(&w.then_apply(&w.inverse()), &p).unwrap(), p);
    }

    #[test]
    fn twists_preserve_hom_dimensions(kind in kind_strategy(), n in 2usize..=4, a in 1usize..=4, b in 1usize..=4, shift in -2i64..=2, word in letters(4, 3)) {
        let (a, b) = (1 + (a - 1) % n, 1 + (b - 1) % n);
        let word: Vec<i64> = word.into_iter().map(|s| s.signum() * (1 + (s.abs() - 1) % n as i64)).collect();
        let alg = algebra(kind, n);
        let x = ProjComplex::<F32003>::stalk(alg.clone(), a, 0).unwrap();
        let y = ProjComplex::<F32003>::stalk(alg, b, shift).unwrap();
        let w = functor_word(kind, &word);
        let (fx, fy) = (word_apply(&w, &x).unwrap(), word_apply(&w, &y).unwrap());
        prop_assert_eq!(homotopy_hom_dim(&x, &y).unwrap(), homotopy_hom_dim(&fx, &fy).unwrap());
    }

    #[test]
    fn json_round_trip(s in sample()) {
        let m = minimize(&build(&s));
        let text = m.to_json_string();
        let back = ProjComplex::<Q>::from_json_str(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_json_string(), text);
    }
}

fn group_strategy() -> impl Strategy<Value = GroupId> {
    prop_oneof![Just(GroupId::Kn), Just(GroupId::An), Just(GroupId::Affine), Just(GroupId::Bn)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn relations_hold_in_any_context(group in group_strategy(), n in 3usize..=4, left in letters(4, 2), right in letters(4, 2), pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let clamp = |v: Vec<i64>| -> Vec<i64> { v.into_iter().map(|s| s.signum() * (1 + (s.abs() - 1) % n as i64)).collect() };
        let u = BraidWord::from_signed(group, n, &clamp(left)).unwrap();
        let v = BraidWord::from_signed(group, n, &clamp(right)).unwrap();
        let relations = GroupPresentation::new(group, n).unwrap().relations;
        let rel = &relations[pick.index(relations.len())];
        let oracle = BraidOracle::<Q>::new(n).unwrap();
        let l = u.concat(&rel.left).concat(&v);
        let r = u.concat(&rel.right).concat(&v);
        prop_assert_eq!(oracle.compare(&l, &r, seed).unwrap().status, OracleStatus::ImagesAgree);
    }

    #[test]
    fn free_reduction_is_idempotent_and_cancels_inverses(group in group_strategy(), n in 2usize..=6, w in letters(6, 10)) {
        let w: Vec<i64> = w.into_iter().map(|s| s.signum() * (1 + (s.abs() - 1) % n as i64)).collect();
        let w = BraidWord::from_signed(group, n, &w).unwrap();
        let r = w.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.len() <= w.len());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        prop_assert_eq!(BraidWord::parse(group, n, &w.to_string()).unwrap(), w);
    }

    #[test]
    fn geometric_rep_is_multiplicative(n in 2usize..=6, u in letters(6, 6), v in letters(6, 6)) {
        let clamp = |v: Vec<i64>| -> Vec<i64> { v.into_iter().map(|s| s.signum() * (1 + (s.abs() - 1) % n as i64)).collect() };
        let u = BraidWord::from_signed(GroupId::Kn, n, &clamp(u)).unwrap();
        let v = BraidWord::from_signed(GroupId::Kn, n, &clamp(v)).unwrap();
        let (gu, gv) = (geometric_rep(&u).unwrap(), geometric_rep(&v).unwrap());
        prop_assert_eq!(geometric_rep(&u.concat(&v)).unwrap(), gu.mul(&gv));
        prop_assert!(geometric_rep(&u.concat(&u.inverse())).unwrap().is_identity());
        prop_assert_eq!(ReflectionMatrix::identity(n).mul(&gu), gu);
    }
}

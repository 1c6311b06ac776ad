//! Acceptance criteria 1-14. Prints one PASS/FAIL line per criterion.
//!
//! Criterion 13 asserts the closing B_n formula exactly as written, which
//! does not define an action; it is expected to fail and does not affect the
//! exit status. Any other failure does.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use braidcat::algebra::{Algebra, AlgebraKind, AlgebraSpec, NamedMorphism, Vertex};
use braidcat::bimodule::verify_inverse_bimodule;
use braidcat::braid::{
    eta_witness, functor_word, geometric_rep, map_chi_mu, map_eta, word_c, BnAction, BraidOracle, BraidWord, CVariant,
    GroupId, GroupPresentation, OracleStatus,
};
use braidcat::complex::ProjComplex;
use braidcat::homotopy::{homotopy_equivalent, homotopy_hom_dim, EquivalenceStatus};
use braidcat::linalg::split_seed;
use braidcat::minimize::minimize;
use braidcat::scalar::Rational;
use braidcat::suite::{run_suite, CheckStatus, SuiteName, SuiteOptions};
use braidcat::twist::{h_generator_word, staircase_sum, word_apply_traced, FunctorWord, TwistEngine, TwistLetter};
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

type Q = Rational;
type Cx = ProjComplex<Q>;

const KNOWN_UNATTAINABLE: &[usize] = &[13];

struct Outcome {
    ok: bool,
    detail: String,
    note: Option<String>,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into(), note: None }
}

fn alg(kind: AlgebraKind, n: usize) -> Algebra {
    Arc::new(AlgebraSpec::build(kind, n).unwrap())
}

fn stalk(a: &Algebra, v: Vertex, deg: i64) -> Cx {
    ProjComplex::stalk(a.clone(), v, deg).unwrap()
}

/// `X_top -> X_{top-1} -> ...` with one summand per degree and named cells.
fn chain(a: &Algebra, top: i64, vs: &[Vertex], cells: &[(NamedMorphism, Vertex, Vertex)]) -> Cx {
    let cells = cells.iter().map(|&(k, i, j)| a.named_element::<Q>(k, i, j).unwrap()).collect();
    ProjComplex::sequence(a.clone(), top, vs, cells).unwrap()
}

fn equivalent(x: &Cx, y: &Cx, seed: u64) -> bool {
    homotopy_equivalent(x, y, 16, seed).unwrap().status == EquivalenceStatus::Equivalent
}

fn words_agree(oracle: &BraidOracle<Q>, l: &BraidWord, r: &BraidWord, seed: u64) -> bool {
    oracle.compare(l, r, seed).unwrap().status == OracleStatus::ImagesAgree
}

fn suite_ids_pass(name: SuiteName, n: usize, prefixes: &[&str]) -> (usize, Vec<String>) {
    let report = run_suite::<Q>(name, &SuiteOptions::new(n, 0)).unwrap();
    let picked: Vec<_> = report.checks.iter().filter(|c| prefixes.iter().any(|p| c.id.starts_with(p))).collect();
    let bad = picked.iter().filter(|c| c.status != CheckStatus::Pass).map(|c| c.id.clone()).collect();
    (picked.len(), bad)
}

fn c1() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=8 {
        let a = alg(AlgebraKind::Nakayama, n);
        for i in 1..=n {
            for j in 1..=n {
                let want = if i == j { 2 } else { 1 };
                let got = homotopy_hom_dim(&stalk(&a, i, 0), &stalk(&a, j, 0)).unwrap();
                if got != want || a.paths(i, j).len() != want {
                    bad.push((n, i, j, got));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("n = 2..8, mismatches {bad:?}"))
}

fn f_expected(a: &Algebra, i: Vertex, j: Vertex, inverse: bool) -> Cx {
    match (i == j, inverse) {
        (true, false) => stalk(a, i, 1),
        (true, true) => stalk(a, i, -1),
        (false, false) => chain(a, 1, &[i, j], &[(NamedMorphism::Mu, i, j)]),
        (false, true) => chain(a, 0, &[j, i], &[(NamedMorphism::Mu, j, i)]),
    }
}

fn c2() -> Outcome {
    let mut entries = 0;
    let mut bad = Vec::new();
    for n in 2..=6 {
        let a = alg(AlgebraKind::Nakayama, n);
        let engine = TwistEngine::<Q>::new(a.clone());
        for i in 1..=n {
            for j in 1..=n {
                for inverse in [false, true] {
                    let l = if inverse { TwistLetter::f_inv(i) } else { TwistLetter::f(i) };
                    let got = engine.image(&FunctorWord::new(vec![l]), j).unwrap();
                    entries += 1;
                    if !equivalent(&got, &f_expected(&a, i, j, inverse), entries) {
                        bad.push(format!("n{n} {l}(P{j})"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{entries} entries, n = 2..6, mismatches {bad:?}"))
}

fn c3() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 2..=4 {
        for i in 1..=n {
            let c = verify_inverse_bimodule::<Q>(i, n, split_seed(3, (10 * n + i) as u64)).unwrap();
            count += 1;
            if !c.passes() || c.middle_homology_dim != n * (n + 1) {
                bad.push((n, i));
            }
        }
    }
    outcome(bad.is_empty(), format!("{count} generators, n = 2..4, failures {bad:?}"))
}

fn c4() -> Outcome {
    let mut bad = Vec::new();
    let mut claims = 0;
    for n in 3..=5 {
        let oracle = BraidOracle::<Q>::new(n).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let l = BraidWord::from_signed(GroupId::Kn, n, &[i as i64, j as i64, i as i64]).unwrap();
                let r = BraidWord::from_signed(GroupId::Kn, n, &[j as i64, i as i64, j as i64]).unwrap();
                if !words_agree(&oracle, &l, &r, split_seed(4, (i * 10 + j) as u64)) {
                    bad.push(format!("n{n} a{i}a{j}a{i}"));
                }
            }
        }
        let (count, failed) = suite_ids_pass(SuiteName::BraidRelations, n, &["braid_relations.claim"]);
        claims += count;
        bad.extend(failed);
    }
    outcome(bad.is_empty(), format!("relations for all i != j and {claims} claim chains, n = 3..5, failures {bad:?}"))
}

fn r_expected(a: &Algebra, i: Vertex, j: Vertex) -> Cx {
    if i == j {
        stalk(a, i, 1)
    } else if i.abs_diff(j) == 1 {
        chain(a, 1, &[i, j], &[(NamedMorphism::Nu, i, j)])
    } else {
        stalk(a, j, 0)
    }
}

fn c5() -> Outcome {
    let mut bad = Vec::new();
    let mut relations = 0;
    for n in 3..=5 {
        let a = alg(AlgebraKind::Zigzag, n);
        let engine = TwistEngine::<Q>::new(a.clone());
        for i in 1..=n {
            for j in 1..=n {
                let got = engine.image(&FunctorWord::new(vec![TwistLetter::r(i)]), j).unwrap();
                if !equivalent(&got, &r_expected(&a, i, j), (i * 10 + j) as u64) {
                    bad.push(format!("n{n} R{i}(Q{j})"));
                }
            }
        }
        let oracle = BraidOracle::<Q>::new(n).unwrap();
        for rel in GroupPresentation::new(GroupId::An, n).unwrap().relations {
            relations += 1;
            if !words_agree(&oracle, &rel.left, &rel.right, relations as u64) {
                bad.push(format!("n{n} {rel}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("R tables and {relations} relations, n = 3..5, failures {bad:?}"))
}

fn c6() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 3..=5 {
        let (c, failed) = suite_ids_pass(SuiteName::Staircase, n, &["staircase.r.", "staircase.triangle"]);
        count += c;
        bad.extend(failed.into_iter().map(|id| format!("n{n} {id}")));
    }
    outcome(bad.is_empty(), format!("{count} cases, n = 3..5, failures {bad:?}"))
}

fn c7() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=5 {
        let a = alg(AlgebraKind::Zigzag, n);
        let t = staircase_sum::<Q>(&a).unwrap();
        for m in -(n as i64)..=(n as i64) {
            let d = homotopy_hom_dim(&t, &t.shift(m)).unwrap();
            let want = if m == 0 { n * (n + 1) } else { 0 };
            if d != want {
                bad.push((n, m, d));
            }
        }
    }
    outcome(bad.is_empty(), format!("|m| <= n, n = 3..5, mismatches {bad:?}"))
}

fn h_expected(a: &Algebra, i: Vertex, j: Vertex) -> Cx {
    let n = a.n();
    let next = i % n + 1;
    if j == i {
        stalk(a, next, 0)
    } else if j == next {
        chain(a, 2, &[i, next, next], &[(NamedMorphism::Mu, i, next), (NamedMorphism::DeltaSocle, next, next)])
    } else {
        stalk(a, j, 0)
    }
}

fn c8() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=5 {
        let a = alg(AlgebraKind::Nakayama, n);
        let engine = TwistEngine::<Q>::new(a.clone());
        for i in 1..=n {
            let mut words = vec![("H", h_generator_word(i, n).unwrap())];
            if i < n {
                words.push(("W", FunctorWord::parse(&format!("F{i} F{} F{i}^-1", i + 1), n).unwrap()));
            }
            for (tag, w) in words {
                for j in 1..=n {
                    let got = engine.image(&w, j).unwrap();
                    if !equivalent(&got, &h_expected(&a, i, j), (i * 10 + j) as u64) {
                        bad.push(format!("n{n} {tag}{i}(P{j})"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("H and W tables, n = 3..5, mismatches {bad:?}"))
}

fn c9() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 3..=4 {
        let oracle = BraidOracle::<Q>::new(n).unwrap();
        for rel in GroupPresentation::new(GroupId::Kn, n).unwrap().relations {
            count += 1;
            let (l, r) = (map_eta(&rel.left).unwrap(), map_eta(&rel.right).unwrap());
            if !words_agree(&oracle, &l, &r, count) {
                bad.push(format!("n{n} eta({rel})"));
            }
        }
        for k in 1..n {
            count += 1;
            let ck = word_c(k, n, CVariant::Recursive).unwrap();
            let cn = word_c(k + 1, n, CVariant::Recursive).unwrap();
            let conj = ck.concat(&cn).concat(&ck.inverse());
            let s = BraidWord::from_signed(GroupId::An, n, &[k as i64]).unwrap();
            if !words_agree(&oracle, &conj, &s, count) {
                bad.push(format!("n{n} c{k}c{}c{k}^-1", k + 1));
            }
        }
    }
    outcome(bad.is_empty(), format!("{count} comparisons, n = 3..4, failures {bad:?}"))
}

fn c10() -> Outcome {
    let mut bad = Vec::new();
    for n in 4..=5 {
        let w = eta_witness(n).unwrap();
        let mut want = vec![0i64; n];
        want[0] = -4;
        want[1] = -4;
        want[n - 1] = -3;
        let mut v = vec![0i64; n];
        v[n - 1] = 1;
        let got = geometric_rep(&w).unwrap().apply(&v);
        if got != want {
            bad.push(format!("n{n} image {got:?}"));
        }
        let oracle = BraidOracle::<Q>::new(n).unwrap();
        let e = map_eta(&w).unwrap();
        if !words_agree(&oracle, &e, &BraidWord::empty(GroupId::An, n), n as u64) {
            bad.push(format!("n{n} eta image acts nontrivially"));
        }
    }
    outcome(bad.is_empty(), format!("v_n -> -4v1 - 4v2 - 3v_n and trivial eta image, n = 4..5, failures {bad:?}"))
}

fn c11() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=4 {
        let oracle = BraidOracle::<Q>::new(n).unwrap();
        for k in 1..=n {
            let l = word_c(k, n, CVariant::LeftClosed).unwrap();
            let r = word_c(k, n, CVariant::RightClosed).unwrap();
            if !words_agree(&oracle, &l, &r, k as u64) {
                bad.push(format!("n{n} c{k}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("all k, n = 3..4, failures {bad:?}"))
}

fn c12() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 3..=4 {
        let oracle = BraidOracle::<Q>::new(n).unwrap();
        for rel in GroupPresentation::new(GroupId::Affine, n).unwrap().relations {
            count += 1;
            if !words_agree(&oracle, &rel.left, &rel.right, count) {
                bad.push(format!("n{n} rho {rel}"));
            }
            let (l, r) = (map_chi_mu(&rel.left).unwrap(), map_chi_mu(&rel.right).unwrap());
            if !words_agree(&oracle, &l, &r, count) {
                bad.push(format!("n{n} chi-mu {rel}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{count} relations under both maps, n = 3..4, failures {bad:?}"))
}

fn bn_failures(action: BnAction) -> (usize, Vec<String>) {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 3..=4 {
        let oracle = BraidOracle::<Q>::new(n).unwrap().with_bn_action(action);
        for rel in GroupPresentation::new(GroupId::Bn, n).unwrap().relations {
            count += 1;
            let v = oracle.compare(&rel.left, &rel.right, count as u64).unwrap();
            if v.status != OracleStatus::ImagesAgree {
                bad.push(format!("n{n} {rel} (P{})", v.vertex.unwrap_or(0)));
            }
        }
    }
    (count, bad)
}

fn c13() -> Outcome {
    let (count, bad) = bn_failures(BnAction::Literal);
    let (_, composite_bad) = bn_failures(BnAction::Composite);
    Outcome {
        ok: bad.is_empty(),
        detail: format!("b_i -> F_i F_(i+1) F_i, b_n -> F_n F_n: {} of {count} relations violated: {bad:?}", bad.len()),
        note: Some(format!(
            "b_i -> F_i F_(i+1) F_i^-1, b_n -> F_n F_n satisfies {} of {count} relations",
            count - composite_bad.len()
        )),
    }
}

fn c14() -> Outcome {
    let n = 4;
    let oracle = BraidOracle::<Q>::new(n).unwrap();
    let mut rng = SplitMix64::seed_from_u64(14);
    let mut bad = Vec::new();
    let mut visited = 0usize;
    for group in [GroupId::Kn, GroupId::An, GroupId::Affine, GroupId::Bn] {
        let engine = oracle.engine(braidcat::braid::action_algebra(group));
        for trial in 0..100 {
            let len = (rng.next_u64() % 9) as usize;
            let letters: Vec<i64> = (0..len)
                .map(|_| {
                    let i = 1 + (rng.next_u64() % n as u64) as i64;
                    if rng.next_u64() % 2 == 0 { i } else { -i }
                })
                .collect();
            let w = BraidWord::from_signed(group, n, &letters).unwrap();
            let round_trip = functor_word(&w.inverse().concat(&w)).unwrap();
            for v in 1..=n {
                let start = engine.stalk(v).unwrap();
                let mut idempotent = true;
                let end = word_apply_traced(&round_trip, &start, engine.cap(), |x| {
                    visited += 1;
                    idempotent &= minimize(x) == *x && x.is_minimal();
                })
                .unwrap();
                if !idempotent || !equivalent(&end, &start, split_seed(trial, v as u64)) {
                    bad.push(format!("{group} {w} on {v}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("400 words, {visited} intermediate complexes, n = 4, failures {bad:?}"))
}

fn main() -> ExitCode {
    let criteria: [(usize, &str, u64, fn() -> Outcome); 14] = [
        (1, "Hom dimensions between projectives", 1, c1),
        (2, "F_i and F_i^-1 image tables", 5, c2),
        (3, "bimodule inverse check", 60, c3),
        (4, "B(K_n) relations and claim chains", 120, c4),
        (5, "R_i tables and type A relations", 60, c5),
        (6, "staircase lemmas", 60, c6),
        (7, "tilting property of T", 30, c7),
        (8, "W and H image tables", 30, c8),
        (9, "eta is a homomorphism", 120, c9),
        (10, "non-faithfulness witness", 10, c10),
        (11, "closed forms of c_k", 60, c11),
        (12, "affine relations under rho and chi-mu", 120, c12),
        (13, "closing B_n action as written", 60, c13),
        (14, "random word round trips", 120, c14),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = out.ok && in_time;
        println!(
            "{} criterion {id:>2}: {name} [{:.2} s, limit {limit} s]: {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
        if let Some(note) = out.note {
            println!("     note: {note}");
        }
        if !in_time {
            println!("     over the time limit");
        }
        if !pass && !KNOWN_UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures (known unattainable: {KNOWN_UNATTAINABLE:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}

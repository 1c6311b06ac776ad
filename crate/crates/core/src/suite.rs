//! Named verification suites and their machine-readable reports.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraKind, AlgebraSpec, NamedMorphism, Vertex};
use crate::bimodule::{verify_inverse_bimodule_bounded, BimoduleError, DEFAULT_BIMODULE_MAX_N};
use crate::braid::{
    eta_witness, geometric_rep, map_chi, map_chi_mu, map_eta, word_c, BnAction, BraidError, BraidOracle, BraidWord,
    CVariant, GroupId, GroupPresentation, OracleStatus, OracleVerdict, ReflectionMatrix, ORACLE_TRIALS,
};
use crate::complex::{ComplexError, ProjComplex};
use crate::homotopy::{homotopy_equivalent, homotopy_hom_dim, EquivalenceStatus};
use crate::linalg::split_seed;
use crate::scalar::Field;
use crate::twist::{
    h_generator_word, staircase, staircase_complex, staircase_cone_map, staircase_sum, staircase_top_map,
    FunctorWord, TwistEngine, TwistError, TwistLetter, DEFAULT_MAX_SUMMANDS,
};

pub const REPORT_VERSION: &str = "1";
pub const DEFAULT_MAX_N: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Algebra,
    Twists,
    BraidRelations,
    Eta,
    Staircase,
    Affine,
    BnAction,
    All,
}

impl SuiteName {
    pub const EACH: [SuiteName; 7] = [
        SuiteName::Algebra,
        SuiteName::Twists,
        SuiteName::BraidRelations,
        SuiteName::Eta,
        SuiteName::Staircase,
        SuiteName::Affine,
        SuiteName::BnAction,
    ];

    pub fn parse(text: &str) -> Option<SuiteName> {
        Some(match text {
            "algebra" => SuiteName::Algebra,
            "twists" => SuiteName::Twists,
            "braid_relations" => SuiteName::BraidRelations,
            "eta" => SuiteName::Eta,
            "staircase" => SuiteName::Staircase,
            "affine" => SuiteName::Affine,
            "bn_action" => SuiteName::BnAction,
            "all" => SuiteName::All,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Algebra => "algebra",
            SuiteName::Twists => "twists",
            SuiteName::BraidRelations => "braid_relations",
            SuiteName::Eta => "eta",
            SuiteName::Staircase => "staircase",
            SuiteName::Affine => "affine",
            SuiteName::BnAction => "bn_action",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    pub paper_anchor: String,
    pub status: CheckStatus,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub undetermined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub version: &'static str,
    pub suite: SuiteName,
    pub n: usize,
    pub seed: u64,
    pub field: String,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.undetermined == 0
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} n={} seed={} field={}\n", self.suite, self.n, self.seed, self.field);
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Undetermined => "UNDETERMINED",
            };
            out.push_str(&format!("{status:<12} {:<width$}  {}  [{} ms]\n", c.id, c.description, c.elapsed_ms));
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} undetermined\n",
            self.summary.pass, self.summary.fail, self.summary.undetermined
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOptions {
    pub n: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub max_n: usize,
    pub max_summands: usize,
    /// When false every `elapsed_ms` is reported as 0.
    pub timing: bool,
}

impl SuiteOptions {
    pub fn new(n: usize, seed: u64) -> Self {
        SuiteOptions { n, seed, jobs: None, max_n: DEFAULT_MAX_N, max_summands: DEFAULT_MAX_SUMMANDS, timing: true }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("rank {n} outside the supported range 2..={max}")]
    RankOutOfRange { n: usize, max: usize },
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

enum Outcome {
    Pass(Value),
    Fail(Value),
    Undetermined(Value),
}

impl Outcome {
    fn from_bool(ok: bool, cert: Value) -> Self {
        if ok {
            Outcome::Pass(cert)
        } else {
            Outcome::Fail(cert)
        }
    }

    fn status(&self) -> CheckStatus {
        match self {
            Outcome::Pass(_) => CheckStatus::Pass,
            Outcome::Fail(_) => CheckStatus::Fail,
            Outcome::Undetermined(_) => CheckStatus::Undetermined,
        }
    }

    fn into_value(self) -> Value {
        match self {
            Outcome::Pass(v) | Outcome::Fail(v) | Outcome::Undetermined(v) => v,
        }
    }

    /// Fails on the first failing row, otherwise undetermined on the first
    /// undetermined row.
    fn all(rows: Vec<(String, Outcome)>) -> Self {
        let mut status = CheckStatus::Pass;
        let mut cert = serde_json::Map::new();
        for (label, o) in rows {
            match (o.status(), status) {
                (CheckStatus::Fail, _) => status = CheckStatus::Fail,
                (CheckStatus::Undetermined, CheckStatus::Pass) => status = CheckStatus::Undetermined,
                _ => {}
            }
            cert.insert(label, o.into_value());
        }
        let v = Value::Object(cert);
        match status {
            CheckStatus::Pass => Outcome::Pass(v),
            CheckStatus::Fail => Outcome::Fail(v),
            CheckStatus::Undetermined => Outcome::Undetermined(v),
        }
    }
}

fn error_outcome(e: impl fmt::Display, undetermined: bool) -> Outcome {
    let v = json!({ "error": e.to_string() });
    if undetermined {
        Outcome::Undetermined(v)
    } else {
        Outcome::Fail(v)
    }
}

impl From<TwistError> for Outcome {
    fn from(e: TwistError) -> Self {
        let size = matches!(e, TwistError::SizeBound(_));
        error_outcome(e, size)
    }
}

impl From<ComplexError> for Outcome {
    fn from(e: ComplexError) -> Self {
        let size = matches!(e, ComplexError::TooLarge { .. });
        error_outcome(e, size)
    }
}

impl From<BraidError> for Outcome {
    fn from(e: BraidError) -> Self {
        let undetermined = matches!(e, BraidError::UndeterminedEntry { .. } | BraidError::Twist(TwistError::SizeBound(_)));
        error_outcome(e, undetermined)
    }
}

impl From<BimoduleError> for Outcome {
    fn from(e: BimoduleError) -> Self {
        let size = matches!(e, BimoduleError::SizeBound { .. });
        error_outcome(e, size)
    }
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Outcome::from(err),
        }
    };
}

type CheckFn<'a> = Box<dyn Fn(u64) -> Outcome + Send + Sync + 'a>;

struct Pending<'a> {
    id: String,
    description: String,
    anchor: &'static str,
    run: CheckFn<'a>,
}

struct Ctx<F: Field> {
    n: usize,
    nak: Algebra,
    zig: Algebra,
    oracle: BraidOracle<F>,
    literal_oracle: BraidOracle<F>,
}

impl<F: Field> Ctx<F> {
    fn f_engine(&self) -> &TwistEngine<F> {
        self.oracle.engine(AlgebraKind::Nakayama)
    }

    fn r_engine(&self) -> &TwistEngine<F> {
        self.oracle.engine(AlgebraKind::Zigzag)
    }
}

const A_HOM: &str = "Hom dimensions between indecomposable projectives";
const A_ALG: &str = "Nakayama and zigzag algebras as symmetric algebras";
const A_F_TABLE: &str = "Lemma: images of projectives under F_i and F_i^-1";
const A_BIMOD: &str = "Theorem: F_i is a two-sided tilting complex with inverse F_i'";
const A_BRAID_K: &str = "Theorem: the braid group B(K_n) acts through a_i -> F_i";
const A_CLAIM: &str = "Claim: images under F_i^-1 F_j F_i and F_j F_i F_j^-1";
const A_R_TABLE: &str = "Images of projectives under R_i";
const A_BRAID_A: &str = "Theorem: B(A_n) acts faithfully through sigma_i -> R_i";
const A_H_TABLE: &str = "Images of projectives under H_i = F_i F_{i+1} F_i^-1";
const A_STAIR: &str = "Lemmas on R_i(T_j) and R_n(T_j)";
const A_TILT: &str = "Tilting complex T with endomorphism ring A";
const A_ETA: &str = "Proposition: eta is a surjective group homomorphism";
const A_NEED: &str = "Lemma: c_j sigma_i^-1 = sigma_i^-1 c_j";
const A_NONFAITHFUL: &str = "Corollary: the action of B(K_n) is not faithful";
const A_GEOM: &str = "Geometric representation of W(K_n)";
const A_GAMMA_F: &str = "Proposition: closed forms of Gamma^-1(F_k)";
const A_AFFINE: &str = "Theorem: the affine braid group acts faithfully through h_i -> H_i";
const A_CHI_MU: &str = "Injective homomorphisms mu and chi";
const A_BN: &str = "Remark: an action of B(B_n) on D^b(A)";

fn equiv_outcome<F: Field>(computed: &ProjComplex<F>, expected: &ProjComplex<F>, seed: u64) -> Outcome {
    let v = attempt!(homotopy_equivalent(computed, expected, ORACLE_TRIALS, seed));
    let cert = json!({ "computed": computed.describe(), "expected": expected.describe() });
    match v.status {
        EquivalenceStatus::Equivalent => Outcome::Pass(cert),
        EquivalenceStatus::Distinct => Outcome::Fail(json!({
            "computed": computed.describe(),
            "expected": expected.describe(),
            "distinct": v.certificate,
        })),
        EquivalenceStatus::Undetermined => Outcome::Undetermined(cert),
    }
}

fn oracle_outcome(verdict: Result<OracleVerdict, BraidError>, expect_agree: bool) -> Outcome {
    let v = attempt!(verdict);
    let ok = (v.status == OracleStatus::ImagesAgree) == expect_agree;
    let mut cert = serde_json::to_value(&v).expect("verdict serializes");
    cert["evidence"] = Value::String(v.evidence_note().into());
    Outcome::from_bool(ok, cert)
}

fn two_term<F: Field>(alg: &Algebra, top: i64, a: Vertex, b: Vertex, kind: NamedMorphism) -> Result<ProjComplex<F>, ComplexError> {
    let cell = alg.named_element(kind, a, b)?;
    ProjComplex::sequence(alg.clone(), top, &[a, b], vec![cell])
}

/// Expected `F_i(P_j)` (`inverse = false`) or `F_i^-1(P_j)`.
fn expected_f<F: Field>(alg: &Algebra, i: Vertex, j: Vertex, inverse: bool) -> Result<ProjComplex<F>, ComplexError> {
    match (i == j, inverse) {
        (true, false) => ProjComplex::stalk(alg.clone(), i, 1),
        (true, true) => ProjComplex::stalk(alg.clone(), i, -1),
        (false, false) => two_term(alg, 1, i, j, NamedMorphism::Mu),
        (false, true) => two_term(alg, 0, j, i, NamedMorphism::Mu),
    }
}

/// Expected `R_i(Q_j)`.
fn expected_r<F: Field>(alg: &Algebra, i: Vertex, j: Vertex) -> Result<ProjComplex<F>, ComplexError> {
    if i == j {
        ProjComplex::stalk(alg.clone(), i, 1)
    } else if i.abs_diff(j) == 1 {
        two_term(alg, 1, i, j, NamedMorphism::Nu)
    } else {
        ProjComplex::stalk(alg.clone(), j, 0)
    }
}

/// Expected `H_i(P_j)` with `next = i+1` and `prev = i-1` read cyclically.
fn expected_h<F: Field>(alg: &Algebra, i: Vertex, j: Vertex) -> Result<ProjComplex<F>, ComplexError> {
    let n = alg.n();
    let next = if i == n { 1 } else { i + 1 };
    if j == i {
        ProjComplex::stalk(alg.clone(), next, 0)
    } else if j == next {
        let mu = alg.named_element(NamedMorphism::Mu, i, next)?;
        let soc = alg.named_element(NamedMorphism::DeltaSocle, next, next)?;
        ProjComplex::sequence(alg.clone(), 2, &[i, next, next], vec![mu, soc])
    } else {
        ProjComplex::stalk(alg.clone(), j, 0)
    }
}

/// Summands by degree of the entries in the two chains of the claim, for
/// `F_i`, `F_j F_i`, `F_i^-1 F_j F_i` and `F_j^-1`, `F_i F_j^-1`,
/// `F_j F_i F_j^-1` applied to `P_k`.
///
/// When `k` lies strictly between `j` and `i` in the cyclic order the path
/// `(j..i)(i..k)` runs past the socle, the induced map vanishes, and the
/// entries keep an extra `P_j` or `P_i` pair instead of collapsing.
fn claim_shape(n: usize, i: Vertex, j: Vertex, k: Vertex, step: usize) -> Vec<(i64, Vec<Vertex>)> {
    let d = |a: Vertex, b: Vertex| (b + n - a) % n;
    let wraps = k != i && k != j && d(j, i) + d(i, k) > n;
    let other = |a: Vertex, ka: i64, b: Vertex, kb: i64| vec![(ka, vec![a]), (kb, vec![b])];
    match step {
        0 if k == i => vec![(1, vec![i])],
        0 => other(i, 1, k, 0),
        1 if k == i => other(j, 2, i, 1),
        1 if k == j => vec![(1, vec![i])],
        1 if wraps => vec![(2, vec![j]), (1, vec![i, j]), (0, vec![k])],
        1 => other(i, 1, k, 0),
        2 if k == i => vec![(2, vec![j]), (1, vec![i]), (0, vec![i])],
        2 if k == j => vec![(0, vec![i])],
        2 if wraps => vec![(2, vec![j]), (1, vec![i, j]), (0, vec![i, k])],
        2 => vec![(0, vec![k])],
        3 if k == j => vec![(-1, vec![j])],
        3 => other(k, 0, j, -1),
        4 if k == i => vec![(1, vec![i]), (0, vec![i]), (-1, vec![j])],
        4 if k == j => other(i, 0, j, -1),
        4 if wraps => vec![(1, vec![i]), (0, vec![i, k]), (-1, vec![j])],
        4 => other(k, 0, j, -1),
        5 => claim_shape(n, i, j, k, 2),
        _ => unreachable!("six steps"),
    }
    .into_iter()
    .map(|(deg, mut vs)| {
        vs.sort_unstable();
        (deg, vs)
    })
    .collect()
}

fn multisets<F: Field>(x: &ProjComplex<F>) -> Vec<(i64, Vec<Vertex>)> {
    x.summand_multisets()
        .into_iter()
        .rev()
        .map(|(deg, mut vs)| {
            vs.sort_unstable();
            (deg, vs)
        })
        .collect()
}

fn algebra_checks<'a, F: Field>(ctx: &'a Ctx<F>, out: &mut Vec<Pending<'a>>) {
    let n = ctx.n;
    out.push(Pending {
        id: "algebra.hom_dims".into(),
        description: format!("dim Hom(P_i, P_j) = 2 if i = j else 1, from paths and from the chain-map solver (n = {n})"),
        anchor: A_HOM,
        run: Box::new(move |_| {
            let mut bad = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    let expected = if i == j { 2 } else { 1 };
                    let by_paths = ctx.nak.paths(i, j).len();
                    let (pi, pj) = (
                        attempt!(ProjComplex::<F>::stalk(ctx.nak.clone(), i, 0)),
                        attempt!(ProjComplex::<F>::stalk(ctx.nak.clone(), j, 0)),
                    );
                    let by_solver = attempt!(homotopy_hom_dim(&pi, &pj));
                    if by_paths != expected || by_solver != expected {
                        bad.push(json!({ "i": i, "j": j, "paths": by_paths, "solver": by_solver }));
                    }
                }
            }
            Outcome::from_bool(bad.is_empty(), json!({ "mismatches": bad }))
        }),
    });
    out.push(Pending {
        id: "algebra.associativity".into(),
        description: "basis products are associative in both algebras (exhaustive)".into(),
        anchor: A_ALG,
        run: Box::new(move |_| {
            let mut failures = 0usize;
            for spec in [&ctx.nak, &ctx.zig] {
                let d = spec.dim();
                for x in 0..d {
                    for y in 0..d {
                        for z in 0..d {
                            let l = spec.mult_basis(x, y).and_then(|xy| spec.mult_basis(xy, z));
                            let r = spec.mult_basis(y, z).and_then(|yz| spec.mult_basis(x, yz));
                            failures += usize::from(l != r);
                        }
                    }
                }
            }
            Outcome::from_bool(failures == 0, json!({ "failures": failures }))
        }),
    });
    out.push(Pending {
        id: "algebra.projective_dims".into(),
        description: "dim P_i = n + 1 over Nakayama; dim Q_i = 4 inside, 3 at the ends over zigzag".into(),
        anchor: A_ALG,
        run: Box::new(move |_| {
            let nak: Vec<usize> = (1..=n).map(|v| ctx.nak.projective_dim(v)).collect();
            let zig: Vec<usize> = (1..=n).map(|v| ctx.zig.projective_dim(v)).collect();
            let ok = nak.iter().all(|&d| d == n + 1)
                && zig.iter().enumerate().all(|(k, &d)| d == if k == 0 || k == n - 1 { 3 } else { 4 });
            Outcome::from_bool(ok, json!({ "nakayama": nak, "zigzag": zig }))
        }),
    });
    out.push(Pending {
        id: "algebra.symmetric_form".into(),
        description: "every basis path pairs with its dual to the socle on both sides".into(),
        anchor: A_ALG,
        run: Box::new(move |_| {
            let mut bad = Vec::new();
            for spec in [&ctx.nak, &ctx.zig] {
                for y in 0..spec.dim() {
                    let p = spec.path(y);
                    let d = spec.dual(y);
                    if spec.mult_basis(d, y) != Some(spec.socle(p.end)) || spec.mult_basis(y, d) != Some(spec.socle(p.start)) {
                        bad.push(format!("{} {}", spec.name(), p.label));
                    }
                }
            }
            Outcome::from_bool(bad.is_empty(), json!({ "bad": bad }))
        }),
    });
}

fn twist_checks<'a, F: Field>(ctx: &'a Ctx<F>, out: &mut Vec<Pending<'a>>) {
    let n = ctx.n;
    for i in 1..=n {
        for j in 1..=n {
            for inverse in [false, true] {
                let (tag, name) = if inverse { ("finv", "F_i^-1") } else { ("f", "F_i") };
                out.push(Pending {
                    id: format!("twists.{tag}_table.i{i:02}.j{j:02}"),
                    description: format!("{} (P{j}) with i = {i} matches the displayed complex", name),
                    anchor: A_F_TABLE,
                    run: Box::new(move |seed| {
                        let letter = if inverse { TwistLetter::f_inv(i) } else { TwistLetter::f(i) };
                        let got = attempt!(ctx.f_engine().image(&FunctorWord::new(vec![letter]), j));
                        let expected = attempt!(expected_f::<F>(&ctx.nak, i, j, inverse));
                        equiv_outcome(&got, &expected, seed)
                    }),
                });
            }
        }
        out.push(Pending {
            id: format!("twists.inverse.i{i:02}"),
            description: format!("F{i}^-1 F{i} and F{i} F{i}^-1 fix every P_j; R{i}^-1 R{i} and R{i} R{i}^-1 fix every Q_j"),
            anchor: A_BIMOD,
            run: Box::new(move |seed| {
                let mut rows = Vec::new();
                for (engine, a, b) in [
                    (ctx.f_engine(), TwistLetter::f(i), TwistLetter::f_inv(i)),
                    (ctx.r_engine(), TwistLetter::r(i), TwistLetter::r_inv(i)),
                ] {
                    for w in [FunctorWord::new(vec![b, a]), FunctorWord::new(vec![a, b])] {
                        for j in 1..=n {
                            let got = attempt!(engine.image(&w, j));
                            let stalk = attempt!(engine.stalk(j));
                            rows.push((format!("{w} on {j}"), equiv_outcome(&got, &stalk, split_seed(seed, j as u64))));
                        }
                    }
                }
                Outcome::all(rows)
            }),
        });
        out.push(Pending {
            id: format!("twists.r_table.i{i:02}"),
            description: format!("R{i}(Q_j) for all j over the zigzag algebra"),
            anchor: A_R_TABLE,
            run: Box::new(move |seed| {
                let w = FunctorWord::new(vec![TwistLetter::r(i)]);
                let mut rows = Vec::new();
                for j in 1..=n {
                    let got = attempt!(ctx.r_engine().image(&w, j));
                    let expected = attempt!(expected_r::<F>(&ctx.zig, i, j));
                    rows.push((format!("Q{j}"), equiv_outcome(&got, &expected, split_seed(seed, j as u64))));
                }
                Outcome::all(rows)
            }),
        });
        out.push(Pending {
            id: format!("twists.h_table.i{i:02}"),
            description: format!("H{i}(P_j) for all j, H{i} built as a generator word"),
            anchor: A_H_TABLE,
            run: Box::new(move |seed| {
                let w = attempt!(h_generator_word(i, n));
                let mut rows = Vec::new();
                for j in 1..=n {
                    let got = attempt!(ctx.f_engine().image(&w, j));
                    let expected = attempt!(expected_h::<F>(&ctx.nak, i, j));
                    rows.push((format!("P{j}"), equiv_outcome(&got, &expected, split_seed(seed, j as u64))));
                }
                Outcome::all(rows)
            }),
        });
        if i < n {
            out.push(Pending {
                id: format!("twists.w_table.i{i:02}"),
                description: format!("F{i} F{} F{i}^-1 (P_j) for all j, parsed from text", i + 1),
                anchor: A_H_TABLE,
                run: Box::new(move |seed| {
                    let w = attempt!(FunctorWord::parse(&format!("F{i} F{} F{i}^-1", i + 1), n));
                    let mut rows = Vec::new();
                    for j in 1..=n {
                        let got = attempt!(ctx.f_engine().image(&w, j));
                        let expected = attempt!(expected_h::<F>(&ctx.nak, i, j));
                        rows.push((format!("P{j}"), equiv_outcome(&got, &expected, split_seed(seed, j as u64))));
                    }
                    Outcome::all(rows)
                }),
            });
        }
        out.push(Pending {
            id: format!("twists.bimodule.i{i:02}"),
            description: format!("F{i} tensor F{i}' is homotopy equivalent to A as bimodules"),
            anchor: A_BIMOD,
            run: Box::new(move |seed| {
                let c = attempt!(verify_inverse_bimodule_bounded::<F>(i, n, seed, DEFAULT_BIMODULE_MAX_N));
                Outcome::from_bool(c.passes(), serde_json::to_value(&c).expect("check serializes"))
            }),
        });
    }
}

fn braid_relation_checks<'a, F: Field>(ctx: &'a Ctx<F>, out: &mut Vec<Pending<'a>>) {
    let n = ctx.n;
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            if i < j {
                out.push(Pending {
                    id: format!("braid_relations.kn.i{i:02}.j{j:02}"),
                    description: format!("F{i} F{j} F{i} (P_k) = F{j} F{i} F{j} (P_k) for all k"),
                    anchor: A_BRAID_K,
                    run: Box::new(move |seed| {
                        let l = attempt!(BraidWord::from_signed(GroupId::Kn, n, &[i as i64, j as i64, i as i64]));
                        let r = attempt!(BraidWord::from_signed(GroupId::Kn, n, &[j as i64, i as i64, j as i64]));
                        oracle_outcome(ctx.oracle.compare(&l, &r, seed), true)
                    }),
                });
            }
            out.push(Pending {
                id: format!("braid_relations.claim.i{i:02}.j{j:02}"),
                description: format!("both chains F{i}, F{j}, F{i}^-1 and F{j}^-1, F{i}, F{j} entry by entry, with wrapping P_k kept three-term"),
                anchor: A_CLAIM,
                run: Box::new(move |seed| {
                    let chains = [
                        [TwistLetter::f(i), TwistLetter::f(j), TwistLetter::f_inv(i)],
                        [TwistLetter::f_inv(j), TwistLetter::f(i), TwistLetter::f(j)],
                    ];
                    let mut rows = Vec::new();
                    for k in 1..=n {
                        let mut finals = Vec::new();
                        for (c, chain) in chains.iter().enumerate() {
                            let mut applied = Vec::new();
                            for (s, &letter) in chain.iter().enumerate() {
                                applied.insert(0, letter);
                                let w = FunctorWord::new(applied.clone());
                                let got = attempt!(ctx.f_engine().image(&w, k));
                                let expected = claim_shape(n, i, j, k, 3 * c + s);
                                let shape = multisets(&got);
                                rows.push((
                                    format!("chain{} step{} P{k}", c + 1, s + 1),
                                    Outcome::from_bool(
                                        shape == expected,
                                        json!({ "computed": got.describe(), "expected_summands": expected }),
                                    ),
                                ));
                                if s == 2 {
                                    finals.push(got);
                                }
                            }
                        }
                        rows.push((
                            format!("ends agree P{k}"),
                            equiv_outcome(&finals[0], &finals[1], split_seed(seed, k as u64)),
                        ));
                    }
                    Outcome::all(rows)
                }),
            });
        }
    }
    let relations = GroupPresentation::new(GroupId::An, n).map(|p| p.relations).unwrap_or_default();
    for (idx, rel) in relations.into_iter().enumerate() {
        out.push(Pending {
            id: format!("braid_relations.an.r{idx:02}"),
            description: format!("R-images of {rel} agree on every Q_k"),
            anchor: A_BRAID_A,
            run: Box::new(move |seed| oracle_outcome(ctx.oracle.compare(&rel.left, &rel.right, seed), true)),
        });
    }
    out.push(Pending {
        id: "braid_relations.an.distinct_generators".into(),
        description: "s1 and s2 are proven distinct by their R-images".into(),
        anchor: A_BRAID_A,
        run: Box::new(move |seed| {
            let l = attempt!(BraidWord::from_signed(GroupId::An, n, &[1]));
            let r = attempt!(BraidWord::from_signed(GroupId::An, n, &[2]));
            oracle_outcome(ctx.oracle.compare(&l, &r, seed), false)
        }),
    });
}

fn an(n: usize, letters: &[i64]) -> Result<BraidWord, BraidError> {
    BraidWord::from_signed(GroupId::An, n, letters)
}

fn eta_checks<'a, F: Field>(ctx: &'a Ctx<F>, out: &mut Vec<Pending<'a>>) {
    let n = ctx.n;
    out.push(Pending {
        id: "eta.geometric.coxeter".into(),
        description: "generator matrices are involutions and satisfy f_i f_j f_i = f_j f_i f_j for all i != j".into(),
        anchor: A_GEOM,
        run: Box::new(move |_| {
            let mut bad = Vec::new();
            for i in 1..=n {
                let g = ReflectionMatrix::generator(i, n);
                if !g.mul(&g).is_identity() {
                    bad.push(format!("f{i}^2"));
                }
                for j in 1..=n {
                    let h = ReflectionMatrix::generator(j, n);
                    if i != j && g.mul(&h).mul(&g) != h.mul(&g).mul(&h) {
                        bad.push(format!("f{i} f{j} f{i}"));
                    }
                }
            }
            Outcome::from_bool(bad.is_empty(), json!({ "failures": bad }))
        }),
    });
    if n >= 3 {
        out.push(Pending {
            id: "eta.witness.vector".into(),
            description: format!("the eta-witness word sends v{n} to -4 v1 - 4 v2 - 3 v{n}"),
            anchor: A_NONFAITHFUL,
            run: Box::new(move |_| {
                let w = attempt!(eta_witness(n));
                let m = attempt!(geometric_rep(&w));
                let mut expected = vec![0i64; n];
                expected[0] = -4;
                expected[1] = -4;
                expected[n - 1] = -3;
                let got = m.column(n);
                Outcome::from_bool(got == expected, json!({ "word": w.to_string(), "image": got, "expected": expected }))
            }),
        });
        out.push(Pending {
            id: "eta.witness.trivial_image".into(),
            description: "eta of the eta-witness acts trivially on every Q_k while its matrix is not the identity".into(),
            anchor: A_NONFAITHFUL,
            run: Box::new(move |seed| {
                let w = attempt!(eta_witness(n));
                let m = attempt!(geometric_rep(&w));
                let e = attempt!(map_eta(&w));
                let o = oracle_outcome(ctx.oracle.compare(&e, &BraidWord::empty(GroupId::An, n), seed), true);
                Outcome::all(vec![
                    ("matrix is not identity".into(), Outcome::from_bool(!m.is_identity(), json!(m.rows))),
                    (format!("eta image {e}"), o),
                ])
            }),
        });
    }
    let relations = GroupPresentation::new(GroupId::Kn, n).map(|p| p.relations).unwrap_or_default();
    for (idx, rel) in relations.into_iter().enumerate() {
        out.push(Pending {
            id: format!("eta.relation.r{idx:02}"),
            description: format!("eta-images of {rel} agree on every Q_k"),
            anchor: A_ETA,
            run: Box::new(move |seed| {
                let (l, r) = (attempt!(map_eta(&rel.left)), attempt!(map_eta(&rel.right)));
                oracle_outcome(ctx.oracle.compare(&l, &r, seed), true)
            }),
        });
    }
    for k in 1..n {
        out.push(Pending {
            id: format!("eta.conjugation.k{k:02}"),
            description: format!("c{k} c{} c{k}^-1 and c{}^-1 c{k} c{} agree with s{k}", k + 1, k + 1, k + 1),
            anchor: A_ETA,
            run: Box::new(move |seed| {
                let ck = attempt!(word_c(k, n, CVariant::Recursive));
                let cn = attempt!(word_c(k + 1, n, CVariant::Recursive));
                let s = attempt!(an(n, &[k as i64]));
                let first = ck.concat(&cn).concat(&ck.inverse()).free_reduce();
                let second = cn.inverse().concat(&ck).concat(&cn).free_reduce();
                Outcome::all(vec![
                    (first.to_string(), oracle_outcome(ctx.oracle.compare(&first, &s, seed), true)),
                    (second.to_string(), oracle_outcome(ctx.oracle.compare(&second, &s, split_seed(seed, 1)), true)),
                ])
            }),
        });
    }
    for j in 1..n {
        for i in 1..=n {
            if i == j || i + 1 == j {
                continue;
            }
            let holds = i < n;
            out.push(Pending {
                id: format!("eta.lemma_need.i{i:02}.j{j:02}"),
                description: if holds {
                    format!("c{j} s{i}^-1 and s{i}^-1 c{j} agree on every Q_k")
                } else {
                    format!("c{j} s{i}^-1 and s{i}^-1 c{j} are proven distinct (the commutation needs i < n)")
                },
                anchor: A_NEED,
                run: Box::new(move |seed| {
                    let c = attempt!(word_c(j, n, CVariant::Recursive));
                    let s = attempt!(an(n, &[-(i as i64)]));
                    oracle_outcome(ctx.oracle.compare(&c.concat(&s), &s.concat(&c), seed), holds)
                }),
            });
        }
    }
    for k in 1..=n {
        out.push(Pending {
            id: format!("eta.c_closed_forms.k{k:02}"),
            description: format!("c{k} unfolds to its left closed form, which agrees with the right closed form"),
            anchor: A_GAMMA_F,
            run: Box::new(move |seed| {
                let rec = attempt!(word_c(k, n, CVariant::Recursive));
                let left = attempt!(word_c(k, n, CVariant::LeftClosed));
                let right = attempt!(word_c(k, n, CVariant::RightClosed));
                Outcome::all(vec![
                    ("recursive reduces to left".into(), Outcome::from_bool(rec.free_reduce() == left, json!(rec.to_string()))),
                    (format!("{left} vs {right}"), oracle_outcome(ctx.oracle.compare(&left, &right, seed), true)),
                ])
            }),
        });
    }
}

fn staircase_checks<'a, F: Field>(ctx: &'a Ctx<F>, out: &mut Vec<Pending<'a>>) {
    let n = ctx.n;
    for j in 1..n {
        out.push(Pending {
            id: format!("staircase.triangle.j{j:02}"),
            description: format!("Cone(T{j} -> T{}) = Q{j}[{j}] and Cone(T{} -> Q{j}[{j}]) = T{j}[1]", j + 1, j + 1),
            anchor: A_STAIR,
            run: Box::new(move |seed| {
                let (tj, f, g) = attempt!(staircase::<F>(&ctx.zig, j));
                let (f, g) = (f.expect("j < n"), g.expect("j < n"));
                let qj = attempt!(ProjComplex::stalk(ctx.zig.clone(), j, j as i64));
                Outcome::all(vec![
                    ("cone f".into(), equiv_outcome(&attempt!(f.cone()), &qj, seed)),
                    ("cone g".into(), equiv_outcome(&attempt!(g.cone()), &tj.shift(1), split_seed(seed, 1))),
                ])
            }),
        });
    }
    for j in 1..=n {
        out.push(Pending {
            id: format!("staircase.end.j{j:02}"),
            description: format!("homotopy endomorphisms of T{j} have dimension 2"),
            anchor: A_TILT,
            run: Box::new(move |_| {
                let t = attempt!(staircase_complex::<F>(&ctx.zig, j));
                let d = attempt!(homotopy_hom_dim(&t, &t));
                Outcome::from_bool(d == 2, json!({ "dim": d }))
            }),
        });
    }
    for i in 1..=n {
        for j in 1..=n {
            let case = if i == n {
                if j < n {
                    format!("R{n}(T{j}) = Cone(T{n} -> T{j})")
                } else {
                    format!("R{n}(T{n}) = T{n}[1]")
                }
            } else if j == i {
                format!("R{i}(T{i}) = T{}", i + 1)
            } else if j == i + 1 {
                format!("R{i}(T{j}) = Cone(Cone(T{i} -> T{j}) -> T{j})")
            } else {
                format!("R{i}(T{j}) = T{j}")
            };
            out.push(Pending {
                id: format!("staircase.r.i{i:02}.j{j:02}"),
                description: case,
                anchor: A_STAIR,
                run: Box::new(move |seed| {
                    let t = attempt!(staircase_complex::<F>(&ctx.zig, j));
                    let got = attempt!(ctx.r_engine().apply(&FunctorWord::new(vec![TwistLetter::r(i)]), &t));
                    let expected = if i == n {
                        if j < n {
                            attempt!(attempt!(staircase_top_map::<F>(&ctx.zig, j)).cone())
                        } else {
                            t.shift(1)
                        }
                    } else if j == i {
                        attempt!(staircase_complex::<F>(&ctx.zig, i + 1))
                    } else if j == i + 1 {
                        attempt!(attempt!(staircase_cone_map::<F>(&ctx.zig, i)).cone())
                    } else {
                        t
                    };
                    equiv_outcome(&got, &expected, seed)
                }),
            });
        }
    }
    out.push(Pending {
        id: "staircase.tilting".into(),
        description: format!("Hom(T, T[m]) vanishes for 0 < |m| <= {n} and has dimension {} at m = 0", n * (n + 1)),
        anchor: A_TILT,
        run: Box::new(move |_| {
            let t = attempt!(staircase_sum::<F>(&ctx.zig));
            let mut dims = serde_json::Map::new();
            let mut ok = true;
            for m in -(n as i64)..=(n as i64) {
                let d = attempt!(homotopy_hom_dim(&t, &t.shift(m)));
                ok &= d == if m == 0 { n * (n + 1) } else { 0 };
                dims.insert(m.to_string(), json!(d));
            }
            Outcome::from_bool(ok, Value::Object(dims))
        }),
    });
}

fn affine_checks<'a, F: Field>(ctx: &'a Ctx<F>, out: &mut Vec<Pending<'a>>) {
    let n = ctx.n;
    let relations = GroupPresentation::new(GroupId::Affine, n).map(|p| p.relations).unwrap_or_default();
    for (idx, rel) in relations.into_iter().enumerate() {
        let chi_rel = rel.clone();
        out.push(Pending {
            id: format!("affine.rho.r{idx:02}"),
            description: format!("H-images of {rel} agree on every P_k"),
            anchor: A_AFFINE,
            run: Box::new(move |seed| oracle_outcome(ctx.oracle.compare(&rel.left, &rel.right, seed), true)),
        });
        out.push(Pending {
            id: format!("affine.chi_mu.r{idx:02}"),
            description: format!("chi-mu images of {chi_rel} agree on every Q_k"),
            anchor: A_CHI_MU,
            run: Box::new(move |seed| {
                let (l, r) = (attempt!(map_chi_mu(&chi_rel.left)), attempt!(map_chi_mu(&chi_rel.right)));
                oracle_outcome(ctx.oracle.compare(&l, &r, seed), true)
            }),
        });
    }
    out.push(Pending {
        id: "affine.chi_mu.hn_word".into(),
        description: format!("chi-mu(h{n}) is s{n} s{n} s{} ... s1 ... s{}^-1 s{n}^-1 s{n}^-1", n - 1, n - 1),
        anchor: A_CHI_MU,
        run: Box::new(move |_| {
            let h = attempt!(BraidWord::from_signed(GroupId::Affine, n, &[n as i64]));
            let got = attempt!(map_chi_mu(&h));
            let m = n as i64;
            let letters: Vec<i64> = [m].into_iter().chain((1..=m).rev()).chain((2..=m).map(|k| -k)).chain([-m]).collect();
            let expected = attempt!(an(n, &letters));
            Outcome::from_bool(got == expected, json!({ "computed": got.to_string(), "expected": expected.to_string() }))
        }),
    });
    out.push(Pending {
        id: "affine.rho.distinct_generators".into(),
        description: "h1 and h2 are proven distinct by their H-images".into(),
        anchor: A_AFFINE,
        run: Box::new(move |seed| {
            let l = attempt!(BraidWord::from_signed(GroupId::Affine, n, &[1]));
            let r = attempt!(BraidWord::from_signed(GroupId::Affine, n, &[2]));
            oracle_outcome(ctx.oracle.compare(&l, &r, seed), false)
        }),
    });
}

fn bn_checks<'a, F: Field>(ctx: &'a Ctx<F>, out: &mut Vec<Pending<'a>>) {
    let n = ctx.n;
    let relations = GroupPresentation::new(GroupId::Bn, n).map(|p| p.relations).unwrap_or_default();
    for (idx, rel) in relations.iter().cloned().enumerate() {
        let chi_rel = rel.clone();
        out.push(Pending {
            id: format!("bn_action.composite.r{idx:02}"),
            description: format!("images of {rel} under b_i -> F_i F_(i+1) F_i^-1, b_n -> F_n F_n agree on every P_k"),
            anchor: A_BN,
            run: Box::new(move |seed| oracle_outcome(ctx.oracle.compare(&rel.left, &rel.right, seed), true)),
        });
        out.push(Pending {
            id: format!("bn_action.chi.r{idx:02}"),
            description: format!("chi-images of {chi_rel} agree on every Q_k"),
            anchor: A_CHI_MU,
            run: Box::new(move |seed| {
                let (l, r) = (attempt!(map_chi(&chi_rel.left)), attempt!(map_chi(&chi_rel.right)));
                oracle_outcome(ctx.oracle.compare(&l, &r, seed), true)
            }),
        });
    }
    out.push(Pending {
        id: "bn_action.literal_refuted".into(),
        description: "b_i -> F_i F_(i+1) F_i, b_n -> F_n F_n taken literally violates a B_n relation (certified)".into(),
        anchor: A_BN,
        run: Box::new(move |seed| {
            let mut violated = Vec::new();
            for rel in &relations {
                let v = attempt!(ctx.literal_oracle.compare(&rel.left, &rel.right, seed));
                if v.is_distinct() && v.reverify() {
                    violated.push(json!({ "relation": rel.to_string(), "vertex": v.vertex, "certificate": v.certificate }));
                }
            }
            Outcome::from_bool(!violated.is_empty(), json!({ "violated": violated }))
        }),
    });
}

/// Runs a suite. Checks run concurrently (bounded by `jobs`); the report is
/// sorted by check id and is deterministic for fixed options apart from
/// `elapsed_ms`.
pub fn run_suite<F: Field>(name: SuiteName, opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
    let n = opts.n;
    if n < 2 || n > opts.max_n {
        return Err(SuiteError::RankOutOfRange { n, max: opts.max_n });
    }
    let nak = std::sync::Arc::new(AlgebraSpec::nakayama(n).map_err(|e| BraidError::Twist(e.into()))?);
    let zig = std::sync::Arc::new(AlgebraSpec::zigzag(n).map_err(|e| BraidError::Twist(e.into()))?);
    let ctx = Ctx {
        n,
        nak,
        zig,
        oracle: BraidOracle::<F>::with_cap(n, opts.max_summands)?,
        literal_oracle: BraidOracle::<F>::with_cap(n, opts.max_summands)?.with_bn_action(BnAction::Literal),
    };
    let mut pending = Vec::new();
    let suites: Vec<SuiteName> = if name == SuiteName::All { SuiteName::EACH.to_vec() } else { vec![name] };
    for s in suites {
        match s {
            SuiteName::Algebra => algebra_checks(&ctx, &mut pending),
            SuiteName::Twists => twist_checks(&ctx, &mut pending),
            SuiteName::BraidRelations => braid_relation_checks(&ctx, &mut pending),
            SuiteName::Eta => eta_checks(&ctx, &mut pending),
            SuiteName::Staircase => staircase_checks(&ctx, &mut pending),
            SuiteName::Affine => affine_checks(&ctx, &mut pending),
            SuiteName::BnAction => bn_checks(&ctx, &mut pending),
            SuiteName::All => {}
        }
    }
    pending.sort_by(|a, b| a.id.cmp(&b.id));
    let seed = opts.seed;
    let timing = opts.timing;
    let execute = || -> Vec<CheckResult> {
        pending
            .par_iter()
            .enumerate()
            .map(|(idx, p)| {
                let start = Instant::now();
                let outcome = (p.run)(split_seed(seed, idx as u64));
                let elapsed_ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
                let status = outcome.status();
                CheckResult {
                    id: p.id.clone(),
                    description: p.description.clone(),
                    paper_anchor: p.anchor.to_string(),
                    status,
                    elapsed_ms,
                    certificate: Some(outcome.into_value()),
                }
            })
            .collect()
    };
    let checks = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| SuiteError::Pool(e.to_string()))?
            .install(execute),
        None => execute(),
    };
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            CheckStatus::Pass => summary.pass += 1,
            CheckStatus::Fail => summary.fail += 1,
            CheckStatus::Undetermined => summary.undetermined += 1,
        }
    }
    Ok(SuiteReport {
        version: REPORT_VERSION,
        suite: name,
        n,
        seed,
        field: F::context_name(),
        checks,
        summary,
    })
}

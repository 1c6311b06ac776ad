//! Braid-group words, presentations, the homomorphisms between them, the
//! geometric representation of `W(K_n)`, and the image-table oracle.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraKind, Vertex};
use crate::complex::ComplexError;
use crate::homotopy::{equivalent_minimal, DistinctCertificate, EquivalenceStatus};
use crate::linalg::split_seed;
use crate::scalar::Field;
use crate::twist::{h_generator_word, tokens, FunctorWord, TwistEngine, TwistError, TwistLetter};

/// Random chain-map trials per equivalence query.
pub const ORACLE_TRIALS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("words live in different groups or ranks ({0} vs {1})")]
    RankMismatch(String, String),
    #[error("rank {n} too small for {group}")]
    RankTooSmall { group: GroupId, n: usize },
    #[error("equivalence of images at P{vertex} could not be decided")]
    UndeterminedEntry { vertex: Vertex },
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupId {
    /// `B(K_n)`, generators `a_i`.
    Kn,
    /// `B(A_n)`, generators `σ_i`, written `s`.
    An,
    /// `B(Ã_{n-1})`, generators `h_i`.
    Affine,
    /// `B(B_n)`, generators `b_i`.
    Bn,
}

impl GroupId {
    pub fn letter(self) -> char {
        match self {
            GroupId::Kn => 'a',
            GroupId::An => 's',
            GroupId::Affine => 'h',
            GroupId::Bn => 'b',
        }
    }

    pub fn parse(text: &str) -> Option<GroupId> {
        match text.to_ascii_lowercase().as_str() {
            "kn" | "k" => Some(GroupId::Kn),
            "an" | "a" => Some(GroupId::An),
            "affine" | "affinean_minus1" => Some(GroupId::Affine),
            "bn" | "b" => Some(GroupId::Bn),
            _ => None,
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupId::Kn => "Kn",
            GroupId::An => "An",
            GroupId::Affine => "Affine",
            GroupId::Bn => "Bn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: usize,
    /// `+1` or `-1`.
    pub exp: i8,
}

impl BraidLetter {
    pub fn pos(index: usize) -> Self {
        BraidLetter { index, exp: 1 }
    }

    pub fn neg(index: usize) -> Self {
        BraidLetter { index, exp: -1 }
    }

    pub fn inverse(self) -> Self {
        BraidLetter { exp: -self.exp, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub group: GroupId,
    pub n: usize,
    pub letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(group: GroupId, n: usize, letters: Vec<BraidLetter>) -> Result<Self, BraidError> {
        for l in &letters {
            if l.index == 0 || l.index > n {
                return Err(BraidError::IndexOutOfRange { index: l.index, n });
            }
        }
        Ok(BraidWord { group, n, letters })
    }

    pub fn empty(group: GroupId, n: usize) -> Self {
        BraidWord { group, n, letters: Vec::new() }
    }

    /// Word from signed indices: `3` is the third generator, `-3` its inverse.
    pub fn from_signed(group: GroupId, n: usize, letters: &[i64]) -> Result<Self, BraidError> {
        Self::new(
            group,
            n,
            letters
                .iter()
                .map(|&l| BraidLetter { index: l.unsigned_abs() as usize, exp: if l < 0 { -1 } else { 1 } })
                .collect(),
        )
    }

    /// Parses `"a1 a2 a1^-1 a4^-1"` with the generator letter of `group`.
    /// A lone `1` is the identity, matching `Display`.
    pub fn parse(group: GroupId, n: usize, text: &str) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        if text.trim() == "1" {
            return Self::new(group, n, letters);
        }
        for (column, token) in tokens(text) {
            let err = |message: String| BraidError::Parse { column, message };
            let (head, exp) = match token.strip_suffix("^-1") {
                Some(h) => (h, -1),
                None => (token, 1),
            };
            let mut chars = head.chars();
            let c = chars.next().ok_or_else(|| err("empty letter".into()))?;
            if c != group.letter() {
                return Err(err(format!("expected generator letter '{}' for {group}, found {token:?}", group.letter())));
            }
            let rest = chars.as_str();
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(format!("generator index must be a numeral in {token:?}")));
            }
            let index: usize = rest.parse().map_err(|_| err(format!("bad index in {token:?}")))?;
            if index == 0 || index > n {
                return Err(err(format!("index {index} out of range 1..={n}")));
            }
            letters.push(BraidLetter { index, exp });
        }
        Ok(BraidWord { group, n, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        BraidWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect(), ..self.clone() }
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { letters, ..self.clone() }
    }

    pub fn free_reduce(&self) -> Self {
        free_reduce(self)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let c = self.group.letter();
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.exp < 0 { format!("{c}{}^-1", l.index) } else { format!("{c}{}", l.index) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &BraidWord) -> BraidWord {
    let mut out: Vec<BraidLetter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if out.last().is_some_and(|&top| top == l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    BraidWord { letters: out, ..w.clone() }
}

fn word(group: GroupId, n: usize, signed: impl IntoIterator<Item = i64>) -> BraidWord {
    let letters =
        signed.into_iter().map(|l| BraidLetter { index: l.unsigned_abs() as usize, exp: if l < 0 { -1 } else { 1 } }).collect();
    BraidWord { group, n, letters }
}

/// A defining relation `left = right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub left: BraidWord,
    pub right: BraidWord,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub group: GroupId,
    pub n: usize,
    pub relations: Vec<Relation>,
}

fn braid_rel(group: GroupId, n: usize, i: i64, j: i64) -> Relation {
    Relation { left: word(group, n, [i, j, i]), right: word(group, n, [j, i, j]) }
}

fn commute_rel(group: GroupId, n: usize, i: i64, j: i64) -> Relation {
    Relation { left: word(group, n, [i, j]), right: word(group, n, [j, i]) }
}

impl GroupPresentation {
    /// Defining relations of the group of rank `n` (generators `1..=n`).
    ///
    /// For `Affine` with `n = 2` the two generators satisfy no relation.
    pub fn new(group: GroupId, n: usize) -> Result<Self, BraidError> {
        if n < 2 {
            return Err(BraidError::RankTooSmall { group, n });
        }
        let mut relations = Vec::new();
        let m = n as i64;
        match group {
            GroupId::Kn => {
                for i in 1..=m {
                    for j in i + 1..=m {
                        relations.push(braid_rel(group, n, i, j));
                    }
                }
            }
            GroupId::An => {
                for i in 1..m {
                    relations.push(braid_rel(group, n, i, i + 1));
                }
                for i in 1..=m {
                    for j in i + 2..=m {
                        relations.push(commute_rel(group, n, i, j));
                    }
                }
            }
            GroupId::Affine => {
                if n >= 3 {
                    for i in 1..m {
                        relations.push(braid_rel(group, n, i, i + 1));
                    }
                    relations.push(braid_rel(group, n, m, 1));
                    for i in 1..=m {
                        for j in i + 2..=m {
                            if j - i != m - 1 {
                                relations.push(commute_rel(group, n, i, j));
                            }
                        }
                    }
                }
            }
            GroupId::Bn => {
                for i in 1..m - 1 {
                    relations.push(braid_rel(group, n, i, i + 1));
                }
                for i in 1..=m {
                    for j in i + 2..=m {
                        relations.push(commute_rel(group, n, i, j));
                    }
                }
                relations.push(Relation {
                    left: word(group, n, [m - 1, m, m - 1, m]),
                    right: word(group, n, [m, m - 1, m, m - 1]),
                });
            }
        }
        Ok(GroupPresentation { group, n, relations })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CVariant {
    /// `c_n = σ_n`, `c_k = σ_k⁻¹ c_{k+1} σ_k`.
    Recursive,
    /// `σ_k⁻¹ ⋯ σ_{n-1}⁻¹ σ_n σ_{n-1} ⋯ σ_k`.
    LeftClosed,
    /// `σ_n σ_{n-1} ⋯ σ_k σ_{k+1}⁻¹ ⋯ σ_n⁻¹`.
    RightClosed,
}

/// The words `c_k` in the `σ` generators of `B(A_n)`.
pub fn word_c(k: usize, n: usize, variant: CVariant) -> Result<BraidWord, BraidError> {
    if k == 0 || k > n {
        return Err(BraidError::IndexOutOfRange { index: k, n });
    }
    let (k, m) = (k as i64, n as i64);
    let w = match variant {
        CVariant::Recursive => {
            let mut cur = word(GroupId::An, n, [m]);
            for j in (k..m).rev() {
                cur = word(GroupId::An, n, [-j]).concat(&cur).concat(&word(GroupId::An, n, [j]));
            }
            cur
        }
        CVariant::LeftClosed => word(GroupId::An, n, (k..m).map(|j| -j).chain([m]).chain((k..m).rev())),
        CVariant::RightClosed => word(GroupId::An, n, (k..=m).rev().chain((k + 1..=m).map(|j| -j))),
    };
    Ok(w)
}

fn substitute(w: &BraidWord, target: GroupId, image: impl Fn(usize) -> BraidWord) -> BraidWord {
    let mut out = BraidWord::empty(target, w.n);
    for l in &w.letters {
        let img = image(l.index);
        out = out.concat(&if l.exp < 0 { img.inverse() } else { img });
    }
    free_reduce(&out)
}

fn expect_group(w: &BraidWord, group: GroupId) -> Result<(), BraidError> {
    if w.group != group {
        return Err(BraidError::RankMismatch(format!("{} word", w.group), format!("{group} word")));
    }
    Ok(())
}

/// `η: B(K_n) -> B(A_n)`, `a_i ↦ c_i`.
pub fn map_eta(w: &BraidWord) -> Result<BraidWord, BraidError> {
    expect_group(w, GroupId::Kn)?;
    Ok(substitute(w, GroupId::An, |i| word_c(i, w.n, CVariant::Recursive).expect("index checked")))
}

/// `χ: B(B_n) -> B(A_n)`, `b_i ↦ σ_i` for `i < n`, `b_n ↦ σ_n²`.
pub fn map_chi(w: &BraidWord) -> Result<BraidWord, BraidError> {
    expect_group(w, GroupId::Bn)?;
    let n = w.n;
    Ok(substitute(w, GroupId::An, |i| {
        if i < n {
            word(GroupId::An, n, [i as i64])
        } else {
            word(GroupId::An, n, [n as i64, n as i64])
        }
    }))
}

/// `μ: B(Ã_{n-1}) -> B(B_n)`, `h_i ↦ b_i` for `i < n` and
/// `h_n ↦ b_n b_{n-1} ⋯ b_2 b_1 b_2⁻¹ ⋯ b_{n-1}⁻¹ b_n⁻¹`.
pub fn map_mu(w: &BraidWord) -> Result<BraidWord, BraidError> {
    expect_group(w, GroupId::Affine)?;
    let n = w.n;
    let m = n as i64;
    Ok(substitute(w, GroupId::Bn, |i| {
        if i < n {
            word(GroupId::Bn, n, [i as i64])
        } else {
            word(GroupId::Bn, n, (1..=m).rev().chain((2..=m).map(|j| -j)))
        }
    }))
}

pub fn map_chi_mu(w: &BraidWord) -> Result<BraidWord, BraidError> {
    map_chi(&map_mu(w)?)
}

/// Square integer matrix acting on column vectors over `v_1..v_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ReflectionMatrix {
    pub n: usize,
    /// Row-major entries.
    pub rows: Vec<Vec<i64>>,
}

impl ReflectionMatrix {
    pub fn identity(n: usize) -> Self {
        ReflectionMatrix { n, rows: (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect() }
    }

    /// `f_i(v_i) = -v_i`, `f_i(v_j) = v_i + v_j` for `j ≠ i`.
    pub fn generator(i: usize, n: usize) -> Self {
        let mut m = Self::identity(n);
        for c in 0..n {
            m.rows[i - 1][c] = if c == i - 1 { -1 } else { 1 };
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let rows = (0..n)
            .map(|r| (0..n).map(|c| (0..n).map(|k| self.rows[r][k] * other.rows[k][c]).sum()).collect())
            .collect();
        ReflectionMatrix { n, rows }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Image of the basis vector `v_j`.
    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|row| row[j - 1]).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }
}

/// Geometric representation of the Coxeter quotient of `B(K_n)`: the product
/// of generator matrices in word order, so the last letter acts first.
/// Exponent signs are ignored since every generator is an involution.
pub fn geometric_rep(w: &BraidWord) -> Result<ReflectionMatrix, BraidError> {
    expect_group(w, GroupId::Kn)?;
    Ok(w.letters.iter().fold(ReflectionMatrix::identity(w.n), |acc, l| acc.mul(&ReflectionMatrix::generator(l.index, w.n))))
}

/// `a_1 a_2 a_1⁻¹ a_n a_1 a_2⁻¹ a_1⁻¹ a_n⁻¹`: acts nontrivially in the
/// geometric representation while its `η`-image acts trivially on `D^b(B)`.
pub fn eta_witness(n: usize) -> Result<BraidWord, BraidError> {
    if n < 3 {
        return Err(BraidError::RankTooSmall { group: GroupId::Kn, n });
    }
    let m = n as i64;
    Ok(word(GroupId::Kn, n, [1, 2, -1, m, 1, -2, -1, -m]))
}

/// Named word fixtures.
pub fn fixture(name: &str, n: usize) -> Option<Result<BraidWord, BraidError>> {
    match name {
        "eta-witness" => Some(eta_witness(n)),
        _ => None,
    }
}

/// How `B(B_n)` acts on the Nakayama side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BnAction {
    /// Transport of `ψ ∘ χ`: `b_i ↦ F_i F_{i+1} F_i⁻¹` for `i < n`, `b_n ↦ F_n F_n`.
    #[default]
    Composite,
    /// `b_i ↦ F_i F_{i+1} F_i` for `i < n`, `b_n ↦ F_n F_n`, exactly as written.
    Literal,
}

/// The twist word a braid word is sent to: `σ_i ↦ R_i` on the zigzag
/// algebra, `a_i ↦ F_i` and `h_i ↦ H_i` on the Nakayama algebra, and for
/// `B_n` the composite action (see [`BnAction`]).
pub fn functor_word(w: &BraidWord) -> Result<FunctorWord, BraidError> {
    functor_word_with(w, BnAction::Composite)
}

pub fn functor_word_with(w: &BraidWord, bn: BnAction) -> Result<FunctorWord, BraidError> {
    let n = w.n;
    let mut out = FunctorWord::empty();
    for l in &w.letters {
        let i = l.index;
        let img = match w.group {
            GroupId::An => FunctorWord::new(vec![TwistLetter::r(i)]),
            GroupId::Kn => FunctorWord::new(vec![TwistLetter::f(i)]),
            GroupId::Affine => h_generator_word(i, n)?,
            GroupId::Bn if i < n => {
                let last = match bn {
                    BnAction::Composite => TwistLetter::f_inv(i),
                    BnAction::Literal => TwistLetter::f(i),
                };
                FunctorWord::new(vec![TwistLetter::f(i), TwistLetter::f(i + 1), last])
            }
            GroupId::Bn => FunctorWord::new(vec![TwistLetter::f(n), TwistLetter::f(n)]),
        };
        out = out.then_apply(&if l.exp < 0 { img.inverse() } else { img });
    }
    Ok(out)
}

pub fn action_algebra(group: GroupId) -> AlgebraKind {
    match group {
        GroupId::An => AlgebraKind::Zigzag,
        _ => AlgebraKind::Nakayama,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleStatus {
    ProvenDistinct,
    ImagesAgree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub status: OracleStatus,
    pub group: GroupId,
    pub n: usize,
    /// Distinguishing projective for `ProvenDistinct`.
    pub vertex: Option<Vertex>,
    pub certificate: Option<DistinctCertificate>,
    /// Minimal images of every projective under the two words.
    pub left_images: Vec<String>,
    pub right_images: Vec<String>,
}

impl OracleVerdict {
    pub fn is_distinct(&self) -> bool {
        self.status == OracleStatus::ProvenDistinct
    }

    /// What `ImagesAgree` licenses for this group.
    pub fn evidence_note(&self) -> &'static str {
        match (self.status, self.group) {
            (OracleStatus::ProvenDistinct, GroupId::An) => {
                "distinct images prove the words differ in TrPic and hence in B(A_n)"
            }
            (OracleStatus::ProvenDistinct, _) => "distinct images prove the words act differently",
            (OracleStatus::ImagesAgree, GroupId::An) => {
                "equal in TrPic (evidence): images of all projectives agree; not a solution of the word problem"
            }
            (OracleStatus::ImagesAgree, GroupId::Kn) => {
                "images agree, but the action of B(K_n) is not faithful: this does not imply the words are equal"
            }
            (OracleStatus::ImagesAgree, _) => {
                "images agree: evidence that the words act equally, not a proof that they are equal"
            }
        }
    }

    /// Re-checks a distinctness certificate.
    pub fn reverify(&self) -> bool {
        match self.status {
            OracleStatus::ProvenDistinct => self.certificate.as_ref().is_some_and(|c| c.left != c.right),
            OracleStatus::ImagesAgree => self.left_images.len() == self.n && self.right_images.len() == self.n,
        }
    }
}

/// Compares braid words by the images of all projectives under the
/// corresponding twist action. Engines are reused across calls.
pub struct BraidOracle<F: Field> {
    n: usize,
    nakayama: TwistEngine<F>,
    zigzag: TwistEngine<F>,
    bn_action: BnAction,
}

impl<F: Field> BraidOracle<F> {
    pub fn new(n: usize) -> Result<Self, BraidError> {
        Self::with_cap(n, crate::twist::DEFAULT_MAX_SUMMANDS)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self, BraidError> {
        let build = |kind| -> Result<TwistEngine<F>, BraidError> {
            let e = TwistEngine::<F>::for_kind(kind, n)?;
            Ok(TwistEngine::with_cap(e.algebra().clone(), cap))
        };
        Ok(BraidOracle {
            n,
            nakayama: build(AlgebraKind::Nakayama)?,
            zigzag: build(AlgebraKind::Zigzag)?,
            bn_action: BnAction::default(),
        })
    }

    pub fn with_bn_action(mut self, bn_action: BnAction) -> Self {
        self.bn_action = bn_action;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn engine(&self, kind: AlgebraKind) -> &TwistEngine<F> {
        match kind {
            AlgebraKind::Nakayama => &self.nakayama,
            AlgebraKind::Zigzag => &self.zigzag,
        }
    }

    pub fn compare(&self, w1: &BraidWord, w2: &BraidWord, seed: u64) -> Result<OracleVerdict, BraidError> {
        if w1.group != w2.group || w1.n != w2.n || w1.n != self.n {
            return Err(BraidError::RankMismatch(
                format!("{}(n={})", w1.group, w1.n),
                format!("{}(n={}) with oracle rank {}", w2.group, w2.n, self.n),
            ));
        }
        let engine = self.engine(action_algebra(w1.group));
        let (f1, f2) = (functor_word_with(w1, self.bn_action)?, functor_word_with(w2, self.bn_action)?);
        let rows: Vec<Result<_, BraidError>> = (1..=self.n)
            .into_par_iter()
            .map(|v| {
                let (a, b) = (engine.image(&f1, v)?, engine.image(&f2, v)?);
                let verdict = equivalent_minimal(&a, &b, ORACLE_TRIALS, split_seed(seed, v as u64))?;
                Ok((a.describe(), b.describe(), verdict.status, verdict.certificate))
            })
            .collect();
        let mut left_images = Vec::new();
        let mut right_images = Vec::new();
        let mut distinct = None;
        let mut undetermined = None;
        for (k, row) in rows.into_iter().enumerate() {
            let (l, r, status, cert) = row?;
            left_images.push(l);
            right_images.push(r);
            match status {
                EquivalenceStatus::Distinct if distinct.is_none() => distinct = Some((k + 1, cert)),
                EquivalenceStatus::Undetermined if undetermined.is_none() => undetermined = Some(k + 1),
                _ => {}
            }
        }
        if let Some((vertex, certificate)) = distinct {
            return Ok(OracleVerdict {
                status: OracleStatus::ProvenDistinct,
                group: w1.group,
                n: self.n,
                vertex: Some(vertex),
                certificate,
                left_images,
                right_images,
            });
        }
        if let Some(vertex) = undetermined {
            return Err(BraidError::UndeterminedEntry { vertex });
        }
        Ok(OracleVerdict {
            status: OracleStatus::ImagesAgree,
            group: w1.group,
            n: self.n,
            vertex: None,
            certificate: None,
            left_images,
            right_images,
        })
    }
}

/// One-shot [`BraidOracle::compare`].
pub fn oracle_compare<F: Field>(w1: &BraidWord, w2: &BraidWord, seed: u64) -> Result<OracleVerdict, BraidError> {
    BraidOracle::<F>::new(w1.n)?.compare(w1, w2, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn s(n: usize, text: &str) -> BraidWord {
        BraidWord::parse(GroupId::An, n, text).unwrap()
    }

    #[test]
    fn free_reduction() {
        let w = BraidWord::parse(GroupId::Kn, 3, "a1 a1^-1").unwrap();
        assert!(free_reduce(&w).is_empty());
        let w = BraidWord::parse(GroupId::Kn, 3, "a1 a2 a2^-1 a1").unwrap();
        assert_eq!(free_reduce(&w).to_string(), "a1 a1");
        let w = BraidWord::parse(GroupId::Kn, 3, "a1 a2 a1^-1").unwrap();
        assert_eq!(free_reduce(&w), w);
    }

    #[test]
    fn parser_rejects_bad_tokens() {
        assert!(matches!(BraidWord::parse(GroupId::Kn, 4, "a1 an"), Err(BraidError::Parse { column: 4, .. })));
        assert!(BraidWord::parse(GroupId::Kn, 4, "s1").is_err());
        assert!(BraidWord::parse(GroupId::Kn, 4, "a5").is_err());
        assert!(BraidWord::parse(GroupId::Kn, 4, "a0").is_err());
        assert_eq!(BraidWord::parse(GroupId::Bn, 4, "b4^-1 b1").unwrap().to_string(), "b4^-1 b1");
    }

    #[test]
    fn c_words() {
        assert_eq!(word_c(4, 4, CVariant::Recursive).unwrap().to_string(), "s4");
        for n in 2..=6 {
            for k in 1..=n {
                let rec = word_c(k, n, CVariant::Recursive).unwrap();
                assert_eq!(free_reduce(&rec), word_c(k, n, CVariant::LeftClosed).unwrap());
            }
        }
        assert_eq!(word_c(2, 4, CVariant::RightClosed).unwrap().to_string(), "s4 s3 s2 s3^-1 s4^-1");
        assert!(word_c(5, 4, CVariant::Recursive).is_err());
    }

    #[test]
    fn homomorphism_images() {
        let b = BraidWord::parse(GroupId::Bn, 3, "b1 b2 b3").unwrap();
        assert_eq!(map_chi(&b).unwrap().to_string(), "s1 s2 s3 s3");
        let h = BraidWord::parse(GroupId::Affine, 3, "h1 h2").unwrap();
        assert_eq!(map_mu(&h).unwrap().to_string(), "b1 b2");
        let h3 = BraidWord::parse(GroupId::Affine, 3, "h3").unwrap();
        assert_eq!(map_mu(&h3).unwrap().to_string(), "b3 b2 b1 b2^-1 b3^-1");
        assert_eq!(map_chi_mu(&h3).unwrap().to_string(), "s3 s3 s2 s1 s2^-1 s3^-1 s3^-1");
        let a = BraidWord::parse(GroupId::Kn, 3, "a3").unwrap();
        assert_eq!(map_eta(&a).unwrap().to_string(), "s3");
    }

    #[test]
    fn presentations() {
        assert_eq!(GroupPresentation::new(GroupId::Kn, 4).unwrap().relations.len(), 6);
        assert_eq!(GroupPresentation::new(GroupId::An, 4).unwrap().relations.len(), 3 + 3);
        // Affine rank 4: four braid relations on the cycle, two commuting pairs.
        assert_eq!(GroupPresentation::new(GroupId::Affine, 4).unwrap().relations.len(), 6);
        assert!(GroupPresentation::new(GroupId::Affine, 2).unwrap().relations.is_empty());
        let bn = GroupPresentation::new(GroupId::Bn, 3).unwrap();
        assert_eq!(bn.relations.last().unwrap().to_string(), "b2 b3 b2 b3 = b3 b2 b3 b2");
        assert_eq!(bn.relations.len(), 3);
    }

    #[test]
    fn geometric_rep_fixture() {
        for n in 4..=6 {
            let w = eta_witness(n).unwrap();
            let m = geometric_rep(&w).unwrap();
            let mut expected = vec![0; n];
            expected[0] = -4;
            expected[1] = -4;
            expected[n - 1] = -3;
            assert_eq!(m.column(n), expected);
        }
        let w = BraidWord::parse(GroupId::Kn, 4, "a1 a2 a1 a4 a1 a2 a1 a4").unwrap();
        assert_eq!(geometric_rep(&w).unwrap().column(4), vec![-4, -4, 0, -3]);
    }

    #[test]
    fn geometric_generators_are_involutions_with_braid_relations() {
        for n in 2..=6 {
            for i in 1..=n {
                let g = ReflectionMatrix::generator(i, n);
                assert!(g.mul(&g).is_identity());
                assert_eq!(g.column(i)[i - 1], -1);
                for j in 1..=n {
                    if i != j {
                        let h = ReflectionMatrix::generator(j, n);
                        assert_eq!(g.mul(&h).mul(&g), h.mul(&g).mul(&h));
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_on_small_words() {
        let o = BraidOracle::<Rational>::new(3).unwrap();
        let v = o.compare(&s(3, "s1 s2 s1"), &s(3, "s2 s1 s2"), 0).unwrap();
        assert_eq!(v.status, OracleStatus::ImagesAgree);
        let v = o.compare(&s(3, "s1"), &s(3, "s2"), 0).unwrap();
        assert!(v.is_distinct());
        assert!(v.reverify());
        let k1 = BraidWord::parse(GroupId::Kn, 3, "a1").unwrap();
        let k2 = BraidWord::parse(GroupId::Kn, 3, "a2").unwrap();
        let v = o.compare(&k1, &k2, 0).unwrap();
        assert_eq!(v.vertex, Some(1));
        assert!(o.compare(&k1, &s(3, "s1"), 0).is_err());
    }
}

//! Twist functors attached to indecomposable projectives.
//!
//! `F_i(X) = Cone(P_i ⊗ e_iX -> X)` through evaluation and
//! `F_i⁻¹(X) = Cone(X -> P_i ⊗ e_iX)[-1]` through coevaluation, both
//! minimized. Over the zigzag algebra the same construction gives `R_i`.
//! Here `e_iX` is the graded vector space with basis the paths from `i` into
//! each summand, and coevaluation uses the dual basis of the symmetrizing form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, AlgebraError, AlgebraKind, AlgebraSpec, ModuleMorphism, Vertex};
use crate::complex::{ChainMap, ComplexError, ProjComplex};
use crate::minimize::minimize;
use crate::scalar::Field;

pub const DEFAULT_MAX_SUMMANDS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistLetter {
    pub side: AlgebraKind,
    pub index: Vertex,
    /// `+1` or `-1`.
    pub sign: i8,
}

impl TwistLetter {
    pub fn f(index: Vertex) -> Self {
        TwistLetter { side: AlgebraKind::Nakayama, index, sign: 1 }
    }

    pub fn f_inv(index: Vertex) -> Self {
        TwistLetter { side: AlgebraKind::Nakayama, index, sign: -1 }
    }

    pub fn r(index: Vertex) -> Self {
        TwistLetter { side: AlgebraKind::Zigzag, index, sign: 1 }
    }

    pub fn r_inv(index: Vertex) -> Self {
        TwistLetter { side: AlgebraKind::Zigzag, index, sign: -1 }
    }

    pub fn inverse(self) -> Self {
        TwistLetter { sign: -self.sign, ..self }
    }
}

impl fmt::Display for TwistLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.side {
            AlgebraKind::Nakayama => 'F',
            AlgebraKind::Zigzag => 'R',
        };
        if self.sign < 0 {
            write!(f, "{c}{}^-1", self.index)
        } else {
            write!(f, "{c}{}", self.index)
        }
    }
}

/// Composite of twists, written as a product and applied right to left:
/// `[F1, F2]` is `F1 ∘ F2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FunctorWord {
    pub letters: Vec<TwistLetter>,
}

impl FunctorWord {
    pub fn new(letters: Vec<TwistLetter>) -> Self {
        FunctorWord { letters }
    }

    pub fn empty() -> Self {
        FunctorWord::default()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Composite `self ∘ other`.
    pub fn then_apply(&self, other: &FunctorWord) -> FunctorWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FunctorWord { letters }
    }

    pub fn inverse(&self) -> FunctorWord {
        FunctorWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Parses whitespace-separated letters `F3`, `F3^-1`, `R2`, `R2^-1`, `H4`,
    /// `H4^-1`, with `H_i = F_i F_{i+1} F_i^-1` (indices mod `n`).
    pub fn parse(text: &str, n: usize) -> Result<FunctorWord, TwistError> {
        let mut letters = Vec::new();
        for (column, token) in tokens(text) {
            let err = |message: String| TwistError::Parse { column, message };
            let (head, inverse) = match token.strip_suffix("^-1") {
                Some(h) => (h, true),
                None => (token, false),
            };
            let mut chars = head.chars();
            let family = chars.next().ok_or_else(|| err("empty letter".into()))?;
            let index: usize = chars
                .as_str()
                .parse()
                .map_err(|_| err(format!("expected a numeric index in {token:?}")))?;
            if index == 0 || index > n {
                return Err(err(format!("index {index} out of range 1..={n}")));
            }
            match family {
                'F' => letters.push(if inverse { TwistLetter::f_inv(index) } else { TwistLetter::f(index) }),
                'R' => letters.push(if inverse { TwistLetter::r_inv(index) } else { TwistLetter::r(index) }),
                'H' => {
                    let h = h_generator_word(index, n)?;
                    letters.extend(if inverse { h.inverse() } else { h }.letters);
                }
                _ => return Err(err(format!("unknown letter {family:?}; expected F, R or H"))),
            }
        }
        let word = FunctorWord { letters };
        if let Some(side) = word.side() {
            if word.letters.iter().any(|l| l.side != side) {
                return Err(TwistError::Parse { column: 1, message: "word mixes F and R letters".into() });
            }
        }
        Ok(word)
    }

    pub fn side(&self) -> Option<AlgebraKind> {
        self.letters.first().map(|l| l.side)
    }
}

/// Splits on whitespace, keeping 1-based columns.
pub(crate) fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

impl fmt::Display for FunctorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `H_i = [F_i, F_{i+1}, F_i^-1]` for `i < n` and `H_n = [F_n, F_1, F_n^-1]`.
pub fn h_generator_word(i: Vertex, n: usize) -> Result<FunctorWord, TwistError> {
    if i == 0 || i > n {
        return Err(TwistError::IndexOutOfRange { index: i, n });
    }
    let next = if i == n { 1 } else { i + 1 };
    Ok(FunctorWord::new(vec![TwistLetter::f(i), TwistLetter::f(next), TwistLetter::f_inv(i)]))
}

/// `P_i ⊗ e_iX` together with, for every copy of `P_i`, its originating
/// summand and basis path.
fn tensor_part<F: Field>(i: Vertex, x: &ProjComplex<F>) -> (ProjComplex<F>, BTreeMap<i64, Vec<(usize, usize)>>) {
    let spec = x.spec();
    let mut origin: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    let mut position: BTreeMap<(i64, usize, usize), usize> = BTreeMap::new();
    for k in x.degrees() {
        let copies = origin.entry(k).or_default();
        for (s, &v) in x.term(k).summands.iter().enumerate() {
            for &y in spec.paths(i, v) {
                position.insert((k, s, y), copies.len());
                copies.push((s, y));
            }
        }
    }
    let module = |k: i64| vec![i; origin.get(&k).map_or(0, |c| c.len())];
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let e = spec.idempotent(i);
    for k in x.degrees() {
        terms.insert(k, module(k));
        let d = x.diff(k);
        let mut m = ModuleMorphism::zero(
            crate::algebra::ProjModule::new(module(k)),
            crate::algebra::ProjModule::new(module(k - 1)),
        );
        for (row, &(s, y)) in origin[&k].iter().enumerate() {
            for (t, cell) in d.row(s) {
                let image = spec.multiply(&AlgebraElement::basis(y), cell);
                for (z, c) in image.terms() {
                    let col = position[&(k - 1, t, *z)];
                    m.set(row, col, AlgebraElement::term(e, c.clone()));
                }
            }
        }
        diffs.insert(k, m);
    }
    let t = ProjComplex::new(x.algebra().clone(), terms, diffs).expect("tensor shapes are consistent");
    (t, origin)
}

/// Raw (unminimized) image of `x` under one twist letter.
pub fn twist_raw<F: Field>(letter: TwistLetter, x: &ProjComplex<F>, cap: usize) -> Result<ProjComplex<F>, TwistError> {
    let spec = x.spec();
    if spec.kind() != letter.side {
        return Err(AlgebraError::AlgebraMismatch(format!("letter {letter}"), spec.name()).into());
    }
    spec.check_vertex(letter.index).map_err(|_| TwistError::IndexOutOfRange { index: letter.index, n: spec.n() })?;
    let i = letter.index;
    let (t, origin) = tensor_part(i, x);
    let size = t.total_summands() + x.total_summands();
    if size > cap {
        return Err(ComplexError::TooLarge { summands: size, cap }.into());
    }
    let mut comps = BTreeMap::new();
    for (&k, copies) in &origin {
        if letter.sign > 0 {
            let mut m = ModuleMorphism::zero(t.term(k).clone(), x.term(k).clone());
            for (row, &(s, y)) in copies.iter().enumerate() {
                m.set(row, s, AlgebraElement::basis(y));
            }
            comps.insert(k, m);
        } else {
            let mut m = ModuleMorphism::zero(x.term(k).clone(), t.term(k).clone());
            for (col, &(s, y)) in copies.iter().enumerate() {
                m.set(s, col, AlgebraElement::basis(spec.dual(y)));
            }
            comps.insert(k, m);
        }
    }
    let cone = if letter.sign > 0 {
        ChainMap::new(t, x.clone(), comps)?.cone()?
    } else {
        ChainMap::new(x.clone(), t, comps)?.cone()?.shift(-1)
    };
    Ok(cone)
}

/// Minimal image of `x` under one twist letter.
pub fn twist_apply<F: Field>(letter: TwistLetter, x: &ProjComplex<F>) -> Result<ProjComplex<F>, TwistError> {
    twist_apply_capped(letter, x, DEFAULT_MAX_SUMMANDS)
}

pub fn twist_apply_capped<F: Field>(
    letter: TwistLetter,
    x: &ProjComplex<F>,
    cap: usize,
) -> Result<ProjComplex<F>, TwistError> {
    Ok(minimize(&twist_raw(letter, x, cap)?))
}

/// Applies the letters right to left, minimizing after each step.
pub fn word_apply<F: Field>(word: &FunctorWord, x: &ProjComplex<F>) -> Result<ProjComplex<F>, TwistError> {
    word_apply_traced(word, x, DEFAULT_MAX_SUMMANDS, |_| {})
}

/// As [`word_apply`], calling `visit` on the starting minimal complex and on
/// every intermediate result.
pub fn word_apply_traced<F: Field>(
    word: &FunctorWord,
    x: &ProjComplex<F>,
    cap: usize,
    mut visit: impl FnMut(&ProjComplex<F>),
) -> Result<ProjComplex<F>, TwistError> {
    let mut cur = minimize(x);
    visit(&cur);
    for letter in word.letters.iter().rev() {
        cur = twist_apply_capped(*letter, &cur, cap)?;
        visit(&cur);
    }
    Ok(cur)
}

/// Minimal images of every indecomposable projective, indexed by vertex.
#[derive(Debug, Clone)]
pub struct ImageTable<F: Field> {
    pub n: usize,
    pub kind: AlgebraKind,
    pub entries: Vec<ProjComplex<F>>,
}

impl<F: Field> ImageTable<F> {
    pub fn entry(&self, v: Vertex) -> &ProjComplex<F> {
        &self.entries[v - 1]
    }
}

type CacheKey = (Vec<TwistLetter>, Vertex);

/// Evaluates functor words on projectives of one algebra, memoizing the
/// image of every word suffix. The cache is shared between threads.
pub struct TwistEngine<F: Field> {
    algebra: Algebra,
    cap: usize,
    cache_limit: usize,
    cache: RwLock<HashMap<CacheKey, Arc<ProjComplex<F>>>>,
}

impl<F: Field> TwistEngine<F> {
    pub fn new(algebra: Algebra) -> Self {
        Self::with_cap(algebra, DEFAULT_MAX_SUMMANDS)
    }

    pub fn with_cap(algebra: Algebra, cap: usize) -> Self {
        TwistEngine { algebra, cap, cache_limit: 200_000, cache: RwLock::new(HashMap::new()) }
    }

    pub fn for_kind(kind: AlgebraKind, n: usize) -> Result<Self, TwistError> {
        Ok(Self::new(Arc::new(AlgebraSpec::build(kind, n)?)))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.algebra.n()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn stalk(&self, v: Vertex) -> Result<ProjComplex<F>, TwistError> {
        Ok(ProjComplex::stalk(self.algebra.clone(), v, 0)?)
    }

    fn check_word(&self, word: &FunctorWord) -> Result<(), TwistError> {
        for l in &word.letters {
            if l.side != self.algebra.kind() {
                return Err(AlgebraError::AlgebraMismatch(format!("letter {l}"), self.algebra.name()).into());
            }
            if l.index == 0 || l.index > self.n() {
                return Err(TwistError::IndexOutOfRange { index: l.index, n: self.n() });
            }
        }
        Ok(())
    }

    /// Minimal image of the projective at `v`.
    pub fn image(&self, word: &FunctorWord, v: Vertex) -> Result<Arc<ProjComplex<F>>, TwistError> {
        self.check_word(word)?;
        self.algebra.check_vertex(v)?;
        let letters = &word.letters;
        let len = letters.len();
        // Longest cached suffix; suffix `letters[start..]` acts first.
        let mut start = len;
        let mut cur: Option<Arc<ProjComplex<F>>> = None;
        {
            let cache = self.cache.read().expect("cache lock");
            for st in 0..len {
                if let Some(hit) = cache.get(&(letters[st..].to_vec(), v)) {
                    start = st;
                    cur = Some(hit.clone());
                    break;
                }
            }
        }
        let mut cur = match cur {
            Some(c) => c,
            None => Arc::new(self.stalk(v)?),
        };
        for st in (0..start).rev() {
            let next = Arc::new(twist_apply_capped(letters[st], &cur, self.cap)?);
            let mut cache = self.cache.write().expect("cache lock");
            if cache.len() < self.cache_limit {
                cache.entry((letters[st..].to_vec(), v)).or_insert_with(|| next.clone());
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Images of all projectives, computed in parallel.
    pub fn image_table(&self, word: &FunctorWord) -> Result<ImageTable<F>, TwistError> {
        let entries: Result<Vec<ProjComplex<F>>, TwistError> =
            (1..=self.n()).into_par_iter().map(|v| self.image(word, v).map(|c| (*c).clone())).collect();
        Ok(ImageTable { n: self.n(), kind: self.algebra.kind(), entries: entries? })
    }

    /// Applies `word` to an arbitrary complex (not cached).
    pub fn apply(&self, word: &FunctorWord, x: &ProjComplex<F>) -> Result<ProjComplex<F>, TwistError> {
        self.check_word(word)?;
        word_apply_traced(word, x, self.cap, |_| {})
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

/// `ImageTable` of `word` on the `n`-vertex algebra matching the word's letters.
pub fn image_table<F: Field>(word: &FunctorWord, kind: AlgebraKind, n: usize) -> Result<ImageTable<F>, TwistError> {
    TwistEngine::<F>::for_kind(kind, n)?.image_table(word)
}

/// Staircase complex `T_j = Q_n -> ... -> Q_j` over the zigzag algebra with
/// `Q_k` in degree `k - 1` and arrow differentials, together with the
/// triangle maps `f_j: T_j -> T_{j+1}` (identities where both are nonzero)
/// and `g_j: T_{j+1} -> Q_j[j]` (the arrow `j+1 -> j` in degree `j`). The maps
/// are absent for `j = n`.
#[allow(clippy::type_complexity)]
pub fn staircase<F: Field>(
    algebra: &Algebra,
    j: Vertex,
) -> Result<(ProjComplex<F>, Option<ChainMap<F>>, Option<ChainMap<F>>), TwistError> {
    let n = algebra.n();
    if algebra.kind() != AlgebraKind::Zigzag {
        return Err(AlgebraError::AlgebraMismatch(algebra.name(), "zigzag".into()).into());
    }
    if j == 0 || j > n {
        return Err(TwistError::IndexOutOfRange { index: j, n });
    }
    let tj = staircase_complex(algebra, j)?;
    if j == n {
        return Ok((tj, None, None));
    }
    let tnext = staircase_complex(algebra, j + 1)?;
    let f = ChainMap::new(
        tj.clone(),
        tnext.clone(),
        (j + 1..=n)
            .map(|k| {
                let m = crate::algebra::ProjModule::new(vec![k]);
                (k as i64 - 1, ModuleMorphism::identity(algebra, m))
            })
            .collect(),
    )?;
    f.validate()?;
    let qj = ProjComplex::stalk(algebra.clone(), j, j as i64)?;
    let nu = algebra.named_element(crate::algebra::NamedMorphism::Nu, j + 1, j)?;
    let g = ChainMap::new(tnext, qj, BTreeMap::from([(j as i64, ModuleMorphism::single(j + 1, j, nu))]))?;
    g.validate()?;
    Ok((tj, Some(f), Some(g)))
}

pub fn staircase_complex<F: Field>(algebra: &Algebra, j: Vertex) -> Result<ProjComplex<F>, TwistError> {
    let n = algebra.n();
    let vertices: Vec<Vertex> = (j..=n).rev().collect();
    let cells = vertices
        .windows(2)
        .map(|w| algebra.named_element(crate::algebra::NamedMorphism::Nu, w[0], w[1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProjComplex::sequence(algebra.clone(), n as i64 - 1, &vertices, cells)?)
}

/// `T = T_1 ⊕ ... ⊕ T_n`.
pub fn staircase_sum<F: Field>(algebra: &Algebra) -> Result<ProjComplex<F>, TwistError> {
    let mut t = ProjComplex::zero(algebra.clone());
    for j in 1..=algebra.n() {
        t = t.direct_sum(&staircase_complex(algebra, j)?)?;
    }
    Ok(t)
}

/// The chain map `T_n -> T_j` (`j < n`) given by the socle loop at `n` in
/// degree `n - 1`; its cone is the image of `T_j` under `R_n`.
pub fn staircase_top_map<F: Field>(algebra: &Algebra, j: Vertex) -> Result<ChainMap<F>, TwistError> {
    let n = algebra.n();
    let (tn, tj) = (staircase_complex(algebra, n)?, staircase_complex(algebra, j)?);
    let socle = AlgebraElement::basis(algebra.socle(n));
    let f = ChainMap::new(tn, tj, BTreeMap::from([(n as i64 - 1, ModuleMorphism::single(n, n, socle))]))?;
    f.validate()?;
    Ok(f)
}

/// The chain map `Cone(f_i) -> T_{i+1}` that is the arrow `i -> i+1` on the
/// `Q_i` summand coming from `T_i` and the socle loop on the `Q_{i+1}` summand
/// of `T_{i+1}`, both in degree `i`.
pub fn staircase_cone_map<F: Field>(algebra: &Algebra, i: Vertex) -> Result<ChainMap<F>, TwistError> {
    let (_, f, _) = staircase::<F>(algebra, i)?;
    let f = f.ok_or(TwistError::IndexOutOfRange { index: i, n: algebra.n() })?;
    let cone = f.cone()?;
    let target = staircase_complex(algebra, i + 1)?;
    let deg = i as i64;
    let src = cone.term(deg).clone();
    let tgt = target.term(deg).clone();
    let mut m = ModuleMorphism::zero(src.clone(), tgt);
    for (s, &v) in src.summands.iter().enumerate() {
        if v == i {
            m.set(s, 0, algebra.named_element(crate::algebra::NamedMorphism::Nu, i, i + 1)?);
        } else if v == i + 1 {
            m.set(s, 0, AlgebraElement::basis(algebra.socle(i + 1)));
        }
    }
    let h = ChainMap::new(cone, target, BTreeMap::from([(deg, m)]))?;
    h.validate()?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NamedMorphism;
    use crate::homotopy::{equivalent_minimal, homotopy_equivalent, homotopy_hom_dim};
    use crate::scalar::Rational;

    type C = ProjComplex<Rational>;

    fn nak(n: usize) -> Algebra {
        Arc::new(AlgebraSpec::nakayama(n).unwrap())
    }

    fn zig(n: usize) -> Algebra {
        Arc::new(AlgebraSpec::zigzag(n).unwrap())
    }

    fn equiv(x: &C, y: &C) -> bool {
        homotopy_equivalent(x, y, 16, 5).unwrap().is_equivalent()
    }

    #[test]
    fn parse_words() {
        let w = FunctorWord::parse("F1 F2^-1  F3", 3).unwrap();
        assert_eq!(w.letters, vec![TwistLetter::f(1), TwistLetter::f_inv(2), TwistLetter::f(3)]);
        assert_eq!(w.to_string(), "F1 F2^-1 F3");
        assert_eq!(FunctorWord::parse("", 3).unwrap(), FunctorWord::empty());
        assert_eq!(FunctorWord::parse("H3", 3).unwrap(), h_generator_word(3, 3).unwrap());
        assert_eq!(
            FunctorWord::parse("H1^-1", 3).unwrap().letters,
            vec![TwistLetter::f(1), TwistLetter::f_inv(2), TwistLetter::f_inv(1)]
        );
        match FunctorWord::parse("F1 G2", 3) {
            Err(TwistError::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(FunctorWord::parse("F4", 3).is_err());
        assert!(FunctorWord::parse("F1 R2", 3).is_err());
        assert!(FunctorWord::parse("Fx", 3).is_err());
    }

    #[test]
    fn h_words() {
        assert_eq!(
            h_generator_word(4, 4).unwrap().letters,
            vec![TwistLetter::f(4), TwistLetter::f(1), TwistLetter::f_inv(4)]
        );
        assert_eq!(
            h_generator_word(2, 4).unwrap().letters,
            vec![TwistLetter::f(2), TwistLetter::f(3), TwistLetter::f_inv(2)]
        );
        assert!(h_generator_word(5, 4).is_err());
    }

    #[test]
    fn twist_of_own_projective_shifts() {
        for n in 2..=5 {
            let a = nak(n);
            for i in 1..=n {
                let p = C::stalk(a.clone(), i, 0).unwrap();
                assert_eq!(twist_apply(TwistLetter::f(i), &p).unwrap(), p.shift(1));
                assert_eq!(twist_apply(TwistLetter::f_inv(i), &p).unwrap(), p.shift(-1));
            }
        }
    }

    #[test]
    fn raw_twist_minimizes_to_shift() {
        let a = nak(3);
        let p = C::stalk(a.clone(), 2, 0).unwrap();
        let raw = twist_raw(TwistLetter::f(2), &p, 100).unwrap();
        raw.validate().unwrap();
        assert_eq!(raw.total_summands(), 3);
        assert_eq!(minimize(&raw).summand_multisets(), BTreeMap::from([(1, vec![2])]));
    }

    #[test]
    fn twist_of_other_projective() {
        let n = 4;
        let a = nak(n);
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let pj = C::stalk(a.clone(), j, 0).unwrap();
                let mu_ij = a.named_element(NamedMorphism::Mu, i, j).unwrap();
                let expected = C::sequence(a.clone(), 1, &[i, j], vec![mu_ij]).unwrap();
                assert!(equiv(&twist_apply(TwistLetter::f(i), &pj).unwrap(), &expected));
                let mu_ji = a.named_element(NamedMorphism::Mu, j, i).unwrap();
                let expected_inv = C::sequence(a.clone(), 0, &[j, i], vec![mu_ji]).unwrap();
                assert!(equiv(&twist_apply(TwistLetter::f_inv(i), &pj).unwrap(), &expected_inv));
            }
        }
    }

    #[test]
    fn inverse_letters_cancel() {
        let a = nak(3);
        for i in 1..=3 {
            for j in 1..=3 {
                let p = C::stalk(a.clone(), j, 0).unwrap();
                let w = FunctorWord::new(vec![TwistLetter::f_inv(i), TwistLetter::f(i)]);
                assert_eq!(word_apply(&w, &p).unwrap(), p);
                assert_eq!(word_apply(&w.inverse(), &p).unwrap(), p);
            }
        }
    }

    #[test]
    fn zigzag_twists() {
        let b = zig(4);
        let q3 = C::stalk(b.clone(), 3, 0).unwrap();
        let r2 = twist_apply(TwistLetter::r(2), &q3).unwrap();
        let nu = b.named_element(NamedMorphism::Nu, 2, 3).unwrap();
        assert!(equiv(&r2, &C::sequence(b.clone(), 1, &[2, 3], vec![nu]).unwrap()));
        let q4 = C::stalk(b.clone(), 4, 0).unwrap();
        assert_eq!(twist_apply(TwistLetter::r(2), &q4).unwrap(), q4);
        assert!(twist_apply(TwistLetter::f(2), &q4).is_err());
    }

    #[test]
    fn engine_cache_matches_direct_evaluation() {
        let engine = TwistEngine::<Rational>::new(nak(3));
        let w = FunctorWord::parse("F1 F2 F1^-1 F3", 3).unwrap();
        for v in 1..=3 {
            let direct = word_apply(&w, &engine.stalk(v).unwrap()).unwrap();
            assert_eq!(*engine.image(&w, v).unwrap(), direct);
            assert_eq!(*engine.image(&w, v).unwrap(), direct);
        }
        assert!(engine.cache_len() >= 4);
        let table = engine.image_table(&FunctorWord::empty()).unwrap();
        for v in 1..=3 {
            assert_eq!(table.entry(v), &engine.stalk(v).unwrap());
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let engine = TwistEngine::<Rational>::with_cap(nak(3), 2);
        let w = FunctorWord::parse("F1", 3).unwrap();
        assert!(matches!(engine.image(&w, 1), Err(TwistError::Complex(ComplexError::TooLarge { .. }))));
    }

    #[test]
    fn staircase_basics() {
        for n in 2..=5 {
            let b = zig(n);
            let (tn, f, g) = staircase::<Rational>(&b, n).unwrap();
            assert_eq!(tn, C::stalk(b.clone(), n, n as i64 - 1).unwrap());
            assert!(f.is_none() && g.is_none());
            for j in 1..n {
                let (tj, f, g) = staircase::<Rational>(&b, j).unwrap();
                tj.validate().unwrap();
                assert_eq!(homotopy_hom_dim(&tj, &tj).unwrap(), 2);
                let cone = minimize(&f.unwrap().cone().unwrap());
                let qj = C::stalk(b.clone(), j, j as i64).unwrap();
                assert!(equivalent_minimal(&cone, &qj, 8, 1).unwrap().is_equivalent());
                let cone_g = g.unwrap().cone().unwrap();
                assert!(equiv(&cone_g, &tj.shift(1)));
            }
        }
        assert!(staircase::<Rational>(&zig(3), 4).is_err());
        assert!(staircase::<Rational>(&nak(3), 1).is_err());
    }

    #[test]
    fn staircase_auxiliary_maps_are_chain_maps() {
        let b = zig(4);
        for j in 1..4 {
            staircase_top_map::<Rational>(&b, j).unwrap().validate().unwrap();
        }
        for i in 1..4 {
            staircase_cone_map::<Rational>(&b, i).unwrap().validate().unwrap();
        }
    }
}

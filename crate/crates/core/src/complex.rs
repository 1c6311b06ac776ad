//! Bounded complexes of projective modules and chain maps between them.
//!
//! Indexing is homological: `d_k: X_k -> X_{k-1}`, and `(X[m])_k = X_{k-m}`,
//! so `P[1]` is a stalk in degree 1. Shifting by `m` multiplies every
//! differential by `(-1)^m`.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, AlgebraError, AlgebraKind, AlgebraSpec, ModuleMorphism, ProjModule, Vertex};
use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("not a complex at degree {degree}: {reason}")]
    Violation { degree: i64, reason: String },
    #[error("invalid chain map at degree {degree}: {reason}")]
    InvalidChainMap { degree: i64, reason: String },
    #[error("complex has {summands} summands, above the cap of {cap}")]
    TooLarge { summands: usize, cap: usize },
    #[error("malformed complex description: {0}")]
    Format(String),
}

/// A bounded complex of projectives. Degrees run over `lo..lo + terms.len()`;
/// everything outside is zero.
#[derive(Clone)]
pub struct ProjComplex<F> {
    algebra: Algebra,
    lo: i64,
    terms: Vec<ProjModule>,
    /// `diffs[k]` maps `terms[k]` to `terms[k - 1]` (to the zero module for `k = 0`).
    diffs: Vec<ModuleMorphism<F>>,
}

static EMPTY: ProjModule = ProjModule { summands: Vec::new() };

impl<F: Field> ProjComplex<F> {
    pub fn zero(algebra: Algebra) -> Self {
        ProjComplex { algebra, lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// The indecomposable projective at `v`, concentrated in `degree`.
    pub fn stalk(algebra: Algebra, v: Vertex, degree: i64) -> Result<Self, ComplexError> {
        algebra.check_vertex(v)?;
        let m = ProjModule::new(vec![v]);
        Ok(ProjComplex {
            algebra,
            lo: degree,
            diffs: vec![ModuleMorphism::zero(m.clone(), ProjModule::default())],
            terms: vec![m],
        })
    }

    /// Builds a complex from terms and differentials. Missing differentials are
    /// zero. Shapes and vertices are checked; `d² = 0` is not (see [`Self::validate`]).
    pub fn new(
        algebra: Algebra,
        terms: BTreeMap<i64, Vec<Vertex>>,
        diffs: BTreeMap<i64, ModuleMorphism<F>>,
    ) -> Result<Self, ComplexError> {
        for &v in terms.values().flatten() {
            algebra.check_vertex(v)?;
        }
        let (Some(&lo), Some(&hi)) = (terms.keys().next(), terms.keys().next_back()) else {
            if let Some((&k, d)) = diffs.iter().find(|(_, d)| !d.is_zero()) {
                return Err(shape(k, format!("nonzero differential {d:?} on a zero complex")));
            }
            return Ok(Self::zero(algebra));
        };
        let module = |k: i64| ProjModule::new(terms.get(&k).cloned().unwrap_or_default());
        let mut out = ProjComplex { algebra, lo, terms: Vec::new(), diffs: Vec::new() };
        for k in lo..=hi {
            let (src, tgt) = (module(k), module(k - 1));
            let d = match diffs.get(&k) {
                Some(d) => {
                    if d.source() != &src || d.target() != &tgt {
                        return Err(shape(k, format!(
                            "differential {:?} -> {:?} does not match terms {:?} -> {:?}",
                            d.source().summands, d.target().summands, src.summands, tgt.summands
                        )));
                    }
                    d.clone()
                }
                None => ModuleMorphism::zero(src.clone(), tgt),
            };
            out.terms.push(src);
            out.diffs.push(d);
        }
        for (&k, d) in &diffs {
            if (k < lo || k > hi + 1) && !d.is_zero() {
                return Err(shape(k, "nonzero differential outside the support".into()));
            }
            if k == hi + 1 && !d.is_zero() {
                return Err(shape(k, "nonzero differential out of the top term".into()));
            }
        }
        out.trim();
        Ok(out)
    }

    /// A complex with one summand per degree: `vertices[0]` sits in degree
    /// `top`, `vertices[r]` in degree `top - r`, and `cells[r]` is the
    /// differential from `vertices[r]` to `vertices[r + 1]`.
    pub fn sequence(
        algebra: Algebra,
        top: i64,
        vertices: &[Vertex],
        cells: Vec<AlgebraElement<F>>,
    ) -> Result<Self, ComplexError> {
        if cells.len() + 1 != vertices.len().max(1) {
            return Err(ComplexError::Format("sequence needs one cell between consecutive terms".into()));
        }
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (r, &v) in vertices.iter().enumerate() {
            terms.insert(top - r as i64, vec![v]);
        }
        for (r, cell) in cells.into_iter().enumerate() {
            let deg = top - r as i64;
            diffs.insert(deg, ModuleMorphism::single(vertices[r], vertices[r + 1], cell));
        }
        Self::new(algebra, terms, diffs)
    }

    fn trim(&mut self) {
        while self.terms.last().is_some_and(|t| t.is_empty()) {
            self.terms.pop();
            self.diffs.pop();
        }
        let lead = self.terms.iter().take_while(|t| t.is_empty()).count();
        if lead > 0 {
            self.terms.drain(..lead);
            self.diffs.drain(..lead);
            self.lo += lead as i64;
            if let Some(first) = self.diffs.first_mut() {
                *first = ModuleMorphism::zero(first.source().clone(), ProjModule::default());
            }
        }
        if self.terms.is_empty() {
            self.lo = 0;
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest and highest nonzero degree, `None` for the zero complex.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        (!self.terms.is_empty()).then(|| (self.lo, self.lo + self.terms.len() as i64 - 1))
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.lo..self.lo + self.terms.len() as i64
    }

    pub fn term(&self, k: i64) -> &ProjModule {
        self.index(k).map(|i| &self.terms[i]).unwrap_or(&EMPTY)
    }

    /// The differential `d_k: X_k -> X_{k-1}`.
    pub fn diff(&self, k: i64) -> Cow<'_, ModuleMorphism<F>> {
        match self.index(k) {
            Some(i) => Cow::Borrowed(&self.diffs[i]),
            None => Cow::Owned(ModuleMorphism::zero(ProjModule::default(), self.term(k - 1).clone())),
        }
    }

    fn index(&self, k: i64) -> Option<usize> {
        let i = k.checked_sub(self.lo)?;
        (0..self.terms.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn total_summands(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }

    pub fn max_summands_per_degree(&self) -> usize {
        self.terms.iter().map(|t| t.len()).max().unwrap_or(0)
    }

    /// Sorted summand lists per nonzero degree.
    pub fn summand_multisets(&self) -> BTreeMap<i64, Vec<Vertex>> {
        self.degrees()
            .filter(|&k| !self.term(k).is_empty())
            .map(|k| (k, self.term(k).multiset()))
            .collect()
    }

    /// Alternating sum of K-dimensions of the terms.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|k| {
                let d = self.term(k).k_dim(&self.algebra) as i64;
                if k.rem_euclid(2) == 0 { d } else { -d }
            })
            .sum()
    }

    /// Checks shapes, cell supports and `d_{k-1} ∘ d_k = 0`, reporting the first violation.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for k in self.degrees() {
            let d = self.diff(k);
            if d.source() != self.term(k) || d.target() != self.term(k - 1) {
                return Err(ComplexError::Violation { degree: k, reason: "differential shape mismatch".into() });
            }
            d.check_support(&self.algebra).map_err(|reason| ComplexError::Violation { degree: k, reason })?;
        }
        for k in self.degrees() {
            let comp = self.diff(k).then(&self.algebra, &self.diff(k - 1));
            if !comp.is_zero() {
                return Err(ComplexError::Violation {
                    degree: k,
                    reason: format!("d_{} after d_{k} is nonzero: {}", k - 1, comp.display(&self.algebra)),
                });
            }
        }
        Ok(())
    }

    /// `X[m]`, with `(X[m])_k = X_{k-m}` and differentials scaled by `(-1)^m`.
    pub fn shift(&self, m: i64) -> Self {
        let mut out = self.clone();
        if self.terms.is_empty() {
            return out;
        }
        out.lo += m;
        if m.rem_euclid(2) == 1 {
            out.diffs = self.diffs.iter().map(|d| d.neg()).collect();
        }
        out
    }

    /// Degreewise direct sum, summands of `self` first.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, ComplexError> {
        check_same(&self.algebra, &other.algebra)?;
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let degrees: Vec<i64> = self.degrees().chain(other.degrees()).collect();
        let (Some(&lo), Some(&hi)) = (degrees.iter().min(), degrees.iter().max()) else {
            return Ok(Self::zero(self.algebra.clone()));
        };
        let concat = |k: i64| -> ProjModule {
            let mut s = self.term(k).summands.clone();
            s.extend_from_slice(&other.term(k).summands);
            ProjModule::new(s)
        };
        for k in lo..=hi {
            terms.insert(k, concat(k).summands);
            let mut d = ModuleMorphism::zero(concat(k), concat(k - 1));
            paste(&mut d, 0, 0, &self.diff(k));
            paste(&mut d, self.term(k).len(), self.term(k - 1).len(), &other.diff(k));
            diffs.insert(k, d);
        }
        Self::new(self.algebra.clone(), terms, diffs)
    }

    /// The same complex with summands of each degree reordered by `perm[k]`
    /// (new position `r` holds old summand `perm[k][r]`).
    pub fn permute(&self, perms: &BTreeMap<i64, Vec<usize>>) -> Self {
        let order = |k: i64| -> Vec<usize> {
            perms.get(&k).cloned().unwrap_or_else(|| (0..self.term(k).len()).collect())
        };
        let mut out = self.clone();
        for (i, k) in self.degrees().enumerate() {
            let d = self.diff(k);
            out.diffs[i] = d.restrict(&order(k), &order(k - 1));
            out.terms[i] = out.diffs[i].source().clone();
        }
        out
    }

    /// A complex in which no differential cell is an isomorphism between
    /// indecomposables.
    pub fn is_minimal(&self) -> bool {
        self.degrees().all(|k| {
            let d = self.diff(k);
            let ok = d.cells().all(|(s, t, e)| {
                let v = d.source().summands[s];
                v != d.target().summands[t] || e.coeff(self.algebra.idempotent(v)).is_zero()
            });
            ok
        })
    }

    /// Compact text: degrees from high to low, `P2(1) -> P3(0)`, with the
    /// differential cells in brackets.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let letter = module_letter(self.algebra.kind());
        let mut parts = Vec::new();
        for k in self.degrees().rev() {
            let t = self.term(k);
            let names: Vec<String> = t.summands.iter().map(|v| format!("{letter}{v}")).collect();
            let body = if names.len() == 1 { names[0].clone() } else { format!("({})", names.join(" + ")) };
            parts.push(format!("{body}[deg {k}]"));
            if k > self.lo {
                let d = self.diff(k);
                if !d.is_zero() {
                    parts.push(format!("--{}-->", d.display(&self.algebra)));
                } else {
                    parts.push("--0-->".into());
                }
            }
        }
        parts.join(" ")
    }

    pub fn to_json(&self) -> ComplexJson {
        let spec = &self.algebra;
        ComplexJson {
            algebra: AlgebraJson { kind: spec.kind(), n: spec.n() },
            terms: self
                .degrees()
                .map(|k| TermJson { degree: k, summands: self.term(k).summands.clone() })
                .collect(),
            differentials: self
                .degrees()
                .skip(1)
                .map(|k| {
                    let d = self.diff(k);
                    let cells = (0..d.source().len())
                        .map(|s| {
                            (0..d.target().len())
                                .map(|t| CellJson {
                                    paths: d
                                        .cell(s, t)
                                        .terms()
                                        .iter()
                                        .map(|(p, c)| {
                                            let path = spec.path(*p);
                                            PathJson {
                                                start: path.start,
                                                length: path.length,
                                                end: Some(path.end),
                                                coeff: c.to_coeff(),
                                            }
                                        })
                                        .collect(),
                                })
                                .collect()
                        })
                        .collect();
                    DiffJson { degree: k, cells }
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("complex serializes")
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self, ComplexError> {
        let algebra = Arc::new(AlgebraSpec::build(json.algebra.kind, json.algebra.n)?);
        Self::from_json_with(algebra, json)
    }

    /// Parses against an existing algebra handle, which must match the declared one.
    pub fn from_json_with(algebra: Algebra, json: &ComplexJson) -> Result<Self, ComplexError> {
        if algebra.kind() != json.algebra.kind || algebra.n() != json.algebra.n {
            return Err(AlgebraError::AlgebraMismatch(
                algebra.name(),
                format!("{}({})", json.algebra.kind, json.algebra.n),
            )
            .into());
        }
        let mut terms = BTreeMap::new();
        for t in &json.terms {
            if terms.insert(t.degree, t.summands.clone()).is_some() {
                return Err(ComplexError::Format(format!("degree {} listed twice", t.degree)));
            }
        }
        let module = |k: i64| ProjModule::new(terms.get(&k).cloned().unwrap_or_default());
        let mut diffs = BTreeMap::new();
        for d in &json.differentials {
            let (src, tgt) = (module(d.degree), module(d.degree - 1));
            if d.cells.len() != src.len() || d.cells.iter().any(|row| row.len() != tgt.len()) {
                return Err(ComplexError::Format(format!("cell grid at degree {} has the wrong shape", d.degree)));
            }
            let mut m = ModuleMorphism::zero(src, tgt);
            for (s, row) in d.cells.iter().enumerate() {
                for (t, cell) in row.iter().enumerate() {
                    let mut parts = Vec::new();
                    for p in &cell.paths {
                        let idx = lookup_path(&algebra, p)?;
                        let c = F::parse_coeff(&p.coeff).map_err(|e| ComplexError::Format(e.to_string()))?;
                        parts.push((idx, c));
                    }
                    m.set(s, t, AlgebraElement::from_terms(parts));
                }
            }
            if diffs.insert(d.degree, m).is_some() {
                return Err(ComplexError::Format(format!("differential {} listed twice", d.degree)));
            }
        }
        let out = Self::new(algebra, terms, diffs)?;
        out.validate()?;
        Ok(out)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ComplexError> {
        let json: ComplexJson = serde_json::from_str(text).map_err(|e| ComplexError::Format(e.to_string()))?;
        Self::from_json(&json)
    }
}

fn lookup_path(spec: &AlgebraSpec, p: &PathJson) -> Result<usize, ComplexError> {
    let matches: Vec<usize> = (0..spec.dim())
        .filter(|&k| {
            let b = spec.path(k);
            b.start == p.start && b.length == p.length && p.end.is_none_or(|e| e == b.end)
        })
        .collect();
    match matches.as_slice() {
        [one] => Ok(*one),
        [] => Err(ComplexError::Format(format!("no basis path with start {} and length {}", p.start, p.length))),
        _ => Err(ComplexError::Format(format!(
            "start {} and length {} are ambiguous without an end vertex",
            p.start, p.length
        ))),
    }
}

pub fn module_letter(kind: AlgebraKind) -> char {
    match kind {
        AlgebraKind::Nakayama => 'P',
        AlgebraKind::Zigzag => 'Q',
    }
}

fn shape(degree: i64, reason: String) -> ComplexError {
    ComplexError::Violation { degree, reason }
}

pub(crate) fn check_same(a: &AlgebraSpec, b: &AlgebraSpec) -> Result<(), AlgebraError> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(AlgebraError::AlgebraMismatch(a.name(), b.name()))
    }
}

/// Adds `block` into `target` at the given row and column offsets.
pub(crate) fn paste<F: Field>(target: &mut ModuleMorphism<F>, row: usize, col: usize, block: &ModuleMorphism<F>) {
    for (s, t, e) in block.cells() {
        let sum = target.cell(row + s, col + t).add(e);
        target.set(row + s, col + t, sum);
    }
}

impl<F: Field> PartialEq for ProjComplex<F> {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same_as(&other.algebra)
            && self.lo == other.lo
            && self.terms == other.terms
            && self.diffs == other.diffs
    }
}

impl<F: Field> fmt::Debug for ProjComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.algebra.name(), self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub kind: AlgebraKind,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub degree: i64,
    pub summands: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub start: Vertex,
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<Vertex>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub paths: Vec<PathJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffJson {
    pub degree: i64,
    pub cells: Vec<Vec<CellJson>>,
}

/// Serialized complex. Degrees ascend; `differentials[k].cells[s][t]` is the
/// cell from summand `s` in degree `k` to summand `t` in degree `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub algebra: AlgebraJson,
    pub terms: Vec<TermJson>,
    pub differentials: Vec<DiffJson>,
}

/// Chain map `f: X -> Y`, with `f_k: X_k -> Y_k`. Missing components are zero.
#[derive(Clone)]
pub struct ChainMap<F> {
    source: ProjComplex<F>,
    target: ProjComplex<F>,
    components: BTreeMap<i64, ModuleMorphism<F>>,
}

impl<F: Field> ChainMap<F> {
    /// Assembles a chain map, checking component shapes; commutation is
    /// checked by [`Self::validate`].
    pub fn new(
        source: ProjComplex<F>,
        target: ProjComplex<F>,
        components: BTreeMap<i64, ModuleMorphism<F>>,
    ) -> Result<Self, ComplexError> {
        check_same(&source.algebra, &target.algebra)?;
        let mut kept = BTreeMap::new();
        for (k, f) in components {
            if f.source() != source.term(k) || f.target() != target.term(k) {
                if f.is_zero() && (source.term(k).is_empty() || target.term(k).is_empty()) {
                    continue;
                }
                return Err(ComplexError::InvalidChainMap { degree: k, reason: "component shape mismatch".into() });
            }
            if !f.is_zero() {
                kept.insert(k, f);
            }
        }
        Ok(ChainMap { source, target, components: kept })
    }

    pub fn zero(source: ProjComplex<F>, target: ProjComplex<F>) -> Self {
        ChainMap { source, target, components: BTreeMap::new() }
    }

    pub fn identity(x: &ProjComplex<F>) -> Self {
        let components = x
            .degrees()
            .map(|k| (k, ModuleMorphism::identity(&x.algebra, x.term(k).clone())))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap { source: x.clone(), target: x.clone(), components }
    }

    pub fn source(&self) -> &ProjComplex<F> {
        &self.source
    }

    pub fn target(&self) -> &ProjComplex<F> {
        &self.target
    }

    pub fn component(&self, k: i64) -> Cow<'_, ModuleMorphism<F>> {
        match self.components.get(&k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(ModuleMorphism::zero(self.source.term(k).clone(), self.target.term(k).clone())),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|m| m.is_zero())
    }

    /// Checks `d^X_k` then `f_{k-1}` equals `f_k` then `d^Y_k` in every degree.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let spec = &self.source.algebra;
        for f in self.components.values() {
            f.check_support(spec).map_err(|reason| ComplexError::InvalidChainMap { degree: 0, reason })?;
        }
        let degrees: Vec<i64> = self.source.degrees().chain(self.target.degrees()).collect();
        let (Some(&lo), Some(&hi)) = (degrees.iter().min(), degrees.iter().max()) else {
            return Ok(());
        };
        for k in lo..=hi + 1 {
            let left = self.source.diff(k).then(spec, &self.component(k - 1));
            let right = self.component(k).then(spec, &self.target.diff(k));
            if left != right {
                return Err(ComplexError::InvalidChainMap {
                    degree: k,
                    reason: format!(
                        "d then f = {} but f then d = {}",
                        left.display(spec),
                        right.display(spec)
                    ),
                });
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ChainMap<F>) -> Result<Self, ComplexError> {
        if self.target != next.source {
            return Err(ComplexError::InvalidChainMap { degree: 0, reason: "maps are not composable".into() });
        }
        let spec = &self.source.algebra;
        let components = self
            .components
            .iter()
            .map(|(k, f)| (*k, f.then(spec, &next.component(*k))))
            .collect();
        ChainMap::new(self.source.clone(), next.target.clone(), components)
    }

    pub fn add(&self, other: &ChainMap<F>) -> Self {
        let mut components = self.components.clone();
        for (k, g) in &other.components {
            let sum = self.component(*k).add(g);
            components.insert(*k, sum);
        }
        components.retain(|_, m| !m.is_zero());
        ChainMap { source: self.source.clone(), target: self.target.clone(), components }
    }

    pub fn scaled(&self, c: &F) -> Self {
        let components = self
            .components
            .iter()
            .map(|(k, m)| (*k, m.scaled(c)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), components }
    }

    /// The mapping cone: `Cone(f)_k = X_{k-1} ⊕ Y_k` with differential
    /// `(x, y) ↦ (-d x, f x + d y)`.
    pub fn cone(&self) -> Result<ProjComplex<F>, ComplexError> {
        self.validate()?;
        let (x, y) = (&self.source, &self.target);
        let algebra = x.algebra.clone();
        let degrees: Vec<i64> = x.degrees().map(|k| k + 1).chain(y.degrees()).collect();
        let (Some(&lo), Some(&hi)) = (degrees.iter().min(), degrees.iter().max()) else {
            return Ok(ProjComplex::zero(algebra));
        };
        let term = |k: i64| -> ProjModule {
            let mut s = x.term(k - 1).summands.clone();
            s.extend_from_slice(&y.term(k).summands);
            ProjModule::new(s)
        };
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for k in lo..=hi {
            terms.insert(k, term(k).summands);
            let mut d = ModuleMorphism::zero(term(k), term(k - 1));
            let (xs, xt) = (x.term(k - 1).len(), x.term(k - 2).len());
            paste(&mut d, 0, 0, &x.diff(k - 1).neg());
            paste(&mut d, 0, xt, &self.component(k - 1));
            paste(&mut d, xs, xt, &y.diff(k));
            diffs.insert(k, d);
        }
        let c = ProjComplex::new(algebra, terms, diffs)?;
        c.validate()?;
        Ok(c)
    }
}

impl<F: Field> fmt::Debug for ChainMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap({:?} -> {:?}; ", self.source, self.target)?;
        for (k, m) in &self.components {
            write!(f, "[{k}] {m:?} ")?;
        }
        write!(f, ")")
    }
}

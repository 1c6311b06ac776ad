//! Basis-path algebras: the symmetric Nakayama algebra on a cyclic quiver
//! and the Brauer-line (zigzag) algebra, with morphisms between their
//! indecomposable projective modules.
//!
//! Paths compose left to right: `(1 2)·(2 3) = (1 2 3)`. The projective at
//! vertex `v` is the left ideal `A·e_v`, spanned by paths ending at `v`, and a
//! morphism `A·e_v -> A·e_w` is right multiplication by an element of
//! `e_v·A·e_w`, i.e. a combination of paths from `v` to `w`. Vertices are
//! 1-based.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::Field;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("algebras need at least 2 vertices, got {0}")]
    InvalidSize(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("operands belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),
    #[error("invalid arguments for {kind}: {reason}")]
    InvalidKindArgs { kind: &'static str, reason: String },
    #[error("unknown basis path {0:?}")]
    UnknownPath(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Nakayama,
    Zigzag,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Nakayama => "nakayama",
            AlgebraKind::Zigzag => "zigzag",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisPath {
    pub start: Vertex,
    pub length: usize,
    pub end: Vertex,
    /// Canonical text: `(1 2 3)` for paths, `w2` for zigzag loops.
    pub label: String,
}

/// A presented basis-path algebra with structure constants in `{0, 1}`.
#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    kind: AlgebraKind,
    n: usize,
    basis: Vec<BasisPath>,
    /// `mult[x * dim + y]` is the basis index of `x·y`, or `None` for zero.
    mult: Vec<Option<usize>>,
    idempotents: Vec<usize>,
    /// Paths from `i` to `j` at `(i - 1) * n + (j - 1)`.
    between: Vec<Vec<usize>>,
    /// Paths ending at `v`: the basis of the projective `A·e_v`.
    ending_at: Vec<Vec<usize>>,
    /// Position of each basis path inside the basis of the projective at its end.
    position_in_projective: Vec<usize>,
    socle: Vec<usize>,
    /// For a path `y` from `i` to `v`, the path `y*` from `v` to `i` with
    /// `y*·y` the socle element at `v`.
    dual: Vec<usize>,
}

/// Shared handle to an algebra.
pub type Algebra = Arc<AlgebraSpec>;

impl AlgebraSpec {
    /// The Nakayama algebra on the cyclic quiver with `n` vertices modulo
    /// paths of length `n + 1`.
    pub fn nakayama(n: usize) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::InvalidSize(n));
        }
        let step = |v: Vertex, l: usize| (v - 1 + l) % n + 1;
        let mut basis = Vec::with_capacity(n * (n + 1));
        for start in 1..=n {
            for length in 0..=n {
                let verts: Vec<String> = (0..=length).map(|k| step(start, k).to_string()).collect();
                basis.push(BasisPath {
                    start,
                    length,
                    end: step(start, length),
                    label: format!("({})", verts.join(" ")),
                });
            }
        }
        let index = |start: Vertex, length: usize| (start - 1) * (n + 1) + length;
        let product = |x: &BasisPath, y: &BasisPath| {
            (x.end == y.start && x.length + y.length <= n).then(|| index(x.start, x.length + y.length))
        };
        let socle: Vec<usize> = (1..=n).map(|v| index(v, n)).collect();
        Ok(Self::assemble(AlgebraKind::Nakayama, n, basis, product, socle))
    }

    /// The Brauer-line algebra: the doubled line quiver on `n` vertices where
    /// two arrows in the same direction compose to zero, both loops at a
    /// vertex are the same element `w_i`, and loops are killed by arrows.
    pub fn zigzag(n: usize) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::InvalidSize(n));
        }
        let mut basis = Vec::with_capacity(4 * n - 2);
        for v in 1..=n {
            basis.push(BasisPath { start: v, length: 0, end: v, label: format!("({v})") });
            for w in [v.wrapping_sub(1), v + 1] {
                if (1..=n).contains(&w) {
                    basis.push(BasisPath { start: v, length: 1, end: w, label: format!("({v} {w})") });
                }
            }
            basis.push(BasisPath { start: v, length: 2, end: v, label: format!("w{v}") });
        }
        let lookup: BTreeMap<(Vertex, usize, Vertex), usize> =
            basis.iter().enumerate().map(|(k, p)| ((p.start, p.length, p.end), k)).collect();
        let product = |x: &BasisPath, y: &BasisPath| {
            if x.end != y.start {
                return None;
            }
            match (x.length, y.length) {
                (0, _) => lookup.get(&(y.start, y.length, y.end)).copied(),
                (_, 0) => lookup.get(&(x.start, x.length, x.end)).copied(),
                (1, 1) if y.end == x.start => lookup.get(&(x.start, 2, x.start)).copied(),
                _ => None,
            }
        };
        let socle: Vec<usize> = (1..=n).map(|v| lookup[&(v, 2, v)]).collect();
        Ok(Self::assemble(AlgebraKind::Zigzag, n, basis, product, socle))
    }

    pub fn build(kind: AlgebraKind, n: usize) -> Result<Self, AlgebraError> {
        match kind {
            AlgebraKind::Nakayama => Self::nakayama(n),
            AlgebraKind::Zigzag => Self::zigzag(n),
        }
    }

    fn assemble(
        kind: AlgebraKind,
        n: usize,
        basis: Vec<BasisPath>,
        product: impl Fn(&BasisPath, &BasisPath) -> Option<usize>,
        socle: Vec<usize>,
    ) -> Self {
        let dim = basis.len();
        let mut mult = Vec::with_capacity(dim * dim);
        for x in &basis {
            for y in &basis {
                mult.push(product(x, y));
            }
        }
        let idempotents: Vec<usize> = (1..=n)
            .map(|v| basis.iter().position(|p| p.start == v && p.length == 0).expect("idempotent"))
            .collect();
        let mut between = vec![Vec::new(); n * n];
        let mut ending_at = vec![Vec::new(); n];
        let mut position_in_projective = vec![0; dim];
        for (k, p) in basis.iter().enumerate() {
            between[(p.start - 1) * n + (p.end - 1)].push(k);
            position_in_projective[k] = ending_at[p.end - 1].len();
            ending_at[p.end - 1].push(k);
        }
        let mut spec = AlgebraSpec {
            kind,
            n,
            basis,
            mult,
            idempotents,
            between,
            ending_at,
            position_in_projective,
            socle,
            dual: Vec::new(),
        };
        spec.dual = spec.compute_duals();
        spec
    }

    /// Dual basis for the symmetrizing form "socle coefficient of `z·y`".
    /// For both algebras the Gram matrix of each pair of Hom spaces is a
    /// permutation matrix, so every dual is a single basis path.
    fn compute_duals(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|y| {
                let p = &self.basis[y];
                let candidates: Vec<usize> = self
                    .paths(p.end, p.start)
                    .iter()
                    .copied()
                    .filter(|&z| self.mult_basis(z, y) == Some(self.socle[p.end - 1]))
                    .collect();
                assert_eq!(candidates.len(), 1, "pairing is not perfect at {}", p.label);
                let z = candidates[0];
                for &other in self.paths(p.start, p.end) {
                    if other != y {
                        assert_ne!(self.mult_basis(z, other), Some(self.socle[p.end - 1]));
                    }
                }
                z
            })
            .collect()
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisPath] {
        &self.basis
    }

    pub fn path(&self, idx: usize) -> &BasisPath {
        &self.basis[idx]
    }

    pub fn name(&self) -> String {
        format!("{}({})", self.kind, self.n)
    }

    pub fn same_as(&self, other: &AlgebraSpec) -> bool {
        self.kind == other.kind && self.n == other.n
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), AlgebraError> {
        if (1..=self.n).contains(&v) {
            Ok(())
        } else {
            Err(AlgebraError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Basis index of `x·y`, `None` when the product is zero.
    pub fn mult_basis(&self, x: usize, y: usize) -> Option<usize> {
        self.mult[x * self.dim() + y]
    }

    pub fn idempotent(&self, v: Vertex) -> usize {
        self.idempotents[v - 1]
    }

    /// Socle element of `e_v·A·e_v`: the length-`n` cycle or the loop `w_v`.
    pub fn socle(&self, v: Vertex) -> usize {
        self.socle[v - 1]
    }

    pub fn dual(&self, idx: usize) -> usize {
        self.dual[idx]
    }

    /// Basis paths from `i` to `j`, spanning `e_i·A·e_j = Hom(P_i, P_j)`.
    pub fn paths(&self, i: Vertex, j: Vertex) -> &[usize] {
        &self.between[(i - 1) * self.n + (j - 1)]
    }

    /// Basis of the projective `A·e_v`.
    pub fn projective_basis(&self, v: Vertex) -> &[usize] {
        &self.ending_at[v - 1]
    }

    pub fn projective_dim(&self, v: Vertex) -> usize {
        self.ending_at[v - 1].len()
    }

    pub fn position_in_projective(&self, idx: usize) -> usize {
        self.position_in_projective[idx]
    }

    /// Paths starting at `i`: the basis of the right projective `e_i·A`.
    pub fn right_projective_basis(&self, i: Vertex) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].start == i).collect()
    }

    pub fn path_index(&self, label: &str) -> Result<usize, AlgebraError> {
        self.basis
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| AlgebraError::UnknownPath(label.to_string()))
    }

    pub fn find_path(&self, start: Vertex, length: usize, end: Option<Vertex>) -> Option<usize> {
        self.basis
            .iter()
            .position(|p| p.start == start && p.length == length && end.is_none_or(|e| e == p.end))
    }

    /// The unique arrow from `i` to `j` in the zigzag quiver, or the unique
    /// shortest path in the Nakayama quiver.
    pub fn shortest_path(&self, i: Vertex, j: Vertex) -> Option<usize> {
        self.paths(i, j).iter().copied().min_by_key(|&k| self.basis[k].length)
    }

    /// Basis of `e_i·A·e_j` as returned by [`Self::paths`] together with its dimension.
    pub fn hom_space(&self, i: Vertex, j: Vertex) -> Result<(&[usize], usize), AlgebraError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        let p = self.paths(i, j);
        Ok((p, p.len()))
    }

    pub fn multiply<F: Field>(&self, x: &AlgebraElement<F>, y: &AlgebraElement<F>) -> AlgebraElement<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                if let Some(c) = self.mult_basis(*a, *b) {
                    let e = acc.entry(c).or_insert_with(F::zero);
                    *e += ca.clone() * cb.clone();
                }
            }
        }
        AlgebraElement::from_map(acc)
    }

    /// Inverse of `a` in the local ring `e_v·A·e_v`, when the idempotent
    /// coefficient is nonzero.
    pub fn local_inverse<F: Field>(&self, v: Vertex, a: &AlgebraElement<F>) -> Option<AlgebraElement<F>> {
        let e = self.idempotent(v);
        let c = a.coeff(e);
        let c_inv = c.inv()?;
        // a = c (e - r) with r radical; a^-1 = c^-1 (e + r + r^2 + ...).
        let r = AlgebraElement::basis(e)
            .sub(&a.scaled(&c_inv));
        let mut sum = AlgebraElement::basis(e);
        let mut power = AlgebraElement::basis(e);
        for _ in 0..=self.dim() {
            power = self.multiply(&power, &r);
            if power.is_zero() {
                return Some(sum.scaled(&c_inv));
            }
            sum = sum.add(&power);
        }
        panic!("radical element is not nilpotent");
    }

    /// The cell of `kind(i, j)` as an algebra element of `e_i·A·e_j`.
    pub fn named_element<F: Field>(
        &self,
        kind: NamedMorphism,
        i: Vertex,
        j: Vertex,
    ) -> Result<AlgebraElement<F>, AlgebraError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        let bad = |reason: &str| AlgebraError::InvalidKindArgs { kind: kind.name(), reason: reason.to_string() };
        let idx = match kind {
            NamedMorphism::Identity | NamedMorphism::RhoIdentity => {
                if i != j {
                    return Err(bad("needs i = j"));
                }
                self.idempotent(i)
            }
            NamedMorphism::DeltaSocle => {
                if i != j {
                    return Err(bad("needs i = j"));
                }
                self.socle(i)
            }
            NamedMorphism::Mu => {
                if self.kind != AlgebraKind::Nakayama || i == j {
                    return Err(bad("needs i != j over the Nakayama algebra"));
                }
                self.paths(i, j)[0]
            }
            NamedMorphism::Nu => {
                if self.kind != AlgebraKind::Zigzag || i.abs_diff(j) != 1 {
                    return Err(bad("needs |i - j| = 1 over the zigzag algebra"));
                }
                self.paths(i, j)[0]
            }
        };
        Ok(AlgebraElement::basis(idx))
    }

    /// Parses a path label such as `(1 2 3)` or `w2`.
    pub fn parse_path(&self, label: &str) -> Result<usize, AlgebraError> {
        let compact: String = label.split_whitespace().collect::<Vec<_>>().join(" ");
        self.path_index(&compact)
    }
}

/// Element of a basis-path algebra in canonical sparse form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement<F> {
    /// Sorted by basis index; no zero coefficients.
    terms: Vec<(usize, F)>,
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero() -> Self {
        AlgebraElement { terms: Vec::new() }
    }

    pub fn basis(idx: usize) -> Self {
        AlgebraElement { terms: vec![(idx, F::one())] }
    }

    pub fn term(idx: usize, c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            AlgebraElement { terms: vec![(idx, c)] }
        }
    }

    pub fn from_map(map: BTreeMap<usize, F>) -> Self {
        AlgebraElement { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert_with(F::zero) += c;
        }
        Self::from_map(map)
    }

    pub fn terms(&self) -> &[(usize, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: usize) -> F {
        self.terms
            .binary_search_by_key(&idx, |(k, _)| *k)
            .map(|p| self.terms[p].1.clone())
            .unwrap_or_else(|_| F::zero())
    }

    pub fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        AlgebraElement { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ka, va)), Some((kb, vb))) => {
                    if ka < kb {
                        out.push((*ka, va.clone()));
                        a.next();
                    } else if kb < ka {
                        out.push((*kb, vb.clone()));
                        b.next();
                    } else {
                        let s = va.clone() + vb.clone();
                        if !s.is_zero() {
                            out.push((*ka, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((k, v)), None) => {
                    out.push((*k, v.clone()));
                    a.next();
                }
                (None, Some((k, v))) => {
                    out.push((*k, v.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        AlgebraElement { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Support check: every term is a path from `i` to `j`.
    pub fn lies_in(&self, spec: &AlgebraSpec, i: Vertex, j: Vertex) -> bool {
        self.terms.iter().all(|(k, _)| {
            let p = spec.path(*k);
            p.start == i && p.end == j
        })
    }

    pub fn display(&self, spec: &AlgebraSpec) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(k, c)| {
                let label = &spec.path(*k).label;
                if c.is_one() {
                    label.clone()
                } else {
                    format!("{c}*{label}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<F: fmt::Display> fmt::Debug for AlgebraElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c}*b{k}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Direct sum of indecomposable projectives, one entry per summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProjModule {
    pub summands: Vec<Vertex>,
}

impl ProjModule {
    pub fn new(summands: Vec<Vertex>) -> Self {
        ProjModule { summands }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Dimension over the ground field.
    pub fn k_dim(&self, spec: &AlgebraSpec) -> usize {
        self.summands.iter().map(|&v| spec.projective_dim(v)).sum()
    }

    /// Sorted summand list, the Krull-Schmidt invariant of the module.
    pub fn multiset(&self) -> Vec<Vertex> {
        let mut s = self.summands.clone();
        s.sort_unstable();
        s
    }
}

/// Named morphisms between indecomposable projectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedMorphism {
    Identity,
    /// Right multiplication by the unique path from `i` to `j` (Nakayama).
    Mu,
    /// Right multiplication by the socle element at `i`.
    DeltaSocle,
    /// Right multiplication by the arrow between adjacent vertices (zigzag).
    Nu,
    RhoIdentity,
}

impl NamedMorphism {
    pub fn name(self) -> &'static str {
        match self {
            NamedMorphism::Identity => "identity",
            NamedMorphism::Mu => "mu",
            NamedMorphism::DeltaSocle => "delta_socle",
            NamedMorphism::Nu => "nu",
            NamedMorphism::RhoIdentity => "rho_identity",
        }
    }
}

/// Morphism between direct sums of indecomposable projectives.
///
/// Cell `(s, t)` lies in `e_{v(s)}·A·e_{v(t)}` and maps summand `s` of the
/// source into summand `t` of the target by right multiplication. Storage is
/// sparse by row.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMorphism<F> {
    source: ProjModule,
    target: ProjModule,
    rows: Vec<BTreeMap<usize, AlgebraElement<F>>>,
}

impl<F: Field> ModuleMorphism<F> {
    pub fn zero(source: ProjModule, target: ProjModule) -> Self {
        let rows = vec![BTreeMap::new(); source.len()];
        ModuleMorphism { source, target, rows }
    }

    pub fn identity(spec: &AlgebraSpec, module: ProjModule) -> Self {
        let mut m = Self::zero(module.clone(), module.clone());
        for (s, &v) in module.summands.iter().enumerate() {
            m.set(s, s, AlgebraElement::basis(spec.idempotent(v)));
        }
        m
    }

    /// Morphism between single indecomposables.
    pub fn single(i: Vertex, j: Vertex, cell: AlgebraElement<F>) -> Self {
        let mut m = Self::zero(ProjModule::new(vec![i]), ProjModule::new(vec![j]));
        m.set(0, 0, cell);
        m
    }

    pub fn named(spec: &AlgebraSpec, kind: NamedMorphism, i: Vertex, j: Vertex) -> Result<Self, AlgebraError> {
        Ok(Self::single(i, j, spec.named_element(kind, i, j)?))
    }

    pub fn source(&self) -> &ProjModule {
        &self.source
    }

    pub fn target(&self) -> &ProjModule {
        &self.target
    }

    pub fn get(&self, s: usize, t: usize) -> Option<&AlgebraElement<F>> {
        self.rows[s].get(&t)
    }

    pub fn cell(&self, s: usize, t: usize) -> AlgebraElement<F> {
        self.get(s, t).cloned().unwrap_or_else(AlgebraElement::zero)
    }

    pub fn set(&mut self, s: usize, t: usize, cell: AlgebraElement<F>) {
        assert!(t < self.target.len(), "column out of range");
        if cell.is_zero() {
            self.rows[s].remove(&t);
        } else {
            self.rows[s].insert(t, cell);
        }
    }

    /// Nonzero cells of row `s`.
    pub fn row(&self, s: usize) -> impl Iterator<Item = (usize, &AlgebraElement<F>)> {
        self.rows[s].iter().map(|(t, e)| (*t, e))
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &AlgebraElement<F>)> {
        self.rows.iter().enumerate().flat_map(|(s, r)| r.iter().map(move |(t, e)| (s, *t, e)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn scaled(&self, c: &F) -> Self {
        let mut m = Self::zero(self.source.clone(), self.target.clone());
        for (s, t, e) in self.cells() {
            m.set(s, t, e.scaled(c));
        }
        m
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-F::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut m = self.clone();
        for (s, t, e) in other.cells() {
            let sum = m.cell(s, t).add(e);
            m.set(s, t, sum);
        }
        m
    }

    /// `self` followed by `next`; as cell matrices this is the product `self · next`.
    pub fn then(&self, spec: &AlgebraSpec, next: &Self) -> Self {
        assert_eq!(self.target, next.source, "morphisms are not composable");
        let mut m = Self::zero(self.source.clone(), next.target.clone());
        for (s, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, AlgebraElement<F>> = BTreeMap::new();
            for (mid, a) in row {
                for (t, b) in &next.rows[*mid] {
                    let prod = spec.multiply(a, b);
                    if prod.is_zero() {
                        continue;
                    }
                    let slot = acc.entry(*t).or_insert_with(AlgebraElement::zero);
                    *slot = slot.add(&prod);
                }
            }
            for (t, e) in acc {
                m.set(s, t, e);
            }
        }
        m
    }

    /// Checks that cell `(s, t)` is supported on paths from `v(s)` to `v(t)`.
    pub fn check_support(&self, spec: &AlgebraSpec) -> Result<(), String> {
        for (s, t, e) in self.cells() {
            let (i, j) = (self.source.summands[s], self.target.summands[t]);
            if !e.lies_in(spec, i, j) {
                return Err(format!("cell ({s}, {t}) = {} does not lie in e{i} A e{j}", e.display(spec)));
            }
        }
        Ok(())
    }

    /// The induced linear map on concatenated path bases.
    ///
    /// The matrix acts on column vectors, so `realize(f.then(g)) = realize(g) * realize(f)`.
    pub fn realize(&self, spec: &AlgebraSpec) -> Matrix<F> {
        let offsets = |m: &ProjModule| {
            let mut acc = 0;
            m.summands
                .iter()
                .map(|&v| {
                    let o = acc;
                    acc += spec.projective_dim(v);
                    o
                })
                .collect::<Vec<_>>()
        };
        let (src_off, tgt_off) = (offsets(&self.source), offsets(&self.target));
        let mut out = Matrix::zeros(self.target.k_dim(spec), self.source.k_dim(spec));
        for (s, t, e) in self.cells() {
            let v = self.source.summands[s];
            for (col, &x) in spec.projective_basis(v).iter().enumerate() {
                for (p, c) in e.terms() {
                    if let Some(img) = spec.mult_basis(x, *p) {
                        let row = tgt_off[t] + spec.position_in_projective(img);
                        out[(row, src_off[s] + col)] += c.clone();
                    }
                }
            }
        }
        out
    }

    /// Restricts to the given source and target summands, in order.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        let src = ProjModule::new(rows.iter().map(|&r| self.source.summands[r]).collect());
        let tgt = ProjModule::new(cols.iter().map(|&c| self.target.summands[c]).collect());
        let mut m = Self::zero(src, tgt);
        for (new_r, &r) in rows.iter().enumerate() {
            for (new_c, &c) in cols.iter().enumerate() {
                if let Some(e) = self.get(r, c) {
                    m.set(new_r, new_c, e.clone());
                }
            }
        }
        m
    }

    pub fn display(&self, spec: &AlgebraSpec) -> String {
        let rows: Vec<String> = (0..self.source.len())
            .map(|s| {
                let cells: Vec<String> =
                    (0..self.target.len()).map(|t| self.cell(s, t).display(spec)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        rows.join(" ")
    }
}

impl<F: fmt::Display> fmt::Debug for ModuleMorphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}: ", self.source.summands, self.target.summands)?;
        for (s, row) in self.rows.iter().enumerate() {
            for (t, e) in row {
                write!(f, "({s},{t})={e:?} ")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::split_seed;
    use crate::scalar::Rational;
    use rand_core::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    type E = AlgebraElement<Rational>;

    fn el(spec: &AlgebraSpec, label: &str) -> E {
        E::basis(spec.path_index(label).unwrap())
    }

    #[test]
    fn dimensions() {
        for n in 2..=8 {
            assert_eq!(AlgebraSpec::nakayama(n).unwrap().dim(), n * (n + 1));
            assert_eq!(AlgebraSpec::zigzag(n).unwrap().dim(), 4 * n - 2);
        }
        assert_eq!(AlgebraSpec::nakayama(3).unwrap().dim(), 12);
        assert_eq!(AlgebraSpec::zigzag(3).unwrap().dim(), 10);
        assert_eq!(AlgebraSpec::nakayama(1).unwrap_err(), AlgebraError::InvalidSize(1));
        assert_eq!(AlgebraSpec::zigzag(0).unwrap_err(), AlgebraError::InvalidSize(0));
    }

    #[test]
    fn nakayama_products() {
        let a5 = AlgebraSpec::nakayama(5).unwrap();
        assert_eq!(a5.multiply(&el(&a5, "(1 2)"), &el(&a5, "(2 3)")), el(&a5, "(1 2 3)"));
        let a3 = AlgebraSpec::nakayama(3).unwrap();
        assert!(a3.multiply(&el(&a3, "(1 2 3 1)"), &el(&a3, "(1 2)")).is_zero());
        let a4 = AlgebraSpec::nakayama(4).unwrap();
        assert!(a4.multiply(&el(&a4, "(1 2 3)"), &el(&a4, "(3 4 1 2)")).is_zero());
        // The relation (i i+1 ... i i+1) = 0 for every i.
        for i in 1..=4 {
            let cycle = E::basis(a4.socle(i));
            let arrow = E::basis(a4.shortest_path(i, i % 4 + 1).unwrap());
            assert!(a4.multiply(&cycle, &arrow).is_zero());
        }
    }

    #[test]
    fn zigzag_products() {
        let b = AlgebraSpec::zigzag(3).unwrap();
        assert!(b.multiply(&el(&b, "(1 2)"), &el(&b, "(2 3)")).is_zero());
        assert_eq!(b.multiply(&el(&b, "(1 2)"), &el(&b, "(2 1)")), el(&b, "w1"));
        assert_eq!(b.multiply(&el(&b, "(2 1)"), &el(&b, "(1 2)")), el(&b, "w2"));
        assert_eq!(b.multiply(&el(&b, "(2 3)"), &el(&b, "(3 2)")), el(&b, "w2"));
        assert!(b.multiply(&el(&b, "w2"), &el(&b, "(2 3)")).is_zero());
        assert!(b.multiply(&el(&b, "w2"), &el(&b, "w2")).is_zero());
    }

    #[test]
    fn idempotents() {
        for spec in [AlgebraSpec::nakayama(4).unwrap(), AlgebraSpec::zigzag(4).unwrap()] {
            let one = E::from_terms((1..=4).map(|v| (spec.idempotent(v), Rational::from_i64(1))));
            for k in 0..spec.dim() {
                let x = E::basis(k);
                assert_eq!(spec.multiply(&one, &x), x);
                assert_eq!(spec.multiply(&x, &one), x);
            }
            for i in 1..=4 {
                for j in 1..=4 {
                    let p = spec.multiply(&E::basis(spec.idempotent(i)), &E::basis(spec.idempotent(j)));
                    if i == j {
                        assert_eq!(p, E::basis(spec.idempotent(i)));
                    } else {
                        assert!(p.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_exhaustive() {
        for n in 2..=5 {
            for spec in [AlgebraSpec::nakayama(n).unwrap(), AlgebraSpec::zigzag(n).unwrap()] {
                let d = spec.dim();
                for x in 0..d {
                    for y in 0..d {
                        for z in 0..d {
                            let left = spec.mult_basis(x, y).and_then(|xy| spec.mult_basis(xy, z));
                            let right = spec.mult_basis(y, z).and_then(|yz| spec.mult_basis(x, yz));
                            assert_eq!(left, right, "{} at {x},{y},{z}", spec.name());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hom_dimensions() {
        for n in 2..=8 {
            let a = AlgebraSpec::nakayama(n).unwrap();
            let b = AlgebraSpec::zigzag(n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    let expected = if i == j { 2 } else { 1 };
                    assert_eq!(a.hom_space(i, j).unwrap().1, expected);
                    let expected_b = match i.abs_diff(j) {
                        0 => 2,
                        1 => 1,
                        _ => 0,
                    };
                    assert_eq!(b.hom_space(i, j).unwrap().1, expected_b);
                }
            }
        }
        let a5 = AlgebraSpec::nakayama(5).unwrap();
        assert_eq!(a5.hom_space(2, 2).unwrap().1, 2);
        assert_eq!(a5.hom_space(1, 4).unwrap().1, 1);
        assert_eq!(AlgebraSpec::zigzag(4).unwrap().hom_space(1, 3).unwrap().1, 0);
        assert!(a5.hom_space(0, 1).is_err());
    }

    #[test]
    fn projective_dimensions() {
        let a = AlgebraSpec::nakayama(4).unwrap();
        let b = AlgebraSpec::zigzag(4).unwrap();
        for v in 1..=4 {
            assert_eq!(a.projective_dim(v), 5);
            assert_eq!(b.projective_dim(v), if v == 1 || v == 4 { 3 } else { 4 });
        }
        assert_eq!(ProjModule::new(vec![1, 1, 3]).k_dim(&a), 15);
    }

    #[test]
    fn labels() {
        let a = AlgebraSpec::nakayama(3).unwrap();
        assert_eq!(a.path(a.socle(2)).label, "(2 3 1 2)");
        assert_eq!(a.parse_path("(3  1)").unwrap(), a.shortest_path(3, 1).unwrap());
        let b = AlgebraSpec::zigzag(3).unwrap();
        assert_eq!(b.path(b.socle(3)).label, "w3");
        assert!(b.parse_path("(1 3)").is_err());
    }

    #[test]
    fn named_morphisms() {
        for n in 2..=5 {
            let a = AlgebraSpec::nakayama(n).unwrap();
            for i in 1..=n {
                let delta = ModuleMorphism::<Rational>::named(&a, NamedMorphism::DeltaSocle, i, i).unwrap();
                assert!(delta.then(&a, &delta).is_zero());
                for j in (1..=n).filter(|&j| j != i) {
                    let mu_ij = ModuleMorphism::named(&a, NamedMorphism::Mu, i, j).unwrap();
                    let mu_ji = ModuleMorphism::named(&a, NamedMorphism::Mu, j, i).unwrap();
                    assert_eq!(mu_ij.then(&a, &mu_ji), delta);
                    assert!(mu_ji.then(&a, &delta).is_zero());
                    assert!(delta.then(&a, &mu_ij).is_zero());
                }
            }
        }
        let a = AlgebraSpec::nakayama(3).unwrap();
        assert!(ModuleMorphism::<Rational>::named(&a, NamedMorphism::Mu, 1, 1).is_err());
        assert!(ModuleMorphism::<Rational>::named(&a, NamedMorphism::Nu, 1, 2).is_err());
        let b = AlgebraSpec::zigzag(3).unwrap();
        assert!(ModuleMorphism::<Rational>::named(&b, NamedMorphism::Nu, 1, 3).is_err());
        let nu = ModuleMorphism::<Rational>::named(&b, NamedMorphism::Nu, 2, 3).unwrap();
        assert!(nu.check_support(&b).is_ok());
    }

    #[test]
    fn realized_ranks() {
        let a = AlgebraSpec::nakayama(3).unwrap();
        let id = ModuleMorphism::<Rational>::identity(&a, ProjModule::new(vec![2]));
        assert_eq!(id.realize(&a), Matrix::identity(4));
        for n in 2..=6 {
            let a = AlgebraSpec::nakayama(n).unwrap();
            for i in 1..=n {
                let delta = ModuleMorphism::<Rational>::named(&a, NamedMorphism::DeltaSocle, i, i).unwrap();
                assert_eq!(delta.realize(&a).rank(), 1);
                for j in (1..=n).filter(|&j| j != i) {
                    let mu = ModuleMorphism::<Rational>::named(&a, NamedMorphism::Mu, i, j).unwrap();
                    let shift = (j + n - i) % n;
                    assert_eq!(mu.realize(&a).rank(), n + 1 - shift);
                }
            }
        }
    }

    #[test]
    fn local_inverse() {
        let a = AlgebraSpec::nakayama(3).unwrap();
        let x = E::from_terms([(a.idempotent(1), Rational::from_i64(2)), (a.socle(1), Rational::from_i64(5))]);
        let inv = a.local_inverse(1, &x).unwrap();
        assert_eq!(a.multiply(&x, &inv), E::basis(a.idempotent(1)));
        assert!(a.local_inverse(1, &E::basis(a.socle(1))).is_none());
    }

    fn random_morphism(spec: &AlgebraSpec, rng: &mut SplitMix64, src: &[Vertex], tgt: &[Vertex]) -> ModuleMorphism<Rational> {
        let mut m = ModuleMorphism::zero(ProjModule::new(src.to_vec()), ProjModule::new(tgt.to_vec()));
        for (s, &i) in src.iter().enumerate() {
            for (t, &j) in tgt.iter().enumerate() {
                let cell = E::from_terms(
                    spec.paths(i, j).iter().map(|&p| (p, Rational::from_i64((rng.next_u64() % 7) as i64 - 3))),
                );
                m.set(s, t, cell);
            }
        }
        m
    }

    #[test]
    fn realization_is_functorial() {
        for (trial, spec) in [AlgebraSpec::nakayama(4).unwrap(), AlgebraSpec::zigzag(4).unwrap()]
            .into_iter()
            .cycle()
            .take(200)
            .enumerate()
        {
            let mut rng = SplitMix64::seed_from_u64(split_seed(7, trial as u64));
            let mut pick = |len: u64| -> Vec<Vertex> {
                (0..1 + rng.next_u64() % len).map(|_| 1 + (rng.next_u64() % 4) as usize).collect()
            };
            let (a, b, c) = (pick(3), pick(3), pick(3));
            let f = random_morphism(&spec, &mut rng, &a, &b);
            let g = random_morphism(&spec, &mut rng, &b, &c);
            assert!(f.check_support(&spec).is_ok());
            assert_eq!(f.then(&spec, &g).realize(&spec), &g.realize(&spec) * &f.realize(&spec));
        }
    }

    #[test]
    fn nonzero_maps_between_distinct_projectives_are_multiples_of_mu() {
        let a = AlgebraSpec::nakayama(5).unwrap();
        for i in 1..=5 {
            for j in (1..=5).filter(|&j| j != i) {
                let (paths, dim) = a.hom_space(i, j).unwrap();
                assert_eq!(dim, 1);
                assert_eq!(E::basis(paths[0]), a.named_element(NamedMorphism::Mu, i, j).unwrap());
            }
        }
    }
}

//! Homotopy-category Hom dimensions and a homotopy-equivalence test.
//!
//! Both reduce to linear algebra on the coefficients of component cells. A
//! chain map `f` satisfies `d^X_k · f_{k-1} = f_k · d^Y_k` (cell products in
//! "then" order); null-homotopic maps are `f_k = h_k · d^Y_{k+1} + d^X_k · h_{k-1}`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraSpec, ModuleMorphism, Vertex};
use crate::complex::{check_same, ChainMap, ComplexError, ProjComplex};
use crate::linalg::{seeded_random_vector, solve_linear, split_seed, Matrix};
use crate::minimize::minimize;
use crate::scalar::Field;

/// Unknown coefficient: path `path` in cell `(s, t)` of the degree-`degree` component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Var {
    degree: i64,
    s: usize,
    t: usize,
    path: usize,
}

/// Enumerates cell coefficients of degree-`offset` maps `X_k -> Y_{k+offset}`.
fn variables<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, offset: i64) -> Vec<Var> {
    let spec = x.spec();
    let mut vars = Vec::new();
    for k in x.degrees() {
        let (src, tgt) = (x.term(k), y.term(k + offset));
        for (s, &i) in src.summands.iter().enumerate() {
            for (t, &j) in tgt.summands.iter().enumerate() {
                for &path in spec.paths(i, j) {
                    vars.push(Var { degree: k, s, t, path });
                }
            }
        }
    }
    vars
}

/// Column lookup for the cells of a morphism: for each target summand, the
/// `(row, cell)` pairs.
fn columns<F: Field>(m: &ModuleMorphism<F>) -> Vec<Vec<(usize, AlgebraElement<F>)>> {
    let mut out = vec![Vec::new(); m.target().len()];
    for (s, t, e) in m.cells() {
        out[t].push((s, e.clone()));
    }
    out
}

fn left_times_basis<F: Field>(spec: &AlgebraSpec, a: &AlgebraElement<F>, q: usize) -> Vec<(usize, F)> {
    a.terms().iter().filter_map(|(p, c)| spec.mult_basis(*p, q).map(|r| (r, c.clone()))).collect()
}

fn basis_times_right<F: Field>(spec: &AlgebraSpec, q: usize, b: &AlgebraElement<F>) -> Vec<(usize, F)> {
    b.terms().iter().filter_map(|(p, c)| spec.mult_basis(q, *p).map(|r| (r, c.clone()))).collect()
}

/// Sparse linear images of `vars` under `g ↦ (h · d^Y_{k+offset}, d^X_{k+1} · h)`,
/// which for `offset = 0` is the chain-condition defect and for `offset = 1`
/// the null-homotopic map generated by `h`. Entries are keyed by output cell
/// `(degree, s, t, path)` where the degree is that of the source term.
fn images<F: Field>(
    x: &ProjComplex<F>,
    y: &ProjComplex<F>,
    vars: &[Var],
    offset: i64,
    defect_sign: bool,
) -> Vec<Vec<(Var, F)>> {
    let spec = x.spec();
    let mut dx_cols: HashMap<i64, Vec<Vec<(usize, AlgebraElement<F>)>>> = HashMap::new();
    for k in x.degrees() {
        dx_cols.insert(k + 1, columns(&x.diff(k + 1)));
    }
    vars.iter()
        .map(|v| {
            let mut out = Vec::new();
            // v · d^Y: lands in degree v.degree, target summand in Y_{degree + offset - 1}.
            let dy = y.diff(v.degree + offset);
            let sign = if defect_sign { -F::one() } else { F::one() };
            for (t2, b) in dy.row(v.t) {
                for (p, c) in basis_times_right(spec, v.path, b) {
                    out.push((Var { degree: v.degree, s: v.s, t: t2, path: p }, sign.clone() * c));
                }
            }
            // d^X · v: lands in degree v.degree + 1, target summand v.t.
            if let Some(cols) = dx_cols.get(&(v.degree + 1)) {
                for (s2, a) in cols.get(v.s).into_iter().flatten() {
                    for (p, c) in left_times_basis(spec, a, v.path) {
                        out.push((Var { degree: v.degree + 1, s: *s2, t: v.t, path: p }, c));
                    }
                }
            }
            out
        })
        .collect()
}

/// Dense matrix whose columns are the given sparse images, rows indexed by
/// the first-seen order of output keys (or by `row_index` when supplied).
fn assemble<F: Field>(cols: &[Vec<(Var, F)>], row_index: Option<&HashMap<Var, usize>>) -> Matrix<F> {
    let mut own: HashMap<Var, usize> = HashMap::new();
    let mut keys: Vec<Var> = Vec::new();
    if row_index.is_none() {
        for col in cols {
            for (k, _) in col {
                own.entry(*k).or_insert_with(|| {
                    keys.push(*k);
                    keys.len() - 1
                });
            }
        }
    }
    let index = row_index.unwrap_or(&own);
    let mut m = Matrix::zeros(index.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (k, c) in col {
            let r = index[k];
            m[(r, j)] += c.clone();
        }
    }
    m
}

/// Basis of the space of chain maps `X -> Y`.
pub fn chain_map_space<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> Result<Vec<ChainMap<F>>, ComplexError> {
    check_same(x.spec(), y.spec())?;
    let vars = variables(x, y, 0);
    if vars.is_empty() {
        return Ok(Vec::new());
    }
    let system = assemble(&images(x, y, &vars, 0, true), None);
    let sol = solve_linear(&system, None);
    sol.nullspace_basis.iter().map(|v| chain_map_from(x, y, &vars, v)).collect()
}

fn chain_map_from<F: Field>(
    x: &ProjComplex<F>,
    y: &ProjComplex<F>,
    vars: &[Var],
    coeffs: &[F],
) -> Result<ChainMap<F>, ComplexError> {
    let mut comps: BTreeMap<i64, ModuleMorphism<F>> = BTreeMap::new();
    for (v, c) in vars.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let m = comps
            .entry(v.degree)
            .or_insert_with(|| ModuleMorphism::zero(x.term(v.degree).clone(), y.term(v.degree).clone()));
        let cell = m.cell(v.s, v.t).add(&AlgebraElement::term(v.path, c.clone()));
        m.set(v.s, v.t, cell);
    }
    ChainMap::new(x.clone(), y.clone(), comps)
}

/// `dim Hom_K(X, Y)`: chain maps modulo null-homotopic maps.
pub fn homotopy_hom_dim<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> Result<usize, ComplexError> {
    check_same(x.spec(), y.spec())?;
    let vars = variables(x, y, 0);
    if vars.is_empty() {
        return Ok(0);
    }
    let condition = assemble(&images(x, y, &vars, 0, true), None);
    let cycles = vars.len() - condition.rank();
    let hvars = variables(x, y, 1);
    if hvars.is_empty() {
        return Ok(cycles);
    }
    let index: HashMap<Var, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let boundaries = assemble(&images(x, y, &hvars, 1, false), Some(&index)).rank();
    Ok(cycles - boundaries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquivalenceStatus {
    Equivalent,
    Distinct,
    Undetermined,
}

/// First degree where the minimal forms carry different summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistinctCertificate {
    pub degree: i64,
    pub left: Vec<Vertex>,
    pub right: Vec<Vertex>,
}

#[derive(Debug, Clone)]
pub struct EquivalenceVerdict<F: Field> {
    pub status: EquivalenceStatus,
    /// Degreewise-invertible chain map between the minimal forms.
    pub witness: Option<ChainMap<F>>,
    pub certificate: Option<DistinctCertificate>,
    /// Overall shift `m` with `X[m] ≃ Y` when equivalence was tested up to shift.
    pub shift: i64,
}

impl<F: Field> EquivalenceVerdict<F> {
    pub fn is_equivalent(&self) -> bool {
        self.status == EquivalenceStatus::Equivalent
    }

    /// Re-checks the attached evidence from scratch.
    pub fn reverify(&self) -> bool {
        match self.status {
            EquivalenceStatus::Equivalent => match &self.witness {
                Some(w) => is_isomorphism(w),
                None => false,
            },
            EquivalenceStatus::Distinct => self.certificate.as_ref().is_some_and(|c| c.left != c.right),
            EquivalenceStatus::Undetermined => true,
        }
    }
}

/// Summand-multiset comparison of two minimal complexes.
pub fn compare_multisets<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> Option<DistinctCertificate> {
    let (mx, my) = (x.summand_multisets(), y.summand_multisets());
    let degrees: std::collections::BTreeSet<i64> = mx.keys().chain(my.keys()).copied().collect();
    degrees.into_iter().find_map(|k| {
        let (l, r) = (mx.get(&k).cloned().unwrap_or_default(), my.get(&k).cloned().unwrap_or_default());
        (l != r).then_some(DistinctCertificate { degree: k, left: l, right: r })
    })
}

/// A chain map that validates and whose every component is invertible.
///
/// Invertibility is read off the idempotent coefficients: modulo the radical a
/// map of projectives is a block matrix over the field, and by Nakayama's lemma
/// it is invertible exactly when that matrix is.
pub fn is_isomorphism<F: Field>(f: &ChainMap<F>) -> bool {
    if f.validate().is_err() {
        return false;
    }
    let spec = f.source().spec();
    let degrees: Vec<i64> = f.source().degrees().chain(f.target().degrees()).collect();
    degrees.into_iter().all(|k| {
        let c = f.component(k);
        let (src, tgt) = (c.source(), c.target());
        if src.multiset() != tgt.multiset() {
            return false;
        }
        let mut top = Matrix::zeros(src.len(), tgt.len());
        for (s, t, e) in c.cells() {
            if src.summands[s] == tgt.summands[t] {
                top[(s, t)] = e.coeff(spec.idempotent(src.summands[s]));
            }
        }
        top.rank() == src.len()
    })
}

/// Decides `X ≃ Y` in the homotopy category. `Distinct` is certified by the
/// Krull-Schmidt invariant of the minimal forms; `Equivalent` by an explicit
/// isomorphism between them found among `trials` random chain maps.
pub fn homotopy_equivalent<F: Field>(
    x: &ProjComplex<F>,
    y: &ProjComplex<F>,
    trials: usize,
    seed: u64,
) -> Result<EquivalenceVerdict<F>, ComplexError> {
    check_same(x.spec(), y.spec())?;
    equivalent_minimal(&minimize(x), &minimize(y), trials, seed)
}

/// As [`homotopy_equivalent`], for inputs that are already minimal.
pub fn equivalent_minimal<F: Field>(
    x: &ProjComplex<F>,
    y: &ProjComplex<F>,
    trials: usize,
    seed: u64,
) -> Result<EquivalenceVerdict<F>, ComplexError> {
    check_same(x.spec(), y.spec())?;
    if let Some(cert) = compare_multisets(x, y) {
        return Ok(EquivalenceVerdict {
            status: EquivalenceStatus::Distinct,
            witness: None,
            certificate: Some(cert),
            shift: 0,
        });
    }
    if x.is_zero() {
        return Ok(EquivalenceVerdict {
            status: EquivalenceStatus::Equivalent,
            witness: Some(ChainMap::zero(x.clone(), y.clone())),
            certificate: None,
            shift: 0,
        });
    }
    // Fast path: identical complexes.
    if x == y {
        return Ok(EquivalenceVerdict {
            status: EquivalenceStatus::Equivalent,
            witness: Some(ChainMap::identity(x)),
            certificate: None,
            shift: 0,
        });
    }
    let basis = chain_map_space(x, y)?;
    if !basis.is_empty() {
        for trial in 0..trials {
            let coeffs: Vec<F> = seeded_random_vector(split_seed(seed, trial as u64), basis.len());
            let mut f = ChainMap::zero(x.clone(), y.clone());
            for (b, c) in basis.iter().zip(&coeffs) {
                f = f.add(&b.scaled(c));
            }
            if is_isomorphism(&f) {
                return Ok(EquivalenceVerdict {
                    status: EquivalenceStatus::Equivalent,
                    witness: Some(f),
                    certificate: None,
                    shift: 0,
                });
            }
        }
    }
    Ok(EquivalenceVerdict { status: EquivalenceStatus::Undetermined, witness: None, certificate: None, shift: 0 })
}

/// Tests `X[m] ≃ Y` where `m` aligns the lowest degrees of the minimal forms,
/// and reports `m` in the verdict.
pub fn equivalent_up_to_shift<F: Field>(
    x: &ProjComplex<F>,
    y: &ProjComplex<F>,
    trials: usize,
    seed: u64,
) -> Result<EquivalenceVerdict<F>, ComplexError> {
    check_same(x.spec(), y.spec())?;
    let (mx, my) = (minimize(x), minimize(y));
    let shift = match (mx.degree_range(), my.degree_range()) {
        (Some((a, _)), Some((b, _))) => b - a,
        _ => 0,
    };
    let mut v = equivalent_minimal(&mx.shift(shift), &my, trials, seed)?;
    v.shift = shift;
    Ok(v)
}

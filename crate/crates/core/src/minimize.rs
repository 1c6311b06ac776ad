//! Gaussian elimination of isomorphism components.
//!
//! A differential cell `P_v -> P_v` whose idempotent coefficient is nonzero is
//! invertible (each `e_v A e_v` is local). Cancelling it removes both summands
//! and replaces the remaining cells `a_cd` of that differential by
//! `a_cd - a_ct · φ⁻¹ · a_sd`, where `φ = a_st` is the pivot. The incoming
//! differential loses column `s` and the outgoing one loses row `t`.

use std::collections::{BTreeMap, BTreeSet};

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::algebra::{AlgebraElement, AlgebraSpec, ModuleMorphism, ProjModule, Vertex};
use crate::complex::ProjComplex;
use crate::scalar::Field;

/// Order in which cancellable cells are eliminated. The result is unique up
/// to isomorphism whatever the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotStrategy {
    /// Fewest fill-in updates first.
    #[default]
    Markowitz,
    /// First candidate in degree/row/column order.
    FirstFound,
    /// Uniformly random candidate from a seeded generator.
    Seeded(u64),
}

struct Work<'a, F> {
    spec: &'a AlgebraSpec,
    lo: i64,
    verts: Vec<Vec<Vertex>>,
    alive: Vec<Vec<bool>>,
    /// `rows[i][s]`: cells of `d_{lo+i}` out of summand `s`.
    rows: Vec<Vec<BTreeMap<usize, AlgebraElement<F>>>>,
    /// `cols[i][t]`: rows of `d_{lo+i}` with a nonzero cell into summand `t` of degree `lo+i-1`.
    cols: Vec<Vec<BTreeSet<usize>>>,
}

impl<'a, F: Field> Work<'a, F> {
    fn new(x: &'a ProjComplex<F>) -> Self {
        let spec = x.spec();
        let (lo, hi) = x.degree_range().unwrap_or((0, -1));
        let mut w = Work { spec, lo, verts: Vec::new(), alive: Vec::new(), rows: Vec::new(), cols: Vec::new() };
        for k in lo..=hi {
            let d = x.diff(k);
            let mut rows = vec![BTreeMap::new(); x.term(k).len()];
            let mut cols = vec![BTreeSet::new(); x.term(k - 1).len()];
            for (s, t, e) in d.cells() {
                rows[s].insert(t, e.clone());
                cols[t].insert(s);
            }
            w.verts.push(x.term(k).summands.clone());
            w.alive.push(vec![true; x.term(k).len()]);
            w.rows.push(rows);
            w.cols.push(cols);
        }
        w
    }

    fn set(&mut self, i: usize, s: usize, t: usize, e: AlgebraElement<F>) {
        if e.is_zero() {
            self.rows[i][s].remove(&t);
            self.cols[i][t].remove(&s);
        } else {
            self.rows[i][s].insert(t, e);
            self.cols[i][t].insert(s);
        }
    }

    fn candidates(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 1..self.rows.len() {
            for (s, row) in self.rows[i].iter().enumerate() {
                let v = self.verts[i][s];
                for (&t, e) in row {
                    if self.verts[i - 1][t] == v && !e.coeff(self.spec.idempotent(v)).is_zero() {
                        let cost = (row.len() - 1) * (self.cols[i][t].len() - 1);
                        out.push((i, s, t, cost));
                    }
                }
            }
        }
        out
    }

    fn eliminate(&mut self, i: usize, s: usize, t: usize) {
        let v = self.verts[i][s];
        let phi = self.rows[i][s][&t].clone();
        let phi_inv = self.spec.local_inverse(v, &phi).expect("pivot is invertible");
        let col: Vec<(usize, AlgebraElement<F>)> = self.cols[i][t]
            .iter()
            .filter(|&&c| c != s)
            .map(|&c| (c, self.spec.multiply(&self.rows[i][c][&t], &phi_inv)))
            .collect();
        let row: Vec<(usize, AlgebraElement<F>)> =
            self.rows[i][s].iter().filter(|(d, _)| **d != t).map(|(d, e)| (*d, e.clone())).collect();
        for (c, left) in &col {
            for (d, right) in &row {
                let update = self.spec.multiply(left, right);
                if update.is_zero() {
                    continue;
                }
                let cur = self.rows[i][*c].get(d).cloned().unwrap_or_else(AlgebraElement::zero);
                self.set(i, *c, *d, cur.sub(&update));
            }
        }
        self.drop_row(i, s);
        self.drop_col(i, t);
        if i + 1 < self.rows.len() {
            self.drop_col(i + 1, s);
        }
        self.drop_row(i - 1, t);
        self.alive[i][s] = false;
        self.alive[i - 1][t] = false;
    }

    fn drop_row(&mut self, i: usize, s: usize) {
        let row = std::mem::take(&mut self.rows[i][s]);
        for t in row.keys() {
            self.cols[i][*t].remove(&s);
        }
    }

    fn drop_col(&mut self, i: usize, t: usize) {
        let col = std::mem::take(&mut self.cols[i][t]);
        for s in col {
            self.rows[i][s].remove(&t);
        }
    }

    fn finish(self, x: &ProjComplex<F>) -> ProjComplex<F> {
        let keep: Vec<Vec<usize>> = self
            .alive
            .iter()
            .map(|a| a.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k).collect())
            .collect();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (i, kept) in keep.iter().enumerate() {
            let k = self.lo + i as i64;
            let src = ProjModule::new(kept.iter().map(|&s| self.verts[i][s]).collect());
            terms.insert(k, src.summands.clone());
            if i == 0 {
                continue;
            }
            let below = &keep[i - 1];
            let tgt = ProjModule::new(below.iter().map(|&t| self.verts[i - 1][t]).collect());
            let pos: BTreeMap<usize, usize> = below.iter().enumerate().map(|(new, &old)| (old, new)).collect();
            let mut d = ModuleMorphism::zero(src, tgt);
            for (new_s, &s) in kept.iter().enumerate() {
                for (t, e) in &self.rows[i][s] {
                    d.set(new_s, pos[t], e.clone());
                }
            }
            diffs.insert(k, d);
        }
        ProjComplex::new(x.algebra().clone(), terms, diffs).expect("minimized shapes are consistent")
    }
}

/// The minimal complex homotopy equivalent to `x`.
pub fn minimize<F: Field>(x: &ProjComplex<F>) -> ProjComplex<F> {
    minimize_with(x, PivotStrategy::Markowitz)
}

pub fn minimize_with<F: Field>(x: &ProjComplex<F>, strategy: PivotStrategy) -> ProjComplex<F> {
    let mut w = Work::new(x);
    let mut rng = match strategy {
        PivotStrategy::Seeded(seed) => Some(SplitMix64::seed_from_u64(seed)),
        _ => None,
    };
    loop {
        let cands = w.candidates();
        if cands.is_empty() {
            break;
        }
        let pick = match strategy {
            PivotStrategy::FirstFound => cands[0],
            PivotStrategy::Markowitz => *cands.iter().min_by_key(|c| c.3).expect("nonempty"),
            PivotStrategy::Seeded(_) => {
                let r = rng.as_mut().expect("seeded").next_u64();
                cands[(r % cands.len() as u64) as usize]
            }
        };
        w.eliminate(pick.0, pick.1, pick.2);
    }
    w.finish(x)
}

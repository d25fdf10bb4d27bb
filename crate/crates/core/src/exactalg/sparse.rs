//! Presentation shrinking by elimination of generators along unit pivots.
//!
//! Tensor products over category rings produce presentations with thousands
//! of generators, almost all of which can be eliminated using relations with
//! a unit coefficient. What remains goes to the dense algorithms.

use std::collections::{BTreeMap, BTreeSet};

use super::matrix::Matrix;
use super::module::FPModule;
use super::ring::Ring;

pub type SparseVec<R> = BTreeMap<usize, R>;

/// Result of eliminating generators from `R^n / span(relations)`.
#[derive(Clone, Debug)]
pub struct Shrunk<R: Ring> {
    /// Original indices of the surviving generators.
    pub kept: Vec<usize>,
    /// Presentation on the surviving generators.
    pub module: FPModule<R>,
    /// For each original generator, its class in surviving coordinates.
    pub express: Vec<SparseVec<R>>,
}

impl<R: Ring> Shrunk<R> {
    /// Surviving coordinates of an element given in original coordinates.
    pub fn to_new(&self, v: &SparseVec<R>) -> Vec<R> {
        let mut out = vec![R::zero(); self.kept.len()];
        for (g, c) in v {
            for (k, e) in &self.express[*g] {
                out[*k].add_mul_assign(c, e);
            }
        }
        out
    }

    /// Dense `kept x n` matrix of the quotient map.
    pub fn to_new_matrix(&self) -> Matrix<R> {
        let n = self.express.len();
        let mut m = Matrix::zeros(self.kept.len(), n);
        for (g, e) in self.express.iter().enumerate() {
            for (k, c) in e {
                m[(*k, g)] = c.clone();
            }
        }
        m
    }

    /// Dense `n x kept` matrix sending surviving generator `k` to `e_{kept[k]}`.
    pub fn to_old_matrix(&self) -> Matrix<R> {
        let n = self.express.len();
        let mut m = Matrix::zeros(n, self.kept.len());
        for (k, &g) in self.kept.iter().enumerate() {
            m[(g, k)] = R::one();
        }
        m
    }
}

fn axpy<R: Ring>(dst: &mut SparseVec<R>, q: &R, src: &SparseVec<R>) {
    for (k, v) in src {
        let e = dst.entry(*k).or_insert_with(R::zero);
        e.add_mul_assign(q, v);
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

/// Eliminates generators of `R^n / span(relations)` along unit pivots.
pub fn shrink<R: Ring>(n: usize, relations: Vec<SparseVec<R>>) -> Shrunk<R> {
    let mut rels: Vec<Option<SparseVec<R>>> = relations
        .into_iter()
        .map(|r| {
            let r: SparseVec<R> = r.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            (!r.is_empty()).then_some(r)
        })
        .collect();
    let mut occurs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (ri, r) in rels.iter().enumerate() {
        if let Some(r) = r {
            for g in r.keys() {
                occurs[*g].insert(ri);
            }
        }
    }
    let mut eliminated: Vec<Option<SparseVec<R>>> = vec![None; n];
    let mut order = Vec::new();
    loop {
        // relation with a unit entry, preferring short relations and rare generators
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (ri, r) in rels.iter().enumerate() {
            let Some(r) = r else { continue };
            for (g, c) in r {
                if !c.is_unit() {
                    continue;
                }
                let cost = (r.len() - 1) * (occurs[*g].len() - 1);
                let key = (cost, r.len(), ri, *g);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((_, _, ri, g)) = best else { break };
        let pivot = rels[ri].take().expect("live relation");
        for h in pivot.keys() {
            occurs[*h].remove(&ri);
        }
        let inv = pivot[&g].unit_inverse();
        // g = -inv * sum_{h != g} c_h h
        let mut expr: SparseVec<R> = SparseVec::new();
        for (h, c) in &pivot {
            if *h != g {
                expr.insert(*h, c.mul(&inv).neg());
            }
        }
        let users: Vec<usize> = occurs[g].iter().copied().collect();
        for rj in users {
            let r = rels[rj].as_mut().expect("live relation");
            let c = r.remove(&g).expect("occurrence index");
            let before: BTreeSet<usize> = r.keys().copied().collect();
            axpy(r, &c, &expr);
            for h in r.keys() {
                if !before.contains(h) {
                    occurs[*h].insert(rj);
                }
            }
            for h in before {
                if !r.contains_key(&h) {
                    occurs[h].remove(&rj);
                }
            }
            if r.is_empty() {
                rels[rj] = None;
            }
        }
        occurs[g].clear();
        eliminated[g] = Some(expr);
        order.push(g);
    }
    let kept: Vec<usize> = (0..n).filter(|g| eliminated[*g].is_none()).collect();
    let mut position = vec![usize::MAX; n];
    for (k, g) in kept.iter().enumerate() {
        position[*g] = k;
    }
    let mut express: Vec<SparseVec<R>> = vec![SparseVec::new(); n];
    for (k, g) in kept.iter().enumerate() {
        express[*g].insert(k, R::one());
    }
    for &g in order.iter().rev() {
        let expr = eliminated[g].as_ref().expect("eliminated");
        let mut out = SparseVec::new();
        for (h, c) in expr {
            let eh = express[*h].clone();
            axpy(&mut out, c, &eh);
        }
        express[g] = out;
    }
    let live: Vec<&SparseVec<R>> = rels.iter().flatten().collect();
    let mut rel = Matrix::zeros(kept.len(), live.len());
    for (j, r) in live.iter().enumerate() {
        for (g, c) in r.iter() {
            rel[(position[*g], j)] = c.clone();
        }
    }
    Shrunk {
        kept,
        module: FPModule::new(rel),
        express,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Integer;

    fn sv(entries: &[(usize, i64)]) -> SparseVec<Integer> {
        entries
            .iter()
            .map(|(k, v)| (*k, Integer::from(*v)))
            .collect()
    }

    #[test]
    fn shrinking_preserves_the_module() {
        // generators a, b, c, d with a = b + c, 2c = 0, b - d = 0, 3d = 0
        let rels = vec![
            sv(&[(0, 1), (1, -1), (2, -1)]),
            sv(&[(2, 2)]),
            sv(&[(1, 1), (3, -1)]),
            sv(&[(3, 3)]),
        ];
        let dense = {
            let cols: Vec<Vec<Integer>> = rels
                .iter()
                .map(|r| {
                    let mut c = vec![Integer::ZERO; 4];
                    for (k, v) in r {
                        c[*k] = v.clone();
                    }
                    c
                })
                .collect();
            FPModule::new(Matrix::from_columns(4, &cols))
        };
        let s = shrink(4, rels);
        assert!(s.kept.len() < 4);
        assert!(s.module.is_isomorphic(&dense));
        // the quotient map kills every relation
        let q = s.to_new_matrix();
        let image = q.mul(dense.relations());
        for j in 0..image.cols() {
            assert!(s.module.element_is_zero(&image.column(j)));
        }
    }
}

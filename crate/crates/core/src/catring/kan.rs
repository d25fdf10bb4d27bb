use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::tensor::sparse_column;
use super::CatRingError;
use crate::cats::{CatFunctor, MorId, ObjId};
use crate::exactalg::sparse::{shrink, Shrunk, SparseVec};
use crate::exactalg::{FPModule, Matrix, Ring, Subobject};
use crate::funrep::{precompose, FunctorRep, NatTrans};

/// The right module `Z(f, b)` over the category ring of the source of `f`:
/// free on pairs `(β, a)` with `β: f(a) → b`.
#[derive(Clone, Debug)]
pub struct HetModule {
    pub b: ObjId,
    pub basis: Vec<(MorId, ObjId)>,
    index: HashMap<(MorId, ObjId), usize>,
}

impl HetModule {
    pub fn new(f: &CatFunctor, b: ObjId) -> Self {
        let mut basis = Vec::new();
        for a in 0..f.source.object_count() {
            for &beta in f.target.hom(f.apply_obj(a), b) {
                basis.push((beta, a));
            }
        }
        let index = basis.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        HetModule { b, basis, index }
    }

    pub fn position(&self, beta: MorId, a: ObjId) -> Option<usize> {
        self.index.get(&(beta, a)).copied()
    }

    /// `(β, a)·α` for `α: a₁ → a₂`: zero unless `a = a₂`, else `(β∘f(α), a₁)`.
    pub fn act(&self, f: &CatFunctor, i: usize, alpha: MorId) -> Option<usize> {
        let (beta, a) = self.basis[i];
        if f.source.target(alpha) != a {
            return None;
        }
        let moved = f.target.compose(beta, f.apply(alpha));
        self.position(moved, f.source.source(alpha))
    }
}

/// `Ind_f(g)` with the presentations used to build it.
#[derive(Clone, Debug)]
pub struct Induction<R: Ring> {
    pub functor: FunctorRep<R>,
    pub het: Vec<HetModule>,
    along: CatFunctor,
    offsets: Vec<Vec<usize>>,
    shrunk: Vec<Shrunk<R>>,
}

fn check_functor<R: Ring>(f: &CatFunctor, g: &FunctorRep<R>) -> Result<(), CatRingError> {
    if f.semi {
        return Err(CatRingError::Unsupported(
            "induction along a semi-functor".into(),
        ));
    }
    if g.category().name() != f.source.name()
        || g.category().morphism_count() != f.source.morphism_count()
    {
        return Err(CatRingError::Unsupported(format!(
            "{} is not defined on {}",
            g.category().name(),
            f.source.name()
        )));
    }
    if let Some(a) = (0..f.source.object_count()).find(|&a| !g.in_window(a)) {
        return Err(CatRingError::Unsupported(format!(
            "object {a} is outside the window of the functor"
        )));
    }
    Ok(())
}

/// `Ind_f(g)(b) = Z(f, b) ⊗_{ZA} g(ob A)`, presented on pairs `((β, a), x)`
/// modulo the relations of `g(a)` and `(β∘f(α), a₁) ⊗ x = (β, a₂) ⊗ g(α)x`.
pub fn induce_along<R: Ring>(
    f: &CatFunctor,
    g: &FunctorRep<R>,
) -> Result<Induction<R>, CatRingError> {
    check_functor(f, g)?;
    let src = &f.source;
    let dst = f.target.clone();
    let width = |a: ObjId| g.value(a).expect("window").generators();
    let built: Vec<(HetModule, Vec<usize>, Shrunk<R>)> = (0..dst.object_count())
        .into_par_iter()
        .map(|b| {
            let het = HetModule::new(f, b);
            let mut offsets = Vec::with_capacity(het.basis.len());
            let mut total = 0;
            for &(_, a) in &het.basis {
                offsets.push(total);
                total += width(a);
            }
            let mut relations: Vec<SparseVec<R>> = Vec::new();
            for (i, &(_, a)) in het.basis.iter().enumerate() {
                let rel = g.value(a).expect("window").relations();
                for j in 0..rel.cols() {
                    relations.push(sparse_column(rel, j, offsets[i]));
                }
            }
            for alpha in 0..src.morphism_count() {
                if src.is_identity(alpha) {
                    continue;
                }
                let ga = g.matrix(alpha).expect("window");
                for i in 0..het.basis.len() {
                    let Some(moved) = het.act(f, i, alpha) else {
                        continue;
                    };
                    for x in 0..ga.cols() {
                        let mut r = sparse_column(ga, x, offsets[i]);
                        for v in r.values_mut() {
                            *v = v.neg();
                        }
                        let e = r.entry(offsets[moved] + x).or_insert_with(R::zero);
                        *e = e.add(&R::one());
                        relations.push(r);
                    }
                }
            }
            (het, offsets, shrink(total, relations))
        })
        .collect();
    let mut het = Vec::with_capacity(built.len());
    let mut offsets = Vec::with_capacity(built.len());
    let mut shrunk = Vec::with_capacity(built.len());
    for (h, o, s) in built {
        het.push(h);
        offsets.push(o);
        shrunk.push(s);
    }
    let values: Vec<Option<FPModule<R>>> = shrunk.iter().map(|s| Some(s.module.clone())).collect();
    let maps: Vec<Option<Matrix<R>>> = (0..dst.morphism_count())
        .into_par_iter()
        .map(|gamma| {
            let (b, c) = (dst.source(gamma), dst.target(gamma));
            let cols: Vec<Vec<R>> = shrunk[b]
                .kept
                .iter()
                .map(|&k| {
                    let i = owner(&offsets[b], k);
                    let (beta, a) = het[b].basis[i];
                    let j = het[c].position(dst.compose(gamma, beta), a).expect("pair");
                    let v = SparseVec::from([(offsets[c][j] + k - offsets[b][i], R::one())]);
                    shrunk[c].to_new(&v)
                })
                .collect();
            Some(Matrix::from_columns(shrunk[c].kept.len(), &cols))
        })
        .collect();
    let functor = FunctorRep::from_matrices(dst, values, maps, false)?;
    Ok(Induction {
        functor,
        het,
        along: f.clone(),
        offsets,
        shrunk,
    })
}

impl<R: Ring> Induction<R> {
    /// The element `(β, a) ⊗ x` of `Ind_f(g)(b)`.
    pub fn element(&self, b: ObjId, beta: MorId, a: ObjId, x: usize) -> Option<Vec<R>> {
        let i = self.het[b].position(beta, a)?;
        Some(self.shrunk[b].to_new(&SparseVec::from([(self.offsets[b][i] + x, R::one())])))
    }

    /// The unit `g ⇒ Res_f Ind_f(g)`, `x ↦ (id, a) ⊗ x`.
    pub fn unit(&self, g: &FunctorRep<R>) -> Result<NatTrans<R>, CatRingError> {
        let f = &self.along;
        let restricted = restrict_along(f, &self.functor)?;
        let cat = g.category().clone();
        let target = FunctorRep::from_matrices(
            cat.clone(),
            restricted.values().to_vec(),
            (0..cat.morphism_count())
                .map(|m| restricted.matrix(m).cloned())
                .collect(),
            false,
        )?;
        let components = (0..cat.object_count())
            .map(|a| {
                let b = f.apply_obj(a);
                let id = f.target.identity(b);
                let cols: Vec<Vec<R>> = (0..g.value(a).expect("window").generators())
                    .map(|x| self.element(b, id, a, x).expect("identity pair"))
                    .collect();
                Some(Matrix::from_columns(self.shrunk[b].kept.len(), &cols))
            })
            .collect();
        Ok(NatTrans::new(
            Arc::new(g.clone()),
            Arc::new(target),
            components,
        )?)
    }
}

/// The block containing generator `k`: the last block starting at or before
/// `k`, which is never empty since an empty block shares its offset with the
/// next one.
fn owner(offsets: &[usize], k: usize) -> usize {
    offsets.partition_point(|&o| o <= k) - 1
}

/// `Res_f(T) = T ∘ f`.
pub fn restrict_along<R: Ring>(
    f: &CatFunctor,
    t: &FunctorRep<R>,
) -> Result<FunctorRep<R>, CatRingError> {
    Ok(precompose(t, f)?)
}

/// `ZB ⊗_{ZA} g(ob A)` as a left module over the category ring of `B`,
/// computed from the ring-level tensor product.
#[derive(Clone, Debug)]
pub struct ModuleInduction<R: Ring> {
    pub module: FPModule<R>,
    along: CatFunctor,
    offsets: Vec<usize>,
    shrunk: Shrunk<R>,
    /// `(β, a)` for each block of generators.
    blocks: Vec<(MorId, ObjId)>,
}

/// Induction of modules over category rings; requires `f` injective on objects.
pub fn module_induction<R: Ring>(
    f: &CatFunctor,
    g: &FunctorRep<R>,
) -> Result<ModuleInduction<R>, CatRingError> {
    check_functor(f, g)?;
    let src = &f.source;
    let dst = &f.target;
    let mut seen = vec![false; dst.object_count()];
    for a in 0..src.object_count() {
        let b = f.apply_obj(a);
        if std::mem::replace(&mut seen[b], true) {
            return Err(CatRingError::Unsupported(
                "module induction needs a functor injective on objects".into(),
            ));
        }
    }
    let mut blocks = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    let mut position = HashMap::new();
    for beta in 0..dst.morphism_count() {
        for a in 0..src.object_count() {
            position.insert((beta, a), blocks.len());
            blocks.push((beta, a));
            offsets.push(total);
            total += g.value(a).expect("window").generators();
        }
    }
    let mut relations: Vec<SparseVec<R>> = Vec::new();
    for (i, &(beta, a)) in blocks.iter().enumerate() {
        let rel = g.value(a).expect("window").relations();
        for j in 0..rel.cols() {
            relations.push(sparse_column(rel, j, offsets[i]));
        }
        // β ⊗ α·x = (β·f(α)) ⊗ x for α out of a, identities included
        for alpha in (0..src.morphism_count()).filter(|&al| src.source(al) == a) {
            let ga = g.matrix(alpha).expect("window");
            let to = position[&(beta, src.target(alpha))];
            let moved = dst
                .try_compose(beta, f.apply(alpha))
                .map(|h| offsets[position[&(h, a)]]);
            for x in 0..ga.cols() {
                let mut r = sparse_column(ga, x, offsets[to]);
                if let Some(m) = moved {
                    let e = r.entry(m + x).or_insert_with(R::zero);
                    *e = e.sub(&R::one());
                }
                relations.push(r);
            }
        }
    }
    let shrunk = shrink(total, relations);
    Ok(ModuleInduction {
        module: shrunk.module.clone(),
        along: f.clone(),
        offsets,
        shrunk,
        blocks,
    })
}

impl<R: Ring> ModuleInduction<R> {
    /// Matrix of left multiplication by the basis element `γ`.
    pub fn act(&self, gamma: MorId) -> Matrix<R> {
        let dst = &self.along.target;
        let src_objects = self.along.source.object_count();
        let cols: Vec<Vec<R>> = self
            .shrunk
            .kept
            .iter()
            .map(|&k| {
                let i = owner(&self.offsets, k);
                let (beta, a) = self.blocks[i];
                match dst.try_compose(gamma, beta) {
                    Some(h) => {
                        let j = h * src_objects + a;
                        let v =
                            SparseVec::from([(self.offsets[j] + k - self.offsets[i], R::one())]);
                        self.shrunk.to_new(&v)
                    }
                    None => vec![R::zero(); self.shrunk.kept.len()],
                }
            })
            .collect();
        Matrix::from_columns(self.shrunk.kept.len(), &cols)
    }

    /// The summand `e_b · (ZB ⊗ g)` cut out by the identity of `b`.
    pub fn summand(&self, b: ObjId) -> Result<Subobject<R>, CatRingError> {
        let e = self.act(self.along.target.identity(b));
        Ok(Subobject::new(self.module.clone(), e)?)
    }
}

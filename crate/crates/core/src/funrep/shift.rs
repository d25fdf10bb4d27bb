use std::sync::Arc;

use super::{FunRepError, FunctorRep, NatTrans};
use crate::cats::{CatFunctor, FinCat, MorId, ObjId, StabiliserStructure};
use crate::exactalg::{Matrix, ModuleHom, Ring, Simplified, Subobject};

fn same_category(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.name() == b.name()
            && a.object_count() == b.object_count()
            && a.morphism_count() == b.morphism_count()
            && a.morphisms() == b.morphisms())
}

/// Pulls `t` back along partial object and morphism maps out of `cat`.
/// Objects whose image is undefined or outside `t`'s window leave the window.
pub(crate) fn pull_back<R: Ring>(
    t: &FunctorRep<R>,
    cat: Arc<FinCat>,
    obj_map: impl Fn(ObjId) -> Option<ObjId>,
    mor_map: impl Fn(MorId) -> Option<MorId>,
    semi: bool,
) -> Result<FunctorRep<R>, FunRepError> {
    let values = (0..cat.object_count())
        .map(|c| obj_map(c).and_then(|d| t.value(d).cloned()))
        .collect();
    let map = |f: MorId| {
        let g = mor_map(f).expect("morphism between window objects has an image");
        t.matrix(g).expect("image inside the window").clone()
    };
    FunctorRep::from_fn(cat.clone(), values, semi || t.is_semi(), map)
}

/// `T∘F`. Every object of the source category must land in `T`'s window.
pub fn precompose<R: Ring>(
    t: &FunctorRep<R>,
    f: &CatFunctor,
) -> Result<FunctorRep<R>, FunRepError> {
    if !same_category(&f.target, t.category()) {
        return Err(FunRepError::CategoryMismatch(
            f.target.name().into(),
            t.category().name().into(),
        ));
    }
    if let Some(c) = (0..f.source.object_count()).find(|&c| !t.in_window(f.apply_obj(c))) {
        return Err(FunRepError::Window(f.apply_obj(c)));
    }
    pull_back(
        t,
        f.source.clone(),
        |c| Some(f.apply_obj(c)),
        |m| Some(f.apply(m)),
        f.semi,
    )
}

/// `T∘s_i`, defined where the shift stays inside `T`'s window.
pub fn shifted_functor<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    index: usize,
) -> Result<FunctorRep<R>, FunRepError> {
    check_host(t, st)?;
    let shift = st.shift(index);
    pull_back(
        t,
        t.category().clone(),
        |c| shift.obj_map[c],
        |m| shift.mor_map[m],
        false,
    )
}

fn check_host<R: Ring>(t: &FunctorRep<R>, st: &StabiliserStructure) -> Result<(), FunRepError> {
    if same_category(st.host(), t.category()) {
        Ok(())
    } else {
        Err(FunRepError::CategoryMismatch(
            st.host().name().into(),
            t.category().name().into(),
        ))
    }
}

/// The transformation `Tι_i: T → T∘s_i`.
pub fn stab_nat_trans<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    index: usize,
) -> Result<NatTrans<R>, FunRepError> {
    let ts = shifted_functor(t, st, index)?;
    if ts.window().is_empty() {
        return Err(FunRepError::Unsupported(
            "the shift leaves the window".into(),
        ));
    }
    let shift = st.shift(index);
    let components = (0..t.category().object_count())
        .map(|n| {
            ts.value(n)?;
            t.matrix(shift.iota[n]?).cloned()
        })
        .collect();
    NatTrans::new(Arc::new(t.clone()), Arc::new(ts), components)
}

/// `ΔT = coker(Tι_i)` together with the kernels of `Tι_i`.
#[derive(Clone, Debug)]
pub struct Delta<R: Ring> {
    pub functor: FunctorRep<R>,
    /// `ker(T(n) → T(s_i n))` as a subobject of `T(n)`.
    pub kernels: Vec<Option<Subobject<R>>>,
    /// Projection `T(s_i n) → ΔT(n)`.
    pub projections: Vec<Option<Matrix<R>>>,
}

pub fn delta_functor<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    index: usize,
) -> Result<Delta<R>, FunRepError> {
    let tr = stab_nat_trans(t, st, index)?;
    let ts = &tr.target;
    let count = t.category().object_count();
    let mut kernels = vec![None; count];
    let mut cokernels: Vec<Option<Simplified<R>>> = vec![None; count];
    for n in 0..count {
        let Some(h) = tr.component(n) else { continue };
        kernels[n] = Some(h.kernel_subobject());
        cokernels[n] = Some(h.cokernel().simplify());
    }
    let values = cokernels
        .iter()
        .map(|c| c.as_ref().map(|c| c.module.clone()))
        .collect();
    let map = |f: MorId| {
        let cat = t.category();
        let (a, b) = (cat.source(f), cat.target(f));
        let (ca, cb) = (
            cokernels[a].as_ref().expect("window"),
            cokernels[b].as_ref().expect("window"),
        );
        cb.to_new.mul(ts.matrix(f).expect("window")).mul(&ca.to_old)
    };
    let functor = FunctorRep::from_fn(t.category().clone(), values, t.is_semi(), map)?;
    let projections = cokernels
        .iter()
        .map(|c| c.as_ref().map(|c| c.to_new.clone()))
        .collect();
    Ok(Delta {
        functor,
        kernels,
        projections,
    })
}

/// The identity transformation on the window.
pub fn identity_trans<R: Ring>(t: &FunctorRep<R>) -> NatTrans<R> {
    let arc = Arc::new(t.clone());
    let components = t
        .values()
        .iter()
        .map(|v| v.as_ref().map(|v| Matrix::identity(v.generators())))
        .collect();
    NatTrans {
        source: arc.clone(),
        target: arc,
        components,
    }
}

/// Objectwise isomorphism check by invariant factors.
pub fn values_isomorphic<R: Ring>(a: &FunctorRep<R>, b: &FunctorRep<R>) -> bool {
    a.values().len() == b.values().len()
        && a.values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| match (x, y) {
                (Some(x), Some(y)) => x.is_isomorphic(y),
                (None, None) => true,
                _ => false,
            })
}

/// Whether `h` is an isomorphism of modules.
pub fn is_iso<R: Ring>(h: &ModuleHom<R>) -> bool {
    h.is_injective() && h.is_surjective()
}

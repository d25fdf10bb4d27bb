use rayon::prelude::*;

use super::{induce_monoid, rational_trace, CatRingError, FiniteMonoid, InducedModule};
use crate::cats::CatIStructure;
use crate::exactalg::{FPModule, ModuleInvariants, Ring};
use crate::funrep::FunctorRep;
use crate::invariants::cross_effect_functor;

/// `T(s(n))` against `⊕_{k+l=n} Z End(s(n)) ⊗_{Z End(k,l)} T′(k, l)`.
#[derive(Clone, Debug)]
pub struct DecompositionReport<R> {
    pub n: usize,
    pub lhs: ModuleInvariants<R>,
    pub rhs: ModuleInvariants<R>,
    /// `(k, l)` with the invariants of the induced summand.
    pub pieces: Vec<(usize, usize, ModuleInvariants<R>)>,
    pub group_order: usize,
    /// Traces of the automorphisms of `s(n)` on both sides over `Q`.
    pub lhs_character: Vec<R>,
    pub rhs_character: Vec<R>,
}

impl<R: Ring> DecompositionReport<R> {
    pub fn groups_isomorphic(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn characters_agree(&self) -> bool {
        self.lhs_character == self.rhs_character
    }

    pub fn isomorphic(&self) -> bool {
        self.groups_isomorphic() && self.characters_agree()
    }
}

pub fn decomposition_check<R: Ring>(
    t: &FunctorRep<R>,
    st: &CatIStructure,
    n: usize,
) -> Result<DecompositionReport<R>, CatRingError> {
    let tf = cross_effect_functor(t, st, n)?;
    let o = st
        .object(n)
        .ok_or_else(|| CatRingError::Unsupported(format!("object {n} is beyond the category")))?;
    let value = t
        .value(o)
        .ok_or_else(|| CatRingError::Unsupported(format!("object {n} is outside the window")))?;
    let (d, elements) = FiniteMonoid::endomorphisms(&st.host, o);
    let index = |f| elements.iter().position(|&e| e == f).expect("endomorphism");
    let induced: Vec<(usize, usize, InducedModule<R>)> = tf
        .pieces
        .par_iter()
        .filter(|p| p.k + p.l == n)
        .map(|p| {
            let members: Vec<usize> = p.endomorphisms.iter().map(|&f| index(f)).collect();
            Ok((
                p.k,
                p.l,
                induce_monoid(&d, &members, &p.module, &p.actions)?,
            ))
        })
        .collect::<Result<_, CatRingError>>()?;
    let rhs = induced
        .iter()
        .fold(FPModule::zero(), |acc, (_, _, m)| acc.direct_sum(&m.module));
    let autos = st.host.automorphisms(o);
    let lhs_character = autos
        .par_iter()
        .map(|&g| rational_trace(value, t.matrix(g).expect("window")))
        .collect();
    let rhs_character = autos
        .par_iter()
        .map(|&g| {
            let e = index(g);
            induced.iter().fold(R::zero(), |acc, (_, _, m)| {
                acc.add(&rational_trace(&m.module, &m.act(e)))
            })
        })
        .collect();
    Ok(DecompositionReport {
        n,
        lhs: value.invariants().clone(),
        rhs: rhs.invariants().clone(),
        pieces: induced
            .iter()
            .map(|(k, l, m)| (*k, *l, m.module.invariants().clone()))
            .collect(),
        group_order: autos.len(),
        lhs_character,
        rhs_character,
    })
}

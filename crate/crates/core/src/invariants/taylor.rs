use std::sync::Arc;

use super::{cross_effect, CrossFlavor, HeightMode, HeightReport, HeightWitness, InvariantError};
use crate::cats::{
    build_category, BasedMap, CatFunctor, CategorySpec, FinCat, MorId, ObjId, Payload,
    ShiftedPartition, DEFAULT_BUDGET,
};
use crate::exactalg::{FPModule, Matrix, Ring, Subobject};
use crate::funrep::{precompose, FunctorRep};

/// Coproducts `c₁ + ⋯ + cₙ` in pointed sets, organised as a functor out of
/// `Kₙ`; with equal summands it also carries the fold map.
#[derive(Clone, Debug)]
pub struct CoproductContext {
    pub host: Arc<FinCat>,
    /// Sizes of the summands `[c₁], …, [cₙ]`.
    pub summands: Vec<usize>,
    /// `S ↦ ∨_{i∈S} [cᵢ]`, collapsing the summands outside `S`.
    pub cube: CatFunctor,
    /// `[c] ∨ ⋯ ∨ [c] → [c]` when all summands are equal.
    pub fold: Option<MorId>,
}

fn offsets(summands: &[usize], mask: u32) -> Vec<Option<usize>> {
    let mut next = 0;
    summands
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            (mask >> i & 1 == 1).then(|| {
                let at = next;
                next += c;
                at
            })
        })
        .collect()
}

impl CoproductContext {
    pub fn new(host: Arc<FinCat>, summands: Vec<usize>) -> Result<Self, InvariantError> {
        let Some(CategorySpec::Pointed { max }) = host.spec() else {
            return Err(InvariantError::Context(format!(
                "coproducts are built on pointed sets, not {}",
                host.name()
            )));
        };
        let total: usize = summands.iter().sum();
        if total > *max {
            return Err(InvariantError::Context(format!(
                "{summands:?} needs [{total}] but the category stops at [{max}]"
            )));
        }
        let n = summands.len();
        let poset = Arc::new(build_category(
            &CategorySpec::SubsetPosetOp { n },
            DEFAULT_BUDGET,
        )?);
        let grade = |mask: u32| -> usize {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| summands[i])
                .sum()
        };
        let obj_map: Vec<ObjId> = (0..poset.object_count())
            .map(|mask| host.object_of_grade(grade(mask as u32)).expect("in range"))
            .collect();
        let mut mor_map = Vec::with_capacity(poset.morphism_count());
        for m in poset.morphisms() {
            let Payload::Inclusion { lower, upper } = m.payload else {
                unreachable!()
            };
            let (from, to) = (offsets(&summands, upper), offsets(&summands, lower));
            let mut assignment = Vec::with_capacity(grade(upper));
            for (i, &c) in summands.iter().enumerate() {
                if from[i].is_none() {
                    continue;
                }
                for q in 1..=c {
                    assignment.push(to[i].map_or(0, |at| (at + q) as u8));
                }
            }
            let p = Payload::Based(BasedMap::new(&assignment, grade(lower))?);
            let f = host
                .lookup(obj_map[m.source], obj_map[m.target], &p)
                .ok_or_else(|| InvariantError::Context(format!("missing based map {p:?}")))?;
            mor_map.push(f);
        }
        let cube = CatFunctor {
            name: format!("coproduct{summands:?}"),
            source: poset,
            target: host.clone(),
            obj_map,
            mor_map,
            semi: false,
        };
        cube.check()?;
        let fold = match summands.first() {
            Some(&c) if summands.iter().all(|&d| d == c) => {
                let assignment: Vec<u8> = (0..n).flat_map(|_| 1..=c as u8).collect();
                let p = Payload::Based(BasedMap::new(&assignment, c)?);
                let (a, b) = (
                    host.object_of_grade(total).expect("in range"),
                    host.object_of_grade(c).expect("in range"),
                );
                host.lookup(a, b, &p)
            }
            _ => None,
        };
        let ctx = CoproductContext {
            host,
            summands,
            cube,
            fold,
        };
        ctx.check_fold()?;
        Ok(ctx)
    }

    /// `fold ∘ inclusion_i = id` for each summand.
    fn check_fold(&self) -> Result<(), InvariantError> {
        let Some(fold) = self.fold else { return Ok(()) };
        let n = self.summands.len();
        let c = self.summands.first().copied().unwrap_or(0);
        let Payload::Based(f) = self.host.payload(fold) else {
            unreachable!()
        };
        for i in 0..n {
            for q in 1..=c {
                if f.apply(i * c + q) != q {
                    return Err(InvariantError::Context(format!(
                        "fold does not restrict to the identity on summand {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn top(&self) -> ObjId {
        self.cube.apply_obj((1usize << self.summands.len()) - 1)
    }
}

/// `cr̄′(T∘cube)` as a subobject of `T(c₁ + ⋯ + cₙ)`.
pub fn coproduct_cross_effect<R: Ring>(
    t: &FunctorRep<R>,
    ctx: &CoproductContext,
) -> Result<Subobject<R>, InvariantError> {
    let composite = precompose(t, &ctx.cube)?;
    Ok(cross_effect(&composite, CrossFlavor::CrBarPrime)?.subobject)
}

/// `p_{n−1}T(c)` with its projection from `T(c)`.
#[derive(Clone, Debug)]
pub struct TaylorStage<R: Ring> {
    /// Number of summands used; the stage is `p_{n−1}`.
    pub n: usize,
    pub quotiented: Subobject<R>,
    pub module: FPModule<R>,
    /// `T(c) → p_{n−1}T(c)`.
    pub projection: Matrix<R>,
    /// `p_{n−1}T(c) → T(c)`, a section of the projection on generators.
    pub lift: Matrix<R>,
}

/// `p_{n−1}T(c) = coker(cr̄′(T∘cube) → T(c + ⋯ + c) → T(c))` for `c = [size]`.
pub fn taylor_stage<R: Ring>(
    t: &FunctorRep<R>,
    size: usize,
    n: usize,
) -> Result<TaylorStage<R>, InvariantError> {
    let ctx = CoproductContext::new(t.category().clone(), vec![size; n])?;
    let fold = ctx
        .fold
        .ok_or_else(|| InvariantError::Context("no fold map".into()))?;
    let cr = coproduct_cross_effect(t, &ctx)?;
    let c = t.category().object_of_grade(size).expect("in range");
    let value = t.value(c).ok_or(InvariantError::Window {
        window: size,
        reason: "the object is outside the functor's window".into(),
    })?;
    let image = t.matrix(fold).expect("window").mul(cr.generators());
    let quotiented = Subobject::new(value.clone(), image)?;
    let simplified = quotiented.quotient().simplify();
    Ok(TaylorStage {
        n,
        quotiented,
        module: simplified.module,
        projection: simplified.to_new,
        lift: simplified.to_old,
    })
}

/// The tower `p_{top−1}T(c) → ⋯ → p_0T(c)` at `c = [size]`.
#[derive(Clone, Debug)]
pub struct TaylorTower<R: Ring> {
    pub size: usize,
    /// `stages[d]` is `p_dT(c)`.
    pub stages: Vec<TaylorStage<R>>,
    /// `maps[d]: p_{d+1}T(c) → p_dT(c)`.
    pub maps: Vec<Matrix<R>>,
}

pub fn taylor_tower<R: Ring>(
    t: &FunctorRep<R>,
    size: usize,
    top: usize,
) -> Result<TaylorTower<R>, InvariantError> {
    let stages = (1..=top)
        .map(|n| taylor_stage(t, size, n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut maps = Vec::new();
    for w in stages.windows(2) {
        if !w[0].quotiented.contains(&w[1].quotiented) {
            return Err(InvariantError::Context(format!(
                "stage {} does not map to stage {}",
                w[1].n - 1,
                w[0].n - 1
            )));
        }
        maps.push(w[0].projection.mul(&w[1].lift));
    }
    Ok(TaylorTower { size, stages, maps })
}

/// `p_dT` as a functor on the objects `[c]` with `(d+1)·c` inside the window.
pub fn taylor_functor<R: Ring>(
    t: &FunctorRep<R>,
    d: usize,
) -> Result<FunctorRep<R>, InvariantError> {
    let cat = t.category();
    let top = t.window_grade().unwrap_or(0) / (d + 1);
    let stages: Vec<Option<TaylorStage<R>>> = (0..cat.object_count())
        .map(|o| {
            let c = cat.object(o).grade;
            (c <= top).then(|| taylor_stage(t, c, d + 1)).transpose()
        })
        .collect::<Result<_, _>>()?;
    let values = stages
        .iter()
        .map(|s| s.as_ref().map(|s| s.module.clone()))
        .collect();
    let semi = t.is_semi();
    let map = |f: MorId| {
        let (a, b) = (cat.source(f), cat.target(f));
        let (sa, sb) = (stages[a].as_ref().unwrap(), stages[b].as_ref().unwrap());
        sb.projection
            .mul(t.matrix(f).expect("window"))
            .mul(&sa.lift)
    };
    Ok(FunctorRep::from_matrices(
        cat.clone(),
        values,
        (0..cat.morphism_count())
            .map(|f| {
                let inside = stages[cat.source(f)].is_some() && stages[cat.target(f)].is_some();
                inside.then(|| map(f))
            })
            .collect(),
        semi,
    )?)
}

/// Height of a functor on pointed sets through cross-effects of coproducts
/// `[λ₁] ∨ ⋯ ∨ [λₙ]` with positive `λᵢ` summing to at most `window`.
pub fn coproduct_height<R: Ring>(
    t: &FunctorRep<R>,
    window: usize,
) -> Result<HeightReport<R>, InvariantError> {
    let cat = t.category();
    if !matches!(cat.spec(), Some(CategorySpec::Pointed { .. })) {
        return Err(InvariantError::Context(format!(
            "coproduct height needs pointed sets, not {}",
            cat.name()
        )));
    }
    let mut witnesses = Vec::new();
    for m in 0..=window {
        for n in 0..=m {
            if n == 0 && m > 0 {
                continue;
            }
            for lambda in ShiftedPartition::compositions(m, n) {
                let ctx = CoproductContext::new(cat.clone(), lambda.parts()[1..].to_vec())?;
                let cr = coproduct_cross_effect(t, &ctx)?;
                if !cr.is_zero() {
                    witnesses.push(HeightWitness {
                        m,
                        n,
                        partition: lambda.parts().to_vec(),
                        invariants: cr.invariants(),
                    });
                }
            }
        }
    }
    let value = witnesses.iter().map(|w| w.n as i64).max().unwrap_or(-1);
    Ok(HeightReport {
        mode: HeightMode::Oplus,
        flavor: CrossFlavor::CrBarPrime,
        window,
        value,
        witnesses,
    })
}

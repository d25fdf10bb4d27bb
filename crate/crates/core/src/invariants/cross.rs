use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::InvariantError;
use crate::cats::{
    structural_map, CatFunctor, CatIStructure, CategorySpec, FinCat, Payload, ShiftedPartition,
    StructuralKind, DEFAULT_BUDGET,
};
use crate::exactalg::{FPModule, Matrix, ModuleHom, ModuleInvariants, Ring, Subobject};
use crate::funrep::{precompose, FunctorRep};

/// Which cross-effect: the alternating-sum image on `𝓘ₙ`, the cokernel form
/// on the poset `Jₙ`, or the kernel form on its opposite `Kₙ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossFlavor {
    Cr,
    CrBar,
    CrBarPrime,
}

impl fmt::Display for CrossFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossFlavor::Cr => "cr",
            CrossFlavor::CrBar => "crbar",
            CrossFlavor::CrBarPrime => "crbarprime",
        })
    }
}

impl FromStr for CrossFlavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cr" => Ok(CrossFlavor::Cr),
            "crbar" => Ok(CrossFlavor::CrBar),
            "crbarprime" => Ok(CrossFlavor::CrBarPrime),
            other => Err(format!("unknown flavor `{other}` (cr, crbar, crbarprime)")),
        }
    }
}

impl CrossFlavor {
    pub fn cube(&self, n: usize) -> CategorySpec {
        match self {
            CrossFlavor::Cr => CategorySpec::SubsetMonoid { n },
            CrossFlavor::CrBar => CategorySpec::SubsetPoset { n },
            CrossFlavor::CrBarPrime => CategorySpec::SubsetPosetOp { n },
        }
    }
}

/// A cross-effect with its position inside the top value `f(n̲)`.
///
/// For `cr` and `cr̄′` the cross-effect is `subobject` itself; for `cr̄` it is
/// the quotient of `f(n̲)` by `subobject` (the sum of the images of the faces).
#[derive(Clone, Debug)]
pub struct CrossEffect<R: Ring> {
    pub flavor: CrossFlavor,
    pub module: FPModule<R>,
    pub subobject: Subobject<R>,
}

impl<R: Ring> CrossEffect<R> {
    pub fn invariants(&self) -> &ModuleInvariants<R> {
        self.module.invariants()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }
}

/// The cross-effect of a functor or semi-functor on a cube category.
pub fn cross_effect<R: Ring>(
    f: &FunctorRep<R>,
    flavor: CrossFlavor,
) -> Result<CrossEffect<R>, InvariantError> {
    let cat = f.category();
    let n = match (cat.spec(), flavor) {
        (Some(CategorySpec::SubsetMonoid { n }), CrossFlavor::Cr)
        | (Some(CategorySpec::SubsetPoset { n }), CrossFlavor::CrBar)
        | (Some(CategorySpec::SubsetPosetOp { n }), CrossFlavor::CrBarPrime) => *n,
        _ => {
            return Err(InvariantError::WrongCube {
                flavor,
                expected: flavor.cube(0).to_string().replace('0', "n"),
                got: cat.name().into(),
            })
        }
    };
    let full = (1u32 << n) - 1;
    let missing =
        |o| InvariantError::Unsupported(format!("object {o} of the cube is outside the window"));
    match flavor {
        CrossFlavor::Cr => {
            let v = f.value(0).ok_or_else(|| missing(0))?;
            let mut sum = Matrix::zeros(v.generators(), v.generators());
            for s in 0..=full {
                let g = cat
                    .lookup(0, 0, &Payload::Subset(full & !s))
                    .expect("cube morphism");
                let m = f.matrix(g).expect("window");
                sum = if s.count_ones() % 2 == 0 {
                    sum.add(m)
                } else {
                    sum.sub(m)
                };
            }
            let sub = Subobject::new(v.clone(), sum)?;
            let module = sub.as_module().0;
            Ok(CrossEffect {
                flavor,
                module,
                subobject: sub,
            })
        }
        CrossFlavor::CrBar => {
            let top = full as usize;
            let v = f.value(top).ok_or_else(|| missing(top))?;
            let mut gens = Matrix::zeros(v.generators(), 0);
            for s in 0..full {
                let p = Payload::Inclusion {
                    lower: s,
                    upper: full,
                };
                let g = cat.lookup(s as usize, top, &p).expect("cube morphism");
                gens = gens.hcat(f.matrix(g).expect("window"));
            }
            let sub = Subobject::new(v.clone(), gens)?;
            Ok(CrossEffect {
                flavor,
                module: sub.quotient(),
                subobject: sub,
            })
        }
        CrossFlavor::CrBarPrime => {
            let top = full as usize;
            let v = f.value(top).ok_or_else(|| missing(top))?;
            let mut target = FPModule::zero();
            let mut stacked = Matrix::zeros(0, v.generators());
            for s in 0..full {
                let p = Payload::Inclusion {
                    lower: s,
                    upper: full,
                };
                let g = cat.lookup(top, s as usize, &p).expect("cube morphism");
                target = target.direct_sum(f.value(s as usize).ok_or_else(|| missing(s as usize))?);
                stacked = stacked.vcat(f.matrix(g).expect("window"));
            }
            let h = ModuleHom::new_unchecked(v.clone(), target, stacked)?;
            let sub = h.kernel_subobject();
            let module = sub.as_module().0;
            Ok(CrossEffect {
                flavor,
                module,
                subobject: sub,
            })
        }
    }
}

/// Cube categories `𝓘ₙ`, `Jₙ`, `Kₙ` and the comparison maps `z`, `z′`, built
/// once per size.
#[derive(Clone, Debug)]
pub struct Cubes {
    pub monoid: Arc<FinCat>,
    pub poset: Arc<FinCat>,
    pub poset_op: Arc<FinCat>,
    pub z: CatFunctor,
    pub z_prime: CatFunctor,
}

impl Cubes {
    pub fn new(n: usize) -> Result<Self, InvariantError> {
        let z = structural_map(&StructuralKind::Z { n }, DEFAULT_BUDGET)?;
        let z_prime = structural_map(&StructuralKind::ZPrime { n }, DEFAULT_BUDGET)?;
        Ok(Cubes {
            monoid: z.target.clone(),
            poset: z.source.clone(),
            poset_op: z_prime.source.clone(),
            z,
            z_prime,
        })
    }

    /// `f` moved to the cube category of the requested flavour.
    pub fn reindex<R: Ring>(
        &self,
        f: &FunctorRep<R>,
        flavor: CrossFlavor,
    ) -> Result<FunctorRep<R>, InvariantError> {
        Ok(match flavor {
            CrossFlavor::Cr => f.clone(),
            CrossFlavor::CrBar => precompose(f, &self.z)?,
            CrossFlavor::CrBarPrime => precompose(f, &self.z_prime)?,
        })
    }
}

/// The composite `𝓘ₙ → 𝓘ₘ = End_𝓘(m) ↪ 𝓘 → C` for a shifted partition; a
/// semi-functor when `λ₀ > 0`.
pub fn partition_functor(
    st: &CatIStructure,
    cubes: &Cubes,
    lambda: &ShiftedPartition,
) -> Result<CatFunctor, InvariantError> {
    let m = lambda.total();
    let n = lambda.length();
    if cubes.monoid.spec() != Some(&CategorySpec::SubsetMonoid { n }) {
        return Err(InvariantError::Unsupported(format!(
            "cube of size {n} needed for {:?}",
            lambda.parts()
        )));
    }
    let o = st.object(m).ok_or(InvariantError::Window {
        window: st.max(),
        reason: format!("object {m} is not available"),
    })?;
    let mor_map = cubes
        .monoid
        .morphisms()
        .iter()
        .map(|mm| {
            let Payload::Subset(s) = mm.payload else {
                unreachable!()
            };
            st.keep(m, lambda.spread(s))
        })
        .collect();
    Ok(CatFunctor {
        name: format!("f_{:?}", lambda.parts()),
        source: cubes.monoid.clone(),
        target: st.host.clone(),
        obj_map: vec![o],
        mor_map,
        semi: lambda.parts()[0] > 0,
    })
}

/// `cr(T∘f_λ)` and its reindexed variants.
pub fn partition_cross_effect<R: Ring>(
    t: &FunctorRep<R>,
    st: &CatIStructure,
    cubes: &Cubes,
    lambda: &ShiftedPartition,
    flavor: CrossFlavor,
) -> Result<CrossEffect<R>, InvariantError> {
    let f = partition_functor(st, cubes, lambda)?;
    let composite = precompose(t, &f)?;
    cross_effect(&cubes.reindex(&composite, flavor)?, flavor)
}

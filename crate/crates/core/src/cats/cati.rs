use std::sync::Arc;

use super::fincat::{build_category, CategorySpec, FinCat, MorId, ObjId, Payload};
use super::functor::{forget_labels, subset_inclusion, CatFunctor};
use super::maps::PartialInjection;
use super::CatError;

/// A category with `s: 𝓘 → C` and `π: C → Σ`, all truncated at the same size.
#[derive(Clone, Debug)]
pub struct CatIStructure {
    pub host: Arc<FinCat>,
    pub subsets: Arc<FinCat>,
    pub sigma: Arc<FinCat>,
    pub s: CatFunctor,
    pub pi: CatFunctor,
}

impl CatIStructure {
    /// The standard structure on a builder category: partial injections and
    /// their wreath products, or the subset category itself.
    pub fn standard(host: Arc<FinCat>, budget: usize) -> Result<Self, CatError> {
        let max = host.objects().iter().map(|o| o.grade).max().unwrap_or(0);
        let subsets = Arc::new(build_category(&CategorySpec::Subsets { max }, budget)?);
        let sigma = Arc::new(build_category(&CategorySpec::FiSharp { max }, budget)?);
        let (s, pi) = match host.spec() {
            Some(CategorySpec::FiSharp { .. }) => (
                subset_inclusion(subsets.clone(), host.clone())?,
                CatFunctor::identity(host.clone()),
            ),
            Some(CategorySpec::FiSharpWreath { .. }) => {
                let e = host.group().expect("wreath group").identity() as u8;
                let mor_map = subsets
                    .morphisms()
                    .iter()
                    .map(|m| {
                        let (a, b) = (
                            subsets.object(m.source).grade,
                            subsets.object(m.target).grade,
                        );
                        let Payload::Subset(mask) = m.payload else {
                            unreachable!()
                        };
                        let pi = PartialInjection::partial_identity(a, b, mask);
                        let mut labels = [0u8; super::MAX_POINTS];
                        for i in 0..a.min(b) {
                            if mask >> i & 1 == 1 {
                                labels[i] = e;
                            }
                        }
                        host.lookup(m.source, m.target, &Payload::Wreath(pi, labels))
                            .ok_or_else(|| {
                                CatError::NotAFunctor("s into the wreath product".into())
                            })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let s = CatFunctor {
                    name: "s".into(),
                    source: subsets.clone(),
                    target: host.clone(),
                    obj_map: (0..subsets.object_count()).collect(),
                    mor_map,
                    semi: false,
                };
                s.check()?;
                (s, forget_labels(host.clone(), sigma.clone())?)
            }
            Some(CategorySpec::Subsets { .. }) => (
                CatFunctor::identity(host.clone()),
                subset_inclusion(host.clone(), sigma.clone())?,
            ),
            Some(CategorySpec::Fi { .. }) | Some(CategorySpec::Monotone { .. }) => {
                return Err(CatError::Unsupported(format!(
                    "an 𝓘-structure on {} (restriction idempotents are missing)",
                    host.name()
                )))
            }
            _ => {
                return Err(CatError::Unsupported(format!(
                    "an 𝓘-structure on {}",
                    host.name()
                )))
            }
        };
        Ok(CatIStructure {
            host,
            subsets,
            sigma,
            s,
            pi,
        })
    }

    pub fn object(&self, n: usize) -> Option<ObjId> {
        self.subsets.object_of_grade(n).map(|o| self.s.apply_obj(o))
    }

    pub fn max(&self) -> usize {
        self.subsets.object_count() - 1
    }

    /// `s(r_S)`: the idempotent of `n` keeping exactly the points of `keep`.
    pub fn keep(&self, n: usize, keep: u32) -> MorId {
        let o = self.subsets.object_of_grade(n).expect("in window");
        let f = self
            .subsets
            .lookup(o, o, &Payload::Subset(keep))
            .expect("subset morphism");
        self.s.apply(f)
    }

    /// `s(f_{n,T})`: the idempotent forgetting the points of `forget`.
    pub fn forget(&self, n: usize, forget: u32) -> MorId {
        self.keep(n, ((1u32 << n) - 1) & !forget)
    }

    /// `s` of the subset morphism `m → n` given by `mask`.
    pub fn subset_morphism(&self, m: usize, n: usize, mask: u32) -> MorId {
        let (a, b) = (
            self.subsets.object_of_grade(m).expect("in window"),
            self.subsets.object_of_grade(n).expect("in window"),
        );
        self.s.apply(
            self.subsets
                .lookup(a, b, &Payload::Subset(mask))
                .expect("subset morphism"),
        )
    }
}

/// Outcome of checking the axioms of a category with subset and permutation structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatIReport {
    pub composite_is_inclusion: bool,
    /// Sizes `n` where `End(s(n)) → 𝒫_n` is not surjective.
    pub end_not_surjective: Vec<usize>,
    /// Sizes `n` where `Aut(s(n)) → Σ_n` is not surjective.
    pub aut_not_surjective: Vec<usize>,
    /// `(n, φ, i)` with no matching index on the other side.
    pub locality_failures: Vec<(usize, MorId, usize)>,
}

impl CatIReport {
    pub fn passes(&self) -> bool {
        self.composite_is_inclusion
            && self.end_not_surjective.is_empty()
            && self.aut_not_surjective.is_empty()
            && self.locality_failures.is_empty()
    }
}

/// Checks `π∘s = inclusion`, surjectivity of `π` on endomorphisms and
/// automorphisms of each `s(n)`, and locality of every endomorphism.
pub fn check_cati_axioms(st: &CatIStructure) -> Result<CatIReport, CatError> {
    let mut report = CatIReport::default();
    let incl = subset_inclusion(st.subsets.clone(), st.sigma.clone())?;
    let composite = st.s.then(&st.pi);
    report.composite_is_inclusion =
        composite.obj_map == incl.obj_map && composite.mor_map == incl.mor_map;
    let host = &st.host;
    for n in 0..=st.max() {
        let o = st.object(n).expect("in window");
        let sig_o = st.sigma.object_of_grade(n).expect("in window");
        let images = |maps: Vec<MorId>| -> std::collections::BTreeSet<MorId> {
            maps.into_iter().map(|f| st.pi.apply(f)).collect()
        };
        let end_img = images(host.hom(o, o).to_vec());
        if end_img.len() != st.sigma.hom(sig_o, sig_o).len() {
            report.end_not_surjective.push(n);
        }
        let aut_img = images(host.automorphisms(o));
        if aut_img.len() != st.sigma.automorphisms(sig_o).len() {
            report.aut_not_surjective.push(n);
        }
        let singles: Vec<MorId> = (0..n).map(|i| st.forget(n, 1 << i)).collect();
        for &phi in host.hom(o, o) {
            let left: Vec<MorId> = singles.iter().map(|&f| host.compose(phi, f)).collect();
            let right: Vec<MorId> = singles.iter().map(|&f| host.compose(f, phi)).collect();
            for (i, l) in left.iter().enumerate() {
                if !right.contains(l) {
                    report.locality_failures.push((n, phi, i + 1));
                }
            }
            for (j, r) in right.iter().enumerate() {
                if !left.contains(r) {
                    report.locality_failures.push((n, phi, j + 1));
                }
            }
        }
    }
    Ok(report)
}

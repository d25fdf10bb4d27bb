use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fincat::{build_category, CategorySpec, FinCat, MorId, ObjId, Payload};
use super::maps::PartialInjection;
use super::CatError;

/// Object and morphism assignment between two finite categories.
///
/// A semi-functor preserves composition but not necessarily identities.
#[derive(Clone, Debug)]
pub struct CatFunctor {
    pub name: String,
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub obj_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
    pub semi: bool,
}

impl CatFunctor {
    /// Builds the morphism map by transporting payloads, then checks the laws.
    pub fn from_payloads(
        name: &str,
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        semi: bool,
        payload: impl Fn(&Payload) -> Payload,
    ) -> Result<CatFunctor, CatError> {
        let mor_map = source
            .morphisms()
            .iter()
            .map(|m| {
                let p = payload(&m.payload);
                target
                    .lookup(obj_map[m.source], obj_map[m.target], &p)
                    .ok_or_else(|| CatError::NotAFunctor(format!("{name}: image {p:?} is missing")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let f = CatFunctor {
            name: name.to_string(),
            source,
            target,
            obj_map,
            mor_map,
            semi,
        };
        f.check()?;
        Ok(f)
    }

    pub fn identity(cat: Arc<FinCat>) -> CatFunctor {
        CatFunctor {
            name: format!("id_{}", cat.name()),
            obj_map: (0..cat.object_count()).collect(),
            mor_map: (0..cat.morphism_count()).collect(),
            source: cat.clone(),
            target: cat,
            semi: false,
        }
    }

    pub fn apply_obj(&self, o: ObjId) -> ObjId {
        self.obj_map[o]
    }

    pub fn apply(&self, f: MorId) -> MorId {
        self.mor_map[f]
    }

    /// `other ∘ self`
    pub fn then(&self, other: &CatFunctor) -> CatFunctor {
        CatFunctor {
            name: format!("{} . {}", other.name, self.name),
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.obj_map[o]).collect(),
            mor_map: self.mor_map.iter().map(|&f| other.mor_map[f]).collect(),
            semi: self.semi || other.semi,
        }
    }

    pub fn preserves_identities(&self) -> bool {
        (0..self.source.object_count())
            .all(|o| self.mor_map[self.source.identity(o)] == self.target.identity(self.obj_map[o]))
    }

    /// Endpoint compatibility and composition on all composable pairs, plus
    /// identities unless this is a semi-functor.
    pub fn check(&self) -> Result<(), CatError> {
        let (src, tgt) = (&self.source, &self.target);
        for (f, m) in src.morphisms().iter().enumerate() {
            let g = self.mor_map[f];
            if tgt.source(g) != self.obj_map[m.source] || tgt.target(g) != self.obj_map[m.target] {
                return Err(CatError::NotAFunctor(format!(
                    "{}: endpoints of {f}",
                    self.name
                )));
            }
        }
        if !self.semi && !self.preserves_identities() {
            return Err(CatError::NotAFunctor(format!(
                "{}: identities not preserved",
                self.name
            )));
        }
        for f in 0..src.morphism_count() {
            let b = src.target(f);
            for c in 0..src.object_count() {
                for &g in src.hom(b, c) {
                    let lhs = self.mor_map[src.compose(g, f)];
                    let rhs = tgt.compose(self.mor_map[g], self.mor_map[f]);
                    if lhs != rhs {
                        return Err(CatError::NotAFunctor(format!(
                            "{}: composite of {f} and {g}",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ordered tuple `(λ₀, λ₁, …, λₙ)` of non-negative parts summing to `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftedPartition {
    parts: Vec<usize>,
}

impl ShiftedPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self, CatError> {
        if parts.is_empty() {
            return Err(CatError::MalformedPartition(
                "needs at least the part λ₀".into(),
            ));
        }
        if parts.iter().sum::<usize>() > super::MAX_POINTS {
            return Err(CatError::TooLarge(parts.iter().sum()));
        }
        Ok(ShiftedPartition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks after the leading one.
    pub fn length(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Block `{λ₀+⋯+λ_{i−1}+1, …, λ₀+⋯+λᵢ}` for `i` in `1..=n`, as a bit mask.
    pub fn block(&self, i: usize) -> u32 {
        let start: usize = self.parts[..i].iter().sum();
        let len = self.parts[i];
        ((1u32 << len) - 1) << start
    }

    /// `S ↦ ∪_{i∈S} {i}_λ` on bit masks.
    pub fn spread(&self, subset: u32) -> u32 {
        (1..=self.length())
            .filter(|i| subset >> (i - 1) & 1 == 1)
            .fold(0, |acc, i| acc | self.block(i))
    }

    /// All tuples with `λ₀ = 0` and `n` positive parts summing to `m`.
    pub fn compositions(m: usize, n: usize) -> Vec<ShiftedPartition> {
        fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<ShiftedPartition>) {
            if slots == 0 {
                if left == 0 {
                    out.push(ShiftedPartition { parts: cur.clone() });
                }
                return;
            }
            for p in 1..=left.saturating_sub(slots - 1) {
                cur.push(p);
                rec(left - p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, n, &mut vec![0], &mut out);
        out
    }
}

/// Names for the structural maps between builder categories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructuralKind {
    /// `Jₙ → 𝓘ₙ`, `(S ⊆ T) ↦ n̲ ∖ (T ∖ S)`.
    Z { n: usize },
    /// `Kₙ → 𝓘ₙ` by the same formula.
    ZPrime { n: usize },
    /// `𝓘ₙ → 𝓘ₘ`, `S ↦ S_λ`.
    Spread { parts: Vec<usize> },
    /// Subset category into partial injections.
    SubsetInclusion { max: usize },
    /// Injections into partial injections.
    FiInclusion { max: usize },
    /// Order-preserving partial injections into all partial injections.
    MonotoneInclusion { max: usize },
    /// Forget the group labels of a wreath product.
    ForgetLabels { max: usize, table: Vec<Vec<u16>> },
}

/// Subset `S ⊆ {1..min(m,n)}` as the partial identity on `S`.
pub fn subset_as_injection(m: usize, n: usize, mask: u32) -> PartialInjection {
    PartialInjection::partial_identity(m, n, mask)
}

fn build(spec: CategorySpec, budget: usize) -> Result<Arc<FinCat>, CatError> {
    build_category(&spec, budget).map(Arc::new)
}

fn grade_map(src: &FinCat, tgt: &FinCat) -> Result<Vec<ObjId>, CatError> {
    src.objects()
        .iter()
        .map(|o| {
            tgt.object_of_grade(o.grade)
                .ok_or_else(|| CatError::NotAFunctor(format!("no object of grade {}", o.grade)))
        })
        .collect()
}

pub fn subset_inclusion(subsets: Arc<FinCat>, sigma: Arc<FinCat>) -> Result<CatFunctor, CatError> {
    let obj = grade_map(&subsets, &sigma)?;
    let grade = |o: ObjId| subsets.object(o).grade;
    let mor_map = subsets
        .morphisms()
        .iter()
        .map(|m| {
            let (a, b) = (grade(m.source), grade(m.target));
            let Payload::Subset(mask) = m.payload else {
                return Err(CatError::Unsupported(
                    "subset inclusion of a non-subset category".into(),
                ));
            };
            let p = Payload::Injection(subset_as_injection(a, b, mask));
            sigma
                .lookup(obj[m.source], obj[m.target], &p)
                .ok_or_else(|| CatError::NotAFunctor(format!("missing image {p:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = CatFunctor {
        name: "incl".into(),
        source: subsets,
        target: sigma,
        obj_map: obj,
        mor_map,
        semi: false,
    };
    f.check()?;
    Ok(f)
}

/// Forgets the labels of a wreath-product category.
pub fn forget_labels(wreath: Arc<FinCat>, sigma: Arc<FinCat>) -> Result<CatFunctor, CatError> {
    let obj = grade_map(&wreath, &sigma)?;
    CatFunctor::from_payloads("forget", wreath, sigma, obj, false, |p| match p {
        Payload::Wreath(pi, _) => Payload::Injection(*pi),
        other => *other,
    })
}

/// Inclusion of a subcategory of partial injections (FI, monotone maps, or the whole thing).
pub fn injection_inclusion(sub: Arc<FinCat>, sigma: Arc<FinCat>) -> Result<CatFunctor, CatError> {
    let obj = grade_map(&sub, &sigma)?;
    CatFunctor::from_payloads("incl", sub, sigma, obj, false, |p| *p)
}

/// Builds a structural map together with its source and target categories.
pub fn structural_map(kind: &StructuralKind, budget: usize) -> Result<CatFunctor, CatError> {
    match kind {
        StructuralKind::Z { n } | StructuralKind::ZPrime { n } => {
            let prime = matches!(kind, StructuralKind::ZPrime { .. });
            let src = build(
                if prime {
                    CategorySpec::SubsetPosetOp { n: *n }
                } else {
                    CategorySpec::SubsetPoset { n: *n }
                },
                budget,
            )?;
            let tgt = build(CategorySpec::SubsetMonoid { n: *n }, budget)?;
            let full = (1u32 << n) - 1;
            let obj = vec![0; src.object_count()];
            CatFunctor::from_payloads(if prime { "z'" } else { "z" }, src, tgt, obj, false, |p| {
                match p {
                    Payload::Inclusion { lower, upper } => {
                        Payload::Subset(full & !(upper & !lower))
                    }
                    other => *other,
                }
            })
        }
        StructuralKind::Spread { parts } => {
            let lambda = ShiftedPartition::new(parts.clone())?;
            let src = build(CategorySpec::SubsetMonoid { n: lambda.length() }, budget)?;
            let tgt = build(CategorySpec::SubsetMonoid { n: lambda.total() }, budget)?;
            CatFunctor::from_payloads("psi", src, tgt, vec![0], parts[0] != 0, |p| match p {
                Payload::Subset(s) => Payload::Subset(lambda.spread(*s)),
                other => *other,
            })
        }
        StructuralKind::SubsetInclusion { max } => subset_inclusion(
            build(CategorySpec::Subsets { max: *max }, budget)?,
            build(CategorySpec::FiSharp { max: *max }, budget)?,
        ),
        StructuralKind::FiInclusion { max } => injection_inclusion(
            build(CategorySpec::Fi { max: *max }, budget)?,
            build(CategorySpec::FiSharp { max: *max }, budget)?,
        ),
        StructuralKind::MonotoneInclusion { max } => injection_inclusion(
            build(CategorySpec::Monotone { max: *max }, budget)?,
            build(CategorySpec::FiSharp { max: *max }, budget)?,
        ),
        StructuralKind::ForgetLabels { max, table } => forget_labels(
            build(
                CategorySpec::FiSharpWreath {
                    max: *max,
                    table: table.clone(),
                },
                budget,
            )?,
            build(CategorySpec::FiSharp { max: *max }, budget)?,
        ),
    }
}

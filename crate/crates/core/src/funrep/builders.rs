use std::sync::Arc;

use super::{FunRepError, FunctorRep};
use crate::cats::{build_category, CategorySpec, FinCat, MorId, ObjId, Payload, DEFAULT_BUDGET};
use crate::exactalg::{FPModule, Matrix, Ring, Simplified};

/// Position of every morphism inside its hom-set.
pub(crate) fn hom_positions(cat: &FinCat) -> Vec<usize> {
    let mut pos = vec![0; cat.morphism_count()];
    for a in 0..cat.object_count() {
        for b in 0..cat.object_count() {
            for (i, &f) in cat.hom(a, b).iter().enumerate() {
                pos[f] = i;
            }
        }
    }
    pos
}

fn window_values<R: Ring>(
    cat: &FinCat,
    window: Option<usize>,
    value: impl Fn(ObjId) -> FPModule<R>,
) -> Vec<Option<FPModule<R>>> {
    (0..cat.object_count())
        .map(|o| {
            window
                .is_none_or(|w| cat.object(o).grade <= w)
                .then(|| value(o))
        })
        .collect()
}

pub fn zero_functor<R: Ring>(cat: Arc<FinCat>) -> FunctorRep<R> {
    constant_functor(cat, FPModule::zero())
}

/// Every object to `module`, every morphism to the identity.
pub fn constant_functor<R: Ring>(cat: Arc<FinCat>, module: FPModule<R>) -> FunctorRep<R> {
    let g = module.generators();
    let values = window_values(&cat, None, |_| module.clone());
    FunctorRep::from_fn(cat, values, false, |_| Matrix::identity(g)).expect("shapes agree")
}

/// The representable functor `Z[Hom(k, -)]`, acting by postcomposition.
pub fn representable_functor<R: Ring>(cat: Arc<FinCat>, k: ObjId) -> FunctorRep<R> {
    presented_functor(cat, &[k], &[], None).expect("representables are well formed")
}

/// A relation `Σ c · φ` in a sum of representables, living at object `at`;
/// each term names the summand and a morphism `summand → at`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<R> {
    pub at: ObjId,
    pub terms: Vec<(usize, MorId, R)>,
}

/// The cokernel of the map `⊕_j P_{at_j} → ⊕_i P_{summands_i}` picking out the
/// relations; functorial by construction. Values are simplified
/// presentations.
pub fn presented_functor<R: Ring>(
    cat: Arc<FinCat>,
    summands: &[ObjId],
    relations: &[Relation<R>],
    window: Option<usize>,
) -> Result<FunctorRep<R>, FunRepError> {
    let pos = hom_positions(&cat);
    for r in relations {
        for &(i, phi, _) in &r.terms {
            let bad =
                i >= summands.len() || cat.source(phi) != summands[i] || cat.target(phi) != r.at;
            if bad {
                return Err(FunRepError::Morphism {
                    mor: phi,
                    msg: format!(
                        "relation term does not start at summand {i} and end at {}",
                        r.at
                    ),
                });
            }
        }
    }
    // offsets[n][i]: first free generator of summand i at object n
    let offsets: Vec<Vec<usize>> = (0..cat.object_count())
        .map(|n| {
            let mut acc = 0;
            let mut out = Vec::with_capacity(summands.len() + 1);
            for &k in summands {
                out.push(acc);
                acc += cat.hom(k, n).len();
            }
            out.push(acc);
            out
        })
        .collect();
    let inside = |o: ObjId| window.is_none_or(|w| cat.object(o).grade <= w);
    let simplified: Vec<Option<Simplified<R>>> = (0..cat.object_count())
        .map(|n| {
            if !inside(n) {
                return None;
            }
            let gens = offsets[n][summands.len()];
            let mut cols = Vec::new();
            for r in relations {
                for &h in cat.hom(r.at, n) {
                    let mut v = vec![R::zero(); gens];
                    for (i, phi, c) in &r.terms {
                        let hphi = cat.compose(h, *phi);
                        v[offsets[n][*i] + pos[hphi]].add_mul_assign(c, &R::one());
                    }
                    if v.iter().any(|x| !x.is_zero()) {
                        cols.push(v);
                    }
                }
            }
            Some(FPModule::new(Matrix::from_columns(gens, &cols)).simplify())
        })
        .collect();
    let values = simplified
        .iter()
        .map(|s| s.as_ref().map(|s| s.module.clone()))
        .collect();
    let map = |f: MorId| {
        let (a, b) = (cat.source(f), cat.target(f));
        let (sa, sb) = (
            simplified[a].as_ref().expect("window"),
            simplified[b].as_ref().expect("window"),
        );
        let mut free = Matrix::zeros(offsets[b][summands.len()], offsets[a][summands.len()]);
        for (i, &k) in summands.iter().enumerate() {
            for (p, &phi) in cat.hom(k, a).iter().enumerate() {
                let fphi = cat.compose(f, phi);
                free[(offsets[b][i] + pos[fphi], offsets[a][i] + p)] = R::one();
            }
        }
        sb.to_new.mul(&free).mul(&sa.to_old)
    };
    FunctorRep::from_fn(cat.clone(), values, false, map)
}

/// Shape of random quotients of sums of representables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomFunctorConfig {
    /// Grades of the representable summands to choose from.
    pub summand_grades: Vec<usize>,
    pub max_summands: usize,
    pub max_relations: usize,
    pub max_terms: usize,
    /// Coefficients are drawn from `[-bound, bound] \ {0}`.
    pub coefficient_bound: i64,
    pub window: Option<usize>,
}

impl Default for RandomFunctorConfig {
    fn default() -> Self {
        RandomFunctorConfig {
            summand_grades: vec![0, 1, 2],
            max_summands: 3,
            max_relations: 3,
            max_terms: 3,
            coefficient_bound: 2,
            window: None,
        }
    }
}

/// A random finitely presented functor: a quotient of a random sum of
/// representables by random relations.
pub fn random_functor<R: Ring>(
    cat: Arc<FinCat>,
    cfg: &RandomFunctorConfig,
    rng: &mut impl rand::Rng,
) -> FunctorRep<R> {
    let objects_of = |g: usize| -> Vec<ObjId> {
        (0..cat.object_count())
            .filter(|&o| cat.object(o).grade == g)
            .collect()
    };
    let candidates: Vec<ObjId> = cfg
        .summand_grades
        .iter()
        .flat_map(|&g| objects_of(g))
        .collect();
    let count = rng.random_range(1..=cfg.max_summands.max(1));
    let summands: Vec<ObjId> = (0..count)
        .map(|_| candidates[rng.random_range(0..candidates.len())])
        .collect();
    let in_window = |o: ObjId| cfg.window.is_none_or(|w| cat.object(o).grade <= w);
    let targets: Vec<ObjId> = (0..cat.object_count()).filter(|&o| in_window(o)).collect();
    let mut relations = Vec::new();
    for _ in 0..rng.random_range(0..=cfg.max_relations) {
        let at = targets[rng.random_range(0..targets.len())];
        let mut terms = Vec::new();
        for _ in 0..rng.random_range(1..=cfg.max_terms.max(1)) {
            let i = rng.random_range(0..summands.len());
            let hom = cat.hom(summands[i], at);
            if hom.is_empty() {
                continue;
            }
            let phi = hom[rng.random_range(0..hom.len())];
            let mut c = rng.random_range(1..=cfg.coefficient_bound.max(1));
            if rng.random_bool(0.5) {
                c = -c;
            }
            terms.push((i, phi, R::from_i64(c)));
        }
        if !terms.is_empty() {
            relations.push(Relation { at, terms });
        }
    }
    presented_functor(cat, &summands, &relations, cfg.window)
        .expect("random relations are well formed")
}

/// Basis of `T_h(n)`: subsets of `{1..n}` without two consecutive elements and
/// of size at most `h`, ordered by size and then lexicographically.
pub fn th_basis(h: Option<usize>, n: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0..1u32 << n)
        .filter(|&s| s & (s >> 1) == 0 && h.is_none_or(|h| s.count_ones() as usize <= h))
        .collect();
    out.sort_by_key(|&s| (s.count_ones(), elements(s)));
    out
}

fn elements(s: u32) -> Vec<u32> {
    (0..32).filter(|i| s >> i & 1 == 1).collect()
}

/// The functor `T_h` on the subset category `𝓘≤max` (`h = None` for no size
/// bound): `r_R` sends the basis element `S` to `S ∩ R`.
pub fn build_th<R: Ring>(h: Option<usize>, max: usize) -> Result<FunctorRep<R>, FunRepError> {
    let cat = Arc::new(build_category(
        &CategorySpec::Subsets { max },
        DEFAULT_BUDGET,
    )?);
    th_on(cat, h)
}

/// `T_h` on an existing subset category.
pub fn th_on<R: Ring>(cat: Arc<FinCat>, h: Option<usize>) -> Result<FunctorRep<R>, FunRepError> {
    if !matches!(cat.spec(), Some(CategorySpec::Subsets { .. })) {
        return Err(FunRepError::Unsupported(format!("T_h on {}", cat.name())));
    }
    let bases: Vec<Vec<u32>> = (0..cat.object_count())
        .map(|o| th_basis(h, cat.object(o).grade))
        .collect();
    let values = bases
        .iter()
        .map(|b| Some(FPModule::free(b.len())))
        .collect();
    let map = |f: MorId| {
        let (a, b) = (cat.source(f), cat.target(f));
        let Payload::Subset(r) = *cat.payload(f) else {
            unreachable!()
        };
        let mut m = Matrix::zeros(bases[b].len(), bases[a].len());
        for (j, &s) in bases[a].iter().enumerate() {
            let img = s & r;
            let i = bases[b]
                .iter()
                .position(|&t| t == img)
                .expect("S ∩ R is a basis element");
            m[(i, j)] = R::one();
        }
        m
    };
    FunctorRep::from_fn(cat.clone(), values, false, map)
}

/// Linearisation of pointed sets: `Z[X]`, or the reduced `Z[X]/Z[basepoint]`.
pub fn pointed_linearisation<R: Ring>(
    cat: Arc<FinCat>,
    reduced: bool,
) -> Result<FunctorRep<R>, FunRepError> {
    if !matches!(cat.spec(), Some(CategorySpec::Pointed { .. })) {
        return Err(FunRepError::Unsupported(format!(
            "linearisation on {}",
            cat.name()
        )));
    }
    let skip = usize::from(reduced);
    let values = (0..cat.object_count())
        .map(|o| Some(FPModule::free(cat.object(o).grade + 1 - skip)))
        .collect();
    let map = |f: MorId| {
        let (a, b) = (
            cat.object(cat.source(f)).grade,
            cat.object(cat.target(f)).grade,
        );
        let Payload::Based(p) = cat.payload(f) else {
            unreachable!()
        };
        let mut m = Matrix::zeros(b + 1 - skip, a + 1 - skip);
        for i in skip..=a {
            let j = p.apply(i);
            if j >= skip {
                m[(j - skip, i - skip)] = R::one();
            }
        }
        m
    };
    FunctorRep::from_fn(cat.clone(), values, false, map)
}

/// Objectwise tensor product of two representations on the same category.
pub fn pointwise_tensor<R: Ring>(
    a: &FunctorRep<R>,
    b: &FunctorRep<R>,
) -> Result<FunctorRep<R>, FunRepError> {
    let cat = a.category().clone();
    if !Arc::ptr_eq(&cat, b.category()) {
        return Err(FunRepError::CategoryMismatch(
            cat.name().into(),
            b.category().name().into(),
        ));
    }
    let values = (0..cat.object_count())
        .map(|o| {
            let (x, y) = (a.value(o)?, b.value(o)?);
            let rel = x
                .relations()
                .kron(&Matrix::identity(y.generators()))
                .hcat(&Matrix::identity(x.generators()).kron(y.relations()));
            Some(FPModule::new(rel))
        })
        .collect();
    let map = |f: MorId| {
        a.matrix(f)
            .expect("window")
            .kron(b.matrix(f).expect("window"))
    };
    FunctorRep::from_fn(cat.clone(), values, a.is_semi() || b.is_semi(), map)
}

/// On the chain `0 → 1 → ⋯ → max`: `Z` at `0` and zero elsewhere.
pub fn chain_point_functor<R: Ring>(max: usize) -> Result<FunctorRep<R>, FunRepError> {
    let cat = Arc::new(build_category(
        &CategorySpec::Chain { max },
        DEFAULT_BUDGET,
    )?);
    let rank = |o: ObjId| usize::from(cat.object(o).grade == 0);
    let values = (0..cat.object_count())
        .map(|o| Some(FPModule::free(rank(o))))
        .collect();
    let map = |f: MorId| {
        let (a, b) = (rank(cat.source(f)), rank(cat.target(f)));
        if a == 1 && b == 1 {
            Matrix::identity(1)
        } else {
            Matrix::zeros(b, a)
        }
    };
    FunctorRep::from_fn(cat.clone(), values, false, map)
}

/// Direct sum of two representations on the same category.
pub fn direct_sum<R: Ring>(
    a: &FunctorRep<R>,
    b: &FunctorRep<R>,
) -> Result<FunctorRep<R>, FunRepError> {
    let cat = a.category().clone();
    if !Arc::ptr_eq(&cat, b.category()) {
        return Err(FunRepError::CategoryMismatch(
            cat.name().into(),
            b.category().name().into(),
        ));
    }
    let values = (0..cat.object_count())
        .map(|o| Some(a.value(o)?.direct_sum(b.value(o)?)))
        .collect();
    let map = |f: MorId| {
        a.matrix(f)
            .expect("window")
            .block_diag(b.matrix(f).expect("window"))
    };
    FunctorRep::from_fn(cat.clone(), values, a.is_semi() || b.is_semi(), map)
}

/// Seeded generator used by every sampling routine.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

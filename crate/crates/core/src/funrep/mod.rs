//! Functors and semi-functors from finite categories into finitely presented
//! modules.
//!
//! Matrices follow the column convention: columns are indexed by source
//! generators, rows by target generators, and `g∘f` has matrix `M_g·M_f`.

mod builders;
mod shift;

pub use builders::*;
pub use shift::*;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::cats::{
    factorize_partial_injection, CatError, CategorySpec, FinCat, Generator, MorId, ObjId, Payload,
};
use crate::exactalg::{AlgebraError, FPModule, Matrix, ModuleHom, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunRepError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error("object {0} is outside the window")]
    Window(ObjId),
    #[error("morphism {mor}: {msg}")]
    Morphism { mor: MorId, msg: String },
    #[error("object {obj}: {msg}")]
    Object { obj: ObjId, msg: String },
    #[error("functors live on different categories ({0} and {1})")]
    CategoryMismatch(String, String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug)]
enum MapStore<R: Ring> {
    Full(Vec<Option<Matrix<R>>>),
    /// Matrices on the generators of partial injections; the rest is
    /// completed on demand by factorisation.
    Generated {
        gens: HashMap<Generator, Matrix<R>>,
        cache: Vec<OnceLock<Option<Matrix<R>>>>,
    },
}

impl<R: Ring> Clone for MapStore<R> {
    fn clone(&self) -> Self {
        match self {
            MapStore::Full(v) => MapStore::Full(v.clone()),
            MapStore::Generated { gens, cache } => MapStore::Generated {
                gens: gens.clone(),
                cache: cache
                    .iter()
                    .map(|c| {
                        let l = OnceLock::new();
                        if let Some(v) = c.get() {
                            let _ = l.set(v.clone());
                        }
                        l
                    })
                    .collect(),
            },
        }
    }
}

/// A functor (or semi-functor) `C → R-mod` on a window of objects of `C`.
#[derive(Clone, Debug)]
pub struct FunctorRep<R: Ring> {
    cat: Arc<FinCat>,
    values: Vec<Option<FPModule<R>>>,
    store: MapStore<R>,
    semi: bool,
}

/// One violation found by [`FunctorRep::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape {
        mor: MorId,
    },
    IllDefined {
        mor: MorId,
    },
    /// `T(g∘f) ≠ T(g)·T(f)`.
    Composition {
        f: MorId,
        g: MorId,
    },
    Identity {
        obj: ObjId,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

fn generator_mode(cat: &FinCat) -> bool {
    matches!(
        cat.spec(),
        Some(CategorySpec::FiSharp { .. }) | Some(CategorySpec::Fi { .. })
    )
}

impl<R: Ring> FunctorRep<R> {
    /// A representation with every morphism between window objects given.
    pub fn from_matrices(
        cat: Arc<FinCat>,
        values: Vec<Option<FPModule<R>>>,
        maps: Vec<Option<Matrix<R>>>,
        semi: bool,
    ) -> Result<Self, FunRepError> {
        if values.len() != cat.object_count() || maps.len() != cat.morphism_count() {
            return Err(FunRepError::Unsupported(format!(
                "expected {} values and {} maps",
                cat.object_count(),
                cat.morphism_count()
            )));
        }
        for (f, m) in maps.iter().enumerate() {
            let (a, b) = (cat.source(f), cat.target(f));
            match (&values[a], &values[b], m) {
                (Some(va), Some(vb), Some(m)) => {
                    if m.rows() != vb.generators() || m.cols() != va.generators() {
                        return Err(FunRepError::Morphism {
                            mor: f,
                            msg: format!(
                                "matrix is {}x{}, expected {}x{}",
                                m.rows(),
                                m.cols(),
                                vb.generators(),
                                va.generators()
                            ),
                        });
                    }
                }
                (Some(_), Some(_), None) => {
                    return Err(FunRepError::Morphism {
                        mor: f,
                        msg: "missing matrix inside the window".into(),
                    })
                }
                _ => {}
            }
        }
        Ok(FunctorRep {
            cat,
            values,
            store: MapStore::Full(maps),
            semi,
        })
    }

    /// A functor on a category of partial injections given on generators.
    /// Generators leaving the window are ignored.
    pub fn from_generators(
        cat: Arc<FinCat>,
        values: Vec<Option<FPModule<R>>>,
        gens: HashMap<Generator, Matrix<R>>,
    ) -> Result<Self, FunRepError> {
        if !generator_mode(&cat) {
            return Err(FunRepError::Unsupported(format!(
                "generator input on {}",
                cat.name()
            )));
        }
        if values.len() != cat.object_count() {
            return Err(FunRepError::Unsupported(format!(
                "expected {} values",
                cat.object_count()
            )));
        }
        for (g, m) in &gens {
            let (a, b) = (
                cat.object_of_grade(g.source()),
                cat.object_of_grade(g.target()),
            );
            let (Some(a), Some(b)) = (a, b) else { continue };
            if let (Some(va), Some(vb)) = (&values[a], &values[b]) {
                if m.rows() != vb.generators() || m.cols() != va.generators() {
                    return Err(FunRepError::Object {
                        obj: b,
                        msg: format!("generator {g:?} has a {}x{} matrix", m.rows(), m.cols()),
                    });
                }
            }
        }
        let cache = (0..cat.morphism_count()).map(|_| OnceLock::new()).collect();
        Ok(FunctorRep {
            cat,
            values,
            store: MapStore::Generated { gens, cache },
            semi: false,
        })
    }

    /// Chooses generator storage on partial-injection categories.
    pub(crate) fn from_fn(
        cat: Arc<FinCat>,
        values: Vec<Option<FPModule<R>>>,
        semi: bool,
        map: impl Fn(MorId) -> Matrix<R>,
    ) -> Result<Self, FunRepError> {
        if !semi && generator_mode(&cat) {
            let mut gens = HashMap::new();
            for g in generators_in_window(&cat, &values) {
                let f = generator_id(&cat, &g).expect("generator in category");
                gens.insert(g, map(f));
            }
            return Self::from_generators(cat, values, gens);
        }
        let maps = (0..cat.morphism_count())
            .map(|f| {
                let inside = values[cat.source(f)].is_some() && values[cat.target(f)].is_some();
                inside.then(|| map(f))
            })
            .collect();
        Self::from_matrices(cat, values, maps, semi)
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn is_semi(&self) -> bool {
        self.semi
    }

    pub fn uses_generators(&self) -> bool {
        matches!(self.store, MapStore::Generated { .. })
    }

    pub fn in_window(&self, o: ObjId) -> bool {
        self.values[o].is_some()
    }

    pub fn window(&self) -> Vec<ObjId> {
        (0..self.values.len())
            .filter(|&o| self.in_window(o))
            .collect()
    }

    /// Largest grade inside the window, or `None` for an empty window.
    pub fn window_grade(&self) -> Option<usize> {
        self.window()
            .iter()
            .map(|&o| self.cat.object(o).grade)
            .max()
    }

    pub fn value(&self, o: ObjId) -> Option<&FPModule<R>> {
        self.values[o].as_ref()
    }

    pub fn values(&self) -> &[Option<FPModule<R>>] {
        &self.values
    }

    /// The matrix of `T(f)`, or `None` outside the window.
    pub fn matrix(&self, f: MorId) -> Option<&Matrix<R>> {
        match &self.store {
            MapStore::Full(maps) => maps[f].as_ref(),
            MapStore::Generated { gens, cache } => {
                cache[f].get_or_init(|| self.complete(gens, f)).as_ref()
            }
        }
    }

    fn complete(&self, gens: &HashMap<Generator, Matrix<R>>, f: MorId) -> Option<Matrix<R>> {
        let (a, b) = (self.cat.source(f), self.cat.target(f));
        let va = self.values[a].as_ref()?;
        self.values[b].as_ref()?;
        let Payload::Injection(p) = self.cat.payload(f) else {
            unreachable!("generator storage on a partial-injection category")
        };
        let mut acc = Matrix::identity(va.generators());
        for g in factorize_partial_injection(p) {
            acc = gens.get(&g)?.mul(&acc);
        }
        Some(acc)
    }

    /// `T(f)` as a module homomorphism.
    pub fn hom(&self, f: MorId) -> Option<ModuleHom<R>> {
        let m = self.matrix(f)?.clone();
        Some(ModuleHom {
            source: self.values[self.cat.source(f)].clone()?,
            target: self.values[self.cat.target(f)].clone()?,
            matrix: m,
        })
    }

    /// Matrix of the morphism with the given endpoints and payload.
    pub fn matrix_of(&self, a: ObjId, b: ObjId, p: &Payload) -> Option<&Matrix<R>> {
        self.matrix(self.cat.lookup(a, b, p)?)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(FPModule::is_zero)
    }

    /// Generator matrices, when the functor is stored that way.
    pub fn generator_matrices(&self) -> Option<&HashMap<Generator, Matrix<R>>> {
        match &self.store {
            MapStore::Generated { gens, .. } => Some(gens),
            MapStore::Full(_) => None,
        }
    }

    /// Exhaustive check of well-definedness, composition on every composable
    /// pair inside the window, and identities unless semi.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let cat = &self.cat;
        let window = self.window();
        for &a in &window {
            for &b in &window {
                for &f in cat.hom(a, b) {
                    let Some(h) = self.hom(f) else {
                        report.violations.push(Violation::Shape { mor: f });
                        continue;
                    };
                    if h.check_well_defined().is_err() {
                        report.violations.push(Violation::IllDefined { mor: f });
                    }
                }
            }
            if !self.semi {
                let v = self.values[a].as_ref().expect("window");
                let d = self
                    .matrix(cat.identity(a))
                    .expect("window")
                    .sub(&Matrix::identity(v.generators()));
                if !(0..d.cols()).all(|j| v.element_is_zero(&d.column(j))) {
                    report.violations.push(Violation::Identity { obj: a });
                }
            }
        }
        for &a in &window {
            for &b in &window {
                for &f in cat.hom(a, b) {
                    let mf = self.matrix(f).expect("window");
                    for &c in &window {
                        let vc = self.values[c].as_ref().expect("window");
                        for &g in cat.hom(b, c) {
                            report.pairs_checked += 1;
                            let gf = cat.compose(g, f);
                            let lhs = self.matrix(gf).expect("window");
                            let d = self.matrix(g).expect("window").mul(mf).sub(lhs);
                            if !(0..d.cols()).all(|j| vc.element_is_zero(&d.column(j))) {
                                report.violations.push(Violation::Composition { f, g });
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// The same functor with every matrix materialised.
    pub fn to_full(&self) -> FunctorRep<R> {
        let maps = (0..self.cat.morphism_count())
            .map(|f| self.matrix(f).cloned())
            .collect();
        FunctorRep {
            cat: self.cat.clone(),
            values: self.values.clone(),
            store: MapStore::Full(maps),
            semi: self.semi,
        }
    }

    /// Replaces one stored matrix entry; used to build deliberately broken
    /// inputs.
    pub fn with_entry(&self, f: MorId, row: usize, col: usize, value: R) -> FunctorRep<R> {
        let mut full = self.to_full();
        if let MapStore::Full(maps) = &mut full.store {
            if let Some(m) = maps[f].as_mut() {
                m[(row, col)] = value;
            }
        }
        full
    }

    /// Same values and maps on the objects accepted by `keep`.
    pub fn restrict_window(&self, keep: impl Fn(ObjId) -> bool) -> FunctorRep<R> {
        let values: Vec<_> = self
            .values
            .iter()
            .enumerate()
            .map(|(o, v)| if keep(o) { v.clone() } else { None })
            .collect();
        let store = match &self.store {
            MapStore::Full(maps) => MapStore::Full(
                maps.iter()
                    .enumerate()
                    .map(|(f, m)| {
                        let inside = keep(self.cat.source(f)) && keep(self.cat.target(f));
                        if inside {
                            m.clone()
                        } else {
                            None
                        }
                    })
                    .collect(),
            ),
            MapStore::Generated { gens, .. } => MapStore::Generated {
                gens: gens.clone(),
                cache: (0..self.cat.morphism_count())
                    .map(|_| OnceLock::new())
                    .collect(),
            },
        };
        FunctorRep {
            cat: self.cat.clone(),
            values,
            store,
            semi: self.semi,
        }
    }
}

pub(crate) fn generator_id(cat: &FinCat, g: &Generator) -> Option<MorId> {
    let a = cat.object_of_grade(g.source())?;
    let b = cat.object_of_grade(g.target())?;
    cat.lookup(a, b, &Payload::Injection(g.payload()))
}

/// Generators of the category whose endpoints lie in the window.
pub(crate) fn generators_in_window<R: Ring>(
    cat: &FinCat,
    values: &[Option<FPModule<R>>],
) -> Vec<Generator> {
    let inside = |n: usize| cat.object_of_grade(n).is_some_and(|o| values[o].is_some());
    let mut out = Vec::new();
    for o in cat.objects() {
        let n = o.grade;
        if !inside(n) {
            continue;
        }
        for i in 1..n {
            out.push(Generator::Transposition { n, i });
        }
        out.push(Generator::Insert { n });
        if n > 0 {
            out.push(Generator::Delete { n });
        }
    }
    out.retain(|g| inside(g.target()) && generator_id(cat, g).is_some());
    out
}

/// A natural transformation between two representations on one category.
#[derive(Clone, Debug)]
pub struct NatTrans<R: Ring> {
    pub source: Arc<FunctorRep<R>>,
    pub target: Arc<FunctorRep<R>>,
    /// Component at each object where both sides are defined.
    pub components: Vec<Option<Matrix<R>>>,
}

impl<R: Ring> NatTrans<R> {
    pub fn new(
        source: Arc<FunctorRep<R>>,
        target: Arc<FunctorRep<R>>,
        components: Vec<Option<Matrix<R>>>,
    ) -> Result<Self, FunRepError> {
        if !Arc::ptr_eq(source.category(), target.category()) {
            return Err(FunRepError::CategoryMismatch(
                source.category().name().into(),
                target.category().name().into(),
            ));
        }
        for (o, c) in components.iter().enumerate() {
            if let (Some(c), Some(a), Some(b)) = (c, source.value(o), target.value(o)) {
                ModuleHom::new(a.clone(), b.clone(), c.clone()).map_err(|e| {
                    FunRepError::Object {
                        obj: o,
                        msg: e.to_string(),
                    }
                })?;
            }
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }

    pub fn component(&self, o: ObjId) -> Option<ModuleHom<R>> {
        Some(ModuleHom {
            source: self.source.value(o)?.clone(),
            target: self.target.value(o)?.clone(),
            matrix: self.components[o].clone()?,
        })
    }

    /// Morphisms whose naturality square fails.
    pub fn naturality_failures(&self) -> Vec<MorId> {
        let cat = self.source.category();
        let mut bad = Vec::new();
        for f in 0..cat.morphism_count() {
            let (a, b) = (cat.source(f), cat.target(f));
            let (Some(ca), Some(cb)) = (&self.components[a], &self.components[b]) else {
                continue;
            };
            let (Some(sf), Some(tf)) = (self.source.matrix(f), self.target.matrix(f)) else {
                continue;
            };
            let d = tf.mul(ca).sub(&cb.mul(sf));
            let tb = self.target.value(b).expect("component defined");
            if !(0..d.cols()).all(|j| tb.element_is_zero(&d.column(j))) {
                bad.push(f);
            }
        }
        bad
    }

    pub fn is_zero(&self) -> bool {
        (0..self.components.len()).all(|o| self.component(o).is_none_or(|h| h.is_zero()))
    }
}

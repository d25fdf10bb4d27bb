//! The JSON spec format: a category builder, an optional functor and an
//! optional stabiliser declaration.
//!
//! Coefficients are JSON numbers when they fit in 53 bits and decimal strings
//! otherwise (rationals always as `"p/q"` strings). Matrices are row-major.
//! Morphisms are named by source, target and payload: subsets as sorted
//! arrays, partial injections and based maps as the image of `1, 2, ...` with
//! `0` for an undefined point (or the basepoint).

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polycoef::cats::{
    build_category, CategorySpec, FinCat, Generator, MorId, ObjId, Payload, StabiliserStructure,
    DEFAULT_BUDGET,
};
use polycoef::exactalg::{FPModule, Matrix, Ring, RingTag};
use polycoef::funrep::{
    chain_point_functor, constant_functor, pointed_linearisation, presented_functor,
    random_functor, representable_functor, seeded_rng, th_on, zero_functor, FunctorRep,
    RandomFunctorConfig, Relation, Violation,
};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default = "default_ring")]
    pub ring: RingTag,
    pub category: CategorySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<FunctorSpec>,
    /// Largest grade kept by the built-in functors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabiliser: Option<StabiliserSpec>,
}

fn default_ring() -> RingTag {
    RingTag::Z
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StabiliserSpec {
    Standard,
    /// The shifts by `1..=k` points.
    Multi {
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctorSpec {
    Zero,
    Constant {
        rank: usize,
    },
    Representable {
        object: ObjId,
    },
    /// Independent sets of size at most `h` on the subset category.
    Th {
        #[serde(default)]
        h: Option<usize>,
    },
    ChainPoint,
    Linearisation {
        #[serde(default)]
        reduced: bool,
    },
    Random {
        seed: u64,
        #[serde(default = "default_grades")]
        grades: Vec<usize>,
        #[serde(default = "default_small")]
        max_summands: usize,
        #[serde(default = "default_small")]
        max_relations: usize,
        #[serde(default = "default_small")]
        max_terms: usize,
        #[serde(default = "default_bound")]
        coefficient_bound: i64,
    },
    /// A quotient of a sum of representables.
    Presented {
        summands: Vec<ObjId>,
        #[serde(default)]
        relations: Vec<RelationSpec>,
    },
    Explicit {
        /// One entry per object; `null` leaves the object outside the window.
        values: Vec<Option<ValueSpec>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        maps: Vec<MapSpec>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        generators: Vec<GeneratorSpec>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        semi: bool,
    },
}

fn default_grades() -> Vec<usize> {
    vec![0, 1, 2]
}

fn default_small() -> usize {
    3
}

fn default_bound() -> i64 {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub at: ObjId,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub summand: usize,
    pub payload: Value,
    pub coeff: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueSpec {
    pub generators: usize,
    /// Relations as a `generators × r` matrix; `[]` for a free module.
    #[serde(default)]
    pub relations: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub source: ObjId,
    pub target: ObjId,
    pub payload: Value,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorName {
    Transposition { n: usize, i: usize },
    Insert { n: usize },
    Delete { n: usize },
}

impl From<Generator> for GeneratorName {
    fn from(g: Generator) -> Self {
        match g {
            Generator::Transposition { n, i } => GeneratorName::Transposition { n, i },
            Generator::Insert { n } => GeneratorName::Insert { n },
            Generator::Delete { n } => GeneratorName::Delete { n },
        }
    }
}

impl From<GeneratorName> for Generator {
    fn from(g: GeneratorName) -> Self {
        match g {
            GeneratorName::Transposition { n, i } => Generator::Transposition { n, i },
            GeneratorName::Insert { n } => Generator::Insert { n },
            GeneratorName::Delete { n } => Generator::Delete { n },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub generator: GeneratorName,
    pub matrix: Vec<Vec<Value>>,
}

/// A spec with its category, functor and stabiliser built.
pub struct Loaded<R: Ring> {
    pub path: String,
    pub file: SpecFile,
    pub cat: Arc<FinCat>,
    pub functor: Option<FunctorRep<R>>,
}

impl<R: Ring> Loaded<R> {
    pub fn functor(&self) -> Result<&FunctorRep<R>, CliError> {
        self.functor
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs a spec with a functor".into()))
    }

    pub fn stabiliser(&self) -> Result<StabiliserStructure, CliError> {
        let st = match self.file.stabiliser {
            None | Some(StabiliserSpec::Standard) => {
                StabiliserStructure::standard(self.cat.clone())
            }
            Some(StabiliserSpec::Multi { k }) => StabiliserStructure::multi(self.cat.clone(), k),
        };
        st.map_err(|e| CliError::input(&self.path, "stabiliser", e))
    }
}

/// Parses a spec, reporting serde errors with their line and column.
pub fn parse_spec(file: &str, text: &str) -> Result<SpecFile, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::input(file, format!("line {}, column {}", e.line(), e.column()), e))
}

/// Builds everything a spec describes and validates the functor.
pub fn load<R: Ring>(file: &str, spec: SpecFile) -> Result<Loaded<R>, CliError> {
    let cat = Arc::new(
        build_category(&spec.category, DEFAULT_BUDGET)
            .map_err(|e| CliError::input(file, "category", e))?,
    );
    let functor = match &spec.functor {
        None => None,
        Some(f) => {
            let t = build_functor::<R>(file, &cat, f, spec.window)?;
            let report = t.validate();
            if !report.passes() {
                let shown: Vec<String> = report
                    .violations
                    .iter()
                    .take(5)
                    .map(|v| describe_violation(&cat, v))
                    .collect();
                return Err(CliError::input(
                    file,
                    "functor",
                    format!(
                        "not a functor ({} violations): {}",
                        report.violations.len(),
                        shown.join("; ")
                    ),
                ));
            }
            Some(t)
        }
    };
    if let Some(StabiliserSpec::Multi { k: 0 }) = spec.stabiliser {
        return Err(CliError::input(
            file,
            "stabiliser.k",
            "needs at least one shift",
        ));
    }
    Ok(Loaded {
        path: file.to_string(),
        file: spec,
        cat,
        functor,
    })
}

fn describe_morphism(cat: &FinCat, f: MorId) -> String {
    format!(
        "{} -> {} {}",
        cat.source(f),
        cat.target(f),
        encode_payload(cat.payload(f))
    )
}

fn describe_violation(cat: &FinCat, v: &Violation) -> String {
    match v {
        Violation::Shape { mor } => {
            format!("wrong matrix shape at {}", describe_morphism(cat, *mor))
        }
        Violation::IllDefined { mor } => {
            format!(
                "matrix does not respect relations at {}",
                describe_morphism(cat, *mor)
            )
        }
        Violation::Composition { f, g } => format!(
            "composition fails for {} then {}",
            describe_morphism(cat, *f),
            describe_morphism(cat, *g)
        ),
        Violation::Identity { obj } => format!("identity of object {obj} is not the identity"),
    }
}

fn build_functor<R: Ring>(
    file: &str,
    cat: &Arc<FinCat>,
    spec: &FunctorSpec,
    window: Option<usize>,
) -> Result<FunctorRep<R>, CliError> {
    let fail = |loc: &str, e: &dyn std::fmt::Display| CliError::input(file, loc, e.to_string());
    let windowed = |t: FunctorRep<R>| match window {
        Some(w) => t.restrict_window(|o| cat.object(o).grade <= w),
        None => t,
    };
    let check_object = |loc: &str, o: ObjId| {
        if o < cat.object_count() {
            Ok(o)
        } else {
            Err(fail(
                loc,
                &format!("object {o} does not exist ({} objects)", cat.object_count()),
            ))
        }
    };
    Ok(match spec {
        FunctorSpec::Zero => windowed(zero_functor(cat.clone())),
        FunctorSpec::Constant { rank } => {
            windowed(constant_functor(cat.clone(), FPModule::free(*rank)))
        }
        FunctorSpec::Representable { object } => windowed(representable_functor(
            cat.clone(),
            check_object("functor.object", *object)?,
        )),
        FunctorSpec::Th { h } => windowed(th_on(cat.clone(), *h).map_err(|e| fail("functor", &e))?),
        FunctorSpec::ChainPoint => {
            let Some(CategorySpec::Chain { max }) = cat.spec() else {
                return Err(fail(
                    "functor.kind",
                    &"chain_point needs the chain category",
                ));
            };
            let t = chain_point_functor(*max).map_err(|e| fail("functor", &e))?;
            // rebuilt on the loaded category so every functor of a spec shares it
            rehome(windowed(t), cat)
        }
        FunctorSpec::Linearisation { reduced } => {
            windowed(pointed_linearisation(cat.clone(), *reduced).map_err(|e| fail("functor", &e))?)
        }
        FunctorSpec::Random {
            seed,
            grades,
            max_summands,
            max_relations,
            max_terms,
            coefficient_bound,
        } => {
            if !(0..cat.object_count()).any(|o| grades.contains(&cat.object(o).grade)) {
                return Err(fail("functor.grades", &"no object has one of these grades"));
            }
            let cfg = RandomFunctorConfig {
                summand_grades: grades.clone(),
                max_summands: *max_summands,
                max_relations: *max_relations,
                max_terms: *max_terms,
                coefficient_bound: *coefficient_bound,
                window,
            };
            random_functor(cat.clone(), &cfg, &mut seeded_rng(*seed))
        }
        FunctorSpec::Presented {
            summands,
            relations,
        } => {
            for (i, &s) in summands.iter().enumerate() {
                check_object(&format!("functor.summands[{i}]"), s)?;
            }
            let mut rels = Vec::with_capacity(relations.len());
            for (j, r) in relations.iter().enumerate() {
                let loc = format!("functor.relations[{j}]");
                let at = check_object(&format!("{loc}.at"), r.at)?;
                let mut terms = Vec::with_capacity(r.terms.len());
                for (t, term) in r.terms.iter().enumerate() {
                    let tloc = format!("{loc}.terms[{t}]");
                    let Some(&source) = summands.get(term.summand) else {
                        return Err(fail(
                            &format!("{tloc}.summand"),
                            &format!("no summand {}", term.summand),
                        ));
                    };
                    let phi = decode_morphism(cat, source, at, &term.payload)
                        .map_err(|e| fail(&format!("{tloc}.payload"), &e))?;
                    let c = decode_coeff::<R>(&term.coeff)
                        .map_err(|e| fail(&format!("{tloc}.coeff"), &e))?;
                    terms.push((term.summand, phi, c));
                }
                rels.push(Relation { at, terms });
            }
            presented_functor(cat.clone(), summands, &rels, window)
                .map_err(|e| fail("functor", &e))?
        }
        FunctorSpec::Explicit {
            values,
            maps,
            generators,
            semi,
        } => {
            if values.len() != cat.object_count() {
                return Err(fail(
                    "functor.values",
                    &format!(
                        "{} entries for {} objects",
                        values.len(),
                        cat.object_count()
                    ),
                ));
            }
            let mut modules = Vec::with_capacity(values.len());
            for (o, v) in values.iter().enumerate() {
                modules.push(match v {
                    None => None,
                    Some(v) => {
                        let loc = format!("functor.values[{o}].relations");
                        let cols = v.relations.first().map_or(0, Vec::len);
                        let rel = decode_matrix::<R>(&v.relations, v.generators, cols)
                            .map_err(|e| fail(&loc, &format!("object {o}: {e}")))?;
                        Some(FPModule::new(rel))
                    }
                });
            }
            let shape = |a: ObjId, b: ObjId| {
                let g = |o: ObjId| modules[o].as_ref().map(FPModule::generators);
                (g(b), g(a))
            };
            if !generators.is_empty() {
                if !maps.is_empty() || *semi {
                    return Err(fail("functor", &"give either maps or generators, not both"));
                }
                let mut gens = HashMap::new();
                for (i, g) in generators.iter().enumerate() {
                    let loc = format!("functor.generators[{i}].matrix");
                    let gen: Generator = g.generator.into();
                    let ends = (
                        cat.object_of_grade(gen.source()),
                        cat.object_of_grade(gen.target()),
                    );
                    let (Some(a), Some(b)) = ends else {
                        return Err(fail(
                            &format!("functor.generators[{i}]"),
                            &"generator leaves the category",
                        ));
                    };
                    let (Some(rows), Some(cols)) = shape(a, b) else {
                        continue;
                    };
                    let m = decode_matrix::<R>(&g.matrix, rows, cols)
                        .map_err(|e| fail(&loc, &format!("object {b}: {e}")))?;
                    gens.insert(gen, m);
                }
                FunctorRep::from_generators(cat.clone(), modules, gens)
                    .map_err(|e| fail("functor", &e))?
            } else {
                let mut table: Vec<Option<Matrix<R>>> = vec![None; cat.morphism_count()];
                for (i, m) in maps.iter().enumerate() {
                    let loc = format!("functor.maps[{i}]");
                    let a = check_object(&format!("{loc}.source"), m.source)?;
                    let b = check_object(&format!("{loc}.target"), m.target)?;
                    let f = decode_morphism(cat, a, b, &m.payload)
                        .map_err(|e| fail(&format!("{loc}.payload"), &e))?;
                    let (Some(rows), Some(cols)) = shape(a, b) else {
                        return Err(fail(&loc, &"morphism leaves the window"));
                    };
                    let mat = decode_matrix::<R>(&m.matrix, rows, cols)
                        .map_err(|e| fail(&format!("{loc}.matrix"), &format!("object {b}: {e}")))?;
                    if table[f].replace(mat).is_some() {
                        return Err(fail(&loc, &"morphism given twice"));
                    }
                }
                for f in 0..cat.morphism_count() {
                    let (a, b) = (cat.source(f), cat.target(f));
                    if table[f].is_none() && modules[a].is_some() && modules[b].is_some() {
                        if cat.is_identity(f) && !*semi {
                            table[f] =
                                Some(Matrix::identity(modules[a].as_ref().unwrap().generators()));
                        } else {
                            return Err(fail(
                                "functor.maps",
                                &format!("missing {}", describe_morphism(cat, f)),
                            ));
                        }
                    }
                }
                FunctorRep::from_matrices(cat.clone(), modules, table, *semi)
                    .map_err(|e| fail("functor", &e))?
            }
        }
    })
}

/// The same representation on another copy of its category.
fn rehome<R: Ring>(t: FunctorRep<R>, cat: &Arc<FinCat>) -> FunctorRep<R> {
    let maps = (0..cat.morphism_count())
        .map(|f| t.matrix(f).cloned())
        .collect();
    FunctorRep::from_matrices(cat.clone(), t.values().to_vec(), maps, t.is_semi())
        .expect("same category")
}

fn mask_elements(mask: u32) -> Vec<u32> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

pub fn encode_payload(p: &Payload) -> Value {
    match p {
        Payload::Subset(s) => json!(mask_elements(*s)),
        Payload::Inclusion { lower, upper } => {
            json!({ "lower": mask_elements(*lower), "upper": mask_elements(*upper) })
        }
        Payload::Injection(p) => json!(p.assignment()),
        Payload::Based(b) => json!(b.assignment()),
        Payload::Wreath(p, labels) => {
            json!({ "map": p.assignment(), "labels": &labels[..p.source()] })
        }
        Payload::Group(g) => json!(g),
        Payload::Unique => Value::Null,
    }
}

/// The morphism `a → b` whose encoded payload is `v`.
pub fn decode_morphism(cat: &FinCat, a: ObjId, b: ObjId, v: &Value) -> Result<MorId, String> {
    let hom = cat.hom(a, b);
    if hom.is_empty() {
        return Err(format!("there are no morphisms {a} -> {b}"));
    }
    hom.iter()
        .copied()
        .find(|&f| encode_payload(cat.payload(f)) == *v)
        .ok_or_else(|| format!("no morphism {a} -> {b} has payload {v}"))
}

/// Largest magnitude written as a JSON number.
const EXACT_JSON: i64 = 1 << 53;

pub fn encode_coeff<R: Ring>(x: &R) -> Value {
    let s = x.to_string();
    match s.parse::<i64>() {
        Ok(i) if i.abs() < EXACT_JSON => json!(i),
        _ => Value::String(s),
    }
}

pub fn decode_coeff<R: Ring>(v: &Value) -> Result<R, String> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) if i.abs() < EXACT_JSON => Ok(R::from_i64(i)),
            _ => Err(format!("{n} is not an exact integer; write it as a string")),
        },
        Value::String(s) => {
            R::parse(s).ok_or_else(|| format!("cannot read `{s}` as an element of {}", R::TAG))
        }
        other => Err(format!("expected a number or a string, found {other}")),
    }
}

pub fn encode_matrix<R: Ring>(m: &Matrix<R>) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(encode_coeff).collect())
        .collect()
}

/// Reads a row-major matrix of the given shape; `[]` stands for any matrix
/// with no entries.
pub fn decode_matrix<R: Ring>(
    rows: &[Vec<Value>],
    r: usize,
    c: usize,
) -> Result<Matrix<R>, String> {
    if rows.is_empty() && (r == 0 || c == 0) {
        return Ok(Matrix::zeros(r, c));
    }
    if rows.len() != r {
        return Err(format!("expected {r} row(s), found {}", rows.len()));
    }
    let mut out = Matrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(format!("row {i} has {} entries, expected {c}", row.len()));
        }
        for (j, v) in row.iter().enumerate() {
            out[(i, j)] = decode_coeff(v).map_err(|e| format!("entry ({i}, {j}): {e}"))?;
        }
    }
    Ok(out)
}

/// An explicit spec reproducing `t` exactly.
pub fn export<R: Ring>(category: &CategorySpec, t: &FunctorRep<R>) -> SpecFile {
    let cat = t.category();
    let values = t
        .values()
        .iter()
        .map(|v| {
            v.as_ref().map(|m| ValueSpec {
                generators: m.generators(),
                relations: encode_matrix(m.relations()),
            })
        })
        .collect();
    let (maps, generators) = match t.generator_matrices() {
        Some(gens) => {
            let mut list: Vec<_> = gens.iter().collect();
            list.sort_by_key(|(g, _)| **g);
            let generators = list
                .into_iter()
                .map(|(g, m)| GeneratorSpec {
                    generator: (*g).into(),
                    matrix: encode_matrix(m),
                })
                .collect();
            (Vec::new(), generators)
        }
        None => {
            let maps = (0..cat.morphism_count())
                .filter_map(|f| {
                    t.matrix(f).map(|m| MapSpec {
                        source: cat.source(f),
                        target: cat.target(f),
                        payload: encode_payload(cat.payload(f)),
                        matrix: encode_matrix(m),
                    })
                })
                .collect();
            (maps, Vec::new())
        }
    };
    SpecFile {
        ring: R::TAG,
        category: category.clone(),
        functor: Some(FunctorSpec::Explicit {
            values,
            maps,
            generators,
            semi: t.is_semi(),
        }),
        window: None,
        stabiliser: None,
    }
}

/// Equal values, storage and matrices on every morphism of the window.
pub fn same_representation<R: Ring>(a: &FunctorRep<R>, b: &FunctorRep<R>) -> bool {
    let cat = a.category();
    a.values() == b.values()
        && a.is_semi() == b.is_semi()
        && a.uses_generators() == b.uses_generators()
        && a.generator_matrices() == b.generator_matrices()
        && cat.morphisms() == b.category().morphisms()
        && (0..cat.morphism_count()).all(|f| a.matrix(f) == b.matrix(f))
}

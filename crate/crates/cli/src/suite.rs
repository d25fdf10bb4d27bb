//! Property suites run by `polycoef verify`.
//!
//! Every random sample is drawn from ChaCha8 seeded with
//! `seed + (salt << 32) + case`, where `salt` is the suite's position in
//! [`Suite::ALL`] plus one. A failing random case carries a spec that rebuilds
//! its functor through the CLI.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use polycoef::catring::{
    check_property_star, decomposition_check, induce_along, module_induction, random_monoid_module,
    rational_trace, transport_check, MonoidSquare,
};
use polycoef::cats::{
    build_category, check_braidable, find_conjugator, structural_map, CatFunctor, CatIStructure,
    CategorySpec, FinCat, ShiftedPartition, StabiliserStructure, StructuralKind, DEFAULT_BUDGET,
};
use polycoef::exactalg::{FPModule, Ring, RingTag};
use polycoef::funrep::{
    build_th, chain_point_functor, constant_functor, pointed_linearisation, pointwise_tensor,
    precompose, random_functor, seeded_rng, shifted_functor, zero_functor, FunctorRep,
    RandomFunctorConfig,
};
use polycoef::invariants::{
    coproduct_height, cross_effect, cubes_up_to, degree, fi_height, height, height_with,
    partition_subobjects, taylor_functor, taylor_stage, CrossFlavor, Cubes, DegreeValue,
    DegreeVariant, HeightMode,
};

use crate::commands::{full_inclusion, BRAID_BUDGET};
use crate::report::invariants_json;
use crate::spec::{FunctorSpec, SpecFile};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ThHeights,
    CrossEffects,
    Subobjects,
    Degrees,
    MultiStabiliser,
    HeightComparison,
    FiRestriction,
    Braiding,
    Induction,
    Decomposition,
    CrbarDegeneracy,
    Taylor,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::ThHeights,
        Suite::CrossEffects,
        Suite::Subobjects,
        Suite::Degrees,
        Suite::MultiStabiliser,
        Suite::HeightComparison,
        Suite::FiRestriction,
        Suite::Braiding,
        Suite::Induction,
        Suite::Decomposition,
        Suite::CrbarDegeneracy,
        Suite::Taylor,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::ThHeights => "th-heights",
            Suite::CrossEffects => "cross-effects",
            Suite::Subobjects => "subobjects",
            Suite::Degrees => "degrees",
            Suite::MultiStabiliser => "multi-stabiliser",
            Suite::HeightComparison => "height-comparison",
            Suite::FiRestriction => "fi-restriction",
            Suite::Braiding => "braiding",
            Suite::Induction => "induction",
            Suite::Decomposition => "decomposition",
            Suite::CrbarDegeneracy => "crbar-degeneracy",
            Suite::Taylor => "taylor",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Suite::ThHeights => "independent-set functors: mode I height 1, mode oplus height h",
            Suite::CrossEffects => "cr, crbar and crbarprime agree on random cube functors",
            Suite::Subobjects => {
                "image-kernel and alternating-sum subobjects agree on partial injections"
            }
            Suite::Degrees => {
                "wdeg <= deg <= ideg <= sdeg, collapse on partial injections, chain witness"
            }
            Suite::MultiStabiliser => "single and iterated shifts give the same degree",
            Suite::HeightComparison => {
                "mode I height is at most mode oplus, equal with conjugations"
            }
            Suite::FiRestriction => {
                "height on injections equals mode I height on partial injections"
            }
            Suite::Braiding => "braidings and monotonicity of degree under shifts and inclusions",
            Suite::Induction => {
                "induction along functors, condition (*) and the transported tensor"
            }
            Suite::Decomposition => "T(s(n)) against the induced graded cross-effects",
            Suite::CrbarDegeneracy => "the cokernel cross-effects of T_2 never vanish",
            Suite::Taylor => "Taylor stages on pointed sets and the height bound",
        }
    }

    fn salt(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).expect("listed") as u64 + 1
    }

    /// Sizes used when none are given on the command line.
    pub fn defaults(&self) -> SuiteConfig {
        let (samples, max_n) = match self {
            Suite::ThHeights => (0, 3),
            Suite::CrossEffects => (50, 3),
            Suite::Subobjects => (4, 4),
            Suite::Degrees => (6, 4),
            Suite::MultiStabiliser => (4, 6),
            Suite::HeightComparison => (6, 4),
            Suite::FiRestriction => (6, 4),
            Suite::Braiding => (4, 4),
            Suite::Induction => (10, 4),
            Suite::Decomposition => (4, 3),
            Suite::CrbarDegeneracy => (0, 5),
            Suite::Taylor => (4, 4),
        };
        SuiteConfig {
            samples,
            max_n,
            seed: 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}` ({})", names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Number of random samples.
    pub samples: usize,
    /// Largest object size (or window) examined.
    pub max_n: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseFailure {
    pub case: usize,
    pub check: String,
    pub detail: Value,
    /// A spec rebuilding the sampled functor, for random cases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    pub cases: usize,
    pub passed: bool,
    pub failures: Vec<CaseFailure>,
}

/// One check inside a suite: `Ok(None)` on success.
type CaseResult = Result<Option<(String, Value)>, CliError>;

struct Case<'a> {
    replay: Option<Value>,
    run: Box<dyn Fn() -> CaseResult + Send + Sync + 'a>,
}

fn fixed<'a>(run: impl Fn() -> CaseResult + Send + Sync + 'a) -> Case<'a> {
    Case {
        replay: None,
        run: Box::new(run),
    }
}

fn fail(check: &str, detail: Value) -> CaseResult {
    Ok(Some((check.to_string(), detail)))
}

fn expect(ok: bool, check: &str, detail: impl FnOnce() -> Value) -> CaseResult {
    if ok {
        Ok(None)
    } else {
        fail(check, detail())
    }
}

fn run_cases(suite: Suite, config: SuiteConfig, cases: Vec<Case<'_>>) -> SuiteReport {
    let outcomes: Vec<Option<CaseFailure>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let (check, detail) = match (c.run)() {
                Ok(None) => return None,
                Ok(Some(found)) => found,
                Err(e) => ("error".to_string(), json!(e.to_string())),
            };
            Some(CaseFailure {
                case: i,
                check,
                detail,
                replay: c.replay.clone(),
            })
        })
        .collect();
    let failures: Vec<CaseFailure> = outcomes.into_iter().flatten().collect();
    SuiteReport {
        suite,
        config,
        cases: cases.len(),
        passed: failures.is_empty(),
        failures,
    }
}

/// Shape of the random functors drawn by the suites.
fn sample_config(grades: Vec<usize>) -> RandomFunctorConfig {
    RandomFunctorConfig {
        summand_grades: grades,
        max_summands: 2,
        max_relations: 2,
        max_terms: 3,
        coefficient_bound: 3,
        window: None,
    }
}

struct Sampler {
    seed: u64,
    salt: u64,
}

impl Sampler {
    fn case_seed(&self, case: usize) -> u64 {
        self.seed
            .wrapping_add(self.salt << 32)
            .wrapping_add(case as u64)
    }

    fn functor<R: Ring>(
        &self,
        cat: &Arc<FinCat>,
        grades: Vec<usize>,
        case: usize,
    ) -> FunctorRep<R> {
        let mut rng = seeded_rng(self.case_seed(case));
        random_functor(cat.clone(), &sample_config(grades), &mut rng)
    }

    fn replay(&self, cat: &FinCat, grades: Vec<usize>, case: usize) -> Option<Value> {
        let cfg = sample_config(grades);
        let spec = SpecFile {
            ring: RingTag::Z,
            category: cat.spec()?.clone(),
            functor: Some(FunctorSpec::Random {
                seed: self.case_seed(case),
                grades: cfg.summand_grades,
                max_summands: cfg.max_summands,
                max_relations: cfg.max_relations,
                max_terms: cfg.max_terms,
                coefficient_bound: cfg.coefficient_bound,
            }),
            window: None,
            stabiliser: None,
        };
        serde_json::to_value(spec).ok()
    }
}

fn category(spec: CategorySpec) -> Result<Arc<FinCat>, CliError> {
    Ok(Arc::new(build_category(&spec, DEFAULT_BUDGET)?))
}

fn grades_up_to(max: usize, top: usize) -> Vec<usize> {
    (0..=top.min(max)).collect()
}

pub fn run_suite<R: Ring>(suite: Suite, config: SuiteConfig) -> Result<SuiteReport, CliError> {
    let sampler = Sampler {
        seed: config.seed,
        salt: suite.salt(),
    };
    let s = &sampler;
    let n = config.max_n;
    let samples = config.samples;
    match suite {
        Suite::ThHeights => {
            let mut cases = Vec::new();
            for h in 2..=n.max(2) {
                cases.push(fixed(move || {
                    let window = 2 * h + 1;
                    let t: FunctorRep<R> = build_th(Some(h), window)?;
                    let i = height(&t, HeightMode::I, CrossFlavor::Cr, window)?.value;
                    let o = height(&t, HeightMode::Oplus, CrossFlavor::Cr, window)?.value;
                    expect(
                        i == 1 && o == h as i64,
                        "T_h heights",
                        || json!({ "h": h, "mode_i": i, "mode_oplus": o, "expected": [1, h] }),
                    )
                }));
            }
            Ok(run_cases(suite, config, cases))
        }
        Suite::CrossEffects => {
            let cubes = cubes_up_to(n)?;
            let cubes = &cubes;
            let cases = (0..samples)
                .map(|case| {
                    let size = case % (n + 1);
                    let c = &cubes[size];
                    Case {
                        replay: s.replay(&c.monoid, vec![size], case),
                        run: Box::new(move || {
                            let t: FunctorRep<R> = s.functor(&c.monoid, vec![size], case);
                            let mut found = Vec::new();
                            for flavor in [CrossFlavor::Cr, CrossFlavor::CrBar, CrossFlavor::CrBarPrime] {
                                let ce = cross_effect(&c.reindex(&t, flavor)?, flavor)?;
                                found.push(ce.invariants().clone());
                            }
                            expect(found.windows(2).all(|w| w[0] == w[1]), "flavors disagree", || {
                                json!({ "n": size, "invariants": found.iter().map(invariants_json).collect::<Vec<_>>() })
                            })
                        }),
                    }
                })
                .collect();
            Ok(run_cases(suite, config, cases))
        }
        Suite::Subobjects => {
            let sharp = category(CategorySpec::FiSharp { max: n })?;
            let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET)?;
            let cubes = cubes_up_to(n)?;
            let (sharp, st, cubes) = (&sharp, &st, &cubes);
            let cases = (0..samples)
                .map(|case| Case {
                    replay: s.replay(sharp, grades_up_to(n, 2), case),
                    run: Box::new(move || {
                        let t: FunctorRep<R> = s.functor(sharp, grades_up_to(n, 2), case);
                        for m in 0..=n {
                            for k in 0..=m {
                                for lambda in ShiftedPartition::compositions(m, k) {
                                    let (alt, meet) =
                                        partition_subobjects(&t, st, &cubes[k], &lambda)?;
                                    if alt != meet {
                                        return fail(
                                            "subobjects differ",
                                            json!({ "partition": lambda.parts() }),
                                        );
                                    }
                                }
                            }
                        }
                        Ok(None)
                    }),
                })
                .collect();
            Ok(run_cases(suite, config, cases))
        }
        Suite::Degrees => degrees_suite::<R>(s, config),
        Suite::MultiStabiliser => {
            let sharp = category(CategorySpec::FiSharp { max: n })?;
            let single = StabiliserStructure::standard(sharp.clone())?;
            let multi = StabiliserStructure::multi(sharp.clone(), 2)?;
            let (sharp, single, multi) = (&sharp, &single, &multi);
            let cases = (0..samples)
                .map(|case| Case {
                    replay: s.replay(sharp, grades_up_to(n, 2), case),
                    run: Box::new(move || {
                        let t: FunctorRep<R> = s.functor(sharp, grades_up_to(n, 2), case);
                        let a = degree(&t, single, DegreeVariant::Deg, None)?.value;
                        let b = degree(&t, multi, DegreeVariant::Deg, None)?.value;
                        expect(
                            a == b && a.exact().is_some(),
                            "degrees differ",
                            || json!({ "single": a, "multi": b }),
                        )
                    }),
                })
                .collect();
            Ok(run_cases(suite, config, cases))
        }
        Suite::HeightComparison => {
            let sharp = category(CategorySpec::FiSharp { max: n })?;
            let subsets = category(CategorySpec::Subsets { max: n })?;
            let st_sharp = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET)?;
            let st_subsets = CatIStructure::standard(subsets.clone(), DEFAULT_BUDGET)?;
            let (sharp, subsets, st_sharp, st_subsets) = (&sharp, &subsets, &st_sharp, &st_subsets);
            let mut cases = Vec::new();
            for size in 0..=n {
                cases.push(fixed(move || {
                    let o = sharp.object_of_grade(size).expect("in range");
                    for r in 0u32..1 << size {
                        for t in (0u32..1 << size).filter(|t| t.count_ones() == r.count_ones()) {
                            if find_conjugator(sharp, o, r, t)?.is_none() {
                                return fail(
                                    "no conjugator",
                                    json!({ "n": size, "from": r, "to": t }),
                                );
                            }
                        }
                    }
                    Ok(None)
                }));
            }
            for case in 0..samples {
                let grades = grades_up_to(n, 2);
                cases.push(Case {
                    replay: s.replay(sharp, grades.clone(), case),
                    run: Box::new(move || {
                        let t: FunctorRep<R> = s.functor(sharp, grades.clone(), case);
                        let i = height_with(&t, st_sharp, HeightMode::I, CrossFlavor::Cr, n)?.value;
                        let o =
                            height_with(&t, st_sharp, HeightMode::Oplus, CrossFlavor::Cr, n)?.value;
                        expect(
                            i == o,
                            "heights differ with conjugations",
                            || json!({ "mode_i": i, "mode_oplus": o }),
                        )
                    }),
                });
            }
            for case in samples..2 * samples {
                let grades = grades_up_to(n, 2);
                cases.push(Case {
                    replay: s.replay(subsets, grades.clone(), case),
                    run: Box::new(move || {
                        let t: FunctorRep<R> = s.functor(subsets, grades.clone(), case);
                        let i =
                            height_with(&t, st_subsets, HeightMode::I, CrossFlavor::Cr, n)?.value;
                        let o = height_with(&t, st_subsets, HeightMode::Oplus, CrossFlavor::Cr, n)?
                            .value;
                        expect(
                            i <= o,
                            "mode I exceeds mode oplus",
                            || json!({ "mode_i": i, "mode_oplus": o }),
                        )
                    }),
                });
            }
            Ok(run_cases(suite, config, cases))
        }
        Suite::FiRestriction => {
            let incl = structural_map(&StructuralKind::FiInclusion { max: n }, DEFAULT_BUDGET)?;
            let incl = &incl;
            let cases = (0..samples)
                .map(|case| Case {
                    replay: s.replay(&incl.target, grades_up_to(n, 2), case),
                    run: Box::new(move || {
                        let t: FunctorRep<R> = s.functor(&incl.target, grades_up_to(n, 2), case);
                        let fi = fi_height(&precompose(&t, incl)?, n)?.value;
                        let i = height(&t, HeightMode::I, CrossFlavor::Cr, n)?.value;
                        expect(
                            fi == i,
                            "heights differ",
                            || json!({ "fi": fi, "mode_i": i }),
                        )
                    }),
                })
                .collect();
            Ok(run_cases(suite, config, cases))
        }
        Suite::Braiding => braiding_suite::<R>(s, config),
        Suite::Induction => induction_suite::<R>(s, config),
        Suite::Decomposition => {
            let sharp = category(CategorySpec::FiSharp { max: n })?;
            let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET)?;
            let (sharp, st) = (&sharp, &st);
            let cases = (0..samples)
                .map(|case| Case {
                    replay: s.replay(sharp, grades_up_to(n, 2), case),
                    run: Box::new(move || {
                        let t: FunctorRep<R> = s.functor(sharp, grades_up_to(n, 2), case);
                        for size in 0..=n {
                            let r = decomposition_check(&t, st, size)?;
                            if !r.isomorphic() {
                                return fail(
                                    "decomposition",
                                    json!({
                                        "n": size,
                                        "lhs": invariants_json(&r.lhs),
                                        "rhs": invariants_json(&r.rhs),
                                        "characters_agree": r.characters_agree(),
                                    }),
                                );
                            }
                        }
                        Ok(None)
                    }),
                })
                .collect();
            Ok(run_cases(suite, config, cases))
        }
        Suite::CrbarDegeneracy => {
            // level n is only probed by semi-functors with a nonempty head, at m > n
            let t: FunctorRep<R> = build_th(Some(2), n + 1)?;
            let report = Arc::new(height(&t, HeightMode::I, CrossFlavor::CrBar, n + 1)?);
            let cases = (1..=n)
                .map(|level| {
                    let report = report.clone();
                    fixed(move || {
                        expect(
                            !report.level_vanishes(level),
                            "level vanishes",
                            || json!({ "level": level }),
                        )
                    })
                })
                .collect();
            Ok(run_cases(suite, config, cases))
        }
        Suite::Taylor => taylor_suite::<R>(s, config),
    }
}

fn degrees_suite<R: Ring>(s: &Sampler, config: SuiteConfig) -> Result<SuiteReport, CliError> {
    let n = config.max_n;
    let hosts = [
        category(CategorySpec::FiSharp { max: n })?,
        category(CategorySpec::Fi { max: n })?,
        category(CategorySpec::Monotone { max: n })?,
    ];
    let stabilisers = hosts
        .iter()
        .map(|c| StabiliserStructure::standard(c.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let (hosts, stabilisers) = (&hosts, &stabilisers);
    let mut cases = vec![fixed(move || {
        let zero: FunctorRep<R> = zero_functor(hosts[0].clone());
        for v in DegreeVariant::ALL {
            let d = degree(&zero, &stabilisers[0], v, None)?.value;
            if d != DegreeValue::Exact(-1) {
                return fail("zero functor", json!({ "variant": v, "value": d }));
            }
        }
        Ok(None)
    })];
    for max in 2..=n + 2 {
        cases.push(fixed(move || {
            let t: FunctorRep<R> = chain_point_functor(max)?;
            let st = StabiliserStructure::standard(t.category().clone())?;
            let d = |v| degree(&t, &st, v, None).map(|r| r.value);
            let got = [
                d(DegreeVariant::Wdeg)?,
                d(DegreeVariant::Deg)?,
                d(DegreeVariant::Ideg)?,
            ];
            let want = [
                DegreeValue::Exact(-1),
                DegreeValue::Exact(0),
                DegreeValue::AtLeast(max as i64),
            ];
            expect(
                got == want,
                "chain witness",
                || json!({ "window": max, "got": got, "expected": want }),
            )
        }));
    }
    for case in 0..config.samples {
        let which = case % hosts.len();
        let cat = &hosts[which];
        let grades = grades_up_to(n, 1);
        cases.push(Case {
            replay: s.replay(cat, grades.clone(), case),
            run: Box::new(move || {
                let t: FunctorRep<R> = s.functor(cat, grades.clone(), case);
                let values = DegreeVariant::ALL
                    .iter()
                    .map(|&v| degree(&t, &stabilisers[which], v, None).map(|r| r.value))
                    .collect::<Result<Vec<_>, _>>()?;
                if !values.windows(2).all(|w| w[0].compatible_le(&w[1])) {
                    return fail(
                        "degree chain",
                        json!({ "category": cat.name(), "values": values }),
                    );
                }
                let collapse = values
                    .iter()
                    .all(|v| *v == values[0] && v.exact().is_some());
                expect(
                    which != 0 || collapse,
                    "no collapse on partial injections",
                    || json!({ "values": values }),
                )
            }),
        });
    }
    Ok(run_cases(Suite::Degrees, config, cases))
}

fn braiding_suite<R: Ring>(s: &Sampler, config: SuiteConfig) -> Result<SuiteReport, CliError> {
    let n = config.max_n;
    let fi = structural_map(&StructuralKind::FiInclusion { max: n }, DEFAULT_BUDGET)?;
    let mono = structural_map(
        &StructuralKind::MonotoneInclusion { max: n },
        DEFAULT_BUDGET,
    )?;
    let sharp = fi.target.clone();
    let st = StabiliserStructure::standard(sharp.clone())?;
    let st_fi = StabiliserStructure::standard(fi.source.clone())?;
    let st_mono = StabiliserStructure::standard(mono.source.clone())?;
    let (fi, mono, sharp, st, st_fi, st_mono) = (&fi, &mono, &sharp, &st, &st_fi, &st_mono);
    let mut cases = vec![
        fixed(move || {
            let found = check_braidable(st, BRAID_BUDGET)?;
            expect(found.is_some(), "no braiding on partial injections", || {
                json!(null)
            })
        }),
        fixed(move || {
            let found = check_braidable(st_mono, BRAID_BUDGET)?;
            expect(found.is_none(), "braiding on monotone injections", || {
                json!(null)
            })
        }),
    ];
    let grades = grades_up_to(n, 2);
    for case in 0..config.samples {
        let grades = grades.clone();
        cases.push(Case {
            replay: s.replay(sharp, grades.clone(), case),
            run: Box::new(move || {
                let t: FunctorRep<R> = s.functor(sharp, grades.clone(), case);
                let d = degree(&t, st, DegreeVariant::Deg, None)?.value;
                let shifted = degree(&shifted_functor(&t, st, 0)?, st, DegreeVariant::Deg, None)?.value;
                let on_fi = degree(&precompose(&t, fi)?, st_fi, DegreeVariant::Deg, None)?.value;
                let on_mono = degree(&precompose(&t, mono)?, st_mono, DegreeVariant::Deg, None)?.value;
                let ok = [shifted, on_fi, on_mono].iter().all(|v| v.compatible_le(&d));
                expect(ok, "degree increased", || {
                    json!({ "deg": d, "shifted": shifted, "on_injections": on_fi, "on_monotone": on_mono })
                })
            }),
        });
    }
    Ok(run_cases(Suite::Braiding, config, cases))
}

/// Largest `k + l` of the squares carrying random transport modules.
pub const TRANSPORT_MAX: usize = 3;

fn identity_functor(c: &Arc<FinCat>) -> CatFunctor {
    CatFunctor::identity(c.clone())
}

fn cyclic_table(order: usize) -> Vec<Vec<u16>> {
    (0..order)
        .map(|a| (0..order).map(|b| ((a + b) % order) as u16).collect())
        .collect()
}

/// Multiplication table of the symmetric group on `{0, 1, 2}`.
fn s3_table() -> Vec<Vec<u16>> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let pos = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("permutation") as u16;
    perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| pos([a[b[0]], a[b[1]], a[b[2]]]))
                .collect()
        })
        .collect()
}

fn induction_suite<R: Ring>(s: &Sampler, config: SuiteConfig) -> Result<SuiteReport, CliError> {
    let n = config.max_n;
    let small = category(CategorySpec::FiSharp { max: n.min(3) })?;
    let sharp = category(CategorySpec::FiSharp { max: n })?;
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET)?;
    let mut squares = Vec::new();
    for size in 0..=n {
        for k in 0..=size {
            let (sq, _) = MonoidSquare::partition_square(&st, k, size - k)?;
            squares.push((k, size - k, sq));
        }
    }
    let (small, sharp, squares) = (&small, &sharp, &squares);
    let mut cases: Vec<Case> = Vec::new();

    for case in 0..2 {
        cases.push(Case {
            replay: s.replay(small, vec![0, 1, 2], case),
            run: Box::new(move || {
                let g: FunctorRep<R> = s.functor(small, vec![0, 1, 2], case);
                let ind = induce_along(&identity_functor(small), &g)?;
                let unit = ind.unit(&g)?;
                for o in 0..small.object_count() {
                    let c = unit.component(o).expect("full window");
                    if !(c.is_injective() && c.is_surjective()) {
                        return fail("identity induction", json!({ "object": o }));
                    }
                }
                Ok(None)
            }),
        });
    }
    for table in [cyclic_table(4), s3_table()] {
        cases.push(fixed(move || {
            let order = table.len();
            let group = category(CategorySpec::Group {
                table: table.clone(),
            })?;
            let point = category(CategorySpec::Discrete { objects: 1 })?;
            let f = CatFunctor {
                name: "point".into(),
                source: point.clone(),
                target: group.clone(),
                obj_map: vec![0],
                mor_map: vec![group.identity(0)],
                semi: false,
            };
            let g: FunctorRep<R> = constant_functor(point, FPModule::free(1));
            let ind = induce_along(&f, &g)?;
            let v = ind.functor.value(0).expect("window");
            let character: Vec<R> = (0..order)
                .map(|x| rational_trace(v, ind.functor.matrix(x).expect("window")))
                .collect();
            let regular: Vec<R> = (0..order)
                .map(|x| {
                    R::from_i64(if group.is_identity(x) {
                        order as i64
                    } else {
                        0
                    })
                })
                .collect();
            let ok = v.invariants().free_rank == order
                && v.invariants().torsion.is_empty()
                && character == regular;
            expect(
                ok,
                "regular representation",
                || json!({ "order": order, "invariants": invariants_json(v.invariants()) }),
            )
        }));
    }
    let unit_objects: Vec<Vec<usize>> = vec![vec![n.min(2)], vec![1, n.min(3)]];
    for (i, objects) in unit_objects.into_iter().enumerate() {
        let case = 2 + i;
        cases.push(Case {
            replay: s.replay(sharp, vec![0, 1, 2], case),
            run: Box::new(move || {
                let t: FunctorRep<R> = s.functor(sharp, vec![0, 1, 2], case);
                let f = full_inclusion(sharp, &objects)?;
                let g = precompose(&t, &f)?;
                let unit = induce_along(&f, &g)?.unit(&g)?;
                for a in 0..objects.len() {
                    let c = unit.component(a).expect("full window");
                    if !(c.is_injective() && c.is_surjective()) {
                        return fail("unit not bijective", json!({ "objects": objects, "at": a }));
                    }
                }
                Ok(None)
            }),
        });
    }
    for case in 4..6 {
        cases.push(Case {
            replay: s.replay(small, vec![0, 1, 2], case),
            run: Box::new(move || {
                let t: FunctorRep<R> = s.functor(small, vec![0, 1, 2], case);
                let top = small.object_count() - 1;
                let f = full_inclusion(small, &[0, top])?;
                let g = precompose(&t, &f)?;
                let ind = induce_along(&f, &g)?;
                let ring = module_induction(&f, &g)?;
                let mut total = FPModule::zero();
                for b in 0..small.object_count() {
                    let v = ind.functor.value(b).expect("full window");
                    if &ring.summand(b)?.invariants() != v.invariants() {
                        return fail("summand differs", json!({ "object": b }));
                    }
                    total = total.direct_sum(v);
                }
                expect(total.is_isomorphic(&ring.module), "ring induction differs", || {
                    json!({ "functor": invariants_json(total.invariants()), "ring": invariants_json(ring.module.invariants()) })
                })
            }),
        });
    }
    for (k, l, sq) in squares.iter() {
        cases.push(fixed(move || {
            let r = check_property_star(sq, None)?;
            expect(r.holds, "condition (*)", || {
                json!({ "k": k, "l": l, "surjective": r.surjective, "disagreements": r.disagreements })
            })
        }));
    }
    let nontrivial: Vec<&(usize, usize, MonoidSquare)> = squares
        .iter()
        .filter(|(k, l, _)| (1..=TRANSPORT_MAX).contains(&(k + l)))
        .collect();
    let nontrivial = Arc::new(nontrivial);
    for case in 0..config.samples {
        let nontrivial = nontrivial.clone();
        cases.push(fixed(move || {
            let (k, l, sq) = nontrivial[case % nontrivial.len()];
            let mut rng = seeded_rng(s.case_seed(1000 + case));
            let rank = 1 + case % 2;
            let (m, action) = random_monoid_module::<R>(&sq.d, &sq.c, rank, 2, 3, &mut rng)?;
            let r = transport_check(sq, &m, &action)?;
            expect(r.holds(), "transported tensor", || {
                json!({
                    "k": k,
                    "l": l,
                    "module_seed": s.case_seed(1000 + case),
                    "rank": rank,
                    "lhs": invariants_json(&r.lhs),
                    "rhs": invariants_json(&r.rhs),
                    "characters_agree": r.characters_agree(),
                })
            })
        }));
    }
    Ok(run_cases(Suite::Induction, config, cases))
}

fn taylor_suite<R: Ring>(s: &Sampler, config: SuiteConfig) -> Result<SuiteReport, CliError> {
    let n = config.max_n.max(2);
    let gamma = category(CategorySpec::Pointed { max: n })?;
    let gamma = &gamma;
    let mut cases = vec![fixed(move || {
        let zt: FunctorRep<R> = pointed_linearisation(gamma.clone(), true)?;
        let one = zt
            .value(gamma.object_of_grade(1).expect("in range"))
            .expect("window");
        let p0 = taylor_stage(&zt, 1, 1)?.module;
        let p1 = taylor_stage(&zt, 1, 2)?.module;
        let square = pointwise_tensor(&zt, &zt)?;
        let p1_square = taylor_stage(&square, 1, 2)?.module;
        let ok = p0.is_zero() && p1.is_isomorphic(one) && p1_square.is_zero();
        expect(ok, "reduced linearisation", || {
            json!({
                "p0": invariants_json(p0.invariants()),
                "p1": invariants_json(p1.invariants()),
                "p1_of_square": invariants_json(p1_square.invariants()),
            })
        })
    })];
    for case in 0..config.samples {
        let grades = grades_up_to(n, 2);
        cases.push(Case {
            replay: s.replay(gamma, grades.clone(), case),
            run: Box::new(move || {
                let t: FunctorRep<R> = s.functor(gamma, grades.clone(), case);
                for d in 0..n {
                    let p = taylor_functor(&t, d)?;
                    let Some(top) = p.window_grade() else {
                        continue;
                    };
                    let h = coproduct_height(&p, top)?.value;
                    if h > d as i64 {
                        return fail(
                            "Taylor stage too high",
                            json!({ "d": d, "height": h, "window": top }),
                        );
                    }
                }
                Ok(None)
            }),
        });
    }
    Ok(run_cases(Suite::Taylor, config, cases))
}

/// Cube categories up to `n`, for callers outside the suites.
pub fn cubes(n: usize) -> Result<Vec<Cubes>, CliError> {
    Ok(cubes_up_to(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{load, same_representation};
    use polycoef::exactalg::Integer;

    #[test]
    fn replay_rebuilds_the_sample() {
        let s = Sampler { seed: 9, salt: 4 };
        let cat = category(CategorySpec::FiSharp { max: 3 }).unwrap();
        for case in 0..5 {
            let t: FunctorRep<Integer> = s.functor(&cat, vec![0, 1, 2], case);
            let spec =
                serde_json::from_value(s.replay(&cat, vec![0, 1, 2], case).unwrap()).unwrap();
            let l = load::<Integer>("replay", spec).unwrap();
            assert!(same_representation(&t, l.functor().unwrap()), "case {case}");
        }
    }
}

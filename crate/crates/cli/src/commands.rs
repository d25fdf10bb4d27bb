use std::sync::Arc;

use serde_json::{json, Value};

use polycoef::catring::{
    check_property_star, decomposition_check, induce_along, module_induction, MonoidSquare,
};
use polycoef::cats::{
    check_braidable, check_cati_axioms, find_conjugator, CatFunctor, CatIStructure, CategorySpec,
    FinCat, ObjId, ShiftedPartition, DEFAULT_BUDGET,
};
use polycoef::exactalg::{FPModule, Ring};
use polycoef::funrep::{precompose, FunctorRep};
use polycoef::invariants::{
    coproduct_height, cross_effect, cross_effect_functor, degree, height, partition_cross_effect,
    taylor_tower, CrossFlavor, Cubes, DegreeVariant, HeightMode, HeightReport,
};

use crate::report::{invariants_json, Outcome};
use crate::spec::{encode_coeff, encode_payload, Loaded};
use crate::CliError;

/// Candidate families tried by the braiding search.
pub const BRAID_BUDGET: usize = 1_000_000;

fn default_window<R: Ring>(t: &FunctorRep<R>, window: Option<usize>) -> Result<usize, CliError> {
    window
        .or_else(|| t.window_grade())
        .ok_or_else(|| CliError::Usage("the functor has an empty window".into()))
}

fn object_of(cat: &FinCat, grade: usize) -> Result<ObjId, CliError> {
    cat.object_of_grade(grade)
        .ok_or_else(|| CliError::Usage(format!("no object of grade {grade} in {}", cat.name())))
}

fn mask_of(elements: &[usize], n: usize) -> Result<u32, CliError> {
    let mut mask = 0u32;
    for &e in elements {
        if e == 0 || e > n {
            return Err(CliError::Usage(format!("{e} is not in 1..{n}")));
        }
        mask |= 1 << (e - 1);
    }
    Ok(mask)
}

fn height_outcome<R: Ring>(r: &HeightReport<R>) -> Outcome {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "m": w.m,
                "n": w.n,
                "partition": w.partition,
                "invariants": invariants_json(&w.invariants),
            })
        })
        .collect();
    let mut text = vec![format!(
        "height (mode {}, flavor {}, window {}): {}",
        r.mode, r.flavor, r.window, r.value
    )];
    if let Some(w) = r.primary_witness() {
        text.push(format!(
            "  witness m = {}, n = {}, partition {:?}: {}",
            w.m, w.n, w.partition, w.invariants
        ));
    }
    Outcome::new(
        true,
        json!({
            "mode": r.mode,
            "flavor": r.flavor,
            "window": r.window,
            "value": r.value,
            "witnesses": witnesses,
        }),
        text,
    )
}

pub fn run_height<R: Ring>(
    l: &Loaded<R>,
    mode: HeightMode,
    flavor: CrossFlavor,
    window: Option<usize>,
) -> Result<Outcome, CliError> {
    let t = l.functor()?;
    let window = default_window(t, window)?;
    let report = if matches!(l.cat.spec(), Some(CategorySpec::Pointed { .. })) {
        if mode != HeightMode::Oplus {
            return Err(CliError::Usage(
                "pointed sets only support mode oplus".into(),
            ));
        }
        coproduct_height(t, window)?
    } else {
        height(t, mode, flavor, window)?
    };
    Ok(height_outcome(&report))
}

pub fn run_degree<R: Ring>(
    l: &Loaded<R>,
    variants: &[DegreeVariant],
    window: Option<usize>,
) -> Result<Outcome, CliError> {
    let t = l.functor()?;
    let st = l.stabiliser()?;
    let mut results = Vec::new();
    let mut text = Vec::new();
    for &v in variants {
        let r = degree(t, &st, v, window)?;
        text.push(format!("{} = {} (window {})", r.variant, r.value, r.window));
        results.push(json!({
            "variant": r.variant,
            "value": r.value,
            "window": r.window,
            "window_split": r.window_split,
            "steps": r.trace.len(),
        }));
    }
    Ok(Outcome::new(true, Value::Array(results), text))
}

pub fn run_cross_effect<R: Ring>(
    l: &Loaded<R>,
    partition: Option<&[usize]>,
    flavor: CrossFlavor,
) -> Result<Outcome, CliError> {
    let t = l.functor()?;
    let (ce, label) = match partition {
        Some(parts) => {
            let lambda = ShiftedPartition::new(parts.to_vec())?;
            let st = CatIStructure::standard(l.cat.clone(), DEFAULT_BUDGET)?;
            let cubes = Cubes::new(lambda.length())?;
            (
                partition_cross_effect(t, &st, &cubes, &lambda, flavor)?,
                format!("partition {parts:?}"),
            )
        }
        None => {
            let Some(CategorySpec::SubsetMonoid { n }) = l.cat.spec() else {
                return Err(CliError::Usage(
                    "give --partition unless the functor lives on a cube".into(),
                ));
            };
            let cubes = Cubes::new(*n)?;
            let home = rehome_on(t, &cubes.monoid)?;
            (
                cross_effect(&cubes.reindex(&home, flavor)?, flavor)?,
                format!("cube of size {n}"),
            )
        }
    };
    Ok(Outcome::new(
        true,
        json!({ "flavor": flavor, "invariants": invariants_json(ce.invariants()) }),
        vec![format!("{flavor} ({label}): {}", ce.invariants())],
    ))
}

/// `t` on the given copy of its category.
fn rehome_on<R: Ring>(t: &FunctorRep<R>, cat: &Arc<FinCat>) -> Result<FunctorRep<R>, CliError> {
    let id = CatFunctor::identity(cat.clone());
    Ok(precompose(t, &id)?)
}

pub fn run_cross_effect_functor<R: Ring>(
    l: &Loaded<R>,
    window: Option<usize>,
) -> Result<Outcome, CliError> {
    let t = l.functor()?;
    let window = default_window(t, window)?;
    let st = CatIStructure::standard(l.cat.clone(), DEFAULT_BUDGET)?;
    let tf = cross_effect_functor(t, &st, window)?;
    let mut text = vec![format!(
        "graded cross-effects up to {window}, height {}",
        tf.height()
    )];
    let pieces: Vec<Value> = tf
        .pieces
        .iter()
        .map(|p| {
            text.push(format!(
                "  T'({}, {}) = {}",
                p.k,
                p.l,
                p.module.invariants()
            ));
            json!({
                "k": p.k,
                "l": p.l,
                "invariants": invariants_json(p.module.invariants()),
                "acting_endomorphisms": p.endomorphisms.len(),
            })
        })
        .collect();
    Ok(Outcome::new(
        true,
        json!({ "window": window, "height": tf.height(), "pieces": pieces }),
        text,
    ))
}

/// Restricts to the full subcategory on `objects`, induces back, and compares
/// with the ring-level induction and the original functor.
pub fn run_induce<R: Ring>(l: &Loaded<R>, objects: &[ObjId]) -> Result<Outcome, CliError> {
    let t = l.functor()?;
    let cat = &l.cat;
    if let Some(&o) = objects.iter().find(|&&o| o >= cat.object_count()) {
        return Err(CliError::Usage(format!("object {o} does not exist")));
    }
    let f = full_inclusion(cat, objects)?;
    let g = precompose(t, &f)?;
    let ind = induce_along(&f, &g)?;
    let unit = ind.unit(&g)?;
    let ring = module_induction(&f, &g)?;
    let mut total = FPModule::zero();
    let mut text = vec![format!(
        "induction from the full subcategory on {objects:?}"
    )];
    let mut values = Vec::new();
    let mut summands_agree = true;
    for b in 0..cat.object_count() {
        let v = ind.functor.value(b).expect("full window");
        total = total.direct_sum(v);
        let summand = ring.summand(b)?.invariants();
        summands_agree &= &summand == v.invariants();
        text.push(format!("  Ind({b}) = {}", v.invariants()));
        values.push(json!({ "object": b, "invariants": invariants_json(v.invariants()) }));
    }
    let units: Vec<Value> = (0..objects.len())
        .map(|a| {
            let c = unit.component(a).expect("full window");
            json!({ "object": objects[a], "injective": c.is_injective(), "surjective": c.is_surjective() })
        })
        .collect();
    let bijective = units
        .iter()
        .all(|u| u["injective"] == json!(true) && u["surjective"] == json!(true));
    let matches_ring = total.is_isomorphic(&ring.module) && summands_agree;
    let natural = unit.naturality_failures().is_empty();
    text.push(format!("  unit natural: {natural}, bijective: {bijective}"));
    text.push(format!(
        "  agrees with the category-ring tensor product: {matches_ring}"
    ));
    Ok(Outcome::new(
        natural && bijective && matches_ring,
        json!({
            "objects": objects,
            "values": values,
            "unit": units,
            "unit_natural": natural,
            "matches_ring_induction": matches_ring,
        }),
        text,
    ))
}

pub fn full_inclusion(host: &Arc<FinCat>, objects: &[ObjId]) -> Result<CatFunctor, CliError> {
    let (sub, _) = host.subcategory("full", objects, |_| true)?;
    let sub = Arc::new(sub);
    let mor_map = sub
        .morphisms()
        .iter()
        .map(|m| {
            host.lookup(objects[m.source], objects[m.target], &m.payload)
                .expect("subcategory morphism")
        })
        .collect();
    let f = CatFunctor {
        name: "inclusion".into(),
        source: sub,
        target: host.clone(),
        obj_map: objects.to_vec(),
        mor_map,
        semi: false,
    };
    f.check()?;
    Ok(f)
}

pub fn run_decompose<R: Ring>(l: &Loaded<R>, n: usize) -> Result<Outcome, CliError> {
    let t = l.functor()?;
    let st = CatIStructure::standard(l.cat.clone(), DEFAULT_BUDGET)?;
    let r = decomposition_check(t, &st, n)?;
    let pieces: Vec<Value> = r
        .pieces
        .iter()
        .map(|(k, l, inv)| json!({ "k": k, "l": l, "invariants": invariants_json(inv) }))
        .collect();
    let text = vec![
        format!("T(s({n})) = {}", r.lhs),
        format!("induced pieces sum to {}", r.rhs),
        format!(
            "groups isomorphic: {}, characters agree on {} automorphisms: {}",
            r.groups_isomorphic(),
            r.group_order,
            r.characters_agree()
        ),
    ];
    Ok(Outcome::new(
        r.isomorphic(),
        json!({
            "n": n,
            "lhs": invariants_json(&r.lhs),
            "rhs": invariants_json(&r.rhs),
            "pieces": pieces,
            "group_order": r.group_order,
            "lhs_character": r.lhs_character.iter().map(encode_coeff).collect::<Vec<_>>(),
            "rhs_character": r.rhs_character.iter().map(encode_coeff).collect::<Vec<_>>(),
            "groups_isomorphic": r.groups_isomorphic(),
            "characters_agree": r.characters_agree(),
        }),
        text,
    ))
}

pub fn run_taylor<R: Ring>(l: &Loaded<R>, size: usize, top: usize) -> Result<Outcome, CliError> {
    let t = l.functor()?;
    if top == 0 {
        return Err(CliError::Usage("--top must be at least 1".into()));
    }
    let tower = taylor_tower(t, size, top)?;
    let mut text = vec![format!("Taylor tower at [{size}]")];
    let stages: Vec<Value> = tower
        .stages
        .iter()
        .map(|s| {
            text.push(format!("  p_{} = {}", s.n - 1, s.module.invariants()));
            json!({ "degree": s.n - 1, "invariants": invariants_json(s.module.invariants()) })
        })
        .collect();
    Ok(Outcome::new(
        true,
        json!({ "size": size, "stages": stages }),
        text,
    ))
}

pub fn run_braidable<R: Ring>(l: &Loaded<R>) -> Result<Outcome, CliError> {
    let st = l.stabiliser()?;
    let found = check_braidable(&st, BRAID_BUDGET)?;
    Ok(match found {
        Some(psi) => {
            let comps: Vec<Value> = psi
                .components
                .iter()
                .map(|&(o, m)| json!({ "object": o, "payload": encode_payload(l.cat.payload(m)) }))
                .collect();
            Outcome::new(
                true,
                json!({ "braidable": true, "components": comps }),
                vec![format!("braidable: {} components found", comps.len())],
            )
        }
        None => Outcome::new(
            false,
            json!({ "braidable": false }),
            vec!["not braidable: no family of automorphisms works".into()],
        ),
    })
}

pub fn run_conjugator<R: Ring>(
    l: &Loaded<R>,
    grade: usize,
    from: &[usize],
    to: &[usize],
) -> Result<Outcome, CliError> {
    let o = object_of(&l.cat, grade)?;
    let (r, s) = (mask_of(from, grade)?, mask_of(to, grade)?);
    let found = find_conjugator(&l.cat, o, r, s).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(match found {
        Some(phi) => Outcome::new(
            true,
            json!({ "found": true, "payload": encode_payload(l.cat.payload(phi)) }),
            vec![format!(
                "conjugator: {}",
                encode_payload(l.cat.payload(phi))
            )],
        ),
        None => Outcome::new(
            false,
            json!({ "found": false }),
            vec!["no automorphism conjugates the two idempotents".into()],
        ),
    })
}

pub fn run_cati<R: Ring>(l: &Loaded<R>) -> Result<Outcome, CliError> {
    let st = CatIStructure::standard(l.cat.clone(), DEFAULT_BUDGET)?;
    let r = check_cati_axioms(&st)?;
    let text = vec![
        format!("axioms hold: {}", r.passes()),
        format!("  s then pi is the inclusion: {}", r.composite_is_inclusion),
        format!("  End not surjective at {:?}", r.end_not_surjective),
        format!("  Aut not surjective at {:?}", r.aut_not_surjective),
        format!("  locality failures: {}", r.locality_failures.len()),
    ];
    Ok(Outcome::new(
        r.passes(),
        json!({
            "passes": r.passes(),
            "composite_is_inclusion": r.composite_is_inclusion,
            "end_not_surjective": r.end_not_surjective,
            "aut_not_surjective": r.aut_not_surjective,
            "locality_failures": r.locality_failures.len(),
        }),
        text,
    ))
}

pub fn run_star<R: Ring>(l: &Loaded<R>, k: usize, lsize: usize) -> Result<Outcome, CliError> {
    let st = CatIStructure::standard(l.cat.clone(), DEFAULT_BUDGET)?;
    let (sq, _) = MonoidSquare::partition_square(&st, k, lsize)?;
    let r = check_property_star(&sq, None)?;
    let text = vec![
        format!(
            "condition (*) for blocks ({k}, {lsize}): {} (|D| = {}, |A| = {}, |B| = {}, |C| = {})",
            r.holds,
            sq.d.order(),
            sq.a.len(),
            sq.b.len(),
            sq.c.len()
        ),
        format!(
            "  witness of {} pairs, surjective: {}, agreement: {}",
            r.witness.len(),
            r.surjective,
            r.agreement
        ),
    ];
    Ok(Outcome::new(
        r.holds,
        json!({
            "holds": r.holds,
            "surjective": r.surjective,
            "agreement": r.agreement,
            "source": r.source,
            "witness_size": r.witness.len(),
            "orders": { "d": sq.d.order(), "a": sq.a.len(), "b": sq.b.len(), "c": sq.c.len() },
            "unfactored": r.unfactored,
            "disagreements": r.disagreements,
        }),
        text,
    ))
}

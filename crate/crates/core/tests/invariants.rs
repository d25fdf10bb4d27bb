use std::sync::Arc;

use polycoef::cats::{
    build_category, structural_map, CatIStructure, CategorySpec, FinCat, ShiftedPartition,
    StabiliserStructure, StructuralKind, DEFAULT_BUDGET,
};
use polycoef::exactalg::{FPModule, Integer, Subobject};
use polycoef::funrep::{
    build_th, chain_point_functor, constant_functor, pointed_linearisation, pointwise_tensor,
    precompose, random_functor, representable_functor, seeded_rng, th_basis, zero_functor,
    FunctorRep, RandomFunctorConfig,
};
use polycoef::invariants::{
    all_degrees, cross_effect, cross_effect_functor, degree, fi_height, height, height_with,
    partition_cross_effect, partition_subobjects, taylor_stage, taylor_tower, CrossFlavor, Cubes,
    DegreeValue, DegreeVariant, HeightMode,
};

type Rep = FunctorRep<Integer>;

fn cat(spec: CategorySpec) -> Arc<FinCat> {
    Arc::new(build_category(&spec, DEFAULT_BUDGET).unwrap())
}

fn small_config(grades: Vec<usize>, window: Option<usize>) -> RandomFunctorConfig {
    RandomFunctorConfig {
        summand_grades: grades,
        max_summands: 2,
        max_relations: 2,
        max_terms: 2,
        coefficient_bound: 3,
        window,
    }
}

fn random_on(c: &Arc<FinCat>, grades: Vec<usize>, seed: u64) -> Rep {
    let mut rng = seeded_rng(seed);
    random_functor(c.clone(), &small_config(grades, None), &mut rng)
}

#[test]
fn flavors_parse_and_print() {
    for f in [CrossFlavor::Cr, CrossFlavor::CrBar, CrossFlavor::CrBarPrime] {
        assert_eq!(f.to_string().parse::<CrossFlavor>().unwrap(), f);
    }
    assert_eq!("Oplus".parse::<HeightMode>().unwrap(), HeightMode::Oplus);
    assert!("deg2".parse::<DegreeVariant>().is_err());
}

#[test]
fn constant_functor_on_a_cube_has_trivial_cross_effect_above_zero() {
    for n in 0..=3 {
        let cubes = Cubes::new(n).unwrap();
        let t: Rep = constant_functor(cubes.monoid.clone(), FPModule::free(2));
        for flavor in [CrossFlavor::Cr, CrossFlavor::CrBar, CrossFlavor::CrBarPrime] {
            let ce = cross_effect(&cubes.reindex(&t, flavor).unwrap(), flavor).unwrap();
            // only the empty cube sees the constant value
            assert_eq!(ce.is_zero(), n > 0, "n = {n}, {flavor}");
        }
    }
}

#[test]
fn wrong_cube_is_rejected() {
    let cubes = Cubes::new(2).unwrap();
    let t: Rep = constant_functor(cubes.monoid.clone(), FPModule::free(1));
    assert!(cross_effect(&t, CrossFlavor::CrBar).is_err());
}

#[test]
fn cross_effect_flavors_agree_on_random_cube_functors() {
    for n in 1..=3 {
        let cubes = Cubes::new(n).unwrap();
        for seed in 0..8 {
            let f = random_on(&cubes.monoid, vec![n], 1000 * n as u64 + seed);
            let cr = cross_effect(&f, CrossFlavor::Cr).unwrap();
            for flavor in [CrossFlavor::CrBar, CrossFlavor::CrBarPrime] {
                let other = cross_effect(&cubes.reindex(&f, flavor).unwrap(), flavor).unwrap();
                assert_eq!(
                    cr.invariants(),
                    other.invariants(),
                    "n = {n}, seed {seed}, {flavor}"
                );
            }
        }
    }
}

#[test]
fn independent_sets_functor_has_a_witness_at_spread_blocks() {
    let t: Rep = build_th(Some(2), 4).unwrap();
    let st = CatIStructure::standard(t.category().clone(), DEFAULT_BUDGET).unwrap();
    let cubes = Cubes::new(2).unwrap();
    let lambda = ShiftedPartition::new(vec![0, 2, 2]).unwrap();
    let ce = partition_cross_effect(&t, &st, &cubes, &lambda, CrossFlavor::Cr).unwrap();
    assert!(!ce.is_zero());
    // {2,4} − {4} − {2} + ∅ lies in the cross-effect
    let basis = th_basis(Some(2), 4);
    let at = |s: u32| basis.iter().position(|&b| b == s).unwrap();
    let mut v = vec![Integer::from(0); basis.len()];
    v[at(0b1010)] = Integer::from(1);
    v[at(0b1000)] = Integer::from(-1);
    v[at(0b0010)] = Integer::from(-1);
    v[at(0)] = Integer::from(1);
    assert!(ce.subobject.contains_element(&v));
}

#[test]
fn independent_sets_heights_separate_the_modes() {
    let t: Rep = build_th(Some(2), 5).unwrap();
    let i = height(&t, HeightMode::I, CrossFlavor::Cr, 5).unwrap();
    let oplus = height(&t, HeightMode::Oplus, CrossFlavor::Cr, 5).unwrap();
    assert_eq!(i.value, 1);
    assert_eq!(oplus.value, 2);
    let w = oplus.primary_witness().unwrap();
    assert_eq!(w.n, 2);
    assert_eq!(w.partition[0], 0);
}

#[test]
fn independent_sets_bar_flavor_never_vanishes() {
    // level n is seen by the semi-functors with a nonempty head, so m > n
    let t: Rep = build_th(Some(2), 6).unwrap();
    let r = height(&t, HeightMode::I, CrossFlavor::CrBar, 6).unwrap();
    for n in 1..=5 {
        assert!(!r.level_vanishes(n), "level {n}");
    }
}

#[test]
fn height_of_representables_on_partial_injections() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    for k in 0..=2 {
        let p: Rep = representable_functor(sharp.clone(), k);
        for mode in [HeightMode::I, HeightMode::Oplus] {
            let r = height(&p, mode, CrossFlavor::Cr, 4).unwrap();
            assert_eq!(r.value, k as i64, "P_{k}, mode {mode}");
        }
    }
    let zero: Rep = zero_functor(sharp);
    assert_eq!(
        height(&zero, HeightMode::I, CrossFlavor::Cr, 4)
            .unwrap()
            .value,
        -1
    );
}

#[test]
fn subobject_formulas_agree_on_random_partial_injection_functors() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET).unwrap();
    let cubes: Vec<Cubes> = (0..=4).map(|n| Cubes::new(n).unwrap()).collect();
    for seed in 0..4 {
        let t = random_on(&sharp, vec![0, 1, 2], seed);
        for m in 0..=4 {
            for n in 0..=m {
                for lambda in ShiftedPartition::compositions(m, n) {
                    let (alt, meet) = partition_subobjects(&t, &st, &cubes[n], &lambda).unwrap();
                    assert!(alt == meet, "seed {seed}, λ = {:?}", lambda.parts());
                }
            }
        }
    }
}

#[test]
fn mode_i_never_exceeds_mode_oplus() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET).unwrap();
    for seed in 10..14 {
        let t = random_on(&sharp, vec![0, 1, 2], seed);
        let i = height_with(&t, &st, HeightMode::I, CrossFlavor::Cr, 4).unwrap();
        let o = height_with(&t, &st, HeightMode::Oplus, CrossFlavor::Cr, 4).unwrap();
        assert_eq!(i.value, o.value, "seed {seed}");
    }
    let t: Rep = build_th(Some(3), 5).unwrap();
    let i = height(&t, HeightMode::I, CrossFlavor::Cr, 5).unwrap();
    let o = height(&t, HeightMode::Oplus, CrossFlavor::Cr, 5).unwrap();
    assert!(i.value <= o.value);
}

#[test]
fn restriction_to_injections_keeps_the_height() {
    let incl = structural_map(&StructuralKind::FiInclusion { max: 4 }, DEFAULT_BUDGET).unwrap();
    let sharp = incl.target.clone();
    for seed in 20..24 {
        let t = random_on(&sharp, vec![0, 1, 2], seed);
        let restricted = precompose(&t, &incl).unwrap();
        let fi = fi_height(&restricted, 4).unwrap();
        let i = height(&t, HeightMode::I, CrossFlavor::Cr, 4).unwrap();
        assert_eq!(fi.value, i.value, "seed {seed}");
    }
}

#[test]
fn fi_mode_rejects_other_categories() {
    let t: Rep = build_th(Some(2), 3).unwrap();
    assert!(height(&t, HeightMode::Fi, CrossFlavor::Cr, 3).is_err());
    assert!(height(&t, HeightMode::Fi, CrossFlavor::CrBar, 3).is_err());
}

#[test]
fn chain_point_functor_separates_weak_and_injective_degree() {
    for max in 2..=5 {
        let t: Rep = chain_point_functor(max).unwrap();
        let st = StabiliserStructure::standard(t.category().clone()).unwrap();
        let d = |v| degree(&t, &st, v, None).unwrap().value;
        assert_eq!(d(DegreeVariant::Wdeg), DegreeValue::Exact(-1));
        assert_eq!(d(DegreeVariant::Deg), DegreeValue::Exact(0));
        assert_eq!(d(DegreeVariant::Ideg), DegreeValue::AtLeast(max as i64));
    }
}

#[test]
fn degrees_of_basic_functors() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let st = StabiliserStructure::standard(sharp.clone()).unwrap();
    let zero: Rep = zero_functor(sharp.clone());
    let constant: Rep = constant_functor(sharp.clone(), FPModule::free(1));
    let p1: Rep = representable_functor(sharp.clone(), 1);
    for (t, expected) in [(&zero, -1), (&constant, 0), (&p1, 1)] {
        for r in all_degrees(t, &st, None).unwrap() {
            assert_eq!(r.value, DegreeValue::Exact(expected), "{}", r.variant);
        }
    }
}

#[test]
fn degree_chain_and_collapse_on_random_functors() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let fi = cat(CategorySpec::Fi { max: 4 });
    for (c, collapse) in [(&sharp, true), (&fi, false)] {
        let st = StabiliserStructure::standard(c.clone()).unwrap();
        for seed in 0..4 {
            let t = random_on(c, vec![0, 1], 40 + seed);
            let values: Vec<DegreeValue> = all_degrees(&t, &st, None)
                .unwrap()
                .into_iter()
                .map(|r| r.value)
                .collect();
            for w in values.windows(2) {
                assert!(
                    w[0].compatible_le(&w[1]),
                    "{} seed {seed}: {values:?}",
                    c.name()
                );
            }
            if collapse {
                assert!(
                    values
                        .iter()
                        .all(|v| *v == values[0] && v.exact().is_some()),
                    "{values:?}"
                );
            }
        }
    }
}

#[test]
fn single_and_multiple_shifts_give_the_same_degree() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let single = StabiliserStructure::standard(sharp.clone()).unwrap();
    let multi = StabiliserStructure::multi(sharp.clone(), 2).unwrap();
    for seed in 0..3 {
        let t = random_on(&sharp, vec![0, 1, 2], 60 + seed);
        let a = degree(&t, &single, DegreeVariant::Deg, None).unwrap();
        let b = degree(&t, &multi, DegreeVariant::Deg, None).unwrap();
        assert_eq!(a.value, b.value, "seed {seed}");
    }
}

#[test]
fn degree_rejects_an_empty_window() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let st = StabiliserStructure::standard(sharp.clone()).unwrap();
    let t: Rep = constant_functor(sharp, FPModule::free(1));
    assert!(degree(&t, &st, DegreeVariant::Deg, Some(0)).is_err());
}

#[test]
fn graded_pieces_of_basic_functors() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET).unwrap();
    let constant: Rep = constant_functor(sharp.clone(), FPModule::free(1));
    let tc = cross_effect_functor(&constant, &st, 4).unwrap();
    let p1: Rep = representable_functor(sharp.clone(), 1);
    let tp = cross_effect_functor(&p1, &st, 4).unwrap();
    for n in 0..=4 {
        for k in 0..=n {
            let rank = |t: &polycoef::invariants::CrossEffectFunctor<Integer>| {
                t.piece(k, n - k).unwrap().module.invariants().free_rank
            };
            assert_eq!(rank(&tc), usize::from(k == 0), "constant ({k}, {})", n - k);
            assert_eq!(rank(&tp), usize::from(k <= 1), "P_1 ({k}, {})", n - k);
        }
    }
    assert_eq!(tc.height(), 0);
    assert_eq!(tp.height(), 1);
}

#[test]
fn graded_piece_actions_are_multiplicative() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET).unwrap();
    let t = random_on(&sharp, vec![1, 2], 77);
    let tf = cross_effect_functor(&t, &st, 3).unwrap();
    let piece = tf.piece(1, 2).unwrap();
    for (a, &f) in piece.endomorphisms.iter().enumerate() {
        for (b, &g) in piece.endomorphisms.iter().enumerate() {
            let fg = sharp.compose(f, g);
            let c = piece.endomorphisms.iter().position(|&h| h == fg).unwrap();
            // agree modulo the relations of the piece
            let diff = piece.actions[a]
                .mul(&piece.actions[b])
                .sub(&piece.actions[c]);
            let lhs = piece.inclusion.mul(&diff);
            let zero = Subobject::zero(piece.subobject.ambient());
            for col in 0..lhs.cols() {
                assert!(zero.contains_element(&lhs.column(col)), "{a}·{b} ≠ {c}");
            }
        }
    }
}

#[test]
fn taylor_stages_of_reduced_linearisation() {
    let gamma = cat(CategorySpec::Pointed { max: 4 });
    let zt: Rep = pointed_linearisation(gamma.clone(), true).unwrap();
    let p0 = taylor_stage(&zt, 1, 1).unwrap();
    assert!(p0.module.is_zero());
    let p1 = taylor_stage(&zt, 1, 2).unwrap();
    assert!(p1
        .module
        .is_isomorphic(zt.value(gamma.object_of_grade(1).unwrap()).unwrap()));
    let square = pointwise_tensor(&zt, &zt).unwrap();
    assert!(taylor_stage(&square, 1, 2).unwrap().module.is_zero());
    let tower = taylor_tower(&zt, 1, 3).unwrap();
    assert_eq!(tower.maps.len(), 2);
}

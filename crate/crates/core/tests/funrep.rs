use std::sync::Arc;

use polycoef::cats::{
    build_category, structural_map, CatFunctor, CategorySpec, FinCat, Payload, ShiftedPartition,
    StabiliserStructure, StructuralKind, DEFAULT_BUDGET,
};
use polycoef::exactalg::{solve_linear, FPModule, Integer, Matrix, ModuleHom, Subobject};
use polycoef::funrep::{
    build_th, chain_point_functor, constant_functor, delta_functor, precompose, random_functor,
    representable_functor, seeded_rng, stab_nat_trans, th_basis, zero_functor, FunctorRep,
    RandomFunctorConfig, Violation,
};
use proptest::prelude::*;

type Rep = FunctorRep<Integer>;

fn cat(spec: CategorySpec) -> Arc<FinCat> {
    Arc::new(build_category(&spec, DEFAULT_BUDGET).unwrap())
}

fn z(v: i64) -> Integer {
    Integer::from(v)
}

/// Subsets of an `n`-path with no two adjacent vertices and at most `h`
/// vertices, counted by recursion on the last vertex.
fn independent_sets(n: usize, h: usize) -> usize {
    fn go(n: usize, h: usize) -> usize {
        if n == 0 {
            return 1;
        }
        // either n is unused, or n is used and n-1 is not
        let without = go(n - 1, h);
        let with = if h == 0 {
            0
        } else {
            go(n.saturating_sub(2), h - 1)
        };
        without + with
    }
    go(n, h)
}

#[test]
fn representable_ranks_match_hom_enumeration() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let p0: Rep = representable_functor(sharp.clone(), 0);
    let p1: Rep = representable_functor(sharp.clone(), 1);
    for n in 0..=4 {
        assert_eq!(p0.value(n).unwrap().invariants().free_rank, 1);
        // 1 -> n: one of n points or undefined
        assert_eq!(p1.value(n).unwrap().invariants().free_rank, n + 1);
    }
    assert_eq!(p1.value(2).unwrap().generators(), 3);
    assert!(p1.validate().passes());
    assert!(p0.validate().passes());
}

#[test]
fn automorphisms_act_by_permutation_matrices() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let p1: Rep = representable_functor(sharp.clone(), 1);
    for f in sharp.automorphisms(2) {
        let m = p1.matrix(f).unwrap();
        for j in 0..m.cols() {
            let col = m.column(j);
            assert_eq!(col.iter().filter(|x| x.is_one()).count(), 1);
            assert_eq!(col.iter().filter(|x| x.is_zero()).count(), col.len() - 1);
        }
    }
}

#[test]
fn corrupted_representable_fails_with_a_pair() {
    let sharp = cat(CategorySpec::FiSharp { max: 2 });
    let p1: Rep = representable_functor(sharp.clone(), 1);
    let f = sharp.hom(1, 2)[1];
    let broken = p1.with_entry(f, 0, 0, z(5));
    let report = broken.validate();
    assert!(!report.passes());
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, Violation::Composition { f: a, g: b } if *a == f || *b == f)));
}

#[test]
fn semi_functor_is_exempt_from_identities() {
    let monoid = cat(CategorySpec::SubsetMonoid { n: 2 });
    let e = Matrix::from_i64_rows(&[&[1, 0], &[0, 0]]);
    let maps = (0..monoid.morphism_count())
        .map(|_| Some(e.map(|x: &Integer| x.clone())))
        .collect::<Vec<_>>();
    let semi = Rep::from_matrices(
        monoid.clone(),
        vec![Some(FPModule::free(2))],
        maps.clone(),
        true,
    )
    .unwrap();
    assert!(semi.validate().passes());
    let strict = Rep::from_matrices(monoid, vec![Some(FPModule::free(2))], maps, false).unwrap();
    assert_eq!(
        strict.validate().violations,
        vec![Violation::Identity { obj: 0 }]
    );
}

#[test]
fn th_ranks_match_independent_sets() {
    let t2: Rep = build_th(Some(2), 5).unwrap();
    let t3: Rep = build_th(Some(3), 5).unwrap();
    assert_eq!(t2.value(4).unwrap().generators(), 8);
    assert_eq!(t2.value(5).unwrap().generators(), 12);
    assert_eq!(t3.value(5).unwrap().generators(), 13);
    for n in 0..=5 {
        assert_eq!(t2.value(n).unwrap().generators(), independent_sets(n, 2));
        assert_eq!(t3.value(n).unwrap().generators(), independent_sets(n, 3));
    }
    assert!(t2.validate().passes());
    assert!(build_th::<Integer>(None, 4).unwrap().validate().passes());
}

#[test]
fn th_basis_order_and_action() {
    // ∅, singletons, then pairs in lexicographic order
    let basis = th_basis(Some(2), 4);
    let expect = [0, 0b1, 0b10, 0b100, 0b1000, 0b101, 0b1001, 0b1010];
    assert_eq!(basis, expect);
    let t2: Rep = build_th(Some(2), 4).unwrap();
    let cat = t2.category().clone();
    let r = cat.lookup(4, 4, &Payload::Subset(0b0111)).unwrap();
    let m = t2.matrix(r).unwrap();
    let src = basis.iter().position(|&s| s == 0b1001).unwrap();
    let dst = basis.iter().position(|&s| s == 0b0001).unwrap();
    assert!(m[(dst, src)].is_one());
}

#[test]
fn precompose_identity_and_restriction() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let p1: Rep = representable_functor(sharp.clone(), 1);
    let same = precompose(&p1, &CatFunctor::identity(sharp.clone())).unwrap();
    for f in 0..sharp.morphism_count() {
        assert_eq!(same.matrix(f), p1.matrix(f));
    }
    let incl = structural_map(&StructuralKind::FiInclusion { max: 3 }, DEFAULT_BUDGET).unwrap();
    let restricted = precompose(&p1, &incl).unwrap();
    assert!(restricted.validate().passes());
    for f in 0..incl.source.morphism_count() {
        assert_eq!(restricted.matrix(f), p1.matrix(incl.apply(f)));
    }
}

#[test]
fn precompose_along_spread_is_semi() {
    let t2: Rep = build_th(Some(2), 4).unwrap();
    let lambda = ShiftedPartition::new(vec![0, 2, 2]).unwrap();
    let monoid = cat(CategorySpec::SubsetMonoid { n: 2 });
    let host = t2.category().clone();
    let mor_map = (0..monoid.morphism_count())
        .map(|f| {
            let Payload::Subset(s) = *monoid.payload(f) else {
                unreachable!()
            };
            host.lookup(4, 4, &Payload::Subset(lambda.spread(s)))
                .unwrap()
        })
        .collect();
    let f = CatFunctor {
        name: "psi".into(),
        source: monoid.clone(),
        target: host.clone(),
        obj_map: vec![4],
        mor_map,
        semi: true,
    };
    let composite = precompose(&t2, &f).unwrap();
    assert!(composite.is_semi());
    assert!(composite.validate().passes());
    for s in 0..4u32 {
        let g = monoid.lookup(0, 0, &Payload::Subset(s)).unwrap();
        let r = host
            .lookup(4, 4, &Payload::Subset(lambda.spread(s)))
            .unwrap();
        assert_eq!(composite.matrix(g), t2.matrix(r));
    }
}

#[test]
fn shift_transformation_components() {
    let sharp = cat(CategorySpec::FiSharp { max: 5 });
    let st = StabiliserStructure::standard(sharp.clone()).unwrap();
    let constant: Rep = constant_functor(sharp.clone(), FPModule::free(1));
    let tr = stab_nat_trans(&constant, &st, 0).unwrap();
    assert!(tr.naturality_failures().is_empty());
    for n in 0..5 {
        assert!(tr.components[n].as_ref().unwrap().is_identity());
    }
    assert!(tr.components[5].is_none());
    let zero: Rep = zero_functor(sharp.clone());
    assert!(stab_nat_trans(&zero, &st, 0).unwrap().is_zero());

    let p1: Rep = representable_functor(sharp.clone(), 1);
    let tr = stab_nat_trans(&p1, &st, 0).unwrap();
    assert!(tr.naturality_failures().is_empty());
    for n in 0..5 {
        let m = tr.components[n].as_ref().unwrap();
        let src = sharp.hom(1, n);
        let dst = sharp.hom(1, n + 1);
        for (j, &phi) in src.iter().enumerate() {
            let Payload::Injection(p) = sharp.payload(phi) else {
                unreachable!()
            };
            // the point moves up by one; undefined stays undefined
            let image = p.assignment()[0];
            let moved = if image == 0 { 0 } else { image + 1 };
            let i = dst
                .iter()
                .position(|&psi| match sharp.payload(psi) {
                    Payload::Injection(q) => q.assignment()[0] == moved,
                    _ => false,
                })
                .unwrap();
            for r in 0..m.rows() {
                assert_eq!(m[(r, j)].is_one(), r == i);
            }
        }
    }
}

#[test]
fn delta_of_constant_and_point_functors() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let st = StabiliserStructure::standard(sharp.clone()).unwrap();
    let constant: Rep = constant_functor(sharp.clone(), FPModule::free(1));
    let d = delta_functor(&constant, &st, 0).unwrap();
    assert!(d.functor.is_zero());
    assert!(d.kernels.iter().flatten().all(|k| k.is_zero()));
    assert_eq!(d.functor.window_grade(), Some(3));
    let p0: Rep = representable_functor(sharp.clone(), 0);
    assert!(delta_functor(&p0, &st, 0).unwrap().functor.is_zero());

    let point: Rep = chain_point_functor(4).unwrap();
    assert!(point.validate().passes());
    let chain_st = StabiliserStructure::standard(point.category().clone()).unwrap();
    let d = delta_functor(&point, &chain_st, 0).unwrap();
    assert!(d.functor.is_zero());
    for n in 0..4 {
        let k = d.kernels[n].as_ref().unwrap();
        assert!(k.contains(&Subobject::whole(point.value(n).unwrap())));
    }
}

#[test]
fn delta_of_random_functors_validates() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let st = StabiliserStructure::standard(sharp.clone()).unwrap();
    let mut rng = seeded_rng(7);
    for _ in 0..6 {
        let t: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
        assert!(t.validate().passes());
        let d = delta_functor(&t, &st, 0).unwrap();
        assert!(d.functor.validate().passes());
    }
}

#[test]
fn shift_retraction_splits_built_in_functors() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let st = StabiliserStructure::standard(sharp.clone()).unwrap();
    let shift = st.shift(0);
    let retraction = shift.retraction.as_ref().unwrap();
    let mut samples: Vec<Rep> = vec![
        constant_functor(sharp.clone(), FPModule::free(1)),
        representable_functor(sharp.clone(), 1),
        representable_functor(sharp.clone(), 2),
    ];
    let mut rng = seeded_rng(11);
    samples.push(random_functor(
        sharp.clone(),
        &RandomFunctorConfig::default(),
        &mut rng,
    ));
    for t in &samples {
        for n in 0..4 {
            let iota = t.hom(shift.iota[n].unwrap()).unwrap();
            let pi = t.hom(retraction[n].unwrap()).unwrap();
            assert!(iota
                .then(&pi)
                .same_map(&ModuleHom::identity(t.value(n).unwrap())));
            // on free values a left inverse also comes out of an exact solve
            if t.value(n).unwrap().is_free_presentation() {
                let at = iota.matrix.transpose();
                for i in 0..at.rows() {
                    let mut e = vec![z(0); at.rows()];
                    e[i] = z(1);
                    assert!(solve_linear(&at, &e).unwrap().is_some());
                }
            }
        }
    }
}

#[test]
fn generator_completion_matches_full_storage() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let mut rng = seeded_rng(3);
    let t: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
    assert!(t.uses_generators());
    let full = t.to_full();
    assert!(full.validate().passes());
    assert!(t.validate().passes());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_functors_compose_exactly(seed in any::<u64>(), which in 0usize..4) {
        let spec = match which {
            0 => CategorySpec::FiSharp { max: 2 },
            1 => CategorySpec::SubsetMonoid { n: 2 },
            2 => CategorySpec::Pointed { max: 2 },
            _ => CategorySpec::Monotone { max: 2 },
        };
        let c = cat(spec);
        let mut rng = seeded_rng(seed);
        let t: Rep = random_functor(c, &RandomFunctorConfig::default(), &mut rng);
        prop_assert!(t.validate().passes());
    }

    #[test]
    fn precompose_is_associative(seed in any::<u64>()) {
        let fi = structural_map(&StructuralKind::FiInclusion { max: 2 }, DEFAULT_BUDGET).unwrap();
        let sharp = fi.target.clone();
        let mut rng = seeded_rng(seed);
        let t: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
        let id = CatFunctor::identity(sharp);
        let once = precompose(&t, &fi.then(&id)).unwrap();
        let twice = precompose(&precompose(&t, &id).unwrap(), &fi).unwrap();
        for f in 0..fi.source.morphism_count() {
            prop_assert_eq!(once.matrix(f), twice.matrix(f));
        }
    }
}

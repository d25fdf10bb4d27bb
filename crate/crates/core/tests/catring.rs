use std::sync::Arc;

use polycoef::catring::{
    check_property_star, decomposition_check, induce_along, module_induction, random_monoid_module,
    rational_trace, restrict_along, transport_check, CategoryRing, FiniteMonoid, MonoidSquare,
    WitnessSource,
};
use polycoef::cats::{
    build_category, CatFunctor, CatIStructure, CategorySpec, FinCat, Payload, DEFAULT_BUDGET,
};
use polycoef::exactalg::{FPModule, Integer, Matrix, Subobject};
use polycoef::funrep::{
    constant_functor, precompose, random_functor, representable_functor, seeded_rng, FunctorRep,
    RandomFunctorConfig,
};
use polycoef::invariants::cross_effect_functor;

type Rep = FunctorRep<Integer>;

fn cat(spec: CategorySpec) -> Arc<FinCat> {
    Arc::new(build_category(&spec, DEFAULT_BUDGET).unwrap())
}

fn z(v: i64) -> Integer {
    Integer::from(v)
}

/// Multiplication table of the symmetric group on three letters, elements
/// listed as permutations in lexicographic order.
fn s3_table() -> Vec<Vec<u16>> {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let pos = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap() as u16;
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

/// Partial injections `a → b` counted by the size of their domain.
fn partial_injection_count(a: usize, b: usize) -> usize {
    fn choose(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    (0..=a.min(b))
        .map(|j| choose(a, j) * choose(b, j) * (1..=j).product::<usize>())
        .sum()
}

/// Inclusion of the subcategory on `objects` keeping the morphisms accepted by `keep`.
fn inclusion(host: &Arc<FinCat>, objects: &[usize], keep: impl Fn(usize) -> bool) -> CatFunctor {
    let (sub, _) = host.subcategory("sub", objects, keep).unwrap();
    let sub = Arc::new(sub);
    let obj_map = objects.to_vec();
    let mor_map = sub
        .morphisms()
        .iter()
        .map(|m| {
            host.lookup(obj_map[m.source], obj_map[m.target], &m.payload)
                .unwrap()
        })
        .collect();
    let f = CatFunctor {
        name: "inclusion".into(),
        source: sub,
        target: host.clone(),
        obj_map,
        mor_map,
        semi: false,
    };
    f.check().unwrap();
    f
}

fn identity_functor(c: &Arc<FinCat>) -> CatFunctor {
    CatFunctor {
        name: "id".into(),
        source: c.clone(),
        target: c.clone(),
        obj_map: (0..c.object_count()).collect(),
        mor_map: (0..c.morphism_count()).collect(),
        semi: false,
    }
}

#[test]
fn subset_monoid_ring_is_idempotent_algebra() {
    let one = cat(CategorySpec::SubsetMonoid { n: 1 });
    let ring = CategoryRing::new(one.clone()).unwrap();
    assert_eq!(ring.rank(), 2);
    let e = one.lookup(0, 0, &Payload::Subset(0)).unwrap();
    assert_eq!(ring.product(e, e), Some(e));
    assert!(ring.is_associative() && ring.unit_law_holds());

    let two = cat(CategorySpec::SubsetMonoid { n: 2 });
    let ring = CategoryRing::new(two.clone()).unwrap();
    assert_eq!(ring.rank(), 4);
    for s in 0..4u32 {
        for t in 0..4u32 {
            let f = two.lookup(0, 0, &Payload::Subset(s)).unwrap();
            let g = two.lookup(0, 0, &Payload::Subset(t)).unwrap();
            let h = two.lookup(0, 0, &Payload::Subset(s & t)).unwrap();
            assert_eq!(ring.product(f, g), Some(h));
        }
    }
    assert!(ring.is_associative());
}

#[test]
fn discrete_ring_has_orthogonal_idempotents() {
    let d = cat(CategorySpec::Discrete { objects: 2 });
    let ring = CategoryRing::new(d.clone()).unwrap();
    let (e0, e1) = (d.identity(0), d.identity(1));
    assert_eq!(ring.product(e0, e1), None);
    assert_eq!(ring.product(e0, e0), Some(e0));
    let one: Vec<Integer> = ring.unit();
    assert_eq!(one, vec![z(1), z(1)]);
    assert!(ring.unit_law_holds());
}

#[test]
fn partial_injection_ring_is_associative() {
    let ring = CategoryRing::new(cat(CategorySpec::FiSharp { max: 2 })).unwrap();
    assert!(ring.is_associative() && ring.unit_law_holds());
}

#[test]
fn monoid_tables_are_checked() {
    assert!(FiniteMonoid::new(vec![vec![0, 1], vec![1, 1]]).is_ok());
    // no identity
    assert!(FiniteMonoid::new(vec![vec![1, 1], vec![1, 1]]).is_err());
    // not associative: (a·a)·b = b·b = a but a·(a·b) = a·a = b
    assert!(FiniteMonoid::new(vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 1]]).is_err());
}

#[test]
fn induction_along_identity_is_identity() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let mut rng = seeded_rng(5);
    let g: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
    let f = identity_functor(&sharp);
    let ind = induce_along(&f, &g).unwrap();
    let unit = ind.unit(&g).unwrap();
    assert!(unit.naturality_failures().is_empty());
    for o in 0..sharp.object_count() {
        let c = unit.component(o).unwrap();
        assert!(c.is_injective() && c.is_surjective(), "object {o}");
        assert!(ind
            .functor
            .value(o)
            .unwrap()
            .is_isomorphic(g.value(o).unwrap()));
    }
    assert!(ind.functor.validate().passes());
    let back = restrict_along(&f, &ind.functor).unwrap();
    assert_eq!(back.values().len(), g.values().len());
}

#[test]
fn induction_from_trivial_group_gives_regular_representation() {
    for table in [
        polycoef::cats::GroupTable::cyclic(4).rows().to_vec(),
        s3_table(),
    ] {
        let order = table.len();
        let group = cat(CategorySpec::Group { table });
        let point = cat(CategorySpec::Discrete { objects: 1 });
        let f = CatFunctor {
            name: "point".into(),
            source: point.clone(),
            target: group.clone(),
            obj_map: vec![0],
            mor_map: vec![group.identity(0)],
            semi: false,
        };
        let g: Rep = constant_functor(point, FPModule::free(1));
        let ind = induce_along(&f, &g).unwrap();
        let v = ind.functor.value(0).unwrap();
        assert_eq!(v.invariants().free_rank, order);
        assert!(v.invariants().torsion.is_empty());
        for x in 0..order {
            let tr = rational_trace(v, ind.functor.matrix(x).unwrap());
            let expected = if group.is_identity(x) {
                order as i64
            } else {
                0
            };
            assert_eq!(tr, z(expected), "element {x}");
        }
    }
}

#[test]
fn induction_from_an_object_counts_morphisms() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    for a in 0..=3 {
        let f = inclusion(&sharp, &[a], |m| sharp.is_identity(m));
        let g: Rep = constant_functor(f.source.clone(), FPModule::free(1));
        let ind = induce_along(&f, &g).unwrap();
        for b in 0..=4 {
            let rank = ind.functor.value(b).unwrap().invariants().free_rank;
            assert_eq!(rank, partial_injection_count(a, b), "{a} -> {b}");
        }
    }
}

#[test]
fn unit_is_bijective_along_full_subcategories() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let mut rng = seeded_rng(17);
    let t: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
    for objects in [vec![2], vec![1, 3]] {
        let f = inclusion(&sharp, &objects, |_| true);
        let g = restrict_along(&f, &t).unwrap();
        let ind = induce_along(&f, &g).unwrap();
        let unit = ind.unit(&g).unwrap();
        for a in 0..objects.len() {
            let c = unit.component(a).unwrap();
            assert!(c.is_surjective() && c.is_injective(), "{objects:?} at {a}");
        }
    }
    // along the automorphisms only, the unit is injective but not surjective
    let f = inclusion(&sharp, &[2], |m| sharp.inverse(m).is_some());
    let p: Rep = representable_functor(sharp.clone(), 1);
    let g = precompose(&p, &f).unwrap();
    let unit = induce_along(&f, &g).unwrap().unit(&g).unwrap();
    let c = unit.component(0).unwrap();
    assert!(c.is_injective());
    assert!(!c.is_surjective());
}

#[test]
fn functor_induction_matches_ring_induction() {
    let sharp = cat(CategorySpec::FiSharp { max: 2 });
    let f = inclusion(&sharp, &[0, 2], |_| true);
    for seed in 0..3 {
        let mut rng = seeded_rng(90 + seed);
        let t: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
        let g = restrict_along(&f, &t).unwrap();
        let ind = induce_along(&f, &g).unwrap();
        let ring = module_induction(&f, &g).unwrap();
        let mut total = FPModule::zero();
        for b in 0..sharp.object_count() {
            let value = ind.functor.value(b).unwrap();
            assert_eq!(
                &ring.summand(b).unwrap().invariants(),
                value.invariants(),
                "seed {seed}, b = {b}"
            );
            total = total.direct_sum(value);
        }
        assert!(total.is_isomorphic(&ring.module));
    }
}

#[test]
fn module_induction_needs_injectivity_on_objects() {
    let sharp = cat(CategorySpec::FiSharp { max: 2 });
    let two = cat(CategorySpec::Discrete { objects: 2 });
    let f = CatFunctor {
        name: "collapse".into(),
        source: two.clone(),
        target: sharp.clone(),
        obj_map: vec![1, 1],
        mor_map: vec![sharp.identity(1), sharp.identity(1)],
        semi: false,
    };
    let g: Rep = constant_functor(two, FPModule::free(1));
    assert!(module_induction(&f, &g).is_err());
    // the functor-level induction still applies
    let ind = induce_along(&f, &g).unwrap();
    assert_eq!(ind.functor.value(1).unwrap().invariants().free_rank, 2 * 2);
}

#[test]
fn order_preserving_witness_satisfies_the_condition() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let st = CatIStructure::standard(sharp, DEFAULT_BUDGET).unwrap();
    for n in 0..=4 {
        for k in 0..=n {
            let (sq, _) = MonoidSquare::partition_square(&st, k, n - k).unwrap();
            let r = check_property_star(&sq, None).unwrap();
            assert_eq!(r.source, WitnessSource::OrderPreserving);
            assert!(r.holds, "k = {k}, l = {}: {:?}", n - k, r.disagreements);
        }
    }
    let (sq, _) = MonoidSquare::partition_square(&st, 1, 2).unwrap();
    assert_eq!(sq.d.order(), 34);
}

#[test]
fn empty_witness_fails_surjectivity() {
    let sharp = cat(CategorySpec::FiSharp { max: 2 });
    let st = CatIStructure::standard(sharp, DEFAULT_BUDGET).unwrap();
    let (sq, _) = MonoidSquare::partition_square(&st, 1, 1).unwrap();
    let r = check_property_star(&sq, Some(&[])).unwrap();
    assert!(!r.surjective && !r.holds);
    assert!(check_property_star(&sq, Some(&[(usize::MAX, 0)])).is_err());
}

#[test]
fn all_factorisations_can_violate_agreement() {
    let sharp = cat(CategorySpec::FiSharp { max: 2 });
    let st = CatIStructure::standard(sharp, DEFAULT_BUDGET).unwrap();
    let (sq, _) = MonoidSquare::partition_square(&st, 1, 1).unwrap();
    let all: Vec<(usize, usize)> =
        sq.b.iter()
            .flat_map(|&b| sq.c.iter().map(move |&c| (b, c)))
            .collect();
    let r = check_property_star(&sq, Some(&all)).unwrap();
    assert!(r.surjective);
    assert!(!r.agreement);
    let mut bare = sq.clone();
    bare.labels = None;
    let r = check_property_star(&bare, None).unwrap();
    assert_eq!(r.source, WitnessSource::Section);
    assert!(r.holds);
}

#[test]
fn transport_holds_for_cross_effect_modules() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET).unwrap();
    let mut rng = seeded_rng(3);
    let t: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
    let tf = cross_effect_functor(&t, &st, 3).unwrap();
    for piece in &tf.pieces {
        let (sq, elements) = MonoidSquare::partition_square(&st, piece.k, piece.l).unwrap();
        let action: Vec<_> =
            sq.c.iter()
                .map(|&c| {
                    let i = piece
                        .endomorphisms
                        .iter()
                        .position(|&f| f == elements[c])
                        .unwrap();
                    piece.actions[i].clone()
                })
                .collect();
        let r = transport_check(&sq, &piece.module, &action).unwrap();
        assert!(
            r.holds(),
            "({}, {}): {:?} vs {:?}",
            piece.k,
            piece.l,
            r.lhs,
            r.rhs
        );
    }
}

#[test]
fn transport_fails_for_the_trivial_module() {
    // every d is equivalent to d·∅ = ∅ in ZD ⊗ Z, while ZΣ₂ ⊗ Z = Z²
    let sharp = cat(CategorySpec::FiSharp { max: 2 });
    let st = CatIStructure::standard(sharp, DEFAULT_BUDGET).unwrap();
    let (sq, _) = MonoidSquare::partition_square(&st, 1, 1).unwrap();
    assert!(check_property_star(&sq, None).unwrap().holds);
    let m = FPModule::<Integer>::free(1);
    let action = vec![Matrix::identity(1); sq.c.len()];
    let r = transport_check(&sq, &m, &action).unwrap();
    assert_eq!(r.lhs.free_rank, 1);
    assert_eq!(r.rhs.free_rank, 2);
    assert!(!r.holds());
}

#[test]
fn random_monoid_modules_are_modules() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let st = CatIStructure::standard(sharp, DEFAULT_BUDGET).unwrap();
    let (sq, _) = MonoidSquare::partition_square(&st, 1, 2).unwrap();
    let mut rng = seeded_rng(8);
    let (m, action) = random_monoid_module::<Integer>(&sq.d, &sq.c, 2, 2, 3, &mut rng).unwrap();
    let zero = Subobject::zero(&m);
    for (i, &a) in sq.c.iter().enumerate() {
        for (j, &b) in sq.c.iter().enumerate() {
            let k = sq.c.iter().position(|&x| x == sq.d.mul(a, b)).unwrap();
            let diff = action[i].mul(&action[j]).sub(&action[k]);
            assert!((0..diff.cols()).all(|c| zero.contains_element(&diff.column(c))));
        }
    }
}

#[test]
fn decomposition_of_constant_and_representable() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET).unwrap();
    let c: Rep = constant_functor(sharp.clone(), FPModule::free(1));
    for n in 0..=3 {
        let r = decomposition_check(&c, &st, n).unwrap();
        assert!(r.isomorphic());
        assert_eq!(r.lhs.free_rank, 1);
        assert!(r.lhs_character.iter().all(|t| *t == z(1)));
    }
    let p1: Rep = representable_functor(sharp.clone(), 1);
    let r = decomposition_check(&p1, &st, 2).unwrap();
    assert!(r.isomorphic());
    assert_eq!(r.rhs.free_rank, 3);
    let mut chars = r.rhs_character.clone();
    chars.sort();
    assert_eq!(chars, vec![z(1), z(3)]);
}

#[test]
fn decomposition_of_random_functors() {
    let sharp = cat(CategorySpec::FiSharp { max: 3 });
    let st = CatIStructure::standard(sharp.clone(), DEFAULT_BUDGET).unwrap();
    for seed in 0..3 {
        let mut rng = seeded_rng(200 + seed);
        let t: Rep = random_functor(sharp.clone(), &RandomFunctorConfig::default(), &mut rng);
        for n in 0..=3 {
            let r = decomposition_check(&t, &st, n).unwrap();
            assert!(
                r.isomorphic(),
                "seed {seed}, n = {n}: {:?} vs {:?}",
                r.lhs,
                r.rhs
            );
        }
    }
}

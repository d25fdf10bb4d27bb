use std::sync::Arc;

use polycoef::cats::{
    build_category, check_braidable, check_cati_axioms, closed_form_count, compose_word,
    factorize_partial_injection, find_conjugator, structural_map, CatIStructure, CategorySpec,
    FinCat, GroupTable, PartialInjection, Payload, StabiliserStructure, StructuralKind,
    DEFAULT_BUDGET,
};
use proptest::prelude::*;

fn cat(spec: CategorySpec) -> Arc<FinCat> {
    Arc::new(build_category(&spec, DEFAULT_BUDGET).unwrap())
}

fn z2() -> Vec<Vec<u16>> {
    GroupTable::cyclic(2).rows().to_vec()
}

/// Every function `{1..m} -> {0..n}` (0 = undefined), filtered by a predicate.
fn brute_force_maps(m: usize, n: usize, keep: impl Fn(&[usize]) -> bool) -> usize {
    let mut count = 0;
    for code in 0..(n + 1).pow(m as u32) {
        let mut c = code;
        let f: Vec<usize> = (0..m)
            .map(|_| {
                let v = c % (n + 1);
                c /= n + 1;
                v
            })
            .collect();
        if keep(&f) {
            count += 1;
        }
    }
    count
}

fn injective(f: &[usize]) -> bool {
    let defined: Vec<usize> = f.iter().copied().filter(|&v| v > 0).collect();
    let mut d = defined.clone();
    d.sort();
    d.dedup();
    d.len() == defined.len()
}

#[test]
fn hom_counts_match_brute_force() {
    let sharp = cat(CategorySpec::FiSharp { max: 4 });
    let fi = cat(CategorySpec::Fi { max: 4 });
    let mono = cat(CategorySpec::Monotone { max: 4 });
    for m in 0..=4 {
        for n in 0..=4 {
            assert_eq!(sharp.hom(m, n).len(), brute_force_maps(m, n, injective));
            let total = |f: &[usize]| injective(f) && f.iter().all(|&v| v > 0);
            assert_eq!(fi.hom(m, n).len(), brute_force_maps(m, n, total));
            let increasing = |f: &[usize]| {
                let d: Vec<usize> = f.iter().copied().filter(|&v| v > 0).collect();
                d.windows(2).all(|w| w[0] < w[1])
            };
            assert_eq!(mono.hom(m, n).len(), brute_force_maps(m, n, increasing));
        }
    }
    assert_eq!(sharp.hom(2, 2).len(), 7);
}

#[test]
fn closed_forms_match_enumeration() {
    let specs = [
        CategorySpec::Subsets { max: 4 },
        CategorySpec::SubsetMonoid { n: 3 },
        CategorySpec::SubsetPoset { n: 3 },
        CategorySpec::SubsetPosetOp { n: 3 },
        CategorySpec::Fi { max: 4 },
        CategorySpec::FiSharp { max: 4 },
        CategorySpec::FiSharpWreath {
            max: 3,
            table: z2(),
        },
        CategorySpec::Monotone { max: 4 },
        CategorySpec::Pointed { max: 3 },
        CategorySpec::Chain { max: 5 },
        CategorySpec::Group {
            table: GroupTable::cyclic(5).rows().to_vec(),
        },
        CategorySpec::Discrete { objects: 3 },
    ];
    for spec in specs {
        let c = build_category(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            c.morphism_count() as u128,
            closed_form_count(&spec),
            "{spec}"
        );
    }
}

#[test]
fn small_cube_categories() {
    assert_eq!(cat(CategorySpec::SubsetMonoid { n: 3 }).morphism_count(), 8);
    let j2 = cat(CategorySpec::SubsetPoset { n: 2 });
    assert_eq!(j2.morphism_count(), 9);
    // oracle: pairs S ⊆ T of subsets of {1,2}
    let pairs = (0u32..4)
        .flat_map(|s| (0u32..4).map(move |t| (s, t)))
        .filter(|(s, t)| s & !t == 0)
        .count();
    assert_eq!(pairs, 9);
}

#[test]
fn associativity_holds_exhaustively() {
    for spec in [
        CategorySpec::Subsets { max: 3 },
        CategorySpec::SubsetPoset { n: 2 },
        CategorySpec::SubsetPosetOp { n: 2 },
        CategorySpec::Fi { max: 3 },
        CategorySpec::FiSharp { max: 3 },
        CategorySpec::FiSharpWreath {
            max: 2,
            table: z2(),
        },
        CategorySpec::Monotone { max: 3 },
        CategorySpec::Pointed { max: 2 },
        CategorySpec::Chain { max: 4 },
    ] {
        cat(spec).check_laws().unwrap();
    }
}

#[test]
fn payload_composition_is_relational_composition() {
    let c = cat(CategorySpec::FiSharp { max: 3 });
    for f in 0..c.morphism_count() {
        for g in c
            .morphisms()
            .iter()
            .enumerate()
            .filter(|(_, m)| m.source == c.target(f))
        {
            let (Payload::Injection(pf), Payload::Injection(pg)) = (c.payload(f), &g.1.payload)
            else {
                unreachable!()
            };
            let expected: Vec<u8> = pf
                .assignment()
                .iter()
                .map(|&v| {
                    if v == 0 {
                        0
                    } else {
                        pg.assignment()[v as usize - 1]
                    }
                })
                .collect();
            let h = c.compose(g.0, f);
            let Payload::Injection(ph) = c.payload(h) else {
                unreachable!()
            };
            assert_eq!(ph.assignment(), expected.as_slice());
        }
    }
}

#[test]
fn z_sends_full_inclusion_to_empty_subset() {
    let z = structural_map(&StructuralKind::Z { n: 2 }, DEFAULT_BUDGET).unwrap();
    let f = z
        .source
        .lookup(
            0b00,
            0b11,
            &Payload::Inclusion {
                lower: 0b00,
                upper: 0b11,
            },
        )
        .unwrap();
    assert_eq!(*z.target.payload(z.apply(f)), Payload::Subset(0));
    for n in 1..=3 {
        for kind in [StructuralKind::Z { n }, StructuralKind::ZPrime { n }] {
            let f = structural_map(&kind, DEFAULT_BUDGET).unwrap();
            assert!(!f.semi);
            f.check().unwrap();
        }
    }
}

#[test]
fn spread_examples() {
    let psi = structural_map(
        &StructuralKind::Spread {
            parts: vec![0, 2, 2],
        },
        DEFAULT_BUDGET,
    )
    .unwrap();
    let image = |mask: u32| {
        let f = psi.source.lookup(0, 0, &Payload::Subset(mask)).unwrap();
        *psi.target.payload(psi.apply(f))
    };
    assert_eq!(image(0b01), Payload::Subset(0b0011));
    assert_eq!(image(0b10), Payload::Subset(0b1100));
    let id = structural_map(
        &StructuralKind::Spread {
            parts: vec![0, 1, 1, 1],
        },
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert!(id.preserves_identities());
    assert_eq!(id.mor_map, (0..8).collect::<Vec<_>>());
}

#[test]
fn standard_stabiliser_on_partial_injections() {
    let c = cat(CategorySpec::FiSharp { max: 4 });
    let st = StabiliserStructure::standard(c.clone()).unwrap();
    let sh = st.shift(0);
    let iota2 = sh.iota[2].unwrap();
    assert_eq!(
        *c.payload(iota2),
        Payload::Injection(PartialInjection::new(&[2, 3], 3).unwrap())
    );
    assert_eq!(sh.mor_map[c.identity(2)], Some(c.identity(3)));
    assert!(sh.retraction.is_some());
}

#[test]
fn multi_stabiliser_iterates_the_shift() {
    let c = cat(CategorySpec::FiSharp { max: 6 });
    let st = StabiliserStructure::multi(c.clone(), 3).unwrap();
    for sh in st.shifts() {
        for n in sh.window() {
            let expected = PartialInjection::shift(n, sh.k);
            assert_eq!(
                *c.payload(sh.iota[n].unwrap()),
                Payload::Injection(expected)
            );
        }
    }
}

#[test]
fn other_stabiliser_hosts() {
    for spec in [
        CategorySpec::Fi { max: 3 },
        CategorySpec::FiSharpWreath {
            max: 3,
            table: z2(),
        },
        CategorySpec::Pointed { max: 3 },
        CategorySpec::Chain { max: 4 },
        CategorySpec::Monotone { max: 3 },
    ] {
        StabiliserStructure::standard(cat(spec)).unwrap();
    }
    assert!(StabiliserStructure::standard(cat(CategorySpec::Subsets { max: 3 })).is_err());
    let fi = StabiliserStructure::standard(cat(CategorySpec::Fi { max: 3 })).unwrap();
    assert!(fi.shift(0).retraction.is_none());
}

#[test]
fn braidings() {
    let c = cat(CategorySpec::FiSharp { max: 4 });
    let st = StabiliserStructure::standard(c.clone()).unwrap();
    let psi = check_braidable(&st, 1_000_000).unwrap().expect("braidable");
    for (n, m) in &psi.components {
        let mut swap = vec![2u8, 1];
        swap.extend((3..=*n as u8 + 2).collect::<Vec<_>>());
        assert_eq!(
            *c.payload(*m),
            Payload::Injection(PartialInjection::new(&swap, n + 2).unwrap())
        );
    }

    let chain = cat(CategorySpec::Chain { max: 4 });
    let st = StabiliserStructure::standard(chain.clone()).unwrap();
    let psi = check_braidable(&st, 1_000).unwrap().expect("braidable");
    assert!(psi.components.iter().all(|(_, m)| chain.is_identity(*m)));

    let mono = cat(CategorySpec::Monotone { max: 4 });
    let st = StabiliserStructure::standard(mono).unwrap();
    assert!(check_braidable(&st, 1_000_000).unwrap().is_none());
}

#[test]
fn conjugators() {
    let c = cat(CategorySpec::FiSharp { max: 4 });
    let phi = find_conjugator(&c, 3, 0b001, 0b100).unwrap().unwrap();
    assert_eq!(
        *c.payload(phi),
        Payload::Injection(PartialInjection::new(&[3, 2, 1], 3).unwrap())
    );
    assert_eq!(
        find_conjugator(&c, 3, 0b011, 0b011).unwrap(),
        Some(c.identity(3))
    );
    assert!(find_conjugator(&c, 3, 0b011, 0b001).is_err());
    for n in 0..=4 {
        for r in 0u32..1 << n {
            for s in (0u32..1 << n).filter(|s| s.count_ones() == r.count_ones()) {
                assert!(find_conjugator(&c, n, r, s).unwrap().is_some());
            }
        }
    }
    let subsets = cat(CategorySpec::Subsets { max: 3 });
    assert_eq!(find_conjugator(&subsets, 2, 0b01, 0b10).unwrap(), None);
}

#[test]
fn factorization_examples() {
    for n in 0..5 {
        let shift = PartialInjection::shift(n, 1);
        assert_eq!(compose_word(n, &factorize_partial_injection(&shift)), shift);
    }
}

#[test]
fn cati_axioms() {
    let sharp =
        CatIStructure::standard(cat(CategorySpec::FiSharp { max: 4 }), DEFAULT_BUDGET).unwrap();
    assert!(check_cati_axioms(&sharp).unwrap().passes());

    let subsets =
        CatIStructure::standard(cat(CategorySpec::Subsets { max: 4 }), DEFAULT_BUDGET).unwrap();
    let report = check_cati_axioms(&subsets).unwrap();
    assert!(report.composite_is_inclusion);
    assert_eq!(report.aut_not_surjective, vec![2, 3, 4]);
    assert!(!report.passes());

    let wreath = CatIStructure::standard(
        cat(CategorySpec::FiSharpWreath {
            max: 3,
            table: z2(),
        }),
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert!(check_cati_axioms(&wreath).unwrap().passes());
}

fn partial_injection() -> impl Strategy<Value = PartialInjection> {
    (0usize..=6, 0usize..=6)
        .prop_flat_map(|(m, n)| (Just(n), prop::collection::vec(any::<u16>(), m)))
        .prop_map(|(n, picks)| {
            let mut free: Vec<u8> = (1..=n as u8).collect();
            let assignment: Vec<u8> = picks
                .iter()
                .map(|&p| {
                    let pick = p as usize % (free.len() + 1);
                    if pick == free.len() {
                        0
                    } else {
                        free.swap_remove(pick)
                    }
                })
                .collect();
            PartialInjection::new(&assignment, n).unwrap()
        })
}

proptest! {
    #[test]
    fn factorization_recomposes(phi in partial_injection()) {
        let word = factorize_partial_injection(&phi);
        prop_assert_eq!(compose_word(phi.source(), &word), phi);
    }

    #[test]
    fn spread_is_a_semigroup_map(parts in prop::collection::vec(0usize..3, 1..5), a in 0u32..16, b in 0u32..16) {
        let lambda = polycoef::cats::ShiftedPartition::new(parts.clone()).unwrap();
        let mask = (1u32 << lambda.length()) - 1;
        let (a, b) = (a & mask, b & mask);
        prop_assert_eq!(lambda.spread(a & b), lambda.spread(a) & lambda.spread(b));
        let unital = lambda.spread(mask) == (1u32 << lambda.total()) - 1;
        prop_assert_eq!(unital, parts[0] == 0);
    }
}

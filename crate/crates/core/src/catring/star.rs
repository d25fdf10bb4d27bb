use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{induce_monoid, rational_trace, CatRingError, FiniteMonoid};
use crate::cats::{CatIStructure, MorId, PartialInjection, Payload};
use crate::exactalg::sparse::{shrink, SparseVec};
use crate::exactalg::{FPModule, Matrix, ModuleInvariants, Ring};

/// Submonoids `A ⊆ B, C ⊆ D` with `A = B ∩ C`.
#[derive(Clone, Debug)]
pub struct MonoidSquare {
    pub d: FiniteMonoid,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    /// The partial bijection of `{1..n}` under each element of `D`, if known.
    pub labels: Option<Vec<PartialInjection>>,
}

/// Largest `|B × C|` for which a witness is built without labels.
pub const SEARCH_LIMIT: usize = 1 << 16;

impl MonoidSquare {
    pub fn new(
        d: FiniteMonoid,
        a: Vec<usize>,
        b: Vec<usize>,
        c: Vec<usize>,
    ) -> Result<Self, CatRingError> {
        for (name, s) in [("A", &a), ("B", &b), ("C", &c)] {
            if !d.is_submonoid(s) {
                return Err(CatRingError::Malformed(format!(
                    "{name} is not a submonoid of D"
                )));
            }
        }
        let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        let meet: BTreeSet<usize> = set(&b).intersection(&set(&c)).copied().collect();
        if set(&a) != meet {
            return Err(CatRingError::Malformed(
                "A is not the intersection of B and C".into(),
            ));
        }
        Ok(MonoidSquare {
            d,
            a,
            b,
            c,
            labels: None,
        })
    }

    /// `End(s(n)) ⊇ π⁻¹(P_k × P_l)` with their unit groups, for `n = k + l`,
    /// where `P_k × P_l` preserves `{1..l} ⊔ {l+1..n}`. Also returns the
    /// morphism behind each element of `D`.
    pub fn partition_square(
        st: &CatIStructure,
        k: usize,
        l: usize,
    ) -> Result<(MonoidSquare, Vec<MorId>), CatRingError> {
        let n = k + l;
        let o = st.object(n).ok_or_else(|| {
            CatRingError::Unsupported(format!("object {n} is beyond the category"))
        })?;
        let (d, elements) = FiniteMonoid::endomorphisms(&st.host, o);
        let labels: Vec<PartialInjection> = elements
            .iter()
            .map(|&f| match st.sigma.payload(st.pi.apply(f)) {
                Payload::Injection(p) => Ok(*p),
                other => Err(CatRingError::Malformed(format!("π sends {f} to {other:?}"))),
            })
            .collect::<Result<_, _>>()?;
        let c: Vec<usize> = (0..d.order())
            .filter(|&x| preserves_blocks(&labels[x], l))
            .collect();
        let b = d.units();
        let a: Vec<usize> = b.iter().copied().filter(|x| c.contains(x)).collect();
        let mut sq = MonoidSquare::new(d, a, b, c)?;
        sq.labels = Some(labels);
        Ok((sq, elements))
    }
}

/// `p` keeps `{1..l}` and `{l+1..}` apart wherever it is defined.
pub fn preserves_blocks(p: &PartialInjection, l: usize) -> bool {
    (1..=p.source()).all(|i| p.apply(i).is_none_or(|j| (i <= l) == (j <= l)))
}

fn order_preserving_on(p: &PartialInjection, mask: u32) -> bool {
    let points: Vec<usize> = (1..=p.source())
        .filter(|&i| mask >> (i - 1) & 1 == 1)
        .collect();
    points
        .windows(2)
        .all(|w| match (p.apply(w[0]), p.apply(w[1])) {
            (Some(x), Some(y)) => x < y,
            _ => false,
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Supplied,
    /// `(b, c)` with `π(b)` order-preserving off the image of `π(c)`.
    OrderPreserving,
    /// One factorisation `bc` for each element of `D`.
    Section,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub holds: bool,
    pub surjective: bool,
    pub agreement: bool,
    pub source: WitnessSource,
    pub witness: Vec<(usize, usize)>,
    /// Elements of `D` with no factorisation in the witness.
    pub unfactored: Vec<usize>,
    /// Pairs with equal products and no connecting element of `A` (at most ten).
    pub disagreements: Vec<((usize, usize), (usize, usize))>,
}

/// Checks condition (∗) exhaustively for a supplied or constructed `X ⊆ B × C`.
pub fn check_property_star(
    sq: &MonoidSquare,
    x: Option<&[(usize, usize)]>,
) -> Result<StarReport, CatRingError> {
    let d = &sq.d;
    let (witness, source) = match (x, &sq.labels) {
        (Some(x), _) => {
            if x.iter()
                .any(|(b, c)| !sq.b.contains(b) || !sq.c.contains(c))
            {
                return Err(CatRingError::Malformed("X is not inside B × C".into()));
            }
            (x.to_vec(), WitnessSource::Supplied)
        }
        (None, Some(labels)) => {
            let n = labels.first().map_or(0, |p| p.source());
            let full = (1u32 << n) - 1;
            let mut out = Vec::new();
            for &b in &sq.b {
                for &c in &sq.c {
                    if order_preserving_on(&labels[b], full & !labels[c].image_mask()) {
                        out.push((b, c));
                    }
                }
            }
            (out, WitnessSource::OrderPreserving)
        }
        (None, None) => {
            let needed = sq.b.len() * sq.c.len();
            if needed > SEARCH_LIMIT {
                return Err(CatRingError::TooLarge {
                    needed,
                    budget: SEARCH_LIMIT,
                });
            }
            let mut chosen: HashMap<usize, (usize, usize)> = HashMap::new();
            for &b in &sq.b {
                for &c in &sq.c {
                    chosen.entry(d.mul(b, c)).or_insert((b, c));
                }
            }
            let mut out: Vec<(usize, usize)> = chosen.into_values().collect();
            out.sort_unstable();
            (out, WitnessSource::Section)
        }
    };
    let mut by_product: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for &(b, c) in &witness {
        by_product.entry(d.mul(b, c)).or_default().push((b, c));
    }
    let unfactored: Vec<usize> = (0..d.order())
        .filter(|e| !by_product.contains_key(e))
        .collect();
    let mut disagreements = Vec::new();
    let mut agreement = true;
    let mut groups: Vec<_> = by_product.into_iter().collect();
    groups.sort_unstable();
    for (_, pairs) in groups {
        for &(b1, c1) in &pairs {
            for &(b2, c2) in &pairs {
                let ok =
                    sq.a.iter()
                        .any(|&a| d.mul(b2, a) == b1 && d.mul(a, c1) == c2);
                if !ok {
                    agreement = false;
                    if disagreements.len() < 10 {
                        disagreements.push(((b1, c1), (b2, c2)));
                    }
                }
            }
        }
    }
    let surjective = unfactored.is_empty();
    Ok(StarReport {
        holds: surjective && agreement,
        surjective,
        agreement,
        source,
        witness,
        unfactored,
        disagreements,
    })
}

/// Both sides of `ZD ⊗_{ZC} M ≅ ZB ⊗_{ZA} M` as `B`-modules.
#[derive(Clone, Debug)]
pub struct TransportReport<R> {
    pub lhs: ModuleInvariants<R>,
    pub rhs: ModuleInvariants<R>,
    /// Traces of the elements of `B`, in the order of `sq.b`.
    pub lhs_character: Vec<R>,
    pub rhs_character: Vec<R>,
}

impl<R: Ring> TransportReport<R> {
    pub fn groups_isomorphic(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn characters_agree(&self) -> bool {
        self.lhs_character == self.rhs_character
    }

    pub fn holds(&self) -> bool {
        self.groups_isomorphic() && self.characters_agree()
    }
}

/// Compares induction from `C` to `D`, restricted to `B`, with induction from
/// `A` to `B`; `action` lists the matrices of `sq.c` on `m`.
pub fn transport_check<R: Ring>(
    sq: &MonoidSquare,
    m: &FPModule<R>,
    action: &[Matrix<R>],
) -> Result<TransportReport<R>, CatRingError> {
    let lhs = induce_monoid(&sq.d, &sq.c, m, action)?;
    let (bm, b_elems) = sq.d.submonoid(&sq.b)?;
    let pos_b = |x: usize| b_elems.iter().position(|&y| y == x).expect("element of B");
    let pos_c = |x: usize| sq.c.iter().position(|&y| y == x).expect("element of C");
    let a_in_b: Vec<usize> = sq.a.iter().map(|&x| pos_b(x)).collect();
    let a_action: Vec<Matrix<R>> = sq.a.iter().map(|&x| action[pos_c(x)].clone()).collect();
    let rhs = induce_monoid(&bm, &a_in_b, m, &a_action)?;
    let lhs_character =
        sq.b.iter()
            .map(|&b| rational_trace(&lhs.module, &lhs.act(b)))
            .collect();
    let rhs_character =
        sq.b.iter()
            .map(|&b| rational_trace(&rhs.module, &rhs.act(pos_b(b))))
            .collect();
    Ok(TransportReport {
        lhs: lhs.module.invariants().clone(),
        rhs: rhs.module.invariants().clone(),
        lhs_character,
        rhs_character,
    })
}

/// A random finitely presented module over the submonoid `members`: a free
/// module of the given rank modulo the submodules generated by a few random
/// elements. Returns the module and the matrices of `members` on it.
pub fn random_monoid_module<R: Ring>(
    d: &FiniteMonoid,
    members: &[usize],
    rank: usize,
    relations: usize,
    bound: i64,
    rng: &mut impl rand::Rng,
) -> Result<(FPModule<R>, Vec<Matrix<R>>), CatRingError> {
    if !d.is_submonoid(members) {
        return Err(CatRingError::Malformed("not a submonoid".into()));
    }
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let n = members.len() * rank;
    let shift = |c: usize, g: usize| pos[&d.mul(c, members[g / rank])] * rank + g % rank;
    let mut rels: Vec<SparseVec<R>> = Vec::new();
    for _ in 0..relations {
        let mut v: SparseVec<R> = SparseVec::new();
        for _ in 0..rng.random_range(1..=3) {
            let mut coeff = rng.random_range(-bound..=bound);
            if coeff == 0 {
                coeff = 1;
            }
            let e = v.entry(rng.random_range(0..n)).or_insert_with(R::zero);
            *e = e.add(&R::from_i64(coeff));
        }
        for &c in members {
            let mut moved = SparseVec::new();
            for (g, x) in &v {
                let e = moved.entry(shift(c, *g)).or_insert_with(R::zero);
                *e = e.add(x);
            }
            rels.push(moved);
        }
    }
    let shrunk = shrink(n, rels);
    let to_old = shrunk.to_old_matrix();
    let actions = members
        .iter()
        .map(|&c| {
            let mut perm = Matrix::zeros(n, n);
            for g in 0..n {
                perm[(shift(c, g), g)] = R::one();
            }
            shrunk.to_new_matrix().mul(&perm).mul(&to_old)
        })
        .collect();
    Ok((shrunk.module, actions))
}

use std::collections::{BTreeSet, HashMap};

use super::CatRingError;
use crate::cats::{FinCat, MorId, ObjId};

/// A finite monoid given by its multiplication table; `mul(a, b)` is `a·b`,
/// which for endomorphism monoids means `a ∘ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    order: usize,
    table: Vec<usize>,
    identity: usize,
}

impl FiniteMonoid {
    /// Checks the identity and associativity exhaustively.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, CatRingError> {
        let order = table.len();
        if table
            .iter()
            .any(|row| row.len() != order || row.iter().any(|&x| x >= order))
        {
            return Err(CatRingError::Malformed(
                "table is not square or has entries out of range".into(),
            ));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| flat[e * order + a] == a && flat[a * order + e] == a))
            .ok_or_else(|| CatRingError::Malformed("no identity element".into()))?;
        let m = FiniteMonoid {
            order,
            table: flat,
            identity,
        };
        for a in 0..order {
            for b in 0..order {
                let ab = m.mul(a, b);
                for c in 0..order {
                    if m.mul(ab, c) != m.mul(a, m.mul(b, c)) {
                        return Err(CatRingError::Malformed(format!(
                            "({a}·{b})·{c} ≠ {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    /// `End(o)` with its elements listed in the order of `cat.hom(o, o)`.
    pub fn endomorphisms(cat: &FinCat, o: ObjId) -> (FiniteMonoid, Vec<MorId>) {
        let elements: Vec<MorId> = cat.hom(o, o).to_vec();
        let index: HashMap<MorId, usize> =
            elements.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let order = elements.len();
        let mut table = Vec::with_capacity(order * order);
        for &g in &elements {
            for &f in &elements {
                table.push(index[&cat.compose(g, f)]);
            }
        }
        let identity = index[&cat.identity(o)];
        (
            FiniteMonoid {
                order,
                table,
                identity,
            },
            elements,
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.order)
            .find(|&b| self.mul(a, b) == self.identity && self.mul(b, a) == self.identity)
    }

    /// The group of units.
    pub fn units(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| self.inverse(a).is_some())
            .collect()
    }

    pub fn is_submonoid(&self, members: &[usize]) -> bool {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        set.contains(&self.identity)
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// The submonoid generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    /// A small generating set of the submonoid `members`, chosen greedily with
    /// units first.
    pub fn generating_set(&self, members: &[usize]) -> Vec<usize> {
        let mut ordered: Vec<usize> = members.to_vec();
        ordered.sort_by_key(|&a| (self.inverse(a).is_none(), a));
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for a in ordered {
            if !span.contains(&a) {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// The submonoid on `members` as a monoid in its own right, together with
    /// the position of each new element in `self`.
    pub fn submonoid(&self, members: &[usize]) -> Result<(FiniteMonoid, Vec<usize>), CatRingError> {
        if !self.is_submonoid(members) {
            return Err(CatRingError::Malformed("not a submonoid".into()));
        }
        let members: Vec<usize> = members
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let order = members.len();
        let mut table = Vec::with_capacity(order * order);
        for &a in &members {
            for &b in &members {
                table.push(pos[&self.mul(a, b)]);
            }
        }
        Ok((
            FiniteMonoid {
                order,
                table,
                identity: pos[&self.identity],
            },
            members,
        ))
    }
}

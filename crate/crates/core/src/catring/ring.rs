use std::sync::Arc;

use super::CatRingError;
use crate::cats::{FinCat, MorId};
use crate::exactalg::Ring;

/// Largest multiplication table built eagerly.
pub const TABLE_BUDGET: usize = 1 << 22;

/// The ring with basis the morphisms of a finite category, where a product
/// of two morphisms is their composite when composable and zero otherwise.
#[derive(Clone, Debug)]
pub struct CategoryRing {
    cat: Arc<FinCat>,
    table: Vec<Option<MorId>>,
}

impl CategoryRing {
    pub fn new(cat: Arc<FinCat>) -> Result<Self, CatRingError> {
        let n = cat.morphism_count();
        if n * n > TABLE_BUDGET {
            return Err(CatRingError::TooLarge {
                needed: n * n,
                budget: TABLE_BUDGET,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for f in 0..n {
            for g in 0..n {
                table.push(cat.try_compose(f, g));
            }
        }
        Ok(CategoryRing { cat, table })
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn rank(&self) -> usize {
        self.cat.morphism_count()
    }

    /// `f·g = f ∘ g`, or `None` for zero.
    pub fn product(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.table[f * self.rank() + g]
    }

    pub fn multiply<R: Ring>(&self, x: &[R], y: &[R]) -> Vec<R> {
        let n = self.rank();
        let mut out = vec![R::zero(); n];
        for (f, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (g, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                if let Some(h) = self.product(f, g) {
                    out[h] = out[h].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// The sum of all identities.
    pub fn unit<R: Ring>(&self) -> Vec<R> {
        let mut out = vec![R::zero(); self.rank()];
        for o in 0..self.cat.object_count() {
            out[self.cat.identity(o)] = R::one();
        }
        out
    }

    pub fn basis_element<R: Ring>(&self, f: MorId) -> Vec<R> {
        let mut out = vec![R::zero(); self.rank()];
        out[f] = R::one();
        out
    }

    /// Associativity on all basis triples, including the zero products.
    pub fn is_associative(&self) -> bool {
        let n = self.rank();
        (0..n).all(|f| {
            (0..n).all(|g| {
                let fg = self.product(f, g);
                (0..n).all(|h| {
                    let left = fg.and_then(|fg| self.product(fg, h));
                    let right = self.product(g, h).and_then(|gh| self.product(f, gh));
                    left == right
                })
            })
        })
    }

    /// `1·f = f·1 = f` for every basis element.
    pub fn unit_law_holds(&self) -> bool {
        let one = self.unit::<crate::exactalg::Integer>();
        (0..self.rank()).all(|f| {
            let e = self.basis_element(f);
            self.multiply(&one, &e) == e && self.multiply(&e, &one) == e
        })
    }
}

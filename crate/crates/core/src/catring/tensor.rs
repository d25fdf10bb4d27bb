use super::{CatRingError, FiniteMonoid};
use crate::exactalg::sparse::{shrink, Shrunk, SparseVec};
use crate::exactalg::{FPModule, Matrix, Ring};

/// `ZD ⊗_{ZC} M` for a submonoid `C` of `D`, with the left action of `D`.
///
/// Generators are pairs `(d, x)` with `x` a generator of `M`, taken modulo
/// the relations of `M` and `dc ⊗ x = d ⊗ c·x` for `c` in a generating set
/// of `C`.
#[derive(Clone, Debug)]
pub struct InducedModule<R: Ring> {
    pub module: FPModule<R>,
    monoid: FiniteMonoid,
    width: usize,
    shrunk: Shrunk<R>,
}

impl<R: Ring> InducedModule<R> {
    /// Matrix of `d·−` on the generators of `module`.
    pub fn act(&self, d: usize) -> Matrix<R> {
        let cols: Vec<Vec<R>> = self
            .shrunk
            .kept
            .iter()
            .map(|&g| {
                let (e, x) = (g / self.width, g % self.width);
                self.class(self.monoid.mul(d, e), x)
            })
            .collect();
        Matrix::from_columns(self.module.generators(), &cols)
    }

    /// The element `d ⊗ x`.
    pub fn class(&self, d: usize, x: usize) -> Vec<R> {
        self.shrunk
            .to_new(&SparseVec::from([(d * self.width + x, R::one())]))
    }

    /// `M → ZD ⊗ M`, `x ↦ 1 ⊗ x`.
    pub fn unit_map(&self) -> Matrix<R> {
        let e = self.monoid.identity();
        let cols: Vec<Vec<R>> = (0..self.width).map(|x| self.class(e, x)).collect();
        Matrix::from_columns(self.module.generators(), &cols)
    }
}

/// Induction from the submonoid `members` of `d`; `action[i]` is the matrix
/// of `members[i]` on the generators of `m`.
pub fn induce_monoid<R: Ring>(
    d: &FiniteMonoid,
    members: &[usize],
    m: &FPModule<R>,
    action: &[Matrix<R>],
) -> Result<InducedModule<R>, CatRingError> {
    if !d.is_submonoid(members) {
        return Err(CatRingError::Malformed(
            "inducing from a subset that is not a submonoid".into(),
        ));
    }
    if action.len() != members.len() {
        return Err(CatRingError::Malformed(format!(
            "{} action matrices for {} elements",
            action.len(),
            members.len()
        )));
    }
    let width = m.generators();
    if action
        .iter()
        .any(|a| a.rows() != width || a.cols() != width)
    {
        return Err(CatRingError::Malformed(
            "action matrices do not fit the module".into(),
        ));
    }
    let gens = d.generating_set(members);
    let at = |c: usize| members.iter().position(|&x| x == c).expect("member");
    let mut relations: Vec<SparseVec<R>> = Vec::new();
    for e in 0..d.order() {
        let base = e * width;
        for j in 0..m.relations().cols() {
            relations.push(sparse_column(m.relations(), j, base));
        }
        for &c in &gens {
            let a = &action[at(c)];
            let moved = d.mul(e, c) * width;
            for x in 0..width {
                let mut r = sparse_column(a, x, base);
                for v in r.values_mut() {
                    *v = v.neg();
                }
                let entry = r.entry(moved + x).or_insert_with(R::zero);
                *entry = entry.add(&R::one());
                relations.push(r);
            }
        }
    }
    let shrunk = shrink(d.order() * width, relations);
    Ok(InducedModule {
        module: shrunk.module.clone(),
        monoid: d.clone(),
        width,
        shrunk,
    })
}

pub(crate) fn sparse_column<R: Ring>(m: &Matrix<R>, j: usize, offset: usize) -> SparseVec<R> {
    (0..m.rows())
        .filter(|&i| !m[(i, j)].is_zero())
        .map(|i| (offset + i, m[(i, j)].clone()))
        .collect()
}

/// Trace of an endomorphism on `module ⊗ Q`, computed on the free part of a
/// diagonal presentation.
pub fn rational_trace<R: Ring>(module: &FPModule<R>, endo: &Matrix<R>) -> R {
    let s = module.simplify();
    let m = s.to_new.mul(endo).mul(&s.to_old);
    let rel = s.module.relations();
    (0..m.rows())
        .filter(|&i| (0..rel.cols()).all(|j| rel[(i, j)].is_zero()))
        .fold(R::zero(), |acc, i| acc.add(&m[(i, i)]))
}

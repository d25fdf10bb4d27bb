use super::matrix::Matrix;
use super::normal_form::{left_kernel_basis, row_echelon};
use super::ring::Ring;

/// A submodule of `R^dim` held as the canonical Hermite basis of its rows.
///
/// Two lattices are equal iff their bases are equal entrywise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<R: Ring> {
    dim: usize,
    basis: Matrix<R>,
    pivots: Vec<usize>,
}

impl<R: Ring> Lattice<R> {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Matrix::zeros(0, dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Matrix::identity(dim),
            pivots: (0..dim).collect(),
        }
    }

    /// Lattice spanned by the columns of `gens`.
    pub fn from_columns(gens: &Matrix<R>) -> Self {
        Self::from_rows(&gens.transpose())
    }

    /// Lattice spanned by the rows of `gens`.
    pub fn from_rows(gens: &Matrix<R>) -> Self {
        let dim = gens.cols();
        let ech = row_echelon(gens, false, true);
        let r = ech.rank();
        let idx: Vec<usize> = (0..r).collect();
        Lattice {
            dim,
            basis: ech.echelon.select_rows(&idx),
            pivots: ech.pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Basis vectors as rows (canonical form).
    pub fn basis_rows(&self) -> &Matrix<R> {
        &self.basis
    }

    /// Basis vectors as columns.
    pub fn basis_columns(&self) -> Matrix<R> {
        self.basis.transpose()
    }

    /// Canonical representative of `v` modulo the lattice, together with the
    /// coefficients subtracted.
    pub fn reduce_with_coefficients(&self, v: &[R]) -> (Vec<R>, Vec<R>) {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice");
        let mut r = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                coeffs.push(R::zero());
                continue;
            }
            let (q, _) = r[p].div_rem(&self.basis[(k, p)]);
            if !q.is_zero() {
                for (x, b) in r[p..].iter_mut().zip(&self.basis.row(k)[p..]) {
                    if !b.is_zero() {
                        x.sub_mul_assign(&q, b);
                    }
                }
            }
            coeffs.push(q);
        }
        (r, coeffs)
    }

    pub fn reduce(&self, v: &[R]) -> Vec<R> {
        self.reduce_with_coefficients(v).0
    }

    pub fn contains(&self, v: &[R]) -> bool {
        self.reduce(v).iter().all(R::is_zero)
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[R]) -> Option<Vec<R>> {
        let (r, c) = self.reduce_with_coefficients(v);
        r.iter().all(R::is_zero).then_some(c)
    }

    pub fn contains_lattice(&self, other: &Lattice<R>) -> bool {
        assert_eq!(self.dim, other.dim);
        (0..other.rank()).all(|k| self.contains(other.basis.row(k)))
    }

    pub fn sum(&self, other: &Lattice<R>) -> Lattice<R> {
        assert_eq!(self.dim, other.dim);
        Lattice::from_rows(&self.basis.vcat(&other.basis))
    }

    pub fn intersection(&self, other: &Lattice<R>) -> Lattice<R> {
        assert_eq!(self.dim, other.dim);
        if self.is_zero() || other.is_zero() {
            return Lattice::zero(self.dim);
        }
        let stacked = self.basis.vcat(&other.basis);
        let left = left_kernel_basis(&stacked);
        let k1: Vec<usize> = (0..self.rank()).collect();
        let x = left.select_columns(&k1);
        Lattice::from_rows(&x.mul(&self.basis))
    }
}

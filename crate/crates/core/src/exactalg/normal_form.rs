//! Echelon, Hermite and Smith normal forms over a Euclidean ring.

use std::cmp::Ordering;

use super::matrix::Matrix;
use super::ring::Ring;
use super::AlgebraError;

/// Result of a row echelon reduction `U * A = E`.
#[derive(Clone, Debug)]
pub struct Echelon<R: Ring> {
    pub echelon: Matrix<R>,
    pub transform: Option<Matrix<R>>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl<R: Ring> Echelon<R> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row echelon form by unimodular row operations. With `reduce` set the
/// result is the canonical (Hermite) form of the row lattice.
pub fn row_echelon<R: Ring>(a: &Matrix<R>, track: bool, reduce: bool) -> Echelon<R> {
    let mut e = a.clone();
    let rows = e.rows();
    let mut u = track.then(|| Matrix::identity(rows));
    let mut pivots = Vec::new();
    let mut p = 0;
    for j in 0..e.cols() {
        if p == rows {
            break;
        }
        // Euclid down the column: the smallest entry becomes the pivot and the
        // rows below are reduced by remainder until it divides all of them
        let mut found = false;
        loop {
            let mut best: Option<usize> = None;
            for i in p..rows {
                if e[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if e[(i, j)].cmp_size(&e[(b, j)]) != Ordering::Less => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            found = true;
            e.swap_rows(p, b);
            if let Some(u) = u.as_mut() {
                u.swap_rows(p, b);
            }
            let piv = e[(p, j)].clone();
            let mut clean = true;
            for i in p + 1..rows {
                if e[(i, j)].is_zero() {
                    continue;
                }
                let (q, r) = e[(i, j)].div_rem(&piv);
                e.row_sub_mul(i, p, &q);
                if let Some(u) = u.as_mut() {
                    u.row_sub_mul(i, p, &q);
                }
                clean &= r.is_zero();
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        let unit = e[(p, j)].normal_unit();
        if !unit.is_one() {
            e.scale_row(p, &unit);
            if let Some(u) = u.as_mut() {
                u.scale_row(p, &unit);
            }
        }
        if reduce {
            let piv = e[(p, j)].clone();
            for i in 0..p {
                if e[(i, j)].is_zero() {
                    continue;
                }
                let (q, _) = e[(i, j)].div_rem(&piv);
                e.row_sub_mul(i, p, &q);
                if let Some(u) = u.as_mut() {
                    u.row_sub_mul(i, p, &q);
                }
            }
        }
        pivots.push(j);
        p += 1;
    }
    Echelon {
        echelon: e,
        transform: u,
        pivots,
    }
}

/// Basis (as columns) of the right kernel `{x : A x = 0}`; saturated over Z.
pub fn kernel_basis<R: Ring>(a: &Matrix<R>) -> Matrix<R> {
    let ech = row_echelon(&a.transpose(), true, false);
    let u = ech.transform.expect("tracked");
    let r = ech.pivots.len();
    let idx: Vec<usize> = (r..u.rows()).collect();
    u.select_rows(&idx).transpose()
}

/// Basis (as rows) of the left kernel `{y : y A = 0}`.
pub fn left_kernel_basis<R: Ring>(a: &Matrix<R>) -> Matrix<R> {
    let ech = row_echelon(a, true, false);
    let u = ech.transform.expect("tracked");
    let r = ech.pivots.len();
    let idx: Vec<usize> = (r..u.rows()).collect();
    u.select_rows(&idx)
}

pub fn rank<R: Ring>(a: &Matrix<R>) -> usize {
    row_echelon(a, false, false).rank()
}

/// Canonical column Hermite form: the nonzero columns generating the same
/// lattice as the columns of `a`.
pub fn column_hnf<R: Ring>(a: &Matrix<R>) -> Matrix<R> {
    let ech = row_echelon(&a.transpose(), false, true);
    let idx: Vec<usize> = (0..ech.rank()).collect();
    ech.echelon.select_rows(&idx).transpose()
}

#[derive(Clone, Copy, Debug)]
enum RowOp<'a, R> {
    Swap(usize, usize),
    /// row[dst] -= q * row[src]
    SubMul(usize, usize, &'a R),
    /// row[i] *= unit
    Scale(usize, &'a R),
    /// (row a, row b) <- (p a + q b, r a + s b), determinant a unit
    Combine(usize, usize, [&'a R; 4]),
}

struct Tracked<R: Ring> {
    m: Matrix<R>,
    u: Option<Matrix<R>>,
    u_inv: Option<Matrix<R>>,
    v: Option<Matrix<R>>,
}

impl<R: Ring> Tracked<R> {
    fn row_op(&mut self, op: RowOp<'_, R>) {
        match op {
            RowOp::Swap(a, b) => {
                self.m.swap_rows(a, b);
                if let Some(u) = self.u.as_mut() {
                    u.swap_rows(a, b);
                }
                if let Some(w) = self.u_inv.as_mut() {
                    w.swap_cols(a, b);
                }
            }
            RowOp::SubMul(d, s, q) => {
                self.m.row_sub_mul(d, s, q);
                if let Some(u) = self.u.as_mut() {
                    u.row_sub_mul(d, s, q);
                }
                if let Some(w) = self.u_inv.as_mut() {
                    w.col_sub_mul(s, d, &q.neg());
                }
            }
            RowOp::Scale(i, c) => {
                self.m.scale_row(i, c);
                if let Some(u) = self.u.as_mut() {
                    u.scale_row(i, c);
                }
                if let Some(w) = self.u_inv.as_mut() {
                    w.scale_col(i, &c.unit_inverse());
                }
            }
            RowOp::Combine(a, b, [p, q, r, s]) => {
                self.m.combine_rows(a, b, p, q, r, s);
                if let Some(u) = self.u.as_mut() {
                    u.combine_rows(a, b, p, q, r, s);
                }
                if let Some(w) = self.u_inv.as_mut() {
                    let det = p.mul(s).sub(&q.mul(r));
                    let di = det.unit_inverse();
                    w.combine_cols(
                        a,
                        b,
                        &s.mul(&di),
                        &r.neg().mul(&di),
                        &q.neg().mul(&di),
                        &p.mul(&di),
                    );
                }
            }
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(a, b);
        }
    }

    fn col_sub_mul(&mut self, d: usize, s: usize, q: &R) {
        self.m.col_sub_mul(d, s, q);
        if let Some(v) = self.v.as_mut() {
            v.col_sub_mul(d, s, q);
        }
    }

    fn col_combine(&mut self, a: usize, b: usize, c: [&R; 4]) {
        self.m.combine_cols(a, b, c[0], c[1], c[2], c[3]);
        if let Some(v) = self.v.as_mut() {
            v.combine_cols(a, b, c[0], c[1], c[2], c[3]);
        }
    }
}

/// Smith normal form `U * M * V = D`.
#[derive(Clone, Debug)]
pub struct Smith<R: Ring> {
    pub u: Option<Matrix<R>>,
    pub u_inv: Option<Matrix<R>>,
    pub v: Option<Matrix<R>>,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, each canonical.
    pub diagonal: Vec<R>,
    pub rows: usize,
    pub cols: usize,
}

impl<R: Ring> Smith<R> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn d_matrix(&self) -> Matrix<R> {
        let mut d = Matrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SmithOptions {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
}

impl SmithOptions {
    pub const ALL: SmithOptions = SmithOptions {
        u: true,
        u_inv: true,
        v: true,
    };
    pub const NONE: SmithOptions = SmithOptions {
        u: false,
        u_inv: false,
        v: false,
    };
}

pub fn smith_with<R: Ring>(a: &Matrix<R>, opts: SmithOptions) -> Smith<R> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut t = Tracked {
        m: a.clone(),
        u: opts.u.then(|| Matrix::identity(rows)),
        u_inv: opts.u_inv.then(|| Matrix::identity(rows)),
        v: opts.v.then(|| Matrix::identity(cols)),
    };
    let mut r = 0;
    while r < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in r..rows {
            for j in r..cols {
                let x = &t.m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if x.cmp_size(&t.m[(bi, bj)]) != Ordering::Less => {}
                    _ => best = Some((i, j)),
                }
                if x.is_unit() {
                    break;
                }
            }
            if best.is_some_and(|(bi, bj)| t.m[(bi, bj)].is_unit()) {
                break;
            }
        }
        let Some((bi, bj)) = best else { break };
        if bi != r {
            t.row_op(RowOp::Swap(r, bi));
        }
        if bj != r {
            t.col_swap(r, bj);
        }
        loop {
            let mut dirty = false;
            for i in r + 1..rows {
                if t.m[(i, r)].is_zero() {
                    continue;
                }
                let piv = t.m[(r, r)].clone();
                let x = t.m[(i, r)].clone();
                if piv.divides(&x) {
                    let q = x.div_exact(&piv);
                    t.row_op(RowOp::SubMul(i, r, &q));
                } else {
                    let (g, s, tt) = R::ext_gcd(&piv, &x);
                    let c1 = x.div_exact(&g).neg();
                    let c2 = piv.div_exact(&g);
                    t.row_op(RowOp::Combine(r, i, [&s, &tt, &c1, &c2]));
                    dirty = true;
                }
            }
            for j in r + 1..cols {
                if t.m[(r, j)].is_zero() {
                    continue;
                }
                let piv = t.m[(r, r)].clone();
                let x = t.m[(r, j)].clone();
                if piv.divides(&x) {
                    let q = x.div_exact(&piv);
                    t.col_sub_mul(j, r, &q);
                } else {
                    let (g, s, tt) = R::ext_gcd(&piv, &x);
                    let c1 = x.div_exact(&g).neg();
                    let c2 = piv.div_exact(&g);
                    t.col_combine(r, j, [&s, &tt, &c1, &c2]);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // column combinations may have refilled column r
            if (r + 1..rows).all(|i| t.m[(i, r)].is_zero()) {
                break;
            }
        }
        r += 1;
    }
    let rank = r;
    // enforce the divisibility chain
    for i in 0..rank {
        for j in i + 1..rank {
            let a = t.m[(i, i)].clone();
            let b = t.m[(j, j)].clone();
            if a.divides(&b) {
                continue;
            }
            let (g, s, tt) = R::ext_gcd(&a, &b);
            let (ag, bg) = (a.div_exact(&g), b.div_exact(&g));
            t.row_op(RowOp::Combine(i, j, [&s, &tt, &bg.neg(), &ag]));
            let one = R::one();
            let c3 = tt.mul(&bg).neg();
            let c4 = s.mul(&ag);
            t.col_combine(i, j, [&one, &one, &c3, &c4]);
        }
    }
    for i in 0..rank {
        let unit = t.m[(i, i)].normal_unit();
        if !unit.is_one() {
            t.row_op(RowOp::Scale(i, &unit));
        }
    }
    let diagonal = (0..rank).map(|i| t.m[(i, i)].clone()).collect();
    Smith {
        u: t.u,
        u_inv: t.u_inv,
        v: t.v,
        diagonal,
        rows,
        cols,
    }
}

/// Smith normal form with both transforms: returns `(U, D, V)` with `U M V = D`.
pub fn smith_normal_form<R: Ring>(a: &Matrix<R>) -> (Matrix<R>, Matrix<R>, Matrix<R>) {
    let s = smith_with(
        a,
        SmithOptions {
            u: true,
            u_inv: false,
            v: true,
        },
    );
    let d = s.d_matrix();
    (s.u.expect("tracked"), d, s.v.expect("tracked"))
}

/// Precomputed Smith data for repeated solving of `A x = b`.
#[derive(Clone, Debug)]
pub struct LinearSolver<R: Ring> {
    smith: Smith<R>,
}

impl<R: Ring> LinearSolver<R> {
    pub fn new(a: &Matrix<R>) -> Self {
        LinearSolver {
            smith: smith_with(
                a,
                SmithOptions {
                    u: true,
                    u_inv: false,
                    v: true,
                },
            ),
        }
    }

    pub fn solve(&self, b: &[R]) -> Result<Option<Vec<R>>, AlgebraError> {
        let s = &self.smith;
        if b.len() != s.rows {
            return Err(AlgebraError::Shape(format!(
                "right-hand side has length {} but the system has {} rows",
                b.len(),
                s.rows
            )));
        }
        let ub = s.u.as_ref().expect("tracked").mul_vec(b);
        let mut y = vec![R::zero(); s.cols];
        for (i, val) in ub.iter().enumerate() {
            if i < s.rank() {
                let d = &s.diagonal[i];
                if !d.divides(val) {
                    return Ok(None);
                }
                y[i] = val.div_exact(d);
            } else if !val.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(s.v.as_ref().expect("tracked").mul_vec(&y)))
    }
}

/// Solves `A x = b` exactly over the ring of `A`.
pub fn solve_linear<R: Ring>(a: &Matrix<R>, b: &[R]) -> Result<Option<Vec<R>>, AlgebraError> {
    if a.rows() != b.len() {
        return Err(AlgebraError::Shape(format!(
            "matrix has {} rows but right-hand side has length {}",
            a.rows(),
            b.len()
        )));
    }
    LinearSolver::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Integer, Rational};

    fn z(rows: &[&[i64]]) -> Matrix<Integer> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn smith_basic_cases() {
        let (u, d, v) = smith_normal_form(&Matrix::<Integer>::identity(2));
        assert!(d.is_identity() && u.is_identity() && v.is_identity());

        let (_, d, _) = smith_normal_form(&Matrix::<Integer>::zeros(3, 2));
        assert!(d.is_zero());

        let m = z(&[&[2, 4], &[6, 8]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(u.mul(&m).mul(&v), d);
        assert_eq!(d, z(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn smith_tracks_inverse() {
        let m = z(&[&[3, 5, 7], &[2, 4, 6], &[1, 1, 9]]);
        let s = smith_with(&m, SmithOptions::ALL);
        let u = s.u.clone().unwrap();
        let ui = s.u_inv.clone().unwrap();
        assert!(u.mul(&ui).is_identity());
        assert_eq!(u.mul(&m).mul(s.v.as_ref().unwrap()), s.d_matrix());
    }

    #[test]
    fn solve_examples() {
        let a = z(&[&[2]]);
        assert_eq!(
            solve_linear(&a, &[Integer::from(4)]).unwrap(),
            Some(vec![Integer::from(2)])
        );
        assert_eq!(solve_linear(&a, &[Integer::from(3)]).unwrap(), None);
        let aq: Matrix<Rational> = Matrix::from_i64_rows(&[&[2]]);
        let x = solve_linear(&aq, &[Rational::from_i64(3)])
            .unwrap()
            .unwrap();
        assert_eq!(x[0].to_string(), "3/2");
        assert!(solve_linear(&a, &[Integer::ONE, Integer::ONE]).is_err());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = z(&[&[2, 0, 4], &[0, 3, 3]]);
        let b = z(&[&[4, 2, 2], &[3, 3, 0]]);
        // same column lattice?
        let ha = column_hnf(&a);
        let hb = column_hnf(&b);
        assert_eq!(ha.rows(), 2);
        let same = column_hnf(&ha.hcat(&hb)) == ha && column_hnf(&hb.hcat(&ha)) == hb;
        assert_eq!(same, ha == hb);
    }

    #[test]
    fn kernel_is_kernel() {
        let a = z(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }
}

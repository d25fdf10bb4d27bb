use polycoef::exactalg::{
    hom_decompose, kernel_basis, module_invariants, rank, smith_normal_form, subobject_ops,
    FPModule, Integer, Matrix, ModuleHom, Rational, Ring, Subobject,
};
use proptest::prelude::*;

fn z(rows: &[&[i64]]) -> Matrix<Integer> {
    Matrix::from_i64_rows(rows)
}

fn i(v: i64) -> Integer {
    Integer::from(v)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion (oracle for small matrices).
fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|b| m >> b & 1 == 1).collect())
        .collect()
}

/// Determinantal divisors: gcd of all k-minors; invariant factors are their
/// successive quotients.
fn determinantal_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut divisors = vec![1i64];
    for k in 1..=r.min(c) {
        let mut g = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&a| cols.iter().map(|&b| m[a][b]).collect())
                    .collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

#[test]
fn smith_agrees_with_determinantal_divisors() {
    let m = z(&[&[2, 4], &[6, 8]]);
    let (u, d, v) = smith_normal_form(&m);
    assert_eq!(u.mul(&m).mul(&v), d);
    assert_eq!(determinantal_factors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    assert_eq!((d[(0, 0)].clone(), d[(1, 1)].clone()), (i(2), i(4)));
}

#[test]
fn decompose_multiplication_by_two() {
    let z1 = FPModule::<Integer>::free(1);
    let phi = ModuleHom::new(z1.clone(), z1.clone(), z(&[&[2]])).unwrap();
    let d = hom_decompose(&phi).unwrap();
    assert!(d.kernel.is_zero());
    assert!(d.image.is_isomorphic(&z1));
    assert_eq!(d.cokernel.invariants().torsion, vec![i(2)]);
    assert_eq!(d.cokernel.invariants().free_rank, 0);
}

#[test]
fn decompose_identity_and_zero() {
    let m = FPModule::from_orders(&[i(0), i(4)]);
    let d = hom_decompose(&ModuleHom::identity(&m)).unwrap();
    assert!(d.kernel.is_zero() && d.cokernel.is_zero());

    let zero = ModuleHom::new(FPModule::free(2), FPModule::free(1), z(&[&[0, 0]])).unwrap();
    let d = hom_decompose(&zero).unwrap();
    assert!(d.kernel.is_isomorphic(&FPModule::free(2)));
    assert!(d.image.is_zero());
    assert!(d.cokernel.is_isomorphic(&FPModule::free(1)));
}

#[test]
fn ill_defined_hom_is_rejected() {
    // Z/2 -> Z sending the generator to 1 is not well defined
    let src = FPModule::from_orders(&[i(2)]);
    assert!(ModuleHom::new(src, FPModule::free(1), z(&[&[1]])).is_err());
}

#[test]
fn gcd_lcm_subobjects() {
    let amb = FPModule::<Integer>::free(1);
    let a = Subobject::new(amb.clone(), z(&[&[2]])).unwrap();
    let b = Subobject::new(amb.clone(), z(&[&[3]])).unwrap();
    let ops = subobject_ops(&[a.clone(), b]).unwrap();
    assert_eq!(ops.sum, Subobject::whole(&amb));
    assert_eq!(ops.intersection.canonical_form(), z(&[&[6]]));
    let idem = subobject_ops(&[a.clone(), a.clone()]).unwrap();
    assert_eq!(idem.sum, a);
    assert_eq!(idem.intersection, a);
}

#[test]
fn axis_subobjects_in_the_plane() {
    let amb = FPModule::<Integer>::free(2);
    let a = Subobject::new(amb.clone(), z(&[&[2], &[0]])).unwrap();
    let b = Subobject::new(amb.clone(), z(&[&[0], &[3]])).unwrap();
    let ops = subobject_ops(&[a.clone(), b.clone()]).unwrap();
    assert_eq!(ops.sum.canonical_form().cols(), 2);
    assert!(ops.intersection.is_zero());
    // oracle: x(2,0) = y(0,3) forces x = y = 0
    let k = kernel_basis(&z(&[&[2, 0], &[0, -3]]));
    assert_eq!(k.cols(), 0);
    let other = Subobject::new(FPModule::free(3), z(&[&[1], &[0], &[0]])).unwrap();
    assert!(subobject_ops(&[a, other]).is_err());
}

#[test]
fn invariants_examples() {
    let m = FPModule::<Integer>::new(z(&[&[2, 0], &[0, 3]]));
    let inv = module_invariants(&m);
    assert_eq!((inv.torsion, inv.free_rank), (vec![i(6)], 0));
    let f = module_invariants(&FPModule::<Integer>::free(2));
    assert_eq!((f.torsion.len(), f.free_rank), (0, 2));
    let a = FPModule::from_orders(&[i(2), i(2)]);
    let b = FPModule::from_orders(&[i(4)]);
    assert!(!a.is_isomorphic(&b));
    // over Q only the dimension survives
    let q = FPModule::<Rational>::new(Matrix::from_i64_rows(&[&[2, 0], &[0, 0]]));
    assert_eq!(q.invariants().free_rank, 1);
    assert!(q.invariants().torsion.is_empty());
}

fn small_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn to_matrix<R: Ring>(rows: &[Vec<i64>]) -> Matrix<R> {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_i64_rows(&refs)
}

proptest! {
    #[test]
    fn smith_is_a_valid_decomposition(rows in small_matrix(4)) {
        let m: Matrix<Integer> = to_matrix(&rows);
        let (u, d, v) = smith_normal_form(&m);
        prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
        let diag: Vec<i64> = (0..d.rows().min(d.cols()))
            .map(|k| d[(k, k)].to_i64().unwrap())
            .filter(|x| *x != 0)
            .collect();
        prop_assert_eq!(diag, determinantal_factors(&rows));
    }

    #[test]
    fn rank_nullity_over_q(rows in small_matrix(5)) {
        let m: Matrix<Rational> = to_matrix(&rows);
        let src = FPModule::free(m.cols());
        let tgt = FPModule::free(m.rows());
        let d = hom_decompose(&ModuleHom::new(src, tgt, m.clone()).unwrap()).unwrap();
        prop_assert_eq!(d.image.rank() + d.kernel.rank(), m.cols());
        prop_assert_eq!(d.image.rank(), rank(&m));
    }

    #[test]
    fn invariants_survive_unimodular_change(rows in small_matrix(4), ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8)) {
        let rel: Matrix<Integer> = to_matrix(&rows);
        let g = rel.rows();
        let mut p = Matrix::<Integer>::identity(g);
        for (a, b, q) in ops {
            let (a, b) = (a % g, b % g);
            if a != b {
                p.row_sub_mul(a, b, &Integer::from(q));
            }
        }
        let m1 = FPModule::new(rel.clone());
        let m2 = FPModule::new(p.mul(&rel));
        prop_assert_eq!(m1.invariants(), m2.invariants());
    }

    #[test]
    fn lattice_laws(a in small_matrix(3), b in small_matrix(3)) {
        let amb = FPModule::<Integer>::new(z(&[&[4, 0, 0], &[0, 0, 0], &[0, 0, 0]]));
        let pad = |rows: &[Vec<i64>]| -> Matrix<Integer> {
            let m: Matrix<Integer> = to_matrix(rows);
            let mut out = Matrix::zeros(3, m.cols());
            out.set_block(0, 0, &m.select_rows(&(0..m.rows().min(3)).collect::<Vec<_>>()));
            out
        };
        let x = Subobject::new(amb.clone(), pad(&a)).unwrap();
        let y = Subobject::new(amb.clone(), pad(&b)).unwrap();
        prop_assert_eq!(x.sum(&y).unwrap(), y.sum(&x).unwrap());
        prop_assert_eq!(x.intersection(&y).unwrap(), y.intersection(&x).unwrap());
        prop_assert_eq!(x.sum(&x.intersection(&y).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(x.intersection(&x.sum(&y).unwrap()).unwrap(), x);
    }

    #[test]
    fn composite_image_is_contained(a in small_matrix(3), b in small_matrix(3)) {
        let f: Matrix<Integer> = to_matrix(&a);
        let g: Matrix<Integer> = to_matrix(&b);
        prop_assume!(g.rows() == f.cols());
        let phi = ModuleHom::new(FPModule::free(f.cols()), FPModule::free(f.rows()), f).unwrap();
        let psi = ModuleHom::new(FPModule::free(g.cols()), FPModule::free(g.rows()), g).unwrap();
        let comp = psi.then(&phi);
        prop_assert!(phi.image_subobject().contains(&comp.image_subobject()));
    }
}

#[test]
fn kernel_entries_stay_small_on_wide_matrices() {
    use rand::Rng;
    let mut rng = polycoef::funrep::seeded_rng(11);
    let mut a = Matrix::<Integer>::zeros(14, 40);
    for r in 0..14 {
        for c in 0..40 {
            a[(r, c)] = i(rng.random_range(-3..=3) * if rng.random_bool(0.4) { 1 } else { 0 });
        }
    }
    let k = kernel_basis(&a);
    assert_eq!(k.cols(), 40 - rank(&a));
    assert!(a.mul(&k).is_zero());
    let widest = (0..k.rows())
        .flat_map(|r| (0..k.cols()).map(move |c| (r, c)))
        .map(|rc| k[rc].to_string().len())
        .max()
        .unwrap();
    assert!(widest < 40, "kernel entry with {widest} digits");
}

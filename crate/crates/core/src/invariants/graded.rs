use super::{partition_subobjects, Cubes, InvariantError};
use crate::cats::{check_cati_axioms, CatIStructure, MorId, Payload, ShiftedPartition};
use crate::exactalg::{FPModule, LinearSolver, Matrix, Ring, Subobject};
use crate::funrep::FunctorRep;

/// `T′(k, l)` with the action of the endomorphisms of `s(k+l)` whose
/// underlying partial bijection preserves `{1..l} ⊔ {l+1..k+l}`.
#[derive(Clone, Debug)]
pub struct GradedPiece<R: Ring> {
    pub k: usize,
    pub l: usize,
    pub subobject: Subobject<R>,
    pub module: FPModule<R>,
    /// Generators of `module` in the generators of `T(s(k+l))`.
    pub inclusion: Matrix<R>,
    pub endomorphisms: Vec<MorId>,
    /// Action of each endomorphism on the generators of `module`.
    pub actions: Vec<Matrix<R>>,
}

#[derive(Clone, Debug)]
pub struct CrossEffectFunctor<R: Ring> {
    pub window: usize,
    pub pieces: Vec<GradedPiece<R>>,
}

impl<R: Ring> CrossEffectFunctor<R> {
    pub fn piece(&self, k: usize, l: usize) -> Option<&GradedPiece<R>> {
        self.pieces.iter().find(|p| p.k == k && p.l == l)
    }

    /// Largest `k` with a nonzero piece, or `−1`.
    pub fn height(&self) -> i64 {
        self.pieces
            .iter()
            .filter(|p| !p.module.is_zero())
            .map(|p| p.k as i64)
            .max()
            .unwrap_or(-1)
    }
}

/// Whether the partial bijection underlying `phi` keeps `{1..l}` and its
/// complement apart.
pub fn preserves_split(st: &CatIStructure, phi: MorId, l: usize) -> bool {
    let Payload::Injection(p) = st.sigma.payload(st.pi.apply(phi)) else {
        return false;
    };
    (1..=p.source()).all(|i| p.apply(i).is_none_or(|j| (i <= l) == (j <= l)))
}

/// The graded cross-effect functor of `t` for all `k + l ≤ window`.
pub fn cross_effect_functor<R: Ring>(
    t: &FunctorRep<R>,
    st: &CatIStructure,
    window: usize,
) -> Result<CrossEffectFunctor<R>, InvariantError> {
    let report = check_cati_axioms(st)?;
    if !report.passes() {
        return Err(InvariantError::Axioms(format!("{report:?}")));
    }
    if window > st.max() {
        return Err(InvariantError::Window {
            window,
            reason: format!("the category only reaches {}", st.max()),
        });
    }
    let cubes = super::cubes_up_to(window)?;
    let mut pieces = Vec::new();
    for n in 0..=window {
        for k in 0..=n {
            pieces.push(graded_piece(t, st, &cubes[k], k, n - k)?);
        }
    }
    Ok(CrossEffectFunctor { window, pieces })
}

fn graded_piece<R: Ring>(
    t: &FunctorRep<R>,
    st: &CatIStructure,
    cubes: &Cubes,
    k: usize,
    l: usize,
) -> Result<GradedPiece<R>, InvariantError> {
    let n = k + l;
    let mut parts = vec![l];
    parts.extend(std::iter::repeat_n(1, k));
    let lambda = ShiftedPartition::new(parts)?;
    let (_, subobject) = partition_subobjects(t, st, cubes, &lambda)?;
    let (module, incl) = subobject.as_module();
    let ambient = subobject.ambient();
    let g = incl.matrix;
    let solver = LinearSolver::new(&g.hcat(ambient.relations()));
    let o = st.object(n).expect("in window");
    let endomorphisms: Vec<MorId> = st
        .host
        .hom(o, o)
        .iter()
        .copied()
        .filter(|&phi| preserves_split(st, phi, l))
        .collect();
    let mut actions = Vec::with_capacity(endomorphisms.len());
    for &phi in &endomorphisms {
        let image = t.matrix(phi).expect("window").mul(&g);
        let mut cols = Vec::with_capacity(image.cols());
        for c in 0..image.cols() {
            let x = solver.solve(&image.column(c))?.ok_or_else(|| {
                InvariantError::Axioms(format!(
                    "endomorphism {phi} does not preserve the piece ({k}, {l})"
                ))
            })?;
            cols.push(x[..module.generators()].to_vec());
        }
        actions.push(Matrix::from_columns(module.generators(), &cols));
    }
    Ok(GradedPiece {
        k,
        l,
        subobject,
        module,
        inclusion: g,
        endomorphisms,
        actions,
    })
}

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::InvariantError;
use crate::cats::{MorId, ObjId, StabiliserStructure};
use crate::exactalg::{solve_linear, Matrix, ModuleHom, Ring, Subobject};
use crate::funrep::{
    delta_functor, generator_id, generators_in_window, stab_nat_trans, Delta, FunRepError,
    FunctorRep, NatTrans,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeVariant {
    Deg,
    Ideg,
    Sdeg,
    Wdeg,
}

impl DegreeVariant {
    pub const ALL: [DegreeVariant; 4] = [
        DegreeVariant::Wdeg,
        DegreeVariant::Deg,
        DegreeVariant::Ideg,
        DegreeVariant::Sdeg,
    ];
}

impl fmt::Display for DegreeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeVariant::Deg => "deg",
            DegreeVariant::Ideg => "ideg",
            DegreeVariant::Sdeg => "sdeg",
            DegreeVariant::Wdeg => "wdeg",
        })
    }
}

impl FromStr for DegreeVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "deg" => Ok(DegreeVariant::Deg),
            "ideg" => Ok(DegreeVariant::Ideg),
            "sdeg" => Ok(DegreeVariant::Sdeg),
            "wdeg" => Ok(DegreeVariant::Wdeg),
            other => Err(format!("unknown variant `{other}` (deg, ideg, sdeg, wdeg)")),
        }
    }
}

/// A degree certified inside the window, or a lower bound when the recursion
/// ran out of objects or the variant is infinite on the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DegreeValue {
    Exact(i64),
    AtLeast(i64),
}

impl DegreeValue {
    pub fn exact(&self) -> Option<i64> {
        match self {
            DegreeValue::Exact(d) => Some(*d),
            DegreeValue::AtLeast(_) => None,
        }
    }

    /// `self ≤ other` when both are exact; lower bounds count as unbounded above.
    pub fn compatible_le(&self, other: &DegreeValue) -> bool {
        match (self, other) {
            (DegreeValue::Exact(a), DegreeValue::Exact(b)) => a <= b,
            (DegreeValue::AtLeast(a), DegreeValue::Exact(b)) => a <= b,
            (_, DegreeValue::AtLeast(_)) => true,
        }
    }
}

impl fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeValue::Exact(d) => write!(f, "{d}"),
            DegreeValue::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

/// How `Tι` was shown to split at one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitEvidence {
    /// `T` applied to the category's own retraction of `ι`.
    Retraction,
    /// A left inverse found by solving the naturality equations on the window.
    Solved,
    /// No natural left inverse exists on the window.
    None,
}

/// Evidence gathered at one node of the recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStep {
    /// Stabiliser indices applied so far, outermost first.
    pub path: Vec<usize>,
    pub window_grade: Option<usize>,
    pub zero: bool,
    /// `κ(T) = T` on the window (weak degree only).
    pub kappa_full: Option<bool>,
    /// Per index: whether `ker(Tι_i)` vanishes.
    pub kernels_zero: Vec<bool>,
    /// Per index, for the split degree.
    pub split: Vec<SplitEvidence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub variant: DegreeVariant,
    pub value: DegreeValue,
    /// Largest grade of the input window.
    pub window: usize,
    pub trace: Vec<DegreeStep>,
    /// Some split was found only by solving on the window, so it may not
    /// extend to the untruncated functor.
    pub window_split: bool,
}

struct Node {
    value: Option<i64>,
    trace: Vec<DegreeStep>,
    window_split: bool,
}

/// Recursive degree of `t` with respect to every index of `st`, restricted to
/// objects of grade at most `window` when given.
pub fn degree<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    variant: DegreeVariant,
    window: Option<usize>,
) -> Result<DegreeReport, InvariantError> {
    let t = match window {
        Some(w) => {
            let cat = t.category().clone();
            t.restrict_window(|o| cat.object(o).grade <= w)
        }
        None => t.clone(),
    };
    let top = t.window_grade().ok_or(InvariantError::Window {
        window: window.unwrap_or(0),
        reason: "no object is inside the window".into(),
    })?;
    if top == 0 && !t.is_zero() {
        return Err(InvariantError::Window {
            window: top,
            reason: "a nonzero functor needs a window of at least 1".into(),
        });
    }
    let node = recurse(&t, st, variant, Vec::new())?;
    Ok(DegreeReport {
        variant,
        value: node
            .value
            .map_or(DegreeValue::AtLeast(top as i64), DegreeValue::Exact),
        window: top,
        trace: node.trace,
        window_split: node.window_split,
    })
}

/// All four variants, weakest first.
pub fn all_degrees<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    window: Option<usize>,
) -> Result<Vec<DegreeReport>, InvariantError> {
    DegreeVariant::ALL
        .iter()
        .map(|&v| degree(t, st, v, window))
        .collect()
}

fn try_delta<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    i: usize,
) -> Result<Option<Delta<R>>, InvariantError> {
    match delta_functor(t, st, i) {
        Ok(d) => Ok(Some(d)),
        Err(FunRepError::Unsupported(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `κ(T) = Σᵢ ker(Tι_i)` equals `T` at every object where `T` is nonzero.
fn kappa_is_everything<R: Ring>(
    t: &FunctorRep<R>,
    deltas: &[Option<Delta<R>>],
) -> Result<bool, InvariantError> {
    for o in t.window() {
        let v = t.value(o).expect("window");
        if v.is_zero() {
            continue;
        }
        let mut sum = Subobject::zero(v);
        let mut covered = false;
        for k in deltas
            .iter()
            .flatten()
            .filter_map(|d| d.kernels[o].as_ref())
        {
            sum = sum.sum(k)?;
            covered = true;
        }
        if !covered || sum != Subobject::whole(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn recurse<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    variant: DegreeVariant,
    path: Vec<usize>,
) -> Result<Node, InvariantError> {
    let zero = t.is_zero();
    let mut step = DegreeStep {
        path: path.clone(),
        window_grade: t.window_grade(),
        zero,
        kappa_full: None,
        kernels_zero: Vec::new(),
        split: Vec::new(),
    };
    let leaf = |step: DegreeStep, value| Node {
        value,
        trace: vec![step],
        window_split: false,
    };
    if zero && variant != DegreeVariant::Wdeg {
        return Ok(leaf(step, Some(-1)));
    }
    if t.window().is_empty() {
        return Ok(leaf(step, None));
    }
    let deltas = (0..st.index_count())
        .into_par_iter()
        .map(|i| try_delta(t, st, i))
        .collect::<Result<Vec<_>, _>>()?;
    if variant == DegreeVariant::Wdeg {
        let full = kappa_is_everything(t, &deltas)?;
        step.kappa_full = Some(full);
        if full {
            return Ok(leaf(step, Some(-1)));
        }
    }
    step.kernels_zero = deltas
        .iter()
        .map(|d| {
            d.as_ref()
                .is_some_and(|d| d.kernels.iter().flatten().all(Subobject::is_zero))
        })
        .collect();
    let mut window_split = false;
    if matches!(variant, DegreeVariant::Ideg | DegreeVariant::Sdeg)
        && step.kernels_zero.iter().any(|z| !z)
    {
        return Ok(leaf(step, None));
    }
    if variant == DegreeVariant::Sdeg {
        for i in 0..st.index_count() {
            let evidence = split_evidence(t, st, i)?;
            window_split |= evidence == SplitEvidence::Solved;
            step.split.push(evidence);
        }
        if step.split.contains(&SplitEvidence::None) {
            return Ok(leaf(step, None));
        }
    }
    let children = deltas
        .par_iter()
        .enumerate()
        .map(|(i, d)| match d {
            Some(d) => {
                let mut p = path.clone();
                p.push(i);
                recurse(&d.functor, st, variant, p).map(Some)
            }
            None => Ok(None),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut trace = vec![step];
    let mut value = Some(-1i64);
    for child in children {
        match child {
            Some(c) => {
                trace.extend(c.trace);
                window_split |= c.window_split;
                value = match (value, c.value) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
            }
            None => value = None,
        }
    }
    Ok(Node {
        value: value.map(|v| v + 1),
        trace,
        window_split,
    })
}

fn split_evidence<R: Ring>(
    t: &FunctorRep<R>,
    st: &StabiliserStructure,
    i: usize,
) -> Result<SplitEvidence, InvariantError> {
    let tr = stab_nat_trans(t, st, i)?;
    if !t.is_semi() {
        if let Some(ret) = &st.shift(i).retraction {
            let ok = (0..tr.components.len()).all(|n| {
                let Some(iota) = tr.component(n) else {
                    return true;
                };
                let Some(pi) = ret[n].and_then(|r| t.hom(r)) else {
                    return false;
                };
                iota.then(&pi).same_map(&ModuleHom::identity(&iota.source))
            });
            if ok {
                return Ok(SplitEvidence::Retraction);
            }
        }
    }
    Ok(match natural_left_inverse(&tr)? {
        Some(_) => SplitEvidence::Solved,
        None => SplitEvidence::None,
    })
}

/// Unknown blocks of a linear system over matrices.
struct System<R: Ring> {
    cols: usize,
    rows: Vec<BTreeMap<usize, R>>,
    rhs: Vec<R>,
}

#[derive(Clone, Copy)]
struct Block {
    offset: usize,
    rows: usize,
    cols: usize,
}

impl Block {
    fn at(&self, i: usize, j: usize) -> usize {
        self.offset + i * self.cols + j
    }
}

impl<R: Ring> System<R> {
    fn new() -> Self {
        System {
            cols: 0,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    fn block(&mut self, rows: usize, cols: usize) -> Block {
        let b = Block {
            offset: self.cols,
            rows,
            cols,
        };
        self.cols += rows * cols;
        b
    }

    /// Adds the equations `Σ terms = rhs` entrywise, where each term is
    /// `left · X · right` for an unknown block `X` (either factor may be absent).
    fn equation(&mut self, shape: (usize, usize), terms: &[Term<'_, R>], rhs: &Matrix<R>) {
        for i in 0..shape.0 {
            for k in 0..shape.1 {
                let mut row: BTreeMap<usize, R> = BTreeMap::new();
                for term in terms {
                    let x = term.block;
                    for a in 0..x.rows {
                        let l = match term.left {
                            Some(m) => m.row(i)[a].clone(),
                            None if a == i => R::one(),
                            None => continue,
                        };
                        if l.is_zero() {
                            continue;
                        }
                        for b in 0..x.cols {
                            let r = match term.right {
                                Some(m) => m.row(b)[k].clone(),
                                None if b == k => R::one(),
                                None => continue,
                            };
                            if r.is_zero() {
                                continue;
                            }
                            let c = l.mul(&r);
                            let c = if term.negate { c.neg() } else { c };
                            let e = row.entry(x.at(a, b)).or_insert_with(R::zero);
                            *e = e.add(&c);
                        }
                    }
                }
                row.retain(|_, v| !v.is_zero());
                self.rows.push(row);
                self.rhs.push(rhs.row(i)[k].clone());
            }
        }
    }

    fn solve(&self) -> Result<Option<Vec<R>>, InvariantError> {
        let mut a = Matrix::zeros(self.rows.len(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                a.row_mut(i)[j] = v.clone();
            }
        }
        Ok(solve_linear(&a, &self.rhs)?)
    }
}

struct Term<'a, R> {
    left: Option<&'a Matrix<R>>,
    block: Block,
    right: Option<&'a Matrix<R>>,
    negate: bool,
}

fn term<'a, R>(
    left: Option<&'a Matrix<R>>,
    block: Block,
    right: Option<&'a Matrix<R>>,
    negate: bool,
) -> Term<'a, R> {
    Term {
        left,
        block,
        right,
        negate,
    }
}

/// A natural left inverse `π: target → source` of `tr` on the objects where
/// its components are defined, found by solving the well-definedness,
/// left-inverse and naturality equations exactly.
pub fn natural_left_inverse<R: Ring>(
    tr: &NatTrans<R>,
) -> Result<Option<Vec<Option<Matrix<R>>>>, InvariantError> {
    let (t, ts) = (&*tr.source, &*tr.target);
    let cat = t.category();
    let objects: Vec<ObjId> = (0..tr.components.len())
        .filter(|&o| tr.components[o].is_some())
        .collect();
    let inside = |o: ObjId| tr.components[o].is_some();
    let mut sys = System::new();
    let mut p = vec![None; cat.object_count()];
    for &o in &objects {
        let (a, b) = (t.value(o).unwrap(), ts.value(o).unwrap());
        p[o] = Some(sys.block(a.generators(), b.generators()));
    }
    for &o in &objects {
        let (a, b) = (t.value(o).unwrap(), ts.value(o).unwrap());
        let po = p[o].unwrap();
        let ra = a.relations();
        // P R_b = R_a Y
        let y = sys.block(ra.cols(), b.relations().cols());
        sys.equation(
            (a.generators(), b.relations().cols()),
            &[
                term(None, po, Some(b.relations()), false),
                term(Some(ra), y, None, true),
            ],
            &Matrix::zeros(a.generators(), b.relations().cols()),
        );
        // P ι − I = R_a Z
        let z = sys.block(ra.cols(), a.generators());
        let iota = tr.components[o].as_ref().unwrap();
        sys.equation(
            (a.generators(), a.generators()),
            &[
                term(None, po, Some(iota), false),
                term(Some(ra), z, None, true),
            ],
            &Matrix::identity(a.generators()),
        );
    }
    for f in naturality_morphisms(ts, &inside) {
        let (a, b) = (cat.source(f), cat.target(f));
        let (va, vb) = (t.value(a).unwrap(), t.value(b).unwrap());
        let tf = t.matrix(f).expect("window");
        let tsf = ts.matrix(f).expect("window");
        let w = sys.block(vb.relations().cols(), va.generators());
        // T(f) P_a − P_b Ts(f) = R_b W
        sys.equation(
            (vb.generators(), va.generators()),
            &[
                term(Some(tf), p[a].unwrap(), None, false),
                term(None, p[b].unwrap(), Some(tsf), true),
                term(Some(vb.relations()), w, None, true),
            ],
            &Matrix::zeros(vb.generators(), va.generators()),
        );
    }
    let Some(x) = sys.solve()? else {
        return Ok(None);
    };
    Ok(Some(
        p.iter()
            .map(|b| {
                b.map(|b| {
                    let data = x[b.offset..b.offset + b.rows * b.cols].to_vec();
                    Matrix::from_vec(b.rows, b.cols, data).expect("block shape")
                })
            })
            .collect(),
    ))
}

/// Morphisms whose naturality squares imply all others: the generators when the
/// representation is stored that way, otherwise every non-identity morphism.
fn naturality_morphisms<R: Ring>(
    ts: &FunctorRep<R>,
    inside: &impl Fn(ObjId) -> bool,
) -> Vec<MorId> {
    let cat = ts.category();
    if ts.uses_generators() {
        let values: Vec<_> = (0..cat.object_count())
            .map(|o| {
                if inside(o) {
                    ts.value(o).cloned()
                } else {
                    None
                }
            })
            .collect();
        return generators_in_window(cat, &values)
            .iter()
            .filter_map(|g| generator_id(cat, g))
            .collect();
    }
    (0..cat.morphism_count())
        .filter(|&f| !cat.is_identity(f) && inside(cat.source(f)) && inside(cat.target(f)))
        .collect()
}

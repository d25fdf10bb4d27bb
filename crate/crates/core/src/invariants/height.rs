use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{partition_cross_effect, CrossFlavor, Cubes, InvariantError};
use crate::cats::{
    CatIStructure, CategorySpec, PartialInjection, Payload, ShiftedPartition, DEFAULT_BUDGET,
};
use crate::exactalg::{Matrix, ModuleHom, ModuleInvariants, Ring, Subobject};
use crate::funrep::FunctorRep;

/// Which family of cube (semi-)functors probes the functor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightMode {
    /// Partitions `(m−n, 1, …, 1)`.
    I,
    /// Partitions with `λ₀ = 0` and positive blocks.
    Oplus,
    /// Order-preserving injections, for functors on injections.
    Fi,
}

impl fmt::Display for HeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeightMode::I => "I",
            HeightMode::Oplus => "oplus",
            HeightMode::Fi => "FI",
        })
    }
}

impl FromStr for HeightMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "i" => Ok(HeightMode::I),
            "oplus" | "sum" => Ok(HeightMode::Oplus),
            "fi" => Ok(HeightMode::Fi),
            other => Err(format!("unknown mode `{other}` (I, oplus, FI)")),
        }
    }
}

/// A cell `(m, λ)` whose cross-effect is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightWitness<R> {
    pub m: usize,
    pub n: usize,
    pub partition: Vec<usize>,
    pub invariants: ModuleInvariants<R>,
}

/// Height of a functor within a window of objects `0..=window`.
///
/// `value` is the largest level with a nonzero cross-effect among the tested
/// cells, or `−1` if every tested cross-effect vanishes. Vanishing beyond the
/// window is not certified.
#[derive(Clone, Debug)]
pub struct HeightReport<R> {
    pub mode: HeightMode,
    pub flavor: CrossFlavor,
    pub window: usize,
    pub value: i64,
    /// All nonzero cells, sorted by `(m, n, λ)`.
    pub witnesses: Vec<HeightWitness<R>>,
}

impl<R> HeightReport<R> {
    /// The smallest cell realising the reported height.
    pub fn primary_witness(&self) -> Option<&HeightWitness<R>> {
        self.witnesses.iter().find(|w| w.n as i64 == self.value)
    }

    pub fn level_vanishes(&self, n: usize) -> bool {
        self.witnesses.iter().all(|w| w.n != n)
    }
}

fn finish<R>(
    mode: HeightMode,
    flavor: CrossFlavor,
    window: usize,
    mut witnesses: Vec<HeightWitness<R>>,
) -> HeightReport<R> {
    witnesses.sort_by(|a, b| (a.m, a.n, &a.partition).cmp(&(b.m, b.n, &b.partition)));
    let value = witnesses.iter().map(|w| w.n as i64).max().unwrap_or(-1);
    HeightReport {
        mode,
        flavor,
        window,
        value,
        witnesses,
    }
}

/// Height of `t`, using the standard subset structure on its category.
pub fn height<R: Ring>(
    t: &FunctorRep<R>,
    mode: HeightMode,
    flavor: CrossFlavor,
    window: usize,
) -> Result<HeightReport<R>, InvariantError> {
    if mode == HeightMode::Fi {
        if flavor != CrossFlavor::Cr {
            return Err(InvariantError::Unsupported(format!(
                "mode FI is defined through images only; flavor {flavor} is not available"
            )));
        }
        return fi_height(t, window);
    }
    let st = CatIStructure::standard(t.category().clone(), DEFAULT_BUDGET)?;
    height_with(t, &st, mode, flavor, window)
}

/// The cells `(m, λ)` examined by a mode, for `m ≤ window`.
pub fn height_cells(mode: HeightMode, window: usize) -> Vec<ShiftedPartition> {
    let mut out = Vec::new();
    for m in 0..=window {
        for n in 0..=m {
            match mode {
                HeightMode::I | HeightMode::Fi => {
                    let mut parts = vec![m - n];
                    parts.extend(std::iter::repeat_n(1, n));
                    out.push(ShiftedPartition::new(parts).expect("small partition"));
                }
                HeightMode::Oplus => {
                    if n == 0 && m > 0 {
                        continue;
                    }
                    out.extend(ShiftedPartition::compositions(m, n));
                }
            }
        }
    }
    out
}

fn check_window(st: &CatIStructure, window: usize) -> Result<(), InvariantError> {
    if window > st.max() {
        return Err(InvariantError::Window {
            window,
            reason: format!("the category only reaches {}", st.max()),
        });
    }
    Ok(())
}

/// Cube categories for every size up to `n`.
pub fn cubes_up_to(n: usize) -> Result<Vec<Cubes>, InvariantError> {
    (0..=n).map(Cubes::new).collect()
}

/// Height of `t` for modes I and ⊕ relative to a given subset structure.
///
/// In mode I both descriptions of the cross-effect (the alternating-sum image
/// and the image-kernel intersection) are computed and must agree.
pub fn height_with<R: Ring>(
    t: &FunctorRep<R>,
    st: &CatIStructure,
    mode: HeightMode,
    flavor: CrossFlavor,
    window: usize,
) -> Result<HeightReport<R>, InvariantError> {
    if mode == HeightMode::Fi {
        return Err(InvariantError::Unsupported(
            "mode FI works on functors from injections; use `height`".into(),
        ));
    }
    check_window(st, window)?;
    let cubes = cubes_up_to(window)?;
    let cells = height_cells(mode, window);
    let results = cells
        .par_iter()
        .map(|lambda| {
            let (m, n) = (lambda.total(), lambda.length());
            if mode == HeightMode::I {
                let (alt, meet) = partition_subobjects(t, st, &cubes[n], lambda)?;
                if alt != meet {
                    return Err(InvariantError::FormulaMismatch { m, n });
                }
            }
            let ce = partition_cross_effect(t, st, &cubes[n], lambda, flavor)?;
            Ok((!ce.is_zero()).then(|| HeightWitness {
                m,
                n,
                partition: lambda.parts().to_vec(),
                invariants: ce.invariants().clone(),
            }))
        })
        .collect::<Result<Vec<_>, InvariantError>>()?;
    Ok(finish(
        mode,
        flavor,
        window,
        results.into_iter().flatten().collect(),
    ))
}

/// The two descriptions of `cr(T∘f_λ)` as subobjects of `Ts(m)`: the image of
/// the alternating sum, and `im Ts(f_{1..λ₀}) ∩ ⋂ᵢ ker Ts(f_{block i})`.
pub fn partition_subobjects<R: Ring>(
    t: &FunctorRep<R>,
    st: &CatIStructure,
    cubes: &Cubes,
    lambda: &ShiftedPartition,
) -> Result<(Subobject<R>, Subobject<R>), InvariantError> {
    let alt = partition_cross_effect(t, st, cubes, lambda, CrossFlavor::Cr)?.subobject;
    let m = lambda.total();
    let ambient = alt.ambient().clone();
    let head = (1u32 << lambda.parts()[0]) - 1;
    let map = |f| t.matrix(f).expect("inside the window").clone();
    let mut meet = Subobject::new(ambient.clone(), map(st.forget(m, head)))?;
    for i in 1..=lambda.length() {
        let h = ModuleHom::new_unchecked(
            ambient.clone(),
            ambient.clone(),
            map(st.forget(m, lambda.block(i))),
        )?;
        meet = meet.intersection(&h.kernel_subobject())?;
    }
    Ok((alt, meet))
}

/// The order-preserving injection with the given image, as a morphism of `cat`.
fn order_preserving(image: u32, m: usize) -> PartialInjection {
    let points: Vec<u8> = (1..=m as u8)
        .filter(|&i| image >> (i - 1) & 1 == 1)
        .collect();
    PartialInjection::new(&points, m).expect("valid injection")
}

/// Height of a functor on finite sets and injections.
///
/// Level `n` at `m` is nonzero when the images of `T(φ)`, over order-preserving
/// injections `φ` with image `{1..m−n} ∪ S` for `S ⊊ {m−n+1..m}`, fail to
/// generate `T(m)`. The witness records the cokernel of the assembled map.
pub fn fi_height<R: Ring>(
    t: &FunctorRep<R>,
    window: usize,
) -> Result<HeightReport<R>, InvariantError> {
    let cat: &Arc<_> = t.category();
    let Some(CategorySpec::Fi { max }) = cat.spec() else {
        return Err(InvariantError::Unsupported(format!(
            "mode FI needs a functor on injections, got {}",
            cat.name()
        )));
    };
    if window > *max {
        return Err(InvariantError::Window {
            window,
            reason: format!("the category only reaches {max}"),
        });
    }
    let cells = height_cells(HeightMode::Fi, window);
    let results = cells
        .par_iter()
        .map(|lambda| {
            let (m, n) = (lambda.total(), lambda.length());
            let target = cat.object_of_grade(m).expect("in range");
            let value = t.value(target).ok_or(InvariantError::Window {
                window,
                reason: format!("object {m} is outside the functor's window"),
            })?;
            let head = (1u32 << (m - n)) - 1;
            let mut gens = Matrix::zeros(value.generators(), 0);
            for s in 0..(1u32 << n) - 1 {
                let image = head | s << (m - n);
                let source = cat
                    .object_of_grade(image.count_ones() as usize)
                    .expect("in range");
                let phi = Payload::Injection(order_preserving(image, m));
                let f = cat.lookup(source, target, &phi).expect("injection");
                gens = gens.hcat(t.matrix(f).ok_or(InvariantError::Window {
                    window,
                    reason: format!(
                        "object {} is outside the functor's window",
                        image.count_ones()
                    ),
                })?);
            }
            let quotient = Subobject::new(value.clone(), gens)?.quotient();
            Ok((!quotient.is_zero()).then(|| HeightWitness {
                m,
                n,
                partition: lambda.parts().to_vec(),
                invariants: quotient.invariants().clone(),
            }))
        })
        .collect::<Result<Vec<_>, InvariantError>>()?;
    Ok(finish(
        HeightMode::Fi,
        CrossFlavor::Cr,
        window,
        results.into_iter().flatten().collect(),
    ))
}

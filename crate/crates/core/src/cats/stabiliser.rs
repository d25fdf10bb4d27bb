use std::sync::Arc;

use super::fincat::{FinCat, MorId, ObjId, Payload};
use super::maps::{BasedMap, PartialInjection, MAX_POINTS};
use super::CatError;

/// One endofunctor `s_k` with its natural transformation `ι_k: id → s_k`.
///
/// Maps are partial: they are defined on the objects `n` with `s_k(n)` inside
/// the truncation, and on morphisms between such objects.
#[derive(Clone, Debug)]
pub struct Shift {
    pub k: usize,
    pub obj_map: Vec<Option<ObjId>>,
    pub mor_map: Vec<Option<MorId>>,
    pub iota: Vec<Option<MorId>>,
    /// Natural retraction `s_k(n) → n` of `ι_k`, when the category has one.
    pub retraction: Option<Vec<Option<MorId>>>,
}

impl Shift {
    pub fn in_window(&self, o: ObjId) -> bool {
        self.obj_map[o].is_some()
    }

    pub fn window(&self) -> Vec<ObjId> {
        (0..self.obj_map.len())
            .filter(|&o| self.in_window(o))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct StabiliserStructure {
    host: Arc<FinCat>,
    shifts: Vec<Shift>,
}

fn shift_payload(cat: &FinCat, p: &Payload) -> Result<Payload, CatError> {
    Ok(match p {
        Payload::Injection(f) => Payload::Injection(f.shifted()),
        Payload::Based(f) => Payload::Based(f.shifted()),
        Payload::Wreath(f, labels) => {
            let e = cat.group().expect("wreath group").identity() as u8;
            let mut out = [0u8; MAX_POINTS];
            out[0] = e;
            out[1..].copy_from_slice(&labels[..MAX_POINTS - 1]);
            Payload::Wreath(f.shifted(), out)
        }
        Payload::Unique => Payload::Unique,
        other => {
            return Err(CatError::Unsupported(format!(
                "the shift on payload {other:?}"
            )))
        }
    })
}

fn identity_labels(cat: &FinCat, n: usize) -> [u8; MAX_POINTS] {
    let e = cat.group().map_or(0, |g| g.identity() as u8);
    let mut labels = [0u8; MAX_POINTS];
    labels[..n].iter_mut().for_each(|l| *l = e);
    labels
}

fn iota_payload(cat: &FinCat, sample: &Payload, n: usize) -> Payload {
    match sample {
        Payload::Injection(_) => Payload::Injection(PartialInjection::shift(n, 1)),
        Payload::Based(_) => {
            let mut map = [0u8; MAX_POINTS];
            for (i, slot) in map.iter_mut().enumerate().take(n) {
                *slot = (i + 2) as u8;
            }
            Payload::Based(BasedMap::from_raw(n, n + 1, map))
        }
        Payload::Wreath(..) => {
            Payload::Wreath(PartialInjection::shift(n, 1), identity_labels(cat, n))
        }
        _ => Payload::Unique,
    }
}

/// `s(n) → n` forgetting the new first point.
fn retraction_payload(cat: &FinCat, sample: &Payload, n: usize) -> Option<Payload> {
    let mut map = [0u8; MAX_POINTS];
    for (i, slot) in map.iter_mut().enumerate().take(n + 1).skip(1) {
        *slot = i as u8;
    }
    match sample {
        Payload::Injection(_) => Some(Payload::Injection(PartialInjection::from_raw(
            n + 1,
            n,
            map,
        ))),
        Payload::Based(_) => Some(Payload::Based(BasedMap::from_raw(n + 1, n, map))),
        Payload::Wreath(..) => {
            let mut labels = identity_labels(cat, n + 1);
            labels[0] = 0;
            Some(Payload::Wreath(
                PartialInjection::from_raw(n + 1, n, map),
                labels,
            ))
        }
        _ => None,
    }
}

impl StabiliserStructure {
    /// The shift `n ↦ n+1` adding a new first point, `ι_n(i) = i+1`.
    pub fn standard(host: Arc<FinCat>) -> Result<Self, CatError> {
        Self::multi(host, 1)
    }

    /// The family `s_k = s^k`, `ι_k(i) = i+k` for `k = 1..=max_k`, obtained by
    /// iterating the single shift.
    pub fn multi(host: Arc<FinCat>, max_k: usize) -> Result<Self, CatError> {
        let single = Self::single_shift(&host)?;
        let mut shifts = vec![single.clone()];
        for _ in 1..max_k {
            let prev = shifts.last().expect("nonempty");
            shifts.push(Self::iterate(&host, prev, &single));
        }
        let st = StabiliserStructure { host, shifts };
        st.check()?;
        Ok(st)
    }

    fn single_shift(host: &FinCat) -> Result<Shift, CatError> {
        let sample = *host.payload(host.identity(0));
        if matches!(
            sample,
            Payload::Subset(_) | Payload::Inclusion { .. } | Payload::Group(_)
        ) {
            return Err(CatError::Unsupported(format!(
                "a stabiliser structure on {}",
                host.name()
            )));
        }
        let n_obj = host.object_count();
        let up = |o: ObjId| host.object_of_grade(host.object(o).grade + 1);
        let obj_map: Vec<Option<ObjId>> = (0..n_obj).map(up).collect();
        let mut mor_map = vec![None; host.morphism_count()];
        for (f, m) in host.morphisms().iter().enumerate() {
            if let (Some(a), Some(b)) = (obj_map[m.source], obj_map[m.target]) {
                let p = shift_payload(host, &m.payload)?;
                mor_map[f] = Some(host.lookup(a, b, &p).ok_or_else(|| {
                    CatError::NotAFunctor(format!("shift of {:?} is missing", m.payload))
                })?);
            }
        }
        let mut iota = vec![None; n_obj];
        let mut retraction = vec![None; n_obj];
        let mut has_retraction = true;
        for o in 0..n_obj {
            let Some(so) = obj_map[o] else { continue };
            let n = host.object(o).grade;
            let p = iota_payload(host, &sample, n);
            iota[o] = Some(
                host.lookup(o, so, &p)
                    .ok_or_else(|| CatError::NotAFunctor(format!("missing ι at {n}")))?,
            );
            match retraction_payload(host, &sample, n).and_then(|p| host.lookup(so, o, &p)) {
                Some(r) => retraction[o] = Some(r),
                None => has_retraction = false,
            }
        }
        Ok(Shift {
            k: 1,
            obj_map,
            mor_map,
            iota,
            retraction: has_retraction.then_some(retraction),
        })
    }

    fn iterate(host: &FinCat, prev: &Shift, single: &Shift) -> Shift {
        let obj_map: Vec<Option<ObjId>> = prev
            .obj_map
            .iter()
            .map(|o| o.and_then(|o| single.obj_map[o]))
            .collect();
        let mor_map = prev
            .mor_map
            .iter()
            .map(|f| f.and_then(|f| single.mor_map[f]))
            .collect();
        let iota = (0..obj_map.len())
            .map(|o| {
                obj_map[o]?;
                let last = single.iota[prev.obj_map[o]?]?;
                Some(host.compose(last, prev.iota[o]?))
            })
            .collect();
        let retraction = match (&prev.retraction, &single.retraction) {
            (Some(pr), Some(sr)) => Some(
                (0..obj_map.len())
                    .map(|o| {
                        obj_map[o]?;
                        let first = sr[prev.obj_map[o]?]?;
                        Some(host.compose(pr[o]?, first))
                    })
                    .collect(),
            ),
            _ => None,
        };
        Shift {
            k: prev.k + 1,
            obj_map,
            mor_map,
            iota,
            retraction,
        }
    }

    pub fn host(&self) -> &Arc<FinCat> {
        &self.host
    }

    pub fn shifts(&self) -> &[Shift] {
        &self.shifts
    }

    pub fn shift(&self, index: usize) -> &Shift {
        &self.shifts[index]
    }

    pub fn index_count(&self) -> usize {
        self.shifts.len()
    }

    /// Functor laws on the window and naturality of `ι` and the retraction.
    pub fn check(&self) -> Result<(), CatError> {
        let c = &self.host;
        for sh in &self.shifts {
            for o in sh.window() {
                let so = sh.obj_map[o].expect("window");
                if sh.mor_map[c.identity(o)] != Some(c.identity(so)) {
                    return Err(CatError::NotAFunctor(format!("s_{} on id_{o}", sh.k)));
                }
                if let Some(r) = &sh.retraction {
                    let r = r[o].expect("window");
                    if c.compose(r, sh.iota[o].expect("window")) != c.identity(o) {
                        return Err(CatError::NotAFunctor(format!("retraction at {o}")));
                    }
                }
            }
            for f in 0..c.morphism_count() {
                let Some(sf) = sh.mor_map[f] else { continue };
                let (a, b) = (c.source(f), c.target(f));
                let (ia, ib) = (sh.iota[a].expect("window"), sh.iota[b].expect("window"));
                if c.compose(ib, f) != c.compose(sf, ia) {
                    return Err(CatError::NotAFunctor(format!(
                        "ι_{} is not natural at {f}",
                        sh.k
                    )));
                }
                if let Some(r) = &sh.retraction {
                    if c.compose(f, r[a].expect("window")) != c.compose(r[b].expect("window"), sf) {
                        return Err(CatError::NotAFunctor(format!(
                            "retraction is not natural at {f}"
                        )));
                    }
                }
                for d in 0..c.object_count() {
                    for &g in c.hom(b, d) {
                        if let Some(sg) = sh.mor_map[g] {
                            if sh.mor_map[c.compose(g, f)] != Some(c.compose(sg, sf)) {
                                return Err(CatError::NotAFunctor(format!(
                                    "s_{} on the composite of {f} and {g}",
                                    sh.k
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Components `Ψ_n ∈ Aut(s(s(n)))` of a braiding, one per object in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braiding {
    pub components: Vec<(ObjId, MorId)>,
}

/// Searches for a natural isomorphism `Ψ: s∘s → s∘s` with
/// `ι_{s(n)} = Ψ_n ∘ s(ι_n)`, returning the lexicographically least witness.
pub fn check_braidable(
    st: &StabiliserStructure,
    search_budget: usize,
) -> Result<Option<Braiding>, CatError> {
    if st.index_count() != 1 {
        return Err(CatError::Unsupported(
            "braidings for several stabilisers".into(),
        ));
    }
    let c = &st.host;
    let sh = st.shift(0);
    let window: Vec<ObjId> = sh
        .window()
        .into_iter()
        .filter(|&o| sh.obj_map[sh.obj_map[o].expect("window")].is_some())
        .collect();
    let ss_obj = |o: ObjId| sh.obj_map[sh.obj_map[o].unwrap()].unwrap();
    let ss_mor = |f: MorId| sh.mor_map[sh.mor_map[f].unwrap()].unwrap();
    let mut candidates = Vec::with_capacity(window.len());
    for &o in &window {
        let so = sh.obj_map[o].unwrap();
        let target = sh.iota[so].unwrap();
        let s_iota = sh.mor_map[sh.iota[o].unwrap()].unwrap();
        let endos: Vec<MorId> = c.hom(o, o).to_vec();
        let list: Vec<MorId> = c
            .automorphisms(ss_obj(o))
            .into_iter()
            .filter(|&psi| c.compose(psi, s_iota) == target)
            .filter(|&psi| {
                endos
                    .iter()
                    .all(|&f| c.compose(psi, ss_mor(f)) == c.compose(ss_mor(f), psi))
            })
            .collect();
        candidates.push(list);
    }
    let mut chosen: Vec<MorId> = Vec::with_capacity(window.len());
    let mut visited = 0usize;
    fn consistent(
        c: &FinCat,
        window: &[ObjId],
        chosen: &[MorId],
        psi: MorId,
        ss_mor: &dyn Fn(MorId) -> MorId,
    ) -> bool {
        let j = chosen.len();
        let b = window[j];
        window[..j].iter().zip(chosen).all(|(&a, &pa)| {
            c.hom(a, b)
                .iter()
                .all(|&f| c.compose(psi, ss_mor(f)) == c.compose(ss_mor(f), pa))
                && c.hom(b, a)
                    .iter()
                    .all(|&f| c.compose(pa, ss_mor(f)) == c.compose(ss_mor(f), psi))
        })
    }
    fn search(
        c: &FinCat,
        window: &[ObjId],
        candidates: &[Vec<MorId>],
        chosen: &mut Vec<MorId>,
        visited: &mut usize,
        budget: usize,
        ss_mor: &dyn Fn(MorId) -> MorId,
    ) -> Result<bool, CatError> {
        let j = chosen.len();
        if j == window.len() {
            return Ok(true);
        }
        for &psi in &candidates[j] {
            *visited += 1;
            if *visited > budget {
                return Err(CatError::SearchBudget(budget));
            }
            if consistent(c, window, chosen, psi, ss_mor) {
                chosen.push(psi);
                if search(c, window, candidates, chosen, visited, budget, ss_mor)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }
    let found = search(
        c,
        &window,
        &candidates,
        &mut chosen,
        &mut visited,
        search_budget,
        &ss_mor,
    )?;
    Ok(found.then(|| Braiding {
        components: window.into_iter().zip(chosen).collect(),
    }))
}

/// Number of points an automorphism moves (or relabels).
fn support(cat: &FinCat, p: &Payload) -> usize {
    let e = cat.group().map_or(0, |g| g.identity());
    match p {
        Payload::Injection(f) => (1..=f.source()).filter(|&i| f.apply(i) != Some(i)).count(),
        Payload::Based(f) => (1..=f.source()).filter(|&i| f.apply(i) != i).count(),
        Payload::Wreath(f, labels) => (1..=f.source())
            .filter(|&i| f.apply(i) != Some(i) || labels[i - 1] as u16 != e)
            .count(),
        Payload::Group(g) => usize::from(*g != e),
        _ => 0,
    }
}

/// Searches `Aut(n)` for `φ` with `φ ∘ r_R ∘ φ⁻¹ = r_S`, where `r_R` keeps
/// exactly the points of `R`. The witness moves as few points as possible,
/// ties broken by enumeration order.
pub fn find_conjugator(cat: &FinCat, n: ObjId, r: u32, s: u32) -> Result<Option<MorId>, CatError> {
    if r.count_ones() != s.count_ones() {
        return Err(CatError::SizeMismatch(
            r.count_ones() as usize,
            s.count_ones() as usize,
        ));
    }
    let (Some(rr), Some(rs)) = (
        cat.restriction_idempotent(n, r),
        cat.restriction_idempotent(n, s),
    ) else {
        return Err(CatError::Unsupported(format!(
            "restriction idempotents in {}",
            cat.name()
        )));
    };
    let mut best: Option<(usize, MorId)> = None;
    for phi in cat.automorphisms(n) {
        let inv = cat.inverse(phi).expect("automorphism");
        if cat.compose(phi, cat.compose(rr, inv)) == rs {
            let key = (support(cat, cat.payload(phi)), phi);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    Ok(best.map(|b| b.1))
}

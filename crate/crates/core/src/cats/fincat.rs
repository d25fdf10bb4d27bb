use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::maps::{BasedMap, PartialInjection, MAX_POINTS};
use super::CatError;

pub type ObjId = usize;
pub type MorId = usize;

/// Default ceiling on the number of enumerated morphisms.
pub const DEFAULT_BUDGET: usize = 300_000;

/// Combinatorial data carried by a morphism; composition is computed on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    /// Subset of `{1..min(m,n)}`; composition is intersection.
    Subset(u32),
    /// The relation `lower ⊆ upper` in a subset poset or its opposite.
    Inclusion {
        lower: u32,
        upper: u32,
    },
    Injection(PartialInjection),
    Based(BasedMap),
    /// Partial injection with a group label on every defined source point.
    Wreath(PartialInjection, [u8; MAX_POINTS]),
    Group(u16),
    /// The only morphism between its endpoints.
    Unique,
}

/// Builder description, addressable by name in spec files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategorySpec {
    /// Subsets under intersection on objects `0..=max`.
    Subsets { max: usize },
    /// The endomorphism monoid of `n` in the subset category.
    SubsetMonoid { n: usize },
    /// Poset of subsets of `{1..n}` under inclusion.
    SubsetPoset { n: usize },
    /// Opposite of the subset poset.
    SubsetPosetOp { n: usize },
    /// Finite sets and injections.
    Fi { max: usize },
    /// Finite sets and partially defined injections.
    FiSharp { max: usize },
    /// Partial injections labelled by a finite group.
    FiSharpWreath { max: usize, table: Vec<Vec<u16>> },
    /// Order-preserving partial injections.
    Monotone { max: usize },
    /// Finite pointed sets `{0..n}` and based maps.
    Pointed { max: usize },
    /// The chain `0 -> 1 -> ... -> max`.
    Chain { max: usize },
    /// A group as a one-object category.
    Group { table: Vec<Vec<u16>> },
    /// A discrete category.
    Discrete { objects: usize },
}

impl fmt::Display for CategorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategorySpec::Subsets { max } => write!(f, "I<={max}"),
            CategorySpec::SubsetMonoid { n } => write!(f, "I_{n}"),
            CategorySpec::SubsetPoset { n } => write!(f, "J_{n}"),
            CategorySpec::SubsetPosetOp { n } => write!(f, "K_{n}"),
            CategorySpec::Fi { max } => write!(f, "FI<={max}"),
            CategorySpec::FiSharp { max } => write!(f, "FI#<={max}"),
            CategorySpec::FiSharpWreath { max, table } => {
                write!(f, "FI#_G<={max} (|G|={})", table.len())
            }
            CategorySpec::Monotone { max } => write!(f, "Mono<={max}"),
            CategorySpec::Pointed { max } => write!(f, "Gamma<={max}"),
            CategorySpec::Chain { max } => write!(f, "[0..{max}]"),
            CategorySpec::Group { table } => write!(f, "G (|G|={})", table.len()),
            CategorySpec::Discrete { objects } => write!(f, "discrete({objects})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Object {
    /// Integer grading (set size, subset size, ...).
    pub grade: usize,
    pub label: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: ObjId,
    pub target: ObjId,
    pub payload: Payload,
}

/// A finite category with enumerated hom-sets.
#[derive(Clone)]
pub struct FinCat {
    name: String,
    spec: Option<CategorySpec>,
    objects: Vec<Object>,
    morphisms: Vec<Morphism>,
    homs: Vec<Vec<Vec<MorId>>>,
    identities: Vec<MorId>,
    index: HashMap<(ObjId, ObjId, Payload), MorId>,
    group: Option<GroupTable>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<u16>>,
    identity: u16,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<u16>>) -> Result<Self, CatError> {
        let n = table.len();
        if n == 0 {
            return Err(CatError::InvalidGroup("empty table".into()));
        }
        if n > u8::MAX as usize {
            return Err(CatError::InvalidGroup("group too large".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x as usize >= n) {
                return Err(CatError::InvalidGroup(
                    "table is not square with entries in range".into(),
                ));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] as usize == g && table[g][e] as usize == g))
            .ok_or_else(|| CatError::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = table[table[a][b] as usize][c];
                    let r = table[a][table[b][c] as usize];
                    if l != r {
                        return Err(CatError::InvalidGroup(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
            if !(0..n).any(|b| table[a][b] as usize == identity) {
                return Err(CatError::InvalidGroup(format!(
                    "element {a} has no inverse"
                )));
            }
        }
        Ok(GroupTable {
            table,
            identity: identity as u16,
        })
    }

    /// Cyclic group of the given order.
    pub fn cyclic(order: usize) -> Self {
        let table = (0..order)
            .map(|a| (0..order).map(|b| ((a + b) % order) as u16).collect())
            .collect();
        GroupTable { table, identity: 0 }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> u16 {
        self.identity
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize][b as usize]
    }

    pub fn rows(&self) -> &[Vec<u16>] {
        &self.table
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Number of morphisms the builder will enumerate.
pub fn closed_form_count(spec: &CategorySpec) -> u128 {
    let pow = |b: usize, e: usize| (b as u128).pow(e as u32);
    let grid = |max: usize, f: &dyn Fn(usize, usize) -> u128| -> u128 {
        (0..=max)
            .flat_map(|m| (0..=max).map(move |n| (m, n)))
            .map(|(m, n)| f(m, n))
            .sum()
    };
    match spec {
        CategorySpec::Subsets { max } => grid(*max, &|m, n| pow(2, m.min(n))),
        CategorySpec::SubsetMonoid { n } => pow(2, *n),
        CategorySpec::SubsetPoset { n } | CategorySpec::SubsetPosetOp { n } => pow(3, *n),
        CategorySpec::Fi { max } => grid(*max, &|m, n| {
            if m <= n {
                (factorial(n) / factorial(n - m)) as u128
            } else {
                0
            }
        }),
        CategorySpec::FiSharp { max } => grid(*max, &|m, n| {
            (0..=m.min(n))
                .map(|k| (binom(m, k) * binom(n, k) * factorial(k)) as u128)
                .sum()
        }),
        CategorySpec::FiSharpWreath { max, table } => grid(*max, &|m, n| {
            (0..=m.min(n))
                .map(|k| (binom(m, k) * binom(n, k) * factorial(k)) as u128 * pow(table.len(), k))
                .sum()
        }),
        CategorySpec::Monotone { max } => grid(*max, &|m, n| {
            (0..=m.min(n))
                .map(|k| (binom(m, k) * binom(n, k)) as u128)
                .sum()
        }),
        CategorySpec::Pointed { max } => grid(*max, &|m, n| pow(n + 1, m)),
        CategorySpec::Chain { max } => ((max + 1) * (max + 2) / 2) as u128,
        CategorySpec::Group { table } => table.len() as u128,
        CategorySpec::Discrete { objects } => *objects as u128,
    }
}

fn subset_label(mask: u32, n: usize) -> String {
    let elems: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}

/// All partial injections `m -> n` in lexicographic order of assignments.
pub fn partial_injections(m: usize, n: usize) -> Vec<PartialInjection> {
    let mut out = Vec::new();
    let mut cur = [0u8; MAX_POINTS];
    fn rec(
        i: usize,
        m: usize,
        n: usize,
        used: u32,
        cur: &mut [u8; MAX_POINTS],
        out: &mut Vec<PartialInjection>,
    ) {
        if i == m {
            out.push(PartialInjection::from_raw(m, n, *cur));
            return;
        }
        for v in 0..=n {
            if v > 0 && used >> v & 1 == 1 {
                continue;
            }
            cur[i] = v as u8;
            let used = if v > 0 { used | 1 << v } else { used };
            rec(i + 1, m, n, used, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, m, n, 0, &mut cur, &mut out);
    out
}

/// All based maps `{0..m} -> {0..n}` in lexicographic order.
pub fn based_maps(m: usize, n: usize) -> Vec<BasedMap> {
    let total = (n + 1).pow(m as u32);
    (0..total)
        .map(|mut code| {
            let mut map = [0u8; MAX_POINTS];
            for i in (0..m).rev() {
                map[i] = (code % (n + 1)) as u8;
                code /= n + 1;
            }
            BasedMap::from_raw(m, n, map)
        })
        .collect()
}

struct Builder {
    objects: Vec<Object>,
    morphisms: Vec<Morphism>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            objects: Vec::new(),
            morphisms: Vec::new(),
        }
    }

    fn object(&mut self, grade: usize, label: String) -> ObjId {
        self.objects.push(Object { grade, label });
        self.objects.len() - 1
    }

    fn morphism(&mut self, source: ObjId, target: ObjId, payload: Payload) {
        self.morphisms.push(Morphism {
            source,
            target,
            payload,
        });
    }
}

impl FinCat {
    fn assemble(
        name: String,
        spec: Option<CategorySpec>,
        b: Builder,
        group: Option<GroupTable>,
    ) -> Result<FinCat, CatError> {
        let n = b.objects.len();
        let mut homs = vec![vec![Vec::new(); n]; n];
        let mut index = HashMap::with_capacity(b.morphisms.len());
        for (id, m) in b.morphisms.iter().enumerate() {
            homs[m.source][m.target].push(id);
            if index.insert((m.source, m.target, m.payload), id).is_some() {
                return Err(CatError::InvalidPayload(format!(
                    "duplicate morphism {:?}",
                    m.payload
                )));
            }
        }
        let mut cat = FinCat {
            name,
            spec,
            objects: b.objects,
            morphisms: b.morphisms,
            homs,
            identities: Vec::new(),
            index,
            group,
        };
        cat.identities = (0..n)
            .map(|o| {
                let p = cat.identity_payload(o);
                cat.lookup(o, o, &p).ok_or_else(|| {
                    CatError::InvalidPayload(format!("object {o} lacks an identity"))
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(cat)
    }

    fn identity_payload(&self, o: ObjId) -> Payload {
        let grade = self.objects[o].grade;
        match self.morphisms[self.homs[o][o][0]].payload {
            Payload::Subset(_) => Payload::Subset(if grade >= 32 {
                u32::MAX
            } else {
                (1u32 << grade) - 1
            }),
            Payload::Inclusion { .. } => Payload::Inclusion {
                lower: o as u32,
                upper: o as u32,
            },
            Payload::Injection(_) => Payload::Injection(PartialInjection::identity(grade)),
            Payload::Based(_) => Payload::Based(BasedMap::identity(grade)),
            Payload::Wreath(..) => {
                let e = self.group.as_ref().expect("wreath group").identity() as u8;
                let mut labels = [0u8; MAX_POINTS];
                labels[..grade].iter_mut().for_each(|l| *l = e);
                Payload::Wreath(PartialInjection::identity(grade), labels)
            }
            Payload::Group(_) => Payload::Group(self.group.as_ref().expect("group").identity()),
            Payload::Unique => Payload::Unique,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> Option<&CategorySpec> {
        self.spec.as_ref()
    }

    pub fn group(&self) -> Option<&GroupTable> {
        self.group.as_ref()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn object(&self, o: ObjId) -> &Object {
        &self.objects[o]
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn source(&self, f: MorId) -> ObjId {
        self.morphisms[f].source
    }

    pub fn target(&self, f: MorId) -> ObjId {
        self.morphisms[f].target
    }

    pub fn payload(&self, f: MorId) -> &Payload {
        &self.morphisms[f].payload
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a][b]
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.source(f)] == f
    }

    pub fn lookup(&self, a: ObjId, b: ObjId, p: &Payload) -> Option<MorId> {
        self.index.get(&(a, b, *p)).copied()
    }

    /// Object with the given grade, for categories graded by `0..=max`.
    pub fn object_of_grade(&self, grade: usize) -> Option<ObjId> {
        self.objects.iter().position(|o| o.grade == grade)
    }

    /// Composite payload of `g ∘ f` (no lookup).
    pub fn compose_payload(&self, g: &Payload, f: &Payload) -> Payload {
        match (g, f) {
            (Payload::Subset(a), Payload::Subset(b)) => Payload::Subset(a & b),
            (
                Payload::Inclusion {
                    lower: l1,
                    upper: u1,
                },
                Payload::Inclusion {
                    lower: l2,
                    upper: u2,
                },
            ) => Payload::Inclusion {
                lower: l1 & l2,
                upper: u1 | u2,
            },
            (Payload::Injection(g), Payload::Injection(f)) => Payload::Injection(f.then(g)),
            (Payload::Based(g), Payload::Based(f)) => Payload::Based(f.then(g)),
            (Payload::Wreath(g, beta), Payload::Wreath(f, alpha)) => {
                let grp = self.group.as_ref().expect("wreath group");
                let comp = f.then(g);
                let mut labels = [0u8; MAX_POINTS];
                for i in 1..=f.source() {
                    if let (Some(j), Some(_)) = (f.apply(i), comp.apply(i)) {
                        labels[i - 1] = grp.mul(beta[j - 1] as u16, alpha[i - 1] as u16) as u8;
                    }
                }
                Payload::Wreath(comp, labels)
            }
            (Payload::Group(a), Payload::Group(b)) => {
                Payload::Group(self.group.as_ref().expect("group").mul(*a, *b))
            }
            (Payload::Unique, Payload::Unique) => Payload::Unique,
            _ => panic!("payload kinds do not compose: {g:?} after {f:?}"),
        }
    }

    /// `g ∘ f`, or `None` if not composable.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        let (mf, mg) = (&self.morphisms[f], &self.morphisms[g]);
        if mf.target != mg.source {
            return None;
        }
        if self.identities[mf.target] == g {
            return Some(f);
        }
        if self.identities[mf.source] == f {
            return Some(g);
        }
        let p = self.compose_payload(&mg.payload, &mf.payload);
        Some(
            self.lookup(mf.source, mg.target, &p)
                .unwrap_or_else(|| panic!("composite {p:?} missing from {}", self.name)),
        )
    }

    /// `g ∘ f`
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {f} and {g} are not composable"))
    }

    /// Composite of a chain given in application order.
    pub fn compose_chain(&self, start: ObjId, chain: &[MorId]) -> MorId {
        chain
            .iter()
            .fold(self.identity(start), |acc, &g| self.compose(g, acc))
    }

    pub fn automorphisms(&self, o: ObjId) -> Vec<MorId> {
        let id = self.identity(o);
        self.hom(o, o)
            .iter()
            .copied()
            .filter(|&f| self.hom(o, o).iter().any(|&g| self.compose(g, f) == id))
            .collect()
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.source(f), self.target(f));
        self.hom(b, a).iter().copied().find(|&g| {
            self.compose(g, f) == self.identity(a) && self.compose(f, g) == self.identity(b)
        })
    }

    /// The idempotent of `n` that keeps exactly the points of `keep`.
    pub fn restriction_idempotent(&self, o: ObjId, keep: u32) -> Option<MorId> {
        let grade = self.objects[o].grade;
        let p = match self.morphisms[self.identities[o]].payload {
            Payload::Subset(_) => Payload::Subset(keep),
            Payload::Injection(_) => {
                Payload::Injection(PartialInjection::partial_identity(grade, grade, keep))
            }
            Payload::Wreath(..) => {
                let e = self.group.as_ref()?.identity() as u8;
                let pi = PartialInjection::partial_identity(grade, grade, keep);
                let mut labels = [0u8; MAX_POINTS];
                for i in 0..grade {
                    if keep >> i & 1 == 1 {
                        labels[i] = e;
                    }
                }
                Payload::Wreath(pi, labels)
            }
            Payload::Based(_) => {
                let mut map = [0u8; MAX_POINTS];
                for (i, slot) in map.iter_mut().enumerate().take(grade) {
                    if keep >> i & 1 == 1 {
                        *slot = (i + 1) as u8;
                    }
                }
                Payload::Based(BasedMap::from_raw(grade, grade, map))
            }
            _ => return None,
        };
        self.lookup(o, o, &p)
    }

    /// Subcategory on the given objects with the morphisms accepted by `keep`.
    /// Fails if the selection is not closed under composition or misses an identity.
    pub fn subcategory(
        &self,
        name: &str,
        objects: &[ObjId],
        keep: impl Fn(MorId) -> bool,
    ) -> Result<(FinCat, Vec<MorId>), CatError> {
        let mut b = Builder::new();
        let mut obj_pos = vec![usize::MAX; self.objects.len()];
        for &o in objects {
            obj_pos[o] = b.object(self.objects[o].grade, self.objects[o].label.clone());
        }
        let mut kept = Vec::new();
        for &a in objects {
            for &c in objects {
                for &f in self.hom(a, c) {
                    if keep(f) {
                        b.morphism(obj_pos[a], obj_pos[c], self.morphisms[f].payload);
                        kept.push(f);
                    }
                }
            }
        }
        let cat = FinCat::assemble(name.to_string(), None, b, self.group.clone())?;
        for &f in &kept {
            for &g in &kept {
                if self.target(f) == self.source(g) {
                    let h = self.compose(g, f);
                    let m = self.morphism(h);
                    if cat
                        .lookup(obj_pos[m.source], obj_pos[m.target], &m.payload)
                        .is_none()
                    {
                        return Err(CatError::NotClosed(format!(
                            "{name}: composite of {f} and {g}"
                        )));
                    }
                }
            }
        }
        Ok((cat, kept))
    }

    /// Associativity and identity laws on every composable triple.
    pub fn check_laws(&self) -> Result<(), CatError> {
        let n = self.objects.len();
        for a in 0..n {
            for &f in &self.homs[a].concat() {
                let b = self.target(f);
                if self.compose(self.identity(b), f) != f || self.compose(f, self.identity(a)) != f
                {
                    return Err(CatError::LawViolation(format!("identity law fails at {f}")));
                }
                for c in 0..n {
                    for &g in self.hom(b, c) {
                        let gf = self.compose(g, f);
                        for d in 0..n {
                            for &h in self.hom(c, d) {
                                if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                                    return Err(CatError::LawViolation(format!(
                                        "associativity fails at ({f}, {g}, {h})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("name", &self.name)
            .field("objects", &self.objects.len())
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

/// Builds a category from its spec, refusing if it exceeds `budget` morphisms.
pub fn build_category(spec: &CategorySpec, budget: usize) -> Result<FinCat, CatError> {
    let count = closed_form_count(spec);
    if count > budget as u128 {
        return Err(CatError::BudgetExceeded {
            needed: count,
            budget,
        });
    }
    let max_points = match spec {
        CategorySpec::Subsets { max }
        | CategorySpec::Fi { max }
        | CategorySpec::FiSharp { max }
        | CategorySpec::FiSharpWreath { max, .. }
        | CategorySpec::Monotone { max }
        | CategorySpec::Pointed { max } => *max,
        CategorySpec::SubsetMonoid { n }
        | CategorySpec::SubsetPoset { n }
        | CategorySpec::SubsetPosetOp { n } => *n,
        _ => 0,
    };
    if max_points > MAX_POINTS {
        return Err(CatError::TooLarge(max_points));
    }
    let mut b = Builder::new();
    let mut group = None;
    match spec {
        CategorySpec::Subsets { max } => {
            for n in 0..=*max {
                b.object(n, n.to_string());
            }
            for m in 0..=*max {
                for n in 0..=*max {
                    for mask in 0..1u32 << m.min(n) {
                        b.morphism(m, n, Payload::Subset(mask));
                    }
                }
            }
        }
        CategorySpec::SubsetMonoid { n } => {
            b.object(*n, "•".into());
            for mask in 0..1u32 << n {
                b.morphism(0, 0, Payload::Subset(mask));
            }
        }
        CategorySpec::SubsetPoset { n } | CategorySpec::SubsetPosetOp { n } => {
            let op = matches!(spec, CategorySpec::SubsetPosetOp { .. });
            for mask in 0..1u32 << n {
                b.object(mask.count_ones() as usize, subset_label(mask, *n));
            }
            for lower in 0..1u32 << n {
                for upper in 0..1u32 << n {
                    if lower & !upper == 0 {
                        let p = Payload::Inclusion { lower, upper };
                        if op {
                            b.morphism(upper as usize, lower as usize, p);
                        } else {
                            b.morphism(lower as usize, upper as usize, p);
                        }
                    }
                }
            }
        }
        CategorySpec::Fi { max }
        | CategorySpec::FiSharp { max }
        | CategorySpec::Monotone { max } => {
            for n in 0..=*max {
                b.object(n, n.to_string());
            }
            for m in 0..=*max {
                for n in 0..=*max {
                    for p in partial_injections(m, n) {
                        let ok = match spec {
                            CategorySpec::Fi { .. } => p.is_total(),
                            CategorySpec::Monotone { .. } => p.is_order_preserving(),
                            _ => true,
                        };
                        if ok {
                            b.morphism(m, n, Payload::Injection(p));
                        }
                    }
                }
            }
        }
        CategorySpec::FiSharpWreath { max, table } => {
            let g = GroupTable::new(table.clone())?;
            let order = g.order();
            for n in 0..=*max {
                b.object(n, n.to_string());
            }
            for m in 0..=*max {
                for n in 0..=*max {
                    for p in partial_injections(m, n) {
                        let dom: Vec<usize> =
                            (0..m).filter(|&i| p.apply(i + 1).is_some()).collect();
                        let combos = order.pow(dom.len() as u32);
                        for mut code in 0..combos {
                            let mut labels = [0u8; MAX_POINTS];
                            for &i in dom.iter().rev() {
                                labels[i] = (code % order) as u8;
                                code /= order;
                            }
                            b.morphism(m, n, Payload::Wreath(p, labels));
                        }
                    }
                }
            }
            group = Some(g);
        }
        CategorySpec::Pointed { max } => {
            for n in 0..=*max {
                b.object(n, format!("[{n}]"));
            }
            for m in 0..=*max {
                for n in 0..=*max {
                    for p in based_maps(m, n) {
                        b.morphism(m, n, Payload::Based(p));
                    }
                }
            }
        }
        CategorySpec::Chain { max } => {
            for n in 0..=*max {
                b.object(n, n.to_string());
            }
            for m in 0..=*max {
                for n in m..=*max {
                    b.morphism(m, n, Payload::Unique);
                }
            }
        }
        CategorySpec::Group { table } => {
            let g = GroupTable::new(table.clone())?;
            b.object(0, "•".into());
            for x in 0..g.order() {
                b.morphism(0, 0, Payload::Group(x as u16));
            }
            group = Some(g);
        }
        CategorySpec::Discrete { objects } => {
            for n in 0..*objects {
                b.object(0, n.to_string());
                b.morphism(n, n, Payload::Unique);
            }
        }
    }
    FinCat::assemble(spec.to_string(), Some(spec.clone()), b, group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_is_enforced() {
        let err = build_category(&CategorySpec::FiSharp { max: 8 }, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, CatError::BudgetExceeded { .. }));
    }

    #[test]
    fn invalid_group_is_rejected() {
        let bad = CategorySpec::Group {
            table: vec![vec![0, 1], vec![0, 1]],
        };
        assert!(matches!(
            build_category(&bad, DEFAULT_BUDGET),
            Err(CatError::InvalidGroup(_))
        ));
    }

    #[test]
    fn subset_monoid_has_power_set() {
        let c = build_category(&CategorySpec::SubsetMonoid { n: 3 }, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.hom(0, 0).len(), 8);
        c.check_laws().unwrap();
    }
}

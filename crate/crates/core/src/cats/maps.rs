use std::fmt;

use super::CatError;

/// Largest set size a payload can describe.
pub const MAX_POINTS: usize = 16;

/// A partially defined injection `{1..m} -> {1..n}`; `0` marks an undefined point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialInjection {
    source: u8,
    target: u8,
    map: [u8; MAX_POINTS],
}

impl PartialInjection {
    pub fn new(assignment: &[u8], target: usize) -> Result<Self, CatError> {
        if assignment.len() > MAX_POINTS || target > MAX_POINTS {
            return Err(CatError::TooLarge(assignment.len().max(target)));
        }
        let mut seen = 0u32;
        let mut map = [0u8; MAX_POINTS];
        for (i, &v) in assignment.iter().enumerate() {
            if v as usize > target {
                return Err(CatError::InvalidPayload(format!(
                    "point {} maps to {v}, outside 1..{target}",
                    i + 1
                )));
            }
            if v != 0 {
                if seen >> v & 1 == 1 {
                    return Err(CatError::InvalidPayload(format!(
                        "value {v} hit twice; not injective"
                    )));
                }
                seen |= 1 << v;
            }
            map[i] = v;
        }
        Ok(PartialInjection {
            source: assignment.len() as u8,
            target: target as u8,
            map,
        })
    }

    pub(crate) fn from_raw(source: usize, target: usize, map: [u8; MAX_POINTS]) -> Self {
        PartialInjection {
            source: source as u8,
            target: target as u8,
            map,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut map = [0u8; MAX_POINTS];
        for (i, slot) in map.iter_mut().enumerate().take(n) {
            *slot = (i + 1) as u8;
        }
        Self::from_raw(n, n, map)
    }

    /// Identity on the points of `mask` (bit `i-1` for point `i`), undefined elsewhere.
    pub fn partial_identity(m: usize, n: usize, mask: u32) -> Self {
        let mut map = [0u8; MAX_POINTS];
        for (i, slot) in map.iter_mut().enumerate().take(m.min(n)) {
            if mask >> i & 1 == 1 {
                *slot = (i + 1) as u8;
            }
        }
        Self::from_raw(m, n, map)
    }

    /// `i -> i + k`
    pub fn shift(n: usize, k: usize) -> Self {
        let mut map = [0u8; MAX_POINTS];
        for (i, slot) in map.iter_mut().enumerate().take(n) {
            *slot = (i + 1 + k) as u8;
        }
        Self::from_raw(n, n + k, map)
    }

    pub fn source(&self) -> usize {
        self.source as usize
    }

    pub fn target(&self) -> usize {
        self.target as usize
    }

    pub fn assignment(&self) -> &[u8] {
        &self.map[..self.source as usize]
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> Option<usize> {
        match self.map[i - 1] {
            0 => None,
            v => Some(v as usize),
        }
    }

    /// `g ∘ self`
    pub fn then(&self, g: &PartialInjection) -> PartialInjection {
        debug_assert_eq!(self.target, g.source);
        let mut map = [0u8; MAX_POINTS];
        for i in 0..self.source as usize {
            let v = self.map[i];
            if v != 0 {
                map[i] = g.map[v as usize - 1];
            }
        }
        Self::from_raw(self.source(), g.target(), map)
    }

    pub fn domain_mask(&self) -> u32 {
        (0..self.source as usize)
            .filter(|&i| self.map[i] != 0)
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn image_mask(&self) -> u32 {
        self.assignment()
            .iter()
            .filter(|&&v| v != 0)
            .fold(0, |m, &v| m | 1 << (v - 1))
    }

    pub fn rank(&self) -> usize {
        self.domain_mask().count_ones() as usize
    }

    pub fn is_total(&self) -> bool {
        self.assignment().iter().all(|&v| v != 0)
    }

    pub fn is_bijection(&self) -> bool {
        self.source == self.target && self.is_total()
    }

    /// Identity wherever defined (the image of a subset-category morphism).
    pub fn is_partial_identity(&self) -> bool {
        self.assignment()
            .iter()
            .enumerate()
            .all(|(i, &v)| v == 0 || v as usize == i + 1)
    }

    pub fn is_order_preserving(&self) -> bool {
        let vals: Vec<u8> = self
            .assignment()
            .iter()
            .copied()
            .filter(|&v| v != 0)
            .collect();
        vals.windows(2).all(|w| w[0] < w[1])
    }

    /// Order preserving on the points of `mask`.
    pub fn is_order_preserving_on(&self, mask: u32) -> bool {
        let vals: Vec<u8> = (0..self.source())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.map[i])
            .filter(|&v| v != 0)
            .collect();
        vals.windows(2).all(|w| w[0] < w[1])
    }

    /// The partial inverse `{1..n} -> {1..m}`.
    pub fn inverse(&self) -> PartialInjection {
        let mut map = [0u8; MAX_POINTS];
        for i in 0..self.source() {
            let v = self.map[i];
            if v != 0 {
                map[v as usize - 1] = (i + 1) as u8;
            }
        }
        Self::from_raw(self.target(), self.source(), map)
    }

    /// `1 -> 1`, `i -> f(i-1) + 1`: the shift by one fixed point in front.
    pub fn shifted(&self) -> PartialInjection {
        let mut map = [0u8; MAX_POINTS];
        map[0] = 1;
        for i in 0..self.source() {
            let v = self.map[i];
            map[i + 1] = if v == 0 { 0 } else { v + 1 };
        }
        Self::from_raw(self.source() + 1, self.target() + 1, map)
    }
}

impl fmt::Debug for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->{}", self.assignment(), self.target)
    }
}

/// A based map `{0..m} -> {0..n}` fixing the basepoint `0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasedMap {
    source: u8,
    target: u8,
    map: [u8; MAX_POINTS],
}

impl BasedMap {
    pub fn new(assignment: &[u8], target: usize) -> Result<Self, CatError> {
        if assignment.len() > MAX_POINTS || target > MAX_POINTS {
            return Err(CatError::TooLarge(assignment.len().max(target)));
        }
        let mut map = [0u8; MAX_POINTS];
        for (i, &v) in assignment.iter().enumerate() {
            if v as usize > target {
                return Err(CatError::InvalidPayload(format!(
                    "point {} maps to {v}, outside 0..{target}",
                    i + 1
                )));
            }
            map[i] = v;
        }
        Ok(BasedMap {
            source: assignment.len() as u8,
            target: target as u8,
            map,
        })
    }

    pub(crate) fn from_raw(source: usize, target: usize, map: [u8; MAX_POINTS]) -> Self {
        BasedMap {
            source: source as u8,
            target: target as u8,
            map,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut map = [0u8; MAX_POINTS];
        for (i, slot) in map.iter_mut().enumerate().take(n) {
            *slot = (i + 1) as u8;
        }
        Self::from_raw(n, n, map)
    }

    pub fn source(&self) -> usize {
        self.source as usize
    }

    pub fn target(&self) -> usize {
        self.target as usize
    }

    pub fn assignment(&self) -> &[u8] {
        &self.map[..self.source as usize]
    }

    pub fn apply(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.map[i - 1] as usize
        }
    }

    pub fn then(&self, g: &BasedMap) -> BasedMap {
        debug_assert_eq!(self.target, g.source);
        let mut map = [0u8; MAX_POINTS];
        for i in 0..self.source() {
            let v = self.map[i];
            if v != 0 {
                map[i] = g.map[v as usize - 1];
            }
        }
        Self::from_raw(self.source(), g.target(), map)
    }

    /// `1 -> 1`, `i -> f(i-1) + 1` (basepoint stays at the basepoint).
    pub fn shifted(&self) -> BasedMap {
        let mut map = [0u8; MAX_POINTS];
        map[0] = 1;
        for i in 0..self.source() {
            let v = self.map[i];
            map[i + 1] = if v == 0 { 0 } else { v + 1 };
        }
        Self::from_raw(self.source() + 1, self.target() + 1, map)
    }
}

impl fmt::Debug for BasedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}=>{}", self.assignment(), self.target)
    }
}

/// Generators of the partial-injection category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Swap of `i` and `i+1` on `{1..n}`.
    Transposition { n: usize, i: usize },
    /// `n -> n+1`, `i -> i`.
    Insert { n: usize },
    /// `n -> n-1`, undefined on `n`.
    Delete { n: usize },
}

impl Generator {
    pub fn source(&self) -> usize {
        match *self {
            Generator::Transposition { n, .. }
            | Generator::Insert { n }
            | Generator::Delete { n } => n,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Generator::Transposition { n, .. } => n,
            Generator::Insert { n } => n + 1,
            Generator::Delete { n } => n - 1,
        }
    }

    pub fn payload(&self) -> PartialInjection {
        match *self {
            Generator::Transposition { n, i } => {
                let mut p = PartialInjection::identity(n);
                p.map.swap(i - 1, i);
                p
            }
            Generator::Insert { n } => {
                let mut p = PartialInjection::identity(n);
                p.target = (n + 1) as u8;
                p
            }
            Generator::Delete { n } => {
                let mut p = PartialInjection::identity(n);
                p.map[n - 1] = 0;
                p.target = (n - 1) as u8;
                p
            }
        }
    }

    /// Image under the shift `f -> (1 -> 1, i -> f(i-1)+1)`.
    pub fn shifted(&self) -> Generator {
        match *self {
            Generator::Transposition { n, i } => Generator::Transposition { n: n + 1, i: i + 1 },
            Generator::Insert { n } => Generator::Insert { n: n + 1 },
            Generator::Delete { n } => Generator::Delete { n: n + 1 },
        }
    }
}

/// Lexicographically least reduced word (in application order) of a
/// permutation of `{1..n}` given by `perm[i-1] = image of i`.
fn permutation_word(perm: &[u8]) -> Vec<Generator> {
    let n = perm.len();
    let mut p = perm.to_vec();
    let mut word = Vec::new();
    'outer: loop {
        for i in 0..n.saturating_sub(1) {
            if p[i] > p[i + 1] {
                // p = p' ∘ τ_i with p' = p ∘ τ_i
                p.swap(i, i + 1);
                word.push(Generator::Transposition { n, i: i + 1 });
                continue 'outer;
            }
        }
        break;
    }
    word
}

/// Canonical word `(target permutation) ∘ (insertions) ∘ (deletions) ∘ (source
/// permutation)`, listed in application order.
pub fn factorize_partial_injection(phi: &PartialInjection) -> Vec<Generator> {
    let (m, n) = (phi.source(), phi.target());
    let dom: Vec<usize> = (1..=m).filter(|&i| phi.apply(i).is_some()).collect();
    let rest: Vec<usize> = (1..=m).filter(|&i| phi.apply(i).is_none()).collect();
    let k = dom.len();
    // sigma sends dom (in order) to 1..k and the rest (in order) to k+1..m
    let mut sigma = vec![0u8; m];
    for (pos, &x) in dom.iter().chain(rest.iter()).enumerate() {
        sigma[x - 1] = (pos + 1) as u8;
    }
    let mut word = permutation_word(&sigma);
    for j in (k + 1..=m).rev() {
        word.push(Generator::Delete { n: j });
    }
    for j in k..n {
        word.push(Generator::Insert { n: j });
    }
    let img = phi.image_mask();
    let free: Vec<usize> = (1..=n).filter(|v| img >> (v - 1) & 1 == 0).collect();
    let mut tau = vec![0u8; n];
    for (j, &x) in dom.iter().enumerate() {
        tau[j] = phi.apply(x).expect("in domain") as u8;
    }
    for (j, v) in free.iter().enumerate() {
        tau[k + j] = *v as u8;
    }
    word.extend(permutation_word(&tau));
    word
}

/// Composite payload of a word in application order, starting at object `start`.
pub fn compose_word(start: usize, word: &[Generator]) -> PartialInjection {
    word.iter()
        .fold(PartialInjection::identity(start), |acc, g| {
            acc.then(&g.payload())
        })
}

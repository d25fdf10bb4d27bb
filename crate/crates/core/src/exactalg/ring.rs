use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::integer::Integer;

/// Coefficient ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    Z,
    Q,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Z => f.write_str("Z"),
            RingTag::Q => f.write_str("Q"),
        }
    }
}

impl FromStr for RingTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" => Ok(RingTag::Z),
            "Q" | "q" => Ok(RingTag::Q),
            other => Err(format!("unknown ring `{other}` (expected Z or Q)")),
        }
    }
}

/// A Euclidean domain with canonical representatives, as needed by the
/// normal-form algorithms.
pub trait Ring: Clone + Eq + Hash + Debug + Display + Send + Sync + 'static {
    const TAG: RingTag;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_unit(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// `self -= q * x`
    fn sub_mul_assign(&mut self, q: &Self, x: &Self) {
        *self = self.sub(&q.mul(x));
    }

    /// `self += q * x`
    fn add_mul_assign(&mut self, q: &Self, x: &Self) {
        *self = self.add(&q.mul(x));
    }

    /// Euclidean division with canonical remainder (`0 <= r < |d|` over Z,
    /// `r = 0` over a field).
    fn div_rem(&self, d: &Self) -> (Self, Self);

    /// Unit `u` such that `u * self` is the canonical associate.
    fn normal_unit(&self) -> Self;

    /// Inverse of a unit.
    fn unit_inverse(&self) -> Self;

    /// `(g, s, t)` with `g = s*a + t*b`, `g` canonical.
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self);

    /// Euclidean size comparison used for pivot selection.
    fn cmp_size(&self, other: &Self) -> Ordering;

    fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        q
    }

    fn parse(s: &str) -> Option<Self>;
}

impl Ring for Integer {
    const TAG: RingTag = RingTag::Z;

    fn zero() -> Self {
        Integer::ZERO
    }
    fn one() -> Self {
        Integer::ONE
    }
    fn from_i64(v: i64) -> Self {
        Integer::from(v)
    }
    fn is_zero(&self) -> bool {
        Integer::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Integer::is_one(self)
    }
    fn is_unit(&self) -> bool {
        matches!(self, Integer::Small(1) | Integer::Small(-1))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul_assign(&mut self, q: &Self, x: &Self) {
        Integer::sub_mul_assign(self, q, x)
    }
    fn add_mul_assign(&mut self, q: &Self, x: &Self) {
        Integer::add_mul_assign(self, q, x)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        self.div_rem_euclid(d)
    }
    fn normal_unit(&self) -> Self {
        if self.signum() < 0 {
            Integer::from(-1)
        } else {
            Integer::ONE
        }
    }
    fn unit_inverse(&self) -> Self {
        debug_assert!(Ring::is_unit(self));
        self.clone()
    }
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        Integer::ext_gcd(a, b)
    }
    fn cmp_size(&self, other: &Self) -> Ordering {
        self.cmp_abs(other)
    }
    fn parse(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: Integer,
    den: Integer,
}

impl Rational {
    pub fn new(num: Integer, den: Integer) -> Rational {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g), den.div_exact(&g));
        if d.signum() < 0 {
            n = -n;
            d = -d;
        }
        Rational { num: n, den: d }
    }

    pub fn from_integer(n: Integer) -> Rational {
        Rational {
            num: n,
            den: Integer::ONE,
        }
    }

    pub fn numer(&self) -> &Integer {
        &self.num
    }

    pub fn denom(&self) -> &Integer {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Ring for Rational {
    const TAG: RingTag = RingTag::Q;

    fn zero() -> Self {
        Rational::from_integer(Integer::ZERO)
    }
    fn one() -> Self {
        Rational::from_integer(Integer::ONE)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(Integer::from(v))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn is_unit(&self) -> bool {
        !self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return Rational::from_integer(&self.num + &other.num);
        }
        Rational::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return Rational::from_integer(&self.num * &other.num);
        }
        Rational::new(&self.num * &other.num, &self.den * &other.den)
    }
    fn neg(&self) -> Self {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (self.mul(&d.unit_inverse()), Rational::zero())
    }
    fn normal_unit(&self) -> Self {
        if self.is_zero() {
            Rational::one()
        } else {
            self.unit_inverse()
        }
    }
    fn unit_inverse(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero");
        Rational::new(self.den.clone(), self.num.clone())
    }
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        if !a.is_zero() {
            (Rational::one(), a.unit_inverse(), Rational::zero())
        } else if !b.is_zero() {
            (Rational::one(), Rational::zero(), b.unit_inverse())
        } else {
            (Rational::zero(), Rational::one(), Rational::zero())
        }
    }
    fn cmp_size(&self, other: &Self) -> Ordering {
        // prefer small integers as pivots to limit growth
        let key = |x: &Rational| (x.is_zero(), x.den.clone(), x.num.abs());
        let (a, b) = (key(self), key(other));
        a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let d: Integer = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(Rational::new(n.trim().parse().ok()?, d))
            }
            None => Some(Rational::from_integer(s.parse().ok()?)),
        }
    }
}

//! Arbitrary-precision integers with an inline machine-word representation.
//!
//! Values that fit in an `i64` are stored inline; every operation uses checked
//! arithmetic and promotes to a heap-allocated [`BigInt`] on overflow, so the
//! results are always exact.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Integer {
    Small(i64),
    /// Only used for values outside the `i64` range.
    Big(BigInt),
}

impl Integer {
    pub const ZERO: Integer = Integer::Small(0);
    pub const ONE: Integer = Integer::Small(1);

    fn from_big(b: BigInt) -> Integer {
        match b.to_i64() {
            Some(v) => Integer::Small(v),
            None => Integer::Big(b),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Integer::Small(v) => BigInt::from(*v),
            Integer::Big(b) => b.clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Integer::Small(v) => Some(*v),
            Integer::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Integer::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Integer::Small(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Integer::Small(v) => v.signum() as i32,
            Integer::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Integer {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Euclidean division: `self = q * d + r` with `0 <= r < |d|`.
    pub fn div_rem_euclid(&self, d: &Integer) -> (Integer, Integer) {
        assert!(!d.is_zero(), "division by zero");
        if let (Integer::Small(a), Integer::Small(b)) = (self, d) {
            if let (Some(q), Some(r)) = (a.checked_div_euclid(*b), a.checked_rem_euclid(*b)) {
                return (Integer::Small(q), Integer::Small(r));
            }
        }
        let (a, b) = (self.to_big(), d.to_big());
        let (mut q, mut r) = a.div_mod_floor(&b);
        if r.is_negative() {
            // only possible for negative divisor
            r += b.abs();
            q += 1;
        }
        (Integer::from_big(q), Integer::from_big(r))
    }

    /// Exact division; panics in debug builds when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Integer) -> Integer {
        let (q, r) = self.div_rem_euclid(d);
        debug_assert!(r.is_zero(), "inexact division {self} / {d}");
        q
    }

    pub fn divides(&self, other: &Integer) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem_euclid(self).1.is_zero()
    }

    /// Non-negative gcd.
    pub fn gcd(&self, other: &Integer) -> Integer {
        if let (Integer::Small(a), Integer::Small(b)) = (self, other) {
            if *a != i64::MIN && *b != i64::MIN {
                return Integer::Small(a.gcd(b));
            }
        }
        Integer::from_big(self.to_big().gcd(&other.to_big()))
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other` and `g >= 0`.
    pub fn ext_gcd(&self, other: &Integer) -> (Integer, Integer, Integer) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Integer::ONE, Integer::ZERO);
        let (mut t0, mut t1) = (Integer::ZERO, Integer::ONE);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem_euclid(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.signum() < 0 {
            (-r0, -s0, -t0)
        } else {
            (r0, s0, t0)
        }
    }

    /// `self -= q * x`
    pub fn sub_mul_assign(&mut self, q: &Integer, x: &Integer) {
        if let (Integer::Small(a), Integer::Small(b), Integer::Small(c)) = (&*self, q, x) {
            if let Some(v) = b.checked_mul(*c).and_then(|p| a.checked_sub(p)) {
                *self = Integer::Small(v);
                return;
            }
        }
        *self = &*self - &(q * x);
    }

    /// `self += q * x`
    pub fn add_mul_assign(&mut self, q: &Integer, x: &Integer) {
        if let (Integer::Small(a), Integer::Small(b), Integer::Small(c)) = (&*self, q, x) {
            if let Some(v) = b.checked_mul(*c).and_then(|p| a.checked_add(p)) {
                *self = Integer::Small(v);
                return;
            }
        }
        *self = &*self + &(q * x);
    }

    pub fn cmp_abs(&self, other: &Integer) -> Ordering {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a.unsigned_abs().cmp(&b.unsigned_abs()),
            _ => self.to_big().abs().cmp(&other.to_big().abs()),
        }
    }
}

impl Default for Integer {
    fn default() -> Self {
        Integer::ZERO
    }
}

impl From<i64> for Integer {
    fn from(v: i64) -> Self {
        Integer::Small(v)
    }
}

impl From<i32> for Integer {
    fn from(v: i32) -> Self {
        Integer::Small(v as i64)
    }
}

impl From<usize> for Integer {
    fn from(v: usize) -> Self {
        match i64::try_from(v) {
            Ok(x) => Integer::Small(x),
            Err(_) => Integer::Big(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Integer {
    fn from(b: BigInt) -> Self {
        Integer::from_big(b)
    }
}

impl PartialEq for Integer {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a == b,
            (Integer::Big(a), Integer::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Integer {}

impl Hash for Integer {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Integer::Small(v) => {
                0u8.hash(state);
                v.hash(state)
            }
            Integer::Big(b) => {
                1u8.hash(state);
                b.hash(state)
            }
        }
    }
}

impl PartialOrd for Integer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Integer {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integer::Small(v) => write!(f, "{v}"),
            Integer::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Integer {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Integer::Small(v));
        }
        s.parse::<BigInt>().map(Integer::from_big)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident, $big:tt) => {
        impl<'a> $tr<&'a Integer> for &'a Integer {
            type Output = Integer;
            fn $method(self, rhs: &'a Integer) -> Integer {
                if let (Integer::Small(a), Integer::Small(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(*b) {
                        return Integer::Small(v);
                    }
                }
                Integer::from_big(self.to_big() $big rhs.to_big())
            }
        }

        impl $tr<Integer> for Integer {
            type Output = Integer;
            fn $method(self, rhs: Integer) -> Integer {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl Neg for &Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        match self {
            Integer::Small(v) => match v.checked_neg() {
                Some(n) => Integer::Small(n),
                None => Integer::from_big(-BigInt::from(*v)),
            },
            Integer::Big(b) => Integer::from_big(-b.clone()),
        }
    }
}

impl Neg for Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        -&self
    }
}

impl Zero for Integer {
    fn zero() -> Self {
        Integer::ZERO
    }
    fn is_zero(&self) -> bool {
        Integer::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let a = Integer::from(i64::MAX);
        let b = &a + &Integer::ONE;
        assert!(matches!(b, Integer::Big(_)));
        assert_eq!(&b - &Integer::ONE, a);
        let sq = &a * &a;
        assert_eq!(sq.to_big(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(
            sq.to_string(),
            ((1u128 << 126) - (1u128 << 64) + 1).to_string()
        );
        assert_eq!(
            -Integer::from(i64::MIN),
            "9223372036854775808".parse().unwrap()
        );
    }

    #[test]
    fn euclidean_division() {
        let cases = [(7, 3, 2, 1), (-7, 3, -3, 2), (7, -3, -2, 1), (-7, -3, 3, 2)];
        for (a, b, q, r) in cases {
            let (qq, rr) = Integer::from(a).div_rem_euclid(&Integer::from(b));
            assert_eq!((qq, rr), (Integer::from(q), Integer::from(r)), "{a} / {b}");
        }
        let big: Integer = "-100000000000000000000000".parse().unwrap();
        let (q, r) = big.div_rem_euclid(&Integer::from(-7));
        assert_eq!(&(&q * &Integer::from(-7)) + &r, big);
        assert!(r >= Integer::ZERO && r < Integer::from(7));
    }

    #[test]
    fn ext_gcd_bezout() {
        for (a, b) in [(12, 18), (-12, 18), (0, 5), (5, 0), (0, 0), (17, -5)] {
            let (a, b) = (Integer::from(a), Integer::from(b));
            let (g, s, t) = a.ext_gcd(&b);
            assert_eq!(&(&s * &a) + &(&t * &b), g);
            assert_eq!(g, a.gcd(&b));
        }
    }
}

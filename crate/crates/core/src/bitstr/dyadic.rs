use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// A non-negative dyadic rational `numerator / 2^scale`, always stored in
/// lowest terms (numerator odd, or zero with scale 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    scale: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseDyadicError {
    #[error("malformed dyadic {0:?} (expected `n`, `n/2^k`, or `n/d` with d a power of two)")]
    Malformed(String),
    #[error("subtraction would go negative")]
    Negative,
}

impl Dyadic {
    pub fn new(num: BigUint, scale: u64) -> Self {
        let mut d = Dyadic { num, scale };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigUint::zero(),
            scale: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigUint::one(),
            scale: 0,
        }
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: u64) -> Self {
        Dyadic {
            num: BigUint::one(),
            scale: k,
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.scale = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.scale);
        if tz > 0 {
            self.num >>= tz;
            self.scale -= tz;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator when rescaled to denominator `2^scale`; `None` if `self`
    /// is not a multiple of `2^{-scale}`.
    pub fn numerator_at_scale(&self, scale: u64) -> Option<BigUint> {
        (scale >= self.scale).then(|| &self.num << (scale - self.scale))
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let s = self.scale.max(other.scale);
        let a = &self.num << (s - self.scale);
        let b = &other.num << (s - other.scale);
        (a >= b).then(|| Dyadic::new(a - b, s))
    }

    /// Smallest multiple of `2^{-k}` that is `>= self`.
    pub fn ceil_to(&self, k: u64) -> Dyadic {
        if self.scale <= k {
            return self.clone();
        }
        let shift = self.scale - k;
        let (q, r) = self.num.div_rem(&(BigUint::one() << shift));
        let q = if r.is_zero() { q } else { q + 1u32 };
        Dyadic::new(q, k)
    }

    /// Exact decimal expansion; always terminates for a dyadic.
    pub fn to_decimal(&self) -> String {
        let int = &self.num >> self.scale;
        let frac = &self.num - (&int << self.scale);
        if self.scale == 0 {
            return int.to_string();
        }
        // frac / 2^s = frac * 5^s / 10^s
        let digits = (frac * BigUint::from(5u32).pow(self.scale as u32)).to_string();
        let pad = self.scale as usize - digits.len();
        let mut s = format!("{int}.{}{digits}", "0".repeat(pad));
        while s.ends_with('0') {
            s.pop();
        }
        s
    }

    /// Approximate value for display only.
    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::INFINITY);
        n * 2f64.powi(-(self.scale.min(i32::MAX as u64) as i32))
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.scale.max(other.scale);
        let a = &self.num << (s - self.scale);
        let b = &other.num << (s - other.scale);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let s = self.scale.max(rhs.scale);
        let a = &self.num << (s - self.scale);
        let b = &rhs.num << (s - rhs.scale);
        Dyadic::new(a + b, s)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

/// Panics if the result would be negative; use [`Dyadic::checked_sub`]
/// otherwise.
impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self.checked_sub(rhs).expect("dyadic subtraction underflow")
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| &acc + x)
    }
}

/// `num/2^k`, or just `num` when the scale is zero.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.scale)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseDyadicError::Malformed(s.to_string());
        let s = s.trim();
        let Some((n, d)) = s.split_once('/') else {
            return s
                .parse::<BigUint>()
                .map(|n| Dyadic::new(n, 0))
                .map_err(|_| bad());
        };
        let num: BigUint = n.trim().parse().map_err(|_| bad())?;
        let d = d.trim();
        if let Some(k) = d.strip_prefix("2^") {
            let k: u64 = k.parse().map_err(|_| bad())?;
            return Ok(Dyadic::new(num, k));
        }
        let den: BigUint = d.parse().map_err(|_| bad())?;
        if den.is_zero() || (&den & (&den - 1u32)) != BigUint::zero() {
            return Err(bad());
        }
        Ok(Dyadic::new(num, den.bits() - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(n: u64, k: u64) -> Dyadic {
        Dyadic::new(n.into(), k)
    }

    #[test]
    fn canonical_form() {
        let x = d(4, 3);
        assert_eq!(x.numerator(), &BigUint::from(1u32));
        assert_eq!(x.scale(), 1);
        assert_eq!(d(0, 9).scale(), 0);
        assert_eq!(d(6, 0).scale(), 0);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(d(1, 1) + d(1, 2) + d(1, 2), Dyadic::one());
        assert_eq!(&d(3, 2) - &d(1, 2), d(1, 1));
        assert!(d(1, 2).checked_sub(&d(1, 1)).is_none());
        assert!(d(1, 3) < d(1, 2));
        assert_eq!(d(5, 3).ceil_to(2), d(3, 2));
        assert_eq!(d(1, 2).ceil_to(4), d(1, 2));
    }

    #[test]
    fn rendering() {
        assert_eq!(d(3, 3).to_string(), "3/2^3");
        assert_eq!(d(3, 3).to_decimal(), "0.375");
        assert_eq!(Dyadic::one().to_decimal(), "1");
        assert_eq!(d(5, 1).to_decimal(), "2.5");
        assert_eq!(d(1, 10).to_decimal(), "0.0009765625");
        assert_eq!("3/2^3".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("3/8".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("1".parse::<Dyadic>().unwrap(), Dyadic::one());
        assert!("1/3".parse::<Dyadic>().is_err());
    }

    proptest! {
        #[test]
        fn order_matches_cross_multiplication(a in 0u64..1 << 20, ka in 0u64..20, b in 0u64..1 << 20, kb in 0u64..20) {
            let (x, y) = (d(a, ka), d(b, kb));
            let lhs = u128::from(a) << kb;
            let rhs = u128::from(b) << ka;
            prop_assert_eq!(x.cmp(&y), lhs.cmp(&rhs));
            prop_assert_eq!(x == y, lhs == rhs);
        }

        #[test]
        fn sum_is_exact(a in 0u64..1 << 20, ka in 0u64..20, b in 0u64..1 << 20, kb in 0u64..20) {
            let s = d(a, ka) + d(b, kb);
            let k = ka.max(kb);
            let expected = (u128::from(a) << (k - ka)) + (u128::from(b) << (k - kb));
            prop_assert_eq!(s.numerator_at_scale(k).unwrap(), BigUint::from(expected));
        }
    }
}

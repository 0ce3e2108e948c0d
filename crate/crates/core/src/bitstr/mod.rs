//! Finite binary strings, their canonical enumeration, and the identification
//! of finite prefixes with dyadic rationals in `[0, 1]`.
//!
//! Strings are enumerated by length, ties broken lexicographically, starting
//! from the empty string at index 0:
//!
//! ```text
//! 0 -> ε, 1 -> 0, 2 -> 1, 3 -> 00, 4 -> 01, 5 -> 10, 6 -> 11, ...
//! ```
//!
//! [`BitString`]'s `Ord` implementation follows the same order, so a
//! `BTreeSet<BitString>` iterates canonically.

mod dyadic;

pub use dyadic::{Dyadic, ParseDyadicError};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// A finite binary string.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitStringError {
    #[error(
        "invalid character {0:?} in bit string (expected '0', '1', or '-' for the empty string)"
    )]
    InvalidChar(char),
    #[error("dyadic value {0} lies outside [0, 1]")]
    OutOfUnitInterval(Dyadic),
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitString {
            bits: bits.into_iter().collect(),
        }
    }

    /// `1^n`.
    pub fn ones(n: usize) -> Self {
        BitString {
            bits: vec![true; n],
        }
    }

    pub fn zeros(n: usize) -> Self {
        BitString {
            bits: vec![false; n],
        }
    }

    /// The low `len` bits of `value`, most significant first.
    pub fn from_uint(value: u64, len: usize) -> Self {
        BitString::from_bits((0..len).rev().map(|i| i < 64 && (value >> i) & 1 == 1))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn pop(&mut self) -> Option<bool> {
        self.bits.pop()
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    /// `self ⋆ other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    /// The first `n` bits, `x[n]`. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> BitString {
        BitString {
            bits: self.bits[..n].to_vec(),
        }
    }

    /// Everything after the first `n` bits.
    pub fn suffix_from(&self, n: usize) -> BitString {
        BitString {
            bits: self.bits[n..].to_vec(),
        }
    }

    /// All prefixes from `ε` up to and including `self`, shortest first.
    pub fn prefixes(&self) -> impl Iterator<Item = BitString> + '_ {
        (0..=self.len()).map(move |n| self.prefix(n))
    }

    /// True iff `self` is an initial segment of `other` (reflexive).
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len() <= other.len() && other.bits[..self.len()] == self.bits[..]
    }

    /// True iff one string is an initial segment of the other.
    pub fn is_comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The number of leading ones.
    pub fn leading_ones(&self) -> usize {
        self.bits.iter().take_while(|&&b| b).count()
    }

    /// The string at position `m` of the canonical enumeration.
    ///
    /// `m + 1` written in binary, with its leading one removed.
    pub fn from_index(m: u64) -> BitString {
        let shifted = u128::from(m) + 1;
        let len = 127 - shifted.leading_zeros() as usize;
        BitString::from_bits((0..len).rev().map(|i| (shifted >> i) & 1 == 1))
    }

    pub fn from_index_big(m: &BigUint) -> BitString {
        let shifted = m + 1u32;
        let len = shifted.bits() as usize - 1;
        BitString::from_bits((0..len).rev().map(|i| shifted.bit(i as u64)))
    }

    /// Position of `self` in the canonical enumeration, if it fits in a `u64`.
    pub fn index(&self) -> Option<u64> {
        if self.len() >= 64 {
            return None;
        }
        Some(self.index_u128() as u64)
    }

    /// Position in the canonical enumeration; strings longer than 126 bits
    /// saturate.
    pub(crate) fn index_u128(&self) -> u128 {
        if self.len() > 126 {
            return u128::MAX;
        }
        let mut v: u128 = 1;
        for &b in &self.bits {
            v = (v << 1) | u128::from(b);
        }
        v - 1
    }

    pub fn index_big(&self) -> BigUint {
        let mut v = BigUint::one();
        for &b in &self.bits {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v - 1u32
    }

    /// The dyadic value `Σ b(i)·2^{-(i+1)}`.
    pub fn value(&self) -> Dyadic {
        let mut num = BigUint::zero();
        for &b in &self.bits {
            num <<= 1u32;
            if b {
                num += 1u32;
            }
        }
        Dyadic::new(num, self.len() as u64)
    }

    /// The length-`n` prefix of the binary expansion of `r`, where positive
    /// dyadic rationals take the expansion ending in a tail of ones.
    ///
    /// ```
    /// use ait_core::{BitString, Dyadic};
    /// let eighth = Dyadic::pow2_neg(3);
    /// assert_eq!(BitString::bits_of(&eighth, 6).unwrap().to_string(), "000111");
    /// ```
    pub fn bits_of(r: &Dyadic, n: usize) -> Result<BitString, BitStringError> {
        if r > &Dyadic::one() {
            return Err(BitStringError::OutOfUnitInterval(r.clone()));
        }
        if r.is_zero() {
            return Ok(BitString::zeros(n));
        }
        // r = q / 2^k with q odd; the tail-of-ones form is (q - 1) / 2^k in k
        // bits followed by ones.
        let k = r.scale() as usize;
        let q = r.numerator() - 1u32;
        Ok(BitString::from_bits((0..n).map(|i| {
            if i < k {
                q.bit((k - 1 - i) as u64)
            } else {
                true
            }
        })))
    }

    /// Every string of length exactly `len`, in canonical order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "cannot enumerate strings of length {len}");
        (0..1u64 << len).map(move |v| BitString::from_uint(v, len))
    }

    /// Every string of length at most `max_len`, in canonical order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_len)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// ASCII `0`/`1`; the empty string prints as `-`.
impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("-");
        }
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            f.write_str("BitString(ε)")
        } else {
            write!(f, "BitString({self})")
        }
    }
}

impl FromStr for BitString {
    type Err = BitStringError;

    /// Accepts `0`/`1` text; `-`, `ε` and the empty string denote `ε`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "-" || s == "ε" {
            return Ok(BitString::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitStringError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|bits| BitString { bits })
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        BitString {
            bits: bits.to_vec(),
        }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        BitString::from_bits(iter)
    }
}

/// Shorthand for string literals in tests and examples. Panics on bad input.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("valid bit string literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Length-lex order produced by brute force: all strings of each length
    /// in increasing binary value.
    fn brute_enumeration(count: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut len = 0;
        while out.len() < count {
            for v in 0..(1u32 << len) {
                let s = if len == 0 {
                    String::new()
                } else {
                    format!("{v:0len$b}")
                };
                out.push(s);
            }
            len += 1;
        }
        out.truncate(count);
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let brute = brute_enumeration(2000);
        for (m, expected) in brute.iter().enumerate() {
            let got = BitString::from_index(m as u64);
            let got_text: String = got.iter().map(|b| if b { '1' } else { '0' }).collect();
            assert_eq!(&got_text, expected, "index {m}");
            assert_eq!(got.index(), Some(m as u64));
        }
        assert_eq!(BitString::from_index(0), BitString::new());
        assert_eq!(BitString::from_index(3), bs("00"));
        assert_eq!(bs("11").index(), Some(6));
    }

    #[test]
    fn prefix_relation() {
        assert!(bs("-").is_prefix_of(&bs("011")));
        assert!(bs("01").is_prefix_of(&bs("011")));
        assert!(!bs("10").is_prefix_of(&bs("011")));
        assert!(bs("011").is_prefix_of(&bs("011")));
    }

    #[test]
    fn values() {
        assert_eq!(bs("1").value(), Dyadic::pow2_neg(1));
        assert_eq!(bs("111").value(), Dyadic::new(7u32.into(), 3));
        assert_eq!(bs("-").value(), Dyadic::zero());
        // trailing zeros cancel
        assert_eq!(bs("0100").value(), Dyadic::pow2_neg(2));
    }

    #[test]
    fn bits_of_uses_tail_of_ones() {
        assert_eq!(BitString::bits_of(&Dyadic::zero(), 4).unwrap(), bs("0000"));
        assert_eq!(
            BitString::bits_of(&Dyadic::pow2_neg(3), 6).unwrap(),
            bs("000111")
        );
        assert_eq!(
            BitString::bits_of(&Dyadic::pow2_neg(1), 3).unwrap(),
            bs("011")
        );
        assert_eq!(BitString::bits_of(&Dyadic::one(), 5).unwrap(), bs("11111"));
        assert_eq!(BitString::bits_of(&Dyadic::one(), 0).unwrap(), bs("-"));
        let too_big = Dyadic::one() + Dyadic::pow2_neg(4);
        assert!(BitString::bits_of(&too_big, 3).is_err());
    }

    #[test]
    fn bits_of_tail_converges_to_value() {
        // value_of(prefix) + 2^{-n} = r exactly whenever every bit past the
        // dyadic scale is a one.
        for k in 0..=8u64 {
            for q in (1..=(1u64 << k)).filter(|q| q % 2 == 1) {
                let r = Dyadic::new(q.into(), k);
                for n in (k as usize)..=(k as usize + 6) {
                    let prefix = BitString::bits_of(&r, n).unwrap();
                    assert_eq!(prefix.value() + Dyadic::pow2_neg(n as u64), r);
                }
            }
        }
    }

    #[test]
    fn geometric_identity() {
        for n in 0..=62u32 {
            let sum: u64 = (0..n).map(|i| 1u64 << i).sum();
            assert_eq!(sum, (1u64 << n) - 1);
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(bs("-").to_string(), "-");
        assert_eq!("".parse::<BitString>().unwrap(), BitString::new());
        assert_eq!(bs("0110").to_string(), "0110");
        assert!("01x".parse::<BitString>().is_err());
    }

    #[test]
    fn ordering_is_canonical() {
        let mut v: Vec<BitString> = (0..200).map(BitString::from_index).collect();
        v.reverse();
        v.sort();
        for (m, b) in v.iter().enumerate() {
            assert_eq!(b.index(), Some(m as u64));
        }
    }

    #[test]
    fn big_index_agrees() {
        for m in [0u64, 1, 2, 77, 1 << 40, u64::MAX - 1] {
            let b = BitString::from_index(m);
            assert_eq!(b.index_big(), BigUint::from(m));
            assert_eq!(BitString::from_index_big(&BigUint::from(m)), b);
        }
        let long = BitString::ones(80);
        assert_eq!(long.index(), None);
        assert_eq!(BitString::from_index_big(&long.index_big()), long);
    }

    proptest! {
        #[test]
        fn one_bit_extension_sandwich(bits in proptest::collection::vec(any::<bool>(), 0..=12), next: bool) {
            let b = BitString::from_bits(bits);
            let mut ext = b.clone();
            ext.push(next);
            let lo = b.value();
            let hi = b.value() + Dyadic::pow2_neg(b.len() as u64);
            prop_assert!(lo <= ext.value());
            prop_assert!(ext.value() <= hi);
        }

        #[test]
        fn prefix_relation_is_a_partial_order(
            a in proptest::collection::vec(any::<bool>(), 0..6),
            b in proptest::collection::vec(any::<bool>(), 0..6),
            c in proptest::collection::vec(any::<bool>(), 0..6),
        ) {
            let (a, b, c) = (BitString::from_bits(a), BitString::from_bits(b), BitString::from_bits(c));
            prop_assert!(a.is_prefix_of(&a));
            if a.is_prefix_of(&b) && b.is_prefix_of(&a) {
                prop_assert_eq!(&a, &b);
            }
            if a.is_prefix_of(&b) && b.is_prefix_of(&c) {
                prop_assert!(a.is_prefix_of(&c));
            }
        }
    }
}

//! Prefix-free sets: recognition, cylinder measure, the irredundancy
//! construction, and online Kraft coding.

use std::collections::BTreeSet;
use std::ops::Bound;

use thiserror::Error;

use crate::bitstr::{BitString, Dyadic};

/// The exact uniform measure of a union of cylinders.
pub type CoverMeasure = Dyadic;

/// A finite antichain under the prefix order, iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PrefixFreeSet {
    members: BTreeSet<BitString>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefixFreeError {
    #[error("{0} and {1} are comparable")]
    Comparable(BitString, BitString),
}

impl PrefixFreeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Checks the antichain property.
    pub fn try_from_iter<I: IntoIterator<Item = BitString>>(
        items: I,
    ) -> Result<Self, PrefixFreeError> {
        let members: BTreeSet<BitString> = items.into_iter().collect();
        if let Some((a, b)) = first_comparable_pair(members.iter()) {
            return Err(PrefixFreeError::Comparable(a, b));
        }
        Ok(PrefixFreeSet { members })
    }

    /// Caller guarantees the antichain property.
    pub(crate) fn from_antichain_unchecked(members: BTreeSet<BitString>) -> Self {
        debug_assert!(is_prefix_free(members.iter()));
        PrefixFreeSet { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, b: &BitString) -> bool {
        self.members.contains(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.members.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<BitString> {
        &self.members
    }

    pub fn into_set(self) -> BTreeSet<BitString> {
        self.members
    }

    pub fn measure(&self) -> CoverMeasure {
        kraft_sum(self.members.iter())
    }

    /// True iff some member is a prefix of `x`, i.e. `x ∈ O(self)` at the
    /// resolution of `x`.
    pub fn covers(&self, x: &BitString) -> bool {
        x.prefixes().any(|p| self.members.contains(&p))
    }
}

impl IntoIterator for PrefixFreeSet {
    type Item = BitString;
    type IntoIter = std::collections::btree_set::IntoIter<BitString>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

impl<'a> IntoIterator for &'a PrefixFreeSet {
    type Item = &'a BitString;
    type IntoIter = std::collections::btree_set::Iter<'a, BitString>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Distinct strings sorted lexicographically, so that a string sorts
/// immediately before its extensions.
fn lex_sorted<'a, I: IntoIterator<Item = &'a BitString>>(set: I) -> Vec<&'a BitString> {
    let mut v: Vec<&BitString> = set.into_iter().collect();
    v.sort_by(|a, b| a.bits().cmp(b.bits()));
    v.dedup();
    v
}

fn first_comparable_pair<'a, I: IntoIterator<Item = &'a BitString>>(
    set: I,
) -> Option<(BitString, BitString)> {
    lex_sorted(set)
        .windows(2)
        .find(|w| w[0].is_prefix_of(w[1]))
        .map(|w| (w[0].clone(), w[1].clone()))
}

/// True iff no element is a prefix of a distinct element. Duplicates are
/// ignored (the argument is read as a set).
pub fn is_prefix_free<'a, I: IntoIterator<Item = &'a BitString>>(set: I) -> bool {
    first_comparable_pair(set).is_none()
}

/// `Σ 2^{-|b|}` over the distinct elements, whether or not they form an
/// antichain.
pub fn kraft_sum<'a, I: IntoIterator<Item = &'a BitString>>(set: I) -> Dyadic {
    let distinct: BTreeSet<&BitString> = set.into_iter().collect();
    distinct
        .into_iter()
        .map(|b| Dyadic::pow2_neg(b.len() as u64))
        .sum()
}

/// The elements with no proper prefix in the set. They form an antichain
/// generating the same open set.
pub fn minimal_elements<'a, I: IntoIterator<Item = &'a BitString>>(set: I) -> PrefixFreeSet {
    let mut kept: Vec<&BitString> = Vec::new();
    for b in lex_sorted(set) {
        match kept.last() {
            Some(last) if last.is_prefix_of(b) => {}
            _ => kept.push(b),
        }
    }
    PrefixFreeSet::from_antichain_unchecked(kept.into_iter().cloned().collect())
}

/// The exact uniform measure of `O(S)`.
pub fn cover_measure<'a, I: IntoIterator<Item = &'a BitString>>(set: I) -> CoverMeasure {
    minimal_elements(set).measure()
}

/// Streaming form of the irredundancy construction.
///
/// Each pushed string is handled against the current antichain `T`:
/// if it extends (or equals) a member it is dropped; if members extend it,
/// it is replaced by its extensions of length `k` (the longest member length)
/// that extend no member; otherwise it is added as is.
#[derive(Clone, Debug, Default)]
pub struct PrefixFreeizer {
    canonical: BTreeSet<BitString>,
    lex: BTreeSet<Vec<bool>>,
    max_len: usize,
}

impl PrefixFreeizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds one string; returns the members added because of it.
    pub fn push(&mut self, s: &BitString) -> Vec<BitString> {
        if s.prefixes().any(|p| self.lex.contains(p.bits())) {
            return Vec::new();
        }
        let added = if self.has_extension(s.bits()) {
            let mut z = Vec::new();
            self.uncovered_extensions(&mut s.bits().to_vec(), self.max_len, &mut z);
            z
        } else {
            vec![s.clone()]
        };
        for b in &added {
            self.insert(b.clone());
        }
        added
    }

    fn insert(&mut self, b: BitString) {
        self.max_len = self.max_len.max(b.len());
        self.lex.insert(b.bits().to_vec());
        self.canonical.insert(b);
    }

    /// True iff some member is a proper extension of `z`.
    fn has_extension(&self, z: &[bool]) -> bool {
        self.lex
            .range::<[bool], _>((Bound::Excluded(z), Bound::Unbounded))
            .next()
            .is_some_and(|m| m.starts_with(z))
    }

    /// Collects, in canonical order within each subtree, every length-`k`
    /// extension of `z` that extends no member. Subtrees free of members are
    /// expanded wholesale.
    fn uncovered_extensions(&self, z: &mut Vec<bool>, k: usize, out: &mut Vec<BitString>) {
        if self.lex.contains(z.as_slice()) {
            return;
        }
        if z.len() == k || !self.has_extension(z) {
            let rest = k - z.len();
            assert!(rest < 64, "irredundancy expansion too deep");
            for tail in 0..(1u64 << rest) {
                let mut b = BitString::from(z.as_slice());
                b.extend_from(&BitString::from_uint(tail, rest));
                out.push(b);
            }
            return;
        }
        for bit in [false, true] {
            z.push(bit);
            self.uncovered_extensions(z, k, out);
            z.pop();
        }
    }

    pub fn current(&self) -> &BTreeSet<BitString> {
        &self.canonical
    }

    pub fn finish(self) -> PrefixFreeSet {
        PrefixFreeSet::from_antichain_unchecked(self.canonical)
    }
}

/// Runs the irredundancy construction over an ordered stream.
///
/// ```
/// use ait_core::{bs, prefixfree::prefix_freeize};
/// let t = prefix_freeize([bs("01"), bs("0")]);
/// let got: Vec<String> = t.iter().map(|b| b.to_string()).collect();
/// assert_eq!(got, ["00", "01"]);
/// ```
pub fn prefix_freeize<I>(stream: I) -> PrefixFreeSet
where
    I: IntoIterator,
    I::Item: std::borrow::Borrow<BitString>,
{
    let mut p = PrefixFreeizer::new();
    for s in stream {
        p.push(std::borrow::Borrow::borrow(&s));
    }
    p.finish()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KraftError {
    #[error("Kraft overflow at index {index}: running sum would become {sum} > 1")]
    Overflow { index: usize, sum: Dyadic },
    #[error(
        "no free aligned interval of length 2^-{len} at index {index} \
         (leftmost assignment is fragmented although the running sum is {sum})"
    )]
    Fragmented {
        index: usize,
        len: usize,
        sum: Dyadic,
    },
}

/// Online Kraft coder using leftmost interval assignment: codeword `i`
/// occupies `[p, p + 2^{-ℓ_i})` where `p` is the end of the previous interval
/// rounded up to a multiple of `2^{-ℓ_i}`.
#[derive(Clone, Debug, Default)]
pub struct KraftCoder {
    pointer: Dyadic,
    sum: Dyadic,
    index: usize,
}

impl KraftCoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns the next codeword. On error the coder state is unchanged.
    pub fn push(&mut self, len: usize) -> Result<BitString, KraftError> {
        let width = Dyadic::pow2_neg(len as u64);
        let sum = &self.sum + &width;
        if sum > Dyadic::one() {
            return Err(KraftError::Overflow {
                index: self.index,
                sum,
            });
        }
        let start = self.pointer.ceil_to(len as u64);
        let end = &start + &width;
        if end > Dyadic::one() {
            return Err(KraftError::Fragmented {
                index: self.index,
                len,
                sum,
            });
        }
        let n = start
            .numerator_at_scale(len as u64)
            .expect("pointer aligned to codeword length");
        let word = BitString::from_bits((0..len).rev().map(|i| n.bit(i as u64)));
        self.pointer = end;
        self.sum = sum;
        self.index += 1;
        Ok(word)
    }

    pub fn sum(&self) -> &Dyadic {
        &self.sum
    }

    pub fn emitted(&self) -> usize {
        self.index
    }
}

/// Codes a whole length stream; see [`KraftCoder`].
pub fn kraft_code<I: IntoIterator<Item = usize>>(lengths: I) -> Result<Vec<BitString>, KraftError> {
    let mut coder = KraftCoder::new();
    lengths.into_iter().map(|l| coder.push(l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstr::bs;
    use proptest::prelude::*;

    fn set(items: &[&str]) -> Vec<BitString> {
        items.iter().map(|s| bs(s)).collect()
    }

    fn strs(t: &PrefixFreeSet) -> Vec<String> {
        t.iter().map(|b| b.to_string()).collect()
    }

    /// Measure of `O(S)` by counting covered leaves at depth 12.
    fn leaf_oracle(s: &[BitString]) -> Dyadic {
        let covered = BitString::all_of_len(12)
            .filter(|leaf| s.iter().any(|b| b.is_prefix_of(leaf)))
            .count();
        Dyadic::new((covered as u64).into(), 12)
    }

    #[test]
    fn recognition() {
        assert!(is_prefix_free(&set(&["0", "1"])));
        assert!(!is_prefix_free(&set(&["0", "01"])));
        assert!(is_prefix_free(&set(&["0", "100", "101"])));
        assert!(is_prefix_free(&set(&["0", "0"])));
        assert!(is_prefix_free(&set(&[])));
        assert!(!is_prefix_free(&set(&["-", "1"])));
    }

    #[test]
    fn sums_and_measures() {
        assert_eq!(kraft_sum(&set(&["-"])), Dyadic::one());
        assert_eq!(kraft_sum(&set(&["0", "10", "11"])), Dyadic::one());
        assert_eq!(kraft_sum(&set(&["0", "01"])), "3/4".parse().unwrap());
        assert_eq!(cover_measure(&set(&["0", "00"])), Dyadic::pow2_neg(1));
        assert_eq!(cover_measure(&set(&["0", "1"])), Dyadic::one());
        assert_eq!(cover_measure(&set(&["00", "01"])), Dyadic::pow2_neg(1));
    }

    #[test]
    fn irredundancy_traces() {
        assert_eq!(strs(&prefix_freeize(set(&["0"]))), ["0"]);
        assert_eq!(strs(&prefix_freeize(set(&["01", "0"]))), ["00", "01"]);
        assert_eq!(strs(&prefix_freeize(set(&["0", "01"]))), ["0"]);
        // k is the longest member length, not the shortest gap.
        assert_eq!(
            strs(&prefix_freeize(set(&["011", "0"]))),
            ["000", "001", "010", "011"]
        );
        assert_eq!(strs(&prefix_freeize(set(&["0", "0", "1"]))), ["0", "1"]);
    }

    #[test]
    fn kraft_traces() {
        assert_eq!(kraft_code([1, 2, 2]).unwrap(), set(&["0", "10", "11"]));
        assert_eq!(kraft_code([]).unwrap(), Vec::<BitString>::new());
        assert!(matches!(
            kraft_code([1, 1, 1]),
            Err(KraftError::Overflow { index: 2, .. })
        ));
        assert_eq!(kraft_code([0]).unwrap(), set(&["-"]));
        // sum is exactly 1 but leftmost placement strands [1/4, 1/2)
        assert!(matches!(
            kraft_code([2, 1, 2]),
            Err(KraftError::Fragmented { index: 2, .. })
        ));
    }

    fn arb_set() -> impl Strategy<Value = Vec<BitString>> {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), 0..=12), 0..12)
            .prop_map(|v| v.into_iter().map(BitString::from_bits).collect())
    }

    proptest! {
        #[test]
        fn cover_measure_matches_leaf_count(s in arb_set()) {
            prop_assert_eq!(cover_measure(&s), leaf_oracle(&s));
        }

        #[test]
        fn prefix_freeize_preserves_cover(s in arb_set()) {
            let t = prefix_freeize(&s);
            prop_assert!(is_prefix_free(t.iter()));
            prop_assert_eq!(t.measure(), cover_measure(&s));
            let doubled: Vec<BitString> = s.iter().chain(s.iter()).cloned().collect();
            prop_assert_eq!(prefix_freeize(&doubled), t);
        }

        #[test]
        fn kraft_code_of_antichain_lengths(s in arb_set()) {
            let anti = minimal_elements(&s);
            let mut lengths: Vec<usize> = anti.iter().map(BitString::len).collect();
            lengths.sort_unstable();
            let code = kraft_code(lengths.iter().copied()).unwrap();
            prop_assert!(is_prefix_free(&code));
            prop_assert_eq!(code.iter().map(BitString::len).collect::<Vec<_>>(), lengths);
            prop_assert_eq!(kraft_sum(&code), anti.measure());
            prop_assert!(anti.measure() <= Dyadic::one());
        }
    }
}

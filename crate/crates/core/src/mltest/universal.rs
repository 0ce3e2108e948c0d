use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bitstr::BitString;
use crate::complexity::{Limits, Sweep};
use crate::machine::{Registry, Universal};

use super::sense2::{normalize, Sense2Test};

/// Contribution of one battery member to a universal level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalPart {
    /// 1-based battery position `i`.
    pub position: usize,
    pub name: String,
    /// The normalized member at level `i + n`.
    pub members: BTreeSet<BitString>,
}

/// Per-member parts of universal level `n`.
pub fn universal_parts(battery: &[Sense2Test], n: u64, depth: usize) -> Vec<UniversalPart> {
    battery
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let position = j + 1;
            UniversalPart {
                position,
                name: f.name().to_string(),
                members: normalize(f).enumerate(position as u64 + n, depth),
            }
        })
        .collect()
}

/// Level `n` of the universal test over a finite battery: the union over
/// positions `i ≥ 1` of member `i` normalized at level `i + n`. Its mass is
/// at most `Σ_i 2^{-(i+n)} < 2^{-n}`.
pub fn universal_test(battery: &[Sense2Test], n: u64, depth: usize) -> BTreeSet<BitString> {
    universal_parts(battery, n, depth)
        .into_iter()
        .flat_map(|p| p.members)
        .collect()
}

/// The universal test as a sense-2 test.
pub fn universal_family(battery: Vec<Sense2Test>) -> Sense2Test {
    Sense2Test::new("universal", move |n, depth| {
        universal_test(&battery, n, depth)
    })
}

/// `{b : |b| ≤ depth, K_t(b) ≤ |b| - k}`. Since `K_t ≥ K` this is a subset of
/// the strings compressible by `k`, so its mass is at most `2^{-k}`.
pub fn compression_test(
    reg: &Registry,
    k: u64,
    depth: usize,
    limits: Limits,
) -> BTreeSet<BitString> {
    let Some(max_program) = depth.checked_sub(k as usize) else {
        return BTreeSet::new();
    };
    let inner = Limits::new(limits.budget, limits.len_limit.min(max_program));
    let sweep = Sweep::run(reg, Universal::Prefix, inner);
    sweep
        .outputs()
        .filter(|(b, w)| b.len() <= depth && w.program.len() + k as usize <= b.len())
        .map(|(b, _)| b.clone())
        .collect()
}

/// The compression tests as a sense-2 test.
pub fn compression_family(reg: Arc<Registry>, limits: Limits) -> Sense2Test {
    Sense2Test::new("compression", move |k, depth| {
        compression_test(&reg, k, depth, limits)
    })
}

//! Fixtures shared by the criterion benchmarks in `benches/`.

use ait_core::BitString;

/// `count` strings of length at most `depth`, spread over the canonical
/// order by a fixed stride so runs are comparable.
pub fn spread_set(count: u64, depth: usize) -> Vec<BitString> {
    let span = (1u64 << (depth + 1)) - 1;
    (0..count)
        .map(|i| BitString::from_index((i * 2_654_435_761) % span))
        .collect()
}

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bitstr::{BitString, Dyadic};
use crate::machine::Registry;
use crate::prefixfree::{kraft_code, prefix_freeize, KraftError, PrefixFreeError};

use super::sense2::Sense2Test;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("slice mass Σ 2^(n-|b|) = {sum} exceeds 1")]
    MassViolation { sum: Dyadic },
    #[error(transparent)]
    Kraft(#[from] KraftError),
}

/// One coded triple: `codeword` decodes to `target`, with
/// `|codeword| = |target| - n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KcEntry {
    pub n: u64,
    pub target: BitString,
    pub codeword: BitString,
}

impl KcEntry {
    /// The realized bound on the decoder's complexity of `target`.
    pub fn bound(&self) -> usize {
        self.codeword.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KcDecoder {
    pub n_max: u64,
    pub depth: usize,
    /// In coding order.
    pub entries: Vec<KcEntry>,
    /// Pairs `(n, b)` with `|b| < n`, which have no codeword.
    pub excluded: Vec<(u64, BitString)>,
    /// `Σ 2^{n-|b|}` over the coded triples.
    pub mass: Dyadic,
}

impl KcDecoder {
    pub fn table(&self) -> BTreeMap<BitString, BitString> {
        self.entries
            .iter()
            .map(|e| (e.codeword.clone(), e.target.clone()))
            .collect()
    }

    /// `Σ 2^{-|a_i|}`, equal to `mass`.
    pub fn coded_mass(&self) -> Dyadic {
        self.entries
            .iter()
            .map(|e| Dyadic::pow2_neg(e.codeword.len() as u64))
            .sum()
    }

    /// A registry whose Kraft-table slot runs this decoder.
    pub fn into_registry(&self) -> Result<Registry, PrefixFreeError> {
        Registry::with_kraft_table(self.table())
    }
}

/// Kraft-codes the triples `(n, b, |b| - n)` for `b` in the prefix-free
/// slices of level `2n`, `1 ≤ n ≤ n_max`. The decoder compresses each such
/// `b` by `n` bits.
pub fn ml_to_kc_decoder(
    g: &Sense2Test,
    n_max: u64,
    depth: usize,
) -> Result<KcDecoder, BridgeError> {
    let mut triples: Vec<(usize, u64, BitString)> = Vec::new();
    let mut excluded = Vec::new();
    for n in 1..=n_max {
        for b in prefix_freeize(g.enumerate(2 * n, depth)) {
            match b.len().checked_sub(n as usize) {
                Some(len) => triples.push((len, n, b)),
                None => excluded.push((n, b)),
            }
        }
    }
    let mass: Dyadic = triples
        .iter()
        .map(|(len, _, _)| Dyadic::pow2_neg(*len as u64))
        .sum();
    if mass > Dyadic::one() {
        return Err(BridgeError::MassViolation { sum: mass });
    }
    // shortest codewords first, so leftmost assignment never fragments
    triples.sort();
    let codes = kraft_code(triples.iter().map(|(len, _, _)| *len))?;
    let entries = triples
        .into_iter()
        .zip(codes)
        .map(|((_, n, target), codeword)| KcEntry {
            n,
            target,
            codeword,
        })
        .collect();
    Ok(KcDecoder {
        n_max,
        depth,
        entries,
        excluded,
        mass,
    })
}

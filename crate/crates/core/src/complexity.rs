//! Budget-bounded plain complexity `C_t` and prefix complexity `K_t`.
//!
//! A search runs every program up to a length limit, in canonical order, for
//! at most a fixed number of steps. The first program found for an output is
//! therefore a shortest one *within the limits*, and its length is an upper
//! bound on the true complexity. Nothing here claims a lower bound except
//! where every shorter program was proven to diverge.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::bitstr::BitString;
use crate::machine::{programs, BudgetedOutcome, Registry, Universal};
use crate::prefixfree::cover_measure;
use crate::Dyadic;

/// Search limits: step budget per program and maximum program length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Limits {
    pub budget: u64,
    pub len_limit: usize,
}

impl Limits {
    pub fn new(budget: u64, len_limit: usize) -> Self {
        Limits { budget, len_limit }
    }
}

/// An upper bound on `C(b)` or `K(b)` backed by a witness program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityBound {
    pub machine: Universal,
    /// `|witness|`.
    pub value: usize,
    pub witness: BitString,
    /// Steps the witness takes.
    pub steps: u64,
    pub budget: u64,
    pub len_limit: usize,
    /// Every shorter program halted with a different output or was proven to
    /// diverge, so `value` is the exact complexity.
    pub exhaustive: bool,
}

/// Outcome of one program in a sweep.
#[derive(Clone, Debug)]
struct Probe {
    program: BitString,
    halted: Option<(BitString, u64)>,
    uncertain: bool,
}

fn probe_level(reg: &Registry, which: Universal, len: usize, budget: u64) -> Vec<Probe> {
    assert!(len < 40, "program length {len} is beyond exhaustive search");
    (0..1u64 << len)
        .into_par_iter()
        .map(|v| {
            let program = BitString::from_uint(v, len);
            match reg.run_universal(which, &program, budget) {
                BudgetedOutcome::Halted { output, steps } => Probe {
                    program,
                    halted: Some((output, steps)),
                    uncertain: false,
                },
                BudgetedOutcome::Exhausted { divergent, .. } => Probe {
                    program,
                    halted: None,
                    uncertain: !divergent,
                },
            }
        })
        .collect()
}

/// Shortest witness for `b` among programs of length `≤ len_limit`, or
/// `None` if none halts with `b` within the budget.
pub fn search(
    reg: &Registry,
    which: Universal,
    b: &BitString,
    limits: Limits,
) -> Option<ComplexityBound> {
    let mut all_certain = true;
    for len in 0..=limits.len_limit {
        let level = probe_level(reg, which, len, limits.budget);
        let hit = level
            .iter()
            .find(|p| p.halted.as_ref().is_some_and(|(out, _)| out == b));
        if let Some(p) = hit {
            let uncertain_before = level
                .iter()
                .take_while(|q| q.program != p.program)
                .any(|q| q.uncertain);
            return Some(ComplexityBound {
                machine: which,
                value: len,
                witness: p.program.clone(),
                steps: p.halted.as_ref().map_or(0, |(_, s)| *s),
                budget: limits.budget,
                len_limit: limits.len_limit,
                exhaustive: all_certain && !uncertain_before,
            });
        }
        all_certain &= level.iter().all(|q| !q.uncertain);
    }
    None
}

/// `C_t(b)` through `U`.
pub fn plain_c(reg: &Registry, b: &BitString, limits: Limits) -> Option<ComplexityBound> {
    search(reg, Universal::Plain, b, limits)
}

/// `K_t(b)` through `V`.
pub fn prefix_k(reg: &Registry, b: &BitString, limits: Limits) -> Option<ComplexityBound> {
    search(reg, Universal::Prefix, b, limits)
}

/// One program observed to halt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub program: BitString,
    pub steps: u64,
}

/// Every program within the limits, run once. Answers complexity queries for
/// all outputs at the same time.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub machine: Universal,
    pub limits: Limits,
    /// Per output, every halting program of minimal length, in canonical
    /// order.
    shortest: BTreeMap<BitString, Vec<Witness>>,
    /// Length of the shortest program left undecided by the budget.
    first_uncertain: Option<usize>,
    pub programs_run: u64,
    pub halted: u64,
    pub divergent: u64,
}

impl Sweep {
    pub fn run(reg: &Registry, which: Universal, limits: Limits) -> Sweep {
        let mut sweep = Sweep {
            machine: which,
            limits,
            shortest: BTreeMap::new(),
            first_uncertain: None,
            programs_run: 0,
            halted: 0,
            divergent: 0,
        };
        for len in 0..=limits.len_limit {
            for p in probe_level(reg, which, len, limits.budget) {
                sweep.programs_run += 1;
                match p.halted {
                    Some((out, steps)) => {
                        sweep.halted += 1;
                        let entry = sweep.shortest.entry(out).or_default();
                        if entry.first().map_or(true, |w| w.program.len() == len) {
                            entry.push(Witness {
                                program: p.program,
                                steps,
                            });
                        }
                    }
                    None if p.uncertain => {
                        sweep.first_uncertain.get_or_insert(len);
                    }
                    None => sweep.divergent += 1,
                }
            }
        }
        sweep
    }

    pub fn bound(&self, b: &BitString) -> Option<ComplexityBound> {
        let w = self.shortest.get(b)?.first()?;
        let value = w.program.len();
        Some(ComplexityBound {
            machine: self.machine,
            value,
            witness: w.program.clone(),
            steps: w.steps,
            budget: self.limits.budget,
            len_limit: self.limits.len_limit,
            exhaustive: self.first_uncertain.map_or(true, |u| u >= value),
        })
    }

    pub fn value(&self, b: &BitString) -> Option<usize> {
        self.shortest.get(b)?.first().map(|w| w.program.len())
    }

    /// Outputs with their first witness, in canonical order of output.
    pub fn outputs(&self) -> impl Iterator<Item = (&BitString, &Witness)> {
        self.shortest
            .iter()
            .filter_map(|(b, ws)| ws.first().map(|w| (b, w)))
    }

    /// Every program that is minimal-length for its output among the
    /// programs that halted, in canonical order.
    pub fn short_programs(&self) -> Vec<BitString> {
        let mut v: Vec<BitString> = self
            .shortest
            .values()
            .flatten()
            .map(|w| w.program.clone())
            .collect();
        v.sort();
        v
    }
}

/// Count of length-`n` strings with no witness shorter than `n` within the
/// limits. Every such string satisfies `C_t(b) ≥ n`; since `C_t ≥ C` the
/// count is at least the number of truly incompressible strings, which is
/// at least one.
pub fn census_incompressible(reg: &Registry, n: usize, limits: Limits) -> u64 {
    assert!(n < 63, "census length {n} too large");
    let total = 1u64 << n;
    if n == 0 {
        return total;
    }
    let inner = Limits::new(limits.budget, limits.len_limit.min(n - 1));
    let sweep = Sweep::run(reg, Universal::Plain, inner);
    let compressed = sweep.outputs().filter(|(b, _)| b.len() == n).count() as u64;
    total - compressed
}

/// Budget-relative short programs: minimal-length programs per output.
/// Entries can disappear at larger limits.
pub fn budget_short_programs(reg: &Registry, which: Universal, limits: Limits) -> Vec<BitString> {
    Sweep::run(reg, which, limits).short_programs()
}

/// A prefix `x[n]` compressed below `n - k` by the padding construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadWitness {
    pub n: usize,
    /// `|B_p|`: how much of `x` names the length of the tail.
    pub head_len: usize,
    /// `p`: length of the tail.
    pub tail_len: usize,
    /// `C(B_{|b|} ⋆ b) < |b| + k1` realized by the registry.
    pub k1: usize,
    pub bound: ComplexityBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadError {
    #[error("witness needs {needed} bits but the length limit is {len_limit}")]
    LenLimit { needed: usize, len_limit: usize },
    #[error("witness needs {needed} steps but the budget is {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("prefix length {0} overflows the search")]
    TooLong(u128),
    #[error("witness did not reproduce the prefix")]
    Mismatch,
}

/// The concrete `k1` of the padding argument: the witness
/// `10 ⋆ 0 ⋆ b` for `B_{|b|} ⋆ b` has `|b| + k1 - 1` bits.
pub fn pad_k1(reg: &Registry) -> usize {
    let k = reg.constants();
    (k.k_pad + k.m_id + 1) as usize
}

/// Follows the padding construction: take `B_p` to be the first
/// `k1 + k + 1` bits of `x` and `b` the next `p` bits; then
/// `x[n] = B_{|b|} ⋆ b` and `U(10 ⋆ 0 ⋆ b) = x[n]` with `|10 ⋆ 0 ⋆ b| < n - k`.
///
/// `prefix(n)` must return the first `n` bits of the stream.
pub fn pad_witness(
    reg: &Registry,
    prefix: impl Fn(usize) -> BitString,
    k: usize,
    limits: Limits,
) -> Result<PadWitness, PadError> {
    let k1 = pad_k1(reg);
    let head_len = k1 + k + 1;
    if head_len > 120 {
        return Err(PadError::TooLong(head_len as u128));
    }
    let p = prefix(head_len).index_u128();
    let witness_len = (k1 - 1) as u128 + p;
    if witness_len > limits.len_limit as u128 {
        return Err(PadError::LenLimit {
            needed: usize::try_from(witness_len).unwrap_or(usize::MAX),
            len_limit: limits.len_limit,
        });
    }
    let p = p as usize;
    let n = head_len + p;
    let x = prefix(n);
    let tail = x.suffix_from(head_len);
    let witness = programs::plain_pad(&programs::plain_identity(&tail));
    let outcome = reg.universal_run(&witness, limits.budget);
    let steps = match outcome {
        BudgetedOutcome::Halted { output, steps } if output == x => steps,
        BudgetedOutcome::Halted { .. } => return Err(PadError::Mismatch),
        BudgetedOutcome::Exhausted { .. } => {
            let needed = reg
                .universal_run(&witness, u64::MAX)
                .steps()
                .ok_or(PadError::Mismatch)?;
            return Err(PadError::Budget {
                needed,
                budget: limits.budget,
            });
        }
    };
    Ok(PadWitness {
        n,
        head_len,
        tail_len: p,
        k1,
        bound: ComplexityBound {
            machine: Universal::Plain,
            value: witness.len(),
            witness,
            steps,
            budget: limits.budget,
            len_limit: limits.len_limit,
            exhaustive: false,
        },
    })
}

/// The least `m ≤ m_max` such that every string of length `m` has a
/// `k`-compressible proper prefix, i.e. the compressible strings of length
/// `< m` cover the whole space. `bound(d)` supplies `C_t(d)`.
///
/// Compressibility here is relative to `bound`, so the answer is
/// budget-relative.
pub fn horizon_search(
    k: usize,
    m_max: usize,
    bound: impl Fn(&BitString) -> Option<usize>,
) -> Option<usize> {
    let mut compressible: Vec<BitString> = Vec::new();
    for m in 0..=m_max {
        if m > 0 {
            compressible.extend(
                BitString::all_of_len(m - 1).filter(|d| bound(d).is_some_and(|c| c + k <= d.len())),
            );
        }
        if cover_measure(&compressible) == Dyadic::one() {
            return Some(m);
        }
    }
    None
}

/// [`horizon_search`] with `C_t` from a sweep of `U`.
pub fn horizon_search_plain(
    reg: &Registry,
    k: usize,
    m_max: usize,
    limits: Limits,
) -> Option<usize> {
    let sweep = Sweep::run(reg, Universal::Plain, limits);
    horizon_search(k, m_max, |d| sweep.value(d))
}

/// One `(a, b)` row of the subadditivity probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubaddRow {
    pub a: BitString,
    pub b: BitString,
    pub c_a: Option<usize>,
    pub c_b: Option<usize>,
    pub c_ab: Option<usize>,
    pub k_a: Option<usize>,
    pub k_b: Option<usize>,
    /// Best `K_t(a ⋆ b)` from the sweep or the pair witness.
    pub k_ab: Option<usize>,
    /// `1110 ⋆ p_a ⋆ p_b` halted with `a ⋆ b` within the budget.
    pub pair_witness_halted: bool,
}

impl SubaddRow {
    /// `C_t(a⋆b) - C_t(a) - C_t(b)` when all three are known.
    pub fn plain_gap(&self) -> Option<i64> {
        Some(self.c_ab? as i64 - self.c_a? as i64 - self.c_b? as i64)
    }

    /// `Some(true)` when `K_t(a⋆b) ≤ K_t(a) + K_t(b) + k_pair` holds,
    /// `None` when `K_t(a)` or `K_t(b)` is unknown.
    pub fn prefix_holds(&self, k_pair: usize) -> Option<bool> {
        let (ka, kb) = (self.k_a?, self.k_b?);
        Some(self.k_ab.is_some_and(|k| k <= ka + kb + k_pair))
    }
}

#[derive(Clone, Debug)]
pub struct SubaddReport {
    pub n_max: usize,
    pub limits: Limits,
    pub k_pair: usize,
    pub rows: Vec<SubaddRow>,
}

impl SubaddReport {
    /// Observed max of `C_t(a⋆b) - C_t(a) - C_t(b)`; no sign is asserted.
    pub fn max_plain_gap(&self) -> Option<i64> {
        self.rows.iter().filter_map(SubaddRow::plain_gap).max()
    }

    pub fn prefix_checked(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.prefix_holds(self.k_pair).is_some())
            .count()
    }

    pub fn prefix_violations(&self) -> Vec<&SubaddRow> {
        self.rows
            .iter()
            .filter(|r| r.prefix_holds(self.k_pair) == Some(false))
            .collect()
    }
}

/// Tabulates both subadditivity statements over all `|a|, |b| ≤ n_max`.
///
/// `K_t(a ⋆ b)` is the better of the sweep and the pair witness; the pair
/// witness may be longer than `len_limit`, in which case the bound holds at
/// the witness length.
pub fn subadditivity_probe(reg: &Registry, n_max: usize, limits: Limits) -> SubaddReport {
    let plain = Sweep::run(reg, Universal::Plain, limits);
    let prefix = Sweep::run(reg, Universal::Prefix, limits);
    let k_pair = reg.constants().k_pair as usize;
    let strings: Vec<BitString> = BitString::all_up_to(n_max).collect();
    let pairs: Vec<(BitString, BitString)> = strings
        .iter()
        .flat_map(|a| strings.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let rows = pairs
        .into_par_iter()
        .map(|(a, b)| {
            let ab = a.concat(&b);
            let mut k_ab = prefix.value(&ab);
            let mut pair_witness_halted = false;
            if let (Some(pa), Some(pb)) = (prefix.bound(&a), prefix.bound(&b)) {
                let w = programs::prefix_pair(&pa.witness, &pb.witness);
                if reg.prefix_universal_run(&w, limits.budget).output() == Some(&ab) {
                    pair_witness_halted = true;
                    k_ab = Some(k_ab.map_or(w.len(), |k| k.min(w.len())));
                }
            }
            SubaddRow {
                c_a: plain.value(&a),
                c_b: plain.value(&b),
                c_ab: plain.value(&ab),
                k_a: prefix.value(&a),
                k_b: prefix.value(&b),
                k_ab,
                pair_witness_halted,
                a,
                b,
            }
        })
        .collect();
    SubaddReport {
        n_max,
        limits,
        k_pair,
        rows,
    }
}

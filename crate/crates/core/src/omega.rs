//! Lower bounds on the halting probability of `V` and the reconstruction of
//! bounded halting sets from a prefix of it.
//!
//! Only lower bounds are exposed. The value depends on the registry, so
//! every estimate should be reported together with the registry
//! fingerprint.

use crate::bitstr::{BitString, Dyadic};
use crate::machine::{dovetail_domain, DovetailEvent, Registry};
use crate::prefixfree::{kraft_sum, PrefixFreeSet};

/// `Σ 2^{-|p|}` over the programs seen to halt by a given stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaEstimate {
    pub lower_bound: Dyadic,
    pub stage: u64,
    pub len_limit: usize,
    pub halted: PrefixFreeSet,
    /// The halting events in dovetail order.
    pub events: Vec<DovetailEvent>,
}

fn halted_set(events: &[DovetailEvent]) -> PrefixFreeSet {
    PrefixFreeSet::try_from_iter(events.iter().map(|e| e.program.clone()))
        .expect("the domain of V is prefix-free")
}

/// The stage-`stage` lower bound on `Ω`.
pub fn omega_lower_bound(reg: &Registry, stage: u64, len_limit: usize) -> OmegaEstimate {
    let events = dovetail_domain(reg, stage, len_limit);
    let halted = halted_set(&events);
    OmegaEstimate {
        lower_bound: halted.measure(),
        stage,
        len_limit,
        halted,
        events,
    }
}

/// Lower bounds at several stages from a single dovetail run at the largest.
pub fn omega_trajectory(reg: &Registry, stages: &[u64], len_limit: usize) -> Vec<OmegaEstimate> {
    let Some(&top) = stages.iter().max() else {
        return Vec::new();
    };
    let all = dovetail_domain(reg, top, len_limit);
    stages
        .iter()
        .map(|&stage| {
            let events: Vec<DovetailEvent> =
                all.iter().filter(|e| e.stage <= stage).cloned().collect();
            let halted = halted_set(&events);
            OmegaEstimate {
                lower_bound: halted.measure(),
                stage,
                len_limit,
                halted,
                events,
            }
        })
        .collect()
}

/// First stage at which the lower bound exceeds `target`, searching stages
/// up to `stage_limit`.
pub fn stage_reaching(
    reg: &Registry,
    target: &Dyadic,
    stage_limit: u64,
    len_limit: usize,
) -> Option<(u64, Dyadic)> {
    let mut mass = Dyadic::zero();
    for e in dovetail_domain(reg, stage_limit, len_limit) {
        mass += Dyadic::pow2_neg(e.program.len() as u64);
        if &mass > target {
            return Some((e.stage, mass));
        }
    }
    None
}

/// The stage-observed part of `P_n = {b : |b| ≤ n, V(b)↓}`.
pub fn halted_below(reg: &Registry, n: usize, stage: u64, len_limit: usize) -> PrefixFreeSet {
    let events = dovetail_domain(reg, stage, len_limit.min(n));
    halted_set(&events)
}

/// `ψ(a)`: follow the dovetail until the halted programs have mass strictly
/// above the value of `a`, then keep those of length at most `|a|`. `None`
/// when the stage limit comes first.
///
/// When `a` is a prefix of `Ω` taken with a tail of ones, the result is all
/// of `P_{|a|}`.
pub fn psi_reconstruct(
    reg: &Registry,
    a: &BitString,
    stage_limit: u64,
    len_limit: usize,
) -> Option<PrefixFreeSet> {
    let threshold = a.value();
    let mut mass = Dyadic::zero();
    let mut seen: Vec<BitString> = Vec::new();
    for e in dovetail_domain(reg, stage_limit, len_limit) {
        mass += Dyadic::pow2_neg(e.program.len() as u64);
        seen.push(e.program);
        if mass > threshold {
            debug_assert_eq!(mass, kraft_sum(&seen));
            return Some(
                PrefixFreeSet::try_from_iter(seen.into_iter().filter(|b| b.len() <= a.len()))
                    .expect("the domain of V is prefix-free"),
            );
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstr::bs;
    use crate::prefixfree::is_prefix_free;

    const LEN: usize = 16;

    #[test]
    fn early_stages() {
        let reg = Registry::new();
        assert_eq!(omega_lower_bound(&reg, 0, LEN).lower_bound, Dyadic::zero());
        let e = omega_lower_bound(&reg, 3, LEN);
        assert_eq!(e.lower_bound, Dyadic::pow2_neg(1));
        assert!(e.halted.contains(&bs("0")));
    }

    #[test]
    fn monotone_exact_and_bounded() {
        let reg = Registry::new();
        let stages: Vec<u64> = (0..=12).map(|k| 1u64 << k).collect();
        let traj = omega_trajectory(&reg, &stages, LEN);
        for w in traj.windows(2) {
            assert!(w[0].lower_bound <= w[1].lower_bound);
            assert!(w[0].halted.iter().all(|p| w[1].halted.contains(p)));
        }
        for (est, &stage) in traj.iter().zip(&stages) {
            // independent recomputation of the sum from the log
            let mut num = 0u64;
            for ev in &est.events {
                num += 1u64 << (LEN - ev.program.len());
            }
            assert_eq!(est.lower_bound, Dyadic::new(num.into(), LEN as u64));
            assert!(est.lower_bound <= Dyadic::one());
            assert!(is_prefix_free(est.halted.iter()));
            assert_eq!(*est, omega_lower_bound(&reg, stage, LEN));
            for ev in &est.events {
                assert!(reg.prefix_universal_run(&ev.program, stage).is_halted());
            }
        }
        assert!(traj.last().unwrap().lower_bound > Dyadic::zero());
    }

    #[test]
    fn halted_below_members_are_short_and_halt() {
        let reg = Registry::new();
        assert!(halted_below(&reg, 0, 10_000, LEN).is_empty());
        let small = halted_below(&reg, 4, 100, LEN);
        let large = halted_below(&reg, 4, 10_000, LEN);
        assert!(small.iter().all(|p| large.contains(p)));
        for p in large.iter() {
            assert!(p.len() <= 4);
            assert!(reg.prefix_universal_run(p, 10_000).is_halted());
        }
    }

    #[test]
    fn psi_from_empty_prefix() {
        let reg = Registry::new();
        // the first halt is "0", which is longer than ε
        assert_eq!(
            psi_reconstruct(&reg, &bs("-"), 100, LEN),
            Some(PrefixFreeSet::new())
        );
        assert_eq!(psi_reconstruct(&reg, &bs("-"), 2, LEN), None);
        assert_eq!(psi_reconstruct(&reg, &bs("111"), 1000, LEN), None);
    }

    #[test]
    fn psi_consistency() {
        let reg = Registry::new();
        for stage in [0u64, 3, 20, 64, 500, 4096] {
            let mass = omega_lower_bound(&reg, stage, LEN).lower_bound;
            for n in 0..=6 {
                let a = BitString::bits_of(&mass, n).unwrap();
                let expected = halted_below(&reg, n, stage, LEN);
                match psi_reconstruct(&reg, &a, stage, LEN) {
                    Some(got) => assert_eq!(got, expected, "stage {stage}, n {n}"),
                    None => {
                        assert!(mass.is_zero());
                        assert!(expected.is_empty());
                    }
                }
            }
        }
    }
}

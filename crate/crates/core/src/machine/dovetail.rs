use rayon::prelude::*;

use super::{BudgetedOutcome, Registry};
use crate::bitstr::BitString;

/// A program of `V` observed to halt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DovetailEvent {
    pub program: BitString,
    /// `idx(program) + steps`: the antidiagonal on which the halt is seen.
    pub stage: u64,
    pub outcome: BudgetedOutcome,
}

/// Every first halt of `V` on the antidiagonals `idx(p) + s ≤ stage`, over
/// programs of length at most `len_limit`, ordered by `(stage, idx(p))`.
///
/// Program `p` is run once with budget `stage - idx(p)`; by budget
/// monotonicity that is the same as stepping it along each antidiagonal.
pub fn dovetail_domain(reg: &Registry, stage: u64, len_limit: usize) -> Vec<DovetailEvent> {
    let by_len = if len_limit >= 63 {
        u64::MAX
    } else {
        (1u64 << (len_limit + 1)) - 2
    };
    let last = stage.min(by_len);
    let mut events: Vec<DovetailEvent> = (0..=last)
        .into_par_iter()
        .filter_map(|p| {
            let program = BitString::from_index(p);
            match reg.prefix_universal_run(&program, stage - p) {
                outcome @ BudgetedOutcome::Halted { steps, .. } => Some(DovetailEvent {
                    program,
                    stage: p + steps,
                    outcome,
                }),
                BudgetedOutcome::Exhausted { .. } => None,
            }
        })
        .collect();
    events.sort_by(|a, b| {
        a.stage
            .cmp(&b.stage)
            .then_with(|| a.program.cmp(&b.program))
    });
    events
}

//! The prefix guard `P(M)`.
//!
//! All strings are dovetailed by the key `(idx(c) + s_c, idx(c))`, where
//! `s_c` is the number of steps `M` takes on `c`. `P(M)` halts on `a` exactly
//! when `M` halts on `a` and no string comparable with `a` has a smaller key.
//! Keys are distinct, so two comparable strings never both halt.
//!
//! With `K = idx(a) + s_a`, a prefix `c` of `a` beats `a` iff
//! `s_c ≤ K - idx(c)`, and an extension beats it iff `s_c ≤ K - idx(c) - 1`.
//! Extensions of length `|a| + j` have index at least `2^j (idx(a) + 1) - 1`,
//! so only finitely many need checking. Each candidate costs its cap, so the
//! cost of a halting run is a fixed function of `a` and `M`.

use super::{BudgetedOutcome, MachineBehavior, Registry, MAX_GUARDED_LEN};
use crate::bitstr::BitString;

enum Check {
    Continue,
    Stop(BudgetedOutcome),
}

pub(super) fn guarded_run(
    reg: &Registry,
    m: &MachineBehavior,
    a: &BitString,
    budget: u64,
) -> BudgetedOutcome {
    let exhausted = |divergent| BudgetedOutcome::Exhausted { budget, divergent };
    if a.len() > MAX_GUARDED_LEN {
        return exhausted(false);
    }
    let (output, s_a) = match reg.run(m, a, budget) {
        BudgetedOutcome::Halted { output, steps } => (output, steps),
        BudgetedOutcome::Exhausted { divergent, .. } => return exhausted(divergent),
    };
    let n = u128::from(budget);
    let idx_a = a.index_u128();
    let key = idx_a + u128::from(s_a);
    let mut total = u128::from(s_a);

    // Runs candidate `c` allowed `cap` steps before it would lose to `a`.
    let mut check = |c: &BitString, cap: u128| -> Check {
        let remaining = n - total;
        let b = cap.min(remaining) as u64;
        match reg.run(m, c, b) {
            BudgetedOutcome::Halted { .. } => Check::Stop(exhausted(true)),
            BudgetedOutcome::Exhausted { .. } if cap <= remaining => {
                total += cap;
                Check::Continue
            }
            BudgetedOutcome::Exhausted { .. } => Check::Stop(exhausted(false)),
        }
    };

    for i in 0..a.len() {
        let c = a.prefix(i);
        let cap = key - c.index_u128();
        if let Check::Stop(out) = check(&c, cap) {
            return out;
        }
    }

    for j in 1..=u32::MAX {
        let Some(base) = (idx_a + 1).checked_mul(1u128 << j.min(127)).map(|v| v - 1) else {
            break;
        };
        if base + 1 >= key {
            break;
        }
        let width = j as usize;
        let mut t: u128 = 0;
        while width >= 128 || t < (1u128 << width) {
            let idx = base + t;
            if idx + 1 >= key {
                break;
            }
            let mut c = a.clone();
            c.extend_from(&BitString::from_bits(
                (0..width).rev().map(|i| i < 128 && (t >> i) & 1 == 1),
            ));
            if let Check::Stop(out) = check(&c, key - idx - 1) {
                return out;
            }
            t += 1;
        }
    }

    BudgetedOutcome::Halted {
        output,
        steps: total as u64,
    }
}

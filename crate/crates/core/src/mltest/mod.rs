//! Martin-Löf tests in both senses, checked exactly at finite depth.
//!
//! A sense-1 test is a partial level function `t` with
//! `Pr{b : t(b) ≥ m} ≤ 2^{-m}`. To make that condition finite, each test
//! declares a horizon: the depth by which the level-`m` event is settled.
//! A sense-2 test is a family of sets `W_n` with `Pr(O(W_n)) ≤ 2^{-n}`,
//! materialized up to a depth.

mod bridge;
mod score;
mod sense2;
mod universal;

use std::fmt;
use std::sync::Arc;

use crate::bitstr::{BitString, Dyadic};
use crate::prefixfree::{CoverMeasure, PrefixFreeSet};

pub use bridge::{ml_to_kc_decoder, BridgeError, KcDecoder, KcEntry};
pub use score::{score, DeficiencyReport, TestLevel};
pub use sense2::{
    chain, normalize, sense1_to_sense2, sense2_to_sense1, validate_sense2, Sense2Test,
};
pub use universal::{
    compression_family, compression_test, universal_family, universal_parts, universal_test,
    UniversalPart,
};

/// Depth used when a horizon is unknown or exceeds what is asked for.
pub const DEFAULT_DEPTH_CAP: usize = 16;

pub type LevelFn = dyn Fn(&BitString) -> Option<u64> + Send + Sync;

/// Depth by which the level-`m` event is a union of cylinders of strings no
/// longer than it.
#[derive(Clone)]
pub enum Horizon {
    Exact(Arc<dyn Fn(u64) -> usize + Send + Sync>),
    /// No finite depth settles the event; checks run at a depth cap and can
    /// only refute.
    Unsettled,
}

impl fmt::Debug for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Exact(_) => f.write_str("Exact"),
            Horizon::Unsettled => f.write_str("Unsettled"),
        }
    }
}

/// A sense-1 test.
#[derive(Clone)]
pub struct Sense1Test {
    name: String,
    eval: Arc<LevelFn>,
    horizon: Horizon,
}

impl fmt::Debug for Sense1Test {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sense1Test")
            .field("name", &self.name)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl Sense1Test {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&BitString) -> Option<u64> + Send + Sync + 'static,
        horizon: Horizon,
    ) -> Self {
        Sense1Test {
            name: name.into(),
            eval: Arc::new(eval),
            horizon,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, b: &BitString) -> Option<u64> {
        (self.eval)(b)
    }

    pub fn horizon(&self) -> &Horizon {
        &self.horizon
    }

    /// `d(m)`, if the horizon is exact.
    pub fn horizon_at(&self, m: u64) -> Option<usize> {
        match &self.horizon {
            Horizon::Exact(d) => Some(d(m)),
            Horizon::Unsettled => None,
        }
    }
}

fn leading_zeros(b: &BitString) -> Option<u64> {
    Some(b.iter().take_while(|&x| !x).count() as u64)
}

fn even_position_ones(b: &BitString) -> Option<u64> {
    Some(b.iter().step_by(2).take_while(|&x| x).count() as u64)
}

fn zeros_after_111(b: &BitString) -> Option<u64> {
    if b.len() < 3 || b.bits()[..3] != [true, true, true] {
        return None;
    }
    Some(b.iter().skip(3).take_while(|&x| !x).count() as u64)
}

fn count_101(b: &BitString) -> Option<u64> {
    Some(
        b.bits()
            .windows(3)
            .filter(|w| *w == [true, false, true])
            .count() as u64,
    )
}

/// Length of the initial run of zeros; `d(m) = m`.
pub fn leading_zeros_test() -> Sense1Test {
    Sense1Test::new(
        "leading-zeros",
        leading_zeros,
        Horizon::Exact(Arc::new(|m| m as usize)),
    )
}

/// Number of consecutive ones at positions `0, 2, 4, …`; `d(m) = 2m - 1`.
pub fn even_position_ones_test() -> Sense1Test {
    Sense1Test::new(
        "even-ones",
        even_position_ones,
        Horizon::Exact(Arc::new(|m| (2 * m as usize).saturating_sub(1))),
    )
}

/// Zeros following an initial `111`, undefined otherwise; `d(m) = m + 3`.
pub fn zeros_after_111_test() -> Sense1Test {
    Sense1Test::new(
        "zeros-after-111",
        zeros_after_111,
        Horizon::Exact(Arc::new(|m| m as usize + 3)),
    )
}

/// Counts (overlapping) occurrences of `101`. Not a test: almost every real
/// contains `101` infinitely often.
pub fn count101() -> Sense1Test {
    Sense1Test::new("count101", count_101, Horizon::Unsettled)
}

/// The valid built-in tests.
pub fn builtin_tests() -> Vec<Sense1Test> {
    vec![
        leading_zeros_test(),
        even_position_ones_test(),
        zeros_after_111_test(),
    ]
}

/// Registered tests that are expected to fail validation.
pub fn negative_fixtures() -> Vec<Sense1Test> {
    vec![count101()]
}

/// A built-in or negative fixture by name.
pub fn test_by_name(name: &str) -> Option<Sense1Test> {
    builtin_tests()
        .into_iter()
        .chain(negative_fixtures())
        .find(|t| t.name() == name)
}

pub fn test_names() -> Vec<String> {
    builtin_tests()
        .iter()
        .chain(negative_fixtures().iter())
        .map(|t| t.name().to_string())
        .collect()
}

/// The minimal strings of length `≤ depth` with `t(b) ≥ m`: an antichain
/// whose cylinders form the materialized level-`m` event.
pub fn level_set(t: &Sense1Test, m: u64, depth: usize) -> PrefixFreeSet {
    fn walk(t: &Sense1Test, m: u64, depth: usize, b: &mut BitString, out: &mut Vec<BitString>) {
        if t.evaluate(b).is_some_and(|v| v >= m) {
            out.push(b.clone());
            return;
        }
        if b.len() == depth {
            return;
        }
        for bit in [false, true] {
            b.push(bit);
            walk(t, m, depth, b, out);
            b.pop();
        }
    }
    let mut out = Vec::new();
    walk(t, m, depth, &mut BitString::new(), &mut out);
    PrefixFreeSet::try_from_iter(out).expect("walk stops at the first hit on each branch")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Settled at the horizon and within the bound.
    Pass,
    /// The materialized event already exceeds the bound. Sound at any depth,
    /// since deeper materialization only adds mass.
    Violated,
    /// Within the bound at the depth cap, but the horizon is unknown.
    UnsettledPass,
    /// The horizon lies beyond the depth cap.
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Violated => "violated",
            Verdict::UnsettledPass => "unsettled-pass",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelVerdict {
    pub m: u64,
    /// Depth the event was materialized at.
    pub depth: usize,
    pub measure: Option<CoverMeasure>,
    pub bound: Dyadic,
    pub verdict: Verdict,
}

/// Checks `Pr{t ≥ m} ≤ 2^{-m}` exactly for `m = 0..=m_max`.
pub fn validate_sense1(t: &Sense1Test, m_max: u64, depth_cap: usize) -> Vec<LevelVerdict> {
    (0..=m_max)
        .map(|m| {
            let bound = Dyadic::pow2_neg(m);
            let (depth, settled) = match t.horizon_at(m) {
                Some(d) if d <= depth_cap => (d, true),
                Some(_) => {
                    return LevelVerdict {
                        m,
                        depth: depth_cap,
                        measure: None,
                        bound,
                        verdict: Verdict::Indeterminate,
                    }
                }
                None => (depth_cap, false),
            };
            let measure = level_set(t, m, depth).measure();
            let verdict = if measure > bound {
                Verdict::Violated
            } else if settled {
                Verdict::Pass
            } else {
                Verdict::UnsettledPass
            };
            LevelVerdict {
                m,
                depth,
                measure: Some(measure),
                bound,
                verdict,
            }
        })
        .collect()
}

/// The first violated level, if any.
pub fn first_violation(report: &[LevelVerdict]) -> Option<&LevelVerdict> {
    report.iter().find(|v| v.verdict == Verdict::Violated)
}

/// `max{t(x[n])}` over the prefixes of `x` where `t` is defined; 0 if none.
pub fn level_sense1(t: &Sense1Test, x: &BitString) -> u64 {
    x.prefixes()
        .filter_map(|p| t.evaluate(&p))
        .max()
        .unwrap_or(0)
}

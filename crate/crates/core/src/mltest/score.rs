use crate::bitstr::BitString;
use crate::complexity::{Limits, Sweep};
use crate::machine::{Registry, Universal};

use super::sense2::Sense2Test;
use super::{level_sense1, Sense1Test};

/// Level reached by the subject on one test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestLevel {
    pub test: String,
    /// `"sense-1"` or `"sense-2"`.
    pub kind: &'static str,
    pub level: u64,
    /// Materialization depth for sense-2 tests.
    pub depth: Option<usize>,
    /// For sense-2 tests: the level equals the highest level checked.
    pub capped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficiencyReport {
    pub subject: BitString,
    pub levels: Vec<TestLevel>,
    /// `max_n (n - K_t(x[n]))` over the prefixes with a witness within the
    /// limits, with the `n` attaining it. Since `K_t ≥ K` this is a lower
    /// bound on the true value.
    pub compression_deficiency: Option<(i64, usize)>,
    pub limits: Limits,
}

/// Levels of `subject` on each test and its compression deficiency.
///
/// A sense-1 level is exact for the finite subject. A sense-2 level is the
/// largest `n ≤ n_max` whose depth-`depth` cover contains a prefix of it.
pub fn score(
    reg: &Registry,
    subject: &BitString,
    sense1: &[Sense1Test],
    sense2: &[Sense2Test],
    n_max: u64,
    depth: usize,
    limits: Limits,
) -> DeficiencyReport {
    let mut levels: Vec<TestLevel> = sense1
        .iter()
        .map(|t| TestLevel {
            test: t.name().to_string(),
            kind: "sense-1",
            level: level_sense1(t, subject),
            depth: None,
            capped: false,
        })
        .collect();
    for f in sense2 {
        let level = (0..=n_max)
            .rev()
            .find(|&n| f.fails_at(subject, n, depth))
            .unwrap_or(0);
        levels.push(TestLevel {
            test: f.name().to_string(),
            kind: "sense-2",
            level,
            depth: Some(depth),
            capped: level == n_max,
        });
    }
    let inner = Limits::new(limits.budget, limits.len_limit.min(subject.len()));
    let sweep = Sweep::run(reg, Universal::Prefix, inner);
    let compression_deficiency = (0..=subject.len())
        .filter_map(|n| {
            let k = sweep.value(&subject.prefix(n))?;
            Some((n as i64 - k as i64, n))
        })
        .max_by_key(|&(d, n)| (d, std::cmp::Reverse(n)));
    DeficiencyReport {
        subject: subject.clone(),
        levels,
        compression_deficiency,
        limits,
    }
}

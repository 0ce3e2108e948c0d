use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::bitstr::{BitString, Dyadic};
use crate::prefixfree::{minimal_elements, CoverMeasure, PrefixFreeSet};

use super::{Horizon, LevelVerdict, Sense1Test, Verdict};

type EnumerateFn = dyn Fn(u64, usize) -> BTreeSet<BitString> + Send + Sync;

/// A sense-2 test, given by its depth-limited materializations
/// `enumerate(n, d) ⊆ W_n ∩ {b : |b| ≤ d}`.
#[derive(Clone)]
pub struct Sense2Test {
    name: String,
    enumerate: Arc<EnumerateFn>,
}

impl fmt::Debug for Sense2Test {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sense2Test")
            .field("name", &self.name)
            .finish()
    }
}

impl Sense2Test {
    pub fn new(
        name: impl Into<String>,
        enumerate: impl Fn(u64, usize) -> BTreeSet<BitString> + Send + Sync + 'static,
    ) -> Self {
        Sense2Test {
            name: name.into(),
            enumerate: Arc::new(enumerate),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn enumerate(&self, n: u64, depth: usize) -> BTreeSet<BitString> {
        (self.enumerate)(n, depth)
    }

    /// The antichain generating `O(enumerate(n, depth))`.
    pub fn cover(&self, n: u64, depth: usize) -> PrefixFreeSet {
        minimal_elements(&self.enumerate(n, depth))
    }

    pub fn measure(&self, n: u64, depth: usize) -> CoverMeasure {
        self.cover(n, depth).measure()
    }

    /// Whether some prefix of `x` is in the level-`n` materialization.
    pub fn fails_at(&self, x: &BitString, n: u64, depth: usize) -> bool {
        self.cover(n, depth).covers(x)
    }
}

/// `W_0` is the whole space and `W_n = {b : t(b) > n}` otherwise.
pub fn sense1_to_sense2(t: &Sense1Test) -> Sense2Test {
    let t = t.clone();
    Sense2Test::new(format!("{}/sense2", t.name()), move |n, depth| {
        if n == 0 {
            BitString::all_up_to(depth).collect()
        } else {
            BitString::all_up_to(depth)
                .filter(|b| t.evaluate(b).is_some_and(|v| v > n))
                .collect()
        }
    })
}

/// `t(b)` is the largest `i ≤ |b|` such that some prefix of `b` is in level
/// `i + 1` of `f` materialized at depth `|b|`; undefined if there is none.
///
/// `{t ≥ m}` lies in the union of the covers of levels `m + 1, m + 2, …`, so
/// its mass is at most `Σ_{i>m} 2^{-i} = 2^{-m}`. A real failing `f` has
/// unbounded `t` along its prefixes.
pub fn sense2_to_sense1(f: &Sense2Test) -> Sense1Test {
    let f = f.clone();
    let memo: Mutex<HashMap<(u64, usize), PrefixFreeSet>> = Mutex::new(HashMap::new());
    Sense1Test::new(
        format!("{}/sense1", f.name()),
        move |b| {
            let len = b.len();
            let mut memo = memo.lock().expect("memo lock");
            (0..=len as u64).rev().find(|&i| {
                memo.entry((i + 1, len))
                    .or_insert_with(|| f.cover(i + 1, len))
                    .covers(b)
            })
        },
        Horizon::Unsettled,
    )
}

/// The longest canonical-order initial segment of `set` whose cover has
/// mass at most `bound`.
fn truncate_to_mass(set: BTreeSet<BitString>, bound: &Dyadic) -> BTreeSet<BitString> {
    let mut kept = BTreeSet::new();
    let mut minimal: BTreeSet<BitString> = BTreeSet::new();
    let mut mass = Dyadic::zero();
    for b in set {
        // canonical order is length-first, so a later string never has an
        // earlier one as an extension
        let covered = b.prefixes().any(|p| minimal.contains(&p));
        if !covered {
            let next = &mass + &Dyadic::pow2_neg(b.len() as u64);
            if &next > bound {
                break;
            }
            mass = next;
            minimal.insert(b.clone());
        }
        kept.insert(b);
    }
    kept
}

/// Truncates each level to mass `2^{-n}`. The result is always valid and
/// equals `f` wherever `f` already was.
pub fn normalize(f: &Sense2Test) -> Sense2Test {
    let f = f.clone();
    Sense2Test::new(format!("{}/normalized", f.name()), move |n, depth| {
        truncate_to_mass(f.enumerate(n, depth), &Dyadic::pow2_neg(n))
    })
}

/// Generators of `O(a) ∩ O(b)`: the longer string of every comparable pair.
fn meet(a: &PrefixFreeSet, b: &PrefixFreeSet) -> PrefixFreeSet {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if x.is_prefix_of(y) {
                out.push(y.clone());
            } else if y.is_prefix_of(x) {
                out.push(x.clone());
            }
        }
    }
    minimal_elements(&out)
}

/// Level `n` is the intersection of levels `0..=n`, so covers descend.
pub fn chain(f: &Sense2Test) -> Sense2Test {
    let f = f.clone();
    Sense2Test::new(format!("{}/chain", f.name()), move |n, depth| {
        let mut acc = f.cover(0, depth);
        for k in 1..=n {
            if acc.is_empty() {
                break;
            }
            acc = meet(&acc, &f.cover(k, depth));
        }
        acc.into_set()
    })
}

/// Checks `Pr(O(W_n)) ≤ 2^{-n}` on the depth-`depth` materializations. A pass
/// only speaks for this depth.
pub fn validate_sense2(f: &Sense2Test, n_max: u64, depth: usize) -> Vec<LevelVerdict> {
    (0..=n_max)
        .map(|n| {
            let bound = Dyadic::pow2_neg(n);
            let measure = f.measure(n, depth);
            let verdict = if measure > bound {
                Verdict::Violated
            } else {
                Verdict::UnsettledPass
            };
            LevelVerdict {
                m: n,
                depth,
                measure: Some(measure),
                bound,
                verdict,
            }
        })
        .collect()
}

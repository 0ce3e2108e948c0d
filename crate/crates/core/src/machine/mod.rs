//! The computation substrate: a total machine enumeration, the plain
//! universal machine `U`, the prefix guard `P`, the prefix-free universal
//! machine `V`, and the shared dovetailer.
//!
//! # Enumeration
//!
//! Machine indices `0..5` are native behaviors:
//!
//! | index | behavior | input → output | steps |
//! |---|---|---|---|
//! | 0 | identity | `b → b` | 1 |
//! | 1 | pad-decoder | `a → B_{\|b\|} ⋆ b` where `b = U(a)` | `1 + steps(U(a)) + \|output\|` |
//! | 2 | self-delimiting echo | `1^n 0 a → a` when `\|a\| = n` | `\|x\| + 1` |
//! | 3 | pair-decoder | `u ⋆ w → V(u) ⋆ V(w)` | `(\|c\|+1)·max(s_u, s_w) + \|c\| + 1` |
//! | 4 | Kraft-table decoder | codeword → its table entry | `\|x\| + 1` |
//!
//! Index `m ≥ 5` decodes `B_{m-5}` as a [`TmTable`]; malformed tables never
//! halt. The pair-decoder tries every split of its input; each half is run
//! on `V` with budget `(N - |c| - 1) / (|c| + 1)`. Since `V`'s domain is an
//! antichain at most one split can succeed.
//!
//! # Universal machines
//!
//! `U(1^n 0 d) = A(n)(d)` at a cost of `n + 1` extra steps, and
//! `V(1^n 0 a) = P(A(n))(a)` likewise. Inputs without a `0` never halt.

mod dovetail;
mod guard;
pub mod tm;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use sha2::{Digest, Sha256};

use crate::bitstr::BitString;
use crate::prefixfree::{PrefixFreeError, PrefixFreeSet};

pub use dovetail::{dovetail_domain, DovetailEvent};
pub use tm::{Move, Symbol, TmRun, TmTable, Transition};

/// Number of native slots preceding the decoded tables.
pub const NATIVE_SLOTS: u64 = 5;

/// Inputs longer than this are never accepted by a guarded machine: their
/// dovetail keys would not fit the index arithmetic.
pub const MAX_GUARDED_LEN: usize = 120;

/// Version tag of the step-cost model; part of the fingerprint.
const COST_MODEL: &str = "cost-model 1: identity 1; pad 1+s+|out|; echo |x|+1; \
    pair (|c|+1)max(s1,s2)+|c|+1; kraft |x|+1; tm 1/transition; dispatch n+1; \
    guard s+sum(caps), key idx+s";

const TM_FORMAT: &str = "tm-format 1: unary q, w=ceil(log2(q+1)), next w / write 2 / move 1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Native {
    Identity,
    PadDecoder,
    Echo,
    PairDecoder,
    KraftTable,
}

impl Native {
    pub const ALL: [Native; NATIVE_SLOTS as usize] = [
        Native::Identity,
        Native::PadDecoder,
        Native::Echo,
        Native::PairDecoder,
        Native::KraftTable,
    ];

    pub fn slot(self) -> u64 {
        self as u64
    }

    pub fn name(self) -> &'static str {
        match self {
            Native::Identity => "identity",
            Native::PadDecoder => "pad-decoder",
            Native::Echo => "self-delimiting-echo",
            Native::PairDecoder => "pair-decoder",
            Native::KraftTable => "kraft-table-decoder",
        }
    }

    /// The dispatch prefix `1^slot 0` selecting this behavior under `U`/`V`.
    pub fn dispatch(self) -> BitString {
        let mut b = BitString::ones(self.slot() as usize);
        b.push(false);
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MachineBehavior {
    Native(Native),
    Table(Arc<TmTable>),
    /// Never halts.
    Malformed,
    /// `P(M)`.
    Guarded(Box<MachineBehavior>),
}

impl fmt::Display for MachineBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineBehavior::Native(n) => f.write_str(n.name()),
            MachineBehavior::Table(t) => write!(f, "tm[{}]", t.encode()),
            MachineBehavior::Malformed => f.write_str("malformed"),
            MachineBehavior::Guarded(m) => write!(f, "guard({m})"),
        }
    }
}

/// The total enumeration `A`.
pub fn decode_machine(m: u64) -> MachineBehavior {
    if m < NATIVE_SLOTS {
        return MachineBehavior::Native(Native::ALL[m as usize]);
    }
    match TmTable::parse(&BitString::from_index(m - NATIVE_SLOTS)) {
        Some(t) => MachineBehavior::Table(Arc::new(t)),
        None => MachineBehavior::Malformed,
    }
}

/// `P(M)`: on input `a`, halts with `M(a)` only if `a` wins the dovetail
/// among all strings comparable with it.
pub fn prefix_guard(m: MachineBehavior) -> MachineBehavior {
    MachineBehavior::Guarded(Box::new(m))
}

/// The answer a budgeted run can give.
///
/// `divergent` on an exhausted run means the computation was proven never to
/// halt at any budget; `false` only says the budget ran out first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BudgetedOutcome {
    Halted { output: BitString, steps: u64 },
    Exhausted { budget: u64, divergent: bool },
}

impl BudgetedOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, BudgetedOutcome::Halted { .. })
    }

    pub fn is_divergent(&self) -> bool {
        matches!(
            self,
            BudgetedOutcome::Exhausted {
                divergent: true,
                ..
            }
        )
    }

    pub fn output(&self) -> Option<&BitString> {
        match self {
            BudgetedOutcome::Halted { output, .. } => Some(output),
            BudgetedOutcome::Exhausted { .. } => None,
        }
    }

    pub fn steps(&self) -> Option<u64> {
        match self {
            BudgetedOutcome::Halted { steps, .. } => Some(*steps),
            BudgetedOutcome::Exhausted { .. } => None,
        }
    }

    fn exhausted(budget: u64, divergent: bool) -> Self {
        BudgetedOutcome::Exhausted { budget, divergent }
    }
}

/// Which universal machine a program is meant for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Universal {
    /// `U`, plain complexity `C`.
    Plain,
    /// `V`, prefix complexity `K`.
    Prefix,
}

impl Universal {
    pub fn name(self) -> &'static str {
        match self {
            Universal::Plain => "U",
            Universal::Prefix => "V",
        }
    }
}

/// What is known about one universal-machine input. Every field is a fact
/// about the budget-indexed outcome function, so answering from the cache
/// agrees exactly with recomputation.
#[derive(Clone, Debug, Default)]
struct Known {
    halted: Option<(BitString, u64)>,
    /// Least budget observed to prove divergence.
    diverges_from: Option<u64>,
    /// Largest budget observed to end exhausted without proof.
    unknown_upto: Option<u64>,
}

impl Known {
    fn lookup(&self, budget: u64) -> Option<BudgetedOutcome> {
        if let Some((output, steps)) = &self.halted {
            return Some(if budget >= *steps {
                BudgetedOutcome::Halted {
                    output: output.clone(),
                    steps: *steps,
                }
            } else {
                BudgetedOutcome::exhausted(budget, false)
            });
        }
        if self.diverges_from.is_some_and(|d| budget >= d) {
            return Some(BudgetedOutcome::exhausted(budget, true));
        }
        if self.unknown_upto.is_some_and(|u| budget <= u) {
            return Some(BudgetedOutcome::exhausted(budget, false));
        }
        None
    }

    fn record(&mut self, budget: u64, outcome: &BudgetedOutcome) {
        match outcome {
            BudgetedOutcome::Halted { output, steps } => {
                self.halted = Some((output.clone(), *steps));
            }
            BudgetedOutcome::Exhausted {
                divergent: true, ..
            } => {
                self.diverges_from = Some(self.diverges_from.map_or(budget, |d| d.min(budget)));
            }
            BudgetedOutcome::Exhausted {
                divergent: false, ..
            } => {
                self.unknown_upto = Some(self.unknown_upto.map_or(budget, |u| u.max(budget)));
            }
        }
    }
}

/// Concrete values of the constants the theory only asserts to exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegistryConstants {
    /// `C(b) ≤ |b| + m_id` via `U(0 ⋆ b) = b`.
    pub m_id: u64,
    /// `C(f(b)) ≤ C(b) + k_pad` for the padding map `f(b) = B_{|b|} ⋆ b`.
    pub k_pad: u64,
    /// `K(b) ≤ 2|b| + c_echo` via the echo of `1^{|b|} 0 b`.
    pub c_echo: u64,
    /// `K(a ⋆ b) ≤ K(a) + K(b) + k_pair`.
    pub k_pair: u64,
    /// `K(b) ≤ |codeword| + c_kraft` for an installed Kraft table.
    pub c_kraft: u64,
}

impl RegistryConstants {
    fn derive() -> Self {
        let overhead = |n: Native| n.slot() + 1;
        RegistryConstants {
            m_id: overhead(Native::Identity),
            k_pad: overhead(Native::PadDecoder),
            c_echo: overhead(Native::Echo) + 1,
            k_pair: overhead(Native::PairDecoder),
            c_kraft: overhead(Native::KraftTable),
        }
    }

    pub fn as_pairs(&self) -> [(&'static str, u64); 5] {
        [
            ("m_id", self.m_id),
            ("k_pad", self.k_pad),
            ("c_echo", self.c_echo),
            ("k_pair", self.k_pair),
            ("c_kraft", self.c_kraft),
        ]
    }
}

/// Machine registry plus a memo table for universal-machine runs.
///
/// The memo is an optimization only: outcomes are pure functions of
/// (registry, input, budget). It is safe to share a registry between threads.
pub struct Registry {
    kraft: BTreeMap<BitString, BitString>,
    fingerprint: String,
    cache: DashMap<(Universal, BitString), Known>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new()
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kraft_entries", &self.kraft.len())
            .field("fingerprint", &self.fingerprint)
            .finish()
    }
}

impl Registry {
    /// The default registry: empty Kraft table.
    pub fn new() -> Self {
        Registry::build(BTreeMap::new())
    }

    /// A registry whose Kraft-table decoder maps each codeword to its entry.
    /// The codewords must form an antichain.
    pub fn with_kraft_table(
        table: BTreeMap<BitString, BitString>,
    ) -> Result<Self, PrefixFreeError> {
        PrefixFreeSet::try_from_iter(table.keys().cloned())?;
        Ok(Registry::build(table))
    }

    fn build(kraft: BTreeMap<BitString, BitString>) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(Registry::describe(&kraft).as_bytes());
        Registry {
            fingerprint: hex::encode(hasher.finalize()),
            kraft,
            cache: DashMap::new(),
        }
    }

    fn describe(kraft: &BTreeMap<BitString, BitString>) -> String {
        let mut s = String::from("ait registry v1\n");
        for n in Native::ALL {
            s.push_str(&format!("slot {} {}\n", n.slot(), n.name()));
        }
        s.push_str(COST_MODEL);
        s.push('\n');
        s.push_str(TM_FORMAT);
        s.push('\n');
        s.push_str(&format!("kraft-table {} entries\n", kraft.len()));
        for (k, v) in kraft {
            s.push_str(&format!("{k} {v}\n"));
        }
        s
    }

    /// Hex SHA-256 of the canonical registry description.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn kraft_table(&self) -> &BTreeMap<BitString, BitString> {
        &self.kraft
    }

    pub fn constants(&self) -> RegistryConstants {
        RegistryConstants::derive()
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    /// Runs `m` on `input` for at most `budget` steps.
    pub fn run(&self, m: &MachineBehavior, input: &BitString, budget: u64) -> BudgetedOutcome {
        match m {
            MachineBehavior::Native(n) => self.run_native(*n, input, budget),
            MachineBehavior::Table(t) => match t.simulate(input, budget) {
                TmRun::Halted { output, steps } => BudgetedOutcome::Halted { output, steps },
                TmRun::OutOfSteps => BudgetedOutcome::exhausted(budget, false),
            },
            MachineBehavior::Malformed => BudgetedOutcome::exhausted(budget, true),
            MachineBehavior::Guarded(inner) => guard::guarded_run(self, inner, input, budget),
        }
    }

    /// Runs `decode_machine(m)`.
    pub fn run_index(&self, m: u64, input: &BitString, budget: u64) -> BudgetedOutcome {
        self.run(&decode_machine(m), input, budget)
    }

    fn run_native(&self, n: Native, x: &BitString, budget: u64) -> BudgetedOutcome {
        let cost = x.len() as u64 + 1;
        match n {
            Native::Identity => {
                if budget >= 1 {
                    BudgetedOutcome::Halted {
                        output: x.clone(),
                        steps: 1,
                    }
                } else {
                    BudgetedOutcome::exhausted(budget, false)
                }
            }
            Native::Echo => match echo_decode(x) {
                None => BudgetedOutcome::exhausted(budget, true),
                Some(_) if budget < cost => BudgetedOutcome::exhausted(budget, false),
                Some(a) => BudgetedOutcome::Halted {
                    output: a,
                    steps: cost,
                },
            },
            Native::KraftTable => match self.kraft.get(x) {
                None => BudgetedOutcome::exhausted(budget, true),
                Some(_) if budget < cost => BudgetedOutcome::exhausted(budget, false),
                Some(out) => BudgetedOutcome::Halted {
                    output: out.clone(),
                    steps: cost,
                },
            },
            Native::PadDecoder => {
                if budget < 1 {
                    return BudgetedOutcome::exhausted(budget, false);
                }
                match self.universal_run(x, budget - 1) {
                    BudgetedOutcome::Halted { output, steps } => {
                        let padded = pad(&output);
                        let total = 1 + steps + padded.len() as u64;
                        if total <= budget {
                            BudgetedOutcome::Halted {
                                output: padded,
                                steps: total,
                            }
                        } else {
                            BudgetedOutcome::exhausted(budget, false)
                        }
                    }
                    BudgetedOutcome::Exhausted { divergent, .. } => {
                        BudgetedOutcome::exhausted(budget, divergent)
                    }
                }
            }
            Native::PairDecoder => self.run_pair(x, budget),
        }
    }

    fn run_pair(&self, c: &BitString, budget: u64) -> BudgetedOutcome {
        let splits = c.len() as u64 + 1;
        if budget < splits {
            return BudgetedOutcome::exhausted(budget, false);
        }
        let per = (budget - splits) / splits;
        let mut all_dead = true;
        for i in 0..=c.len() {
            let left = self.prefix_universal_run(&c.prefix(i), per);
            if left.is_divergent() {
                continue;
            }
            let right = self.prefix_universal_run(&c.suffix_from(i), per);
            match (left, right) {
                (
                    _,
                    BudgetedOutcome::Exhausted {
                        divergent: true, ..
                    },
                ) => {}
                (
                    BudgetedOutcome::Halted {
                        output: u,
                        steps: s1,
                    },
                    BudgetedOutcome::Halted {
                        output: w,
                        steps: s2,
                    },
                ) => {
                    return BudgetedOutcome::Halted {
                        output: u.concat(&w),
                        steps: splits * s1.max(s2) + splits,
                    };
                }
                _ => all_dead = false,
            }
        }
        BudgetedOutcome::exhausted(budget, all_dead)
    }

    fn cached(
        &self,
        tier: Universal,
        input: &BitString,
        budget: u64,
        compute: impl FnOnce() -> BudgetedOutcome,
    ) -> BudgetedOutcome {
        let key = (tier, input.clone());
        if let Some(hit) = self.cache.get(&key).and_then(|k| k.lookup(budget)) {
            return hit;
        }
        // No lock is held while computing: the computation re-enters the cache.
        let outcome = compute();
        self.cache.entry(key).or_default().record(budget, &outcome);
        outcome
    }

    /// `U(1^n 0 d) = A(n)(d)`, costing `n + 1` steps on top of the simulated
    /// machine.
    pub fn universal_run(&self, input: &BitString, budget: u64) -> BudgetedOutcome {
        self.dispatch(Universal::Plain, input, budget)
    }

    /// `V(1^n 0 a) = P(A(n))(a)`, costing `n + 1` steps on top of the
    /// guarded machine.
    pub fn prefix_universal_run(&self, input: &BitString, budget: u64) -> BudgetedOutcome {
        self.dispatch(Universal::Prefix, input, budget)
    }

    pub fn run_universal(
        &self,
        which: Universal,
        input: &BitString,
        budget: u64,
    ) -> BudgetedOutcome {
        self.dispatch(which, input, budget)
    }

    fn dispatch(&self, tier: Universal, input: &BitString, budget: u64) -> BudgetedOutcome {
        let n = input.leading_ones();
        if n == input.len() {
            return BudgetedOutcome::exhausted(budget, true);
        }
        let overhead = n as u64 + 1;
        self.cached(tier, input, budget, || {
            if budget < overhead {
                return BudgetedOutcome::exhausted(budget, false);
            }
            let m = decode_machine(n as u64);
            let body = input.suffix_from(n + 1);
            let inner = match tier {
                Universal::Plain => self.run(&m, &body, budget - overhead),
                Universal::Prefix => guard::guarded_run(self, &m, &body, budget - overhead),
            };
            match inner {
                BudgetedOutcome::Halted { output, steps } => BudgetedOutcome::Halted {
                    output,
                    steps: steps + overhead,
                },
                BudgetedOutcome::Exhausted { divergent, .. } => {
                    BudgetedOutcome::exhausted(budget, divergent)
                }
            }
        })
    }
}

/// `1^n 0 a` with `|a| = n` decodes to `a`.
fn echo_decode(x: &BitString) -> Option<BitString> {
    let n = x.leading_ones();
    (x.len() == 2 * n + 1).then(|| x.suffix_from(n + 1))
}

/// Example 1's self-delimiting form `1^{|b|} 0 b`.
pub fn self_delimit(b: &BitString) -> BitString {
    let mut out = BitString::ones(b.len());
    out.push(false);
    out.extend_from(b);
    out
}

/// The padding map `f(b) = B_{|b|} ⋆ b`.
pub fn pad(b: &BitString) -> BitString {
    BitString::from_index(b.len() as u64).concat(b)
}

/// Programs realizing the registry constants.
pub mod programs {
    use super::{self_delimit, Native};
    use crate::bitstr::BitString;

    /// `U(0 ⋆ b) = b`.
    pub fn plain_identity(b: &BitString) -> BitString {
        Native::Identity.dispatch().concat(b)
    }

    /// `U(10 ⋆ a) = f(U(a))`.
    pub fn plain_pad(a: &BitString) -> BitString {
        Native::PadDecoder.dispatch().concat(a)
    }

    /// `V(110 ⋆ 1^{|b|} 0 b) = b`.
    pub fn prefix_echo(b: &BitString) -> BitString {
        Native::Echo.dispatch().concat(&self_delimit(b))
    }

    /// `V(1110 ⋆ p ⋆ q) = V(p) ⋆ V(q)`.
    pub fn prefix_pair(p: &BitString, q: &BitString) -> BitString {
        Native::PairDecoder.dispatch().concat(p).concat(q)
    }

    /// `V(11110 ⋆ a)` looks `a` up in the Kraft table.
    pub fn prefix_kraft(codeword: &BitString) -> BitString {
        Native::KraftTable.dispatch().concat(codeword)
    }
}

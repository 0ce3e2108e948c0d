//! Exact, budget-bounded algorithmic information theory.
//!
//! Everything here works on finite binary strings and exact dyadic
//! rationals. Quantities that are uncomputable in general (complexity, the
//! halting probability, test levels) are only ever reported relative to an
//! explicit step budget, length limit or materialization depth.

pub mod bitstr;
pub mod complexity;
pub mod machine;
pub mod mltest;
pub mod omega;
pub mod prefixfree;

pub use bitstr::{bs, BitString, BitStringError, Dyadic};
pub use complexity::{ComplexityBound, Limits};
pub use machine::{
    decode_machine, dovetail_domain, prefix_guard, BudgetedOutcome, DovetailEvent, MachineBehavior,
    Native, Registry, RegistryConstants, Universal,
};
pub use mltest::{Sense1Test, Sense2Test};
pub use omega::OmegaEstimate;
pub use prefixfree::{
    cover_measure, is_prefix_free, kraft_code, kraft_sum, prefix_freeize, CoverMeasure, KraftError,
    PrefixFreeSet,
};

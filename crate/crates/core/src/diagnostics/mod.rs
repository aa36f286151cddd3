//! Sufficient conditions for a unique sender equilibrium payoff, and an
//! aggregator that cross-checks them against the exact payoff interval.

mod genericity;
mod ordered;
mod pubr;
mod verdict;

pub use genericity::{genericity_check, GenericityReport, PhiIndex, PhiValue};
pub use ordered::{ordered_check, Certificate, Ordered, OrderedReport, QuasiCondition, QUASI_SAMPLES};
pub use pubr::{potentially_unique_actions, pubr_at, theorem1_verdict, Theorem1Verdict};
pub use verdict::{
    analyze, global_uniqueness, no_relevant_ties, Evidence, IntervalSummary, UniquenessVerdict, Verdict,
    WinningTest,
};

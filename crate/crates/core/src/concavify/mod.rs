//! Concavification of the sender's value functions: the equilibrium payoff
//! interval `[ŵ(μ₀), v̂(μ₀)]`, its witnesses, and policy evaluation.

mod envelope;
mod figure;
mod policy;
mod witness;

pub use envelope::{
    cav_lower, cav_restricted, cav_upper, cav_upper_obedience, check_persuasion_sufficient, default_delta,
    equilibrium_interval, Engine, LowerEnvelope, PayoffInterval,
};
pub use figure::{emit_figure, figure, Figure, FigureRow, CSV_HEADER};
pub use policy::{evaluate_policy, InformationPolicy, Mixing, TieRule};
pub use witness::{equilibrium_witness, EquilibriumWitness};

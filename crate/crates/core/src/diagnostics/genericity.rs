use super::pubr::phi;
use crate::model::{GameSpec, StateMask};
use crate::rational::{serde_exact, Rational};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

/// An index `(action, state subset)` of the margin functions `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PhiIndex {
    pub action: usize,
    pub states: StateMask,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiValue {
    #[serde(flatten)]
    pub index: PhiIndex,
    #[serde(with = "serde_exact")]
    pub phi: Rational,
}

/// Membership of the receiver's payoffs in the generic set `𝒰_R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    #[serde(rename = "in_U_R")]
    pub in_u_r: bool,
    pub failing_indices: Vec<PhiIndex>,
    /// Every `φ`, ordered by state subset then action.
    pub phi_values: Vec<PhiValue>,
}

impl GenericityReport {
    pub fn phi(&self, action: usize, states: StateMask) -> Option<&Rational> {
        self.phi_values
            .iter()
            .find(|v| v.index.action == action && v.index.states == states)
            .map(|v| &v.phi)
    }
}

/// Evaluates `φ(a, Θ̂)` for every action and nonempty state subset; the
/// receiver's payoffs are generic iff none of them is exactly zero.
pub fn genericity_check(game: &GameSpec) -> GenericityReport {
    let indices: Vec<PhiIndex> = StateMask::nonempty_subsets(game.num_states())
        .flat_map(|states| (0..game.num_actions()).map(move |action| PhiIndex { action, states }))
        .collect();
    let phi_values: Vec<PhiValue> = indices
        .into_par_iter()
        .map(|index| PhiValue {
            phi: phi(game, index.action, index.states),
            index,
        })
        .collect();
    let failing_indices: Vec<PhiIndex> = phi_values.iter().filter(|v| v.phi.is_zero()).map(|v| v.index).collect();
    GenericityReport {
        in_u_r: failing_indices.is_empty(),
        failing_indices,
        phi_values,
    }
}

//! Brute-force cross-checks for the exact engine: grid concavification and
//! seeded random games.

mod grid;
mod random;

pub use grid::{
    brute_force_interval, grid_cav, lipschitz_constant, ApproxInterval, EnvelopeKind, GridSpec, MAX_GRID_POINTS,
};
pub use random::{perturb_receiver, random_game};

//! Exact linear programming, vertex enumeration, the best-response cell
//! decomposition of the belief simplex, and support reduction.

mod cells;
mod support;
mod vertices;

pub use crate::lp::{solve_lp, Bounds, Constraint, LinearProgram, LpSolution, Relation, Sense};
pub use cells::{enumerate_cells, Cell, Generator, GeneratorKind};
pub use support::reduce_support;
pub use vertices::{cell_vertices, polytope_vertices, simplex_region, MAX_BASES};

pub(crate) use cells::{check_mask, enumerate_cells_unchecked, receiver_gap, sender_gap};
pub(crate) use vertices::Halfspaces;

//! Exact integer and rational linear algebra.

pub mod eps;
pub mod fm;
pub mod matrix;
pub mod rat;

pub use eps::EpsRat;
pub use fm::{lp_feasible, Constraint, Relation};
pub use matrix::{det, in_row_span, kernel_basis, rank, rank_rat, solve, solve_left, solve_many, solve_transpose, IntMatrix};
pub use rat::Rat;

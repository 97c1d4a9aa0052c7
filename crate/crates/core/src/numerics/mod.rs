//! Algebraic kernel: linear programming, invariant measures, matrix games.

pub mod game;
pub mod linalg;
pub mod lp;
pub mod markov;

pub use game::{matrix_game, GameSolution};
pub use lp::{
    solve_lp, Constraint, LinearProgram, LpError, LpSolution, Relation, Sense, VarBounds,
};
pub use markov::{balance_residual, invariant_measure};

//! Calibration-based internal-regret minimization for repeated finite games
//! under full and partial monitoring.
//!
//! `geometry`, `numerics` and `calibration` are generic over the scalar type
//! (`f32`/`f64` through [`scalar::Real`]); the aliases below fix `f64`, which
//! is what the game-facing modules use.

#![allow(clippy::needless_range_loop)]

pub mod br_complex;
pub mod calibration;
pub mod game_model;
pub mod geometry;
pub mod harness;
pub mod numerics;
pub mod scalar;
pub mod strategies;

pub type Hyperplane = geometry::Hyperplane<f64>;
pub type Polytope = geometry::Polytope<f64>;
pub type LaguerreDiagram = geometry::LaguerreDiagram<f64>;
pub type Arrangement = geometry::Arrangement<f64>;
pub type CalibrationState = calibration::CalibrationState<f64>;
pub type ComplexCalibration = calibration::ComplexCalibration<f64>;

pub use game_model::FiniteGame;
pub use strategies::{Mode, Strategy, StrategyConfig};

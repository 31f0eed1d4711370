//! Analysis and design of complex-valued linear systems in which the state
//! and input enter together with their complex conjugates:
//!
//! ```text
//! x⁺ = A₁x + A₂^#x^# + B₁u + B₂^#u^#
//! y  = C₁x + C₂^#x^# + D₁u + D₂^#u^#
//! ```
//!
//! The central object is the [`Bimatrix`] `{A₁, A₂}`. On top of its algebra
//! the crate provides state response, structural tests, Lyapunov
//! equations, eigenvalue assignment, LQR through bimatrix Riccati
//! equations, and full-order observers. The `bimatrix` binary exposes the
//! same pipelines over JSON system files.

pub mod analysis;
pub mod bimatrix;
pub mod cli;
pub mod design;
pub mod error;
pub mod io;
pub mod linalg;
pub mod spectrum;
pub mod system;

pub use crate::analysis::{
    analyze, antilinear_lyapunov_reduced, is_asymptotically_stable, is_controllable, is_detectable,
    is_observable, is_stabilizable, solve_lyapunov, state_response, transition_pair, InputSignal,
    RankTest, SimTrace, StructureReport, TransitionPair,
};
pub use crate::bimatrix::{e_matrix, h_matrix, Bimatrix, HermBimatrix};
pub use crate::design::{
    antilinear_lqr_continuous, antilinear_lqr_discrete, assign_eigenvalues, closed_loop, design_observer,
    lqr, lqr_cost, stabilize, CostEstimate, GainBimatrix, LqrSolution, WeightPair,
};
pub use crate::error::{Error, Result};
pub use crate::linalg::{CMatrix, CVector, RMatrix, RVector};
pub use crate::spectrum::SpectrumSet;
pub use crate::system::{from_real_system, CxSystem, LiftedSystem, RealSystem, TimeDomain};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_b1a7;

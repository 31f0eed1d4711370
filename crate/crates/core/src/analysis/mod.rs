//! State response, structural tests and Lyapunov equations.

mod lyapunov;
mod response;
mod structure;

pub use lyapunov::{
    antilinear_lyapunov_reduced, lyapunov_defect, lyapunov_residual, lyapunov_residual_lifted, solve_lyapunov,
    LyapunovSolution, ReducedStein,
};
pub use response::{state_response, transition_pair, uniform_grid, InputSignal, SimTrace, TransitionPair};
pub use structure::{
    analyze, antilinear_controllability_reduced, antilinear_discrete_stabilizability_reduced,
    antilinear_observability_reduced, in_unstable_region, is_asymptotically_stable, is_controllable,
    is_detectable, is_observable, is_stabilizable, reduced_output, RankTest, StructureReport, TestMargins,
    RANK_TOL, STABILITY_TOL,
};

#[cfg(test)]
mod tests;

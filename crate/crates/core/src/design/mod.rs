//! Feedback synthesis: eigenvalue assignment, stabilisation, LQR and
//! full-order observers.

mod lqr;
mod observer;
mod placement;
mod riccati;

use crate::bimatrix::Bimatrix;
use crate::error::Result;
use crate::system::CxSystem;

pub use lqr::{
    antilinear_coupled_residuals, antilinear_lqr_continuous, antilinear_lqr_discrete, are_residuals, lqr, lqr_cost,
    mirrored_spectrum, stabilize, CostEstimate, LqrSolution, WeightPair,
};
pub use observer::{design_observer, observer_error, observer_feedback_loop};
pub use placement::{assign_eigenvalues, assign_eigenvalues_normal, SPECTRUM_TOL};

/// Full state feedback `u = K₁x + K₂^#x^#`, an `m×n` bimatrix.
pub type GainBimatrix = Bimatrix;

/// The closed loop `{A} + {B}{K}` with output `{C} + {D}{K}`; the input
/// matrices are kept so the loop can be driven by an external signal.
pub fn closed_loop(sys: &CxSystem, gain: &GainBimatrix) -> Result<CxSystem> {
    let a = sys.a().checked_add(&sys.b().checked_mul(gain)?)?;
    let c = sys.c().checked_add(&sys.d().checked_mul(gain)?)?;
    CxSystem::new(a, sys.b().clone(), c, sys.d().clone(), sys.domain())
}

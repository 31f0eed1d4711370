//! Optimal regulators for antilinear systems and a cost check by simulation.

use bimatrix::linalg::{cmat, cmat_real, cvec};
use bimatrix::{antilinear_lqr_continuous, antilinear_lqr_discrete, lqr, lqr_cost, CxSystem, HermBimatrix, TimeDomain, WeightPair};

fn main() -> bimatrix::Result<()> {
    let zero = cmat_real(1, 1, &[0.0]);
    let one = cmat_real(1, 1, &[1.0]);

    let sol = antilinear_lqr_continuous(&zero, &one, &HermBimatrix::identity(1), &one)?;
    println!("ẋ = u^#: P = {:.4}, K = {:.4}", sol.p, sol.gain);

    let sol = antilinear_lqr_discrete(&one, &one, &one, &one)?;
    println!("x⁺ = x^# + u^#: P1 = {:.10}, K1 = {:.4}", sol.p.p1()[(0, 0)].re, sol.gain.first()[(0, 0)].re);

    let a2 = cmat(2, 2, &[(0.2, 1.0), (1.0, 0.0), (0.0, 0.0), (0.5, -0.5)]);
    let b2 = cmat_real(2, 1, &[0.0, 1.0]);
    let sys = CxSystem::make_antilinear(a2, b2, cmat_real(2, 2, &[1.0, 0.0, 0.0, 1.0]), None, TimeDomain::Continuous)?;
    let w = WeightPair::identity(2, 1);
    let sol = lqr(&sys, &w)?;
    let x0 = cvec(&[(1.0, 0.0), (0.0, 1.0)]);
    let cost = lqr_cost(&sys, &sol.gain, &w, &x0, 40.0)?;
    println!("residuals {:.1e} / {:.1e}", sol.residual, sol.residual_lifted);
    println!("Jmin = {:.6}, simulated cost = {:.6}", sol.jmin(&x0)?, cost.value);
    Ok(())
}

//! Structural tests and the Lyapunov stability certificate.

use bimatrix::analysis::{antilinear_lyapunov_reduced, reduced_output};
use bimatrix::linalg::{cmat, cmat_real};
use bimatrix::{analyze, solve_lyapunov, Bimatrix, CxSystem, TimeDomain};

fn main() -> bimatrix::Result<()> {
    let a2 = cmat(2, 2, &[(0.5, 0.2), (0.1, 0.0), (0.0, -0.3), (0.4, 0.1)]);
    let c2 = cmat_real(1, 2, &[1.0, 0.0]);
    let sys = CxSystem::make_antilinear(a2.clone(), cmat_real(2, 1, &[0.0, 1.0]), c2.clone(), None, TimeDomain::Discrete)?;

    let report = analyze(&sys)?;
    println!("controllable {}, observable {}, stable {}", report.controllable, report.observable, report.stable);
    println!("spectrum {:.4}", report.spectrum);

    let sol = solve_lyapunov(&sys, &Bimatrix::antilinear(c2.clone()))?;
    println!("P = {:.4}", sol.p);
    println!("positive definite {}, residual {:.1e}", sol.p.is_positive_definite(), sol.residual);

    let reduced = antilinear_lyapunov_reduced(&a2, &reduced_output(&a2, &c2))?;
    println!("reduced P1 agrees: {:.1e}", (sol.p.p1() - &reduced.p).norm());

    let unstable = CxSystem::with_state_output(Bimatrix::antilinear(&a2 * bimatrix::linalg::c(3.0, 0.0)), Bimatrix::zeros(2, 1), TimeDomain::Discrete)?;
    let sol = solve_lyapunov(&unstable, &Bimatrix::identity(2))?;
    println!("after scaling A2 by 3: positive definite {}", sol.p.is_positive_definite());
    Ok(())
}

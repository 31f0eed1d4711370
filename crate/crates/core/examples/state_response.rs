//! Transition pairs and sampled responses in both time domains.

use bimatrix::analysis::uniform_grid;
use bimatrix::linalg::{cmat_real, cvec};
use bimatrix::{io, state_response, transition_pair, CMatrix, CxSystem, InputSignal, TimeDomain};

fn main() -> bimatrix::Result<()> {
    // ẋ = x^#: the real part grows, the imaginary part decays.
    let flip = CxSystem::make_antilinear(cmat_real(1, 1, &[1.0]), CMatrix::zeros(1, 1), CMatrix::identity(1, 1), None, TimeDomain::Continuous)?;
    for t in [0.5, 1.0, 2.0] {
        let tp = transition_pair(&flip, t)?;
        println!("t = {t}: phi1 = {:.6}, phi2 = {:.6}", tp.phi1()[(0, 0)].re, tp.phi2()[(0, 0)].re);
    }
    let grid = uniform_grid(TimeDomain::Continuous, 2.0, 0.5)?;
    let trace = state_response(&flip, &cvec(&[(1.0, 1.0)]), &InputSignal::Zero, &grid)?;
    for (t, x) in trace.times.iter().zip(&trace.states) {
        println!("x({t}) = {:.4}", x[0]);
    }

    let hop = CxSystem::make_antilinear(cmat_real(1, 1, &[0.8]), cmat_real(1, 1, &[1.0]), CMatrix::identity(1, 1), None, TimeDomain::Discrete)?;
    let grid = uniform_grid(TimeDomain::Discrete, 6.0, 1.0)?;
    let u = InputSignal::Constant(cvec(&[(0.0, 0.1)]));
    let trace = state_response(&hop, &cvec(&[(0.0, 1.0)]), &u, &grid)?;
    print!("{}", io::trace_to_csv(&trace));
    Ok(())
}

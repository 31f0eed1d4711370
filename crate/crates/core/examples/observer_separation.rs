//! Observer-based feedback: the closed loop carries both designed spectra.

use bimatrix::analysis::uniform_grid;
use bimatrix::design::observer_feedback_loop;
use bimatrix::linalg::{c, cmat, cmat_real, cvec};
use bimatrix::{assign_eigenvalues, design_observer, state_response, Bimatrix, CxSystem, InputSignal, SpectrumSet, TimeDomain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bimatrix::Result<()> {
    let a = Bimatrix::new(cmat(2, 2, &[(0.0, 0.0), (1.0, 0.0), (0.5, 0.0), (0.0, 0.3)]), cmat(2, 2, &[(0.0, 0.0), (0.0, 0.0), (0.4, 0.0), (0.0, 0.0)]))?;
    let b = Bimatrix::normal(cmat_real(2, 1, &[0.0, 1.0]));
    let cm = Bimatrix::normal(cmat_real(1, 2, &[1.0, 0.0]));
    let sys = CxSystem::new(a, b, cm, Bimatrix::zeros(1, 1), TimeDomain::Continuous)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let control = SpectrumSet::completing_conjugates(vec![c(-1.0, 1.0), c(-1.5, 0.0), c(-2.0, 0.0)])?;
    let estimate = SpectrumSet::completing_conjugates(vec![c(-4.0, 2.0), c(-5.0, 0.0), c(-6.0, 0.0)])?;
    let k = assign_eigenvalues(&sys, &control, &mut rng)?;
    let l = design_observer(&sys, &estimate, &mut rng)?;
    let combined = observer_feedback_loop(&sys, &k, &l)?;
    println!("combined spectrum {:.6}", combined.eigenvalues()?);
    println!("expected          {:.6}", control.union(&estimate));

    let grid = uniform_grid(TimeDomain::Continuous, 4.0, 0.5)?;
    let start = cvec(&[(1.0, 0.5), (0.0, -1.0), (0.0, 0.0), (0.0, 0.0)]);
    let trace = state_response(&combined, &start, &InputSignal::Zero, &grid)?;
    for (t, s) in trace.times.iter().zip(&trace.states) {
        let error = (s.rows(2, 2) - s.rows(0, 2)).norm();
        println!("t = {t:.1}: |x| = {:.2e}, |z - x| = {error:.2e}", s.rows(0, 2).norm());
    }
    Ok(())
}

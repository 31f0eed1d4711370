//! Second-order companion system: normal feedback has one answer, full
//! state feedback on the conjugate pair has a family of them.

use bimatrix::design::assign_eigenvalues_normal;
use bimatrix::linalg::{c, cmat_real};
use bimatrix::{assign_eigenvalues, closed_loop, Bimatrix, CMatrix, CxSystem, SpectrumSet, TimeDomain};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bimatrix::Result<()> {
    let (a0, a1) = (1.0, 2.0);
    let (g0, g1) = (2.0, 3.0);
    let a = cmat_real(2, 2, &[0.0, 1.0, -a0, -a1]);
    let b = cmat_real(2, 1, &[0.0, 1.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let roots = [c(-1.0, 0.0), c(-2.0, 0.0)];
    let k = assign_eigenvalues_normal(&a, &b, &roots, &mut rng)?;
    println!("normal gain K1 = [{:.3}, {:.3}]", k[(0, 0)].re, k[(0, 1)].re);

    let sys = CxSystem::make_normal(a, b, CMatrix::identity(2, 2), None, TimeDomain::Continuous)?;
    let twice = SpectrumSet::new(vec![roots[0], roots[0], roots[1], roots[1]])?;
    let k = assign_eigenvalues(&sys, &twice, &mut rng)?;
    println!("designed {{K1, K2}} = {k:.4}");
    println!("closed loop spectrum {:.6}", closed_loop(&sys, &k)?.eigenvalues()?);

    // Two closed-form gains with the same closed-loop polynomial.
    let j = c(0.0, 1.0);
    let f1 = a0 - g0 - 0.5 * g1 * g1;
    let f2 = g0 + 0.5 * g1 * g1;
    let row = |x: Complex64, y: Complex64| CMatrix::from_row_slice(1, 2, &[x, y]);
    let pairs = [
        (row(f1 - j * (0.5 * g0 * g0 + 0.5), a1 - g1 - j * g0 * g1), row(f2 + j * (0.5 * g0 * g0 - 0.5), g1 + j * g0 * g1)),
        (row(f1 + j * (0.5 * g0 * g0 + 0.5), a1 - g1 + j * g0 * g1), row(-f2 + j * (0.5 * g0 * g0 - 0.5), -g1 + j * g0 * g1)),
    ];
    for (k1, k2) in pairs {
        let k = Bimatrix::new(k1, k2)?;
        let spectrum = closed_loop(&sys, &k)?.eigenvalues()?;
        println!("closed-form pair: polynomial {:?}", spectrum.characteristic_polynomial());
    }
    Ok(())
}

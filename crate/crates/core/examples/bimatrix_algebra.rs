//! Bimatrix arithmetic and its two matrix representations.

use bimatrix::linalg::{c, cmat, cvec};
use bimatrix::{h_matrix, Bimatrix};

fn main() -> bimatrix::Result<()> {
    let a = Bimatrix::new(cmat(2, 2, &[(1.0, 0.0), (0.0, 1.0), (0.0, 0.0), (2.0, 0.0)]), cmat(2, 2, &[(0.0, 1.0), (0.0, 0.0), (1.0, 0.0), (0.0, -1.0)]))?;
    let b = Bimatrix::antilinear(cmat(2, 2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]));

    let x = cvec(&[(1.0, 1.0), (0.0, -1.0)]);
    println!("{{A}}x = {}", a.apply(&x)?.transpose());
    println!("conjugation {{0, I}}x = {}", b.apply(&x)?.transpose());

    let ab = &a * &b;
    println!("{{A}}{{B}} = {ab:.3}");
    let gap = (ab.real_representation() - a.real_representation() * b.real_representation()).norm();
    println!("|(AB)_R - A_R B_R| = {gap:.1e}");

    let lifted = h_matrix(2) * a.real_representation().map(|v| c(v, 0.0)) * h_matrix(2).adjoint();
    println!("|H A_R H^H - lifting| = {:.1e}", (lifted - a.complex_lifting()).norm());

    let inv = a.inverse()?;
    println!("|A A^-1 - I| = {:.1e}", (&(&a * &inv) - &Bimatrix::identity(2)).frobenius_norm());
    println!("eigenvalues: {:.4}", a.eigenvalues()?);
    Ok(())
}

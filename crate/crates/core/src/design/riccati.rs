//! Algebraic Riccati equations on real matrices.

use crate::error::{Error, Result};
use crate::linalg::{self, RMatrix};

pub(crate) const NEWTON_MAX_ITER: usize = 100;
pub(crate) const FIXED_POINT_MAX_ITER: usize = 10_000;
/// Relative residual the solvers are expected to reach.
#[cfg(test)]
pub(crate) const TARGET_RESIDUAL: f64 = 1e-10;
/// Largest relative residual still accepted when an iteration stalls.
pub(crate) const ACCEPT_RESIDUAL: f64 = 1e-8;

/// Stabilising solution of a real ARE and the matching gain (`u = Kx`).
#[derive(Clone, Debug)]
pub(crate) struct RealAre {
    pub p: RMatrix,
    pub k: RMatrix,
    pub iterations: usize,
    pub residual: f64,
}

fn inverse(m: &RMatrix, what: &'static str) -> Result<RMatrix> {
    let rc = linalg::rcond(m);
    if rc < 1e-14 {
        return Err(Error::Singular(what, rc));
    }
    m.clone().try_inverse().ok_or(Error::Singular(what, rc))
}

/// Relative residual of `AᵀP + PA - PBR⁻¹BᵀP + Q = 0`.
pub(crate) fn care_residual(a: &RMatrix, b: &RMatrix, q: &RMatrix, r: &RMatrix, p: &RMatrix) -> Result<f64> {
    let rinv = inverse(r, "R")?;
    let lin = a.transpose() * p + p * a;
    let quad = p * b * &rinv * b.transpose() * p;
    let res = &lin - &quad + q;
    Ok(res.norm() / (q.norm() + lin.norm() + quad.norm()).max(f64::MIN_POSITIVE))
}

/// Relative residual of `AᵀPA - P - AᵀPB(R + BᵀPB)⁻¹BᵀPA + Q = 0`.
pub(crate) fn dare_residual(a: &RMatrix, b: &RMatrix, q: &RMatrix, r: &RMatrix, p: &RMatrix) -> Result<f64> {
    let s = r + b.transpose() * p * b;
    let sinv = inverse(&s, "R + BᵀPB")?;
    let apa = a.transpose() * p * a;
    let quad = a.transpose() * p * b * sinv * b.transpose() * p * a;
    let res = &apa - p - &quad + q;
    Ok(res.norm() / (q.norm() + apa.norm() + p.norm() + quad.norm()).max(f64::MIN_POSITIVE))
}

/// Newton–Kleinman iteration from a stabilising gain `k0`.
pub(crate) fn care_newton(a: &RMatrix, b: &RMatrix, q: &RMatrix, r: &RMatrix, k0: RMatrix) -> Result<RealAre> {
    let rinv = inverse(r, "R")?;
    let mut k = k0;
    let mut best: Option<RealAre> = None;
    for it in 1..=NEWTON_MAX_ITER {
        let ak = a + b * &k;
        let w = q + k.transpose() * r * &k;
        let p = linalg::symmetrize(&linalg::solve_continuous_lyapunov(&ak, &w)?);
        if !p.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("Newton iterate is not finite".into()));
        }
        k = -(&rinv * b.transpose() * &p);
        let residual = care_residual(a, b, q, r, &p)?;
        let improved = best.as_ref().is_none_or(|bst| residual < 0.5 * bst.residual);
        if best.as_ref().is_none_or(|bst| residual < bst.residual) {
            best = Some(RealAre { p, k: k.clone(), iterations: it, residual });
        }
        // Quadratic convergence: keep polishing while the residual still halves.
        if !improved && residual <= ACCEPT_RESIDUAL {
            break;
        }
    }
    let best = best.expect("at least one iteration");
    if best.residual > ACCEPT_RESIDUAL {
        return Err(Error::NoConvergence {
            method: "Newton-Kleinman",
            iterations: NEWTON_MAX_ITER,
            residual: best.residual,
        });
    }
    Ok(best)
}

/// Stabilising CARE solution from the matrix sign function of the
/// Hamiltonian `[[A, -BR⁻¹Bᵀ], [-Q, -Aᵀ]]`.
pub(crate) fn care_sign(a: &RMatrix, b: &RMatrix, q: &RMatrix, r: &RMatrix) -> Result<RMatrix> {
    let n = a.nrows();
    let g = b * inverse(r, "R")? * b.transpose();
    let mut z = RMatrix::zeros(2 * n, 2 * n);
    z.view_mut((0, 0), (n, n)).copy_from(a);
    z.view_mut((0, n), (n, n)).copy_from(&-g);
    z.view_mut((n, 0), (n, n)).copy_from(&-q);
    z.view_mut((n, n), (n, n)).copy_from(&-a.transpose());
    let mut converged = false;
    for _ in 0..100 {
        let lu = z.clone().lu();
        let det = lu.determinant();
        let zinv = lu.try_inverse().ok_or(Error::Singular("Hamiltonian sign iterate", 0.0))?;
        let c = if det.is_finite() && det != 0.0 { det.abs().powf(-1.0 / (2 * n) as f64) } else { 1.0 };
        let next = (&z * c + zinv / c) * 0.5;
        let step = (&next - &z).norm() / next.norm();
        z = next;
        if step <= 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { method: "Hamiltonian sign function", iterations: 100, residual: f64::NAN });
    }
    let id = RMatrix::identity(n, n);
    let mut lhs = RMatrix::zeros(2 * n, n);
    lhs.view_mut((0, 0), (n, n)).copy_from(&z.view((0, n), (n, n)));
    lhs.view_mut((n, 0), (n, n)).copy_from(&(z.view((n, n), (n, n)) + &id));
    let mut rhs = RMatrix::zeros(2 * n, n);
    rhs.view_mut((0, 0), (n, n)).copy_from(&-(z.view((0, 0), (n, n)) + &id));
    rhs.view_mut((n, 0), (n, n)).copy_from(&-z.view((n, 0), (n, n)));
    let p = lhs.svd(true, true).solve(&rhs, 1e-14).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(linalg::symmetrize(&p))
}

/// Fixed-point Riccati iteration `P ← AᵀPA - AᵀPB(R + BᵀPB)⁻¹BᵀPA + Q`
/// from `P = Q`.
pub(crate) fn dare_fixed_point(a: &RMatrix, b: &RMatrix, q: &RMatrix, r: &RMatrix) -> Result<RealAre> {
    let mut p = q.clone();
    for it in 1..=FIXED_POINT_MAX_ITER {
        let s = r + b.transpose() * &p * b;
        let sinv = inverse(&s, "R + BᵀPB")?;
        let pb = &p * b;
        let next = linalg::symmetrize(
            &(a.transpose() * &p * a - a.transpose() * &pb * &sinv * pb.transpose() * a + q),
        );
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("Riccati iterate is not finite".into()));
        }
        let step = (&next - &p).norm() / next.norm().max(f64::MIN_POSITIVE);
        p = next;
        if step <= 1e-13 {
            let k = dare_gain(a, b, r, &p)?;
            let residual = dare_residual(a, b, q, r, &p)?;
            return Ok(RealAre { p, k, iterations: it, residual });
        }
    }
    Err(Error::NoConvergence {
        method: "discrete Riccati iteration",
        iterations: FIXED_POINT_MAX_ITER,
        residual: dare_residual(a, b, q, r, &p)?,
    })
}

pub(crate) fn care_gain(b: &RMatrix, r: &RMatrix, p: &RMatrix) -> Result<RMatrix> {
    Ok(-(inverse(r, "R")? * b.transpose() * p))
}

pub(crate) fn dare_gain(a: &RMatrix, b: &RMatrix, r: &RMatrix, p: &RMatrix) -> Result<RMatrix> {
    let s = r + b.transpose() * p * b;
    Ok(-(inverse(&s, "R + BᵀPB")? * b.transpose() * p * a))
}

use num_complex::Complex64;

use crate::bimatrix::{Bimatrix, HermBimatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, conj, CMatrix};
use crate::system::{CxSystem, TimeDomain};

use super::structure::is_observable;

/// Relative distance from singularity below which the Lyapunov operator is
/// rejected.
const OPERATOR_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovSolution {
    pub p: HermBimatrix,
    /// Whether `({A}, {C})` is observable; the stability equivalence only
    /// holds when it is.
    pub observable: bool,
    /// Relative residual of the bimatrix equation.
    pub residual: f64,
}

fn check_operator(values: &[Complex64], domain: TimeDomain) -> Result<()> {
    let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i..] {
            let gap = match domain {
                TimeDomain::Continuous => (a + b).norm() / scale,
                TimeDomain::Discrete => (Complex64::new(1.0, 0.0) - a * b).norm() / (scale * scale),
            };
            if gap < OPERATOR_TOL {
                let why = match domain {
                    TimeDomain::Continuous => format!("eigenvalues {a} and {b} sum to zero"),
                    TimeDomain::Discrete => format!("eigenvalues {a} and {b} multiply to one"),
                };
                return Err(Error::NoUniqueSolution(why));
            }
        }
    }
    Ok(())
}

/// `{A}^H{P} + {P}{A} + {C}^H{C}` (continuous) or
/// `{A}^H{P}{A} - {P} + {C}^H{C}` (discrete), in bimatrix arithmetic.
pub fn lyapunov_defect(sys: &CxSystem, c: &Bimatrix, p: &Bimatrix) -> Result<Bimatrix> {
    let a = sys.a();
    let ah = a.conj_transpose();
    let chc = c.conj_transpose().checked_mul(c)?;
    let lhs = match sys.domain() {
        TimeDomain::Continuous => ah.checked_mul(p)?.checked_add(&p.checked_mul(a)?)?,
        TimeDomain::Discrete => ah.checked_mul(p)?.checked_mul(a)?.checked_sub(p)?,
    };
    lhs.checked_add(&chc)
}

fn relative_to(defect_norm: f64, c: &Bimatrix) -> Result<f64> {
    let chc = c.conj_transpose().checked_mul(c)?.frobenius_norm();
    Ok(if chc > 0.0 { defect_norm / chc } else { defect_norm })
}

/// Relative residual of the bimatrix Lyapunov equation.
pub fn lyapunov_residual(sys: &CxSystem, c: &Bimatrix, p: &Bimatrix) -> Result<f64> {
    relative_to(lyapunov_defect(sys, c, p)?.frobenius_norm(), c)
}

/// Relative residual of the lifted equation with `P_C = {P₁,P₂}_⋄`.
pub fn lyapunov_residual_lifted(sys: &CxSystem, c: &Bimatrix, p: &Bimatrix) -> Result<f64> {
    let al = sys.a().complex_lifting();
    let cl = c.complex_lifting();
    let pc = p.complex_lifting();
    let chc = cl.adjoint() * &cl;
    let defect = match sys.domain() {
        TimeDomain::Continuous => al.adjoint() * &pc + &pc * &al + &chc,
        TimeDomain::Discrete => al.adjoint() * &pc * &al - &pc + &chc,
    };
    let scale = chc.norm();
    Ok(if scale > 0.0 { defect.norm() / scale } else { defect.norm() })
}

/// Solves the Lyapunov bimatrix equation
/// `{A}^H{P} + {P}{A} = -{C}^H{C}` (continuous) or
/// `{A}^H{P}{A} - {P} = -{C}^H{C}` (discrete)
/// through the real representation, `A_Rᵀ P_R + P_R A_R = -C_Rᵀ C_R`.
pub fn solve_lyapunov(sys: &CxSystem, c: &Bimatrix) -> Result<LyapunovSolution> {
    if c.ncols() != sys.n() {
        return Err(Error::dims("Lyapunov output bimatrix columns", sys.n(), c.ncols()));
    }
    let ar = sys.a().real_representation();
    let cr = c.real_representation();
    check_operator(&linalg::real_eigenvalues(&ar)?, sys.domain())?;
    let w = cr.transpose() * &cr;
    let pr = match sys.domain() {
        TimeDomain::Continuous => linalg::solve_continuous_lyapunov(&ar, &w)?,
        TimeDomain::Discrete => linalg::solve_discrete_lyapunov(&ar, &w)?,
    };
    let p = HermBimatrix::from_real_symmetric(&pr)?;
    let residual = lyapunov_residual(sys, c, p.as_bimatrix())?;
    let observable = is_observable(&sys.with_output(c.clone(), Bimatrix::zeros(c.nrows(), sys.m()))?)?.holds;
    Ok(LyapunovSolution { p, observable, residual })
}

/// Solution of the reduced Stein equation of a discrete antilinear system.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedStein {
    pub p: CMatrix,
    /// A positive definite solution exists only for stable systems.
    pub positive_definite: bool,
}

/// Solves `(A₂^#A₂)^H P (A₂^#A₂) - P = -C_N^H C_N` for a discrete
/// antilinear system.
///
/// With `C_N = [C₂; C₂^#A₂]` the solution coincides with `P₁` of the full
/// Lyapunov bimatrix equation for output `{0, C₂}`.
pub fn antilinear_lyapunov_reduced(a2: &CMatrix, c_n: &CMatrix) -> Result<ReducedStein> {
    let n = a2.nrows();
    if a2.ncols() != n {
        return Err(Error::dims("A2", "square", format!("{:?}", a2.shape())));
    }
    if c_n.ncols() != n {
        return Err(Error::dims("C_N columns", n, c_n.ncols()));
    }
    let na = conj(a2) * a2;
    let values = linalg::complex_eigenvalues(&na)?;
    let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for &a in &values {
        for &b in &values {
            if (Complex64::new(1.0, 0.0) - a.conj() * b).norm() / (scale * scale) < OPERATOR_TOL {
                return Err(Error::NoUniqueSolution(format!("eigenvalues {a} and {b} of A2^# A2 pair to one")));
            }
        }
    }
    // vec(N^H P N) = (N^T ⊗ N^H) vec(P)
    let op = na.transpose().kronecker(&na.adjoint()) - CMatrix::identity(n * n, n * n);
    let w = c_n.adjoint() * c_n;
    let rhs = -crate::CVector::from_column_slice(w.as_slice());
    let sol = op.lu().solve(&rhs).ok_or(Error::Singular("reduced Stein operator", 0.0))?;
    let p = CMatrix::from_column_slice(n, n, sol.as_slice());
    let p = (&p + p.adjoint()) * Complex64::new(0.5, 0.0);
    let positive_definite = {
        let herm = HermBimatrix::new(p.clone(), CMatrix::zeros(n, n));
        herm.map(|h| h.is_positive_definite()).unwrap_or(false)
    };
    Ok(ReducedStein { p, positive_definite })
}

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{self, conj, CMatrix};
use crate::spectrum::SpectrumSet;
use crate::system::{CxSystem, TimeDomain};

/// Relative smallest-singular-value floor for PBH rank decisions.
pub const RANK_TOL: f64 = 1e-8;
/// Margin separating the open stability region from its boundary.
pub const STABILITY_TOL: f64 = 1e-9;

/// Outcome of a rank test together with its smallest relative singular
/// value (`+inf` when no point had to be tested).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankTest {
    pub holds: bool,
    pub margin: f64,
}

impl RankTest {
    fn from_margin(margin: f64) -> Self {
        RankTest { holds: margin > RANK_TOL, margin }
    }
}

/// Whether `s` lies in the closed instability region (right half-plane or
/// exterior of the unit disk).
pub fn in_unstable_region(s: Complex64, domain: TimeDomain) -> bool {
    match domain {
        TimeDomain::Continuous => s.re >= -STABILITY_TOL,
        TimeDomain::Discrete => s.norm() >= 1.0 - STABILITY_TOL,
    }
}

fn shifted(a: &CMatrix, s: Complex64) -> CMatrix {
    CMatrix::identity(a.nrows(), a.ncols()) * s - a
}

/// Smallest relative σ_min of `[sI - A | B]` over the given points.
fn pbh_margin(a: &CMatrix, b: &CMatrix, points: &[Complex64]) -> f64 {
    let n = a.nrows();
    let mut joint = CMatrix::zeros(n, n + b.ncols());
    joint.view_mut((0, 0), (n, n)).copy_from(a);
    joint.view_mut((0, n), (n, b.ncols())).copy_from(b);
    let scale = linalg::spectral_norm(&joint).max(f64::MIN_POSITIVE);
    let mut worst = f64::INFINITY;
    for &s in points {
        let mut pencil = CMatrix::zeros(n, n + b.ncols());
        pencil.view_mut((0, 0), (n, n)).copy_from(&shifted(a, s));
        pencil.view_mut((0, n), (n, b.ncols())).copy_from(b);
        // n-th singular value: full row rank iff it is nonzero
        let sv = linalg::singular_values(&pencil);
        let sigma = sv.get(n - 1).copied().unwrap_or(0.0);
        worst = worst.min(sigma / scale);
    }
    worst
}

fn eigen_points(sys: &CxSystem, restrict: Option<TimeDomain>) -> Result<Vec<Complex64>> {
    let spectrum = sys.eigenvalues()?;
    Ok(spectrum.iter().copied().filter(|&s| restrict.is_none_or(|d| in_unstable_region(s, d))).collect())
}

fn controllability(sys: &CxSystem, restrict: Option<TimeDomain>) -> Result<RankTest> {
    if sys.n() == 0 {
        return Ok(RankTest { holds: true, margin: f64::INFINITY });
    }
    let lifted = sys.to_complex_lifting();
    let points = eigen_points(sys, restrict)?;
    Ok(RankTest::from_margin(pbh_margin(&lifted.a, &lifted.b, &points)))
}

fn observability(sys: &CxSystem, restrict: Option<TimeDomain>) -> Result<RankTest> {
    if sys.n() == 0 {
        return Ok(RankTest { holds: true, margin: f64::INFINITY });
    }
    let lifted = sys.to_complex_lifting();
    // [sI - A; C] has full column rank iff [s̄I - A^H | C^H] has full row rank.
    let points: Vec<Complex64> = eigen_points(sys, restrict)?.into_iter().map(|s| s.conj()).collect();
    Ok(RankTest::from_margin(pbh_margin(&lifted.a.adjoint(), &lifted.c.adjoint(), &points)))
}

/// PBH test on the lifted pair at every eigenvalue of the lifted `A`.
pub fn is_controllable(sys: &CxSystem) -> Result<RankTest> {
    controllability(sys, None)
}

/// Dual PBH test on `[sI - A_L; C_L]`.
pub fn is_observable(sys: &CxSystem) -> Result<RankTest> {
    observability(sys, None)
}

/// PBH test restricted to eigenvalues in the closed instability region.
pub fn is_stabilizable(sys: &CxSystem) -> Result<RankTest> {
    controllability(sys, Some(sys.domain()))
}

pub fn is_detectable(sys: &CxSystem) -> Result<RankTest> {
    observability(sys, Some(sys.domain()))
}

pub fn is_asymptotically_stable(sys: &CxSystem) -> Result<bool> {
    Ok(sys.eigenvalues()?.is_stable(sys.domain(), STABILITY_TOL))
}

fn normal_pbh(a: &CMatrix, b: &CMatrix, restrict: Option<TimeDomain>) -> Result<RankTest> {
    let points: Vec<Complex64> = linalg::complex_eigenvalues(a)?
        .into_iter()
        .filter(|&s| restrict.is_none_or(|d| in_unstable_region(s, d)))
        .collect();
    Ok(RankTest::from_margin(pbh_margin(a, b, &points)))
}

/// Controllability of an antilinear system through the `n`-dimensional
/// pair `(A₂^#A₂, [B₂^#, A₂^#B₂])`.
pub fn antilinear_controllability_reduced(a2: &CMatrix, b2: &CMatrix) -> Result<RankTest> {
    let a2c = conj(a2);
    let n = a2.nrows();
    let mut b = CMatrix::zeros(n, 2 * b2.ncols());
    b.view_mut((0, 0), (n, b2.ncols())).copy_from(&conj(b2));
    b.view_mut((0, b2.ncols()), (n, b2.ncols())).copy_from(&(&a2c * b2));
    normal_pbh(&(&a2c * a2), &b, None)
}

/// Observability of an antilinear system through
/// `rank[sI - A₂^#A₂; C₂; C₂^#A₂] = n`.
pub fn antilinear_observability_reduced(a2: &CMatrix, c2: &CMatrix) -> Result<RankTest> {
    let cn = reduced_output(a2, c2);
    let na = conj(a2) * a2;
    let points: Vec<Complex64> = linalg::complex_eigenvalues(&na)?.into_iter().map(|s| s.conj()).collect();
    Ok(RankTest::from_margin(pbh_margin(&na.adjoint(), &cn.adjoint(), &points)))
}

/// Stabilizability of a discrete antilinear system:
/// `rank[λI - A₂A₂^#, B₂, A₂B₂^#] = n` for `|λ| ≥ 1`.
pub fn antilinear_discrete_stabilizability_reduced(a2: &CMatrix, b2: &CMatrix) -> Result<RankTest> {
    let n = a2.nrows();
    let mut b = CMatrix::zeros(n, 2 * b2.ncols());
    b.view_mut((0, 0), (n, b2.ncols())).copy_from(b2);
    b.view_mut((0, b2.ncols()), (n, b2.ncols())).copy_from(&(a2 * conj(b2)));
    normal_pbh(&(a2 * conj(a2)), &b, Some(TimeDomain::Discrete))
}

/// `C_N = [C₂; C₂^#A₂]`.
pub fn reduced_output(a2: &CMatrix, c2: &CMatrix) -> CMatrix {
    let (p, n) = c2.shape();
    let mut cn = CMatrix::zeros(2 * p, n);
    cn.view_mut((0, 0), (p, n)).copy_from(c2);
    cn.view_mut((p, 0), (p, n)).copy_from(&(conj(c2) * a2));
    cn
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestMargins {
    pub controllability: f64,
    pub observability: f64,
    pub stabilizability: f64,
    pub detectability: f64,
}

/// Every structural property of a system at once.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub controllable: bool,
    pub observable: bool,
    pub stabilizable: bool,
    pub detectable: bool,
    pub stable: bool,
    pub spectrum: SpectrumSet,
    pub margins: TestMargins,
}

pub fn analyze(sys: &CxSystem) -> Result<StructureReport> {
    let ctrb = is_controllable(sys)?;
    let obsv = is_observable(sys)?;
    let stab = is_stabilizable(sys)?;
    let det = is_detectable(sys)?;
    Ok(StructureReport {
        controllable: ctrb.holds,
        observable: obsv.holds,
        // PBH margins only shrink when the tested set grows.
        stabilizable: stab.holds || ctrb.holds,
        detectable: det.holds || obsv.holds,
        stable: is_asymptotically_stable(sys)?,
        spectrum: sys.eigenvalues()?,
        margins: TestMargins {
            controllability: ctrb.margin,
            observability: obsv.margin,
            stabilizability: stab.margin,
            detectability: det.margin,
        },
    })
}

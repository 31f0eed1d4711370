use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{self, is_controllable, is_stabilizable, STABILITY_TOL};
use crate::bimatrix::{Bimatrix, HermBimatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, conj, CMatrix, CVector, RMatrix, RVector};
use crate::spectrum::SpectrumSet;
use crate::system::{CxSystem, TimeDomain};
use crate::DEFAULT_SEED;

use super::placement::place_real;
use super::riccati::{self, RealAre};
use super::{closed_loop, GainBimatrix};

/// Positive definite weights `{Q₁,Q₂}` (state) and `{R₁,R₂}` (input) of
/// `J = Σ/∫ Re(x^H{Q}x + u^H{R}u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPair {
    q: HermBimatrix,
    r: HermBimatrix,
}

impl WeightPair {
    pub fn new(q: HermBimatrix, r: HermBimatrix) -> Result<Self> {
        if !q.is_positive_definite() {
            return Err(Error::IndefiniteWeight("Q"));
        }
        if !r.is_positive_definite() {
            return Err(Error::IndefiniteWeight("R"));
        }
        Ok(WeightPair { q, r })
    }

    /// `Q = {I_n, 0}`, `R = {I_m, 0}`.
    pub fn identity(n: usize, m: usize) -> Self {
        WeightPair { q: HermBimatrix::identity(n), r: HermBimatrix::identity(m) }
    }

    pub fn q(&self) -> &HermBimatrix {
        &self.q
    }

    pub fn r(&self) -> &HermBimatrix {
        &self.r
    }

    fn check(&self, sys: &CxSystem) -> Result<()> {
        if self.q.order() != sys.n() {
            return Err(Error::dims("state weight Q", sys.n(), self.q.order()));
        }
        if self.r.order() != sys.m() {
            return Err(Error::dims("input weight R", sys.m(), self.r.order()));
        }
        Ok(())
    }
}

/// Optimal regulator: Riccati solution `{P₁,P₂}`, gain `{K₁*,K₂*}` and
/// verification data.
#[derive(Clone, Debug, PartialEq)]
pub struct LqrSolution {
    pub p: HermBimatrix,
    pub gain: GainBimatrix,
    /// Relative residual of the bimatrix ARE.
    pub residual: f64,
    /// Relative residual of the lifted ARE.
    pub residual_lifted: f64,
    pub iterations: usize,
}

impl LqrSolution {
    /// Optimal cost `Re(x₀^H{P}x₀)` from the initial state `x₀`.
    pub fn jmin(&self, x0: &CVector) -> Result<f64> {
        self.p.quadratic_form_real(x0)
    }
}

/// Simulated cost of a feedback law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostEstimate {
    pub value: f64,
    /// False when the closed loop is not asymptotically stable; the value is
    /// then a partial sum of a diverging cost.
    pub converged: bool,
}

/// Relative residuals of the bimatrix ARE (bimatrix arithmetic) and of its
/// lifted matrix form.
pub fn are_residuals(sys: &CxSystem, w: &WeightPair, p: &HermBimatrix) -> Result<(f64, f64)> {
    let a = sys.a();
    let b = sys.b();
    let q = w.q.as_bimatrix();
    let r = w.r.as_bimatrix();
    let pb = p.as_bimatrix();
    let ah = a.conj_transpose();
    let bh = b.conj_transpose();

    let (res, scale) = match sys.domain() {
        TimeDomain::Continuous => {
            let lin = &(&ah * pb) + &(pb * a);
            let quad = &(&(pb * b) * &r.inverse()?) * &(&bh * pb);
            let scale = q.frobenius_norm() + lin.frobenius_norm() + quad.frobenius_norm();
            (&(&lin - &quad) + q, scale)
        }
        TimeDomain::Discrete => {
            let s = r + &(&(&bh * pb) * b);
            let apa = &(&ah * pb) * a;
            let quad = &(&(&(&ah * pb) * b) * &s.inverse()?) * &(&(&bh * pb) * a);
            let scale = q.frobenius_norm() + apa.frobenius_norm() + pb.frobenius_norm() + quad.frobenius_norm();
            (&(&(&apa - pb) - &quad) + q, scale)
        }
    };
    let bimatrix_res = res.frobenius_norm() / scale.max(f64::MIN_POSITIVE);

    let al = a.complex_lifting();
    let bl = b.complex_lifting();
    let ql = q.complex_lifting();
    let rl = r.complex_lifting();
    let pl = pb.complex_lifting();
    let rl_inv = |m: CMatrix| m.try_inverse().ok_or(Error::Singular("lifted weight", 0.0));
    let (res, scale) = match sys.domain() {
        TimeDomain::Continuous => {
            let lin = al.adjoint() * &pl + &pl * &al;
            let quad = &pl * &bl * rl_inv(rl)? * bl.adjoint() * &pl;
            let scale = ql.norm() + lin.norm() + quad.norm();
            (lin - &quad + &ql, scale)
        }
        TimeDomain::Discrete => {
            let s = &rl + bl.adjoint() * &pl * &bl;
            let apa = al.adjoint() * &pl * &al;
            let quad = al.adjoint() * &pl * &bl * rl_inv(s)? * bl.adjoint() * &pl * &al;
            let scale = ql.norm() + apa.norm() + pl.norm() + quad.norm();
            (apa - &pl - &quad + &ql, scale)
        }
    };
    Ok((bimatrix_res, res.norm() / scale.max(f64::MIN_POSITIVE)))
}

/// Stabilising real gain used to start Newton–Kleinman: zero for Hurwitz
/// `A`, placement at the mirrored spectrum for controllable pairs.
fn newton_seed(sys: &CxSystem, ar: &RMatrix, br: &RMatrix) -> Result<Option<RMatrix>> {
    let spectrum = sys.eigenvalues()?;
    if spectrum.is_stable(TimeDomain::Continuous, STABILITY_TOL) {
        return Ok(Some(RMatrix::zeros(br.ncols(), ar.nrows())));
    }
    if !is_controllable(sys)?.holds {
        return Ok(None);
    }
    let target = mirrored_spectrum(&spectrum, TimeDomain::Continuous);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    Ok(place_real(ar, br, &target, &mut rng).ok())
}

/// Reflects eigenvalues outside the stability region back into it:
/// across the imaginary axis (continuous) or by inverting the modulus
/// (discrete). Values on or near the boundary are pushed a fixed distance
/// inside.
pub fn mirrored_spectrum(spectrum: &SpectrumSet, domain: TimeDomain) -> SpectrumSet {
    let values = spectrum
        .iter()
        .map(|&s| match domain {
            TimeDomain::Continuous if analysis::in_unstable_region(s, domain) => {
                num_complex::Complex64::new(-s.re.abs().max(0.1 * s.norm().max(1.0)), s.im)
            }
            TimeDomain::Discrete if analysis::in_unstable_region(s, domain) => {
                let r = s.norm();
                s / r * (1.0 / r).min(0.9)
            }
            _ => s,
        })
        .collect();
    SpectrumSet::new(values).expect("mirroring preserves conjugate closure")
}

fn solve_real(sys: &CxSystem, w: &WeightPair) -> Result<RealAre> {
    let ar = sys.a().real_representation();
    let br = sys.b().real_representation();
    let qr = linalg::symmetrize(&w.q.as_bimatrix().real_representation());
    let rr = linalg::symmetrize(&w.r.as_bimatrix().real_representation());
    match sys.domain() {
        TimeDomain::Discrete => riccati::dare_fixed_point(&ar, &br, &qr, &rr),
        TimeDomain::Continuous => {
            let seeded = match newton_seed(sys, &ar, &br)? {
                Some(k0) => riccati::care_newton(&ar, &br, &qr, &rr, k0).ok(),
                None => None,
            };
            let stabilizing = |sol: &RealAre| {
                linalg::real_eigenvalues(&(&ar + &br * &sol.k))
                    .map(|eig| eig.iter().all(|z| z.re < -STABILITY_TOL))
                    .unwrap_or(false)
            };
            match seeded {
                Some(sol) if stabilizing(&sol) => Ok(sol),
                _ => {
                    let p = riccati::care_sign(&ar, &br, &qr, &rr)?;
                    let k0 = riccati::care_gain(&br, &rr, &p)?;
                    riccati::care_newton(&ar, &br, &qr, &rr, k0)
                }
            }
        }
    }
}

/// Linear quadratic regulator through the bimatrix algebraic Riccati
/// equation
///
/// ```text
/// continuous: {A}^H{P} + {P}{A} - {P}{B}{R}⁻¹{B}^H{P} + {Q} = 0
/// discrete:   {A}^H{P}{A} - {P} - {A}^H{P}{B}{S}⁻¹{B}^H{P}{A} + {Q} = 0,
///             {S} = {R} + {B}^H{P}{B}
/// ```
///
/// solved on the real representation. The optimal control is
/// `u = K₁*x + K₂*^#x^#`.
pub fn lqr(sys: &CxSystem, w: &WeightPair) -> Result<LqrSolution> {
    w.check(sys)?;
    let stab = is_stabilizable(sys)?;
    if !stab.holds {
        return Err(Error::NotStabilizable(stab.margin));
    }
    let sol = solve_real(sys, w)?;
    let p = HermBimatrix::from_real_symmetric(&sol.p)?;
    let gain = Bimatrix::from_real_representation(&sol.k)?;
    let (residual, residual_lifted) = are_residuals(sys, w, &p)?;
    if !p.is_positive_definite() {
        return Err(Error::Numerical("Riccati solution is not positive definite".into()));
    }
    if !analysis::is_asymptotically_stable(&closed_loop(sys, &gain)?)? {
        return Err(Error::Numerical("Riccati gain does not stabilise the closed loop".into()));
    }
    Ok(LqrSolution { p, gain, residual, residual_lifted, iterations: sol.iterations })
}

/// A stabilising gain: LQR with identity weights, falling back to
/// placement of the mirrored spectrum.
pub fn stabilize(sys: &CxSystem) -> Result<GainBimatrix> {
    let stab = is_stabilizable(sys)?;
    if !stab.holds {
        return Err(Error::NotStabilizable(stab.margin));
    }
    match lqr(sys, &WeightPair::identity(sys.n(), sys.m())) {
        Ok(sol) => Ok(sol.gain),
        Err(e) if e.is_infeasible() => Err(e),
        Err(e) => {
            let target = mirrored_spectrum(&sys.eigenvalues()?, sys.domain());
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
            super::assign_eigenvalues(sys, &target, &mut rng).map_err(|_| e)
        }
    }
}

/// Largest admissible number of continuous integration steps.
const MAX_COST_STEPS: usize = 2_000_000;

/// Accumulates `Re(x^H{Q}x + u^H{R}u)` along the closed loop under
/// `u = K₁x + K₂^#x^#` up to `horizon`: plain summation in discrete time,
/// composite trapezoid on a fine grid in continuous time.
pub fn lqr_cost(sys: &CxSystem, gain: &GainBimatrix, w: &WeightPair, x0: &CVector, horizon: f64) -> Result<CostEstimate> {
    w.check(sys)?;
    if x0.len() != sys.n() {
        return Err(Error::dims("initial state", sys.n(), x0.len()));
    }
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::InvalidInput(format!("horizon must be finite and nonnegative, got {horizon}")));
    }
    let cl = closed_loop(sys, gain)?;
    let converged = analysis::is_asymptotically_stable(&cl)?;
    // Re(x^H{Q}x + u^H{R}u) = x⃗ᵀ(Q_R + K_Rᵀ R_R K_R)x⃗
    let kr = gain.real_representation();
    let weight = w.q.as_bimatrix().real_representation() + kr.transpose() * w.r.as_bimatrix().real_representation() * &kr;
    let stage = |x: &RVector| x.dot(&(&weight * x));
    let mut x = linalg::arrow(x0);
    let value = match sys.domain() {
        TimeDomain::Discrete => {
            let ar = cl.a().real_representation();
            let mut total = 0.0;
            for _ in 0..=(horizon.floor() as usize) {
                total += stage(&x);
                x = &ar * &x;
            }
            total
        }
        TimeDomain::Continuous => {
            let ar = cl.a().real_representation();
            let rate = linalg::real_spectral_norm(&ar).max(1e-12);
            let steps = ((horizon * rate / 0.01).ceil() as usize).clamp(1, MAX_COST_STEPS);
            let h = horizon / steps as f64;
            if h == 0.0 {
                return Ok(CostEstimate { value: 0.0, converged });
            }
            let step = linalg::expm(&(&ar * h));
            let mut prev = stage(&x);
            let mut total = 0.0;
            for _ in 0..steps {
                x = &step * &x;
                let next = stage(&x);
                total += 0.5 * h * (prev + next);
                prev = next;
            }
            total
        }
    };
    Ok(CostEstimate { value, converged })
}

fn hermitian_pd(m: &CMatrix, what: &'static str) -> Result<()> {
    let herm = HermBimatrix::new(m.clone(), CMatrix::zeros(m.nrows(), m.ncols()))
        .map_err(|_| Error::IndefiniteWeight(what))?;
    if !herm.is_positive_definite() {
        return Err(Error::IndefiniteWeight(what));
    }
    Ok(())
}

fn square_inverse(m: &CMatrix, what: &'static str) -> Result<CMatrix> {
    let rc = linalg::complex_rcond(m);
    if rc < 1e-14 {
        return Err(Error::Singular(what, rc));
    }
    m.clone().try_inverse().ok_or(Error::Singular(what, rc))
}

/// Discrete antilinear LQR through the anti-ARE
///
/// ```text
/// P = Q₁ + A₂^H P^# A₂ - A₂^H P^# B₂ (R₁ + B₂^H P^# B₂)⁻¹ B₂^H P^# A₂
/// ```
///
/// by fixed-point iteration from `P = Q₁`. The optimal feedback is normal:
/// `K₁* = -(R₁ + B₂^H P₁^# B₂)⁻¹ B₂^H P₁^# A₂`, `K₂* = 0`, and `P₂ = 0`.
pub fn antilinear_lqr_discrete(a2: &CMatrix, b2: &CMatrix, q1: &CMatrix, r1: &CMatrix) -> Result<LqrSolution> {
    let n = a2.nrows();
    let m = b2.ncols();
    if a2.ncols() != n || b2.nrows() != n {
        return Err(Error::dims("antilinear pair", format!("{n}x{n}, {n}x{m}"), format!("{:?}, {:?}", a2.shape(), b2.shape())));
    }
    if q1.shape() != (n, n) {
        return Err(Error::dims("Q1", format!("{n}x{n}"), format!("{:?}", q1.shape())));
    }
    if r1.shape() != (m, m) {
        return Err(Error::dims("R1", format!("{m}x{m}"), format!("{:?}", r1.shape())));
    }
    hermitian_pd(q1, "Q1")?;
    hermitian_pd(r1, "R1")?;
    let stab = analysis::antilinear_discrete_stabilizability_reduced(a2, b2)?;
    if !stab.holds {
        return Err(Error::NotStabilizable(stab.margin));
    }

    let a2h = a2.adjoint();
    let b2h = b2.adjoint();
    let mut p = q1.clone();
    let mut iterations = 0;
    let mut converged = false;
    let mut step = f64::INFINITY;
    while iterations < riccati::FIXED_POINT_MAX_ITER {
        iterations += 1;
        let pc = conj(&p);
        let s = r1 + &b2h * &pc * b2;
        let sinv = square_inverse(&s, "R1 + B2^H P^# B2")?;
        let next = q1 + &a2h * &pc * a2 - &a2h * &pc * b2 * sinv * &b2h * &pc * a2;
        let next = (&next + next.adjoint()) * linalg::c(0.5, 0.0);
        step = (&next - &p).norm() / next.norm().max(f64::MIN_POSITIVE);
        p = next;
        if step <= 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { method: "anti-ARE iteration", iterations, residual: step });
    }
    let pc = conj(&p);
    let s = r1 + &b2h * &pc * b2;
    let k1 = -(square_inverse(&s, "R1 + B2^H P^# B2")? * &b2h * &pc * a2);

    let sys = CxSystem::make_antilinear(a2.clone(), b2.clone(), CMatrix::identity(n, n), None, TimeDomain::Discrete)?;
    let w = WeightPair::new(HermBimatrix::new(q1.clone(), CMatrix::zeros(n, n))?, HermBimatrix::new(r1.clone(), CMatrix::zeros(m, m))?)?;
    let p = HermBimatrix::new(p, CMatrix::zeros(n, n))?;
    let gain = Bimatrix::new(k1, CMatrix::zeros(m, n))?;
    let (residual, residual_lifted) = are_residuals(&sys, &w, &p)?;
    Ok(LqrSolution { p, gain, residual, residual_lifted, iterations })
}

/// Residuals of the two coupled equations satisfied by `{P₁,P₂}` for a
/// continuous antilinear system with `R = {R₁, 0}`:
///
/// ```text
/// -Q₁ = A₂^H P₂ + P₂^# A₂ - P₁ B₂^# R₁^{-#} B₂^T P₁ - P₂^# B₂ R₁⁻¹ B₂^H P₂
/// -Q₂ = A₂^T P₁ + P₁^# A₂ - P₁^# B₂ R₁⁻¹ B₂^H P₂ - P₂ B₂^# R₁^{-#} B₂^T P₁
/// ```
pub fn antilinear_coupled_residuals(
    a2: &CMatrix,
    b2: &CMatrix,
    q: &HermBimatrix,
    r1: &CMatrix,
    p: &HermBimatrix,
) -> Result<(f64, f64)> {
    let (p1, p2) = (p.p1(), p.p2());
    let (q1, q2) = (q.p1(), q.p2());
    let r1inv = square_inverse(r1, "R1")?;
    let g_conj = conj(b2) * conj(&r1inv) * b2.transpose();
    let g = b2 * &r1inv * b2.adjoint();
    let lin1 = a2.adjoint() * p2 + conj(p2) * a2;
    let quad1 = p1 * &g_conj * p1 + conj(p2) * &g * p2;
    let lin2 = a2.transpose() * p1 + conj(p1) * a2;
    let quad2 = conj(p1) * &g * p2 + p2 * &g_conj * p1;
    let e1 = (&lin1 - &quad1 + q1).norm() / (q1.norm() + lin1.norm() + quad1.norm()).max(f64::MIN_POSITIVE);
    let e2 = (&lin2 - &quad2 + q2).norm() / (q2.norm() + lin2.norm() + quad2.norm()).max(f64::MIN_POSITIVE);
    Ok((e1, e2))
}

/// Continuous antilinear LQR. Solves the general bimatrix ARE with
/// `A₁ = B₁ = 0` and `R₂ = 0`, checks the coupled equations, and returns
/// the gains `K₁* = -R₁⁻¹B₂^H P₂`, `K₂* = -R₁^{-#}B₂^T P₁`.
pub fn antilinear_lqr_continuous(a2: &CMatrix, b2: &CMatrix, q: &HermBimatrix, r1: &CMatrix) -> Result<LqrSolution> {
    let n = a2.nrows();
    let m = b2.ncols();
    let sys = CxSystem::make_antilinear(a2.clone(), b2.clone(), CMatrix::identity(n, n), None, TimeDomain::Continuous)?;
    hermitian_pd(r1, "R1")?;
    let ctrb = is_controllable(&sys)?;
    if !ctrb.holds {
        return Err(Error::Uncontrollable(ctrb.margin));
    }
    let w = WeightPair::new(q.clone(), HermBimatrix::new(r1.clone(), CMatrix::zeros(m, m))?)?;
    let mut sol = lqr(&sys, &w)?;

    let (e1, e2) = antilinear_coupled_residuals(a2, b2, q, r1, &sol.p)?;
    if e1.max(e2) > riccati::ACCEPT_RESIDUAL {
        return Err(Error::Numerical(format!("coupled Riccati residuals {e1:.3e}, {e2:.3e}")));
    }
    let r1inv = square_inverse(r1, "R1")?;
    let k1 = -(&r1inv * b2.adjoint() * sol.p.p2());
    let k2 = -(conj(&r1inv) * b2.transpose() * sol.p.p1());
    let formula = Bimatrix::new(k1, k2)?;
    let gap = (&formula - &sol.gain).frobenius_norm();
    if gap > 1e-8 * sol.gain.frobenius_norm().max(1.0) {
        return Err(Error::Numerical(format!("gain formulas disagree by {gap:.3e}")));
    }
    sol.gain = formula;
    Ok(sol)
}

use super::*;
use crate::bimatrix::Bimatrix;
use crate::linalg::{c, cmat, cmat_real, cvec, CMatrix};
use crate::system::{CxSystem, TimeDomain};

fn antilinear_scalar(a2: (f64, f64), domain: TimeDomain) -> CxSystem {
    CxSystem::make_antilinear(cmat(1, 1, &[a2]), cmat(1, 1, &[(0.0, 0.0)]), cmat(1, 1, &[(1.0, 0.0)]), None, domain)
        .unwrap()
}

#[test]
fn transition_at_zero_is_identity() {
    let sys = antilinear_scalar((1.0, 0.0), TimeDomain::Continuous);
    assert_eq!(transition_pair(&sys, 0.0).unwrap().phi, Bimatrix::identity(1));
}

#[test]
fn antilinear_transition_is_cosh_sinh() {
    let sys = antilinear_scalar((1.0, 0.0), TimeDomain::Continuous);
    for t in [0.3, 1.0, 2.5] {
        let tp = transition_pair(&sys, t).unwrap();
        assert!((tp.phi1()[(0, 0)] - c(t.cosh(), 0.0)).norm() < 1e-12 * t.cosh());
        assert!((tp.phi2()[(0, 0)] - c(t.sinh(), 0.0)).norm() < 1e-12 * t.cosh());
    }
}

#[test]
fn antilinear_odd_power() {
    let a2 = cmat(2, 2, &[(0.3, 0.1), (0.0, -0.5), (0.2, 0.2), (-0.4, 0.0)]);
    let sys = CxSystem::make_antilinear(a2.clone(), CMatrix::zeros(2, 1), CMatrix::identity(2, 2), None, TimeDomain::Discrete)
        .unwrap();
    let tp = transition_pair(&sys, 3.0).unwrap();
    let expected = &a2 * (crate::linalg::conj(&a2) * &a2);
    assert!(tp.phi1().norm() < 1e-15);
    assert!((tp.phi2() - expected).norm() < 1e-14);
    assert!(transition_pair(&sys, 2.0).unwrap().phi2().norm() < 1e-15);
}

#[test]
fn negative_discrete_time_uses_inverse() {
    let sys = CxSystem::make_normal(cmat_real(1, 1, &[2.0]), CMatrix::zeros(1, 1), CMatrix::identity(1, 1), None, TimeDomain::Discrete)
        .unwrap();
    let tp = transition_pair(&sys, -2.0).unwrap();
    assert!((tp.phi1()[(0, 0)] - c(0.25, 0.0)).norm() < 1e-15);
    let singular = antilinear_scalar((0.0, 0.0), TimeDomain::Discrete);
    assert!(transition_pair(&singular, -1.0).is_err());
}

#[test]
fn antilinear_free_response() {
    let sys = antilinear_scalar((1.0, 0.0), TimeDomain::Continuous);
    let grid = uniform_grid(TimeDomain::Continuous, 2.0, 0.1).unwrap();
    let down = state_response(&sys, &cvec(&[(0.0, 1.0)]), &InputSignal::Zero, &grid).unwrap();
    let up = state_response(&sys, &cvec(&[(1.0, 0.0)]), &InputSignal::Zero, &grid).unwrap();
    for (k, &t) in grid.iter().enumerate() {
        assert!((down.states[k][0] - c(0.0, (-t).exp())).norm() < 1e-12);
        assert!((up.states[k][0] - c(t.exp(), 0.0)).norm() < 1e-11 * t.exp());
    }
}

#[test]
fn response_rejects_bad_grids() {
    let sys = antilinear_scalar((0.5, 0.0), TimeDomain::Discrete);
    let x0 = cvec(&[(1.0, 0.0)]);
    assert!(state_response(&sys, &x0, &InputSignal::Zero, &[]).is_err());
    assert!(state_response(&sys, &x0, &InputSignal::Zero, &[0.0, 0.5]).is_err());
    assert!(state_response(&sys, &cvec(&[(1.0, 0.0), (0.0, 0.0)]), &InputSignal::Zero, &[0.0]).is_err());
}

fn companion_example(alpha0: f64, alpha1: f64) -> CxSystem {
    CxSystem::make_normal(
        cmat_real(2, 2, &[0.0, 1.0, -alpha0, -alpha1]),
        cmat_real(2, 1, &[0.0, 1.0]),
        CMatrix::identity(2, 2),
        None,
        TimeDomain::Continuous,
    )
    .unwrap()
}

#[test]
fn companion_pair_is_controllable() {
    assert!(is_controllable(&companion_example(2.0, 3.0)).unwrap().holds);
}

#[test]
fn zero_input_is_uncontrollable() {
    let sys = CxSystem::make_normal(cmat_real(1, 1, &[1.0]), CMatrix::zeros(1, 1), CMatrix::identity(1, 1), None, TimeDomain::Continuous)
        .unwrap();
    assert!(!is_controllable(&sys).unwrap().holds);
    assert!(is_observable(&sys).unwrap().holds);
}

#[test]
fn stable_zero_input_is_stabilizable() {
    let sys = CxSystem::make_normal(cmat_real(1, 1, &[-1.0]), CMatrix::zeros(1, 1), CMatrix::identity(1, 1), None, TimeDomain::Continuous)
        .unwrap();
    assert!(is_stabilizable(&sys).unwrap().holds);
    assert!(is_asymptotically_stable(&sys).unwrap());
}

#[test]
fn discrete_antilinear_stability() {
    assert!(is_asymptotically_stable(&antilinear_scalar((0.0, 0.5), TimeDomain::Discrete)).unwrap());
    assert!(!is_asymptotically_stable(&antilinear_scalar((0.0, 1.5), TimeDomain::Discrete)).unwrap());
    assert!(!is_asymptotically_stable(&antilinear_scalar((-0.3, 0.2), TimeDomain::Continuous)).unwrap());
}

#[test]
fn normal_scalar_lyapunov() {
    let sys = CxSystem::make_normal(cmat_real(1, 1, &[-1.0]), CMatrix::zeros(1, 1), CMatrix::identity(1, 1), None, TimeDomain::Continuous)
        .unwrap();
    let sol = solve_lyapunov(&sys, &Bimatrix::identity(1)).unwrap();
    assert!((sol.p.p1()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-14);
    assert!(sol.p.p2().norm() < 1e-14);
    assert!(sol.observable);
}

#[test]
fn antilinear_lyapunov_and_reduced_form() {
    let sys = antilinear_scalar((0.5, 0.0), TimeDomain::Discrete);
    let cb = Bimatrix::antilinear(cmat_real(1, 1, &[1.0]));
    let sol = solve_lyapunov(&sys, &cb).unwrap();
    assert!((sol.p.p1()[(0, 0)] - c(4.0 / 3.0, 0.0)).norm() < 1e-13);
    assert!(sol.p.p2().norm() < 1e-13);
    assert!(sol.residual < 1e-12);

    let a2 = cmat_real(1, 1, &[0.5]);
    let cn = reduced_output(&a2, &cmat_real(1, 1, &[1.0]));
    assert_eq!(cn, cmat_real(2, 1, &[1.0, 0.5]));
    let reduced = antilinear_lyapunov_reduced(&a2, &cn).unwrap();
    assert!((reduced.p[(0, 0)] - c(4.0 / 3.0, 0.0)).norm() < 1e-13);
    assert!(reduced.positive_definite);

    let unstable = antilinear_lyapunov_reduced(&cmat_real(1, 1, &[1.5]), &cn).unwrap();
    assert!(!unstable.positive_definite);
}

#[test]
fn singular_lyapunov_operator() {
    let sys = CxSystem::make_normal(cmat_real(1, 1, &[0.0]), CMatrix::zeros(1, 1), CMatrix::identity(1, 1), None, TimeDomain::Continuous)
        .unwrap();
    assert!(matches!(solve_lyapunov(&sys, &Bimatrix::identity(1)), Err(crate::Error::NoUniqueSolution(_))));
}

#[test]
fn analyze_reports_implications() {
    let r = analyze(&companion_example(1.0, 0.5)).unwrap();
    assert!(r.controllable && r.stabilizable && r.observable && r.detectable && r.stable);
    assert_eq!(r.spectrum.len(), 4);
}

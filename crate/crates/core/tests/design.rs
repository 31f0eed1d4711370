mod common;

use bimatrix::cli::exit_code;
use bimatrix::design::{antilinear_coupled_residuals, are_residuals, observer_error};
use bimatrix::linalg::cmat_real;
use bimatrix::{
    antilinear_lqr_continuous, antilinear_lqr_discrete, assign_eigenvalues, closed_loop, design_observer,
    from_real_system, is_asymptotically_stable, lqr, lqr_cost, stabilize, Bimatrix, CMatrix, CxSystem, Error,
    HermBimatrix, RMatrix, SpectrumSet, TimeDomain, WeightPair,
};
use common::*;
use num_complex::Complex64;
use rand::Rng;

fn domains() -> [TimeDomain; 2] {
    [TimeDomain::Continuous, TimeDomain::Discrete]
}

#[test]
fn placement_hits_random_targets() {
    let mut rng = rng(31);
    for domain in domains() {
        for _ in 0..15 {
            let n = rng.random_range(1..=3);
            let m = rng.random_range(1..=2);
            let sys = rand_system(&mut rng, n, m, 1, 1.0, domain);
            let gamma = SpectrumSet::new(stable_spectrum(&mut rng, n, domain)).unwrap();
            let k = assign_eigenvalues(&sys, &gamma, &mut rng).unwrap();
            let got = real_rep(closed_loop(&sys, &k).unwrap().a()).complex_eigenvalues();
            assert!(multiset_distance(got.as_slice(), gamma.values()) < 1e-6);
        }
    }
}

#[test]
fn placement_is_reproducible_for_a_seed() {
    let mut gen = rng(32);
    let sys = rand_system(&mut gen, 2, 1, 1, 1.0, TimeDomain::Continuous);
    let gamma = SpectrumSet::new(stable_spectrum(&mut gen, 2, TimeDomain::Continuous)).unwrap();
    let a = assign_eigenvalues(&sys, &gamma, &mut rng(7)).unwrap();
    let b = assign_eigenvalues(&sys, &gamma, &mut rng(7)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn placement_rejects_bad_requests() {
    let sys = CxSystem::make_normal(
        cmat_real(2, 2, &[1.0, 0.0, 0.0, 2.0]),
        cmat_real(2, 1, &[1.0, 0.0]),
        CMatrix::identity(2, 2),
        None,
        TimeDomain::Continuous,
    )
    .unwrap();
    let gamma = SpectrumSet::new(vec![Complex64::new(-1.0, 0.0); 4]).unwrap();
    let err = assign_eigenvalues(&sys, &gamma, &mut rng(1)).unwrap_err();
    assert!(matches!(err, Error::Uncontrollable(_)));
    assert_eq!(exit_code(&err), 2);
    assert!(matches!(stabilize(&sys), Err(Error::NotStabilizable(_))));
    let short = SpectrumSet::new(vec![Complex64::new(-1.0, 0.0); 2]).unwrap();
    assert!(matches!(assign_eigenvalues(&sys, &short, &mut rng(1)), Err(Error::InvalidInput(_))));
}

#[test]
fn stabilize_handles_both_domains() {
    let mut rng = rng(33);
    for domain in domains() {
        for _ in 0..15 {
            let n = rng.random_range(1..=3);
            let sys = rand_system(&mut rng, n, 1, 1, 2.0, domain);
            let k = stabilize(&sys).unwrap();
            assert!(is_asymptotically_stable(&closed_loop(&sys, &k).unwrap()).unwrap());
        }
    }
}

#[test]
fn lqr_solutions_satisfy_both_riccati_forms() {
    let mut rng = rng(34);
    for domain in domains() {
        for _ in 0..10 {
            let n = rng.random_range(1..=3);
            let m = rng.random_range(1..=2);
            let sys = rand_system(&mut rng, n, m, 1, 1.0, domain);
            let w = WeightPair::identity(n, m);
            let sol = lqr(&sys, &w).unwrap();
            let (res, lifted) = are_residuals(&sys, &w, &sol.p).unwrap();
            assert!(res < 1e-8 && lifted < 1e-8, "{res:e} {lifted:e}");
            assert!(sol.p.is_positive_definite());
            assert!(is_asymptotically_stable(&closed_loop(&sys, &sol.gain).unwrap()).unwrap());
        }
    }
}

#[test]
fn lqr_gain_beats_perturbed_gains() {
    let mut rng = rng(35);
    let sys = rand_system(&mut rng, 2, 1, 1, 0.5, TimeDomain::Discrete);
    let w = WeightPair::identity(2, 1);
    let sol = lqr(&sys, &w).unwrap();
    let x0 = rand_cvec(&mut rng, 2);
    let best = lqr_cost(&sys, &sol.gain, &w, &x0, 400.0).unwrap().value;
    for _ in 0..10 {
        let k = &sol.gain + &rand_bimatrix(&mut rng, 1, 2, 0.05);
        let other = lqr_cost(&sys, &k, &w, &x0, 400.0).unwrap();
        if other.converged {
            assert!(other.value >= best - 1e-9 * best);
        }
    }
}

#[test]
fn anti_riccati_agrees_with_general_solver() {
    let mut rng = rng(36);
    for _ in 0..10 {
        let n = rng.random_range(1..=3);
        let a2 = rand_cmat(&mut rng, n, n, 1.0);
        let b2 = rand_cmat(&mut rng, n, 1, 1.0);
        let g = rand_cmat(&mut rng, n, n, 1.0);
        let q1 = &g * g.adjoint() + CMatrix::identity(n, n);
        let r1 = cmat_real(1, 1, &[2.0]);
        let anti = antilinear_lqr_discrete(&a2, &b2, &q1, &r1).unwrap();
        let sys = CxSystem::make_antilinear(a2.clone(), b2.clone(), CMatrix::identity(n, n), None, TimeDomain::Discrete)
            .unwrap();
        let w = WeightPair::new(
            HermBimatrix::new(q1.clone(), CMatrix::zeros(n, n)).unwrap(),
            HermBimatrix::new(r1.clone(), CMatrix::zeros(1, 1)).unwrap(),
        )
        .unwrap();
        let general = lqr(&sys, &w).unwrap();
        let scale = general.p.as_bimatrix().frobenius_norm();
        assert!((anti.p.as_bimatrix() - general.p.as_bimatrix()).frobenius_norm() < 1e-8 * scale);
        assert!((&anti.gain - &general.gain).frobenius_norm() < 1e-8 * (1.0 + general.gain.frobenius_norm()));
        assert!(anti.residual < 1e-10);
    }
}

#[test]
fn continuous_antilinear_regulator_satisfies_coupled_equations() {
    let mut rng = rng(37);
    for _ in 0..10 {
        let n = rng.random_range(1..=3);
        let a2 = rand_cmat(&mut rng, n, n, 1.0);
        let b2 = rand_cmat(&mut rng, n, 1, 1.0);
        let q = HermBimatrix::identity(n);
        let r1 = cmat_real(1, 1, &[1.0]);
        let sol = antilinear_lqr_continuous(&a2, &b2, &q, &r1).unwrap();
        let (e1, e2) = antilinear_coupled_residuals(&a2, &b2, &q, &r1, &sol.p).unwrap();
        assert!(e1 < 1e-8 && e2 < 1e-8);
        let sys = CxSystem::make_antilinear(a2, b2, CMatrix::identity(n, n), None, TimeDomain::Continuous).unwrap();
        assert!(is_asymptotically_stable(&closed_loop(&sys, &sol.gain).unwrap()).unwrap());
    }
}

#[test]
fn weights_must_be_positive_definite() {
    let indefinite = HermBimatrix::new(cmat_real(1, 1, &[1.0]), cmat_real(1, 1, &[2.0])).unwrap();
    assert!(matches!(WeightPair::new(indefinite, HermBimatrix::identity(1)), Err(Error::IndefiniteWeight("Q"))));
}

#[test]
fn observer_places_error_dynamics() {
    let mut rng = rng(38);
    for domain in domains() {
        for _ in 0..10 {
            let n = rng.random_range(1..=3);
            let sys = rand_system(&mut rng, n, 1, 1, 1.0, domain);
            let gamma = SpectrumSet::new(stable_spectrum(&mut rng, n, domain)).unwrap();
            let l = design_observer(&sys, &gamma, &mut rng).unwrap();
            let got = real_rep(&observer_error(&sys, &l).unwrap()).complex_eigenvalues();
            assert!(multiset_distance(got.as_slice(), gamma.values()) < 1e-6);
        }
    }
}

#[test]
fn observer_rejects_hidden_unstable_modes() {
    let sys = CxSystem::make_normal(
        cmat_real(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        CMatrix::zeros(2, 1),
        cmat_real(1, 2, &[0.0, 1.0]),
        None,
        TimeDomain::Continuous,
    )
    .unwrap();
    let gamma = SpectrumSet::new(vec![Complex64::new(-1.0, 0.0); 4]).unwrap();
    let err = design_observer(&sys, &gamma, &mut rng(1)).unwrap_err();
    assert!(matches!(err, Error::NotDetectable(_)), "{err}");
    let unstable_target = SpectrumSet::new(vec![Complex64::new(1.0, 0.0); 4]).unwrap();
    assert!(design_observer(&sys, &unstable_target, &mut rng(1)).is_err());
}

#[test]
fn conversion_of_real_systems_is_exact() {
    let mut rng = rng(39);
    for _ in 0..20 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=2);
        let mut r = |rows: usize, cols: usize| RMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0));
        let (a, b, c, d) = (r(2 * n, 2 * n), r(2 * n, 2 * m), r(2, 2 * n), r(2, 2 * m));
        let sys = from_real_system(a.clone(), b.clone(), c.clone(), d.clone(), TimeDomain::Discrete).unwrap();
        let back = sys.to_real_representation();
        for (x, y) in [(&back.a, &a), (&back.b, &b), (&back.c, &c), (&back.d, &d)] {
            assert!((x - y).norm() < 1e-14);
        }
        let gain = Bimatrix::from_real_representation(&r(2 * m, 2 * n)).unwrap();
        assert_eq!(gain.shape(), (m, n));
    }
}

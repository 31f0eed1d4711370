mod common;

use bimatrix::analysis::{
    antilinear_controllability_reduced, antilinear_discrete_stabilizability_reduced, antilinear_observability_reduced,
    reduced_output, uniform_grid,
};
use bimatrix::{
    analyze, antilinear_lyapunov_reduced, is_controllable, is_observable, is_stabilizable, solve_lyapunov,
    state_response, transition_pair, Bimatrix, CMatrix, CxSystem, InputSignal, RMatrix, TimeDomain,
};
use common::*;
use num_complex::Complex64;
use rand::Rng;

/// Rank of the real Kalman matrix `[B, AB, …, A^{2n-1}B]`.
fn kalman_rank(a: &RMatrix, b: &RMatrix) -> usize {
    let n = a.nrows();
    let mut blocks = Vec::new();
    let mut cur = b.clone();
    for _ in 0..n {
        blocks.push(cur.clone());
        cur = a * cur;
    }
    let k = RMatrix::from_fn(n, n * b.ncols(), |i, j| blocks[j / b.ncols()][(i, j % b.ncols())]);
    let sv = k.singular_values();
    let top = sv.max();
    sv.iter().filter(|&&s| s > 1e-9 * top.max(1.0)).count()
}

/// `A` block diagonal with the input reaching only the first block.
fn split_system(rng: &mut impl Rng, n1: usize, n2: usize, domain: TimeDomain) -> CxSystem {
    let n = n1 + n2;
    let top = rand_bimatrix(rng, n1, n1, 1.0);
    let bottom = rand_bimatrix(rng, n2, n2, 1.0);
    let mut a1 = CMatrix::zeros(n, n);
    let mut a2 = CMatrix::zeros(n, n);
    a1.view_mut((0, 0), (n1, n1)).copy_from(top.first());
    a2.view_mut((0, 0), (n1, n1)).copy_from(top.second());
    a1.view_mut((n1, n1), (n2, n2)).copy_from(bottom.first());
    a2.view_mut((n1, n1), (n2, n2)).copy_from(bottom.second());
    let mut b1 = CMatrix::zeros(n, 1);
    let mut b2 = CMatrix::zeros(n, 1);
    b1.view_mut((0, 0), (n1, 1)).copy_from(&rand_cmat(rng, n1, 1, 1.0));
    b2.view_mut((0, 0), (n1, 1)).copy_from(&rand_cmat(rng, n1, 1, 1.0));
    CxSystem::with_state_output(Bimatrix::new(a1, a2).unwrap(), Bimatrix::new(b1, b2).unwrap(), domain).unwrap()
}

#[test]
fn controllability_matches_kalman_rank() {
    let mut rng = rng(21);
    for i in 0..40 {
        let domain = if i % 2 == 0 { TimeDomain::Continuous } else { TimeDomain::Discrete };
        let sys = if i % 3 == 0 {
            let (n1, n2) = (rng.random_range(1..=2), rng.random_range(1..=2));
            split_system(&mut rng, n1, n2, domain)
        } else {
            let n = rng.random_range(1..=3);
            rand_system(&mut rng, n, 1, 1, 1.0, domain)
        };
        let real = sys.to_real_representation();
        let oracle = kalman_rank(&real.a, &real.b) == 2 * sys.n();
        assert_eq!(is_controllable(&sys).unwrap().holds, oracle, "instance {i}");
    }
}

#[test]
fn observability_is_dual_controllability() {
    let mut rng = rng(22);
    for _ in 0..30 {
        let n = rng.random_range(1..=3);
        let sys = rand_system(&mut rng, n, 1, 1, 1.0, TimeDomain::Continuous);
        assert_eq!(is_observable(&sys).unwrap().holds, is_controllable(&sys.dual()).unwrap().holds);
        let split = split_system(&mut rng, 1, 2, TimeDomain::Discrete).dual();
        assert!(!is_observable(&split).unwrap().holds);
    }
}

#[test]
fn split_system_stabilizability_follows_hidden_block() {
    let mut rng = rng(23);
    for _ in 0..20 {
        let sys = split_system(&mut rng, 2, 1, TimeDomain::Continuous);
        let block = |m: &CMatrix| m.view((2, 2), (1, 1)).clone_owned();
        let hidden = Bimatrix::new(block(sys.a().first()), block(sys.a().second())).unwrap();
        let hidden_modes = real_rep(&hidden).complex_eigenvalues();
        let oracle = hidden_modes.iter().all(|z| z.re < 0.0);
        assert_eq!(is_stabilizable(&sys).unwrap().holds, oracle);
    }
}

#[test]
fn reduced_antilinear_tests_agree_with_full_tests() {
    let mut rng = rng(24);
    for i in 0..40 {
        let n = rng.random_range(1..=3);
        let a2 = rand_cmat(&mut rng, n, n, 1.0);
        let b2 = if i % 4 == 0 { CMatrix::zeros(n, 1) } else { rand_cmat(&mut rng, n, 1, 1.0) };
        let c2 = if i % 5 == 0 { CMatrix::zeros(1, n) } else { rand_cmat(&mut rng, 1, n, 1.0) };
        let sys = CxSystem::make_antilinear(a2.clone(), b2.clone(), c2.clone(), None, TimeDomain::Discrete).unwrap();
        assert_eq!(antilinear_controllability_reduced(&a2, &b2).unwrap().holds, is_controllable(&sys).unwrap().holds);
        assert_eq!(antilinear_observability_reduced(&a2, &c2).unwrap().holds, is_observable(&sys).unwrap().holds);
        assert_eq!(
            antilinear_discrete_stabilizability_reduced(&a2, &b2).unwrap().holds,
            is_stabilizable(&sys).unwrap().holds
        );
    }
}

#[test]
fn reduced_stein_matches_bimatrix_lyapunov() {
    let mut rng = rng(25);
    for _ in 0..30 {
        let n = rng.random_range(1..=3);
        let a2 = rand_cmat(&mut rng, n, n, 0.6 / (n as f64).sqrt());
        let c2 = rand_cmat(&mut rng, 2, n, 1.0);
        let sys = CxSystem::make_antilinear(a2.clone(), CMatrix::zeros(n, 1), c2.clone(), None, TimeDomain::Discrete).unwrap();
        let full = solve_lyapunov(&sys, &Bimatrix::antilinear(c2.clone())).unwrap();
        let reduced = antilinear_lyapunov_reduced(&a2, &reduced_output(&a2, &c2)).unwrap();
        assert!(full.p.p2().norm() < 1e-10 * full.p.p1().norm());
        assert!((full.p.p1() - &reduced.p).norm() < 1e-10 * reduced.p.norm());
        assert_eq!(full.p.is_positive_definite(), reduced.positive_definite);
    }
}

#[test]
fn response_is_real_linear_but_not_complex_linear() {
    let mut rng = rng(26);
    let sys = rand_system(&mut rng, 2, 1, 1, 0.8, TimeDomain::Continuous);
    let grid = uniform_grid(TimeDomain::Continuous, 1.0, 0.1).unwrap();
    let (x, y) = (rand_cvec(&mut rng, 2), rand_cvec(&mut rng, 2));
    let run = |x0: &bimatrix::CVector| state_response(&sys, x0, &InputSignal::Zero, &grid).unwrap();
    let (rx, ry, rsum) = (run(&x), run(&y), run(&(&x * Complex64::new(2.0, 0.0) - &y)));
    for k in 0..grid.len() {
        let want = &rx.states[k] * Complex64::new(2.0, 0.0) - &ry.states[k];
        assert!((&rsum.states[k] - want).norm() < 1e-12);
    }
    let j = Complex64::new(0.0, 1.0);
    let rj = run(&(&x * j));
    assert!((rj.final_state().unwrap() - rx.final_state().unwrap() * j).norm() > 1e-3);
}

#[test]
fn transition_pair_is_a_semigroup() {
    let mut rng = rng(27);
    for domain in [TimeDomain::Continuous, TimeDomain::Discrete] {
        let sys = rand_system(&mut rng, 3, 1, 1, 0.5, domain);
        let (s, t) = match domain {
            TimeDomain::Continuous => (0.7, 1.9),
            TimeDomain::Discrete => (3.0, 4.0),
        };
        let lhs = transition_pair(&sys, s + t).unwrap().phi;
        let rhs = &transition_pair(&sys, t).unwrap().phi * &transition_pair(&sys, s).unwrap().phi;
        assert!((&lhs - &rhs).frobenius_norm() < 1e-11 * (1.0 + lhs.frobenius_norm()));
    }
}

#[test]
fn transfer_function_matches_real_form() {
    let mut rng = rng(28);
    let sys = rand_system(&mut rng, 3, 2, 2, 1.0, TimeDomain::Continuous);
    let real = sys.to_real_representation();
    for s in [0.5, 2.0, 7.0] {
        let g = sys.transfer_function(s).unwrap().real_representation();
        let gr = real.transfer_function(s).unwrap();
        assert!((g - &gr).norm() < 1e-10 * (1.0 + gr.norm()));
    }
}

#[test]
fn analyze_reports_consistent_implications() {
    let mut rng = rng(29);
    for i in 0..20 {
        let domain = if i % 2 == 0 { TimeDomain::Continuous } else { TimeDomain::Discrete };
        let r = analyze(&rand_system(&mut rng, 2, 1, 1, 1.0, domain)).unwrap();
        assert!(!r.controllable || r.stabilizable);
        assert!(!r.observable || r.detectable);
        assert!(!r.stable || (r.stabilizable && r.detectable));
        assert_eq!(r.spectrum.len(), 4);
        assert!(r.margins.controllability >= 0.0);
    }
}

#[test]
fn lyapunov_function_decreases_along_trajectories() {
    let mut rng = rng(30);
    for domain in [TimeDomain::Continuous, TimeDomain::Discrete] {
        let mut checked = 0;
        while checked < 5 {
            let n = rng.random_range(1..=3);
            let raw = rand_bimatrix(&mut rng, n, n, 0.6 / (n as f64).sqrt());
            let a = match domain {
                TimeDomain::Continuous => &raw - &Bimatrix::identity(n).scale(0.8),
                TimeDomain::Discrete => raw,
            };
            let sys = CxSystem::with_state_output(a, Bimatrix::zeros(n, 1), domain).unwrap();
            if !bimatrix::is_asymptotically_stable(&sys).unwrap() {
                continue;
            }
            checked += 1;
            let p = solve_lyapunov(&sys, &Bimatrix::identity(n)).unwrap().p;
            let grid = uniform_grid(domain, 10.0, 0.05).unwrap();
            let trace = state_response(&sys, &rand_cvec(&mut rng, n), &InputSignal::Zero, &grid).unwrap();
            let v: Vec<f64> = trace.states.iter().map(|x| p.quadratic_form_real(x).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        }
    }
}

#[test]
fn lifted_kalman_rank_agrees() {
    let mut rng = rng(31);
    for i in 0..20 {
        let sys = if i % 2 == 0 { split_system(&mut rng, 1, 1, TimeDomain::Continuous) } else { rand_system(&mut rng, 2, 1, 1, 1.0, TimeDomain::Continuous) };
        let lifted = sys.to_complex_lifting();
        let mut k = CMatrix::zeros(4, 8);
        let mut cur = lifted.b.clone();
        for j in 0..4 {
            k.view_mut((0, 2 * j), (4, 2)).copy_from(&cur);
            cur = &lifted.a * cur;
        }
        let sv = k.singular_values();
        let rank = sv.iter().filter(|&&s| s > 1e-9 * sv.max()).count();
        assert_eq!(rank == 4, is_controllable(&sys).unwrap().holds);
    }
}

//! Seeded generators and independent oracles shared by the integration
//! tests. Nothing here calls into the numerical kernels under test.

#![allow(dead_code)]

use bimatrix::{Bimatrix, CMatrix, CVector, CxSystem, RMatrix, RVector, TimeDomain};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn rand_cmat(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| rand_c(rng) * scale)
}

pub fn rand_cvec(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| rand_c(rng))
}

pub fn rand_bimatrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> Bimatrix {
    Bimatrix::new(rand_cmat(rng, rows, cols, scale), rand_cmat(rng, rows, cols, scale)).unwrap()
}

pub fn rand_system(rng: &mut impl Rng, n: usize, m: usize, p: usize, a_scale: f64, domain: TimeDomain) -> CxSystem {
    CxSystem::new(
        rand_bimatrix(rng, n, n, a_scale),
        rand_bimatrix(rng, n, m, 1.0),
        rand_bimatrix(rng, p, n, 1.0),
        rand_bimatrix(rng, p, m, 0.5),
        domain,
    )
    .unwrap()
}

/// `[Re x; Im x]`.
pub fn stack(x: &CVector) -> RVector {
    let n = x.len();
    RVector::from_fn(2 * n, |i, _| if i < n { x[i].re } else { x[i - n].im })
}

pub fn unstack(v: &RVector) -> CVector {
    let n = v.len() / 2;
    CVector::from_fn(n, |i, _| Complex64::new(v[i], v[n + i]))
}

/// `[[Re(A₁+A₂), -Im(A₁+A₂)], [Im(A₁-A₂), Re(A₁-A₂)]]` built entry by entry.
pub fn real_rep(b: &Bimatrix) -> RMatrix {
    let (n, m) = b.shape();
    let (a1, a2) = (b.first(), b.second());
    RMatrix::from_fn(2 * n, 2 * m, |i, j| {
        let (r, c) = (i % n, j % m);
        let s = a1[(r, c)] + a2[(r, c)];
        let d = a1[(r, c)] - a2[(r, c)];
        match (i < n, j < m) {
            (true, true) => s.re,
            (true, false) => -s.im,
            (false, true) => d.im,
            (false, false) => d.re,
        }
    })
}

/// Matrix exponential by scaling, truncated Taylor series and squaring.
pub fn taylor_expm(a: &RMatrix) -> RMatrix {
    let norm = a.norm();
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(squarings);
    let n = a.nrows();
    let mut sum = RMatrix::identity(n, n);
    let mut term = RMatrix::identity(n, n);
    for k in 1..40 {
        term = &term * &scaled / k as f64;
        sum += &term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Simulates the real representation `[Re x; Im x]` with a zero-order hold
/// between grid points; returns the complex states.
pub fn simulate_real(sys: &CxSystem, x0: &CVector, inputs: &[CVector], grid: &[f64]) -> Vec<CVector> {
    let a = real_rep(sys.a());
    let b = real_rep(sys.b());
    let (n2, m2) = (a.nrows(), b.ncols());
    let mut x = stack(x0);
    let mut out = vec![unstack(&x)];
    for k in 0..grid.len() - 1 {
        let u = stack(&inputs[k]);
        x = match sys.domain() {
            TimeDomain::Discrete => &a * &x + &b * &u,
            TimeDomain::Continuous => {
                let h = grid[k + 1] - grid[k];
                let mut aug = RMatrix::zeros(n2 + m2, n2 + m2);
                aug.view_mut((0, 0), (n2, n2)).copy_from(&(&a * h));
                aug.view_mut((0, n2), (n2, m2)).copy_from(&(&b * h));
                let e = taylor_expm(&aug);
                e.view((0, 0), (n2, n2)) * &x + e.view((0, n2), (n2, m2)) * &u
            }
        };
        out.push(unstack(&x));
    }
    out
}

/// Characteristic polynomial `det(sI - A)` by Faddeev–LeVerrier, highest
/// degree first.
pub fn charpoly(a: &RMatrix) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut m = RMatrix::zeros(n, n);
    let id = RMatrix::identity(n, n);
    for k in 1..=n {
        m = a * &m + &id * coeffs[k - 1];
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

pub fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Complex eigenvalues of a complex matrix through a 2n real embedding
/// `[[Re M, -Im M], [Im M, Re M]]`, whose spectrum is `λ(M) ∪ λ(M)^#`.
pub fn spectral_radius(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let emb = RMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    emb.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Greedy distance between two eigenvalue multisets, relative to `1 + |z|`.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
        used[j] = true;
        worst = worst.max(d / (1.0 + x.norm()));
    }
    worst
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

/// Transition pair of `ẋ = A₂^#x^#` summed term by term until the terms
/// vanish in double precision.
pub fn antilinear_series(a2: &CMatrix, t: f64) -> (CMatrix, CMatrix) {
    let n = a2.nrows();
    let m = conj(a2) * a2;
    let mut phi1 = CMatrix::identity(n, n);
    let mut phi2 = a2 * Complex64::new(t, 0.0);
    let mut even = CMatrix::identity(n, n);
    let mut odd = phi2.clone();
    for k in 1..200 {
        let kf = k as f64;
        even = &even * &m * Complex64::new(t * t / ((2.0 * kf - 1.0) * 2.0 * kf), 0.0);
        odd = &odd * &m * Complex64::new(t * t / (2.0 * kf * (2.0 * kf + 1.0)), 0.0);
        phi1 += &even;
        phi2 += &odd;
        if even.norm() + odd.norm() <= f64::EPSILON * 1e-3 * (phi1.norm() + phi2.norm()) {
            break;
        }
    }
    (phi1, phi2)
}

/// `(Φ₁, Φ₂)` of `x(k+1) = A₂^#x(k)^#` by the even/odd power rule.
pub fn antilinear_power(a2: &CMatrix, t: u32) -> (CMatrix, CMatrix) {
    let n = a2.nrows();
    let m = conj(a2) * a2;
    let mut pow = CMatrix::identity(n, n);
    for _ in 0..t / 2 {
        pow = &pow * &m;
    }
    if t.is_multiple_of(2) {
        (pow, CMatrix::zeros(n, n))
    } else {
        (CMatrix::zeros(n, n), a2 * pow)
    }
}

/// Conjugate-symmetric random set of `2n` values, `n` of them sampled.
pub fn stable_spectrum(rng: &mut impl Rng, n: usize, domain: TimeDomain) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let z = match domain {
            TimeDomain::Continuous => Complex64::new(rng.random_range(-3.0..-1.0), rng.random_range(-2.0..2.0)),
            TimeDomain::Discrete => Complex64::from_polar(rng.random_range(0.1..0.5), rng.random_range(0.2..2.9)),
        };
        out.push(z);
        out.push(z.conj());
    }
    out
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

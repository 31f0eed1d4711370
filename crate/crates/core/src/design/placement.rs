use num_complex::Complex64;
use rand::Rng;

use crate::analysis::{is_controllable, RANK_TOL};
use crate::bimatrix::Bimatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, RMatrix};
use crate::spectrum::{multiset_mismatch, pair_tol, poly_from_roots, SpectrumSet};
use crate::system::CxSystem;

use super::GainBimatrix;

/// Fresh parameter draws per Jordan structure.
const MAX_RETRIES: usize = 20;
/// Smallest acceptable reciprocal condition number of the Sylvester solution.
const MIN_RCOND: f64 = 1e-10;
/// Relative spectrum tolerance of the post-placement check.
pub const SPECTRUM_TOL: f64 = 1e-6;
/// Distance (relative) between `λ(A)` and the target below which the
/// Sylvester operator is treated as singular.
const OVERLAP_TOL: f64 = 1e-6;

/// A run of (nearly) equal target values realised as one group of Jordan
/// blocks.
struct Cluster {
    values: Vec<Complex64>,
}

fn cluster(values: &[Complex64]) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for &v in values {
        match out.iter_mut().find(|c| (c.values[0] - v).norm() <= pair_tol(v)) {
            Some(c) => c.values.push(v),
            None => out.push(Cluster { values: vec![v] }),
        }
    }
    out
}

/// Splits `k` into at most `blocks` nearly equal positive parts.
fn partition(k: usize, blocks: usize) -> Vec<usize> {
    let blocks = blocks.clamp(1, k);
    (0..blocks).map(|i| k / blocks + usize::from(i < k % blocks)).collect()
}

/// Real block realisation of a conjugate-closed spectrum: upper bidiagonal
/// Jordan-like blocks for real values and `[[a, b], [-b, a]]` blocks with
/// `I₂` couplings for conjugate pairs. Each cluster uses at most
/// `max_blocks` chains.
fn real_realization(gamma: &SpectrumSet, max_blocks: usize) -> RMatrix {
    let reals: Vec<Complex64> =
        gamma.iter().filter(|z| z.im.abs() <= pair_tol(**z)).map(|z| Complex64::new(z.re, 0.0)).collect();
    let uppers: Vec<Complex64> = gamma.iter().copied().filter(|z| z.im > pair_tol(*z)).collect();
    let n = gamma.len();
    let mut lam = RMatrix::zeros(n, n);
    let mut at = 0;
    for cl in cluster(&reals) {
        let mut vals = cl.values.iter();
        for size in partition(cl.values.len(), max_blocks) {
            for j in 0..size {
                lam[(at + j, at + j)] = vals.next().expect("partition covers cluster").re;
                if j + 1 < size {
                    lam[(at + j, at + j + 1)] = 1.0;
                }
            }
            at += size;
        }
    }
    for cl in cluster(&uppers) {
        let mut vals = cl.values.iter();
        for size in partition(cl.values.len(), max_blocks) {
            for j in 0..size {
                let z = vals.next().expect("partition covers cluster");
                let i = at + 2 * j;
                lam[(i, i)] = z.re;
                lam[(i + 1, i + 1)] = z.re;
                lam[(i, i + 1)] = z.im;
                lam[(i + 1, i)] = -z.im;
                if j + 1 < size {
                    lam[(i, i + 2)] = 1.0;
                    lam[(i + 1, i + 3)] = 1.0;
                }
            }
            at += 2 * size;
        }
    }
    debug_assert_eq!(at, n, "conjugate pairs must be matched");
    lam
}

fn complex_realization(gamma: &[Complex64], max_blocks: usize) -> CMatrix {
    let n = gamma.len();
    let mut lam = CMatrix::zeros(n, n);
    let mut at = 0;
    for cl in cluster(gamma) {
        let mut vals = cl.values.iter();
        for size in partition(cl.values.len(), max_blocks) {
            for j in 0..size {
                lam[(at + j, at + j)] = *vals.next().expect("partition covers cluster");
                if j + 1 < size {
                    lam[(at + j, at + j + 1)] = Complex64::new(1.0, 0.0);
                }
            }
            at += size;
        }
    }
    lam
}

fn numerical_rank(sv: &[f64]) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}

fn overlaps(a_eigs: &[Complex64], gamma: &[Complex64]) -> bool {
    a_eigs.iter().any(|a| gamma.iter().any(|g| (a - g).norm() <= OVERLAP_TOL * (1.0 + g.norm())))
}

/// Accepts a closed loop whose spectrum matches the target, or whose
/// characteristic polynomial does (defective clusters perturb individual
/// eigenvalues far more than the polynomial).
fn spectrum_accepted(achieved: &[Complex64], target: &[Complex64]) -> bool {
    if multiset_mismatch(target, achieved) <= SPECTRUM_TOL {
        return true;
    }
    let pa = poly_from_roots(achieved);
    let pt = poly_from_roots(target);
    let scale = pt.iter().map(|z| z.norm()).fold(1.0, f64::max);
    pa.iter().zip(&pt).all(|(x, y)| (x - y).norm() <= 1e-9 * scale)
}

fn random_real(rows: usize, cols: usize, rng: &mut impl Rng) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Real gain `K` with `λ(A + BK) = Γ`, by the parametric Sylvester method
/// `AX - XΛ = -BG`, `K = GX⁻¹`. Assumes `(A, B)` controllable.
pub(crate) fn place_real(a: &RMatrix, b: &RMatrix, gamma: &SpectrumSet, rng: &mut impl Rng) -> Result<RMatrix> {
    let n = a.nrows();
    let m = b.ncols();
    if gamma.len() != n {
        return Err(Error::InvalidInput(format!("target spectrum has {} values, expected {n}", gamma.len())));
    }
    if n == 0 {
        return Ok(RMatrix::zeros(m, 0));
    }
    let rank = numerical_rank(&linalg::real_singular_values(b));
    if rank == 0 {
        return Err(Error::Uncontrollable(0.0));
    }
    let a_eigs = linalg::real_eigenvalues(a)?;
    let scale = (linalg::real_spectral_norm(a) + 1.0) / linalg::real_spectral_norm(b);

    let mut structures = vec![rank];
    if rank > 1 {
        structures.push(1);
    }
    for max_blocks in structures {
        let lam = real_realization(gamma, max_blocks);
        for _ in 0..MAX_RETRIES {
            let (a_work, k0) = if overlaps(&a_eigs, gamma.values()) {
                let k0 = random_real(m, n, rng) * scale;
                let shifted = a + b * &k0;
                if overlaps(&linalg::real_eigenvalues(&shifted)?, gamma.values()) {
                    continue;
                }
                (shifted, k0)
            } else {
                (a.clone(), RMatrix::zeros(m, n))
            };
            let g = random_real(m, n, rng);
            let Ok(x) = linalg::solve_sylvester(&a_work, &lam, &-(b * &g)) else {
                continue;
            };
            if linalg::rcond(&x) < MIN_RCOND {
                continue;
            }
            let Some(x_inv) = x.try_inverse() else {
                continue;
            };
            let k = k0 + g * x_inv;
            if !k.iter().all(|v| v.is_finite()) {
                continue;
            }
            let achieved = linalg::real_eigenvalues(&(a + b * &k))?;
            if spectrum_accepted(&achieved, gamma.values()) {
                return Ok(k);
            }
        }
    }
    Err(Error::Numerical(format!("eigenvalue assignment failed after {MAX_RETRIES} draws per structure")))
}

/// Gain bimatrix `{K₁, K₂}` such that the closed loop `{A} + {B}{K}` has
/// eigenvalue set `gamma`.
///
/// Placement runs on the real representation; the gain is mapped back with
/// the inverse of the real representation.
pub fn assign_eigenvalues(sys: &CxSystem, gamma: &SpectrumSet, rng: &mut impl Rng) -> Result<GainBimatrix> {
    if gamma.len() != 2 * sys.n() {
        return Err(Error::InvalidInput(format!(
            "target spectrum has {} values, expected {}",
            gamma.len(),
            2 * sys.n()
        )));
    }
    let ctrb = is_controllable(sys)?;
    if !ctrb.holds {
        return Err(Error::Uncontrollable(ctrb.margin));
    }
    let k = place_real(&sys.a().real_representation(), &sys.b().real_representation(), gamma, rng)?;
    Bimatrix::from_real_representation(&k)
}

/// Normal feedback `u = K₁x` for a normal pair `(A₁, B₁)`: complex gain
/// with `λ(A₁ + B₁K₁) = gamma` (`n` values, no conjugate symmetry needed).
pub fn assign_eigenvalues_normal(
    a1: &CMatrix,
    b1: &CMatrix,
    gamma: &[Complex64],
    rng: &mut impl Rng,
) -> Result<CMatrix> {
    let n = a1.nrows();
    let m = b1.ncols();
    if a1.ncols() != n || b1.nrows() != n {
        return Err(Error::dims("normal pair", format!("{n}x{n} and {n}xm"), format!("{:?}, {:?}", a1.shape(), b1.shape())));
    }
    if gamma.len() != n {
        return Err(Error::InvalidInput(format!("target spectrum has {} values, expected {n}", gamma.len())));
    }
    if n == 0 {
        return Ok(CMatrix::zeros(m, 0));
    }
    let a_eigs = linalg::complex_eigenvalues(a1)?;
    let ctrb = normal_controllability_margin(a1, b1, &a_eigs);
    if ctrb <= RANK_TOL {
        return Err(Error::Uncontrollable(ctrb));
    }
    let all_real = a1.iter().chain(b1.iter()).all(|z| z.im == 0.0) && gamma.iter().all(|z| z.im == 0.0);
    let rank = numerical_rank(&linalg::singular_values(b1));
    let scale = (linalg::spectral_norm(a1) + 1.0) / linalg::spectral_norm(b1);
    let draw = |rng: &mut dyn FnMut() -> f64, rows: usize, cols: usize| {
        CMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng(), if all_real { 0.0 } else { rng() }))
    };

    let mut structures = vec![rank];
    if rank > 1 {
        structures.push(1);
    }
    for max_blocks in structures {
        let lam = complex_realization(gamma, max_blocks);
        for _ in 0..MAX_RETRIES {
            let mut sample = || rng.random_range(-1.0..1.0);
            let (a_work, k0) = if overlaps(&a_eigs, gamma) {
                let k0 = draw(&mut sample, m, n) * Complex64::new(scale, 0.0);
                let shifted = a1 + b1 * &k0;
                if overlaps(&linalg::complex_eigenvalues(&shifted)?, gamma) {
                    continue;
                }
                (shifted, k0)
            } else {
                (a1.clone(), CMatrix::zeros(m, n))
            };
            let g = draw(&mut sample, m, n);
            let Some(x) = complex_sylvester(&a_work, &lam, &-(b1 * &g)) else {
                continue;
            };
            if linalg::complex_rcond(&x) < MIN_RCOND {
                continue;
            }
            let Some(x_inv) = x.try_inverse() else {
                continue;
            };
            let mut k = k0 + g * x_inv;
            if all_real {
                k.iter_mut().for_each(|z| z.im = 0.0);
            }
            let achieved = linalg::complex_eigenvalues(&(a1 + b1 * &k))?;
            if spectrum_accepted(&achieved, gamma) {
                return Ok(k);
            }
        }
    }
    Err(Error::Numerical(format!("eigenvalue assignment failed after {MAX_RETRIES} draws per structure")))
}

fn normal_controllability_margin(a: &CMatrix, b: &CMatrix, eigs: &[Complex64]) -> f64 {
    let n = a.nrows();
    let mut joint = CMatrix::zeros(n, n + b.ncols());
    joint.view_mut((0, 0), (n, n)).copy_from(a);
    joint.view_mut((0, n), (n, b.ncols())).copy_from(b);
    let scale = linalg::spectral_norm(&joint).max(f64::MIN_POSITIVE);
    eigs.iter()
        .map(|&s| {
            let mut pencil = joint.clone();
            pencil.view_mut((0, 0), (n, n)).copy_from(&(CMatrix::identity(n, n) * s - a));
            linalg::singular_values(&pencil)[n - 1] / scale
        })
        .fold(f64::INFINITY, f64::min)
}

/// Solves `AX - XΛ = C` for complex matrices by Kronecker vectorisation.
fn complex_sylvester(a: &CMatrix, lam: &CMatrix, rhs: &CMatrix) -> Option<CMatrix> {
    let n = a.nrows();
    let k = lam.nrows();
    let op = CMatrix::identity(k, k).kronecker(a) - lam.transpose().kronecker(&CMatrix::identity(n, n));
    let v = crate::CVector::from_column_slice(rhs.as_slice());
    let x = op.lu().solve(&v)?;
    Some(CMatrix::from_column_slice(n, k, x.as_slice()))
}

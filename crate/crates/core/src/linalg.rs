//! Dense matrix helpers shared by the bimatrix algebra and the solvers.
//!
//! Complex matrices are `nalgebra::DMatrix<Complex64>`, real ones
//! `DMatrix<f64>`. Everything here works on small dense matrices
//! (a few dozen rows at most).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from row-major `(re, im)` pairs.
pub fn cmat(rows: usize, cols: usize, entries: &[(f64, f64)]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "cmat: entry count");
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&(re, im)| c(re, im)))
}

/// Builds a complex matrix with zero imaginary part from row-major reals.
pub fn cmat_real(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "cmat_real: entry count");
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&re| c(re, 0.0)))
}

pub fn cvec(entries: &[(f64, f64)]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&(re, im)| c(re, im)))
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.im)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Stacks `x` into `[Re x; Im x]`.
pub fn arrow(x: &CVector) -> RVector {
    let n = x.len();
    RVector::from_fn(2 * n, |i, _| if i < n { x[i].re } else { x[i - n].im })
}

/// Inverse of [`arrow`].
pub fn unarrow(v: &RVector) -> CVector {
    assert!(v.len().is_multiple_of(2), "unarrow: odd length");
    let n = v.len() / 2;
    CVector::from_fn(n, |i, _| c(v[i], v[i + n]))
}

/// `(1/√2)[x; x^#]`.
pub fn breve(x: &CVector) -> CVector {
    let n = x.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_fn(2 * n, |i, _| if i < n { x[i] * s } else { x[i - n].conj() * s })
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn real_singular_values(m: &RMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// σ_r where r = min(rows, cols): the margin used by rank tests.
pub fn min_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn real_spectral_norm(m: &RMatrix) -> f64 {
    real_singular_values(m).first().copied().unwrap_or(0.0)
}

/// Reciprocal 2-norm condition number of a square real matrix.
pub fn rcond(m: &RMatrix) -> f64 {
    let s = real_singular_values(m);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

pub fn complex_rcond(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

/// Eigenvalues of a real square matrix via the real Schur form.
pub fn real_eigenvalues(m: &RMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let n = m.nrows();
    let max_iter = 200 * n.max(10);
    // nalgebra's Francis iteration occasionally stalls on benign matrices;
    // an orthogonal similarity leaves the spectrum intact and unsticks it.
    for attempt in 0..SCHUR_ATTEMPTS {
        let q = similarity(n, attempt);
        if let Some(schur) = nalgebra::linalg::Schur::try_new(&q * m * q.transpose(), f64::EPSILON, max_iter) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::EigenNonConvergence)
}

const SCHUR_ATTEMPTS: usize = 5;

/// Deterministic orthogonal matrix; the identity for `attempt == 0`.
fn similarity(n: usize, attempt: usize) -> RMatrix {
    if attempt == 0 {
        return RMatrix::identity(n, n);
    }
    let g = RMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 3 + attempt * 11) as f64 + 0.5).sin());
    g.qr().q()
}

/// Eigenvalues of a complex square matrix via the complex Schur form.
pub fn complex_eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let n = m.nrows();
    let max_iter = 200 * n.max(10);
    for attempt in 0..SCHUR_ATTEMPTS {
        let q = to_complex(&similarity(n, attempt));
        if let Some(schur) = nalgebra::linalg::Schur::try_new(&q * m * q.adjoint(), f64::EPSILON, max_iter) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|i| t[(i, i)]).collect());
        }
    }
    Err(Error::EigenNonConvergence)
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_symmetric_eigenvalue(m: &RMatrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Column-major vectorisation.
pub fn vec_of(m: &RMatrix) -> RVector {
    RVector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &RVector, rows: usize, cols: usize) -> RMatrix {
    RMatrix::from_column_slice(rows, cols, v.as_slice())
}

fn solve_dense(op: RMatrix, rhs: RVector, what: &'static str) -> Result<RVector> {
    op.lu().solve(&rhs).ok_or(Error::Singular(what, 0.0))
}

/// Solves `a^T p + p a = -w` by Kronecker vectorisation.
pub fn solve_continuous_lyapunov(a: &RMatrix, w: &RMatrix) -> Result<RMatrix> {
    let n = a.nrows();
    let id = RMatrix::identity(n, n);
    let at = a.transpose();
    let op = id.kronecker(&at) + at.kronecker(&id);
    let p = solve_dense(op, -vec_of(w), "continuous Lyapunov operator")?;
    Ok(unvec(&p, n, n))
}

/// Solves `a^T p a - p = -w` by Kronecker vectorisation.
pub fn solve_discrete_lyapunov(a: &RMatrix, w: &RMatrix) -> Result<RMatrix> {
    let n = a.nrows();
    let at = a.transpose();
    let op = at.kronecker(&at) - RMatrix::identity(n * n, n * n);
    let p = solve_dense(op, -vec_of(w), "discrete Lyapunov operator")?;
    Ok(unvec(&p, n, n))
}

/// Solves `a x - x lambda = rhs` by Kronecker vectorisation.
pub fn solve_sylvester(a: &RMatrix, lambda: &RMatrix, rhs: &RMatrix) -> Result<RMatrix> {
    let n = a.nrows();
    let k = lambda.nrows();
    let op = RMatrix::identity(k, k).kronecker(a) - lambda.transpose().kronecker(&RMatrix::identity(n, n));
    let x = solve_dense(op, vec_of(rhs), "Sylvester operator")?;
    Ok(unvec(&x, n, k))
}

pub fn symmetrize(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

fn one_norm(m: &RMatrix) -> f64 {
    m.column_iter().map(|col| col.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
// Largest 1-norms for which the order-m approximant is accurate to unit roundoff.
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with diagonal Padé
/// approximants of order 3 to 13.
pub fn expm(a: &RMatrix) -> RMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm: matrix must be square");
    let id = RMatrix::identity(n, n);
    if n == 0 {
        return id;
    }
    let norm = one_norm(a);
    for &(m, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            return pade_low(a, coeffs);
        }
    }

    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a / 2f64.powi(s);
    let b = &PADE13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let mut r = pade_ratio(&u, &v);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn pade_low(a: &RMatrix, b: &[f64]) -> RMatrix {
    let n = a.nrows();
    let a2 = a * a;
    let mut pow = RMatrix::identity(n, n);
    let mut u = RMatrix::zeros(n, n);
    let mut v = RMatrix::zeros(n, n);
    for k in (0..b.len()).step_by(2) {
        v += &pow * b[k];
        if k + 1 < b.len() {
            u += &pow * b[k + 1];
        }
        pow = &pow * &a2;
    }
    let u = a * u;
    pade_ratio(&u, &v)
}

fn pade_ratio(u: &RMatrix, v: &RMatrix) -> RMatrix {
    let q = v - u;
    let p = v + u;
    // Q is well conditioned inside the theta bounds.
    q.lu().solve(&p).expect("Padé denominator is nonsingular within its theta bound")
}

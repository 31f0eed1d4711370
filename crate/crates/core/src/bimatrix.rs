//! The bimatrix `{A₁, A₂}`: an ordered pair of equal-shape complex matrices
//! acting on a vector as `A₁x + A₂^# x^#`.
//!
//! The action is linear over the reals only, so products, inverses and
//! powers follow their own rules. Two matrix images make them computable
//! with ordinary linear algebra:
//!
//! * the *real representation* `{A₁,A₂}_∘ ∈ R^{2n×2m}`, acting on `[Re x; Im x]`;
//! * the *complex lifting* `{A₁,A₂}_⋄ = [[A₁, A₂^#], [A₂, A₁^#]]`, acting on
//!   `(1/√2)[x; x^#]`.
//!
//! Both are algebra homomorphisms and are unitarily similar through
//! [`h_matrix`]. Eigenvalues and exponentials are evaluated on the real
//! representation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, conj, imag_part, real_part, CMatrix, CVector, RMatrix, J};
use crate::spectrum::SpectrumSet;

/// Reciprocal condition below which a lifting is treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-12;
/// Relative symmetry residual tolerated by [`HermBimatrix`].
pub const HERMITE_TOL: f64 = 1e-10;
/// Relative floor on the smallest eigenvalue for positive definiteness.
pub const DEFINITE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Bimatrix {
    first: CMatrix,
    second: CMatrix,
}

impl Bimatrix {
    pub fn new(first: CMatrix, second: CMatrix) -> Result<Self> {
        if first.shape() != second.shape() {
            return Err(Error::dims(
                "bimatrix components",
                format!("{:?}", first.shape()),
                format!("{:?}", second.shape()),
            ));
        }
        if !linalg::is_finite(&first) || !linalg::is_finite(&second) {
            return Err(Error::NonFinite("bimatrix"));
        }
        Ok(Bimatrix { first, second })
    }

    pub(crate) fn from_parts_unchecked(first: CMatrix, second: CMatrix) -> Self {
        debug_assert_eq!(first.shape(), second.shape());
        Bimatrix { first, second }
    }

    /// The identity bimatrix `{I_n, 0}`.
    pub fn identity(n: usize) -> Self {
        Bimatrix { first: CMatrix::identity(n, n), second: CMatrix::zeros(n, n) }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Bimatrix { first: CMatrix::zeros(rows, cols), second: CMatrix::zeros(rows, cols) }
    }

    /// `{A₁, 0}`, the bimatrix of an ordinary linear map.
    pub fn normal(first: CMatrix) -> Self {
        let (r, cl) = first.shape();
        Bimatrix { first, second: CMatrix::zeros(r, cl) }
    }

    /// `{0, A₂}`, a purely antilinear map.
    pub fn antilinear(second: CMatrix) -> Self {
        let (r, cl) = second.shape();
        Bimatrix { first: CMatrix::zeros(r, cl), second }
    }

    pub fn first(&self) -> &CMatrix {
        &self.first
    }

    pub fn second(&self) -> &CMatrix {
        &self.second
    }

    pub fn into_parts(self) -> (CMatrix, CMatrix) {
        (self.first, self.second)
    }

    pub fn nrows(&self) -> usize {
        self.first.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.first.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.first.shape()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.first.iter().chain(self.second.iter()).all(|z| *z == Complex64::default())
    }

    /// `sqrt(‖A₁‖_F² + ‖A₂‖_F²)`; equals `‖{A₁,A₂}_⋄‖_F / √2`.
    pub fn frobenius_norm(&self) -> f64 {
        (self.first.norm_squared() + self.second.norm_squared()).sqrt()
    }

    /// `A₁x + A₂^# x^#`.
    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        if x.len() != self.ncols() {
            return Err(Error::dims("bimatrix action", self.ncols(), x.len()));
        }
        Ok(&self.first * x + conj(&self.second) * x.map(|z| z.conj()))
    }

    pub fn checked_add(&self, other: &Bimatrix) -> Result<Bimatrix> {
        if self.shape() != other.shape() {
            return Err(Error::dims("bimatrix sum", format!("{:?}", self.shape()), format!("{:?}", other.shape())));
        }
        Ok(Bimatrix { first: &self.first + &other.first, second: &self.second + &other.second })
    }

    pub fn checked_sub(&self, other: &Bimatrix) -> Result<Bimatrix> {
        if self.shape() != other.shape() {
            return Err(Error::dims(
                "bimatrix difference",
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ));
        }
        Ok(Bimatrix { first: &self.first - &other.first, second: &self.second - &other.second })
    }

    /// `{A₁,A₂}{B₁,B₂} = {A₁B₁ + A₂^#B₂, A₁^#B₂ + A₂B₁}`.
    pub fn checked_mul(&self, other: &Bimatrix) -> Result<Bimatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::dims("bimatrix product", self.ncols(), other.nrows()));
        }
        let first = &self.first * &other.first + conj(&self.second) * &other.second;
        let second = conj(&self.first) * &other.second + &self.second * &other.first;
        Ok(Bimatrix { first, second })
    }

    /// Multiplication by a real scalar (complex scalars do not commute with
    /// the antilinear part).
    pub fn scale(&self, s: f64) -> Bimatrix {
        Bimatrix { first: &self.first * c(s, 0.0), second: &self.second * c(s, 0.0) }
    }

    /// `{A₁^H, A₂^T}`.
    pub fn conj_transpose(&self) -> Bimatrix {
        Bimatrix { first: self.first.adjoint(), second: self.second.transpose() }
    }

    /// `[[Re(A₁+A₂), -Im(A₁+A₂)], [Im(A₁-A₂), Re(A₁-A₂)]]`.
    pub fn real_representation(&self) -> RMatrix {
        let (n, m) = self.shape();
        let sum = &self.first + &self.second;
        let diff = &self.first - &self.second;
        let mut out = RMatrix::zeros(2 * n, 2 * m);
        out.view_mut((0, 0), (n, m)).copy_from(&real_part(&sum));
        out.view_mut((0, m), (n, m)).copy_from(&(-imag_part(&sum)));
        out.view_mut((n, 0), (n, m)).copy_from(&imag_part(&diff));
        out.view_mut((n, m), (n, m)).copy_from(&real_part(&diff));
        out
    }

    /// `[[A₁, A₂^#], [A₂, A₁^#]]`.
    pub fn complex_lifting(&self) -> CMatrix {
        let (n, m) = self.shape();
        let mut out = CMatrix::zeros(2 * n, 2 * m);
        out.view_mut((0, 0), (n, m)).copy_from(&self.first);
        out.view_mut((0, m), (n, m)).copy_from(&conj(&self.second));
        out.view_mut((n, 0), (n, m)).copy_from(&self.second);
        out.view_mut((n, m), (n, m)).copy_from(&conj(&self.first));
        out
    }

    /// The unique bimatrix whose real representation is `a`.
    pub fn from_real_representation(a: &RMatrix) -> Result<Bimatrix> {
        let (r, cl) = a.shape();
        if r % 2 != 0 || cl % 2 != 0 {
            return Err(Error::dims("real representation", "even dimensions", format!("{r}x{cl}")));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("real representation"));
        }
        let (n, m) = (r / 2, cl / 2);
        let a11 = a.view((0, 0), (n, m));
        let a12 = a.view((0, m), (n, m));
        let a21 = a.view((n, 0), (n, m));
        let a22 = a.view((n, m), (n, m));
        let first = CMatrix::from_fn(n, m, |i, k| c(0.5 * (a11[(i, k)] + a22[(i, k)]), 0.5 * (a21[(i, k)] - a12[(i, k)])));
        let second =
            CMatrix::from_fn(n, m, |i, k| c(0.5 * (a11[(i, k)] - a22[(i, k)]), -0.5 * (a21[(i, k)] + a12[(i, k)])));
        Ok(Bimatrix { first, second })
    }

    /// Reads `{A₁, A₂}` off the first block column of a lifted matrix,
    /// `[A₁; A₂] = L [I; 0]`.
    pub(crate) fn from_lifted_column(lifted: &CMatrix, n: usize, m: usize) -> Bimatrix {
        let first = lifted.view((0, 0), (n, m)).into_owned();
        let second = lifted.view((n, 0), (n, m)).into_owned();
        Bimatrix { first, second }
    }

    fn require_square(&self, context: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::dims(context, "square bimatrix", format!("{:?}", self.shape())))
        }
    }

    /// Inverse through the lifting: `[A₃; A₄] = ({A₁,A₂}_⋄)⁻¹ [I; 0]`.
    pub fn inverse(&self) -> Result<Bimatrix> {
        self.require_square("bimatrix inverse")?;
        let n = self.nrows();
        let lifted = self.complex_lifting();
        let rc = linalg::complex_rcond(&lifted);
        if rc < SINGULAR_RCOND {
            return Err(Error::Singular("bimatrix", rc));
        }
        let mut rhs = CMatrix::zeros(2 * n, n);
        rhs.view_mut((0, 0), (n, n)).fill_with_identity();
        let sol = lifted.lu().solve(&rhs).ok_or(Error::Singular("bimatrix", rc))?;
        Ok(Bimatrix::from_lifted_column(&sol, n, n))
    }

    /// Closed-form inverse through `S₁ = A₁ - A₂^# A₁^{-#} A₂`, valid when
    /// `A₁` is invertible: `{S₁⁻¹, -A₁^{-#} A₂ S₁⁻¹}`.
    pub fn inverse_via_first(&self) -> Result<Bimatrix> {
        self.require_square("bimatrix inverse")?;
        let a1_conj_inv = invert(&conj(&self.first), "A1")?;
        let s1 = &self.first - conj(&self.second) * &a1_conj_inv * &self.second;
        let s1_inv = invert(&s1, "S1")?;
        let second = -(&a1_conj_inv * &self.second * &s1_inv);
        Ok(Bimatrix { first: s1_inv, second })
    }

    /// Closed-form inverse through `S₂ = A₂^# - A₁ A₂⁻¹ A₁^#`, valid when
    /// `A₂` is invertible: `{-A₂⁻¹ A₁^# S₂⁻¹, S₂⁻¹}`.
    pub fn inverse_via_second(&self) -> Result<Bimatrix> {
        self.require_square("bimatrix inverse")?;
        let a2_inv = invert(&self.second, "A2")?;
        let s2 = conj(&self.second) - &self.first * &a2_inv * conj(&self.first);
        let s2_inv = invert(&s2, "S2")?;
        let first = -(&a2_inv * conj(&self.first) * &s2_inv);
        Ok(Bimatrix { first, second: s2_inv })
    }

    /// `t`-fold product; `t = 0` gives the identity.
    pub fn power(&self, t: u32) -> Result<Bimatrix> {
        self.require_square("bimatrix power")?;
        let mut result = Bimatrix::identity(self.nrows());
        let mut base = self.clone();
        let mut k = t;
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `exp(t{A₁,A₂}) = {Φ₁(t), Φ₂(t)}`, evaluated as the real matrix
    /// exponential of `t·{A₁,A₂}_∘` mapped back to a bimatrix.
    pub fn exponent(&self, t: f64) -> Result<Bimatrix> {
        self.require_square("bimatrix exponent")?;
        if !t.is_finite() {
            return Err(Error::NonFinite("exponent time"));
        }
        let e = linalg::expm(&(self.real_representation() * t));
        Bimatrix::from_real_representation(&e)
    }

    /// The eigenvalue set: the `2n` eigenvalues of the real representation.
    pub fn eigenvalues(&self) -> Result<SpectrumSet> {
        self.require_square("bimatrix eigenvalues")?;
        let values = linalg::real_eigenvalues(&self.real_representation())?;
        SpectrumSet::new(values)
    }
}

fn invert(m: &CMatrix, what: &'static str) -> Result<CMatrix> {
    let rc = linalg::complex_rcond(m);
    if rc < SINGULAR_RCOND {
        return Err(Error::Singular(what, rc));
    }
    m.clone().try_inverse().ok_or(Error::Singular(what, rc))
}

impl fmt::Display for Bimatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Drop signed zeros so `{:.3}` output stays readable.
        let clean = |m: &CMatrix| m.map(|z| Complex64::new(z.re + 0.0, z.im + 0.0));
        match f.precision() {
            Some(p) => write!(f, "{{first:{:.p$}second:{:.p$}}}", clean(&self.first), clean(&self.second)),
            None => write!(f, "{{first:{}second:{}}}", clean(&self.first), clean(&self.second)),
        }
    }
}

macro_rules! bimatrix_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Bimatrix> for &Bimatrix {
            type Output = Bimatrix;
            /// Panics on a shape mismatch; see the `checked_` variant.
            fn $method(self, rhs: &Bimatrix) -> Bimatrix {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Bimatrix> for Bimatrix {
            type Output = Bimatrix;
            fn $method(self, rhs: Bimatrix) -> Bimatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

bimatrix_binop!(Add, add, checked_add);
bimatrix_binop!(Sub, sub, checked_sub);
bimatrix_binop!(Mul, mul, checked_mul);

impl Neg for &Bimatrix {
    type Output = Bimatrix;
    fn neg(self) -> Bimatrix {
        Bimatrix { first: -&self.first, second: -&self.second }
    }
}

impl Neg for Bimatrix {
    type Output = Bimatrix;
    fn neg(self) -> Bimatrix {
        -&self
    }
}

/// `H_n = (1/√2)[[I, jI], [I, -jI]]`, unitary, mapping `[Re x; Im x]` to
/// `(1/√2)[x; x^#]`.
pub fn h_matrix(n: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        h[(i, i)] = c(s, 0.0);
        h[(i, n + i)] = J * s;
        h[(n + i, i)] = c(s, 0.0);
        h[(n + i, n + i)] = -J * s;
    }
    h
}

/// `E_n = [[0, I], [I, 0]]`.
pub fn e_matrix(n: usize) -> CMatrix {
    let mut e = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        e[(i, n + i)] = c(1.0, 0.0);
        e[(n + i, i)] = c(1.0, 0.0);
    }
    e
}

/// A Hermite bimatrix `{P₁, P₂}`: `P₁ = P₁^H` and `P₂ = P₂^T`.
///
/// Its real representation is symmetric, so `Re(x^H{P₁,P₂}x)` is a real
/// quadratic form; positive definiteness is judged on that form.
#[derive(Clone, Debug, PartialEq)]
pub struct HermBimatrix(Bimatrix);

impl HermBimatrix {
    pub fn new(p1: CMatrix, p2: CMatrix) -> Result<Self> {
        Self::from_bimatrix(Bimatrix::new(p1, p2)?)
    }

    pub fn from_bimatrix(p: Bimatrix) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::dims("Hermite bimatrix", "square", format!("{:?}", p.shape())));
        }
        let r1 = (p.first() - p.first().adjoint()).norm();
        let r2 = (p.second() - p.second().transpose()).norm();
        if r1 > HERMITE_TOL * p.first().norm() || r2 > HERMITE_TOL * p.second().norm() {
            return Err(Error::InvalidInput(format!(
                "bimatrix is not Hermite (residuals {r1:.3e}, {r2:.3e})"
            )));
        }
        Ok(HermBimatrix(p))
    }

    /// Maps a real (nearly) symmetric matrix to its Hermite bimatrix after
    /// symmetrising.
    pub fn from_real_symmetric(p: &RMatrix) -> Result<Self> {
        let sym = linalg::symmetrize(p);
        let b = Bimatrix::from_real_representation(&sym)?;
        // Enforce exact Hermite structure lost to rounding.
        let p1 = (b.first() + b.first().adjoint()) * c(0.5, 0.0);
        let p2 = (b.second() + b.second().transpose()) * c(0.5, 0.0);
        Ok(HermBimatrix(Bimatrix::from_parts_unchecked(p1, p2)))
    }

    pub fn identity(n: usize) -> Self {
        HermBimatrix(Bimatrix::identity(n))
    }

    pub fn p1(&self) -> &CMatrix {
        self.0.first()
    }

    pub fn p2(&self) -> &CMatrix {
        self.0.second()
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_bimatrix(&self) -> &Bimatrix {
        &self.0
    }

    pub fn into_bimatrix(self) -> Bimatrix {
        self.0
    }

    /// True iff the real representation is symmetric positive definite,
    /// with smallest eigenvalue above `DEFINITE_TOL·‖P‖₂`.
    pub fn is_positive_definite(&self) -> bool {
        if self.order() == 0 {
            return true;
        }
        let pr = self.0.real_representation();
        let eig = linalg::symmetrize(&pr).symmetric_eigenvalues();
        let max_abs = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        max_abs > 0.0 && min > DEFINITE_TOL * max_abs
    }

    /// `Re(x^H (P₁x + P₂^# x^#))`.
    pub fn quadratic_form_real(&self, x: &CVector) -> Result<f64> {
        let y = self.0.apply(x)?;
        Ok(x.dotc(&y).re)
    }
}

impl fmt::Display for HermBimatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

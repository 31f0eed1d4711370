//! Complex-valued linear systems
//!
//! ```text
//! x⁺ = A₁x + A₂^#x^# + B₁u + B₂^#u^#
//! y  = C₁x + C₂^#x^# + D₁u + D₂^#u^#
//! ```
//!
//! where `x⁺` is `ẋ` in continuous time and `x(t+1)` in discrete time,
//! together with their real-representation and complex-lifting forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bimatrix::Bimatrix;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, RMatrix};
use crate::spectrum::SpectrumSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeDomain {
    Continuous,
    Discrete,
}

impl fmt::Display for TimeDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeDomain::Continuous => f.write_str("continuous"),
            TimeDomain::Discrete => f.write_str("discrete"),
        }
    }
}

/// The eight coefficient matrices, grouped as four bimatrices.
#[derive(Clone, Debug, PartialEq)]
pub struct CxSystem {
    a: Bimatrix,
    b: Bimatrix,
    c: Bimatrix,
    d: Bimatrix,
    domain: TimeDomain,
}

impl CxSystem {
    pub fn new(a: Bimatrix, b: Bimatrix, c: Bimatrix, d: Bimatrix, domain: TimeDomain) -> Result<Self> {
        let n = a.nrows();
        if !a.is_square() {
            return Err(Error::dims("system matrix A", "square", format!("{:?}", a.shape())));
        }
        if b.nrows() != n {
            return Err(Error::dims("input matrix B rows", n, b.nrows()));
        }
        if c.ncols() != n {
            return Err(Error::dims("output matrix C columns", n, c.ncols()));
        }
        if d.shape() != (c.nrows(), b.ncols()) {
            return Err(Error::dims(
                "feedthrough matrix D",
                format!("{:?}", (c.nrows(), b.ncols())),
                format!("{:?}", d.shape()),
            ));
        }
        Ok(CxSystem { a, b, c, d, domain })
    }

    /// System with full-state output `y = x` and no feedthrough.
    pub fn with_state_output(a: Bimatrix, b: Bimatrix, domain: TimeDomain) -> Result<Self> {
        let n = a.nrows();
        let m = b.ncols();
        CxSystem::new(a, b, Bimatrix::identity(n), Bimatrix::zeros(n, m), domain)
    }

    /// `x⁺ = A₁x + B₁u, y = C₁x + D₁u`; `D₁` defaults to zero.
    pub fn make_normal(
        a1: CMatrix,
        b1: CMatrix,
        c1: CMatrix,
        d1: Option<CMatrix>,
        domain: TimeDomain,
    ) -> Result<Self> {
        let d1 = d1.unwrap_or_else(|| CMatrix::zeros(c1.nrows(), b1.ncols()));
        CxSystem::new(
            Bimatrix::normal(a1),
            Bimatrix::normal(b1),
            Bimatrix::normal(c1),
            Bimatrix::normal(d1),
            domain,
        )
    }

    /// `x⁺ = A₂^#x^# + B₂^#u^#, y = C₂^#x^# + D₂^#u^#`; `D₂` defaults to zero.
    pub fn make_antilinear(
        a2: CMatrix,
        b2: CMatrix,
        c2: CMatrix,
        d2: Option<CMatrix>,
        domain: TimeDomain,
    ) -> Result<Self> {
        let d2 = d2.unwrap_or_else(|| CMatrix::zeros(c2.nrows(), b2.ncols()));
        CxSystem::new(
            Bimatrix::antilinear(a2),
            Bimatrix::antilinear(b2),
            Bimatrix::antilinear(c2),
            Bimatrix::antilinear(d2),
            domain,
        )
    }

    pub fn a(&self) -> &Bimatrix {
        &self.a
    }

    pub fn b(&self) -> &Bimatrix {
        &self.b
    }

    pub fn c(&self) -> &Bimatrix {
        &self.c
    }

    pub fn d(&self) -> &Bimatrix {
        &self.d
    }

    pub fn domain(&self) -> TimeDomain {
        self.domain
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Input dimension.
    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    /// Output dimension.
    pub fn p(&self) -> usize {
        self.c.nrows()
    }

    /// All second components vanish.
    pub fn is_normal(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|bm| bm.second().iter().all(|z| *z == c(0.0, 0.0)))
    }

    /// All first components vanish.
    pub fn is_antilinear(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|bm| bm.first().iter().all(|z| *z == c(0.0, 0.0)))
    }

    /// Replaces the state matrix, keeping the other coefficients.
    pub fn with_a(&self, a: Bimatrix) -> Result<Self> {
        CxSystem::new(a, self.b.clone(), self.c.clone(), self.d.clone(), self.domain)
    }

    pub fn with_output(&self, c: Bimatrix, d: Bimatrix) -> Result<Self> {
        CxSystem::new(self.a.clone(), self.b.clone(), c, d, self.domain)
    }

    /// The dual system `({A}^H, {C}^H, {B}^H, {D}^H)`.
    pub fn dual(&self) -> CxSystem {
        CxSystem {
            a: self.a.conj_transpose(),
            b: self.c.conj_transpose(),
            c: self.b.conj_transpose(),
            d: self.d.conj_transpose(),
            domain: self.domain,
        }
    }

    pub fn eigenvalues(&self) -> Result<SpectrumSet> {
        self.a.eigenvalues()
    }

    pub fn to_real_representation(&self) -> RealSystem {
        RealSystem {
            a: self.a.real_representation(),
            b: self.b.real_representation(),
            c: self.c.real_representation(),
            d: self.d.real_representation(),
            domain: self.domain,
        }
    }

    pub fn to_complex_lifting(&self) -> LiftedSystem {
        LiftedSystem {
            a: self.a.complex_lifting(),
            b: self.b.complex_lifting(),
            c: self.c.complex_lifting(),
            d: self.d.complex_lifting(),
            domain: self.domain,
        }
    }

    /// `{G₁(s), G₂(s)} = {C}{sI - A₁, -A₂}⁻¹{B} + {D}` at a real `s`.
    pub fn transfer_function(&self, s: f64) -> Result<Bimatrix> {
        if !s.is_finite() {
            return Err(Error::NonFinite("transfer function argument"));
        }
        let n = self.n();
        let resolvent = Bimatrix::new(
            CMatrix::identity(n, n) * c(s, 0.0) - self.a.first(),
            -self.a.second(),
        )?
        .inverse()?;
        Ok(&(&self.c * &(&resolvent * &self.b)) + &self.d)
    }
}

/// The `2n`-dimensional real system acting on `[Re x; Im x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSystem {
    pub a: RMatrix,
    pub b: RMatrix,
    pub c: RMatrix,
    pub d: RMatrix,
    pub domain: TimeDomain,
}

impl RealSystem {
    pub fn new(a: RMatrix, b: RMatrix, c: RMatrix, d: RMatrix, domain: TimeDomain) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::dims("real system matrix A", "square", format!("{:?}", a.shape())));
        }
        if b.nrows() != n {
            return Err(Error::dims("real input matrix B rows", n, b.nrows()));
        }
        if c.ncols() != n {
            return Err(Error::dims("real output matrix C columns", n, c.ncols()));
        }
        if d.shape() != (c.nrows(), b.ncols()) {
            return Err(Error::dims(
                "real feedthrough matrix D",
                format!("{:?}", (c.nrows(), b.ncols())),
                format!("{:?}", d.shape()),
            ));
        }
        Ok(RealSystem { a, b, c, d, domain })
    }

    /// `C(sI - A)⁻¹B + D`.
    pub fn transfer_function(&self, s: f64) -> Result<RMatrix> {
        let n = self.a.nrows();
        let resolvent = (RMatrix::identity(n, n) * s - &self.a)
            .try_inverse()
            .ok_or(Error::Singular("sI - A", 0.0))?;
        Ok(&self.c * resolvent * &self.b + &self.d)
    }

    /// Splits every block as `A₁ = ½(A₁₁+A₂₂) + (j/2)(A₂₁-A₁₂)`,
    /// `A₂ = ½(A₁₁-A₂₂) - (j/2)(A₂₁+A₁₂)`; the state pairing is
    /// `x = ξ₁ + jξ₂`.
    pub fn to_complex(&self) -> Result<CxSystem> {
        CxSystem::new(
            Bimatrix::from_real_representation(&self.a)?,
            Bimatrix::from_real_representation(&self.b)?,
            Bimatrix::from_real_representation(&self.c)?,
            Bimatrix::from_real_representation(&self.d)?,
            self.domain,
        )
    }

    /// Largest relative residual `‖M - {from(M)}_∘‖ / ‖M‖` over the four
    /// blocks.
    pub fn conversion_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for m in [&self.a, &self.b, &self.c, &self.d] {
            let back = Bimatrix::from_real_representation(m)?.real_representation();
            let scale = m.norm();
            if scale > 0.0 {
                worst = worst.max((m - back).norm() / scale);
            }
        }
        Ok(worst)
    }

    /// Whether [`RealSystem::to_complex`] reproduces this system exactly
    /// (relative residual at most `1e-12`).
    pub fn is_exact_conversion(&self) -> Result<bool> {
        Ok(self.conversion_residual()? <= 1e-12)
    }
}

/// Converts an even-dimensional real system to its complex-valued form.
pub fn from_real_system(
    a: RMatrix,
    b: RMatrix,
    c: RMatrix,
    d: RMatrix,
    domain: TimeDomain,
) -> Result<CxSystem> {
    RealSystem::new(a, b, c, d, domain)?.to_complex()
}

/// The `2n`-dimensional complex system acting on `(1/√2)[x; x^#]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedSystem {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    pub domain: TimeDomain,
}

use rand::Rng;

use crate::analysis::{self, is_observable};
use crate::bimatrix::Bimatrix;
use crate::error::{Error, Result};
use crate::spectrum::SpectrumSet;
use crate::system::CxSystem;

use super::placement::place_real;
use super::GainBimatrix;

/// Observer gain `{L₁, L₂}` (n×p) for
///
/// ```text
/// z⁺ = {A}z + {B}u + {L}({C}z + {D}u - y)
/// ```
///
/// so that the error `e = z - x` obeys `e⁺ = ({A} + {L}{C})e` with spectrum
/// `gamma`. Computed by dual placement on `(A_Rᵀ, C_Rᵀ)`.
pub fn design_observer(sys: &CxSystem, gamma: &SpectrumSet, rng: &mut impl Rng) -> Result<Bimatrix> {
    if gamma.len() != 2 * sys.n() {
        return Err(Error::InvalidInput(format!(
            "observer spectrum has {} values, expected {}",
            gamma.len(),
            2 * sys.n()
        )));
    }
    if !gamma.is_stable(sys.domain(), analysis::STABILITY_TOL) {
        return Err(Error::InvalidInput("observer spectrum must lie in the stability region".into()));
    }
    let obsv = is_observable(sys)?;
    if !obsv.holds {
        let det = analysis::is_detectable(sys)?;
        return Err(if det.holds { Error::Unobservable(obsv.margin) } else { Error::NotDetectable(det.margin) });
    }
    let ar = sys.a().real_representation();
    let cr = sys.c().real_representation();
    let kd = place_real(&ar.transpose(), &cr.transpose(), gamma, rng)?;
    Bimatrix::from_real_representation(&kd.transpose())
}

/// Observer error bimatrix `{A} + {L}{C}`.
pub fn observer_error(sys: &CxSystem, l: &Bimatrix) -> Result<Bimatrix> {
    sys.a().checked_add(&l.checked_mul(sys.c())?)
}

fn block2(tl: &Bimatrix, tr: &Bimatrix, bl: &Bimatrix, br: &Bimatrix) -> Result<Bimatrix> {
    let stack = |f: fn(&Bimatrix) -> &crate::CMatrix| {
        let (r1, c1) = tl.shape();
        let (r2, c2) = br.shape();
        let mut out = crate::CMatrix::zeros(r1 + r2, c1 + c2);
        out.view_mut((0, 0), (r1, c1)).copy_from(f(tl));
        out.view_mut((0, c1), (r1, c2)).copy_from(f(tr));
        out.view_mut((r1, 0), (r2, c1)).copy_from(f(bl));
        out.view_mut((r1, c1), (r2, c2)).copy_from(f(br));
        out
    };
    Bimatrix::new(stack(Bimatrix::first), stack(Bimatrix::second))
}

/// Observer-based feedback `u = {K}z + v` on the stacked state `[x; z]`:
///
/// ```text
/// x⁺ = {A}x + {B}{K}z + {B}v
/// z⁺ = -{L}{C}x + ({A} + {B}{K} + {L}{C})z + {B}v
/// ```
///
/// with output `y = {C}x + {D}{K}z + {D}v`.
pub fn observer_feedback_loop(sys: &CxSystem, k: &GainBimatrix, l: &Bimatrix) -> Result<CxSystem> {
    let (a, b, c, d) = (sys.a(), sys.b(), sys.c(), sys.d());
    let bk = b.checked_mul(k)?;
    let lc = l.checked_mul(c)?;
    let top_left = a.clone();
    let bottom_right = a.checked_add(&bk)?.checked_add(&lc)?;
    let big_a = block2(&top_left, &bk, &-&lc, &bottom_right)?;
    let big_b = Bimatrix::new(
        stack_rows(b.first(), b.first()),
        stack_rows(b.second(), b.second()),
    )?;
    let dk = d.checked_mul(k)?;
    let big_c = Bimatrix::new(stack_cols(c.first(), dk.first()), stack_cols(c.second(), dk.second()))?;
    CxSystem::new(big_a, big_b, big_c, d.clone(), sys.domain())
}

fn stack_rows(top: &crate::CMatrix, bottom: &crate::CMatrix) -> crate::CMatrix {
    let mut out = crate::CMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}

fn stack_cols(left: &crate::CMatrix, right: &crate::CMatrix) -> crate::CMatrix {
    let mut out = crate::CMatrix::zeros(left.nrows(), left.ncols() + right.ncols());
    out.view_mut((0, 0), left.shape()).copy_from(left);
    out.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    out
}

use std::collections::hash_map::{Entry, HashMap};

use crate::bimatrix::Bimatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CVector, RMatrix};
use crate::system::{CxSystem, TimeDomain};

/// `{Φ₁(t), Φ₂(t)}`: `exp(t{A})` in continuous time, `{A}^t` in discrete time.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionPair {
    pub phi: Bimatrix,
    pub t: f64,
}

impl TransitionPair {
    pub fn phi1(&self) -> &crate::CMatrix {
        self.phi.first()
    }

    pub fn phi2(&self) -> &crate::CMatrix {
        self.phi.second()
    }
}

pub fn transition_pair(sys: &CxSystem, t: f64) -> Result<TransitionPair> {
    if !t.is_finite() {
        return Err(Error::NonFinite("transition time"));
    }
    let phi = match sys.domain() {
        TimeDomain::Continuous => sys.a().exponent(t)?,
        TimeDomain::Discrete => {
            if t.fract() != 0.0 {
                return Err(Error::InvalidInput(format!("discrete time must be an integer, got {t}")));
            }
            let k = t.abs() as u32;
            if t >= 0.0 {
                sys.a().power(k)?
            } else {
                sys.a().inverse()?.power(k)?
            }
        }
    };
    Ok(TransitionPair { phi, t })
}

/// Input applied on a simulation grid; sampled values are held constant
/// over each step.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSignal {
    Zero,
    Constant(CVector),
    /// One sample per grid point.
    Samples(Vec<CVector>),
}

impl InputSignal {
    fn at(&self, k: usize, m: usize) -> Result<CVector> {
        let u = match self {
            InputSignal::Zero => CVector::zeros(m),
            InputSignal::Constant(u) => u.clone(),
            InputSignal::Samples(us) => us
                .get(k)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("input has no sample for grid point {k}")))?,
        };
        if u.len() != m {
            return Err(Error::dims("input sample", m, u.len()));
        }
        Ok(u)
    }
}

/// Sampled trajectory of a simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct SimTrace {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    pub inputs: Vec<CVector>,
    pub outputs: Vec<CVector>,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&CVector> {
        self.states.last()
    }
}

/// `0, dt, 2dt, …` up to `horizon` (inclusive, within rounding); discrete
/// grids use unit steps regardless of `dt`.
pub fn uniform_grid(domain: TimeDomain, horizon: f64, dt: f64) -> Result<Vec<f64>> {
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::InvalidInput(format!("horizon must be finite and nonnegative, got {horizon}")));
    }
    match domain {
        TimeDomain::Discrete => Ok((0..=horizon.floor() as usize).map(|k| k as f64).collect()),
        TimeDomain::Continuous => {
            if !dt.is_finite() || dt <= 0.0 {
                return Err(Error::InvalidInput(format!("step must be positive, got {dt}")));
            }
            let steps = (horizon / dt + 1e-9).floor() as usize;
            Ok((0..=steps).map(|k| k as f64 * dt).collect())
        }
    }
}

/// Zero-order-hold step pair `(Φ(h), Γ(h))` as bimatrices, from the
/// exponential of the augmented real matrix `[[A_R, B_R], [0, 0]]·h`.
fn zoh_step(sys: &CxSystem, h: f64) -> Result<(Bimatrix, Bimatrix)> {
    let ar = sys.a().real_representation();
    let br = sys.b().real_representation();
    let (n2, m2) = br.shape();
    let mut aug = RMatrix::zeros(n2 + m2, n2 + m2);
    aug.view_mut((0, 0), (n2, n2)).copy_from(&(ar * h));
    aug.view_mut((0, n2), (n2, m2)).copy_from(&(br * h));
    let e = linalg::expm(&aug);
    let phi = Bimatrix::from_real_representation(&e.view((0, 0), (n2, n2)).into_owned())?;
    let gamma = Bimatrix::from_real_representation(&e.view((0, n2), (n2, m2)).into_owned())?;
    Ok((phi, gamma))
}

/// Simulates the system from `x0` over `grid`.
///
/// Discrete systems use the exact recursion; continuous systems use the
/// exact zero-order-hold discretisation of every step.
pub fn state_response(sys: &CxSystem, x0: &CVector, u: &InputSignal, grid: &[f64]) -> Result<SimTrace> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty time grid".into()));
    }
    if x0.len() != sys.n() {
        return Err(Error::dims("initial state", sys.n(), x0.len()));
    }
    if grid[0] != 0.0 {
        return Err(Error::InvalidInput(format!("time grid must start at 0, got {}", grid[0])));
    }
    if grid.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
        return Err(Error::InvalidInput("time grid must be strictly increasing".into()));
    }
    if sys.domain() == TimeDomain::Discrete && grid.iter().enumerate().any(|(k, &t)| t != k as f64) {
        return Err(Error::InvalidInput("discrete grid must be 0, 1, 2, …".into()));
    }
    if let InputSignal::Samples(us) = u {
        if us.len() < grid.len() {
            return Err(Error::InvalidInput(format!("{} input samples for {} grid points", us.len(), grid.len())));
        }
    }

    let m = sys.m();
    let mut states = Vec::with_capacity(grid.len());
    let mut inputs = Vec::with_capacity(grid.len());
    let mut outputs = Vec::with_capacity(grid.len());
    let mut steps: HashMap<u64, (Bimatrix, Bimatrix)> = HashMap::new();

    let mut x = x0.clone();
    for k in 0..grid.len() {
        let uk = u.at(k, m)?;
        outputs.push(sys.c().apply(&x)? + sys.d().apply(&uk)?);
        states.push(x.clone());
        if k + 1 < grid.len() {
            x = match sys.domain() {
                TimeDomain::Discrete => sys.a().apply(&x)? + sys.b().apply(&uk)?,
                TimeDomain::Continuous => {
                    let h = grid[k + 1] - grid[k];
                    let (phi, gamma) = match steps.entry(h.to_bits()) {
                        Entry::Occupied(e) => e.into_mut(),
                        Entry::Vacant(e) => e.insert(zoh_step(sys, h)?),
                    };
                    phi.apply(&x)? + gamma.apply(&uk)?
                }
            };
        }
        inputs.push(uk);
    }
    Ok(SimTrace { times: grid.to_vec(), states, inputs, outputs })
}

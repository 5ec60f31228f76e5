//! Walk operators and time stepping.
//!
//! One step applies, in order, the intensity-dependent Kerr phase, the coin
//! on every site and the barrier-perturbed flip-flop shift:
//!
//! ```text
//! |psi(t+1)> = S_p (C (x) I) K[P(t)] |psi(t)>
//! ```
//!
//! The Kerr phases are computed from the site probabilities at the start of
//! the step.

mod dense;

pub use dense::{coin_operator_matrix, dense_step_oracle, kerr_matrix, shift_matrix, unitarity_defect, DenseMatrix, ORACLE_MAX_SITES};

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::observables::{ObservableSeries, Recorder};
use crate::state::{WalkerState, MIN_SITES};

/// Magnitude above which amplitude leaving an open lattice is an error.
pub const EDGE_TOLERANCE: f64 = 1e-12;

/// Real 2x2 coin `cos(theta) Z + sin(theta) X`, stored as complex entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinMatrix {
    pub theta: f64,
    pub c: [[Complex64; 2]; 2],
}

impl CoinMatrix {
    pub fn new(theta: f64) -> Self {
        let theta = theta.rem_euclid(TAU);
        let (s, c) = theta.sin_cos();
        let re = |x: f64| Complex64::new(x, 0.0);
        CoinMatrix { theta, c: [[re(c), re(s)], [re(s), re(-c)]] }
    }

    pub fn hadamard() -> Self {
        Self::new(PI / 4.0)
    }

    #[inline]
    pub fn apply(&self, up: Complex64, down: Complex64) -> (Complex64, Complex64) {
        let m = &self.c;
        (m[0][0] * up + m[0][1] * down, m[1][0] * up + m[1][1] * down)
    }

    pub fn determinant(&self) -> Complex64 {
        self.c[0][0] * self.c[1][1] - self.c[0][1] * self.c[1][0]
    }
}

pub fn build_coin(theta: f64) -> CoinMatrix {
    CoinMatrix::new(theta)
}

/// Folds any barrier angle into `[0, pi/2]`.
///
/// The probability dynamics depend on `phi` only through `phi mod pi`
/// (a shift by `pi` flips the sign of the whole shift operator) and are
/// unchanged by `alpha -> -alpha` (the gauge `(-1)^n` on the amplitudes),
/// which maps `phi` to `pi - phi`. Returns the reduced angle and whether
/// any reduction took place.
pub fn reduce_phi(phi: f64) -> (f64, bool) {
    if (0.0..=FRAC_PI_2).contains(&phi) {
        return (phi, false);
    }
    let mut r = phi.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r = PI - r;
    }
    (r, true)
}

/// Hopping (`alpha = cos phi`) and on-site (`beta = i sin phi`) amplitudes of
/// the perturbed shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftParams {
    pub phi: f64,
    pub alpha: f64,
    pub beta: Complex64,
}

impl ShiftParams {
    /// Angles outside `[0, pi/2]` are folded back with [`reduce_phi`] and a
    /// warning is logged.
    pub fn new(phi: f64) -> Self {
        let (reduced, changed) = reduce_phi(phi);
        if changed {
            log::warn!("phi = {phi} outside [0, pi/2]; reduced by symmetry to {reduced}");
        }
        let (s, c) = reduced.sin_cos();
        ShiftParams { phi: reduced, alpha: c, beta: Complex64::new(0.0, s) }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

/// Which intensity drives the Kerr phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KerrMode {
    /// Both components at site `n` rotate by `2 pi chi P_n`, with `P_n` the
    /// spin-summed site probability.
    #[default]
    Total,
    /// Each component rotates by its own intensity `2 pi chi |psi_{n,s}|^2`.
    PerComponent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkParams {
    pub coin: CoinMatrix,
    pub shift: ShiftParams,
    pub chi: f64,
    pub sites: usize,
    pub n0: usize,
    pub boundary: Boundary,
    pub kerr_mode: KerrMode,
}

impl WalkParams {
    /// Periodic lattice of `sites` sites with the walker starting at the
    /// centre and the total-intensity Kerr phase.
    pub fn new(theta: f64, phi: f64, chi: f64, sites: usize) -> Result<Self> {
        Self::with_origin(theta, phi, chi, sites, sites / 2)
    }

    pub fn with_origin(theta: f64, phi: f64, chi: f64, sites: usize, n0: usize) -> Result<Self> {
        if !(chi >= 0.0 && chi.is_finite()) {
            return Err(WalkError::InvalidParameter(format!("chi must be finite and >= 0, got {chi}")));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(WalkError::InvalidParameter("theta and phi must be finite".into()));
        }
        if sites < MIN_SITES {
            return Err(WalkError::InvalidDimension(format!("lattice needs at least {MIN_SITES} sites, got {sites}")));
        }
        if n0 >= sites {
            return Err(WalkError::InvalidDimension(format!("initial site {n0} outside lattice of {sites} sites")));
        }
        Ok(WalkParams {
            coin: CoinMatrix::new(theta),
            shift: ShiftParams::new(phi),
            chi,
            sites,
            n0,
            boundary: Boundary::Periodic,
            kerr_mode: KerrMode::Total,
        })
    }

    pub fn boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn kerr_mode(mut self, mode: KerrMode) -> Self {
        self.kerr_mode = mode;
        self
    }

    pub fn theta(&self) -> f64 {
        self.coin.theta
    }

    pub fn phi(&self) -> f64 {
        self.shift.phi
    }

    pub fn initial_state(&self) -> Result<WalkerState> {
        WalkerState::init_symmetric(self.sites, self.n0)
    }
}

/// Smallest lattice on which `steps` steps from the centre never reach the
/// periodic seam.
pub fn sites_for_steps(steps: usize) -> usize {
    2 * steps + 3
}

/// Multiplies every amplitude by its intensity-dependent phase.
pub fn apply_kerr(state: &mut WalkerState, chi: f64, mode: KerrMode) {
    if chi == 0.0 {
        return;
    }
    let k = TAU * chi;
    match mode {
        KerrMode::Total => {
            for (u, d) in state.up.iter_mut().zip(state.down.iter_mut()) {
                let p = u.norm_sqr() + d.norm_sqr();
                let phase = Complex64::cis(k * p);
                *u *= phase;
                *d *= phase;
            }
        }
        KerrMode::PerComponent => {
            for z in state.up.iter_mut().chain(state.down.iter_mut()) {
                *z *= Complex64::cis(k * z.norm_sqr());
            }
        }
    }
}

pub fn apply_coin(state: &mut WalkerState, coin: &CoinMatrix) {
    for (u, d) in state.up.iter_mut().zip(state.down.iter_mut()) {
        (*u, *d) = coin.apply(*u, *d);
    }
}

/// Perturbed flip-flop shift:
/// `|up, n> -> alpha |down, n+1> + beta |up, n>` and
/// `|down, n> -> alpha |up, n-1> + beta |down, n>`.
///
/// On an open lattice the state is left untouched and an error is returned
/// if any amplitude above [`EDGE_TOLERANCE`] would hop off an edge.
pub fn apply_shift(state: &mut WalkerState, shift: &ShiftParams, boundary: Boundary) -> Result<()> {
    let n = state.sites();
    let (alpha, beta) = (shift.alpha, shift.beta);
    if boundary == Boundary::Open {
        let out_right = (alpha * state.up[n - 1]).norm();
        let out_left = (alpha * state.down[0]).norm();
        if out_right > EDGE_TOLERANCE || out_left > EDGE_TOLERANCE {
            let (site, magnitude) = if out_right >= out_left { (n - 1, out_right) } else { (0, out_left) };
            return Err(WalkError::BoundaryOverflow { step: state.t, site, magnitude });
        }
    }

    // In-place sweep in increasing n: up[n] needs the old down[n+1], which is
    // not yet overwritten, and down[n] needs the old up[n-1], carried along.
    let first_down = state.down[0];
    let mut carry_up = match boundary {
        Boundary::Periodic => state.up[n - 1],
        Boundary::Open => Complex64::new(0.0, 0.0),
    };
    for i in 0..n {
        let old_up = state.up[i];
        let next_down = if i + 1 < n {
            state.down[i + 1]
        } else if boundary == Boundary::Periodic {
            first_down
        } else {
            Complex64::new(0.0, 0.0)
        };
        state.up[i] = beta * old_up + alpha * next_down;
        state.down[i] = beta * state.down[i] + alpha * carry_up;
        carry_up = old_up;
    }
    Ok(())
}

/// Advances the state by one step.
pub fn step(state: &mut WalkerState, params: &WalkParams) -> Result<()> {
    if state.sites() != params.sites {
        return Err(WalkError::InvalidDimension(format!(
            "state has {} sites, parameters expect {}",
            state.sites(),
            params.sites
        )));
    }
    apply_kerr(state, params.chi, params.kerr_mode);
    apply_coin(state, &params.coin);
    apply_shift(state, &params.shift, params.boundary)?;
    state.t += 1;
    Ok(())
}

/// Runs `steps` steps, handing the state to `recorder` before the first step
/// and after each one.
pub fn evolve(state: &mut WalkerState, params: &WalkParams, steps: usize, recorder: &Recorder) -> Result<ObservableSeries> {
    let mut series = recorder.start(state.n0());
    series.observe(state.t(), &*state);
    for _ in 0..steps {
        step(state, params)?;
        if series.wants(state.t()) {
            series.observe(state.t(), &*state);
        }
    }
    Ok(series.finish())
}

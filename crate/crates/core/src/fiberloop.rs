//! Time-multiplexed fiber-loop emulation.
//!
//! Two coupled loops of different lengths carry pulse trains `u` (short
//! path, moving left) and `v` (long path, moving right). Each round trip
//! applies a per-pulse Kerr phase `exp(i gamma |amplitude|^2)` and a balanced
//! coupler `(1/sqrt 2) [[1, i], [i, 1]]`:
//!
//! ```text
//! u'[n] = (a[n+1] + i b[n+1]) / sqrt 2
//! v'[n] = (b[n-1] + i a[n-1]) / sqrt 2
//! a = u exp(i gamma |u|^2),  b = v exp(i gamma |v|^2)
//! ```
//!
//! Indices wrap periodically.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::observables::{ObservableSeries, Recorder, TwoComponentField};
use crate::state::MIN_SITES;

#[derive(Clone, Debug, PartialEq)]
pub struct LoopState {
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    m: usize,
    n0: usize,
    gamma: f64,
    allow_wrap: bool,
}

impl LoopState {
    /// Single pulse `u[n0] = 1/sqrt 2`, `v[n0] = i/sqrt 2`.
    pub fn single_pulse(sites: usize, n0: usize, gamma: f64) -> Result<Self> {
        let mut u = vec![Complex64::new(0.0, 0.0); sites];
        let mut v = u.clone();
        if n0 < sites {
            u[n0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            v[n0] = Complex64::new(0.0, FRAC_1_SQRT_2);
        }
        Self::from_amplitudes(u, v, n0, gamma)
    }

    /// Arbitrary pulse amplitudes, rescaled to unit total intensity.
    pub fn from_amplitudes(mut u: Vec<Complex64>, mut v: Vec<Complex64>, n0: usize, gamma: f64) -> Result<Self> {
        if u.len() != v.len() || u.len() < MIN_SITES || n0 >= u.len() {
            return Err(WalkError::InvalidDimension(format!(
                "loop lattice of {} / {} positions with origin {n0}",
                u.len(),
                v.len()
            )));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(WalkError::InvalidParameter(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        let norm: f64 = u.iter().chain(&v).map(|z| z.norm_sqr()).sum();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(WalkError::InvalidParameter(format!("pulse train cannot be normalized (intensity {norm})")));
        }
        let scale = norm.sqrt().recip();
        u.iter_mut().chain(v.iter_mut()).for_each(|z| *z *= scale);
        Ok(LoopState { u, v, m: 0, n0, gamma, allow_wrap: false })
    }

    /// Lets [`loop_evolve`] run long enough for pulses to wrap around the
    /// lattice.
    pub fn allow_wrap(mut self, allow: bool) -> Self {
        self.allow_wrap = allow;
        self
    }

    pub fn sites(&self) -> usize {
        self.u.len()
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn u(&self) -> &[Complex64] {
        &self.u
    }

    pub fn v(&self) -> &[Complex64] {
        &self.v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u.iter().chain(&self.v).map(|z| z.norm_sqr()).sum()
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect()
    }
}

impl TwoComponentField for LoopState {
    fn sites(&self) -> usize {
        self.u.len()
    }

    #[inline]
    fn component_probabilities(&self, n: usize) -> (f64, f64) {
        (self.u[n].norm_sqr(), self.v[n].norm_sqr())
    }
}

/// One round trip through both loops.
pub fn loop_step(state: &mut LoopState) {
    let sites = state.sites();
    let gamma = state.gamma;
    let kerr = |z: Complex64| z * Complex64::cis(gamma * z.norm_sqr());
    let a: Vec<Complex64> = state.u.iter().map(|&z| kerr(z)).collect();
    let b: Vec<Complex64> = state.v.iter().map(|&z| kerr(z)).collect();
    let i = Complex64::new(0.0, 1.0);
    for n in 0..sites {
        let next = (n + 1) % sites;
        let prev = (n + sites - 1) % sites;
        state.u[n] = (a[next] + i * b[next]) * FRAC_1_SQRT_2;
        state.v[n] = (b[prev] + i * a[prev]) * FRAC_1_SQRT_2;
    }
    state.m += 1;
}

/// Repeated [`loop_step`] with the same recording as the walk. Refuses runs
/// long enough to wrap unless [`LoopState::allow_wrap`] was set.
pub fn loop_evolve(state: &mut LoopState, steps: usize, recorder: &Recorder) -> Result<ObservableSeries> {
    let reach = state.m + steps;
    if !state.allow_wrap && (state.n0 < reach || state.n0 + reach >= state.sites()) {
        return Err(WalkError::InvalidDimension(format!(
            "{} positions around origin {} cannot hold {reach} round trips without wrapping",
            state.sites(),
            state.n0
        )));
    }
    let mut series = recorder.start(state.n0);
    series.observe(state.m, &*state);
    for _ in 0..steps {
        loop_step(state);
        if series.wants(state.m) {
            series.observe(state.m, &*state);
        }
    }
    Ok(series.finish())
}

//! Localization diagnostics: participation function, survival probability,
//! long-time averages, power-law exponents and lobe positions.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::state::{SiteProbability, WalkerState};

/// Trailing window used for long-time averages.
pub const DEFAULT_WINDOW: usize = 200;

/// First step included in power-law fits by default.
pub const DEFAULT_FIT_START: usize = 50;

/// Survival probabilities at or below this value are dropped from log fits.
pub const FIT_FLOOR: f64 = 1e-15;

const DEGENERATE_SUM: f64 = 1e-300;

/// Anything that exposes a two-component probability per lattice site.
pub trait TwoComponentField {
    fn sites(&self) -> usize;
    fn component_probabilities(&self, n: usize) -> (f64, f64);
}

impl TwoComponentField for WalkerState {
    fn sites(&self) -> usize {
        WalkerState::sites(self)
    }

    #[inline]
    fn component_probabilities(&self, n: usize) -> (f64, f64) {
        (self.up()[n].norm_sqr(), self.down()[n].norm_sqr())
    }
}

/// Spin- (or path-) resolved probabilities at one step.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: usize,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

impl Snapshot {
    pub fn capture<F: TwoComponentField>(t: usize, field: &F) -> Self {
        let (first, second) = (0..field.sites()).map(|n| field.component_probabilities(n)).unzip();
        Snapshot { t, first, second }
    }

    pub fn total(&self) -> SiteProbability {
        SiteProbability(self.first.iter().zip(&self.second).map(|(a, b)| a + b).collect())
    }

    /// CSV with header `n,p_<first>,p_<second>,p_total`.
    pub fn write_csv<W: Write>(&self, labels: (&str, &str), mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,p_{},p_{},p_total", labels.0, labels.1)?;
        for (n, (a, b)) in self.first.iter().zip(&self.second).enumerate() {
            writeln!(out, "{n},{a},{b},{}", a + b)?;
        }
        Ok(())
    }
}

/// What to record while evolving.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recorder {
    /// Record `xi` and `sp` at every multiple of `stride` (and at `t = 0`).
    pub stride: usize,
    /// Steps at which to keep a full snapshot.
    pub snapshots: Vec<usize>,
}

impl Default for Recorder {
    fn default() -> Self {
        Recorder { stride: 1, snapshots: Vec::new() }
    }
}

impl Recorder {
    pub fn with_stride(stride: usize) -> Self {
        Recorder { stride: stride.max(1), snapshots: Vec::new() }
    }

    pub fn snapshots(mut self, at: impl IntoIterator<Item = usize>) -> Self {
        self.snapshots = at.into_iter().collect();
        self.snapshots.sort_unstable();
        self.snapshots.dedup();
        self
    }

    pub fn start(&self, n0: usize) -> SeriesBuilder {
        SeriesBuilder { recorder: self.clone(), series: ObservableSeries { n0, ..Default::default() } }
    }
}

/// Accumulates an [`ObservableSeries`] step by step.
#[derive(Debug)]
pub struct SeriesBuilder {
    recorder: Recorder,
    series: ObservableSeries,
}

impl SeriesBuilder {
    /// Whether anything is recorded at step `t`.
    pub fn wants(&self, t: usize) -> bool {
        t.is_multiple_of(self.recorder.stride.max(1)) || self.recorder.snapshots.binary_search(&t).is_ok()
    }

    pub fn observe<F: TwoComponentField>(&mut self, t: usize, field: &F) {
        if t.is_multiple_of(self.recorder.stride.max(1)) {
            let n0 = self.series.n0;
            let mut sum_sq = 0.0;
            let mut at_origin = 0.0;
            for n in 0..field.sites() {
                let (a, b) = field.component_probabilities(n);
                let p = a + b;
                sum_sq += p * p;
                if n == n0 {
                    at_origin = p;
                }
            }
            self.series.times.push(t);
            self.series.xi.push(sum_sq.recip());
            self.series.sp.push(at_origin);
        }
        if self.recorder.snapshots.binary_search(&t).is_ok() {
            self.series.snapshots.push(Snapshot::capture(t, field));
        }
    }

    pub fn finish(self) -> ObservableSeries {
        self.series
    }
}

/// Per-step participation function and survival probability.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableSeries {
    pub n0: usize,
    pub times: Vec<usize>,
    pub xi: Vec<f64>,
    pub sp: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Builds a series from raw columns (mainly for synthetic inputs).
    pub fn from_columns(times: Vec<usize>, xi: Vec<f64>, sp: Vec<f64>) -> Result<Self> {
        if times.len() != xi.len() || times.len() != sp.len() {
            return Err(WalkError::InvalidDimension("series columns differ in length".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(WalkError::InvalidParameter("series times must be strictly increasing".into()));
        }
        Ok(ObservableSeries { n0: 0, times, xi, sp, snapshots: Vec::new() })
    }

    /// Records with `t` in `[t_min, t_max]`.
    pub fn between(&self, t_min: usize, t_max: usize) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.times
            .iter()
            .zip(&self.xi)
            .zip(&self.sp)
            .map(|((&t, &xi), &sp)| (t, xi, sp))
            .filter(move |&(t, _, _)| t >= t_min && t <= t_max)
    }

    /// CSV with header `t,xi,sp`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,xi,sp")?;
        for ((t, xi), sp) in self.times.iter().zip(&self.xi).zip(&self.sp) {
            writeln!(out, "{t},{xi},{sp}")?;
        }
        Ok(())
    }
}

/// `1 / sum_n p_n^2`, the effective number of occupied sites.
pub fn participation(p: &[f64]) -> Result<f64> {
    let sum_sq: f64 = p.iter().map(|x| x * x).sum();
    if sum_sq.is_nan() || sum_sq < DEGENERATE_SUM {
        return Err(WalkError::DegenerateDistribution(sum_sq));
    }
    Ok(sum_sq.recip())
}

/// Probability of finding the walker on its initial site.
pub fn survival(p: &[f64], n0: usize) -> f64 {
    p[n0]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongTimeAverages {
    pub xi_bar: f64,
    pub sp_bar: f64,
    pub window: usize,
}

/// Means of `xi` and `sp` over the trailing `window` records.
pub fn long_time_averages(series: &ObservableSeries, window: usize) -> Result<LongTimeAverages> {
    if window == 0 {
        return Err(WalkError::InvalidParameter("averaging window must be at least 1".into()));
    }
    if series.len() < window {
        return Err(WalkError::InsufficientData { needed: window, available: series.len() });
    }
    let start = series.len() - window;
    let mean = |v: &[f64]| v[start..].iter().sum::<f64>() / window as f64;
    Ok(LongTimeAverages { xi_bar: mean(&series.xi), sp_bar: mean(&series.sp), window })
}

/// Least-squares exponent of `sp ~ t^a` over records with `t >= t_min`.
pub fn fit_power_law(series: &ObservableSeries, t_min: usize) -> Result<f64> {
    fit_power_law_between(series, t_min, usize::MAX)
}

/// Same as [`fit_power_law`] restricted to `t_min <= t <= t_max`.
pub fn fit_power_law_between(series: &ObservableSeries, t_min: usize, t_max: usize) -> Result<f64> {
    let points: Vec<(f64, f64)> = series
        .between(t_min.max(1), t_max)
        .filter(|&(_, _, sp)| sp > FIT_FLOOR)
        .map(|(t, _, sp)| ((t as f64).ln(), sp.ln()))
        .collect();
    if points.len() < 10 {
        return Err(WalkError::InsufficientData { needed: 10, available: points.len() });
    }
    Ok(log_log_slope(&points))
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        let dx = x - mx;
        (sxy + dx * (y - my), sxx + dx * dx)
    });
    sxy / sxx
}

/// Index of the largest probability on each side of `n0` (strictly left and
/// strictly right). A side holding no probability reports `n0`.
pub fn peak_positions(p: &[f64], n0: usize) -> (usize, usize) {
    let argmax = |it: &mut dyn Iterator<Item = usize>| {
        let mut best = (n0, 0.0);
        for n in it {
            if p[n] > best.1 {
                best = (n, p[n]);
            }
        }
        best.0
    };
    let left = argmax(&mut (0..n0).rev());
    let right = argmax(&mut (n0 + 1..p.len()));
    (left, right)
}

/// Outermost site on each side of `n0` whose probability is at least
/// `fraction` of that side's maximum. Tracks the leading edge of a lobe
/// rather than its maximum.
pub fn front_positions(p: &[f64], n0: usize, fraction: f64) -> (usize, usize) {
    let (left_peak, right_peak) = peak_positions(p, n0);
    let left = if left_peak == n0 {
        n0
    } else {
        let cut = fraction * p[left_peak];
        (0..n0).find(|&n| p[n] >= cut).unwrap_or(n0)
    };
    let right = if right_peak == n0 {
        n0
    } else {
        let cut = fraction * p[right_peak];
        (n0 + 1..p.len()).rev().find(|&n| p[n] >= cut).unwrap_or(n0)
    };
    (left, right)
}

//! Parameter sweeps, regime labels and the critical barrier curve.
//!
//! Every grid cell and every bisection probe is an independent simulation
//! from the symmetric initial state; results are collected by input
//! coordinates, so the output does not depend on the number of workers.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::evolution::{evolve, sites_for_steps, step, KerrMode, WalkParams};
use crate::observables::{long_time_averages, LongTimeAverages, Recorder, DEFAULT_WINDOW};
use crate::state::WalkerState;

/// Default evolution length for sweeps and bisection.
pub const DEFAULT_STEPS: usize = 2000;

/// Points in the coarse scan that precedes bisection.
pub const PRESCAN_POINTS: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Delocalized,
    Soliton,
    SelfTrapped,
    ChaoticLike,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Delocalized => "delocalized",
            Regime::Soliton => "soliton",
            Regime::SelfTrapped => "self-trapped",
            Regime::ChaoticLike => "chaotic-like",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delocalized" => Ok(Regime::Delocalized),
            "soliton" => Ok(Regime::Soliton),
            "self-trapped" => Ok(Regime::SelfTrapped),
            "chaotic-like" => Ok(Regime::ChaoticLike),
            other => Err(WalkError::InvalidParameter(format!("unknown regime `{other}`"))),
        }
    }
}

/// Cutoffs used by [`classify_regime`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `sp_bar` at or above which a point counts as self-trapped.
    pub trapped_sp: f64,
    /// Largest `xi_bar` of a soliton-like state.
    pub soliton_xi: f64,
    /// Relative standard deviation of the trailing `xi` separating steady
    /// from fluctuating dynamics.
    pub fluctuation: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { trapped_sp: 0.1, soliton_xi: 20.0, fluctuation: 0.25 }
    }
}

/// Population standard deviation divided by the mean; zero for an empty or
/// single-valued slice.
pub fn relative_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return 0.0;
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean.abs()
}

pub fn classify_regime(xi_bar: f64, sp_bar: f64, xi_tail: &[f64], thresholds: &Thresholds) -> Regime {
    if sp_bar >= thresholds.trapped_sp {
        return Regime::SelfTrapped;
    }
    let fluctuation = relative_std(xi_tail);
    if xi_bar <= thresholds.soliton_xi && fluctuation <= thresholds.fluctuation {
        Regime::Soliton
    } else if fluctuation > thresholds.fluctuation {
        Regime::ChaoticLike
    } else {
        Regime::Delocalized
    }
}

/// How each point is simulated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSettings {
    pub steps: usize,
    pub window: usize,
    /// Lattice size; `None` means `2 * steps + 3`.
    pub sites: Option<usize>,
    pub kerr_mode: KerrMode,
}

impl Default for PointSettings {
    fn default() -> Self {
        PointSettings { steps: DEFAULT_STEPS, window: DEFAULT_WINDOW, sites: None, kerr_mode: KerrMode::Total }
    }
}

impl PointSettings {
    pub fn new(steps: usize, window: usize) -> Self {
        PointSettings { steps, window, ..Default::default() }
    }

    pub fn sites(&self) -> usize {
        self.sites.unwrap_or_else(|| sites_for_steps(self.steps))
    }

    pub fn params(&self, theta: f64, chi: f64, phi: f64) -> Result<WalkParams> {
        Ok(WalkParams::new(theta, phi, chi, self.sites())?.kerr_mode(self.kerr_mode))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointOutcome {
    pub averages: LongTimeAverages,
    /// Relative standard deviation of `xi` over the averaging window.
    pub xi_fluctuation: f64,
}

fn point_tail(theta: f64, chi: f64, phi: f64, settings: &PointSettings) -> Result<(LongTimeAverages, Vec<f64>)> {
    let params = settings.params(theta, chi, phi)?;
    let mut state = params.initial_state()?;
    let series = evolve(&mut state, &params, settings.steps, &Recorder::default())?;
    let averages = long_time_averages(&series, settings.window)?;
    let mut xi = series.xi;
    Ok((averages, xi.split_off(xi.len() - settings.window)))
}

/// Evolves the symmetric initial state and summarizes the trailing window.
pub fn simulate_point(theta: f64, chi: f64, phi: f64, settings: &PointSettings) -> Result<PointOutcome> {
    let (averages, tail) = point_tail(theta, chi, phi, settings)?;
    Ok(PointOutcome { averages, xi_fluctuation: relative_std(&tail) })
}

/// Long-time averages of `xi` and `sp` at one parameter point.
pub fn run_point(theta: f64, chi: f64, phi: f64, steps: usize, window: usize) -> Result<LongTimeAverages> {
    Ok(simulate_point(theta, chi, phi, &PointSettings::new(steps, window))?.averages)
}

/// Runs one point and labels it.
pub fn classify_point(theta: f64, chi: f64, phi: f64, settings: &PointSettings, thresholds: &Thresholds) -> Result<(PointOutcome, Regime)> {
    let (averages, tail) = point_tail(theta, chi, phi, settings)?;
    let regime = classify_regime(averages.xi_bar, averages.sp_bar, &tail, thresholds);
    Ok((PointOutcome { averages, xi_fluctuation: relative_std(&tail) }, regime))
}

/// Evenly spaced values `min..=max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        AxisRange { min, max, count }
    }

    pub fn single(value: f64) -> Self {
        AxisRange { min: value, max: value, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + span * i as f64 / last).collect()
    }

    fn check(&self, name: &str, lo: f64, hi: f64) -> Result<()> {
        let slack = 1e-9;
        if self.count == 0 {
            return Err(WalkError::InvalidParameter(format!("{name} range needs at least one point")));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(WalkError::InvalidParameter(format!("{name} range {}..{} is not increasing", self.min, self.max)));
        }
        if self.min < lo - slack || self.max > hi + slack {
            return Err(WalkError::InvalidParameter(format!(
                "{name} range {}..{} outside [{lo}, {hi}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub theta: f64,
    pub chi: AxisRange,
    pub phi: AxisRange,
    pub settings: PointSettings,
    pub thresholds: Thresholds,
}

impl SweepSpec {
    pub fn new(theta: f64, chi: AxisRange, phi: AxisRange, settings: PointSettings) -> Self {
        SweepSpec { theta, chi, phi, settings, thresholds: Thresholds::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.chi.check("chi", 0.0, 1.0)?;
        self.phi.check("phi", 0.0, FRAC_PI_2)?;
        if self.settings.window == 0 || self.settings.window > self.settings.steps + 1 {
            return Err(WalkError::InvalidParameter(format!(
                "window {} must lie in 1..={}",
                self.settings.window,
                self.settings.steps + 1
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub chi: f64,
    pub phi: f64,
    pub xi_bar: f64,
    pub sp_bar: f64,
    pub xi_fluctuation: f64,
    pub regime: Regime,
}

/// Long-time averages and labels over a `(chi, phi)` grid, row-major in
/// `chi` then `phi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub theta: f64,
    pub chi: Vec<f64>,
    pub phi: Vec<f64>,
    pub cells: Vec<GridCell>,
}

impl PhaseGrid {
    pub fn get(&self, chi_index: usize, phi_index: usize) -> &GridCell {
        &self.cells[chi_index * self.phi.len() + phi_index]
    }

    /// CSV with header `chi,phi,xi_bar,sp_bar,regime`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "chi,phi,xi_bar,sp_bar,regime")?;
        for c in &self.cells {
            writeln!(out, "{},{},{},{},{}", c.chi, c.phi, c.xi_bar, c.sp_bar, c.regime)?;
        }
        Ok(())
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| WalkError::InvalidParameter(format!("cannot start {workers} workers: {e}")))
}

/// Number of workers used when none is requested.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Simulates and classifies every grid cell using `workers` threads.
pub fn sweep(spec: &SweepSpec, workers: usize) -> Result<PhaseGrid> {
    spec.validate()?;
    let chis = spec.chi.values();
    let phis = spec.phi.values();
    let coords: Vec<(f64, f64)> = chis.iter().flat_map(|&c| phis.iter().map(move |&p| (c, p))).collect();
    let cells = thread_pool(workers)?.install(|| {
        coords
            .par_iter()
            .map(|&(chi, phi)| {
                let (outcome, regime) = classify_point(spec.theta, chi, phi, &spec.settings, &spec.thresholds)
                    .map_err(|e| WalkError::Cell { chi, phi, source: Box::new(e) })?;
                Ok(GridCell {
                    chi,
                    phi,
                    xi_bar: outcome.averages.xi_bar,
                    sp_bar: outcome.averages.sp_bar,
                    xi_fluctuation: outcome.xi_fluctuation,
                    regime,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(PhaseGrid { theta: spec.theta, chi: chis, phi: phis, cells })
}

/// Options for [`find_phi_c`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalSearch {
    pub settings: PointSettings,
    /// `sp_bar` cutoff defining the trapped side.
    pub threshold: f64,
    /// Bisection stops once the bracket is narrower than this (radians).
    pub tol: f64,
}

impl Default for CriticalSearch {
    fn default() -> Self {
        CriticalSearch { settings: PointSettings::default(), threshold: 0.1, tol: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub chi: f64,
    pub phi_c: f64,
    /// Number of predicate changes seen in the coarse scan.
    pub crossings: usize,
}

impl CriticalPoint {
    /// The coarse scan saw more than one crossing; `phi_c` is the smallest.
    pub fn multimodal(&self) -> bool {
        self.crossings > 1
    }
}

/// Barrier angle at which `sp_bar(phi) >= threshold` switches.
///
/// A 17-point scan over `[0, pi/2]` locates the smallest crossing, which is
/// then bisected to `tol`. The end point `phi = pi/2` is excluded from the
/// crossing search because every `(theta, chi)` is trivially localized
/// there; a predicate that is constant on the remaining scan points is
/// reported as [`WalkError::NoTransition`].
pub fn find_phi_c(theta: f64, chi: f64, search: &CriticalSearch) -> Result<CriticalPoint> {
    find_phi_c_with(theta, chi, search, 1)
}

fn find_phi_c_with(theta: f64, chi: f64, search: &CriticalSearch, workers: usize) -> Result<CriticalPoint> {
    if search.tol.is_nan() || search.tol <= 0.0 {
        return Err(WalkError::InvalidParameter(format!("bisection tolerance must be positive, got {}", search.tol)));
    }
    let trapped = |phi: f64| -> Result<bool> {
        let avg = simulate_point(theta, chi, phi, &search.settings)
            .map_err(|e| WalkError::Cell { chi, phi, source: Box::new(e) })?
            .averages;
        Ok(avg.sp_bar >= search.threshold)
    };

    let grid = AxisRange::new(0.0, FRAC_PI_2, PRESCAN_POINTS).values();
    let interior = &grid[..PRESCAN_POINTS - 1];
    let scan: Vec<bool> = if workers > 1 {
        thread_pool(workers)?.install(|| interior.par_iter().map(|&p| trapped(p)).collect::<Result<_>>())?
    } else {
        interior.iter().map(|&p| trapped(p)).collect::<Result<_>>()?
    };
    let crossings: Vec<usize> = (0..scan.len() - 1).filter(|&i| scan[i] != scan[i + 1]).collect();
    let Some(&first) = crossings.first() else {
        return Err(WalkError::NoTransition { chi, threshold: search.threshold });
    };
    if crossings.len() > 1 {
        log::warn!(
            "chi = {chi}: {} crossings of sp_bar = {} in the coarse scan; returning the smallest",
            crossings.len(),
            search.threshold
        );
    }

    let (mut lo, mut hi) = (grid[first], grid[first + 1]);
    let low_side = scan[first];
    while hi - lo >= search.tol {
        let mid = 0.5 * (lo + hi);
        if trapped(mid)? == low_side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalPoint { chi, phi_c: 0.5 * (lo + hi), crossings: crossings.len() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalCurve {
    pub theta: f64,
    pub threshold: f64,
    pub points: Vec<CriticalPoint>,
    /// Nonlinearities whose predicate never switched below `pi/2`.
    pub no_transition: Vec<f64>,
}

impl CriticalCurve {
    /// CSV with header `chi,phi_c`, one row per requested `chi` in
    /// increasing order. `phi_c` is empty where there was no transition.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "chi,phi_c")?;
        let mut rows: Vec<(f64, Option<f64>)> = self.points.iter().map(|p| (p.chi, Some(p.phi_c))).collect();
        rows.extend(self.no_transition.iter().map(|&chi| (chi, None)));
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (chi, phi_c) in rows {
            match phi_c {
                Some(phi_c) => writeln!(out, "{chi},{phi_c}")?,
                None => writeln!(out, "{chi},")?,
            }
        }
        Ok(())
    }

    /// True when every `chi` has a transition and `phi_c` falls strictly.
    pub fn is_strictly_decreasing(&self) -> bool {
        self.no_transition.is_empty() && self.points.windows(2).all(|w| w[1].phi_c < w[0].phi_c)
    }
}

/// [`find_phi_c`] for each `chi`, distributed over `workers` threads. A
/// `chi` without a transition is listed in `no_transition` rather than
/// failing the whole curve.
pub fn critical_curve(theta: f64, chis: &[f64], search: &CriticalSearch, workers: usize) -> Result<CriticalCurve> {
    if chis.is_empty() || chis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WalkError::InvalidParameter("chi values must be non-empty and strictly increasing".into()));
    }
    let found = thread_pool(workers)?.install(|| {
        chis.par_iter()
            .map(|&chi| match find_phi_c_with(theta, chi, search, 1) {
                Ok(p) => Ok(Some(p)),
                Err(WalkError::NoTransition { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let no_transition = chis.iter().zip(&found).filter(|(_, p)| p.is_none()).map(|(&chi, _)| chi).collect();
    let points = found.into_iter().flatten().collect();
    Ok(CriticalCurve { theta, threshold: search.threshold, points, no_transition })
}

/// L2 distance per step between a trajectory and a copy whose spin-up
/// amplitude at the origin was nudged by `epsilon` (then renormalized).
/// Exponential growth signals sensitivity to initial conditions.
pub fn divergence_probe(theta: f64, chi: f64, phi: f64, steps: usize, epsilon: f64) -> Result<Vec<f64>> {
    let params = WalkParams::new(theta, phi, chi, sites_for_steps(steps))?;
    let mut a = params.initial_state()?;
    let mut up = a.up().to_vec();
    up[params.n0] += Complex64::new(epsilon, 0.0);
    let mut b = WalkerState::from_amplitudes(up, a.down().to_vec(), params.n0)?;
    let distance = |a: &WalkerState, b: &WalkerState| {
        let d: f64 = a.up().iter().zip(b.up()).chain(a.down().iter().zip(b.down())).map(|(x, y)| (x - y).norm_sqr()).sum();
        d.sqrt()
    };
    let mut out = Vec::with_capacity(steps + 1);
    out.push(distance(&a, &b));
    for _ in 0..steps {
        step(&mut a, &params)?;
        step(&mut b, &params)?;
        out.push(distance(&a, &b));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn regime_labels_round_trip() {
        for r in [Regime::Delocalized, Regime::Soliton, Regime::SelfTrapped, Regime::ChaoticLike] {
            assert_eq!(r.as_str().parse::<Regime>().unwrap(), r);
        }
        assert!("solid".parse::<Regime>().is_err());
    }

    #[test]
    fn classification_rules() {
        let t = Thresholds::default();
        assert_eq!(classify_regime(1.0, 1.0, &[1.0; 10], &t), Regime::SelfTrapped);
        assert_eq!(classify_regime(8.0, 0.0, &[7.0, 8.0, 9.0], &t), Regime::Soliton);
        assert_eq!(classify_regime(8.0, 0.0, &[2.0, 14.0], &t), Regime::ChaoticLike);
        assert_eq!(classify_regime(500.0, 0.01, &[499.0, 501.0], &t), Regime::Delocalized);
        assert_eq!(classify_regime(500.0, 0.01, &[100.0, 900.0], &t), Regime::ChaoticLike);
        assert_eq!(classify_regime(5.0, 0.0, &[], &t), Regime::Soliton);
    }

    #[test]
    fn relative_std_basics() {
        assert_eq!(relative_std(&[]), 0.0);
        assert_eq!(relative_std(&[3.0, 3.0]), 0.0);
        assert!((relative_std(&[1.0, 3.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn axis_values() {
        assert_eq!(AxisRange::single(0.3).values(), vec![0.3]);
        assert_eq!(AxisRange::new(0.0, 1.0, 3).values(), vec![0.0, 0.5, 1.0]);
        let v = AxisRange::new(0.0, 1.0, 51).values();
        assert_eq!(v.len(), 51);
        assert_eq!(*v.last().unwrap(), 1.0);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn sweep_validation() {
        let s = PointSettings::new(20, 5);
        assert!(SweepSpec::new(FRAC_PI_4, AxisRange::new(0.0, 1.5, 2), AxisRange::single(0.0), s.clone()).validate().is_err());
        assert!(SweepSpec::new(FRAC_PI_4, AxisRange::single(0.0), AxisRange::new(0.0, 2.0, 2), s.clone()).validate().is_err());
        assert!(SweepSpec::new(FRAC_PI_4, AxisRange::new(0.0, 1.0, 0), AxisRange::single(0.0), s.clone()).validate().is_err());
        assert!(SweepSpec::new(FRAC_PI_4, AxisRange::single(0.0), AxisRange::single(0.0), PointSettings::new(20, 30)).validate().is_err());
        assert!(SweepSpec::new(FRAC_PI_4, AxisRange::new(0.0, 1.0, 2), AxisRange::new(0.0, 1.5707963, 2), s).validate().is_ok());
    }

    #[test]
    fn single_cell_sweep_equals_point() {
        let settings = PointSettings::new(200, 50);
        let spec = SweepSpec::new(FRAC_PI_4, AxisRange::single(0.3), AxisRange::single(0.5), settings);
        let grid = sweep(&spec, 1).unwrap();
        assert_eq!(grid.cells.len(), 1);
        let point = run_point(FRAC_PI_4, 0.3, 0.5, 200, 50).unwrap();
        assert_eq!(grid.cells[0].xi_bar, point.xi_bar);
        assert_eq!(grid.cells[0].sp_bar, point.sp_bar);
    }

    #[test]
    fn sweep_errors_carry_coordinates() {
        let settings = PointSettings { sites: Some(11), ..PointSettings::new(20, 5) };
        let mut spec = SweepSpec::new(FRAC_PI_4, AxisRange::single(0.1), AxisRange::single(0.2), settings);
        spec.settings.sites = Some(2);
        match sweep(&spec, 1).unwrap_err() {
            WalkError::Cell { chi, phi, .. } => assert_eq!((chi, phi), (0.1, 0.2)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn impossible_threshold_has_no_transition() {
        let search = CriticalSearch { settings: PointSettings::new(60, 20), threshold: 1.1, tol: 1e-2 };
        assert!(matches!(find_phi_c(FRAC_PI_4, 0.3, &search), Err(WalkError::NoTransition { .. })));
    }

    #[test]
    fn critical_curve_rejects_unsorted_chi() {
        let search = CriticalSearch { settings: PointSettings::new(20, 5), ..Default::default() };
        assert!(critical_curve(FRAC_PI_4, &[0.3, 0.2], &search, 1).is_err());
        assert!(critical_curve(FRAC_PI_4, &[], &search, 1).is_err());
    }

    #[test]
    fn divergence_starts_at_epsilon_scale() {
        let d = divergence_probe(FRAC_PI_4, 0.0, 0.0, 50, 1e-8).unwrap();
        assert_eq!(d.len(), 51);
        assert!(d[0] > 1e-9 && d[0] < 1e-7);
        // linear unitary evolution preserves the distance
        assert!((d[50] - d[0]).abs() < 1e-12);
    }
}

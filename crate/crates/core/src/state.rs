//! Lattice spinor wavefunction.
//!
//! The two spin components are stored as parallel dense arrays over the `N`
//! lattice sites. The shift operator moves each component independently, so
//! keeping them apart lets the stepping kernel stream through contiguous
//! memory.

use std::io::Write;
use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Result, WalkError};

/// Smallest lattice the walk is defined on.
pub const MIN_SITES: usize = 3;

/// Tolerance used when checking that a state or distribution is normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkerState {
    pub(crate) up: Vec<Complex64>,
    pub(crate) down: Vec<Complex64>,
    pub(crate) t: usize,
    pub(crate) n0: usize,
}

impl WalkerState {
    /// Symmetric superposition `(|up> + i|down>)/sqrt(2)` on site `n0`.
    pub fn init_symmetric(sites: usize, n0: usize) -> Result<Self> {
        check_dimensions(sites, n0)?;
        let mut up = vec![Complex64::new(0.0, 0.0); sites];
        let mut down = up.clone();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        up[n0] = Complex64::new(a, 0.0);
        down[n0] = Complex64::new(0.0, a);
        Ok(WalkerState { up, down, t: 0, n0 })
    }

    /// Same as [`init_symmetric`](Self::init_symmetric) with the walker on the
    /// central site `N / 2`.
    pub fn centered(sites: usize) -> Result<Self> {
        Self::init_symmetric(sites, sites / 2)
    }

    /// Builds a state from arbitrary amplitudes, rescaling them to unit norm.
    pub fn from_amplitudes(up: Vec<Complex64>, down: Vec<Complex64>, n0: usize) -> Result<Self> {
        if up.len() != down.len() {
            return Err(WalkError::InvalidDimension(format!(
                "spin components have different lengths ({} and {})",
                up.len(),
                down.len()
            )));
        }
        check_dimensions(up.len(), n0)?;
        let mut state = WalkerState { up, down, t: 0, n0 };
        let norm = state.norm_sqr();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(WalkError::InvalidParameter(format!(
                "amplitudes cannot be normalized (squared norm {norm})"
            )));
        }
        let scale = norm.sqrt().recip();
        state.up.iter_mut().chain(state.down.iter_mut()).for_each(|z| *z *= scale);
        Ok(state)
    }

    pub fn sites(&self) -> usize {
        self.up.len()
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    /// Number of steps applied since construction.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn up(&self) -> &[Complex64] {
        &self.up
    }

    pub fn down(&self) -> &[Complex64] {
        &self.down
    }

    /// Mutable access to both components. Callers are responsible for keeping
    /// the state normalized.
    pub fn components_mut(&mut self) -> (&mut [Complex64], &mut [Complex64]) {
        (&mut self.up, &mut self.down)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.iter().chain(&self.down).map(|z| z.norm_sqr()).sum()
    }

    /// Flattened amplitude vector ordered `[up_0, down_0, up_1, down_1, ...]`.
    pub fn to_vector(&self) -> Vec<Complex64> {
        self.up.iter().zip(&self.down).flat_map(|(&u, &d)| [u, d]).collect()
    }

    pub fn site_probabilities(&self) -> SiteProbability {
        SiteProbability(
            self.up
                .iter()
                .zip(&self.down)
                .map(|(u, d)| u.norm_sqr() + d.norm_sqr())
                .collect(),
        )
    }

    /// Writes the per-site spin-resolved probabilities as CSV with header
    /// `n,p_up,p_down,p_total`.
    pub fn write_snapshot_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,p_up,p_down,p_total")?;
        for (n, (u, d)) in self.up.iter().zip(&self.down).enumerate() {
            let (pu, pd) = (u.norm_sqr(), d.norm_sqr());
            writeln!(out, "{n},{pu},{pd},{}", pu + pd)?;
        }
        Ok(())
    }
}

fn check_dimensions(sites: usize, n0: usize) -> Result<()> {
    if sites < MIN_SITES {
        return Err(WalkError::InvalidDimension(format!(
            "lattice needs at least {MIN_SITES} sites, got {sites}"
        )));
    }
    if n0 >= sites {
        return Err(WalkError::InvalidDimension(format!(
            "initial site {n0} outside lattice of {sites} sites"
        )));
    }
    Ok(())
}

/// Probability of finding the walker on each site, summed over spin.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteProbability(pub(crate) Vec<f64>);

impl SiteProbability {
    /// Wraps a probability vector, checking non-negativity and normalization.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|&x| x.is_nan() || x < 0.0) {
            return Err(WalkError::InvalidParameter("probabilities must be finite and non-negative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::InvalidParameter(format!("probabilities sum to {total}, not 1")));
        }
        Ok(SiteProbability(p))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for SiteProbability {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Free-function form of [`WalkerState::site_probabilities`].
pub fn site_probabilities(state: &WalkerState) -> SiteProbability {
    state.site_probabilities()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn symmetric_initial_state() {
        let s = WalkerState::init_symmetric(5, 2).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(s.up(), &[zero, zero, Complex64::new(FRAC_1_SQRT_2, 0.0), zero, zero]);
        assert_eq!(s.down(), &[zero, zero, Complex64::new(0.0, FRAC_1_SQRT_2), zero, zero]);
        assert_eq!(s.t(), 0);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(WalkerState::init_symmetric(2, 0), Err(WalkError::InvalidDimension(_))));
        assert!(matches!(WalkerState::init_symmetric(5, 5), Err(WalkError::InvalidDimension(_))));
        assert!(matches!(
            WalkerState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 4], vec![Complex64::new(0.0, 0.0); 3], 0),
            Err(WalkError::InvalidDimension(_))
        ));
    }

    #[test]
    fn centered_uses_integer_midpoint() {
        assert_eq!(WalkerState::centered(7).unwrap().n0(), 3);
        assert_eq!(WalkerState::centered(8).unwrap().n0(), 4);
    }

    #[test]
    fn probabilities_of_initial_state() {
        let s = WalkerState::init_symmetric(9, 4).unwrap();
        let p = s.site_probabilities();
        for (n, &x) in p.iter().enumerate() {
            let expected = if n == 4 { 1.0 } else { 0.0 };
            assert!((x - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn probabilities_of_pure_up() {
        let mut up = vec![Complex64::new(0.0, 0.0); 6];
        up[1] = Complex64::new(1.0, 0.0);
        let s = WalkerState::from_amplitudes(up, vec![Complex64::new(0.0, 0.0); 6], 1).unwrap();
        assert_eq!(s.site_probabilities()[1], 1.0);
    }

    #[test]
    fn from_amplitudes_normalizes() {
        let s = WalkerState::from_amplitudes(
            vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 4.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
            0,
        )
        .unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((s.up()[0].re - 0.6).abs() < 1e-15);
        assert!(WalkerState::from_amplitudes(vec![Complex64::new(0.0, 0.0); 3], vec![Complex64::new(0.0, 0.0); 3], 0).is_err());
    }

    #[test]
    fn site_probability_validation() {
        assert!(SiteProbability::new(vec![0.5, 0.5]).is_ok());
        assert!(SiteProbability::new(vec![0.5, 0.6]).is_err());
        assert!(SiteProbability::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn snapshot_csv_layout() {
        let s = WalkerState::init_symmetric(3, 1).unwrap();
        let mut buf = Vec::new();
        s.write_snapshot_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "n,p_up,p_down,p_total");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("1,0.5000000000000001,") || lines[2].starts_with("1,0.5,"));
        assert_eq!(lines[1], "0,0,0,0");
    }
}

//! Explicit `2N x 2N` operator matrices, used to validate the stepping kernel.
//!
//! Basis ordering is `index = 2 n + s` with `s = 0` for spin up and `s = 1`
//! for spin down.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::{Boundary, CoinMatrix, KerrMode, ShiftParams, WalkParams};
use crate::error::{Result, WalkError};
use crate::state::WalkerState;

pub type DenseMatrix = Array2<Complex64>;

/// Largest lattice the dense oracle accepts.
pub const ORACLE_MAX_SITES: usize = 64;

fn zeros(sites: usize) -> DenseMatrix {
    Array2::zeros((2 * sites, 2 * sites))
}

/// Diagonal Kerr phase matrix for the given state.
pub fn kerr_matrix(state: &WalkerState, chi: f64, mode: KerrMode) -> DenseMatrix {
    let sites = state.sites();
    let mut m = zeros(sites);
    let k = std::f64::consts::TAU * chi;
    for n in 0..sites {
        let (pu, pd) = (state.up()[n].norm_sqr(), state.down()[n].norm_sqr());
        let (eu, ed) = match mode {
            KerrMode::Total => (pu + pd, pu + pd),
            KerrMode::PerComponent => (pu, pd),
        };
        m[[2 * n, 2 * n]] = Complex64::cis(k * eu);
        m[[2 * n + 1, 2 * n + 1]] = Complex64::cis(k * ed);
    }
    m
}

/// `C (x) I`: the coin repeated along the diagonal.
pub fn coin_operator_matrix(coin: &CoinMatrix, sites: usize) -> DenseMatrix {
    let mut m = zeros(sites);
    for n in 0..sites {
        for i in 0..2 {
            for j in 0..2 {
                m[[2 * n + i, 2 * n + j]] = coin.c[i][j];
            }
        }
    }
    m
}

/// Perturbed flip-flop shift. With an open boundary the hops off the lattice
/// are dropped, so the matrix is only unitary for periodic lattices.
pub fn shift_matrix(shift: &ShiftParams, sites: usize, boundary: Boundary) -> DenseMatrix {
    let mut m = zeros(sites);
    let alpha = Complex64::new(shift.alpha, 0.0);
    for n in 0..sites {
        let (up, down) = (2 * n, 2 * n + 1);
        m[[up, up]] = shift.beta;
        m[[down, down]] = shift.beta;

        let right = if n + 1 < sites {
            Some(n + 1)
        } else {
            (boundary == Boundary::Periodic).then_some(0)
        };
        let left = if n > 0 {
            Some(n - 1)
        } else {
            (boundary == Boundary::Periodic).then_some(sites - 1)
        };
        if let Some(r) = right {
            m[[2 * r + 1, up]] += alpha;
        }
        if let Some(l) = left {
            m[[2 * l, down]] += alpha;
        }
    }
    m
}

/// `max |U^dagger U - I|` over all entries.
pub fn unitarity_defect(m: &DenseMatrix) -> f64 {
    let adjoint = m.t().mapv(|z| z.conj());
    let product = adjoint.dot(m);
    product
        .indexed_iter()
        .map(|((i, j), &z)| {
            let target = if i == j { 1.0 } else { 0.0 };
            (z - Complex64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

/// One step computed by explicit matrix products `S_p (C (x) I) K`.
pub fn dense_step_oracle(state: &WalkerState, params: &WalkParams) -> Result<WalkerState> {
    let sites = state.sites();
    if sites > ORACLE_MAX_SITES {
        return Err(WalkError::InvalidDimension(format!(
            "dense oracle supports at most {ORACLE_MAX_SITES} sites, got {sites}"
        )));
    }
    if sites != params.sites {
        return Err(WalkError::InvalidDimension(format!(
            "state has {sites} sites, parameters expect {}",
            params.sites
        )));
    }
    let k = kerr_matrix(state, params.chi, params.kerr_mode);
    let c = coin_operator_matrix(&params.coin, sites);
    let s = shift_matrix(&params.shift, sites, params.boundary);
    let psi = Array1::from(state.to_vector());
    let out = s.dot(&c.dot(&k.dot(&psi)));

    let mut next = state.clone();
    for n in 0..sites {
        next.up[n] = out[2 * n];
        next.down[n] = out[2 * n + 1];
    }
    next.t += 1;
    Ok(next)
}

//! Distribution of the two-terminal Landauer conductance.
//!
//! For a scattering matrix drawn from U(N) with K modes in one lead and
//! N-K in the other, the conductance (in units of 2e^2/h) is the sum of
//! the N-K partial conductances `t_xi`. Three routes to its density:
//!
//! - the printed piecewise cubic for N = 4, K = 2,
//! - a convolution of the two-point joint density along the anti-diagonal,
//!   which covers every case with two transmitting columns,
//! - Monte Carlo over Haar draws, which covers everything.
//!
//! The convolution of the (N, K) two-point density is the density of
//! `t1 + t2`, the sum of two projection probabilities. It equals the
//! conductance density when N-K = 2. When instead K = 2, the conductance
//! equals the sum of the two projections onto the complementary subspace,
//! so the (N, N-K) pair-sum applies; [`conductance_convolution`] performs
//! that bookkeeping.
//!
//! The orthogonal ensemble carries no transport interpretation; its
//! estimators still run for completeness of the statistics.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{closed_form, density_auto, Tolerances};
use crate::error::{Error, Result};
use crate::quadrature::adaptive;
use crate::sampling::{projection_probs, sample_frame, stream_rng, EnsembleKind, ProjectionConfig};

/// Route that produced a conductance curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConductanceMethod {
    ClosedForm,
    Convolution,
    MonteCarlo,
}

/// A tabulated conductance density on a monotone grid over the support
/// [0, min(K, N-K)].
#[derive(Debug, Clone, Serialize)]
pub struct ConductanceDensity {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub method: ConductanceMethod,
    pub draws: Option<u64>,
    pub seed: Option<u64>,
}

impl ConductanceDensity {
    /// Trapezoidal integral over the grid; close to one for a well-formed
    /// density tabulated across its full support.
    pub fn trapezoid(&self) -> f64 {
        let mut total = 0.0;
        for i in 1..self.grid.len() {
            total += 0.5 * (self.values[i] + self.values[i - 1]) * (self.grid[i] - self.grid[i - 1]);
        }
        total
    }
}

/// Printed closed form of the conductance density for the unitary
/// ensemble with two modes per lead: `2 g^3` on [0, 1], `2 (2-g)^3` on
/// [1, 2], zero outside.
pub fn p_g_closed_42(g: f64) -> f64 {
    closed_form::conductance_unitary_4_2(g)
}

/// Density of the pair sum `t1 + t2` under the (ensemble, N, K) two-point
/// law: the anti-diagonal integral of the joint density over
/// `t in [max(0, g-1), min(1, g)]`.
pub fn p_g_convolution(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    g: f64,
    tol: &Tolerances,
) -> Result<f64> {
    ProjectionConfig { n, k, r: 2 }.validate_analytic(ensemble)?;
    if !(0.0..=2.0).contains(&g) {
        return Ok(0.0);
    }
    let lo = (g - 1.0).max(0.0);
    let hi = g.min(1.0);
    if hi <= lo {
        return Ok(0.0);
    }
    let quad = adaptive(
        |t| match density_auto(ensemble, n, k, t, g - t, tol) {
            Ok(v) => v.value,
            Err(_) => 0.0,
        },
        lo,
        hi,
        1e-9,
        tol.max_segments,
    );
    Ok(quad.value)
}

/// The physical conductance density by convolution, valid whenever one of
/// the leads carries exactly two modes. For N-K = 2 this is the (N, K)
/// pair sum directly; for K = 2 the complementary-subspace pair sum
/// (N, N-K) applies.
pub fn conductance_convolution(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    g: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if n - k == 2 {
        p_g_convolution(ensemble, n, k, g, tol)
    } else if k == 2 {
        p_g_convolution(ensemble, n, n - k, g, tol)
    } else {
        Err(Error::UnsupportedDimension(format!(
            "conductance convolution needs two transmitting columns: K = 2 or N-K = 2, got N={n}, K={k}"
        )))
    }
}

/// Monte Carlo estimate of the conductance density: a normalized
/// histogram of `g = sum of N-K partial conductances` over Haar draws.
///
/// Column exchangeability of the Haar measure lets the sampler draw only
/// the N-K transmitting columns and project them onto the first K rows.
pub fn p_g_monte_carlo(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    draws: u64,
    bins: usize,
    seed: u64,
) -> Result<ConductanceDensity> {
    ProjectionConfig { n, k, r: 1 }.validate()?;
    if draws == 0 {
        return Err(Error::InsufficientData("draws must be at least 1".into()));
    }
    if bins < 2 {
        return Err(Error::InvalidDimension("need at least 2 bins".into()));
    }
    let transmitting = n - k;
    let g_max = k.min(transmitting) as f64;
    let width = g_max / bins as f64;

    const BATCH: u64 = 8192;
    let n_batches = draws.div_ceil(BATCH);
    let counts = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = stream_rng(seed, batch);
            let mut local = vec![0u64; bins];
            let in_batch = BATCH.min(draws - batch * BATCH);
            for _ in 0..in_batch {
                let frame = sample_frame(ensemble, n, transmitting, &mut rng)
                    .expect("dimensions validated");
                let t = projection_probs(&frame, k, transmitting)
                    .expect("dimensions validated");
                let g: f64 = t.t.iter().sum();
                let idx = ((g / width) as usize).min(bins - 1);
                local[idx] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                a
            },
        );

    // Tabulate at bin centers, extended to the support endpoints by
    // linear extrapolation through the outermost bin pair so that the
    // trapezoidal integral recovers the full histogram mass.
    let mut grid: Vec<f64> = Vec::with_capacity(bins + 2);
    let mut values: Vec<f64> = Vec::with_capacity(bins + 2);
    let density: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / (draws as f64 * width))
        .collect();
    grid.push(0.0);
    values.push((1.5 * density[0] - 0.5 * density[1]).max(0.0));
    for (i, &v) in density.iter().enumerate() {
        grid.push((i as f64 + 0.5) * width);
        values.push(v);
    }
    grid.push(g_max);
    values.push((1.5 * density[bins - 1] - 0.5 * density[bins - 2]).max(0.0));
    Ok(ConductanceDensity {
        grid,
        values,
        method: ConductanceMethod::MonteCarlo,
        draws: Some(draws),
        seed: Some(seed),
    })
}

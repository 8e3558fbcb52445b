//! Histogram estimation of joint densities and goodness-of-fit tests.
//!
//! [`estimate_joint`] bins the projection probabilities of up to three
//! columns on equal-width grids over [0, 1]^R; beyond R = 3 it hands back
//! the raw samples. Sampling is batched, with one ChaCha stream per
//! batch, so the result is bit-identical for a given seed regardless of
//! how rayon schedules the batches.
//!
//! [`compare`] reduces a histogram and an analytic density to a
//! [`FitReport`]: Pearson chi-squared after pooling low-expectation cells
//! (expected count below 5), the p-value from the regularized incomplete
//! gamma, and the sup-norm between empirical and analytic densities at
//! cell centers. Cells crossing the orthogonal line singularity can be
//! excluded, with the degrees of freedom adjusted accordingly.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::sampling::{
    projection_probs, sample_frame, stream_rng, EnsembleKind, JointSample, ProjectionConfig,
};
use crate::special::gamma_q;

/// Guard against runaway memory: bins^R may not exceed this.
const MAX_CELLS: usize = 10_000_000;

/// Batch size for parallel sampling; one RNG stream per batch.
const BATCH: u64 = 8192;

/// An R-dimensional histogram on [0, 1]^R with equal-width bins.
///
/// The boundary value t = 1 is assigned to the last bin, which is closed
/// on the right; all other bins are half-open.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramNd {
    dims: usize,
    bins: usize,
    counts: Vec<u64>,
    total: u64,
}

impl HistogramNd {
    pub fn new(dims: usize, bins: usize) -> Result<Self> {
        if dims == 0 || bins < 2 {
            return Err(Error::InvalidDimension(
                "histogram needs at least 1 dimension and 2 bins".into(),
            ));
        }
        let cells = bins
            .checked_pow(dims as u32)
            .filter(|&c| c <= MAX_CELLS)
            .ok_or_else(|| {
                Error::TooManyBins(format!("{bins}^{dims} cells exceeds the {MAX_CELLS} guard"))
            })?;
        Ok(HistogramNd { dims, bins, counts: vec![0; cells], total: 0 })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn bin_index(&self, t: f64) -> usize {
        ((t * self.bins as f64) as usize).min(self.bins - 1)
    }

    /// Record one sample; coordinates must lie in [0, 1].
    pub fn record(&mut self, t: &[f64]) {
        debug_assert_eq!(t.len(), self.dims);
        let mut idx = 0;
        for &coord in t {
            idx = idx * self.bins + self.bin_index(coord);
        }
        self.counts[idx] += 1;
        self.total += 1;
    }

    fn merge(&mut self, other: &HistogramNd) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    /// Flat index -> per-dimension bin indices.
    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims];
        for d in (0..self.dims).rev() {
            out[d] = idx % self.bins;
            idx /= self.bins;
        }
        out
    }

    /// Lower corner of a cell.
    pub fn cell_lower(&self, indices: &[usize]) -> Vec<f64> {
        indices.iter().map(|&i| i as f64 / self.bins as f64).collect()
    }

    /// Center of a cell.
    pub fn cell_center(&self, indices: &[usize]) -> Vec<f64> {
        indices
            .iter()
            .map(|&i| (i as f64 + 0.5) / self.bins as f64)
            .collect()
    }

    /// Volume of one cell.
    pub fn cell_volume(&self) -> f64 {
        (1.0 / self.bins as f64).powi(self.dims as i32)
    }

    /// Empirical density value of a cell (count over total times volume).
    pub fn density(&self, idx: usize) -> f64 {
        self.counts[idx] as f64 / (self.total as f64 * self.cell_volume())
    }

    /// Merge `factor` adjacent bins per axis; `factor` must divide the
    /// bin count. Same samples, coarser cells.
    pub fn coarsen(&self, factor: usize) -> Result<HistogramNd> {
        if factor == 0 || self.bins % factor != 0 {
            return Err(Error::InvalidDimension(format!(
                "coarsening factor {factor} must divide {} bins",
                self.bins
            )));
        }
        let mut out = HistogramNd::new(self.dims, self.bins / factor)?;
        for (idx, &c) in self.counts.iter().enumerate() {
            let indices = self.unravel(idx);
            let mut coarse = 0;
            for &i in &indices {
                coarse = coarse * out.bins + i / factor;
            }
            out.counts[coarse] += c;
        }
        out.total = self.total;
        Ok(out)
    }

    /// Marginal histogram along one axis: same samples, summed bins.
    pub fn marginal(&self, axis: usize) -> Result<HistogramNd> {
        if axis >= self.dims {
            return Err(Error::InvalidDimension(format!(
                "axis {axis} out of range for {} dims",
                self.dims
            )));
        }
        let mut out = HistogramNd::new(1, self.bins)?;
        for (idx, &c) in self.counts.iter().enumerate() {
            let indices = self.unravel(idx);
            out.counts[indices[axis]] += c;
        }
        out.total = self.total;
        Ok(out)
    }
}

/// Result of [`estimate_joint`]: binned for R <= 3, raw samples beyond.
#[derive(Debug, Clone)]
pub enum JointEstimate {
    Binned(HistogramNd),
    Samples(Vec<JointSample>),
}

/// Estimate the joint density of (t_1, ..., t_R) from `draws` Haar
/// samples. Deterministic for a fixed seed.
pub fn estimate_joint(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    r: usize,
    draws: u64,
    bins: usize,
    seed: u64,
) -> Result<JointEstimate> {
    ProjectionConfig { n, k, r }.validate()?;
    if draws == 0 {
        return Err(Error::InsufficientData("draws must be at least 1".into()));
    }
    let n_batches = draws.div_ceil(BATCH);

    if r <= 3 {
        let template = HistogramNd::new(r, bins)?;
        let hist = (0..n_batches)
            .into_par_iter()
            .map(|batch| {
                let mut rng = stream_rng(seed, batch);
                let mut local = template.clone();
                let in_batch = BATCH.min(draws - batch * BATCH);
                for _ in 0..in_batch {
                    let frame =
                        sample_frame(ensemble, n, r, &mut rng).expect("dimensions validated");
                    let t = projection_probs(&frame, k, r).expect("dimensions validated");
                    local.record(&t.t);
                }
                local
            })
            .reduce(
                || template.clone(),
                |mut a, b| {
                    a.merge(&b);
                    a
                },
            );
        Ok(JointEstimate::Binned(hist))
    } else {
        let mut batches: Vec<(u64, Vec<JointSample>)> = (0..n_batches)
            .into_par_iter()
            .map(|batch| {
                let mut rng = stream_rng(seed, batch);
                let in_batch = BATCH.min(draws - batch * BATCH);
                let samples = (0..in_batch)
                    .map(|_| {
                        let frame =
                            sample_frame(ensemble, n, r, &mut rng).expect("dimensions validated");
                        projection_probs(&frame, k, r).expect("dimensions validated")
                    })
                    .collect();
                (batch, samples)
            })
            .collect();
        batches.sort_by_key(|(batch, _)| *batch);
        Ok(JointEstimate::Samples(
            batches.into_iter().flat_map(|(_, s)| s).collect(),
        ))
    }
}

/// Chi-squared and sup-norm comparison of a histogram against an
/// analytic density.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    pub sup_norm: f64,
    pub n_draws: u64,
    pub seed: u64,
    /// Cells entering the test after pooling and exclusion.
    pub cells: usize,
}

/// Options of [`compare`].
#[derive(Debug, Clone, Copy)]
pub struct CompareOptions {
    /// Cells with expected count below this are pooled into one cell.
    pub min_expected: f64,
    /// Gauss-Legendre points per axis for the expected mass of a cell.
    pub gl_points: usize,
    /// Extra points for cells near the line t1 + t2 = 1 (2D only).
    pub gl_points_near_line: usize,
    /// Exclude 2D cells whose (t1 + t2 - 1) range intersects this strip.
    pub strip_eps: Option<f64>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            min_expected: 5.0,
            gl_points: 4,
            gl_points_near_line: 24,
            strip_eps: None,
        }
    }
}

/// Compare a histogram with an analytic density `f` of the cell
/// coordinates. The expected mass of each cell is integrated with a
/// tensor Gauss-Legendre rule; cells crossing the excluded strip are
/// dropped (the test then conditions on the remaining region); cells
/// with tiny expectation are pooled.
pub fn compare<F: Fn(&[f64]) -> f64>(
    hist: &HistogramNd,
    f: F,
    seed: u64,
    opts: &CompareOptions,
) -> Result<FitReport> {
    if hist.total == 0 {
        return Err(Error::InsufficientData("histogram holds no samples".into()));
    }

    let (base_x, base_w) = gauss_legendre(opts.gl_points);
    let (fine_x, fine_w) = gauss_legendre(opts.gl_points_near_line);
    let h = 1.0 / hist.bins as f64;

    // Expected probability mass and observed count per retained cell.
    let mut expected = Vec::new();
    let mut observed = Vec::new();
    let mut centers = Vec::new();
    let mut included_mass = 0.0;
    let mut included_count: u64 = 0;

    for idx in 0..hist.counts.len() {
        let indices = hist.unravel(idx);
        let lower = hist.cell_lower(&indices);

        let near_line = if hist.dims == 2 {
            let lo = lower[0] + lower[1] - 1.0;
            let hi = lo + 2.0 * h;
            if let Some(eps) = opts.strip_eps {
                if lo < eps && hi > -eps {
                    // Cell intersects the excluded strip.
                    continue;
                }
            }
            lo < 0.12 && hi > -0.12
        } else {
            false
        };

        let (xs, ws) = if near_line { (&fine_x, &fine_w) } else { (&base_x, &base_w) };
        let mass = cell_mass(&f, &lower, h, hist.dims, xs, ws);
        expected.push(mass);
        observed.push(hist.counts[idx]);
        centers.push(hist.cell_center(&indices));
        included_mass += mass;
        included_count += hist.counts[idx];
    }

    if included_count == 0 || included_mass <= 0.0 {
        return Err(Error::InsufficientData(
            "no samples in the included region".into(),
        ));
    }

    // Conditional expected counts given the included region.
    let scale = included_count as f64 / included_mass;
    let volume = hist.cell_volume();
    let mut sup_norm = 0.0_f64;
    for (&count, center) in observed.iter().zip(&centers) {
        let empirical_density = count as f64 / (hist.total as f64 * volume);
        sup_norm = sup_norm.max((empirical_density - f(center)).abs());
    }

    // Pool cells whose expectation is below the validity threshold; if
    // even the pooled group stays below it, merge the group into the
    // regular cell with the smallest expectation.
    let mut regular: Vec<(f64, f64)> = Vec::new(); // (expected, observed)
    let mut pooled_expected = 0.0;
    let mut pooled_observed = 0.0;
    for (&mass, &count) in expected.iter().zip(&observed) {
        let e = mass * scale;
        if e < opts.min_expected {
            pooled_expected += e;
            pooled_observed += count as f64;
        } else {
            regular.push((e, count as f64));
        }
    }
    if pooled_expected > 0.0 {
        if pooled_expected >= opts.min_expected {
            regular.push((pooled_expected, pooled_observed));
        } else if let Some(smallest) = regular
            .iter_mut()
            .min_by(|a, b| a.0.total_cmp(&b.0))
        {
            smallest.0 += pooled_expected;
            smallest.1 += pooled_observed;
        }
    }
    let cells = regular.len();
    if cells < 2 {
        return Err(Error::InsufficientData(
            "fewer than two cells remain after pooling".into(),
        ));
    }
    let chi2: f64 = regular.iter().map(|(e, o)| (o - e).powi(2) / e).sum();

    let dof = cells - 1;
    let p_value = gamma_q(dof as f64 / 2.0, chi2 / 2.0)?;
    Ok(FitReport {
        chi2,
        dof,
        p_value,
        sup_norm,
        n_draws: hist.total,
        seed,
        cells,
    })
}

/// Tensor Gauss-Legendre integral of `f` over one cell.
fn cell_mass<F: Fn(&[f64]) -> f64>(
    f: &F,
    lower: &[f64],
    h: f64,
    dims: usize,
    xs: &[f64],
    ws: &[f64],
) -> f64 {
    let half = 0.5 * h;
    let mut point = vec![0.0; dims];
    let mut total = 0.0;
    let npts = xs.len();
    let mut index = vec![0usize; dims];
    loop {
        let mut weight = 1.0;
        for d in 0..dims {
            point[d] = lower[d] + half + half * xs[index[d]];
            weight *= ws[index[d]] * half;
        }
        total += weight * f(&point);
        // Advance the mixed-radix counter.
        let mut d = 0;
        loop {
            if d == dims {
                return total;
            }
            index[d] += 1;
            if index[d] < npts {
                break;
            }
            index[d] = 0;
            d += 1;
        }
    }
}

/// Asymptotic Kolmogorov distribution tail `Q(lambda)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-8 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov-Smirnov test of `samples` against a CDF.
/// Returns (statistic, p-value); the p-value uses the asymptotic
/// distribution with the standard small-sample correction.
pub fn ks_test_cdf<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("no samples for the KS test".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        d = d.max((c - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - c).abs());
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    Ok((d, kolmogorov_q(lambda)))
}

/// Two-sample Kolmogorov-Smirnov test. Returns (statistic, p-value).
pub fn ks_test_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("empty sample in the KS test".into()));
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len(), xb.len());
    let mut d = 0.0_f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < na && j < nb {
        let x = xa[i].min(xb[j]);
        while i < na && xa[i] <= x {
            i += 1;
        }
        while j < nb && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = (na as f64 * nb as f64) / (na as f64 + nb as f64);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok((d, kolmogorov_q(lambda)))
}

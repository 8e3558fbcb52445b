//! Haar-distributed orthonormal frames and their projection probabilities.
//!
//! A frame is drawn by filling an N x r matrix with i.i.d. standard
//! Gaussians (real for the orthogonal ensemble, complex with independent
//! real and imaginary parts for the unitary ensemble) and orthonormalizing
//! the columns by Gram-Schmidt with a second reorthogonalization pass.
//! Gram-Schmidt is the QR factorization whose triangular factor has a
//! positive diagonal, which is the normalization that makes the resulting
//! frame exactly Haar-distributed. The first r columns of a Haar matrix
//! have the same joint law as an orthonormalized set of r Gaussian
//! vectors, so partial frames can be drawn without the full N x N cost.
//!
//! All randomness flows through [`ChaCha8Rng`]; independent workers derive
//! their generators from one master seed via the stream counter, so runs
//! are reproducible regardless of thread count.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Random number generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// Generator seeded for one independent stream of a master seed.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Selects the real (orthogonal) or complex (unitary) invariant ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    Orthogonal,
    Unitary,
}

impl EnsembleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Orthogonal => "orthogonal",
            EnsembleKind::Unitary => "unitary",
        }
    }
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "orthogonal" | "o" => Ok(EnsembleKind::Orthogonal),
            "unitary" | "u" => Ok(EnsembleKind::Unitary),
            other => Err(Error::InvalidDimension(format!(
                "unknown ensemble '{other}' (expected orthogonal or unitary)"
            ))),
        }
    }
}

/// The triple (N, K, R): ambient dimension, subspace dimension, number of
/// random vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionConfig {
    pub n: usize,
    pub k: usize,
    pub r: usize,
}

impl ProjectionConfig {
    pub fn new(n: usize, k: usize, r: usize) -> Result<Self> {
        let cfg = ProjectionConfig { n, k, r };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sampling-level constraints: 1 <= K <= N-1 and 1 <= R <= N.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidDimension("N must be positive".into()));
        }
        if self.k == 0 || self.k >= self.n {
            return Err(Error::InvalidDimension(format!(
                "K must satisfy 1 <= K <= N-1, got K={}, N={}",
                self.k, self.n
            )));
        }
        if self.r == 0 || self.r > self.n {
            return Err(Error::InvalidDimension(format!(
                "R must satisfy 1 <= R <= N, got R={}, N={}",
                self.r, self.n
            )));
        }
        Ok(())
    }

    /// Extra constraints for analytic two-point evaluation: the gamma
    /// factors Gamma[(N-R-1)/2] (orthogonal) and Gamma(N-R) (unitary)
    /// must be finite, i.e. N >= R+2 and N >= R+1 respectively.
    pub fn validate_analytic(&self, ensemble: EnsembleKind) -> Result<()> {
        self.validate()?;
        match ensemble {
            EnsembleKind::Orthogonal if self.n < self.r + 2 => {
                Err(Error::UnsupportedDimension(format!(
                    "orthogonal analytic evaluation needs N >= R+2, got N={}, R={}",
                    self.n, self.r
                )))
            }
            EnsembleKind::Unitary if self.n < self.r + 1 => {
                Err(Error::UnsupportedDimension(format!(
                    "unitary analytic evaluation needs N >= R+1, got N={}, R={}",
                    self.n, self.r
                )))
            }
            _ => Ok(()),
        }
    }
}

trait Scalar: Copy {
    fn zero() -> Self;
    fn sample(rng: &mut SimRng) -> Self;
    /// conj(self) * other
    fn conj_mul(self, other: Self) -> Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, r: f64) -> Self;
    fn abs2(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn sample(rng: &mut SimRng) -> Self {
        StandardNormal.sample(rng)
    }
    fn conj_mul(self, other: Self) -> Self {
        self * other
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn abs2(self) -> f64 {
        self * self
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn sample(rng: &mut SimRng) -> Self {
        // Real and imaginary parts i.i.d. N(0,1); the overall scale drops
        // out in the orthonormalization.
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    }
    fn conj_mul(self, other: Self) -> Self {
        self.conj() * other
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
}

/// Orthonormalize `cols` columns of length `n` stored column-major in
/// `data`. Two projection passes per column keep the Gram matrix within
/// a few ulps of the identity even for unlucky Gaussian draws.
fn gram_schmidt<S: Scalar>(n: usize, cols: usize, data: &mut [S]) {
    for j in 0..cols {
        for _pass in 0..2 {
            for i in 0..j {
                let mut coef = S::zero();
                for row in 0..n {
                    coef = coef.add(data[i * n + row].conj_mul(data[j * n + row]));
                }
                for row in 0..n {
                    let update = coef.mul(data[i * n + row]);
                    data[j * n + row] = data[j * n + row].sub(update);
                }
            }
        }
        let norm2: f64 = (0..n).map(|row| data[j * n + row].abs2()).sum();
        let inv = 1.0 / norm2.sqrt();
        for row in 0..n {
            data[j * n + row] = data[j * n + row].scale(inv);
        }
    }
}

#[derive(Debug, Clone)]
enum FrameData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// An N x r matrix with orthonormal columns, drawn from the Haar measure
/// (r = N) or its first-columns marginal (r < N).
#[derive(Debug, Clone)]
pub struct FrameSample {
    n: usize,
    cols: usize,
    data: FrameData,
}

impl FrameSample {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn ensemble(&self) -> EnsembleKind {
        match self.data {
            FrameData::Real(_) => EnsembleKind::Orthogonal,
            FrameData::Complex(_) => EnsembleKind::Unitary,
        }
    }

    /// Squared magnitude of the entry in `row`, `col`.
    pub fn abs2(&self, row: usize, col: usize) -> f64 {
        match &self.data {
            FrameData::Real(d) => d[col * self.n + row] * d[col * self.n + row],
            FrameData::Complex(d) => d[col * self.n + row].norm_sqr(),
        }
    }

    /// Entry as a complex number (imaginary part zero for real frames).
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match &self.data {
            FrameData::Real(d) => Complex64::new(d[col * self.n + row], 0.0),
            FrameData::Complex(d) => d[col * self.n + row],
        }
    }

    /// Largest deviation of the column Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..self.cols {
            for b in a..self.cols {
                let mut ip = Complex64::new(0.0, 0.0);
                for row in 0..self.n {
                    ip += self.entry(row, a).conj() * self.entry(row, b);
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }

    /// Build a real frame from column-major data, checking orthonormality.
    pub fn from_real(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() % n != 0 {
            return Err(Error::InvalidDimension(
                "frame data length must be a multiple of n".into(),
            ));
        }
        let cols = data.len() / n;
        let frame = FrameSample { n, cols, data: FrameData::Real(data) };
        frame.check_orthonormal()?;
        Ok(frame)
    }

    /// Build a complex frame from column-major data, checking orthonormality.
    pub fn from_complex(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || data.len() % n != 0 {
            return Err(Error::InvalidDimension(
                "frame data length must be a multiple of n".into(),
            ));
        }
        let cols = data.len() / n;
        let frame = FrameSample { n, cols, data: FrameData::Complex(data) };
        frame.check_orthonormal()?;
        Ok(frame)
    }

    fn check_orthonormal(&self) -> Result<()> {
        let dev = self.gram_deviation();
        if dev > 1e-12 {
            return Err(Error::InvalidDimension(format!(
                "columns are not orthonormal (Gram deviation {dev:.3e} > 1e-12)"
            )));
        }
        Ok(())
    }

    /// Apply a fixed group element from the left: `other * self`.
    /// `other` must be a full N x N frame of the same ensemble.
    pub fn left_multiply(&self, other: &FrameSample) -> Result<FrameSample> {
        if other.n != self.n || other.cols != other.n || other.ensemble() != self.ensemble() {
            return Err(Error::InvalidDimension(
                "left factor must be a full frame of matching size and ensemble".into(),
            ));
        }
        match (&other.data, &self.data) {
            (FrameData::Real(a), FrameData::Real(b)) => {
                let n = self.n;
                let mut out = vec![0.0; n * self.cols];
                for col in 0..self.cols {
                    for row in 0..n {
                        let mut acc = 0.0;
                        for inner in 0..n {
                            acc += a[inner * n + row] * b[col * n + inner];
                        }
                        out[col * n + row] = acc;
                    }
                }
                Ok(FrameSample { n, cols: self.cols, data: FrameData::Real(out) })
            }
            (FrameData::Complex(a), FrameData::Complex(b)) => {
                let n = self.n;
                let mut out = vec![Complex64::new(0.0, 0.0); n * self.cols];
                for col in 0..self.cols {
                    for row in 0..n {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for inner in 0..n {
                            acc += a[inner * n + row] * b[col * n + inner];
                        }
                        out[col * n + row] = acc;
                    }
                }
                Ok(FrameSample { n, cols: self.cols, data: FrameData::Complex(out) })
            }
            _ => unreachable!("ensemble checked above"),
        }
    }
}

/// The vector (t_1, ..., t_R) of projection probabilities from one draw.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSample {
    pub t: Vec<f64>,
}

/// Draw one Haar-distributed N x N group element.
pub fn sample_haar(ensemble: EnsembleKind, n: usize, rng: &mut SimRng) -> Result<FrameSample> {
    sample_frame(ensemble, n, n, rng)
}

/// Draw the first `r` columns of a Haar-distributed N x N group element
/// without materializing the rest.
pub fn sample_frame(
    ensemble: EnsembleKind,
    n: usize,
    r: usize,
    rng: &mut SimRng,
) -> Result<FrameSample> {
    if n == 0 {
        return Err(Error::InvalidDimension("N must be positive".into()));
    }
    if r == 0 || r > n {
        return Err(Error::InvalidDimension(format!(
            "column count must satisfy 1 <= r <= N, got r={r}, N={n}"
        )));
    }
    match ensemble {
        EnsembleKind::Orthogonal => {
            let mut data: Vec<f64> = (0..n * r).map(|_| Scalar::sample(rng)).collect();
            gram_schmidt(n, r, &mut data);
            Ok(FrameSample { n, cols: r, data: FrameData::Real(data) })
        }
        EnsembleKind::Unitary => {
            let mut data: Vec<Complex64> = (0..n * r).map(|_| Scalar::sample(rng)).collect();
            gram_schmidt(n, r, &mut data);
            Ok(FrameSample { n, cols: r, data: FrameData::Complex(data) })
        }
    }
}

/// Projection probabilities of the first `r` columns onto the span of the
/// first `k` basis vectors: `t_xi = sum_{j=1..k} |w_{j,xi}|^2`.
pub fn projection_probs(frame: &FrameSample, k: usize, r: usize) -> Result<JointSample> {
    if k == 0 || k > frame.n() {
        return Err(Error::InvalidDimension(format!(
            "K must satisfy 1 <= K <= N, got K={k}, N={}",
            frame.n()
        )));
    }
    if r == 0 || r > frame.ncols() {
        return Err(Error::InvalidDimension(format!(
            "R must satisfy 1 <= R <= {} available columns, got R={r}",
            frame.ncols()
        )));
    }
    let t = (0..r)
        .map(|col| (0..k).map(|row| frame.abs2(row, col)).sum::<f64>().clamp(0.0, 1.0))
        .collect();
    Ok(JointSample { t })
}

/// Partial conductances of a two-terminal scatterer with `k` modes in the
/// first lead: column sums of squared magnitudes of the first `k` rows
/// over the last `N-k` columns of the full scattering matrix. Their sum
/// is the Landauer conductance `g` in units of 2e^2/h.
pub fn partial_conductances(frame: &FrameSample, k: usize) -> Result<Vec<f64>> {
    let n = frame.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidDimension(format!(
            "partial conductances need 1 <= K <= N-1, got K={k}, N={n}"
        )));
    }
    if frame.ncols() != n {
        return Err(Error::InvalidDimension(
            "partial conductances need the full N x N frame".into(),
        ));
    }
    Ok((k..n)
        .map(|col| (0..k).map(|row| frame.abs2(row, col)).sum::<f64>().clamp(0.0, 1.0))
        .collect())
}

/// Probability of the measurement outcome for a mixture with occupation
/// weights `p`: the weighted sum of projection probabilities.
pub fn weighted_mixture_prob(sample: &JointSample, weights: &[f64]) -> Result<f64> {
    if weights.len() != sample.t.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} probabilities",
            weights.len(),
            sample.t.len()
        )));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::InvalidWeights("weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidWeights(format!(
            "weights sum to {total}, expected 1 within 1e-12"
        )));
    }
    Ok(sample
        .t
        .iter()
        .zip(weights)
        .map(|(t, p)| t * p)
        .sum::<f64>()
        .clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_orthogonal_is_a_sign() {
        let mut rng = stream_rng(11, 0);
        let mut saw_plus = false;
        let mut saw_minus = false;
        for _ in 0..64 {
            let f = sample_haar(EnsembleKind::Orthogonal, 1, &mut rng).unwrap();
            let v = f.entry(0, 0).re;
            assert!((v.abs() - 1.0).abs() < 1e-14);
            if v > 0.0 {
                saw_plus = true;
            } else {
                saw_minus = true;
            }
        }
        assert!(saw_plus && saw_minus, "both signs should occur");
    }

    #[test]
    fn frames_are_orthonormal() {
        let mut rng = stream_rng(42, 0);
        for &n in &[2, 4, 8, 16, 31] {
            let f = sample_haar(EnsembleKind::Unitary, n, &mut rng).unwrap();
            assert!(f.gram_deviation() < 1e-12, "unitary N={n}: {}", f.gram_deviation());
            let f = sample_haar(EnsembleKind::Orthogonal, n, &mut rng).unwrap();
            assert!(f.gram_deviation() < 1e-12, "orthogonal N={n}");
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        let mut rng = stream_rng(1, 0);
        assert!(sample_haar(EnsembleKind::Unitary, 0, &mut rng).is_err());
        assert!(sample_frame(EnsembleKind::Unitary, 4, 0, &mut rng).is_err());
        assert!(sample_frame(EnsembleKind::Unitary, 4, 5, &mut rng).is_err());
    }

    #[test]
    fn identity_frame_projections() {
        let n = 4;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        let frame = FrameSample::from_real(n, data).unwrap();
        let j = projection_probs(&frame, 2, 4).unwrap();
        assert_eq!(j.t, vec![1.0, 1.0, 0.0, 0.0]);

        // Full-space projection: K = N gives t = 1 for every column.
        let j = projection_probs(&frame, 4, 2).unwrap();
        assert_eq!(j.t, vec![1.0, 1.0]);

        // Block-diagonal scatterer transmits nothing.
        let pc = partial_conductances(&frame, 2).unwrap();
        assert_eq!(pc, vec![0.0, 0.0]);
    }

    #[test]
    fn full_trace_equals_k() {
        let mut rng = stream_rng(7, 0);
        for &(ensemble, n, k) in &[
            (EnsembleKind::Orthogonal, 6, 2),
            (EnsembleKind::Unitary, 6, 4),
            (EnsembleKind::Unitary, 12, 5),
        ] {
            for _ in 0..20 {
                let f = sample_haar(ensemble, n, &mut rng).unwrap();
                let j = projection_probs(&f, k, n).unwrap();
                let total: f64 = j.t.iter().sum();
                assert!(
                    (total - k as f64).abs() < 1e-10,
                    "{ensemble} N={n} K={k}: trace {total}"
                );
            }
        }
    }

    #[test]
    fn conductance_bounded_by_min_lead() {
        let mut rng = stream_rng(3, 0);
        for _ in 0..50 {
            let f = sample_haar(EnsembleKind::Unitary, 4, &mut rng).unwrap();
            let g: f64 = partial_conductances(&f, 2).unwrap().iter().sum();
            assert!((0.0..=2.0).contains(&g), "g = {g}");
        }
    }

    #[test]
    fn projection_mean_is_k_over_n() {
        // Coarse version of the Beta-mean law; the high-statistics run
        // lives in the acceptance suite.
        let (n, k, draws) = (8, 3, 20_000);
        let mut rng = stream_rng(123, 0);
        let mut sum = 0.0;
        for _ in 0..draws {
            let f = sample_frame(EnsembleKind::Orthogonal, n, 1, &mut rng).unwrap();
            sum += projection_probs(&f, k, 1).unwrap().t[0];
        }
        let mean = sum / draws as f64;
        // sd of one draw is about 0.217, so 5 sigma of the mean ~ 0.0077.
        assert!((mean - 3.0 / 8.0).abs() < 0.008, "mean {mean}");
    }

    #[test]
    fn weighted_mixture_examples() {
        let s = JointSample { t: vec![0.3, 0.7] };
        assert!((weighted_mixture_prob(&s, &[1.0, 0.0]).unwrap() - 0.3).abs() < 1e-15);
        assert!((weighted_mixture_prob(&s, &[0.5, 0.5]).unwrap() - 0.5).abs() < 1e-15);
        assert!(weighted_mixture_prob(&s, &[0.6, 0.6]).is_err());
        assert!(weighted_mixture_prob(&s, &[-0.2, 1.2]).is_err());
        assert!(weighted_mixture_prob(&s, &[1.0]).is_err());
    }

    #[test]
    fn partial_frame_matches_full_frame_distribution() {
        // Same seed, same stream: the partial sampler consumes the same
        // Gaussians as the first columns of the full sampler, so the
        // projection probabilities agree draw by draw.
        let mut a = stream_rng(99, 5);
        let full = sample_haar(EnsembleKind::Unitary, 6, &mut a).unwrap();
        let mut b = stream_rng(99, 5);
        let part = sample_frame(EnsembleKind::Unitary, 6, 2, &mut b).unwrap();
        let ta = projection_probs(&full, 2, 2).unwrap();
        let tb = projection_probs(&part, 2, 2).unwrap();
        for (x, y) in ta.t.iter().zip(&tb.t) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(ProjectionConfig::new(4, 2, 2).is_ok());
        assert!(ProjectionConfig::new(4, 4, 2).is_err());
        assert!(ProjectionConfig::new(4, 0, 2).is_err());
        assert!(ProjectionConfig::new(4, 2, 5).is_err());
        let cfg = ProjectionConfig::new(3, 1, 2).unwrap();
        assert!(cfg.validate_analytic(EnsembleKind::Orthogonal).is_err());
        assert!(cfg.validate_analytic(EnsembleKind::Unitary).is_ok());
    }
}

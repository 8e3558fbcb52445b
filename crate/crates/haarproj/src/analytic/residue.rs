//! Numeric residue evaluation of the two-point contour integrals.
//!
//! After the inner integrals are done, one line integral remains. Its
//! integrand is a product of inverse powers of affine (unitary case) or
//! quadratic (orthogonal case) factors, so closing the contour picks up a
//! single pole whose order is set by the dimensions. The residue of an
//! order-p pole is the coefficient of `(x - pole)^{p-1}` in the Taylor
//! expansion of the regular part, which [`ComplexSeries`] arithmetic
//! produces without any symbolic or high-order numerical differentiation.
//!
//! Unitary ensemble, exponents m = N-K-1 and k = K-1:
//! the factors are `(1 + i t1 s)^{-m}`, `(1 - i (1-t1) s)^{-k}` and the
//! simple factor `(1 + i ts s)^{-1}` with ts = t1 + t2 - 1. For ts < 0
//! the only pole in the upper half plane is `s = i/t1` (order m); for
//! ts > 0 the only pole in the lower half plane is `s = -i/(1-t1)`
//! (order k).
//!
//! Orthogonal ensemble: the substitution `z = sqrt(1 + i s ts)` turns the
//! integral into one over `(z^2 - a^2)^{-m} (b^2 - z^2)^{-k}` with
//! `a = sqrt((1-t2)/t1)`, `b = sqrt(t2/(1-t1))` and integer exponents
//! `m = (N-K-1)/2`, `k = (K-1)/2` (K odd, N even). The deformed path
//! encloses `z = b` for ts > 0 (with mathematically negative orientation)
//! and `z = a` for ts < 0.

use num_complex::Complex64;

use super::series::ComplexSeries;
use crate::error::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The remaining line integral of the unitary two-point density, i.e. the
/// joint density divided by the one-point factor in t2.
pub(crate) fn unitary_factor(n: usize, k_dim: usize, t1: f64, t2: f64) -> Result<f64> {
    let m = (n - k_dim - 1) as i32;
    let k = (k_dim - 1) as i32;
    let ts = t1 + t2 - 1.0;
    let total = (m + k) as f64;

    let value = if ts <= 0.0 {
        // Close in the upper half plane around s = i/t1, pole of order m.
        if m == 0 {
            return Ok(0.0);
        }
        let pole = c(0.0, 1.0 / t1);
        let order = m as usize;
        // beta(s) = 1 - i (1-t1) s, gamma(s) = 1 + i ts s, both affine.
        let beta = ComplexSeries::affine(pole, c(1.0 / t1, 0.0), c(0.0, -(1.0 - t1)), order);
        let gamma = ComplexSeries::affine(pole, c(1.0 - ts / t1, 0.0), c(0.0, ts), order);
        let regular = beta.powi(-k)?.mul(&gamma.reciprocal()?);
        // alpha(s) = i t1 (s - pole), so alpha^{-m} contributes (i t1)^{-m}.
        let residue = c(0.0, t1).powi(-m) * regular.coeff(order - 1);
        (c(0.0, total) * residue).re
    } else {
        // Close in the lower half plane around s = -i/(1-t1), pole of order k.
        if k == 0 {
            return Ok(0.0);
        }
        let u = 1.0 - t1;
        let pole = c(0.0, -1.0 / u);
        let order = k as usize;
        let alpha = ComplexSeries::affine(pole, c(1.0 / u, 0.0), c(0.0, t1), order);
        let gamma = ComplexSeries::affine(pole, c(1.0 + ts / u, 0.0), c(0.0, ts), order);
        let regular = alpha.powi(-m)?.mul(&gamma.reciprocal()?);
        // beta(s) = -i (1-t1) (s - pole) contributes (-i (1-t1))^{-k}.
        let residue = c(0.0, -u).powi(-k) * regular.coeff(order - 1);
        (c(0.0, -total) * residue).re
    };
    Ok(value)
}

/// The remaining line integral of the orthogonal two-point density, after
/// the z-substitution; requires K odd and N even so both exponents are
/// integers.
pub(crate) fn orthogonal_factor(n: usize, k_dim: usize, t1: f64, t2: f64) -> Result<f64> {
    if k_dim % 2 == 0 || n % 2 == 1 {
        return Err(Error::UnsupportedParity(format!(
            "orthogonal residue evaluation needs K odd and N even, got N={n}, K={k_dim}"
        )));
    }
    let m = ((n - k_dim - 1) / 2) as i32;
    let k = ((k_dim - 1) / 2) as i32;
    let ts = t1 + t2 - 1.0;
    let a2 = (1.0 - t2) / t1;
    let b2 = t2 / (1.0 - t1);
    let front = ((m + k) as f64 - 0.5) * ts.powi(m + k - 1)
        / (t1.powi(m) * (1.0 - t1).powi(k));

    let value = if ts > 0.0 {
        // Only z = b inside the loop; orientation is mathematically negative.
        if k == 0 {
            return Ok(0.0);
        }
        let b = b2.sqrt();
        let order = k as usize;
        // (z^2 - a^2) about b: (b^2 - a^2) + 2b x + x^2.
        let quad = ComplexSeries::from_polynomial(
            c(b, 0.0),
            &[c(-a2, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            order,
        );
        // (b^2 - z^2)^{-k} = (-1)^k (z - b)^{-k} (z + b)^{-k}.
        let lin = ComplexSeries::affine(c(b, 0.0), c(2.0 * b, 0.0), c(1.0, 0.0), order);
        let regular = quad.powi(-m)?.mul(&lin.powi(-k)?);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let residue = sign * regular.coeff(order - 1).re;
        -2.0 * front * residue
    } else {
        // Only z = a inside; orientation flips sign.
        if m == 0 {
            return Ok(0.0);
        }
        let a = a2.sqrt();
        let order = m as usize;
        // (b^2 - z^2) about a: (b^2 - a^2) - 2a x - x^2.
        let quad = ComplexSeries::from_polynomial(
            c(a, 0.0),
            &[c(b2, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
            order,
        );
        let lin = ComplexSeries::affine(c(a, 0.0), c(2.0 * a, 0.0), c(1.0, 0.0), order);
        let regular = quad.powi(-k)?.mul(&lin.powi(-m)?);
        let residue = regular.coeff(order - 1).re;
        2.0 * front * residue
    };
    Ok(value)
}

//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair drives an adaptive bisection
//! scheme with a worst-segment-first queue. Integrands may be real- or
//! complex-valued; the error estimate is the magnitude of the difference
//! between the embedded Gauss and Kronrod results, summed over segments.
//!
//! Integrals over the whole real line are reduced to two finite pieces:
//! the head `[-1, 1]` is integrated directly and each tail is mapped onto
//! `(0, 1]` by `s = 1/u^2`, which turns an integrand decaying like
//! `|s|^{-p}` into a bounded one behaving like `u^{2p-3}`. For `p >= 3/2`
//! the mapped integrand is smooth up to the endpoint, so no node ever has
//! to approach a singular abscissa.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae on [0, 1] (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights for the odd-indexed Kronrod abscissae.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Complex-valued counterpart of [`QuadResult`].
#[derive(Debug, Clone, Copy)]
pub struct QuadResultC {
    pub value: Complex64,
    pub est_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// One Gauss-Kronrod pass over [a, b].
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;

    for i in 0..7 {
        let x = half * XGK[i];
        let pair = f(center - x) + f(center + x);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }

    kronrod *= half;
    gauss *= half;
    ((kronrod), (kronrod - gauss).norm())
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptively integrate a complex-valued function over the finite
/// interval [a, b] to the requested absolute tolerance.
///
/// The segment with the largest error estimate is bisected until the
/// summed estimate drops below `abs_tol` or `max_segments` is reached.
/// The result is returned either way; `converged` records which case
/// occurred, and `est_error` is always the final summed estimate.
pub fn adaptive_c<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_segments: usize,
) -> QuadResultC {
    let (value, error) = gk15(&f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total_value = value;
    let mut total_error = error;

    while total_error > abs_tol && heap.len() < max_segments {
        let worst = match heap.pop() {
            Some(seg) => seg,
            None => break,
        };
        // Stop splitting once the interval width is at rounding level.
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        evaluations += 30;
        total_value += lv + rv - worst.value;
        total_error += le + re - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
    }

    // Re-sum from segments to shed cancellation in the running updates.
    if !heap.is_empty() {
        total_value = Complex64::new(0.0, 0.0);
        total_error = 0.0;
        for seg in heap.iter() {
            total_value += seg.value;
            total_error += seg.error;
        }
    }

    QuadResultC {
        value: total_value,
        est_error: total_error,
        evaluations,
        converged: total_error <= abs_tol,
    }
}

/// Real-valued adaptive integration over [a, b]; see [`adaptive_c`].
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_segments: usize,
) -> QuadResult {
    let r = adaptive_c(|x| Complex64::new(f(x), 0.0), a, b, abs_tol, max_segments);
    QuadResult {
        value: r.value.re,
        est_error: r.est_error,
        evaluations: r.evaluations,
        converged: r.converged,
    }
}

/// Like [`adaptive`], but report failure to converge as an error.
pub fn adaptive_checked<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<QuadResult> {
    let r = adaptive(f, a, b, abs_tol, max_segments);
    if r.converged {
        Ok(r)
    } else {
        Err(Error::Numerical(format!(
            "quadrature on [{a}, {b}] stalled at est_error {:.3e} (target {abs_tol:.3e})",
            r.est_error
        )))
    }
}

/// Integrate a complex-valued function over the whole real line.
///
/// The integrand must decay at least like `|s|^{-3/2}` in both tails.
pub fn real_line_c<F: Fn(f64) -> Complex64>(
    f: F,
    abs_tol: f64,
    max_segments: usize,
) -> QuadResultC {
    let head = adaptive_c(&f, -1.0, 1.0, abs_tol / 3.0, max_segments);
    let upper = adaptive_c(
        |u| f(1.0 / (u * u)) * (2.0 / (u * u * u)),
        0.0,
        1.0,
        abs_tol / 3.0,
        max_segments,
    );
    let lower = adaptive_c(
        |u| f(-1.0 / (u * u)) * (2.0 / (u * u * u)),
        0.0,
        1.0,
        abs_tol / 3.0,
        max_segments,
    );
    QuadResultC {
        value: head.value + upper.value + lower.value,
        est_error: head.est_error + upper.est_error + lower.est_error,
        evaluations: head.evaluations + upper.evaluations + lower.evaluations,
        converged: head.converged && upper.converged && lower.converged,
    }
}

/// Integrate over the real line an integrand with the conjugation symmetry
/// `f(-s) = conj(f(s))`, so that the integral is real and equals
/// `2 * integral of Re f over [0, inf)`.
pub fn real_line_hermitian<F: Fn(f64) -> Complex64>(
    f: F,
    abs_tol: f64,
    max_segments: usize,
) -> QuadResult {
    let head = adaptive(|s| f(s).re, 0.0, 1.0, abs_tol / 4.0, max_segments);
    let tail = adaptive(
        |u| f(1.0 / (u * u)).re * (2.0 / (u * u * u)),
        0.0,
        1.0,
        abs_tol / 4.0,
        max_segments,
    );
    QuadResult {
        value: 2.0 * (head.value + tail.value),
        est_error: 2.0 * (head.est_error + tail.est_error),
        evaluations: head.evaluations + tail.evaluations,
        converged: head.converged && tail.converged,
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based starting guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * x * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            pp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

//! Truncated Taylor series with complex coefficients.
//!
//! Residues at poles of order p are read off as Taylor coefficients of the
//! regular part of the integrand, expanded about the pole. All the regular
//! parts that occur here are products of inverse powers of low-degree
//! polynomials, so series multiplication, inversion and integer powers are
//! the only operations needed. Truncation is explicit: combining two
//! series of order L yields order L.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite Taylor expansion `sum_i coef[i] * (x - center)^i`.
#[derive(Debug, Clone)]
pub struct ComplexSeries {
    center: Complex64,
    coef: Vec<Complex64>,
}

impl ComplexSeries {
    /// Constant series of the given truncation order (order >= 1).
    pub fn constant(center: Complex64, value: Complex64, order: usize) -> Self {
        assert!(order >= 1, "series order must be at least 1");
        let mut coef = vec![Complex64::new(0.0, 0.0); order];
        coef[0] = value;
        ComplexSeries { center, coef }
    }

    /// Expansion of a polynomial `sum_j poly[j] x^j` about `center`,
    /// truncated to `order` coefficients: the coefficient of
    /// `(x - center)^i` in `x^j` is `C(j, i) center^{j-i}`.
    pub fn from_polynomial(center: Complex64, poly: &[Complex64], order: usize) -> Self {
        assert!(order >= 1, "series order must be at least 1");
        let mut coef = vec![Complex64::new(0.0, 0.0); order];
        for (j, &c) in poly.iter().enumerate() {
            let mut c_pow = Complex64::new(1.0, 0.0);
            for i in (0..=j).rev() {
                if i < order {
                    coef[i] += c * binomial(j, i) * c_pow;
                }
                c_pow *= center;
            }
        }
        ComplexSeries { center, coef }
    }

    /// Affine factor `c0 + c1 * (x - center)`.
    pub fn affine(center: Complex64, c0: Complex64, c1: Complex64, order: usize) -> Self {
        assert!(order >= 1, "series order must be at least 1");
        let mut coef = vec![Complex64::new(0.0, 0.0); order];
        coef[0] = c0;
        if order > 1 {
            coef[1] = c1;
        }
        ComplexSeries { center, coef }
    }

    pub fn order(&self) -> usize {
        self.coef.len()
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Coefficient of `(x - center)^i`, zero beyond the truncation.
    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coef.get(i).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Product, truncated to the shorter of the two orders.
    pub fn mul(&self, other: &ComplexSeries) -> ComplexSeries {
        let order = self.order().min(other.order());
        let mut coef = vec![Complex64::new(0.0, 0.0); order];
        for i in 0..order {
            for j in 0..=i {
                coef[i] += self.coeff(j) * other.coeff(i - j);
            }
        }
        ComplexSeries { center: self.center, coef }
    }

    /// Multiplicative inverse by series division; the constant term must
    /// be nonzero (otherwise the factor contributes a pole, not a regular
    /// part).
    pub fn reciprocal(&self) -> Result<ComplexSeries> {
        let a0 = self.coeff(0);
        if a0.norm() == 0.0 {
            return Err(Error::Singularity(
                "series has vanishing constant term; cannot invert".into(),
            ));
        }
        let order = self.order();
        let mut coef = vec![Complex64::new(0.0, 0.0); order];
        coef[0] = 1.0 / a0;
        for i in 1..order {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=i {
                acc += self.coeff(j) * coef[i - j];
            }
            coef[i] = -acc / a0;
        }
        Ok(ComplexSeries { center: self.center, coef })
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, p: i32) -> Result<ComplexSeries> {
        if p < 0 {
            return self.reciprocal()?.powi(-p);
        }
        let mut result = ComplexSeries::constant(self.center, Complex64::new(1.0, 0.0), self.order());
        let mut base = self.clone();
        let mut exp = p as u32;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut value = 1.0;
    for i in 0..k.min(n - k) {
        value = value * (n - i) as f64 / (i + 1) as f64;
    }
    value
}

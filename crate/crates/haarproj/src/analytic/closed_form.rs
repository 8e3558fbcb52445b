//! Closed-form two-point joint densities for the small dimensions where
//! the remaining contour integral collapses to rational, algebraic or
//! elliptic expressions. These are independent of the residue engine and
//! the quadrature path, which makes them useful cross-checks as well as
//! the fast route inside [`super::density_auto`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::elliptic_k_from_complement;

/// Unitary ensemble, N = 4, K = 2:
/// `12 t1 t2` below the line t1 + t2 = 1 and `12 (1-t1)(1-t2)` above it.
/// The two branches join continuously on the line.
pub fn joint_unitary_4_2(t1: f64, t2: f64) -> f64 {
    if !in_unit_square(t1, t2) {
        return 0.0;
    }
    if t1 + t2 < 1.0 {
        12.0 * t1 * t2
    } else {
        12.0 * (1.0 - t1) * (1.0 - t2)
    }
}

/// Orthogonal ensemble, N = 4, K = 2, through the complete elliptic
/// integral of the first kind:
///
/// ```text
/// P(t1, t2) = K(2 sqrt(ab) / (a+b)) / (pi (a+b)),
///   a = sqrt(t1 t2), b = sqrt((1-t1)(1-t2)).
/// ```
///
/// The modulus tends to 1 as t1 + t2 -> 1, where the density diverges
/// logarithmically; evaluation exactly on that line is an error.
pub fn joint_orthogonal_4_2(t1: f64, t2: f64) -> Result<f64> {
    if !in_unit_square(t1, t2) {
        return Ok(0.0);
    }
    let a = (t1 * t2).sqrt();
    let b = ((1.0 - t1) * (1.0 - t2)).sqrt();
    if a + b == 0.0 {
        return Err(Error::Singularity(
            "joint_orthogonal_4_2 undefined at a corner of the square".into(),
        ));
    }
    // With modulus 2 sqrt(ab)/(a+b), the complementary modulus reduces
    // exactly to |t1 + t2 - 1| / (a+b)^2, which stays accurate arbitrarily
    // close to the line where the direct modulus rounds to 1.
    let ts = t1 + t2 - 1.0;
    if ts == 0.0 {
        return Err(Error::Singularity(format!(
            "logarithmic divergence on t1 + t2 = 1 (t1={t1}, t2={t2})"
        )));
    }
    let kp = (ts.abs() / ((a + b) * (a + b))).min(1.0);
    Ok(elliptic_k_from_complement(kp)? / (PI * (a + b)))
}

/// Unitary ensemble, N = 6, K = 2:
/// `80 t1 t2 S31(t1, t2)` below the line and `80 (1-t1)^3 (1-t2)^3`
/// above, with the quartic
/// `S31 = t1 t2 (t1 t2 + 9) + 3 t1^2 (1-t2) + 3 t2^2 (1-t1) - 6 (t1+t2) + 3`.
pub fn joint_unitary_6_2(t1: f64, t2: f64) -> f64 {
    if !in_unit_square(t1, t2) {
        return 0.0;
    }
    if t1 + t2 < 1.0 {
        80.0 * t1 * t2 * s31(t1, t2)
    } else {
        80.0 * (1.0 - t1).powi(3) * (1.0 - t2).powi(3)
    }
}

/// The polynomial factor of [`joint_unitary_6_2`] below the line.
pub fn s31(t1: f64, t2: f64) -> f64 {
    t1 * t2 * (t1 * t2 + 9.0) + 3.0 * t1 * t1 * (1.0 - t2) + 3.0 * t2 * t2 * (1.0 - t1)
        - 6.0 * (t1 + t2)
        + 3.0
}

/// Orthogonal ensemble, N = 12, K = 3:
/// `(72 / 7 pi) sqrt(t1 t2) S123(t1, t2)` below the line and
/// `(72 / 7 pi) 16 ((1-t1)(1-t2))^{7/2}` above it.
pub fn joint_orthogonal_12_3(t1: f64, t2: f64) -> f64 {
    if !in_unit_square(t1, t2) {
        return 0.0;
    }
    let front = 72.0 / (7.0 * PI);
    if t1 + t2 < 1.0 {
        front * (t1 * t2).sqrt() * s12_3(t1, t2)
    } else {
        front * 16.0 * ((1.0 - t1) * (1.0 - t2)).powf(3.5)
    }
}

/// The symmetric cubic-in-each-variable factor of [`joint_orthogonal_12_3`].
pub fn s12_3(t1: f64, t2: f64) -> f64 {
    let (u, v) = (t1, t2);
    16.0 * u.powi(3) * v.powi(3) - 56.0 * u.powi(2) * v.powi(3) + 70.0 * u * v.powi(3)
        - 35.0 * v.powi(3)
        - 56.0 * u.powi(3) * v.powi(2)
        + 196.0 * u.powi(2) * v.powi(2)
        - 245.0 * u * v.powi(2)
        + 105.0 * v.powi(2)
        + 70.0 * u.powi(3) * v
        - 245.0 * u.powi(2) * v
        + 280.0 * u * v
        - 105.0 * v
        - 35.0 * u.powi(3)
        + 105.0 * u.powi(2)
        - 105.0 * u
        + 35.0
}

/// Piecewise cubic conductance density for two modes per lead (unitary,
/// N = 4, K = 2): `2 g^3` on [0, 1] and `2 (2-g)^3` on [1, 2]; zero
/// outside the support.
pub fn conductance_unitary_4_2(g: f64) -> f64 {
    if !(0.0..=2.0).contains(&g) {
        0.0
    } else if g <= 1.0 {
        2.0 * g.powi(3)
    } else {
        2.0 * (2.0 - g).powi(3)
    }
}

fn in_unit_square(t1: f64, t2: f64) -> bool {
    (0.0..=1.0).contains(&t1) && (0.0..=1.0).contains(&t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_4_2_branches() {
        assert!((joint_unitary_4_2(0.3, 0.4) - 1.44).abs() < 1e-15);
        assert!((joint_unitary_4_2(0.7, 0.8) - 0.72).abs() < 1e-15);
        assert_eq!(joint_unitary_4_2(-0.1, 0.5), 0.0);
    }

    #[test]
    fn branches_join_on_the_line() {
        // Both printed branches are continuous across t1 + t2 = 1.
        for i in 1..40 {
            let t1 = i as f64 / 40.0;
            let t2 = 1.0 - t1;
            let below = 12.0 * t1 * t2;
            let above = 12.0 * (1.0 - t1) * (1.0 - t2);
            assert!((below - above).abs() < 1e-10, "4,2 at t1={t1}");

            let below = 80.0 * t1 * t2 * s31(t1, t2);
            let above = 80.0 * (1.0 - t1).powi(3) * (1.0 - t2).powi(3);
            assert!((below - above).abs() < 1e-10, "6,2 at t1={t1}");

            let below = (t1 * t2).sqrt() * s12_3(t1, t2);
            let above = 16.0 * ((1.0 - t1) * (1.0 - t2)).powf(3.5);
            assert!((below - above).abs() < 1e-10, "12,3 at t1={t1}");
        }
    }

    #[test]
    fn orthogonal_4_2_values() {
        // Finite away from the line, rejected on it.
        assert!(joint_orthogonal_4_2(0.5, 0.5).is_err());
        assert!(joint_orthogonal_4_2(0.3, 0.7).is_err());
        let v = joint_orthogonal_4_2(0.5, 0.9).unwrap();
        assert!(v.is_finite() && v > 0.0);
        // Corner limit: a -> 0, b -> 1 gives K(0)/pi = 1/2.
        let v = joint_orthogonal_4_2(1e-9, 1e-9).unwrap();
        assert!((v - 0.5).abs() < 1e-4, "corner value {v}");
    }

    #[test]
    fn orthogonal_4_2_log_growth_towards_line() {
        // Monotone increase along the approach sequence to the line; the
        // complementary-modulus route stays finite arbitrarily close.
        let mut last = 0.0;
        for &eps in &[1e-2, 1e-3, 1e-4, 1e-6, 1e-9, 1e-12] {
            let v = joint_orthogonal_4_2(0.4, 0.6 - eps).unwrap();
            assert!(v.is_finite() && v > last, "eps={eps}: {v} <= {last}");
            last = v;
        }
        // Divergence rate is logarithmic: value ~ ln(16 t1 (1-t1) / eps) / pi
        // at t1 = 0.4, within a few percent at eps = 1e-6.
        let eps = 1e-6;
        let v = joint_orthogonal_4_2(0.4, 0.6 - eps).unwrap();
        let approx = (16.0 * 0.4 * 0.6 / eps).ln() / PI;
        assert!((v - approx).abs() / approx < 0.05, "v={v}, approx={approx}");
    }

    #[test]
    fn conductance_closed_form_values() {
        assert!((conductance_unitary_4_2(1.0) - 2.0).abs() < 1e-15);
        assert!((conductance_unitary_4_2(0.5) - 0.25).abs() < 1e-15);
        assert_eq!(conductance_unitary_4_2(2.0), 0.0);
        assert_eq!(conductance_unitary_4_2(-0.5), 0.0);
        assert_eq!(conductance_unitary_4_2(2.5), 0.0);
    }
}

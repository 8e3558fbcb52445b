//! Analytic one-point and two-point joint densities of projection
//! probabilities.
//!
//! One-point densities are Beta laws. Two-point densities are evaluated
//! along three independent routes:
//!
//! - printed closed forms for the small dimensions ([`closed_form`]),
//! - a numeric residue engine for integer pole orders ([`twopoint_residue`]),
//! - adaptive quadrature of the remaining line integral
//!   ([`twopoint_quadrature`]).
//!
//! [`density_auto`] picks the cheapest applicable route: closed form when
//! one exists, residues when the pole orders are integers and the point is
//! not too close to the line t1 + t2 = 1, quadrature otherwise. The
//! orthogonal density diverges on that line (the unitary one stays
//! bounded); the residue path refuses points inside the guard strip while
//! the quadrature path still returns a value there, with its error
//! estimate inflated by the unresolved tail.

pub mod closed_form;
pub mod residue;
pub mod series;
pub mod twopoint;

pub use series::ComplexSeries;
pub use twopoint::TwoPointIntegrand;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{EnsembleKind, ProjectionConfig};
use crate::special::{gamma_ratio, lorentzian_1d, lorentzian_2d};

/// Which route produced a density value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Residue,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Residue => "residue",
        })
    }
}

/// A density value with the route that produced it and an error estimate
/// (zero for exact routes).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DensityValue {
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
}

impl DensityValue {
    fn exact(value: f64, method: Method) -> Self {
        DensityValue { value, method, est_error: 0.0 }
    }
}

/// Tunable tolerances of the analytic evaluators.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Half-width of the guard strip around t1 + t2 = 1 inside which the
    /// residue path refuses to evaluate.
    pub eps_ts: f64,
    /// Absolute target for the adaptive quadrature of the s-integral.
    pub quad_abs_tol: f64,
    /// Subdivision budget per quadrature call.
    pub max_segments: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eps_ts: 1e-3, quad_abs_tol: 1e-10, max_segments: 4096 }
    }
}

/// One-point density of a single projection probability: the Beta law
/// with parameters (K/2, (N-K)/2) for the orthogonal ensemble and
/// (K, N-K) for the unitary one.
pub fn onepoint_density(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    t: f64,
) -> Result<DensityValue> {
    Ok(DensityValue::exact(onepoint_value(ensemble, n, k, t)?, Method::ClosedForm))
}

/// Raw value of [`onepoint_density`].
pub(crate) fn onepoint_value(ensemble: EnsembleKind, n: usize, k: usize, t: f64) -> Result<f64> {
    ProjectionConfig { n, k, r: 1 }.validate()?;
    let (exp_t, exp_u, norm) = onepoint_parts(ensemble, n, k)?;
    if t < 0.0 || t > 1.0 {
        return Ok(0.0);
    }
    if t == 0.0 || t == 1.0 {
        // Boundary: return the limit where it exists, reject divergence.
        let exp_here = if t == 0.0 { exp_t } else { exp_u };
        if exp_here < 0.0 {
            return Err(Error::Domain(format!(
                "one-point density diverges at t = {t} for N={n}, K={k}"
            )));
        }
        if exp_here > 0.0 {
            return Ok(0.0);
        }
        let exp_other = if t == 0.0 { exp_u } else { exp_t };
        return if exp_other == 0.0 { Ok(norm) } else { Ok(norm) };
    }
    Ok(norm * t.powf(exp_t) * (1.0 - t).powf(exp_u))
}

/// Exponents of t and 1-t plus the normalization constant.
fn onepoint_parts(ensemble: EnsembleKind, n: usize, k: usize) -> Result<(f64, f64, f64)> {
    let (a, b) = match ensemble {
        EnsembleKind::Orthogonal => (k as f64 / 2.0, (n - k) as f64 / 2.0),
        EnsembleKind::Unitary => (k as f64, (n - k) as f64),
    };
    Ok((a - 1.0, b - 1.0, gamma_ratio(&[a + b], &[a, b])?))
}

/// Two-point joint density by adaptive quadrature of the line integral.
///
/// Works for every supported dimension. Close to the orthogonal line
/// singularity the value is still returned, but with the quadrature's
/// unresolved remainder reported in `est_error`.
pub fn twopoint_quadrature(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    t1: f64,
    t2: f64,
    tol: &Tolerances,
) -> Result<DensityValue> {
    let integrand = TwoPointIntegrand::new(ensemble, n, k, t1, t2)?;
    let prefactor = integrand.prefactor()?;
    let quad = integrand.integrate(tol.quad_abs_tol, tol.max_segments);
    let value = prefactor * quad.value;
    let mut est_error = prefactor.abs() * quad.est_error;
    if ensemble == EnsembleKind::Orthogonal && integrand.ts.abs() < tol.eps_ts {
        // Inside the guard strip the integral is still finite but slowly
        // convergent; flag the value rather than fail.
        est_error = est_error.max(value.abs() * 1e-3);
    }
    Ok(DensityValue { value, method: Method::Quadrature, est_error })
}

/// Two-point joint density through the residue engine.
///
/// Unitary dimensions always qualify; orthogonal ones need K odd and N
/// even so the pole orders are integers. Points inside the guard strip
/// `|t1 + t2 - 1| < eps_ts` are refused for the orthogonal ensemble,
/// whose deformed contour degenerates there.
pub fn twopoint_residue(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    t1: f64,
    t2: f64,
    tol: &Tolerances,
) -> Result<DensityValue> {
    ProjectionConfig { n, k, r: 2 }.validate_analytic(ensemble)?;
    if !(t1 > 0.0 && t1 < 1.0 && t2 > 0.0 && t2 < 1.0) {
        return Err(Error::Domain(format!(
            "residue evaluation needs t1, t2 in (0, 1), got ({t1}, {t2})"
        )));
    }
    let ts = t1 + t2 - 1.0;
    let factor = match ensemble {
        EnsembleKind::Unitary => residue::unitary_factor(n, k, t1, t2)?,
        EnsembleKind::Orthogonal => {
            if ts.abs() < tol.eps_ts {
                return Err(Error::NearSingularity(format!(
                    "|t1 + t2 - 1| = {:.3e} is inside the guard strip {:.3e}",
                    ts.abs(),
                    tol.eps_ts
                )));
            }
            residue::orthogonal_factor(n, k, t1, t2)?
        }
    };
    let value = onepoint_value(ensemble, n, k, t2)? * factor;
    Ok(DensityValue::exact(value, Method::Residue))
}

/// The orthogonal N = 4, K = 2 closed form through the complete elliptic
/// integral; see [`closed_form::joint_orthogonal_4_2`].
pub fn closed_form_p42(t1: f64, t2: f64) -> Result<DensityValue> {
    Ok(DensityValue::exact(
        closed_form::joint_orthogonal_4_2(t1, t2)?,
        Method::ClosedForm,
    ))
}

/// Normalization constant Z(0) of the R = 2 reduction:
/// `Gamma[(N-1)/2] / (sqrt(pi) Gamma(N/2))` for the orthogonal ensemble
/// and `1 / (pi (N-1))` for the unitary one. Equals the Lorentzian
/// integrals with c = 1/4 and exponent N/2 resp. N.
pub fn z_zero(ensemble: EnsembleKind, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("z_zero needs N >= 3, got {n}")));
    }
    match ensemble {
        EnsembleKind::Orthogonal => {
            gamma_ratio(&[(n as f64 - 1.0) / 2.0], &[n as f64 / 2.0])
                .map(|r| r / std::f64::consts::PI.sqrt())
        }
        EnsembleKind::Unitary => Ok(1.0 / (std::f64::consts::PI * (n as f64 - 1.0))),
    }
}

/// The Lorentzian-integral representation of [`z_zero`], used as an
/// independent cross-check.
pub fn z_zero_lorentzian(ensemble: EnsembleKind, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("z_zero needs N >= 3, got {n}")));
    }
    match ensemble {
        EnsembleKind::Orthogonal => lorentzian_1d(0.25, n as f64 / 2.0),
        EnsembleKind::Unitary => lorentzian_2d(0.25, n as f64),
    }
}

/// Route selection: closed form where one is printed (N = 4, K = 2),
/// residues where the pole orders are integers and the point is outside
/// the guard strip, quadrature otherwise.
pub fn density_auto(
    ensemble: EnsembleKind,
    n: usize,
    k: usize,
    t1: f64,
    t2: f64,
    tol: &Tolerances,
) -> Result<DensityValue> {
    ProjectionConfig { n, k, r: 2 }.validate_analytic(ensemble)?;

    if n == 4 && k == 2 {
        return match ensemble {
            EnsembleKind::Unitary => Ok(DensityValue::exact(
                closed_form::joint_unitary_4_2(t1, t2),
                Method::ClosedForm,
            )),
            EnsembleKind::Orthogonal => closed_form_p42(t1, t2),
        };
    }

    // Boundary of the unit square: the density extends continuously to 0
    // wherever a one-point factor vanishes.
    if t1 <= 0.0 || t1 >= 1.0 || t2 <= 0.0 || t2 >= 1.0 {
        if !(0.0..=1.0).contains(&t1) || !(0.0..=1.0).contains(&t2) {
            return Ok(DensityValue::exact(0.0, Method::ClosedForm));
        }
        for t in [t1, t2] {
            if t == 0.0 || t == 1.0 {
                if onepoint_value(ensemble, n, k, t)? == 0.0 {
                    return Ok(DensityValue::exact(0.0, Method::ClosedForm));
                }
                return Err(Error::Domain(format!(
                    "no boundary limit at ({t1}, {t2}) for N={n}, K={k}"
                )));
            }
        }
    }

    match twopoint_residue(ensemble, n, k, t1, t2, tol) {
        Ok(v) => Ok(v),
        Err(Error::UnsupportedParity(_)) | Err(Error::NearSingularity(_)) => {
            twopoint_quadrature(ensemble, n, k, t1, t2, tol)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const O: EnsembleKind = EnsembleKind::Orthogonal;
    const U: EnsembleKind = EnsembleKind::Unitary;

    fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
        assert!(
            (got - want).abs() <= tol,
            "{what}: got {got}, want {want}, diff {:.3e}",
            (got - want).abs()
        );
    }

    #[test]
    fn onepoint_known_values() {
        // Orthogonal N=4, K=2 is flat.
        for &t in &[0.1, 0.5, 0.77] {
            assert_close(onepoint_value(O, 4, 2, t).unwrap(), 1.0, 1e-14, "flat");
        }
        // Unitary N=4, K=2: 6 t (1-t).
        assert_close(onepoint_value(U, 4, 2, 0.5).unwrap(), 1.5, 1e-13, "6t(1-t)");
        // Unitary N=6, K=2: 20 t (1-t)^3.
        assert_close(
            onepoint_value(U, 6, 2, 0.5).unwrap(),
            20.0 * 0.5 * 0.125,
            1e-13,
            "20t(1-t)^3",
        );
    }

    #[test]
    fn onepoint_boundaries() {
        // Flat density has a finite limit at both boundaries.
        assert_close(onepoint_value(O, 4, 2, 0.0).unwrap(), 1.0, 1e-14, "t=0 limit");
        // Unitary K=2 vanishes at t=0 (exponent 1).
        assert_eq!(onepoint_value(U, 6, 2, 0.0).unwrap(), 0.0);
        // Orthogonal K=1 diverges at t=0 (exponent -1/2).
        assert!(onepoint_value(O, 4, 1, 0.0).is_err());
        // Outside the support.
        assert_eq!(onepoint_value(U, 6, 2, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn onepoint_duality() {
        // Unitary (N, K) equals orthogonal (2N, 2K) pointwise.
        for &(n, k) in &[(4, 2), (6, 2), (8, 3), (5, 4)] {
            for i in 1..10 {
                let t = i as f64 / 10.0;
                let u = onepoint_value(U, n, k, t).unwrap();
                let o = onepoint_value(O, 2 * n, 2 * k, t).unwrap();
                assert_close(u, o, 1e-12 * u.abs().max(1.0), "duality");
            }
        }
    }

    #[test]
    fn z_zero_values_and_cross_check() {
        assert_close(
            z_zero(U, 4).unwrap(),
            1.0 / (3.0 * std::f64::consts::PI),
            1e-15,
            "unitary N=4",
        );
        assert_close(z_zero(O, 4).unwrap(), 0.5, 1e-14, "orthogonal N=4");
        assert_close(z_zero(O, 6).unwrap(), 3.0 / 8.0, 1e-14, "orthogonal N=6");
        for &n in &[3, 4, 5, 8, 17, 40] {
            for ens in [O, U] {
                let a = z_zero(ens, n).unwrap();
                let b = z_zero_lorentzian(ens, n).unwrap();
                assert_close(a, b, 1e-12 * a.abs(), "lorentzian representation");
            }
        }
        assert!(z_zero(O, 2).is_err());
    }

    #[test]
    fn quadrature_reproduces_printed_4_2_forms() {
        let tol = Tolerances::default();
        for &(t1, t2) in &[(0.3, 0.4), (0.7, 0.8), (0.15, 0.55), (0.9, 0.45)] {
            let got = twopoint_quadrature(U, 4, 2, t1, t2, &tol).unwrap();
            let want = closed_form::joint_unitary_4_2(t1, t2);
            assert_close(got.value, want, 1e-9, "unitary 4,2 quadrature");

            let got = twopoint_quadrature(O, 4, 2, t1, t2, &tol).unwrap();
            let want = closed_form::joint_orthogonal_4_2(t1, t2).unwrap();
            assert_close(got.value, want, 1e-8, "orthogonal 4,2 quadrature");
        }
    }

    #[test]
    fn residue_reproduces_printed_forms() {
        let tol = Tolerances::default();
        for &(t1, t2) in &[(0.2, 0.3), (0.7, 0.8), (0.35, 0.55), (0.1, 0.95)] {
            let got = twopoint_residue(U, 4, 2, t1, t2, &tol).unwrap();
            assert_close(
                got.value,
                closed_form::joint_unitary_4_2(t1, t2),
                1e-12,
                "unitary 4,2 residue",
            );
            let got = twopoint_residue(U, 6, 2, t1, t2, &tol).unwrap();
            assert_close(
                got.value,
                closed_form::joint_unitary_6_2(t1, t2),
                1e-12,
                "unitary 6,2 residue",
            );
            let got = twopoint_residue(O, 12, 3, t1, t2, &tol).unwrap();
            let want = closed_form::joint_orthogonal_12_3(t1, t2);
            assert_close(got.value, want, 1e-12 * want.abs().max(1.0), "orthogonal 12,3");
        }
    }

    #[test]
    fn residue_spec_points() {
        let tol = Tolerances::default();
        // Unitary N=6, K=2 above the line: 80 (1-t1)^3 (1-t2)^3.
        let got = twopoint_residue(U, 6, 2, 0.7, 0.8, &tol).unwrap();
        assert_close(got.value, 80.0 * 0.027 * 0.008, 1e-12, "6,2 above line");
        // Orthogonal N=12, K=3 above the line.
        let got = twopoint_residue(O, 12, 3, 0.6, 0.7, &tol).unwrap();
        let want = 72.0 / (7.0 * std::f64::consts::PI) * 16.0 * 0.4_f64.powf(3.5) * 0.3_f64.powf(3.5);
        assert_close(got.value, want, 1e-12, "12,3 above line");
    }

    #[test]
    fn residue_guards() {
        let tol = Tolerances::default();
        assert!(matches!(
            twopoint_residue(O, 4, 2, 0.3, 0.4, &tol),
            Err(Error::UnsupportedParity(_))
        ));
        assert!(matches!(
            twopoint_residue(O, 12, 3, 0.5, 0.5005, &tol),
            Err(Error::NearSingularity(_))
        ));
    }

    #[test]
    fn residue_matches_quadrature_asymmetric() {
        let tol = Tolerances::default();
        for &(ens, n, k) in &[(U, 6, 2), (U, 8, 3), (O, 12, 3), (O, 8, 5)] {
            for &(t1, t2) in &[(0.2, 0.3), (0.6, 0.7), (0.42, 0.17)] {
                let r = twopoint_residue(ens, n, k, t1, t2, &tol).unwrap();
                let q = twopoint_quadrature(ens, n, k, t1, t2, &tol).unwrap();
                assert_close(r.value, q.value, 1e-8, &format!("{ens} N={n} K={k}"));
            }
        }
    }

    #[test]
    fn auto_dispatch_routes() {
        let tol = Tolerances::default();
        assert_eq!(density_auto(U, 4, 2, 0.3, 0.4, &tol).unwrap().method, Method::ClosedForm);
        assert_eq!(density_auto(O, 4, 2, 0.3, 0.4, &tol).unwrap().method, Method::ClosedForm);
        assert_eq!(density_auto(U, 6, 2, 0.3, 0.4, &tol).unwrap().method, Method::Residue);
        assert_eq!(density_auto(O, 12, 3, 0.3, 0.4, &tol).unwrap().method, Method::Residue);
        // Even K blocks the orthogonal residue path.
        assert_eq!(density_auto(O, 12, 4, 0.3, 0.4, &tol).unwrap().method, Method::Quadrature);
        assert_eq!(density_auto(O, 5, 2, 0.3, 0.4, &tol).unwrap().method, Method::Quadrature);
        // Near-singular orthogonal points fall back to quadrature too.
        assert_eq!(density_auto(O, 12, 3, 0.5, 0.5002, &tol).unwrap().method, Method::Quadrature);
    }

    #[test]
    fn swap_and_complement_symmetry() {
        let tol = Tolerances::default();
        for &(ens, n, k) in &[(U, 6, 2), (O, 12, 3)] {
            for &(t1, t2) in &[(0.2, 0.3), (0.6, 0.7), (0.15, 0.9)] {
                let a = twopoint_residue(ens, n, k, t1, t2, &tol).unwrap().value;
                let b = twopoint_residue(ens, n, k, t2, t1, &tol).unwrap().value;
                assert_close(a, b, 1e-10, "swap symmetry");
                let c = twopoint_residue(ens, n, n - k, 1.0 - t1, 1.0 - t2, &tol);
                match c {
                    Ok(c) => assert_close(a, c.value, 1e-10, "complement symmetry"),
                    Err(Error::UnsupportedParity(_)) => {
                        let c = twopoint_quadrature(ens, n, n - k, 1.0 - t1, 1.0 - t2, &tol)
                            .unwrap();
                        assert_close(a, c.value, 1e-8, "complement symmetry (quadrature)");
                    }
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn unitary_branches_continuous_on_line() {
        // The residue engine itself is continuous across the line for the
        // unitary ensemble: compare values straddling it.
        let tol = Tolerances::default();
        for &(n, k) in &[(4, 2), (6, 2), (8, 3)] {
            for i in 1..10 {
                let t1 = i as f64 / 10.0;
                let below = twopoint_residue(U, n, k, t1, 1.0 - t1 - 1e-9, &tol).unwrap();
                let above = twopoint_residue(U, n, k, t1, 1.0 - t1 + 1e-9, &tol).unwrap();
                assert_close(below.value, above.value, 1e-6, "line continuity");
            }
        }
    }
}

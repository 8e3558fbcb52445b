//! Three independent evaluation routes for the two-point density --
//! printed closed forms, the residue engine, and adaptive quadrature of
//! the contour integral -- agree pairwise to better than 1e-8 wherever
//! two or more apply.
//!
//! ```text
//! cargo run -p haarproj --example method_triangle
//! ```

use haarproj::analytic::{
    closed_form, density_auto, twopoint_quadrature, twopoint_residue, Tolerances,
};
use haarproj::sampling::EnsembleKind;

const O: EnsembleKind = EnsembleKind::Orthogonal;
const U: EnsembleKind = EnsembleKind::Unitary;

fn main() {
    let tol = Tolerances::default();
    for (ens, n, k) in [(U, 4, 2), (U, 6, 2), (O, 4, 2), (O, 12, 3)] {
        let mut worst = 0.0_f64;
        let mut routes = 0;
        for i in 1..8 {
            for j in 1..8 {
                let (t1, t2) = (i as f64 / 8.0, j as f64 / 8.0);
                if (t1 + t2 - 1.0).abs() < 0.02 {
                    continue;
                }
                let mut values = Vec::new();
                match (ens, n, k) {
                    (U, 4, 2) => values.push(closed_form::joint_unitary_4_2(t1, t2)),
                    (U, 6, 2) => values.push(closed_form::joint_unitary_6_2(t1, t2)),
                    (O, 4, 2) => values.push(closed_form::joint_orthogonal_4_2(t1, t2).unwrap()),
                    (O, 12, 3) => values.push(closed_form::joint_orthogonal_12_3(t1, t2)),
                    _ => {}
                }
                if let Ok(r) = twopoint_residue(ens, n, k, t1, t2, &tol) {
                    values.push(r.value);
                }
                values.push(twopoint_quadrature(ens, n, k, t1, t2, &tol).unwrap().value);
                routes = values.len();
                for a in 0..values.len() {
                    for b in a + 1..values.len() {
                        worst = worst.max((values[a] - values[b]).abs());
                    }
                }
            }
        }
        let auto = density_auto(ens, n, k, 0.25, 0.35, &tol).unwrap();
        println!(
            "{ens} N={n} K={k}: {routes} routes, worst pairwise gap {worst:.2e}; auto picks {}",
            auto.method
        );
    }
}

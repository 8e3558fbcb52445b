//! The orthogonal two-point density diverges logarithmically on the line
//! t1 + t2 = 1, while the unitary one stays bounded. Walk towards the
//! line and watch both, and check the elliptic closed form against
//! quadrature on the way.
//!
//! ```text
//! cargo run -p haarproj --example line_singularity
//! ```

use haarproj::analytic::{closed_form, twopoint_quadrature, Tolerances};
use haarproj::sampling::EnsembleKind;

fn main() {
    let tol = Tolerances::default();
    let t1 = 0.4;
    println!("approach t2 -> {} from below at t1 = {t1}:", 1.0 - t1);
    println!(
        "{:>9} {:>14} {:>14} {:>12}",
        "distance", "orthogonal", "quadrature", "unitary"
    );
    for &eps in &[1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-9, 1e-12] {
        let t2 = 1.0 - t1 - eps;
        let orth = closed_form::joint_orthogonal_4_2(t1, t2).unwrap();
        let quad = twopoint_quadrature(EnsembleKind::Orthogonal, 4, 2, t1, t2, &tol).unwrap();
        let unit = closed_form::joint_unitary_4_2(t1, t2);
        let quad_str = if quad.est_error < 1e-6 {
            format!("{:>14.8}", quad.value)
        } else {
            format!("{:>11.5}(~)", quad.value)
        };
        println!("{eps:>9.0e} {orth:>14.8} {quad_str} {unit:>12.8}");
    }
    println!("(~) marks values inside the guard strip, where the quadrature");
    println!("    reports an inflated error estimate instead of failing.");

    // The density stays finite on the border of the unit square.
    println!(
        "\nborder values: P(0, 0.5) = {:.6}, corner limit P(0+, 0+) = {:.6}",
        closed_form::joint_orthogonal_4_2(0.0, 0.5).unwrap(),
        closed_form::joint_orthogonal_4_2(1e-12, 1e-12).unwrap()
    );
}

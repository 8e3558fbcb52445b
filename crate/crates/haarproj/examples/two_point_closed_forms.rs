//! The small-dimension two-point joint densities have printed closed
//! forms; the residue engine reproduces them to near machine precision.
//!
//! ```text
//! cargo run -p haarproj --example two_point_closed_forms
//! ```

use haarproj::analytic::{closed_form, twopoint_residue, Tolerances};
use haarproj::sampling::EnsembleKind;

fn main() {
    let tol = Tolerances::default();
    let points = [(0.2, 0.3), (0.45, 0.35), (0.7, 0.8), (0.15, 0.9)];

    println!("unitary N=4 K=2: 12 t1 t2 below the line, 12 (1-t1)(1-t2) above");
    for &(t1, t2) in &points {
        let printed = closed_form::joint_unitary_4_2(t1, t2);
        let residue = twopoint_residue(EnsembleKind::Unitary, 4, 2, t1, t2, &tol).unwrap();
        println!(
            "  ({t1:.2}, {t2:.2}): printed {printed:>10.6}  residue {:>10.6}  gap {:.1e}",
            residue.value,
            (printed - residue.value).abs()
        );
    }

    println!("\nunitary N=6 K=2: 80 t1 t2 S31 below, 80 (1-t1)^3 (1-t2)^3 above");
    for &(t1, t2) in &points {
        let printed = closed_form::joint_unitary_6_2(t1, t2);
        let residue = twopoint_residue(EnsembleKind::Unitary, 6, 2, t1, t2, &tol).unwrap();
        println!(
            "  ({t1:.2}, {t2:.2}): printed {printed:>10.6}  residue {:>10.6}  gap {:.1e}",
            residue.value,
            (printed - residue.value).abs()
        );
    }

    println!("\northogonal N=12 K=3: (72/7pi) sqrt(t1 t2) S below, 16 (...)^(7/2) above");
    for &(t1, t2) in &points {
        let printed = closed_form::joint_orthogonal_12_3(t1, t2);
        let residue = twopoint_residue(EnsembleKind::Orthogonal, 12, 3, t1, t2, &tol).unwrap();
        println!(
            "  ({t1:.2}, {t2:.2}): printed {printed:>10.6}  residue {:>10.6}  gap {:.1e}",
            residue.value,
            (printed - residue.value).abs()
        );
    }

    // The two branches of each printed form meet continuously on the line.
    let t1 = 0.37;
    let t2 = 1.0 - t1;
    println!(
        "\nbranch continuity of the N=6 form at t1 = {t1}: below {:.9}, above {:.9}",
        80.0 * t1 * t2 * closed_form::s31(t1, t2),
        80.0 * (1.0 - t1).powi(3) * (1.0 - t2).powi(3)
    );
}

//! The one-point density of a projection probability is a Beta law:
//! Beta(K/2, (N-K)/2) for the orthogonal ensemble, Beta(K, N-K) for the
//! unitary one. Estimate it by Monte Carlo and print both side by side.
//!
//! ```text
//! cargo run -p haarproj --example one_point_laws
//! ```

use haarproj::analytic::onepoint_density;
use haarproj::montecarlo::{compare, estimate_joint, CompareOptions, JointEstimate};
use haarproj::sampling::EnsembleKind;

fn main() {
    let draws = 500_000;
    for (ensemble, n, k) in [
        (EnsembleKind::Orthogonal, 4, 2),
        (EnsembleKind::Unitary, 8, 3),
    ] {
        println!("\n{ensemble} ensemble, N = {n}, K = {k}, {draws} draws");
        let JointEstimate::Binned(hist) =
            estimate_joint(ensemble, n, k, 1, draws, 20, 7).unwrap()
        else {
            unreachable!()
        };

        println!("{:>6} {:>12} {:>12}", "t", "empirical", "analytic");
        for i in 0..hist.bins() {
            let t = (i as f64 + 0.5) / hist.bins() as f64;
            let analytic = onepoint_density(ensemble, n, k, t).unwrap().value;
            println!("{t:>6.3} {:>12.4} {analytic:>12.4}", hist.density(i));
        }

        let report = compare(
            &hist,
            |t| onepoint_density(ensemble, n, k, t[0]).map(|d| d.value).unwrap_or(0.0),
            7,
            &CompareOptions::default(),
        )
        .unwrap();
        println!(
            "chi2 = {:.2} with {} dof -> p = {:.3}, sup-norm = {:.4}",
            report.chi2, report.dof, report.p_value, report.sup_norm
        );
    }
}

//! Chi-squared goodness of fit of Monte Carlo histograms against the
//! analytic joint density: the true law is accepted, a deliberately
//! wrong one is decisively rejected.
//!
//! ```text
//! cargo run -p haarproj --example goodness_of_fit
//! ```

use haarproj::analytic::{closed_form, density_auto, Tolerances};
use haarproj::montecarlo::{compare, estimate_joint, CompareOptions, JointEstimate};
use haarproj::sampling::EnsembleKind;

fn main() {
    let tol = Tolerances::default();
    let draws = 500_000;
    let seed = 13;

    let JointEstimate::Binned(hist) =
        estimate_joint(EnsembleKind::Unitary, 4, 2, 2, draws, 40, seed).unwrap()
    else {
        unreachable!()
    };

    let good = compare(
        &hist,
        |t| {
            density_auto(EnsembleKind::Unitary, 4, 2, t[0], t[1], &tol)
                .map(|d| d.value)
                .unwrap_or(0.0)
        },
        seed,
        &CompareOptions::default(),
    )
    .unwrap();
    println!(
        "true law (12 t1 t2 pieces):    chi2 = {:>8.1} dof = {} -> p = {:.3}",
        good.chi2, good.dof, good.p_value
    );

    let bad = compare(
        &hist,
        |t| closed_form::joint_unitary_6_2(t[0], t[1]),
        seed,
        &CompareOptions::default(),
    )
    .unwrap();
    println!(
        "wrong law (N = 6 density):     chi2 = {:>8.1} dof = {} -> p = {:.3e}",
        bad.chi2, bad.dof, bad.p_value
    );

    // The orthogonal comparison excludes cells crossing the line
    // singularity; the conditional test runs on the remaining region.
    let JointEstimate::Binned(hist) =
        estimate_joint(EnsembleKind::Orthogonal, 4, 2, 2, draws, 40, seed).unwrap()
    else {
        unreachable!()
    };
    let opts = CompareOptions {
        strip_eps: Some(tol.eps_ts),
        ..CompareOptions::default()
    };
    let orth = compare(
        &hist,
        |t| {
            density_auto(EnsembleKind::Orthogonal, 4, 2, t[0], t[1], &tol)
                .map(|d| d.value)
                .unwrap_or(0.0)
        },
        seed,
        &opts,
    )
    .unwrap();
    println!(
        "orthogonal 4,2 (strip cut):    chi2 = {:>8.1} dof = {} -> p = {:.3}",
        orth.chi2, orth.dof, orth.p_value
    );
}

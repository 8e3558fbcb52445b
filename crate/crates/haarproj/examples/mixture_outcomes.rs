//! A system prepared in a mixture of eigenstates with occupation weights
//! p_xi yields the measurement-outcome probability tbar = sum p_xi t_xi.
//! Estimate its distribution for a thermal-like weight profile.
//!
//! ```text
//! cargo run -p haarproj --example mixture_outcomes
//! ```

use haarproj::sampling::{
    projection_probs, sample_frame, stream_rng, weighted_mixture_prob, EnsembleKind,
};

fn main() {
    let (n, k, r) = (6, 2, 3);
    // Boltzmann-like weights over three eigenstates.
    let raw = [1.0, 0.5, 0.25_f64];
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    println!("weights: {weights:?}");

    let draws = 200_000;
    let mut rng = stream_rng(3, 0);
    let mut hist = [0u32; 20];
    let mut mean = 0.0;
    for _ in 0..draws {
        let frame = sample_frame(EnsembleKind::Unitary, n, r, &mut rng).unwrap();
        let t = projection_probs(&frame, k, r).unwrap();
        let tbar = weighted_mixture_prob(&t, &weights).unwrap();
        hist[((tbar * 20.0) as usize).min(19)] += 1;
        mean += tbar;
    }
    mean /= draws as f64;

    println!("\ndistribution of tbar (N = {n}, K = {k}, R = {r}):");
    let peak = *hist.iter().max().unwrap() as f64;
    for (i, &c) in hist.iter().enumerate() {
        let bar = "#".repeat((55.0 * c as f64 / peak) as usize);
        println!("{:>5.2} {bar}", (i as f64 + 0.5) / 20.0);
    }
    println!(
        "\nmean tbar = {mean:.4}; every t_xi has mean K/N = {:.4}, and the\nweights sum to one, so the mixture mean matches it",
        k as f64 / n as f64
    );
}

//! Draw Haar-distributed frames and inspect their basic invariants:
//! column orthonormality, the full-trace identity, and the Beta mean of
//! a single projection probability.
//!
//! ```text
//! cargo run -p haarproj --example haar_sampling
//! ```

use haarproj::sampling::{
    projection_probs, sample_frame, sample_haar, stream_rng, EnsembleKind,
};

fn main() {
    let mut rng = stream_rng(42, 0);

    // A 1x1 orthogonal matrix is a random sign.
    let mut signs = [0u32; 2];
    for _ in 0..1000 {
        let f = sample_haar(EnsembleKind::Orthogonal, 1, &mut rng).unwrap();
        signs[(f.entry(0, 0).re > 0.0) as usize] += 1;
    }
    println!("O(1) draws: {} times -1, {} times +1", signs[0], signs[1]);

    // Orthonormality of a complex frame.
    let frame = sample_haar(EnsembleKind::Unitary, 8, &mut rng).unwrap();
    println!(
        "U(8) frame: worst Gram deviation {:.2e} (tolerance 1e-12)",
        frame.gram_deviation()
    );

    // With R = N the projection probabilities sum to K exactly.
    let t = projection_probs(&frame, 3, 8).unwrap();
    let total: f64 = t.t.iter().sum();
    println!("full trace: sum of t over all 8 columns = {total:.12} (K = 3)");

    // The mean of a single t is K/N.
    let (n, k, draws) = (8, 3, 200_000);
    let mut sum = 0.0;
    for _ in 0..draws {
        let f = sample_frame(EnsembleKind::Orthogonal, n, 1, &mut rng).unwrap();
        sum += projection_probs(&f, k, 1).unwrap().t[0];
    }
    println!(
        "mean of t over {draws} draws: {:.5} (expected K/N = {:.5})",
        sum / draws as f64,
        k as f64 / n as f64
    );
}

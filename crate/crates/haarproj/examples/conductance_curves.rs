//! The Landauer conductance of a two-terminal scatterer drawn from U(N):
//! for two modes per lead (N = 4, K = 2) the density is the piecewise
//! cubic 2 g^3 / 2 (2-g)^3. Compare the closed form, the anti-diagonal
//! convolution of the joint density, and the Monte Carlo histogram.
//!
//! ```text
//! cargo run -p haarproj --example conductance_curves
//! ```

use haarproj::analytic::Tolerances;
use haarproj::conductance::{conductance_convolution, p_g_closed_42, p_g_monte_carlo};
use haarproj::sampling::EnsembleKind;

fn main() {
    let tol = Tolerances::default();
    let draws = 400_000;
    let mc = p_g_monte_carlo(EnsembleKind::Unitary, 4, 2, draws, 20, 9).unwrap();

    println!("N = 4, K = 2 (unitary), {draws} draws");
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "g", "closed", "convolution", "monte carlo"
    );
    // Skip the support endpoints at the ends of the tabulated grid.
    for (g, v) in mc.grid[1..mc.grid.len() - 1].iter().zip(&mc.values[1..]) {
        let closed = p_g_closed_42(*g);
        let conv = conductance_convolution(EnsembleKind::Unitary, 4, 2, *g, &tol).unwrap();
        println!("{g:>6.3} {closed:>12.5} {conv:>12.5} {v:>12.5}");
    }
    println!("trapezoid of the MC curve: {:.5}", mc.trapezoid());

    // Six modes total, two in the narrow lead: no printed closed form,
    // but the convolution of the complementary (N, N-K) pair law still
    // gives the exact density.
    let mc6 = p_g_monte_carlo(EnsembleKind::Unitary, 6, 2, draws, 20, 10).unwrap();
    println!("\nN = 6, K = 2 (unitary), {draws} draws");
    println!("{:>6} {:>12} {:>12}", "g", "convolution", "monte carlo");
    for (g, v) in mc6.grid[1..mc6.grid.len() - 1].iter().zip(&mc6.values[1..]) {
        let conv = conductance_convolution(EnsembleKind::Unitary, 6, 2, *g, &tol).unwrap();
        println!("{g:>6.3} {conv:>12.5} {v:>12.5}");
    }

    let h = 2.0 / 20.0;
    let mean: f64 = mc6.grid[1..=20]
        .iter()
        .zip(&mc6.values[1..=20])
        .map(|(g, v)| g * v * h)
        .sum();
    println!("mean g = {mean:.4} (expected K(N-K)/N = {:.4})", 2.0 * 4.0 / 6.0);
}

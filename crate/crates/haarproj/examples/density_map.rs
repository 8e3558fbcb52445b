//! Character-cell maps of the two-point joint densities: the bounded
//! unitary landscape next to the orthogonal one with its divergence
//! along t1 + t2 = 1, and the steeper small-t rise of the orthogonal
//! N = 12, K = 3 density compared to the unitary N = 6, K = 2 one.
//!
//! For file output suitable for real plotting, use the CLI instead:
//! `haarproj density --ensemble orthogonal -N 4 -K 2 --grid 101 --out grid.csv`
//!
//! ```text
//! cargo run -p haarproj --example density_map
//! ```

use haarproj::analytic::{density_auto, Tolerances};
use haarproj::sampling::EnsembleKind;

const SHADES: &[u8] = b" .:-=+*#%@";

fn render(ensemble: EnsembleKind, n: usize, k: usize, cap: f64) {
    let tol = Tolerances::default();
    let cells = 31;
    println!("\n{ensemble} N={n} K={k} (values capped at {cap}):");
    for row in (0..cells).rev() {
        let t2 = (row as f64 + 0.5) / cells as f64;
        let mut line = String::new();
        for col in 0..cells {
            let t1 = (col as f64 + 0.5) / cells as f64;
            let value = density_auto(ensemble, n, k, t1, t2, &tol)
                .map(|d| d.value)
                .unwrap_or(f64::INFINITY);
            let level = (value.min(cap) / cap * (SHADES.len() - 1) as f64).round() as usize;
            line.push(SHADES[level] as char);
        }
        println!("  {line}");
    }
    println!("  (t1 rightward, t2 upward)");
}

fn main() {
    render(EnsembleKind::Unitary, 4, 2, 3.0);
    render(EnsembleKind::Orthogonal, 4, 2, 3.0);
    render(EnsembleKind::Unitary, 6, 2, 4.0);
    render(EnsembleKind::Orthogonal, 12, 3, 4.0);
}

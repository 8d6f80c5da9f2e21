//! Tabulates the density phi(t) with its first derivatives, and prints
//! the exact power series coefficients around 0.
//!
//!     cargo run --release --example phi_function

use genus2::heuristics::{phi, phi_derivative, phi_series_coefficients, series_radius};
use num_traits::Zero;

fn main() -> genus2::Result<()> {
    println!("{:>6} {:>22}", "t", "phi");
    for i in 0..=8 {
        let t = i as f64 / 16.0;
        println!("{t:>6.4} {:>22.17}", phi(t));
    }
    println!("\n{:>6} {:>22} {:>22} {:>22}", "t", "phi", "phi'", "phi''");
    for i in 11..=39 {
        let t = i as f64 / 20.0;
        println!(
            "{t:>6.2} {:>22.17} {:>22.17} {:>22.17}",
            phi(t),
            phi_derivative(1, t)?,
            phi_derivative(2, t)?
        );
    }
    println!("\nnonzero series coefficients up to t^12:");
    for (k, c) in phi_series_coefficients(12).iter().enumerate() {
        if !c.is_zero() {
            println!("  t^{k}: {c}");
        }
    }
    println!("radius of convergence ~ {:.6}", series_radius());
    Ok(())
}

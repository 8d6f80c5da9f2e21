//! Prints phi(1), gamma, c, a few truncated sums gamma_H and the
//! pair-count constants gamma^(m).
//!
//!     cargo run --release --example constants

use genus2::heuristics::{gamma_h, gamma_m_all, gamma_total, phi, tail_constant_c, HeuristicConfig};

fn main() -> genus2::Result<()> {
    let cfg = HeuristicConfig::default();
    let gamma = gamma_total(&cfg)?;
    let c = tail_constant_c(&cfg)?;
    println!("phi(1)  = {:.17}", phi(1.0));
    println!("gamma   = {gamma:.17}");
    println!("c       = {c:.17}");
    for h in [10, 100, 1000] {
        let gh = gamma_h(h, &cfg)?;
        println!("gamma_{h:<5} = {gh:.12}   (gamma - gamma_H) * H = {:.6}", (gamma - gh) * h as f64);
    }
    for (m, g) in gamma_m_all(5, 1000)?.iter().enumerate().skip(1) {
        println!("gamma^({m}) = {g:.6}");
    }
    Ok(())
}

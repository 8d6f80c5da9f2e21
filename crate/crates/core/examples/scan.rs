//! Counts the forms of size at most N: all of them, symmetry orbits,
//! singular ones and (for N <= 2) reducible ones.
//!
//!     cargo run --release --example scan -- 1

use genus2::curvespace::{count_bad, count_orbits, count_reducible};

fn main() -> genus2::Result<()> {
    let n: u64 = std::env::args().nth(1).map(|s| s.parse().expect("N")).unwrap_or(1);
    let total = (2 * n as u128 + 1).pow(7);
    println!("N = {n}");
    println!("forms           {total}");
    println!("orbits          {}", count_orbits(n));
    if n <= 4 {
        let bad = count_bad(n)?;
        println!("not squarefree  {bad}  (share {:.5})", bad as f64 / total as f64);
    }
    if n <= 2 {
        println!("reducible       {}", count_reducible(n)?);
    }
    Ok(())
}

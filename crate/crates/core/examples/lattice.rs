//! Geometry of the lattice of sextics vanishing at (a:b): covolume,
//! diameter and the closed-form integral behind gamma(a:b).
//!
//!     cargo run --release --example lattice -- 3 5

use genus2::heuristics::{gamma_ab, lattice_geometry, lemma_int};
use genus2::PrimitiveXCoord;

fn main() -> genus2::Result<()> {
    let mut args = std::env::args().skip(1);
    let a: i64 = args.next().map(|s| s.parse().expect("a")).unwrap_or(3);
    let b: i64 = args.next().map(|s| s.parse().expect("b")).unwrap_or(5);
    let x = PrimitiveXCoord::new(a, b)?;
    let g = lattice_geometry(&x);
    println!("x = {x}, height {}", x.height());
    println!("covolume   {:.6e}", g.covolume);
    println!("diameter   {:.6}", g.diameter);
    println!("Gram det == covolume^2: {}", g.gram_determinant() == g.covolume_squared());
    let li = lemma_int(&x)?;
    println!("cube integral {li:.12e}  vs 128 gamma(a:b) {:.12e}", 128.0 * gamma_ab(&x));
    Ok(())
}

//! Checks the published large points on the 642-point curve and searches
//! the small ones.
//!
//!     cargo run --release --example big_curves -- 100000

use genus2::experiments::{verify_big_curves, BigCurveConfig};

fn main() -> genus2::Result<()> {
    let bound: u64 = std::env::args().nth(1).map(|s| s.parse().expect("height bound")).unwrap_or(100_000);
    let report = verify_big_curves(&BigCurveConfig { elkies_bound: bound, ratio_bound: Some(bound) })?;
    let squares = report.listed.iter().filter(|l| l.is_square).count();
    println!("listed x-coordinates giving squares: {squares}/{}", report.listed.len());
    let e = &report.elkies;
    println!(
        "642-point curve: {} points up to height {}, {} with the listed ones",
        e.searched_points, e.search_bound, e.total_points
    );
    if let Some(r) = &report.ratio_curve {
        println!(
            "ratio curve (N = {}): {} points up to height {}, #C/log10(2N+1) = {:.2}",
            r.size, r.searched_points, r.search_bound, r.quotient
        );
    }
    Ok(())
}

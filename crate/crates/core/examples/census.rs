//! Point census over all curves of size N, reporting the average number
//! of points and the largest point height.
//!
//!     cargo run --release --example census -- 1 16383 [orbits|forms]
//!
//! `orbits` (the default) counts each class under x -> -x and x -> 1/x
//! once; `forms` counts every form with its orbit size.

use genus2::experiments::{run_census, CensusOptions};
use genus2::pointsearch::SearchConfig;

fn main() -> genus2::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map(|s| s.parse().expect("N")).unwrap_or(1);
    let bound: u64 = args.next().map(|s| s.parse().expect("height bound")).unwrap_or(16383);
    let weighting = args.next().map(|s| s.parse()).transpose()?.unwrap_or_default();
    let opts = CensusOptions { weighting, ..Default::default() };
    let t = std::time::Instant::now();
    let r = run_census(n, &SearchConfig::with_height_bound(bound), &opts)?;
    println!(
        "N = {n}, height bound {bound}, {} curves weighted by {weighting} ({:.1?})",
        r.num_curves,
        t.elapsed()
    );
    println!("average #C(Q)          {:.4}", r.avg_points);
    println!("average * sqrt(N)      {:.4}", r.avg_times_sqrt_n);
    println!("max point height       {}", r.max_point_height);
    println!("lambda(N)              {:.2}", r.lambda_n);
    println!("curves with most points:");
    for (f, k) in &r.record_curves {
        println!("  {k:>4}  {f}");
    }
    Ok(())
}

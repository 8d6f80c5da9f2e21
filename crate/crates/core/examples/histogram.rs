//! Points per height bracket [2^n, 2^(n+1)) against the prediction, and
//! the share of curves with at least m point pairs.
//!
//!     cargo run --release --example histogram -- 1 4095

use genus2::experiments::{height_histogram, pair_count_profile, run_census, CensusOptions};
use genus2::pointsearch::SearchConfig;

fn main() -> genus2::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map(|s| s.parse().expect("N")).unwrap_or(1);
    let bound: u64 = args.next().map(|s| s.parse().expect("height bound")).unwrap_or(4095);
    let r = run_census(n, &SearchConfig::with_height_bound(bound), &CensusOptions::default())?;
    println!("{:>3} {:>10} {:>12} {:>7}", "n", "observed", "predicted", "ratio");
    for row in height_histogram(&r)? {
        println!(
            "{:>3} {:>10} {:>12.1} {:>7.3}",
            row.n,
            row.observed,
            row.predicted,
            row.observed as f64 / row.predicted
        );
    }
    let profile = pair_count_profile(&r)?;
    println!("\n{:>3} {:>10} {:>10}", "m", "observed", "predicted");
    for row in &profile.rows {
        println!("{:>3} {:>10.5} {:>10.5}", row.m, row.observed_fraction, row.predicted_fraction);
    }
    if let Some(a) = profile.alpha {
        println!("fitted alpha = {a:.3}");
    }
    Ok(())
}

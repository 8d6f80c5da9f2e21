//! Re-counts the points on the table of curves with many points.
//!
//!     cargo run --release --example records -- 7 131071
//!
//! The first argument limits the table to rows with N at most that value.

use genus2::experiments::{verify_record_table, RECORD_TABLE};
use genus2::pointsearch::SearchConfig;

fn main() -> genus2::Result<()> {
    let mut args = std::env::args().skip(1);
    let max_n: u64 = args.next().map(|s| s.parse().expect("max N")).unwrap_or(7);
    let bound: u64 = args.next().map(|s| s.parse().expect("height bound")).unwrap_or(131071);
    let cfg = SearchConfig::with_height_bound(bound);
    for row in RECORD_TABLE.iter().filter(|r| r.n <= max_n) {
        let c = verify_record_table(std::slice::from_ref(row), &cfg)?.remove(0);
        println!(
            "N={:<4} {:<36} expected {:>4} found {:>4}  {:?}",
            row.n,
            format!("{:?}", row.coeffs),
            row.expected,
            c.found,
            c.status
        );
    }
    Ok(())
}

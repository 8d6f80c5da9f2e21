//! Searches one curve for rational points.
//!
//!     cargo run --release --example search -- 3,0,3,-1,-3,0,1 262144
//!
//! The default curve is y^2 = x^6 - 3x^4 - x^3 + 3x^2 + 3, whose largest
//! known point has x = -58189/209040.

use genus2::pointsearch::{search_points_sharded, SearchConfig};
use genus2::SexticForm;

fn main() -> genus2::Result<()> {
    let mut args = std::env::args().skip(1);
    let form: SexticForm = args.next().unwrap_or_else(|| "3,0,3,-1,-3,0,1".into()).parse()?;
    let bound: u64 = args.next().map(|s| s.parse().expect("height bound")).unwrap_or(262_144);
    let cfg = SearchConfig::with_height_bound(bound);
    cfg.validate()?;
    let t = std::time::Instant::now();
    let stats = search_points_sharded(&form, &cfg, rayon::current_num_threads() * 4);
    for p in &stats.points {
        println!("{p}");
    }
    println!(
        "{} points, {} x-coordinates, max height {} ({:.2?})",
        stats.num_points,
        stats.num_x_coords,
        stats.max_point_height,
        t.elapsed()
    );
    Ok(())
}

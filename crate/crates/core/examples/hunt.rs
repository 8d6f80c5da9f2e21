//! A small constrained hunt: forms that are squares at inf, 0, 1 and -1,
//! ranked by the F_p product and searched in stages.
//!
//!     cargo run --release --example hunt -- 3

use genus2::hunt::{hunt_shard, hunt_shards, FpTables, HuntConfig};

fn main() -> genus2::Result<()> {
    let n_max: u64 = std::env::args().nth(1).map(|s| s.parse().expect("N_max")).unwrap_or(3);
    let cfg = HuntConfig {
        n_max,
        fp_threshold: 0.5,
        stages: vec![(255, 16), (2047, 20)],
        ..Default::default()
    };
    cfg.validate()?;
    let tables = FpTables::new(cfg.fp_bound)?;
    let mut records: Vec<_> = hunt_shards(&cfg)
        .into_iter()
        .flat_map(|s| hunt_shard(&cfg, &tables, s))
        .collect();
    records.sort_by(|a, b| b.num_points.cmp(&a.num_points).then(a.form.cmp(&b.form)));
    println!("{} curves survived all stages", records.len());
    for r in records.iter().take(15) {
        println!("{:>4} points  score {:>8.3}  {}", r.num_points, r.fp_score, r.form);
    }
    Ok(())
}

//! Shows how much of the (a, b) box each sieve modulus removes on one
//! curve, and what the search costs.
//!
//!     cargo run --release --example sieve_profile -- 1,-1,0,1,-1,0,1 16383

use genus2::pointsearch::{sieve_profile, SearchConfig};
use genus2::SexticForm;

fn main() -> genus2::Result<()> {
    let mut args = std::env::args().skip(1);
    let form: SexticForm = args.next().unwrap_or_else(|| "1,-1,0,1,-1,0,1".into()).parse()?;
    let bound: u64 = args.next().map(|s| s.parse().expect("height bound")).unwrap_or(16383);
    let p = sieve_profile(&form, &SearchConfig::with_height_bound(bound));
    println!("2-adic survival      {:.4}", p.two_adic_survival);
    for m in &p.moduli {
        println!("mod {:>4} (p = {:>2})  {:.4}", m.modulus, m.prime, m.survival);
    }
    println!("real-interval share  {:.4}", p.real_fraction);
    println!("words scanned        {}", p.words_scanned);
    println!("candidates tested    {}", p.candidates_tested);
    println!("points               {}", p.num_points);
    println!("time                 {:.2?}", p.elapsed);
    Ok(())
}

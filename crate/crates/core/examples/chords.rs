//! Finds new points from known ones: five points on a cubic y = c(x)
//! force a sixth.
//!
//!     cargo run --release --example chords
//!
//! The curve is y^2 = x^6 - (x+2)(x+1)x(x-1)(x-2)(x-3), which meets
//! y = x^3 at six integral points. Five of them are given; the sixth is
//! recovered.

use genus2::hunt::{chord_extend, ChordConfig};
use genus2::{PrimitiveXCoord, RationalPoint, SexticForm};
use num_bigint::BigInt;

fn main() -> genus2::Result<()> {
    let form: SexticForm = "0,12,-4,-15,5,3,0".parse()?;
    let known: Vec<RationalPoint> = [-2i64, -1, 0, 1, 2]
        .iter()
        .map(|&x| RationalPoint::new(PrimitiveXCoord::new(x, 1).unwrap(), BigInt::from(x * x * x)))
        .collect();
    for p in &known {
        assert!(p.lies_on(&form));
    }
    let report = chord_extend(&form, &known, &ChordConfig::default())?;
    println!("examined {} five-point sets, {} cubics", report.subsets_examined, report.cubics_found);
    for p in &report.new_points {
        println!("new point {p}");
    }
    Ok(())
}

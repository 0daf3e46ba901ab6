//! Certified enclosures of e and xi = sum 1/(n!)^5 to a requested width.
//!
//!     cargo run --example certified_value -- 1/10^12

use cantor_series::rational::{parse_rational, to_exact_string, DecimalApprox};
use cantor_series::series::CantorSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = parse_rational(&std::env::args().nth(1).unwrap_or_else(|| "1/10^6".into()))?;
    for series in [CantorSeries::e(), CantorSeries::xi()] {
        let enc = series.certified_value(&eps, 200)?;
        println!(
            "{} (eps = {})",
            series.name().unwrap_or("?"),
            to_exact_string(&eps)
        );
        println!("  depth    {}", enc.depth);
        println!("  interval {}", enc.interval);
        println!("  width    {}", to_exact_string(&enc.interval.width()));
        println!(
            "  decimal  [{}, {}]",
            DecimalApprox::of(enc.interval.lo()).approx,
            DecimalApprox::of(enc.interval.hi()).approx
        );
    }
    Ok(())
}

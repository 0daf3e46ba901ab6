//! Prints the nested intervals I_1, I_2, ... for e and checks that each sits
//! inside the previous one with width exactly 1/B_n.
//!
//!     cargo run --example nested_intervals -- 10

use cantor_series::rational::{to_exact_string, DecimalApprox, RationalInterval};
use cantor_series::series::CantorSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let depth: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    let e = CantorSeries::e();
    let mut previous = None;
    for step in e.nested_intervals().take(depth) {
        let step = step?;
        let nested = previous
            .as_ref()
            .is_none_or(|p: &RationalInterval| p.contains_interval(&step.interval));
        println!(
            "n={:<3} B_n={:<12} I_n={:<28} width={:<12} lo~{} nested={}",
            step.n,
            step.prefix.denominator,
            step.interval.to_string(),
            to_exact_string(&step.interval.width()),
            DecimalApprox::of(step.interval.lo()).approx,
            nested
        );
        previous = Some(step.interval);
    }
    Ok(())
}

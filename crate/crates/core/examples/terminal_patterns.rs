//! Series whose digits end in all zeros or all maxima are rational; their
//! exact value comes from the prefix alone.
//!
//!     cargo run --example terminal_patterns

use cantor_series::rational::to_exact_string;
use cantor_series::sequences::{BaseSequence, DigitRule};
use cantor_series::series::CantorSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let succ = BaseSequence::successor();
    let cases = [
        (
            "e cut after two digits",
            CantorSeries::new(2, DigitRule::eventually_zero([1, 1]), succ.clone())?,
        ),
        (
            "all maximal digits",
            CantorSeries::new(0, DigitRule::EventuallyMax(vec![]), succ.clone())?,
        ),
        (
            "1, 0, then maximal",
            CantorSeries::new(0, DigitRule::eventually_max([1, 0]), succ.clone())?,
        ),
        ("e itself", CantorSeries::e()),
    ];
    for (label, series) in cases {
        let class = series.classify_prefix(64)?;
        match (class.verdict, class.closed_form) {
            (Some((kind, n0)), Some(value)) => {
                println!(
                    "{label}: {kind:?} from n0 = {n0}, value {}",
                    to_exact_string(&value)
                )
            }
            _ => println!("{label}: no terminal pattern declared"),
        }
    }
    Ok(())
}

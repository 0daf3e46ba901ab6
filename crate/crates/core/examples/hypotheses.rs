//! Checks the standing assumptions on a series: digit bounds, every small
//! prime dividing some base, and the tail condition theta_n <= 1/2.
//!
//!     cargo run --example hypotheses

use cantor_series::measure::{half_condition, verdict_name};
use cantor_series::sequences::{validate_digits, BaseSequence, DigitRule};
use cantor_series::series::CantorSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let all_max = CantorSeries::new(
        0,
        DigitRule::EventuallyMax(vec![]),
        BaseSequence::successor(),
    )?
    .with_name("all-max");
    for series in [CantorSeries::e(), CantorSeries::xi(), all_max] {
        let name = series.name().unwrap_or("?").to_string();
        let validation = validate_digits(&series, 64)?;
        let coverage = series.sigma().check_prime_coverage(61, 64);
        let half = half_condition(&series, 30, 60)?;
        println!("{name}");
        println!(
            "  digit violations up to 64: {}",
            validation.violations.len()
        );
        println!(
            "  primes <= 61 with a witness in b_1..b_64: {} (finite evidence only)",
            if coverage.passed { "all" } else { "not all" }
        );
        println!(
            "  theta_n <= 1/2 for 2 <= n <= 30: {}",
            verdict_name(half.verdict)
        );
    }
    let twos = BaseSequence::explicit([2u32, 2, 2])?;
    let missing: Vec<u64> = twos.check_prime_coverage(3, 3).missing().collect();
    println!("bases (2, 2, 2): primes without a witness {missing:?}");
    Ok(())
}

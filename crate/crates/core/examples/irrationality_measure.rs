//! Lower bounds on |theta - p/q| from D(q, sigma), certified against exact
//! enclosures of theta for e and xi.
//!
//!     cargo run --example irrationality_measure -- 200

use cantor_series::measure::{
    best_approx_at_depth, certify_distance, measure_bound, verdict_name, verify_measure,
};
use cantor_series::rational::{rat, to_exact_string};
use cantor_series::series::CantorSeries;
use num_bigint::BigInt;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let qmax: i64 = std::env::args().nth(1).map_or(Ok(200), |s| s.parse())?;
    let e = CantorSeries::e();

    for q in [1, 7, 100] {
        let b = measure_bound(&e, q)?;
        println!(
            "e, q = {q}: D = {}, |e - p/q| > {}",
            b.d_value,
            to_exact_string(&b.rhs)
        );
    }

    // every integer is more than 0.28 away from e
    for p in [2, 3] {
        let cert = certify_distance(&e, &BigInt::from(p), 1, &rat(28, 100), 60)?;
        println!(
            "|e - {p}| >= {} (depth {})",
            to_exact_string(&cert.distance_lower),
            cert.depth
        );
    }

    // A_n/B_n is the closest fraction with denominator B_n
    for n in 2..=6 {
        let r = best_approx_at_depth(&e, n, 3, 60)?;
        println!(
            "n = {n}: {}/{} best in window, {}",
            r.numerator,
            r.denominator,
            verdict_name(r.verdict)
        );
    }

    for series in [e, CantorSeries::xi()] {
        let report = verify_measure(&series, qmax, 2, 60)?;
        println!(
            "{} for q <= {qmax}: pass {}, fail {}, undecided {} -> {}",
            report.series,
            report.tally.pass,
            report.tally.fail,
            report.tally.undecided,
            verdict_name(report.verdict)
        );
    }
    Ok(())
}

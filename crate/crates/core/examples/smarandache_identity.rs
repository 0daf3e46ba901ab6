//! D(q, sigma) for several base sequences next to the Kempner function S(q),
//! then a sweep of S(q) = D(q, (2,3,4,...)) + 1.
//!
//!     cargo run --example smarandache_identity -- 5000

use cantor_series::dfunc::{d_of, d_table, smarandache_of};
use cantor_series::sequences::BaseSequence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limit: i64 = std::env::args().nth(1).map_or(Ok(2000), |s| s.parse())?;
    let succ = BaseSequence::successor();
    let nat = BaseSequence::natural();
    let pow5 = BaseSequence::successor_power(5)?;

    println!(
        "{:>6} {:>6} {:>6} {:>6} {:>6}",
        "q", "S(q)", "D_succ", "D_nat", "D_pow5"
    );
    for q in [1, 2, 6, 12, 16, 32, 97, 360, 7776] {
        println!(
            "{:>6} {:>6} {:>6} {:>6} {:>6}",
            q,
            smarandache_of(q as u64)?,
            d_of(q, &succ)?,
            d_of(q, &nat)?,
            d_of(q, &pow5)?
        );
    }

    let qs: Vec<i64> = (2..=limit).collect();
    let rows = d_table(&qs, &succ, None)?;
    let bad: Vec<i64> = rows
        .iter()
        .filter(|r| r.identity_ok != Some(true))
        .map(|r| r.q)
        .collect();
    println!(
        "S(q) = D(q) + 1 for 2 <= q <= {limit}: {} mismatches",
        bad.len()
    );
    Ok(())
}

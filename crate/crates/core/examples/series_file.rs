//! Loads a series from a JSON file (or a built-in name) and prints a short
//! report. Sample files live in examples/data.
//!
//!     cargo run --example series_file -- crates/core/examples/data/cubes.json

use cantor_series::cli::resolve_series;
use cantor_series::measure::{measure_bound, rule_name, verdict_name, verify_measure};
use cantor_series::rational::{rat, to_exact_string};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/cubes.json");
    let path = std::env::args().nth(1).unwrap_or_else(|| default.into());
    let series = resolve_series(&path)?;
    println!(
        "{} over {}",
        series.name().unwrap_or("series"),
        series.sigma()
    );
    let enc = series.certified_value(&rat(1, 1_000_000_000), 100)?;
    println!("  value in {} (depth {})", enc.interval, enc.depth);
    for q in [2, 8, 27, 100] {
        let b = measure_bound(&series, q)?;
        if b.is_applicable() {
            println!(
                "  q = {q}: D = {}, |theta - p/q| > {}",
                b.d_value,
                to_exact_string(&b.rhs)
            );
        } else {
            println!(
                "  q = {q}: D = {}, no bound ({})",
                b.d_value,
                rule_name(&b.rule)
            );
        }
    }
    let report = verify_measure(&series, 100, 2, 60)?;
    println!("  bound check q <= 100: {}", verdict_name(report.verdict));
    Ok(())
}

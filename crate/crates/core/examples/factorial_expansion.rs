//! Factorial-base digits of rationals: p/q = c_1 + c_2/2! + c_3/3! + ...
//! terminates by n = S(q).
//!
//!     cargo run --example factorial_expansion -- 355/113

use cantor_series::dfunc::smarandache_of;
use cantor_series::expansion::{factorial_digits, resum};
use cantor_series::rational::{parse_rational, to_exact_string};
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        ["1/2", "2/3", "1/7", "-1/3", "355/113", "0.125"]
            .map(String::from)
            .to_vec()
    } else {
        inputs
    };
    for s in inputs {
        let x = parse_rational(&s)?;
        let q = x.denom().to_u64().ok_or("denominator too large")?;
        let exp = factorial_digits(&x, q as usize + 1)?;
        let coeffs: Vec<String> = exp
            .factorial_coefficients()
            .iter()
            .map(|c| c.to_string())
            .collect();
        println!(
            "{} : c = [{}], last nonzero c_{}, S(q) = {}, resum = {}",
            to_exact_string(&x),
            coeffs.join(", "),
            exp.last_nonzero_index().map_or(1, |i| i + 1),
            smarandache_of(q)?,
            to_exact_string(&resum(&exp)?)
        );
    }
    Ok(())
}

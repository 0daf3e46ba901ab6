//! Exact Cantor-series arithmetic: nested-interval enclosures, the function
//! `D(q, sigma)`, certified irrationality-measure checks and factorial-base
//! digits.
//!
//! ```
//! use cantor_series::rational::rat;
//! use cantor_series::series::CantorSeries;
//!
//! let enc = CantorSeries::xi().certified_value(&rat(1, 1_000_000), 64).unwrap();
//! assert_eq!(enc.depth, 3);
//! assert!(enc.interval.contains(&rat(1_031_378_8, 10_000_000)));
//! ```

pub mod cli;
pub mod dfunc;
pub mod error;
pub mod expansion;
pub mod measure;
pub mod rational;
pub mod sequences;
pub mod series;

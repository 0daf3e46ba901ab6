//! The generalized Smarandache function `D(q, sigma) = min{n : q | b_1...b_n}`
//! and the classical Kempner/Smarandache function `S(q) = min{n : q | n!}`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{BaseKind, BaseSequence};

/// A `D(q, sigma)` evaluation request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DQuery {
    q: i64,
    sigma: BaseSequence,
    horizon: usize,
}

impl DQuery {
    /// Query with the default horizon `max(64, 4|q|)`.
    pub fn new(q: i64, sigma: BaseSequence) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(DQuery {
            q,
            horizon: default_horizon(q),
            sigma,
        })
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn sigma(&self) -> &BaseSequence {
        &self.sigma
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

pub fn default_horizon(q: i64) -> usize {
    let four_q = (q.unsigned_abs()).saturating_mul(4);
    usize::try_from(four_q).unwrap_or(usize::MAX).max(64)
}

/// Least `n <= horizon` with `|q|` dividing `B_n`. An explicit list caps the
/// horizon at its length.
///
/// Scans the cumulative products residue by residue, so `B_n` is never
/// materialized.
pub fn d_function(query: &DQuery) -> Result<usize> {
    let m = query.q.unsigned_abs();
    let mut residue: u128 = (1 % m) as u128;
    let modulus = BigUint::from(m);
    let horizon = query
        .sigma
        .len()
        .map_or(query.horizon, |len| len.min(query.horizon));
    for n in 1..=horizon {
        let b = match query.sigma.base_at_u64(n)? {
            Some(b) => (b % m) as u128,
            None => (query.sigma.base_at(n)? % &modulus)
                .to_u64()
                .expect("residue fits in u64") as u128,
        };
        residue = residue * b % m as u128;
        if residue == 0 {
            return Ok(n);
        }
    }
    Err(Error::HorizonExhausted {
        q: query.q,
        horizon,
    })
}

/// `D(q, sigma)` with the default horizon.
pub fn d_of(q: i64, sigma: &BaseSequence) -> Result<usize> {
    d_function(&DQuery::new(q, sigma.clone())?)
}

/// Kempner/Smarandache `S(q)`: least `n` with `q | n!`, by direct scan of
/// `n! mod q`.
pub fn smarandache(q: u64, horizon: usize) -> Result<usize> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut residue: u128 = 1 % q as u128;
    for n in 1..=horizon {
        residue = residue * (n as u128 % q as u128) % q as u128;
        if residue == 0 {
            return Ok(n);
        }
    }
    Err(Error::HorizonExhausted {
        q: q as i64,
        horizon,
    })
}

/// `S(q)` with horizon `q`, which always suffices since `q | q!`.
pub fn smarandache_of(q: u64) -> Result<usize> {
    smarandache(q, q.max(1) as usize)
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// One row of a batch `D` evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DRow {
    pub q: i64,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none", default)]
    pub s: Option<usize>,
    /// `S(q) = D(q, (2,3,...)) + 1` for `|q| >= 2`, or `D(q, (1,2,...)) = S(q)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub identity_ok: Option<bool>,
}

/// Evaluates `D(q, sigma)` and, for the successor and natural sequences,
/// `S(|q|)` and the matching identity.
pub fn d_row(q: i64, sigma: &BaseSequence, horizon: Option<usize>) -> Result<DRow> {
    let mut query = DQuery::new(q, sigma.clone())?;
    if let Some(h) = horizon {
        query = query.with_horizon(h);
    }
    let d = d_function(&query)?;
    let (s, identity_ok) = match sigma.kind() {
        BaseKind::SuccessorBases => {
            let s = smarandache_of(q.unsigned_abs())?;
            let ok = (q.unsigned_abs() >= 2).then_some(s == d + 1);
            (Some(s), ok)
        }
        BaseKind::NaturalBases => {
            let s = smarandache_of(q.unsigned_abs())?;
            (Some(s), Some(s == d))
        }
        _ => (None, None),
    };
    Ok(DRow {
        q,
        d,
        s,
        identity_ok,
    })
}

/// Batch evaluation over `qs`, in input order.
pub fn d_table(qs: &[i64], sigma: &BaseSequence, horizon: Option<usize>) -> Result<Vec<DRow>> {
    qs.par_iter().map(|&q| d_row(q, sigma, horizon)).collect()
}

pub fn d_table_csv(rows: &[DRow]) -> String {
    let mut out = String::from("q,D,S,identity_ok\n");
    for r in rows {
        let s = r.s.map(|s| s.to_string()).unwrap_or_default();
        let ok = r.identity_ok.map(|b| b.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", r.q, r.d, s, ok));
    }
    out
}

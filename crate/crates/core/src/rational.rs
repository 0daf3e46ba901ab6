//! Exact rationals, closed rational intervals, parsing and display helpers.
//!
//! Everything in the trust path is an [`ExactRational`]. Decimal strings are
//! produced only for display and always carry their rounding direction.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

pub fn rat(p: i64, q: i64) -> ExactRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(n.into())
}

pub fn recip(n: &BigUint) -> ExactRational {
    BigRational::new(BigInt::one(), BigInt::from(n.clone()))
}

/// Renders `p/q` (or `p` for integers), the wire format for exact values.
pub fn to_exact_string(x: &ExactRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses an exact rational from `p/q`, `p`, a terminating decimal such as
/// `-1.25` or `1e-6`, or `p/q` where either side is written `base^exp`.
pub fn parse_rational(input: &str) -> Result<ExactRational> {
    let s = input.trim();
    let err = || Error::ParseRational {
        input: input.to_string(),
    };
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer_term(num).ok_or_else(err)?;
        let den = parse_integer_term(den).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    if s.contains('^') {
        return parse_integer_term(s).map(int).ok_or_else(err);
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_integer_term(s: &str) -> Option<BigInt> {
    let s = s.trim();
    match s.split_once('^') {
        Some((base, exp)) => {
            let base: BigInt = base.trim().parse().ok()?;
            let exp: u32 = exp.trim().parse().ok()?;
            Some(Pow::pow(base, exp))
        }
        None => s.parse().ok(),
    }
}

fn parse_decimal(s: &str) -> Option<ExactRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let joined = format!("{whole}{frac}");
    let mut numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * Pow::pow(ten, scale as u32))
    } else {
        BigRational::new(numer, Pow::pow(ten, (-scale) as u32))
    })
}

/// Decimal rendering of `x` with `digits` fractional digits, truncated toward zero.
pub fn truncated_decimal(x: &ExactRational, digits: usize) -> String {
    let negative = x.is_negative();
    let scaled = x.abs() * BigRational::from_integer(Pow::pow(BigInt::from(10u32), digits));
    let scaled = scaled.to_integer();
    let (whole, frac) = scaled.div_rem(&Pow::pow(BigInt::from(10u32), digits));
    let sign = if negative && !(whole.is_zero() && frac.is_zero()) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            frac.to_string(),
            width = digits
        )
    }
}

/// Display-only decimal approximation, tagged with how it was rounded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalApprox {
    pub approx: String,
    pub rounding: String,
}

impl DecimalApprox {
    pub const DEFAULT_DIGITS: usize = 15;

    pub fn of(x: &ExactRational) -> Self {
        Self::with_digits(x, Self::DEFAULT_DIGITS)
    }

    pub fn with_digits(x: &ExactRational, digits: usize) -> Self {
        DecimalApprox {
            approx: truncated_decimal(x, digits),
            rounding: "toward_zero".to_string(),
        }
    }
}

/// Serde adapter storing an [`ExactRational`] as a `"num/den"` string.
pub mod exact_str {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &ExactRational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_exact_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<ExactRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<ExactRational>`.
pub mod opt_exact_str {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &Option<ExactRational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&to_exact_string(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<ExactRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter storing a big integer as a decimal string.
pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalInterval {
    #[serde(with = "exact_str")]
    lo: ExactRational,
    #[serde(with = "exact_str")]
    hi: ExactRational,
}

impl RationalInterval {
    /// Builds `[lo, hi]`; fails if `lo > hi`.
    pub fn new(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: {} > {}",
                to_exact_string(&lo),
                to_exact_string(&hi)
            )));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(x: ExactRational) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub(crate) fn from_ordered(lo: ExactRational, hi: ExactRational) -> Self {
        debug_assert!(lo <= hi);
        RationalInterval { lo, hi }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest distance from `x` to a point of the interval (zero inside).
    pub fn distance_lower(&self, x: &ExactRational) -> ExactRational {
        if x < &self.lo {
            &self.lo - x
        } else if x > &self.hi {
            x - &self.hi
        } else {
            ExactRational::zero()
        }
    }

    /// Largest distance from `x` to a point of the interval.
    pub fn distance_upper(&self, x: &ExactRational) -> ExactRational {
        let a = (x - &self.lo).abs();
        let b = (x - &self.hi).abs();
        a.max(b)
    }

    /// Image under `t -> scale * (t - shift)` for `scale >= 0`.
    pub fn affine(&self, shift: &ExactRational, scale: &ExactRational) -> Self {
        debug_assert!(!scale.is_negative());
        RationalInterval {
            lo: (&self.lo - shift) * scale,
            hi: (&self.hi - shift) * scale,
        }
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &RationalInterval) -> Option<Self> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(RationalInterval { lo, hi })
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let negative = k.sign() == Sign::Minus;
        let k = BigRational::from_integer(k.clone());
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        if negative {
            RationalInterval { lo: b, hi: a }
        } else {
            RationalInterval { lo: a, hi: b }
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            to_exact_string(&self.lo),
            to_exact_string(&self.hi)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_powers_and_decimals() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("1/10^6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("2^10").unwrap(), int(1024));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1.2.3", "-", ".", "1/", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn truncation_is_toward_zero() {
        assert_eq!(truncated_decimal(&rat(2, 3), 4), "0.6666");
        assert_eq!(truncated_decimal(&rat(-2, 3), 4), "-0.6666");
        assert_eq!(truncated_decimal(&rat(-1, 3000), 2), "0.00");
        assert_eq!(truncated_decimal(&rat(1, 8), 0), "0");
        assert_eq!(truncated_decimal(&rat(1031, 1000), 6), "1.031000");
    }

    #[test]
    fn interval_distances() {
        let i = RationalInterval::new(rat(1, 2), rat(1, 1)).unwrap();
        assert_eq!(i.distance_lower(&rat(2, 1)), int(1));
        assert_eq!(i.distance_lower(&rat(3, 4)), int(0));
        assert_eq!(i.distance_upper(&rat(3, 4)), rat(1, 4));
        assert_eq!(i.distance_upper(&int(0)), int(1));
        assert!(RationalInterval::new(int(1), int(0)).is_err());
    }

    #[test]
    fn exact_strings() {
        assert_eq!(to_exact_string(&rat(4, 6)), "2/3");
        assert_eq!(to_exact_string(&rat(-4, 2)), "-2");
    }
}

//! Greedy digit extraction: factorial series `c_1/1! + c_2/2! + ...` and
//! general Cantor digits over a base sequence, with exact resummation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::sequences::{BaseKind, BaseSequence, DigitRule, SequenceSpecFile};
use crate::series::CantorSeries;

/// Digits `a_0; a_1, ..., a_K` of a rational over `sigma`.
///
/// A factorial expansion is stored over `(2, 3, 4, ...)`, i.e. `a_0 = c_1`
/// and `a_n = c_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    pub a0: BigInt,
    pub digits: Vec<BigUint>,
    pub sigma: BaseSequence,
    /// The remainder reached exactly zero.
    pub terminated: bool,
}

impl DigitExpansion {
    /// Factorial-series coefficients `c_1, c_2, ...`.
    pub fn factorial_coefficients(&self) -> Vec<BigInt> {
        std::iter::once(self.a0.clone())
            .chain(self.digits.iter().cloned().map(BigInt::from))
            .collect()
    }

    /// Index of the last nonzero fractional digit `a_n`, if any.
    pub fn last_nonzero_index(&self) -> Option<usize> {
        self.digits
            .iter()
            .rposition(|d| !d.is_zero())
            .map(|i| i + 1)
    }

    /// The expansion as a series with an all-zero tail.
    pub fn to_series(&self) -> Result<CantorSeries> {
        CantorSeries::new(
            self.a0.clone(),
            DigitRule::EventuallyZero(self.digits.clone()),
            self.sigma.clone(),
        )
    }
}

#[derive(Serialize)]
struct ExpansionJson {
    a0: String,
    digits: Vec<String>,
    sigma: SequenceSpecFile,
    terminated: bool,
}

impl Serialize for DigitExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionJson {
            a0: self.a0.to_string(),
            digits: self.digits.iter().map(ToString::to_string).collect(),
            sigma: SequenceSpecFile::from(&self.sigma),
            terminated: self.terminated,
        }
        .serialize(s)
    }
}

/// Greedy factorial expansion: `c_1 = floor(x)`, then for `n = 2, 3, ...`
/// `r <- n r`, `c_n = floor(r)`, `r <- r - c_n`. Emits at most `max_terms`
/// coefficients, `c_1` included.
///
/// For `x = p/q` in lowest terms the remainder vanishes by `n = S(q)`.
pub fn factorial_digits(x: &ExactRational, max_terms: usize) -> Result<DigitExpansion> {
    if max_terms == 0 {
        return Err(Error::InvalidArgument(
            "max_terms must be at least 1".into(),
        ));
    }
    let c1 = x.floor().to_integer();
    let r = x - BigRational::from_integer(c1.clone());
    let (digits, terminated) = match (r.numer().to_u64(), r.denom().to_u64()) {
        (Some(num), Some(den)) => factorial_digits_small(num, den, max_terms),
        _ => factorial_digits_big(r, max_terms),
    };
    Ok(DigitExpansion {
        a0: c1,
        digits,
        sigma: BaseSequence::successor(),
        terminated,
    })
}

/// Remainder `num/den` kept as an integer numerator over the fixed `den`.
fn factorial_digits_small(mut num: u64, den: u64, max_terms: usize) -> (Vec<BigUint>, bool) {
    let mut digits = Vec::new();
    let mut n: u64 = 2;
    while num != 0 && digits.len() + 1 < max_terms {
        let scaled = num as u128 * n as u128;
        digits.push(BigUint::from((scaled / den as u128) as u64));
        num = (scaled % den as u128) as u64;
        n += 1;
    }
    (digits, num == 0)
}

fn factorial_digits_big(mut r: ExactRational, max_terms: usize) -> (Vec<BigUint>, bool) {
    let mut digits = Vec::new();
    let mut n: u64 = 2;
    while !r.is_zero() && digits.len() + 1 < max_terms {
        r *= BigRational::from_integer(BigInt::from(n));
        let c = r.floor().to_integer();
        r -= BigRational::from_integer(c.clone());
        digits.push(c.to_biguint().expect("greedy digit is nonnegative"));
        n += 1;
    }
    (digits, r.is_zero())
}

/// Greedy Cantor digits of `x` over `sigma`: `a_0 = floor(x)`, then
/// `r <- b_n r`, `a_n = floor(r)`, `r <- r - a_n`, for at most `max_terms`
/// fractional digits.
pub fn cantor_digits(
    x: &ExactRational,
    sigma: &BaseSequence,
    max_terms: usize,
) -> Result<DigitExpansion> {
    if matches!(sigma.kind(), BaseKind::NaturalBases) {
        return Err(Error::NaturalBasesNotSeries);
    }
    let a0 = x.floor().to_integer();
    let mut r = x - BigRational::from_integer(a0.clone());
    let mut digits = Vec::new();
    while !r.is_zero() && digits.len() < max_terms {
        let base = sigma.base_at(digits.len() + 1)?;
        r *= BigRational::from_integer(BigInt::from(base));
        let a = r.floor().to_integer();
        r -= BigRational::from_integer(a.clone());
        debug_assert!(!r.is_negative() && r < BigRational::one());
        digits.push(a.to_biguint().expect("greedy digit is nonnegative"));
    }
    Ok(DigitExpansion {
        a0,
        digits,
        sigma: sigma.clone(),
        terminated: r.is_zero(),
    })
}

/// Exact value of a finite expansion.
///
/// Sums from the last digit backwards, `v <- (a_n + v) / b_n`, reducing as it
/// goes; for an expansion of `p/q` every partial tail has denominator
/// dividing `q`, so the numbers stay small however long the expansion is.
pub fn resum(expansion: &DigitExpansion) -> Result<ExactRational> {
    let a0 = BigRational::from_integer(expansion.a0.clone());
    if let Some(tail) = resum_small(expansion)? {
        return Ok(a0 + tail);
    }
    let mut v = BigRational::zero();
    for (i, digit) in expansion.digits.iter().enumerate().rev() {
        let base = expansion.sigma.base_at(i + 1)?;
        v = (v + BigRational::from_integer(BigInt::from(digit.clone())))
            / BigRational::from_integer(BigInt::from(base));
    }
    Ok(a0 + v)
}

/// The backward sum in `u128`, or `None` when a base or digit is too large.
/// Reduces only once the denominator passes `2^96`; with bases below `2^32`
/// nothing overflows before that.
fn resum_small(expansion: &DigitExpansion) -> Result<Option<ExactRational>> {
    const REDUCE_ABOVE: u128 = 1 << 96;
    let (mut num, mut den) = (0u128, 1u128);
    for (i, digit) in expansion.digits.iter().enumerate().rev() {
        let b = match expansion.sigma.base_at_u64(i + 1)? {
            Some(b) if b <= u32::MAX as u64 => b as u128,
            _ => return Ok(None),
        };
        let Some(d) = digit.to_u64().filter(|&d| (d as u128) < b) else {
            return Ok(None);
        };
        if den >= REDUCE_ABOVE {
            let g = num.gcd(&den);
            num /= g;
            den /= g;
            if den >= REDUCE_ABOVE {
                return Ok(None);
            }
        }
        // num <= den, so d * den + num < b * den < 2^128
        num += d as u128 * den;
        den *= b;
    }
    Ok(Some(BigRational::new(BigInt::from(num), BigInt::from(den))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn digits(v: &[u64]) -> Vec<BigUint> {
        v.iter().copied().map(BigUint::from).collect()
    }

    #[test]
    fn factorial_examples() {
        let half = factorial_digits(&rat(1, 2), 10).unwrap();
        assert_eq!(half.a0, BigInt::from(0));
        assert_eq!(half.digits, digits(&[1]));
        assert!(half.terminated);

        let two_thirds = factorial_digits(&rat(2, 3), 10).unwrap();
        assert_eq!(two_thirds.digits, digits(&[1, 1]));
        assert!(two_thirds.terminated);
        assert_eq!(
            two_thirds.factorial_coefficients(),
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)]
        );
    }

    #[test]
    fn factorial_truncation_and_limits() {
        let x = rat(1, 7);
        let full = factorial_digits(&x, 100).unwrap();
        assert!(full.terminated);
        assert_eq!(full.last_nonzero_index(), Some(6)); // c_7, S(7) = 7
        let cut = factorial_digits(&x, 3).unwrap();
        assert_eq!(cut.digits.len(), 2);
        assert!(!cut.terminated);
        assert!(factorial_digits(&x, 0).is_err());
        let whole = factorial_digits(&int(5), 1).unwrap();
        assert!(whole.terminated && whole.digits.is_empty());
    }

    #[test]
    fn e_enclosure_midpoint_digits() {
        let mid = CantorSeries::e().enclosure(20).unwrap().midpoint();
        let exp = factorial_digits(&mid, 15).unwrap();
        assert_eq!(exp.a0, BigInt::from(2));
        assert!(exp.digits.iter().all(|d| d == &BigUint::one()));
        assert_eq!(exp.digits.len(), 14);
    }

    #[test]
    fn negative_input_keeps_digits_nonnegative() {
        let exp = factorial_digits(&rat(-1, 3), 10).unwrap();
        assert_eq!(exp.a0, BigInt::from(-1));
        assert_eq!(exp.digits, digits(&[1, 1]));
        assert_eq!(resum(&exp).unwrap(), rat(-1, 3));
    }

    #[test]
    fn cantor_examples() {
        let pow5 = BaseSequence::successor_power(5).unwrap();
        let exp = cantor_digits(&rat(33, 32), &pow5, 10).unwrap();
        assert_eq!(
            (exp.a0.clone(), exp.digits.clone()),
            (BigInt::from(1), digits(&[1]))
        );
        assert!(exp.terminated);

        let exp = cantor_digits(&rat(8, 3), &BaseSequence::successor(), 10).unwrap();
        assert_eq!(
            (exp.a0.clone(), exp.digits.clone()),
            (BigInt::from(2), digits(&[1, 1]))
        );

        let exp = cantor_digits(&int(0), &BaseSequence::successor(), 10).unwrap();
        assert!(exp.terminated && exp.digits.is_empty());

        assert!(cantor_digits(&rat(1, 3), &BaseSequence::natural(), 4).is_err());
        let short = BaseSequence::explicit([2u32]).unwrap();
        assert!(matches!(
            cantor_digits(&rat(1, 3), &short, 5),
            Err(Error::IndexBeyondExplicitList { index: 2, len: 1 })
        ));
    }

    #[test]
    fn resum_examples() {
        let exp = DigitExpansion {
            a0: BigInt::from(2),
            digits: digits(&[1, 1]),
            sigma: BaseSequence::successor(),
            terminated: true,
        };
        assert_eq!(resum(&exp).unwrap(), rat(8, 3));
        let empty = DigitExpansion {
            a0: BigInt::from(0),
            digits: vec![],
            sigma: BaseSequence::successor(),
            terminated: true,
        };
        assert_eq!(resum(&empty).unwrap(), int(0));
        let c = DigitExpansion {
            a0: BigInt::from(0),
            ..exp
        };
        assert_eq!(resum(&c).unwrap(), rat(2, 3));
    }

    #[test]
    fn json_shape() {
        let exp = factorial_digits(&rat(2, 3), 10).unwrap();
        assert_eq!(
            serde_json::to_string(&exp).unwrap(),
            r#"{"a0":"0","digits":["1","1"],"sigma":{"kind":"successor"},"terminated":true}"#
        );
    }

    #[test]
    fn closed_form_agrees_with_resum() {
        let exp = cantor_digits(&rat(17, 30), &BaseSequence::successor(), 50).unwrap();
        let series = exp.to_series().unwrap();
        let closed = series.classify_prefix(50).unwrap().closed_form.unwrap();
        assert_eq!(closed, resum(&exp).unwrap());
        assert_eq!(closed, rat(17, 30));
    }

    #[test]
    fn fast_and_general_paths_agree() {
        for (p, q) in [(1u64, 7u64), (5, 12), (999_983, 1_000_000), (3, 997)] {
            let (small, t1) = factorial_digits_small(p, q, 10_000);
            let (big, t2) = factorial_digits_big(BigRational::new(p.into(), q.into()), 10_000);
            assert_eq!((small, t1), (big, t2), "{p}/{q}");
        }
        let huge =
            BaseSequence::explicit([BigUint::from(u64::MAX), BigUint::from(u64::MAX)]).unwrap();
        let x = BigRational::new(
            BigInt::from(12345),
            BigInt::from(u64::MAX) * BigInt::from(u64::MAX),
        );
        let exp = cantor_digits(&x, &huge, 2).unwrap();
        assert!(exp.terminated);
        assert_eq!(resum(&exp).unwrap(), x);
    }
}

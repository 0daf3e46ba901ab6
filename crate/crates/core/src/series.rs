//! Cantor series `a_0 + a_1/b_1 + a_2/(b_1 b_2) + ...` evaluated exactly.
//!
//! The depth-`n` partial sum is kept unreduced as `A_n / B_n` with
//! `B_n = b_1 ... b_n`, built by the Horner step `A_n = A_{n-1} b_n + a_n`.
//! Since every digit satisfies `a_k <= b_k - 1`, the tail after depth `n` is
//! at most `1/B_n`, so `[A_n/B_n, (A_n + 1)/B_n]` always encloses the value.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{exact_str, int, recip, ExactRational, RationalInterval};
use crate::sequences::{BaseKind, BaseSequence, DigitRule};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorSeries {
    a0: BigInt,
    digits: DigitRule,
    sigma: BaseSequence,
    name: Option<String>,
}

impl CantorSeries {
    /// Pairs an integer part and a digit rule with a base sequence.
    ///
    /// The natural sequence `(1, 2, 3, ...)` is rejected since `b_1 = 1`.
    /// Digit bounds are checked lazily, whenever a digit is evaluated.
    pub fn new(a0: impl Into<BigInt>, digits: DigitRule, sigma: BaseSequence) -> Result<Self> {
        if matches!(sigma.kind(), BaseKind::NaturalBases) {
            return Err(Error::NaturalBasesNotSeries);
        }
        Ok(CantorSeries {
            a0: a0.into(),
            digits,
            sigma,
            name: None,
        })
    }

    /// `e = 2 + 1/2! + 1/3! + ...`: `a_0 = 2`, `a_n = 1`, `b_n = n + 1`.
    pub fn e() -> Self {
        CantorSeries {
            a0: BigInt::from(2),
            digits: DigitRule::ConstantOne,
            sigma: BaseSequence::successor(),
            name: Some("e".into()),
        }
    }

    /// `xi = sum 1/(n!)^5 = 1.031378...`: `a_0 = 1`, `a_n = 1`, `b_n = (n + 1)^5`.
    pub fn xi() -> Self {
        CantorSeries {
            a0: BigInt::one(),
            digits: DigitRule::ConstantOne,
            sigma: BaseSequence::successor_power(5).expect("k = 5 is valid"),
            name: Some("xi".into()),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn digits(&self) -> &DigitRule {
        &self.digits
    }

    pub fn sigma(&self) -> &BaseSequence {
        &self.sigma
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Walks the series term by term, yielding each digit, base and prefix.
    pub fn terms(&self) -> Terms<'_> {
        Terms {
            series: self,
            prefix: Prefix {
                n: 0,
                numerator: self.a0.clone(),
                denominator: BigUint::one(),
            },
            done: false,
        }
    }

    /// Unreduced `(A_n, B_n)` for `n >= 0`.
    pub fn prefix(&self, n: usize) -> Result<Prefix> {
        let mut prefix = self.terms().prefix.clone();
        for term in self.terms().take(n) {
            prefix = term?.prefix;
        }
        Ok(prefix)
    }

    /// Exact `a_0 + a_1/b_1 + ... + a_n/(b_1...b_n)`.
    pub fn partial_sum(&self, n: usize) -> Result<ExactRational> {
        Ok(self.prefix(n)?.value())
    }

    /// The nested interval `I_n`, `n >= 1`.
    pub fn nested_interval(&self, n: usize) -> Result<RationalInterval> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        let mut last = None;
        for step in self.nested_intervals().take(n) {
            last = Some(step?.interval);
        }
        Ok(last.expect("n >= 1 steps taken"))
    }

    /// `I_1, I_2, ...`: `I_n = [A_n/B_n, (A_n+1)/B_n]` when `a_n != 0`,
    /// otherwise `I_n = I_{n-1}`. `I_1` always uses the endpoint formula.
    pub fn nested_intervals(&self) -> NestedIntervals<'_> {
        NestedIntervals {
            terms: self.terms(),
            current: None,
        }
    }

    /// Interval of width `<= epsilon` containing the value, taken at the
    /// smallest depth `n <= max_depth` with `1/B_n <= epsilon`.
    pub fn certified_value(&self, epsilon: &ExactRational, max_depth: usize) -> Result<Enclosure> {
        if *epsilon <= ExactRational::zero() {
            return Err(Error::InvalidArgument("epsilon must be positive".into()));
        }
        for term in self.terms().take(max_depth) {
            let term = match term {
                Ok(t) => t,
                Err(Error::IndexBeyondExplicitList { .. }) => break,
                Err(e) => return Err(e),
            };
            let width = recip(&term.prefix.denominator);
            if &width <= epsilon {
                return Ok(Enclosure {
                    depth: term.n,
                    interval: term.prefix.interval(),
                });
            }
        }
        Err(Error::PrecisionUnreachable { max_depth })
    }

    /// Exact value when the digit rule declares a terminal tail.
    pub fn exact_value(&self) -> Result<Option<ExactRational>> {
        let Some(n0) = self.digits.tail_start() else {
            return Ok(None);
        };
        let prefix = self.prefix(n0 - 1)?;
        Ok(Some(match self.digits {
            DigitRule::EventuallyMax(_) => prefix.value() + recip(&prefix.denominator),
            _ => prefix.value(),
        }))
    }

    /// Certified enclosure of the value from the first `depth` terms.
    ///
    /// This is `[A_m/B_m, (A_m+1)/B_m]`, or the exact point when the digit
    /// rule has a declared terminal tail.
    pub fn enclosure(&self, depth: usize) -> Result<RationalInterval> {
        if let Some(v) = self.exact_value()? {
            return Ok(RationalInterval::point(v));
        }
        Ok(self.prefix(depth)?.interval())
    }

    /// Enclosure of the normalized tail
    /// `theta_n = a_{n+1}/b_{n+1} + a_{n+2}/(b_{n+1} b_{n+2}) + ...`
    /// `= B_n (theta - A_n/B_n)`, refined with `refine_depth > n` terms and
    /// clipped to `[0, 1]`.
    pub fn tail_theta_n(&self, n: usize, refine_depth: usize) -> Result<RationalInterval> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        if refine_depth <= n {
            return Err(Error::InvalidArgument(format!(
                "refine depth {refine_depth} must exceed n = {n}"
            )));
        }
        let prefix = self.prefix(n)?;
        let theta = self.enclosure(refine_depth)?;
        let scale = BigRational::from_integer(BigInt::from(prefix.denominator.clone()));
        let tail = theta.affine(&prefix.value(), &scale);
        let unit = RationalInterval::from_ordered(int(0), int(1));
        Ok(tail.intersect(&unit).unwrap_or(tail))
    }

    /// Detects a terminal digit pattern and returns the rational closed form.
    pub fn classify_prefix(&self, horizon: usize) -> Result<PrefixClassification> {
        let (verdict, n0) = match &self.digits {
            DigitRule::EventuallyZero(p) => (TailKind::EventuallyZero, p.len() + 1),
            DigitRule::EventuallyMax(p) => (TailKind::EventuallyMax, p.len() + 1),
            DigitRule::ConstantOne => return Ok(PrefixClassification::inconclusive()),
            DigitRule::ExplicitList(list) => {
                if list.is_empty() || list.len() > horizon {
                    return Ok(PrefixClassification::inconclusive());
                }
                match self.trailing_run(list.len())? {
                    Some(found) => found,
                    None => return Ok(PrefixClassification::inconclusive()),
                }
            }
        };
        let prefix = self.prefix(n0 - 1)?;
        let closed_form = match verdict {
            TailKind::EventuallyZero => prefix.value(),
            TailKind::EventuallyMax => prefix.value() + recip(&prefix.denominator),
        };
        Ok(PrefixClassification {
            verdict: Some((verdict, n0)),
            closed_form: Some(closed_form),
        })
    }

    /// Maximal trailing run of zero or maximal digits in `a_1..a_len`.
    fn trailing_run(&self, len: usize) -> Result<Option<(TailKind, usize)>> {
        let mut kinds = Vec::with_capacity(len);
        for term in self.terms().take(len) {
            let t = term?;
            kinds.push(if t.digit.is_zero() {
                Some(TailKind::EventuallyZero)
            } else if t.digit == &t.base - 1u32 {
                Some(TailKind::EventuallyMax)
            } else {
                None
            });
        }
        let Some(Some(last)) = kinds.last().copied() else {
            return Ok(None);
        };
        let run = kinds.iter().rev().take_while(|k| **k == Some(last)).count();
        Ok(Some((last, len - run + 1)))
    }

    /// Decides the order of the value and `x` by refining `I_n` until `x`
    /// lies strictly outside. Equality is never claimed.
    pub fn certified_compare(
        &self,
        x: &ExactRational,
        max_depth: usize,
    ) -> Result<ComparisonResult> {
        Ok(match self.separate(x, &ExactRational::zero(), max_depth)? {
            Separation::Separated {
                side, depth, gap, ..
            } => match side {
                Side::Below => ComparisonResult::Less { depth, gap },
                Side::Above => ComparisonResult::Greater { depth, gap },
            },
            Separation::Within { depth, .. } | Separation::Undecided { depth, .. } => {
                ComparisonResult::Undecided { depth }
            }
        })
    }

    /// Refines `I_n` until `|theta - x| > threshold` is certified
    /// (`Separated`), `|theta - x| <= threshold` is certified (`Within`),
    /// or `max_depth` is reached.
    pub fn separate(
        &self,
        x: &ExactRational,
        threshold: &ExactRational,
        max_depth: usize,
    ) -> Result<Separation> {
        let mut reached = 0;
        let mut best_gap = ExactRational::zero();
        for step in self.nested_intervals().take(max_depth) {
            let step = match step {
                Ok(s) => s,
                Err(Error::IndexBeyondExplicitList { .. }) => break,
                Err(e) => return Err(e),
            };
            reached = step.n;
            let interval = &step.interval;
            let gap = interval.distance_lower(x);
            if &gap > threshold {
                let side = if x < interval.lo() {
                    Side::Above
                } else {
                    Side::Below
                };
                return Ok(Separation::Separated {
                    side,
                    depth: step.n,
                    gap,
                    interval: step.interval,
                });
            }
            let far = interval.distance_upper(x);
            if &far <= threshold {
                return Ok(Separation::Within {
                    depth: step.n,
                    distance_upper: far,
                    interval: step.interval,
                });
            }
            best_gap = gap;
        }
        Ok(Separation::Undecided {
            depth: reached,
            gap: best_gap,
        })
    }
}

/// Unreduced partial sum `A_n / B_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefix {
    pub n: usize,
    /// `A_n`
    pub numerator: BigInt,
    /// `B_n`
    pub denominator: BigUint,
}

impl Prefix {
    pub fn value(&self) -> ExactRational {
        BigRational::new(
            self.numerator.clone(),
            BigInt::from(self.denominator.clone()),
        )
    }

    /// `[A_n/B_n, (A_n+1)/B_n]`
    pub fn interval(&self) -> RationalInterval {
        let den = BigInt::from(self.denominator.clone());
        RationalInterval::from_ordered(
            BigRational::new(self.numerator.clone(), den.clone()),
            BigRational::new(&self.numerator + 1, den),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub n: usize,
    pub digit: BigUint,
    pub base: BigUint,
    pub prefix: Prefix,
}

/// Iterator over the terms of a series; stops after the first error.
pub struct Terms<'a> {
    series: &'a CantorSeries,
    prefix: Prefix,
    done: bool,
}

impl Iterator for Terms<'_> {
    type Item = Result<Term>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.prefix.n + 1;
        let next = (|| {
            let base = self.series.sigma.base_at(n)?;
            let digit = self.series.digits.digit_at(n, &base)?;
            if base < BigUint::from(2u32) {
                return Err(Error::BaseTooSmall {
                    index: n,
                    base: base.to_string(),
                });
            }
            if digit >= base {
                return Err(Error::DigitOutOfRange {
                    index: n,
                    digit: digit.to_string(),
                    max: (&base - 1u32).to_string(),
                });
            }
            Ok((digit, base))
        })();
        match next {
            Ok((digit, base)) => {
                self.prefix.numerator = &self.prefix.numerator * BigInt::from(base.clone())
                    + BigInt::from(digit.clone());
                self.prefix.denominator *= &base;
                self.prefix.n = n;
                Some(Ok(Term {
                    n,
                    digit,
                    base,
                    prefix: self.prefix.clone(),
                }))
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedStep {
    pub n: usize,
    pub digit: BigUint,
    pub prefix: Prefix,
    pub interval: RationalInterval,
}

pub struct NestedIntervals<'a> {
    terms: Terms<'a>,
    current: Option<RationalInterval>,
}

impl Iterator for NestedIntervals<'_> {
    type Item = Result<NestedStep>;

    fn next(&mut self) -> Option<Self::Item> {
        let term = match self.terms.next()? {
            Ok(t) => t,
            Err(e) => return Some(Err(e)),
        };
        let interval = match &self.current {
            Some(prev) if term.digit.is_zero() => prev.clone(),
            _ => term.prefix.interval(),
        };
        self.current = Some(interval.clone());
        Some(Ok(NestedStep {
            n: term.n,
            digit: term.digit,
            prefix: term.prefix,
            interval,
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    pub depth: usize,
    pub interval: RationalInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    EventuallyZero,
    EventuallyMax,
}

/// Terminal-pattern verdict: `Some((kind, n_0))` with its closed form, or
/// inconclusive (`None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixClassification {
    pub verdict: Option<(TailKind, usize)>,
    pub closed_form: Option<ExactRational>,
}

impl PrefixClassification {
    fn inconclusive() -> Self {
        PrefixClassification {
            verdict: None,
            closed_form: None,
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        self.verdict.is_none()
    }
}

/// Which side of `x` the series value lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `theta < x`
    Below,
    /// `theta > x`
    Above,
}

/// Outcome of [`CantorSeries::certified_compare`]; `Less` means `theta < x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ComparisonResult {
    Less {
        depth: usize,
        #[serde(with = "exact_str")]
        gap: ExactRational,
    },
    Greater {
        depth: usize,
        #[serde(with = "exact_str")]
        gap: ExactRational,
    },
    Undecided {
        depth: usize,
    },
}

/// Outcome of [`CantorSeries::separate`]; `interval` is the enclosure
/// `I_depth` that certifies the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    Separated {
        side: Side,
        depth: usize,
        gap: ExactRational,
        interval: RationalInterval,
    },
    Within {
        depth: usize,
        distance_upper: ExactRational,
        interval: RationalInterval,
    },
    Undecided {
        depth: usize,
        gap: ExactRational,
    },
}

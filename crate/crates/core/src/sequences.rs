//! Base sequences `(b_1, b_2, ...)`, digit rules `a_n`, and finite-horizon
//! checks of the constraints a Cantor series must satisfy.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::CantorSeries;

/// Shape of a base sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseKind {
    /// `b_n = n + 1`, i.e. `(2, 3, 4, ...)`.
    SuccessorBases,
    /// `b_n = (n + 1)^k`.
    SuccessorPower(u32),
    /// `b_n = n`, i.e. `(1, 2, 3, ...)`. Only valid as a divisibility sequence.
    NaturalBases,
    /// A finite prefix supplied by the caller; entries are all at least 2.
    ExplicitList(Vec<BigUint>),
}

/// A base sequence together with an optional display label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseSequence {
    kind: BaseKind,
    name: Option<String>,
}

impl BaseSequence {
    pub fn successor() -> Self {
        Self::unnamed(BaseKind::SuccessorBases)
    }

    pub fn successor_power(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSequence(
                "successor_pow needs k >= 1 (k = 0 gives b_n = 1)".into(),
            ));
        }
        Ok(Self::unnamed(BaseKind::SuccessorPower(k)))
    }

    pub fn natural() -> Self {
        Self::unnamed(BaseKind::NaturalBases)
    }

    pub fn explicit<I, T>(bases: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        let bases: Vec<BigUint> = bases.into_iter().map(Into::into).collect();
        let two = BigUint::from(2u32);
        if let Some((i, b)) = bases.iter().enumerate().find(|(_, b)| **b < two) {
            return Err(Error::BaseTooSmall {
                index: i + 1,
                base: b.to_string(),
            });
        }
        Ok(Self::unnamed(BaseKind::ExplicitList(bases)))
    }

    fn unnamed(kind: BaseKind) -> Self {
        BaseSequence { kind, name: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of defined terms, `None` for infinite sequences.
    pub fn len(&self) -> Option<usize> {
        match &self.kind {
            BaseKind::ExplicitList(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `b_n` for `n >= 1`.
    pub fn base_at(&self, n: usize) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok(match &self.kind {
            BaseKind::SuccessorBases => BigUint::from(n as u64 + 1),
            BaseKind::SuccessorPower(k) => Pow::pow(BigUint::from(n as u64 + 1), *k),
            BaseKind::NaturalBases => BigUint::from(n as u64),
            BaseKind::ExplicitList(v) => {
                v.get(n - 1)
                    .cloned()
                    .ok_or(Error::IndexBeyondExplicitList {
                        index: n,
                        len: v.len(),
                    })?
            }
        })
    }

    /// `b_n` as a machine word, or `None` when it does not fit.
    pub fn base_at_u64(&self, n: usize) -> Result<Option<u64>> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        let m = n as u64;
        Ok(match &self.kind {
            BaseKind::SuccessorBases => m.checked_add(1),
            BaseKind::SuccessorPower(k) => m.checked_add(1).and_then(|b| b.checked_pow(*k)),
            BaseKind::NaturalBases => Some(m),
            BaseKind::ExplicitList(_) => self.base_at(n)?.to_u64(),
        })
    }

    /// `B_n = b_1 b_2 ... b_n`, with `B_0 = 1`.
    pub fn cumulative_product(&self, n: usize) -> Result<BigUint> {
        (1..=n).try_fold(BigUint::one(), |acc, i| Ok(acc * self.base_at(i)?))
    }

    /// Scans `b_1..b_N` for multiples of every prime `p <= prime_bound`.
    ///
    /// Finite evidence that each prime divides infinitely many bases; it can
    /// never prove it.
    pub fn check_prime_coverage(&self, prime_bound: u64, horizon: usize) -> CoverageReport {
        let scanned = match self.len() {
            Some(len) => horizon.min(len),
            None => horizon,
        };
        let bases: Vec<BigUint> = (1..=scanned)
            .map(|n| self.base_at(n).expect("index within scanned range"))
            .collect();
        let primes: Vec<PrimeWitnesses> = primes_up_to(prime_bound)
            .into_iter()
            .map(|p| {
                let pb = BigUint::from(p);
                let witnesses = bases
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.is_multiple_of(&pb))
                    .map(|(i, _)| i + 1)
                    .collect();
                PrimeWitnesses {
                    prime: p,
                    witnesses,
                }
            })
            .collect();
        let passed = primes.iter().all(|p| !p.witnesses.is_empty());
        CoverageReport {
            prime_bound,
            horizon,
            horizon_scanned: scanned,
            primes,
            passed,
            finite_evidence_only: true,
        }
    }
}

impl fmt::Display for BaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            return f.write_str(name);
        }
        match &self.kind {
            BaseKind::SuccessorBases => f.write_str("successor"),
            BaseKind::SuccessorPower(k) => write!(f, "successor_pow:{k}"),
            BaseKind::NaturalBases => f.write_str("natural"),
            BaseKind::ExplicitList(v) => write!(f, "explicit[{}]", v.len()),
        }
    }
}

/// Primes `<= bound` by a sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWitnesses {
    pub prime: u64,
    /// Indices `n` with `prime | b_n`.
    pub witnesses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub prime_bound: u64,
    pub horizon: usize,
    /// Smaller than `horizon` when an explicit list ends first.
    pub horizon_scanned: usize,
    pub primes: Vec<PrimeWitnesses>,
    pub passed: bool,
    pub finite_evidence_only: bool,
}

impl CoverageReport {
    pub fn missing(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes
            .iter()
            .filter(|p| p.witnesses.is_empty())
            .map(|p| p.prime)
    }
}

/// How the digits `a_n` (n >= 1) are produced. Digit rules are total
/// functions of the index; there is no streaming state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DigitRule {
    /// `a_n = 1` for every `n`.
    ConstantOne,
    /// Finite list `a_1..a_K`; later indices are an error.
    ExplicitList(Vec<BigUint>),
    /// `a_1..a_K` from the prefix, then zeros; terminal index `n_0 = K + 1`.
    EventuallyZero(Vec<BigUint>),
    /// `a_1..a_K` from the prefix, then `a_n = b_n - 1` from `n_0 = K + 1`.
    EventuallyMax(Vec<BigUint>),
}

impl DigitRule {
    pub fn explicit<I: IntoIterator<Item = u64>>(digits: I) -> Self {
        DigitRule::ExplicitList(digits.into_iter().map(BigUint::from).collect())
    }

    pub fn eventually_zero<I: IntoIterator<Item = u64>>(prefix: I) -> Self {
        DigitRule::EventuallyZero(prefix.into_iter().map(BigUint::from).collect())
    }

    pub fn eventually_max<I: IntoIterator<Item = u64>>(prefix: I) -> Self {
        DigitRule::EventuallyMax(prefix.into_iter().map(BigUint::from).collect())
    }

    /// First index of the declared terminal tail, if any.
    pub fn tail_start(&self) -> Option<usize> {
        match self {
            DigitRule::EventuallyZero(p) | DigitRule::EventuallyMax(p) => Some(p.len() + 1),
            _ => None,
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            DigitRule::ExplicitList(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `a_n`, given the base `b_n` it is paired with. Does not range-check.
    pub fn digit_at(&self, n: usize, base: &BigUint) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok(match self {
            DigitRule::ConstantOne => BigUint::one(),
            DigitRule::ExplicitList(v) => {
                v.get(n - 1)
                    .cloned()
                    .ok_or(Error::IndexBeyondExplicitList {
                        index: n,
                        len: v.len(),
                    })?
            }
            DigitRule::EventuallyZero(p) => p.get(n - 1).cloned().unwrap_or_else(BigUint::zero),
            DigitRule::EventuallyMax(p) => match p.get(n - 1) {
                Some(d) => d.clone(),
                None => base - 1u32,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DigitTooLarge,
    BaseTooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitViolation {
    pub index: usize,
    pub digit: String,
    pub base: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub horizon: usize,
    pub violations: Vec<DigitViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every `n <= horizon` with `b_n < 2` or `a_n > b_n - 1`.
pub fn validate_digits(series: &CantorSeries, horizon: usize) -> Result<ValidationReport> {
    let mut violations = Vec::new();
    let two = BigUint::from(2u32);
    for n in 1..=horizon {
        let base = series.sigma().base_at(n)?;
        let digit = series.digits().digit_at(n, &base)?;
        let kind = if base < two {
            Some(ViolationKind::BaseTooSmall)
        } else if digit >= base {
            Some(ViolationKind::DigitTooLarge)
        } else {
            None
        };
        if let Some(kind) = kind {
            violations.push(DigitViolation {
                index: n,
                digit: digit.to_string(),
                base: base.to_string(),
                kind,
            });
        }
    }
    Ok(ValidationReport {
        horizon,
        violations,
    })
}

// JSON spec files

/// Sequence-spec file: `{ "name", "kind", "k", "bases" }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<u64>>,
}

impl TryFrom<SequenceSpecFile> for BaseSequence {
    type Error = Error;

    fn try_from(file: SequenceSpecFile) -> Result<Self> {
        let seq = match file.kind.as_str() {
            "successor" => BaseSequence::successor(),
            "successor_pow" => {
                let k = file
                    .k
                    .ok_or_else(|| Error::InvalidSequence("successor_pow needs \"k\"".into()))?;
                BaseSequence::successor_power(k)?
            }
            "natural" => BaseSequence::natural(),
            "explicit" => {
                let bases = file
                    .bases
                    .ok_or_else(|| Error::InvalidSequence("explicit needs \"bases\"".into()))?;
                BaseSequence::explicit(bases)?
            }
            other => {
                return Err(Error::InvalidSequence(format!("unknown kind {other:?}")));
            }
        };
        Ok(match file.name {
            Some(name) => seq.with_name(name),
            None => seq,
        })
    }
}

impl From<&BaseSequence> for SequenceSpecFile {
    fn from(seq: &BaseSequence) -> Self {
        let name = seq.name.clone();
        match &seq.kind {
            BaseKind::SuccessorBases => SequenceSpecFile {
                name,
                kind: "successor".into(),
                k: None,
                bases: None,
            },
            BaseKind::SuccessorPower(k) => SequenceSpecFile {
                name,
                kind: "successor_pow".into(),
                k: Some(*k),
                bases: None,
            },
            BaseKind::NaturalBases => SequenceSpecFile {
                name,
                kind: "natural".into(),
                k: None,
                bases: None,
            },
            BaseKind::ExplicitList(v) => SequenceSpecFile {
                name,
                kind: "explicit".into(),
                k: None,
                bases: Some(v.iter().map(|b| b.to_u64().unwrap_or(u64::MAX)).collect()),
            },
        }
    }
}

/// Digit-rule file: `{ "name", "kind", "digits", "tail" }`.
///
/// `kind` is `"explicit"` (default) or `"one"`; `tail` is `"zero"` or `"max"`
/// and turns the explicit digits into the prefix of a terminal rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigitRuleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default)]
    pub digits: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<String>,
}

impl TryFrom<DigitRuleFile> for DigitRule {
    type Error = Error;

    fn try_from(file: DigitRuleFile) -> Result<Self> {
        match file.kind.as_deref().unwrap_or("explicit") {
            "one" => {
                if !file.digits.is_empty() || file.tail.is_some() {
                    return Err(Error::InvalidDigitRule(
                        "kind \"one\" takes no digits or tail".into(),
                    ));
                }
                Ok(DigitRule::ConstantOne)
            }
            "explicit" => match file.tail.as_deref() {
                None => Ok(DigitRule::explicit(file.digits)),
                Some("zero") => Ok(DigitRule::eventually_zero(file.digits)),
                Some("max") => Ok(DigitRule::eventually_max(file.digits)),
                Some(other) => Err(Error::InvalidDigitRule(format!("unknown tail {other:?}"))),
            },
            other => Err(Error::InvalidDigitRule(format!("unknown kind {other:?}"))),
        }
    }
}

impl From<&DigitRule> for DigitRuleFile {
    fn from(rule: &DigitRule) -> Self {
        let to_u64 = |v: &[BigUint]| v.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect();
        let (kind, digits, tail) = match rule {
            DigitRule::ConstantOne => (Some("one"), Vec::new(), None),
            DigitRule::ExplicitList(v) => (None, to_u64(v), None),
            DigitRule::EventuallyZero(v) => (None, to_u64(v), Some("zero")),
            DigitRule::EventuallyMax(v) => (None, to_u64(v), Some("max")),
        };
        DigitRuleFile {
            name: None,
            kind: kind.map(str::to_string),
            digits,
            tail: tail.map(str::to_string),
        }
    }
}

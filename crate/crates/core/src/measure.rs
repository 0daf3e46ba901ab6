//! Irrationality-measure bounds for Cantor series and their certified
//! verification.
//!
//! For a series `theta` over `sigma` with `theta_n <= 1/2` (n >= 2), every
//! `p/q` with `D = D(q, sigma) > 1` satisfies
//! `|theta - p/q| > a_{D+1} / (b_1 ... b_{D+1})`. For `e` this becomes
//! `1/(D + 2)!` and for `xi = sum 1/(n!)^5` it becomes `1/((D + 2)!)^5`,
//! both for every `q != 0`.
//!
//! Every verdict here comes from exact interval separation. A row passes
//! only when the certified distance strictly exceeds the bound; a certified
//! closeness is a failure and anything else is undecided.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dfunc::{d_of, factorial, smarandache_of};
use crate::error::{Error, Result};
use crate::rational::{
    bigint_str, exact_str, int, opt_exact_str, rat, recip, to_exact_string, ExactRational,
    RationalInterval,
};
use crate::sequences::{BaseKind, DigitRule};
use crate::series::{CantorSeries, Separation, Side};

/// Which inequality produced a bound's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "reason", rename_all = "snake_case")]
pub enum BoundRule {
    /// `a_{D+1} / B_{D+1}`, requires `D > 1`.
    General,
    /// `1/(D+2)!` for digits 1 over `(2, 3, 4, ...)`, every `q != 0`.
    FactorialE,
    /// `1/((D+2)!)^5` for digits 1 over `(2^5, 3^5, ...)`, every `q != 0`.
    FactorialPowerXi,
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureBound {
    pub q: i64,
    #[serde(rename = "D")]
    pub d_value: usize,
    #[serde(with = "exact_str")]
    pub rhs: ExactRational,
    #[serde(flatten)]
    pub rule: BoundRule,
    /// `a_{D+1} = 0`: the bound is zero and only asserts `theta != p/q`.
    pub vacuous: bool,
}

impl MeasureBound {
    pub fn is_applicable(&self) -> bool {
        !matches!(self.rule, BoundRule::NotApplicable(_))
    }
}

/// Computes `D(q, sigma)` and the matching lower bound on `|theta - p/q|`.
pub fn measure_bound(theta: &CantorSeries, q: i64) -> Result<MeasureBound> {
    let d = d_of(q, theta.sigma())?;
    let ones = matches!(theta.digits(), DigitRule::ConstantOne);
    let (rhs, rule) = match theta.sigma().kind() {
        BaseKind::SuccessorBases if ones => (recip(&factorial(d + 2)), BoundRule::FactorialE),
        BaseKind::SuccessorPower(5) if ones => {
            let f: BigUint = Pow::pow(factorial(d + 2), 5u32);
            (recip(&f), BoundRule::FactorialPowerXi)
        }
        _ if d <= 1 => (
            ExactRational::zero(),
            BoundRule::NotApplicable("D(q, sigma) = 1; the general bound needs D > 1".into()),
        ),
        _ => {
            let prefix_base = theta.sigma().cumulative_product(d + 1)?;
            let base = theta.sigma().base_at(d + 1)?;
            let digit = theta.digits().digit_at(d + 1, &base)?;
            let rhs = BigRational::new(BigInt::from(digit), BigInt::from(prefix_base));
            (rhs, BoundRule::General)
        }
    };
    let vacuous = rhs.is_zero() && !matches!(rule, BoundRule::NotApplicable(_));
    Ok(MeasureBound {
        q,
        d_value: d,
        rhs,
        rule,
        vacuous,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
    NotApplicable,
}

impl Verdict {
    /// Combines row verdicts: any fail, else any undecided, else pass.
    pub fn combine<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        let mut out = Verdict::Pass;
        for v in items {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Undecided => out = Verdict::Undecided,
                _ => {}
            }
        }
        out
    }
}

// theta_n <= 1/2

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfStatus {
    /// `4 a_m <= b_m` for every `m >= 2`.
    SufficientCondition,
    /// Enclosure of `theta_n` lies in `[0, 1/2]`.
    Certified,
    /// Enclosure of `theta_n` lies above `1/2`.
    Violated,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfRow {
    pub n: usize,
    pub status: HalfStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_n: Option<RationalInterval>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub n_max: usize,
    pub refine_depth: usize,
    /// `4 a_m <= b_m` held for `2 <= m <= n_max`.
    pub sufficient_in_range: bool,
    /// First `m` with `4 a_m > b_m`.
    pub sufficient_first_failure: Option<usize>,
    /// The digit rule keeps `4 a_m <= b_m` for all `m > n_max` too.
    pub sufficient_beyond: bool,
    pub rows: Vec<HalfRow>,
    pub verdict: Verdict,
}

/// Establishes `theta_n <= 1/2` for `2 <= n <= n_max`, first via the
/// digit condition `4 a_m <= b_m`, otherwise by enclosing each `theta_n`.
pub fn half_condition(
    theta: &CantorSeries,
    n_max: usize,
    refine_depth: usize,
) -> Result<ConditionReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be at least 2".into()));
    }
    if refine_depth <= n_max {
        return Err(Error::InvalidArgument(format!(
            "refine depth {refine_depth} must exceed n_max = {n_max}"
        )));
    }
    let mut first_failure = None;
    for m in 2..=n_max {
        let base = theta.sigma().base_at(m)?;
        let digit = theta.digits().digit_at(m, &base)?;
        if digit * 4u32 > base {
            first_failure = Some(m);
            break;
        }
    }
    let in_range = first_failure.is_none();
    let beyond = in_range && sufficient_beyond(theta, n_max);

    let rows = (2..=n_max)
        .map(|n| {
            if beyond {
                return Ok(HalfRow {
                    n,
                    status: HalfStatus::SufficientCondition,
                    theta_n: None,
                });
            }
            let t = theta.tail_theta_n(n, refine_depth)?;
            let half = rat(1, 2);
            let status = if t.hi() <= &half {
                HalfStatus::Certified
            } else if t.lo() > &half {
                HalfStatus::Violated
            } else {
                HalfStatus::Undecided
            };
            Ok(HalfRow {
                n,
                status,
                theta_n: Some(t),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = Verdict::combine(rows.iter().map(|r| match r.status {
        HalfStatus::SufficientCondition | HalfStatus::Certified => Verdict::Pass,
        HalfStatus::Violated => Verdict::Fail,
        HalfStatus::Undecided => Verdict::Undecided,
    }));
    Ok(ConditionReport {
        n_max,
        refine_depth,
        sufficient_in_range: in_range,
        sufficient_first_failure: first_failure,
        sufficient_beyond: beyond,
        rows,
        verdict,
    })
}

/// Whether `4 a_m <= b_m` provably persists past `n_max`, given it holds up
/// to `n_max`.
fn sufficient_beyond(theta: &CantorSeries, n_max: usize) -> bool {
    match theta.digits() {
        // zeros past the prefix; check the prefix digits beyond n_max
        DigitRule::EventuallyZero(prefix) => prefix
            .iter()
            .enumerate()
            .skip(n_max)
            .all(|(i, d)| theta.sigma().base_at(i + 1).is_ok_and(|b| d * 4u32 <= b)),
        // bases are nondecreasing, so 4 <= b_{n_max} carries over
        DigitRule::ConstantOne => matches!(
            theta.sigma().kind(),
            BaseKind::SuccessorBases | BaseKind::SuccessorPower(_)
        ),
        DigitRule::ExplicitList(_) | DigitRule::EventuallyMax(_) => false,
    }
}

// best approximation with denominator B_n

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgminCandidate {
    #[serde(with = "bigint_str")]
    pub m: BigInt,
    /// Certified lower bound on `|theta - m/B_n|`.
    #[serde(with = "exact_str")]
    pub distance_lower: ExactRational,
    /// `distance_lower >= ` the upper bound for `A_n`.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgminReport {
    pub n: usize,
    /// `A_n`
    #[serde(with = "bigint_str")]
    pub numerator: BigInt,
    /// `B_n`
    #[serde(with = "bigint_str")]
    pub denominator: BigInt,
    pub window: u64,
    pub refine_depth: usize,
    pub theta_n: RationalInterval,
    pub enclosure: RationalInterval,
    /// Certified upper bound on `|theta - A_n/B_n|`.
    #[serde(with = "exact_str")]
    pub argmin_distance_upper: ExactRational,
    pub candidates: Vec<ArgminCandidate>,
    /// `w/B_n >= |theta - A_n/B_n|`, so every `m` outside the window is at
    /// least as far as `A_n`.
    pub outside_window_certified: bool,
    /// `n = 1` lies below the range `n >= 2` the measure bound relies on.
    pub below_bound_range: bool,
    pub verdict: Verdict,
}

/// Certifies `|theta - m/B_n| >= |theta - A_n/B_n|` for every integer `m`
/// with `|m - A_n| <= window`, and bounds the integers outside the window.
///
/// Requires `theta_n <= 1/2` to be certified at this `n`.
pub fn best_approx_at_depth(
    theta: &CantorSeries,
    n: usize,
    window: u64,
    refine_depth: usize,
) -> Result<ArgminReport> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let tail = theta.tail_theta_n(n, refine_depth)?;
    let half = rat(1, 2);
    if tail.lo() > &half {
        return Err(Error::PreconditionNotCertified { n });
    }
    if tail.hi() > &half {
        return Err(Error::UndecidedAtDepth {
            n,
            depth: refine_depth,
        });
    }

    let prefix = theta.prefix(n)?;
    let big_a = prefix.numerator.clone();
    let big_b = BigInt::from(prefix.denominator.clone());
    let enclosure = theta.enclosure(refine_depth)?;
    let at = |m: &BigInt| BigRational::new(m.clone(), big_b.clone());
    let argmin_upper = enclosure.distance_upper(&at(&big_a));

    let w = BigInt::from(window);
    let mut candidates = Vec::with_capacity(2 * window as usize);
    let mut m = &big_a - &w;
    while m <= &big_a + &w {
        if m != big_a {
            let distance_lower = enclosure.distance_lower(&at(&m));
            candidates.push(ArgminCandidate {
                certified: distance_lower >= argmin_upper,
                m: m.clone(),
                distance_lower,
            });
        }
        m += 1;
    }
    let outside_window_certified = BigRational::new(w.clone(), big_b.clone()) >= argmin_upper;
    let verdict = if outside_window_certified && candidates.iter().all(|c| c.certified) {
        Verdict::Pass
    } else {
        Verdict::Undecided
    };
    Ok(ArgminReport {
        n,
        numerator: big_a,
        denominator: big_b,
        window,
        refine_depth,
        theta_n: tail,
        enclosure,
        argmin_distance_upper: argmin_upper,
        candidates,
        outside_window_certified,
        below_bound_range: n < 2,
        verdict,
    })
}

// certified distance to p/q

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// `|theta - p/q| > threshold`
    Separated,
    /// `|theta - p/q| <= threshold`
    Within,
    Undecided,
}

/// Exact certificate for one comparison of `|theta - p/q|` with a threshold.
///
/// `enclosure` contains `theta`; the outcome follows from `p/q`, the
/// enclosure and the threshold alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    #[serde(with = "bigint_str")]
    pub p: BigInt,
    pub q: i64,
    pub outcome: Outcome,
    /// Which side of `p/q` the value lies on, once separated.
    pub side: Option<Side>,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<RationalInterval>,
    /// Certified lower bound on `|theta - p/q|` (zero when unknown).
    #[serde(with = "exact_str")]
    pub distance_lower: ExactRational,
}

impl DistanceCertificate {
    /// Re-derives the outcome from the recorded exact values.
    pub fn recheck(&self, threshold: &ExactRational) -> bool {
        let Some(enc) = &self.enclosure else {
            return self.outcome == Outcome::Undecided;
        };
        let x = BigRational::new(self.p.clone(), BigInt::from(self.q));
        match self.outcome {
            Outcome::Separated => {
                let gap = enc.distance_lower(&x);
                let side_ok = match self.side {
                    Some(Side::Above) => enc.lo() > &x,
                    Some(Side::Below) => enc.hi() < &x,
                    None => false,
                };
                gap == self.distance_lower && &gap > threshold && side_ok
            }
            Outcome::Within => &enc.distance_upper(&x) <= threshold,
            Outcome::Undecided => true,
        }
    }
}

/// Refines `theta` until `|theta - p/q| > threshold` or `<= threshold` is
/// certified, up to `max_depth` terms.
pub fn certify_distance(
    theta: &CantorSeries,
    p: &BigInt,
    q: i64,
    threshold: &ExactRational,
    max_depth: usize,
) -> Result<DistanceCertificate> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    let x = BigRational::new(p.clone(), BigInt::from(q));
    let cert = match theta.separate(&x, threshold, max_depth)? {
        Separation::Separated {
            side,
            depth,
            gap,
            interval,
        } => DistanceCertificate {
            p: p.clone(),
            q,
            outcome: Outcome::Separated,
            side: Some(side),
            depth,
            enclosure: Some(interval),
            distance_lower: gap,
        },
        Separation::Within {
            depth, interval, ..
        } => DistanceCertificate {
            p: p.clone(),
            q,
            outcome: Outcome::Within,
            side: None,
            depth,
            distance_lower: interval.distance_lower(&x),
            enclosure: Some(interval),
        },
        Separation::Undecided { depth, gap } => DistanceCertificate {
            p: p.clone(),
            q,
            outcome: Outcome::Undecided,
            side: None,
            depth,
            enclosure: None,
            distance_lower: gap,
        },
    };
    Ok(cert)
}

// exhaustive verification

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub q: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<MeasureBound>,
    pub tested: Vec<DistanceCertificate>,
    /// `floor(q theta)`, once certified from the tested numerators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor_q_theta: Option<String>,
    #[serde(
        default,
        with = "opt_exact_str",
        skip_serializing_if = "Option::is_none"
    )]
    pub certified_distance_lower_bound: Option<ExactRational>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub undecided: usize,
    pub not_applicable: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub series: String,
    pub q_max: i64,
    pub neighbors: usize,
    pub refine_depth: usize,
    pub rows: Vec<MeasureRow>,
    pub tally: Tally,
    pub verdict: Verdict,
}

impl MeasureReport {
    /// Re-derives every row verdict from the recorded exact rationals.
    /// Returns the `q` values whose recorded verdict does not follow.
    pub fn recheck(&self) -> Vec<i64> {
        self.rows
            .iter()
            .filter(|row| !recheck_row(row))
            .map(|row| row.q)
            .collect()
    }
}

fn recheck_row(row: &MeasureRow) -> bool {
    let Some(bound) = &row.bound else {
        return row.verdict == Verdict::Undecided;
    };
    if !bound.is_applicable() {
        return row.verdict == Verdict::NotApplicable;
    }
    if !row.tested.iter().all(|c| c.recheck(&bound.rhs)) {
        return false;
    }
    match row.verdict {
        Verdict::Pass => {
            let all_sep = row
                .tested
                .iter()
                .all(|c| c.outcome == Outcome::Separated && c.distance_lower > bound.rhs);
            let floor_ok = row
                .floor_q_theta
                .as_ref()
                .and_then(|f| f.parse::<BigInt>().ok())
                .is_some_and(|f| brackets(&row.tested, &f));
            let min_ok = row
                .tested
                .iter()
                .map(|c| &c.distance_lower)
                .min()
                .zip(row.certified_distance_lower_bound.as_ref())
                .is_some_and(|(a, b)| a == b && b > &bound.rhs);
            all_sep && floor_ok && min_ok
        }
        Verdict::Fail => row.tested.iter().any(|c| c.outcome == Outcome::Within),
        Verdict::Undecided => !row.tested.iter().any(|c| c.outcome == Outcome::Within),
        Verdict::NotApplicable => false,
    }
}

/// `p/q < theta < (p+1)/q` is certified by two tested numerators.
fn brackets(tested: &[DistanceCertificate], p: &BigInt) -> bool {
    let side_of = |x: &BigInt| {
        tested
            .iter()
            .find(|c| &c.p == x && c.outcome == Outcome::Separated)
            .and_then(|c| c.side)
    };
    side_of(p) == Some(Side::Above) && side_of(&(p + 1)) == Some(Side::Below)
}

/// The `k` integers nearest to `x`, ties to the smaller.
fn nearest_integers(x: &ExactRational, k: usize) -> Vec<BigInt> {
    let f = x.floor().to_integer();
    let span = BigInt::from(k as u64 + 1);
    let mut pool: Vec<BigInt> = Vec::new();
    let mut p = &f - &span;
    while p <= &f + &span {
        pool.push(p.clone());
        p += 1;
    }
    pool.sort_by(|a, b| {
        let da = (BigRational::from_integer(a.clone()) - x).abs();
        let db = (BigRational::from_integer(b.clone()) - x).abs();
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    pool.truncate(k);
    pool.sort();
    pool
}

const EXTRA_BOUNDARY_PROBES: usize = 4;

/// Checks the bound for one `q`: tests the `k` numerators nearest `q theta`
/// and extends outward until `floor(q theta)` and `floor(q theta) + 1` are
/// both certified. Distance grows with `|p - q theta|`, so those two cover
/// every other `p`.
pub fn verify_row(theta: &CantorSeries, q: i64, k: usize, refine_depth: usize) -> MeasureRow {
    let bound = match measure_bound(theta, q) {
        Ok(b) => b,
        Err(e) => {
            return MeasureRow {
                q,
                bound: None,
                tested: Vec::new(),
                floor_q_theta: None,
                certified_distance_lower_bound: None,
                verdict: Verdict::Undecided,
                note: Some(e.to_string()),
            }
        }
    };
    if !bound.is_applicable() {
        return MeasureRow {
            q,
            bound: Some(bound),
            tested: Vec::new(),
            floor_q_theta: None,
            certified_distance_lower_bound: None,
            verdict: Verdict::NotApplicable,
            note: None,
        };
    }
    match verify_applicable(theta, &bound, k, refine_depth) {
        Ok(row) => row,
        Err(e) => MeasureRow {
            q,
            bound: Some(bound),
            tested: Vec::new(),
            floor_q_theta: None,
            certified_distance_lower_bound: None,
            verdict: Verdict::Undecided,
            note: Some(e.to_string()),
        },
    }
}

fn verify_applicable(
    theta: &CantorSeries,
    bound: &MeasureBound,
    k: usize,
    refine_depth: usize,
) -> Result<MeasureRow> {
    let q = bound.q;
    let mid = theta.enclosure(refine_depth)?.midpoint() * int(q);
    let mut tested: Vec<DistanceCertificate> = Vec::new();
    let test = |p: &BigInt, tested: &mut Vec<DistanceCertificate>| -> Result<()> {
        if tested.iter().all(|c| &c.p != p) {
            tested.push(certify_distance(theta, p, q, &bound.rhs, refine_depth)?);
        }
        Ok(())
    };
    for p in nearest_integers(&mid, k.max(1)) {
        test(&p, &mut tested)?;
    }

    // extend until the tested set straddles q theta
    let mut floor = None;
    for _ in 0..=EXTRA_BOUNDARY_PROBES {
        if tested.iter().any(|c| c.outcome != Outcome::Separated) {
            break;
        }
        tested.sort_by(|a, b| a.p.cmp(&b.p));
        let above: Vec<&BigInt> = tested
            .iter()
            .filter(|c| c.side == Some(Side::Above))
            .map(|c| &c.p)
            .collect();
        let below: Vec<&BigInt> = tested
            .iter()
            .filter(|c| c.side == Some(Side::Below))
            .map(|c| &c.p)
            .collect();
        match (above.last(), below.first()) {
            (Some(&lo), Some(&hi)) if hi - lo == BigInt::one() => {
                floor = Some(lo.clone());
                break;
            }
            (Some(&lo), _) => {
                let next = lo + 1;
                test(&next, &mut tested)?;
            }
            (None, Some(&hi)) => {
                let next = hi - 1;
                test(&next, &mut tested)?;
            }
            (None, None) => break,
        }
    }
    tested.sort_by(|a, b| a.p.cmp(&b.p));

    let any_within = tested.iter().any(|c| c.outcome == Outcome::Within);
    let all_separated = tested.iter().all(|c| c.outcome == Outcome::Separated);
    let verdict = if any_within {
        Verdict::Fail
    } else if all_separated && floor.is_some() {
        Verdict::Pass
    } else {
        Verdict::Undecided
    };
    let certified_distance_lower_bound = (verdict == Verdict::Pass)
        .then(|| tested.iter().map(|c| c.distance_lower.clone()).min())
        .flatten();
    let note = match verdict {
        Verdict::Undecided if all_separated => {
            Some("tested numerators do not straddle q*theta".to_string())
        }
        Verdict::Undecided => Some(format!("refinement exhausted at depth {refine_depth}")),
        _ => None,
    };
    Ok(MeasureRow {
        q,
        bound: Some(bound.clone()),
        tested,
        floor_q_theta: floor.map(|f| f.to_string()),
        certified_distance_lower_bound,
        verdict,
        note,
    })
}

/// Verifies the measure bound for every `q` in `1..=q_max`. Rows are
/// evaluated in parallel and reported in order of `q`.
pub fn verify_measure(
    theta: &CantorSeries,
    q_max: i64,
    neighbors: usize,
    refine_depth: usize,
) -> Result<MeasureReport> {
    if q_max < 1 {
        return Err(Error::InvalidArgument("q_max must be at least 1".into()));
    }
    if neighbors < 1 {
        return Err(Error::InvalidArgument(
            "neighbors must be at least 1".into(),
        ));
    }
    let rows: Vec<MeasureRow> = (1..=q_max)
        .into_par_iter()
        .map(|q| verify_row(theta, q, neighbors, refine_depth))
        .collect();
    let mut tally = Tally::default();
    for row in &rows {
        match row.verdict {
            Verdict::Pass => tally.pass += 1,
            Verdict::Fail => tally.fail += 1,
            Verdict::Undecided => tally.undecided += 1,
            Verdict::NotApplicable => tally.not_applicable += 1,
        }
    }
    let verdict = Verdict::combine(rows.iter().map(|r| r.verdict));
    Ok(MeasureReport {
        series: theta.name().unwrap_or("series").to_string(),
        q_max,
        neighbors,
        refine_depth,
        rows,
        tally,
        verdict,
    })
}

pub fn measure_report_csv(report: &MeasureReport) -> String {
    let mut out = String::from(
        "q,D,rule,rhs,tested_p,certified_distance_lower_bound,verdict,rhs_approx,distance_approx\n",
    );
    for row in &report.rows {
        let (d, rule, rhs) = match &row.bound {
            Some(b) => (
                b.d_value.to_string(),
                rule_name(&b.rule).to_string(),
                Some(&b.rhs),
            ),
            None => (String::new(), String::new(), None),
        };
        let tested: Vec<String> = row.tested.iter().map(|c| c.p.to_string()).collect();
        let dist = row.certified_distance_lower_bound.as_ref();
        let show = |x: Option<&ExactRational>| x.map(to_exact_string).unwrap_or_default();
        let approx = |x: Option<&ExactRational>| {
            x.map(|v| crate::rational::truncated_decimal(v, 15))
                .unwrap_or_default()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.q,
            d,
            rule,
            show(rhs),
            tested.join(" "),
            show(dist),
            verdict_name(row.verdict),
            approx(rhs),
            approx(dist),
        ));
    }
    out
}

pub fn rule_name(rule: &BoundRule) -> &'static str {
    match rule {
        BoundRule::General => "general",
        BoundRule::FactorialE => "factorial_e",
        BoundRule::FactorialPowerXi => "factorial_power_xi",
        BoundRule::NotApplicable(_) => "not_applicable",
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Undecided => "undecided",
        Verdict::NotApplicable => "not_applicable",
    }
}

// Kempner-factorial bound vs D-factorial bound for e

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SondowRow {
    pub q: i64,
    #[serde(rename = "S")]
    pub s: Option<usize>,
    #[serde(rename = "D")]
    pub d: usize,
    /// `1/(S(q) + 1)!`, only defined for `|q| >= 2`.
    #[serde(with = "opt_exact_str")]
    pub kempner_bound: Option<ExactRational>,
    /// `1/(D(q) + 2)!`
    #[serde(with = "exact_str")]
    pub d_bound: ExactRational,
    pub equal: Option<bool>,
    /// `q = +-1`: only the `D` bound applies.
    pub d_bound_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SondowTable {
    pub rows: Vec<SondowRow>,
    pub all_equal: bool,
}

/// Tabulates `1/(S(q)+1)!` against `1/(D(q, (2,3,...)) + 2)!` for each `q`.
/// The two agree exactly for `|q| >= 2`; for `q = +-1` only the second
/// bound is defined.
pub fn compare_sondow(qs: &[i64]) -> Result<SondowTable> {
    let sigma = crate::sequences::BaseSequence::successor();
    let rows = qs
        .par_iter()
        .map(|&q| {
            let d = d_of(q, &sigma)?;
            let d_bound = recip(&factorial(d + 2));
            if q.unsigned_abs() < 2 {
                return Ok(SondowRow {
                    q,
                    s: None,
                    d,
                    kempner_bound: None,
                    d_bound,
                    equal: None,
                    d_bound_only: true,
                });
            }
            let s = smarandache_of(q.unsigned_abs())?;
            let kempner_bound = recip(&factorial(s + 1));
            Ok(SondowRow {
                q,
                s: Some(s),
                d,
                equal: Some(kempner_bound == d_bound),
                kempner_bound: Some(kempner_bound),
                d_bound,
                d_bound_only: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_equal = rows.iter().all(|r| r.equal != Some(false));
    Ok(SondowTable { rows, all_equal })
}

pub fn sondow_csv(table: &SondowTable) -> String {
    let mut out = String::from("q,S,D,kempner_bound,d_bound,equal,d_bound_only\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.q,
            r.s.map(|s| s.to_string()).unwrap_or_default(),
            r.d,
            r.kempner_bound
                .as_ref()
                .map(to_exact_string)
                .unwrap_or_default(),
            to_exact_string(&r.d_bound),
            r.equal.map(|b| b.to_string()).unwrap_or_default(),
            r.d_bound_only,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::BaseSequence;

    fn boundary_series() -> CantorSeries {
        // theta = 1/2 + 1/6 + 2/24 = 3/4, theta_1 = 1/3 + 2/12 = 1/2 exactly
        CantorSeries::new(
            0,
            DigitRule::eventually_zero([1, 1, 2]),
            BaseSequence::successor(),
        )
        .unwrap()
    }

    #[test]
    fn bounds_for_builtins() {
        let b = measure_bound(&CantorSeries::e(), 7).unwrap();
        assert_eq!((b.d_value, b.rhs.clone()), (6, rat(1, 40320)));
        assert_eq!(b.rule, BoundRule::FactorialE);
        let b = measure_bound(&CantorSeries::e(), 1).unwrap();
        assert_eq!((b.d_value, b.rhs.clone()), (1, rat(1, 6)));
        let b = measure_bound(&CantorSeries::e(), -2).unwrap();
        assert_eq!((b.d_value, b.rhs), (1, rat(1, 6)));

        let b = measure_bound(&CantorSeries::xi(), 7776).unwrap();
        assert_eq!((b.d_value, b.rhs.clone()), (2, rat(1, 7_962_624)));
        assert_eq!(b.rule, BoundRule::FactorialPowerXi);
    }

    #[test]
    fn general_bound_and_its_domain() {
        let sigma = BaseSequence::successor_power(3).unwrap();
        let theta = CantorSeries::new(0, DigitRule::ConstantOne, sigma).unwrap();
        // D(8) = 1 since 8 | 2^3
        let b = measure_bound(&theta, 8).unwrap();
        assert!(matches!(b.rule, BoundRule::NotApplicable(_)));
        assert!(!b.is_applicable());
        // D(27) = 2, bound a_3 / B_3 = 1 / (8 * 27 * 64)
        let b = measure_bound(&theta, 27).unwrap();
        assert_eq!(
            (b.d_value, b.rhs.clone(), b.vacuous),
            (2, rat(1, 13824), false)
        );
        assert_eq!(b.rule, BoundRule::General);

        let zeros = CantorSeries::new(
            0,
            DigitRule::eventually_zero([1, 1]),
            BaseSequence::successor(),
        )
        .unwrap();
        // D(6) = 2, a_3 = 0
        let b = measure_bound(&zeros, 6).unwrap();
        assert!(b.vacuous && b.rhs.is_zero() && b.is_applicable());
    }

    #[test]
    fn half_condition_for_e_uses_enclosures() {
        let r = half_condition(&CantorSeries::e(), 10, 40).unwrap();
        assert!(!r.sufficient_in_range);
        assert_eq!(r.sufficient_first_failure, Some(2));
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.rows.iter().all(|row| row.status == HalfStatus::Certified));
        // theta_2 = 6(e - 8/3) ~ 0.3097
        let t2 = r.rows[0].theta_n.as_ref().unwrap();
        assert!(t2.lo() > &rat(3096, 10000) && t2.hi() < &rat(3098, 10000));
    }

    #[test]
    fn half_condition_for_xi_uses_digit_test() {
        let r = half_condition(&CantorSeries::xi(), 10, 20).unwrap();
        assert!(r.sufficient_in_range && r.sufficient_beyond);
        assert!(r
            .rows
            .iter()
            .all(|row| row.status == HalfStatus::SufficientCondition));
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn half_condition_fails_for_max_tail() {
        let theta =
            CantorSeries::new(0, DigitRule::eventually_max([]), BaseSequence::successor()).unwrap();
        let r = half_condition(&theta, 2, 10).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.rows[0].status, HalfStatus::Violated);
    }

    /// theta_2 = 2/4 = 1/2 exactly, but the explicit list hides the zero tail.
    fn hidden_half() -> CantorSeries {
        CantorSeries::new(
            0,
            DigitRule::explicit([1, 1, 2, 0, 0, 0, 0, 0]),
            BaseSequence::successor(),
        )
        .unwrap()
    }

    #[test]
    fn half_condition_undecided_at_exact_half() {
        let r = half_condition(&hidden_half(), 2, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Undecided);
        assert_eq!(r.rows[0].theta_n.as_ref().unwrap().lo(), &rat(1, 2));
        assert!(half_condition(&CantorSeries::e(), 1, 10).is_err());
        assert!(half_condition(&CantorSeries::e(), 5, 5).is_err());
    }

    #[test]
    fn argmin_for_e_and_xi() {
        let r = best_approx_at_depth(&CantorSeries::e(), 2, 3, 40).unwrap();
        assert_eq!(r.numerator, BigInt::from(16));
        assert_eq!(r.denominator, BigInt::from(6));
        assert_eq!(r.candidates.len(), 6);
        assert_eq!(r.verdict, Verdict::Pass);

        let r = best_approx_at_depth(&CantorSeries::xi(), 1, 3, 10).unwrap();
        assert_eq!(r.numerator, BigInt::from(33));
        assert!(r.below_bound_range);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn argmin_tie_is_allowed() {
        let theta = boundary_series();
        let r = best_approx_at_depth(&theta, 1, 2, 10).unwrap();
        assert_eq!(r.theta_n, RationalInterval::point(rat(1, 2)));
        let next = r
            .candidates
            .iter()
            .find(|c| c.m == BigInt::from(2))
            .unwrap();
        assert_eq!(next.distance_lower, r.argmin_distance_upper);
        assert!(next.certified);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn argmin_precondition() {
        let theta =
            CantorSeries::new(0, DigitRule::eventually_max([]), BaseSequence::successor()).unwrap();
        assert_eq!(
            best_approx_at_depth(&theta, 2, 1, 10),
            Err(Error::PreconditionNotCertified { n: 2 })
        );
        assert_eq!(
            best_approx_at_depth(&hidden_half(), 2, 1, 8),
            Err(Error::UndecidedAtDepth { n: 2, depth: 8 })
        );
    }

    #[test]
    fn unit_denominator_anchor() {
        let e = CantorSeries::e();
        let threshold = rat(28, 100);
        for p in [2, 3] {
            let c = certify_distance(&e, &BigInt::from(p), 1, &threshold, 60).unwrap();
            assert_eq!(c.outcome, Outcome::Separated);
            assert!(c.recheck(&threshold));
        }
        // |e - 2.72| < 0.01
        let c = certify_distance(&e, &BigInt::from(272), 100, &rat(1, 100), 60).unwrap();
        assert_eq!(c.outcome, Outcome::Within);
        assert!(c.recheck(&rat(1, 100)));
    }

    #[test]
    fn nearest_integer_selection() {
        assert_eq!(
            nearest_integers(&rat(27, 10), 2),
            vec![BigInt::from(2), BigInt::from(3)]
        );
        assert_eq!(nearest_integers(&rat(27, 10), 1), vec![BigInt::from(3)]);
        assert_eq!(
            nearest_integers(&rat(-5, 2), 3),
            vec![BigInt::from(-4), BigInt::from(-3), BigInt::from(-2)]
        );
    }

    #[test]
    fn verify_small_ranges() {
        let r = verify_measure(&CantorSeries::e(), 30, 2, 60).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.tally.pass, 30);
        assert!(r.recheck().is_empty());
        let q1 = &r.rows[0];
        assert_eq!(q1.floor_q_theta.as_deref(), Some("2"));

        // one neighbour forces the boundary probe
        let r = verify_measure(&CantorSeries::xi(), 20, 1, 40).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.rows.iter().all(|row| row.tested.len() >= 2));
        assert!(r.recheck().is_empty());
    }

    #[test]
    fn shallow_verification_is_undecided_not_failed() {
        let r = verify_measure(&CantorSeries::e(), 10, 2, 3).unwrap();
        assert_eq!(r.tally.fail, 0);
        assert!(r.tally.undecided > 0);
        assert!(r.recheck().is_empty());
    }

    #[test]
    fn tampered_report_is_caught() {
        let mut r = verify_measure(&CantorSeries::e(), 5, 2, 60).unwrap();
        r.rows[3].tested[0].distance_lower = rat(1, 1);
        assert_eq!(r.recheck(), vec![4]);
    }

    #[test]
    fn rational_series_at_its_own_value_is_undecided() {
        let theta = boundary_series(); // 3/4
        let row = verify_row(&theta, 4, 2, 30);
        // D(4) = 3, a_4 = 0: vacuous bound, and 3/4 itself never separates
        assert_eq!(row.verdict, Verdict::Undecided);
    }

    #[test]
    fn sondow_table() {
        let t = compare_sondow(&[1, 2, 6]).unwrap();
        assert!(t.all_equal);
        assert!(t.rows[0].d_bound_only && t.rows[0].kempner_bound.is_none());
        assert_eq!(t.rows[0].d_bound, rat(1, 6));
        assert_eq!(t.rows[1].d_bound, rat(1, 6));
        assert_eq!(t.rows[1].kempner_bound, Some(rat(1, 6)));
        assert_eq!(t.rows[2].d_bound, rat(1, 24));
        assert_eq!(t.rows[2].kempner_bound, Some(rat(1, 24)));
        assert!(sondow_csv(&t).starts_with("q,S,D,"));
    }
}

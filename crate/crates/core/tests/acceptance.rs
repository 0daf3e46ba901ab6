//! End-to-end acceptance checks. Runs as a plain binary (`harness = false`)
//! so every criterion prints its own PASS/FAIL line under `cargo test`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cantor_series::dfunc::{d_of, smarandache_of};
use cantor_series::expansion::{factorial_digits, resum};
use cantor_series::measure::{
    best_approx_at_depth, certify_distance, compare_sondow, half_condition, verify_measure,
    HalfStatus, Outcome, Verdict,
};
use cantor_series::rational::{parse_rational, rat, to_exact_string};
use cantor_series::sequences::{BaseSequence, DigitRule};
use cantor_series::series::{CantorSeries, TailKind};

/// Seed for the factorial round-trip sample.
const ROUND_TRIP_SEED: u64 = 0x5eed_cafe_f00d_0007;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })?;
    Ok(elapsed)
}

fn xi_value() -> Check {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cantor_series::cli::run(
        ["cantor", "value", "xi", "--eps", "1/10^6"],
        &mut out,
        &mut err,
    );
    let elapsed = within_time(start, Duration::from_secs(1))?;
    ensure(code == 0, || {
        format!("exit {code}: {}", String::from_utf8_lossy(&err))
    })?;
    let json: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let field = |k: &str| -> Result<BigRational, String> {
        let s = json["interval"][k].as_str().ok_or("missing endpoint")?;
        parse_rational(s).map_err(|e| e.to_string())
    };
    let (lo, hi) = (field("lo")?, field("hi")?);
    let width = &hi - &lo;
    ensure(width <= rat(1, 1_000_000), || format!("width {width}"))?;
    // Some number in [lo, hi] has decimal expansion 1.031378...
    let (a, b) = (rat(1_031_378, 1_000_000), rat(1_031_379, 1_000_000));
    ensure(lo < b && hi >= a, || {
        format!("[{lo}, {hi}] misses 1.031378...")
    })?;
    Ok(format!(
        "[{lo}, {hi}], width {width}, shown as {} ({elapsed:.2?})",
        json["lo_decimal"]["approx"].as_str().unwrap_or("?")
    ))
}

fn e_measure_scan() -> Check {
    let start = Instant::now();
    let report = verify_measure(&CantorSeries::e(), 500, 2, 60).map_err(|e| e.to_string())?;
    let elapsed = within_time(start, Duration::from_secs(10))?;
    let t = &report.tally;
    ensure(t.fail == 0 && t.undecided == 0 && t.pass == 500, || {
        format!("pass {} fail {} undecided {}", t.pass, t.fail, t.undecided)
    })?;
    let bad = report.recheck();
    ensure(bad.is_empty(), || {
        format!("recheck disagrees at q = {bad:?}")
    })?;
    Ok(format!("500 rows certified, recheck clean ({elapsed:.2?})"))
}

fn unit_distance_anchor() -> Check {
    let e = CantorSeries::e();
    let threshold = rat(28, 100);
    let mut gaps = Vec::new();
    for p in [2, 3] {
        let cert =
            certify_distance(&e, &BigInt::from(p), 1, &threshold, 60).map_err(|e| e.to_string())?;
        ensure(
            cert.outcome == Outcome::Separated && cert.recheck(&threshold),
            || format!("p = {p}: {:?}", cert.outcome),
        )?;
        println!(
            "    certificate: {}",
            serde_json::to_string(&cert).map_err(|e| e.to_string())?
        );
        gaps.push(cert.distance_lower);
    }
    let min = gaps.into_iter().min().expect("two candidates");
    ensure(min > threshold, || format!("min gap {min}"))?;
    Ok(format!(
        "min over p in {{2, 3}} of |e - p| >= {} > 7/25",
        to_exact_string(&min)
    ))
}

fn identity_suite() -> Check {
    let start = Instant::now();
    let succ = BaseSequence::successor();
    let nat = BaseSequence::natural();
    for q in 2..=5000i64 {
        let s = smarandache_of(q as u64).map_err(|e| e.to_string())?;
        let d = d_of(q, &succ).map_err(|e| e.to_string())?;
        ensure(s == d + 1, || format!("q = {q}: S = {s}, D = {d}"))?;
    }
    for q in 1..=2000i64 {
        let s = smarandache_of(q as u64).map_err(|e| e.to_string())?;
        let d = d_of(q, &nat).map_err(|e| e.to_string())?;
        ensure(s == d, || format!("q = {q}: S = {s}, D(natural) = {d}"))?;
    }
    let elapsed = within_time(start, Duration::from_secs(30))?;
    Ok(format!("0 mismatches over 6999 cases ({elapsed:.2?})"))
}

fn nesting_and_width() -> Check {
    for series in [CantorSeries::e(), CantorSeries::xi()] {
        let steps: Vec<_> = series
            .nested_intervals()
            .take(51)
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for pair in steps.windows(2) {
            let (cur, next) = (&pair[0], &pair[1]);
            ensure(cur.interval.contains_interval(&next.interval), || {
                format!(
                    "{}: I_{} not inside I_{}",
                    series.name().unwrap_or("?"),
                    next.n,
                    cur.n
                )
            })?;
            if !cur.digit.is_zero() {
                let scaled = cur.interval.width()
                    * BigRational::from_integer(BigInt::from(cur.prefix.denominator.clone()));
                ensure(scaled.is_one(), || {
                    format!("n = {}: width * B_n = {scaled}", cur.n)
                })?;
            }
        }
    }
    Ok("e and xi, n = 1..50, exact".into())
}

fn argmin_at_depth() -> Check {
    let e = CantorSeries::e();
    for n in 2..=12 {
        let report = best_approx_at_depth(&e, n, 3, 60).map_err(|err| format!("n = {n}: {err}"))?;
        ensure(
            report.verdict == Verdict::Pass
                && report.outside_window_certified
                && report.candidates.iter().all(|c| c.certified),
            || format!("n = {n}: {:?}", report.verdict),
        )?;
    }
    let half = half_condition(&e, 12, 60).map_err(|err| err.to_string())?;
    let undecided = half
        .rows
        .iter()
        .filter(|r| r.status == HalfStatus::Undecided)
        .count();
    ensure(half.verdict == Verdict::Pass && undecided == 0, || {
        format!("half condition {:?}, {undecided} undecided", half.verdict)
    })?;
    Ok("n = 2..12, window 3, theta_n <= 1/2 certified".into())
}

fn factorial_round_trip() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(ROUND_TRIP_SEED);
    let mut longest = 0;
    for _ in 0..1000 {
        let p: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let q: i64 = rng.gen_range(1..=1_000_000);
        let x = BigRational::new(BigInt::from(p), BigInt::from(q));
        let reduced_q = x.denom().to_u64().expect("q fits");
        let exp = factorial_digits(&x, q as usize + 1).map_err(|e| e.to_string())?;
        ensure(exp.terminated, || format!("{p}/{q} did not terminate"))?;
        ensure(resum(&exp).map_err(|e| e.to_string())? == x, || {
            format!("{p}/{q} resums differently")
        })?;
        // digits[i] is c_{i+2}, bounded by i + 1
        for (i, c) in exp.digits.iter().enumerate() {
            ensure(c.to_u64().is_some_and(|c| c <= i as u64 + 1), || {
                format!("{p}/{q}: c_{} = {c}", i + 2)
            })?;
        }
        let last = exp.last_nonzero_index().map_or(1, |i| i + 1);
        let s = smarandache_of(reduced_q).map_err(|e| e.to_string())?;
        ensure(last <= s, || {
            format!("{p}/{q}: last nonzero c_{last}, S = {s}")
        })?;
        longest = longest.max(exp.digits.len() + 1);
    }
    let elapsed = within_time(start, Duration::from_secs(10))?;
    Ok(format!(
        "1000 rationals, seed {ROUND_TRIP_SEED:#x}, longest {longest} terms ({elapsed:.2?})"
    ))
}

fn terminal_closed_forms() -> Check {
    let succ = BaseSequence::successor();
    let all_max = CantorSeries::new(0, DigitRule::EventuallyMax(vec![]), succ.clone())
        .map_err(|e| e.to_string())?;
    let class = all_max.classify_prefix(64).map_err(|e| e.to_string())?;
    ensure(class.verdict == Some((TailKind::EventuallyMax, 1)), || {
        format!("{:?}", class.verdict)
    })?;
    ensure(class.closed_form == Some(BigRational::one()), || {
        format!("{:?}", class.closed_form)
    })?;

    // Telescoping oracle: sum_{k<=n} k/(k+1)! = 1 - 1/(n+1)!, built from factorials.
    let mut factorial = BigInt::one();
    let mut sum = BigRational::zero();
    for k in 1..=30u32 {
        factorial *= k + 1;
        let next = &sum + BigRational::new(BigInt::from(k), factorial.clone());
        ensure(next > sum && next < BigRational::one(), || {
            format!("not monotone at n = {k}")
        })?;
        sum = next;
        let ours = all_max.partial_sum(k as usize).map_err(|e| e.to_string())?;
        ensure(ours == sum, || format!("S_{k} = {ours}, oracle {sum}"))?;
    }
    let b30 = succ.cumulative_product(30).map_err(|e| e.to_string())?;
    let gap = BigRational::one() - &sum;
    ensure(
        gap == BigRational::new(BigInt::one(), BigInt::from(b30)),
        || format!("final gap {gap}"),
    )?;

    let e_prefix = CantorSeries::new(2, DigitRule::eventually_zero([1, 1]), succ)
        .map_err(|e| e.to_string())?;
    let class = e_prefix.classify_prefix(64).map_err(|e| e.to_string())?;
    ensure(class.verdict == Some((TailKind::EventuallyZero, 3)), || {
        format!("{:?}", class.verdict)
    })?;
    ensure(class.closed_form == Some(rat(8, 3)), || {
        format!("{:?}", class.closed_form)
    })?;
    Ok("all-max tail = 1 (gap 1/B_30 at n = 30), e prefix = 8/3".into())
}

fn sondow_comparison() -> Check {
    let qs: Vec<i64> = (1..=1000).collect();
    let table = compare_sondow(&qs).map_err(|e| e.to_string())?;
    for row in &table.rows {
        if row.q == 1 {
            ensure(
                row.d_bound_only && row.equal.is_none() && row.kempner_bound.is_none(),
                || "q = 1 not flagged as D-bound only".into(),
            )?;
        } else {
            ensure(
                row.equal == Some(true) && row.kempner_bound.as_ref() == Some(&row.d_bound),
                || format!("q = {}: bounds differ", row.q),
            )?;
        }
    }
    ensure(table.all_equal, || "table not all equal".into())?;
    Ok("q = 2..1000 equal, q = 1 D-bound only".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("xi certified value to 1e-6", xi_value),
        ("e measure bound, q <= 500", e_measure_scan),
        ("unit-distance anchor > 0.28", unit_distance_anchor),
        ("S = D + 1 and D(natural) = S", identity_suite),
        ("nesting and width laws", nesting_and_width),
        ("best approximation at depth n", argmin_at_depth),
        ("factorial round trip", factorial_round_trip),
        ("terminal closed forms", terminal_closed_forms),
        ("Kempner vs D bound table", sondow_comparison),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

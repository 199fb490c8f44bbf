//! Classical Shor loop around a simulated period-finding measurement.
//!
//! The simulator needs the true period of `a` to build the measurement
//! distribution; the recovery path only ever sees the sampled `y`.

use std::collections::HashMap;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cf::{cf_from_rational, convergents};
use crate::error::{Error, Result};
use crate::measure::{
    build_distribution, choose_register_size, preimage_count, sample_measurement, MeasurementDistribution, Mode,
    RegisterConfig,
};
use crate::modular::{factor_from_period, is_prime, mod_exp, multiplicative_order, perfect_power_base};
use crate::rational::Rational;

/// How the simulated oracle register is treated before sampling `y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    /// Draw the observed residue class first (weight `A_{x0}/N`), then
    /// sample `y` from that class's distribution.
    Conditional,
    /// Sample `y` straight from the class-averaged distribution.
    #[default]
    Mixture,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShorConfig {
    pub n: u64,
    pub max_a_retries: usize,
    /// Largest `k` tried by the `p = kN/y` fallback.
    pub max_k_search: u64,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl ShorConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        ShorConfig {
            n,
            max_a_retries: 25,
            max_k_search: n,
            seed,
            mode: SamplingMode::Mixture,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttemptStatus {
    /// `gcd(a, n) > 1`, no measurement needed.
    LuckyGcd,
    /// Measured `y = 0`, which carries no period information.
    ZeroMeasurement,
    /// No candidate satisfied `a^p = 1 (mod n)`.
    NoPeriod,
    /// The verified period is odd.
    OddPeriod,
    /// `a^{p/2} = -1 (mod n)`, both gcds trivial.
    TrivialSplit,
    Factored,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub a: u64,
    pub y: Option<u64>,
    /// Convergent denominators of `y/N`.
    pub denominators: Vec<u64>,
    pub candidates: Vec<u64>,
    pub period: Option<u64>,
    pub status: AttemptStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub n: u64,
    #[serde(rename = "N")]
    pub size: Option<u64>,
    pub seed: u64,
    pub attempts: Vec<Attempt>,
    /// First split found, ordered `f1 <= f2`.
    pub factors: Option<(u64, u64)>,
    /// Full factorization in ascending order. A composite entry remains only
    /// if its own run exhausted its retries.
    pub prime_factors: Vec<u64>,
    /// Simulated measurements across this run and every recursive split.
    pub total_runs: usize,
    pub failure: Option<String>,
}

impl FactorReport {
    /// Pretty JSON with the struct's field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Convergent denominators of `y/N` and the period candidates drawn from them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CfRecovery {
    pub denominators: Vec<u64>,
    pub candidates: Vec<u64>,
}

/// Period candidates from the continued fraction of `y/N`.
///
/// The leading candidate is the largest convergent denominator below `n`.
/// It is followed by the remaining denominators below `n` in decreasing
/// order, then by `2h, 3h, 4h` for the leading `h` while below `n`. This
/// covers `gcd(k, p) > 1`, where the reduced fraction only yields a divisor
/// of `p`. `y = 0` yields nothing.
pub fn recover_period_cf(y: u64, size: u64, n: u64) -> CfRecovery {
    if y == 0 {
        return CfRecovery::default();
    }
    let x = Rational::from_parts(y, size);
    let table = convergents(&cf_from_rational(&x));
    let denominators: Vec<u64> = table
        .denominators()
        .iter()
        .map(|q| u64::try_from(q).expect("denominator bounded by N"))
        .collect();

    let mut below: Vec<u64> = denominators.iter().copied().filter(|&h| h < n).collect();
    below.sort_unstable_by(|a, b| b.cmp(a));
    below.dedup();
    let mut candidates = below.clone();
    if let Some(&lead) = below.first() {
        for c in 2..=4 {
            let m = c * lead;
            if m < n && !candidates.contains(&m) {
                candidates.push(m);
            }
        }
    }
    CfRecovery {
        denominators,
        candidates,
    }
}

/// Integral values `kN/y < n` for `k = 1..=k_max`, in order of `k`.
pub fn recover_period_q1(y: u64, size: u64, n: u64, k_max: u64) -> Vec<u64> {
    if y == 0 {
        return Vec::new();
    }
    let (y, size) = (y as u128, size as u128);
    let mut out = Vec::new();
    for k in 1..=k_max as u128 {
        let kn = k * size;
        // kN/y only grows with k
        if kn >= n as u128 * y {
            break;
        }
        if kn % y == 0 {
            out.push((kn / y) as u64);
        }
    }
    out
}

/// `a^cand = 1 (mod n)`. Accepts any multiple of the true order.
pub fn verify_period(a: u64, cand: u64, n: u64) -> bool {
    cand >= 1 && n >= 2 && mod_exp(a, cand, n).is_ok_and(|r| r == 1)
}

/// Post-processing of one measured `y` for base `a`: continued-fraction
/// candidates first, the `kN/y` family only if none of those verifies.
pub fn process_measurement(a: u64, y: u64, size: u64, n: u64, k_max: u64) -> Attempt {
    let mut attempt = Attempt {
        a,
        y: Some(y),
        denominators: Vec::new(),
        candidates: Vec::new(),
        period: None,
        status: AttemptStatus::NoPeriod,
    };
    if y == 0 {
        attempt.status = AttemptStatus::ZeroMeasurement;
        return attempt;
    }

    let cf = recover_period_cf(y, size, n);
    attempt.denominators = cf.denominators;
    attempt.candidates = cf.candidates;
    let mut period = attempt.candidates.iter().copied().find(|&c| verify_period(a, c, n));
    if period.is_none() {
        let fallback = recover_period_q1(y, size, n, k_max);
        period = fallback.iter().copied().find(|&c| verify_period(a, c, n));
        for c in fallback {
            if !attempt.candidates.contains(&c) {
                attempt.candidates.push(c);
            }
        }
    }

    let Some(p) = period else {
        return attempt;
    };
    attempt.period = Some(p);
    attempt.status = match factor_from_period(a, p, n) {
        Ok(Some(_)) => AttemptStatus::Factored,
        Ok(None) if p % 2 == 1 => AttemptStatus::OddPeriod,
        Ok(None) => AttemptStatus::TrivialSplit,
        Err(_) => unreachable!("period was verified"),
    };
    attempt
}

/// Validates `n` for [`shor_factor`]: at least 4 and composite.
pub fn check_input(n: u64) -> Result<()> {
    if n < 4 {
        return Err(Error::TooSmall(n));
    }
    if is_prime(n) {
        return Err(Error::Prime(n));
    }
    Ok(())
}

/// Runs the loop until a nontrivial split is found or `max_a_retries`
/// bases have been tried, then factors composite parts recursively.
///
/// Even `n` and perfect powers are split directly without simulation.
pub fn shor_factor(config: &ShorConfig) -> Result<FactorReport> {
    check_input(config.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = split_once(config, &mut rng);

    if let Some((f1, f2)) = report.factors {
        let mut primes = Vec::new();
        let mut runs = 0;
        for f in [f1, f2] {
            let sub_seed = rng.next_u64();
            collect_primes(f, config, sub_seed, 1, &mut primes, &mut runs);
        }
        primes.sort_unstable();
        report.prime_factors = primes;
        report.total_runs += runs;
    }
    Ok(report)
}

fn collect_primes(f: u64, parent: &ShorConfig, seed: u64, depth: u32, primes: &mut Vec<u64>, runs: &mut usize) {
    if is_prime(f) {
        primes.push(f);
        return;
    }
    // every split at least halves the number
    debug_assert!(depth <= 64 - parent.n.leading_zeros());
    let sub = ShorConfig {
        n: f,
        max_k_search: f,
        seed,
        ..parent.clone()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = split_once(&sub, &mut rng);
    *runs += report.total_runs;
    match report.factors {
        Some((g1, g2)) => {
            for g in [g1, g2] {
                let next = rng.next_u64();
                collect_primes(g, parent, next, depth + 1, primes, runs);
            }
        }
        None => primes.push(f),
    }
}

fn ordered(g: u64, n: u64) -> (u64, u64) {
    let h = n / g;
    (g.min(h), g.max(h))
}

/// One top-level split of composite `config.n`; fills everything except
/// the recursive prime factorization.
fn split_once(config: &ShorConfig, rng: &mut ChaCha8Rng) -> FactorReport {
    let n = config.n;
    let register = choose_register_size(n).ok();
    let mut report = FactorReport {
        n,
        size: register.map(|r| r.size),
        seed: config.seed,
        attempts: Vec::new(),
        factors: None,
        prime_factors: Vec::new(),
        total_runs: 0,
        failure: None,
    };

    if n.is_multiple_of(2) {
        report.factors = Some(ordered(2, n));
        return report;
    }
    if let Some(b) = perfect_power_base(n) {
        report.factors = Some(ordered(b, n));
        return report;
    }
    let register = register.expect("odd n >= 4 has a register size");

    let mut bases: Vec<u64> = (2..n).collect();
    bases.shuffle(rng);
    let mut cache: HashMap<(u64, Mode), MeasurementDistribution> = HashMap::new();

    for &a in bases.iter().take(config.max_a_retries) {
        let g = a.gcd(&n);
        if g > 1 {
            report.attempts.push(Attempt {
                a,
                y: None,
                denominators: Vec::new(),
                candidates: Vec::new(),
                period: None,
                status: AttemptStatus::LuckyGcd,
            });
            report.factors = Some(ordered(g, n));
            return report;
        }

        let y = simulate_measurement(a, register, config.mode, &mut cache, rng);
        report.total_runs += 1;
        let attempt = process_measurement(a, y, register.size, n, config.max_k_search);
        let factored = attempt.status == AttemptStatus::Factored;
        if factored {
            let p = attempt.period.expect("factored attempts carry a period");
            report.factors = factor_from_period(a, p, n).expect("period was verified");
        }
        report.attempts.push(attempt);
        if factored {
            return report;
        }
    }

    report.failure = Some(format!("no factor after {} attempts", report.attempts.len()));
    report
}

/// Samples `y` for base `a`. The true period is used only here.
fn simulate_measurement(
    a: u64,
    register: RegisterConfig,
    mode: SamplingMode,
    cache: &mut HashMap<(u64, Mode), MeasurementDistribution>,
    rng: &mut ChaCha8Rng,
) -> u64 {
    let p = multiplicative_order(a, register.n).expect("a is coprime to n");
    let mode = match mode {
        SamplingMode::Mixture => Mode::Mixture,
        SamplingMode::Conditional => {
            // residue class x0 is observed with probability A_{x0} / N
            let pick = rng.random_range(0..register.size);
            let mut acc = 0;
            let offset = (0..p)
                .find(|&x0| {
                    acc += preimage_count(register.size, p, x0);
                    pick < acc
                })
                .expect("preimage counts sum to N");
            Mode::Conditional { offset }
        }
    };
    let dist = cache
        .entry((p, mode))
        .or_insert_with(|| build_distribution(register, p, mode).expect("order is below n"));
    sample_measurement(dist, rng.next_u64())
}

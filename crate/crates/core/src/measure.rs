//! Post-QFT measurement statistics for a periodic modular-exponentiation
//! oracle.
//!
//! With register size `N = 2^m`, period `p` and `A` preimages of the
//! measured oracle value, a measurement returns `y` with probability
//!
//! ```text
//! P(y) = |sum_{j<A} e^{2 pi i j p y / N}|^2 / (N A)
//!      = sin^2(pi A p y / N) / (N A sin^2(pi p y / N))    if p y != 0 mod N
//!      = A / N                                            if p y == 0 mod N
//! ```
//!
//! Probabilities are `f64`; every phase is reduced with exact integer
//! arithmetic first and all window geometry uses exact rationals.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `n` to factor and register size `N = 2^m` with `n^2 < N < 2 n^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RegisterConfig {
    pub n: u64,
    #[serde(rename = "N")]
    pub size: u64,
    pub exponent: u32,
}

/// Smallest power of two above `n^2`. Fails for `n < 4` and for powers of
/// two, where `n^2` is itself a power of two and nothing fits strictly.
pub fn choose_register_size(n: u64) -> Result<RegisterConfig> {
    if n < 4 {
        return Err(Error::TooSmall(n));
    }
    if n.is_power_of_two() {
        return Err(Error::PowerOfTwo(n));
    }
    let square = (n as u128) * (n as u128);
    let exponent = 128 - square.leading_zeros();
    assert!(exponent < 64, "n = {n} too large for a 64-bit register size");
    let size = 1u128 << exponent;
    debug_assert!(square < size && size < 2 * square);
    Ok(RegisterConfig {
        n,
        size: size as u64,
        exponent,
    })
}

/// Count of arguments `x0, x0 + p, x0 + 2p, ... < N`.
pub fn preimage_count(size: u64, p: u64, offset: u64) -> u64 {
    debug_assert!(offset < p && p < size);
    (size - 1 - offset) / p + 1
}

/// `|1 - e^{i phi}| = 2 sin(|phi|/2)` for `phi` in `[-pi, pi]`.
pub fn secant_length(phi: f64) -> Result<f64> {
    if phi.is_nan() || phi.abs() > PI {
        return Err(Error::PhaseOutOfRange(phi.to_string()));
    }
    Ok(2.0 * (phi.abs() / 2.0).sin())
}

/// `P(y)` for register size `N`, period `p` and preimage count `A`.
pub fn prob_y(y: u64, size: u64, p: u64, a: u64) -> f64 {
    let n = size as u128;
    let k = (p as u128) * (y as u128) % n;
    if k == 0 {
        return a as f64 / size as f64;
    }
    // sin(pi m / N) only depends on m mod 2N
    let ak = (a as u128) * k % (2 * n);
    if ak.is_multiple_of(n) {
        return 0.0;
    }
    let num = (PI * ak as f64 / size as f64).sin();
    let den = (PI * k as f64 / size as f64).sin();
    let ratio = num / den;
    ratio * ratio / (size as f64 * a as f64)
}

/// Which preimage set the distribution describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The oracle register was observed in the residue class of `offset`.
    Conditional { offset: u64 },
    /// Average over every residue class, weighted by `A_{x0} / N`.
    Mixture,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Conditional { .. } => "conditional",
            Mode::Mixture => "mixture",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementDistribution {
    pub config: RegisterConfig,
    pub period: u64,
    pub mode: Mode,
    /// `probs[y]` for `y = 0..N`
    pub probs: Vec<f64>,
}

#[derive(Serialize)]
struct DistributionJson<'a> {
    n: u64,
    #[serde(rename = "N")]
    size: u64,
    p: u64,
    mode: &'a str,
    probs: &'a [f64],
}

impl MeasurementDistribution {
    /// Sum of all probabilities, accumulated in `y` order.
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn size(&self) -> u64 {
        self.config.size
    }

    /// `y,prob` header followed by one row per `y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.probs.len() * 24);
        out.push_str("y,prob\n");
        for (y, prob) in self.probs.iter().enumerate() {
            writeln!(out, "{y},{prob}").unwrap();
        }
        out
    }

    /// `{n, N, p, mode, probs}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DistributionJson {
            n: self.config.n,
            size: self.config.size,
            p: self.period,
            mode: self.mode.name(),
            probs: &self.probs,
        })
        .expect("distribution serializes")
    }
}

/// Tabulates `P(y)` for every `y < N`. Per-`y` values are computed in
/// parallel but each is a pure function of `y`, so the table does not
/// depend on scheduling.
pub fn build_distribution(config: RegisterConfig, p: u64, mode: Mode) -> Result<MeasurementDistribution> {
    if p == 0 {
        return Err(Error::ZeroPeriod);
    }
    if p >= config.n {
        return Err(Error::PeriodTooLarge { p, n: config.n });
    }
    let size = config.size;
    let probs = match mode {
        Mode::Conditional { offset } => {
            if offset >= p {
                return Err(Error::OffsetOutOfRange { offset, p });
            }
            let a = preimage_count(size, p, offset);
            (0..size).into_par_iter().map(|y| prob_y(y, size, p, a)).collect()
        }
        Mode::Mixture => {
            // offsets below N mod p have one extra preimage
            let long = size % p;
            let a_hi = preimage_count(size, p, 0);
            let a_lo = preimage_count(size, p, p - 1);
            let w_hi = (long * a_hi) as f64 / size as f64;
            let w_lo = ((p - long) * a_lo) as f64 / size as f64;
            (0..size)
                .into_par_iter()
                .map(|y| {
                    let hi = if long > 0 { w_hi * prob_y(y, size, p, a_hi) } else { 0.0 };
                    let lo = if long < p { w_lo * prob_y(y, size, p, a_lo) } else { 0.0 };
                    hi + lo
                })
                .collect()
        }
    };
    Ok(MeasurementDistribution {
        config,
        period: p,
        mode,
        probs,
    })
}

/// Draws one `y` by inverse CDF from a ChaCha8 stream seeded with `seed`.
pub fn sample_measurement(dist: &MeasurementDistribution, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(dist, &mut rng)
}

pub(crate) fn sample_with<R: Rng>(dist: &MeasurementDistribution, rng: &mut R) -> u64 {
    let u: f64 = rng.random::<f64>() * dist.total();
    let mut acc = 0.0;
    for (y, &prob) in dist.probs.iter().enumerate() {
        acc += prob;
        if acc > u {
            return y as u64;
        }
    }
    // rounding left u at the very top; take the last reachable outcome
    dist.probs.iter().rposition(|&prob| prob > 0.0).unwrap_or(0) as u64
}

/// One window `(kN/p - 1/2, kN/p + 1/2]` and the probability it captures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Window {
    pub k: u64,
    #[serde(serialize_with = "serialize_display")]
    pub center: Rational,
    pub ys: Vec<u64>,
    pub mass: f64,
}

fn serialize_display<S: serde::Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowReport {
    pub windows: Vec<Window>,
    pub total: f64,
}

/// Integers `y` within `1/2` of `kN/p`. A point exactly `1/2` below the
/// center is left out so the windows partition the integers.
pub fn window_members(size: u64, p: u64, k: u64) -> (Rational, Vec<u64>) {
    let center = Rational::from_parts(BigInt::from(k) * size, p);
    let half = Rational::from_parts(1, 2);
    let hi = (&center + &half).floor();
    let lo_edge = &center - &half;
    let mut lo = lo_edge.ceil_int();
    if Rational::from_integer(lo.clone()) == lo_edge {
        lo += 1;
    }
    let mut ys = Vec::new();
    let mut y = lo;
    while y <= hi {
        if let Ok(v) = u64::try_from(&y) {
            if v < size {
                ys.push(v);
            }
        }
        y += 1;
    }
    (center, ys)
}

/// Probability mass within `1/2` of each multiple `kN/p`, `k = 0..p`.
pub fn window_mass(dist: &MeasurementDistribution) -> WindowReport {
    let (size, p) = (dist.config.size, dist.period);
    let windows: Vec<Window> = (0..p)
        .map(|k| {
            let (center, ys) = window_members(size, p, k);
            let mass = ys.iter().map(|&y| dist.probs[y as usize]).sum();
            Window { k, center, ys, mass }
        })
        .collect();
    let total = windows.iter().map(|w| w.mass).sum();
    WindowReport { windows, total }
}

/// Unique integer `t` with `|t p - k N| <= p/2`, if there is exactly one.
pub fn nearest_multiple_index(size: u64, p: u64, k: u64) -> Option<u64> {
    let (_, ys) = window_members(size, p, k);
    let (kn, p128) = (k as u128 * size as u128, p as u128);
    // a tie would put a second integer at distance exactly p/2
    let closed: Vec<u64> = ys
        .iter()
        .copied()
        .chain(ys.first().and_then(|&y| y.checked_sub(1)))
        .filter(|&t| (t as u128 * p128).abs_diff(kn) * 2 <= p128)
        .collect();
    match closed.as_slice() {
        [t] => Some(*t),
        _ => None,
    }
}

/// Phases of `q = e^{2 pi i p y / N}` and `q^{A-1}` with the integer multiple
/// of `2 pi` belonging to window `k` removed exactly.
pub fn reduced_phases(y: u64, k: u64, size: u64, p: u64, a: u64) -> (f64, f64) {
    let offset = (p as i128) * (y as i128) - (k as i128) * (size as i128);
    let base = 2.0 * PI * offset as f64 / size as f64;
    let scaled = 2.0 * PI * ((a as i128 - 1) * offset) as f64 / size as f64;
    (base, scaled)
}

/// `(4 / (pi N)) (1 + 2/pi)`
pub fn epsilon(size: u64) -> f64 {
    4.0 / (PI * size as f64) * (1.0 + 2.0 / PI)
}

/// `4/pi^2 - p * epsilon(N)`
pub fn window_mass_lower_bound(size: u64, p: u64) -> f64 {
    4.0 / (PI * PI) - p as f64 * epsilon(size)
}

/// `4A/(pi^2 N) - epsilon(N)`, the per-`y` bound for `y` inside a window.
pub fn per_y_lower_bound(size: u64, a: u64) -> f64 {
    4.0 * a as f64 / (PI * PI * size as f64) - epsilon(size)
}

trait CeilInt {
    fn ceil_int(&self) -> BigInt;
}

impl CeilInt for Rational {
    fn ceil_int(&self) -> BigInt {
        -((-self).floor())
    }
}

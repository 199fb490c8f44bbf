mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use shorcf::measure::{per_y_lower_bound, reduced_phases, window_mass_lower_bound, window_members};
use shorcf::modular::perfect_power_base;
use shorcf::{
    build_distribution, choose_register_size, euler_phi, factor_from_period, is_prime, mod_exp, multiplicative_order,
    preimage_count, sample_measurement, window_mass, Error, Mode,
};

use common::{gcd, naive_order, unit_periods};

fn naive_pow(a: u64, x: u64, n: u64) -> u64 {
    (0..x).fold(1 % n, |acc, _| acc * (a % n) % n)
}

/// `phi(n)` from the factorization, `n * prod (1 - 1/r)`.
fn phi_by_formula(mut n: u64) -> u64 {
    let mut result = n;
    let mut r = 2;
    while r * r <= n {
        if n.is_multiple_of(r) {
            result = result / r * (r - 1);
            while n.is_multiple_of(r) {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        result = result / n * (n - 1);
    }
    result
}

fn unit() -> impl Strategy<Value = (u64, u64)> {
    (2u64..=500)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_filter("coprime", |&(n, a)| gcd(a, n) == 1)
}

proptest! {
    #[test]
    fn exponentiation_is_a_homomorphism(a in 0u64..u64::MAX, b in 0u64..u64::MAX, x in 0u64..1 << 40, y in 0u64..1 << 40, n in 1u64..u64::MAX) {
        let e = |base, exp| mod_exp(base, exp, n).unwrap() as u128;
        let n128 = n as u128;
        prop_assert_eq!(e(a, x + y), e(a, x) * e(a, y) % n128);
        let ab = ((a as u128 * b as u128) % n128) as u64;
        prop_assert_eq!(e(ab, x), e(a, x) * e(b, x) % n128);
    }

    #[test]
    fn exponentiation_matches_repeated_multiplication(a in 0u64..1000, x in 0u64..300, n in 1u64..1000) {
        prop_assert_eq!(mod_exp(a, x, n).unwrap(), naive_pow(a, x, n));
    }

    #[test]
    fn powers_repeat_exactly_with_the_period((n, a) in unit(), x in 0u64..2000, y in 0u64..2000) {
        let p = multiplicative_order(a, n).unwrap();
        let same = mod_exp(a, x, n).unwrap() == mod_exp(a, y, n).unwrap();
        prop_assert_eq!(same, x % p == y % p);
    }

    #[test]
    fn order_divides_phi((n, a) in unit()) {
        let p = multiplicative_order(a, n).unwrap();
        prop_assert_eq!(p, naive_order(a, n));
        prop_assert_eq!(euler_phi(n), phi_by_formula(n));
        prop_assert_eq!(euler_phi(n) % p, 0);
    }

    #[test]
    fn period_split_is_sound((n, a) in unit(), mult in 1u64..4) {
        let p = multiplicative_order(a, n).unwrap();
        if let Some((f1, f2)) = factor_from_period(a, p * mult, n).unwrap() {
            prop_assert!(1 < f1 && f1 <= f2 && f1 * f2 == n);
        }
        if p > 1 {
            let rejected = matches!(factor_from_period(a, p + 1, n), Err(Error::NotAPeriod { .. }));
            prop_assert!(rejected);
        }
    }
}

/// For odd `n` the split works exactly when `p` is even and
/// `a^{p/2} != -1`. Even `n` can split through `gcd(-2, n) = 2` anyway.
#[test]
fn split_succeeds_exactly_when_the_half_power_is_not_minus_one() {
    for (n, a, p) in unit_periods(300) {
        let got = factor_from_period(a, p, n).unwrap();
        let useful = p % 2 == 0 && naive_pow(a, p / 2, n) != n - 1;
        if n % 2 == 1 {
            assert_eq!(got.is_some(), useful, "n={n} a={a} p={p}");
        } else if useful {
            assert!(got.is_some(), "n={n} a={a} p={p}");
        }
    }
}

#[test]
fn primality_and_powers_match_brute_force() {
    for n in 0u64..5000 {
        let prime = n >= 2 && (2..n).all(|d| n % d != 0);
        assert_eq!(is_prime(n), prime, "{n}");
        let power = (2..=n).find(|&b| (2..=13).any(|k| b.checked_pow(k) == Some(n)));
        assert_eq!(perfect_power_base(n), power.filter(|_| n >= 4), "{n}");
    }
}

#[test]
fn register_size_brackets_n_squared() {
    for n in 4u64..3000 {
        match choose_register_size(n) {
            Ok(c) => {
                let sq = n * n;
                assert!(sq < c.size && c.size < 2 * sq && c.size == 1 << c.exponent, "n={n}");
            }
            Err(e) => assert!(n.is_power_of_two(), "n={n}: {e}"),
        }
    }
}

/// Per window: the phase of `e^{2 pi i p y / N}` after removing the window's
/// multiple of `2 pi` is at most `pi p / N`, and scaled by `A - 1` it stays
/// within `[-pi, pi]`.
#[test]
fn window_phases_stay_small() {
    for (n, _, p) in unit_periods(50) {
        let size = choose_register_size(n).unwrap().size;
        for offset in 0..p {
            let a = preimage_count(size, p, offset);
            assert!(a > 1, "n={n} p={p}: A = {a}");
            for k in 0..p {
                for y in window_members(size, p, k).1 {
                    let off = p as i128 * y as i128 - k as i128 * size as i128;
                    assert!(2 * ((a as i128 - 1) * off).abs() <= size as i128);
                    let (base, scaled) = reduced_phases(y, k, size, p, a);
                    assert!(base.abs() <= PI * p as f64 / size as f64 + 1e-12);
                    assert!(scaled.abs() <= PI + 1e-12, "n={n} p={p} k={k} y={y}: {scaled}");
                }
            }
        }
    }
}

/// Every `y` in a window carries at least `4A/(pi^2 N) - eps`, and the
/// windows together at least `4/pi^2 - p eps`, for every residue class.
#[test]
fn window_lower_bounds_hold_for_small_moduli() {
    let mut seen = std::collections::BTreeSet::new();
    for (n, _, p) in unit_periods(50) {
        if !seen.insert((n, p)) {
            continue;
        }
        let config = choose_register_size(n).unwrap();
        let size = config.size;
        let mut modes: Vec<Mode> = (0..p).map(|offset| Mode::Conditional { offset }).collect();
        modes.push(Mode::Mixture);
        for mode in modes {
            let dist = build_distribution(config, p, mode).unwrap();
            let report = window_mass(&dist);
            assert!(report.total >= window_mass_lower_bound(size, p), "n={n} p={p} {mode:?}");
            if let Mode::Conditional { offset } = mode {
                let floor = per_y_lower_bound(size, preimage_count(size, p, offset));
                for w in &report.windows {
                    for &y in &w.ys {
                        assert!(dist.probs[y as usize] >= floor, "n={n} p={p} y={y}");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampling_is_seeded_and_lands_on_support(seed in any::<u64>(), pick in 0usize..1000) {
        let units = unit_periods(40);
        let (n, _, p) = units[pick % units.len()];
        let dist = build_distribution(choose_register_size(n).unwrap(), p, Mode::Mixture).unwrap();
        let y = sample_measurement(&dist, seed);
        prop_assert_eq!(y, sample_measurement(&dist, seed));
        prop_assert!(dist.probs[y as usize] > 0.0);
    }
}

//! Oracles shared by the integration tests. Nothing here calls back into the
//! library's own implementation of what it checks.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use shorcf::{convergents, semiconvergent, ContinuedFraction, Rational};

pub fn r(p: i64, q: i64) -> Rational {
    Rational::from_parts(p, q)
}

/// Random canonical continued fraction: `1..=max_len` terms, `|a_0| <= max_coeff`,
/// `1 <= a_i <= max_coeff` and a last term of at least 2.
pub fn random_canonical_cf<R: Rng>(rng: &mut R, max_len: usize, max_coeff: i64) -> ContinuedFraction {
    let len = rng.random_range(1..=max_len);
    let mut coeffs = vec![rng.random_range(-max_coeff..=max_coeff)];
    for i in 1..len {
        let lo = if i == len - 1 { 2 } else { 1 };
        coeffs.push(rng.random_range(lo..=max_coeff));
    }
    ContinuedFraction::from_i64s(&coeffs).expect("valid coefficients")
}

/// Value by the plain nested definition, evaluated from the back.
pub fn nested_value(coeffs: &[i64]) -> Rational {
    let (last, rest) = coeffs.split_last().expect("non-empty");
    let mut v = Rational::from_integer(*last);
    for a in rest.iter().rev() {
        v = Rational::from_integer(*a) + v.recip();
    }
    v
}

fn sign(n: usize) -> BigInt {
    if n.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Every violated classical identity or inequality for `cf`, as text.
///
/// Two boundary cases hold with equality instead of strictly: bounds against
/// the next convergent at `k = N-1` (where `x` *is* `x_N`), and
/// `1/(2 q_0 q_1) = 1/((q_0 + q_1) q_0)` when `a_1 = 1`.
pub fn theorem_violations(cf: &ContinuedFraction) -> Vec<String> {
    let mut bad = Vec::new();
    let table = convergents(cf);
    let last = table.last_index();
    let a = table.coefficients();
    let p = table.numerators();
    let q = table.denominators();
    let xs: Vec<Rational> = (0..=last)
        .map(|n| Rational::from_parts(p[n].clone(), q[n].clone()))
        .collect();
    let x = cf.value();
    let mut fail = |msg: String| bad.push(format!("{cf}: {msg}"));

    for n in 0..=last {
        // the recursion agrees with evaluating the prefix directly
        let direct = nested_value(
            &a[..=n]
                .iter()
                .map(|c| i64::try_from(c).expect("small coefficient"))
                .collect::<Vec<_>>(),
        );
        if direct != xs[n] {
            fail(format!("x_{n} = {} but prefix value {direct}", xs[n]));
        }
        if !p[n].gcd(&q[n]).is_one() {
            fail(format!("gcd(p_{n}, q_{n}) != 1"));
        }
        if q[n] < BigInt::from(n) {
            fail(format!("q_{n} = {} < {n}", q[n]));
        }
        if n > 3 && q[n] <= BigInt::from(n) {
            fail(format!("q_{n} = {} <= {n}", q[n]));
        }
        // q_n^2 >= 2^(n-1), written without fractions
        if BigInt::from(2) * &q[n] * &q[n] < (BigInt::one() << n) {
            fail(format!("q_{n}^2 < 2^(n-1)"));
        }
        if n >= 2 && q[n] <= q[n - 1] {
            fail(format!("q_{n} <= q_{}", n - 1));
        }
    }

    let mut partial = Rational::from_integer(a[0].clone());
    for n in 1..=last {
        let det = &p[n] * &q[n - 1] - &p[n - 1] * &q[n];
        if det != sign(n - 1) {
            fail(format!("p_n q_(n-1) - p_(n-1) q_n = {det} at n = {n}"));
        }
        partial = partial + Rational::from_parts(sign(n - 1), &q[n] * &q[n - 1]);
        if partial != xs[n] {
            fail(format!("alternating sum differs from x_{n}"));
        }
        if n >= 2 {
            let det2 = &p[n] * &q[n - 2] - &p[n - 2] * &q[n];
            if det2 != sign(n) * &a[n] {
                fail(format!("p_n q_(n-2) - p_(n-2) q_n = {det2} at n = {n}"));
            }
            let increasing = xs[n] > xs[n - 2];
            if increasing != (n % 2 == 0) {
                fail(format!("x_{n} vs x_{} has the wrong order", n - 2));
            }
        }
        let dist_prev = xs[n].distance(&xs[n - 1]);
        if xs[n].distance(&x) >= dist_prev {
            fail(format!("|x - x_{n}| >= |x_(n-1) - x_{n}|"));
        }
        for m in n + 1..=last {
            if xs[m].distance(&xs[n]) >= dist_prev {
                fail(format!("|x_{m} - x_{n}| >= |x_(n-1) - x_{n}|"));
            }
        }
    }

    for i in (0..=last).step_by(2) {
        for j in (1..=last).step_by(2) {
            if xs[i] >= xs[j] {
                fail(format!("even x_{i} >= odd x_{j}"));
            }
        }
        if i < last && xs[i] >= x {
            fail(format!("x_{i} >= x"));
        }
    }
    for j in (1..last).step_by(2) {
        if xs[j] <= x {
            fail(format!("x_{j} <= x"));
        }
    }

    for k in 0..last {
        let err = x.distance(&xs[k]);
        let qq = &q[k] * &q[k + 1];
        let upper = Rational::from_parts(1, qq.clone());
        let lower = Rational::from_parts(1, (&q[k] + &q[k + 1]) * &q[k]);
        let loosest = Rational::from_parts(1, BigInt::from(2) * &qq);
        // the two lower bounds coincide when q_(k+1) = q_k, i.e. k = 0 and a_1 = 1
        let outer_ok = if q[k + 1] == q[k] {
            loosest == lower
        } else {
            loosest < lower
        };
        if !(outer_ok && lower < err) {
            fail(format!("lower bound fails at k = {k}"));
        }
        let upper_ok = if k + 1 == last { err == upper } else { err < upper };
        if !upper_ok {
            fail(format!("upper bound fails at k = {k}"));
        }
        let to_next = xs[k + 1].distance(&xs[k]);
        let next_ok = if k + 1 == last { err == to_next } else { err < to_next };
        if !next_ok {
            fail(format!("|x - x_{k}| vs |x_(k+1) - x_{k}| fails"));
        }
    }

    // semiconvergents move monotonically toward x_(n+2)
    for n in -1..(last as isize - 1) {
        let top = &a[(n + 2) as usize];
        let mut prev: Option<Rational> = None;
        let mut t = BigInt::one();
        while &t <= top {
            let s = semiconvergent(&table, n, &t).expect("in range");
            if let Some(pv) = &prev {
                let up = &s > pv;
                if up != (n.rem_euclid(2) == 0) {
                    fail(format!("semiconvergents at n = {n} not monotone"));
                }
            }
            prev = Some(s);
            t += 1;
        }
        if prev.as_ref() != Some(&xs[(n + 2) as usize]) {
            fail(format!("x_(n,a_(n+2)) != x_(n+2) at n = {n}"));
        }
    }
    bad
}

/// `|sum_{j<A} w^j|^2 / (N A)` with `w = e^{2 pi i p y / N}`, term by term.
pub fn direct_prob(y: u64, size: u64, p: u64, a: u64, roots: &[Complex64]) -> f64 {
    let step = (p as u128 * y as u128 % size as u128) as u64;
    let mut sum = Complex64::zero();
    let mut idx = 0u64;
    for _ in 0..a {
        sum += roots[idx as usize];
        idx = (idx + step) % size;
    }
    sum.norm_sqr() / (size as f64 * a as f64)
}

/// `e^{2 pi i k / N}` for `k < N`.
pub fn roots_of_unity(size: u64) -> Vec<Complex64> {
    (0..size)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / size as f64))
        .collect()
}

/// Every `t < N` with `|t p - k N| <= p/2`, by scanning.
pub fn window_representatives(size: u64, p: u64, k: u64) -> Vec<u64> {
    let kn = k as i128 * size as i128;
    (0..size)
        .filter(|&t| 2 * (t as i128 * p as i128 - kn).abs() <= p as i128)
        .collect()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Order of `a` mod `n` by repeated multiplication.
pub fn naive_order(a: u64, n: u64) -> u64 {
    let mut v = a % n;
    let mut k = 1;
    while v != 1 {
        v = v * a % n;
        k += 1;
    }
    k
}

/// `(n, p)` pairs for every unit `a` in `2..n` with a usable register
/// (`n >= 4`, not a power of two), `n <= limit`.
pub fn unit_periods(limit: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for n in 4..=limit {
        if n.is_power_of_two() {
            continue;
        }
        for a in 2..n {
            if gcd(a, n) == 1 {
                out.push((n, a, naive_order(a, n)));
            }
        }
    }
    out
}

//! Modular exponentiation, brute-force multiplicative order and the
//! period-to-factor step. Everything here is sized for desk-scale moduli;
//! intermediate products go through `u128`.

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};

/// `a^x mod n` by square-and-multiply.
pub fn mod_exp(a: u64, mut x: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let n128 = n as u128;
    let mut base = (a % n) as u128;
    let mut acc = 1u128 % n128;
    while x > 0 {
        if x & 1 == 1 {
            acc = acc * base % n128;
        }
        base = base * base % n128;
        x >>= 1;
    }
    Ok(acc as u64)
}

/// Smallest `p >= 1` with `a^p = 1 (mod n)`, by repeated multiplication.
pub fn multiplicative_order(a: u64, n: u64) -> Result<u64> {
    if n < 2 || a == 0 || a >= n {
        return Err(Error::BaseOutOfRange { a, n });
    }
    let g = a.gcd(&n);
    if g != 1 {
        return Err(Error::NotCoprime { a, n, gcd: g });
    }
    let (a128, n128) = (a as u128, n as u128);
    let mut acc = a128;
    let mut p = 1;
    while acc != 1 {
        acc = acc * a128 % n128;
        p += 1;
    }
    Ok(p)
}

/// Number of `1 <= z <= n` coprime to `n`, counted directly.
pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|z| z.gcd(&n) == 1).count() as u64
}

/// Trial division up to `sqrt(n)`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let limit = n.sqrt();
    (3..=limit).step_by(2).all(|d| !n.is_multiple_of(d))
}

/// If `n = b^k` for some `k >= 2`, returns the smallest such base `b`.
pub fn perfect_power_base(n: u64) -> Option<u64> {
    if n < 4 {
        return None;
    }
    let max_k = 64 - n.leading_zeros();
    (2..=max_k).rev().find_map(|k| {
        let b = n.nth_root(k);
        (b >= 2 && b.checked_pow(k) == Some(n)).then_some(b)
    })
}

/// Splits `n` using an even period `p` of `a`: one of
/// `gcd(a^{p/2} - 1, n)`, `gcd(a^{p/2} + 1, n)` is a proper divisor unless
/// `a^{p/2} = -1 (mod n)`.
///
/// Returns `Ok(None)` for odd `p` or when both gcds are trivial, and an
/// error when `a^p != 1 (mod n)`. The returned pair is ordered `f1 <= f2`.
pub fn factor_from_period(a: u64, p: u64, n: u64) -> Result<Option<(u64, u64)>> {
    let residue = mod_exp(a, p, n)?;
    if residue != 1 % n {
        return Err(Error::NotAPeriod { a, p, n, residue });
    }
    if p % 2 == 1 {
        return Ok(None);
    }
    let half = mod_exp(a, p / 2, n)?;
    let minus = (half + n - 1) % n;
    let plus = (half + 1) % n;
    let split = [minus, plus]
        .into_iter()
        .map(|v| v.gcd(&n))
        .find(|&g| 1 < g && g < n)
        .map(|g| {
            let (f1, f2) = (g, n / g);
            (f1.min(f2), f1.max(f2))
        });
    Ok(split)
}

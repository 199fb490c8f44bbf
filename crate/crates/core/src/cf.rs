//! Finite regular continued fractions `[a0; a1, ..., aN]`.
//!
//! Construction from rationals (Euclid), evaluation, canonical form,
//! convergents `p_n/q_n`, semiconvergents and the complete-quotient
//! expansion of a (rational stand-in for a) real number.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Coefficients `a0, a1, ..., aN` with `a0` any integer and `ai >= 1` for
/// `i >= 1`. The canonical form additionally ends in `aN >= 2` when `N >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    coeffs: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Validates the coefficient list. The result need not be canonical.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyContinuedFraction);
        }
        if let Some((index, value)) = coeffs.iter().enumerate().skip(1).find(|(_, a)| !a.is_positive()) {
            return Err(Error::NonPositiveCoefficient {
                index,
                value: value.to_string(),
            });
        }
        Ok(ContinuedFraction { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The index `N` of the last coefficient.
    pub fn depth(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_canonical(&self) -> bool {
        self.coeffs.len() == 1 || self.coeffs.last().is_some_and(|a| *a >= BigInt::from(2))
    }

    /// `[a0; a1, ..., an]`. Panics if `n > N`.
    pub fn prefix(&self, n: usize) -> ContinuedFraction {
        ContinuedFraction {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn value(&self) -> Rational {
        cf_to_rational(self)
    }

    pub fn canonical(&self) -> ContinuedFraction {
        fold_trailing_one(self.coeffs.clone())
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.coeffs[0])?;
        for (i, a) in self.coeffs.iter().enumerate().skip(1) {
            let sep = if i == 1 { "; " } else { ", " };
            write!(f, "{sep}{a}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Euclidean expansion. Always canonical: the last quotient of a Euclidean
/// run with `N >= 1` is at least 2.
pub fn cf_from_rational(r: &Rational) -> ContinuedFraction {
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let mut coeffs = Vec::new();
    loop {
        let (a, rem) = num.div_mod_floor(&den);
        coeffs.push(a);
        if rem.is_zero() {
            break;
        }
        num = den;
        den = rem;
    }
    ContinuedFraction { coeffs }
}

/// Evaluates back to front: `[.., a_{N-1}, aN] = [.., a_{N-1} + 1/aN]`.
pub fn cf_to_rational(cf: &ContinuedFraction) -> Rational {
    let mut iter = cf.coeffs.iter().rev();
    let last = iter.next().expect("continued fraction is non-empty");
    let mut acc = Rational::from_integer(last.clone());
    for a in iter {
        acc = Rational::from_integer(a.clone()) + acc.recip();
    }
    acc
}

/// Validates `coeffs` and folds a trailing `aN = 1` into `a_{N-1} + 1`.
pub fn canonicalize(coeffs: &[BigInt]) -> Result<ContinuedFraction> {
    let cf = ContinuedFraction::new(coeffs.to_vec())?;
    Ok(cf.canonical())
}

fn fold_trailing_one(mut coeffs: Vec<BigInt>) -> ContinuedFraction {
    if coeffs.len() >= 2 && coeffs.last().is_some_and(|a| a.is_one()) {
        coeffs.pop();
        *coeffs.last_mut().unwrap() += 1;
    }
    ContinuedFraction { coeffs }
}

/// Convergents `p_n/q_n` for `n = 0..=N`, plus the virtual entry
/// `p_{-1} = 1, q_{-1} = 0` reachable through [`ConvergentTable::p`] and
/// [`ConvergentTable::q`] with index `-1`. Iteration and [`entries`] never
/// include the virtual entry.
///
/// [`entries`]: ConvergentTable::entries
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentTable {
    coeffs: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl ConvergentTable {
    /// Number of real entries, `N + 1`.
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `N`
    pub fn last_index(&self) -> usize {
        self.p.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check(&self, n: isize) -> Result<()> {
        if n < -1 || n > self.last_index() as isize {
            return Err(Error::IndexOutOfRange {
                index: n,
                last: self.last_index(),
            });
        }
        Ok(())
    }

    /// `p_n` for `-1 <= n <= N`.
    pub fn p(&self, n: isize) -> Result<BigInt> {
        self.check(n)?;
        Ok(if n == -1 {
            BigInt::one()
        } else {
            self.p[n as usize].clone()
        })
    }

    /// `q_n` for `-1 <= n <= N`.
    pub fn q(&self, n: isize) -> Result<BigInt> {
        self.check(n)?;
        Ok(if n == -1 {
            BigInt::zero()
        } else {
            self.q[n as usize].clone()
        })
    }

    /// Real entries `(p_n, q_n)`, `n = 0..=N`.
    pub fn entries(&self) -> impl Iterator<Item = (&BigInt, &BigInt)> + '_ {
        self.p.iter().zip(self.q.iter())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.p
    }

    pub fn denominators(&self) -> &[BigInt] {
        &self.q
    }

    /// `p_n/q_n` as a rational. Panics if `n > N`.
    pub fn convergent(&self, n: usize) -> Rational {
        Rational::from_parts(self.p[n].clone(), self.q[n].clone())
    }

    pub fn values(&self) -> Vec<Rational> {
        (0..self.len()).map(|n| self.convergent(n)).collect()
    }

    /// Index of the convergent equal to `r`, if any.
    pub fn position(&self, r: &Rational) -> Option<usize> {
        self.entries().position(|(p, q)| p == r.numer() && q == r.denom())
    }
}

/// Recursion `p_n = a_n p_{n-1} + p_{n-2}`, `q_n = a_n q_{n-1} + q_{n-2}`
/// seeded with `(p_{-2}, q_{-2}) = (0, 1)` and `(p_{-1}, q_{-1}) = (1, 0)`.
pub fn convergents(cf: &ContinuedFraction) -> ConvergentTable {
    let len = cf.coeffs.len();
    let mut p = Vec::with_capacity(len);
    let mut q = Vec::with_capacity(len);
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for a in &cf.coeffs {
        let pn = a * &p1 + &p2;
        let qn = a * &q1 + &q2;
        p.push(pn.clone());
        q.push(qn.clone());
        p2 = std::mem::replace(&mut p1, pn);
        q2 = std::mem::replace(&mut q1, qn);
    }
    ConvergentTable {
        coeffs: cf.coeffs.clone(),
        p,
        q,
    }
}

/// `x_{n,t} = (t p_{n+1} + p_n) / (t q_{n+1} + q_n)` for `-1 <= n <= N-1`.
///
/// `t` must lie in `1..=a_{n+2}` when `a_{n+2}` exists; for `n = N-1` any
/// `t >= 1` is accepted.
pub fn semiconvergent(table: &ConvergentTable, n: isize, t: &BigInt) -> Result<Rational> {
    if n < -1 || n + 1 > table.last_index() as isize {
        return Err(Error::IndexOutOfRange {
            index: n,
            last: table.last_index(),
        });
    }
    let upper = table.coeffs.get((n + 2) as usize);
    if !t.is_positive() || upper.is_some_and(|a| t > a) {
        return Err(Error::WeightOutOfRange {
            t: t.to_string(),
            max: upper.map_or_else(|| "inf".to_string(), |a| a.to_string()),
        });
    }
    let num = t * table.p(n + 1)? + table.p(n)?;
    let den = t * table.q(n + 1)? + table.q(n)?;
    Ok(Rational::from_parts(num, den))
}

/// One semiconvergent with its indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semiconvergent {
    pub n: isize,
    pub t: BigInt,
    pub value: Rational,
}

/// Every `x_{n,t}` with `-1 <= n <= N-2` and `1 <= t <= a_{n+2}`. The
/// `t = a_{n+2}` members coincide with the convergents `x_{n+2}`.
pub fn semiconvergents(table: &ConvergentTable) -> Vec<Semiconvergent> {
    let mut out = Vec::new();
    for n in -1..(table.last_index() as isize - 1) {
        let upper = &table.coeffs[(n + 2) as usize];
        let mut t = BigInt::one();
        while &t <= upper {
            let value = semiconvergent(table, n, &t).expect("indices in range");
            out.push(Semiconvergent { n, t: t.clone(), value });
            t += 1;
        }
    }
    out
}

/// `(a+c)/(b+d)` on the lowest-terms representatives of `x = a/b`, `y = c/d`.
pub fn mediant(x: &Rational, y: &Rational) -> Rational {
    Rational::from_parts(x.numer() + y.numer(), x.denom() + y.denom())
}

/// Complete quotients `alpha_i` and their floors `b_i`:
/// `alpha_0 = x`, `alpha_i = 1/(alpha_{i-1} - b_{i-1})`, `b_i = floor(alpha_i)`.
/// Ends after the first integral `alpha_i`.
pub struct CompleteQuotients {
    next: Option<Rational>,
}

impl Iterator for CompleteQuotients {
    type Item = (BigInt, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        let alpha = self.next.take()?;
        let b = alpha.floor();
        let frac = &alpha - &Rational::from_integer(b.clone());
        if !frac.is_zero() {
            self.next = Some(frac.recip());
        }
        Some((b, alpha))
    }
}

pub fn complete_quotients(x: &Rational) -> CompleteQuotients {
    CompleteQuotients { next: Some(x.clone()) }
}

/// First `max_terms` coefficients of the regular expansion of `x` (fewer if
/// the expansion ends earlier). `max_terms = 0` is treated as 1. A
/// truncated result may end in 1 and so need not be canonical.
pub fn cf_expand_real(x: &Rational, max_terms: usize) -> ContinuedFraction {
    let coeffs = complete_quotients(x).take(max_terms.max(1)).map(|(b, _)| b).collect();
    ContinuedFraction { coeffs }
}

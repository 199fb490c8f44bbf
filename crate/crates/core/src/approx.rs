//! Best rational approximations of an exact rational target.
//!
//! A fraction `p/q` is a best approximation of the first kind of `x` when
//! every other fraction `c/d` with `d <= q` is strictly farther from `x`,
//! and of the second kind when every such `c/d` has strictly larger
//! `|d x - c|`. Ties disqualify.
//!
//! For a fixed denominator `d` the closest numerators to `d x` are
//! `floor(d x)` and `floor(d x) + 1`, so competitor searches only scan the
//! window `floor(d x) - 1 ..= floor(d x) + 2`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cf::{cf_from_rational, convergents, ConvergentTable};
use crate::rational::{cmp_fractions, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxKind {
    First,
    Second,
}

/// Outcome of [`classify_approximation`].
///
/// `witness` is set iff some kind fails. When the first kind fails the
/// witness is a first-kind competitor, which by the same scaling argument
/// also defeats the second kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxVerdict {
    pub is_first_kind: bool,
    pub is_second_kind: bool,
    pub witness: Option<Rational>,
}

/// `x = num/den` split into integer parts for the window scans.
struct Target<'a> {
    num: &'a BigInt,
    den: &'a BigInt,
}

impl<'a> Target<'a> {
    fn new(x: &'a Rational) -> Self {
        Target {
            num: x.numer(),
            den: x.denom(),
        }
    }

    /// `|d num - c den|`, i.e. `den * |d x - c|`.
    fn scaled_error(&self, c: &BigInt, d: &BigInt) -> BigInt {
        (d * self.num - c * self.den).abs()
    }

    fn window(&self, d: &BigInt) -> impl Iterator<Item = BigInt> {
        let base = (d * self.num).div_floor(self.den);
        (-1..=2).map(move |off| &base + off)
    }
}

/// Exhaustive classification of `cand` against every `c/d` with `d <= q`.
pub fn classify_approximation(x: &Rational, cand: &Rational) -> ApproxVerdict {
    let target = Target::new(x);
    let (p, q) = (cand.numer(), cand.denom());
    let cand_err = target.scaled_error(p, q);

    // (scaled error, d, c) of the strongest competitor per kind
    let mut first_witness: Option<(BigInt, BigInt, BigInt)> = None;
    let mut second_witness: Option<(BigInt, BigInt, BigInt)> = None;

    let mut d = BigInt::one();
    while &d <= q {
        for c in target.window(&d) {
            if Rational::from_parts(c.clone(), d.clone()) == *cand {
                continue;
            }
            let err = target.scaled_error(&c, &d);
            // |x - c/d| <= |x - p/q|  <=>  err / d <= cand_err / q
            if cmp_fractions(&err, &d, &cand_err, q) != Ordering::Greater {
                let better = first_witness
                    .as_ref()
                    .is_none_or(|(e, wd, _)| cmp_fractions(&err, &d, e, wd) == Ordering::Less);
                if better {
                    first_witness = Some((err.clone(), d.clone(), c.clone()));
                }
            }
            if err <= cand_err {
                let better = second_witness.as_ref().is_none_or(|(e, _, _)| err < *e);
                if better {
                    second_witness = Some((err, d.clone(), c));
                }
            }
        }
        d += 1;
    }

    let witness = first_witness
        .as_ref()
        .or(second_witness.as_ref())
        .map(|(_, d, c)| Rational::from_parts(c.clone(), d.clone()));
    ApproxVerdict {
        is_first_kind: first_witness.is_none(),
        is_second_kind: second_witness.is_none(),
        witness,
    }
}

/// All best approximations of `x` of the given kind with denominator at
/// most `d_max`, sorted by denominator.
///
/// Sweeps `d = 1..=d_max` once, keeping the smallest error seen at smaller
/// denominators; a reduced `c/d` qualifies iff it strictly beats that
/// running minimum and every other numerator at the same `d`.
pub fn best_approx_oracle(x: &Rational, d_max: u64, kind: ApproxKind) -> Vec<Rational> {
    let target = Target::new(x);
    let mut out = Vec::new();
    // running minimum over d' < d as (scaled error, d'); second kind ignores d'
    let mut best_prev: Option<(BigInt, BigInt)> = None;

    for d in 1..=d_max {
        let d = BigInt::from(d);
        let row: Vec<(BigInt, BigInt)> = target
            .window(&d)
            .map(|c| {
                let e = target.scaled_error(&c, &d);
                (c, e)
            })
            .collect();

        let less = |e1: &BigInt, d1: &BigInt, e2: &BigInt, d2: &BigInt| match kind {
            ApproxKind::First => cmp_fractions(e1, d1, e2, d2) == Ordering::Less,
            ApproxKind::Second => e1 < e2,
        };

        for (c, e) in &row {
            if !c.gcd(&d).is_one() {
                continue;
            }
            let beats_prev = best_prev.as_ref().is_none_or(|(pe, pd)| less(e, &d, pe, pd));
            let beats_row = row.iter().filter(|(c2, _)| c2 != c).all(|(_, e2)| less(e, &d, e2, &d));
            if beats_prev && beats_row {
                out.push(Rational::from_parts(c.clone(), d.clone()));
            }
        }

        let row_min = row.iter().map(|(_, e)| e).min().expect("window is non-empty");
        let replace = best_prev.as_ref().is_none_or(|(pe, pd)| less(row_min, &d, pe, pd));
        if replace {
            best_prev = Some((row_min.clone(), d.clone()));
        }
    }
    out
}

/// Result of the `|x - a/b| < 1/(2b^2)` convergent criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreCheck {
    pub hypothesis_holds: bool,
    pub convergent_index: Option<usize>,
}

/// Tests the criterion exactly and looks `cand` up among the convergents
/// of `x`. When the hypothesis holds the lookup always succeeds.
pub fn legendre_is_convergent(x: &Rational, cand: &Rational) -> LegendreCheck {
    let table = convergents(&cf_from_rational(x));
    legendre_with_table(x, cand, &table)
}

/// [`legendre_is_convergent`] against a precomputed table of `x`.
pub fn legendre_with_table(x: &Rational, cand: &Rational, table: &ConvergentTable) -> LegendreCheck {
    LegendreCheck {
        hypothesis_holds: legendre_hypothesis(x, cand),
        convergent_index: table.position(cand),
    }
}

/// `2 b^2 |x - a/b| < 1`, exact.
pub fn legendre_hypothesis(x: &Rational, cand: &Rational) -> bool {
    let b = cand.denom();
    let lhs = x.distance(cand) * Rational::from_integer(b * b * 2);
    lhs < Rational::one()
}

/// A convergent `p_n/q_n` together with its index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedConvergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: usize,
}

/// The last convergent of `x` whose denominator is strictly below `bound`.
/// Falls back to index 0 (`q0 = 1`) when nothing qualifies.
pub fn best_denominator_below(x: &Rational, bound: &BigInt) -> IndexedConvergent {
    let table = convergents(&cf_from_rational(x));
    let index = table.denominators().iter().rposition(|q| q < bound).unwrap_or(0);
    IndexedConvergent {
        p: table.numerators()[index].clone(),
        q: table.denominators()[index].clone(),
        index,
    }
}

//! Exact rational arithmetic helpers on top of `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q`. The denominator must be positive.
pub fn parse_q(s: &str) -> Option<Q> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if d.starts_with('-') || d.starts_with('+') || n.is_empty() || d.is_empty() {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Q>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Multiplies by `scale` and returns the integer, which must fit in an i64.
pub fn scaled_i64(x: &Q, scale: &BigInt) -> i64 {
    let y = x * Q::from_integer(scale.clone());
    debug_assert!(y.is_integer());
    y.to_integer().to_i64().expect("scaled weight overflows i64")
}

pub fn max_abs<'a>(it: impl IntoIterator<Item = &'a Q>) -> Q {
    it.into_iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

/// Rational with denominator at most `max_den` closest to `num/den`.
/// Returns candidates ordered by distance (closest first).
pub fn nearest_fractions(num: i128, den: i128, max_den: i64, keep: usize) -> Vec<Q> {
    let x = Q::new(BigInt::from(num), BigInt::from(den));
    let mut cands: Vec<Q> = Vec::new();
    for d in 1..=max_den.max(1) {
        let t = num * d as i128;
        let fl = Integer::div_floor(&t, &den);
        for p in [fl, fl + 1] {
            cands.push(Q::new(BigInt::from(p), BigInt::from(d)));
        }
    }
    cands.sort();
    cands.dedup();
    cands.sort_by(|a, b| (a - &x).abs().cmp(&(b - &x).abs()).then(a.cmp(b)));
    cands.truncate(keep);
    cands
}

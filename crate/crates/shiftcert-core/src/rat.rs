//! Arbitrary-precision rational scalars.
//!
//! `Rat` is always stored in lowest terms with a positive denominator
//! (enforced by `num-rational`), so arithmetic never rounds.

use alloc::format;
use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational.  Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"`.  Decimals are rejected so inexact input can
/// never slip in.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.contains('.') {
        return Err(format!("`{s}`: decimal literals are not accepted, use p/q"));
    }
    s.parse::<Rat>().map_err(|e| format!("`{s}`: {e}"))
}

/// Render as `"p/q"`, or `"p"` when the denominator is 1.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Exact square root, if the rational is a perfect square.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Sign as -1, 0, +1.
pub fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("24/35").unwrap(), rat(24, 35));
        assert_eq!(parse_rat("-3").unwrap(), int(-3));
        assert_eq!(fmt_rat(&rat(200, 297)), "200/297");
        assert_eq!(fmt_rat(&rat(8, 4)), "2");
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        assert_eq!(sqrt_exact(&rat(0, 1)), Some(int(0)));
        assert_eq!(sqrt_exact(&rat(-4, 1)), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}

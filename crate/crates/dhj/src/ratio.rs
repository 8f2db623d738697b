//! Exact rational arithmetic helpers.
//!
//! All densities, thresholds and recursion values in this crate are exact
//! `BigRational`s; nothing on a decision path ever goes through floating
//! point.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// `base^exp` as an exact rational, supporting negative exponents.
pub fn q_pow(base: &Q, exp: i64) -> Q {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        num::pow::pow(base.clone(), (-exp) as usize).recip()
    }
}

pub fn big_pow(base: u64, exp: u64) -> BigInt {
    num::pow::pow(BigInt::from(base), exp as usize)
}

/// Integer ceiling of an exact rational.
pub fn q_ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn q_floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// Parses "p/q" or "p" with optional sign; rejects zero denominators.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = |msg: &str| Error::ParameterOutOfRange(format!("rational '{s}': {msg}"));
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den_s.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Q::new(num, den))
}

/// Renders in lowest terms as "p/q" ("p" when the denominator is 1).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Short display for very large quantities: exact when small, otherwise a
/// leading-digits preview with a decimal exponent.
pub fn preview(x: &BigInt, digit_cap: usize) -> String {
    let s = x.magnitude().to_string();
    if s.len() <= digit_cap {
        return x.to_string();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let head = &s[..3.min(s.len())];
    let mantissa = format!("{}.{}", &head[..1], &head[1..]);
    format!("{sign}{}e{}", mantissa, s.len() - 1)
}

/// Approximate f64 value for display only.
pub fn approx(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["1/2", "3", "7/3", "0", "-2/5"] {
            let v = parse_q(s).unwrap();
            assert_eq!(fmt_q(&v), s);
        }
        assert_eq!(fmt_q(&parse_q("2/4").unwrap()), "1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn pow_handles_negative_exponents() {
        assert_eq!(q_pow(&q(3, 2), -2), q(4, 9));
        assert_eq!(q_pow(&q(3, 1), 4), q_int(81));
    }

    #[test]
    fn ceiling_is_exact() {
        assert_eq!(q_ceil(&q(81, 10)), BigInt::from(9));
        assert_eq!(q_ceil(&q(8, 2)), BigInt::from(4));
        assert_eq!(q_ceil(&q(-3, 2)), BigInt::from(-1));
    }

    #[test]
    fn preview_large_numbers() {
        let big = big_pow(3, 1000);
        let p = preview(&big, 40);
        assert!(p.ends_with("e477"));
        assert_eq!(preview(&BigInt::from(192), 40), "192");
    }
}

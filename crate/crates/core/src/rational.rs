//! Exact rationals.
//!
//! `num_rational::BigRational` already keeps values in lowest terms with a
//! positive denominator, so it is used directly. This module adds the few
//! helpers the rest of the crate needs: squareness, `"num/den"` text form and
//! small constructors.

use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct RationalParseError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow(q: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Exact integer square root of a non-negative integer, if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// True iff `q` is the square of a rational number (0 counts as a square).
pub fn is_square_rational(q: &Rational) -> bool {
    if q.is_zero() {
        return true;
    }
    if q.is_negative() {
        return false;
    }
    exact_isqrt(q.numer()).is_some() && exact_isqrt(q.denom()).is_some()
}

/// Rational square root, when it exists; the non-negative root is returned.
pub fn sqrt_rational(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(Rational::new(n, d))
}

/// `"num/den"` (always with the slash, even for integers).
pub fn to_fraction_string(q: &Rational) -> String {
    let mut s = q.numer().to_string();
    s.push('/');
    s.push_str(&q.denom().to_string());
    s
}

/// Accepts `"n"`, `"n/d"` and surrounding whitespace; rejects a zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        assert!(is_square_rational(&frac(4, 9)));
        assert!(!is_square_rational(&int(5)));
        assert!(is_square_rational(&int(0)));
        assert!(!is_square_rational(&int(-4)));
        assert!(!is_square_rational(&frac(4, 8)));
        assert!(is_square_rational(&frac(8, 18)));
        assert_eq!(sqrt_rational(&frac(8, 18)), Some(frac(2, 3)));
    }

    #[test]
    fn text_round_trip() {
        for q in [frac(-7, 3), int(0), int(12), frac(1, 2)] {
            assert_eq!(parse_rational(&to_fraction_string(&q)).unwrap(), q);
        }
        assert_eq!(parse_rational(" 6/4 ").unwrap(), frac(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}

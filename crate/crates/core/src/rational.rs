//! Arbitrary-precision rational numbers and their text form.
//!
//! Rationals are always stored reduced with a positive denominator; the text
//! form is `"n"` for integers and `"n/d"` otherwise, and is what the JSON
//! interchange format uses for every coefficient.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed};

use crate::error::{Error, Result};

/// Exact rational scalar. Reduced, denominator positive.
pub type Rational = BigRational;

/// Rational from a machine integer.
#[must_use]
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics if `den == 0`.
#[must_use]
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"n"` or `"n/d"` with optional sign on `n` and `d > 0`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("bad rational literal {s:?}"));
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num_str.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match den_str {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.sign() != Sign::Plus {
        return Err(Error::Invalid(format!(
            "denominator must be positive in {s:?}"
        )));
    }
    Ok(Rational::new(num, den))
}

/// Format as `"n"` or `"n/d"`.
#[must_use]
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Height of a single rational: `max(|num|, den)`.
#[must_use]
pub fn rational_height(r: &Rational) -> BigInt {
    let n = r.numer().abs();
    let d = r.denom().clone();
    if n >= d {
        n
    } else {
        d
    }
}

/// True if `r` is an integer.
#[must_use]
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for s in ["0", "7", "-7", "3/2", "-3/2", "22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("-6/3").unwrap()), "-2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "x", "1/0", "1/-2", "1/2/3", "1.5"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn height_takes_max() {
        assert_eq!(rational_height(&rat(3, 2)), BigInt::from(3));
        assert_eq!(rational_height(&rat(-1, 5)), BigInt::from(5));
        assert_eq!(rational_height(&rat_int(0)), BigInt::from(1));
    }
}

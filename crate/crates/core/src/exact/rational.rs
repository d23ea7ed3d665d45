//! Rational scalars and their canonical text forms.
//!
//! [`Rational`] is `num_rational::BigRational`, which normalizes after every
//! operation (positive denominator, coprime parts). Its `Display` already
//! produces the canonical `num/den` form, or `num` alone for integers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or `"num"`, with optional surrounding whitespace.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::MalformedRational(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `num/den` encoding (just `num` when the denominator is 1).
pub fn canonical(value: &Rational) -> String {
    value.to_string()
}

pub(crate) fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

/// Round to the nearest integer, ties to even.
pub fn round_half_even(value: &Rational) -> BigInt {
    let floor = value.floor();
    let frac = value - &floor;
    let half = ratio(1, 2);
    let base = floor.to_integer();
    match frac.cmp(&half) {
        Ordering::Less => base,
        Ordering::Greater => base + 1,
        Ordering::Equal => {
            if base.is_even() {
                base
            } else {
                base + 1
            }
        }
    }
}

/// Round to `places` digits after the decimal point, ties to even.
pub fn round_to_places(value: &Rational, places: u32) -> Rational {
    let scale = pow10(places);
    let scaled = value * Rational::from_integer(scale.clone());
    Rational::new(round_half_even(&scaled), scale)
}

/// Decimal exponent `e` with `10^e <= |value| < 10^(e+1)`. `value` must be nonzero.
fn decimal_exponent(value: &Rational) -> i64 {
    let abs = value.abs();
    let bits = abs.numer().bits() as i64 - abs.denom().bits() as i64;
    // log10(2) ~ 0.30103; the estimate is within one of the true exponent
    let mut e = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        if abs < power_of_ten(e) {
            e -= 1;
        } else if abs >= power_of_ten(e + 1) {
            e += 1;
        } else {
            return e;
        }
    }
}

fn power_of_ten(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow10(e as u32))
    } else {
        Rational::new(BigInt::one(), pow10((-e) as u32))
    }
}

/// Positional decimal rendering with `digits` significant digits,
/// rounded half-even. Trailing zeros are kept, so `1/4` at 10 digits is
/// `0.2500000000`.
pub fn format_significant(value: &Rational, digits: u32) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if value.is_zero() {
        return if digits > 1 { format!("0.{}", "0".repeat(digits as usize - 1)) } else { "0".to_string() };
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let mut e = decimal_exponent(&abs);
    let shift = digits as i64 - 1 - e;
    let mut mantissa = round_half_even(&(abs * power_of_ten(shift)));
    if mantissa >= pow10(digits) {
        mantissa /= 10;
        e += 1;
    }
    let body = mantissa.to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(&body);
    } else {
        let int_len = (e + 1) as usize;
        if int_len >= body.len() {
            out.push_str(&body);
            out.push_str(&"0".repeat(int_len - body.len()));
        } else {
            out.push_str(&body[..int_len]);
            out.push('.');
            out.push_str(&body[int_len..]);
        }
    }
    out
}

/// Parses a plain decimal literal (`-0.4142`, `12`, `3.50`) exactly. Returns
/// the value and the number of digits after the decimal point.
pub fn parse_decimal(text: &str) -> Result<(Rational, u32)> {
    let t = text.trim();
    let bad = |reason: &str| Error::MalformedDecimal { input: text.to_string(), reason: reason.to_string() };
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad("only digits and one decimal point are allowed"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mantissa: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad("digits"))? };
    let places = frac_part.len() as u32;
    let mut value = Rational::new(mantissa, pow10(places));
    if negative {
        value = -value;
    }
    Ok((value, places))
}

/// Number of significant digits written in a decimal literal.
pub fn significant_digits(text: &str) -> usize {
    let digits: String = text.trim().chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits.trim_start_matches('0');
    trimmed.len()
}

/// Lossy conversion for reporting and Monte Carlo comparisons.
pub fn to_f64(value: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(canonical(&ratio(6, 8)), "3/4");
        assert_eq!(canonical(&ratio(4, -2)), "-2");
        assert_eq!(canonical(&ratio(-3, 9)), "-1/3");
        assert_eq!(parse_rational(" 13/45 ").unwrap(), ratio(13, 45));
        assert_eq!(parse_rational("-7").unwrap(), integer(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }

    #[test]
    fn significant_rendering() {
        assert_eq!(format_significant(&ratio(1, 4), 10), "0.2500000000");
        assert_eq!(format_significant(&ratio(76, 17), 10), "4.470588235");
        assert_eq!(format_significant(&integer(25), 3), "25.0");
        assert_eq!(format_significant(&integer(12345), 3), "12300");
        assert_eq!(format_significant(&ratio(-1, 3), 4), "-0.3333");
        assert_eq!(format_significant(&ratio(999, 1000), 2), "1.0");
        assert_eq!(format_significant(&ratio(1, 1000), 2), "0.0010");
        // ties go to even
        assert_eq!(format_significant(&ratio(25, 100), 1), "0.2");
        assert_eq!(format_significant(&ratio(35, 100), 1), "0.4");
    }

    #[test]
    fn decimal_parsing() {
        let (v, places) = parse_decimal("0.4142135624").unwrap();
        assert_eq!(places, 10);
        assert_eq!(v, ratio(4142135624, 10_000_000_000));
        assert_eq!(parse_decimal("-2.50").unwrap(), (ratio(-5, 2), 2));
        assert!(parse_decimal("1e5").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("0.1.2").is_err());
        assert_eq!(significant_digits("0.4142135624"), 10);
        assert_eq!(significant_digits("0.444"), 3);
    }

    #[test]
    fn places_rounding() {
        assert_eq!(round_to_places(&ratio(1, 3), 2), ratio(33, 100));
        assert_eq!(round_to_places(&ratio(125, 1000), 2), ratio(12, 100));
        assert_eq!(round_to_places(&ratio(-2, 3), 1), ratio(-7, 10));
    }
}

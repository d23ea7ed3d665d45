//! Recognizing decimals as quadratic surds `(a + b sqrt(n)) / c`.
//!
//! The search is exhaustive within the bounds: squarefree `n` ascending,
//! then `c`, then `|b|`, with `a` fixed by rounding. A candidate matches when
//! its value rounded to the decimal's number of places reproduces the
//! decimal exactly, so every written digit counts.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{parse_decimal, ratio, round_to_places, significant_digits, to_f64, Rational};
use crate::precise::{bits_for_digits, Real};

pub const DEFAULT_MAX_COEFF: u32 = 100;
pub const DEFAULT_MAX_RADICAND: u32 = 50;
pub const MIN_DIGITS: usize = 9;

/// `(a + b sqrt(n)) / c` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SurdCandidate {
    a: i64,
    b: i64,
    c: i64,
    n: u32,
}

pub fn is_squarefree(n: u32) -> bool {
    if n == 0 {
        return false;
    }
    let mut k = 2u32;
    while k * k <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

impl SurdCandidate {
    /// Validates and reduces by `gcd(a, b, c)`.
    pub fn new(a: i64, b: i64, c: i64, n: u32) -> Result<Self> {
        let bad = |why: String| Error::out_of_range("surd", why);
        if c <= 0 {
            return Err(bad(format!("denominator {c} must be positive")));
        }
        if !is_squarefree(n) {
            return Err(bad(format!("radicand {n} is not squarefree")));
        }
        if n == 1 && b != 0 {
            return Err(bad("radicand 1 must carry b = 0".into()));
        }
        let n = if b == 0 { 1 } else { n };
        let g = a.gcd(&b).gcd(&c);
        Ok(SurdCandidate { a: a / g, b: b / g, c: c / g, n })
    }

    pub fn rational(value: &Rational) -> Option<Self> {
        let a = i64::try_from(value.numer()).ok()?;
        let c = i64::try_from(value.denom()).ok()?;
        SurdCandidate::new(a, 0, c, 1).ok()
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    /// The value at `bits` of fixed-point precision.
    pub fn value(&self, bits: u32) -> Real {
        let root = Real::from_int(self.n as i64, bits).sqrt();
        (&Real::from_int(self.a, bits) + &root.mul_int(self.b)).div_int(self.c)
    }

    pub fn value_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.n as f64).sqrt()) / self.c as f64
    }

    /// `(a+b*sqrt(n))/c`, or `a/c` when rational.
    pub fn pretty(&self) -> String {
        if self.b == 0 {
            return format!("{}/{}", self.a, self.c);
        }
        let sign = if self.b < 0 { '-' } else { '+' };
        format!("({}{}{}*sqrt({}))/{}", self.a, sign, self.b.abs(), self.n, self.c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "a": self.a, "b": self.b, "c": self.c, "n": self.n, "pretty": self.pretty() })
    }

    /// Preference key, smaller wins.
    pub fn key(&self) -> (u32, i64, i64, i64) {
        (self.n, self.c, self.b.abs(), self.a.abs())
    }
}

impl fmt::Display for SurdCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentifyQuery {
    decimal: String,
    value: Rational,
    places: u32,
    max_coeff: u32,
    max_radicand: u32,
}

impl IdentifyQuery {
    pub fn new(decimal: &str) -> Result<Self> {
        IdentifyQuery::with_bounds(decimal, DEFAULT_MAX_COEFF, DEFAULT_MAX_RADICAND)
    }

    pub fn with_bounds(decimal: &str, max_coeff: u32, max_radicand: u32) -> Result<Self> {
        let (value, places) = parse_decimal(decimal)?;
        let digits = significant_digits(decimal);
        if digits < MIN_DIGITS {
            return Err(Error::MalformedDecimal {
                input: decimal.to_string(),
                reason: format!("{digits} significant digits, at least {MIN_DIGITS} required"),
            });
        }
        if max_coeff == 0 || max_radicand == 0 {
            return Err(Error::out_of_range("bounds", "coefficient and radicand bounds must be positive"));
        }
        Ok(IdentifyQuery { decimal: decimal.trim().to_string(), value, places, max_coeff, max_radicand })
    }

    pub fn decimal(&self) -> &str {
        &self.decimal
    }

    pub fn max_coeff(&self) -> u32 {
        self.max_coeff
    }

    pub fn max_radicand(&self) -> u32 {
        self.max_radicand
    }

    /// Whether `candidate`, rounded to the query's places, reproduces it.
    pub fn agrees(&self, candidate: &SurdCandidate) -> bool {
        let value = candidate.value(bits_for_digits(self.places + 5)).to_rational();
        round_to_places(&value, self.places) == self.value
    }
}

/// Smallest candidate in `(n, c, |b|, |a|)` order that agrees with every
/// digit of the query, if any.
pub fn identify_constant(query: &IdentifyQuery) -> Option<SurdCandidate> {
    let target = to_f64(&query.value);
    let bound = query.max_coeff as i64;
    let half_ulp = 0.5 * 10f64.powi(-(query.places as i32));
    let slack = 1e-9 * target.abs().max(1.0);

    for n in (1..=query.max_radicand).filter(|&n| is_squarefree(n)) {
        let root = (n as f64).sqrt();
        let b_range = if n == 1 { 0..=0 } else { 1..=bound };
        for c in 1..=bound {
            let tolerance = (half_ulp + slack) * c as f64;
            for b_abs in b_range.clone() {
                let mut found: Option<SurdCandidate> = None;
                for b in [b_abs, -b_abs] {
                    let a = (target * c as f64 - b as f64 * root).round();
                    if a.abs() > bound as f64 {
                        continue;
                    }
                    if (a + b as f64 * root - target * c as f64).abs() > tolerance {
                        continue;
                    }
                    let a = a as i64;
                    if a.gcd(&b).gcd(&c) != 1 {
                        continue;
                    }
                    let Ok(candidate) = SurdCandidate::new(a, b, c, n) else { continue };
                    if !query.agrees(&candidate) {
                        continue;
                    }
                    if found.as_ref().is_none_or(|f| candidate.a.abs() < f.a.abs()) {
                        found = Some(candidate);
                    }
                    if b_abs == 0 {
                        break;
                    }
                }
                if found.is_some() {
                    return found;
                }
            }
        }
    }
    None
}

/// [`identify_constant`] on each decimal with shared bounds.
pub fn identify_sequence<S: AsRef<str>>(decimals: &[S], max_coeff: u32, max_radicand: u32) -> Result<Vec<Option<SurdCandidate>>> {
    let queries = decimals.iter().map(|d| IdentifyQuery::with_bounds(d.as_ref(), max_coeff, max_radicand)).collect::<Result<Vec<_>>>()?;
    Ok(queries.iter().map(identify_constant).collect())
}

/// Exact value of a rational candidate.
pub fn rational_value(candidate: &SurdCandidate) -> Option<Rational> {
    if candidate.b.is_zero() {
        Some(ratio(candidate.a, candidate.c))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(d: &str) -> Option<SurdCandidate> {
        identify_constant(&IdentifyQuery::new(d).unwrap())
    }

    #[test]
    fn squarefree() {
        let sf: Vec<u32> = (1..=12).filter(|&n| is_squarefree(n)).collect();
        assert_eq!(sf, vec![1, 2, 3, 5, 6, 7, 10, 11]);
        assert!(!is_squarefree(0));
    }

    #[test]
    fn candidate_normal_form() {
        let s = SurdCandidate::new(-2, 2, 4, 2).unwrap();
        assert_eq!((s.a(), s.b(), s.c(), s.n()), (-1, 1, 2, 2));
        assert_eq!(SurdCandidate::new(3, 0, 6, 1).unwrap().pretty(), "1/2");
        assert!(SurdCandidate::new(1, 1, 1, 4).is_err());
        assert!(SurdCandidate::new(1, 1, 0, 2).is_err());
        assert!(SurdCandidate::new(1, 1, 1, 1).is_err());
        assert_eq!(SurdCandidate::new(3, -2, 1, 2).unwrap().pretty(), "(3-2*sqrt(2))/1");
    }

    #[test]
    fn known_constants() {
        assert_eq!(ident("0.4142135624").unwrap().pretty(), "(-1+1*sqrt(2))/1");
        assert_eq!(ident("0.2500000000").unwrap().pretty(), "1/4");
        assert_eq!(ident("0.48528137423857029281").unwrap().pretty(), "(-8+6*sqrt(2))/1");
        assert_eq!(ident("0.3660254038").unwrap().pretty(), "(-1+1*sqrt(3))/2");
    }

    #[test]
    fn last_digit_matters() {
        assert_eq!(ident("0.4142135625"), None);
        assert_eq!(ident("0.2500000001"), None);
    }

    #[test]
    fn no_match_for_pi() {
        assert_eq!(ident("3.14159265358979"), None);
    }

    #[test]
    fn short_input_rejected() {
        assert!(matches!(IdentifyQuery::new("0.375"), Err(Error::MalformedDecimal { .. })));
        assert!(matches!(IdentifyQuery::new("0.41x2135624"), Err(Error::MalformedDecimal { .. })));
    }

    #[test]
    fn sequence() {
        let out = identify_sequence(&["0.5000000000", "0.5000000000"], 100, 50).unwrap();
        assert_eq!(out, vec![SurdCandidate::new(1, 0, 2, 1).ok(); 2]);
        assert!(identify_sequence(&["0.5"], 100, 50).is_err());
    }

    #[test]
    fn json_record() {
        let v = SurdCandidate::new(-8, 6, 1, 2).unwrap().to_json();
        assert_eq!(v["pretty"], "(-8+6*sqrt(2))/1");
        assert_eq!(v["a"], -8);
        assert_eq!(v["n"], 2);
    }
}

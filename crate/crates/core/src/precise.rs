//! Binary fixed-point reals for closed-form evaluation.
//!
//! A [`Real`] is `mantissa / 2^bits`. Every operation truncates to the
//! shared precision, so callers pick `bits` from the number of decimal
//! digits they need with [`bits_for_digits`], which adds ten guard digits.
//! Elementary functions are only needed at rational multiples of pi, which
//! keeps argument reduction exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{format_significant, Rational};

/// Extra bits carried inside the series evaluations.
const SERIES_GUARD: u32 = 32;

/// Working precision (in bits) for results good to `digits` significant
/// decimal digits on values of moderate size: `digits + 10` decimal digits
/// plus a few spare bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    ((digits + 10) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mantissa: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { mantissa: BigInt::zero(), bits }
    }

    pub fn from_int(value: i64, bits: u32) -> Self {
        Real { mantissa: BigInt::from(value) << bits, bits }
    }

    /// Nearest representable value.
    pub fn from_rational(value: &Rational, bits: u32) -> Self {
        let scaled: BigInt = value.numer() << bits;
        let den = value.denom();
        let (q, r) = scaled.div_mod_floor(den);
        let mantissa = if (r << 1u32) >= *den { q + 1 } else { q };
        Real { mantissa, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The exact value held, `mantissa / 2^bits`.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        crate::exact::to_f64(&self.to_rational())
    }

    /// Decimal rendering with `digits` significant digits, ties to even.
    pub fn format(&self, digits: u32) -> String {
        format_significant(&self.to_rational(), digits)
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Real {
        Real { mantissa: self.mantissa.abs(), bits: self.bits }
    }

    /// Change precision, truncating when narrowing.
    pub fn with_bits(&self, bits: u32) -> Real {
        let mantissa = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa << (bits - self.bits),
            Ordering::Less => &self.mantissa >> (self.bits - bits),
        };
        Real { mantissa, bits }
    }

    pub fn mul_int(&self, k: i64) -> Real {
        Real { mantissa: &self.mantissa * k, bits: self.bits }
    }

    pub fn div_int(&self, k: i64) -> Real {
        Real { mantissa: &self.mantissa / k, bits: self.bits }
    }

    pub fn square(&self) -> Real {
        self * self
    }

    /// Square root. Panics on negative input.
    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "square root of a negative value");
        let widened: BigInt = &self.mantissa << self.bits;
        Real { mantissa: widened.sqrt(), bits: self.bits }
    }

    pub fn powi(&self, mut exp: u32) -> Real {
        let mut base = self.clone();
        let mut acc = Real::from_int(1, self.bits);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn recip(&self) -> Real {
        &Real::from_int(1, self.bits) / self
    }

    fn check(&self, other: &Real) {
        debug_assert_eq!(self.bits, other.bits, "mixed precision arithmetic");
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(10) as u32;
        f.write_str(&self.format(digits.max(1)))
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check(other);
        self.mantissa.cmp(&other.mantissa)
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        self.check(rhs);
        Real { mantissa: &self.mantissa + &rhs.mantissa, bits: self.bits }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        self.check(rhs);
        Real { mantissa: &self.mantissa - &rhs.mantissa, bits: self.bits }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        self.check(rhs);
        Real { mantissa: (&self.mantissa * &rhs.mantissa) >> self.bits, bits: self.bits }
    }
}

impl Div for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        self.check(rhs);
        assert!(!rhs.mantissa.is_zero(), "division by zero");
        Real { mantissa: (&self.mantissa << self.bits) / &rhs.mantissa, bits: self.bits }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mantissa: -&self.mantissa, bits: self.bits }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real { (&self).$m(&rhs) }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

/// `sum_k (-1)^k / ((2k+1) n^(2k+1))`, i.e. `atan(1/n)`, at `bits`.
fn atan_inv(n: i64, bits: u32) -> Real {
    let n2 = BigInt::from(n * n);
    let mut power = (BigInt::one() << bits) / n;
    let mut sum = BigInt::zero();
    let mut k: i64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    Real { mantissa: sum, bits }
}

/// pi by Machin's formula.
pub fn pi(bits: u32) -> Real {
    let work = bits + SERIES_GUARD;
    let a = atan_inv(5, work).mul_int(16);
    let b = atan_inv(239, work).mul_int(4);
    (a - b).with_bits(bits)
}

/// Taylor series for sin (odd = true) or cos around 0; `theta` small.
fn taylor(theta: &Real, odd: bool) -> Real {
    let bits = theta.bits();
    let theta2 = theta.square();
    let mut term = if odd { theta.clone() } else { Real::from_int(1, bits) };
    let mut sum = term.clone();
    let mut k: i64 = if odd { 1 } else { 0 };
    loop {
        term = -&(&term * &theta2).div_int((k + 1) * (k + 2));
        if term.mantissa.is_zero() {
            break;
        }
        sum = &sum + &term;
        k += 2;
    }
    sum
}

/// `sin(t * pi)` for rational `t = num / den`, `den > 0`.
pub fn sin_pi(num: i64, den: i64, bits: u32) -> Real {
    assert!(den > 0);
    let work = bits + SERIES_GUARD;
    // reduce t into [0, 2)
    let period = 2 * den;
    let mut n = num.rem_euclid(period);
    let mut negate = false;
    if n >= den {
        n -= den;
        negate = true;
    }
    // t in [0, 1]: sin(t pi) = sin((1 - t) pi)
    if 2 * n > den {
        n = den - n;
    }
    // t in [0, 1/2]
    let value = if 4 * n > den {
        // sin(t pi) = cos((1/2 - t) pi)
        let theta = angle(den - 2 * n, 2 * den, work);
        taylor(&theta, false)
    } else {
        let theta = angle(n, den, work);
        taylor(&theta, true)
    };
    let value = value.with_bits(bits);
    if negate {
        -&value
    } else {
        value
    }
}

/// `cos(t * pi)` for rational `t = num / den`, `den > 0`.
pub fn cos_pi(num: i64, den: i64, bits: u32) -> Real {
    // cos(t pi) = sin((1/2 - t) pi) = sin((den - 2 num) / (2 den) pi)
    sin_pi(den - 2 * num, 2 * den, bits)
}

/// `cot(t * pi)` for rational `t = num / den`; `t` must not be an integer.
pub fn cot_pi(num: i64, den: i64, bits: u32) -> Real {
    assert!(num.rem_euclid(den) != 0, "cotangent pole");
    let work = bits + SERIES_GUARD;
    (&cos_pi(num, den, work) / &sin_pi(num, den, work)).with_bits(bits)
}

fn angle(num: i64, den: i64, bits: u32) -> Real {
    pi(bits).mul_int(num).div_int(den)
}

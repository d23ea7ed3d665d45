//! Sparse affine expressions over symbolic unknowns `d_1, d_2, ...`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// A vector space over [`Rational`]: the constant term of an
/// [`AffineExpr`], and the right-hand side of a [`LinearSystem`].
///
/// [`LinearSystem`]: super::LinearSystem
pub trait Linear: Clone + PartialEq + fmt::Debug {
    fn null() -> Self;
    fn is_null(&self) -> bool;
    /// `self += factor * other`
    fn add_scaled(&mut self, factor: &Rational, other: &Self);
    fn scale(&mut self, factor: &Rational);
    /// Least common multiple of the denominators of every component.
    fn denominator(&self) -> BigInt;
    /// `self = k * self + j * other` for integer-valued `self` and `other`,
    /// without any gcd reduction.
    fn combine_int(&mut self, k: &BigInt, j: &BigInt, other: &Self);
    /// Exact division of an integer-valued value by `k`.
    fn div_exact_int(&mut self, k: &BigInt);
    /// `gcd(acc, every component)` for an integer-valued value.
    fn gcd_int(&self, acc: &BigInt) -> BigInt;
}

impl Linear for Rational {
    fn null() -> Self {
        <Rational as Zero>::zero()
    }

    fn is_null(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_scaled(&mut self, factor: &Rational, other: &Self) {
        if !Zero::is_zero(factor) && !Zero::is_zero(other) {
            *self += factor * other;
        }
    }

    fn scale(&mut self, factor: &Rational) {
        *self *= factor;
    }

    fn denominator(&self) -> BigInt {
        self.denom().clone()
    }

    fn combine_int(&mut self, k: &BigInt, j: &BigInt, other: &Self) {
        debug_assert!(self.is_integer() && other.is_integer());
        let mut v = self.numer() * k;
        if !j.is_zero() && !Zero::is_zero(other) {
            v += other.numer() * j;
        }
        *self = Rational::from_integer(v);
    }

    fn div_exact_int(&mut self, k: &BigInt) {
        debug_assert!(self.is_integer());
        *self = Rational::from_integer(self.numer() / k);
    }

    fn gcd_int(&self, acc: &BigInt) -> BigInt {
        debug_assert!(self.is_integer());
        acc.gcd(self.numer())
    }
}

/// `constant + sum(coeff_j * d_j)` with 1-based unknown indices.
///
/// No stored coefficient is ever zero, so two expressions are equal exactly
/// when they denote the same affine function.
#[derive(Clone, PartialEq, Debug)]
pub struct AffineExpr<C = Rational> {
    constant: C,
    terms: BTreeMap<usize, Rational>,
}

impl<C: Linear> AffineExpr<C> {
    pub fn constant(value: C) -> Self {
        AffineExpr { constant: value, terms: BTreeMap::new() }
    }

    /// The bare unknown `d_index`.
    pub fn unknown(index: usize) -> Self {
        assert!(index >= 1, "unknown indices are 1-based");
        let mut terms = BTreeMap::new();
        terms.insert(index, Rational::one());
        AffineExpr { constant: C::null(), terms }
    }

    pub fn from_terms(constant: C, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut expr = AffineExpr::constant(constant);
        for (index, coeff) in terms {
            expr.add_term(index, &coeff);
        }
        expr
    }

    pub fn constant_term(&self) -> &C {
        &self.constant
    }

    /// Coefficient of `d_index` (zero when absent).
    pub fn coefficient(&self, index: usize) -> Rational {
        self.terms.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, index: usize, coeff: &Rational) {
        if Zero::is_zero(coeff) {
            return;
        }
        let entry = self.terms.entry(index).or_insert_with(Rational::zero);
        *entry += coeff;
        if Zero::is_zero(entry) {
            self.terms.remove(&index);
        }
    }

    /// `self += factor * other`, dropping coefficients that cancel.
    pub fn add_scaled(&mut self, factor: &Rational, other: &AffineExpr<C>) {
        if Zero::is_zero(factor) {
            return;
        }
        self.constant.add_scaled(factor, &other.constant);
        for (&index, coeff) in &other.terms {
            self.add_term(index, &(factor * coeff));
        }
    }

    pub fn scale(&mut self, factor: &Rational) {
        if Zero::is_zero(factor) {
            *self = AffineExpr::constant(C::null());
            return;
        }
        self.constant.scale(factor);
        for coeff in self.terms.values_mut() {
            *coeff *= factor;
        }
    }

    /// `shift + sum(c_i * expr_i)`.
    pub fn combine<'a>(parts: impl IntoIterator<Item = (&'a Rational, &'a AffineExpr<C>)>, shift: C) -> Self
    where
        C: 'a,
    {
        let mut out = AffineExpr::constant(shift);
        for (factor, expr) in parts {
            out.add_scaled(factor, expr);
        }
        out
    }

    /// Evaluates with `assignment[j - 1]` standing for `d_j`.
    pub fn eval(&self, assignment: &[C]) -> Result<C> {
        let mut value = self.constant.clone();
        for (&index, coeff) in &self.terms {
            let d = assignment.get(index - 1).ok_or(Error::MissingAssignment(index))?;
            value.add_scaled(coeff, d);
        }
        Ok(value)
    }
}

impl fmt::Display for AffineExpr<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (index, coeff) in &self.terms {
            let neg = coeff < &Rational::zero();
            let mag = if neg { -coeff } else { coeff.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            if mag.is_one() {
                write!(f, "d_{index}")?;
            } else {
                write!(f, "{mag}*d_{index}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !Zero::is_zero(&self.constant) {
            if self.constant < Rational::zero() {
                write!(f, " - {}", -&self.constant)
            } else {
                write!(f, " + {}", self.constant)
            }
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, ratio};

    type Expr = AffineExpr<Rational>;

    #[test]
    fn combine_single() {
        let d1 = Expr::unknown(1);
        assert_eq!(Expr::combine([(&integer(1), &d1)], integer(0)), d1);
    }

    #[test]
    fn combine_recurrence_step() {
        // f(3) = 4 f(1) - 2 f(-1) - f(2) with f(-1) = 0
        let d1 = Expr::unknown(1);
        let d2 = Expr::unknown(2);
        let zero = Expr::constant(integer(0));
        let out = Expr::combine([(&integer(4), &d1), (&integer(-2), &zero), (&integer(-1), &d2)], integer(0));
        assert_eq!(out.coefficient(1), integer(4));
        assert_eq!(out.coefficient(2), integer(-1));
        assert_eq!(out.to_string(), "4*d_1 - d_2");
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = Expr::from_terms(integer(1), [(1, integer(2))]);
        let b = Expr::from_terms(integer(0), [(1, integer(2))]);
        let out = Expr::combine([(&integer(1), &a), (&integer(-1), &b)], integer(1));
        assert!(out.is_constant());
        assert_eq!(out, Expr::constant(integer(2)));
        assert_eq!(out.terms().count(), 0);
    }

    #[test]
    fn evaluation() {
        let d = [ratio(1, 5), ratio(13, 45)];
        let e = Expr::from_terms(integer(0), [(1, integer(4)), (2, integer(-1))]);
        assert_eq!(e.eval(&d).unwrap(), ratio(23, 45));
        assert_eq!(Expr::constant(integer(7)).eval(&[]).unwrap(), integer(7));
        let boundary = Expr::from_terms(integer(0), [(1, integer(18)), (2, integer(-9))]);
        assert_eq!(boundary.eval(&d).unwrap(), integer(1));
    }

    #[test]
    fn missing_assignment() {
        let e = Expr::unknown(3);
        assert_eq!(e.eval(&[integer(1)]), Err(Error::MissingAssignment(3)));
    }
}

//! Exact Gaussian elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::affine::Linear;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A square system `A x = b`. The right-hand side may be any [`Linear`]
/// value, which lets one elimination pass solve for several columns at
/// once (the 2D exit probabilities carry four).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<C = Rational> {
    coefficients: Vec<Vec<Rational>>,
    rhs: Vec<C>,
}

impl<C: Linear> LinearSystem<C> {
    pub fn new(coefficients: Vec<Vec<Rational>>, rhs: Vec<C>) -> Result<Self> {
        let rows = coefficients.len();
        if rows == 0 || rhs.len() != rows {
            return Err(Error::NotSquare { rows, cols: rhs.len() });
        }
        if let Some(bad) = coefficients.iter().find(|row| row.len() != rows) {
            return Err(Error::NotSquare { rows, cols: bad.len() });
        }
        Ok(LinearSystem { coefficients, rhs })
    }

    /// An `n x n` zero system, for assembling equation by equation.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        LinearSystem { coefficients: vec![vec![Rational::zero(); n]; n], rhs: vec![C::null(); n] }
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn add_coefficient(&mut self, row: usize, col: usize, value: &Rational) {
        self.coefficients[row][col] += value;
    }

    pub fn add_rhs(&mut self, row: usize, factor: &Rational, value: &C) {
        self.rhs[row].add_scaled(factor, value);
    }

    pub fn set_rhs(&mut self, row: usize, value: C) {
        self.rhs[row] = value;
    }

    pub fn coefficients(&self) -> &[Vec<Rational>] {
        &self.coefficients
    }

    pub fn rhs(&self) -> &[C] {
        &self.rhs
    }

    /// Residual check: `A x == b` exactly.
    pub fn check(&self, solution: &[C]) -> Result<()> {
        for (row, (coeffs, target)) in self.coefficients.iter().zip(&self.rhs).enumerate() {
            let mut acc = C::null();
            for (a, x) in coeffs.iter().zip(solution) {
                acc.add_scaled(a, x);
            }
            if &acc != target {
                return Err(Error::VerificationFailed { row });
            }
        }
        Ok(())
    }

    /// Solves by elimination, pivoting on the first nonzero entry of each
    /// column, then verifies the answer against the original system.
    pub fn solve(&self) -> Result<Vec<C>> {
        let n = self.dim();
        let mut a = self.coefficients.clone();
        let mut b = self.rhs.clone();

        for k in 0..n {
            let pivot_row = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::SingularMatrix { column: k })?;
            if pivot_row != k {
                a.swap(pivot_row, k);
                b.swap(pivot_row, k);
            }
            let (upper, lower) = a.split_at_mut(k + 1);
            let pivot = &upper[k];
            for (offset, row) in lower.iter_mut().enumerate() {
                if row[k].is_zero() {
                    continue;
                }
                let factor = &row[k] / &pivot[k];
                row[k] = Rational::zero();
                for j in (k + 1)..n {
                    if !pivot[j].is_zero() {
                        row[j] -= &factor * &pivot[j];
                    }
                }
                let neg = -factor;
                let pivot_rhs = b[k].clone();
                b[k + 1 + offset].add_scaled(&neg, &pivot_rhs);
            }
        }

        let mut x = vec![C::null(); n];
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            for j in (i + 1)..n {
                if !a[i][j].is_zero() {
                    acc.add_scaled(&-&a[i][j], &x[j]);
                }
            }
            acc.scale(&a[i][i].recip());
            x[i] = acc;
        }

        self.check(&x)?;
        Ok(x)
    }
}

/// A solution `x = numerators / denominator` sharing one denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSolution<C> {
    pub numerators: Vec<C>,
    pub denominator: BigInt,
}

impl<C: Linear> ScaledSolution<C> {
    /// Divides out the common factor of the denominator and all numerators.
    pub fn reduce(&mut self) {
        let g = self.numerators.iter().fold(self.denominator.clone(), |g, v| v.gcd_int(&g));
        if !g.is_one() {
            self.denominator /= &g;
            for v in &mut self.numerators {
                v.div_exact_int(&g);
            }
        }
    }

    pub fn values(&self) -> Vec<C> {
        let inv = Rational::new(BigInt::one(), self.denominator.clone());
        self.numerators
            .iter()
            .map(|v| {
                let mut v = v.clone();
                v.scale(&inv);
                v
            })
            .collect()
    }
}

fn integer<C: Linear>(value: &C, k: &BigInt) -> C {
    let mut out = value.clone();
    out.scale(&Rational::from_integer(k.clone()));
    out
}

impl<C: Linear> LinearSystem<C> {
    /// Fraction-free (Bareiss) elimination for systems whose coefficients
    /// are all integers. The right-hand side is first cleared of
    /// denominators, after which every intermediate value is an integer
    /// and the divisions are exact. Same pivot rule as
    /// [`LinearSystem::solve`]; the result is verified against the
    /// original system. Returns `None` when some coefficient is not an
    /// integer.
    pub fn solve_fraction_free_scaled(&self) -> Option<Result<ScaledSolution<C>>> {
        if !self.coefficients.iter().flatten().all(|a| a.is_integer()) {
            return None;
        }
        Some(self.bareiss())
    }

    /// [`LinearSystem::solve_fraction_free_scaled`], reduced to plain
    /// values; falls back to [`LinearSystem::solve`] for non-integer
    /// coefficients.
    pub fn solve_fraction_free(&self) -> Result<Vec<C>> {
        match self.solve_fraction_free_scaled() {
            Some(scaled) => Ok(scaled?.values()),
            None => self.solve(),
        }
    }

    fn bareiss(&self) -> Result<ScaledSolution<C>> {
        let n = self.dim();
        let original: Vec<Vec<BigInt>> = self.coefficients.iter().map(|row| row.iter().map(|v| v.numer().clone()).collect()).collect();
        let clear = self.rhs.iter().fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, &v.denominator()));
        let target: Vec<C> = self.rhs.iter().map(|v| integer(v, &clear)).collect();
        let mut a = original.clone();
        let mut b = target.clone();
        let mut prev = BigInt::one();

        for k in 0..n {
            let pivot_row = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::SingularMatrix { column: k })?;
            if pivot_row != k {
                a.swap(pivot_row, k);
                b.swap(pivot_row, k);
            }
            let (upper, lower) = a.split_at_mut(k + 1);
            let pivot = &upper[k];
            let pivot_rhs = b[k].clone();
            for (offset, row) in lower.iter_mut().enumerate() {
                let factor = std::mem::take(&mut row[k]);
                for j in (k + 1)..n {
                    let mut v = &pivot[k] * &row[j];
                    if !factor.is_zero() && !pivot[j].is_zero() {
                        v -= &factor * &pivot[j];
                    }
                    row[j] = v / &prev;
                }
                let i = k + 1 + offset;
                b[i].combine_int(&pivot[k], &-factor, &pivot_rhs);
                b[i].div_exact_int(&prev);
            }
            prev = pivot[k].clone();
        }

        // With T the last pivot (the determinant up to sign), T x is
        // integral and back substitution divides exactly.
        let det = prev;
        let zero = BigInt::zero();
        let one = BigInt::one();
        let null = C::null();
        let mut y = vec![C::null(); n];
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            acc.combine_int(&det, &zero, &null);
            for j in (i + 1)..n {
                if !a[i][j].is_zero() {
                    acc.combine_int(&one, &-&a[i][j], &y[j]);
                }
            }
            acc.div_exact_int(&a[i][i]);
            y[i] = acc;
        }

        for (row, (coeffs, t)) in original.iter().zip(&target).enumerate() {
            let mut acc = C::null();
            for (c, v) in coeffs.iter().zip(&y) {
                if !c.is_zero() {
                    acc.combine_int(&one, c, v);
                }
            }
            let mut expected = t.clone();
            expected.combine_int(&det, &zero, &null);
            if acc != expected {
                return Err(Error::VerificationFailed { row });
            }
        }
        Ok(ScaledSolution { numerators: y, denominator: det * clear })
    }
}

/// Convenience wrapper over [`LinearSystem::solve`] for scalar systems.
pub fn solve_dense(system: &LinearSystem<Rational>) -> Result<Vec<Rational>> {
    system.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, ratio};

    fn system(rows: &[&[i64]], rhs: &[Rational]) -> LinearSystem {
        let a = rows.iter().map(|r| r.iter().map(|&v| integer(v)).collect()).collect();
        LinearSystem::new(a, rhs.to_vec()).unwrap()
    }

    #[test]
    fn identity() {
        let s = system(&[&[1, 0], &[0, 1]], &[ratio(3, 4), ratio(1, 2)]);
        assert_eq!(solve_dense(&s).unwrap(), vec![ratio(3, 4), ratio(1, 2)]);
    }

    #[test]
    fn two_by_two() {
        let s = system(&[&[2, 1], &[1, 1]], &[integer(1), integer(1)]);
        assert_eq!(solve_dense(&s).unwrap(), vec![integer(0), integer(1)]);
    }

    #[test]
    fn needs_row_swap() {
        let s = system(&[&[0, 1], &[1, 0]], &[integer(5), integer(7)]);
        assert_eq!(solve_dense(&s).unwrap(), vec![integer(7), integer(5)]);
    }

    #[test]
    fn fraction_free_matches() {
        let s = system(&[&[2, 1, 0], &[0, 3, -1], &[4, 0, 5]], &[integer(1), ratio(1, 2), integer(-3)]);
        assert_eq!(s.solve_fraction_free().unwrap(), s.solve().unwrap());
        let swap = system(&[&[0, 1], &[1, 0]], &[integer(5), integer(7)]);
        assert_eq!(swap.solve_fraction_free().unwrap(), vec![integer(7), integer(5)]);
        let sing = system(&[&[1, 2], &[2, 4]], &[integer(1), integer(2)]);
        assert_eq!(sing.solve_fraction_free(), Err(Error::SingularMatrix { column: 1 }));
    }

    #[test]
    fn reduce_keeps_values() {
        let s = system(&[&[6, 0], &[0, 6]], &[integer(3), integer(12)]);
        let mut scaled = s.solve_fraction_free_scaled().unwrap().unwrap();
        let before = scaled.values();
        scaled.reduce();
        assert_eq!(scaled.values(), before);
        assert_eq!(scaled.denominator, BigInt::from(2));
    }

    #[test]
    fn singular() {
        let s = system(&[&[1, 2], &[2, 4]], &[integer(1), integer(2)]);
        assert_eq!(solve_dense(&s), Err(Error::SingularMatrix { column: 1 }));
    }

    #[test]
    fn shape_errors() {
        assert!(LinearSystem::<Rational>::new(vec![], vec![]).is_err());
        assert!(LinearSystem::new(vec![vec![integer(1), integer(2)]], vec![integer(1)]).is_err());
    }

    #[test]
    fn example_four_by_four() {
        // interior equations of the N = 5 walk with steps -2, +1, +2 (probs 1/2, 1/4, 1/4)
        let h = ratio(1, 2);
        let q = ratio(1, 4);
        let one = integer(1);
        let z = integer(0);
        let a = vec![
            vec![one.clone(), -&q, -&q, z.clone()],
            vec![z.clone(), one.clone(), -&q, -&q],
            vec![-&h, z.clone(), one.clone(), -&q],
            vec![z.clone(), -&h, z.clone(), one.clone()],
        ];
        let b = vec![z.clone(), z.clone(), q.clone(), &q + &q];
        let s = LinearSystem::new(a, b).unwrap();
        assert_eq!(solve_dense(&s).unwrap(), vec![ratio(1, 5), ratio(13, 45), ratio(23, 45), ratio(29, 45)]);
    }
}

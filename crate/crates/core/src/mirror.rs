//! The mirror-step walk on `0..=N`.
//!
//! From `0 < x < N` the particle steps to `x - 1` with probability `q1`, to
//! `x + 1` with probability `q2`, or jumps to `N - x` with probability `p`.
//! It stops at `0` (ruin) or `N` (win). The symmetric case is
//! `q1 = q2 = (1 - p) / 2`, where closed forms exist; in terms of
//! `sigma = (1 - sqrt p) / (1 + sqrt p)` the win probability is
//!
//! ```text
//! f(x) = 1/2 + (sigma^(N-x) - sigma^x) / (2 (1 - sigma^N))
//! ```
//!
//! which tends to `1/2 - sigma^x / 2` as `N` grows, and the expected
//! duration is `x (N - x) / (1 - p)`. General `q1 != q2` only has the dense
//! solvers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_significant, ratio, LinearSystem, Rational};
use crate::gr1d::Profile1D;
use crate::precise::{bits_for_digits, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct MirrorProblem {
    n: usize,
    q1: Rational,
    q2: Rational,
    p: Rational,
}

impl MirrorProblem {
    /// `q1` is the left-step, `q2` the right-step and `p` the mirror
    /// probability.
    pub fn new(n: usize, q1: Rational, q2: Rational, p: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::out_of_range("N", format!("line length must be at least 2, got {n}")));
        }
        if q1.is_negative() || q2.is_negative() {
            return Err(Error::InvalidProbabilities(format!("q1 = {q1} and q2 = {q2} must be nonnegative")));
        }
        check_open_unit(&p)?;
        let total = &q1 + &q2 + &p;
        if !total.is_one() {
            return Err(Error::InvalidProbabilities(format!("q1 + q2 + p = {total}, not 1")));
        }
        Ok(MirrorProblem { n, q1, q2, p })
    }

    /// `q1 = q2 = (1 - p) / 2`.
    pub fn symmetric(n: usize, p: Rational) -> Result<Self> {
        check_open_unit(&p)?;
        let q = (Rational::one() - &p) / Rational::from_integer(2.into());
        MirrorProblem::new(n, q.clone(), q, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q1(&self) -> &Rational {
        &self.q1
    }

    pub fn q2(&self) -> &Rational {
        &self.q2
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn is_symmetric(&self) -> bool {
        self.q1 == self.q2
    }
}

fn check_open_unit(p: &Rational) -> Result<()> {
    if !p.is_positive() || p >= &Rational::one() {
        return Err(Error::InvalidProbabilities(format!("p = {p} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_position(n: usize, x: i64) -> Result<()> {
    if x < 0 || x as usize > n {
        return Err(Error::out_of_range("x", format!("{x} is not in [0, {n}]")));
    }
    Ok(())
}

/// Position of `x` among the unknowns. `x` and `N - x` sit next to each
/// other, which keeps the matrix banded.
fn slot(n: usize, x: usize) -> usize {
    if 2 * x <= n {
        2 * (x - 1)
    } else {
        2 * (n - x) - 1
    }
}

/// Interior equations `v(x) - q1 v(x-1) - q2 v(x+1) - p v(N-x) = c`, with
/// `v(0) = 0` and `v(N) = top`.
fn solve_mirror(problem: &MirrorProblem, top: &Rational, forcing: &Rational) -> Result<Profile1D> {
    let n = problem.n;
    let size = n - 1;
    let mut system = LinearSystem::<Rational>::zeros(size);
    for x in 1..n {
        let row = slot(n, x);
        system.add_coefficient(row, row, &Rational::one());
        let mut rhs = forcing.clone();
        for (y, w) in [(x - 1, &problem.q1), (x + 1, &problem.q2), (n - x, &problem.p)] {
            if w.is_zero() || y == 0 {
                continue;
            }
            if y == n {
                rhs += w * top;
            } else {
                system.add_coefficient(row, slot(n, y), &-w);
            }
        }
        system.set_rhs(row, rhs);
    }
    let solved = system.solve()?;
    Ok(Profile1D::new((1..n).map(|x| solved[slot(n, x)].clone()).collect()))
}

/// Exact win probabilities `f(1..N-1)`.
pub fn mirror_prob_solve(problem: &MirrorProblem) -> Result<Profile1D> {
    solve_mirror(problem, &Rational::one(), &Rational::zero())
}

/// Exact expected durations `g(1..N-1)`.
pub fn mirror_duration_solve(problem: &MirrorProblem) -> Result<Profile1D> {
    solve_mirror(problem, &Rational::zero(), &Rational::one())
}

/// A closed-form value: exact when `sqrt(p)` is rational, otherwise a
/// fixed-point approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedValue {
    Exact(Rational),
    Approx(Real),
}

impl ClosedValue {
    pub fn format(&self, digits: u32) -> String {
        match self {
            ClosedValue::Exact(r) => format_significant(r, digits),
            ClosedValue::Approx(v) => v.format(digits),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            ClosedValue::Exact(r) => Some(r),
            ClosedValue::Approx(_) => None,
        }
    }

    pub fn to_real(&self, bits: u32) -> Real {
        match self {
            ClosedValue::Exact(r) => Real::from_rational(r, bits),
            ClosedValue::Approx(v) => v.with_bits(bits),
        }
    }
}

/// `sqrt(value)` when it is rational.
pub fn rational_sqrt(value: &Rational) -> Option<Rational> {
    if value.is_negative() {
        return None;
    }
    let exact_root = |v: &BigInt| {
        let r = v.sqrt();
        (&r * &r == *v).then_some(r)
    };
    Some(Rational::new(exact_root(value.numer())?, exact_root(value.denom())?))
}

/// `sigma = (1 - sqrt p) / (1 + sqrt p)` as a real.
fn sigma_real(p: &Rational, bits: u32) -> Real {
    let root = Real::from_rational(p, bits).sqrt();
    let one = Real::from_int(1, bits);
    &(&one - &root) / &(&one + &root)
}

/// The symmetric-case win probability from the closed form.
pub fn mirror_prob_closed(n: usize, p: &Rational, x: i64, digits: u32) -> Result<ClosedValue> {
    check_position(n, x)?;
    check_open_unit(p)?;
    let x = x as usize;
    if let Some(root) = rational_sqrt(p) {
        let sigma = (Rational::one() - &root) / (Rational::one() + &root);
        let pow = |k: usize| num_traits::pow(sigma.clone(), k);
        let two = Rational::from_integer(2.into());
        let value = ratio(1, 2) + (pow(n - x) - pow(x)) / (two * (Rational::one() - pow(n)));
        return Ok(ClosedValue::Exact(value));
    }
    let bits = bits_for_digits(digits);
    let sigma = sigma_real(p, bits);
    let one = Real::from_int(1, bits);
    let diff = &sigma.powi((n - x) as u32) - &sigma.powi(x as u32);
    let den = (&one - &sigma.powi(n as u32)).mul_int(2);
    let half = Real::from_rational(&ratio(1, 2), bits);
    Ok(ClosedValue::Approx(&half + &(&diff / &den)))
}

/// `x (N - x) / (1 - p)`; `p = 0` gives the fair walk.
pub fn mirror_duration_closed(n: usize, p: &Rational, x: i64) -> Result<Rational> {
    check_position(n, x)?;
    if p.is_negative() || p >= &Rational::one() {
        return Err(Error::InvalidProbabilities(format!("p = {p} must lie in [0, 1)")));
    }
    let steps = Rational::from_integer((x * (n as i64 - x)).into());
    Ok(steps / (Rational::one() - p))
}

fn check_limit_args(p: &Rational, x: i64) -> Result<()> {
    check_open_unit(p).map_err(|_| Error::out_of_range("p", format!("{p} is not in (0, 1)")))?;
    if x < 1 {
        return Err(Error::out_of_range("x", format!("{x} must be at least 1")));
    }
    Ok(())
}

/// `lim_{N -> oo} f_N(x) = 1/2 - sigma^x / 2`.
pub fn mirror_limit(p: &Rational, x: i64, digits: u32) -> Result<Real> {
    check_limit_args(p, x)?;
    let bits = bits_for_digits(digits);
    let half = Real::from_rational(&ratio(1, 2), bits);
    Ok(&half - &sigma_real(p, bits).powi(x as u32).div_int(2))
}

/// `lim_{N -> oo} f_N(N - x) = 1 - lim f_N(x)`, from `f(x) + f(N - x) = 1`.
pub fn mirror_limit_complement(p: &Rational, x: i64, digits: u32) -> Result<Real> {
    let limit = mirror_limit(p, x, digits)?;
    Ok(&Real::from_int(1, limit.bits()) - &limit)
}

/// `(sqrt p - p) / (1 - p)`, the start-at-1 limit written directly.
pub fn limit_at_one(p: &Rational, digits: u32) -> Result<Real> {
    check_limit_args(p, 1)?;
    let bits = bits_for_digits(digits);
    let pr = Real::from_rational(p, bits);
    let one = Real::from_int(1, bits);
    Ok(&(&pr.sqrt() - &pr) / &(&one - &pr))
}

/// `2 sqrt p (1 + p - 2 sqrt p) / (1 - p)^2`, the start-at-2 limit.
pub fn limit_at_two(p: &Rational, digits: u32) -> Result<Real> {
    check_limit_args(p, 2)?;
    let bits = bits_for_digits(digits);
    let pr = Real::from_rational(p, bits);
    let one = Real::from_int(1, bits);
    let root = pr.sqrt();
    let num = &root.mul_int(2) * &(&(&one + &pr) - &root.mul_int(2));
    Ok(&num / &(&one - &pr).square())
}

/// `(1 + p)(1 + p - 2 sqrt p) / (1 - p)^2`, the start-at-`N-2` limit.
pub fn limit_at_two_from_top(p: &Rational, digits: u32) -> Result<Real> {
    check_limit_args(p, 2)?;
    let bits = bits_for_digits(digits);
    let pr = Real::from_rational(p, bits);
    let one = Real::from_int(1, bits);
    let one_plus = &one + &pr;
    let num = &one_plus * &(&one_plus - &pr.sqrt().mul_int(2));
    Ok(&num / &(&one - &pr).square())
}

/// `(sqrt((p+1)(1-3p+4p^2)) - (1-2p)(p+1)) / (2p(p+1))`, the conjectured
/// start-at-1 limit when the right step has probability `p` and the left
/// and mirror steps share `1 - p` equally.
pub fn conjecture_limit(p: &Rational, digits: u32) -> Result<Real> {
    check_open_unit(p).map_err(|_| Error::out_of_range("p", format!("{p} is not in (0, 1)")))?;
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let disc = (p + &one) * (&one - p * Rational::from_integer(3.into()) + p * p * Rational::from_integer(4.into()));
    if disc.is_negative() {
        return Err(Error::NegativeDiscriminant(p.to_string()));
    }
    let bits = bits_for_digits(digits);
    let shift = Real::from_rational(&((&one - &two * p) * (p + &one)), bits);
    let den = Real::from_rational(&(&two * p * (p + &one)), bits);
    Ok(&(&Real::from_rational(&disc, bits).sqrt() - &shift) / &den)
}

/// Two ways to read the roles of `p` in the conjectured limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// `p` is the mirror probability, left and right share `1 - p`.
    MirrorStep,
    /// `p` is the right-step probability, left and mirror share `1 - p`.
    RightStep,
}

impl Reading {
    pub fn name(self) -> &'static str {
        match self {
            Reading::MirrorStep => "mirror-p",
            Reading::RightStep => "right-p",
        }
    }

    pub fn problem(self, n: usize, p: &Rational) -> Result<MirrorProblem> {
        check_open_unit(p)?;
        let q = (Rational::one() - p) / Rational::from_integer(2.into());
        match self {
            Reading::MirrorStep => MirrorProblem::new(n, q.clone(), q, p.clone()),
            Reading::RightStep => MirrorProblem::new(n, q.clone(), p.clone(), q),
        }
    }
}

/// Solver values at `x = 1` for one reading, with the gap to the
/// conjectured limit.
#[derive(Clone, Debug)]
pub struct ReadingTrace {
    pub reading: Reading,
    pub points: Vec<(usize, Real, Real)>,
}

impl ReadingTrace {
    /// Gap at the largest size.
    pub fn final_gap(&self) -> Option<&Real> {
        self.points.last().map(|(_, _, gap)| gap)
    }
}

#[derive(Clone, Debug)]
pub struct Exploration {
    pub p: Rational,
    pub conjectured: Real,
    pub traces: Vec<ReadingTrace>,
}

impl Exploration {
    /// The reading whose largest-size gap is smallest.
    pub fn best(&self) -> Option<Reading> {
        self.traces.iter().min_by(|a, b| a.final_gap().cmp(&b.final_gap())).map(|t| t.reading)
    }
}

/// Compares the conjectured limit with exact solves at each size under
/// both readings.
pub fn explore_conjecture(p: &Rational, sizes: &[usize], digits: u32) -> Result<Exploration> {
    let conjectured = conjecture_limit(p, digits)?;
    let bits = conjectured.bits();
    let mut traces = Vec::new();
    for reading in [Reading::MirrorStep, Reading::RightStep] {
        let mut points = Vec::with_capacity(sizes.len());
        for &n in sizes {
            let f = mirror_prob_solve(&reading.problem(n, p)?)?;
            let value = Real::from_rational(f.get(1), bits);
            let gap = (&value - &conjectured).abs();
            points.push((n, value, gap));
        }
        traces.push(ReadingTrace { reading, points });
    }
    Ok(Exploration { p: p.clone(), conjectured, traces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::integer;

    fn thirds(n: usize) -> MirrorProblem {
        MirrorProblem::symmetric(n, ratio(1, 3)).unwrap()
    }

    #[test]
    fn validation() {
        assert!(MirrorProblem::new(5, ratio(1, 3), ratio(1, 3), ratio(1, 2)).is_err());
        assert!(MirrorProblem::new(5, ratio(2, 3), integer(0), ratio(1, 3)).is_ok());
        assert!(MirrorProblem::new(5, ratio(1, 2), ratio(1, 2), integer(0)).is_err());
        assert!(MirrorProblem::new(1, ratio(1, 3), ratio(1, 3), ratio(1, 3)).is_err());
        assert!(MirrorProblem::symmetric(4, integer(1)).is_err());
        assert!(thirds(5).is_symmetric());
    }

    #[test]
    fn five_point_line() {
        let f = mirror_prob_solve(&thirds(5)).unwrap();
        assert_eq!(f.values(), &[ratio(7, 19), ratio(9, 19), ratio(10, 19), ratio(12, 19)]);
        let g = mirror_duration_solve(&thirds(5)).unwrap();
        assert_eq!(g.values(), &[integer(6), integer(9), integer(9), integer(6)]);
    }

    #[test]
    fn midpoint_self_loop() {
        for n in [2, 4, 10] {
            let f = mirror_prob_solve(&MirrorProblem::symmetric(n, ratio(1, 4)).unwrap()).unwrap();
            assert_eq!(f.get(n / 2), &ratio(1, 2));
        }
    }

    #[test]
    fn closed_duration() {
        assert_eq!(mirror_duration_closed(5, &ratio(1, 3), 1).unwrap(), integer(6));
        assert_eq!(mirror_duration_closed(9, &ratio(1, 3), 0).unwrap(), integer(0));
        assert_eq!(mirror_duration_closed(9, &integer(0), 4).unwrap(), integer(20));
        assert!(mirror_duration_closed(9, &integer(1), 4).is_err());
        assert!(mirror_duration_closed(9, &ratio(1, 3), 10).is_err());
    }

    #[test]
    fn closed_prob_rational_case() {
        let p = ratio(1, 4);
        for n in 2..=12usize {
            let f = mirror_prob_solve(&MirrorProblem::symmetric(n, p.clone()).unwrap()).unwrap();
            assert_eq!(mirror_prob_closed(n, &p, 0, 10).unwrap(), ClosedValue::Exact(integer(0)));
            assert_eq!(mirror_prob_closed(n, &p, n as i64, 10).unwrap(), ClosedValue::Exact(integer(1)));
            for x in 1..n {
                assert_eq!(mirror_prob_closed(n, &p, x as i64, 10).unwrap().exact(), Some(f.get(x)));
            }
        }
    }

    #[test]
    fn closed_prob_irrational_case() {
        let p = ratio(1, 2);
        let f = mirror_prob_solve(&MirrorProblem::symmetric(20, p.clone()).unwrap()).unwrap();
        for x in [1i64, 7, 19] {
            let closed = mirror_prob_closed(20, &p, x, 30).unwrap();
            assert!(closed.exact().is_none());
            assert_eq!(closed.format(25), format_significant(f.get(x as usize), 25));
        }
    }

    #[test]
    fn limits() {
        assert_eq!(mirror_limit(&ratio(1, 2), 1, 10).unwrap().format(10), "0.4142135624");
        assert_eq!(mirror_limit(&ratio(1, 4), 1, 10).unwrap().format(10), "0.3333333333");
        assert_eq!(mirror_limit(&ratio(1, 2), 2, 11).unwrap().format(11), "0.48528137424");
        assert_eq!(mirror_limit_complement(&ratio(1, 2), 2, 11).unwrap().format(11), "0.51471862576");
        assert!(mirror_limit(&integer(0), 1, 10).is_err());
        assert!(mirror_limit(&ratio(1, 2), 0, 10).is_err());
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_sqrt(&ratio(1, 9)), Some(ratio(1, 3)));
        assert_eq!(rational_sqrt(&ratio(4, 25)), Some(ratio(2, 5)));
        assert_eq!(rational_sqrt(&ratio(1, 2)), None);
        assert_eq!(rational_sqrt(&ratio(-1, 4)), None);
    }

    #[test]
    fn conjecture_values() {
        let v = conjecture_limit(&ratio(1, 3), 12).unwrap();
        assert_eq!(v.format(12), "0.366025403784");
        assert!(conjecture_limit(&integer(1), 12).is_err());
        let ex = explore_conjecture(&ratio(1, 2), &[20, 40], 15).unwrap();
        assert_eq!(ex.best(), Some(Reading::RightStep));
        assert_eq!(ex.traces.len(), 2);
    }
}

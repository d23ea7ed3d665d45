//! One-dimensional gambler's ruin with an arbitrary finite step table.
//!
//! A particle starts at `0 < x < N` and moves by `a_i` with probability
//! `p_i` until it leaves `[1, N-1]`. Landing at or below `0` is ruin, at or
//! above `N` is a win. With `a_1 < 0 < a_r` the absorbing positions are
//! `a_1 + 1 ..= 0` and `N ..= N + a_r - 1`.
//!
//! Each quantity solves `v(x) - sum_i p_i v(x + a_i) = c(x)` on the
//! interior with constant values on the two absorbing bands:
//!
//! | quantity | lower band | upper band | `c(x)` |
//! |---|---|---|---|
//! | win probability `f` | 0 | 1 | 0 |
//! | expected duration `g` | 0 | 0 | 1 |
//! | second factorial moment `h` | 0 | 0 | `2 sum_i p_i g(x + a_i)` |
//!
//! The dense route solves all `N - 1` equations at once. The reduced route
//! names `d_j = v(j)` for `j = 1..=a_r`, rewrites the equation at `y` as
//!
//! ```text
//! v(y + a_r) = (v(y) - sum_{i<r} p_i v(y + a_i) - c(y)) / p_r
//! ```
//!
//! and runs it forward as affine expressions in the `d_j`, so that only the
//! `a_r` equations on the upper band remain to be solved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, ratio, AffineExpr, LinearSystem, Rational};

/// The step table `[[a_1, p_1], ..., [a_r, p_r]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepDistribution {
    entries: Vec<(i64, Rational)>,
}

impl StepDistribution {
    /// Validates: steps strictly increasing, `a_1 < 0 < a_r`, every
    /// probability positive and the total exactly one.
    pub fn new(entries: Vec<(i64, Rational)>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidTable("need at least one negative and one positive step".into()));
        }
        if let Some(w) = entries.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidTable(format!("steps must be strictly increasing ({} is followed by {})", w[0].0, w[1].0)));
        }
        let first = entries[0].0;
        let last = entries[entries.len() - 1].0;
        if first >= 0 || last <= 0 {
            return Err(Error::InvalidTable(format!("smallest step must be negative and largest positive (got {first} and {last})")));
        }
        if let Some((a, p)) = entries.iter().find(|(_, p)| !p.is_positive()) {
            return Err(Error::InvalidTable(format!("probability of step {a} is {p}, must be positive")));
        }
        let total: Rational = entries.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(Error::InvalidTable(format!("probabilities sum to {total}, not 1")));
        }
        Ok(StepDistribution { entries })
    }

    /// Parses the JSON form `[[a_1,"num/den"], ...]`. Probabilities may
    /// also be bare JSON integers.
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |why: String| Error::InvalidTable(why);
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(format!("not JSON: {e}")))?;
        let rows = value.as_array().ok_or_else(|| bad("expected an array of [step, probability] pairs".into()))?;
        let mut entries = Vec::with_capacity(rows.len());
        for row in rows {
            let pair = row.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad(format!("{row} is not a pair")))?;
            let step = pair[0].as_i64().ok_or_else(|| bad(format!("step {} is not an integer", pair[0])))?;
            let prob = match &pair[1] {
                serde_json::Value::String(s) => parse_rational(s).map_err(|_| bad(format!("bad probability {s:?}")))?,
                serde_json::Value::Number(n) if n.is_i64() => Rational::from_integer(n.as_i64().unwrap().into()),
                other => return Err(bad(format!("probability {other} must be a \"num/den\" string"))),
            };
            entries.push((step, prob));
        }
        StepDistribution::new(entries)
    }

    pub fn to_json(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|(a, p)| format!("[{a},\"{p}\"]")).collect();
        format!("[{}]", parts.join(","))
    }

    /// The fair walk `[[-1, 1/2], [1, 1/2]]`.
    pub fn fair() -> Self {
        StepDistribution { entries: vec![(-1, ratio(1, 2)), (1, ratio(1, 2))] }
    }

    /// `[[-1, 1 - p], [1, p]]`.
    pub fn simple(p: Rational) -> Result<Self> {
        StepDistribution::new(vec![(-1, Rational::one() - &p), (1, p)])
    }

    pub fn entries(&self) -> &[(i64, Rational)] {
        &self.entries
    }

    /// `a_1`, the most negative step.
    pub fn min_step(&self) -> i64 {
        self.entries[0].0
    }

    /// `a_r`, the largest step.
    pub fn max_step(&self) -> i64 {
        self.entries[self.entries.len() - 1].0
    }

    /// `p_r`, the probability of the largest step.
    pub fn top_prob(&self) -> &Rational {
        &self.entries[self.entries.len() - 1].1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ruin1DProblem {
    n: usize,
    dist: StepDistribution,
}

impl Ruin1DProblem {
    pub fn new(n: usize, dist: StepDistribution) -> Result<Self> {
        if n < 2 {
            return Err(Error::out_of_range("N", format!("line length must be at least 2, got {n}")));
        }
        Ok(Ruin1DProblem { n, dist })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self) -> &StepDistribution {
        &self.dist
    }

    fn interior(&self) -> usize {
        self.n - 1
    }

    /// Whether the reduced route applies: its unknowns `1..=a_r` must all
    /// be interior positions.
    pub fn supports_reduction(&self) -> bool {
        (self.dist.max_step() as usize) < self.n
    }
}

/// Values at the interior starting points `x = 1 ..= N-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile1D {
    values: Vec<Rational>,
}

impl Profile1D {
    pub fn new(values: Vec<Rational>) -> Self {
        Profile1D { values }
    }

    /// Value at starting point `x` (1-based). Panics outside the interior.
    pub fn get(&self, x: usize) -> &Rational {
        &self.values[x - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_position(n: usize, x: i64) -> Result<()> {
    if x < 0 || x as usize > n {
        return Err(Error::out_of_range("x", format!("{x} is not in [0, {n}]")));
    }
    Ok(())
}

/// `x / N`, the fair-walk win probability.
pub fn classical_prob(n: usize, x: i64) -> Result<Rational> {
    check_position(n, x)?;
    Ok(ratio(x, n as i64))
}

/// `x (N - x)`, the fair-walk expected duration.
pub fn classical_duration(n: usize, x: i64) -> Result<Rational> {
    check_position(n, x)?;
    Ok(Rational::from_integer((x * (n as i64 - x)).into()))
}

/// `(1 - (q/p)^x) / (1 - (q/p)^N)` for the walk stepping `+1` with
/// probability `p` and `-1` with `q = 1 - p`.
pub fn asymmetric_prob(n: usize, x: i64, p: &Rational) -> Result<Rational> {
    check_position(n, x)?;
    if !p.is_positive() || p >= &Rational::one() {
        return Err(Error::out_of_range("p", format!("{p} is not in (0, 1)")));
    }
    if p == &ratio(1, 2) {
        return Err(Error::DegenerateParameter("p = 1/2 makes the closed form 0/0; use classical_prob".into()));
    }
    let rho = (Rational::one() - p) / p;
    let num = Rational::one() - num_traits::pow(rho.clone(), x as usize);
    let den = Rational::one() - num_traits::pow(rho, n);
    Ok(num / den)
}

/// Constant values on the absorbing bands.
struct Bands {
    lower: Rational,
    upper: Rational,
}

impl Bands {
    fn value(&self, n: usize, pos: i64) -> &Rational {
        if pos <= 0 {
            &self.lower
        } else {
            debug_assert!(pos >= n as i64);
            &self.upper
        }
    }
}

fn solve_dense_banded(problem: &Ruin1DProblem, bands: &Bands, forcing: &dyn Fn(i64) -> Rational) -> Result<Profile1D> {
    let n = problem.n;
    let size = problem.interior();
    let mut system = LinearSystem::<Rational>::zeros(size);
    for x in 1..=size as i64 {
        let row = (x - 1) as usize;
        system.add_coefficient(row, row, &Rational::one());
        let mut rhs = forcing(x);
        for (a, p) in problem.dist.entries() {
            let y = x + a;
            if y >= 1 && (y as usize) < n {
                system.add_coefficient(row, (y - 1) as usize, &-p);
            } else {
                rhs += p * bands.value(n, y);
            }
        }
        system.set_rhs(row, rhs);
    }
    Ok(Profile1D::new(system.solve()?))
}

/// `v(z) = (terms . d + constant / Q) / k_r^exp`, with integer `terms` over
/// the unknowns `d_1..d_{a_r}` and `Q` shared by the whole propagation.
struct Scaled {
    terms: Vec<BigInt>,
    constant: BigInt,
    exp: usize,
}

/// Scaled values at positions `a_1 + 1 ..= N + a_r - 1`, indexed from the
/// lowest absorbing position. With every probability written as `k_i / D`,
/// the recurrence solved for the top step becomes
/// `k_r v(y + a_r) = D v(y) - sum_{i<r} k_i v(y + a_i) - D c(y)`,
/// so the unknown coefficients stay integers and only the scale `k_r^y`
/// is carried separately.
struct Propagation {
    offset: i64,
    values: Vec<Scaled>,
    powers: Vec<BigInt>,
    constant_den: BigInt,
}

impl Propagation {
    fn at(&self, pos: i64) -> &Scaled {
        &self.values[(pos - self.offset) as usize]
    }

    fn scale(&self, s: &Scaled) -> &BigInt {
        &self.powers[s.exp]
    }

    fn affine(&self, pos: i64) -> AffineExpr {
        let s = self.at(pos);
        let den = self.scale(s);
        let terms = s.terms.iter().enumerate().map(|(j, t)| (j + 1, Rational::new(t.clone(), den.clone())));
        AffineExpr::from_terms(Rational::new(s.constant.clone(), den * &self.constant_den), terms)
    }

    /// Exact value at `pos` once the unknowns are known, written over their
    /// common denominator `common` as the integers `scaled`.
    fn value(&self, pos: i64, scaled: &[BigInt], common: &BigInt) -> Rational {
        let s = self.at(pos);
        let dot: BigInt = s.terms.iter().zip(scaled).map(|(t, e)| t * e).sum();
        let q = &self.constant_den;
        Rational::new(dot * q + &s.constant * common, self.scale(s) * common * q)
    }
}

fn propagate(problem: &Ruin1DProblem, lower: &Rational, forcing: &dyn Fn(i64) -> Rational) -> Propagation {
    let dist = &problem.dist;
    let (low, top) = (dist.min_step(), dist.max_step());
    let unknowns = top as usize;
    let offset = low + 1;
    let last = problem.n as i64 + top - 1;

    let common = dist.entries().iter().fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
    let weight = |p: &Rational| p.numer() * (&common / p.denom());
    let lower_steps: Vec<(i64, BigInt)> = dist.entries()[..dist.entries().len() - 1].iter().map(|(a, p)| (*a, weight(p))).collect();
    let k_top = weight(dist.top_prob());
    let forcings: Vec<Rational> = (1..problem.n as i64).map(forcing).collect();
    let constant_den = forcings.iter().fold(lower.denom().clone(), |acc, c| acc.lcm(c.denom()));
    let over_q = |r: &Rational| r.numer() * (&constant_den / r.denom());

    let mut powers = vec![BigInt::one()];
    let mut values: Vec<Scaled> = Vec::with_capacity((last - offset + 1) as usize);
    for _ in offset..=0 {
        values.push(Scaled { terms: vec![BigInt::zero(); unknowns], constant: over_q(lower), exp: 0 });
    }
    for j in 0..unknowns {
        let mut terms = vec![BigInt::zero(); unknowns];
        terms[j] = BigInt::one();
        values.push(Scaled { terms, constant: BigInt::zero(), exp: 0 });
    }
    for y in 1..problem.n as i64 {
        let exp = y as usize;
        powers.push(&powers[exp - 1] * &k_top);
        let lift = |s: &Scaled| &powers[exp - 1 - s.exp];
        let here = &values[(y - offset) as usize];
        let factor = &common * lift(here);
        let mut terms: Vec<BigInt> = here.terms.iter().map(|t| t * &factor).collect();
        let mut constant = &here.constant * &factor;
        for (a, k) in &lower_steps {
            let prev = &values[(y + a - offset) as usize];
            let factor = k * lift(prev);
            for (t, p) in terms.iter_mut().zip(&prev.terms) {
                *t -= p * &factor;
            }
            if !prev.constant.is_zero() {
                constant -= &prev.constant * &factor;
            }
        }
        let c = &forcings[exp - 1];
        if !c.is_zero() {
            constant -= over_q(c) * &common * &powers[exp - 1];
        }
        values.push(Scaled { terms, constant, exp });
    }
    Propagation { offset, values, powers, constant_den }
}

fn solve_reduced_banded(problem: &Ruin1DProblem, bands: &Bands, forcing: &dyn Fn(i64) -> Rational) -> Result<Profile1D> {
    if !problem.supports_reduction() {
        log::info!("N = {} does not exceed the largest step {}; using the dense solver", problem.n, problem.dist.max_step());
        return solve_dense_banded(problem, bands, forcing);
    }
    let top = problem.dist.max_step() as usize;
    let prop = propagate(problem, &bands.lower, forcing);
    let mut system = LinearSystem::<Rational>::zeros(top);
    for (row, pos) in (problem.n as i64..problem.n as i64 + top as i64).enumerate() {
        let s = prop.at(pos);
        for (j, c) in s.terms.iter().enumerate() {
            if !c.is_zero() {
                system.add_coefficient(row, j, &Rational::from_integer(c.clone()));
            }
        }
        let constant = Rational::new(s.constant.clone(), prop.constant_den.clone());
        system.set_rhs(row, &bands.upper * Rational::from_integer(prop.scale(s).clone()) - constant);
    }
    let d = system.solve()?;
    let common = d.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = d.iter().map(|v| v.numer() * (&common / v.denom())).collect();
    let values = (1..problem.n as i64).map(|x| prop.value(x, &scaled, &common)).collect();
    Ok(Profile1D::new(values))
}

fn prob_bands() -> Bands {
    Bands { lower: Rational::zero(), upper: Rational::one() }
}

fn zero_bands() -> Bands {
    Bands { lower: Rational::zero(), upper: Rational::zero() }
}

fn unit_forcing(_: i64) -> Rational {
    Rational::one()
}

fn zero_forcing(_: i64) -> Rational {
    Rational::zero()
}

/// Win probabilities from the full `(N-1) x (N-1)` system.
pub fn prob_dense(problem: &Ruin1DProblem) -> Result<Profile1D> {
    solve_dense_banded(problem, &prob_bands(), &zero_forcing)
}

/// Win probabilities from the `a_r x a_r` reduced system.
pub fn prob_reduced(problem: &Ruin1DProblem) -> Result<Profile1D> {
    solve_reduced_banded(problem, &prob_bands(), &zero_forcing)
}

pub fn duration_dense(problem: &Ruin1DProblem) -> Result<Profile1D> {
    solve_dense_banded(problem, &zero_bands(), &unit_forcing)
}

pub fn duration_reduced(problem: &Ruin1DProblem) -> Result<Profile1D> {
    solve_reduced_banded(problem, &zero_bands(), &unit_forcing)
}

/// The affine expressions the reduced route must set equal to the upper
/// band value (1 for probabilities), one per position `N ..= N + a_r - 1`.
pub fn prob_boundary_equations(problem: &Ruin1DProblem) -> Vec<AffineExpr> {
    boundary_equations(problem, &prob_bands(), &zero_forcing)
}

/// As [`prob_boundary_equations`], for the expected duration (each must
/// equal 0).
pub fn duration_boundary_equations(problem: &Ruin1DProblem) -> Vec<AffineExpr> {
    boundary_equations(problem, &zero_bands(), &unit_forcing)
}

fn boundary_equations(problem: &Ruin1DProblem, bands: &Bands, forcing: &dyn Fn(i64) -> Rational) -> Vec<AffineExpr> {
    let prop = propagate(problem, &bands.lower, forcing);
    let top = problem.dist.max_step();
    (problem.n as i64..problem.n as i64 + top).map(|pos| prop.affine(pos)).collect()
}

fn moment_forcing<'a>(problem: &'a Ruin1DProblem, g: &'a Profile1D) -> Result<impl Fn(i64) -> Rational + 'a> {
    if g.len() != problem.interior() {
        return Err(Error::out_of_range("duration profile", format!("length {} does not match N - 1 = {}", g.len(), problem.interior())));
    }
    let n = problem.n as i64;
    Ok(move |x: i64| {
        let mut sum = Rational::zero();
        for (a, p) in problem.dist.entries() {
            let y = x + a;
            if y >= 1 && y < n {
                sum += p * g.get(y as usize);
            }
        }
        sum * Rational::from_integer(2.into())
    })
}

/// `h(x) = E[T (T - 1)]` from the exact duration profile `g`, by the
/// reduced route.
pub fn second_factorial_moment(problem: &Ruin1DProblem, g: &Profile1D) -> Result<Profile1D> {
    let forcing = moment_forcing(problem, g)?;
    solve_reduced_banded(problem, &zero_bands(), &forcing)
}

/// Dense counterpart of [`second_factorial_moment`].
pub fn second_factorial_moment_dense(problem: &Ruin1DProblem, g: &Profile1D) -> Result<Profile1D> {
    let forcing = moment_forcing(problem, g)?;
    solve_dense_banded(problem, &zero_bands(), &forcing)
}

/// `V = g + h - g^2`.
pub fn variance_from(g: &Profile1D, h: &Profile1D) -> Profile1D {
    Profile1D::new(g.values.iter().zip(&h.values).map(|(g, h)| g + h - g * g).collect())
}

/// Variance of the duration, via the reduced route throughout.
pub fn variance(problem: &Ruin1DProblem) -> Result<Profile1D> {
    let g = duration_reduced(problem)?;
    let h = second_factorial_moment(problem, &g)?;
    Ok(variance_from(&g, &h))
}

/// Variance of the duration, via dense solves throughout.
pub fn variance_dense(problem: &Ruin1DProblem) -> Result<Profile1D> {
    let g = duration_dense(problem)?;
    let h = second_factorial_moment_dense(problem, &g)?;
    Ok(variance_from(&g, &h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::integer;

    fn example_table() -> StepDistribution {
        StepDistribution::new(vec![(-2, ratio(1, 2)), (1, ratio(1, 4)), (2, ratio(1, 4))]).unwrap()
    }

    fn thirds() -> StepDistribution {
        StepDistribution::new(vec![(-2, ratio(1, 3)), (1, ratio(1, 3)), (2, ratio(1, 3))]).unwrap()
    }

    #[test]
    fn table_validation() {
        let e = |v: Vec<(i64, Rational)>| StepDistribution::new(v).unwrap_err();
        assert!(matches!(e(vec![(1, ratio(1, 2)), (-1, ratio(1, 2))]), Error::InvalidTable(m) if m.contains("increasing")));
        assert!(matches!(e(vec![(1, ratio(1, 2)), (2, ratio(1, 2))]), Error::InvalidTable(m) if m.contains("negative")));
        assert!(matches!(e(vec![(-1, ratio(1, 2)), (1, ratio(1, 3))]), Error::InvalidTable(m) if m.contains("sum")));
        assert!(matches!(
            e(vec![(-1, integer(0)), (0, ratio(1, 2)), (1, ratio(1, 2))]),
            Error::InvalidTable(m) if m.contains("positive")
        ));
        assert!(StepDistribution::new(vec![(-1, ratio(1, 3)), (0, ratio(1, 3)), (1, ratio(1, 3))]).is_ok());
    }

    #[test]
    fn table_json() {
        let t = StepDistribution::from_json(r#"[[-2,"1/2"],[1,"1/4"],[2,"1/4"]]"#).unwrap();
        assert_eq!(t, example_table());
        assert_eq!(t.to_json(), r#"[[-2,"1/2"],[1,"1/4"],[2,"1/4"]]"#);
        assert_eq!(StepDistribution::from_json(r#"[[-1,"1/2"],[1,"1/2"]]"#).unwrap(), StepDistribution::fair());
        assert!(StepDistribution::from_json("[[-1, 0.5], [1, 0.5]]").is_err());
        assert!(StepDistribution::from_json("{}").is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(classical_prob(10, 5).unwrap(), ratio(1, 2));
        assert_eq!(classical_prob(10, 0).unwrap(), integer(0));
        assert_eq!(classical_prob(7, 3).unwrap(), ratio(3, 7));
        assert!(classical_prob(7, 8).is_err());
        assert!(classical_prob(7, -1).is_err());
        assert_eq!(classical_duration(10, 5).unwrap(), integer(25));
        assert_eq!(classical_duration(10, 0).unwrap(), integer(0));
        let p = ratio(2, 3);
        assert_eq!(asymmetric_prob(9, 9, &p).unwrap(), integer(1));
        assert_eq!(asymmetric_prob(9, 0, &p).unwrap(), integer(0));
        assert!(matches!(asymmetric_prob(9, 3, &ratio(1, 2)), Err(Error::DegenerateParameter(_))));
        assert!(asymmetric_prob(9, 3, &integer(1)).is_err());
    }

    #[test]
    fn classical_agree_with_dense() {
        let problem = Ruin1DProblem::new(10, StepDistribution::fair()).unwrap();
        let g = duration_dense(&problem).unwrap();
        for x in 1..10 {
            assert_eq!(g.get(x as usize), &classical_duration(10, x).unwrap());
        }
        let p = ratio(2, 3);
        let problem = Ruin1DProblem::new(10, StepDistribution::simple(p.clone()).unwrap()).unwrap();
        let f = prob_dense(&problem).unwrap();
        for x in 1..10 {
            assert_eq!(f.get(x as usize), &asymmetric_prob(10, x, &p).unwrap());
        }
    }

    #[test]
    fn example_profile_both_routes() {
        let problem = Ruin1DProblem::new(5, example_table()).unwrap();
        let expected = [ratio(1, 5), ratio(13, 45), ratio(23, 45), ratio(29, 45)];
        assert_eq!(prob_dense(&problem).unwrap().values(), &expected[..]);
        assert_eq!(prob_reduced(&problem).unwrap().values(), &expected[..]);
    }

    #[test]
    fn example_boundary_equations() {
        let problem = Ruin1DProblem::new(5, example_table()).unwrap();
        let eqs = prob_boundary_equations(&problem);
        assert_eq!(eqs.len(), 2);
        assert_eq!(eqs[0], AffineExpr::from_terms(integer(0), [(1, integer(18)), (2, integer(-9))]));
        assert_eq!(eqs[1], AffineExpr::from_terms(integer(0), [(1, integer(-34)), (2, integer(27))]));
        let d = [ratio(1, 5), ratio(13, 45)];
        assert_eq!(eqs[0].eval(&d).unwrap(), integer(1));
        assert_eq!(eqs[1].eval(&d).unwrap(), integer(1));
    }

    #[test]
    fn two_point_line() {
        // single interior state: win mass over mass of leaving
        let table = StepDistribution::new(vec![(-1, ratio(1, 6)), (0, ratio(1, 3)), (1, ratio(1, 4)), (3, ratio(1, 4))]).unwrap();
        let problem = Ruin1DProblem::new(2, table).unwrap();
        let expected = ratio(1, 2) / ratio(2, 3);
        assert_eq!(prob_dense(&problem).unwrap().values(), std::slice::from_ref(&expected));
        assert_eq!(prob_reduced(&problem).unwrap().values(), &[expected]);
        assert_eq!(duration_dense(&problem).unwrap().values(), &[ratio(3, 2)]);

        let fair = Ruin1DProblem::new(2, StepDistribution::fair()).unwrap();
        assert_eq!(duration_reduced(&fair).unwrap().values(), &[integer(1)]);
        assert_eq!(variance(&fair).unwrap().values(), &[integer(0)]);
        let g = duration_reduced(&fair).unwrap();
        assert_eq!(second_factorial_moment(&fair, &g).unwrap().values(), &[integer(0)]);
    }

    #[test]
    fn fair_duration_profile() {
        let problem = Ruin1DProblem::new(10, StepDistribution::fair()).unwrap();
        let expected: Vec<Rational> = [9, 16, 21, 24, 25, 24, 21, 16, 9].iter().map(|&v| integer(v)).collect();
        assert_eq!(duration_dense(&problem).unwrap().values(), &expected[..]);
        assert_eq!(duration_reduced(&problem).unwrap().values(), &expected[..]);
    }

    #[test]
    fn duration_routes_agree_on_example() {
        let problem = Ruin1DProblem::new(5, example_table()).unwrap();
        assert_eq!(duration_dense(&problem).unwrap(), duration_reduced(&problem).unwrap());
    }

    #[test]
    fn moment_routes_agree() {
        let problem = Ruin1DProblem::new(6, StepDistribution::fair()).unwrap();
        let g = duration_reduced(&problem).unwrap();
        assert_eq!(second_factorial_moment(&problem, &g).unwrap(), second_factorial_moment_dense(&problem, &g).unwrap());
        let short = Profile1D::new(vec![integer(1)]);
        assert!(second_factorial_moment(&problem, &short).is_err());
    }

    #[test]
    fn reduction_falls_back_on_short_lines() {
        let table = StepDistribution::new(vec![(-1, ratio(1, 2)), (3, ratio(1, 2))]).unwrap();
        let problem = Ruin1DProblem::new(3, table).unwrap();
        assert!(!problem.supports_reduction());
        assert_eq!(prob_reduced(&problem).unwrap(), prob_dense(&problem).unwrap());
        assert_eq!(duration_reduced(&problem).unwrap(), duration_dense(&problem).unwrap());
    }

    #[test]
    fn thirds_table_duration_digits() {
        let problem = Ruin1DProblem::new(10, thirds()).unwrap();
        let g = duration_dense(&problem).unwrap();
        assert_eq!(crate::exact::format_significant(g.get(5), 10), "8.613479400");
    }

    #[test]
    fn problem_validation() {
        assert!(Ruin1DProblem::new(1, StepDistribution::fair()).is_err());
    }
}

//! Two-dimensional gambler's ruin on the rectangle `[0, M] x [0, N]`.
//!
//! From an interior cell the particle steps left, up, right or down with
//! probabilities `pL, pU, pR, pB` and stops on reaching any side. Exit
//! probabilities are carried as a [`BoundaryMix`], the coefficients of the
//! formal labels `L, U, R, B`, so one solve yields all four.
//!
//! The reduced route names the first column, `d_y = v(1, y)`, and runs
//!
//! ```text
//! v(x+1, y) = (v(x, y) - pL v(x-1, y) - pU v(x, y+1) - pB v(x, y-1) - c(x, y)) / pR
//! ```
//!
//! across the grid; the right side then supplies `N - 1` equations in the
//! `N - 1` unknowns. Problems with `M < N` are transposed first so that the
//! shorter side carries the unknowns.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, ratio, AffineExpr, Linear, LinearSystem, Rational, ScaledSolution};
use crate::precise::{bits_for_digits, cot_pi, sin_pi, Real};

/// Step probabilities `(pL, pU, pR, pB)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Probs2D {
    pub l: Rational,
    pub u: Rational,
    pub r: Rational,
    pub b: Rational,
}

impl Probs2D {
    pub fn new(l: Rational, u: Rational, r: Rational, b: Rational) -> Result<Self> {
        for (name, p) in [("pL", &l), ("pU", &u), ("pR", &r), ("pB", &b)] {
            if !p.is_positive() {
                return Err(Error::InvalidProbabilities(format!("{name} = {p} must be positive")));
            }
        }
        let total = &l + &u + &r + &b;
        if !total.is_one() {
            return Err(Error::InvalidProbabilities(format!("pL + pU + pR + pB = {total}, not 1")));
        }
        Ok(Probs2D { l, u, r, b })
    }

    /// All four directions with probability 1/4.
    pub fn equal() -> Self {
        let q = ratio(1, 4);
        Probs2D { l: q.clone(), u: q.clone(), r: q.clone(), b: q }
    }

    /// Parses `"pL,pU,pR,pB"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidProbabilities(format!("expected four comma-separated rationals, got {text:?}")));
        }
        let p = parts
            .iter()
            .map(|s| parse_rational(s).map_err(|_| Error::InvalidProbabilities(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Probs2D::new(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone())
    }

    pub fn is_equal(&self) -> bool {
        *self == Probs2D::equal()
    }

    /// Probabilities after swapping the axes: left becomes bottom and right
    /// becomes up.
    pub fn transposed(&self) -> Self {
        Probs2D { l: self.b.clone(), u: self.r.clone(), r: self.u.clone(), b: self.l.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ruin2DProblem {
    m: usize,
    n: usize,
    probs: Probs2D,
}

impl Ruin2DProblem {
    pub fn new(m: usize, n: usize, probs: Probs2D) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::out_of_range("grid", format!("M and N must be at least 2, got {m} x {n}")));
        }
        Ok(Ruin2DProblem { m, n, probs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &Probs2D {
        &self.probs
    }

    pub fn transposed(&self) -> Self {
        Ruin2DProblem { m: self.n, n: self.m, probs: self.probs.transposed() }
    }

    fn is_interior(&self, x: i64, y: i64) -> bool {
        x > 0 && y > 0 && (x as usize) < self.m && (y as usize) < self.n
    }
}

/// One side of the rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    L,
    U,
    R,
    B,
}

/// Coefficients of the formal labels `L, U, R, B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryMix {
    pub l: Rational,
    pub u: Rational,
    pub r: Rational,
    pub b: Rational,
}

impl BoundaryMix {
    pub fn new(l: Rational, u: Rational, r: Rational, b: Rational) -> Self {
        BoundaryMix { l, u, r, b }
    }

    /// The bare label `side`.
    pub fn label(side: Side) -> Self {
        let mut mix = BoundaryMix::null();
        *mix.component_mut(side) = Rational::one();
        mix
    }

    pub fn component(&self, side: Side) -> &Rational {
        match side {
            Side::L => &self.l,
            Side::U => &self.u,
            Side::R => &self.r,
            Side::B => &self.b,
        }
    }

    fn component_mut(&mut self, side: Side) -> &mut Rational {
        match side {
            Side::L => &mut self.l,
            Side::U => &mut self.u,
            Side::R => &mut self.r,
            Side::B => &mut self.b,
        }
    }

    pub fn total(&self) -> Rational {
        &self.l + &self.u + &self.r + &self.b
    }

    /// Relabel after a transpose of the grid.
    pub fn transposed(&self) -> Self {
        BoundaryMix { l: self.b.clone(), u: self.r.clone(), r: self.u.clone(), b: self.l.clone() }
    }

    /// `{"L":"num/den","U":...,"R":...,"B":...}`
    pub fn to_json(&self) -> String {
        format!(r#"{{"L":"{}","U":"{}","R":"{}","B":"{}"}}"#, self.l, self.u, self.r, self.b)
    }
}

impl Linear for BoundaryMix {
    fn null() -> Self {
        BoundaryMix { l: Rational::zero(), u: Rational::zero(), r: Rational::zero(), b: Rational::zero() }
    }

    fn is_null(&self) -> bool {
        self.l.is_zero() && self.u.is_zero() && self.r.is_zero() && self.b.is_zero()
    }

    fn add_scaled(&mut self, factor: &Rational, other: &Self) {
        self.l.add_scaled(factor, &other.l);
        self.u.add_scaled(factor, &other.u);
        self.r.add_scaled(factor, &other.r);
        self.b.add_scaled(factor, &other.b);
    }

    fn scale(&mut self, factor: &Rational) {
        self.l *= factor;
        self.u *= factor;
        self.r *= factor;
        self.b *= factor;
    }

    fn denominator(&self) -> BigInt {
        [&self.u, &self.r, &self.b].iter().fold(self.l.denom().clone(), |acc, v| acc.lcm(v.denom()))
    }

    fn combine_int(&mut self, k: &BigInt, j: &BigInt, other: &Self) {
        self.l.combine_int(k, j, &other.l);
        self.u.combine_int(k, j, &other.u);
        self.r.combine_int(k, j, &other.r);
        self.b.combine_int(k, j, &other.b);
    }

    fn div_exact_int(&mut self, k: &BigInt) {
        self.l.div_exact_int(k);
        self.u.div_exact_int(k);
        self.r.div_exact_int(k);
        self.b.div_exact_int(k);
    }

    fn gcd_int(&self, acc: &BigInt) -> BigInt {
        [&self.u, &self.r, &self.b].iter().fold(self.l.gcd_int(acc), |g, v| v.gcd_int(&g))
    }
}

impl fmt::Display for BoundaryMix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (side, name) in [(Side::L, "L"), (Side::U, "U"), (Side::R, "R"), (Side::B, "B")] {
            let c = self.component(side);
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{c}*{name}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for BoundaryMix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("L", &self.l.to_string())?;
        map.serialize_entry("U", &self.u.to_string())?;
        map.serialize_entry("R", &self.r.to_string())?;
        map.serialize_entry("B", &self.b.to_string())?;
        map.end()
    }
}

/// Values on the interior cells `x = 1..M-1`, `y = 1..N-1`, stored with
/// `x` as the row index.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2D<T> {
    m: usize,
    n: usize,
    values: Vec<T>,
}

impl<T> Grid2D<T> {
    /// Builds from rows indexed by `x`, each holding the values for `y = 1..N-1`.
    pub fn from_rows(m: usize, n: usize, values: Vec<T>) -> Self {
        assert_eq!(values.len(), (m - 1) * (n - 1), "grid size mismatch");
        Grid2D { m, n, values }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, x: usize, y: usize) -> usize {
        assert!(x >= 1 && x < self.m && y >= 1 && y < self.n, "({x}, {y}) is not an interior cell");
        (x - 1) * (self.n - 1) + (y - 1)
    }

    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.values[self.index(x, y)]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.n - 1)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid2D<U> {
        Grid2D { m: self.m, n: self.n, values: self.values.iter().map(f).collect() }
    }

    /// The grid of the transposed problem, `(x, y) -> (y, x)`.
    pub fn transpose(&self) -> Grid2D<T>
    where
        T: Clone,
    {
        let mut values = Vec::with_capacity(self.values.len());
        for y in 1..self.n {
            for x in 1..self.m {
                values.push(self.get(x, y).clone());
            }
        }
        Grid2D { m: self.n, n: self.m, values }
    }
}

type Forcing<'a, C> = &'a dyn Fn(usize, usize) -> C;

fn solve_dense_grid<C: Linear>(problem: &Ruin2DProblem, boundary: &dyn Fn(Side) -> C, forcing: Forcing<C>) -> Result<Grid2D<C>> {
    let (m, n) = (problem.m, problem.n);
    let cols = n - 1;
    let p = &problem.probs;
    let mut system = LinearSystem::<C>::zeros((m - 1) * cols);
    let idx = |x: i64, y: i64| (x as usize - 1) * cols + (y as usize - 1);
    for x in 1..m as i64 {
        for y in 1..n as i64 {
            let row = idx(x, y);
            system.add_coefficient(row, row, &Rational::one());
            let mut rhs = forcing(x as usize, y as usize);
            for ((nx, ny), prob) in [((x - 1, y), &p.l), ((x, y + 1), &p.u), ((x + 1, y), &p.r), ((x, y - 1), &p.b)] {
                if problem.is_interior(nx, ny) {
                    system.add_coefficient(row, idx(nx, ny), &-prob);
                } else {
                    let side = if nx == 0 {
                        Side::L
                    } else if nx as usize == m {
                        Side::R
                    } else if ny == 0 {
                        Side::B
                    } else {
                        Side::U
                    };
                    rhs.add_scaled(prob, &boundary(side));
                }
            }
            system.set_rhs(row, rhs);
        }
    }
    Ok(Grid2D::from_rows(m, n, system.solve()?))
}

/// Column `x` of the propagation, scaled by `s_x`: for each `y = 0..=N`,
/// `s_x v(x, y) = terms . d + constant`.
struct ScaledColumn<C> {
    terms: Vec<Vec<BigInt>>,
    constants: Vec<C>,
    scale: BigInt,
}

fn integer_scaled<C: Linear>(value: &C, k: &BigInt) -> C {
    let mut out = value.clone();
    out.scale(&Rational::from_integer(k.clone()));
    out
}

/// Propagates the unknowns `d_y = v(1, y)` across to the column `x = M`.
/// With the probabilities written as `(l, u, r, b) / D` and `s_x = r s_(x-1)`
/// (`s_0 = s_1 = 1`), the recurrence solved for the right step becomes
/// `I_(x+1)(y) = D I_x(y) - u I_x(y+1) - b I_x(y-1) - l (s_x / s_(x-1)) I_(x-1)(y) - D s_x c(x, y)`,
/// which keeps every coefficient an integer.
fn propagate_to_right<C: Linear>(problem: &Ruin2DProblem, boundary: &dyn Fn(Side) -> C, forcing: Forcing<C>) -> ScaledColumn<C> {
    let (m, n) = (problem.m, problem.n);
    let p = &problem.probs;
    let common = [&p.l, &p.u, &p.r, &p.b].iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let weight = |q: &Rational| q.numer() * (&common / q.denom());
    let (kl, ku, kr, kb) = (weight(&p.l), weight(&p.u), weight(&p.r), weight(&p.b));
    let (bottom, top) = (boundary(Side::B), boundary(Side::U));
    let unknowns = n - 1;

    let edge = |col: &mut ScaledColumn<C>| {
        col.constants[0] = integer_scaled(&bottom, &col.scale);
        col.constants[n] = integer_scaled(&top, &col.scale);
    };
    let blank =
        |scale: BigInt| ScaledColumn { terms: vec![vec![BigInt::zero(); unknowns]; n + 1], constants: vec![C::null(); n + 1], scale };

    let mut prev = blank(BigInt::one());
    let left = boundary(Side::L);
    for y in 1..n {
        prev.constants[y] = left.clone();
    }
    let mut here = blank(BigInt::one());
    for y in 1..n {
        here.terms[y][y - 1] = BigInt::one();
    }
    edge(&mut here);
    let mut ratio_prev = BigInt::one();

    for x in 1..m {
        let mut next = blank(&here.scale * &kr);
        let lift = &kl * &ratio_prev;
        let unit = Rational::from_integer(common.clone() * &here.scale);
        for y in 1..n {
            let mut terms: Vec<BigInt> = here.terms[y].iter().map(|t| t * &common).collect();
            let mut constant = integer_scaled(&here.constants[y], &common);
            for (k, src) in [(&ku, &here.terms[y + 1]), (&kb, &here.terms[y - 1]), (&lift, &prev.terms[y])] {
                for (t, v) in terms.iter_mut().zip(src) {
                    if !v.is_zero() {
                        *t -= v * k;
                    }
                }
            }
            for (k, src) in [(&ku, &here.constants[y + 1]), (&kb, &here.constants[y - 1]), (&lift, &prev.constants[y])] {
                if !src.is_null() {
                    constant.add_scaled(&-Rational::from_integer(k.clone()), src);
                }
            }
            let c = forcing(x, y);
            if !c.is_null() {
                constant.add_scaled(&-&unit, &c);
            }
            next.terms[y] = terms;
            next.constants[y] = constant;
        }
        edge(&mut next);
        ratio_prev = if x == 1 { kr.clone() } else { ratio_prev };
        prev = here;
        here = next;
    }
    here
}

fn solve_reduced_grid<C: Linear>(problem: &Ruin2DProblem, boundary: &dyn Fn(Side) -> C, forcing: Forcing<C>) -> Result<Grid2D<C>> {
    let n = problem.n;
    let last = propagate_to_right(problem, boundary, forcing);
    let right = integer_scaled(&boundary(Side::R), &last.scale);
    let mut system = LinearSystem::<C>::zeros(n - 1);
    for y in 1..n {
        for (j, c) in last.terms[y].iter().enumerate() {
            if !c.is_zero() {
                system.add_coefficient(y - 1, j, &Rational::from_integer(c.clone()));
            }
        }
        let mut rhs = right.clone();
        rhs.add_scaled(&-Rational::one(), &last.constants[y]);
        system.set_rhs(y - 1, rhs);
    }
    let mut d = system.solve_fraction_free_scaled().expect("boundary coefficients are integers")?;
    d.reduce();
    Ok(fill_columns(problem, boundary, forcing, d))
}

/// Forward substitution from the known columns `x = 0` and `x = 1`, on
/// `w_x = s_x E v(x, .)` with `E` clearing the denominators of column 1
/// and of the forcing, so that the recurrence of [`propagate_to_right`]
/// runs on integers and each value is reduced only once.
fn fill_columns<C: Linear>(
    problem: &Ruin2DProblem,
    boundary: &dyn Fn(Side) -> C,
    forcing: Forcing<C>,
    first: ScaledSolution<C>,
) -> Grid2D<C> {
    let (m, n) = (problem.m, problem.n);
    let p = &problem.probs;
    let common = [&p.l, &p.u, &p.r, &p.b].iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let weight = |q: &Rational| q.numer() * (&common / q.denom());
    let (kl, ku, kr, kb) = (weight(&p.l), weight(&p.u), weight(&p.r), weight(&p.b));
    let (neg_u, neg_b) = (-&ku, -&kb);
    let one = BigInt::one();

    let sides = [Side::L, Side::U, Side::R, Side::B].map(boundary);
    let forcings: Vec<Vec<C>> = (1..m.saturating_sub(1)).map(|x| (1..n).map(|y| forcing(x, y)).collect()).collect();
    let extra = sides.iter().chain(forcings.iter().flatten()).fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()));
    let denom = &first.denominator * &extra;
    let to_int = |c: &C, k: &BigInt| integer_scaled(c, k);
    let forcings: Vec<Vec<C>> = forcings.iter().map(|col| col.iter().map(|c| to_int(c, &extra)).collect()).collect();
    let [left, top, _, bottom] = sides;

    let mut values = Vec::with_capacity((m - 1) * (n - 1));
    let mut prev: Vec<C> = vec![to_int(&left, &denom); n - 1];
    let mut here: Vec<C> = first.numerators.iter().map(|w| to_int(w, &extra)).collect();
    let mut scale = BigInt::one();
    let mut ratio_prev = BigInt::one();
    for x in 1..m {
        let unscale = Rational::new(BigInt::one(), &scale * &denom);
        values.extend(here.iter().map(|w| {
            let mut v = w.clone();
            v.scale(&unscale);
            v
        }));
        if x + 1 == m {
            break;
        }
        let edge_factor = &scale * &denom;
        let (low, high) = (to_int(&bottom, &edge_factor), to_int(&top, &edge_factor));
        let unit = -(&common * &scale * &first.denominator);
        let neg_l = -(&kl * &ratio_prev);
        let next: Vec<C> = (1..n)
            .map(|y| {
                let mut w = here[y - 1].clone();
                w.combine_int(&common, &neg_l, &prev[y - 1]);
                w.combine_int(&one, &neg_u, if y + 1 == n { &high } else { &here[y] });
                w.combine_int(&one, &neg_b, if y == 1 { &low } else { &here[y - 2] });
                w.combine_int(&one, &unit, &forcings[x - 1][y - 1]);
                w
            })
            .collect();
        scale *= &kr;
        ratio_prev = kr.clone();
        prev = std::mem::replace(&mut here, next);
    }
    Grid2D::from_rows(m, n, values)
}

/// Boundary equations of the reduced duration route: the affine values
/// at `x = M` that must vanish, in the orientation given (no transpose).
pub fn duration_boundary_equations(problem: &Ruin2DProblem) -> Vec<AffineExpr> {
    let last = propagate_to_right::<Rational>(problem, &|_| Rational::zero(), &|_, _| Rational::one());
    let den = Rational::from_integer(last.scale.clone());
    (1..problem.n)
        .map(|y| {
            let terms = last.terms[y].iter().enumerate().map(|(j, t)| (j + 1, Rational::from_integer(t.clone()) / &den));
            AffineExpr::from_terms(&last.constants[y] / &den, terms)
        })
        .collect()
}

fn mix_boundary(side: Side) -> BoundaryMix {
    BoundaryMix::label(side)
}

fn zero_mix(_: usize, _: usize) -> BoundaryMix {
    BoundaryMix::null()
}

fn zero_scalar(_: Side) -> Rational {
    Rational::zero()
}

fn unit_forcing(_: usize, _: usize) -> Rational {
    Rational::one()
}

/// Exit distributions from the full `(M-1)(N-1)` system.
pub fn prob2d_dense(problem: &Ruin2DProblem) -> Result<Grid2D<BoundaryMix>> {
    solve_dense_grid(problem, &mix_boundary, &zero_mix)
}

/// Exit distributions by column propagation.
pub fn prob2d_reduced(problem: &Ruin2DProblem) -> Result<Grid2D<BoundaryMix>> {
    if problem.m < problem.n {
        let grid = solve_reduced_grid(&problem.transposed(), &mix_boundary, &zero_mix)?;
        return Ok(grid.transpose().map(BoundaryMix::transposed));
    }
    solve_reduced_grid(problem, &mix_boundary, &zero_mix)
}

pub fn duration2d_dense(problem: &Ruin2DProblem) -> Result<Grid2D<Rational>> {
    solve_dense_grid(problem, &zero_scalar, &unit_forcing)
}

pub fn duration2d_reduced(problem: &Ruin2DProblem) -> Result<Grid2D<Rational>> {
    if problem.m < problem.n {
        return Ok(solve_reduced_grid(&problem.transposed(), &zero_scalar, &unit_forcing)?.transpose());
    }
    solve_reduced_grid(problem, &zero_scalar, &unit_forcing)
}

fn check_grid(problem: &Ruin2DProblem, g: &Grid2D<Rational>) -> Result<()> {
    if g.m != problem.m || g.n != problem.n {
        return Err(Error::out_of_range(
            "duration grid",
            format!("{} x {} does not match the problem's {} x {}", g.m, g.n, problem.m, problem.n),
        ));
    }
    Ok(())
}

fn moment_forcing<'a>(problem: &'a Ruin2DProblem, g: &'a Grid2D<Rational>) -> impl Fn(usize, usize) -> Rational + 'a {
    move |x, y| {
        let p = &problem.probs;
        let (x, y) = (x as i64, y as i64);
        let mut sum = Rational::zero();
        for ((nx, ny), prob) in [((x - 1, y), &p.l), ((x, y + 1), &p.u), ((x + 1, y), &p.r), ((x, y - 1), &p.b)] {
            if problem.is_interior(nx, ny) {
                sum += prob * g.get(nx as usize, ny as usize);
            }
        }
        sum * Rational::from_integer(2.into())
    }
}

/// Second factorial moment `h = E[T (T - 1)]` from the exact duration
/// grid, by column propagation.
pub fn second_moment2d(problem: &Ruin2DProblem, g: &Grid2D<Rational>) -> Result<Grid2D<Rational>> {
    check_grid(problem, g)?;
    if problem.m < problem.n {
        let t = problem.transposed();
        let gt = g.transpose();
        return Ok(solve_reduced_grid(&t, &zero_scalar, &moment_forcing(&t, &gt))?.transpose());
    }
    solve_reduced_grid(problem, &zero_scalar, &moment_forcing(problem, g))
}

pub fn second_moment2d_dense(problem: &Ruin2DProblem, g: &Grid2D<Rational>) -> Result<Grid2D<Rational>> {
    check_grid(problem, g)?;
    solve_dense_grid(problem, &zero_scalar, &moment_forcing(problem, g))
}

fn variance_from(g: &Grid2D<Rational>, h: &Grid2D<Rational>) -> Grid2D<Rational> {
    let values = g.values.iter().zip(&h.values).map(|(g, h)| g + h - g * g).collect();
    Grid2D::from_rows(g.m, g.n, values)
}

/// `V = g + h - g^2` on every interior cell, reduced route.
pub fn variance2d(problem: &Ruin2DProblem) -> Result<Grid2D<Rational>> {
    let g = duration2d_reduced(problem)?;
    let h = second_moment2d(problem, &g)?;
    Ok(variance_from(&g, &h))
}

pub fn variance2d_dense(problem: &Ruin2DProblem) -> Result<Grid2D<Rational>> {
    let g = duration2d_dense(problem)?;
    let h = second_moment2d_dense(problem, &g)?;
    Ok(variance_from(&g, &h))
}

/// Trigonometric values shared by every cell of one Kmet–Petkovšek
/// evaluation on an `M x M` grid with equal step probabilities.
pub struct KmetTables {
    m: usize,
    bits: u32,
    /// `sin(a pi / M)` for `a = 0..2M`.
    sin: Vec<Real>,
    /// `cot(k pi / 2M)` for odd `k`, indexed by `k / 2`.
    cot: Vec<Real>,
    /// `1 / (sin^2(k pi / 2M) + sin^2(l pi / 2M))` for odd `k, l`.
    weight: Vec<Vec<Real>>,
    scale: Real,
}

impl KmetTables {
    pub fn new(m: usize, digits: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::out_of_range("M", format!("must be at least 2, got {m}")));
        }
        if digits == 0 {
            return Err(Error::out_of_range("digits", "must be at least 1"));
        }
        // g grows like M^2, so carry extra digits for the integer part
        let bits = bits_for_digits(digits + 2 * (m as f64).log10().ceil() as u32);
        let mi = m as i64;
        let sin = (0..2 * mi).map(|a| sin_pi(a, mi, bits)).collect();
        let odd: Vec<i64> = (1..mi).step_by(2).collect();
        let cot = odd.iter().map(|&k| cot_pi(k, 2 * mi, bits)).collect();
        let half_sq: Vec<Real> = odd.iter().map(|&k| sin_pi(k, 2 * mi, bits).square()).collect();
        let weight = half_sq.iter().map(|sk| half_sq.iter().map(|sl| (sk + sl).recip()).collect()).collect();
        let scale = Real::from_int(4, bits).div_int(mi * mi);
        Ok(KmetTables { m, bits, sin, cot, weight, scale })
    }

    fn sin_at(&self, a: i64) -> &Real {
        &self.sin[a.rem_euclid(2 * self.m as i64) as usize]
    }

    /// The double sum at one cell, with `i = x` and `j = y`.
    pub fn eval(&self, x: i64, y: i64) -> Result<Real> {
        let m = self.m as i64;
        if !(0..=m).contains(&x) || !(0..=m).contains(&y) {
            return Err(Error::out_of_range("cell", format!("({x}, {y}) is outside [0, {m}]^2")));
        }
        if x == 0 || y == 0 || x == m || y == m {
            return Ok(Real::zero(self.bits));
        }
        let mut total = Real::zero(self.bits);
        for (ki, k) in (1..m).step_by(2).enumerate() {
            let mut inner = Real::zero(self.bits);
            for (li, l) in (1..m).step_by(2).enumerate() {
                let term = &(self.sin_at(x * l) * &self.cot[li]) * &self.weight[ki][li];
                inner = &inner + &term;
            }
            let outer = &(self.sin_at(y * k) * &self.cot[ki]) * &inner;
            total = &total + &outer;
        }
        Ok(&total * &self.scale)
    }
}

/// Expected duration at `(x, y)` on the `M x M` grid with all step
/// probabilities 1/4, from the Kmet–Petkovšek double trigonometric sum.
pub fn kmet_petkovsek(m: usize, x: i64, y: i64, digits: u32) -> Result<Real> {
    KmetTables::new(m, digits)?.eval(x, y)
}

/// [`kmet_petkovsek`] on every interior cell.
pub fn kmet_grid(m: usize, digits: u32) -> Result<Grid2D<Real>> {
    let tables = KmetTables::new(m, digits)?;
    let mut values = Vec::with_capacity((m - 1) * (m - 1));
    for x in 1..m as i64 {
        for y in 1..m as i64 {
            values.push(tables.eval(x, y)?);
        }
    }
    Ok(Grid2D::from_rows(m, m, values))
}

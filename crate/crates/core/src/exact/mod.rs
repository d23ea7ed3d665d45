//! Exact scalars, affine expressions over symbolic unknowns, and the dense
//! solver shared by every walk model.

mod affine;
mod linsolve;
mod rational;

pub use affine::{AffineExpr, Linear};
pub use linsolve::{solve_dense, LinearSystem, ScaledSolution};
pub use rational::{
    canonical, format_significant, integer, parse_decimal, parse_rational, ratio, round_half_even, round_to_places, significant_digits,
    to_f64, Rational,
};

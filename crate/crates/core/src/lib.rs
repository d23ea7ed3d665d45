//! Exact solvers for absorbing random walks.
//!
//! The crate covers the generalized gambler's ruin: a particle on a line or
//! a rectangle takes random steps until it is absorbed at a boundary. For
//! every model the crate computes the probability of each exit, the
//! expected duration and its variance, always in exact rational arithmetic.
//!
//! Two solution routes exist for the lattice models:
//!
//! * a *dense* route assembling one equation per interior position, and
//! * a *reduced* route that names only a handful of positions as symbolic
//!   unknowns, runs the recurrence forward as [`exact::AffineExpr`] values,
//!   and solves the small system the far boundary imposes.
//!
//! Both routes give identical rationals; the reduced one is far cheaper.
//!
//! ```
//! use ruinwalk::gr1d::{prob_reduced, Ruin1DProblem, StepDistribution};
//! use ruinwalk::exact::ratio;
//!
//! let table = StepDistribution::new(vec![(-2, ratio(1, 2)), (1, ratio(1, 4)), (2, ratio(1, 4))]).unwrap();
//! let problem = Ruin1DProblem::new(5, table).unwrap();
//! let f = prob_reduced(&problem).unwrap();
//! assert_eq!(f.get(1), &ratio(1, 5));
//! ```

pub mod error;
pub mod exact;
pub mod gr1d;
pub mod gr2d;
pub mod identify;
pub mod mcsim;
pub mod mirror;
pub mod precise;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/one-dimensional.md")]
    mod one_dimensional {}
    #[doc = include_str!("../../../book/src/two-dimensional.md")]
    mod two_dimensional {}
    #[doc = include_str!("../../../book/src/mirror.md")]
    mod mirror {}
    #[doc = include_str!("../../../book/src/identify.md")]
    mod identify {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
}

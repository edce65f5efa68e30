//! Exact feasibility checks for joint and upper probabilities of ±1 random
//! variables.
//!
//! Given prescribed means and product moments, [`joint::check_joint`] either
//! returns a joint distribution reproducing them or a Farkas certificate
//! proving none exists. All arithmetic is exact over the rationals.

pub mod cli;
pub mod error;
pub mod ghz;
pub mod io;
pub mod joint;
pub mod lp;
pub mod outcome;
pub mod quantum;
pub mod rational;
pub mod upper;

pub use error::{Error, Result};
pub use rational::Rational;

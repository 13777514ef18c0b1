//! Exact and high-precision computations around psi-class intersection
//! numbers on moduli spaces of curves, Hurwitz numbers and linear Hodge
//! integrals.
//!
//! The crate is `no_std` and only needs `alloc`. Exact values are
//! [`Rational`]s; numerical checks run on [`BigFloat`] at a caller chosen
//! precision.

#![no_std]

extern crate alloc;

pub mod asymptotics;
pub mod characters;
pub mod combinatorics;
pub mod cutjoin;
pub mod error;
pub mod hodge;
pub mod hurwitz;
pub mod linalg;
pub mod partition;
pub mod perm;
pub mod psi;
pub mod quadrature;
pub mod rational;
pub mod real;
pub mod series;
pub mod stratum;
pub mod theorem;
pub mod tolerances;
pub mod virasoro;

pub use error::{Error, Result};
pub use partition::Partition;
pub use rational::Rational;
pub use real::{BigFloat, RealContext};

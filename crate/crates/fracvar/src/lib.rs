//! Numerical fractional variational calculus.
//!
//! Building blocks: uniform grids and sampled functions ([`grid`]),
//! discrete Caputo / Riemann-Liouville operators ([`fracops`]), linear
//! fractional differential operators with formal adjoints ([`opalgebra`]),
//! fractional action functionals and Lagrange expressions ([`variational`]),
//! verification of the second-Noether identities for local transformations
//! ([`noether`]) and the fractional electromagnetic-field example
//! ([`emfield`]). Seeded families of smooth test functions live in
//! [`samples`].

#![allow(clippy::needless_range_loop)]

pub mod emfield;
pub mod error;
pub mod fracops;
pub mod opalgebra;
pub mod noether;
pub mod samples;
pub mod variational;
pub mod grid;

pub use error::{Error, Result};

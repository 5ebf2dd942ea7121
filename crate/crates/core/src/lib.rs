//! Numerical core for the first-eigenvalue problem of twisted complex
//! m-Hessian operators on model domains in ℂⁿ.
//!
//! The crate is organised around the variational picture: potentials and
//! measures live in [`fields`], the pointwise Hessian algebra (elementary
//! symmetric polynomials, cone membership, the radial reduction) in
//! [`hessian`], the energy/twist functionals in [`functionals`],
//! m-subharmonic envelopes and capacities in [`envelope`], the Dirichlet,
//! eigenvalue and semilinear solvers in [`solvers`], and the empirical
//! inequality audits in [`verify`].
//!
//! Everything is `no_std` + `alloc`; IO, persistence and the CLI live in the
//! companion `hesseig-cli` crate.

#![no_std]
// NaN-rejecting comparisons and index loops over node arrays are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_is_multiple_of)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod envelope;
mod error;
pub mod fields;
pub mod functionals;
pub mod hessian;
mod math;
pub mod rng;
pub mod solvers;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

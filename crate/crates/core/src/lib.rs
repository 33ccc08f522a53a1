//! Numerical core for overlap-gap experiments on random optimization problems.
//!
//! Everything here is `no_std` with `alloc`: p-spin coefficient tensors and
//! their Hamiltonians, spherical Langevin dynamics, orthonormal Fourier
//! polynomials on Gaussian space and the biased Boolean cube, rounding
//! schemes, sparse random graphs with independent-set heuristics and the
//! first-moment calculator, and the stability experiments that tie them
//! together. IO, file formats and the CLI live in the `ogplab` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod dynamics;
pub mod error;
pub mod graph;
pub mod poly;
pub mod rng;
pub mod rounding;
pub mod stability;
pub mod stats;
pub mod tensor;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

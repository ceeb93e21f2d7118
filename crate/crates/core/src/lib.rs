//! Generalized coherent states of the harmonic and Morse oscillators built by
//! tridiagonalizing the Hamiltonian (J-matrix method), together with the
//! special functions and quadrature needed to check them numerically.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod harmonic;
pub mod jmatrix;
pub mod morse;
pub mod quadrature;
pub mod specfun;
pub mod suite;

pub use error::{Error, Result};
pub use num_complex::Complex64;

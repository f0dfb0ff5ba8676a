//! Numerical toolkit for smoothness moduli, summation means and K-functionals
//! on the d-dimensional torus.

// NaN-aware comparisons are written as negations on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod quad;
pub mod spectral;
pub mod kfunctional;
pub mod moduli;
pub mod summation;
pub mod wiener;
pub mod banach;
pub mod lab;

pub use error::{Error, Result};
pub use spectral::{GridFunction, LebesgueExponent, Shape, Spectrum};
pub use summation::MultiplierDescriptor;

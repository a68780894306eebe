//! Fractional-order root finding for complex-analytic model functions.
//!
//! This crate implements Newton-type and Traub-type iterations in which the
//! classical first derivative is replaced by a fractional derivative of order
//! `alpha` in `(0, 1]`, in either the Caputo or the Riemann-Liouville sense.
//! Model functions are finite sums of real-exponent power terms and complex
//! exponentials, for which both fractional derivatives have closed forms in
//! terms of the Gamma and Mittag-Leffler functions.
//!
//! The crate is organized in five layers:
//!
//! * [`specfun`] — complex Gamma, log-Gamma, generalized binomial
//!   coefficients, and the two-parameter Mittag-Leffler function.
//! * [`funcmodel`] — the symbolic function model, its closed-form fractional
//!   derivatives, and an independent quadrature evaluation of the same
//!   derivatives used for cross-validation.
//! * [`solvers`] — the six iteration variants (damped fractional Newton,
//!   exponent-corrected fractional Newton, and fractional Traub, each in
//!   Caputo and Riemann-Liouville flavors) plus the common iteration driver.
//! * [`analysis`] — computational order of convergence and the theoretical
//!   error-constant expressions the iterations are expected to track.
//! * [`planes`] — deterministic convergence-plane rasterization over a grid
//!   of starting points and fractional orders, with PPM and CSV writers.
//!
//! Everything in the crate is deterministic: no randomness, no
//! time-dependent state, and parallel plane generation partitions work so
//! that results are byte-identical for any worker count.
//!
//! # Example
//!
//! ```
//! use fracroot::funcmodel::{builtin_model, DerivKind, FracSpec};
//! use fracroot::solvers::{solve, MethodKind, SolverConfig};
//! use num_complex::Complex;
//!
//! // Solve f1(x) = 0 starting from x0 = -1.5 with the classical limit
//! // alpha = 1 (fractional Newton reduces exactly to Newton's method).
//! let f = builtin_model("f1").unwrap();
//! let config = SolverConfig::new(1.0, 0.0).unwrap();
//! let trace = solve(MethodKind::Cfn1, &f, Complex::new(-1.5, 0.0), &config).unwrap();
//! assert_eq!(trace.iterations, 6);
//! assert!((trace.final_iterate().re - -0.584).abs() < 1e-3);
//! ```

// Quadrature node tables, Lanczos coefficients, and frozen reference values
// in tests keep all digits of their source computations; the extra digits
// document the value even where f64 rounds them away.
#![allow(clippy::excessive_precision)]

pub mod analysis;
pub mod error;
pub mod funcmodel;
pub mod planes;
mod quadrature;
pub mod solvers;
pub mod specfun;

/// Complex scalar used throughout the crate: double-precision complex value.
pub type ComplexValue = num_complex::Complex<f64>;

pub use error::{Error, Result};

//! Fixed-point tooling over finite metric, Dhage and Mustafa-Sims spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`metric`]: finite carriers, binary distance tables, metric and almost
//!   metric checkers, diameters.
//! * [`gmetric`]: ternary tables, Dhage and Mustafa-Sims axiom checkers, the
//!   derived metrics `b, c, d, e` and the consequences they satisfy.
//! * [`comparison`]: comparison functions and their properties.
//! * [`contraction`]: orbital segments, the contraction functionals
//!   `A, B, P, Q, M`, certificates and the G-to-metric reduction check.
//! * [`picard`]: Picard iteration with step, diameter, envelope and rate
//!   diagnostics, plus a brute-force fixed-point oracle.
//! * [`cli`]: space files, command dispatch and reports.

// Negated float comparisons are deliberate: they reject NaN along with
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod comparison;
pub mod contraction;
mod error;
pub mod gmetric;
pub mod metric;
pub mod picard;

pub use error::{Error, Result};

/// Comparison tolerance used when none is given.
pub const DEFAULT_TOL: f64 = 1e-9;

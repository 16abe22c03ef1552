//! Configurable-precision evaluation of the Hurwitz zeta function ζ(s,a).
//!
//! Every evaluator computes the entire function φ(s,a) = (s−1)ζ(s,a) and
//! derives ζ from it away from the pole at s = 1. The available routes are
//!
//! * kernel integrals over the half-line ([`integral`]), including the
//!   integration-by-parts continuation to ℜ(s) ≤ 0,
//! * alternating binomial series built from the sums S_n(s,a) ([`series`],
//!   [`sums`]),
//! * Taylor/Laurent coefficients about an arbitrary point ([`laurent`]),
//! * independent classical references for cross-checking ([`oracles`]).
//!
//! Arithmetic is carried out with MPFR floats; precision travels with the
//! values and with [`EvalConfig`], never through global state.

pub mod error;
pub mod integral;
pub mod kernels;
pub mod laurent;
pub mod mp;
pub mod oracles;
pub mod quadrature;
pub mod series;
pub mod sums;

pub use error::{Error, Result};
pub use integral::{EvalResult, Method};
pub use mp::{ComplexPoint, EvalConfig, MpComplex, MpReal, ShiftParameter};

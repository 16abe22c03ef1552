//! Precision-carrying real/complex arithmetic and the shared special
//! functions (Γ, digamma, Bernoulli numbers and polynomials).
//!
//! `MpReal` is an MPFR float. Every value owns its precision; operations in
//! this crate produce results at the maximum precision of their operands.

mod bernoulli;
mod complex;
mod gamma;

pub(crate) use bernoulli::bernoulli_cached;
pub use bernoulli::{
    bernoulli_numbers, bernoulli_poly, bernoulli_poly_exact, bernoulli_poly_scaled_values,
};
pub use complex::{complex_pow, complex_pow_neg, MpComplex};
pub use gamma::{digamma, gamma, gamma_real};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision real number.
pub type MpReal = Float;

/// An evaluation point s. Both parts share one precision.
pub type ComplexPoint = MpComplex;

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 64;

/// Default number of decimal digits requested by front ends.
pub const DEFAULT_DIGITS: u32 = 30;

/// Default number of series terms the alternating-sum evaluators may plan for.
pub const DEFAULT_MAX_TERMS: u64 = 100_000;

/// Default budget of S_n values the series path actually materialises.
pub const DEFAULT_SERIES_WORK_TERMS: u64 = 2048;

/// Default finest quadrature level (step 2^-levels).
pub const DEFAULT_QUAD_LEVELS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Bits needed to hold `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32
}

/// Internal digits used for a request of `digits`: ⌈1.2·digits⌉ + 10.
pub fn guarded_digits(digits: u32) -> u32 {
    (f64::from(digits) * 1.2).ceil() as u32 + 10
}

/// Evaluation settings shared by every evaluator.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Working precision in bits (already includes guard digits).
    pub precision_bits: u32,
    /// Upper limit on the series length the evaluators may plan for.
    pub max_terms: u64,
    /// Finest quadrature level; the step at level ℓ is 2^-ℓ.
    pub quad_levels: u32,
    /// Tolerance target (relative for values of size ≥ 1, absolute below).
    pub target_tol: MpReal,
    /// Number of S_n values the series path computes before giving up on
    /// the target and returning its partial sum.
    pub series_work_terms: u64,
}

impl EvalConfig {
    /// Configuration for `digits` requested decimal digits: guard digits are
    /// added to the working precision and the target is 10^-digits.
    pub fn with_digits(digits: u32) -> Self {
        let digits = digits.max(1);
        let precision_bits = digits_to_bits(guarded_digits(digits)).max(MIN_PRECISION);
        let target_tol = Float::with_val(precision_bits, Float::parse(format!("1e-{digits}")).unwrap());
        EvalConfig {
            precision_bits,
            max_terms: DEFAULT_MAX_TERMS,
            quad_levels: DEFAULT_QUAD_LEVELS,
            target_tol,
            series_work_terms: DEFAULT_SERIES_WORK_TERMS,
        }
    }

    pub fn with_target(mut self, tol: f64) -> Self {
        self.target_tol = Float::with_val(self.precision_bits, tol);
        self
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_quad_levels(mut self, levels: u32) -> Self {
        self.quad_levels = levels;
        self
    }

    pub fn with_series_work_terms(mut self, terms: u64) -> Self {
        self.series_work_terms = terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < MIN_PRECISION {
            return Err(Error::domain(format!(
                "precision_bits must be at least {MIN_PRECISION}, got {}",
                self.precision_bits
            )));
        }
        if self.max_terms < 1 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        if self.target_tol.is_nan() || self.target_tol.cmp0() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::domain("target_tol must be positive"));
        }
        Ok(())
    }

    /// A real at the working precision.
    pub fn real<T>(&self, value: T) -> MpReal
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.precision_bits, value)
    }

    /// Target tolerance as an `f64` (clamped away from zero).
    pub fn target_f64(&self) -> f64 {
        let t = self.target_tol.to_f64();
        if t > 0.0 {
            t
        } else {
            f64::MIN_POSITIVE
        }
    }

    /// log2 of the target tolerance; exact even when it underflows an `f64`.
    pub fn target_log2(&self) -> f64 {
        log2_abs(&self.target_tol)
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig::with_digits(DEFAULT_DIGITS)
    }
}

/// The Hurwitz shift a. Construction enforces 0 ≤ a ≤ 1; paths that need
/// a > 0 call [`ShiftParameter::require_positive`].
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftParameter(MpReal);

impl ShiftParameter {
    pub fn new(a: MpReal) -> Result<Self> {
        if a.is_nan() || a < 0 || a > 1 {
            return Err(Error::domain(format!("shift a must satisfy 0 <= a <= 1, got {a}")));
        }
        Ok(ShiftParameter(a))
    }

    /// Parse a decimal string at `prec` bits (correctly rounded).
    pub fn parse(prec: u32, text: &str) -> Result<Self> {
        ShiftParameter::new(parse_real(prec, text)?)
    }

    /// a + 1, used internally by the shifted representations. Only the
    /// [0, 1] range check is bypassed.
    pub(crate) fn plus_one(&self) -> Self {
        ShiftParameter(Float::with_val(self.0.prec(), &self.0 + 1u32))
    }

    pub fn from_f64(prec: u32, a: f64) -> Result<Self> {
        ShiftParameter::new(Float::with_val(prec.max(MIN_PRECISION), a))
    }

    pub fn value(&self) -> &MpReal {
        &self.0
    }

    pub fn require_positive(&self) -> Result<()> {
        if self.0.is_zero() {
            return Err(Error::domain("this representation requires 0 < a <= 1"));
        }
        Ok(())
    }

    /// Copy of `a` at precision `prec`.
    pub fn at_prec(&self, prec: u32) -> MpReal {
        Float::with_val(prec, &self.0)
    }
}

/// Parse a decimal real at `prec` bits.
pub fn parse_real(prec: u32, text: &str) -> Result<MpReal> {
    let parsed = Float::parse(text.trim())
        .map_err(|e| Error::domain(format!("cannot parse {text:?} as a real number: {e}")))?;
    Ok(Float::with_val(prec.max(MIN_PRECISION), parsed))
}

/// π at `prec` bits.
pub fn pi(prec: u32) -> MpReal {
    Float::with_val(prec, Constant::Pi)
}

/// 2^e at `prec` bits.
pub fn pow2(prec: u32, e: i64) -> MpReal {
    let e = e.clamp(i64::from(i32::MIN / 2), i64::from(i32::MAX / 2)) as i32;
    Float::with_val(prec, Float::i_exp(1, e))
}

/// log2|x| as an `f64`, valid far outside the `f64` exponent range.
/// Returns −∞ for zero.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if x.is_infinite() || x.is_nan() {
        return f64::INFINITY;
    }
    let (mantissa, exp) = x.to_f64_exp();
    mantissa.abs().log2() + f64::from(exp)
}

/// Largest of two precisions.
pub(crate) fn max_prec(a: u32, b: u32) -> u32 {
    a.max(b)
}

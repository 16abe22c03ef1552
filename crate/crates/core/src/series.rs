//! Series representations
//!
//! φ(s,a) = Σ_{n≥1} S_n(s,a)·(1/(n+1) + (a−1)/n),
//!
//! and the shifted form (s−1)(ζ(s,a) − a^(−s)) = Σ S_n(s,a+1)·(1/(n+1) + a/n).
//!
//! Convergence is only like N^(−a), so the number of terms needed for a
//! tight target is usually out of reach. The evaluators predict the required
//! length from a rigorous majorant, compute at most
//! `EvalConfig::series_work_terms` sums and return an accuracy error with
//! the partial value when the target is missed.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::integral::{EvalResult, Method};
use crate::mp::{gamma, gamma_real, log2_abs, EvalConfig, MpComplex, ShiftParameter};
use crate::sums::{dominating_tail_bound, s_n_direct, split_theta, SnTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// S_n(s,a)·(1/(n+1) + (a−1)/n)
    B,
    /// S_n(s,a+1)·(1/(n+1) + a/n)
    F,
}

/// 1/(n+1) + c/n.
fn weight(n: u64, c: &Float) -> Float {
    let p = c.prec();
    Float::with_val(p, Float::with_val(p, n + 1).recip_ref()) + Float::with_val(p, c / n)
}

/// The n-th term of either series.
pub fn series_term(n: u64, s: &MpComplex, a: &ShiftParameter, variant: Variant, cfg: &EvalConfig) -> Result<MpComplex> {
    let p = cfg.precision_bits;
    let (shift, c) = match variant {
        Variant::B => (a.clone(), Float::with_val(p, a.value() - 1u32)),
        Variant::F => (a.plus_one(), a.at_prec(p)),
    };
    let sn = s_n_direct(n, s, &shift, cfg)?;
    Ok(sn.value.mul_real(&weight(n, &c)))
}

/// Terms needed for the rigorous tail to drop below 2^tol_log2 (saturating).
fn required_terms(s: &MpComplex, b: &ShiftParameter, c: &Float, tol_log2: f64) -> Result<u64> {
    let theta = split_theta(&b.at_prec(64)).to_f64();
    // bound(N) = C0 (N^(−1−θ) + N^(−θ)/θ); C0 from N = 1
    let at_one = dominating_tail_bound(1, s, b, c)?;
    let c0 = log2_abs(&at_one) - (1.0 + 1.0 / theta).log2();
    let log2_bound = |n: f64| c0 + (n.powf(-1.0 - theta) + n.powf(-theta) / theta).log2();
    if log2_bound(1.0) <= tol_log2 {
        return Ok(1);
    }
    let mut hi = 2.0f64;
    while log2_bound(hi) > tol_log2 {
        hi *= 2.0;
        if hi > 1e18 {
            return Ok(u64::MAX);
        }
    }
    let mut lo = hi / 2.0;
    // f64 spacing exceeds 1 near 2^53, so stop at a relative width as well
    while hi - lo > 1.0f64.max(hi * 1e-12) {
        let mid = ((lo + hi) / 2.0).floor();
        if log2_bound(mid) > tol_log2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi as u64)
}

/// Empirical tail Γ(b)/|Γ(s)|·N^(−b)(ln N)^(σ−1), from the large-n estimate
/// of S_n times the weight ≈ b/n.
fn fitted_tail(n: u64, s: &MpComplex, b: &ShiftParameter) -> Result<f64> {
    let p = 64;
    let bv = b.at_prec(p);
    let nf = Float::with_val(p, n.max(3));
    let g = gamma_real(&bv)?;
    let gs = gamma(&s.with_prec(p))?.abs();
    let ln_n = Float::with_val(p, nf.ln_ref());
    let sig = Float::with_val(p, &s.re - 1u32);
    let v = g / gs / Float::with_val(p, (&nf).pow(&bv)) * ln_n.pow(&sig);
    Ok(v.to_f64())
}

fn non_positive_integer(s: &MpComplex) -> Option<u64> {
    let k = s.as_real_integer()?;
    if k <= 0 {
        (-k).to_u64()
    } else {
        None
    }
}

fn series_core(
    s: &MpComplex,
    b: &ShiftParameter,
    report_a: &Float,
    cfg: &EvalConfig,
    method: Method,
) -> Result<EvalResult> {
    cfg.validate()?;
    if cfg.max_terms < 2 {
        return Err(Error::domain("the series evaluators need max_terms >= 2"));
    }
    let p = cfg.precision_bits;
    let s = s.with_prec(p);
    let c = Float::with_val(p, b.value() - 1u32);
    let budget = cfg.max_terms.min(cfg.series_work_terms.max(2));
    let tol_log2 = cfg.target_log2();

    let positive = s.re.cmp0() == Some(std::cmp::Ordering::Greater);
    let (n_terms, required) = if let Some(k) = non_positive_integer(&s) {
        // S_n(−k, ·) vanishes for n ≥ k + 2, so the sum is finite
        (k + 1, k + 1)
    } else if positive {
        let need = required_terms(&s, b, &c, tol_log2 - 1.0)?;
        (need.min(budget), need)
    } else {
        (budget, u64::MAX)
    };

    let table = SnTable::build(&s, b, n_terms, cfg)?;
    let mut sum = MpComplex::zero(p);
    let mut err = Float::with_val(64, 0);
    for e in &table.entries {
        let w = weight(e.n, &c);
        sum += &e.value.mul_real(&w);
        err += Float::with_val(64, &e.err * w.abs());
    }
    err += Float::with_val(64, sum.abs_f64()) * Float::with_val(64, Float::i_exp(1, 2 - p as i32));

    let mut caveat = None;
    if non_positive_integer(&s).is_none() {
        if positive {
            let rigorous = dominating_tail_bound(n_terms, &s, b, &c)?;
            let fitted = fitted_tail(n_terms, &s, b)?;
            let tail = if rigorous.to_f64() > fitted { rigorous } else { Float::with_val(64, fitted) };
            err += tail;
        } else {
            caveat = Some("Re(s) <= 0: no tail bound is available for the series; the error estimate is unbounded".to_string());
            err = Float::with_val(64, rug::float::Special::Infinity);
        }
    }
    let mut result = EvalResult::new(&s, report_a, sum, err, method, n_terms);
    result.caveat = caveat;
    if positive && n_terms < required {
        let reason = if required == u64::MAX {
            "the tail bound cannot reach the target in any practical number of terms".to_string()
        } else {
            format!("the tail bound needs {required} terms; {n_terms} were computed")
        };
        return Err(Error::Accuracy {
            reason,
            best: Box::new(result),
        });
    }
    Ok(result)
}

/// φ(s,a) from Σ S_n(s,a)(1/(n+1) + (a−1)/n), 0 < a ≤ 1.
///
/// For ℜ(s) ≤ 0 the value is returned with a caveat and an infinite error
/// estimate, except at s = 0, −1, −2, … where the sum is finite.
pub fn phi_series(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<EvalResult> {
    a.require_positive()?;
    series_core(s, a, &a.at_prec(cfg.precision_bits), cfg, Method::Series)
}

/// (s−1)(ζ(s,a) − a^(−s)) = Σ S_n(s,a+1)(1/(n+1) + a/n), 0 ≤ a ≤ 1.
pub fn phi_shifted_series(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<EvalResult> {
    series_core(s, &a.plus_one(), &a.at_prec(cfg.precision_bits), cfg, Method::ShiftedSeries)
}

use std::f64::consts::{LN_2, LOG2_E, PI};

use rug::ops::NegAssign;
use rug::Float;

use super::{pi, MpComplex, MIN_PRECISION};
use crate::error::{Error, Result};

/// Γ(z) at the precision of `z`.
///
/// Re z < 1/2 goes through the reflection formula; otherwise z is shifted
/// into [1/2, 3/2) and Γ is taken from the lower incomplete gamma series
/// γ(z, X) = X^z e^(−X) Σ_k X^k / (z)_(k+1), with X large enough that the
/// dropped upper part Γ(z, X) is below the target.
pub fn gamma(z: &MpComplex) -> Result<MpComplex> {
    let p = z.prec().max(MIN_PRECISION);
    if let Some(n) = z.as_real_integer() {
        if n <= 0 {
            return Err(Error::Pole {
                function: "gamma",
                at: n.to_string(),
            });
        }
    }
    if z.re < 0.5 {
        return reflected(z, p);
    }
    Ok(shifted(z, p))
}

/// Γ(x) for real x, not a non-positive integer.
pub fn gamma_real(x: &Float) -> Result<Float> {
    Ok(gamma(&MpComplex::from_real(x.clone()))?.re)
}

fn reflected(z: &MpComplex, p: u32) -> Result<MpComplex> {
    let w = p + 16;
    // sin(πz) = (−1)^n sin(π(z − n)); z − n is exact at this precision.
    let n = z.re.to_integer_round(rug::float::Round::Nearest).map(|(n, _)| n).unwrap();
    let frac = MpComplex::new(Float::with_val(w, &z.re - &n), Float::with_val(w, &z.im));
    let mut sin = frac.mul_real(&pi(w)).sin();
    if n.is_odd() {
        sin = -sin;
    }
    let one_minus = MpComplex::new(Float::with_val(w, 1 - &z.re), Float::with_val(w, -&z.im));
    let g = shifted(&one_minus, w);
    let den = &sin * &g;
    Ok((&MpComplex::from_real(pi(w)) / &den).with_prec(p))
}

fn shifted(z: &MpComplex, p: u32) -> MpComplex {
    let m = (z.re.to_f64() - 0.5).floor().max(0.0) as u64;
    let lost = (PI * z.im.to_f64().abs() / 2.0 * LOG2_E).ceil() + 4.0;
    let x_cut = cutoff(f64::from(p) + 10.0 + lost);
    let w = p + (2.0 * lost + 2.0 * x_cut.log2()) as u32 + 20 + bits_of(m);
    let zw = z.with_prec(w);
    let base = zw.add_real(&Float::with_val(w, -(m as f64)));
    let mut g = incomplete_series(&base, x_cut, w);
    for j in 0..m {
        let factor = base.add_real(&Float::with_val(w, j));
        g *= &factor;
    }
    g.with_prec(p)
}

fn bits_of(m: u64) -> u32 {
    64 - m.leading_zeros()
}

/// Smallest X (roughly) with 2√X e^(−X) ≤ 2^(−bits).
fn cutoff(bits: f64) -> f64 {
    let mut x = bits * LN_2 + 2.0;
    for _ in 0..8 {
        x = bits * LN_2 + LN_2 + 0.5 * x.ln();
    }
    x.ceil()
}

fn incomplete_series(z: &MpComplex, x_cut: f64, w: u32) -> MpComplex {
    let x = Float::with_val(w, x_cut);
    // term_k = X^k / (z)_(k+1)
    let mut term = z.recip();
    let mut sum = term.clone();
    let stop_log2 = -f64::from(w);
    let mut k: u64 = 0;
    loop {
        k += 1;
        let den = z.add_real(&Float::with_val(w, k));
        term = (&term.mul_real(&x)) / &den;
        sum += &term;
        if (k as f64) >= 2.0 * x_cut && term.log2_abs() < stop_log2 + sum.log2_abs() {
            break;
        }
    }
    let mut minus_x = x.clone();
    minus_x.neg_assign();
    let scale = z.mul_real(&Float::with_val(w, x.ln_ref())).add_real(&minus_x).exp();
    &scale * &sum
}

/// ψ(x) = Γ′(x)/Γ(x) for real x > 0.
///
/// The argument is pushed up to y ≥ max(prec, 16) by ψ(x) = ψ(x+1) − 1/x and
/// the asymptotic series ln y − 1/(2y) − Σ B_2k/(2k y^2k) is summed there.
pub fn digamma(x: &Float) -> Result<Float> {
    if x.is_nan() || x.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::domain(format!("digamma needs x > 0, got {x}")));
    }
    let p = x.prec().max(MIN_PRECISION);
    let target = f64::from(p.max(16));
    let shift = (target - x.to_f64()).ceil().max(0.0) as u64;
    let w = p + 16 + bits_of(shift);
    let xw = Float::with_val(w, x);
    let mut head = Float::new(w);
    for j in 0..shift {
        head += Float::with_val(w, Float::with_val(w, &xw + j).recip_ref());
    }
    let y = Float::with_val(w, &xw + shift);
    let mut acc = Float::with_val(w, y.ln_ref());
    acc -= Float::with_val(w, Float::with_val(w, &y * 2u32).recip_ref());
    let y2 = Float::with_val(w, y.square_ref());
    let kmax = (p as usize) / 8 + 8;
    let b = super::bernoulli_cached(2 * kmax);
    let mut ypow = y2.clone();
    let stop_log2 = -f64::from(w) + super::log2_abs(&acc);
    for k in 1..=kmax {
        let term = Float::with_val(w, &b[2 * k]) / (Float::with_val(w, &ypow * (2 * k) as u64));
        let small = super::log2_abs(&term) < stop_log2;
        acc -= term;
        if small {
            break;
        }
        ypow *= &y2;
    }
    acc -= head;
    Ok(Float::with_val(p, acc))
}

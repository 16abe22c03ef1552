//! Classical reference values for ζ(s,a), independent of the kernel
//! representations.

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{bernoulli_cached, bernoulli_poly, complex_pow_neg, gamma, EvalConfig, MpComplex, ShiftParameter};
use crate::quadrature::{quad_halfline, DecayHint};

const HEAD_TERMS: u64 = 50;
const CORRECTION_ORDER: u64 = 8;

/// An oracle value of ζ(s,a) with its error bound.
#[derive(Clone, Debug)]
pub struct OracleEstimate {
    pub value: MpComplex,
    pub err: Float,
}

fn require_right_of_one(s: &MpComplex) -> Result<()> {
    if s.re <= 1 {
        return Err(Error::domain(format!("the oracle needs Re(s) > 1, got s = {s}")));
    }
    Ok(())
}

/// log2 of the Euler–Maclaurin remainder bound after J corrections at
/// X = M + a: 4|(s)_(2J)| X^(1−σ−2J)/((2π)^(2J)(σ+2J−1)).
fn remainder_log2(s: (f64, f64), x: f64, j: u64) -> f64 {
    let (sr, si) = s;
    let mut poch = 0.0;
    for i in 0..2 * j {
        poch += ((sr + i as f64).hypot(si)).log2();
    }
    let tj = 2.0 * j as f64;
    2.0 + poch + (1.0 - sr - tj) * x.log2() - tj * (2.0 * std::f64::consts::PI).log2() - (sr + tj - 1.0).log2()
}

/// ζ(s,a) = Σ_{n<M}(n+a)^(−s) + X^(1−s)/(s−1) + X^(−s)/2
/// + Σ_{j≤J} B_2j/(2j)!·(s)_(2j−1) X^(−s−2j+1) + R, with X = M + a.
///
/// M starts at 50 and J at 8; both are raised until the remainder bound is
/// below the target.
pub fn dirichlet_oracle(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<OracleEstimate> {
    require_right_of_one(s)?;
    a.require_positive()?;
    let sf = s.to_f64_pair();
    let af = a.value().to_f64();
    let goal = cfg.target_log2() - 4.0;
    let mut m = HEAD_TERMS;
    let mut j = CORRECTION_ORDER;
    loop {
        let x = m as f64 + af;
        if remainder_log2(sf, x, j) <= goal {
            break;
        }
        let ratio = (sf.0 + 2.0 * j as f64).hypot(sf.1) / (2.0 * std::f64::consts::PI * x);
        if ratio < 0.5 && j < 200 {
            j += 4;
        } else {
            m *= 2;
        }
    }
    let p = cfg.precision_bits;
    let w = p + 16 + (64 - m.leading_zeros());
    let sw = s.with_prec(w);
    let aw = a.at_prec(w);
    let mut sum = MpComplex::zero(w);
    for n in 0..m {
        sum += &complex_pow_neg(&Float::with_val(w, &aw + n), &sw)?;
    }
    let xw = Float::with_val(w, &aw + m);
    let x_pow = complex_pow_neg(&xw, &sw)?;
    let one = MpComplex::one(w);
    let s1 = &sw - &one;
    sum += &(&x_pow.mul_real(&xw) / &s1);
    sum += &x_pow.div_real(&Float::with_val(w, 2));
    let b = bernoulli_cached(2 * j as usize);
    // running (s)_(2j−1) X^(−s−2j+1) / (2j)!
    let x2 = Float::with_val(w, xw.square_ref());
    let mut run = x_pow.mul_real(&Float::with_val(w, xw.recip_ref())).mul_real(&Float::with_val(w, 0.5));
    run = &run * &sw;
    for jj in 1..=j {
        if jj > 1 {
            let k = 2 * jj - 1;
            // (s)_(2j−1) = (s)_(2j−3)(s+2j−3)(s+2j−2)
            let f1 = sw.add_real(&Float::with_val(w, k - 2));
            let f2 = sw.add_real(&Float::with_val(w, k - 1));
            run = &(&run * &f1) * &f2;
            let den = Float::with_val(w, &x2 * ((2 * jj) * (2 * jj - 1)));
            run = run.div_real(&den);
        }
        let bj = Float::with_val(w, &b[2 * jj as usize]);
        sum += &run.mul_real(&bj);
    }
    let bound = remainder_log2(sf, m as f64 + af, j);
    let round = sum.log2_abs() + (m as f64).log2() + 4.0 - f64::from(w);
    let err_log2 = bound.max(round) + 1.0;
    Ok(OracleEstimate {
        value: sum.with_prec(p),
        err: Float::with_val(64, err_log2).exp2() + Float::with_val(64, Float::i_exp(1, 1 - p as i32)) * sum.abs_f64(),
    })
}

/// ζ(s,a) = (1/Γ(s)) ∫₀^∞ e^(−at)/(1 − e^(−t))·t^(s−1) dt for ℜ(s) > 1.
pub fn classical_integral_oracle(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<OracleEstimate> {
    require_right_of_one(s)?;
    a.require_positive()?;
    let p = cfg.precision_bits;
    let sw = s.with_prec(p);
    let s1 = sw.add_real(&Float::with_val(p, -1));
    let av = a.at_prec(p);
    let gs = gamma(&sw)?;
    let hint = DecayHint::new(sw.re.to_f64() - 1.0, av.to_f64());
    // the target applies to ζ = I/Γ(s), so scale it by |Γ(s)|
    let mut scaled = cfg.clone();
    scaled.target_tol = Float::with_val(p, &cfg.target_tol * gs.abs().min(&Float::with_val(p, 1)));
    let est = quad_halfline(
        |node| {
            let e = Float::with_val(p, -Float::with_val(p, &av * &node.t)).exp();
            let d = -Float::with_val(p, (-node.t.clone()).exp_m1());
            let k = e / d;
            let power = s1.mul_real(&node.ln_t).exp();
            power.mul_real(&k)
        },
        hint,
        &scaled,
    )
    .map_err(|e| match e {
        Error::QuadratureNotConverged { levels, .. } => Error::domain(format!("oracle quadrature did not converge within {levels} levels")),
        other => other,
    })?;
    let g_abs = gs.abs();
    let value = &est.value / &gs;
    let err = Float::with_val(64, &est.err / &g_abs) + Float::with_val(64, Float::i_exp(1, 4 - p as i32)) * value.abs_f64();
    Ok(OracleEstimate { value, err })
}

/// ζ(−m, a) = −B_(m+1)(a)/(m+1).
pub fn negative_integer_oracle(m: u32, a: &ShiftParameter) -> Result<Float> {
    let b = bernoulli_poly(i64::from(m) + 1, a.value())?;
    Ok(-(b / (m + 1)))
}

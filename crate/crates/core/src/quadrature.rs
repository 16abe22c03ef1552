//! Double-exponential quadrature on (0, ∞).
//!
//! The half-line is split at t = 1. On (0, 1] the substitution t = e^(−u)
//! turns t^(σ−1)(ln t)^n endpoint behaviour into e^(−σu)u^n; on [1, ∞) the
//! shift t = 1 + u is used. In both pieces u runs over (0, ∞) and is mapped by
//! u = exp(x − e^(−x)), which decays double exponentially as x → −∞ and
//! follows exponential decay in u as x → +∞. The trapezoid rule in x with step
//! 2^(−ℓ) is refined level by level; each level reuses all earlier nodes.

use std::f64::consts::LN_2;

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{log2_abs, EvalConfig, MpComplex, MIN_PRECISION};

/// Asymptotic shape of an integrand g(t) on (0, ∞), used to place cutoffs.
///
/// g(t) ≈ t^(origin_exponent − 1)·|ln t|^log_power near 0 and decays like
/// e^(−decay_rate·t) at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayHint {
    pub origin_exponent: f64,
    pub decay_rate: f64,
    pub log_power: u32,
}

impl DecayHint {
    pub fn new(origin_exponent: f64, decay_rate: f64) -> Self {
        DecayHint {
            origin_exponent,
            decay_rate,
            log_power: 0,
        }
    }

    pub fn with_log_power(mut self, n: u32) -> Self {
        self.log_power = n;
        self
    }
}

/// One quadrature node: the abscissa t, ln t (exact for the lower piece) and
/// the positive weight dt/dx. The trapezoid step is applied separately.
#[derive(Clone, Debug)]
pub struct Node {
    pub t: Float,
    pub ln_t: Float,
    pub weight: Float,
}

#[derive(Clone, Debug)]
pub struct QuadEstimate {
    pub value: MpComplex,
    pub err: Float,
}

/// Values of one quadrature run.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub estimates: Vec<QuadEstimate>,
    /// Integrand evaluations used.
    pub nodes: u64,
    /// Finest level reached.
    pub level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    DoubleExponentialHalfline,
}

/// Node generator for a fixed precision and integrand shape.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub levels: u32,
    prec: u32,
    lower: (i64, i64),
    upper: (i64, i64),
}

const MIN_LEVEL: u32 = 3;

fn log_dphi(x: f64) -> f64 {
    // ln φ'(x) with φ(x) = exp(x − e^(−x))
    x - (-x).exp() + (1.0 + (-x).exp()).ln()
}

fn phi_f64(x: f64) -> f64 {
    (x - (-x).exp()).exp()
}

impl QuadratureRule {
    pub fn new(prec: u32, levels: u32, hint: DecayHint) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let budget = f64::from(prec + 20) * LN_2;
        let sigma = hint.origin_exponent.max(1e-3);
        let c = hint.decay_rate.max(1e-3);
        let n = f64::from(hint.log_power);

        let mut left = 0.0;
        while log_dphi(left) > -budget {
            left -= 0.25;
        }
        let mut right_lower = 0.0;
        loop {
            let u = phi_f64(right_lower);
            if sigma * u - (n + 1.0) * u.ln().max(0.0) >= budget {
                break;
            }
            right_lower += 0.25;
        }
        let mut right_upper = 0.0;
        loop {
            let u = phi_f64(right_upper);
            if c * u - (hint.origin_exponent.abs() + n + 3.0) * u.ln_1p() >= budget {
                break;
            }
            right_upper += 0.25;
        }
        QuadratureRule {
            kind: RuleKind::DoubleExponentialHalfline,
            levels,
            prec,
            lower: (left.floor() as i64, right_lower.ceil() as i64),
            upper: (left.floor() as i64, right_upper.ceil() as i64),
        }
    }

    /// Rule matching a configuration's precision and level budget.
    pub fn for_config(cfg: &EvalConfig, hint: DecayHint) -> Self {
        QuadratureRule::new(cfg.precision_bits, cfg.quad_levels, hint)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Nodes first used at `level` (all nodes at level 0, odd ones after).
    pub fn level_nodes(&self, level: u32) -> Vec<Node> {
        let w = self.prec + 16;
        let mut out = Vec::new();
        for (range, lower) in [(self.lower, true), (self.upper, false)] {
            let (lo, hi) = range;
            let scale = 1i64 << level;
            let (start, step) = if level == 0 { (lo, 1) } else { (lo * scale + 1, 2) };
            let end = hi * scale;
            let mut j = start;
            while j <= end {
                let x = Float::with_val(w, Float::i_exp(j as i32, -(level as i32)));
                out.push(make_node(&x, lower, w, self.prec));
                j += step;
            }
        }
        out
    }
}

fn make_node(x: &Float, lower: bool, w: u32, prec: u32) -> Node {
    let emx = Float::with_val(w, (-x.clone()).exp());
    let u = Float::with_val(w, x - &emx).exp();
    let dphi = Float::with_val(w, &u * Float::with_val(w, &emx + 1u32));
    if lower {
        let t = Float::with_val(w, (-u.clone()).exp());
        let weight = Float::with_val(prec, &t * &dphi);
        Node {
            t: Float::with_val(prec, &t),
            ln_t: Float::with_val(prec, -u),
            weight,
        }
    } else {
        Node {
            t: Float::with_val(prec, &u + 1u32),
            ln_t: Float::with_val(prec, u.ln_1p_ref()),
            weight: Float::with_val(prec, dphi),
        }
    }
}

/// Integrates several functions sharing one node set.
///
/// `f` returns one value per output. Output i has converged when
/// |I_ℓ − I_(ℓ−1)| plus a rounding allowance is at most
/// 2^tol_log2 · max(|I_ℓ|, 2^floors_log2[i]).
pub fn integrate_many<F>(
    rule: &QuadratureRule,
    tol_log2: f64,
    floors_log2: &[f64],
    f: F,
) -> Result<QuadResult>
where
    F: FnMut(&Node) -> Vec<MpComplex>,
{
    integrate_many_offset(rule, tol_log2, floors_log2, None, f)
}

/// As [`integrate_many`], but output i is judged against |I_ℓ + offsets[i]|,
/// for integrals that are one part of a larger sum.
pub fn integrate_many_offset<F>(
    rule: &QuadratureRule,
    tol_log2: f64,
    floors_log2: &[f64],
    offsets: Option<&[MpComplex]>,
    mut f: F,
) -> Result<QuadResult>
where
    F: FnMut(&Node) -> Vec<MpComplex>,
{
    let outputs = floors_log2.len();
    let p = rule.prec;
    let mut sums: Vec<MpComplex> = vec![MpComplex::zero(p); outputs];
    let mut abs_sums: Vec<Float> = vec![Float::with_val(64, 0); outputs];
    let mut prev: Option<Vec<MpComplex>> = None;
    let mut nodes = 0u64;
    let mut best = Vec::new();
    let max_level = rule.levels.max(MIN_LEVEL);
    for level in 0..=max_level {
        for node in rule.level_nodes(level) {
            let vals = f(&node);
            debug_assert_eq!(vals.len(), outputs);
            for (i, v) in vals.iter().enumerate() {
                let wv = v.mul_real(&node.weight);
                abs_sums[i] += wv.abs_f64();
                sums[i] += &wv;
            }
            nodes += 1;
        }
        let h = Float::with_val(p, Float::i_exp(1, -(level as i32)));
        let current: Vec<MpComplex> = sums.iter().map(|s| s.mul_real(&h)).collect();
        let rounding: Vec<f64> = abs_sums
            .iter()
            .map(|a| log2_abs(a) - f64::from(level) - f64::from(p) + 6.0)
            .collect();
        let mut all_ok = true;
        best.clear();
        for i in 0..outputs {
            let diff_log2 = match &prev {
                Some(pv) => log2_abs(&current[i].dist(&pv[i])),
                None => f64::INFINITY,
            };
            let err_log2 = log2_sum(diff_log2, rounding[i]);
            let magnitude = match offsets {
                Some(o) => (&current[i] + &o[i]).log2_abs(),
                None => current[i].log2_abs(),
            };
            let scale = magnitude.max(floors_log2[i]);
            if !(level >= MIN_LEVEL && err_log2 <= tol_log2 + scale) {
                all_ok = false;
            }
            let err = if err_log2.is_finite() {
                Float::with_val(64, err_log2).exp2()
            } else if err_log2 > 0.0 {
                Float::with_val(64, rug::float::Special::Infinity)
            } else {
                Float::with_val(64, 0)
            };
            best.push(QuadEstimate {
                value: current[i].clone(),
                err,
            });
        }
        if all_ok {
            return Ok(QuadResult {
                estimates: best,
                nodes,
                level,
            });
        }
        prev = Some(current);
    }
    Err(Error::QuadratureNotConverged {
        levels: max_level,
        best,
    })
}

/// log2(2^a + 2^b).
fn log2_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::INFINITY {
        return hi;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// ∫₀^∞ f(t) dt for a single integrand at the configuration's precision.
pub fn quad_halfline<F>(f: F, hint: DecayHint, cfg: &EvalConfig) -> Result<QuadEstimate>
where
    F: Fn(&Node) -> MpComplex,
{
    let rule = QuadratureRule::for_config(cfg, hint);
    let res = integrate_many(&rule, cfg.target_log2(), &[0.0], |n| vec![f(n)])?;
    Ok(res.estimates.into_iter().next().unwrap())
}

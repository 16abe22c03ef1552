//! Half-line integral representations of φ(s,a) = (s−1)ζ(s,a).
//!
//! For ℜ(s) > −k,
//!
//! φ(s,a) = ((−1)^k/Γ(s+k)) ∫₀^∞ f_a^(k)(t) t^(s+k−1) dt,
//!
//! where f_a(t) = ψ(t)e^(−(a−1)t) (see [`crate::kernels`]). k = 0 is the
//! basic representation; k ≥ 1 continues it to the left by parts. The shifted
//! variant integrates f_(a+1) and yields (s−1)(ζ(s,a) − a^(−s)).

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::kernels::{WeightedIntegrand, MAX_DERIVATIVE_ORDER};
use crate::mp::{gamma, EvalConfig, MpComplex, ShiftParameter};
use crate::quadrature::{integrate_many_offset, DecayHint, QuadratureRule};

/// Imaginary parts beyond this get a caveat: the default levels may not
/// resolve the oscillation of t^(iy).
pub const OSCILLATION_LIMIT: f64 = 50.0;

/// Taylor terms of the integrand integrated in closed form on (0, 1).
const TAYLOR_HEAD: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Integral,
    Continued { k: u32 },
    ShiftedIntegral,
    Series,
    ShiftedSeries,
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Integral => "integral",
            Method::Continued { .. } => "continued",
            Method::ShiftedIntegral => "shifted-integral",
            Method::Series => "series",
            Method::ShiftedSeries => "shifted-series",
            Method::Oracle => "oracle",
        }
    }

    /// Shifted methods report (s−1)(ζ(s,a) − a^(−s)) instead of φ.
    pub fn is_shifted(&self) -> bool {
        matches!(self, Method::ShiftedIntegral | Method::ShiftedSeries)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Continued { k } => write!(f, "continued(k={k})"),
            m => f.write_str(m.name()),
        }
    }
}

/// A value of φ(s,a) (or its shifted variant) with provenance.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub s: MpComplex,
    pub a: Float,
    pub phi: MpComplex,
    /// φ/(s−1); `None` at the pole s = 1.
    pub zeta: Option<MpComplex>,
    /// Absolute error estimate for `phi`.
    pub err_estimate: Float,
    pub method: Method,
    /// Quadrature nodes or series terms used.
    pub terms_or_nodes: u64,
    /// Set when the value comes without a rigorous error statement.
    pub caveat: Option<String>,
}

impl EvalResult {
    pub(crate) fn new(s: &MpComplex, a: &Float, phi: MpComplex, err: Float, method: Method, used: u64) -> Self {
        let one = MpComplex::one(s.prec());
        let zeta = if *s == one {
            None
        } else {
            let d = s - &one;
            Some(&phi / &d)
        };
        EvalResult {
            s: s.clone(),
            a: a.clone(),
            phi,
            zeta,
            err_estimate: err,
            method,
            terms_or_nodes: used,
            caveat: None,
        }
    }

    pub fn is_pole(&self) -> bool {
        self.zeta.is_none()
    }

    /// Error estimate for `zeta`: err/|s−1|.
    pub fn zeta_err_estimate(&self) -> Option<Float> {
        let one = MpComplex::one(self.s.prec());
        self.zeta.as_ref().map(|_| {
            let d = (&self.s - &one).abs();
            Float::with_val(64, &self.err_estimate / &d)
        })
    }
}

/// k = max(0, ⌈1 − ℜ(s)⌉ + 1).
pub fn continuation_order(s: &MpComplex) -> u32 {
    let r = s.re.to_f64();
    if r > 1.0 {
        return 0;
    }
    ((1.0 - r).ceil() + 1.0).max(0.0) as u32
}

fn real_part_above(s: &MpComplex, bound: i64) -> bool {
    s.re > bound
}

/// Shared engine: ((−1)^k/Γ(s+k)) ∫ f_b^(k)(t) t^(s+k−1) dt.
fn kernel_integral(s: &MpComplex, a: &Float, b: &Float, k: u32, cfg: &EvalConfig, method: Method) -> Result<EvalResult> {
    cfg.validate()?;
    let p = cfg.precision_bits;
    let s = s.with_prec(p);
    let z = s.add_real(&Float::with_val(p, k));
    let integrand = WeightedIntegrand::new(b, k as i32, p)?;
    let gz = gamma(&z)?;
    let z1 = z.add_real(&Float::with_val(p, -1));
    let real_power = z1.is_real();
    // On (0, 1) the Taylor head of the integrand is integrated exactly, so the
    // quadrature only sees a remainder vanishing like t^(z+HEAD−1).
    let head = integrand.taylor_head(TAYLOR_HEAD);
    let mut exact = MpComplex::zero(p);
    let mut exact_abs = Float::with_val(64, 0);
    for (j, c) in head.iter().enumerate() {
        let denom = z.add_real(&Float::with_val(p, j));
        let term = &MpComplex::from_real(c.clone()) / &denom;
        exact_abs += term.abs_f64();
        exact += &term;
    }
    let hint = DecayHint::new(z.re.to_f64() + head.len() as f64, b.to_f64());
    let rule = QuadratureRule::for_config(cfg, hint);
    let floor = gz.log2_abs();
    let offsets = [exact.clone()];
    let run = integrate_many_offset(&rule, cfg.target_log2(), &[floor], Some(&offsets), |node| {
        let f = if node.t < 1 {
            integrand.eval_tail(&node.t, head.len())
        } else {
            integrand.eval(&node.t)
        };
        let power = if real_power {
            MpComplex::from_real(Float::with_val(p, &z1.re * &node.ln_t).exp())
        } else {
            z1.mul_real(&node.ln_t).exp()
        };
        vec![power.mul_real(&f)]
    });
    let finish = |est: &crate::quadrature::QuadEstimate, used: u64| {
        let total = &est.value + &exact;
        let mut phi = &total / &gz;
        if k % 2 == 1 {
            phi = -phi;
        }
        let g_abs = gz.abs();
        let ulp = Float::with_val(64, Float::i_exp(1, 4 - p as i32));
        let round = Float::with_val(64, phi.abs_f64()) * &ulp;
        let head_round = Float::with_val(64, &exact_abs / &g_abs) * &ulp;
        let err = Float::with_val(64, &est.err / &g_abs) + round + head_round;
        let mut r = EvalResult::new(&s, a, phi, err, method, used);
        if s.im.to_f64().abs() > OSCILLATION_LIMIT {
            r.caveat = Some(format!(
                "|Im(s)| > {OSCILLATION_LIMIT}: raise the quadrature levels if the error estimate is large"
            ));
        }
        r
    };
    match run {
        Ok(res) => Ok(finish(&res.estimates[0], res.nodes)),
        Err(Error::QuadratureNotConverged { levels, best }) => {
            let best = finish(&best[0], 0);
            Err(Error::Accuracy {
                reason: format!("quadrature did not reach the target within {levels} levels"),
                best: Box::new(best),
            })
        }
        Err(e) => Err(e),
    }
}

/// φ(s,a) = (1/Γ(s)) ∫₀^∞ ψ(t)e^(−(a−1)t) t^(s−1) dt for ℜ(s) > 0, 0 < a ≤ 1.
pub fn phi_integral(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<EvalResult> {
    a.require_positive()?;
    if !real_part_above(s, 0) {
        return Err(Error::domain(format!(
            "the basic integral needs Re(s) > 0, got s = {s}; use the continued integral"
        )));
    }
    let av = a.at_prec(cfg.precision_bits);
    kernel_integral(s, &av, &av, 0, cfg, Method::Integral)
}

/// φ(s,a) from the k-times integrated-by-parts form, valid for ℜ(s) > −k.
pub fn phi_continued(s: &MpComplex, a: &ShiftParameter, k: i32, cfg: &EvalConfig) -> Result<EvalResult> {
    a.require_positive()?;
    if !(0..=MAX_DERIVATIVE_ORDER).contains(&k) {
        return Err(Error::domain(format!("continuation order must satisfy 0 <= k <= {MAX_DERIVATIVE_ORDER}, got {k}")));
    }
    if !real_part_above(s, -i64::from(k)) {
        return Err(Error::domain(format!("the continued integral with k = {k} needs Re(s) > {}, got s = {s}", -k)));
    }
    let av = a.at_prec(cfg.precision_bits);
    kernel_integral(s, &av, &av, k as u32, cfg, Method::Continued { k: k as u32 })
}

/// (s−1)(ζ(s,a) − a^(−s)) = (s−1)ζ(s,a+1) for ℜ(s) > 0 and 0 ≤ a ≤ 1.
///
/// The integrand is f_(a+1)(t) = K_a(t)e^(−at); at a = 0 the value is
/// (s−1)ζ(s).
pub fn phi_shifted_integral(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<EvalResult> {
    if !real_part_above(s, 0) {
        return Err(Error::domain(format!("the shifted integral needs Re(s) > 0, got s = {s}")));
    }
    let p = cfg.precision_bits;
    let av = a.at_prec(p);
    let b = Float::with_val(p, &av + 1u32);
    kernel_integral(s, &av, &b, 0, cfg, Method::ShiftedIntegral)
}

/// The basic integral for ℜ(s) > 0, the continued one with the default
/// order otherwise.
pub fn phi_auto(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<EvalResult> {
    if real_part_above(s, 0) {
        phi_integral(s, a, cfg)
    } else {
        phi_continued(s, a, continuation_order(s) as i32, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::pi;

    fn cfg() -> EvalConfig {
        EvalConfig::with_digits(30)
    }

    fn sp(a: f64) -> ShiftParameter {
        ShiftParameter::from_f64(128, a).unwrap()
    }

    fn c(re: f64, im: f64) -> MpComplex {
        MpComplex::from_f64(cfg().precision_bits, re, im)
    }

    fn near(x: &MpComplex, y: &MpComplex, tol: f64) -> bool {
        x.dist_f64(y) <= tol
    }

    #[test]
    fn phi_is_one_at_s_one() {
        for a in [0.2, 0.5, 1.0] {
            let r = phi_integral(&c(1.0, 0.0), &sp(a), &cfg()).unwrap();
            assert!(near(&r.phi, &MpComplex::one(128), 1e-30), "a = {a}");
            assert!(r.is_pole());
        }
    }

    #[test]
    fn zeta_two() {
        let p = cfg().precision_bits;
        let pi2 = Float::with_val(p, pi(p).square());
        let r = phi_integral(&c(2.0, 0.0), &sp(1.0), &cfg()).unwrap();
        let expect = MpComplex::from_real(Float::with_val(p, &pi2 / 6u32));
        assert!(near(r.zeta.as_ref().unwrap(), &expect, 1e-30));
        assert!(r.err_estimate.to_f64() < 1e-30);
        let r = phi_integral(&c(2.0, 0.0), &sp(0.5), &cfg()).unwrap();
        let expect = MpComplex::from_real(Float::with_val(p, &pi2 / 2u32));
        assert!(near(r.zeta.as_ref().unwrap(), &expect, 1e-29));
    }

    #[test]
    fn continued_reduces_to_integral() {
        let s = c(2.0, 0.0);
        let a = sp(0.7);
        let x = phi_integral(&s, &a, &cfg()).unwrap();
        let y = phi_continued(&s, &a, 0, &cfg()).unwrap();
        assert!(near(&x.phi, &y.phi, 1e-30));
    }

    #[test]
    fn continued_at_negative_integers() {
        let a = 0.3;
        let r = phi_continued(&c(0.0, 0.0), &sp(a), 1, &cfg()).unwrap();
        assert!((r.zeta.unwrap().re.to_f64() - (0.5 - a)).abs() < 1e-25);
        let r = phi_continued(&c(-1.0, 0.0), &sp(a), 2, &cfg()).unwrap();
        let expect = -(a * a - a + 1.0 / 6.0) / 2.0;
        assert!((r.zeta.unwrap().re.to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn domain_checks() {
        assert!(matches!(phi_integral(&c(-0.5, 0.0), &sp(0.5), &cfg()), Err(Error::Domain(_))));
        assert!(matches!(phi_continued(&c(-1.0, 0.0), &sp(0.5), 1, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(phi_integral(&c(2.0, 0.0), &sp(0.0), &cfg()), Err(Error::Domain(_))));
        assert_eq!(continuation_order(&c(2.0, 0.0)), 0);
        assert_eq!(continuation_order(&c(0.0, 0.0)), 2);
        assert_eq!(continuation_order(&c(-1.0, 0.0)), 3);
        assert_eq!(continuation_order(&c(0.5, 0.0)), 2);
    }

    #[test]
    fn shifted_examples() {
        let p = cfg().precision_bits;
        let zeta2 = Float::with_val(p, pi(p).square()) / 6u32;
        let r = phi_shifted_integral(&c(2.0, 0.0), &sp(0.0), &cfg()).unwrap();
        assert!(near(&r.phi, &MpComplex::from_real(zeta2.clone()), 1e-30));
        let r = phi_shifted_integral(&c(2.0, 0.0), &sp(1.0), &cfg()).unwrap();
        assert!(near(&r.phi, &MpComplex::from_real(zeta2 - 1u32), 1e-30));
    }

    #[test]
    fn conjugate_symmetry() {
        let a = sp(0.6);
        let x = phi_integral(&c(1.5, 2.0), &a, &cfg()).unwrap();
        let y = phi_integral(&c(1.5, -2.0), &a, &cfg()).unwrap();
        assert!(near(&x.phi.conj(), &y.phi, 1e-28));
    }

    #[test]
    fn smooth_through_the_pole() {
        let a = sp(0.4);
        let lo = phi_integral(&c(1.0 - 1e-6, 0.0), &a, &cfg()).unwrap();
        let hi = phi_integral(&c(1.0 + 1e-6, 0.0), &a, &cfg()).unwrap();
        // φ'(1) = −ψ(a) ≈ 2.56 at a = 0.4
        assert!(lo.phi.dist_f64(&hi.phi) <= 1e-4 * 3.0);
        assert!(lo.zeta.is_some() && hi.zeta.is_some());
    }

    #[test]
    fn error_target_holds_for_oscillating_small_real_part() {
        // |Γ(s)| is tiny here, so the closed-form head is much larger than φΓ(s)
        let a = sp(0.25);
        for (re, im) in [(0.5, 14.0), (0.1, 8.0)] {
            let low = EvalConfig::with_digits(20);
            let x = phi_integral(&MpComplex::from_f64(low.precision_bits, re, im), &a, &low).unwrap();
            let y = phi_integral(&c(re, im), &a, &cfg()).unwrap();
            let bound = 1e-20 * x.phi.abs_f64().max(1.0);
            assert!(x.err_estimate.to_f64() <= bound, "{}", x.err_estimate);
            assert!(x.phi.dist_f64(&y.phi) <= x.err_estimate.to_f64());
        }
    }
}

//! Taylor coefficients of φ(s,a) = (s−1)ζ(s,a) about a point s₀.
//!
//! With A(s) = φ(s,a)Γ(s+k) and C(s) = Γ(s+k),
//!
//! a_n = [(s−s₀)^n] A = ((−1)^k/n!) ∫₀^∞ f_a^(k)(t)(ln t)^n t^(s₀+k−1) dt,
//! c_n = [(s−s₀)^n] C = (1/n!) ∫₀^∞ e^(−t)(ln t)^n t^(s₀+k−1) dt,
//!
//! and γ_n = [(s−s₀)^n] φ follows from power-series division,
//! γ_n = (a_n − Σ_{j=1}^{n} c_j γ_(n−j))/c₀. k = 0 for ℜ(s₀) > 0 and the
//! continuation order otherwise. All 2(order+1) integrals share one node set.

use rug::Float;

use crate::error::{Error, Result};
use crate::integral::continuation_order;
use crate::kernels::WeightedIntegrand;
use crate::mp::{gamma, EvalConfig, MpComplex, ShiftParameter};
use crate::quadrature::{integrate_many, DecayHint, QuadEstimate, QuadratureRule};

/// Largest expansion order accepted.
pub const MAX_ORDER: u32 = 32;

#[derive(Clone, Debug)]
pub struct LaurentExpansion {
    pub s0: MpComplex,
    pub a: ShiftParameter,
    pub order: u32,
    /// Continuation order used for the integrals.
    pub k: u32,
    pub a_coeffs: Vec<MpComplex>,
    pub c_coeffs: Vec<MpComplex>,
    pub gamma_coeffs: Vec<MpComplex>,
    pub a_errs: Vec<Float>,
    pub c_errs: Vec<Float>,
    pub gamma_errs: Vec<Float>,
    /// Quadrature nodes used.
    pub nodes: u64,
}

struct Integrals {
    a: Vec<QuadEstimate>,
    c: Vec<QuadEstimate>,
    k: u32,
    nodes: u64,
}

fn check_order(order: u32) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!("expansion order must be at most {MAX_ORDER}, got {order}")));
    }
    Ok(())
}

/// Runs the coefficient integrals; `a = None` computes only c_n.
fn coefficient_integrals(s0: &MpComplex, a: Option<&ShiftParameter>, order: u32, cfg: &EvalConfig) -> Result<Integrals> {
    cfg.validate()?;
    check_order(order)?;
    let p = cfg.precision_bits;
    let s0 = s0.with_prec(p);
    let k = if s0.re > 0 { 0 } else { continuation_order(&s0) };
    let z = s0.add_real(&Float::with_val(p, k));
    let z1 = z.add_real(&Float::with_val(p, -1));
    let integrand = match a {
        Some(a) => Some(WeightedIntegrand::for_shift(a, k as i32, p)?),
        None => None,
    };
    let decay = a.map_or(1.0, |a| a.value().to_f64().min(1.0));
    let hint = DecayHint::new(z.re.to_f64(), decay).with_log_power(order);
    let rule = QuadratureRule::for_config(cfg, hint);
    let len = order as usize + 1;
    let outputs = if integrand.is_some() { 2 * len } else { len };
    // tolerances are relative to the scale of c₀ = Γ(s₀+k)
    let floor = gamma(&z)?.log2_abs();
    let floors = vec![floor; outputs];
    let negate = k % 2 == 1;
    let run = integrate_many(&rule, cfg.target_log2(), &floors, |node| {
        let base = if z1.is_real() {
            MpComplex::from_real(Float::with_val(p, &z1.re * &node.ln_t).exp())
        } else {
            z1.mul_real(&node.ln_t).exp()
        };
        // (ln t)^n / n!
        let mut logs = Vec::with_capacity(len);
        let mut cur = Float::with_val(p, 1);
        for n in 0..len {
            if n > 0 {
                cur *= &node.ln_t;
                cur /= n as u32;
            }
            logs.push(cur.clone());
        }
        let e = Float::with_val(p, (-node.t.clone()).exp());
        let cb = base.mul_real(&e);
        let mut out = Vec::with_capacity(outputs);
        if let Some(f) = &integrand {
            let mut fv = f.eval(&node.t);
            if negate {
                fv = -fv;
            }
            let ab = base.mul_real(&fv);
            out.extend(logs.iter().map(|l| ab.mul_real(l)));
        }
        out.extend(logs.iter().map(|l| cb.mul_real(l)));
        out
    });
    let res = match run {
        Ok(r) => r,
        Err(Error::QuadratureNotConverged { levels, .. }) => {
            return Err(Error::domain(format!(
                "coefficient quadrature did not converge within {levels} levels; raise the quadrature levels"
            )))
        }
        Err(e) => return Err(e),
    };
    let mut est = res.estimates;
    let c = if integrand.is_some() { est.split_off(len) } else { std::mem::take(&mut est) };
    Ok(Integrals {
        a: est,
        c,
        k,
        nodes: res.nodes,
    })
}

/// a_n: the n-th Taylor coefficient of φ(s,a)Γ(s) about s₀ (ℜ(s₀) > 0).
pub fn a_coeff(n: u32, s0: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<MpComplex> {
    if s0.re <= 0 {
        return Err(Error::domain("a_coeff needs Re(s0) > 0; use laurent_expand"));
    }
    let r = coefficient_integrals(s0, Some(a), n, cfg)?;
    Ok(r.a[n as usize].value.clone())
}

/// c_n = Γ^(n)(s₀)/n! (ℜ(s₀) > 0).
pub fn c_coeff(n: u32, s0: &MpComplex, cfg: &EvalConfig) -> Result<MpComplex> {
    if s0.re <= 0 {
        return Err(Error::domain("c_coeff needs Re(s0) > 0"));
    }
    let r = coefficient_integrals(s0, None, n, cfg)?;
    Ok(r.c[n as usize].value.clone())
}

/// Taylor expansion of φ(s,a) about s₀ up to `order`.
pub fn laurent_expand(s0: &MpComplex, a: &ShiftParameter, order: u32, cfg: &EvalConfig) -> Result<LaurentExpansion> {
    a.require_positive()?;
    let r = coefficient_integrals(s0, Some(a), order, cfg)?;
    let len = order as usize + 1;
    let a_coeffs: Vec<MpComplex> = r.a.iter().map(|e| e.value.clone()).collect();
    let c_coeffs: Vec<MpComplex> = r.c.iter().map(|e| e.value.clone()).collect();
    let a_errs: Vec<Float> = r.a.iter().map(|e| e.err.clone()).collect();
    let c_errs: Vec<Float> = r.c.iter().map(|e| e.err.clone()).collect();
    let c0 = &c_coeffs[0];
    if c0.is_zero() {
        return Err(Error::domain("c0 vanished"));
    }
    let c0_abs = c0.abs_f64();
    let p = cfg.precision_bits;
    let mut gamma_coeffs: Vec<MpComplex> = Vec::with_capacity(len);
    let mut gamma_errs: Vec<Float> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = a_coeffs[n].clone();
        let mut err = a_errs[n].to_f64();
        for j in 1..=n {
            acc -= &(&c_coeffs[j] * &gamma_coeffs[n - j]);
            err += c_coeffs[j].abs_f64() * gamma_errs[n - j].to_f64() + gamma_coeffs[n - j].abs_f64() * c_errs[j].to_f64();
        }
        let g = &acc / c0;
        err += g.abs_f64() * c_errs[0].to_f64();
        err /= c0_abs;
        // rounding in the recursion
        err += g.abs_f64() * 2f64.powi(4 - p as i32) * (n as f64 + 1.0);
        gamma_errs.push(Float::with_val(64, err));
        gamma_coeffs.push(g);
    }
    Ok(LaurentExpansion {
        s0: s0.with_prec(p),
        a: a.clone(),
        order,
        k: r.k,
        a_coeffs,
        c_coeffs,
        gamma_coeffs,
        a_errs,
        c_errs,
        gamma_errs,
        nodes: r.nodes,
    })
}

/// Σ γ_n (s − s₀)^n by Horner's rule.
pub fn laurent_eval(exp: &LaurentExpansion, s: &MpComplex) -> MpComplex {
    let d = s - &exp.s0;
    let mut acc = MpComplex::zero(exp.s0.prec());
    for g in exp.gamma_coeffs.iter().rev() {
        acc = &acc * &d;
        acc += g;
    }
    acc
}

impl LaurentExpansion {
    /// (Σ γ ⋆ c)_n − a_n for each n, the division residual.
    pub fn cauchy_residuals(&self) -> Vec<MpComplex> {
        (0..self.gamma_coeffs.len())
            .map(|n| {
                let mut acc = MpComplex::zero(self.s0.prec());
                for j in 0..=n {
                    acc += &(&self.c_coeffs[j] * &self.gamma_coeffs[n - j]);
                }
                &acc - &self.a_coeffs[n]
            })
            .collect()
    }

    /// Propagated bound for the n-th residual:
    /// Σ_j |c_j| δγ_(n−j) + |γ_(n−j)| δc_j, plus δa_n.
    pub fn cauchy_tolerance(&self, n: usize) -> f64 {
        let mut t = self.a_errs[n].to_f64();
        for j in 0..=n {
            t += self.c_coeffs[j].abs_f64() * self.gamma_errs[n - j].to_f64()
                + self.gamma_coeffs[n - j].abs_f64() * self.c_errs[j].to_f64();
        }
        t
    }
}

/// Coefficients about s = 1 in the normalization
/// (s−1)ζ(s,a) = γ₀ + Σ_n γ̃_n (s−1)^(n+1), i.e. γ̃_n = γ_(n+1).
#[derive(Clone, Debug, PartialEq)]
pub struct BerndtCoefficients {
    pub constant: MpComplex,
    pub coeffs: Vec<MpComplex>,
}

fn require_at_one(exp: &LaurentExpansion) -> Result<()> {
    if exp.s0 != MpComplex::one(exp.s0.prec()) {
        return Err(Error::domain("this normalization is defined for expansions about s0 = 1"));
    }
    Ok(())
}

pub fn to_berndt(exp: &LaurentExpansion) -> Result<BerndtCoefficients> {
    require_at_one(exp)?;
    Ok(BerndtCoefficients {
        constant: exp.gamma_coeffs[0].clone(),
        coeffs: exp.gamma_coeffs[1..].to_vec(),
    })
}

/// Inverse of [`to_berndt`]: the γ_n list.
pub fn from_berndt(b: &BerndtCoefficients) -> Vec<MpComplex> {
    let mut out = Vec::with_capacity(b.coeffs.len() + 1);
    out.push(b.constant.clone());
    out.extend(b.coeffs.iter().cloned());
    out
}

/// Generalized Stieltjes constants γ_n(a) = (−1)^n n! γ_(n+1), from
/// ζ(s,a) = 1/(s−1) + Σ_n (−1)^n γ_n(a)(s−1)^n/n!.
pub fn stieltjes_constants(exp: &LaurentExpansion) -> Result<Vec<MpComplex>> {
    require_at_one(exp)?;
    let mut out = Vec::with_capacity(exp.gamma_coeffs.len().saturating_sub(1));
    let mut fact = Float::with_val(exp.s0.prec(), 1);
    for (n, g) in exp.gamma_coeffs.iter().skip(1).enumerate() {
        if n > 0 {
            fact *= n as u32;
        }
        let mut v = g.mul_real(&fact);
        if n % 2 == 1 {
            v = -v;
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::phi_integral;
    use crate::mp::digamma;
    use rug::float::Constant;

    fn cfg() -> EvalConfig {
        EvalConfig::with_digits(25)
    }

    fn sp(a: f64) -> ShiftParameter {
        ShiftParameter::from_f64(128, a).unwrap()
    }

    fn c(re: f64, im: f64) -> MpComplex {
        MpComplex::from_f64(cfg().precision_bits, re, im)
    }

    #[test]
    fn a0_is_phi_times_gamma() {
        let s0 = c(2.0, 0.5);
        let a = sp(0.6);
        let a0 = a_coeff(0, &s0, &a, &cfg()).unwrap();
        let phi = phi_integral(&s0, &a, &cfg()).unwrap().phi;
        let expect = &phi * &gamma(&s0).unwrap();
        assert!(a0.dist_f64(&expect) < 1e-24);
        let one = a_coeff(0, &c(1.0, 0.0), &sp(1.0), &cfg()).unwrap();
        assert!(one.dist_f64(&MpComplex::one(128)) < 1e-24);
    }

    #[test]
    fn a1_matches_finite_difference() {
        let a = sp(1.0);
        let h = 1e-8;
        let hi = a_coeff(0, &c(2.0 + h, 0.0), &a, &cfg()).unwrap();
        let lo = a_coeff(0, &c(2.0 - h, 0.0), &a, &cfg()).unwrap();
        let fd = (hi.re.to_f64() - lo.re.to_f64()) / (2.0 * h);
        let a1 = a_coeff(1, &c(2.0, 0.0), &a, &cfg()).unwrap();
        assert!((a1.re.to_f64() - fd).abs() < 1e-7);
    }

    #[test]
    fn c_coefficients_are_gamma_derivatives() {
        let p = cfg().precision_bits;
        let euler = Float::with_val(p, Constant::Euler);
        let g0 = c_coeff(0, &c(2.5, 0.0), &cfg()).unwrap();
        assert!(g0.dist_f64(&gamma(&c(2.5, 0.0)).unwrap()) < 1e-24);
        let c1 = c_coeff(1, &c(1.0, 0.0), &cfg()).unwrap();
        assert!((c1.re.to_f64() + euler.to_f64()).abs() < 1e-15);
        let c1 = c_coeff(1, &c(2.0, 0.0), &cfg()).unwrap();
        let expect = digamma(&Float::with_val(p, 2)).unwrap();
        assert!((c1.re.to_f64() - expect.to_f64()).abs() < 1e-15);
    }

    #[test]
    fn expansion_about_one() {
        let p = cfg().precision_bits;
        let e = laurent_expand(&c(1.0, 0.0), &sp(1.0), 3, &cfg()).unwrap();
        assert!(e.gamma_coeffs[0].dist_f64(&MpComplex::one(p)) < 1e-20);
        let euler = Float::with_val(p, Constant::Euler).to_f64();
        assert!((e.gamma_coeffs[1].re.to_f64() - euler).abs() < 1e-15);
        let st = stieltjes_constants(&e).unwrap();
        assert!((st[1].re.to_f64() + 0.0728158454836767).abs() < 1e-14);
        let e = laurent_expand(&c(1.0, 0.0), &sp(0.5), 1, &cfg()).unwrap();
        let expect = -digamma(&Float::with_val(p, 0.5)).unwrap().to_f64();
        assert!((e.gamma_coeffs[1].re.to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn cauchy_product_reproduces_a() {
        let e = laurent_expand(&c(1.0, 1.0), &sp(0.5), 12, &cfg()).unwrap();
        for (n, r) in e.cauchy_residuals().iter().enumerate() {
            assert!(r.abs_f64() <= e.cauchy_tolerance(n), "n = {n}");
        }
    }

    #[test]
    fn evaluation_and_berndt_round_trip() {
        let e = laurent_expand(&c(1.0, 0.0), &sp(1.0), 12, &cfg()).unwrap();
        assert_eq!(laurent_eval(&e, &e.s0), e.gamma_coeffs[0]);
        let s = c(1.5, 0.0);
        let v = laurent_eval(&e, &s);
        let phi = phi_integral(&s, &sp(1.0), &cfg()).unwrap().phi;
        assert!(v.dist_f64(&phi) < 1e-6);
        let b = to_berndt(&e).unwrap();
        assert_eq!(from_berndt(&b), e.gamma_coeffs);
        let off = laurent_expand(&c(2.0, 0.0), &sp(1.0), 0, &cfg()).unwrap();
        assert!(to_berndt(&off).is_err());
        assert_eq!(laurent_eval(&off, &c(7.0, 3.0)), off.gamma_coeffs[0]);
    }

    #[test]
    fn left_half_plane_uses_continuation() {
        let e = laurent_expand(&c(-0.5, 0.0), &sp(0.5), 12, &cfg()).unwrap();
        assert!(e.k >= 2);
        let s = c(-0.3, 0.0);
        let direct = crate::integral::phi_auto(&s, &sp(0.5), &cfg()).unwrap().phi;
        assert!(laurent_eval(&e, &s).dist_f64(&direct) < 1e-6);
    }

    #[test]
    fn order_cap() {
        assert!(laurent_expand(&c(1.0, 0.0), &sp(1.0), 33, &cfg()).is_err());
    }
}

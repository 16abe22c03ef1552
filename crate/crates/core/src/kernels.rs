//! Integrand kernels.
//!
//! Every kernel here is a member of the family
//!
//! K_c(t) = t e^t/(e^t − 1)² − 1/(e^t − 1) + c·t/(e^t − 1),
//!
//! with ψ = K_(a−1) and η = K_(−a). The weighted integrand
//! f_b(t) = K_(b−1)(t) e^((1−b)t) is the derivative of
//! F_b(t) = −t e^((1−b)t)/(e^t − 1) = −Σ_m B_m(1−b) t^m/m!, which gives both
//! the small-t series and the boundary values used by the integrals.

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{bernoulli_cached, bernoulli_poly_scaled_values, ShiftParameter, MIN_PRECISION};

/// Below this t the kernels are summed from their Bernoulli series.
pub const SWITCH_POINT: f64 = 0.25;

/// Largest derivative order accepted by [`integrand_derivative`].
pub const MAX_DERIVATIVE_ORDER: i32 = 32;

const SERIES_CAP: usize = 256;

fn check_t(t: &Float) -> Result<()> {
    if t.is_nan() || *t < 0 {
        return Err(Error::domain(format!("kernel argument must satisfy t >= 0, got {t}")));
    }
    Ok(())
}

fn is_small(t: &Float) -> bool {
    *t < SWITCH_POINT
}

/// K_c(t) evaluated at the precision of `t`.
fn family(t: &Float, c: &Float) -> Float {
    let p = t.prec().max(c.prec()).max(MIN_PRECISION);
    let w = p + 16;
    if is_small(t) {
        // coefficient of t^m/m! is −B_(m+1) + c·B_m
        let b = bernoulli_cached(SERIES_CAP + 1);
        let tw = Float::with_val(w, t);
        let cw = Float::with_val(w, c);
        let mut acc = Float::new(w);
        let mut power = Float::with_val(w, 1);
        let stop = -f64::from(p + 8);
        let mut quiet = 0;
        for m in 0..SERIES_CAP {
            let mut coeff = Float::with_val(w, &b[m] * &cw);
            coeff -= Float::with_val(w, &b[m + 1]);
            let term = Float::with_val(w, &coeff * &power);
            acc += &term;
            if coeff.is_zero() || crate::mp::log2_abs(&term) < stop + crate::mp::log2_abs(&acc).max(-f64::from(p)) {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            power *= &tw;
            power /= (m + 1) as u32;
        }
        return Float::with_val(p, acc);
    }
    let e = Float::with_val(w, t.exp_m1_ref());
    let inv = Float::with_val(w, e.recip_ref());
    let tw = Float::with_val(w, t);
    // t(e+1)/e² − 1/e + c·t/e
    let mut acc = Float::with_val(w, &tw * &inv);
    let first = Float::with_val(w, &acc * Float::with_val(w, &e + 1u32)) * &inv;
    acc *= Float::with_val(w, c);
    acc += first;
    acc -= inv;
    Float::with_val(p, acc)
}

/// ψ(t) = t e^t/(e^t−1)² − 1/(e^t−1) + (a−1)t/(e^t−1); ψ(0) = a − 1/2.
pub fn psi(t: &Float, a: &ShiftParameter) -> Result<Float> {
    check_t(t)?;
    let c = Float::with_val(t.prec(), a.value() - 1u32);
    Ok(family(t, &c))
}

/// η(t) = t e^t/(e^t−1)² − 1/(e^t−1) − a t/(e^t−1); η(0) = 1/2 − a.
pub fn eta(t: &Float, a: &ShiftParameter) -> Result<Float> {
    check_t(t)?;
    let c = Float::with_val(t.prec(), -a.value());
    Ok(family(t, &c))
}

/// Taylor coefficients of an integrand about t: coeffs[j] = g^(j)(t)/j!.
#[derive(Clone, Debug)]
pub struct KernelJet {
    pub t: Float,
    pub order: usize,
    pub coeffs: Vec<Float>,
}

/// The k-th derivative of f_b(t) = d/dt[−t e^(−bt)/(1 − e^(−t))], i.e.
/// d^k/dt^k [ψ(t) e^(−(a−1)t)] when b = a.
///
/// Coefficients of the small-t series are prepared once, so one value serves
/// a whole quadrature run.
#[derive(Clone, Debug)]
pub struct WeightedIntegrand {
    b: Float,
    order: usize,
    prec: u32,
    /// β_m = B_m(1−b)/m! for m = 0..
    beta: Vec<Float>,
    /// g_j = β_(j+k+1) (j+k+1)!/j!, so f^(k)(t) = −Σ g_j t^j for t < 2π.
    series: Vec<Float>,
}

impl WeightedIntegrand {
    /// Integrand for shift `b` ∈ (0, 2] and derivative order `k`.
    pub fn new(b: &Float, k: i32, prec: u32) -> Result<Self> {
        if !(0..=MAX_DERIVATIVE_ORDER).contains(&k) {
            return Err(Error::domain(format!(
                "derivative order must satisfy 0 <= k <= {MAX_DERIVATIVE_ORDER}, got {k}"
            )));
        }
        if b.is_nan() || *b <= 0 || *b > 2 {
            return Err(Error::domain(format!("integrand shift must satisfy 0 < b <= 2, got {b}")));
        }
        let prec = prec.max(MIN_PRECISION);
        let order = k as usize;
        let w = prec + 2 * order as u32 + 16;
        // terms shrink by about log2(8π) bits per index at t = 1/4
        let need = ((f64::from(prec + 8) + 2.0 * (order as f64 + 1.0) * 5.0) / 4.6).ceil() as usize + 8;
        let len = need.min(SERIES_CAP);
        let x = Float::with_val(w, 1 - b);
        let beta = bernoulli_poly_scaled_values(len + order + 2, &x, w);
        let mut series = Vec::with_capacity(len);
        for j in 0..len {
            // (j+k+1)!/j! = (j+1)(j+2)…(j+k+1)
            let mut g = beta[j + order + 1].clone();
            for i in 1..=(order as u32 + 1) {
                g *= j as u32 + i;
            }
            series.push(g);
        }
        Ok(WeightedIntegrand {
            b: Float::with_val(w, b),
            order,
            prec,
            beta,
            series,
        })
    }

    /// Integrand of the basic representation for shift a: b = a.
    pub fn for_shift(a: &ShiftParameter, k: i32, prec: u32) -> Result<Self> {
        a.require_positive()?;
        WeightedIntegrand::new(&a.at_prec(prec), k, prec)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn shift(&self) -> &Float {
        &self.b
    }

    /// f_b^(k)(t).
    pub fn eval(&self, t: &Float) -> Float {
        let p = self.prec;
        if is_small(t) {
            return Float::with_val(p, self.small_series(t));
        }
        if self.order == 0 {
            return Float::with_val(p, self.closed_form(t));
        }
        let jet = self.f_jet(t, self.order + 1);
        // f^(k)(t) = (k+1)! [h^(k+1)] F(t+h)
        let mut v = jet[self.order + 1].clone();
        for i in 2..=(self.order as u32 + 1) {
            v *= i;
        }
        Float::with_val(p, v)
    }

    /// The first `m` Taylor coefficients of f_b^(k) about 0 (fewer if the
    /// prepared series is shorter).
    pub fn taylor_head(&self, m: usize) -> Vec<Float> {
        self.series
            .iter()
            .take(m)
            .map(|g| Float::with_val(self.prec, -g))
            .collect()
    }

    /// f_b^(k)(t) minus its Taylor polynomial of degree m − 1, for 0 < t ≤ 1.
    pub fn eval_tail(&self, t: &Float, m: usize) -> Float {
        let p = self.prec;
        let m = m.min(self.series.len());
        if is_small(t) {
            let w = self.beta[0].prec();
            let tw = Float::with_val(w, t);
            let mut acc = Float::new(w);
            let mut power = Float::with_val(w, rug::ops::Pow::pow(&tw, m as u32));
            let stop = -f64::from(p + 8);
            let mut quiet = 0;
            for g in &self.series[m..] {
                let term = Float::with_val(w, g * &power);
                acc -= &term;
                if g.is_zero() || crate::mp::log2_abs(&term) < stop + crate::mp::log2_abs(&acc).max(-f64::from(p)) {
                    quiet += 1;
                    if quiet >= 2 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                power *= &tw;
            }
            return Float::with_val(p, acc);
        }
        let w = p + 16;
        let tw = Float::with_val(w, t);
        let mut poly = Float::new(w);
        for g in self.series[..m].iter().rev() {
            poly *= &tw;
            poly -= g;
        }
        let f = Float::with_val(w, self.eval(t));
        Float::with_val(p, f - poly)
    }

    fn small_series(&self, t: &Float) -> Float {
        let w = self.beta[0].prec();
        let tw = Float::with_val(w, t);
        let mut acc = Float::new(w);
        let mut power = Float::with_val(w, 1);
        let stop = -f64::from(self.prec + 8);
        let mut quiet = 0;
        for g in &self.series {
            let term = Float::with_val(w, g * &power);
            acc -= &term;
            if g.is_zero() || crate::mp::log2_abs(&term) < stop + crate::mp::log2_abs(&acc).max(-f64::from(self.prec)) {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            power *= &tw;
        }
        acc
    }

    /// e^(−bt)(t/d² − 1/d + (b−1)t/d) with d = 1 − e^(−t).
    fn closed_form(&self, t: &Float) -> Float {
        let w = self.prec + 16;
        let tw = Float::with_val(w, t);
        let d = -Float::with_val(w, (-tw.clone()).exp_m1());
        let inv = Float::with_val(w, d.recip_ref());
        let t_over_d = Float::with_val(w, &tw * &inv);
        let mut acc = Float::with_val(w, &t_over_d * &inv);
        acc -= &inv;
        acc += Float::with_val(w, &self.b - 1u32) * t_over_d;
        let decay = Float::with_val(w, -Float::with_val(w, &self.b * &tw)).exp();
        acc * decay
    }

    /// Taylor coefficients of F(t+h) in h up to `len`, for t ≥ the switch point.
    fn f_jet(&self, t: &Float, len: usize) -> Vec<Float> {
        let w = self.prec + 2 * len as u32 + 16;
        let tw = Float::with_val(w, t);
        let u = Float::with_val(w, (-tw.clone()).exp());
        let d0 = -Float::with_val(w, (-tw.clone()).exp_m1());
        // D(h) = 1 − u e^(−h): D_0 = d0, D_j = −u (−1)^j / j!
        let mut dcoef = Vec::with_capacity(len + 1);
        dcoef.push(d0.clone());
        let mut fact = Float::with_val(w, 1);
        for j in 1..=len {
            fact /= j as u32;
            let mut v = Float::with_val(w, &u * &fact);
            if j % 2 == 0 {
                v = -v;
            }
            dcoef.push(v);
        }
        let inv0 = Float::with_val(w, d0.recip_ref());
        let mut r: Vec<Float> = Vec::with_capacity(len + 1);
        r.push(inv0.clone());
        for n in 1..=len {
            let mut acc = Float::new(w);
            for j in 1..=n {
                acc += Float::with_val(w, &dcoef[j] * &r[n - j]);
            }
            r.push(-acc * &inv0);
        }
        // e^(−b(t+h)) = e^(−bt) Σ (−b)^j h^j / j!
        let bw = Float::with_val(w, &self.b);
        let scale = Float::with_val(w, -Float::with_val(w, &bw * &tw)).exp();
        let mut e = Vec::with_capacity(len + 1);
        e.push(scale);
        for j in 1..=len {
            let v = Float::with_val(w, &e[j - 1] * &bw) / j as u32;
            e.push(-v);
        }
        // P = e·r, then F = −(t + h)·P
        let mut prod = Vec::with_capacity(len + 1);
        for n in 0..=len {
            let mut acc = Float::new(w);
            for j in 0..=n {
                acc += Float::with_val(w, &e[j] * &r[n - j]);
            }
            prod.push(acc);
        }
        let mut out = Vec::with_capacity(len + 1);
        for n in 0..=len {
            let mut v = Float::with_val(w, &tw * &prod[n]);
            if n > 0 {
                v += &prod[n - 1];
            }
            out.push(-v);
        }
        out
    }

    /// Taylor coefficients of f_b^(k)(t+h) up to h^order.
    pub fn jet(&self, t: &Float, order: usize) -> KernelJet {
        let p = self.prec;
        let k = self.order;
        let len = k + order + 1;
        let raw: Vec<Float> = if is_small(t) {
            // [h^n] F(t+h) = −Σ_(m≥n) β_m C(m,n) t^(m−n)
            let w = self.beta[0].prec();
            let tw = Float::with_val(w, t);
            (0..=len)
                .map(|n| {
                    let mut acc = Float::new(w);
                    let mut power = Float::with_val(w, 1);
                    let mut binom = Float::with_val(w, 1);
                    for m in n..self.beta.len() {
                        acc -= Float::with_val(w, &self.beta[m] * &power) * &binom;
                        power *= &tw;
                        binom *= (m + 1) as u32;
                        binom /= (m + 1 - n) as u32;
                    }
                    acc
                })
                .collect()
        } else {
            self.f_jet(t, len)
        };
        // f^(k)(t+h) = F^(k+1)(t+h) = Σ_j [h^(j+k+1)]F · (j+k+1)!/j! h^j
        let coeffs = (0..=order)
            .map(|j| {
                let mut v = raw[j + k + 1].clone();
                for i in 1..=(k as u32 + 1) {
                    v *= j as u32 + i;
                }
                Float::with_val(p, v)
            })
            .collect();
        KernelJet {
            t: Float::with_val(p, t),
            order,
            coeffs,
        }
    }
}

/// d^k/dt^k [ψ(t) e^(−(a−1)t)] at the precision of `t`.
pub fn integrand_derivative(k: i32, t: &Float, a: &ShiftParameter) -> Result<Float> {
    check_t(t)?;
    if k < 0 {
        return Err(Error::domain(format!("derivative order must be >= 0, got {k}")));
    }
    Ok(WeightedIntegrand::for_shift(a, k, t.prec())?.eval(t))
}

/// Local Taylor jet of d^k/dt^k [ψ(t) e^(−(a−1)t)] about t.
pub fn integrand_jet(k: i32, t: &Float, a: &ShiftParameter, order: usize) -> Result<KernelJet> {
    check_t(t)?;
    Ok(WeightedIntegrand::for_shift(a, k, t.prec())?.jet(t, order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// t e^(−t)/(1 − e^(−t)) = Σ (1 − e^(−t))^(n−1) e^(−t)/n
    Reciprocal,
    /// t e^(−t)/(1 − e^(−t))² − e^(−t)/(1 − e^(−t)) = Σ (1 − e^(−t))^(n−1) e^(−t)/(n+1)
    Shifted,
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub lhs: Float,
    pub partial_rhs: Float,
    pub tail_bound: Float,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        Float::with_val(self.lhs.prec(), &self.lhs - &self.partial_rhs).abs() <= self.tail_bound
    }
}

/// Closed form, N-term partial sum and a tail majorant for the two
/// logarithmic-series identities.
///
/// With q = 1 − e^(−t) every omitted term is at most q^(n−1)e^(−t)/(N+1), so
/// the tail is below q^N/(N+1) ≤ q^N/N. A rounding allowance proportional to
/// N ulps is added.
pub fn identity_lhs_rhs(which: Identity, t: &Float, n_terms: u64) -> Result<IdentityCheck> {
    if t.is_nan() || *t <= 0 {
        return Err(Error::domain(format!("identity check needs t > 0, got {t}")));
    }
    if n_terms < 1 {
        return Err(Error::domain("identity check needs N >= 1"));
    }
    let p = t.prec().max(MIN_PRECISION);
    let w = p + 16;
    let tw = Float::with_val(w, t);
    let u = Float::with_val(w, (-tw.clone()).exp());
    let q = -Float::with_val(w, (-tw.clone()).exp_m1());
    let lhs = match which {
        Identity::Reciprocal => Float::with_val(w, &tw * &u) / &q,
        Identity::Shifted => {
            let q2 = Float::with_val(w, q.square_ref());
            Float::with_val(w, &tw * &u) / q2 - Float::with_val(w, &u / &q)
        }
    };
    let mut partial = Float::new(w);
    let mut qpow = u.clone();
    for n in 1..=n_terms {
        let den = match which {
            Identity::Reciprocal => n,
            Identity::Shifted => n + 1,
        };
        partial += Float::with_val(w, &qpow / den);
        qpow *= &q;
    }
    // qpow = u q^N here; q^N = qpow / u
    let tail = Float::with_val(w, &qpow / &u) / n_terms;
    let biggest = Float::with_val(64, lhs.abs_ref()).max(&Float::with_val(64, partial.abs_ref()));
    let rounding = Float::with_val(64, Float::i_exp(1, 4 - p as i32)) * (n_terms + 4) * biggest;
    Ok(IdentityCheck {
        lhs: Float::with_val(p, lhs),
        partial_rhs: Float::with_val(p, partial),
        tail_bound: Float::with_val(p, tail + rounding),
    })
}

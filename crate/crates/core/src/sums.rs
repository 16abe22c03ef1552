//! Alternating binomial sums
//!
//! S_n(s,a) = Σ_{k=0}^{n−1} (−1)^k C(n−1,k) (k+a)^(−s),
//!
//! their values at s = −k (generalized Stirling numbers), the large-n
//! estimates and the dominating-series bounds used to truncate the series
//! representation.
//!
//! The binomial weights reach 2^(n−1) while S_n decays, so the sums are
//! formed with n + 32 extra bits and the observed cancellation is reported.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mp::{complex_pow_neg, gamma, gamma_real, EvalConfig, MpComplex, ShiftParameter};

const EXTRA_BITS: u32 = 32;

/// One alternating sum with its error bookkeeping.
#[derive(Clone, Debug)]
pub struct SnValue {
    pub value: MpComplex,
    /// log2(largest |term|) − log2|value|, clamped to ≥ 0.
    pub cancellation_bits: u32,
    pub err: Float,
}

fn check_n(n: u64) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("S_n needs n >= 1"));
    }
    Ok(())
}

/// Internal precision for sums up to index n.
fn internal_bits(cfg: &EvalConfig, n: u64) -> u32 {
    cfg.precision_bits + n.min(u64::from(u32::MAX / 4)) as u32 + EXTRA_BITS
}

/// log2 C(m, k) for k = 0..=m.
fn log2_binomial_row(m: u64) -> Vec<f64> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut cur = 0.0f64;
    row.push(cur);
    for k in 0..m {
        cur += ((m - k) as f64).log2() - ((k + 1) as f64).log2();
        row.push(cur);
    }
    row
}

fn cancellation(max_term_log2: f64, value: &MpComplex, cap: u32) -> u32 {
    let v = value.log2_abs();
    if v == f64::NEG_INFINITY {
        return cap;
    }
    (max_term_log2 - v).max(0.0).min(f64::from(cap)).ceil() as u32
}

fn finish(sum: MpComplex, max_term_log2: f64, n: u64, w: u32, p: u32) -> SnValue {
    // each term carries a few ulps at w bits; the final rounding costs one at p
    let work = max_term_log2 + (n as f64).log2() + 6.0 - f64::from(w);
    let out = sum.with_prec(p);
    let round = out.log2_abs() + 1.0 - f64::from(p);
    let err_log2 = if round > work { round + 1.0 } else { work + 1.0 };
    SnValue {
        cancellation_bits: cancellation(max_term_log2, &sum, w),
        err: Float::with_val(64, err_log2).exp2(),
        value: out,
    }
}

/// Σ_{k=0}^{n−1} (−1)^k C(n−1,k)(k+a)^(−s) at cfg.precision_bits + n + 32
/// internal bits.
pub fn s_n_direct(n: u64, s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<SnValue> {
    check_n(n)?;
    a.require_positive()?;
    let w = internal_bits(cfg, n);
    let sw = s.with_prec(w);
    let aw = a.at_prec(w);
    let mut sum = MpComplex::zero(w);
    let mut binom = Integer::from(1);
    let mut max_term = f64::NEG_INFINITY;
    let m = n - 1;
    for k in 0..n {
        let base = Float::with_val(w, &aw + k);
        let term = complex_pow_neg(&base, &sw)?.mul_real(&Float::with_val(w, &binom));
        max_term = max_term.max(term.log2_abs());
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        binom *= m - k;
        binom /= k + 1;
    }
    Ok(finish(sum, max_term, n, w, cfg.precision_bits))
}

/// −(1/n)·Σ_{m=1}^{n} C(n,m)(−1)^m·m·(m+a−1)^(−s), the same sum with the
/// binomial index shifted by one.
pub fn s_n_shifted(n: u64, s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> Result<SnValue> {
    check_n(n)?;
    a.require_positive()?;
    let w = internal_bits(cfg, n);
    let sw = s.with_prec(w);
    let aw = a.at_prec(w);
    let mut sum = MpComplex::zero(w);
    let mut binom = Integer::from(n);
    let mut max_term = f64::NEG_INFINITY;
    for m in 1..=n {
        let base = Float::with_val(w, &aw + (m - 1));
        let weight = Float::with_val(w, Integer::from(&binom * m));
        let term = complex_pow_neg(&base, &sw)?.mul_real(&weight);
        max_term = max_term.max(term.log2_abs());
        // −(−1)^m
        if m % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        binom *= n - m;
        binom /= m + 1;
    }
    let sum = sum.div_real(&Float::with_val(w, n));
    Ok(finish(sum, max_term - (n as f64).log2(), n, w, cfg.precision_bits))
}

/// S_n(−k, a) = k!·[t^k] e^(at)(1 − e^t)^(n−1), exactly.
pub fn stirling_generalized_exact(n: u64, k: u64, a: &Rational) -> Result<Rational> {
    check_n(n)?;
    let order = k as usize;
    // (1 − e^t) = −Σ_{j≥1} t^j/j!, so (1 − e^t)^(n−1) starts at t^(n−1)
    if n - 1 > k {
        return Ok(Rational::new());
    }
    let mut fact = Integer::from(1);
    let mut inv_fact = Vec::with_capacity(order + 1);
    for j in 0..=order {
        if j > 0 {
            fact *= j as u64;
        }
        inv_fact.push(Rational::from((Integer::from(1), fact.clone())));
    }
    let mut one_minus: Vec<Rational> = vec![Rational::new(); order + 1];
    for j in 1..=order {
        one_minus[j] = Rational::from(-&inv_fact[j]);
    }
    let mut power: Vec<Rational> = vec![Rational::new(); order + 1];
    power[0] = Rational::from(1);
    for _ in 0..n - 1 {
        power = truncated_mul(&power, &one_minus, order);
    }
    let mut exp_at: Vec<Rational> = Vec::with_capacity(order + 1);
    let mut apow = Rational::from(1);
    for (j, f) in inv_fact.iter().enumerate() {
        if j > 0 {
            apow *= a;
        }
        exp_at.push(Rational::from(&apow * f));
    }
    let prod = truncated_mul(&exp_at, &power, order);
    Ok(Rational::from(&prod[order] * &fact))
}

fn truncated_mul(x: &[Rational], y: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); order + 1];
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (j, yj) in y.iter().enumerate().take(order + 1 - i) {
            out[i + j] += Rational::from(xi * yj);
        }
    }
    out
}

/// [`stirling_generalized_exact`] rounded to the precision of `a`.
pub fn stirling_generalized(n: u64, k: u64, a: &ShiftParameter) -> Result<Float> {
    let exact_a = a
        .value()
        .to_rational()
        .ok_or_else(|| Error::domain("shift is not finite"))?;
    let v = stirling_generalized_exact(n, k, &exact_a)?;
    Ok(Float::with_val(a.value().prec(), v))
}

/// Large-n estimate Γ(a)/(n^a (ln n)^(1−s) Γ(s)).
///
/// The same expression covers nonintegral s, integral s = k (where it is
/// Γ(a)(ln n)^(k−1)/(n^a (k−1)!)) and a = 1 (where it is
/// 1/(n (ln n)^(1−s) Γ(s))). The branch of (ln n)^(s−1) is principal.
pub fn s_n_asymptotic(n: u64, s: &MpComplex, a: &ShiftParameter) -> Result<MpComplex> {
    if n < 3 {
        return Err(Error::domain("the large-n estimate needs n >= 3"));
    }
    if s.re.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::domain(format!("the large-n estimate needs Re(s) > 0, got s = {s}")));
    }
    a.require_positive()?;
    let p = s.prec().max(a.value().prec());
    let nf = Float::with_val(p, n);
    let ln_n = Float::with_val(p, nf.ln_ref());
    let s1 = s.with_prec(p).add_real(&Float::with_val(p, -1));
    let log_pow = crate::mp::complex_pow(&ln_n, &s1)?;
    let n_pow_a = Float::with_val(p, nf.pow(a.value()));
    let ga = gamma_real(&a.at_prec(p))?;
    let gs = gamma(&s.with_prec(p))?;
    let num = log_pow.mul_real(&Float::with_val(p, &ga / &n_pow_a));
    Ok(&num / &gs)
}

/// θ of the split e^(−θt): 1/2 when a > 1/2, a/2 otherwise.
pub fn split_theta(a: &Float) -> Float {
    let p = a.prec();
    if *a > 0.5 {
        Float::with_val(p, 0.5)
    } else {
        Float::with_val(p, a / 2u32)
    }
}

/// max_{t>0} (1 − e^(−t))^(n−1) e^(−θt)
/// = ((n−1)/(n−1+θ))^(n−1) (θ/(n−1+θ))^θ.
pub fn k_factor(n: u64, theta: &Float) -> Float {
    let p = theta.prec();
    let m = Float::with_val(p, n - 1);
    let den = Float::with_val(p, &m + theta);
    let first = if n == 1 {
        Float::with_val(p, 1)
    } else {
        Float::with_val(p, &m / &den).pow(&m)
    };
    let second = Float::with_val(p, theta / &den).pow(theta);
    first * second
}

/// Bound on one term of the dominating series.
#[derive(Clone, Debug)]
pub struct TruncationBound {
    pub n: u64,
    pub sigma: Float,
    pub a: ShiftParameter,
    pub bound: Float,
}

/// K_θ(n)·Γ(σ)/((a−θ)^σ (n+1)).
///
/// For a > 1/2 this is the bound K'·(1 − 1/(2n−1))^(n−1)/((n+1)√(2n−1)) with
/// K' = Γ(σ)/(a − 1/2)^σ; for a ≤ 1/2 the split point θ = a/2 is used.
pub fn dominating_term_bound(n: u64, sigma: &Float, a: &ShiftParameter) -> Result<TruncationBound> {
    if n < 2 {
        return Err(Error::domain("dominating bound needs n >= 2"));
    }
    if sigma.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::domain(format!("dominating bound needs sigma > 0, got {sigma}")));
    }
    a.require_positive()?;
    let p = sigma.prec().max(a.value().prec());
    let av = a.at_prec(p);
    let theta = split_theta(&av);
    let gap = Float::with_val(p, &av - &theta);
    let gs = gamma_real(&Float::with_val(p, sigma))?;
    let bound = k_factor(n, &theta) * gs / gap.pow(sigma) / (n + 1);
    Ok(TruncationBound {
        n,
        sigma: sigma.clone(),
        a: a.clone(),
        bound,
    })
}

/// Majorant of Σ_{n>N} |S_n(s,a)|·|1/(n+1) + c/n| using
/// |S_n| ≤ K_θ(n)Γ(σ)/((a−θ)^σ |Γ(s)|) and K_θ(n) ≤ θ^θ (n−1)^(−θ):
/// W·M·θ^θ (N^(−1−θ) + N^(−θ)/θ) with W = 1 + |c|.
pub fn dominating_tail_bound(n: u64, s: &MpComplex, a: &ShiftParameter, weight_coeff: &Float) -> Result<Float> {
    let sigma = &s.re;
    if sigma.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::domain("dominating tail bound needs Re(s) > 0"));
    }
    a.require_positive()?;
    let p = 64;
    let av = a.at_prec(p);
    let theta = split_theta(&av);
    let gap = Float::with_val(p, &av - &theta);
    let sig = Float::with_val(p, sigma);
    let gs = gamma_real(&sig)?;
    let g_abs = gamma(&s.with_prec(p))?.abs();
    let m = gs / gap.pow(&sig) / g_abs;
    let w = Float::with_val(p, weight_coeff.abs_ref()) + 1u32;
    let nf = Float::with_val(p, n.max(1));
    let first = Float::with_val(p, (&nf).pow(-(Float::with_val(p, &theta + 1u32))));
    let second = Float::with_val(p, (&nf).pow(-Float::with_val(p, &theta))) / &theta;
    let tt = Float::with_val(p, (&theta).pow(&theta));
    Ok(w * m * tt * (first + second))
}

/// One row of an [`SnTable`].
#[derive(Clone, Debug)]
pub struct SnEntry {
    pub n: u64,
    pub value: MpComplex,
    pub cancellation_bits: u32,
    pub err: Float,
}

/// S_1..S_N for one (s, a, precision), built by repeated forward
/// differencing of f(k) = (k+a)^(−s) at precision + N + 32 bits.
#[derive(Clone, Debug)]
pub struct SnTable {
    pub s: MpComplex,
    pub a: ShiftParameter,
    pub precision_bits: u32,
    pub entries: Vec<SnEntry>,
}

impl SnTable {
    pub fn build(s: &MpComplex, a: &ShiftParameter, n_max: u64, cfg: &EvalConfig) -> Result<Self> {
        check_n(n_max)?;
        a.require_positive()?;
        let w = internal_bits(cfg, n_max);
        let p = cfg.precision_bits;
        let sw = s.with_prec(w);
        let aw = a.at_prec(w);
        let len = n_max as usize;
        let mut d: Vec<MpComplex> = Vec::with_capacity(len);
        let mut f_log2 = Vec::with_capacity(len);
        for k in 0..len {
            let v = complex_pow_neg(&Float::with_val(w, &aw + k as u64), &sw)?;
            f_log2.push(v.log2_abs());
            d.push(v);
        }
        let max_f = f_log2.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut entries = Vec::with_capacity(len);
        for m in 0..len {
            // d[0] = Δ^m f(0); S_(m+1) = (−1)^m Δ^m f(0)
            let mut value = d[0].clone();
            if m % 2 == 1 {
                value = -value;
            }
            let row = log2_binomial_row(m as u64);
            let max_term = row
                .iter()
                .zip(&f_log2)
                .map(|(b, f)| b + f)
                .fold(f64::NEG_INFINITY, f64::max);
            let mf = m as f64;
            let work = mf + (mf + 1.0).log2() + max_f + 4.0 - f64::from(w);
            let out = value.with_prec(p);
            let round = out.log2_abs() + 1.0 - f64::from(p);
            let err_log2 = work.max(round) + 1.0;
            entries.push(SnEntry {
                n: m as u64 + 1,
                cancellation_bits: cancellation(max_term, &value, w),
                err: Float::with_val(64, err_log2).exp2(),
                value: out,
            });
            for k in 0..len - m - 1 {
                let next = &d[k + 1] - &d[k];
                d[k] = next;
            }
        }
        Ok(SnTable {
            s: s.clone(),
            a: a.clone(),
            precision_bits: p,
            entries,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for index n (1-based).
    pub fn get(&self, n: u64) -> Option<&SnEntry> {
        if n == 0 {
            return None;
        }
        self.entries.get(n as usize - 1)
    }

    /// Whether this table was built for (s, a, precision).
    pub fn matches(&self, s: &MpComplex, a: &ShiftParameter, precision_bits: u32) -> bool {
        self.precision_bits == precision_bits && self.s == *s && self.a == *a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> EvalConfig {
        EvalConfig::with_digits(30)
    }

    fn sp(a: f64) -> ShiftParameter {
        ShiftParameter::from_f64(128, a).unwrap()
    }

    fn within(x: &SnValue, y: &SnValue) -> bool {
        let d = x.value.dist(&y.value);
        d <= Float::with_val(64, &x.err + &y.err)
    }

    #[test]
    fn first_sums() {
        let c = cfg();
        let s = MpComplex::from_f64(c.precision_bits, 2.5, -1.0);
        let one = s_n_direct(1, &s, &sp(1.0), &c).unwrap();
        assert_eq!(one.value, MpComplex::one(c.precision_bits));
        let a = sp(0.3);
        let two = s_n_direct(2, &s, &a, &c).unwrap();
        let p = c.precision_bits;
        let expect = &complex_pow_neg(&a.at_prec(p), &s).unwrap()
            - &complex_pow_neg(&Float::with_val(p, a.value() + 1u32), &s).unwrap();
        assert!(two.value.dist_f64(&expect) < 1e-35);
        let zero = s_n_direct(3, &MpComplex::zero(p), &a, &c).unwrap();
        assert!(zero.value.is_zero());
    }

    #[test]
    fn shifted_agrees_on_first_indices() {
        let c = cfg();
        let s = MpComplex::from_f64(c.precision_bits, 1.7, 0.4);
        for n in 1..6 {
            let d = s_n_direct(n, &s, &sp(0.45), &c).unwrap();
            let sh = s_n_shifted(n, &s, &sp(0.45), &c).unwrap();
            assert!(within(&d, &sh), "n = {n}");
        }
    }

    #[test]
    fn shifted_matches_at_fifty() {
        let c = cfg();
        let s = MpComplex::from_f64(c.precision_bits, 2.0, 3.0);
        let d = s_n_direct(50, &s, &sp(0.5), &c).unwrap();
        let sh = s_n_shifted(50, &s, &sp(0.5), &c).unwrap();
        assert!(within(&d, &sh));
        assert!(d.value.log2_abs() - d.err.to_f64().log2() > f64::from(c.precision_bits) - 10.0);
    }

    #[test]
    fn vanishing_at_negative_integers() {
        let c = cfg();
        for a in [0.25, 0.5, 1.0] {
            for k in 0..=10u32 {
                let s = MpComplex::from_f64(c.precision_bits, -f64::from(k), 0.0);
                for n in u64::from(k) + 2..u64::from(k) + 8 {
                    let v = s_n_direct(n, &s, &sp(a), &c).unwrap();
                    assert!(v.value.is_zero(), "a = {a}, k = {k}, n = {n}: {}", v.value);
                }
            }
        }
    }

    #[test]
    fn stirling_examples() {
        let half = Rational::from((1, 2));
        assert_eq!(stirling_generalized_exact(1, 0, &half).unwrap(), 1);
        assert_eq!(stirling_generalized_exact(2, 1, &Rational::from((3, 10))).unwrap(), -1);
        assert_eq!(stirling_generalized_exact(9, 6, &half).unwrap(), 0);
        assert_eq!(stirling_generalized(1, 0, &sp(1.0)).unwrap(), 1);
    }

    #[test]
    fn stirling_matches_direct() {
        let c = cfg();
        for a in [0.25, 0.5, 1.0] {
            for n in 1..=12u64 {
                for k in 0..=8u64 {
                    let s = MpComplex::from_f64(c.precision_bits, -(k as f64), 0.0);
                    let direct = s_n_direct(n, &s, &sp(a), &c).unwrap();
                    let st = stirling_generalized(n, k, &sp(a)).unwrap();
                    assert!(direct.value.is_real());
                    assert_eq!(Float::with_val(128, &direct.value.re), st, "a = {a}, n = {n}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn cancellation_grows_with_n() {
        let c = cfg();
        let s = MpComplex::from_f64(c.precision_bits, 2.0, 0.0);
        let mut prev = 0;
        for n in [20u64, 40, 80, 160] {
            let v = s_n_direct(n, &s, &sp(1.0), &c).unwrap();
            // at least linear growth: half a bit per index
            assert!(v.cancellation_bits >= (n / 2) as u32, "n = {n}: {}", v.cancellation_bits);
            assert!(v.cancellation_bits > prev);
            prev = v.cancellation_bits;
            // H_n/n at s = 2, a = 1 (S_n(2,1) = H_n/n)
            let mut h = Rational::new();
            for j in 1..=n {
                h += Rational::from((1, j));
            }
            let expect = Float::with_val(c.precision_bits, h / Rational::from(n));
            assert!(v.value.dist(&MpComplex::from_real(expect)) <= v.err);
        }
    }

    #[test]
    fn table_matches_direct() {
        let c = cfg();
        let s = MpComplex::from_f64(c.precision_bits, 1.5, 2.0);
        let a = sp(0.75);
        let t = SnTable::build(&s, &a, 60, &c).unwrap();
        assert_eq!(t.len(), 60);
        assert!(t.matches(&s, &a, c.precision_bits));
        for n in [1u64, 2, 7, 33, 60] {
            let e = t.get(n).unwrap();
            let d = s_n_direct(n, &s, &a, &c).unwrap();
            let diff = e.value.dist(&d.value);
            assert!(diff <= Float::with_val(64, &e.err + &d.err), "n = {n}");
            assert!(e.cancellation_bits.abs_diff(d.cancellation_bits) <= 1, "n = {n}");
        }
    }

    #[test]
    fn asymptotic_examples() {
        let p = 128;
        let n = 10_000u64;
        let s2 = MpComplex::from_f64(p, 2.0, 0.0);
        let est = s_n_asymptotic(n, &s2, &sp(1.0)).unwrap();
        let expect = (n as f64).ln() / n as f64;
        assert!((est.re.to_f64() - expect).abs() < 1e-15 * expect);
        let est = s_n_asymptotic(n, &s2, &sp(0.5)).unwrap();
        let expect = std::f64::consts::PI.sqrt() * (n as f64).ln() / (n as f64).sqrt();
        assert!((est.re.to_f64() - expect).abs() < 1e-12 * expect);
        assert!(s_n_asymptotic(2, &s2, &sp(0.5)).is_err());
        assert!(s_n_asymptotic(10, &MpComplex::from_f64(p, -1.0, 0.0), &sp(0.5)).is_err());
    }

    #[test]
    fn bound_examples() {
        let k2 = k_factor(2, &Float::with_val(128, 0.5)).to_f64();
        assert!((k2 - 2.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);
        let sigma = Float::with_val(128, 2);
        let mut prev = f64::INFINITY;
        let mut total = 0.0;
        for n in 2..2000u64 {
            let b = dominating_term_bound(n, &sigma, &sp(0.9)).unwrap().bound.to_f64();
            assert!(b > 0.0 && b < prev);
            prev = b;
            total += b;
            // comparison with Σ n^(−3/2)
            assert!(b <= 20.0 * (n as f64).powf(-1.5));
        }
        assert!(total.is_finite());
    }

    #[test]
    fn bound_dominates_sums() {
        let c = cfg();
        for (sig, a) in [(1.5, 0.9), (2.0, 0.3), (0.7, 0.5)] {
            let s = MpComplex::from_f64(c.precision_bits, sig, 0.0);
            let g = gamma(&s).unwrap().abs();
            for n in [2u64, 5, 30, 100] {
                let v = s_n_direct(n, &s, &sp(a), &c).unwrap();
                let tb = dominating_term_bound(n, &Float::with_val(128, sig), &sp(a)).unwrap();
                // |S_n| ≤ K Γ(σ)/((a−θ)^σ |Γ(s)|) = bound·(n+1)/|Γ(s)|
                let cap = Float::with_val(128, &tb.bound * (n + 1)) / &g;
                assert!(v.value.abs() <= cap, "σ = {sig}, a = {a}, n = {n}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn direct_equals_shifted(n in 1u64..120, re in -10.0f64..10.0, im in -10.0f64..10.0, ai in 1u32..=10) {
            let c = EvalConfig::with_digits(20);
            let s = MpComplex::from_f64(c.precision_bits, re, im);
            let a = ShiftParameter::from_f64(128, f64::from(ai) / 10.0).unwrap();
            let d = s_n_direct(n, &s, &a, &c).unwrap();
            let sh = s_n_shifted(n, &s, &a, &c).unwrap();
            prop_assert!(within(&d, &sh));
        }
    }
}

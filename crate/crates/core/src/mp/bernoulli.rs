use std::borrow::Cow;
use std::sync::OnceLock;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Exact Bernoulli numbers B_0..=B_max (B_1 = −1/2).
///
/// Even-index values come from the tangent numbers T_k via
/// B_2k = (−1)^(k−1)·2k·T_k / (4^k (4^k − 1)); the tangent numbers are built
/// with integer additions only.
pub fn bernoulli_numbers(max: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); max + 1];
    out[0] = Rational::from(1);
    if max >= 1 {
        out[1] = Rational::from((-1, 2));
    }
    let half = max / 2;
    if half == 0 {
        return out;
    }
    let mut tangent = vec![Integer::new(); half + 1];
    tangent[1] = Integer::from(1);
    for k in 2..=half {
        tangent[k] = Integer::from(&tangent[k - 1] * (k as u64 - 1));
    }
    for k in 2..=half {
        for j in k..=half {
            let prev = Integer::from(&tangent[j - 1] * (j - k) as u64);
            tangent[j] *= (j - k + 2) as u64;
            tangent[j] += prev;
        }
    }
    for k in 1..=half {
        let four_k = Integer::from(1) << (2 * k as u32);
        let den = Integer::from(&four_k - 1u32) * &four_k;
        let mut num = Integer::from(&tangent[k] * (2 * k as u64));
        if k % 2 == 0 {
            num = -num;
        }
        out[2 * k] = Rational::from((num, den));
    }
    out
}

const CACHED: usize = 640;

/// Bernoulli numbers B_0..=B_max, served from a lazily built table when
/// `max` is small enough.
pub(crate) fn bernoulli_cached(max: usize) -> Cow<'static, [Rational]> {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    if max <= CACHED {
        Cow::Borrowed(&TABLE.get_or_init(|| bernoulli_numbers(CACHED))[..=max])
    } else {
        Cow::Owned(bernoulli_numbers(max))
    }
}

fn check_degree(m: i64) -> Result<usize> {
    if m < 0 {
        return Err(Error::domain(format!("Bernoulli polynomial degree must be >= 0, got {m}")));
    }
    Ok(m as usize)
}

/// B_m(x) evaluated exactly over the rationals.
pub fn bernoulli_poly_exact(m: i64, x: &Rational) -> Result<Rational> {
    let m = check_degree(m)?;
    let b = bernoulli_cached(m);
    // B_m(x) = Σ_j C(m,j) B_(m−j) x^j, Horner in x
    let mut acc = Rational::new();
    for j in (0..=m).rev() {
        acc *= x;
        let c = Integer::from(Integer::binomial_u(m as u32, j as u32));
        acc += Rational::from(&b[m - j] * c);
    }
    Ok(acc)
}

/// B_m(x) at the precision of `x`, from exact rational coefficients.
pub fn bernoulli_poly(m: i64, x: &Float) -> Result<Float> {
    let m = check_degree(m)?;
    let prec = x.prec();
    let w = prec + 16 + (m as u32);
    let b = bernoulli_cached(m);
    let xw = Float::with_val(w, x);
    let mut acc = Float::new(w);
    for j in (0..=m).rev() {
        acc *= &xw;
        let c = Integer::from(Integer::binomial_u(m as u32, j as u32));
        acc += Float::with_val(w, Rational::from(&b[m - j] * c));
    }
    Ok(Float::with_val(prec, acc))
}

/// Values B_m(x)/m! for m = 0..=max at `prec` bits.
///
/// Uses the generating function t e^(xt)/(e^t − 1) = Σ B_m(x) t^m/m! as the
/// Cauchy product of Σ (B_j/j!) t^j and Σ x^i t^i/i!. For |x| ≤ 1 every
/// product term is within a factor e^(2π) of the result, so a fixed guard
/// suffices.
pub fn bernoulli_poly_scaled_values(max: usize, x: &Float, prec: u32) -> Vec<Float> {
    let w = prec + 24;
    let numbers = bernoulli_cached(max);
    let mut fact = Integer::from(1);
    let mut beta = Vec::with_capacity(max + 1);
    for (j, bj) in numbers.iter().enumerate() {
        if j > 0 {
            fact *= j as u64;
        }
        beta.push(Float::with_val(w, Rational::from(bj / Rational::from(&fact))));
    }
    let xw = Float::with_val(w, x);
    let mut powers = Vec::with_capacity(max + 1);
    let mut cur = Float::with_val(w, 1);
    for i in 0..=max {
        if i > 0 {
            cur *= &xw;
            cur /= i as u32;
        }
        powers.push(cur.clone());
    }
    (0..=max)
        .map(|m| {
            let mut acc = Float::new(w);
            for j in 0..=m {
                if !beta[j].is_zero() {
                    acc += Float::with_val(w, &beta[j] * &powers[m - j]);
                }
            }
            Float::with_val(prec, acc)
        })
        .collect()
}

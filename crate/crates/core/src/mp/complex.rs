use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::ops::Pow;
use rug::Float;

use super::{log2_abs, max_prec, MIN_PRECISION};
use crate::error::{Error, Result};

/// A complex number with MPFR parts held at a common precision.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    /// Builds from two parts, promoting the lower-precision part.
    pub fn new(mut re: Float, mut im: Float) -> Self {
        let p = max_prec(re.prec(), im.prec()).max(MIN_PRECISION);
        if re.prec() != p {
            re.set_prec(p);
        }
        if im.prec() != p {
            im.set_prec(p);
        }
        MpComplex { re, im }
    }

    pub fn with_val<R, I>(prec: u32, re: R, im: I) -> Self
    where
        Float: rug::Assign<R> + rug::Assign<I>,
    {
        let prec = prec.max(MIN_PRECISION);
        MpComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec().max(MIN_PRECISION);
        MpComplex::new(re, Float::new(p))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        MpComplex::with_val(prec, re, im)
    }

    pub fn zero(prec: u32) -> Self {
        MpComplex::with_val(prec, 0, 0)
    }

    pub fn one(prec: u32) -> Self {
        MpComplex::with_val(prec, 1, 0)
    }

    pub fn prec(&self) -> u32 {
        max_prec(self.re.prec(), self.im.prec())
    }

    /// Copy rounded (or exactly widened) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        MpComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        MpComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    /// |z|.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// |z| as an `f64` (saturating).
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log2|z|, finite even when |z| over- or underflows an `f64`.
    pub fn log2_abs(&self) -> f64 {
        log2_abs(&self.abs())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn mul_real(&self, x: &Float) -> Self {
        let p = max_prec(self.prec(), x.prec());
        MpComplex {
            re: Float::with_val(p, &self.re * x),
            im: Float::with_val(p, &self.im * x),
        }
    }

    pub fn div_real(&self, x: &Float) -> Self {
        let p = max_prec(self.prec(), x.prec());
        MpComplex {
            re: Float::with_val(p, &self.re / x),
            im: Float::with_val(p, &self.im / x),
        }
    }

    pub fn add_real(&self, x: &Float) -> Self {
        let p = max_prec(self.prec(), x.prec());
        MpComplex {
            re: Float::with_val(p, &self.re + x),
            im: Float::with_val(p, &self.im),
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        MpComplex {
            re: Float::with_val(self.re.prec(), &self.re * k),
            im: Float::with_val(self.im.prec(), &self.im * k),
        }
    }

    pub fn recip(&self) -> Self {
        MpComplex::one(self.prec()).div_ref(self)
    }

    fn div_ref(&self, rhs: &MpComplex) -> Self {
        let p = max_prec(self.prec(), rhs.prec());
        if rhs.is_real() {
            return MpComplex {
                re: Float::with_val(p, &self.re / &rhs.re),
                im: Float::with_val(p, &self.im / &rhs.re),
            };
        }
        let w = p + 8;
        let den = Float::with_val(w, rhs.re.square_ref()) + Float::with_val(w, rhs.im.square_ref());
        let re_num = Float::with_val(w, &self.re * &rhs.re) + Float::with_val(w, &self.im * &rhs.im);
        let im_num = Float::with_val(w, &self.im * &rhs.re) - Float::with_val(w, &self.re * &rhs.im);
        MpComplex {
            re: Float::with_val(p, re_num / &den),
            im: Float::with_val(p, im_num / &den),
        }
    }

    fn mul_ref(&self, rhs: &MpComplex) -> Self {
        let p = max_prec(self.prec(), rhs.prec());
        if rhs.is_real() {
            return MpComplex {
                re: Float::with_val(p, &self.re * &rhs.re),
                im: Float::with_val(p, &self.im * &rhs.re),
            };
        }
        if self.is_real() {
            return MpComplex {
                re: Float::with_val(p, &self.re * &rhs.re),
                im: Float::with_val(p, &self.re * &rhs.im),
            };
        }
        let w = p + 8;
        let re = Float::with_val(w, &self.re * &rhs.re) - Float::with_val(w, &self.im * &rhs.im);
        let im = Float::with_val(w, &self.re * &rhs.im) + Float::with_val(w, &self.im * &rhs.re);
        MpComplex {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = MpComplex::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// e^z.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        if self.is_real() {
            return MpComplex::from_real(Float::with_val(p, self.re.exp_ref()));
        }
        let modulus = Float::with_val(p, self.re.exp_ref());
        let mut sin = Float::with_val(p, &self.im);
        let mut cos = Float::new(p);
        sin.sin_cos_mut(&mut cos);
        MpComplex {
            re: modulus.clone() * cos,
            im: modulus * sin,
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, self.abs().ln_ref());
        let im = Float::with_val(p, self.im.atan2_ref(&self.re));
        MpComplex { re, im }
    }

    /// sin z = sin x cosh y + i cos x sinh y.
    pub fn sin(&self) -> Self {
        let p = self.prec();
        let mut s = Float::with_val(p, &self.re);
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        if self.is_real() {
            return MpComplex::from_real(s);
        }
        let mut sh = Float::with_val(p, &self.im);
        let mut ch = Float::new(p);
        sh.sinh_cosh_mut(&mut ch);
        MpComplex {
            re: s * ch,
            im: c * sh,
        }
    }

    /// Real part as an exact integer, if the value is a real integer.
    pub fn as_real_integer(&self) -> Option<rug::Integer> {
        if self.is_real() && self.re.is_integer() {
            self.re.to_integer()
        } else {
            None
        }
    }

    /// |self − other| as an `f64`.
    pub fn dist_f64(&self, other: &MpComplex) -> f64 {
        (self - other).abs_f64()
    }

    /// |self − other|.
    pub fn dist(&self, other: &MpComplex) -> Float {
        (self - other).abs()
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}i", self.re, Float::with_val(self.im.prec(), -&self.im))
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a MpComplex> for &'a MpComplex {
    type Output = MpComplex;
    fn add(self, rhs: &'a MpComplex) -> MpComplex {
        let p = max_prec(self.prec(), rhs.prec());
        MpComplex {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a MpComplex> for &'a MpComplex {
    type Output = MpComplex;
    fn sub(self, rhs: &'a MpComplex) -> MpComplex {
        let p = max_prec(self.prec(), rhs.prec());
        MpComplex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a MpComplex> for &'a MpComplex {
    type Output = MpComplex;
    fn mul(self, rhs: &'a MpComplex) -> MpComplex {
        self.mul_ref(rhs)
    }
}

impl<'a> Div<&'a MpComplex> for &'a MpComplex {
    type Output = MpComplex;
    fn div(self, rhs: &'a MpComplex) -> MpComplex {
        self.div_ref(rhs)
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl AddAssign<&MpComplex> for MpComplex {
    fn add_assign(&mut self, rhs: &MpComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self + rhs;
        } else {
            self.re += &rhs.re;
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&MpComplex> for MpComplex {
    fn sub_assign(&mut self, rhs: &MpComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self - rhs;
        } else {
            self.re -= &rhs.re;
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&MpComplex> for MpComplex {
    fn mul_assign(&mut self, rhs: &MpComplex) {
        *self = self.mul_ref(rhs);
    }
}

/// base^s for a positive real base.
///
/// Integral real exponents go through MPFR's correctly rounded integer
/// power, so e.g. alternating sums at s = −k stay exact when the base is
/// dyadic and the precision suffices.
pub fn complex_pow(base: &Float, s: &MpComplex) -> Result<MpComplex> {
    if base.is_nan() || base.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::domain(format!("complex_pow needs a positive base, got {base}")));
    }
    let p = max_prec(base.prec(), s.prec());
    if *base == 1 {
        return Ok(MpComplex::one(p));
    }
    if let Some(k) = s.as_real_integer() {
        if let Some(k) = k.to_i32() {
            return Ok(MpComplex::from_real(Float::with_val(p, base.pow(k))));
        }
    }
    let ln_b = Float::with_val(p + 16, base.ln_ref());
    // guard for the magnification |s log b| of the rounding error in exp
    let mag = (s.abs_f64() * ln_b.to_f64().abs()).max(1.0);
    let w = p + 16 + mag.log2().ceil() as u32;
    let ln_b = Float::with_val(w, base.ln_ref());
    let exponent = s.with_prec(w).mul_real(&ln_b);
    Ok(exponent.exp().with_prec(p))
}

/// base^(−s), the Dirichlet-term form (n−1+a)^(−s).
pub fn complex_pow_neg(base: &Float, s: &MpComplex) -> Result<MpComplex> {
    complex_pow(base, &-s)
}

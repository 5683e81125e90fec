//! Configurable-precision complex arithmetic.
//!
//! Real arithmetic is delegated to MPFR via `rug::Float`; the complex layer
//! (including a principal-branch square root) is implemented here on top of
//! it. Precision is carried by the values themselves: every operation rounds
//! at the larger of its operands' precisions, and precision is always derived
//! from a decimal digit count with guard bits to spare.

use rug::float::Special;
use rug::ops::CompleteRound;
use rug::Float;
use std::fmt;

/// Binary precision for a decimal digit budget, with 32 guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

/// Decimal digits faithfully representable at a binary precision.
pub fn digits_for_bits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

#[derive(Clone)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} + {:e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        MpComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        MpComplex { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        MpComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_int(prec: u32, v: i64) -> Self {
        MpComplex { re: Float::with_val(prec, v), im: Float::new(prec) }
    }

    /// Parses full-precision decimal strings for the two components.
    pub fn parse(prec: u32, re: &str, im: &str) -> Option<Self> {
        let re = Float::parse(re).ok()?;
        let im = Float::parse(im).ok()?;
        Some(MpComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        })
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        MpComplex { re: self.re.clone(), im: (-&self.im).complete(self.im.prec()) }
    }

    pub fn neg(&self) -> Self {
        MpComplex {
            re: (-&self.re).complete(self.re.prec()),
            im: (-&self.im).complete(self.im.prec()),
        }
    }

    /// |z|, as a real value.
    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// |z|², as a real value.
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        MpComplex {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        MpComplex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        MpComplex { re: ac - bd, im: ad + bc }
    }

    pub fn mul_f(&self, rhs: &Float) -> Self {
        let p = self.prec().max(rhs.prec());
        MpComplex {
            re: Float::with_val(p, &self.re * rhs),
            im: Float::with_val(p, &self.im * rhs),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        let w = rhs.norm_sqr();
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        MpComplex { re: (ac + bd) / &w, im: (bc - ad) / &w }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        MpComplex::one(p).div(self)
    }

    /// z^k for any integer k, by binary powering.
    pub fn powi(&self, k: i64) -> Self {
        let p = self.prec();
        if k == 0 {
            return MpComplex::one(p);
        }
        if k < 0 {
            return self.recip().powi(-k);
        }
        let mut base = self.clone();
        let mut acc = MpComplex::one(p);
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Principal-branch square root: Re ≥ 0, with the negative real axis
    /// mapped to the positive imaginary axis.
    ///
    /// Uses the half-angle algebraic form, which is numerically stable:
    /// with r = |z|, for Re z ≥ 0 take u = √((r+Re z)/2), v = Im z/(2u);
    /// otherwise v = ±√((r−Re z)/2) with the sign of Im z, u = Im z/(2v).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return MpComplex::zero(p);
        }
        if self.im.is_zero() {
            if self.re.is_sign_positive() {
                return MpComplex { re: self.re.clone().sqrt(), im: Float::new(p) };
            }
            let m = (-&self.re).complete(p).sqrt();
            return MpComplex { re: Float::new(p), im: m };
        }
        let r = self.abs();
        if self.re.is_sign_positive() {
            let u = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let v = Float::with_val(p, &self.im / &u) / 2u32;
            MpComplex { re: u, im: v }
        } else {
            let mut v = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            if self.im.is_sign_negative() {
                v = -v;
            }
            let u = Float::with_val(p, &self.im / &v) / 2u32;
            MpComplex { re: u, im: v }
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Full-precision decimal strings for the two components.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (float_to_decimal(&self.re), float_to_decimal(&self.im))
    }
}

/// Renders a float as a decimal string carrying the value's full precision.
pub fn float_to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        if x.is_nan() {
            return "nan".to_string();
        }
        return if x.is_sign_negative() { "-inf" } else { "inf" }.to_string();
    }
    let digits = digits_for_bits(x.prec()) + 2;
    let (sign, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    let s = if sign { "-" } else { "" };
    // to_sign_string_exp gives mantissa "dddd" with value 0.dddd × 10^exp.
    format!("{s}0.{mantissa}e{exp}", exp = exp.unwrap_or(0))
}

/// Special value used to mark an invalid (poisoned) result.
pub fn f_nan(prec: u32) -> Float {
    Float::with_val(prec, Special::Nan)
}

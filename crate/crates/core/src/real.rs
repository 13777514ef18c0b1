//! Fixed-precision binary floating point on top of `astro-float`.
//!
//! [`RealContext`] bundles the working precision, the rounding mode and the
//! constants cache so call sites stay short.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use astro_float::BigFloat;
use astro_float::{Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_traits::Signed;

use crate::error::{bail, Result};
use crate::rational::Rational;

pub struct RealContext {
    prec: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl RealContext {
    pub fn new(precision_bits: usize) -> Result<Self> {
        if precision_bits < 64 {
            bail!(PrecisionTooLow, "{precision_bits} bits requested, need at least 64");
        }
        let cc = Consts::new().map_err(|e| {
            crate::Error::InvalidArgument(alloc::format!("constants cache: {e:?}"))
        })?;
        Ok(RealContext { prec: precision_bits, rm: RoundingMode::ToEven, cc })
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// `2^{-bits}` below the working precision.
    pub fn epsilon(&self) -> BigFloat {
        self.pow2(-(self.prec as i64))
    }

    pub fn pow2(&self, e: i64) -> BigFloat {
        let mut x = BigFloat::from_u64(1, self.prec);
        x.set_exponent((e + 1) as i32);
        x
    }

    pub fn int(&self, i: i64) -> BigFloat {
        BigFloat::from_i64(i, self.prec)
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_u64(0, self.prec)
    }

    pub fn from_f64(&self, f: f64) -> BigFloat {
        BigFloat::from_f64(f, self.prec)
    }

    pub fn bigint(&self, n: &BigInt) -> BigFloat {
        let (sign, digits) = n.to_u64_digits();
        let wide = self.prec + 64 * digits.len() + 64;
        let shift = BigFloat::from_u64(1, wide).mul(&self.pow2_wide(64, wide), wide, self.rm);
        let mut acc = BigFloat::from_u64(0, wide);
        for &d in digits.iter().rev() {
            acc = acc.mul(&shift, wide, self.rm).add(&BigFloat::from_u64(d, wide), wide, self.rm);
        }
        let mut out = acc;
        let _ = out.set_precision(self.prec, self.rm);
        if sign == BigSign::Minus {
            out.inv_sign();
        }
        out
    }

    fn pow2_wide(&self, e: i64, p: usize) -> BigFloat {
        let mut x = BigFloat::from_u64(1, p);
        x.set_exponent((e + 1) as i32);
        x
    }

    pub fn rational(&self, q: &Rational) -> BigFloat {
        self.div(&self.bigint(q.numer()), &self.bigint(q.denom()))
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, self.rm)
    }

    pub fn mul_int(&self, a: &BigFloat, i: i64) -> BigFloat {
        self.mul(a, &self.int(i))
    }

    pub fn div_int(&self, a: &BigFloat, i: i64) -> BigFloat {
        self.div(a, &self.int(i))
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, self.rm)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, self.rm, &mut self.cc)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, self.rm, &mut self.cc)
    }

    pub fn sinh(&mut self, a: &BigFloat) -> BigFloat {
        a.sinh(self.prec, self.rm, &mut self.cc)
    }

    pub fn cosh(&mut self, a: &BigFloat) -> BigFloat {
        a.cosh(self.prec, self.rm, &mut self.cc)
    }

    /// `a^b` for `a > 0`.
    pub fn pow(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.pow(b, self.prec, self.rm, &mut self.cc)
    }

    /// `a^n` for an integer `n` of either sign.
    pub fn powi(&self, a: &BigFloat, n: i64) -> BigFloat {
        let pos = a.powi(n.unsigned_abs() as usize, self.prec, self.rm);
        if n >= 0 {
            pos
        } else {
            self.div(&self.int(1), &pos)
        }
    }

    /// `a^{h/2}` for `a > 0` and an integer `h`.
    pub fn pow_half(&self, a: &BigFloat, h: i64) -> BigFloat {
        let whole = self.powi(a, h.div_euclid(2));
        if h.rem_euclid(2) == 1 {
            self.mul(&whole, &self.sqrt(a))
        } else {
            whole
        }
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, self.rm)
    }

    pub fn sqrt_2pi(&mut self) -> BigFloat {
        let pi = self.pi();
        let two_pi = self.mul_int(&pi, 2);
        self.sqrt(&two_pi)
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
        match a.cmp(b) {
            Some(c) if c < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            Some(_) => Ordering::Greater,
            None => Ordering::Equal,
        }
    }

    pub fn is_finite(a: &BigFloat) -> bool {
        !a.is_nan() && !a.is_inf()
    }

    /// Pairwise summation.
    pub fn sum(&self, xs: &[BigFloat]) -> BigFloat {
        match xs.len() {
            0 => self.zero(),
            1 => xs[0].clone(),
            n => {
                let (l, r) = xs.split_at(n / 2);
                self.add(&self.sum(l), &self.sum(r))
            }
        }
    }

    /// Nearest `f64`, for reporting and coarse control flow.
    pub fn to_f64(a: &BigFloat) -> f64 {
        if a.is_nan() {
            return f64::NAN;
        }
        if a.is_inf_pos() {
            return f64::INFINITY;
        }
        if a.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, sign, exp, _)) = a.as_raw_parts() else {
            return f64::NAN;
        };
        let Some(&top) = words.last() else { return 0.0 };
        if top == 0 {
            return 0.0;
        }
        let mut v = top as f64;
        if words.len() >= 2 {
            v += words[words.len() - 2] as f64 / 18446744073709551616.0;
        }
        let e = exp as i32 - 64;
        let v = v * libm::exp2(e as f64);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// `log2 |a|`, as an `f64`; `-inf` for zero.
    pub fn log2_abs(a: &BigFloat) -> f64 {
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, _, exp, _)) = a.as_raw_parts() else {
            return f64::NAN;
        };
        let top = *words.last().unwrap_or(&1) as f64 / 18446744073709551616.0;
        exp as f64 + libm::log2(top)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn format(&mut self, a: &BigFloat, digits: usize) -> String {
        if a.is_zero() {
            return String::from("0");
        }
        let bits = ((digits as f64) * 3.33) as usize + 8;
        let mut b = a.clone();
        let _ = b.set_precision(bits.max(64), self.rm);
        match b.format(Radix::Dec, self.rm, &mut self.cc) {
            Ok(s) => trim_decimal(&s, digits),
            Err(_) => String::from("NaN"),
        }
    }
}

fn trim_decimal(s: &str, digits: usize) -> String {
    // astro-float renders as [-]d.ddddde[+-]x
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let mut kept = String::new();
    let mut count = 0;
    for ch in mant.chars() {
        if ch.is_ascii_digit() {
            if count == digits {
                break;
            }
            count += 1;
        }
        kept.push(ch);
    }
    match exp {
        Some(e) if e.trim_start_matches('+') != "0" => {
            alloc::format!("{sign}{kept}e{}", e.trim_start_matches('+'))
        }
        _ => alloc::format!("{sign}{kept}"),
    }
}

/// Converts an arbitrary-precision integer bound to a float with `f64`.
pub fn bigint_to_f64(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let (_, digits) = n.to_u64_digits();
        let mut v = 0.0;
        for &d in digits.iter().rev() {
            v = v * 18446744073709551616.0 + d as f64;
        }
        if n.is_negative() {
            -v
        } else {
            v
        }
    } else if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    }
}

/// A list of values with an attached label, used by numerical reports.
pub type Labeled = Vec<(String, BigFloat)>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn conversions() {
        let ctx = RealContext::new(128).unwrap();
        assert_eq!(RealContext::to_f64(&ctx.int(1)), 1.0);
        assert_eq!(RealContext::to_f64(&ctx.int(-3)), -3.0);
        assert!((RealContext::to_f64(&ctx.rational(&ratio(1, 3))) - 1.0 / 3.0).abs() < 1e-15);
        let big = BigInt::from(10).pow(40);
        let v = RealContext::to_f64(&ctx.bigint(&big));
        assert!((v / 1e40 - 1.0).abs() < 1e-14);
        assert!((RealContext::log2_abs(&ctx.int(8)) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn transcendental() {
        let mut ctx = RealContext::new(192).unwrap();
        let pi = ctx.pi();
        assert!((RealContext::to_f64(&pi) - core::f64::consts::PI).abs() < 1e-15);
        let one = ctx.int(1);
        let e = ctx.exp(&one);
        let back = ctx.ln(&e);
        let err = ctx.sub(&back, &one);
        assert!(RealContext::log2_abs(&err) < -180.0);
        let x = ctx.int(2);
        assert!((RealContext::to_f64(&ctx.pow_half(&x, 3)) - 2f64.powf(1.5)).abs() < 1e-14);
        assert!((RealContext::to_f64(&ctx.pow_half(&x, -3)) - 2f64.powf(-1.5)).abs() < 1e-14);
    }

    #[test]
    fn formatting() {
        let mut ctx = RealContext::new(128).unwrap();
        let third = ctx.rational(&ratio(1, 3));
        let s = ctx.format(&third, 10);
        assert!(s.starts_with("3.33333333") || s.starts_with("0.333333333"), "{s}");
    }
}

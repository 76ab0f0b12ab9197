//! Configurable-precision real and complex values carrying rigorous
//! absolute-error bounds.
//!
//! A `BigReal` is an MPFR float (round-to-nearest) paired with an upper
//! bound on its absolute error, kept as a tiny 32-bit float that is always
//! rounded *up*. Propagation is conservative interval-style: every
//! operation adds one ulp of the result for the rounding step plus the
//! first-order propagated input errors. Bounds are upper bounds, never
//! estimates.

use rug::float::{Constant, Round};
use rug::ops::{DivAssignRound, SubAssignRound};
use rug::{Float, Rational};

/// Precision of the error-bound floats. Bounds only need a couple of
/// significant digits; the exponent range of MPFR does the real work.
const ERR_PREC: u32 = 32;

/// Working precision, target accuracy and evaluation budgets threaded
/// through every numeric operation.
#[derive(Debug, Clone)]
pub struct PrecisionContext {
    bits: u32,
    /// Target absolute error for series/special-function evaluation.
    target: Float,
    /// Cap on series terms before an evaluation gives up.
    pub max_series_terms: u64,
    /// Recursion depth limit for adaptive quadrature.
    pub quad_depth: u32,
    /// Error target for the quadrature oracles. These run in hardware
    /// floats and report heuristic error estimates, so their target is
    /// separate from the rigorous series target.
    pub quad_target: f64,
}

impl PrecisionContext {
    /// Context with `bits` of working precision and a default target
    /// error of 2^(16-bits).
    pub fn new(bits: u32) -> Self {
        assert!(bits >= 64, "working precision must be at least 64 bits");
        let target = Float::with_val(ERR_PREC, Float::i_exp(1, 16 - bits as i32));
        PrecisionContext {
            bits,
            target,
            max_series_terms: 10_000_000,
            quad_depth: 14,
            quad_target: 1e-8,
        }
    }

    /// Context sized for roughly `digits` decimal digits of accuracy.
    pub fn with_digits(digits: u32) -> Self {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32;
        Self::new(bits.max(64))
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn target(&self) -> &Float {
        &self.target
    }

    pub fn set_target_f64(&mut self, t: f64) {
        assert!(t > 0.0, "target error must be positive");
        self.target = Float::with_val(ERR_PREC, t);
    }

    /// Same context at twice the working precision (used by the
    /// relation-probe soundness re-verification).
    pub fn doubled(&self) -> Self {
        let mut c = Self::new(self.bits * 2);
        c.max_series_terms = self.max_series_terms;
        c.quad_depth = self.quad_depth;
        c.quad_target = self.quad_target;
        let mut t = self.target.clone();
        t.square_mut();
        c.target = t;
        c
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(192)
    }
}

fn err_zero() -> Float {
    Float::with_val(ERR_PREC, 0)
}

fn err_add(a: &Float, b: &Float) -> Float {
    Float::with_val_round(ERR_PREC, a + b, Round::Up).0
}

fn err_mul(a: &Float, b: &Float) -> Float {
    Float::with_val_round(ERR_PREC, a * b, Round::Up).0
}

/// One ulp of `v`: 2^(exp(v) - prec + 1), or the smallest representable
/// scale when `v` is zero.
fn ulp(v: &Float) -> Float {
    match v.get_exp() {
        Some(e) => Float::with_val(ERR_PREC, Float::i_exp(1, e - v.prec() as i32 + 1)),
        None => Float::with_val(ERR_PREC, Float::i_exp(1, -(v.prec() as i32) * 4)),
    }
}

/// Upper bound on |v| as an error-precision float.
fn abs_up(v: &Float) -> Float {
    Float::with_val_round(ERR_PREC, v.abs_ref(), Round::Up).0
}

/// A real number: MPFR value plus a rigorous absolute-error upper bound.
#[derive(Debug, Clone)]
pub struct BigReal {
    val: Float,
    err: Float,
}

impl BigReal {
    pub fn zero(bits: u32) -> Self {
        BigReal {
            val: Float::with_val(bits, 0),
            err: err_zero(),
        }
    }

    /// An exact integer value (no error).
    pub fn from_i64(x: i64, bits: u32) -> Self {
        BigReal {
            val: Float::with_val(bits, x),
            err: err_zero(),
        }
    }

    /// Rational value rounded to `bits`; the error is the rounding ulp.
    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        let val = Float::with_val(bits, q);
        let err = ulp(&val);
        BigReal { val, err }
    }

    /// Treat an f64 as exact (it is a dyadic rational).
    pub fn from_f64(x: f64, bits: u32) -> Self {
        BigReal {
            val: Float::with_val(bits, x),
            err: err_zero(),
        }
    }

    pub fn pi(bits: u32) -> Self {
        let val = Float::with_val(bits, Constant::Pi);
        let err = ulp(&val);
        BigReal { val, err }
    }

    /// Construct from an already-computed float and bound.
    pub fn with_err(val: Float, err: Float) -> Self {
        BigReal { val, err }
    }

    pub fn value(&self) -> &Float {
        &self.val
    }

    pub fn err(&self) -> &Float {
        &self.err
    }

    pub fn prec(&self) -> u32 {
        self.val.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_zero()
    }

    fn bin(&self, rhs: &BigReal, val: Float, extra: Float) -> BigReal {
        let mut err = err_add(&self.err, &rhs.err);
        err = err_add(&err, &extra);
        err = err_add(&err, &ulp(&val));
        BigReal { val, err }
    }

    pub fn add(&self, rhs: &BigReal) -> BigReal {
        let prec = self.prec().max(rhs.prec());
        let val = Float::with_val(prec, &self.val + &rhs.val);
        self.bin(rhs, val, err_zero())
    }

    pub fn sub(&self, rhs: &BigReal) -> BigReal {
        let prec = self.prec().max(rhs.prec());
        let val = Float::with_val(prec, &self.val - &rhs.val);
        self.bin(rhs, val, err_zero())
    }

    pub fn mul(&self, rhs: &BigReal) -> BigReal {
        let prec = self.prec().max(rhs.prec());
        let val = Float::with_val(prec, &self.val * &rhs.val);
        // |a|e_b + |b|e_a + e_a e_b
        let mut extra = err_mul(&abs_up(&self.val), &rhs.err);
        extra = err_add(&extra, &err_mul(&abs_up(&rhs.val), &self.err));
        let ee = err_mul(&self.err, &rhs.err);
        extra = err_add(&extra, &ee);
        let mut err = err_add(&extra, &ulp(&val));
        std::mem::swap(&mut err, &mut extra);
        BigReal {
            val,
            err: extra,
        }
    }

    pub fn div(&self, rhs: &BigReal) -> BigReal {
        let prec = self.prec().max(rhs.prec());
        let val = Float::with_val(prec, &self.val / &rhs.val);
        // lower bound for |rhs|, rounded downward at every step
        let mut babs = Float::with_val_round(ERR_PREC, rhs.val.abs_ref(), Round::Down).0;
        babs.sub_assign_round(&rhs.err, Round::Down);
        if !(babs.is_sign_positive() && !babs.is_zero()) {
            // divisor interval touches zero: bound is unusable, poison it
            return BigReal {
                val,
                err: Float::with_val(ERR_PREC, rug::float::Special::Infinity),
            };
        }
        let mut num = err_add(&self.err, &err_mul(&abs_up(&val), &rhs.err));
        num.div_assign_round(&babs, Round::Up);
        let err = err_add(&num, &ulp(&val));
        BigReal { val, err }
    }

    pub fn neg(&self) -> BigReal {
        BigReal {
            val: Float::with_val(self.prec(), -&self.val),
            err: self.err.clone(),
        }
    }

    pub fn abs(&self) -> BigReal {
        BigReal {
            val: Float::with_val(self.prec(), self.val.abs_ref()),
            err: self.err.clone(),
        }
    }

    pub fn mul_i64(&self, k: i64) -> BigReal {
        let val = Float::with_val(self.prec(), &self.val * k);
        let kabs = Float::with_val(ERR_PREC, k.unsigned_abs());
        let err = err_add(&err_mul(&self.err, &kabs), &ulp(&val));
        BigReal { val, err }
    }

    pub fn div_u64(&self, k: u64) -> BigReal {
        assert!(k != 0);
        let val = Float::with_val(self.prec(), &self.val / k);
        let mut e = self.err.clone();
        e.div_assign_round(&Float::with_val(ERR_PREC, k), Round::Up);
        let err = err_add(&e, &ulp(&val));
        BigReal { val, err }
    }

    pub fn mul_rational(&self, q: &Rational) -> BigReal {
        self.mul(&BigReal::from_rational(q, self.prec()))
    }

    pub fn square(&self) -> BigReal {
        self.mul(self)
    }

    pub fn sqrt(&self) -> BigReal {
        let val = Float::with_val(self.prec(), self.val.sqrt_ref());
        let extra = if self.err.is_zero() {
            err_zero()
        } else {
            let mut low = Float::with_val_round(ERR_PREC, &self.val, Round::Down).0;
            low.sub_assign_round(&self.err, Round::Down);
            if low.is_sign_positive() && !low.is_zero() {
                // e / (2 sqrt(low))
                let mut d = Float::with_val_round(ERR_PREC, low.sqrt_ref(), Round::Down).0;
                d *= 2u32;
                let mut e = self.err.clone();
                e.div_assign_round(&d, Round::Up);
                e
            } else {
                // near zero: |sqrt(x+e) - sqrt(x-e)| <= 2 sqrt(e)
                let mut e = Float::with_val_round(ERR_PREC, self.err.sqrt_ref(), Round::Up).0;
                e *= 2u32;
                e
            }
        };
        let err = err_add(&extra, &ulp(&val));
        BigReal { val, err }
    }

    /// Natural logarithm. The input interval must stay away from zero.
    pub fn ln(&self) -> BigReal {
        let val = Float::with_val(self.prec(), self.val.ln_ref());
        let extra = if self.err.is_zero() {
            err_zero()
        } else {
            let mut low = Float::with_val_round(ERR_PREC, self.val.abs_ref(), Round::Down).0;
            low.sub_assign_round(&self.err, Round::Down);
            if low.is_sign_positive() && !low.is_zero() {
                let mut e = self.err.clone();
                e.div_assign_round(&low, Round::Up);
                e
            } else {
                Float::with_val(ERR_PREC, rug::float::Special::Infinity)
            }
        };
        let err = err_add(&extra, &ulp(&val));
        BigReal { val, err }
    }

    pub fn sin(&self) -> BigReal {
        let val = Float::with_val(self.prec(), self.val.sin_ref());
        let err = err_add(&self.err, &ulp(&val));
        BigReal { val, err }
    }

    pub fn cos(&self) -> BigReal {
        let val = Float::with_val(self.prec(), self.val.cos_ref());
        let err = err_add(&self.err, &ulp(&val));
        BigReal { val, err }
    }

    /// Add an extra amount to the error bound (series tails, quadrature
    /// estimates).
    pub fn widen_err(&self, extra: &Float) -> BigReal {
        BigReal {
            val: self.val.clone(),
            err: err_add(&self.err, extra),
        }
    }

    /// Upper bound on |value| including the error.
    pub fn abs_upper(&self) -> Float {
        err_add(&abs_up(&self.val), &self.err)
    }

    /// True when |value| + err <= tol.
    pub fn within(&self, tol: f64) -> bool {
        self.abs_upper() <= tol
    }

    pub fn to_f64(&self) -> f64 {
        self.val.to_f64()
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        float_to_decimal(&self.val, digits)
    }

    pub fn err_decimal(&self) -> String {
        float_to_decimal(&self.err, 2)
    }
}

/// Deterministic decimal rendering used by all report serialization.
pub fn float_to_decimal(v: &Float, digits: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_infinite() { "inf".to_string() } else { "nan".to_string() };
    }
    let (sign, mantissa, exp) = v.to_sign_string_exp(10, Some(digits));
    let exp = exp.expect("finite non-zero float has an exponent");
    let mut out = String::new();
    if sign {
        out.push('-');
    }
    // mantissa is the digit string, value = 0.mantissa * 10^exp
    let first = &mantissa[..1];
    let rest = mantissa[1..].trim_end_matches('0');
    out.push_str(first);
    if !rest.is_empty() {
        out.push('.');
        out.push_str(rest);
    }
    let e10 = exp - 1;
    if e10 != 0 {
        out.push('e');
        out.push_str(&e10.to_string());
    }
    out
}

/// Complex value with error bounds carried per component.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn zero(bits: u32) -> Self {
        BigComplex {
            re: BigReal::zero(bits),
            im: BigReal::zero(bits),
        }
    }

    pub fn from_real(re: BigReal) -> Self {
        let bits = re.prec();
        BigComplex {
            re,
            im: BigReal::zero(bits),
        }
    }

    pub fn add(&self, rhs: &BigComplex) -> BigComplex {
        BigComplex {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn sub(&self, rhs: &BigComplex) -> BigComplex {
        BigComplex {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &BigComplex) -> BigComplex {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        BigComplex { re, im }
    }

    pub fn scale(&self, s: &BigReal) -> BigComplex {
        BigComplex {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// |z| with propagated bound.
    pub fn abs(&self) -> BigReal {
        self.re.square().add(&self.im.square()).sqrt()
    }

    /// Upper bound on |z| including errors (cheap, no sqrt of interval).
    pub fn abs_upper(&self) -> Float {
        let r = self.re.abs_upper();
        let i = self.im.abs_upper();
        let s = Float::with_val_round(ERR_PREC, r.square_ref(), Round::Up).0;
        let t = Float::with_val_round(ERR_PREC, i.square_ref(), Round::Up).0;
        Float::with_val_round(ERR_PREC, err_add(&s, &t).sqrt_ref(), Round::Up).0
    }

    pub fn within(&self, tol: f64) -> bool {
        self.abs_upper() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_tracks_error() {
        let a = BigReal::from_i64(1, 128);
        let b = BigReal::from_rational(&Rational::from((1, 3)), 128);
        let c = a.add(&b).mul(&b);
        // 4/9 within a few ulps
        let expect = Float::with_val(128, Rational::from((4, 9)));
        let diff = Float::with_val(128, c.value() - &expect);
        assert!(diff.abs() < Float::with_val(32, Float::i_exp(1, -120)));
        assert!(c.err().clone() < Float::with_val(32, Float::i_exp(1, -110)));
    }

    #[test]
    fn division_by_interval_through_zero_poisons() {
        let tiny = BigReal::with_err(
            Float::with_val(64, 1e-30),
            Float::with_val(ERR_PREC, 1.0),
        );
        let one = BigReal::from_i64(1, 64);
        let q = one.div(&tiny);
        assert!(q.err().is_infinite());
    }

    #[test]
    fn ln_and_sqrt_bounds() {
        let ctx = PrecisionContext::new(128);
        let two = BigReal::from_i64(2, ctx.bits());
        let r = two.sqrt().ln();
        // ln sqrt 2 = ln(2)/2
        let expect = Float::with_val(128, 2u32).ln() / 2u32;
        let diff = Float::with_val(128, r.value() - &expect);
        assert!(diff.abs() < 1e-35);
        assert!(!r.err().is_infinite());
    }

    #[test]
    fn decimal_rendering_is_plain() {
        let x = BigReal::from_rational(&Rational::from((1, 8)), 96);
        assert_eq!(x.to_decimal(10), "1.25e-1");
        let z = BigReal::zero(96);
        assert_eq!(z.to_decimal(10), "0");
        let neg = BigReal::from_i64(-42, 96);
        assert_eq!(neg.to_decimal(10), "-4.2e1");
    }

    #[test]
    fn complex_abs() {
        let bits = 128;
        let z = BigComplex {
            re: BigReal::from_i64(3, bits),
            im: BigReal::from_i64(4, bits),
        };
        let a = z.abs();
        let diff = Float::with_val(bits, a.value() - 5u32);
        assert!(diff.abs() < 1e-30);
    }
}

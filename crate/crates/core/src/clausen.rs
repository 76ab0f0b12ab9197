//! The Clausen function Cl_2(theta) = sum_{n>=1} sin(n theta)/n^2.
//!
//! Direct Fourier summation converges far too slowly for high precision,
//! so evaluation goes through range reduction (2*pi-periodicity and
//! oddness fold the argument into [0, pi]) followed by the power series
//!
//!   Cl_2(t) = t(1 - log t) + sum_{n>=1} |B_{2n}| t^{2n+1} / (2n (2n+1)!)
//!
//! whose coefficients come from the exact Bernoulli-number recurrence.
//! The series is used for t <= 2.2; larger arguments take one duplication
//! step Cl_2(pi - u) = Cl_2(u) - Cl_2(2u)/2 which lands both calls back
//! in the series range.

use crate::error::{Error, Result};
use crate::num::{BigReal, PrecisionContext};
use rug::float::Round;
use rug::{Complete, Float, Integer, Rational};
use std::sync::{LazyLock, Mutex};

static BERNOULLI: LazyLock<Mutex<Vec<Rational>>> =
    LazyLock::new(|| Mutex::new(vec![Rational::from(1)]));

/// The n-th Bernoulli number (B_1 = -1/2 convention), exact, cached.
pub fn bernoulli(n: usize) -> Rational {
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::new();
        for (j, b) in cache.iter().enumerate() {
            let c = Integer::from(m as u32 + 1).binomial(j as u32);
            acc += b * Rational::from(c);
        }
        acc /= -Rational::from(m as u32 + 1);
        cache.push(acc);
    }
    cache[n].clone()
}

static CL2_COEFFS: LazyLock<Mutex<Vec<Rational>>> = LazyLock::new(|| Mutex::new(Vec::new()));

/// |B_{2n}| / (2n * (2n+1)!), the coefficient of t^{2n+1} in the series.
fn cl2_coeff(n: usize) -> Rational {
    {
        let cache = CL2_COEFFS.lock().unwrap();
        if n < cache.len() {
            return cache[n].clone();
        }
    }
    let mut cache = CL2_COEFFS.lock().unwrap();
    while cache.len() <= n {
        let k = cache.len() + 1; // coefficient index is 1-based
        let b = bernoulli(2 * k);
        let fact = Integer::factorial(2 * k as u32 + 1).complete();
        let denom = Rational::from(fact * Integer::from(2 * k as u32));
        let mut c = b / denom;
        c.abs_mut();
        cache.push(c);
    }
    cache[n].clone()
}

const SERIES_CUT: f64 = 2.2;

/// Series evaluation for 0 <= t <= SERIES_CUT.
fn cl2_series(t: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if t.is_zero() {
        return Ok(BigReal::zero(t.prec()));
    }
    let bits = t.prec();
    // t (1 - ln t)
    let one = BigReal::from_i64(1, bits);
    let mut acc = t.mul(&one.sub(&t.ln()));
    let t2 = t.square();
    let mut pow = t.clone(); // t^{2n-1} going in
    let mut n = 0usize;
    loop {
        n += 1;
        if n as u64 > ctx.max_series_terms {
            return Err(Error::BudgetExhausted {
                achieved: acc.err_decimal(),
            });
        }
        pow = pow.mul(&t2);
        let c = cl2_coeff(n - 1);
        let term = pow.mul_rational(&c);
        acc = acc.add(&term);
        let tb = term.abs_upper();
        if tb < *ctx.target() {
            // geometric tail: next-term ratio is below (t/2pi)^2 < 0.13
            let tail = Float::with_val_round(32, &tb * &Float::with_val(32, 0.15), Round::Up).0;
            return Ok(acc.widen_err(&tail));
        }
    }
}

/// Cl_2 on [0, pi]: series directly, or one duplication step.
fn cl2_reduced(t: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if t.value().to_f64() <= SERIES_CUT {
        cl2_series(t, ctx)
    } else {
        let u = BigReal::pi(t.prec()).sub(t);
        let a = cl2_series(&u, ctx)?;
        let b = cl2_series(&u.mul_i64(2), ctx)?;
        Ok(a.sub(&b.div_u64(2)))
    }
}

/// Cl_2 at any real argument, with error bound at most the context
/// target plus the propagated input error.
///
/// Evaluation runs on the exact midpoint of the input; the input's own
/// error enters once at the end, multiplied by a bound on |Cl_2'| =
/// |log(2 sin(x/2))| near the reduced argument. The derivative is only
/// unbounded at multiples of 2*pi, where |Cl_2| itself is tiny.
pub fn clausen2(theta: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let bits = theta.prec().max(ctx.bits());
    let input_err = theta.err().clone();
    let exact = BigReal::with_err(theta.value().clone(), Float::with_val(32, 0));
    let two_pi = BigReal::pi(bits + 32).mul_i64(2);
    // nearest-integer reduction into (-pi, pi]; the quotient is taken
    // at full precision so huge arguments cannot misround k
    let k = {
        let q = Float::with_val(bits + 32, exact.value() / two_pi.value());
        q.round().to_integer().unwrap()
    };
    let mut r = exact.sub(&two_pi.mul_rational(&Rational::from(k)));
    // guard against landing just outside (-pi, pi]
    let pi_f = BigReal::pi(bits + 32);
    if r.value() > pi_f.value() {
        r = r.sub(&two_pi);
    } else if r.value() < &Float::with_val(bits + 32, -pi_f.value()) {
        r = r.add(&two_pi);
    }
    let out = if r.value().is_sign_negative() {
        cl2_reduced(&r.neg(), ctx)?.neg()
    } else {
        cl2_reduced(&r, ctx)?
    };
    if input_err.is_zero() {
        return Ok(out);
    }
    // distance of the reduced argument from the nearest multiple of 2*pi
    let r_abs = Float::with_val_round(32, r.value().abs_ref(), Round::Down).0;
    let t_lo = Float::with_val_round(32, &r_abs - &input_err, Round::Down).0;
    let widen = if t_lo.is_sign_positive() && !t_lo.is_zero() {
        // |Cl_2'| <= max(1, -log(0.6 t_lo)) on the interval
        let mut d = Float::with_val_round(32, &t_lo * &Float::with_val(32, 0.6), Round::Down).0;
        d.ln_round(Round::Down);
        d = -d;
        if d < 1u32 {
            d = Float::with_val(32, 1);
        }
        Float::with_val_round(32, &input_err * &d, Round::Up).0
    } else {
        // interval straddles a zero of sin(x/2): bound by the magnitude
        // of Cl_2 itself, |Cl_2(x)| <= x(1 - log x) for small x
        let t_hi = Float::with_val_round(32, &r_abs + &input_err, Round::Up).0;
        let mut log_hi = t_hi.clone();
        log_hi.ln_round(Round::Down);
        let one_minus_log = Float::with_val_round(32, 1u32 - &log_hi, Round::Up).0;
        let g = Float::with_val_round(32, &t_hi * &one_minus_log, Round::Up).0;
        Float::with_val_round(32, &g * &Float::with_val(32, 2), Round::Up).0
    };
    Ok(out.widen_err(&widen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx128() -> PrecisionContext {
        PrecisionContext::new(128)
    }

    /// Brute-force partial Fourier sum, the validation oracle for the
    /// series coefficients.
    fn cl2_brute(theta: f64, terms: u64) -> f64 {
        let mut acc = 0.0f64;
        // sin(n theta) by complex rotation
        let (mut s, mut c) = theta.sin_cos();
        let (s1, c1) = theta.sin_cos();
        for n in 1..=terms {
            acc += s / (n * n) as f64;
            let ns = s * c1 + c * s1;
            let nc = c * c1 - s * s1;
            s = ns;
            c = nc;
        }
        acc
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), Rational::from(1));
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), Rational::new());
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn zeros_at_multiples_of_pi() {
        let ctx = ctx128();
        let zero = BigReal::zero(128);
        assert!(clausen2(&zero, &ctx).unwrap().within(1e-35));
        let pi = BigReal::pi(128);
        assert!(clausen2(&pi, &ctx).unwrap().within(1e-30));
        assert!(clausen2(&pi.mul_i64(2), &ctx).unwrap().within(1e-28));
        assert!(clausen2(&pi.mul_i64(-7), &ctx).unwrap().within(1e-28));
    }

    #[test]
    fn catalan_at_half_pi() {
        let ctx = ctx128();
        let x = BigReal::pi(128).div_u64(2);
        let v = clausen2(&x, &ctx).unwrap();
        let catalan = Float::with_val(128, rug::float::Constant::Catalan);
        let diff = Float::with_val(128, v.value() - &catalan);
        assert!(diff.abs() < 1e-33);
    }

    #[test]
    fn series_matches_brute_force() {
        // validates the Bernoulli-coefficient recurrence against the
        // defining Fourier sum at low precision
        let ctx = ctx128();
        for &frac in &[0.13f64, 0.71, 1.3, 2.05, 2.61, 3.02] {
            let x = BigReal::from_f64(frac, 128);
            let fast = clausen2(&x, &ctx).unwrap().to_f64();
            let brute = cl2_brute(frac, 1_000_000);
            assert!(
                (fast - brute).abs() < 2e-6,
                "mismatch at {frac}: {fast} vs {brute}"
            );
        }
    }

    #[test]
    fn oddness_and_periodicity() {
        let ctx = ctx128();
        let x = BigReal::from_f64(1.234, 128);
        let a = clausen2(&x, &ctx).unwrap();
        let b = clausen2(&x.neg(), &ctx).unwrap();
        assert!(a.add(&b).within(1e-30));
        let shifted = x.add(&BigReal::pi(160).mul_i64(4));
        let c = clausen2(&shifted, &ctx).unwrap();
        assert!(a.sub(&c).within(1e-28));
    }

    #[test]
    fn duplication_identity() {
        // Cl2(2t) = 2Cl2(t) - 2Cl2(pi - t)
        let ctx = ctx128();
        let t = BigReal::from_f64(0.9, 128);
        let lhs = clausen2(&t.mul_i64(2), &ctx).unwrap();
        let rhs = clausen2(&t, &ctx)
            .unwrap()
            .mul_i64(2)
            .sub(&clausen2(&BigReal::pi(128).sub(&t), &ctx).unwrap().mul_i64(2));
        assert!(lhs.sub(&rhs).within(1e-30));
    }

    #[test]
    fn known_maximum() {
        // Cl2(pi/3) = 1.0149416064096536250212...
        let ctx = ctx128();
        let v = clausen2(&BigReal::pi(128).div_u64(3), &ctx).unwrap();
        let expect = Float::with_val(128, 1.0149416064096536250212025542745202859417f64);
        // f64 literal only carries ~16 digits; compare loosely
        let diff = Float::with_val(128, v.value() - &expect);
        assert!(diff.abs() < 1e-15);
    }
}

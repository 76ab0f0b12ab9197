//! Mahler measures of the real-cyclotomic family: the angle formula for
//! a single factor x1 + x2 - 2cos(theta), the assembled m(f_N) over the
//! coprime angle set, and m(f_N*) by the one-variable Jensen evaluation.

use crate::clausen::clausen2;
use crate::error::{Error, Result};
use crate::exact::cyc::gcd_u64;
use crate::num::{BigReal, PrecisionContext};
use rug::float::Round;
use rug::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMethod {
    SmythFormula,
    JensenSum,
    JensenQuadrature,
    TorusQuadrature,
}

impl MeasureMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasureMethod::SmythFormula => "smyth-formula",
            MeasureMethod::JensenSum => "jensen-sum",
            MeasureMethod::JensenQuadrature => "jensen-quadrature",
            MeasureMethod::TorusQuadrature => "torus-quadrature",
        }
    }
}

/// A computed Mahler measure with method provenance. Quadrature-backed
/// results carry heuristic (non-rigorous) error estimates; formula
/// routes carry propagated rigorous bounds.
#[derive(Debug, Clone)]
pub struct MahlerResult {
    pub value: BigReal,
    pub method: MeasureMethod,
    pub rigorous: bool,
}

/// m(x1 + x2 - 2cos(theta)) for 0 <= theta <= pi:
///   delta * m = (1 - 2 theta/pi) log|2cos theta|
///             + (1/pi) sum_n (-1)^{n-1} sin(2n theta)/n^2
/// with delta = +1 for theta <= pi/2 and -1 beyond. The alternating sum
/// folds onto the Clausen function: sum = -Cl_2(2 theta + pi), i.e.
/// Cl_2(pi - 2 theta) below pi/2 and -Cl_2(2 theta - pi) above.
pub fn smyth_angle_measure(theta: &BigReal, ctx: &PrecisionContext) -> Result<MahlerResult> {
    let bits = theta.prec().max(ctx.bits());
    let pi = BigReal::pi(bits);
    if theta.value().is_sign_negative() && !theta.value().is_zero()
        || theta.value() > pi.value()
    {
        return Err(Error::Divisibility(format!(
            "angle {} outside [0, pi]",
            theta.to_decimal(8)
        )));
    }
    let half_pi = pi.div_u64(2);
    let d = theta.sub(&half_pi);
    // the factor at theta = pi/2 is x1 + x2: measure exactly 0; close
    // calls are clipped with an explicit continuity bound
    let near = Float::with_val(32, Float::i_exp(1, -(bits as i32) / 2));
    if d.abs_upper() < near {
        let gap = d.abs_upper();
        let bound = if gap.is_zero() {
            Float::with_val(32, 0)
        } else {
            let mut lg = gap.clone();
            lg.ln_round(Round::Down);
            Float::with_val_round(32, &gap * &Float::with_val(32, 2u32 - lg), Round::Up).0
        };
        return Ok(MahlerResult {
            value: BigReal::zero(bits).widen_err(&bound),
            method: MeasureMethod::SmythFormula,
            rigorous: true,
        });
    }
    let below = theta.value() < half_pi.value();
    let two_theta = theta.mul_i64(2);
    let log_cos = theta.cos().mul_i64(2).abs().ln();
    let weight = pi.sub(&two_theta).div(&pi);
    let series = if below {
        clausen2(&pi.sub(&two_theta), ctx)?
    } else {
        clausen2(&two_theta.sub(&pi), ctx)?.neg()
    };
    let rhs = weight.mul(&log_cos).add(&series.div(&pi));
    let value = if below { rhs } else { rhs.neg() };
    Ok(MahlerResult {
        value,
        method: MeasureMethod::SmythFormula,
        rigorous: true,
    })
}

/// Units k with 1 <= k < N/2.
pub fn coprime_half_range(n: u64) -> Vec<u64> {
    (1..n).filter(|&k| 2 * k < n && gcd_u64(k, n) == 1).collect()
}

/// m(f_N) assembled from the linear factors x1 + x2 - 2cos(2 pi k/N)
/// over the coprime angle set (measures add over polynomial factors).
pub fn mahler_fn(n: u64, ctx: &PrecisionContext) -> Result<MahlerResult> {
    if n < 3 {
        return Err(Error::ModulusTooSmall { min: 3, got: n });
    }
    let bits = ctx.bits();
    let mut acc = BigReal::zero(bits);
    for k in coprime_half_range(n) {
        let theta = BigReal::pi(bits).mul_i64(2 * k as i64).div_u64(n);
        acc = acc.add(&smyth_angle_measure(&theta, ctx)?.value);
    }
    Ok(MahlerResult {
        value: acc,
        method: MeasureMethod::SmythFormula,
        rigorous: true,
    })
}

/// True when |2 cos(2 pi k/N)| > 1, decided exactly: |4k - N| > N/3.
pub fn angle_is_outside_unit_disk(n: u64, k: u64) -> bool {
    let lhs = (4 * k as i64 - n as i64).unsigned_abs() * 3;
    lhs > n
}

/// m(f_N*) = sum_k log max{1, |2cos(2 pi k/N)|}: the Mahler measure of
/// the one-variable polynomial Psi_N by Jensen's formula.
pub fn mahler_fn_star(n: u64, ctx: &PrecisionContext) -> Result<MahlerResult> {
    if n < 3 {
        return Err(Error::ModulusTooSmall { min: 3, got: n });
    }
    let bits = ctx.bits();
    let mut acc = BigReal::zero(bits);
    for k in coprime_half_range(n) {
        if angle_is_outside_unit_disk(n, k) {
            let theta = BigReal::pi(bits).mul_i64(2 * k as i64).div_u64(n);
            acc = acc.add(&theta.cos().mul_i64(2).abs().ln());
        }
    }
    Ok(MahlerResult {
        value: acc,
        method: MeasureMethod::JensenSum,
        rigorous: true,
    })
}

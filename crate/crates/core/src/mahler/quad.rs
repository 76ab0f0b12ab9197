//! Quadrature oracles for Mahler measures: a one-dimensional adaptive
//! rule on the Jensen-reduced integrand, and an iterated two-dimensional
//! rule integrating log|f| over the torus directly.
//!
//! Both run in hardware floats with heuristic Richardson-style error
//! estimates and are labeled non-rigorous; identity verification uses
//! them as independent checks only.

use super::laurent::LaurentPoly2;
use super::measure::{coprime_half_range, MahlerResult, MeasureMethod};
use crate::error::{Error, Result};
use crate::num::{BigReal, PrecisionContext};
use rug::Float;
use std::f64::consts::PI;

struct AdaptState<'f> {
    f: &'f dyn Fn(f64) -> f64,
    max_depth: u32,
    est: f64,
    nonfinite_at_cap: bool,
}

/// Evaluate with a tiny nudge if the sample lands exactly on a
/// singularity of the integrand.
fn sample(st: &mut AdaptState, x: f64, span: f64) -> f64 {
    let v = (st.f)(x);
    if v.is_finite() {
        return v;
    }
    let v2 = (st.f)(x + span * 1e-13 + 1e-300);
    if v2.is_finite() {
        v2
    } else {
        f64::NAN
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    (fa + 4.0 * fm + fb) * h / 6.0
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    st: &mut AdaptState,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = sample(st, 0.5 * (a + m), b - a);
    let rm = sample(st, 0.5 * (m + b), b - a);
    if !(fm.is_finite() && lm.is_finite() && rm.is_finite()) {
        if depth >= st.max_depth {
            st.nonfinite_at_cap = true;
            st.est += tol.abs();
            return if whole.is_finite() { whole } else { 0.0 };
        }
        // force subdivision around the bad sample
        let left = simpson(fa, lm, if fm.is_finite() { fm } else { fa }, m - a);
        let right = simpson(if fm.is_finite() { fm } else { fb }, rm, fb, b - m);
        let l = adapt(st, a, m, fa, lm, if fm.is_finite() { fm } else { fa }, left, tol / 2.0, depth + 1);
        let r = adapt(st, m, b, if fm.is_finite() { fm } else { fb }, rm, fb, right, tol / 2.0, depth + 1);
        return l + r;
    }
    let left = simpson(fa, lm, fm, m - a);
    let right = simpson(fm, rm, fb, b - m);
    let delta = left + right - whole;
    if depth >= st.max_depth || delta.abs() <= 15.0 * tol {
        st.est += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    let l = adapt(st, a, m, fa, lm, fm, left, tol / 2.0, depth + 1);
    let r = adapt(st, m, b, fm, rm, fb, right, tol / 2.0, depth + 1);
    l + r
}

/// Adaptive Simpson over [a, b] with panel break points; returns the
/// integral and the accumulated error estimate.
fn integrate(
    f: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    tol: f64,
    max_depth: u32,
) -> Result<(f64, f64)> {
    let mut total = 0.0;
    let mut st = AdaptState {
        f,
        max_depth,
        est: 0.0,
        nonfinite_at_cap: false,
    };
    let span: f64 = breaks.last().unwrap() - breaks[0];
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-15 {
            continue;
        }
        let panel_tol = tol * ((b - a) / span).max(1e-3);
        let fa = sample(&mut st, a + (b - a) * 1e-12, b - a);
        let fb = sample(&mut st, b - (b - a) * 1e-12, b - a);
        let fm = sample(&mut st, 0.5 * (a + b), b - a);
        let whole = simpson(fa, fm, fb, b - a);
        total += adapt(&mut st, a, b, fa, fm, fb, whole, panel_tol, 0);
    }
    if st.nonfinite_at_cap {
        return Err(Error::QuadratureTarget {
            achieved: format!("{:.3e} (non-finite samples at depth cap)", st.est),
        });
    }
    Ok((total, st.est))
}

/// One-dimensional oracle: integrates the Jensen-reduced integrand
///   theta -> sum_k log max{1, |2cos(2 pi k/N) - e^{i theta}|}
/// over [0, 2 pi], with the kink set {2 pi k/N, 2 pi - 2 pi k/N} as
/// panel endpoints (these are the boundary points where a factor
/// crosses the unit circle).
pub fn jensen_quadrature_oracle(n: u64, ctx: &PrecisionContext) -> Result<MahlerResult> {
    if n < 3 {
        return Err(Error::ModulusTooSmall { min: 3, got: n });
    }
    let cos_vals: Vec<f64> = coprime_half_range(n)
        .iter()
        .map(|&k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos())
        .collect();
    let integrand = move |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        let mut acc = 0.0;
        for &ck in &cos_vals {
            let d2 = (ck - c) * (ck - c) + s * s;
            if d2 > 1.0 {
                acc += 0.5 * d2.ln();
            }
        }
        acc
    };
    let mut breaks: Vec<f64> = vec![0.0, 2.0 * PI];
    for k in coprime_half_range(n) {
        let t = 2.0 * PI * k as f64 / n as f64;
        breaks.push(t);
        breaks.push(2.0 * PI - t);
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let tol = ctx.quad_target * 2.0 * PI;
    let (integral, est) = integrate(&integrand, &breaks, tol, ctx.quad_depth + 26)?;
    let value = integral / (2.0 * PI);
    let est_m = est / (2.0 * PI);
    if est_m > ctx.quad_target * 4.0 {
        return Err(Error::QuadratureTarget {
            achieved: format!("{est_m:.3e}"),
        });
    }
    Ok(MahlerResult {
        value: BigReal::from_f64(value, 64).widen_err(&Float::with_val(32, est_m.max(1e-14))),
        method: MeasureMethod::JensenQuadrature,
        rigorous: false,
    })
}

/// Two-dimensional oracle: iterated adaptive quadrature of
/// log|f(e^{i t1}, e^{i t2})| / (2 pi)^2 over the torus. Integrable log
/// singularities along the zero curve are handled by local refinement
/// up to a depth cap.
pub fn torus_quadrature_oracle(f: &LaurentPoly2, ctx: &PrecisionContext) -> Result<MahlerResult> {
    if f.is_zero() {
        return Err(Error::Divisibility(
            "Mahler measure of the zero polynomial".to_string(),
        ));
    }
    let target = ctx.quad_target.max(1e-6);
    let inner_tol = target * PI;
    let inner_depth = ctx.quad_depth + 26;
    let inner_breaks = [0.0, PI, 2.0 * PI];
    let inner_est = std::cell::Cell::new(0.0f64);
    let inner_count = std::cell::Cell::new(0u64);
    let inner_failed = std::cell::Cell::new(false);
    let outer_integrand = |t2: f64| -> f64 {
        let g = |t1: f64| {
            let v = f.eval_torus(t1, t2).abs();
            v.ln()
        };
        match integrate(&g, &inner_breaks, inner_tol, inner_depth) {
            Ok((v, e)) => {
                inner_est.set(inner_est.get() + e);
                inner_count.set(inner_count.get() + 1);
                v
            }
            Err(_) => {
                inner_failed.set(true);
                f64::NAN
            }
        }
    };
    let outer_tol = target * 4.0 * PI * PI / 2.0;
    let (outer, outer_est) = integrate(
        &outer_integrand,
        &[0.0, 0.5 * PI, PI, 1.5 * PI, 2.0 * PI],
        outer_tol,
        ctx.quad_depth,
    )?;
    if inner_failed.get() {
        return Err(Error::QuadratureTarget {
            achieved: "inner integral hit non-finite samples at depth cap".to_string(),
        });
    }
    let value = outer / (4.0 * PI * PI);
    // heuristic combined estimate: outer estimate plus the mean inner
    // estimate integrated over the outer range
    let mean_inner = if inner_count.get() > 0 {
        inner_est.get() / inner_count.get() as f64
    } else {
        0.0
    };
    let est = (outer_est + mean_inner * 2.0 * PI) / (4.0 * PI * PI);
    Ok(MahlerResult {
        value: BigReal::from_f64(value, 64).widen_err(&Float::with_val(32, est.max(1e-14))),
        method: MeasureMethod::TorusQuadrature,
        rigorous: false,
    })
}

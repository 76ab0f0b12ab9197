//! Derivatives of partial Dirichlet L-values at s = 0 and s = -1, their
//! character-weighted sums, classical L-series at integers >= 2, exact
//! L-values at non-positive integers via generalized Bernoulli numbers,
//! and the functional-equation cross-check.
//!
//! Closed forms, for gcd(k, N) = 1:
//!   L'(0, sigma_k)  at modulus N:  -2 log(2 sin(pi k/N))
//!   L'(-1, sigma_k) at modulus N:  (N/4pi) Cl_2(2 pi k/N)
//! The second equals the defining series through
//! sum_n (e^{2 pi i k n/N} - e^{-2 pi i k n/N})/n^2 = 2i Cl_2(2 pi k/N).

use crate::characters::DirichletCharacter;
use crate::clausen::{bernoulli, clausen2};
use crate::error::{Error, Result};
use crate::exact::cyc::{gcd_u64, CycRational};
use crate::num::{BigComplex, BigReal, PrecisionContext};
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// A single derivative partial L-value L^{(N)'}(-epsilon, sigma_k).
#[derive(Debug, Clone)]
pub struct PartialLPrime {
    pub modulus: u64,
    pub residue: u64,
    pub epsilon: u8,
    pub value: BigReal,
}

fn check_unit(n: u64, k: u64) -> Result<u64> {
    let r = k % n;
    if gcd_u64(r, n) != 1 {
        return Err(Error::NotAUnit { k, n });
    }
    Ok(r)
}

/// Internal evaluation without the N >= 3 guard (the Euler relations and
/// the two-modulus identities legitimately reach modulus 2).
pub(crate) fn partial0_value(n: u64, k: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    let r = check_unit(n, k)?;
    let bits = ctx.bits();
    let angle = BigReal::pi(bits).mul_i64(r as i64).div_u64(n);
    let two_sin = angle.sin().mul_i64(2);
    Ok(two_sin.ln().mul_i64(-2))
}

pub(crate) fn partial1_value(n: u64, k: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    let r = check_unit(n, k)?;
    let bits = ctx.bits();
    let angle = BigReal::pi(bits).mul_i64(2 * r as i64).div_u64(n);
    let cl = clausen2(&angle, ctx)?;
    Ok(cl.mul_i64(n as i64).div_u64(4).div(&BigReal::pi(bits)))
}

/// L^{(N)'}(0, sigma_k) = -2 log(2 sin(pi k/N)).
pub fn partial_lprime0(n: u64, k: u64, ctx: &PrecisionContext) -> Result<PartialLPrime> {
    if n < 3 {
        return Err(Error::ModulusTooSmall { min: 3, got: n });
    }
    Ok(PartialLPrime {
        modulus: n,
        residue: k % n,
        epsilon: 0,
        value: partial0_value(n, k, ctx)?,
    })
}

/// L^{(N)'}(-1, sigma_k) = (N/4pi) Cl_2(2 pi k/N).
pub fn partial_lprime1(n: u64, k: u64, ctx: &PrecisionContext) -> Result<PartialLPrime> {
    if n < 3 {
        return Err(Error::ModulusTooSmall { min: 3, got: n });
    }
    Ok(PartialLPrime {
        modulus: n,
        residue: k % n,
        epsilon: 1,
        value: partial1_value(n, k, ctx)?,
    })
}

/// Both families of partial values for every unit of one modulus,
/// computed once and shared across character sums.
pub struct PartialTable {
    pub modulus: u64,
    units: Vec<u64>,
    l0: Vec<BigReal>,
    l1: Vec<BigReal>,
}

impl PartialTable {
    pub fn build(n: u64, ctx: &PrecisionContext) -> Result<Self> {
        // modulus 1 has no partial values (1 - zeta would be 0); modulus
        // 2 is legitimately reached by the two-modulus identities
        if n < 2 {
            return Err(Error::ModulusTooSmall { min: 2, got: n });
        }
        let units: Vec<u64> = (1..n).filter(|&a| gcd_u64(a, n) == 1).collect();
        let mut l0 = Vec::with_capacity(units.len());
        let mut l1 = Vec::with_capacity(units.len());
        for &k in &units {
            l0.push(partial0_value(n, k, ctx)?);
            l1.push(partial1_value(n, k, ctx)?);
        }
        Ok(PartialTable {
            modulus: n,
            units,
            l0,
            l1,
        })
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    pub fn value(&self, k: u64, epsilon: u8) -> Option<&BigReal> {
        let idx = self.units.iter().position(|&u| u == k % self.modulus)?;
        Some(if epsilon == 0 { &self.l0[idx] } else { &self.l1[idx] })
    }

    /// sum over units k of chi(k) L^{(M)'}(-epsilon, sigma_k); chi must
    /// take defined values on units of this modulus.
    pub fn weighted_sum(
        &self,
        chi: &DirichletCharacter,
        epsilon: u8,
        bits: u32,
    ) -> Result<BigComplex> {
        let mut acc = BigComplex::zero(bits);
        for (i, &k) in self.units.iter().enumerate() {
            let w = chi.value(k as i64);
            if w.is_zero() {
                continue;
            }
            let wc = w.embed(1, bits)?;
            let v = if epsilon == 0 { &self.l0[i] } else { &self.l1[i] };
            acc = acc.add(&wc.scale(v));
        }
        Ok(acc)
    }
}

/// Character-weighted sum of partial values at the character's own
/// modulus: equals L^{(N)'}(-epsilon, chi) on parity match and vanishes
/// on mismatch. The trivial character is rejected; use the table
/// directly when the full unweighted sum is wanted.
pub fn lprime_chi(
    chi: &DirichletCharacter,
    epsilon: u8,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let table = PartialTable::build(chi.modulus(), ctx)?;
    table.weighted_sum(chi, epsilon, ctx.bits())
}

/// The same sum with the character transported to modulus M (conductor
/// must divide M).
pub fn lprime_chi_at_modulus(
    chi: &DirichletCharacter,
    m: u64,
    epsilon: u8,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let moved = transport(chi, m)?;
    if moved.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let table = PartialTable::build(m, ctx)?;
    table.weighted_sum(&moved, epsilon, ctx.bits())
}

/// The unique character of modulus M agreeing with chi away from the
/// moduli; requires cond(chi) | M.
pub fn transport(chi: &DirichletCharacter, m: u64) -> Result<DirichletCharacter> {
    if chi.modulus() == m {
        return Ok(chi.clone());
    }
    if !m.is_multiple_of(chi.conductor()) {
        return Err(Error::Divisibility(format!(
            "conductor {} does not divide target modulus {m}",
            chi.conductor()
        )));
    }
    if m.is_multiple_of(chi.modulus()) {
        chi.induce(m)
    } else if chi.modulus().is_multiple_of(m) {
        chi.restrict(m)
    } else {
        chi.restrict(chi.conductor())?.induce(m)
    }
}

/// Upper bound on |sum_{a<=x} chi(a)| over one period, for the Abel tail
/// bound of the L-series. Exact arithmetic is overkill here; a float
/// scan with generous slack is enough for a rigorous bound.
fn char_prefix_bound(chi: &DirichletCharacter, bits: u32) -> f64 {
    let n = chi.modulus();
    let mut acc = BigComplex::zero(bits);
    let mut best = 0.0f64;
    for a in 1..=n {
        let v = chi.value(a as i64);
        if !v.is_zero() {
            acc = acc.add(&v.embed(1, bits).expect("unit embedding"));
        }
        best = best.max(acc.abs_upper().to_f64());
    }
    best + 0.01
}

/// L(s, chi) = sum_{n>=1} chi(n)/n^s for integer s >= 2, summed per
/// residue class with a rigorous tail bound: Abel summation against the
/// bounded character prefix sums for non-trivial chi, and the integral
/// bound phi(N) * M^{1-s}/(s-1) for the trivial character.
pub fn dirichlet_l_series(
    chi: &DirichletCharacter,
    s: u32,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    assert!(s >= 2, "series route requires s >= 2");
    let bits = ctx.bits();
    let n = chi.modulus();
    let target = ctx.target().to_f64();
    let terms_f = if chi.is_trivial() {
        let phi = chi.group().phi() as f64;
        (phi / ((s as f64 - 1.0) * target)).powf(1.0 / (s as f64 - 1.0)).ceil() + 1.0
    } else {
        let b = char_prefix_bound(chi, 64);
        (2.0 * b / target).powf(1.0 / s as f64).ceil() + 1.0
    };
    let terms = terms_f.min(u64::MAX as f64) as u64;
    if !(terms_f.is_finite()) || terms > ctx.max_series_terms {
        // report the bound we could achieve at the budget
        let m = ctx.max_series_terms as f64;
        let achieved = if chi.is_trivial() {
            chi.group().phi() as f64 * m.powf(1.0 - s as f64) / (s as f64 - 1.0)
        } else {
            2.0 * char_prefix_bound(chi, 64) * m.powf(-(s as f64))
        };
        return Err(Error::BudgetExhausted {
            achieved: format!("{achieved:.3e}"),
        });
    }
    let mut acc = BigComplex::zero(bits);
    for a in 1..=n.max(1) {
        if n > 1 && gcd_u64(a % n, n) != 1 {
            continue;
        }
        // sum over the residue class a mod n up to `terms`
        let mut class = BigReal::zero(bits);
        let mut m = a;
        while m <= terms {
            let p = Float::with_val(bits, m).pow(s as i32);
            let term = BigReal::with_err(
                Float::with_val(bits, p.recip_ref()),
                Float::with_val(32, 0),
            );
            class = class.add(&term);
            m += n.max(1);
        }
        let w = chi.value(a as i64).embed(1, bits)?;
        acc = acc.add(&w.scale(&class));
    }
    let tail = Float::with_val_round(32, target, Round::Up).0;
    Ok(BigComplex {
        re: acc.re.widen_err(&tail),
        im: acc.im.widen_err(&tail),
    })
}

/// Value of the Bernoulli polynomial B_n(x), exact.
fn bernoulli_poly(n: u32, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    let mut xpow = Rational::from(1);
    // sum_k C(n,k) B_{n-k} x^k
    for k in 0..=n {
        let c = Integer::from(n).binomial(k);
        let b = bernoulli((n - k) as usize);
        acc += (&b * Rational::from(c)) * &xpow;
        if k < n {
            xpow *= x;
        }
    }
    acc
}

/// Generalized Bernoulli number B_{n,chi} = f^{n-1} sum_{a=1}^f chi(a)
/// B_n(a/f), taken on the primitive character of conductor f.
pub fn bernoulli_generalized(chi: &DirichletCharacter, n: u32) -> CycRational {
    assert!(n >= 1);
    let f = chi.conductor();
    let order = chi.order() as u32;
    let mut acc = CycRational::zero(order);
    for a in 1..=f {
        let w = chi.primitive_value(a as i64);
        if w.is_zero() {
            continue;
        }
        let b = bernoulli_poly(n, &Rational::from((a, f)));
        acc = acc.add(&w.mul_rational(&b)).expect("same order");
    }
    let scale = Rational::from(Integer::from(f)).pow(n as i32 - 1);
    acc.mul_rational(&scale)
}

/// Exact L(1-n, chi) = -B_{n,chi}/n for the primitive character.
pub fn l_at_nonpositive(chi: &DirichletCharacter, n: u32) -> CycRational {
    assert!(n >= 1);
    bernoulli_generalized(chi, n).mul_rational(&Rational::from((-1i64, n as i64)))
}

/// Outcome of the functional-equation cross-check for an odd primitive
/// character: the matching convention (sign of i, chi vs chi^{-1} inside
/// the classical L-series at s = 2) together with both evaluated sides.
#[derive(Debug, Clone)]
pub struct FeqMatch {
    pub value: BigComplex,
    pub partial_route: BigComplex,
    pub convention: String,
    pub difference: BigReal,
}

/// Evaluates sign * i * tau(chi) * f/(4 pi) * L(2, chi or chi^{-1}) over
/// the four convention choices and returns the one matching the
/// partial-sum route L^{(f)'}(-1, chi) within `tol`.
pub fn lprime_via_feq(
    chi: &DirichletCharacter,
    tol: f64,
    ctx: &PrecisionContext,
) -> Result<FeqMatch> {
    if chi.is_even() || !chi.is_primitive() || chi.is_trivial() {
        return Err(Error::NotOddPrimitive);
    }
    let bits = ctx.bits();
    let f = chi.modulus();
    let lhs = lprime_chi(chi, 1, ctx)?;
    let tau = chi.gauss_sum(ctx);
    let quarter_pi_f = BigReal::pi(bits).mul_i64(4);
    let mut candidates = String::new();
    for (sign_name, sign) in [("-i", -1i64), ("+i", 1i64)] {
        for (arg_name, arg_chi) in [("chi^-1", chi.inverse()), ("chi", chi.clone())] {
            let l2 = dirichlet_l_series(&arg_chi, 2, ctx)?;
            // sign * i * tau * f/(4pi) * L2
            let i_tau = BigComplex {
                re: tau.im.neg().mul_i64(sign),
                im: tau.re.mul_i64(sign),
            };
            let cand = i_tau
                .mul(&l2)
                .scale(&BigReal::from_i64(f as i64, bits).div(&quarter_pi_f));
            let diff = cand.sub(&lhs).abs();
            if diff.value().to_f64().abs() <= tol {
                return Ok(FeqMatch {
                    value: cand,
                    partial_route: lhs,
                    convention: format!("{sign_name} * tau(chi) * f/(4pi) * L(2, {arg_name})"),
                    difference: diff,
                });
            }
            candidates.push_str(&format!(
                "[{sign_name},{arg_name}] -> {} + {} i; ",
                cand.re.to_decimal(20),
                cand.im.to_decimal(20)
            ));
        }
    }
    Err(Error::ConventionMismatch {
        candidates: format!(
            "lhs = {} + {} i; {candidates}",
            lhs.re.to_decimal(20),
            lhs.im.to_decimal(20)
        ),
    })
}

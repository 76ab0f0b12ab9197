//! Integer-relation probing of the linear-independence conjectures: the
//! mixed-span probe (derivative partial L-values at s = -1 against the
//! s = 0 span), the weak variant against logs of the real cyclotomic
//! numbers 2cos(2 pi k/N), and the kernel reports for the partial-value
//! pairing. Probes are evidence at a stated precision and height, never
//! proof, and every certificate records the search parameters.

pub mod lll;

use crate::error::{Error, Result};
use crate::exact::cyc::gcd_u64;
use crate::exact::poly::cyclotomic_polynomial;
use crate::lseries::{partial0_value, partial1_value};
use crate::num::{BigReal, PrecisionContext};
use lll::lll_reduce;
use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};

const SCALING_GUARD: u32 = 10;
const LLL_DELTA: (u32, u32) = (99, 100);

/// Labeled numeric inputs for one relation search.
#[derive(Debug)]
pub struct RelationQuery {
    pub entries: Vec<(String, BigReal)>,
    pub digits: u32,
    pub height: Integer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationOutcome {
    Relation(Vec<Integer>),
    NoneDetected,
    Degenerate,
}

/// Search parameters frozen into every certificate so that
/// "none-detected" claims are reproducible.
#[derive(Debug, Clone)]
pub struct CertificateMeta {
    pub precision_digits: u32,
    pub height: Integer,
    pub scaling_guard: u32,
    pub lll_delta: (u32, u32),
}

#[derive(Debug)]
pub struct RelationResult {
    pub outcome: RelationOutcome,
    /// Smallest |sum c_i x_i| observed over the reduced basis (exact
    /// substitution at query precision).
    pub residual: BigReal,
    pub meta: CertificateMeta,
    pub notes: Vec<String>,
}

fn pow10(e: u32) -> Integer {
    Integer::from(10).pow(e)
}

/// Lattice-reduction integer-relation search. "None detected" is a
/// statement at the given precision and height only.
pub fn integer_relation(q: &RelationQuery) -> Result<RelationResult> {
    let n = q.entries.len();
    if n < 2 {
        return Err(Error::BadRelationQuery(format!(
            "need at least 2 entries, got {n}"
        )));
    }
    let tiny = Float::with_val(32, 10f64).pow(-(q.digits as f64));
    for (label, x) in &q.entries {
        if *x.err() > tiny {
            return Err(Error::BadRelationQuery(format!(
                "entry {label} carries error {} above 10^-{}",
                x.err_decimal(),
                q.digits
            )));
        }
    }
    let h_digits = (q.height.significant_bits() as f64 * std::f64::consts::LOG10_2).ceil() as u32;
    let needed = n as u32 * h_digits + 40;
    if q.digits < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            have: q.digits,
        });
    }
    let scale = pow10(q.digits - SCALING_GUARD);
    let scale_f = Float::with_val(q.digits * 4, &scale);
    let mut basis: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for (i, (_, x)) in q.entries.iter().enumerate() {
        let mut row = vec![Integer::new(); n + 1];
        row[i] = Integer::from(1);
        let scaled = Float::with_val(q.digits * 4, x.value() * &scale_f);
        row[n] = scaled
            .round()
            .to_integer()
            .expect("finite scaled value");
        basis.push(row);
    }
    lll_reduce(&mut basis, &Rational::from(LLL_DELTA));

    let meta = CertificateMeta {
        precision_digits: q.digits,
        height: q.height.clone(),
        scaling_guard: SCALING_GUARD,
        lll_delta: LLL_DELTA,
    };
    let bits = q.entries[0].1.prec();
    let mut best_residual: Option<BigReal> = None;
    let mut found: Option<(Vec<Integer>, BigReal)> = None;
    for row in &basis {
        let coeffs = &row[..n];
        if coeffs.iter().all(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            continue;
        }
        // exact substitution
        let mut s = BigReal::zero(bits);
        let mut combined = Float::with_val(32, 0);
        for (c, (_, x)) in coeffs.iter().zip(&q.entries) {
            let cf = BigReal::from_rational(&Rational::from(c), bits);
            s = s.add(&cf.mul(x));
            let cabs = Float::with_val(32, c.clone().abs());
            let slack = Float::with_val(64, x.err() + Float::with_val(64, 1u32) / &scale_f);
            combined = Float::with_val(32, combined + cabs * slack);
        }
        let resid = s.abs();
        if best_residual
            .as_ref()
            .is_none_or(|b| resid.value() < b.value())
        {
            best_residual = Some(resid.clone());
        }
        let within_height = coeffs.iter().all(|c| c.clone().abs() <= q.height);
        let ten_combined = Float::with_val(32, &combined * &Float::with_val(32, 10));
        if within_height && resid.abs_upper() <= ten_combined {
            let better = match &found {
                None => true,
                Some((_, prev)) => resid.value() < prev.value(),
            };
            if better {
                found = Some((coeffs.to_vec(), resid.clone()));
            }
        }
    }
    let residual = best_residual.unwrap_or_else(|| BigReal::zero(bits));
    match found {
        Some((coeffs, resid)) => Ok(RelationResult {
            outcome: RelationOutcome::Relation(coeffs),
            residual: resid,
            meta,
            notes: vec![],
        }),
        None => Ok(RelationResult {
            outcome: RelationOutcome::NoneDetected,
            residual,
            meta,
            notes: vec![],
        }),
    }
}

fn is_prime_power(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let mut p = 2;
    let mut m2 = m;
    while p * p <= m2 {
        if m2.is_multiple_of(p) {
            while m2.is_multiple_of(p) {
                m2 /= p;
            }
            return if m2 == 1 { Some(p) } else { None };
        }
        p += 1;
    }
    Some(m)
}

fn half_units(n: u64) -> Vec<u64> {
    (1..n)
        .filter(|&k| 2 * k < n && gcd_u64(k, n) == 1)
        .collect()
}

/// The probed spans: partial L'(-1) values on coset representatives, and
/// an exact-rank basis of the L'(0) side (differences kill the
/// even-symmetry, one representative is dropped for the full-sum
/// relation), plus log|zeta_N + conj(zeta_N)| when N = 4 p^r.
#[derive(Debug)]
pub struct LSpanBasis {
    pub modulus: u64,
    pub basis_minus1: Vec<(String, BigReal)>,
    pub basis_0: Vec<(String, BigReal)>,
    pub has_unit_log: bool,
}

pub fn build_lspan_basis(n: u64, ctx: &PrecisionContext) -> Result<LSpanBasis> {
    if n < 3 {
        return Err(Error::ModulusTooSmall { min: 3, got: n });
    }
    let reps = half_units(n);
    let mut basis_minus1 = Vec::new();
    for &k in &reps {
        basis_minus1.push((
            format!("L'(-1,sigma_{k})@{n}"),
            partial1_value(n, k, ctx)?,
        ));
    }
    let mut basis_0 = Vec::new();
    for &k in reps.iter().skip(1) {
        let v = partial0_value(n, k, ctx)?.sub(&partial0_value(n, reps[0], ctx)?);
        basis_0.push((format!("L'(0,sigma_{k}-sigma_{})@{n}", reps[0]), v));
    }
    let has_unit_log = n.is_multiple_of(4) && is_prime_power(n / 4).is_some();
    if has_unit_log {
        let bits = ctx.bits();
        let c = BigReal::pi(bits).mul_i64(2).div_u64(n).cos().mul_i64(2);
        basis_0.push(("log|zeta_N+conj(zeta_N)|".to_string(), c.abs().ln()));
    }
    Ok(LSpanBasis {
        modulus: n,
        basis_minus1,
        basis_0,
        has_unit_log,
    })
}

fn ctx_digits(ctx: &PrecisionContext) -> u32 {
    ((ctx.bits().saturating_sub(32)) as f64 * std::f64::consts::LOG10_2).floor() as u32
}

/// A finished probe: the searched labels, the relation result, and the
/// evidence disclaimer.
#[derive(Debug)]
pub struct ProbeCertificate {
    pub modulus: u64,
    pub kind: &'static str,
    pub basis_labels: Vec<String>,
    pub result: RelationResult,
    pub note: String,
}

const EVIDENCE_NOTE: &str = "integer-relation search is evidence at the stated precision and height, not proof";

fn run_probe(
    n: u64,
    kind: &'static str,
    entries: Vec<(String, BigReal)>,
    ctx: &PrecisionContext,
    height: &Integer,
    mut notes: Vec<String>,
) -> Result<ProbeCertificate> {
    let labels: Vec<String> = entries.iter().map(|(l, _)| l.clone()).collect();
    if entries.len() < 2 {
        let bits = ctx.bits();
        notes.push("fewer than two independent values; trivially none-detected".to_string());
        notes.push(EVIDENCE_NOTE.to_string());
        return Ok(ProbeCertificate {
            modulus: n,
            kind,
            basis_labels: labels,
            result: RelationResult {
                outcome: RelationOutcome::Degenerate,
                residual: BigReal::zero(bits),
                meta: CertificateMeta {
                    precision_digits: ctx_digits(ctx),
                    height: height.clone(),
                    scaling_guard: SCALING_GUARD,
                    lll_delta: LLL_DELTA,
                },
                notes,
            },
            note: EVIDENCE_NOTE.to_string(),
        });
    }
    let q = RelationQuery {
        entries,
        digits: ctx_digits(ctx),
        height: height.clone(),
    };
    let mut result = integer_relation(&q)?;
    if let RelationOutcome::Relation(coeffs) = &result.outcome {
        // soundness: re-verify the relation at doubled precision before
        // reporting it
        let ctx2 = ctx.doubled();
        let rebuilt = rebuild_entries(n, kind, &q, &ctx2)?;
        let bits2 = ctx2.bits();
        let mut s = BigReal::zero(bits2);
        let mut combined = Float::with_val(32, 0);
        for (c, (_, x)) in coeffs.iter().zip(&rebuilt) {
            s = s.add(&BigReal::from_rational(&Rational::from(c), bits2).mul(x));
            let cabs = Float::with_val(32, c.clone().abs());
            combined = Float::with_val(32, combined + cabs * x.err());
        }
        let bound = Float::with_val(32, &combined * &Float::with_val(32, 10))
            .max(&Float::with_val(32, Float::i_exp(1, 16 - 2 * ctx.bits() as i32)));
        if s.abs().abs_upper() > bound {
            return Err(Error::BadRelationQuery(format!(
                "candidate relation {coeffs:?} failed re-verification at doubled precision (residual {})",
                s.abs().to_decimal(6)
            )));
        }
        result
            .notes
            .push("relation re-verified at doubled precision".to_string());
    }
    result.notes.extend(notes);
    result.notes.push(EVIDENCE_NOTE.to_string());
    Ok(ProbeCertificate {
        modulus: n,
        kind,
        basis_labels: labels,
        result,
        note: EVIDENCE_NOTE.to_string(),
    })
}

/// Recompute probe entries at a different precision (soundness pass).
fn rebuild_entries(
    n: u64,
    kind: &str,
    q: &RelationQuery,
    ctx: &PrecisionContext,
) -> Result<Vec<(String, BigReal)>> {
    let entries = match kind {
        "mc" => {
            let b = build_lspan_basis(n, ctx)?;
            b.basis_minus1.into_iter().chain(b.basis_0).collect()
        }
        "wmc" => wmc_entries(n, ctx)?.0,
        _ => return Err(Error::BadRelationQuery(format!("unknown probe kind {kind}"))),
    };
    // order must match the original query
    let mut out = Vec::with_capacity(q.entries.len());
    for (label, _) in &q.entries {
        let found = entries
            .iter()
            .find(|(l, _)| l == label)
            .ok_or_else(|| Error::BadRelationQuery(format!("label {label} vanished on rebuild")))?;
        out.push(found.clone());
    }
    Ok(out)
}

/// Mixed-span probe: the s = -1 basis united with the s = 0 basis; a
/// detected relation would contradict the independence conjecture.
pub fn probe_conjecture_mc(
    n: u64,
    ctx: &PrecisionContext,
    height: &Integer,
) -> Result<ProbeCertificate> {
    let b = build_lspan_basis(n, ctx)?;
    let entries: Vec<(String, BigReal)> =
        b.basis_minus1.into_iter().chain(b.basis_0).collect();
    run_probe(n, "mc", entries, ctx, height, vec![])
}

/// Symbolic decomposition of log|2cos(2 pi k/N)| over sine-log symbols,
/// used to strip exact rational dependencies before the lattice search.
///
/// Symbols: log(2 sin(pi j/M)) for the two reduced moduli, plus log p
/// for prime powers; known relations: the per-modulus full products
/// (resolvent of Phi_M at 1).
type LabeledValues = Vec<(String, BigReal)>;

fn wmc_entries(n: u64, ctx: &PrecisionContext) -> Result<(LabeledValues, Vec<String>)> {
    use std::collections::BTreeMap;
    let g2 = gcd_u64(n, 2);
    let g4 = gcd_u64(n, 4);
    let m2 = n / g2;
    let m4 = n / g4;
    // column indices for symbols
    let mut columns: BTreeMap<(u64, u64), usize> = BTreeMap::new(); // (modulus, idx) or (0, p) for log p
    let col = |key: (u64, u64), columns: &mut BTreeMap<(u64, u64), usize>| -> usize {
        let next = columns.len();
        *columns.entry(key).or_insert(next)
    };
    let norm = |j: u64, m: u64| -> u64 {
        let r = j % m;
        r.min(m - r)
    };
    let reps = half_units(n);
    let mut vectors: Vec<Vec<(usize, Rational)>> = Vec::new();
    for &k in &reps {
        let i2 = norm(2 * k / g2, m2);
        let i4 = norm(4 * k / g4, m4);
        let c2 = col((m2, i2), &mut columns);
        let c4 = col((m4, i4), &mut columns);
        let mut v = vec![
            (c2, Rational::from((1, 2))),
            (c4, Rational::from((-1, 2))),
        ];
        if c2 == c4 {
            v = vec![];
        }
        vectors.push(v);
    }
    // relation rows: per modulus, sum over units of the normalized
    // symbol equals log|Phi_M(1)|
    let mut relations: Vec<Vec<(usize, Rational)>> = Vec::new();
    for &m in &[m2, m4] {
        if m < 2 {
            continue;
        }
        let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
        for j in 1..m {
            if gcd_u64(j, m) == 1 {
                *counts.entry(norm(j, m)).or_insert(0) += 1;
            }
        }
        let mut row: Vec<(usize, Rational)> = counts
            .into_iter()
            .map(|(j, c)| (col((m, j), &mut columns), Rational::from(c)))
            .collect();
        let phi_at_one = cyclotomic_polynomial(m as u32).eval_i64(1);
        if phi_at_one != 1 {
            let p = phi_at_one.to_u64().expect("Phi_M(1) is p or 1");
            row.push((col((0, p), &mut columns), Rational::from(-1)));
        }
        relations.push(row);
    }
    let ncols = columns.len();
    let dense = |sparse: &[(usize, Rational)]| -> Vec<Rational> {
        let mut v = vec![Rational::new(); ncols];
        for (c, q) in sparse {
            v[*c] += q;
        }
        v
    };
    // echelon basis of the known-relation space
    let mut ech: Vec<(usize, Vec<Rational>)> = Vec::new();
    let reduce = |v: &mut Vec<Rational>, ech: &[(usize, Vec<Rational>)]| {
        for (p, row) in ech {
            if v[*p] != 0u32 {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= (&f * y).complete();
                }
            }
        }
    };
    let insert = |mut v: Vec<Rational>, ech: &mut Vec<(usize, Vec<Rational>)>| -> bool {
        reduce(&mut v, ech);
        if let Some(p) = v.iter().position(|x| *x != 0u32) {
            let lead = v[p].clone();
            for x in v.iter_mut() {
                *x /= &lead;
            }
            ech.push((p, v));
            true
        } else {
            false
        }
    };
    for r in &relations {
        insert(dense(r), &mut ech);
    }
    let mut kept: Vec<u64> = Vec::new();
    let mut dropped: Vec<u64> = Vec::new();
    let mut span = ech.clone();
    for (vi, &k) in reps.iter().enumerate() {
        if insert(dense(&vectors[vi]), &mut span) {
            kept.push(k);
        } else {
            dropped.push(k);
        }
    }
    let bits = ctx.bits();
    let mut entries = Vec::new();
    for &k in &kept {
        let c = BigReal::pi(bits).mul_i64(2 * k as i64).div_u64(n).cos().mul_i64(2);
        entries.push((format!("log|2cos(2pi*{k}/{n})|"), c.abs().ln()));
    }
    let mut notes = Vec::new();
    if !dropped.is_empty() {
        notes.push(format!(
            "exact preprocessing removed Q-dependent entries k = {dropped:?}"
        ));
    }
    Ok((entries, notes))
}

/// Weak-variant probe: the s = -1 basis united with the independent
/// logs of |2cos(2 pi k/N)| after exact preprocessing.
pub fn probe_conjecture_wmc(
    n: u64,
    ctx: &PrecisionContext,
    height: &Integer,
) -> Result<ProbeCertificate> {
    if n == 4 {
        return Ok(ProbeCertificate {
            modulus: n,
            kind: "wmc",
            basis_labels: vec![],
            result: RelationResult {
                outcome: RelationOutcome::Degenerate,
                residual: BigReal::zero(ctx.bits()),
                meta: CertificateMeta {
                    precision_digits: ctx_digits(ctx),
                    height: height.clone(),
                    scaling_guard: SCALING_GUARD,
                    lll_delta: LLL_DELTA,
                },
                notes: vec![
                    "degenerate: 2cos(pi/2) = 0 has no logarithm".to_string(),
                    EVIDENCE_NOTE.to_string(),
                ],
            },
            note: EVIDENCE_NOTE.to_string(),
        });
    }
    let b = build_lspan_basis(n, ctx)?;
    let (logs, notes) = wmc_entries(n, ctx)?;
    let entries: Vec<(String, BigReal)> = b.basis_minus1.into_iter().chain(logs).collect();
    run_probe(n, "wmc", entries, ctx, height, notes)
}

/// Numeric values of the pairing on the claimed kernel generators:
/// (1 - c) sigma_k and the full group sum at epsilon = 0, (1 + c)
/// sigma_k at epsilon = 1. Values above tolerance are flagged rather
/// than asserted away (the full sum is genuinely -2 log p at prime
/// powers).
#[derive(Debug)]
pub struct KernelEntry {
    pub label: String,
    pub value: BigReal,
    pub flagged: bool,
}

pub fn kernel_report(
    n: u64,
    epsilon: u8,
    tol: f64,
    ctx: &PrecisionContext,
) -> Result<Vec<KernelEntry>> {
    if n < 3 {
        return Err(Error::ModulusTooSmall { min: 3, got: n });
    }
    let mut out = Vec::new();
    for k in half_units(n) {
        let (label, value) = if epsilon == 1 {
            (
                format!("(1+c)sigma_{k}"),
                partial1_value(n, k, ctx)?.add(&partial1_value(n, n - k, ctx)?),
            )
        } else {
            (
                format!("(1-c)sigma_{k}"),
                partial0_value(n, k, ctx)?.sub(&partial0_value(n, n - k, ctx)?),
            )
        };
        let flagged = value.value().to_f64().abs() > tol;
        out.push(KernelEntry {
            label,
            value,
            flagged,
        });
    }
    if epsilon == 0 {
        let mut acc = BigReal::zero(ctx.bits());
        for k in (1..n).filter(|&k| gcd_u64(k, n) == 1) {
            acc = acc.add(&partial0_value(n, k, ctx)?);
        }
        let flagged = acc.value().to_f64().abs() > tol;
        out.push(KernelEntry {
            label: "sum_g".to_string(),
            value: acc,
            flagged,
        });
    }
    Ok(out)
}

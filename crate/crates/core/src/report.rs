//! Serialization of verification reports and probe certificates.
//!
//! Numbers are rendered as decimal strings with explicit error-bound
//! fields (never binary floating point), and the CSV encoding reuses the
//! exact same strings as the JSON encoding, so reports are comparable
//! across implementations byte for byte.

use crate::num::{BigComplex, PrecisionContext};
use crate::relprobe::{KernelEntry, ProbeCertificate, RelationOutcome};
use crate::verify::{IdentityCheck, VerificationReport};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct ComplexRepr {
    pub re: String,
    pub im: String,
    pub err: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct CheckRepr {
    pub id: String,
    pub lhs: ComplexRepr,
    pub rhs: ComplexRepr,
    pub diff: String,
    pub tol: String,
    pub verdict: String,
    pub rigorous: bool,
    pub notes: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct ContextRepr {
    pub precision_bits: u32,
    pub tolerance: String,
    pub max_series_terms: u64,
    pub quad_depth: u32,
    pub quad_target: String,
    pub decimal_digits: usize,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct ReportRepr {
    pub modulus: u64,
    pub context: ContextRepr,
    pub checks: Vec<CheckRepr>,
    pub duration_ms: u64,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct CertificateRepr {
    pub modulus: u64,
    pub kind: String,
    pub basis: Vec<String>,
    pub precision_digits: u32,
    pub height: String,
    pub outcome: String,
    pub relation: Option<Vec<String>>,
    pub residual: String,
    pub scaling_guard: u32,
    pub lll_delta: String,
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct KernelEntryRepr {
    pub label: String,
    pub value: String,
    pub err: String,
    pub flagged: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct KernelReportRepr {
    pub modulus: u64,
    pub kind: String,
    pub epsilon: u8,
    pub precision_bits: u32,
    pub entries: Vec<KernelEntryRepr>,
}

/// Output digits used for a context: slightly under the precision so the
/// strings are reproducible across runs.
pub fn context_digits(ctx: &PrecisionContext) -> usize {
    ((ctx.bits() as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(4).max(12)
}

pub fn complex_repr(z: &BigComplex, digits: usize) -> ComplexRepr {
    let err = if z.re.err() >= z.im.err() {
        z.re.err_decimal()
    } else {
        z.im.err_decimal()
    };
    ComplexRepr {
        re: z.re.to_decimal(digits),
        im: z.im.to_decimal(digits),
        err,
    }
}

fn tol_string(tol: f64) -> String {
    format!("{tol:e}")
}

pub fn check_repr(c: &IdentityCheck, digits: usize) -> CheckRepr {
    CheckRepr {
        id: c.id.clone(),
        lhs: complex_repr(&c.lhs, digits),
        rhs: complex_repr(&c.rhs, digits),
        diff: c.diff.to_decimal(6),
        tol: tol_string(c.tol),
        verdict: c.verdict.as_str().to_string(),
        rigorous: c.rigorous,
        notes: c.notes.clone(),
    }
}

pub fn context_repr(ctx: &PrecisionContext, tol: f64) -> ContextRepr {
    ContextRepr {
        precision_bits: ctx.bits(),
        tolerance: tol_string(tol),
        max_series_terms: ctx.max_series_terms,
        quad_depth: ctx.quad_depth,
        quad_target: tol_string(ctx.quad_target),
        decimal_digits: context_digits(ctx),
    }
}

pub fn report_repr(r: &VerificationReport, ctx: &PrecisionContext, tol: f64) -> ReportRepr {
    let digits = context_digits(ctx);
    ReportRepr {
        modulus: r.modulus,
        context: context_repr(ctx, tol),
        checks: r.checks.iter().map(|c| check_repr(c, digits)).collect(),
        duration_ms: r.duration.as_millis() as u64,
    }
}

pub fn certificate_repr(c: &ProbeCertificate) -> CertificateRepr {
    let (outcome, relation) = match &c.result.outcome {
        RelationOutcome::Relation(v) => (
            "relation-detected".to_string(),
            Some(v.iter().map(|x| x.to_string()).collect()),
        ),
        RelationOutcome::NoneDetected => ("none-detected".to_string(), None),
        RelationOutcome::Degenerate => ("degenerate".to_string(), None),
    };
    CertificateRepr {
        modulus: c.modulus,
        kind: c.kind.to_string(),
        basis: c.basis_labels.clone(),
        precision_digits: c.result.meta.precision_digits,
        height: c.result.meta.height.to_string(),
        outcome,
        relation,
        residual: c.result.residual.to_decimal(6),
        scaling_guard: c.result.meta.scaling_guard,
        lll_delta: format!("{}/{}", c.result.meta.lll_delta.0, c.result.meta.lll_delta.1),
        notes: c.result.notes.clone(),
    }
}

pub fn kernel_repr(
    modulus: u64,
    epsilon: u8,
    entries: &[KernelEntry],
    ctx: &PrecisionContext,
) -> KernelReportRepr {
    let digits = context_digits(ctx);
    KernelReportRepr {
        modulus,
        kind: "kernel".to_string(),
        epsilon,
        precision_bits: ctx.bits(),
        entries: entries
            .iter()
            .map(|e| KernelEntryRepr {
                label: e.label.clone(),
                value: e.value.to_decimal(digits),
                err: e.value.err_decimal(),
                flagged: e.flagged,
            })
            .collect(),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV rendering of a report: one row per check, fields carrying the
/// same strings as the JSON form.
pub fn report_csv(r: &ReportRepr) -> String {
    let mut out = String::from(
        "modulus,id,lhs_re,lhs_im,lhs_err,rhs_re,rhs_im,rhs_err,diff,tol,verdict,rigorous,notes\n",
    );
    for c in &r.checks {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.modulus,
            csv_escape(&c.id),
            c.lhs.re,
            c.lhs.im,
            c.lhs.err,
            c.rhs.re,
            c.rhs.im,
            c.rhs.err,
            c.diff,
            c.tol,
            c.verdict,
            c.rigorous,
            csv_escape(&c.notes)
        ));
    }
    out
}

pub fn certificate_csv(c: &CertificateRepr) -> String {
    let mut out = String::from(
        "modulus,kind,outcome,residual,precision_digits,height,scaling_guard,lll_delta,basis,relation,notes\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{}\n",
        c.modulus,
        c.kind,
        c.outcome,
        c.residual,
        c.precision_digits,
        c.height,
        c.scaling_guard,
        c.lll_delta,
        csv_escape(&c.basis.join(";")),
        csv_escape(&c.relation.as_ref().map(|v| v.join(";")).unwrap_or_default()),
        csv_escape(&c.notes.join("; ")),
    ));
    out
}

pub fn kernel_csv(k: &KernelReportRepr) -> String {
    let mut out = String::from("modulus,epsilon,label,value,err,flagged\n");
    for e in &k.entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            k.modulus,
            k.epsilon,
            csv_escape(&e.label),
            e.value,
            e.err,
            e.flagged
        ));
    }
    out
}

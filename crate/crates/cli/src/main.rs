//! Command-line driver: character tables, Mahler measures by any of the
//! three routes, the identity-verification suite with report files, and
//! the integer-relation probes with certificates.

use clap::{Parser, Subcommand, ValueEnum};
use mahler_lvalues::characters::enumerate_characters;
use mahler_lvalues::mahler::laurent::{fn_polynomial, parse_poly};
use mahler_lvalues::mahler::measure::{mahler_fn, mahler_fn_star, MahlerResult};
use mahler_lvalues::mahler::quad::{jensen_quadrature_oracle, torus_quadrature_oracle};
use mahler_lvalues::num::PrecisionContext;
use mahler_lvalues::relprobe::{kernel_report, probe_conjecture_mc, probe_conjecture_wmc};
use mahler_lvalues::report::{
    certificate_csv, certificate_repr, context_digits, kernel_csv, kernel_repr, report_csv,
    report_repr,
};
use mahler_lvalues::verify::run_suite;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mlv", about = "Mahler measures, Dirichlet L-values, and identity verification")]
struct Cli {
    /// Working precision in bits for formula routes
    #[arg(long, global = true, default_value_t = 192)]
    precision_bits: u32,

    /// Pass/fail tolerance for identity checks
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,

    /// Series evaluation budget
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_terms: u64,

    /// Adaptive quadrature depth limit
    #[arg(long, global = true, default_value_t = 14)]
    quad_depth: u32,

    /// Decimal digits for the relation probes
    #[arg(long, global = true, default_value_t = 300)]
    probe_digits: u32,

    /// Coefficient height bound for the relation probes (e.g. 1e25)
    #[arg(long, global = true, default_value = "1e25")]
    probe_height: String,

    /// Output format for report files
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Output directory for report/certificate files
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Formula,
    Jensen,
    Torus,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the Dirichlet characters modulo N
    Chars {
        #[arg(long)]
        modulus: u64,
    },
    /// Mahler measure of f_N or of a polynomial literal
    Mahler {
        #[arg(long)]
        modulus: Option<u64>,
        /// Laurent-polynomial literal in x1, x2 (integer coefficients)
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        /// Also print m(f_N*) alongside m(f_N)
        #[arg(long, default_value_t = false)]
        star: bool,
    },
    /// Run the identity-verification suite over a range of moduli
    Verify {
        /// Inclusive range like 5..30
        #[arg(long)]
        range: Option<String>,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Relation probes and kernel reports at one modulus
    Probe {
        #[arg(long)]
        modulus: u64,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_height(s: &str) -> Option<rug::Integer> {
    use rug::ops::Pow;
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let mantissa: u32 = if m.is_empty() { 1 } else { m.parse().ok()? };
        let exp: u32 = e.parse().ok()?;
        Some(rug::Integer::from(mantissa) * rug::Integer::from(10).pow(exp))
    } else {
        s.parse().ok()
    }
}

fn build_ctx(cli: &Cli) -> Result<PrecisionContext, String> {
    if cli.precision_bits < 64 {
        return Err("precision must be at least 64 bits".into());
    }
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return Err("tolerance must be positive".into());
    }
    let floor = 2f64.powi(-(cli.precision_bits as i32) + 8);
    if cli.tolerance <= floor {
        return Err(format!(
            "tolerance {:e} is below the resolution 2^(-precision+8) = {floor:e}",
            cli.tolerance
        ));
    }
    if cli.max_terms == 0 || cli.quad_depth == 0 {
        return Err("budgets must be positive".into());
    }
    let mut ctx = PrecisionContext::new(cli.precision_bits);
    ctx.max_series_terms = cli.max_terms;
    ctx.quad_depth = cli.quad_depth;
    Ok(ctx)
}

fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

#[derive(Serialize)]
struct CharRow {
    index: usize,
    exponents: Vec<u64>,
    order: u64,
    parity: &'static str,
    conductor: u64,
    values_at_generators: Vec<String>,
}

#[derive(Serialize)]
struct CharTable {
    modulus: u64,
    generators: Vec<u64>,
    generator_orders: Vec<u64>,
    characters: Vec<CharRow>,
}

fn cmd_chars(cli: &Cli, modulus: u64) -> ExitCode {
    if modulus < 1 {
        return usage_error("modulus must be at least 1");
    }
    let chars = enumerate_characters(modulus);
    let group = chars[0].group().clone();
    let rows: Vec<CharRow> = chars
        .iter()
        .enumerate()
        .map(|(i, chi)| CharRow {
            index: i,
            exponents: chi.exponents().to_vec(),
            order: chi.order(),
            parity: if chi.is_even() { "even" } else { "odd" },
            conductor: chi.conductor(),
            values_at_generators: group
                .generators
                .iter()
                .map(|&g| chi.value(g as i64).to_string())
                .collect(),
        })
        .collect();
    let table = CharTable {
        modulus,
        generators: group.generators.clone(),
        generator_orders: group.orders.clone(),
        characters: rows,
    };
    println!(
        "characters mod {modulus}: {} total, generators {:?} with orders {:?}",
        table.characters.len(),
        table.generators,
        table.generator_orders
    );
    for r in &table.characters {
        println!(
            "  #{:<3} exps {:?} order {:<3} {:<4} cond {:<4} values {:?}",
            r.index, r.exponents, r.order, r.parity, r.conductor, r.values_at_generators
        );
    }
    if let Some(dir) = &cli.out {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return usage_error(&format!("cannot create {dir:?}: {e}"));
        }
        let path = dir.join(format!("chars_N{modulus:03}.json"));
        let json = serde_json::to_string_pretty(&table).expect("serializable");
        if let Err(e) = atomic_write(&path, &json) {
            return usage_error(&format!("write failed: {e}"));
        }
        println!("wrote {}", path.display());
    }
    ExitCode::SUCCESS
}

fn print_measure(label: &str, m: &MahlerResult, digits: usize) {
    println!(
        "{label} = {}  (err <= {}, method {}, {})",
        m.value.to_decimal(digits),
        m.value.err_decimal(),
        m.method.as_str(),
        if m.rigorous {
            "rigorous bound"
        } else {
            "heuristic estimate"
        }
    );
}

fn cmd_mahler(
    _cli: &Cli,
    modulus: Option<u64>,
    poly: Option<String>,
    method: Method,
    star: bool,
    ctx: &PrecisionContext,
) -> ExitCode {
    let digits = context_digits(ctx);
    match (modulus, poly) {
        (Some(n), None) => {
            let result = match method {
                Method::Formula => mahler_fn(n, ctx),
                Method::Jensen => jensen_quadrature_oracle(n, ctx),
                Method::Torus => fn_polynomial(n).and_then(|p| torus_quadrature_oracle(&p, ctx)),
            };
            match result {
                Ok(m) => {
                    print_measure(&format!("m(f_{n})"), &m, digits);
                    if star {
                        match mahler_fn_star(n, ctx) {
                            Ok(s) => print_measure(&format!("m(f_{n}*)"), &s, digits),
                            Err(e) => return usage_error(&e.to_string()),
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(&e.to_string()),
            }
        }
        (None, Some(src)) => {
            let p = match parse_poly(&src) {
                Ok(p) => p,
                Err(e) => return usage_error(&format!("cannot parse polynomial: {e}")),
            };
            match method {
                Method::Torus => match torus_quadrature_oracle(&p, ctx) {
                    Ok(m) => {
                        print_measure(&format!("m({p})"), &m, digits);
                        ExitCode::SUCCESS
                    }
                    Err(e) => usage_error(&e.to_string()),
                },
                _ => usage_error("polynomial literals support --method torus only"),
            }
        }
        _ => usage_error("give exactly one of --modulus or --poly"),
    }
}

fn parse_range(range: &str) -> Option<Vec<u64>> {
    let (a, b) = range.split_once("..")?;
    let a: u64 = a.trim().parse().ok()?;
    let b: u64 = b.trim().trim_start_matches('=').parse().ok()?;
    if b < a {
        return None;
    }
    Some((a..=b).collect())
}

fn cmd_verify(
    cli: &Cli,
    range: Option<String>,
    modulus: Option<u64>,
    ctx: &PrecisionContext,
) -> ExitCode {
    let moduli: Vec<u64> = match (&range, modulus) {
        (Some(r), None) => match parse_range(r) {
            Some(v) if !v.is_empty() => v,
            _ => return usage_error("empty or malformed range; expected e.g. 5..30"),
        },
        (None, Some(n)) => vec![n],
        _ => return usage_error("give exactly one of --range or --modulus"),
    };
    if moduli.iter().any(|&n| n < 3) {
        return usage_error("verification requires N >= 3");
    }
    let reports = match run_suite(&moduli, cli.tolerance, ctx) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        return usage_error(&format!("cannot create {out_dir:?}: {e}"));
    }
    let mut all_pass = true;
    for r in &reports {
        let repr = report_repr(r, ctx, cli.tolerance);
        for c in &repr.checks {
            println!(
                "N={:<3} {:<24} {:<7} |diff|={} tol={}{}",
                r.modulus,
                c.id,
                c.verdict,
                c.diff,
                c.tol,
                if c.notes.is_empty() {
                    String::new()
                } else {
                    format!("  [{}]", c.notes)
                }
            );
            if c.verdict == "fail" {
                all_pass = false;
            }
        }
        let (name, contents) = match cli.format {
            Format::Json => (
                format!("report_N{:03}.json", r.modulus),
                serde_json::to_string_pretty(&repr).expect("serializable"),
            ),
            Format::Csv => (format!("report_N{:03}.csv", r.modulus), report_csv(&repr)),
        };
        if let Err(e) = atomic_write(&out_dir.join(&name), &contents) {
            return usage_error(&format!("write failed: {e}"));
        }
    }
    println!("wrote {} report(s) to {}", reports.len(), out_dir.display());
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_probe(cli: &Cli, modulus: u64) -> ExitCode {
    if modulus < 3 {
        return usage_error("probes require N >= 3");
    }
    let height = match parse_height(&cli.probe_height) {
        Some(h) if h > 0 => h,
        _ => return usage_error("cannot parse --probe-height"),
    };
    let ctx = PrecisionContext::with_digits(cli.probe_digits);
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        return usage_error(&format!("cannot create {out_dir:?}: {e}"));
    }
    let probes = [
        ("mc", probe_conjecture_mc(modulus, &ctx, &height)),
        ("wmc", probe_conjecture_wmc(modulus, &ctx, &height)),
    ];
    for (kind, outcome) in probes {
        let cert = match outcome {
            Ok(c) => c,
            Err(e) => return usage_error(&format!("{kind} probe failed: {e}")),
        };
        let repr = certificate_repr(&cert);
        println!(
            "N={modulus} {kind}: {} (residual {}, {} digits, height {})",
            repr.outcome, repr.residual, repr.precision_digits, repr.height
        );
        if repr.outcome == "relation-detected" {
            println!(
                "  FINDING: integer relation {:?} over {:?}",
                repr.relation, repr.basis
            );
        }
        let (name, contents) = match cli.format {
            Format::Json => (
                format!("certificate_N{modulus:03}_{kind}.json"),
                serde_json::to_string_pretty(&repr).expect("serializable"),
            ),
            Format::Csv => (
                format!("certificate_N{modulus:03}_{kind}.csv"),
                certificate_csv(&repr),
            ),
        };
        if let Err(e) = atomic_write(&out_dir.join(&name), &contents) {
            return usage_error(&format!("write failed: {e}"));
        }
    }
    for epsilon in [0u8, 1] {
        let entries = match kernel_report(modulus, epsilon, cli.tolerance, &ctx) {
            Ok(e) => e,
            Err(e) => return usage_error(&format!("kernel report failed: {e}")),
        };
        let repr = kernel_repr(modulus, epsilon, &entries, &ctx);
        for e in &repr.entries {
            if e.flagged {
                println!(
                    "N={modulus} kernel eps={epsilon}: {} = {} FLAGGED (non-vanishing)",
                    e.label, e.value
                );
            }
        }
        let (name, contents) = match cli.format {
            Format::Json => (
                format!("kernel_N{modulus:03}_eps{epsilon}.json"),
                serde_json::to_string_pretty(&repr).expect("serializable"),
            ),
            Format::Csv => (
                format!("kernel_N{modulus:03}_eps{epsilon}.csv"),
                kernel_csv(&repr),
            ),
        };
        if let Err(e) = atomic_write(&out_dir.join(&name), &contents) {
            return usage_error(&format!("write failed: {e}"));
        }
    }
    println!("wrote certificates to {}", out_dir.display());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match build_ctx(&cli) {
        Ok(c) => c,
        Err(msg) => return usage_error(&msg),
    };
    match &cli.cmd {
        Cmd::Chars { modulus } => cmd_chars(&cli, *modulus),
        Cmd::Mahler {
            modulus,
            poly,
            method,
            star,
        } => cmd_mahler(&cli, *modulus, poly.clone(), *method, *star, &ctx),
        Cmd::Verify { range, modulus } => cmd_verify(&cli, range.clone(), *modulus, &ctx),
        Cmd::Probe { modulus } => cmd_probe(&cli, *modulus),
    }
}

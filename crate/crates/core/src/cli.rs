//! Command-line front end. Exit codes: 0 success, 2 expectation mismatch,
//! 3 invalid input, 4 resource limit.

use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::criteria::{self, RegionReport, SievePlan, TableRow};
use crate::error::{Error, Result};
use crate::gf::{parse_coeffs, FieldCtx, FieldElem};
use crate::intnum::{self, Factorization};
use crate::verify::{self, BetaScope, SearchOptions, SuiteReport, TripleScope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Member,
    Exceptional,
}

#[derive(Debug, Parser)]
#[command(name = "primpair", version, about = "Primitive pairs with prescribed trace over finite fields")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for the exhaustive search (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,

    /// Defining polynomial of F_{q^m} over F_p, coefficients constant term first.
    #[arg(long, global = true)]
    pub modulus: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor an integer and report ω, W, φ, μ and the radical.
    Factor { n: u128 },
    /// Region bounds and the condition q^(m/2-1) > 2W(q^m-1)^2.
    Bound { q: u64, m: u32 },
    /// Sieve plan; the best core size unless --core is given.
    Sieve {
        q: u64,
        m: u32,
        #[arg(long)]
        core: Option<usize>,
    },
    /// Recompute the sieve tables (both when no number is given).
    Tables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: Option<u8>,
    },
    /// Run the full pipeline: region, base condition, sieve, search.
    Classify {
        q: u64,
        m: u32,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Exhaustive search over triples (a, b, c) and trace values.
    Search {
        q: u64,
        m: u32,
        /// a, b, c as three values, or one value separated by ';'.
        #[arg(long, num_args = 1..=3)]
        coeffs: Option<Vec<String>>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[arg(long)]
        allow_inadmissible: bool,
    },
    /// Character-sum checks on F_{q^m}; --suite adds the Weil and |S| sweeps.
    Charsum {
        q: u64,
        m: u32,
        #[arg(long)]
        suite: bool,
    },
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GuardExceeded { .. } | Error::MissingLogTable(_) | Error::FieldTooLarge(_) => {
            EXIT_RESOURCE
        }
        _ => EXIT_INVALID,
    }
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidArgument(format!("output: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv output: {e}"))
}

/// Six significant digits, trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..=9).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), sig6)
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidArgument(format!("json output: {e}")))?;
    writeln!(out, "{s}").map_err(io_err)
}

fn field_for(q: u64, m: u32, modulus: Option<&str>) -> Result<FieldCtx> {
    let (p, s) = intnum::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let modulus = modulus.map(parse_coeffs).transpose()?;
    FieldCtx::new(p, s, m, modulus)
}

fn workers(cli: &Cli) -> usize {
    cli.workers.map_or(0, usize::from)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Factor { n } => cmd_factor(cli.format, *n, out),
        Command::Bound { q, m } => cmd_bound(cli.format, *q, *m, out),
        Command::Sieve { q, m, core } => cmd_sieve(cli.format, *q, *m, *core, out),
        Command::Tables { which } => cmd_tables(cli.format, *which, out, err),
        Command::Classify { q, m, expect } => cmd_classify(cli, *q, *m, *expect, out),
        Command::Search { q, m, coeffs, beta, expect, allow_inadmissible } => cmd_search(
            cli,
            SearchArgs {
                q: *q,
                m: *m,
                coeffs: coeffs.as_deref(),
                beta: beta.as_deref(),
                expect: *expect,
                allow_inadmissible: *allow_inadmissible,
            },
            out,
        ),
        Command::Charsum { q, m, suite } => cmd_charsum(cli, *q, *m, *suite, out),
    }
}

#[derive(Serialize)]
struct FactorOut {
    n: String,
    factors: Vec<(String, u32)>,
    omega: u32,
    w: String,
    euler_phi: String,
    moebius: i8,
    radical: String,
    squarefree: bool,
}

impl From<&Factorization> for FactorOut {
    fn from(f: &Factorization) -> Self {
        FactorOut {
            n: f.value().to_string(),
            factors: f.factors().iter().map(|&(p, e)| (p.to_string(), e)).collect(),
            omega: f.omega(),
            w: f.w().to_string(),
            euler_phi: f.euler_phi().to_string(),
            moebius: f.moebius(),
            radical: f.radical().to_string(),
            squarefree: f.is_squarefree(),
        }
    }
}

fn cmd_factor(format: Format, n: u128, out: &mut dyn Write) -> Result<i32> {
    let f = intnum::factorize(n)?;
    let o = FactorOut::from(&f);
    match format {
        Format::Text => {
            writeln!(out, "{f}").map_err(io_err)?;
            writeln!(
                out,
                "omega={} W={} phi={} mu={} radical={}",
                o.omega, o.w, o.euler_phi, o.moebius, o.radical
            )
            .map_err(io_err)?;
        }
        Format::Json => json_line(out, &o)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "factors", "omega", "w", "euler_phi", "moebius", "radical"])
                .map_err(csv_err)?;
            let factors = o
                .factors
                .iter()
                .map(|(p, e)| format!("{p}^{e}"))
                .collect::<Vec<_>>()
                .join(" ");
            w.write_record([
                o.n,
                factors,
                o.omega.to_string(),
                o.w,
                o.euler_phi,
                o.moebius.to_string(),
                o.radical,
            ])
            .map_err(csv_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BoundOut {
    region: RegionReport,
    base: Option<criteria::ConditionReport>,
    mersenne: Option<criteria::MersenneVerdict>,
}

fn cmd_bound(format: Format, q: u64, m: u32, out: &mut dyn Write) -> Result<i32> {
    let region = criteria::region_report(q, m)?;
    let base = match criteria::base_condition(q, m) {
        Ok(b) => Some(b),
        Err(Error::TooLarge(_)) => None,
        Err(e) => return Err(e),
    };
    let mersenne = if q == 2 && m <= 127 { Some(criteria::mersenne_rule(m)?) } else { None };
    let o = BoundOut { region, base, mersenne };
    match format {
        Format::Text => {
            let region_line = match &o.region.bound {
                Some(b) => format!("region: settled by {}", b.describe()),
                None => "region: not settled".into(),
            };
            writeln!(out, "q={q} m={m}").map_err(io_err)?;
            writeln!(out, "{region_line}").map_err(io_err)?;
            match &o.base {
                Some(b) => writeln!(
                    out,
                    "base: omega={} lhs={} rhs={} {}",
                    b.omega,
                    sig6(b.lhs),
                    sig6(b.rhs),
                    pass(b.passes)
                ),
                None => writeln!(out, "base: q^m - 1 too large to factor"),
            }
            .map_err(io_err)?;
            if let Some(mv) = &o.mersenne {
                writeln!(out, "mersenne: 2^m-1 prime={} member={}", mv.applies, mv.member)
                    .map_err(io_err)?;
            }
        }
        Format::Json => json_line(out, &o)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["q", "m", "region_settled", "omega", "lhs", "rhs", "passes"])
                .map_err(csv_err)?;
            let (omega, lhs, rhs, passes) = match &o.base {
                Some(b) => (b.omega.to_string(), b.lhs.to_string(), b.rhs.to_string(), b.passes.to_string()),
                None => Default::default(),
            };
            w.write_record([
                q.to_string(),
                m.to_string(),
                o.region.eliminated.to_string(),
                omega,
                lhs,
                rhs,
                passes,
            ])
            .map_err(csv_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

const SIEVE_HEADER: [&str; 9] = ["q", "m", "primes", "omega_r", "delta", "lambda", "lhs", "rhs", "passes"];

fn join_primes(v: &[u128]) -> String {
    v.iter().map(u128::to_string).collect::<Vec<_>>().join(" ")
}

fn sieve_record(p: &SievePlan) -> [String; 9] {
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
    [
        p.q.to_string(),
        p.m.to_string(),
        join_primes(&p.primes()),
        p.core_count().to_string(),
        p.delta_f64().to_string(),
        opt(p.lambda),
        p.lhs.to_string(),
        opt(p.rhs),
        p.passes.to_string(),
    ]
}

fn sieve_text(p: &SievePlan) -> String {
    format!(
        "q={} m={} primes=[{}] core=[{}] Δ={} Λ={} lhs={} rhs={} {}",
        p.q,
        p.m,
        join_primes(&p.primes()),
        join_primes(&p.r_primes),
        sig6(p.delta_f64()),
        opt6(p.lambda),
        sig6(p.lhs),
        opt6(p.rhs),
        pass(p.passes)
    )
}

fn cmd_sieve(format: Format, q: u64, m: u32, core: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let plan = match core {
        Some(k) => criteria::sieve_plan(q, m, k)?,
        None => criteria::best_sieve(q, m)?,
    };
    match format {
        Format::Text => writeln!(out, "{}", sieve_text(&plan)).map_err(io_err)?,
        Format::Json => json_line(out, &plan)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(SIEVE_HEADER).map_err(csv_err)?;
            w.write_record(sieve_record(&plan)).map_err(csv_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_tables(format: Format, which: Option<u8>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut tables: Vec<(u8, Vec<TableRow>)> = Vec::new();
    if which.unwrap_or(1) == 1 {
        tables.push((1, criteria::table1()?));
    }
    if which.unwrap_or(2) == 2 {
        tables.push((2, criteria::table2()?));
    }
    match format {
        Format::Text => {
            for (id, rows) in &tables {
                writeln!(out, "table {id}").map_err(io_err)?;
                for row in rows {
                    writeln!(out, "{}", sieve_text(&row.plan)).map_err(io_err)?;
                    for e in &row.errata {
                        writeln!(out, "  erratum ({},{}): {e}", row.printed.q, row.printed.m)
                            .map_err(io_err)?;
                    }
                }
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct TableOut<'a> {
                table: u8,
                rows: &'a [TableRow],
            }
            let all: Vec<TableOut> = tables.iter().map(|(t, rows)| TableOut { table: *t, rows }).collect();
            json_line(out, &all)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(SIEVE_HEADER).map_err(csv_err)?;
            for (_, rows) in &tables {
                for row in rows {
                    w.write_record(sieve_record(&row.plan)).map_err(csv_err)?;
                    for e in &row.errata {
                        writeln!(err, "erratum ({},{}): {e}", row.printed.q, row.printed.m)
                            .map_err(io_err)?;
                    }
                }
            }
            w.flush().map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

fn search_options(cli: &Cli) -> Result<SearchOptions> {
    Ok(SearchOptions { workers: workers(cli), guard: verify::guard_from_env()?, ..Default::default() })
}

fn expectation(expect: Option<Expect>, exceptional: bool, member: bool) -> i32 {
    match expect {
        Some(Expect::Member) if !member => EXIT_MISMATCH,
        Some(Expect::Exceptional) if !exceptional => EXIT_MISMATCH,
        _ => EXIT_OK,
    }
}

fn cmd_classify(cli: &Cli, q: u64, m: u32, expect: Option<Expect>, out: &mut dyn Write) -> Result<i32> {
    let modulus = cli.modulus.as_deref().map(parse_coeffs).transpose()?;
    let v = verify::classify(q, m, modulus, &search_options(cli)?)?;
    match cli.format {
        Format::Text => {
            writeln!(out, "q={q} m={m} verdict={} stage={:?}", v.outcome, v.stage).map_err(io_err)?;
            writeln!(out, "{}", v.detail).map_err(io_err)?;
        }
        Format::Json => json_line(out, &v)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["q", "m", "verdict", "stage", "detail"]).map_err(csv_err)?;
            w.write_record([
                q.to_string(),
                m.to_string(),
                v.outcome.to_string(),
                format!("{:?}", v.stage).to_lowercase(),
                v.detail.clone(),
            ])
            .map_err(csv_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(expectation(
        expect,
        v.outcome == verify::Outcome::Exceptional,
        v.outcome == verify::Outcome::Member,
    ))
}

struct SearchArgs<'a> {
    q: u64,
    m: u32,
    coeffs: Option<&'a [String]>,
    beta: Option<&'a str>,
    expect: Option<Expect>,
    allow_inadmissible: bool,
}

fn parse_triple(ctx: &FieldCtx, raw: &[String]) -> Result<(FieldElem, FieldElem, FieldElem)> {
    let parts: Vec<String> = match raw {
        [one] if one.contains(';') => one.split(';').map(str::to_string).collect(),
        [one] if ctx.degree() == 1 => one.split(',').map(str::to_string).collect(),
        _ => raw.to_vec(),
    };
    match parts.as_slice() {
        [a, b, c] => Ok((ctx.parse_elem(a)?, ctx.parse_elem(b)?, ctx.parse_elem(c)?)),
        _ => Err(Error::Parse(format!(
            "expected three coefficients a, b, c, got {}",
            parts.len()
        ))),
    }
}

fn cmd_search(cli: &Cli, args: SearchArgs<'_>, out: &mut dyn Write) -> Result<i32> {
    let ctx = field_for(args.q, args.m, cli.modulus.as_deref())?;
    let triples = match args.coeffs {
        Some(raw) => {
            let (a, b, c) = parse_triple(&ctx, raw)?;
            TripleScope::Single(a, b, c)
        }
        None => TripleScope::All,
    };
    let betas = match args.beta {
        Some(b) => BetaScope::Single(ctx.parse_elem(b)?),
        None => BetaScope::All,
    };
    let opts = SearchOptions {
        triples,
        betas,
        include_inadmissible: args.allow_inadmissible,
        ..search_options(cli)?
    };
    let report = verify::search_pair(&ctx, &opts)?;
    match cli.format {
        Format::Text => {
            writeln!(
                out,
                "q={} m={} status={} triples_checked={} early_exits={} counterexamples={} admissible_counterexample={}",
                report.q,
                report.m,
                report.status,
                report.triples_checked,
                report.early_exits,
                report.counterexamples.len(),
                if report.admissible_counterexample_exists { "yes" } else { "no" }
            )
            .map_err(io_err)?;
            writeln!(out, "modulus={} generator={}", crate::gf::format_coeffs(ctx.modulus()), ctx.generator())
                .map_err(io_err)?;
            for c in &report.counterexamples {
                writeln!(
                    out,
                    "  a={} b={} c={} beta={} admissible={}",
                    c.a, c.b, c.c, c.beta, c.admissible
                )
                .map_err(io_err)?;
            }
        }
        Format::Json => json_line(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["a", "b", "c", "beta", "admissible"]).map_err(csv_err)?;
            for c in &report.counterexamples {
                w.write_record([
                    c.a.to_string(),
                    c.b.to_string(),
                    c.c.to_string(),
                    c.beta.to_string(),
                    c.admissible.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_err)?;
        }
    }
    Ok(expectation(
        args.expect,
        report.status == verify::Status::Exceptional,
        report.status == verify::Status::Member,
    ))
}

fn cmd_charsum(cli: &Cli, q: u64, m: u32, suite: bool, out: &mut dyn Write) -> Result<i32> {
    let ctx = field_for(q, m, cli.modulus.as_deref())?;
    let r: SuiteReport = verify::property_suite_with(&ctx, suite)?;
    match cli.format {
        Format::Text => {
            let lines = [
                format!("q={} m={} modulus={}", r.q, r.m, crate::gf::format_coeffs(ctx.modulus())),
                format!(
                    "sigma_r indicator: {} checks, max deviation {:.3e}, mismatches {}",
                    r.sigma_checks, r.sigma_max_dev, r.sigma_mismatches
                ),
                format!(
                    "gamma_beta indicator: {} checks, max deviation {:.3e}, mismatches {}",
                    r.gamma_checks, r.gamma_max_dev, r.gamma_mismatches
                ),
                format!(
                    "trace fibers: {:?} exact={}",
                    r.fiber_counts, r.fibers_exact
                ),
                format!(
                    "orthogonality: multiplicative {:.3e}, additive {:.3e}",
                    r.mult_orthogonality_max, r.add_orthogonality_max
                ),
            ];
            for l in lines {
                writeln!(out, "{l}").map_err(io_err)?;
            }
            if suite {
                writeln!(
                    out,
                    "weil bound: {} checks, {} violations, max ratio {}",
                    r.weil_checks,
                    r.weil_violations,
                    sig6(r.weil_max_ratio)
                )
                .map_err(io_err)?;
                writeln!(
                    out,
                    "|S| bound: {} checks, {} violations, max ratio {}",
                    r.s_checks,
                    r.s_violations,
                    sig6(r.s_max_ratio)
                )
                .map_err(io_err)?;
            }
            writeln!(out, "{}", pass(r.passes())).map_err(io_err)?;
        }
        Format::Json => json_line(out, &r)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(CsvSuite::from(&r)).map_err(csv_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(if r.passes() { EXIT_OK } else { EXIT_MISMATCH })
}

#[derive(Serialize)]
struct CsvSuite {
    q: u64,
    m: u32,
    sigma_max_dev: f64,
    sigma_mismatches: u64,
    gamma_max_dev: f64,
    gamma_mismatches: u64,
    fibers_exact: bool,
    mult_orthogonality_max: f64,
    add_orthogonality_max: f64,
    weil_checks: u64,
    weil_violations: u64,
    s_checks: u64,
    s_violations: u64,
    passes: bool,
}

impl From<&SuiteReport> for CsvSuite {
    fn from(r: &SuiteReport) -> Self {
        CsvSuite {
            q: r.q,
            m: r.m,
            sigma_max_dev: r.sigma_max_dev,
            sigma_mismatches: r.sigma_mismatches,
            gamma_max_dev: r.gamma_max_dev,
            gamma_mismatches: r.gamma_mismatches,
            fibers_exact: r.fibers_exact,
            mult_orthogonality_max: r.mult_orthogonality_max,
            add_orthogonality_max: r.add_orthogonality_max,
            weil_checks: r.weil_checks,
            weil_violations: r.weil_violations,
            s_checks: r.s_checks,
            s_violations: r.s_violations,
            passes: r.passes(),
        }
    }
}

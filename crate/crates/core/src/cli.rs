//! Command-line front end.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::engine::{eliminate, prove_proposition2, prove_theorem1_on, EngineError, Outcome};
use crate::rules::{RuleCatalog, RuleId};
use crate::scheme::{all_even_schemes, ComplexType, CurveType, NestScheme, SchemeError, SepTag, Sign};
use crate::tables::{figure, TableError, TableFormat};
use crate::viro::{format_real_scheme, parse_real_scheme_with};

pub const EXIT_CLOSED: i32 = 0;
pub const EXIT_OPEN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("bad nest spec {0:?}; expected SIGN:A_PLUS:A_MINUS:TAG such as -:1:1:d")]
    NestSpec(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(name = "nest-prohibitor", version, about = "Restrictions on degree-9 M-curves with three nests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a scheme, optionally deciding one candidate complex type.
    Check {
        /// Scheme in Viro notation, e.g. "<J + 1<2> + 1<2> + 1<20> + 1>".
        scheme: String,
        /// Nest type SIGN:A_PLUS:A_MINUS:TAG, once per nest in order.
        #[arg(long = "nest", num_args = 1, allow_hyphen_values = true)]
        nests: Vec<String>,
        /// Skip the oval-count check.
        #[arg(long)]
        lax: bool,
    },
    /// List three-nest schemes.
    Enumerate {
        /// Only schemes whose nests all have an even number of ovals.
        #[arg(long)]
        even: bool,
        /// Only schemes with this many empty ovals.
        #[arg(long)]
        beta: Option<u32>,
    },
    /// Regenerate one of the term and case tables.
    Tables {
        #[arg(long)]
        figure: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a closure driver.
    Prove {
        #[arg(value_enum)]
        target: Target,
        /// Drop a rule from the catalog (repeatable).
        #[arg(long = "ablate")]
        ablate: Vec<RuleId>,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Inspect the rule catalog.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Theorem1,
    Proposition2,
}

#[derive(Debug, Subcommand)]
pub enum RulesAction {
    List,
}

/// Parses `SIGN:A_PLUS:A_MINUS:TAG`.
pub fn parse_nest_spec(spec: &str) -> Result<ComplexType, CliError> {
    let bad = || CliError::NestSpec(spec.to_string());
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let [nu, plus, minus, tag] = parts[..] else {
        return Err(bad());
    };
    let nu = match nu {
        "-" => Sign::Minus,
        "+" => Sign::Plus,
        _ => return Err(bad()),
    };
    let plus: u32 = plus.parse().map_err(|_| bad())?;
    let minus: u32 = minus.parse().map_err(|_| bad())?;
    let tag = match tag {
        "n" => SepTag::N,
        "s" => SepTag::S,
        "u" => SepTag::U,
        "d" => SepTag::D,
        _ => return Err(bad()),
    };
    Ok(ComplexType::new(NestScheme::new(nu, plus, minus)?, tag)?)
}

fn cmd_check(out: &mut dyn Write, scheme: &str, nests: &[String], lax: bool) -> Result<i32, CliError> {
    let s = parse_real_scheme_with(scheme, !lax)?;
    writeln!(out, "scheme: {}", format_real_scheme(&s))?;
    writeln!(out, "valid: true")?;
    writeln!(out, "nests: 3")?;
    writeln!(out, "alpha: {} {} {}", s.alpha[0], s.alpha[1], s.alpha[2])?;
    writeln!(out, "beta: {}", s.beta)?;
    writeln!(out, "all-even: {}", s.all_even())?;
    if nests.is_empty() {
        return Ok(EXIT_CLOSED);
    }
    let parsed: Vec<ComplexType> = nests.iter().map(|n| parse_nest_spec(n)).collect::<Result<_, _>>()?;
    let nests: [ComplexType; 3] = parsed
        .try_into()
        .map_err(|v: Vec<ComplexType>| SchemeError::Arity(format!("expected 3 --nest values, found {}", v.len())))?;
    let curve = CurveType::without_jump(nests)?;
    let trace = eliminate(&curve, &s)?;
    writeln!(out, "candidate: {curve}")?;
    writeln!(out, "outcome: {}", outcome_word(trace.outcome))?;
    writeln!(out, "branches: {}", trace.branch_count)?;
    let mut by_rule: BTreeMap<RuleId, usize> = BTreeMap::new();
    for b in &trace.branches {
        *by_rule.entry(b.rule_id).or_default() += 1;
    }
    for (rule, n) in by_rule {
        writeln!(out, "  {rule}: {n}")?;
    }
    if let Some(w) = &trace.witness {
        writeln!(out, "witness: {}", serde_json::to_string(&w.ledger)?)?;
    }
    Ok(match trace.outcome {
        Outcome::Eliminated => EXIT_CLOSED,
        Outcome::Survives => EXIT_OPEN,
    })
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Eliminated => "eliminated",
        Outcome::Survives => "survives",
    }
}

fn cmd_enumerate(out: &mut dyn Write, even: bool, beta: Option<u32>) -> Result<i32, CliError> {
    let schemes: Vec<_> = if even {
        all_even_schemes()
    } else {
        crate::scheme::enumerate_three_nest_schemes(|_, _| true)
    };
    let mut count = 0;
    for s in schemes.iter().filter(|s| beta.is_none_or(|b| s.beta == b)) {
        writeln!(out, "{}", format_real_scheme(s))?;
        count += 1;
    }
    writeln!(out, "total: {count}")?;
    Ok(EXIT_CLOSED)
}

fn cmd_tables(out: &mut dyn Write, id: u32, format: Format) -> Result<i32, CliError> {
    let format = match format {
        Format::Text => TableFormat::Text,
        Format::Tsv => TableFormat::Tsv,
    };
    write!(out, "{}", figure(id)?.render(format))?;
    Ok(EXIT_CLOSED)
}

fn write_json<T: serde::Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), CliError> {
    if let Some(p) = path {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn cmd_prove(out: &mut dyn Write, target: Target, ablate: &[RuleId], json: &Option<PathBuf>) -> Result<i32, CliError> {
    match target {
        Target::Theorem1 => {
            let catalog = RuleCatalog::without(ablate);
            let report = prove_theorem1_on(&all_even_schemes(), &catalog);
            write_json(json, &report)?;
            if !report.ablated.is_empty() {
                let names: Vec<&str> = report.ablated.iter().map(|r| r.as_str()).collect();
                writeln!(out, "ablated: {}", names.join(", "))?;
            }
            writeln!(out, "schemes: {}", report.schemes.len())?;
            writeln!(out, "candidates: {}", report.candidate_count)?;
            writeln!(out, "eliminated: {}", report.eliminated_count)?;
            writeln!(out, "excluded: {} ({} new, {} known)", report.excluded_count, report.new_count, report.known_count)?;
            for s in report.schemes.iter().filter(|s| !s.excluded) {
                writeln!(out, "open: {} ({} surviving)", s.scheme, s.surviving.len())?;
                for t in &s.surviving {
                    writeln!(out, "  {}", t.candidate)?;
                }
            }
            writeln!(out, "closed: {}", report.closed())?;
            Ok(if report.closed() { EXIT_CLOSED } else { EXIT_OPEN })
        }
        Target::Proposition2 => {
            let report = prove_proposition2();
            write_json(json, &report)?;
            for row in &report.rows {
                write!(out, "lambda0={} {} E0={}", row.lambda0, row.schemes.join(" "), row.e0)?;
                if let Some(e) = row.e_triangles {
                    write!(out, " E1..E3={},{},{}", e[0], e[1], e[2])?;
                }
                writeln!(out)?;
                for b in &row.branches {
                    let q = b.quadrangle.map(|q| format!("Q{q} empty: ")).unwrap_or_default();
                    writeln!(out, "  {q}{} ({})", b.rule_id, b.evidence.statement)?;
                }
            }
            writeln!(out, "closed: {}", report.closed)?;
            Ok(if report.closed { EXIT_CLOSED } else { EXIT_OPEN })
        }
    }
}

fn cmd_rules(out: &mut dyn Write) -> Result<i32, CliError> {
    for r in RuleCatalog::full().rules() {
        writeln!(out, "{}\t{}\t{}\t{}", r.id, r.citation, r.hypothesis, r.statement)?;
    }
    Ok(EXIT_CLOSED)
}

/// Executes a parsed command, writing the report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { scheme, nests, lax } => cmd_check(out, scheme, nests, *lax),
        Command::Enumerate { even, beta } => cmd_enumerate(out, *even, *beta),
        Command::Tables { figure, format } => cmd_tables(out, *figure, *format),
        Command::Prove { target, ablate, json } => cmd_prove(out, *target, ablate, json),
        Command::Rules { action: RulesAction::List } => cmd_rules(out),
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_CLOSED };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

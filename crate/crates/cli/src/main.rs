//! `toric-severi` command-line frontend.

mod cache;
mod verify;

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toric_severi::coeffs::CoeffContext;
use toric_severi::polygon::PolygonInput;
use toric_severi::series::{b1_b2, d2g2, dg2, disc, g2, log_partition_series, partition_series, RatSeries};
use toric_severi::severi::{report, Method, MethodValue};
use toric_severi::Rational;

use crate::cache::Cache;

#[derive(Parser)]
#[command(name = "toric-severi", version, about = "Severi degrees of toric surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Neither read nor write the template cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// List the templates of a given cogenus with their linear forms.
    Templates {
        #[arg(long)]
        delta: usize,
    },
    /// Print the constants A, L, H, D, C, Ctilde and b for cogenus 1..=delta.
    Coeffs {
        #[arg(long)]
        delta: usize,
    },
    /// Node counts of the polygon read from a JSON file ("-" for stdin).
    Severi {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
    },
    /// Run a self-check suite.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Print a power series to the given order.
    Series {
        #[arg(value_enum)]
        name: SeriesName,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    All,
    Bruteforce,
    Closed,
    Geometric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesName {
    G2,
    Dg2,
    D2g2,
    Disc,
    Partition,
    LogPartition,
    /// `A(t) = exp(-sum 2 A(delta) t^delta)`.
    A,
    /// The compositional inverse of `DG2`.
    G,
    B1,
    B2,
}

#[derive(Serialize)]
pub(crate) struct TemplateRow {
    graph: String,
    edges: Vec<[u64; 3]>,
    delta: usize,
    length: usize,
    mu: u64,
    eps0: bool,
    eps1: bool,
    lambda: Vec<u64>,
    olambda: Vec<u64>,
    #[serde(with = "toric_severi::rational_serde")]
    zeta0: Rational,
    #[serde(with = "toric_severi::rational_serde")]
    zeta1: Rational,
    #[serde(with = "toric_severi::rational_serde")]
    zeta2: Rational,
    #[serde(with = "toric_severi::rational_serde::vec")]
    eta: Vec<Rational>,
}

fn tuple(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

impl TemplateRow {
    pub(crate) fn tsv(&self) -> String {
        [
            self.graph.clone(),
            self.delta.to_string(),
            self.length.to_string(),
            self.mu.to_string(),
            (self.eps0 as u8).to_string(),
            (self.eps1 as u8).to_string(),
            tuple(&self.lambda),
            tuple(&self.olambda),
            self.zeta0.to_string(),
            self.zeta1.to_string(),
            self.zeta2.to_string(),
            self.eta[0].to_string(),
        ]
        .join("\t")
    }
}

pub(crate) fn template_rows(ctx: &CoeffContext, delta: usize) -> Result<Vec<TemplateRow>> {
    if delta == 0 {
        return Ok(Vec::new());
    }
    let data = ctx.templates(delta)?;
    Ok(data
        .iter()
        .map(|t| {
            let g = t.template.graph();
            let len = t.template.length();
            TemplateRow {
                graph: g.to_string(),
                edges: g.triples(),
                delta,
                length: len,
                mu: t.template.multiplicity(),
                eps0: t.template.epsilon0(),
                eps1: t.template.epsilon1(),
                lambda: (1..=len).map(|j| g.lambda(j)).collect(),
                olambda: (1..=len).map(|j| g.olambda(j)).collect(),
                zeta0: t.form.zeta0.clone(),
                zeta1: t.form.zeta1.clone(),
                zeta2: t.form.zeta2.clone(),
                eta: t.form.eta.clone(),
            }
        })
        .collect())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn series(ctx: &CoeffContext, name: SeriesName, order: usize) -> Result<RatSeries> {
    Ok(match name {
        SeriesName::G2 => g2(order),
        SeriesName::Dg2 => dg2(order),
        SeriesName::D2g2 => d2g2(order),
        SeriesName::Disc => disc(order),
        SeriesName::Partition => partition_series(order),
        SeriesName::LogPartition => log_partition_series(order),
        SeriesName::A => ctx.a_series(order)?,
        SeriesName::G => dg2(order).revert()?,
        SeriesName::B1 => b1_b2(ctx, order)?.0,
        SeriesName::B2 => b1_b2(ctx, order)?.1,
    })
}

/// Largest cogenus whose template data a command needs.
fn templates_needed(command: &Command) -> usize {
    match command {
        Command::Templates { delta } | Command::Coeffs { delta } => *delta,
        Command::Severi { delta, method, .. } => {
            if *method == MethodArg::Bruteforce {
                0
            } else {
                *delta
            }
        }
        Command::Verify { order, .. } => (*order).max(2),
        Command::Series { name, order } => match name {
            SeriesName::A | SeriesName::B1 | SeriesName::B2 => *order,
            _ => 0,
        },
    }
}

fn read_polygon(path: &PathBuf) -> Result<PolygonInput> {
    let raw = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&raw).with_context(|| format!("parsing polygon {}", path.display()))
}

enum Outcome {
    Done(String),
    VerificationFailed(String),
}

fn execute(cli: &Cli, ctx: &CoeffContext) -> Result<Outcome> {
    let format = cli.format;
    let text = match &cli.command {
        Command::Templates { delta } => {
            let rows = template_rows(ctx, *delta)?;
            if format == Some(Format::Tsv) {
                let mut out = String::from("graph\tdelta\tlength\tmu\teps0\teps1\tlambda\tolambda\tzeta0\tzeta1\tzeta2\teta0\n");
                for r in &rows {
                    writeln!(out, "{}", r.tsv())?;
                }
                out
            } else {
                json(&rows)?
            }
        }
        Command::Coeffs { delta } => {
            let tables = (1..=*delta).map(|d| ctx.table(d)).collect::<toric_severi::Result<Vec<_>>>()?;
            if format == Some(Format::Tsv) {
                let mut out = String::from("delta\tA\tL\tH\tD\tC\tCtilde\tb\n");
                for t in &tables {
                    let b: Vec<String> = t.b.iter().map(Rational::to_string).collect();
                    writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}", t.delta, t.a, t.l, t.h, t.d, t.c, t.ctilde, b.join(","))?;
                }
                out
            } else {
                json(&tables)?
            }
        }
        Command::Severi { polygon, delta, method } => {
            let p = read_polygon(polygon)?.build().context("invalid polygon")?;
            let methods: Vec<Method> = match method {
                MethodArg::All => Method::ALL.to_vec(),
                MethodArg::Bruteforce => vec![Method::Bruteforce],
                MethodArg::Closed => vec![Method::Closed],
                MethodArg::Geometric => vec![Method::Geometric],
            };
            let r = report(ctx, &p, *delta, &methods)?;
            let text = if format == Some(Format::Tsv) {
                let mut out = String::from("delta\tmethod\tstatus\tN\tQ\n");
                for row in &r.rows {
                    for (m, v) in &row.values {
                        match v {
                            MethodValue::Ok { n, q } => writeln!(out, "{}\t{}\tok\t{n}\t{q}", row.delta, m.name())?,
                            MethodValue::PreconditionUnmet { .. } => {
                                writeln!(out, "{}\t{}\tprecondition_unmet\t\t", row.delta, m.name())?
                            }
                        }
                    }
                }
                out
            } else {
                json(&r)?
            };
            if !r.agree {
                return Ok(Outcome::VerificationFailed(text));
            }
            text
        }
        Command::Verify { suite, order } => {
            let findings = verify::run(ctx, *suite, *order)?;
            let failed = findings.iter().any(|f| !f.failures.is_empty());
            let text = if format == Some(Format::Json) {
                #[derive(Serialize)]
                struct Row<'a> {
                    suite: &'a str,
                    checks: usize,
                    pass: bool,
                    failures: &'a [String],
                }
                let rows: Vec<Row> = findings
                    .iter()
                    .map(|f| Row { suite: f.suite, checks: f.checks, pass: f.failures.is_empty(), failures: &f.failures })
                    .collect();
                json(&rows)?
            } else {
                let mut out = String::new();
                for f in &findings {
                    let verdict = if f.failures.is_empty() { "PASS" } else { "FAIL" };
                    writeln!(out, "{}\t{verdict}\t{} checks", f.suite, f.checks)?;
                    for msg in &f.failures {
                        writeln!(out, "  {msg}")?;
                    }
                }
                out
            };
            if failed {
                return Ok(Outcome::VerificationFailed(text));
            }
            text
        }
        Command::Series { name, order } => {
            let s = series(ctx, *name, *order)?;
            let coeffs: Vec<String> = s.coeffs().iter().map(Rational::to_string).collect();
            match format {
                Some(Format::Json) => json(&coeffs)?,
                Some(Format::Tsv) => coeffs.iter().enumerate().map(|(n, c)| format!("{n}\t{c}\n")).collect(),
                None => coeffs.join(", ") + "\n",
            }
        }
    };
    Ok(Outcome::Done(text))
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| anyhow!(e))?;
    }
    let ctx = CoeffContext::global();
    let cache = Cache::new((!cli.no_cache).then(cache::default_dir));
    cache.warm(ctx, templates_needed(&cli.command))?;
    match execute(cli, ctx)? {
        Outcome::Done(text) => emit(cli, &text).map(|_| true),
        Outcome::VerificationFailed(text) => emit(cli, &text).map(|_| false),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

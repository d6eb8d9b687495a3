//! Subcommand definitions and handlers. Every handler writes its payload to
//! the given sink; progress and diagnostics go to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cospec::asymptotics::{
    estimate, half_threshold, mate_fraction_asymptote, AsymptoticEstimate, DEFAULT_PRECISION, DEFAULT_TRUNCATION,
};
use cospec::cotree::parse_cotree;
use cospec::enumeration::{count_avoiding, count_cographs, count_hierarchies, Avoid};
use cospec::graph::{all_graphs, emit_graph6};
use cospec::mates::{
    check_mate, construct_mate, dgs_survey_with_progress, discover_base_pair, find_collision_classes, BasePair,
    MatesError,
};
use cospec::real::{DecimalMode, Real};
use cospec::spectral::SpectrumKind;
use cospec::threshold::threshold_survey;
use cospec::BigReal;

use crate::checks::{run_check, Context, CHECK_IDS};
use crate::corpus::{read_graph6_file, write_graph6};
use crate::failure::{ChecksFailed, UsageError};

const SCHEMA_VERSION: u32 = 1;

fn schema(cmd: &str) -> String {
    format!("cospec/{cmd}/v{SCHEMA_VERSION}")
}

#[derive(Parser, Debug)]
#[command(name = "cospec", version, about = "Spectral determination experiments for cographs")]
pub struct Cli {
    /// Report format; CSV is available for tables.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the payload here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Suppress progress on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Adjacency,
    #[value(alias = "signless-laplacian")]
    Q,
}

impl From<KindArg> for SpectrumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Adjacency => SpectrumKind::Adjacency,
            KindArg::Q => SpectrumKind::SignlessLaplacian,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Cographs,
    Threshold,
    Corpus,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hierarchy, pattern-avoiding hierarchy, or cograph counts for orders 1..=n.
    Count(CountArgs),
    /// Radius of convergence and growth constant of the counting series.
    Asym(AsymArgs),
    /// Write every graph of one order as graph6.
    Corpus(CorpusArgs),
    /// Find the order-9 base pair in a corpus of all order-9 graphs.
    Discover(DiscoverArgs),
    /// Build a generalized cospectral mate of a cotree's cograph.
    Mate(MateArgs),
    /// Spectral collisions within a family of graphs.
    Survey(SurveyArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=5000))]
    pub n: u32,
    /// Count hierarchies avoiding a pattern of this size.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..), conflicts_with = "cographs")]
    pub avoid: Option<u32>,
    /// Count cographs instead of hierarchies.
    #[arg(long)]
    pub cographs: bool,
}

#[derive(Args, Debug)]
pub struct AsymArgs {
    /// Size of the avoided pattern; unrestricted when absent.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub m: Option<u32>,
    /// Working precision in bits.
    #[arg(long, default_value_t = DEFAULT_PRECISION as u32, value_parser = clap::value_parser!(u32).range(64..=8192))]
    pub precision: u32,
    /// Number of exact coefficients N.
    #[arg(long, short = 'N', default_value_t = DEFAULT_TRUNCATION as u32, value_parser = clap::value_parser!(u32).range(16..=20000))]
    pub truncation: u32,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10))]
    pub n: u32,
}

#[derive(Args, Debug)]
pub struct DiscoverArgs {
    /// graph6 file holding every graph of order 9.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Base pair cache; replayed when present.
    #[arg(long)]
    pub cache: PathBuf,
    /// Where to write the full collision report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Rescan the corpus even if the cache exists.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct MateArgs {
    /// Cotree in the text grammar, e.g. `U(. J(. .))`.
    #[arg(long)]
    pub cotree: String,
    /// Base pair cache written by `discover`.
    #[arg(long)]
    pub cache: PathBuf,
}

#[derive(Args, Debug)]
pub struct SurveyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: Option<u32>,
    /// First order of a threshold table; defaults to `n`.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub from: Option<u32>,
    #[arg(long, value_enum, default_value_t = KindArg::Adjacency)]
    pub kind: KindArg,
    /// graph6 corpus for the `corpus` family.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// graph6 file of all order-9 graphs; generated when absent.
    #[arg(long, env = "COSPEC_ORDER9_CORPUS")]
    pub corpus9: Option<PathBuf>,
    /// Criteria to run; all when absent.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=12))]
    pub only: Vec<u8>,
}

/// Where a handler sends its payload.
pub struct Sink<'a> {
    pub out: &'a mut dyn Write,
    pub format: Format,
    pub quiet: bool,
}

impl Sink<'_> {
    fn json(&mut self, value: &Value) -> Result<()> {
        serde_json::to_writer_pretty(&mut *self.out, value)?;
        writeln!(self.out)?;
        Ok(())
    }

    fn csv(&mut self, cmd: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        writeln!(self.out, "# {}", schema(cmd))?;
        writeln!(self.out, "{}", header.join(","))?;
        for r in rows {
            writeln!(self.out, "{}", r.join(","))?;
        }
        Ok(())
    }

    fn json_only(&self, cmd: &str) -> Result<()> {
        if self.format == Format::Csv {
            return Err(UsageError::Invalid(format!("`{cmd}` has no CSV output")).into());
        }
        Ok(())
    }

    fn progress(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn tagged(cmd: &str, payload: impl Serialize) -> Result<Value> {
    let mut v = serde_json::to_value(payload)?;
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), Value::String(schema(cmd)));
    }
    Ok(v)
}

pub fn dispatch(command: Command, sink: &mut Sink) -> Result<()> {
    match command {
        Command::Count(a) => cmd_count(a, sink),
        Command::Asym(a) => cmd_asym(a, sink),
        Command::Corpus(a) => cmd_corpus(a, sink),
        Command::Discover(a) => cmd_discover(a, sink),
        Command::Mate(a) => cmd_mate(a, sink),
        Command::Survey(a) => cmd_survey(a, sink),
        Command::Verify(a) => cmd_verify(a, sink),
    }
}

fn cmd_count(a: CountArgs, sink: &mut Sink) -> Result<()> {
    let n = a.n as usize;
    let (sequence, values): (&str, Vec<String>) = if a.cographs {
        ("cographs", (1..=n).map(|k| count_cographs(k).to_string()).collect())
    } else if let Some(m) = a.avoid {
        ("avoiding", count_avoiding(n, m as usize)?.coeffs().iter().map(ToString::to_string).collect())
    } else {
        ("hierarchies", count_hierarchies(n).coeffs().iter().map(ToString::to_string).collect())
    };
    match sink.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                values.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), v.clone()]).collect();
            sink.csv("count", &["n", "value"], &rows)
        }
        Format::Json => {
            let rows: Vec<Value> = values.iter().enumerate().map(|(i, v)| json!({"n": i + 1, "value": v})).collect();
            sink.json(&json!({
                "schema": schema("count"),
                "sequence": sequence,
                "m": a.avoid,
                "n": n,
                "values": rows,
            }))
        }
    }
}

/// Decimal digits carried by `bits` of binary precision.
fn decimals_for(bits: usize) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

fn estimate_json(e: &AsymptoticEstimate<BigReal>) -> Value {
    let d = decimals_for(e.precision);
    let fixed = |x: &BigReal| x.to_fixed(d, DecimalMode::Round);
    let sci = |x: &BigReal| x.to_sci_string();
    json!({
        "m": match e.avoid { Avoid::Unrestricted => None, Avoid::Size(m) => Some(m) },
        "rho": fixed(&e.rho),
        "rho_error": sci(&e.rho_error),
        "C": fixed(&e.c),
        "a1": fixed(&e.a1),
        "b": fixed(&e.b),
        "F_x": fixed(&e.f_x),
        "F_yy": fixed(&e.f_yy),
        "N": e.truncation,
        "precision": e.precision,
        "residuals": {
            "implicit": sci(&e.residuals.implicit),
            "F_yy_minus_two": sci(&e.residuals.f_yy_minus_two),
            "shifted_sum_bound": sci(&e.residuals.shifted_sum_bound),
            "half_value_discrepancy": sci(&e.residuals.half_value_discrepancy),
            "fitted_constant": fixed(&e.residuals.fitted_constant),
        },
    })
}

fn cmd_asym(a: AsymArgs, sink: &mut Sink) -> Result<()> {
    sink.json_only("asym")?;
    let (n, prec) = (a.truncation as usize, a.precision as usize);
    let unrestricted = estimate::<BigReal>(Avoid::Unrestricted, n, prec)?;
    let mut out = estimate_json(&unrestricted);
    if let Some(m) = a.m {
        let restricted = estimate::<BigReal>(Avoid::Size(m as usize), n, prec)?;
        let frac = mate_fraction_asymptote(&restricted, &unrestricted);
        let half = BigReal::from_f64(0.5, prec);
        let threshold = half_threshold(&frac.ratio_base, &half)?;
        let d = decimals_for(prec);
        out = estimate_json(&restricted);
        out["unrestricted"] = estimate_json(&unrestricted);
        out["ratio"] = Value::String(frac.ratio_base.to_fixed(d, DecimalMode::Round));
        out["coeff_ratio"] = Value::String(frac.coeff.to_fixed(d, DecimalMode::Round));
        out["half_threshold"] = json!(threshold);
    }
    out["schema"] = Value::String(schema("asym"));
    sink.json(&out)
}

fn cmd_corpus(a: CorpusArgs, sink: &mut Sink) -> Result<()> {
    let graphs = all_graphs(a.n as usize)?;
    sink.progress(&format!("{} graphs of order {}", graphs.len(), a.n));
    write_graph6(&mut *sink.out, &graphs)
}

fn read_cache(path: &Path) -> Result<BasePair> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read cache {}", path.display()))?;
    Ok(BasePair::from_cache_text(&text)?)
}

fn cmd_discover(a: DiscoverArgs, sink: &mut Sink) -> Result<()> {
    sink.json_only("discover")?;
    if a.cache.exists() && !a.force {
        let base = read_cache(&a.cache)?;
        return sink.json(&json!({
            "schema": schema("discover"),
            "replayed": true,
            "base_pair": base.record()?,
        }));
    }
    let path = a.corpus.as_ref().ok_or_else(|| UsageError::Invalid("no cache found; --corpus is required".into()))?;
    let started = Instant::now();
    let graphs = read_graph6_file(path)?;
    let scanned = graphs.len();
    sink.progress(&format!("read {scanned} graphs"));
    let d = discover_base_pair(graphs)?;
    sink.progress(&format!("scanned in {:.1}s", started.elapsed().as_secs_f64()));
    fs::write(&a.cache, d.base.to_cache_text()?).with_context(|| format!("cannot write {}", a.cache.display()))?;
    if let Some(report) = &a.report {
        let body = serde_json::to_string_pretty(&tagged("discover-report", &d)?)?;
        fs::write(report, body + "\n").with_context(|| format!("cannot write {}", report.display()))?;
    }
    sink.json(&json!({
        "schema": schema("discover"),
        "replayed": false,
        "scanned": scanned,
        "base_pair": d.base_pair,
        "base_class": d.base_class,
        "cograph_orbits": d.cograph_orbits,
        "collision_classes": d.report.classes.len(),
        "complement_orbits": d.report.complement_orbits,
    }))
}

fn cmd_mate(a: MateArgs, sink: &mut Sink) -> Result<()> {
    sink.json_only("mate")?;
    let base = read_cache(&a.cache)?;
    let t = parse_cotree(&a.cotree)?;
    let g = t.realize();
    let mate = construct_mate(&t, &base)?;
    let check = check_mate(&g, &mate, SpectrumKind::Adjacency)?;
    if !check.is_valid_mate() {
        anyhow::bail!("constructed graph failed verification: {check:?}");
    }
    sink.json(&json!({
        "schema": schema("mate"),
        "cotree": t.canonical_form(),
        "order": g.order(),
        "graph": emit_graph6(&g)?,
        "mate": emit_graph6(&mate)?,
        "verification": check,
    }))
}

fn cmd_survey(a: SurveyArgs, sink: &mut Sink) -> Result<()> {
    let kind = SpectrumKind::from(a.kind);
    let need_n = || a.n.map(|n| n as usize).ok_or_else(|| UsageError::Invalid("--n is required".into()));
    match a.family {
        Family::Cographs => {
            let n = need_n()?;
            let last = Mutex::new(0usize);
            let quiet = sink.quiet;
            let progress = |done: usize, total: usize| {
                let pct = 100 * done / total.max(1);
                let mut last = last.lock().expect("progress lock");
                if !quiet && pct >= *last + 10 {
                    *last = pct;
                    eprintln!("survey: {pct}%");
                }
            };
            let s = dgs_survey_with_progress(n, kind, &progress)?;
            match sink.format {
                Format::Csv => {
                    let row = vec![
                        n.to_string(),
                        kind.tag().to_string(),
                        s.total.to_string(),
                        s.with_mate_in_family.to_string(),
                        s.report.classes.len().to_string(),
                        s.report.complement_orbits.to_string(),
                    ];
                    sink.csv("survey", &["n", "kind", "total", "with_mate", "classes", "complement_orbits"], &[row])
                }
                Format::Json => {
                    let mut v = tagged("survey", &s)?;
                    v["family"] = json!("cographs");
                    sink.json(&v)
                }
            }
        }
        Family::Threshold => {
            let n = need_n()?;
            let from = a.from.map_or(n, |f| f as usize);
            if from > n {
                return Err(UsageError::Invalid("--from exceeds --n".into()).into());
            }
            let rows = (from..=n).map(|k| threshold_survey(k, kind)).collect::<Result<Vec<_>, _>>()?;
            match sink.format {
                Format::Csv => {
                    let table: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.order.to_string(),
                                r.total.to_string(),
                                r.with_mate.to_string(),
                                r.fraction.to_string(),
                            ]
                        })
                        .collect();
                    sink.csv("survey", &["n", "total", "with_mate", "fraction"], &table)
                }
                Format::Json => sink.json(&json!({
                    "schema": schema("survey"),
                    "family": "threshold",
                    "kind": kind,
                    "rows": rows,
                })),
            }
        }
        Family::Corpus => {
            sink.json_only("survey --family corpus")?;
            let path = a.corpus.as_ref().ok_or_else(|| UsageError::Invalid("--corpus is required".into()))?;
            let graphs = read_graph6_file(path)?;
            if let (Some(n), Some(g)) = (a.n, graphs.first()) {
                if g.order() != n as usize {
                    return Err(MatesError::OrderMismatch { index: 0, expected: n as usize, found: g.order() }.into());
                }
            }
            let mut v = tagged("survey", find_collision_classes(graphs, kind)?)?;
            v["family"] = json!("corpus");
            sink.json(&v)
        }
    }
}

fn cmd_verify(a: VerifyArgs, sink: &mut Sink) -> Result<()> {
    sink.json_only("verify")?;
    let ctx = Context::new(a.corpus9);
    let ids: Vec<u8> = if a.only.is_empty() { CHECK_IDS.to_vec() } else { a.only };
    let mut results = Vec::new();
    for id in ids {
        let outcome = run_check(&ctx, id);
        sink.progress(&outcome.line());
        results.push(outcome);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    sink.json(&json!({
        "schema": schema("verify"),
        "passed": failed == 0,
        "results": results,
    }))?;
    if failed > 0 {
        return Err(ChecksFailed { failed }.into());
    }
    Ok(())
}

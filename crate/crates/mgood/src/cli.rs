//! The `mgood` command line. One verb per invocation; usage errors exit
//! with 2 and domain errors with 1.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mgood_core::nice::{extension_findings, extension_tables, pattern_report, sequence, Sequence};
use mgood_core::notation::parse_parts;
use mgood_core::search::{self, SearchBudget, Status, Uniqueness};
use mgood_core::{
    classify, construct_2good, construct_3good, enumerate_nice, render, restore_from_triplets, GoodPartition, Instance,
    TripletSet,
};

use crate::cache::Cache;
use crate::clock::InstantClock;
use crate::dto::{
    CertificateDto, ClassificationDto, ConstructionDto, ExtensionRowDto, FindingDto, PartitionDto, PatternDto,
};
use crate::formats;
use crate::harness::{self, Budget, Campaign, CampaignReport, Question};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "mgood", version, about = "Construct, search and verify m-good partitions of {1..n}")]
struct Cli {
    /// Part-size bound and power base.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
    m: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Wall-clock limit per search, in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    /// Node limit per search.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Worker threads for campaigns (0: one per CPU).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Result cache for campaigns.
    #[arg(long, global = true, env = crate::cache::CACHE_ENV)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a partition of [n] with its reduction trace.
    Construct { n: u64 },
    /// Check a partition written as `(1+2)+(3)+...`; `-` reads stdin.
    Verify { n: u64, partition: String },
    /// Count every partition of [n].
    Count { n: u64 },
    /// List partitions of [n] in search order.
    Enumerate {
        n: u64,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Decide whether [n] has exactly one partition.
    Unique { n: u64 },
    /// Structural class of n.
    Classify { n: u64 },
    /// 3-nice k below a limit with their certificates.
    Nice {
        #[arg(long, default_value_t = 123)]
        limit: u64,
        /// Emit an OEIS b-file of the k values instead.
        #[arg(long)]
        bfile: bool,
    },
    /// Terms of the d, e and f sequences.
    Sequences {
        /// One of d, e, f; all three when omitted.
        name: Option<String>,
        #[arg(long, default_value_t = 6)]
        count: usize,
    },
    /// Layout checks on the nice k.
    Patterns {
        #[arg(long, default_value_t = 123)]
        limit: u64,
    },
    /// Windows of length 6a + 2 for k = a + (3^b - 1) / 2.
    Tables {
        #[arg(long, default_value_t = 6)]
        a_max: u64,
        #[arg(long, default_value_t = 6)]
        b_max: u32,
    },
    /// Complete a set of triplets to a 3-good partition of [n].
    Restore { n: u64, triplets: String },
    /// Answer one question for every n in a range.
    Campaign {
        #[arg(value_enum)]
        question: CampaignQuestion,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CampaignQuestion {
    Exists,
    Unique,
    Counts,
}

/// A failure that is not a usage error.
#[derive(Debug)]
struct DomainError {
    kind: &'static str,
    message: String,
}

impl DomainError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        DomainError { kind, message: message.into() }
    }
}

impl From<mgood_core::Error> for DomainError {
    fn from(e: mgood_core::Error) -> Self {
        let kind = match e {
            mgood_core::Error::NoCompletion(_) => "no_completion",
            mgood_core::Error::Syntax { .. } => "syntax",
            mgood_core::Error::Invalid(_) => "invalid",
            mgood_core::Error::BadBound(_) | mgood_core::Error::BadBase(_) => "bad_instance",
            _ => "domain",
        };
        DomainError { kind, message: e.to_string() }
    }
}

impl From<io::Error> for DomainError {
    fn from(e: io::Error) -> Self {
        DomainError::new("io", e.to_string())
    }
}

impl From<crate::cache::CacheError> for DomainError {
    fn from(e: crate::cache::CacheError) -> Self {
        DomainError::new("cache", e.to_string())
    }
}

type Outcome = Result<(), DomainError>;

/// Parses `args` (program name first) and runs the verb.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = match cli.format {
                Format::Json => writeln!(err, "{}", serde_json::json!({ "error": e.kind, "message": e.message })),
                _ => writeln!(err, "error ({}): {}", e.kind, e.message),
            };
            1
        }
    }
}

fn budget(cli: &Cli) -> SearchBudget {
    let mut b = SearchBudget::UNLIMITED;
    if let Some(n) = cli.budget_nodes {
        b = SearchBudget::nodes(n);
    }
    if let Some(ms) = cli.budget_ms {
        b = b.with_time_limit(Duration::from_millis(ms));
    }
    b
}

fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("dtos serialize"))?;
    Ok(())
}

fn csv_rows(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io::Error::from)?;
    for r in rows {
        w.write_record(r).map_err(io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

fn budget_error(nodes: u64) -> DomainError {
    DomainError::new("budget_exceeded", format!("search stopped after {nodes} nodes"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let m = cli.m;
    let clock = InstantClock::start();
    match &cli.command {
        Command::Construct { n } => {
            let c = match m {
                2 => construct_2good(*n)?,
                3 => construct_3good(*n)?
                    .ok_or_else(|| DomainError::new("no_construction", format!("no construction reaches n = {n}")))?,
                _ => return Err(DomainError::new("unsupported", "construct supports m = 2 and m = 3; use enumerate")),
            };
            match cli.format {
                Format::Text => writeln!(out, "{}", render(&c.partition))?,
                Format::Json => json(out, &ConstructionDto::from(&c))?,
                Format::Csv => {
                    let rule = c.trace.steps.first().map_or("", |s| s.rule.name());
                    csv_rows(
                        out,
                        &["n", "m", "rule", "partition"],
                        &[vec![n.to_string(), m.to_string(), rule.to_string(), render(&c.partition)]],
                    )?
                }
            }
        }
        Command::Verify { n, partition } => {
            let text = if partition == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            } else {
                partition.clone()
            };
            let parts = parse_parts(text.trim())?;
            let inst = Instance::new(*n, m)?;
            match GoodPartition::new(inst, parts) {
                Ok(p) => match cli.format {
                    Format::Json => json(
                        out,
                        &serde_json::json!({ "n": n, "m": m, "valid": true, "partition": PartitionDto::from(&p) }),
                    )?,
                    Format::Csv => {
                        csv_rows(out, &["n", "m", "valid"], &[vec![n.to_string(), m.to_string(), "true".into()]])?
                    }
                    Format::Text => writeln!(out, "valid")?,
                },
                Err(v) => {
                    for x in &v {
                        writeln!(err, "{x}")?;
                    }
                    return Err(DomainError::new("invalid", format!("{} violation(s)", v.len())));
                }
            }
        }
        Command::Count { n } => {
            let o = search::count(Instance::new(*n, m)?, budget(cli), &clock)?;
            let count = o.count.ok_or_else(|| budget_error(o.nodes))?;
            match cli.format {
                Format::Text => writeln!(out, "{count}")?,
                Format::Json => json(out, &serde_json::json!({ "n": n, "m": m, "count": count, "nodes": o.nodes }))?,
                Format::Csv => {
                    csv_rows(out, &["n", "m", "count"], &[vec![n.to_string(), m.to_string(), count.to_string()]])?
                }
            }
        }
        Command::Enumerate { n, limit } => {
            let o = search::enumerate(Instance::new(*n, m)?, budget(cli), &clock, *limit)?;
            if o.status == Status::BudgetExceeded && o.witnesses.is_empty() {
                return Err(budget_error(o.nodes));
            }
            match cli.format {
                Format::Text => {
                    for w in &o.witnesses {
                        writeln!(out, "{}", render(w))?;
                    }
                }
                Format::Json => json(out, &o.witnesses.iter().map(PartitionDto::from).collect::<Vec<_>>())?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = o
                        .witnesses
                        .iter()
                        .enumerate()
                        .map(|(i, w)| vec![n.to_string(), m.to_string(), (i + 1).to_string(), render(w)])
                        .collect();
                    csv_rows(out, &["n", "m", "index", "partition"], &rows)?
                }
            }
        }
        Command::Unique { n } => {
            let (verdict, o) = search::is_unique(Instance::new(*n, m)?, budget(cli), &clock)?;
            let (word, witness) = match &verdict {
                Uniqueness::Unique(w) => ("unique", Some(render(w))),
                Uniqueness::Multiple => ("multiple", None),
                Uniqueness::None => ("none", None),
                Uniqueness::BudgetExceeded => return Err(budget_error(o.nodes)),
            };
            match cli.format {
                Format::Text => match &witness {
                    Some(w) => writeln!(out, "{word} {w}")?,
                    None => writeln!(out, "{word}")?,
                },
                Format::Json => json(
                    out,
                    &serde_json::json!({ "n": n, "m": m, "verdict": word, "witness": witness, "nodes": o.nodes }),
                )?,
                Format::Csv => csv_rows(
                    out,
                    &["n", "m", "verdict", "witness"],
                    &[vec![n.to_string(), m.to_string(), word.into(), witness.unwrap_or_default()]],
                )?,
            }
        }
        Command::Classify { n } => {
            if *n == 0 {
                return Err(DomainError::new("bad_instance", "classify needs n >= 1"));
            }
            let c = ClassificationDto::from(&classify(*n));
            match cli.format {
                Format::Text => {
                    let s = c.s.map(|s| format!(" s={s}")).unwrap_or_default();
                    let flag = if c.within_theorem_frontier { " within_theorem_frontier" } else { "" };
                    writeln!(out, "{} {} t={} k={}{s}{flag}", c.n, c.class, c.t, c.k)?
                }
                Format::Json => json(out, &c)?,
                Format::Csv => csv_rows(
                    out,
                    &["n", "class", "t", "k", "s", "within_theorem_frontier"],
                    &[vec![
                        c.n.to_string(),
                        c.class.clone(),
                        c.t.to_string(),
                        c.k.to_string(),
                        c.s.map(|s| s.to_string()).unwrap_or_default(),
                        c.within_theorem_frontier.to_string(),
                    ]],
                )?,
            }
        }
        Command::Nice { limit, bfile } => {
            let rows = enumerate_nice(*limit);
            if *bfile {
                write!(out, "{}", formats::nice_bfile(&rows))?;
                return Ok(());
            }
            match cli.format {
                Format::Text => write!(out, "{}", formats::nice_text(&rows))?,
                Format::Csv => formats::nice_csv(&rows, out)?,
                Format::Json => {
                    let certs: Vec<CertificateDto> = rows.iter().flat_map(|(_, c)| c.iter().map(Into::into)).collect();
                    json(out, &certs)?
                }
            }
        }
        Command::Sequences { name, count } => {
            let which: Vec<Sequence> = match name {
                Some(s) => vec![Sequence::from_name(s)
                    .ok_or_else(|| DomainError::new("unknown_sequence", format!("{s} is not one of d, e, f")))?],
                None => vec![Sequence::D, Sequence::E, Sequence::F],
            };
            let values: Vec<(&str, Vec<i64>)> = which.iter().map(|&s| (s.name(), sequence(s, *count))).collect();
            match cli.format {
                Format::Text => {
                    for (name, v) in &values {
                        let terms: Vec<String> = v.iter().map(i64::to_string).collect();
                        writeln!(out, "{name}: {}", terms.join(", "))?;
                    }
                }
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> =
                        values.iter().map(|(k, v)| (k.to_string(), serde_json::json!(v))).collect();
                    json(out, &map)?
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = values
                        .iter()
                        .flat_map(|(name, v)| {
                            v.iter().enumerate().map(move |(i, x)| vec![name.to_string(), i.to_string(), x.to_string()])
                        })
                        .collect();
                    csv_rows(out, &["sequence", "index", "value"], &rows)?
                }
            }
        }
        Command::Patterns { limit } => {
            let r = PatternDto::from(&pattern_report(*limit));
            match cli.format {
                Format::Json => json(out, &r)?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = r
                        .findings
                        .iter()
                        .map(|f| vec![f.name.clone(), f.holds.to_string(), f.detail.clone()])
                        .collect();
                    csv_rows(out, &["finding", "holds", "detail"], &rows)?
                }
                Format::Text => {
                    let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                    writeln!(out, "nice: {}", list(&r.nice))?;
                    writeln!(out, "double certificates: {}", list(&r.double_certificates))?;
                    writeln!(out, "outside the pattern: {}", list(&r.outside))?;
                    writeln!(out, "gaps: {}", list(&r.gaps))?;
                    writeln!(out, "gap levels: {}", list(&r.gap_levels))?;
                    let q: Vec<String> = r.length_quotients.iter().map(i64::to_string).collect();
                    writeln!(out, "length quotients: {}", q.join(" "))?;
                    for f in &r.findings {
                        let tail = if f.holds { String::new() } else { format!(" ({})", f.detail) };
                        writeln!(out, "{}: {}{tail}", f.name, if f.holds { "holds" } else { "fails" })?;
                    }
                }
            }
        }
        Command::Tables { a_max, b_max } => {
            let rows = extension_tables(*a_max, *b_max);
            let findings = extension_findings(&rows);
            match cli.format {
                Format::Text => {
                    write!(out, "{}", formats::extension_text(&rows))?;
                    for f in &findings {
                        writeln!(out, "{}: {}", f.name, if f.holds { "holds" } else { "fails" })?;
                    }
                }
                Format::Csv => formats::extension_csv(&rows, out)?,
                Format::Json => json(
                    out,
                    &serde_json::json!({
                        "rows": rows.iter().map(ExtensionRowDto::from).collect::<Vec<_>>(),
                        "findings": findings.iter().map(FindingDto::from).collect::<Vec<_>>(),
                    }),
                )?,
            }
        }
        Command::Restore { n, triplets } => {
            if m != 3 {
                return Err(DomainError::new("unsupported", "restore works for m = 3"));
            }
            let ts = TripletSet::new(*n, parse_parts(triplets.trim())?)?;
            let p = restore_from_triplets(&ts)?;
            match cli.format {
                Format::Text => writeln!(out, "{}", render(&p))?,
                Format::Json => json(out, &PartitionDto::from(&p))?,
                Format::Csv => {
                    csv_rows(out, &["n", "m", "partition"], &[vec![n.to_string(), m.to_string(), render(&p)]])?
                }
            }
        }
        Command::Campaign { question, from, to } => {
            let question = match question {
                CampaignQuestion::Exists => Question::Exists,
                CampaignQuestion::Unique => Question::Unique,
                CampaignQuestion::Counts => Question::Count,
            };
            if from > to || *from == 0 {
                return Err(DomainError::new("bad_range", format!("empty or invalid range {from}..={to}")));
            }
            let mut budget = Budget::default_for(question);
            if cli.budget_ms.is_some() {
                budget.ms = cli.budget_ms;
            }
            if cli.budget_nodes.is_some() {
                budget.nodes = cli.budget_nodes;
            }
            let campaign = Campaign { m, question, budget, jobs: cli.jobs };
            let mut cache = cli.cache.as_ref().map(Cache::open).transpose()?;
            let ns: Vec<u64> = (*from..=*to).collect();
            let report = harness::run(&campaign, &ns, cache.as_mut())?;
            write_report(cli.format, &report, out)?;
            let bad = report.contradictions();
            if !bad.is_empty() {
                let ns: Vec<String> = bad.iter().map(|r| r.n.to_string()).collect();
                return Err(DomainError::new(
                    "contradiction",
                    format!("{} record(s) disagree with published results: n = {}", bad.len(), ns.join(", ")),
                ));
            }
        }
    }
    Ok(())
}

fn write_report(format: Format, r: &CampaignReport, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Json => writeln!(out, "{}", r.to_json())?,
        Format::Csv => r.write_csv(out)?,
        Format::Text => {
            writeln!(
                out,
                "{:>6}  {:<15}  {:<15}  {:<11}  {:>8}  {:>10}  {:>8}",
                "n", "class", "status", "method", "count", "nodes", "ms"
            )?;
            for x in &r.records {
                writeln!(
                    out,
                    "{:>6}  {:<15}  {:<15}  {:<11}  {:>8}  {:>10}  {:>8}",
                    x.n,
                    x.class.as_deref().unwrap_or("-"),
                    x.status.name(),
                    x.method.name(),
                    x.count.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                    x.nodes,
                    x.elapsed_ms
                )?;
            }
            writeln!(
                out,
                "{} record(s), {} from cache, {} budget-exceeded, {} contradiction(s)",
                r.records.len(),
                r.cache_hits,
                r.records.iter().filter(|x| x.status == harness::Verdict::BudgetExceeded).count(),
                r.contradictions().len()
            )?;
        }
    }
    Ok(())
}

//! Existence, uniqueness and count campaigns over ranges of `n`.
//!
//! Each `n` is answered independently, in parallel when asked, and the
//! report is assembled in ascending `n`. Definitive answers go to the cache;
//! budget-exceeded ones do not, so a rerun with a larger budget retries them.

use std::io::{self, Write};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use mgood_core::search::cover::cover_elements;
use mgood_core::search::cover::Restarts;
use mgood_core::search::{self, SearchBudget, Status as SearchStatus, Uniqueness};
use mgood_core::{classify, construct_2good, construct_3good, parse, render, residue_checks, Instance};

use crate::cache::{Cache, Key};
use crate::clock::InstantClock;
use crate::VERSION;

/// `#par(n)` for `n = 1..=40` and `m = 3`.
pub const KNOWN_COUNTS: [u64; 40] = [
    1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 2, 1, 20, 17, 56, 95, 33, 11, 2, 7, 1, 2, 1, 1, 1, 1, 1, 1, 14, 1, 64, 468,
    5437, 8764, 10716, 76718, 3091, 422767,
];

/// Every `n <= 844` is known to have a 3-good partition.
pub const EXISTENCE_FRONTIER: u64 = 844;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    Exists,
    Unique,
    Count,
}

impl Question {
    pub fn name(self) -> &'static str {
        match self {
            Question::Exists => "exists",
            Question::Unique => "unique",
            Question::Count => "count",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Exists,
    Unique,
    Multiple,
    None,
    BudgetExceeded,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Exists => "exists",
            Verdict::Unique => "unique",
            Verdict::Multiple => "multiple",
            Verdict::None => "none",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Constructed,
    Searched,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Constructed => "constructed",
            Method::Searched => "searched",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub n: u64,
    pub m: u64,
    /// Structural class, for `m = 3`.
    pub class: Option<String>,
    pub status: Verdict,
    pub method: Method,
    pub count: Option<u64>,
    pub nodes: u64,
    pub elapsed_ms: u64,
    /// A witness in partition notation, when one was found.
    pub witness: Option<String>,
    /// What the published results say, when they say anything.
    pub expected: Option<Verdict>,
    pub expected_count: Option<u64>,
}

impl Record {
    pub fn contradicts_expectation(&self) -> bool {
        if self.status == Verdict::BudgetExceeded {
            return false;
        }
        let verdict_clash = self.expected.is_some_and(|e| match e {
            Verdict::Exists => matches!(self.status, Verdict::None),
            other => other != self.status,
        });
        let count_clash = matches!((self.expected_count, self.count), (Some(a), Some(b)) if a != b);
        verdict_clash || count_clash
    }

    /// Re-parses and validates the stored witness.
    pub fn witness_is_valid(&self) -> bool {
        self.witness.as_deref().is_some_and(|w| parse(w, self.n, self.m).is_ok())
    }
}

/// Per-`n` limits. `None` means unlimited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub ms: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { nodes: None, ms: None };

    /// 60 s and 10^8 nodes per `n`.
    pub const EXISTENCE: Budget = Budget { nodes: Some(100_000_000), ms: Some(60_000) };

    pub fn default_for(q: Question) -> Budget {
        match q {
            Question::Exists => Budget::EXISTENCE,
            Question::Unique | Question::Count => Budget::UNLIMITED,
        }
    }

    fn search(self) -> SearchBudget {
        let mut b = SearchBudget::UNLIMITED;
        if let Some(n) = self.nodes {
            b = SearchBudget::nodes(n);
        }
        if let Some(ms) = self.ms {
            b = b.with_time_limit(Duration::from_millis(ms));
        }
        b
    }
}

/// Conjectured set of `n` with exactly one 3-good partition:
/// `{1, 2, 3, 4}` and `3^t + d` for `d` in `{-4, -2, -1, 0, 1, 2, 3, 5}`,
/// `t >= 2`.
pub fn conjectured_unique(n: u64) -> bool {
    if (1..=4).contains(&n) {
        return true;
    }
    let mut p = 9u64;
    while p <= n + 4 {
        let d = n as i64 - p as i64;
        if [-4, -2, -1, 0, 1, 2, 3, 5].contains(&d) {
            return true;
        }
        p *= 3;
    }
    false
}

/// The published answer for `(question, m, n)`, if there is one.
pub fn expectation(q: Question, m: u64, n: u64) -> (Option<Verdict>, Option<u64>) {
    let counted = m == 3 && (1..=40).contains(&n);
    let count = counted.then(|| KNOWN_COUNTS[n as usize - 1]);
    let from_count = count.map(|c| match c {
        0 => Verdict::None,
        1 => Verdict::Unique,
        _ => Verdict::Multiple,
    });
    let obstructed = m > 3 && residue_checks(n, m).obstructed();
    match q {
        Question::Count => (from_count, count),
        Question::Unique if counted => (from_count, None),
        Question::Unique if m == 3 => {
            (Some(if conjectured_unique(n) { Verdict::Unique } else { Verdict::Multiple }), None)
        }
        Question::Unique if m == 2 => (Some(Verdict::Unique), None),
        Question::Exists if (m == 3 && n <= EXISTENCE_FRONTIER) || m == 2 => (Some(Verdict::Exists), None),
        _ if obstructed => (Some(Verdict::None), Some(0)),
        _ => (None, None),
    }
}

/// How a campaign runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Campaign {
    pub m: u64,
    pub question: Question,
    pub budget: Budget,
    /// Worker threads; 0 means one per CPU.
    pub jobs: usize,
}

impl Campaign {
    pub fn new(question: Question, m: u64) -> Self {
        Campaign { m, question, budget: Budget::default_for(question), jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub question: Question,
    pub m: u64,
    pub from: u64,
    pub to: u64,
    pub budget: Budget,
    pub version: String,
    /// Records answered from the cache without any search.
    pub cache_hits: usize,
    pub records: Vec<Record>,
}

impl CampaignReport {
    pub fn contradictions(&self) -> Vec<&Record> {
        self.records.iter().filter(|r| r.contradicts_expectation()).collect()
    }

    /// Columns `n, class, status, method, count, nodes, ms`.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "class", "status", "method", "count", "nodes", "ms"])?;
        for r in &self.records {
            out.write_record([
                r.n.to_string(),
                r.class.clone().unwrap_or_default(),
                r.status.name().to_string(),
                r.method.name().to_string(),
                r.count.map(|c| c.to_string()).unwrap_or_default(),
                r.nodes.to_string(),
                r.elapsed_ms.to_string(),
            ])?;
        }
        out.flush()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Runs `campaign` over `ns`, consulting and then extending `cache`.
pub fn run(
    campaign: &Campaign,
    ns: &[u64],
    mut cache: Option<&mut Cache>,
) -> Result<CampaignReport, mgood_core::Error> {
    for &n in ns {
        Instance::new(n, campaign.m)?;
    }
    let key = |n| Key { m: campaign.m, n, question: campaign.question, version: VERSION.to_string() };
    let cached: Vec<Option<Record>> =
        ns.iter().map(|&n| cache.as_deref().and_then(|c| c.get(&key(n)).cloned())).collect();
    let todo: Vec<u64> = ns.iter().zip(&cached).filter(|(_, c)| c.is_none()).map(|(&n, _)| n).collect();
    let fresh = parallel(campaign.jobs, &todo, |n| answer(campaign, n));
    let mut fresh = fresh.into_iter();
    let mut records = Vec::with_capacity(ns.len());
    let mut cache_hits = 0;
    for c in cached {
        match c {
            Some(r) => {
                cache_hits += 1;
                records.push(r);
            }
            None => {
                let r = fresh.next().expect("one fresh record per miss");
                if let Some(cache) = cache.as_deref_mut() {
                    if r.status != Verdict::BudgetExceeded {
                        if let Err(e) = cache.insert(key(r.n), r.clone()) {
                            log::warn!("cache write failed: {e}");
                        }
                    }
                }
                records.push(r);
            }
        }
    }
    records.sort_by_key(|r| r.n);
    Ok(CampaignReport {
        question: campaign.question,
        m: campaign.m,
        from: ns.iter().copied().min().unwrap_or(0),
        to: ns.iter().copied().max().unwrap_or(0),
        budget: campaign.budget,
        version: VERSION.to_string(),
        cache_hits,
        records,
    })
}

/// Maps in order on a pool of `jobs` threads.
fn parallel<F>(jobs: usize, ns: &[u64], f: F) -> Vec<Record>
where
    F: Fn(u64) -> Record + Sync,
{
    use rayon::prelude::*;
    if jobs == 1 || ns.len() < 2 {
        return ns.iter().map(|&n| f(n)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    pool.install(|| ns.par_iter().map(|&n| f(n)).collect())
}

pub fn verify_existence(
    range: std::ops::RangeInclusive<u64>,
    campaign: &Campaign,
    cache: Option<&mut Cache>,
) -> Result<CampaignReport, mgood_core::Error> {
    let c = Campaign { question: Question::Exists, ..*campaign };
    run(&c, &range.collect::<Vec<_>>(), cache)
}

pub fn verify_uniqueness(
    candidates: &[u64],
    campaign: &Campaign,
    cache: Option<&mut Cache>,
) -> Result<CampaignReport, mgood_core::Error> {
    let c = Campaign { question: Question::Unique, ..*campaign };
    run(&c, candidates, cache)
}

/// `(n, expected, got)` for a count that differs from [`KNOWN_COUNTS`].
pub type CountDiff = (u64, u64, Option<u64>);

/// Counts over `range` and lists every [`CountDiff`].
pub fn reproduce_counts(
    range: std::ops::RangeInclusive<u64>,
    campaign: &Campaign,
    cache: Option<&mut Cache>,
) -> Result<(CampaignReport, Vec<CountDiff>), mgood_core::Error> {
    let c = Campaign { question: Question::Count, ..*campaign };
    let report = run(&c, &range.collect::<Vec<_>>(), cache)?;
    let diffs = report
        .records
        .iter()
        .filter_map(|r| r.expected_count.filter(|&e| r.count != Some(e)).map(|e| (r.n, e, r.count)))
        .collect();
    Ok((report, diffs))
}

fn answer(campaign: &Campaign, n: u64) -> Record {
    let m = campaign.m;
    let clock = InstantClock::start();
    let (expected, expected_count) = expectation(campaign.question, m, n);
    let mut r = Record {
        n,
        m,
        class: (m == 3).then(|| classify(n).class.name().to_string()),
        status: Verdict::BudgetExceeded,
        method: Method::Searched,
        count: None,
        nodes: 0,
        elapsed_ms: 0,
        witness: None,
        expected,
        expected_count,
    };
    let inst = Instance::new(n, m).expect("checked by the caller");
    let budget = campaign.budget.search();
    match campaign.question {
        Question::Exists => existence(inst, budget, &clock, &mut r),
        Question::Unique => match search::is_unique(inst, budget, &clock) {
            Ok((verdict, out)) => {
                r.nodes = out.nodes;
                r.status = match verdict {
                    Uniqueness::Unique(w) => {
                        r.witness = Some(render(&w));
                        Verdict::Unique
                    }
                    Uniqueness::Multiple => Verdict::Multiple,
                    Uniqueness::None => Verdict::None,
                    Uniqueness::BudgetExceeded => Verdict::BudgetExceeded,
                };
            }
            Err(e) => log::warn!("n = {n}: {e}"),
        },
        Question::Count => match search::count(inst, budget, &clock) {
            Ok(out) => {
                r.nodes = out.nodes;
                r.count = out.count;
                r.status = match out.count {
                    None => Verdict::BudgetExceeded,
                    Some(0) => Verdict::None,
                    Some(1) => Verdict::Unique,
                    Some(_) => Verdict::Multiple,
                };
            }
            Err(e) => log::warn!("n = {n}: {e}"),
        },
    }
    r.elapsed_ms = clock.elapsed_ms();
    r
}

/// Constructor first, then the anchored search, then randomized restarts
/// of dancing links for whatever budget remains.
fn existence(inst: Instance, budget: SearchBudget, clock: &InstantClock, r: &mut Record) {
    let (n, m) = (inst.n(), inst.m());
    let built = match m {
        2 => construct_2good(n).ok().map(|c| c.partition),
        3 => construct_3good(n).ok().flatten().map(|c| c.partition),
        _ => None,
    };
    if let Some(p) = built {
        r.status = Verdict::Exists;
        r.method = Method::Constructed;
        r.witness = Some(render(&p));
        return;
    }
    r.method = Method::Searched;
    let half = SearchBudget { node_limit: budget.node_limit.map(|l| l / 2), ..budget };
    let out = match search::exists(inst, half, clock) {
        Ok(out) => out,
        Err(e) => {
            log::warn!("n = {n}: {e}");
            return;
        }
    };
    r.nodes = out.nodes;
    match out.status {
        SearchStatus::Exists => {
            r.status = Verdict::Exists;
            r.witness = Some(render(&out.witnesses[0]));
        }
        SearchStatus::ExhaustedNone => r.status = Verdict::None,
        SearchStatus::BudgetExceeded => {
            let rest = SearchBudget { node_limit: budget.node_limit.map(|l| l - l / 2), ..budget };
            let all: Vec<u64> = (1..=n).collect();
            let (found, stats) = cover_elements(&all, m, rest, clock, Some(Restarts::default()));
            r.nodes += stats.nodes;
            match found.map(|parts| mgood_core::canonicalize(n, m, parts)) {
                Some(Ok(p)) => {
                    r.status = Verdict::Exists;
                    r.witness = Some(render(&p));
                }
                Some(Err(e)) => log::warn!("n = {n}: cover produced an invalid partition: {e}"),
                None if stats.exhausted => r.status = Verdict::None,
                None => {}
            }
        }
    }
}

//! Serializable mirrors of the core types.

use serde::{Deserialize, Serialize};

use mgood_core::nice::{ExtensionRow, Finding, PatternReport};
use mgood_core::{render, Classification, Construction, GoodPartition, NiceCertificate, Part, ReductionTrace};

fn elements(parts: &[Part]) -> Vec<Vec<u64>> {
    parts.iter().map(|p| p.elements().to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDto {
    pub n: u64,
    pub m: u64,
    pub text: String,
    pub parts: Vec<Vec<u64>>,
}

impl From<&GoodPartition> for PartitionDto {
    fn from(p: &GoodPartition) -> Self {
        PartitionDto { n: p.n(), m: p.m(), text: render(p), parts: elements(p.parts()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDto {
    pub rule: String,
    pub from: u64,
    pub to: u64,
    pub added: Vec<Vec<u64>>,
    pub removed: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDto {
    pub n: u64,
    pub m: u64,
    pub steps: Vec<StepDto>,
}

impl From<&ReductionTrace> for TraceDto {
    fn from(t: &ReductionTrace) -> Self {
        let steps = t
            .steps
            .iter()
            .map(|s| StepDto {
                rule: s.rule.name().to_string(),
                from: s.from,
                to: s.to,
                added: elements(&s.added),
                removed: elements(&s.removed),
            })
            .collect();
        TraceDto { n: t.n, m: t.m, steps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionDto {
    pub partition: PartitionDto,
    pub trace: TraceDto,
}

impl From<&Construction> for ConstructionDto {
    fn from(c: &Construction) -> Self {
        ConstructionDto { partition: (&c.partition).into(), trace: (&c.trace).into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDto {
    pub n: u64,
    pub class: String,
    pub t: u32,
    pub k: u64,
    pub s: Option<u32>,
    pub within_theorem_frontier: bool,
}

impl From<&Classification> for ClassificationDto {
    fn from(c: &Classification) -> Self {
        ClassificationDto {
            n: c.n,
            class: c.class.name().to_string(),
            t: c.t,
            k: c.k,
            s: c.s,
            within_theorem_frontier: c.within_theorem_frontier,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDto {
    pub k: u64,
    pub n: u64,
    pub n_prime: u64,
    pub interval_sum: u64,
    pub ternary: String,
}

impl From<&NiceCertificate> for CertificateDto {
    fn from(c: &NiceCertificate) -> Self {
        CertificateDto { k: c.k, n: c.n, n_prime: c.n_prime, interval_sum: c.interval_sum, ternary: c.ternary.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingDto {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl From<&Finding> for FindingDto {
    fn from(f: &Finding) -> Self {
        FindingDto { name: f.name.to_string(), holds: f.holds, detail: f.detail.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDto {
    pub limit: u64,
    pub nice: Vec<u64>,
    pub double_certificates: Vec<u64>,
    pub pattern_pairs: Vec<(u64, u64)>,
    pub outside: Vec<u64>,
    pub gaps: Vec<u64>,
    pub gap_levels: Vec<u64>,
    pub length_quotients: Vec<i64>,
    pub findings: Vec<FindingDto>,
}

impl From<&PatternReport> for PatternDto {
    fn from(r: &PatternReport) -> Self {
        PatternDto {
            limit: r.limit,
            nice: r.nice.clone(),
            double_certificates: r.double_certificates.clone(),
            pattern_pairs: r.pattern_pairs.clone(),
            outside: r.outside.clone(),
            gaps: r.gaps.clone(),
            gap_levels: r.gap_levels.clone(),
            length_quotients: r.length_quotients.clone(),
            findings: r.findings.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionRowDto {
    pub a: u64,
    pub b: u32,
    pub k: u64,
    pub n: u64,
    pub n_prime: u64,
    pub window: u64,
    pub sum: u64,
    pub ternary: String,
    pub min_t: u32,
}

impl From<&ExtensionRow> for ExtensionRowDto {
    fn from(r: &ExtensionRow) -> Self {
        ExtensionRowDto {
            a: r.a,
            b: r.b,
            k: r.k,
            n: r.n,
            n_prime: r.n_prime,
            window: r.window,
            sum: r.sum,
            ternary: r.ternary.clone(),
            min_t: r.min_t,
        }
    }
}

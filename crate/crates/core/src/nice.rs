//! Ternary analysis of 3-nice `k`.
//!
//! `k` is 3-nice when some interval `[n', n]` with `n = 3k + 2`,
//! `1 <= n' < n` and even length has a sum whose ternary digits are all 0
//! or 1, and whose lowest power of 3 is at least `2n' + 1`, the smallest
//! sum of two window elements. Without that last condition values such as
//! `k = 6` (`19 + 20 = 39`) would qualify, which no pairing of the window
//! can realize. The module also carries the recurrences and the empirical checks
//! on how the nice values are laid out.

use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{checked_pow, interval_sum};

/// Most-significant-first base-3 digits of `x` (`[0]` for zero).
pub fn ternary_digits(x: u64) -> Vec<u8> {
    if x == 0 {
        return alloc::vec![0];
    }
    let mut d = Vec::new();
    let mut x = x;
    while x > 0 {
        d.push((x % 3) as u8);
        x /= 3;
    }
    d.reverse();
    d
}

pub fn ternary_string(x: u64) -> String {
    ternary_digits(x).into_iter().map(|d| (b'0' + d) as char).collect()
}

/// Lowest power of 3 in the ternary expansion of `x > 0`.
fn lowest_power(x: u64) -> u64 {
    let (mut x, mut p) = (x, 1);
    while x % 3 == 0 {
        x /= 3;
        p *= 3;
    }
    p
}

fn digit_two_free(x: u64) -> bool {
    let mut x = x;
    while x > 0 {
        if x % 3 == 2 {
            return false;
        }
        x /= 3;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceCertificate {
    pub k: u64,
    pub n: u64,
    pub n_prime: u64,
    pub interval_sum: u64,
    pub ternary: String,
}

impl NiceCertificate {
    /// Recomputes every defining condition.
    pub fn is_sound(&self) -> bool {
        self.n == 3 * self.k + 2
            && self.n_prime >= 1
            && self.n_prime < self.n
            && (self.n - self.n_prime + 1).is_multiple_of(2)
            && self.interval_sum == interval_sum(self.n_prime, self.n)
            && self.ternary == ternary_string(self.interval_sum)
            && !self.ternary.contains('2')
            && lowest_power(self.interval_sum) > 2 * self.n_prime
    }
}

/// Every certificate for `k`, by ascending `n'`.
pub fn nice_certificates(k: u64) -> Vec<NiceCertificate> {
    let n = 3 * k + 2;
    // even length means n' has the parity opposite to n
    let first = if n.is_multiple_of(2) { 1 } else { 2 };
    (first..n)
        .step_by(2)
        .filter_map(|np| {
            let s = interval_sum(np, n);
            (digit_two_free(s) && lowest_power(s) > 2 * np).then(|| NiceCertificate {
                k,
                n,
                n_prime: np,
                interval_sum: s,
                ternary: ternary_string(s),
            })
        })
        .collect()
}

/// All 3-nice `k < limit` with their certificates.
pub fn enumerate_nice(limit: u64) -> Vec<(u64, Vec<NiceCertificate>)> {
    (0..limit)
        .filter_map(|k| {
            let c = nice_certificates(k);
            (!c.is_empty()).then_some((k, c))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sequence {
    /// `d_0 = 1, d_1 = 3, d_(i+1) = 3 (d_i - 1)`
    D,
    /// `e_0 = 1, e_(i+1) = 3 e_i - 1`
    E,
    /// `f_0 = -1, f_(i+1) = 3 f_i - 1`
    F,
}

impl Sequence {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "d" => Some(Sequence::D),
            "e" => Some(Sequence::E),
            "f" => Some(Sequence::F),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sequence::D => "d",
            Sequence::E => "e",
            Sequence::F => "f",
        }
    }
}

/// The first `count` terms.
pub fn sequence(which: Sequence, count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut x: i64 = match which {
        Sequence::D | Sequence::E => 1,
        Sequence::F => -1,
    };
    for i in 0..count {
        out.push(x);
        x = match which {
            Sequence::D if i == 0 => 3,
            Sequence::D => 3 * (x - 1),
            _ => 3 * x - 1,
        };
    }
    out
}

/// One empirical check: whether it held and, if not, where it broke.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

impl Finding {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        match failure {
            None => Finding { name, holds: true, detail: String::new() },
            Some(detail) => Finding { name, holds: false, detail },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternReport {
    pub limit: u64,
    pub nice: Vec<u64>,
    /// `k` with more than one certificate.
    pub double_certificates: Vec<u64>,
    /// Pairs `(k, k + 1)` with `n'(k) = n'(k + 1) + 3` inside complete
    /// ternary blocks.
    pub pattern_pairs: Vec<(u64, u64)>,
    pub outside: Vec<u64>,
    /// Differences between successive pair starts.
    pub gaps: Vec<u64>,
    /// Levels of `d` peeled off the gap sequence.
    pub gap_levels: Vec<u64>,
    /// Differences of interval lengths between pair starts, divided by 18.
    pub length_quotients: Vec<i64>,
    pub findings: Vec<Finding>,
}

/// Block `b` is `[(3^b - 1) / 2, 3^b - 1]`: the `k` whose ternary digits
/// are all 1 or 2 and number `b`. A block counts only when it lies
/// entirely below `limit`.
fn complete_block(k: u64, limit: u64) -> bool {
    let mut b = 1;
    while let Some(p) = checked_pow(3, b) {
        if k < (p - 1) / 2 {
            return false;
        }
        if k < p {
            return p - 1 < limit;
        }
        b += 1;
    }
    false
}

/// Checks the layout conjectures on the nice `k < limit`. Findings are
/// observations, not assertions.
pub fn pattern_report(limit: u64) -> PatternReport {
    let table = enumerate_nice(limit);
    let nice: Vec<u64> = table.iter().map(|(k, _)| *k).collect();
    let double_certificates = table.iter().filter(|(_, c)| c.len() > 1).map(|(k, _)| *k).collect();
    let single = |k: u64| -> Option<&NiceCertificate> {
        table.iter().find(|(kk, _)| *kk == k).and_then(|(_, c)| (c.len() == 1).then(|| &c[0]))
    };

    let mut pattern_pairs = Vec::new();
    for &k in &nice {
        if let (Some(a), Some(b)) = (single(k), single(k + 1)) {
            if a.n_prime == b.n_prime + 3 && complete_block(k, limit) && complete_block(k + 1, limit) {
                pattern_pairs.push((k, k + 1));
            }
        }
    }
    let outside = nice.iter().copied().filter(|&k| !pattern_pairs.iter().any(|&(a, b)| k == a || k == b)).collect();

    let mut findings = Vec::new();
    let len = |k: u64| {
        let c = single(k).expect("pattern members have one certificate");
        (c.n - c.n_prime + 1) as i64
    };

    // (a) peel the d levels off the gaps between pair starts
    let gaps: Vec<u64> = pattern_pairs.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let mut rest = gaps.clone();
    let mut gap_levels = Vec::new();
    let mut failure = None;
    for &level in sequence(Sequence::D, 16).iter().skip(1) {
        if rest.is_empty() {
            break;
        }
        let level = level as u64;
        let tail = &rest[rest.len().min(2)..];
        let ok = rest.iter().take(2).all(|&g| g == level) && tail.iter().skip(1).step_by(2).all(|&g| g == level);
        if !ok {
            failure = Some(alloc::format!("level {level} does not fit {rest:?}"));
            break;
        }
        gap_levels.push(level);
        rest.retain(|&g| g != level);
    }
    findings.push(Finding::new("gap_peel_off", failure));

    // (b) interval lengths
    let members: Vec<u64> = pattern_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let diffs: Vec<i64> = members.windows(2).map(|w| len(w[1]) - len(w[0])).collect();
    let bad_six = diffs.iter().step_by(2).position(|&d| d != 6);
    findings.push(Finding::new(
        "every_second_difference_is_6",
        bad_six.map(|i| alloc::format!("difference #{} is {}", 2 * i, diffs[2 * i])),
    ));
    let starts: Vec<i64> = pattern_pairs.iter().map(|&(a, _)| len(a)).collect();
    let start_diffs: Vec<i64> = starts.windows(2).map(|w| w[1] - w[0]).collect();
    let bad_18 = start_diffs.iter().find(|&&d| d % 18 != 0);
    findings.push(Finding::new(
        "remaining_differences_divisible_by_18",
        bad_18.map(|d| alloc::format!("{d} is not divisible by 18")),
    ));
    let length_quotients: Vec<i64> = start_diffs.iter().map(|d| d / 18).collect();
    let bad_ef = length_quotients
        .iter()
        .enumerate()
        .find(|&(i, &q)| q != ef_interleave(i))
        .map(|(i, &q)| alloc::format!("term {i} is {q}, expected {}", ef_interleave(i)));
    findings.push(Finding::new("quotients_follow_e_f_interleave", bad_ef));

    // (c) ternary successor within pairs
    let bad_succ = pattern_pairs.iter().find(|&&(a, b)| {
        let (sa, sb) = (&single(a).unwrap().ternary, &single(b).unwrap().ternary);
        ternary_successor(sa).as_deref() != Some(sb.as_str())
    });
    findings.push(Finding::new("ternary_successor_digit", bad_succ.map(|(a, b)| alloc::format!("pair ({a}, {b})"))));

    PatternReport {
        limit,
        nice,
        double_certificates,
        pattern_pairs,
        outside,
        gaps,
        gap_levels,
        length_quotients,
        findings,
    }
}

/// Predicted quotient `i`: with `i + 2 = 2^v * o`, `o` odd, it is
/// `f_(v-2)` when `o = 1` (taking `f_(-1) = 0`) and `e_v` otherwise.
pub fn ef_interleave(i: usize) -> i64 {
    let x = i + 2;
    let v = x.trailing_zeros() as usize;
    if x >> v == 1 {
        if v == 1 {
            0
        } else {
            sequence(Sequence::F, v - 1)[v - 2]
        }
    } else {
        sequence(Sequence::E, v + 1)[v]
    }
}

/// Sets the 0 just before the last 1 (reading with one leading 0).
fn ternary_successor(s: &str) -> Option<String> {
    let mut d: Vec<u8> = core::iter::once(b'0').chain(s.bytes()).collect();
    let last = d.iter().rposition(|&c| c == b'1')?;
    if last == 0 || d[last - 1] != b'0' {
        return None;
    }
    d[last - 1] = b'1';
    let start = d.iter().position(|&c| c != b'0').unwrap_or(d.len() - 1);
    Some(String::from_utf8_lossy(&d[start..]).into_owned())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionRow {
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

/// Rows for `k = a + (3^b - 1) / 2` with `(3^b - 1) / 2 >= a`, window length
/// `6a + 2` ending at `3k + 2`, for `a <= a_max`, `b <= b_max`.
pub fn extension_tables(a_max: u64, b_max: u32) -> Vec<ExtensionRow> {
    let mut rows = Vec::new();
    for a in 0..=a_max {
        for b in 0..=b_max {
            let Some(p) = checked_pow(3, b) else { break };
            let half = (p - 1) / 2;
            if half < a {
                continue;
            }
            let k = a + half;
            let n = 3 * k + 2;
            let window = 6 * a + 2;
            let n_prime = n + 1 - window;
            let sum = interval_sum(n_prime, n);
            rows.push(ExtensionRow { a, b, k, n, n_prime, window, sum, ternary: ternary_string(sum), min_t: b + 2 });
        }
    }
    rows
}

/// Checks that each column grows by exactly 3 per step in `b` (sum tripled,
/// ternary shifted by one 0) and that the rows for `a` in `{0, 1, 3, 4}`
/// are free of the digit 2.
pub fn extension_findings(rows: &[ExtensionRow]) -> Vec<Finding> {
    let col = rows
        .windows(2)
        .filter(|w| w[0].a == w[1].a)
        .find(|w| w[1].sum != 3 * w[0].sum || w[1].ternary != alloc::format!("{}0", w[0].ternary));
    let two = rows.iter().filter(|r| [0, 1, 3, 4].contains(&r.a)).find(|r| r.ternary.contains('2'));
    alloc::vec![
        Finding::new("columns_grow_by_factor_3", col.map(|w| alloc::format!("a = {}, b = {}", w[1].a, w[1].b))),
        Finding::new("digit_2_free_for_a_0_1_3_4", two.map(|r| alloc::format!("a = {}, b = {}", r.a, r.b))),
    ]
}

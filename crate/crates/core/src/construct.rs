//! Closed-form constructions with reduction traces.
//!
//! [`construct_3good`] applies the first matching rule: the frozen table for
//! `n <= 13`, then `n = 3^t`, `n = 3^t + 1`, the mirror around `3^(t+1)`,
//! the shifted symmetric partitions for `n = 3^t + 3k` and `3^t + 3k + 1`,
//! and finally [`open_case_construct`] for `n = 3^t + 3k + 2`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arith::{checked_pow, floor_log};
use crate::classify::{classify, Class};
use crate::nice::nice_certificates;
use crate::notation::parse_parts;
use crate::partition::{GoodPartition, Instance, Part};
use crate::scheme::{lift, solve_scheme, OffsetScheme, SchemeQuery};
use crate::search::cover::{absorb, cover_elements, Restarts};
use crate::search::{NoClock, SearchBudget};
use crate::symmetric::symmetric_partition;
use crate::trace::{ReductionTrace, Rule, Step};
use crate::Error;

/// Canonical-least 3-good partitions of `[n]` for `n <= 13`, taken from
/// exhaustive enumeration.
pub const BASE_TABLE: [&str; 13] = [
    "(1)",
    "(1+2)",
    "(1+2)+(3)",
    "(1)+(2+3+4)",
    "(1+2)+(3)+(4+5)",
    "(1+2)+(3+6)+(4+5)",
    "(1)+(2+7)+(3+6)+(4+5)",
    "(1+8)+(2+7)+(3+6)+(4+5)",
    "(1+8)+(2+7)+(3+6)+(4+5)+(9)",
    "(1)+(2+7)+(3+6)+(4+5)+(8+9+10)",
    "(1+8)+(2+7)+(3)+(4+5)+(6+10+11)+(9)",
    "(1+2)+(3)+(4+5)+(6+10+11)+(7+8+12)+(9)",
    "(1)+(2+3+4)+(5+9+13)+(6+10+11)+(7+8+12)",
];

/// Node budget for each search inside the open case.
pub const SCHEME_NODE_BUDGET: u64 = 2_000_000;

/// Left-out pairs tried by the split construction.
const SPLIT_TRIES: usize = 64;

/// Node budget for the upper cover in the split construction; each
/// absorb attempt gets a tenth of it.
const SPLIT_NODE_BUDGET: u64 = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub partition: GoodPartition,
    pub trace: ReductionTrace,
}

impl Construction {
    fn empty(m: u64) -> Self {
        // placeholder instance for [0]; never exposed
        Construction { partition: GoodPartition::new_unchecked_empty(m), trace: ReductionTrace::new(0, m) }
    }

    /// Applies one step on top of `self = par(to)`.
    fn extend(&self, rule: Rule, from: u64, added: Vec<Part>, removed: Vec<Part>) -> Result<Self, Error> {
        let m = self.trace.m;
        let mut parts: Vec<Part> = self.partition.parts().to_vec();
        for r in &removed {
            let i = parts.iter().position(|p| p == r).ok_or_else(|| Error::MissingPair(r.clone()))?;
            parts.swap_remove(i);
        }
        parts.extend(added.iter().cloned());
        let partition = GoodPartition::new(Instance::new(from, m)?, parts).map_err(Error::Invalid)?;
        let mut steps = Vec::with_capacity(self.trace.steps.len() + 1);
        steps.push(Step { rule, from, to: self.trace.n, added, removed });
        steps.extend(self.trace.steps.iter().cloned());
        Ok(Construction { partition, trace: ReductionTrace { n: from, m, steps } })
    }
}

/// The unique 2-good partition of `[n]`.
pub fn construct_2good(n: u64) -> Result<Construction, Error> {
    Instance::new(n, 2)?;
    let mut chain = Vec::new();
    let mut cur = n;
    while cur > 0 {
        let e = floor_log(2, cur);
        let p = 1u64 << e;
        if p == cur {
            chain.push((Rule::Power, cur, cur - 1, alloc::vec![Part::single(p)]));
            cur -= 1;
        } else {
            let big = 2 * p;
            let mut added = alloc::vec![Part::single(p)];
            added.extend((big - cur..p).map(|i| Part::pair(i, big - i)));
            chain.push((Rule::Mirror, cur, big - cur - 1, added));
            cur = big - cur - 1;
        }
    }
    let mut c = Construction::empty(2);
    for (rule, from, _, added) in chain.into_iter().rev() {
        c = c.extend(rule, from, added, Vec::new())?;
    }
    Ok(c)
}

/// A 3-good partition of `[n]` with its trace, or `None` when `n` is an
/// open-case value none of the open-case constructions reach.
pub fn construct_3good(n: u64) -> Result<Option<Construction>, Error> {
    Instance::new(n, 3)?;
    Ok(Builder::default().par(n))
}

/// `par(3^t + 3k + 2)` through the named families, then 3-nice windows,
/// then a full-window scheme search. `None` when all of them fail.
///
/// # Panics
///
/// If a named family meets a base partition lacking a pair it must split.
pub fn open_case_construct(t: u32, k: u64) -> Option<Construction> {
    Builder::default().open_case(t, k)
}

/// Lifts `scheme` around `3^t` onto the pipeline's `par(3^t + lo - 1)`.
pub fn scheme_to_partition(scheme: &OffsetScheme, t: u32) -> Result<GoodPartition, Error> {
    Ok(Builder::default().lift_scheme(scheme, t, Rule::OpenScheme)?.partition)
}

#[derive(Default)]
struct Builder {
    memo: BTreeMap<u64, Option<Construction>>,
}

impl Builder {
    fn par(&mut self, n: u64) -> Option<Construction> {
        if n == 0 {
            return Some(Construction::empty(3));
        }
        if let Some(c) = self.memo.get(&n) {
            return c.clone();
        }
        let c = self.par_uncached(n);
        self.memo.insert(n, c.clone());
        c
    }

    fn par_uncached(&mut self, n: u64) -> Option<Construction> {
        let step = |base: Construction, rule, added, removed| {
            Some(base.extend(rule, n, added, removed).expect("closed-form rule produced an invalid partition"))
        };
        if n as usize <= BASE_TABLE.len() {
            let parts = parse_parts(BASE_TABLE[n as usize - 1]).expect("base table parses");
            return step(Construction::empty(3), Rule::Base, parts, Vec::new());
        }
        let c = classify(n);
        let t = c.t;
        let big = checked_pow(3, t).expect("n below the cap");
        match c.class {
            Class::Power => {
                let base = self.par(n - 1)?;
                step(base, Rule::Power, alloc::vec![Part::single(n)], Vec::new())
            }
            Class::PowerPlusOne => {
                let base = self.par(n - 3)?;
                step(base, Rule::PowerPlusOne, alloc::vec![Part::triple(big - 1, big, big + 1)], Vec::new())
            }
            Class::Mirror => {
                let p = 3 * big;
                let base = self.par(p - n - 1)?;
                let added = (p - n..=(p - 1) / 2).map(|i| Part::pair(i, p - i)).collect();
                step(base, Rule::Mirror, added, Vec::new())
            }
            Class::Mod0 | Class::Mod1 => {
                let k = c.k;
                let (radius, rule) = if c.class == Class::Mod0 { (3 * k, Rule::Mod0) } else { (3 * k + 1, Rule::Mod1) };
                let sym = symmetric_partition(radius).expect("radius is 0 or 1 mod 3");
                let added =
                    sym.parts.iter().map(|p| Part::new(p.iter().map(|&x| (big as i64 + x) as u64).collect())).collect();
                let base = self.par(big - radius - 1)?;
                step(base, rule, added, Vec::new())
            }
            Class::OpenCase => self.open_case(t, c.k),
            Class::Base => unreachable!("n > 13 is never a base class"),
        }
    }

    fn lift_scheme(&mut self, scheme: &OffsetScheme, t: u32, rule: Rule) -> Result<Construction, Error> {
        let big = checked_pow(3, t).ok_or(Error::LiftOutOfRange { t, k: scheme.k })?;
        let base_n = big + scheme.lo - 1;
        let base = self.par(base_n).ok_or(Error::NoCompletion("base partition unavailable"))?;
        let lifted = lift(scheme, t, &base.partition)?;
        let n = big + scheme.hi;
        let mut steps = Vec::with_capacity(base.trace.steps.len() + 1);
        steps.push(Step { rule, from: n, to: base_n, added: lifted.added, removed: lifted.removed });
        steps.extend(base.trace.steps);
        Ok(Construction { partition: lifted.partition, trace: ReductionTrace { n, m: 3, steps } })
    }

    fn open_case(&mut self, t: u32, k: u64) -> Option<Construction> {
        let n = checked_pow(3, t)? + 3 * k + 2;
        if let Some(c) = self.memo.get(&n) {
            return c.clone();
        }
        let c = self.open_case_uncached(t, k);
        self.memo.insert(n, c.clone());
        c
    }

    fn open_case_uncached(&mut self, t: u32, k: u64) -> Option<Construction> {
        if let Some((rule, scheme)) = named_family(t, k) {
            match self.lift_scheme(&scheme, t, rule) {
                Ok(c) => return Some(c),
                Err(Error::MissingPair(p)) => panic!("{rule} base lacks the pair {p:?} it must split"),
                Err(_) => {}
            }
        }
        let big = checked_pow(3, t)?;
        // 3-nice windows, widest first
        let mut certs = nice_certificates(k);
        certs.sort_by_key(|c| c.n_prime);
        for cert in certs {
            let lo = cert.n_prime;
            let Some(base) = self.par(big + lo - 1) else { continue };
            let targets = ternary_targets(cert.interval_sum);
            let q = SchemeQuery {
                k,
                lo,
                hi: 3 * k + 2,
                targets: Some(targets),
                allowed: Some(available_sums(&base.partition, big, 6 * k + 3)),
                fold: Some(big),
                splits: false,
                restarts: None,
            };
            if let Some(c) = self.try_query(&q, t, Rule::OpenNice) {
                return Some(c);
            }
        }
        if let Some(c) = self.open_split(t, k) {
            return Some(c);
        }
        // full window with splits
        for lo in [1, 0] {
            let q = SchemeQuery {
                k,
                lo,
                hi: 3 * k + 2,
                targets: None,
                allowed: None,
                fold: Some(big),
                splits: true,
                restarts: Some(Restarts { seed: lo, ..Restarts::default() }),
            };
            if let Some(c) = self.try_query(&q, t, Rule::OpenScheme) {
                return Some(c);
            }
        }
        None
    }

    /// With `h = 3k + 2`, covers `[N - h - 1, N + h]` minus `N - d` and
    /// `N - (h + 1 - d)` by triplets summing to `3N` and the singleton `N`,
    /// then lets `par(N - h - 2)` absorb the two left-out elements.
    fn open_split(&mut self, t: u32, k: u64) -> Option<Construction> {
        let big = checked_pow(3, t)?;
        let h = 3 * k + 2;
        if 2 * h + 2 >= big {
            return None;
        }
        let base = self.par(big - h - 2)?;
        let budget = SearchBudget::nodes(SPLIT_NODE_BUDGET);
        for d in (1..).take_while(|&d| 2 * d < h + 1).take(SPLIT_TRIES) {
            let out = [big - d, big - (h + 1 - d)];
            let top: Vec<u64> = (big - h - 1..=big + h).filter(|x| !out.contains(x)).collect();
            let restarts = Restarts { seed: d, ..Restarts::default() };
            let (Some(mut added), _) = cover_elements(&top, 3, budget, &NoClock, Some(restarts)) else { continue };
            let low_budget = SearchBudget::nodes(SPLIT_NODE_BUDGET / 10);
            let Some(low) = absorb(&base.partition, &out, low_budget, &NoClock, restarts) else { continue };
            added.extend(low.added);
            if let Ok(c) = base.extend(Rule::OpenSplit, big + h, added, low.removed) {
                return Some(c);
            }
        }
        None
    }

    fn try_query(&mut self, q: &SchemeQuery, t: u32, rule: Rule) -> Option<Construction> {
        let (scheme, _) = solve_scheme(q, SearchBudget::nodes(SCHEME_NODE_BUDGET), &NoClock).ok()?;
        self.lift_scheme(&scheme?, t, rule).ok()
    }
}

/// Sums `s < limit` whose pair `(s, N - s)` is a part of `base`.
fn available_sums(base: &GoodPartition, big: u64, limit: u64) -> Vec<bool> {
    let mut ok = alloc::vec![false; limit as usize + 1];
    for p in base.parts() {
        if let [a, b] = *p.elements() {
            if a + b == big {
                for s in [a, b] {
                    if s <= limit {
                        ok[s as usize] = true;
                    }
                }
            }
        }
    }
    ok
}

/// The powers of 3 named by the nonzero ternary digits of `x`, which must
/// all be 1.
fn ternary_targets(x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut x, mut p) = (x, 1);
    while x > 0 {
        debug_assert!(x % 3 != 2);
        if x % 3 == 1 {
            out.push(p);
        }
        x /= 3;
        p *= 3;
    }
    out
}

/// The fixed schemes behind the named open-case families.
pub fn named_family(t: u32, k: u64) -> Option<(Rule, OffsetScheme)> {
    let hi = 3 * k + 2;
    if k == 0 {
        return Some((Rule::OpenK0, OffsetScheme::new(0, 1, 2, alloc::vec![(1, 2)], alloc::vec![alloc::vec![3]])));
    }
    // 6k + 3 = 3^j with j < t
    let s = 6 * k + 3;
    if let Some(j) = crate::arith::is_power_of(3, s) {
        if j < t {
            let scheme = OffsetScheme::new(k, hi - 1, hi, alloc::vec![(hi - 1, hi)], alloc::vec![alloc::vec![s]]);
            return Some((Rule::OpenPower, scheme));
        }
    }
    match k {
        2 if t >= 3 => Some((
            Rule::OpenK2,
            OffsetScheme::new(
                2,
                1,
                8,
                [(1, 2), (3, 6), (4, 7), (5, 8)].to_vec(),
                alloc::vec![[9].to_vec(), [3, 11, 13].to_vec()],
            ),
        )),
        3 if t >= 3 => Some((
            Rule::OpenK3,
            OffsetScheme::new(
                3,
                0,
                11,
                [(0, 3), (1, 8), (5, 7), (2, 11), (4, 10), (6, 9)].to_vec(),
                alloc::vec![[3].to_vec(), [9].to_vec(), [12, 15].to_vec(), [13, 14].to_vec()],
            ),
        )),
        5 if t >= 4 => Some((
            Rule::OpenK5,
            OffsetScheme::new(
                5,
                10,
                17,
                [(13, 14), (10, 11), (12, 16), (15, 17)].to_vec(),
                alloc::vec![[27].to_vec(), [21, 28, 32].to_vec()],
            ),
        )),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::render;

    fn text(n: u64) -> alloc::string::String {
        render(&construct_3good(n).unwrap().unwrap().partition)
    }

    #[test]
    fn two_good_examples() {
        // canonical order puts (7+9) before (8)
        assert_eq!(render(&construct_2good(9).unwrap().partition), "(1)+(2+6)+(3+5)+(4)+(7+9)+(8)");
        assert_eq!(render(&construct_2good(4).unwrap().partition), "(1+3)+(2)+(4)");
        assert_eq!(render(&construct_2good(1).unwrap().partition), "(1)");
        for n in 1..=300 {
            let c = construct_2good(n).unwrap();
            assert_eq!(c.trace.replay().unwrap(), c.partition);
        }
    }

    #[test]
    fn three_good_examples() {
        let mut want = alloc::string::String::from("(1)");
        for i in 2..=13 {
            want += &alloc::format!("+({}+{})", i, 27 - i);
        }
        assert_eq!(text(25), want);
        let p15 = construct_3good(15).unwrap().unwrap();
        assert!(p15.partition.contains_part(&Part::pair(12, 15)));
        assert!(p15.partition.contains_part(&Part::pair(13, 14)));
        assert_eq!(p15.trace.steps[0].to, 11);
        assert_eq!(text(13), "(1)+(2+3+4)+(5+9+13)+(6+10+11)+(7+8+12)");
        assert_eq!(text(11), "(1+8)+(2+7)+(3)+(4+5)+(6+10+11)+(9)");
    }

    #[test]
    fn mod_rules_use_symmetric_lift() {
        let c = construct_3good(31).unwrap().unwrap();
        assert_eq!(c.trace.steps[0].rule, Rule::Mod1);
        assert_eq!(c.trace.steps[0].to, 22);
        let c = construct_3good(34).unwrap().unwrap();
        assert_eq!(c.trace.steps[0].to, 19);
        let c = construct_3good(33).unwrap().unwrap();
        assert_eq!(c.trace.steps[0].rule, Rule::Mod0);
        assert_eq!(c.trace.steps[0].to, 20);
    }

    #[test]
    fn named_families() {
        let c = open_case_construct(3, 3).unwrap();
        assert_eq!(c.partition.n(), 38);
        assert_eq!(c.trace.steps[0].rule, Rule::OpenK3);
        assert_eq!(c.trace.steps[0].to, 26);
        assert_eq!(
            c.trace.steps[0].removed,
            alloc::vec![Part::pair(3, 24), Part::pair(9, 18), Part::pair(12, 15), Part::pair(13, 14)]
        );
        let c = open_case_construct(4, 1).unwrap();
        assert_eq!(c.partition.n(), 86);
        assert_eq!(c.trace.steps[0].rule, Rule::OpenPower);
        assert!(c.partition.contains_part(&Part::triple(72, 85, 86)));
        assert!(c.partition.contains_part(&Part::single(9)));
        let c = open_case_construct(4, 5).unwrap();
        assert_eq!(c.trace.steps[0].rule, Rule::OpenK5);
        assert!(c.partition.contains_part(&Part::triple(21, 28, 32)));
        let c = open_case_construct(3, 2).unwrap();
        assert_eq!(c.trace.steps[0].rule, Rule::OpenK2);
        assert!(c.partition.contains_part(&Part::triple(3, 11, 13)));
    }

    #[test]
    fn split_construction() {
        // k = 9 has no named family or 3-nice window
        let c = open_case_construct(4, 9).unwrap();
        let s = &c.trace.steps[0];
        assert_eq!((s.rule, s.from, s.to), (Rule::OpenSplit, 110, 50));
        assert_eq!(c.trace.replay().unwrap(), c.partition);
        let high = |p: &Part| p.max() > 81;
        assert!(s.added.iter().filter(|p| high(p)).all(|p| p.sum() == 243));
    }

    #[test]
    fn pipeline_up_to_two_hundred() {
        for n in 1..=200 {
            let c = construct_3good(n).unwrap().unwrap_or_else(|| panic!("no construction for {n}"));
            assert_eq!(c.partition.n(), n);
            assert_eq!(c.trace.replay().unwrap(), c.partition, "n = {n}");
        }
    }

    #[test]
    fn powers_are_triplet_free() {
        for t in 1..=6 {
            let p = 3u64.pow(t);
            for n in [p - 1, p] {
                assert!(construct_3good(n).unwrap().unwrap().partition.triplets().is_empty(), "n = {n}");
            }
        }
    }

    #[test]
    fn scheme_lift_examples() {
        let s = crate::scheme::solve_offset_scheme(2, 1..=8, &[27, 9]).unwrap().unwrap();
        assert_eq!(scheme_to_partition(&s, 3).unwrap().n(), 35);
        let s = crate::scheme::solve_offset_scheme(3, 0..=11, &[27, 27, 9, 3]).unwrap().unwrap();
        assert_eq!(scheme_to_partition(&s, 4).unwrap().n(), 92);
        assert_eq!(scheme_to_partition(&s, 2), Err(Error::LiftOutOfRange { t: 2, k: 3 }));
    }
}

//! Offset pair-schemes and their lift around a power of three.
//!
//! A scheme pairs up an integer window `[lo, hi]` so that the pair sums
//! `s_i` are pairwise distinct, then regroups the sums into sets of at most
//! three whose totals are powers of 3. Around `N = 3^t` each pair `(a, b)`
//! becomes the triplet `(N - s, N + a, N + b)`, which takes `N - s` out of
//! the base pair `(s, N - s)` and frees `s` for its group.
//!
//! A split `(a, u, v)` with `u + v = a` instead places one window element
//! in the triplet `(N - u, N - v, N + a)`, consuming the base pairs of `u`
//! and `v`. Splits make odd windows possible.
//!
//! When both `s` and `N - s` are used they must form a group of their own:
//! the two triplets then consume the whole base pair and nothing is freed.

use alloc::vec::Vec;
use core::ops::{ControlFlow, RangeInclusive};

use crate::arith::{checked_pow, is_power_of};
use crate::partition::{GoodPartition, Instance, Part};
use crate::search::cover::{CoverStats, ExactCover, Restarts};
use crate::search::{Clock, NoClock, SearchBudget};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffsetScheme {
    pub k: u64,
    pub lo: u64,
    pub hi: u64,
    /// `(a, b)` with `a < b`, sorted by `a`.
    pub pairs: Vec<(u64, u64)>,
    /// `(a, u, v)` with `u < v` and `u + v = a`, sorted.
    pub splits: Vec<(u64, u64, u64)>,
    /// Groups of pair sums, each ascending; sorted.
    pub groups: Vec<Vec<u64>>,
}

impl OffsetScheme {
    /// Sorts pairs and groups into canonical order.
    pub fn new(k: u64, lo: u64, hi: u64, pairs: Vec<(u64, u64)>, groups: Vec<Vec<u64>>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut groups: Vec<Vec<u64>> = groups
            .into_iter()
            .map(|mut g| {
                g.sort_unstable();
                g
            })
            .collect();
        groups.sort_unstable();
        OffsetScheme { k, lo, hi, pairs, splits: Vec::new(), groups }
    }

    pub fn with_splits(mut self, splits: Vec<(u64, u64, u64)>) -> Self {
        self.splits = splits.into_iter().map(|(a, u, v)| (a, u.min(v), u.max(v))).collect();
        self.splits.sort_unstable();
        self
    }

    /// The base offsets consumed: pair sums, then split halves.
    pub fn sums(&self) -> Vec<u64> {
        let pairs = self.pairs.iter().map(|&(a, b)| a + b);
        pairs.chain(self.splits.iter().flat_map(|&(_, u, v)| [u, v])).collect()
    }

    /// Group totals, ascending.
    pub fn targets(&self) -> Vec<u64> {
        let mut t: Vec<u64> = self.groups.iter().map(|g| g.iter().sum()).collect();
        t.sort_unstable();
        t
    }

    /// Checks the scheme invariants, returning the first failure.
    pub fn check(&self) -> Result<(), &'static str> {
        if self.lo > self.hi {
            return Err("empty window");
        }
        if self.splits.iter().any(|&(a, u, v)| u + v != a || u == v || u == 0) {
            return Err("split halves must be distinct, positive and add up");
        }
        let len = (self.hi - self.lo + 1) as usize;
        let mut seen = alloc::vec![false; len];
        let singles = self.splits.iter().map(|&(a, _, _)| (a, None));
        for (a, b) in self.pairs.iter().map(|&(a, b)| (a, Some(b))).chain(singles) {
            for x in core::iter::once(a).chain(b) {
                if x < self.lo || x > self.hi {
                    return Err("pair element outside the window");
                }
                let i = (x - self.lo) as usize;
                if seen[i] {
                    return Err("window element used twice");
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err("window not covered");
        }
        let mut sums = self.sums();
        sums.sort_unstable();
        if sums.windows(2).any(|w| w[0] == w[1]) {
            return Err("consumed offsets not distinct");
        }
        let mut grouped: Vec<u64> = self.groups.iter().flatten().copied().collect();
        grouped.sort_unstable();
        if grouped != sums {
            return Err("groups do not partition the consumed offsets");
        }
        for g in &self.groups {
            if g.is_empty() || g.len() > 3 {
                return Err("group size outside 1..=3");
            }
            if is_power_of(3, g.iter().sum()).is_none() {
                return Err("group sum is not a power of 3");
            }
        }
        Ok(())
    }
}

/// Search parameters for [`solve_scheme`].
#[derive(Clone, Debug, Default)]
pub struct SchemeQuery {
    pub k: u64,
    pub lo: u64,
    pub hi: u64,
    /// Exact multiset of group totals; `None` accepts any powers of 3.
    pub targets: Option<Vec<u64>>,
    /// `allowed[s]` says whether sum `s` may be used; `None` allows all.
    pub allowed: Option<Vec<bool>>,
    /// The power `N` the scheme will be lifted around. Forbids using both
    /// `s` and `N - s` unless they form a group on their own.
    pub fold: Option<u64>,
    /// Allow splits; the window may then have odd length.
    pub splits: bool,
    /// Search with randomized restarts instead of one ordered pass.
    pub restarts: Option<Restarts>,
}

/// Runs the exact-cover model for `q`. Returns the first scheme in branch
/// order (if any) and the search statistics.
pub fn solve_scheme(
    q: &SchemeQuery,
    budget: SearchBudget,
    clock: &dyn Clock,
) -> Result<(Option<OffsetScheme>, CoverStats), Error> {
    if q.lo > q.hi || (!q.splits && !(q.hi - q.lo + 1).is_multiple_of(2)) {
        return Err(Error::Scheme("window length must be even"));
    }
    let total: u64 = (q.lo..=q.hi).sum();
    if let Some(t) = &q.targets {
        if t.iter().sum::<u64>() != total {
            return Err(Error::Scheme("window sum differs from target sum"));
        }
        if t.iter().any(|&p| is_power_of(3, p).is_none()) {
            return Err(Error::Scheme("target is not a power of 3"));
        }
    }
    let (lo, hi) = (q.lo, q.hi);
    let len = (hi - lo + 1) as usize;
    let smin = if q.splits { 1 } else { 2 * lo + 1 };
    let smax = 2 * hi - 1;
    let width = (smax - smin + 1) as usize;
    let allowed = |s: u64| {
        q.allowed.as_ref().is_none_or(|a| a.get(s as usize).copied().unwrap_or(false)) && q.fold.is_none_or(|n| s < n)
    };
    let in_range = |s: u64| s >= smin && s <= smax && allowed(s);

    // items: window | P_s | G_s | target slots || fold classes
    let p_item = |s: u64| (len + (s - smin) as usize) as u32;
    let g_item = |s: u64| (len + width + (s - smin) as usize) as u32;
    let slots = q.targets.as_ref().map_or(0, Vec::len);
    let primary = len + 2 * width + slots;
    let class_of = |s: u64| -> Option<u64> {
        let n = q.fold?;
        let c = s.min(n - s);
        (in_range(c) && in_range(n - c)).then_some(c)
    };
    let class_item = |c: u64| (primary + (c - smin) as usize) as u32;
    let mut ec = ExactCover::new(primary, if q.fold.is_some() { width } else { 0 });

    enum Row {
        Pair(u64, u64),
        Split(u64, u64, u64),
        Skip,
        Group(Vec<u64>),
    }
    let mut rows = Vec::new();
    for s in smin..=smax {
        ec.push(alloc::vec![p_item(s), g_item(s)]);
        rows.push(Row::Skip);
    }
    for a in lo..=hi {
        for b in a + 1..=hi {
            if in_range(a + b) {
                ec.push(alloc::vec![(a - lo) as u32, (b - lo) as u32, p_item(a + b)]);
                rows.push(Row::Pair(a, b));
            }
        }
        if q.splits {
            for u in 1..=a.saturating_sub(1) / 2 {
                let v = a - u;
                if in_range(u) && in_range(v) {
                    ec.push(alloc::vec![(a - lo) as u32, p_item(u), p_item(v)]);
                    rows.push(Row::Split(a, u, v));
                }
            }
        }
    }
    let mut push_group = |g: &[u64], p: u64| {
        let mut items: Vec<u32> = g.iter().map(|&s| g_item(s)).collect();
        let mut classes: Vec<u64> = g.iter().filter_map(|&s| class_of(s)).collect();
        classes.sort_unstable();
        classes.dedup();
        items.extend(classes.into_iter().map(class_item));
        match &q.targets {
            None => {
                ec.push(items);
                rows.push(Row::Group(g.to_vec()));
            }
            Some(t) => {
                for (j, _) in t.iter().enumerate().filter(|&(_, &tp)| tp == p) {
                    let mut it = items.clone();
                    it.push((len + 2 * width + j) as u32);
                    ec.push(it);
                    rows.push(Row::Group(g.to_vec()));
                }
            }
        }
    };
    let mut e = 0;
    while let Some(p) = checked_pow(3, e) {
        if p > 3 * smax {
            break;
        }
        e += 1;
        if q.targets.as_ref().is_some_and(|t| !t.contains(&p)) {
            continue;
        }
        if in_range(p) {
            push_group(&[p], p);
        }
        for s1 in smin..=smax {
            if 2 * s1 >= p {
                break;
            }
            if in_range(s1) && in_range(p - s1) {
                push_group(&[s1, p - s1], p);
            }
        }
        for s1 in smin..=smax {
            if 3 * s1 + 3 > p {
                break;
            }
            if !in_range(s1) {
                continue;
            }
            for s2 in s1 + 1..=smax {
                let s3 = p - s1 - s2;
                if s3 <= s2 {
                    break;
                }
                if in_range(s2) && in_range(s3) {
                    push_group(&[s1, s2, s3], p);
                }
            }
        }
    }

    let mut found = None;
    let mut visit = |chosen: &[usize]| {
        let mut pairs = Vec::new();
        let mut splits = Vec::new();
        let mut groups = Vec::new();
        for &r in chosen {
            match &rows[r] {
                Row::Pair(a, b) => pairs.push((*a, *b)),
                Row::Split(a, u, v) => splits.push((*a, *u, *v)),
                Row::Group(g) => groups.push(g.clone()),
                Row::Skip => {}
            }
        }
        found = Some(OffsetScheme::new(q.k, lo, hi, pairs, groups).with_splits(splits));
        ControlFlow::Break(())
    };
    let stats = match q.restarts {
        Some(r) => ec.solve_restarting(r, budget, clock, &mut visit),
        None => ec.solve(budget.with_solution_limit(1), clock, &mut visit),
    };
    if let Some(s) = &found {
        debug_assert_eq!(s.check(), Ok(()));
    }
    Ok((found, stats))
}

/// First scheme pairing `window` whose group totals are exactly `targets`.
pub fn solve_offset_scheme(
    k: u64,
    window: RangeInclusive<u64>,
    targets: &[u64],
) -> Result<Option<OffsetScheme>, Error> {
    let q = SchemeQuery {
        k,
        lo: *window.start(),
        hi: *window.end(),
        targets: Some(targets.to_vec()),
        ..SchemeQuery::default()
    };
    Ok(solve_scheme(&q, SearchBudget::UNLIMITED, &NoClock)?.0)
}

/// A lifted scheme: the new partition and the parts exchanged with the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifted {
    pub partition: GoodPartition,
    pub added: Vec<Part>,
    pub removed: Vec<Part>,
}

/// Lifts `scheme` around `N = 3^t` onto `base = par(N + lo - 1)`, producing
/// `par(N + hi)`. Fails with [`Error::LiftOutOfRange`] unless `2 hi < N`,
/// and with [`Error::MissingPair`] when the base lacks a pair the lift has
/// to split.
pub fn lift(scheme: &OffsetScheme, t: u32, base: &GoodPartition) -> Result<Lifted, Error> {
    scheme.check().map_err(Error::Scheme)?;
    let k = scheme.k;
    let big = match checked_pow(3, t) {
        Some(p) if t >= 1 && 2 * scheme.hi < p => p,
        _ => return Err(Error::LiftOutOfRange { t, k }),
    };
    if base.m() != 3 || base.n() + 1 != big + scheme.lo {
        return Err(Error::Scheme("scheme window does not match the base"));
    }
    let mut removed: Vec<Part> = Vec::new();
    let mut added = Vec::new();
    let mut consume = |s: u64| -> Result<(), Error> {
        if s >= big {
            return Err(Error::LiftOutOfRange { t, k });
        }
        let pair = Part::pair(s.min(big - s), s.max(big - s));
        if !base.contains_part(&pair) {
            return Err(Error::MissingPair(pair));
        }
        if !removed.contains(&pair) {
            removed.push(pair);
        }
        Ok(())
    };
    for &(a, b) in &scheme.pairs {
        consume(a + b)?;
        added.push(Part::triple(big - a - b, big + a, big + b));
    }
    for &(a, u, v) in &scheme.splits {
        consume(u)?;
        consume(v)?;
        added.push(Part::triple(big - v, big - u, big + a));
    }
    for g in &scheme.groups {
        let cancels = g.len() == 2 && g[0] + g[1] == big;
        if !cancels {
            added.push(Part::from_slice(g));
        }
    }
    let mut parts: Vec<Part> = base.parts().iter().filter(|p| !removed.contains(p)).cloned().collect();
    parts.extend(added.iter().cloned());
    let inst = Instance::new(big + scheme.hi, 3)?;
    let partition = GoodPartition::new(inst, parts).map_err(Error::Invalid)?;
    removed.sort_unstable();
    added.sort_unstable();
    Ok(Lifted { partition, added, removed })
}

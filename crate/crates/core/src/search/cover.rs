//! Exact cover solved with dancing links.
//!
//! [`ExactCover`] is a generic Algorithm X with primary items (covered
//! exactly once) and secondary items (covered at most once). Branching
//! picks the primary item with the fewest remaining options, first in item
//! order on ties. [`cover_search`] applies it to m-good partitions, with
//! items ordered from `n` down so that ties go to the larger element; it
//! serves as a second, independent counting route and finds witnesses for
//! some `n` where the anchored traversal thrashes.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{anchored_parts, reachable_powers, Clock, SearchBudget, SearchOutcome, Status, CLOCK_STRIDE, MAX_SEARCH_N};
use crate::arith::residue_checks;
use crate::partition::{GoodPartition, Instance, Part};
use crate::Error;

/// Refuse to build matrices with more option nodes than this.
pub const MAX_OPTION_NODES: usize = 1 << 26;

/// An exact-cover instance: items `0..primary` must be covered exactly
/// once, items `primary..primary + secondary` at most once.
#[derive(Clone, Debug, Default)]
pub struct ExactCover {
    pub primary: usize,
    pub secondary: usize,
    pub options: Vec<Vec<u32>>,
}

/// Result of [`ExactCover::solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverStats {
    pub solutions: u64,
    pub nodes: u64,
    /// False when a budget limit or the visitor stopped the search.
    pub exhausted: bool,
    pub budget_hit: bool,
}

impl ExactCover {
    pub fn new(primary: usize, secondary: usize) -> Self {
        ExactCover { primary, secondary, options: Vec::new() }
    }

    pub fn push(&mut self, option: Vec<u32>) {
        debug_assert!(option.iter().all(|&i| (i as usize) < self.primary + self.secondary));
        self.options.push(option);
    }

    /// Runs Algorithm X, handing each solution (as option indices, in
    /// choice order) to `visit`.
    pub fn solve(
        &self,
        budget: SearchBudget,
        clock: &dyn Clock,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> CoverStats {
        let mut links = Links::build(self.primary, self.secondary, &self.options);
        let mut stack: Vec<u32> = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        let mut stats = CoverStats { solutions: 0, nodes: 0, exhausted: false, budget_hit: false };
        // Descend: choose an item and try its first option. Ascend: advance
        // the option on top of the stack, popping exhausted levels.
        let mut descending = true;
        loop {
            if descending {
                if links.right[0] == 0 {
                    stats.solutions += 1;
                    chosen.clear();
                    chosen.extend(stack.iter().map(|&p| links.row[p as usize] as usize));
                    let flow = visit(&chosen);
                    if flow.is_break() || budget.solution_limit.is_some_and(|l| stats.solutions >= l) {
                        return stats;
                    }
                    descending = false;
                    continue;
                }
                let i = links.choose();
                links.cover(i);
                let p = links.down[i as usize];
                if p == i {
                    links.uncover(i);
                    descending = false;
                    continue;
                }
                links.commit(p);
                stack.push(p);
            } else {
                let Some(p) = stack.pop() else { break };
                links.uncommit(p);
                let i = links.top[p as usize];
                let q = links.down[p as usize];
                if q == i {
                    links.uncover(i);
                    continue;
                }
                links.commit(q);
                stack.push(q);
                descending = true;
            }
            stats.nodes += 1;
            let out_of_time =
                budget.time_limit.is_some_and(|t| stats.nodes.is_multiple_of(CLOCK_STRIDE) && clock.elapsed() >= t);
            if budget.node_limit.is_some_and(|l| stats.nodes >= l) || out_of_time {
                stats.budget_hit = true;
                return stats;
            }
        }
        stats.exhausted = true;
        stats
    }
}

/// Restart schedule for [`ExactCover::solve_restarting`]: run `i` gets
/// `unit * luby(i)` nodes on a freshly shuffled copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Restarts {
    pub seed: u64,
    pub unit: u64,
}

impl Default for Restarts {
    fn default() -> Self {
        Restarts { seed: 0, unit: 1000 }
    }
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ... for `i >= 1`.
pub fn luby(i: u64) -> u64 {
    let mut i = i.max(1);
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

impl ExactCover {
    /// A copy with options and item labels permuted; primary items stay
    /// primary. The second value maps new option indices to old ones.
    pub fn shuffled<R: Rng>(&self, rng: &mut R) -> (ExactCover, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.options.len()).collect();
        order.shuffle(rng);
        let mut label: Vec<u32> = (0..(self.primary + self.secondary) as u32).collect();
        label[..self.primary].shuffle(rng);
        label[self.primary..].shuffle(rng);
        let options = order.iter().map(|&o| self.options[o].iter().map(|&i| label[i as usize]).collect()).collect();
        (ExactCover { primary: self.primary, secondary: self.secondary, options }, order)
    }

    /// Searches for one solution with randomized restarts. Incomplete
    /// unless a run exhausts its tree, which proves there is no solution.
    /// Node and time limits apply to the total over all runs.
    pub fn solve_restarting(
        &self,
        restarts: Restarts,
        budget: SearchBudget,
        clock: &dyn Clock,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> CoverStats {
        let mut rng = ChaCha8Rng::seed_from_u64(restarts.seed);
        let mut total = CoverStats { solutions: 0, nodes: 0, exhausted: false, budget_hit: false };
        let mut mapped = Vec::new();
        for run in 1u64.. {
            let mut nodes = restarts.unit.max(1).saturating_mul(luby(run));
            if let Some(l) = budget.node_limit {
                nodes = nodes.min(l - total.nodes);
            }
            let (ec, order) = self.shuffled(&mut rng);
            let run_budget =
                SearchBudget { node_limit: Some(nodes), time_limit: budget.time_limit, solution_limit: Some(1) };
            let stats = ec.solve(run_budget, clock, &mut |rows| {
                mapped.clear();
                mapped.extend(rows.iter().map(|&r| order[r]));
                visit(&mapped)
            });
            total.nodes += stats.nodes;
            total.solutions += stats.solutions;
            if stats.solutions > 0 {
                return total;
            }
            if stats.exhausted {
                total.exhausted = true;
                return total;
            }
            let out_of_time = budget.time_limit.is_some_and(|t| clock.elapsed() >= t);
            if budget.node_limit.is_some_and(|l| total.nodes >= l) || out_of_time {
                total.budget_hit = true;
                return total;
            }
        }
        total
    }
}

struct Links {
    // headers first, then option nodes
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    top: Vec<u32>,
    /// option index of each node (unused for headers)
    row: Vec<u32>,
    len: Vec<u32>,
    /// node range of each option
    row_start: Vec<u32>,
    row_end: Vec<u32>,
}

impl Links {
    // header 0 is the root; item i has header i + 1
    fn build(primary: usize, secondary: usize, options: &[Vec<u32>]) -> Self {
        let headers = primary + secondary + 1;
        let total = headers + options.iter().map(Vec::len).sum::<usize>();
        let mut l = Links {
            left: Vec::with_capacity(headers),
            right: Vec::with_capacity(headers),
            up: (0..total as u32).collect(),
            down: (0..total as u32).collect(),
            top: alloc::vec![0; total],
            row: alloc::vec![0; total],
            len: alloc::vec![0; headers],
            row_start: Vec::with_capacity(options.len()),
            row_end: Vec::with_capacity(options.len()),
        };
        // primary headers form the circular list; secondary ones self-loop
        for i in 0..headers {
            if i > primary {
                l.left.push(i as u32);
                l.right.push(i as u32);
            } else {
                l.left.push(if i == 0 { primary as u32 } else { i as u32 - 1 });
                l.right.push(if i == primary { 0 } else { i as u32 + 1 });
            }
        }
        let mut next = headers as u32;
        for (r, opt) in options.iter().enumerate() {
            l.row_start.push(next);
            for &x in opt {
                let item = x + 1;
                let node = next;
                l.top[node as usize] = item;
                l.row[node as usize] = r as u32;
                let last = l.up[item as usize];
                l.up[node as usize] = last;
                l.down[node as usize] = item;
                l.down[last as usize] = node;
                l.up[item as usize] = node;
                l.len[item as usize] += 1;
                next += 1;
            }
            l.row_end.push(next);
        }
        l
    }

    fn hide_row_except(&mut self, p: u32) {
        let r = self.row[p as usize] as usize;
        for q in self.row_start[r]..self.row_end[r] {
            if q == p {
                continue;
            }
            let (u, d) = (self.up[q as usize], self.down[q as usize]);
            self.down[u as usize] = d;
            self.up[d as usize] = u;
            self.len[self.top[q as usize] as usize] -= 1;
        }
    }

    fn unhide_row_except(&mut self, p: u32) {
        let r = self.row[p as usize] as usize;
        for q in (self.row_start[r]..self.row_end[r]).rev() {
            if q == p {
                continue;
            }
            let (u, d) = (self.up[q as usize], self.down[q as usize]);
            self.down[u as usize] = q;
            self.up[d as usize] = q;
            self.len[self.top[q as usize] as usize] += 1;
        }
    }

    fn cover(&mut self, i: u32) {
        let (l, r) = (self.left[i as usize], self.right[i as usize]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut p = self.down[i as usize];
        while p != i {
            self.hide_row_except(p);
            p = self.down[p as usize];
        }
    }

    fn uncover(&mut self, i: u32) {
        let mut p = self.up[i as usize];
        while p != i {
            self.unhide_row_except(p);
            p = self.up[p as usize];
        }
        let (l, r) = (self.left[i as usize], self.right[i as usize]);
        self.right[l as usize] = i;
        self.left[r as usize] = i;
    }

    /// Covers the other items of the option containing `p`.
    fn commit(&mut self, p: u32) {
        let r = self.row[p as usize] as usize;
        for q in self.row_start[r]..self.row_end[r] {
            if q != p {
                self.cover(self.top[q as usize]);
            }
        }
    }

    fn uncommit(&mut self, p: u32) {
        let r = self.row[p as usize] as usize;
        for q in (self.row_start[r]..self.row_end[r]).rev() {
            if q != p {
                self.uncover(self.top[q as usize]);
            }
        }
    }

    /// Uncovered primary item with the fewest options, first on ties.
    fn choose(&self) -> u32 {
        let mut best = 0;
        let mut best_len = u32::MAX;
        let mut i = self.right[0];
        while i != 0 {
            let l = self.len[i as usize];
            if l < best_len {
                best_len = l;
                best = i;
                if l <= 1 {
                    break;
                }
            }
            i = self.right[i as usize];
        }
        best
    }
}

/// Every m-good part of `[n]`, grouped by maximum (descending) and in
/// branch order within a group.
pub fn all_parts(inst: Instance) -> Result<Vec<Vec<u32>>, Error> {
    if inst.n() > MAX_SEARCH_N {
        return Err(Error::BadBound(inst.n()));
    }
    let n = inst.n();
    let max_len = inst.m().min(n) as usize;
    let powers = reachable_powers(n, inst.m(), max_len);
    let mut options = Vec::new();
    let mut nodes = 0usize;
    let mut scratch = Vec::new();
    for x in (1..=n).rev() {
        anchored_parts(
            &powers,
            max_len,
            x,
            &mut scratch,
            |_| true,
            |p| {
                nodes += p.len();
                options.push(p.to_vec());
            },
        );
        if nodes > MAX_OPTION_NODES {
            return Err(Error::BadBound(n));
        }
    }
    Ok(options)
}

/// Dancing-links search over all m-good parts of `[n]`. Witnesses beyond
/// the first `keep` are only passed to `visit`.
pub fn cover_search(
    inst: Instance,
    budget: SearchBudget,
    clock: &dyn Clock,
    keep: usize,
    visit: &mut dyn FnMut(&GoodPartition) -> ControlFlow<()>,
) -> Result<SearchOutcome, Error> {
    if residue_checks(inst.n(), inst.m()).residue_excludes {
        return Ok(SearchOutcome {
            status: Status::ExhaustedNone,
            count: Some(0),
            witnesses: Vec::new(),
            solutions: 0,
            nodes: 0,
            elapsed: clock.elapsed(),
        });
    }
    let n = inst.n();
    let mut ec = ExactCover::new(n as usize, 0);
    for opt in all_parts(inst)? {
        // element x is item n - x
        ec.push(opt.iter().map(|&x| (n - x as u64) as u32).collect());
    }
    let mut witnesses = Vec::new();
    let stats = ec.solve(budget, clock, &mut |rows| {
        let parts = rows.iter().map(|&r| Part::new(ec.options[r].iter().map(|&i| n - i as u64).collect())).collect();
        let w = GoodPartition::new_unchecked(inst, parts);
        let flow = visit(&w);
        if witnesses.len() < keep {
            witnesses.push(w);
        }
        flow
    });
    let status = match (stats.solutions > 0, stats.budget_hit) {
        (true, _) => Status::Exists,
        (false, true) => Status::BudgetExceeded,
        (false, false) => Status::ExhaustedNone,
    };
    Ok(SearchOutcome {
        status,
        count: stats.exhausted.then_some(stats.solutions),
        witnesses,
        solutions: stats.solutions,
        nodes: stats.nodes,
        elapsed: clock.elapsed(),
    })
}

/// Parts of size at most `m` with `m`-power sums, drawn from the sorted,
/// duplicate-free `free`. Each part lists indices into `free`.
pub fn parts_within(free: &[u64], m: u64) -> Vec<Vec<u32>> {
    let max = free.last().copied().unwrap_or(0);
    let index = |x: u64| free.binary_search(&x).ok();
    let top: u64 = free.iter().rev().take(m as usize).sum();
    let mut powers = Vec::new();
    let mut p = 1u64;
    while p <= top {
        powers.push(p);
        match p.checked_mul(m) {
            Some(q) => p = q,
            None => break,
        }
    }
    let mut out = Vec::new();
    // prefix holds strictly increasing indices; the last element is looked up
    #[allow(clippy::too_many_arguments)]
    fn grow(
        free: &[u64],
        powers: &[u64],
        max_len: usize,
        max: u64,
        index: &dyn Fn(u64) -> Option<usize>,
        prefix: &mut Vec<u32>,
        sum: u64,
        out: &mut Vec<Vec<u32>>,
    ) {
        let last = prefix.last().map_or(-1, |&i| i as i64);
        for &p in powers {
            if p > sum && p - sum <= max {
                if let Some(i) = index(p - sum) {
                    if i as i64 > last {
                        let mut part = prefix.clone();
                        part.push(i as u32);
                        out.push(part);
                    }
                }
            }
        }
        if prefix.len() + 1 < max_len {
            for i in (last + 1) as usize..free.len() {
                if sum + free[i] >= *powers.last().unwrap_or(&0) {
                    break;
                }
                prefix.push(i as u32);
                grow(free, powers, max_len, max, index, prefix, sum + free[i], out);
                prefix.pop();
            }
        }
    }
    if !free.is_empty() {
        grow(free, &powers, m as usize, max, &index, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// Covers exactly the elements of `free` with `m`-good parts, returning the
/// first solution found within `budget`, optionally with restarts.
pub fn cover_elements(
    free: &[u64],
    m: u64,
    budget: SearchBudget,
    clock: &dyn Clock,
    restarts: Option<Restarts>,
) -> (Option<Vec<Part>>, CoverStats) {
    let mut free = free.to_vec();
    free.sort_unstable();
    free.dedup();
    if free.is_empty() {
        return (Some(Vec::new()), CoverStats { solutions: 1, nodes: 0, exhausted: true, budget_hit: false });
    }
    let mut ec = ExactCover::new(free.len(), 0);
    // larger elements first on ties
    let last = free.len() as u32 - 1;
    for opt in parts_within(&free, m) {
        ec.push(opt.iter().map(|&i| last - i).collect());
    }
    let mut found = None;
    let mut visit = |rows: &[usize]| {
        found = Some(
            rows.iter()
                .map(|&r| Part::new(ec.options[r].iter().map(|&i| free[(last - i) as usize]).collect()))
                .collect(),
        );
        ControlFlow::Break(())
    };
    let stats = match restarts {
        Some(r) => ec.solve_restarting(r, budget, clock, &mut visit),
        None => ec.solve(budget.with_solution_limit(1), clock, &mut visit),
    };
    (found, stats)
}

/// Parts exchanged when [`absorb`] succeeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absorbed {
    pub removed: Vec<Part>,
    pub added: Vec<Part>,
}

/// Re-covers the parts of `base` together with the new elements `extra`.
/// Frees the base parts whose least element is below a cut, raising the cut
/// in sixteenths of `n` until a cover of the freed elements is found. Every
/// attempt gets the full `budget`.
pub fn absorb(
    base: &GoodPartition,
    extra: &[u64],
    budget: SearchBudget,
    clock: &dyn Clock,
    restarts: Restarts,
) -> Option<Absorbed> {
    let n = base.n();
    let step = (n / 16).max(1);
    let mut cut = 0;
    loop {
        let removed: Vec<&Part> = base.parts().iter().filter(|&p| p.min() < cut).collect();
        let mut free: Vec<u64> = extra.to_vec();
        free.extend(removed.iter().flat_map(|p| p.elements().iter().copied()));
        if let (Some(added), _) = cover_elements(&free, base.m(), budget, clock, Some(restarts)) {
            return Some(Absorbed { removed: removed.into_iter().cloned().collect(), added });
        }
        if cut > n {
            return None;
        }
        cut += step;
    }
}

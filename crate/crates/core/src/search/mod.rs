//! Exact backtracking over m-good partitions.
//!
//! The free elements live in a bitset. Every step anchors on the largest
//! free element `x` and branches over the parts whose maximum is `x`: the
//! singleton (when `x` is a power of `m`), then pairs by ascending power,
//! then triples (and, for `m >= 4`, larger parts) by ascending power and
//! ascending smallest element. Each partition is reached along exactly one
//! path, so no deduplication is needed and the witness order is fixed.
//!
//! The traversal is iterative, so the stack depth does not grow with `n`.

pub mod cover;

use alloc::vec::Vec;
use core::ops::ControlFlow;
use core::time::Duration;

use crate::arith::{checked_pow, residue_checks};
use crate::partition::{GoodPartition, Instance, Part};
use crate::Error;

/// Largest `n` the engine accepts.
pub const MAX_SEARCH_N: u64 = 1 << 20;

/// Clock checks happen once per this many nodes.
const CLOCK_STRIDE: u64 = 1 << 12;

/// Source of elapsed time for time-limited searches.
pub trait Clock {
    fn elapsed(&self) -> Duration;
}

/// A clock that never advances; time limits are then never hit.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub solution_limit: Option<u64>,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget { node_limit: None, time_limit: None, solution_limit: None };

    pub fn nodes(limit: u64) -> Self {
        SearchBudget { node_limit: Some(limit), ..Self::UNLIMITED }
    }

    pub fn with_solution_limit(self, limit: u64) -> Self {
        SearchBudget { solution_limit: Some(limit), ..self }
    }

    pub fn with_time_limit(self, limit: Duration) -> Self {
        SearchBudget { time_limit: Some(limit), ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Exists,
    ExhaustedNone,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: Status,
    /// Exact number of partitions; present only when the whole tree was
    /// explored.
    pub count: Option<u64>,
    pub witnesses: Vec<GoodPartition>,
    /// Solutions seen, exact or not.
    pub solutions: u64,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchOutcome {
    fn empty(status: Status) -> Self {
        SearchOutcome { status, count: Some(0), witnesses: Vec::new(), solutions: 0, nodes: 0, elapsed: Duration::ZERO }
    }

    /// Associative merge of outcomes over disjoint subtrees, taken in
    /// subtree order. Witness order follows argument order.
    pub fn merge(mut self, other: SearchOutcome) -> SearchOutcome {
        let status = match (self.status, other.status) {
            (Status::BudgetExceeded, _) | (_, Status::BudgetExceeded) => Status::BudgetExceeded,
            (Status::Exists, _) | (_, Status::Exists) => Status::Exists,
            _ => Status::ExhaustedNone,
        };
        self.count = match (self.count, other.count, status) {
            (_, _, Status::BudgetExceeded) => None,
            (Some(a), Some(b), _) => Some(a + b),
            _ => None,
        };
        self.status = status;
        self.witnesses.extend(other.witnesses);
        self.solutions += other.solutions;
        self.nodes += other.nodes;
        self.elapsed = self.elapsed.max(other.elapsed);
        self
    }
}

/// Verdict of a two-witness uniqueness probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    Unique(GoodPartition),
    Multiple,
    None,
    BudgetExceeded,
}

/// Why a search stopped before exhausting the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Budget,
    Enough,
    Visitor,
}

/// Parts chosen along one root path, used to split the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub parts: Vec<Part>,
}

struct Level {
    anchor: u32,
    start: usize,
    end: usize,
    next: usize,
    /// Index of the option currently applied, if any.
    applied: Option<usize>,
}

/// Options are stored flattened: `lens[i]` elements starting at `offs[i]`.
#[derive(Default)]
struct Arena {
    elems: Vec<u32>,
    offs: Vec<usize>,
    lens: Vec<u8>,
}

impl Arena {
    fn push(&mut self, part: &[u32]) {
        self.offs.push(self.elems.len());
        self.lens.push(part.len() as u8);
        self.elems.extend_from_slice(part);
    }

    fn get(&self, i: usize) -> &[u32] {
        let o = self.offs[i];
        &self.elems[o..o + self.lens[i] as usize]
    }

    fn truncate(&mut self, count: usize) {
        if count < self.offs.len() {
            self.elems.truncate(self.offs[count]);
            self.offs.truncate(count);
            self.lens.truncate(count);
        }
    }

    fn len(&self) -> usize {
        self.offs.len()
    }
}

#[inline]
fn bit(words: &[u64], x: u64) -> bool {
    (words[(x / 64) as usize] >> (x % 64)) & 1 == 1
}

/// Powers of `m` that can be the sum of a part of `[n]` with at most
/// `max_len` elements.
pub(crate) fn reachable_powers(n: u64, m: u64, max_len: usize) -> Vec<u64> {
    let cap: u64 = (0..max_len as u64).map(|i| n - i).sum();
    let mut powers = Vec::new();
    let mut e = 0;
    while let Some(p) = checked_pow(m, e) {
        if p > cap {
            break;
        }
        powers.push(p);
        e += 1;
    }
    powers
}

/// Emits every part with maximum `x` whose other members satisfy `free`,
/// in branch order: singleton, pairs by ascending power, then parts of
/// size 3, 4, .. by ascending power and lexicographic members.
pub(crate) fn anchored_parts(
    powers: &[u64],
    max_len: usize,
    x: u64,
    scratch: &mut Vec<u32>,
    free: impl Fn(u64) -> bool,
    mut emit: impl FnMut(&[u32]),
) {
    if powers.binary_search(&x).is_ok() {
        emit(&[x as u32]);
    }
    if max_len >= 2 {
        for &p in powers {
            if p <= x {
                continue;
            }
            let y = p - x;
            if y >= x {
                break;
            }
            if free(y) {
                emit(&[y as u32, x as u32]);
            }
        }
    }
    if max_len >= 3 && x >= 3 {
        for &p in powers {
            if p <= x + 2 {
                continue;
            }
            let r = p - x;
            // y < z < x, y + z = r
            if r > 2 * x - 3 {
                break;
            }
            let mut y = if r > x - 1 { r - (x - 1) } else { 1 };
            while 2 * y < r {
                let z = r - y;
                if free(y) && free(z) {
                    emit(&[y as u32, z as u32, x as u32]);
                }
                y += 1;
            }
        }
    }
    for size in 4..=max_len {
        for &p in powers {
            if p <= x {
                continue;
            }
            scratch.clear();
            subsets(size - 1, p - x, 1, x, scratch, &free, &mut emit);
        }
    }
}

/// Ascending `count`-subsets of free elements in `[lo, hi)` summing to
/// `target`, emitted with `hi` appended.
fn subsets(
    count: usize,
    target: u64,
    lo: u64,
    hi: u64,
    chosen: &mut Vec<u32>,
    free: &impl Fn(u64) -> bool,
    emit: &mut impl FnMut(&[u32]),
) {
    if count == 0 {
        if target == 0 {
            chosen.push(hi as u32);
            emit(chosen);
            chosen.pop();
        }
        return;
    }
    let c = count as u64;
    // the c largest values below hi
    let max_sum = (c * (hi - 1)).saturating_sub(c * (c - 1) / 2);
    if max_sum < target {
        return;
    }
    let mut y = lo;
    while y + c <= hi && c * y + c * (c - 1) / 2 <= target {
        if free(y) {
            chosen.push(y as u32);
            subsets(count - 1, target - y, y + 1, hi, chosen, free, emit);
            chosen.pop();
        }
        y += 1;
    }
}

struct Engine<'c> {
    inst: Instance,
    max_len: usize,
    powers: Vec<u64>,
    free: Vec<u64>,
    arena: Arena,
    levels: Vec<Level>,
    nodes: u64,
    solutions: u64,
    budget: SearchBudget,
    clock: &'c dyn Clock,
    scratch: Vec<u32>,
}

impl<'c> Engine<'c> {
    fn new(inst: Instance, budget: SearchBudget, clock: &'c dyn Clock) -> Result<Self, Error> {
        if inst.n() > MAX_SEARCH_N {
            return Err(Error::BadBound(inst.n()));
        }
        let n = inst.n();
        let max_len = inst.m().min(n) as usize;
        let powers = reachable_powers(n, inst.m(), max_len);
        let words = (n as usize + 1).div_ceil(64);
        let mut free = alloc::vec![0u64; words];
        for x in 1..=n as usize {
            free[x / 64] |= 1 << (x % 64);
        }
        Ok(Engine {
            inst,
            max_len,
            powers,
            free,
            arena: Arena::default(),
            levels: Vec::new(),
            nodes: 0,
            solutions: 0,
            budget,
            clock,
            scratch: Vec::new(),
        })
    }

    #[inline]
    fn flip(&mut self, x: u32) {
        self.free[(x / 64) as usize] ^= 1 << (x % 64);
    }

    /// Largest free element `<= below`, or 0.
    fn largest_free(&self, below: u64) -> u64 {
        if below == 0 {
            return 0;
        }
        let mut w = (below / 64) as usize;
        let bit = below % 64;
        let mut word = self.free[w] & (u64::MAX >> (63 - bit));
        loop {
            if word != 0 {
                return w as u64 * 64 + 63 - word.leading_zeros() as u64;
            }
            if w == 0 {
                return 0;
            }
            w -= 1;
            word = self.free[w];
        }
    }

    /// Appends every part whose maximum is `x` (all other members free and
    /// smaller) to the arena, in branch order.
    fn generate(&mut self, x: u64) {
        let free = &self.free;
        let arena = &mut self.arena;
        anchored_parts(&self.powers, self.max_len, x, &mut self.scratch, |y| bit(free, y), |p| arena.push(p));
    }

    fn over_budget(&self) -> bool {
        if let Some(limit) = self.budget.node_limit {
            if self.nodes >= limit {
                return true;
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(CLOCK_STRIDE) && self.clock.elapsed() >= limit {
                return true;
            }
        }
        false
    }

    fn push_level(&mut self, anchor: u64) {
        let start = self.arena.len();
        self.generate(anchor);
        let end = self.arena.len();
        self.levels.push(Level { anchor: anchor as u32, start, end, next: start, applied: None });
    }

    fn chosen_parts(&self) -> Vec<Part> {
        let mut parts = Vec::with_capacity(self.levels.len());
        for lvl in &self.levels {
            if let Some(i) = lvl.applied {
                parts.push(Part::new(self.arena.get(i).iter().map(|&v| v as u64).collect()));
            }
        }
        parts
    }

    fn apply(&mut self, i: usize) {
        let (o, l) = (self.arena.offs[i], self.arena.lens[i] as usize);
        for k in o..o + l {
            let v = self.arena.elems[k];
            self.flip(v);
        }
    }

    /// Applies the parts of `prefix`, checking that each is an option at
    /// its anchor. Returns false when the prefix is not a valid root path.
    fn seed(&mut self, prefix: &[Part]) -> bool {
        let mut top = self.inst.n();
        for part in prefix {
            top = self.largest_free(top);
            if part.max() != top {
                return false;
            }
            self.push_level(top);
            let lvl = self.levels.last().unwrap();
            let found = (lvl.start..lvl.end)
                .find(|&i| self.arena.get(i).iter().map(|&v| v as u64).eq(part.elements().iter().copied()));
            let Some(i) = found else { return false };
            self.apply(i);
            let lvl = self.levels.last_mut().unwrap();
            lvl.applied = Some(i);
            // a seeded level never branches further
            lvl.next = lvl.end;
        }
        true
    }

    /// Depth-first traversal below the seeded levels. The visitor sees each
    /// complete partition as a list of parts in anchor order.
    fn run(&mut self, base_depth: usize, visit: &mut dyn FnMut(&Engine<'_>) -> ControlFlow<()>) -> Option<Stop> {
        let top = self.levels.last().map_or(self.inst.n(), |l| l.anchor as u64);
        let first = self.largest_free(top);
        if first == 0 {
            self.solutions += 1;
            if visit(self).is_break() {
                return Some(Stop::Visitor);
            }
            return None;
        }
        self.push_level(first);
        while self.levels.len() > base_depth {
            let depth = self.levels.len() - 1;
            if let Some(i) = self.levels[depth].applied.take() {
                self.apply(i);
            }
            let lvl = &mut self.levels[depth];
            if lvl.next == lvl.end {
                let start = lvl.start;
                self.levels.pop();
                self.arena.truncate(start);
                continue;
            }
            let i = lvl.next;
            lvl.next += 1;
            lvl.applied = Some(i);
            let anchor = lvl.anchor as u64;
            self.apply(i);
            self.nodes += 1;
            let next = self.largest_free(anchor - 1);
            if next == 0 {
                self.solutions += 1;
                if visit(self).is_break() {
                    return Some(Stop::Visitor);
                }
                if let Some(limit) = self.budget.solution_limit {
                    if self.solutions >= limit {
                        return Some(Stop::Enough);
                    }
                }
            } else {
                if self.over_budget() {
                    return Some(Stop::Budget);
                }
                self.push_level(next);
            }
        }
        None
    }
}

/// Mode of a full search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Collect {
    /// Keep up to this many witnesses.
    Witnesses(usize),
    /// Count only.
    CountOnly,
}

/// Runs the search below `prefix` (empty for the whole tree).
pub fn search_from(
    inst: Instance,
    prefix: &[Part],
    budget: SearchBudget,
    clock: &dyn Clock,
    collect: Collect,
) -> Result<SearchOutcome, Error> {
    if residue_checks(inst.n(), inst.m()).residue_excludes {
        return Ok(SearchOutcome::empty(Status::ExhaustedNone));
    }
    run_search(inst, prefix, budget, clock, collect)
}

/// Counts by walking the whole tree even when the residue test already
/// rules every partition out.
pub fn count_unpruned(inst: Instance, budget: SearchBudget, clock: &dyn Clock) -> Result<SearchOutcome, Error> {
    run_search(inst, &[], budget, clock, Collect::CountOnly)
}

fn run_search(
    inst: Instance,
    prefix: &[Part],
    budget: SearchBudget,
    clock: &dyn Clock,
    collect: Collect,
) -> Result<SearchOutcome, Error> {
    let mut engine = Engine::new(inst, budget, clock)?;
    if !engine.seed(prefix) {
        return Ok(SearchOutcome::empty(Status::ExhaustedNone));
    }
    let depth = engine.levels.len();
    let mut witnesses = Vec::new();
    let keep = match collect {
        Collect::Witnesses(k) => k,
        Collect::CountOnly => 0,
    };
    let stop = engine.run(depth, &mut |e| {
        if witnesses.len() < keep {
            witnesses.push(GoodPartition::new_unchecked(e.inst, e.chosen_parts()));
        }
        ControlFlow::Continue(())
    });
    let status = match stop {
        Some(Stop::Budget) => Status::BudgetExceeded,
        _ if engine.solutions > 0 => Status::Exists,
        _ => Status::ExhaustedNone,
    };
    let count = if stop.is_none() { Some(engine.solutions) } else { None };
    Ok(SearchOutcome {
        status,
        count,
        witnesses,
        solutions: engine.solutions,
        nodes: engine.nodes,
        elapsed: clock.elapsed(),
    })
}

/// Streams every partition (in branch order) to `visit` until it breaks
/// or the budget runs out. Returns the outcome without stored witnesses.
pub fn for_each(
    inst: Instance,
    budget: SearchBudget,
    clock: &dyn Clock,
    visit: &mut dyn FnMut(GoodPartition) -> ControlFlow<()>,
) -> Result<SearchOutcome, Error> {
    if residue_checks(inst.n(), inst.m()).residue_excludes {
        return Ok(SearchOutcome::empty(Status::ExhaustedNone));
    }
    let mut engine = Engine::new(inst, budget, clock)?;
    let stop = engine.run(0, &mut |e| visit(GoodPartition::new_unchecked(e.inst, e.chosen_parts())));
    let status = match stop {
        Some(Stop::Budget) => Status::BudgetExceeded,
        _ if engine.solutions > 0 => Status::Exists,
        _ => Status::ExhaustedNone,
    };
    Ok(SearchOutcome {
        status,
        count: if stop.is_none() { Some(engine.solutions) } else { None },
        witnesses: Vec::new(),
        solutions: engine.solutions,
        nodes: engine.nodes,
        elapsed: clock.elapsed(),
    })
}

pub fn enumerate(
    inst: Instance,
    budget: SearchBudget,
    clock: &dyn Clock,
    limit: Option<usize>,
) -> Result<SearchOutcome, Error> {
    search_from(inst, &[], budget, clock, Collect::Witnesses(limit.unwrap_or(usize::MAX)))
}

pub fn count(inst: Instance, budget: SearchBudget, clock: &dyn Clock) -> Result<SearchOutcome, Error> {
    search_from(inst, &[], budget, clock, Collect::CountOnly)
}

pub fn exists(inst: Instance, budget: SearchBudget, clock: &dyn Clock) -> Result<SearchOutcome, Error> {
    search_from(inst, &[], budget.with_solution_limit(1), clock, Collect::Witnesses(1))
}

pub fn is_unique(
    inst: Instance,
    budget: SearchBudget,
    clock: &dyn Clock,
) -> Result<(Uniqueness, SearchOutcome), Error> {
    let out = search_from(inst, &[], budget.with_solution_limit(2), clock, Collect::Witnesses(1))?;
    let verdict = match (out.status, out.solutions) {
        (_, s) if s >= 2 => Uniqueness::Multiple,
        (Status::BudgetExceeded, _) => Uniqueness::BudgetExceeded,
        (_, 1) => Uniqueness::Unique(out.witnesses[0].clone()),
        _ => Uniqueness::None,
    };
    Ok((verdict, out))
}

/// Root paths of length `depth` (or shorter, where the tree ends earlier),
/// in branch order. Searching below each and merging in order reproduces
/// the sequential result.
pub fn frontier(inst: Instance, depth: usize) -> Result<Vec<Prefix>, Error> {
    let mut out = Vec::new();
    if residue_checks(inst.n(), inst.m()).residue_excludes {
        return Ok(out);
    }
    let mut stack = alloc::vec![Vec::<Part>::new()];
    let clock = NoClock;
    while let Some(prefix) = stack.pop() {
        if prefix.len() == depth {
            out.push(Prefix { parts: prefix });
            continue;
        }
        let mut engine = Engine::new(inst, SearchBudget::UNLIMITED, &clock)?;
        let ok = engine.seed(&prefix);
        debug_assert!(ok);
        let top = engine.levels.last().map_or(inst.n(), |l| l.anchor as u64);
        let anchor = engine.largest_free(top);
        if anchor == 0 {
            out.push(Prefix { parts: prefix });
            continue;
        }
        engine.push_level(anchor);
        let lvl = engine.levels.last().unwrap();
        let children: Vec<Part> =
            (lvl.start..lvl.end).map(|i| Part::new(engine.arena.get(i).iter().map(|&v| v as u64).collect())).collect();
        for part in children.into_iter().rev() {
            let mut p = prefix.clone();
            p.push(part);
            stack.push(p);
        }
    }
    Ok(out)
}

//! The backtracking engine against an independent restricted-growth-string
//! enumeration, and against the dancing-links route.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use mgood_core::search::cover::cover_search;
use mgood_core::search::{count, count_unpruned, enumerate, is_unique, NoClock, SearchBudget, Status, Uniqueness};
use mgood_core::{render, GoodPartition, Instance};

fn inst(n: u64, m: u64) -> Instance {
    Instance::new(n, m).unwrap()
}

fn is_power(m: u64, mut x: u64) -> bool {
    if x == 0 {
        return false;
    }
    while x.is_multiple_of(m) {
        x /= m;
    }
    x == 1
}

/// Every set partition of `[n]` as a restricted growth string, kept when
/// each block has at most `m` elements and a power-of-`m` sum. Rendered in
/// the same notation the engine uses: blocks by least element, elements
/// ascending.
fn oracle(n: usize, m: u64) -> BTreeSet<String> {
    fn rec(i: usize, n: usize, m: u64, rgs: &mut Vec<usize>, blocks: &mut Vec<Vec<u64>>, out: &mut BTreeSet<String>) {
        if i == n {
            let ok = blocks.iter().all(|b| is_power(m, b.iter().sum()));
            if ok {
                let text: Vec<String> = blocks
                    .iter()
                    .map(|b| format!("({})", b.iter().map(u64::to_string).collect::<Vec<_>>().join("+")))
                    .collect();
                out.insert(text.join("+"));
            }
            return;
        }
        let x = i as u64 + 1;
        for j in 0..=blocks.len() {
            if j == blocks.len() {
                blocks.push(vec![x]);
            } else if blocks[j].len() < m as usize {
                blocks[j].push(x);
            } else {
                continue;
            }
            rgs.push(j);
            rec(i + 1, n, m, rgs, blocks, out);
            rgs.pop();
            if blocks[j].len() == 1 {
                blocks.pop();
            } else {
                blocks[j].pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(0, n, m, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn engine_set(n: u64, m: u64) -> Vec<String> {
    let out = enumerate(inst(n, m), SearchBudget::UNLIMITED, &NoClock, None).unwrap();
    out.witnesses.iter().map(render).collect()
}

#[test]
fn enumeration_equals_oracle_up_to_twelve() {
    for m in [2, 3, 4] {
        for n in 1..=12 {
            let got = engine_set(n, m);
            let set: BTreeSet<String> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicate witness at n = {n}, m = {m}");
            assert_eq!(set, oracle(n as usize, m), "n = {n}, m = {m}");
        }
    }
}

#[test]
fn count_matches_enumeration() {
    for n in 1..=26 {
        let c = count(inst(n, 3), SearchBudget::UNLIMITED, &NoClock).unwrap();
        let e = engine_set(n, 3);
        assert_eq!(c.count, Some(e.len() as u64), "n = {n}");
        assert_eq!(e.iter().collect::<BTreeSet<_>>().len(), e.len());
    }
}

#[test]
fn dancing_links_counts_agree() {
    for (m, top) in [(3, 30), (4, 22), (2, 40)] {
        for n in 1..=top {
            let a = count(inst(n, m), SearchBudget::UNLIMITED, &NoClock).unwrap();
            let b = cover_search(inst(n, m), SearchBudget::UNLIMITED, &NoClock, 0, &mut |_| ControlFlow::Continue(()))
                .unwrap();
            assert_eq!(a.count, b.count, "n = {n}, m = {m}");
        }
    }
}

#[test]
fn dancing_links_witnesses_validate() {
    let mut seen = BTreeSet::new();
    let out = cover_search(inst(18, 3), SearchBudget::UNLIMITED, &NoClock, usize::MAX, &mut |w| {
        assert!(GoodPartition::new(w.instance(), w.parts().to_vec()).is_ok());
        ControlFlow::Continue(())
    })
    .unwrap();
    for w in &out.witnesses {
        assert!(seen.insert(render(w)));
    }
    assert_eq!(seen.len(), 95);
}

#[test]
fn obstruction_instances_are_empty() {
    // the m = 7, t = 2 instance takes tens of seconds and runs in the
    // acceptance suite
    for m in 4..=7u64 {
        for t in 0..=2u64 {
            if m == 7 && t == 2 {
                continue;
            }
            let n = 2 * (m * t + 1);
            let out = count_unpruned(inst(n, m), SearchBudget::UNLIMITED, &NoClock).unwrap();
            assert_eq!(out.count, Some(0), "m = {m}, n = {n}");
            assert_eq!(out.status, Status::ExhaustedNone);
        }
    }
}

#[test]
fn uniqueness_probe() {
    assert!(matches!(is_unique(inst(14, 3), SearchBudget::UNLIMITED, &NoClock).unwrap().0, Uniqueness::Unique(_)));
    assert_eq!(is_unique(inst(13, 3), SearchBudget::UNLIMITED, &NoClock).unwrap().0, Uniqueness::Multiple);
    assert_eq!(is_unique(inst(2, 5), SearchBudget::UNLIMITED, &NoClock).unwrap().0, Uniqueness::None);
}

#[test]
fn budget_is_reported() {
    let out = count(inst(40, 3), SearchBudget::nodes(1000), &NoClock).unwrap();
    assert_eq!(out.status, Status::BudgetExceeded);
    assert_eq!(out.count, None);
}

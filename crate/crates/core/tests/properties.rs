use std::collections::BTreeSet;

use mgood_core::search::{enumerate, NoClock, SearchBudget};
use mgood_core::{
    construct_2good, construct_3good, parse, render, restore_from_triplets, symmetric_partition, GoodPartition,
    Instance, Part, Rule,
};
use proptest::prelude::*;

fn built(n: u64) -> GoodPartition {
    construct_3good(n).unwrap().unwrap_or_else(|| panic!("no construction for {n}")).partition
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn render_parse_round_trip(n in 1u64..=400) {
        let p = built(n);
        let text = render(&p);
        prop_assert_eq!(parse(&text, n, 3).unwrap(), p);
    }

    #[test]
    fn restore_rebuilds_constructions(n in 1u64..=400) {
        let p = built(n);
        prop_assert_eq!(restore_from_triplets(&p.triplet_set()).unwrap(), p);
    }

    #[test]
    fn two_good_round_trip(n in 1u64..=5000) {
        let c = construct_2good(n).unwrap();
        prop_assert_eq!(parse(&render(&c.partition), n, 2).unwrap(), c.partition.clone());
        prop_assert_eq!(c.trace.replay().unwrap(), c.partition);
    }

    #[test]
    fn parse_rejects_shuffled_junk(s in "[()+0-9 ]{0,24}") {
        // whatever it is, a successful parse must be a valid partition
        if let Ok(p) = parse(&s, 6, 3) {
            prop_assert!(GoodPartition::new(p.instance(), p.parts().to_vec()).is_ok());
        }
    }
}

#[test]
fn restore_round_trip_on_every_enumerated_partition() {
    for n in 1..=20 {
        let all = enumerate(Instance::new(n, 3).unwrap(), SearchBudget::UNLIMITED, &NoClock, None).unwrap();
        assert!(!all.witnesses.is_empty());
        for p in &all.witnesses {
            assert_eq!(&restore_from_triplets(&p.triplet_set()).unwrap(), p, "n = {n}");
        }
    }
}

#[test]
fn mirror_steps_preserve_triplets() {
    let mut mirror_steps = 0;
    for n in 1..=364 {
        let c = construct_3good(n).unwrap().unwrap();
        assert_eq!(c.trace.replay().unwrap(), c.partition);
        for s in c.trace.steps.iter().filter(|s| s.rule == Rule::Mirror) {
            mirror_steps += 1;
            assert!(s.removed.is_empty(), "n = {n}, step {} -> {}", s.from, s.to);
            assert!(s.added.iter().all(|p| p.len() == 2), "n = {n}, step {} -> {}", s.from, s.to);
            let p = 3u64.pow(s.added[0].sum().ilog(3));
            assert!(s.added.iter().all(|q| q.sum() == p));
            assert_eq!(s.to, p - s.from - 1);
        }
        // the outermost mirror keeps every triplet of the base
        if let Some(s) = c.trace.steps.first().filter(|s| s.rule == Rule::Mirror) {
            let base = match s.to {
                0 => Vec::new(),
                to => construct_3good(to).unwrap().unwrap().partition.triplets(),
            };
            assert_eq!(c.partition.triplets(), base, "n = {n}");
        }
    }
    assert!(mirror_steps > 100);
}

/// Exhaustive zero-sum partition of `[-l, l]` into triples, allowing the
/// singleton `(0)`.
fn symmetric_exists(l: i64) -> bool {
    fn rec(free: &mut BTreeSet<i64>) -> bool {
        let Some(&x) = free.iter().next() else { return true };
        free.remove(&x);
        if x == 0 && rec(free) {
            return true;
        }
        let rest: Vec<i64> = free.iter().copied().collect();
        for (i, &y) in rest.iter().enumerate() {
            let z = -x - y;
            if z > y && rest[i + 1..].contains(&z) {
                free.remove(&y);
                free.remove(&z);
                let ok = rec(free);
                free.insert(y);
                free.insert(z);
                if ok {
                    return true;
                }
            }
        }
        free.insert(x);
        false
    }
    rec(&mut (-l..=l).collect())
}

#[test]
fn symmetric_partitions() {
    for l in 0..=300u64 {
        match symmetric_partition(l) {
            Some(p) => assert!(p.is_valid(), "radius {l}"),
            None => assert_eq!(l % 3, 2),
        }
    }
    for l in [2, 5, 8] {
        assert!(!symmetric_exists(l), "radius {l}");
    }
    for l in [1, 3, 4, 6, 7] {
        assert!(symmetric_exists(l), "radius {l}");
    }
}

#[test]
fn two_good_is_the_unique_witness() {
    for n in 1..=30 {
        let all = enumerate(Instance::new(n, 2).unwrap(), SearchBudget::UNLIMITED, &NoClock, None).unwrap();
        assert_eq!(all.witnesses.len(), 1, "n = {n}");
        assert_eq!(all.witnesses[0], construct_2good(n).unwrap().partition);
    }
}

#[test]
fn known_displays() {
    assert_eq!(render(&built(11)), "(1+8)+(2+7)+(3)+(4+5)+(6+10+11)+(9)");
    let p = built(38);
    let want = [(12, 33, 36), (13, 31, 37), (14, 29, 38), (15, 32, 34), (18, 28, 35), (24, 27, 30)];
    assert_eq!(p.triplets(), want.map(|(a, b, c)| Part::triple(a, b, c)).to_vec());
    assert!(p.contains_part(&Part::single(3)) && p.contains_part(&Part::single(9)));
}

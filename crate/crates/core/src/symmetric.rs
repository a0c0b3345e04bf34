//! Zero-sum triple partitions of symmetric intervals `[-l, l]`.
//!
//! For `l = 3k` the parts are `(0)` and, for `0 <= i < k`, the triples
//! `(-3k + i, 1 + i, 3k - 1 - 2i)` and `(-2k + i, -k + i, 3k - 2i)`.
//! For `l = 3k + 1` the singleton becomes `(-l, 0, l)`. When `l = 3k + 2`
//! the interval has `2 (mod 3)` elements and no such partition exists.

use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPartition {
    pub radius: u64,
    /// Zero-sum triples, plus `[0]` when the radius is divisible by 3.
    pub parts: Vec<Vec<i64>>,
}

pub fn symmetric_partition(radius: u64) -> Option<SymmetricPartition> {
    let l = radius as i64;
    let k = l / 3;
    let mut parts = Vec::with_capacity(2 * k as usize + 1);
    match l % 3 {
        0 => parts.push(alloc::vec![0]),
        1 => parts.push(alloc::vec![-l, 0, l]),
        _ => return None,
    }
    for i in 0..k {
        parts.push(alloc::vec![-3 * k + i, 1 + i, 3 * k - 1 - 2 * i]);
        parts.push(alloc::vec![-2 * k + i, -k + i, 3 * k - 2 * i]);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_unstable();
    Some(SymmetricPartition { radius, parts })
}

impl SymmetricPartition {
    /// Checks disjointness, coverage of `[-l, l]`, zero sums and part shape.
    pub fn is_valid(&self) -> bool {
        let l = self.radius as i64;
        let mut seen = alloc::vec![false; 2 * self.radius as usize + 1];
        for p in &self.parts {
            let shape_ok = p.len() == 3 || (p.len() == 1 && p[0] == 0 && l % 3 == 0);
            if !shape_ok || p.iter().sum::<i64>() != 0 {
                return false;
            }
            for &x in p {
                if x < -l || x > l || seen[(x + l) as usize] {
                    return false;
                }
                seen[(x + l) as usize] = true;
            }
        }
        seen.iter().all(|&s| s)
    }
}

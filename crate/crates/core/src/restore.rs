//! Rebuilds a 3-good partition from its triplets.
//!
//! Scanning downward, the largest uncovered `x` is forced: a power of three
//! must stay a singleton (adding smaller numbers cannot reach the next
//! power), anything else can only pair with `3^t - x` where `3^t` is the
//! least power of three above `x`, and that partner must be smaller than `x`
//! and still uncovered.

use alloc::vec::Vec;

use crate::arith::{is_power_of, next_power_above};
use crate::partition::{GoodPartition, Instance, Part, TripletSet};
use crate::Error;

pub fn restore_from_triplets(ts: &TripletSet) -> Result<GoodPartition, Error> {
    let inst = Instance::new(ts.n, 3)?;
    let n = ts.n as usize;
    let mut covered = alloc::vec![false; n + 1];
    let mut parts: Vec<Part> = Vec::with_capacity(n / 2 + ts.triplets.len());
    for t in &ts.triplets {
        if t.len() != 3 || t.exponent(3).is_none() {
            return Err(Error::BadTriplet(t.clone()));
        }
        for &x in t.elements() {
            if x == 0 || x as usize > n || covered[x as usize] {
                return Err(Error::BadTriplet(t.clone()));
            }
            covered[x as usize] = true;
        }
        parts.push(t.clone());
    }
    for x in (1..=n as u64).rev() {
        if covered[x as usize] {
            continue;
        }
        covered[x as usize] = true;
        if is_power_of(3, x).is_some() {
            parts.push(Part::single(x));
            continue;
        }
        let partner = next_power_above(3, x) - x;
        if partner >= x {
            return Err(Error::NoCompletion("forced partner is not smaller"));
        }
        if covered[partner as usize] {
            return Err(Error::NoCompletion("forced partner already covered"));
        }
        covered[partner as usize] = true;
        parts.push(Part::pair(partner, x));
    }
    GoodPartition::new(inst, parts).map_err(Error::Invalid)
}

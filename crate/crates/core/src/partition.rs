//! Parts, candidate partitions and the validator that defines m-goodness.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::arith::{is_power_of, triangular, MAX_N};
use crate::Error;

/// A problem instance: partition `{1, ..., n}` into parts of size at most
/// `m` whose sums are powers of `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    n: u64,
    m: u64,
}

impl Instance {
    pub fn new(n: u64, m: u64) -> Result<Self, Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::BadBound(n));
        }
        if m < 2 {
            return Err(Error::BadBase(m));
        }
        Ok(Instance { n, m })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

/// One block of a partition. Elements are kept sorted; nothing else is
/// enforced here so that arbitrary candidates can be handed to [`validate`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Part {
    elements: Vec<u64>,
    sum: u64,
}

impl Part {
    pub fn new(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        let sum = elements.iter().sum();
        Part { elements, sum }
    }

    pub fn from_slice(elements: &[u64]) -> Self {
        Self::new(elements.to_vec())
    }

    pub fn single(x: u64) -> Self {
        Part { elements: alloc::vec![x], sum: x }
    }

    pub fn pair(a: u64, b: u64) -> Self {
        Self::new(alloc::vec![a, b])
    }

    pub fn triple(a: u64, b: u64, c: u64) -> Self {
        Self::new(alloc::vec![a, b, c])
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.sum
    }

    /// Smallest element, or 0 for an empty part.
    pub fn min(&self) -> u64 {
        self.elements.first().copied().unwrap_or(0)
    }

    pub fn max(&self) -> u64 {
        self.elements.last().copied().unwrap_or(0)
    }

    /// `Some(e)` when the sum is `m^e`.
    pub fn exponent(&self, m: u64) -> Option<u32> {
        is_power_of(m, self.sum)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

impl fmt::Debug for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Ord for Part {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl PartialOrd for Part {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A single reason a candidate fails to be m-good.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyPart { part: usize },
    PartTooLarge { part: usize, len: usize, m: u64 },
    RepeatedInPart { part: usize, value: u64 },
    OutOfRange { part: usize, value: u64 },
    SumNotPower { part: usize, sum: u64 },
    Overlap { value: u64 },
    Missing { value: u64 },
    TotalMismatch { total: u128, expected: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyPart { part } => write!(f, "part #{part} is empty"),
            Violation::PartTooLarge { part, len, m } => {
                write!(f, "part #{part} has {len} elements, more than m = {m}")
            }
            Violation::RepeatedInPart { part, value } => {
                write!(f, "part #{part} repeats {value}")
            }
            Violation::OutOfRange { part, value } => {
                write!(f, "part #{part} contains {value}, outside [1, n]")
            }
            Violation::SumNotPower { part, sum } => {
                write!(f, "part #{part} sums to {sum}, not a power of m")
            }
            Violation::Overlap { value } => write!(f, "{value} appears in more than one part"),
            Violation::Missing { value } => write!(f, "{value} is not covered"),
            Violation::TotalMismatch { total, expected } => {
                write!(f, "parts sum to {total}, expected n(n+1)/2 = {expected}")
            }
        }
    }
}

/// Checks every m-good rule on an arbitrary collection of parts. Returns
/// the empty list iff the collection is an m-good partition of `[n]`.
pub fn violations(inst: Instance, parts: &[Part]) -> Vec<Violation> {
    let (n, m) = (inst.n(), inst.m());
    let mut out = Vec::new();
    // owner[x] = 1 + index of the first part containing x
    let mut owner = alloc::vec![0usize; n as usize + 1];
    let mut total: u128 = 0;
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            out.push(Violation::EmptyPart { part: i });
            continue;
        }
        if part.len() as u64 > m {
            out.push(Violation::PartTooLarge { part: i, len: part.len(), m });
        }
        for w in part.elements().windows(2) {
            if w[0] == w[1] {
                out.push(Violation::RepeatedInPart { part: i, value: w[0] });
            }
        }
        for &x in part.elements() {
            total += x as u128;
            if x == 0 || x > n {
                out.push(Violation::OutOfRange { part: i, value: x });
            } else if owner[x as usize] == 0 {
                owner[x as usize] = i + 1;
            } else if owner[x as usize] != i + 1 {
                out.push(Violation::Overlap { value: x });
            }
        }
        if part.exponent(m).is_none() {
            out.push(Violation::SumNotPower { part: i, sum: part.sum() });
        }
    }
    for x in 1..=n {
        if owner[x as usize] == 0 {
            out.push(Violation::Missing { value: x });
        }
    }
    let expected = triangular(n);
    if total != expected as u128 {
        out.push(Violation::TotalMismatch { total, expected });
    }
    out
}

/// Validation verdict: `Ok(())` or the complete list of violations.
pub fn validate(inst: Instance, parts: &[Part]) -> Result<(), Vec<Violation>> {
    let v = violations(inst, parts);
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// A validated m-good partition of `[n]`, parts in canonical order
/// (ascending elements within a part, parts by ascending minimum).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoodPartition {
    inst: Instance,
    parts: Vec<Part>,
}

impl GoodPartition {
    /// Validates and canonicalizes `parts`.
    pub fn new(inst: Instance, mut parts: Vec<Part>) -> Result<Self, Vec<Violation>> {
        validate(inst, &parts)?;
        parts.sort_unstable_by_key(Part::min);
        Ok(GoodPartition { inst, parts })
    }

    /// For parts already known to be valid; checked in debug builds.
    pub(crate) fn new_unchecked(inst: Instance, mut parts: Vec<Part>) -> Self {
        debug_assert_eq!(validate(inst, &parts), Ok(()));
        parts.sort_unstable_by_key(Part::min);
        GoodPartition { inst, parts }
    }

    /// The empty partition of `[0]`, the terminal of every reduction.
    pub(crate) fn new_unchecked_empty(m: u64) -> Self {
        GoodPartition { inst: Instance { n: 0, m }, parts: Vec::new() }
    }

    pub fn instance(&self) -> Instance {
        self.inst
    }

    pub fn n(&self) -> u64 {
        self.inst.n()
    }

    pub fn m(&self) -> u64 {
        self.inst.m()
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Part> {
        self.parts
    }

    /// Parts of size three, in canonical order.
    pub fn triplets(&self) -> Vec<Part> {
        self.parts.iter().filter(|p| p.len() == 3).cloned().collect()
    }

    pub fn triplet_set(&self) -> TripletSet {
        TripletSet { n: self.n(), triplets: self.triplets() }
    }

    /// The part containing `x`, if any.
    pub fn part_of(&self, x: u64) -> Option<&Part> {
        self.parts.iter().find(|p| p.contains(x))
    }

    pub fn contains_part(&self, part: &Part) -> bool {
        self.parts.binary_search_by(|p| p.min().cmp(&part.min())).is_ok_and(|i| self.parts[i] == *part)
    }
}

impl fmt::Debug for GoodPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::notation::render(self))
    }
}

impl fmt::Display for GoodPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::notation::render(self))
    }
}

impl Ord for GoodPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.inst.n(), self.inst.m(), &self.parts).cmp(&(other.inst.n(), other.inst.m(), &other.parts))
    }
}

impl PartialOrd for GoodPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical form of a valid part collection; rejects invalid input with
/// the violation list.
pub fn canonicalize(n: u64, m: u64, parts: Vec<Part>) -> Result<GoodPartition, Error> {
    let inst = Instance::new(n, m)?;
    GoodPartition::new(inst, parts).map_err(Error::Invalid)
}

/// The triplets of a 3-good partition together with its bound `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripletSet {
    pub n: u64,
    pub triplets: Vec<Part>,
}

impl TripletSet {
    pub fn new(n: u64, triplets: Vec<Part>) -> Result<Self, Error> {
        let mut seen = alloc::collections::BTreeSet::new();
        for t in &triplets {
            if t.len() != 3 {
                return Err(Error::BadTriplet(t.clone()));
            }
            for &x in t.elements() {
                if x == 0 || x > n || !seen.insert(x) {
                    return Err(Error::BadTriplet(t.clone()));
                }
            }
        }
        Ok(TripletSet { n, triplets })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn inst(n: u64, m: u64) -> Instance {
        Instance::new(n, m).unwrap()
    }

    #[test]
    fn accepts_small_examples() {
        let p = vec![Part::pair(1, 2), Part::pair(3, 6), Part::pair(4, 5)];
        assert_eq!(validate(inst(6, 3), &p), Ok(()));
        let p = vec![Part::pair(1, 3), Part::single(2), Part::single(4)];
        assert_eq!(validate(inst(4, 2), &p), Ok(()));
    }

    #[test]
    fn rejects_bad_sums() {
        let p = vec![Part::pair(1, 2), Part::pair(3, 5), Part::single(4)];
        let v = validate(inst(5, 3), &p).unwrap_err();
        assert_eq!(v, vec![Violation::SumNotPower { part: 1, sum: 8 }, Violation::SumNotPower { part: 2, sum: 4 }]);
    }

    #[test]
    fn rejects_structure_errors() {
        let p = vec![Part::pair(1, 2), Part::new(vec![2, 2, 5]), Part::single(7)];
        let v = violations(inst(6, 3), &p);
        assert!(v.contains(&Violation::RepeatedInPart { part: 1, value: 2 }));
        assert!(v.contains(&Violation::Overlap { value: 2 }));
        assert!(v.contains(&Violation::OutOfRange { part: 2, value: 7 }));
        assert!(v.contains(&Violation::Missing { value: 3 }));
        assert!(v.iter().any(|x| matches!(x, Violation::TotalMismatch { .. })));

        let v = violations(inst(10, 3), &[Part::new(vec![1, 2, 3, 4]), Part::new(vec![])]);
        assert!(v.contains(&Violation::PartTooLarge { part: 0, len: 4, m: 3 }));
        assert!(v.contains(&Violation::EmptyPart { part: 1 }));
    }

    #[test]
    fn canonical_order() {
        let g = canonicalize(5, 3, vec![Part::pair(4, 5), Part::pair(2, 1), Part::single(3)]).unwrap();
        assert_eq!(g.parts(), &[Part::pair(1, 2), Part::single(3), Part::pair(4, 5)]);
        let again = canonicalize(5, 3, g.parts().to_vec()).unwrap();
        assert_eq!(again, g);
        let g = canonicalize(2, 3, vec![Part::new(vec![2, 1])]).unwrap();
        assert_eq!(g.parts(), &[Part::pair(1, 2)]);
        assert!(g.contains_part(&Part::pair(1, 2)));
    }

    #[test]
    fn instance_bounds() {
        assert!(Instance::new(0, 3).is_err());
        assert!(Instance::new(5, 1).is_err());
        assert!(Instance::new(MAX_N + 1, 3).is_err());
        assert!(Instance::new(MAX_N, 3).is_ok());
    }

    #[test]
    fn triplet_sets_reject_overlap() {
        assert!(TripletSet::new(11, vec![Part::triple(6, 10, 11)]).is_ok());
        assert!(TripletSet::new(11, vec![Part::triple(6, 10, 11), Part::triple(1, 2, 6)]).is_err());
        assert!(TripletSet::new(9, vec![Part::triple(6, 10, 11)]).is_err());
        assert!(TripletSet::new(9, vec![Part::pair(1, 8)]).is_err());
    }
}

//! Exact integer helpers: powers of a base, triangular numbers and the
//! residue predicates that rule out m-good partitions for some n.

/// Largest admissible ground-set bound. With `n <= 2^31` every part sum and
/// `n(n+1)/2` fit in a `u64` with room to spare.
pub const MAX_N: u64 = 1 << 31;

/// Returns `Some(e)` iff `x == m^e`. Uses repeated exact division only.
pub fn is_power_of(m: u64, x: u64) -> Option<u32> {
    if m < 2 || x == 0 {
        return None;
    }
    let mut x = x;
    let mut e = 0;
    while x.is_multiple_of(m) {
        x /= m;
        e += 1;
    }
    (x == 1).then_some(e)
}

/// `m^e`, or `None` on overflow.
pub fn checked_pow(m: u64, e: u32) -> Option<u64> {
    m.checked_pow(e)
}

/// Largest `e` with `m^e <= x`, for `x >= 1`.
pub fn floor_log(m: u64, x: u64) -> u32 {
    debug_assert!(m >= 2 && x >= 1);
    let mut e = 0;
    let mut p = 1u64;
    while let Some(next) = p.checked_mul(m) {
        if next > x {
            break;
        }
        p = next;
        e += 1;
    }
    e
}

/// Smallest power of `m` strictly greater than `x`.
pub fn next_power_above(m: u64, x: u64) -> u64 {
    let mut p = 1u64;
    while p <= x {
        p *= m;
    }
    p
}

/// `n(n+1)/2`.
pub fn triangular(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        (n / 2) * (n + 1)
    } else {
        n * n.div_ceil(2)
    }
}

/// Sum of the integers in `[lo, hi]`, zero for an empty interval.
pub fn interval_sum(lo: u64, hi: u64) -> u64 {
    if hi < lo {
        return 0;
    }
    triangular(hi) - triangular(lo.saturating_sub(1))
}

/// Residue facts about `n(n+1)/2` modulo `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    pub n: u64,
    pub m: u64,
    /// `n(n+1)/2 mod m`.
    pub triangular_mod_m: u64,
    /// `n(n+1)/2 mod 2`.
    pub triangular_mod_2: u64,
    /// `n(n+1)/2 mod 3`.
    pub triangular_mod_3: u64,
    /// `Some(t)` when `m > 3` and `n = 2(mt + 1)`.
    pub obstruction_t: Option<u64>,
    /// The triangular number is not 0 or 1 mod m, so no m-good partition
    /// can exist. Every part sums to `m^e`, which is 0 mod m except for the
    /// singleton `(1)`.
    pub residue_excludes: bool,
}

impl ResidueReport {
    pub fn obstructed(&self) -> bool {
        self.obstruction_t.is_some()
    }
}

pub fn residue_checks(n: u64, m: u64) -> ResidueReport {
    let tri = triangular(n);
    let r = tri % m;
    let obstruction_t = if m > 3 && n >= 2 && n.is_multiple_of(2) && (n / 2 - 1).is_multiple_of(m) {
        Some((n / 2 - 1) / m)
    } else {
        None
    };
    ResidueReport {
        n,
        m,
        triangular_mod_m: r,
        triangular_mod_2: tri % 2,
        triangular_mod_3: tri % 3,
        obstruction_t,
        residue_excludes: r > 1,
    }
}

//! Structural classification of `n` for `m = 3`.
//!
//! With `t = floor(log3 n)` and `N = 3^t`: `N` itself, `N + 1`, the mirror
//! range `[(3N + 1) / 2, 3N - 1]`, and otherwise `n = N + 3k + r` by
//! residue `r`. Open-case values are those with `r = 2`.

use core::fmt;

use crate::arith::{checked_pow, floor_log};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Base,
    Power,
    PowerPlusOne,
    Mirror,
    Mod0,
    Mod1,
    OpenCase,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Base => "base",
            Class::Power => "power",
            Class::PowerPlusOne => "power_plus_one",
            Class::Mirror => "mirror",
            Class::Mod0 => "mod0_reduction",
            Class::Mod1 => "mod1_reduction",
            Class::OpenCase => "open_case",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Classification {
    pub n: u64,
    pub class: Class,
    /// `floor(log3 n)`.
    pub t: u32,
    /// `(n - 3^t) / 3` for the residue classes, 0 otherwise.
    pub k: u64,
    /// Exponent of the mirror power `3^s`, when mirrored.
    pub s: Option<u32>,
    /// Open case with `t >= 4`, beyond what small computations settle.
    pub within_theorem_frontier: bool,
}

/// Classifies `n >= 1`. `n = 2` is the only base value: it lies below every
/// rule's range.
pub fn classify(n: u64) -> Classification {
    assert!(n >= 1, "classify needs n >= 1");
    let t = floor_log(3, n);
    let big = checked_pow(3, t).expect("3^floor(log3 n) <= n");
    let mut c = Classification { n, class: Class::Base, t, k: 0, s: None, within_theorem_frontier: false };
    if n == big {
        c.class = Class::Power;
    } else if n == 2 {
        c.class = Class::Base;
    } else if n == big + 1 {
        c.class = Class::PowerPlusOne;
    } else if 2 * n > 3 * big {
        c.class = Class::Mirror;
        c.s = Some(t + 1);
    } else {
        let d = n - big;
        c.k = d / 3;
        c.class = match d % 3 {
            0 => Class::Mod0,
            1 => Class::Mod1,
            _ => Class::OpenCase,
        };
        c.within_theorem_frontier = c.class == Class::OpenCase && t >= 4;
    }
    c
}

/// Whether `n` lies in the open residue class.
pub fn is_open_case(n: u64) -> bool {
    classify(n).class == Class::OpenCase
}

//! Reduction traces: the sequence of rules a construction applied.
//!
//! A step takes `par(to)` to `par(from)` by removing some parts and adding
//! others. Steps are stored from the requested `n` downward, ending at the
//! empty partition of `[0]`.

use alloc::vec::Vec;
use core::fmt;

use crate::partition::{GoodPartition, Instance, Part};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Frozen table entry for small `n`.
    Base,
    /// `n = m^t`: add the singleton.
    Power,
    /// `n = 3^t + 1`: one triplet around `3^t`.
    PowerPlusOne,
    /// Pairs summing to a power, mirrored around it.
    Mirror,
    /// `n = 3^t + 3k`: shifted symmetric partition of `[-3k, 3k]`.
    Mod0,
    /// `n = 3^t + 3k + 1`: shifted symmetric partition of `[-3k-1, 3k+1]`.
    Mod1,
    /// Open case, `k = 0`.
    OpenK0,
    /// Open case, `k = (3^(j-1) - 1) / 2`.
    OpenPower,
    /// Open case, `k = 2`.
    OpenK2,
    /// Open case, `k = 3`.
    OpenK3,
    /// Open case, `k = 5`.
    OpenK5,
    /// Open case via a scheme over a 3-nice window.
    OpenNice,
    /// Open case: triplets around `3^t` over `[3^t - h - 1, 3^t + h]` minus
    /// two elements, which the low range absorbs.
    OpenSplit,
    /// Open case via a scheme over the full window.
    OpenScheme,
}

impl Rule {
    pub const ALL: [Rule; 14] = [
        Rule::Base,
        Rule::Power,
        Rule::PowerPlusOne,
        Rule::Mirror,
        Rule::Mod0,
        Rule::Mod1,
        Rule::OpenK0,
        Rule::OpenPower,
        Rule::OpenK2,
        Rule::OpenK3,
        Rule::OpenK5,
        Rule::OpenNice,
        Rule::OpenSplit,
        Rule::OpenScheme,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Base => "base",
            Rule::Power => "power",
            Rule::PowerPlusOne => "power_plus_one",
            Rule::Mirror => "mirror",
            Rule::Mod0 => "mod0",
            Rule::Mod1 => "mod1",
            Rule::OpenK0 => "open_k0",
            Rule::OpenPower => "open_power",
            Rule::OpenK2 => "open_k2",
            Rule::OpenK3 => "open_k3",
            Rule::OpenK5 => "open_k5",
            Rule::OpenNice => "open_nice",
            Rule::OpenSplit => "open_split",
            Rule::OpenScheme => "open_scheme",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub from: u64,
    pub to: u64,
    pub added: Vec<Part>,
    pub removed: Vec<Part>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub n: u64,
    pub m: u64,
    pub steps: Vec<Step>,
}

impl ReductionTrace {
    /// The terminal base case; every trace bottoms out at `[0]`.
    pub const TERMINAL: &'static str = "empty";

    pub fn new(n: u64, m: u64) -> Self {
        ReductionTrace { n, m, steps: Vec::new() }
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.steps.iter().map(|s| s.rule)
    }

    /// Rebuilds the partition from the empty base, validating every
    /// intermediate `par(from)`.
    pub fn replay(&self) -> Result<GoodPartition, Error> {
        let mut expect_from = self.n;
        for s in &self.steps {
            if s.from != expect_from || s.to >= s.from {
                return Err(Error::BadTrace("step bounds do not chain downward"));
            }
            expect_from = s.to;
        }
        if expect_from != 0 {
            return Err(Error::BadTrace("trace does not end at the empty partition"));
        }
        let mut parts: Vec<Part> = Vec::new();
        let mut last = None;
        for s in self.steps.iter().rev() {
            for r in &s.removed {
                let i = parts.iter().position(|p| p == r).ok_or(Error::BadTrace("removed part not present"))?;
                parts.swap_remove(i);
            }
            parts.extend(s.added.iter().cloned());
            let inst = Instance::new(s.from, self.m)?;
            let g = GoodPartition::new(inst, parts).map_err(Error::Invalid)?;
            parts = g.parts().to_vec();
            last = Some(g);
        }
        last.ok_or(Error::BadTrace("empty trace"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(Rule::from_name(r.name()), Some(r));
        }
        assert_eq!(Rule::from_name("nope"), None);
    }

    #[test]
    fn replay_checks_chain() {
        let t = ReductionTrace {
            n: 3,
            m: 3,
            steps: vec![
                Step { rule: Rule::Power, from: 3, to: 2, added: vec![Part::single(3)], removed: vec![] },
                Step { rule: Rule::Base, from: 2, to: 0, added: vec![Part::pair(1, 2)], removed: vec![] },
            ],
        };
        assert_eq!(crate::render(&t.replay().unwrap()), "(1+2)+(3)");

        let mut broken = t.clone();
        broken.steps[1].to = 1;
        assert!(matches!(broken.replay(), Err(Error::BadTrace(_))));

        let mut missing = t;
        missing.steps[0].removed.push(Part::single(5));
        assert!(matches!(missing.replay(), Err(Error::BadTrace(_))));
    }
}

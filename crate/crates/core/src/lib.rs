//! Construction, exhaustive search and verification of m-good partitions.
//!
//! A partition of `[n] = {1, ..., n}` is *m-good* when every part has at
//! most `m` elements and sums to a power of `m`. This crate holds the pure
//! algorithmic side: the validator, closed-form constructions (with
//! replayable reduction traces), a bitmask backtracking engine for
//! existence, counting and uniqueness, the offset pair-scheme solver used
//! for the hard residue class, and ternary analysis of 3-nice `k`.
//!
//! It is `no_std` and needs only `alloc`. File formats, caching, campaigns
//! and the command line live in the `mgood` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod classify;
pub mod construct;
pub mod nice;
pub mod notation;
pub mod partition;
pub mod restore;
pub mod scheme;
pub mod search;
pub mod symmetric;
pub mod trace;

pub use arith::{is_power_of, residue_checks, ResidueReport, MAX_N};
pub use classify::{classify, Class, Classification};
pub use construct::{construct_2good, construct_3good, open_case_construct, scheme_to_partition, Construction};
pub use nice::{enumerate_nice, nice_certificates, NiceCertificate};
pub use notation::{parse, render};
pub use partition::{canonicalize, validate, GoodPartition, Instance, Part, TripletSet, Violation};
pub use restore::restore_from_triplets;
pub use scheme::{solve_offset_scheme, OffsetScheme};
pub use search::{SearchBudget, SearchOutcome, Status};
pub use symmetric::{symmetric_partition, SymmetricPartition};
pub use trace::{ReductionTrace, Rule, Step};

use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ground-set bound {0} outside [1, 2^31]")]
    BadBound(u64),
    #[error("base {0} must be at least 2")]
    BadBase(u64),
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: &'static str },
    #[error("not an m-good partition ({} violation(s))", .0.len())]
    Invalid(Vec<Violation>),
    #[error("malformed triplet {0:?}")]
    BadTriplet(Part),
    #[error("no completion: {0}")]
    NoCompletion(&'static str),
    #[error("bad offset scheme: {0}")]
    Scheme(&'static str),
    #[error("lift out of range: 3^(t-1) < 2k+1 for t = {t}, k = {k}")]
    LiftOutOfRange { t: u32, k: u64 },
    #[error("base partition lacks the pair {0:?}")]
    MissingPair(Part),
    #[error("malformed trace: {0}")]
    BadTrace(&'static str),
}

//! Minimal zero-sum sequences over the integer interval `[-n, n]`.
//!
//! A zero-sum sequence is an unordered multiset of integers summing to zero.
//! It is *minimal* (an atom) when no proper nonempty sub-multiset also sums
//! to zero. This crate provides:
//!
//! * [`ZSeq`], the multiset type, with its split form and exact statistics;
//! * fast and brute-force minimality tests ([`minimality`]);
//! * complete enumeration of the atoms over `[-n, n]` up to negation
//!   ([`enumeration`]);
//! * the derivation poset on those atoms, its maximal elements and
//!   derivation closure ([`derivation`]);
//! * the Lambert, Henk–Weismantel and average-based length bounds and their
//!   comparison ([`bounds`]).

pub mod bounds;
pub mod derivation;
pub mod enumeration;
mod error;
pub mod minimality;
pub mod seq;

pub use bounds::{bound_report, tight_family, BoundReport, DominanceSummary};
pub use derivation::{build_poset, derive, derived_set, DerivationPoset, MaximalSet};
pub use enumeration::{enumerate_atoms, AtomCache, AtomSet, EnumOptions};
pub use error::{Error, Result};
pub use minimality::{is_minimal_fast, is_minimal_oracle, is_zero_sum, MinimalityVerdict};
pub use seq::{parse_seq, SeqStats, SplitForm, ZSeq};

/// Largest term magnitude accepted by the parser and by enumeration.
pub const DEFAULT_N_MAX: u32 = 64;

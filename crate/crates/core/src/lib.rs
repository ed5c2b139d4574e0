//! Collective scheduling of unit tasks.
//!
//! A set of voters express preferences over the execution order of `n` unit
//! tasks on a single machine, either as preferred permutations (order mode) or
//! as per-task `(release, due)` windows (interval mode). This crate computes
//! consensus schedules that minimize the summed voter dissatisfaction under the
//! binary and distance criteria, implements the earliest-median-date heuristic,
//! supports global time windows and precedence constraints, and ships checkers
//! for the release-date, deadline and temporal-unanimity axioms together with a
//! brute-force oracle used to cross-check every solver.
//!
//! ```
//! use consched::{parse_profile, rules, CriterionKind, EncodingKind};
//!
//! let profile = parse_profile(
//!     "profile order\ntasks 3\nvoters 2\npref 1 : 1 2 3\npref 1 : 2 1 3\n",
//! )
//! .unwrap();
//! let spec = rules::RuleSpec::new(rules::RuleKind::Distance).with_encoding(EncodingKind::Deviation);
//! let solution = rules::solve(&profile, &spec).unwrap();
//! assert_eq!(solution.cost, 2);
//! # let _ = CriterionKind::Distance;
//! ```

pub mod assignment;
pub mod axioms;
pub mod criteria;
mod error;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod precedence;
pub mod rules;

pub use criteria::CriterionKind;
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use model::{
    parse_precedence, parse_profile, parse_time_windows, Ballots, EncodingKind, IntervalPreference,
    PrecedenceGraph, PreferenceProfile, Schedule, TaskId, TimeWindows, Weighted, Window,
};

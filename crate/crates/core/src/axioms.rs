//! Checkers for the temporal axioms a rule output may or may not satisfy.
//!
//! Each checker looks at one `(schedule, profile)` pair: for every task whose
//! premise holds it derives the window the axiom demands and records the task
//! if the schedule completes it outside that window.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::model::{Ballots, PreferenceProfile, Schedule, TaskId, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    /// A task every voter completes at `t` or later must complete at `t` or later.
    ReleaseDateConsistency,
    /// A task every voter completes by `t` must complete by `t`.
    DeadlineConsistency,
    /// A task every voter places in the same window must land in it.
    TemporalUnanimity,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 3] = [
        AxiomKind::ReleaseDateConsistency,
        AxiomKind::DeadlineConsistency,
        AxiomKind::TemporalUnanimity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::ReleaseDateConsistency => "release_date_consistency",
            AxiomKind::DeadlineConsistency => "deadline_consistency",
            AxiomKind::TemporalUnanimity => "temporal_unanimity",
        }
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "release" | "release_date_consistency" => Ok(Self::ReleaseDateConsistency),
            "deadline" | "deadline_consistency" => Ok(Self::DeadlineConsistency),
            "unanimity" | "temporal_unanimity" => Ok(Self::TemporalUnanimity),
            other => Err(format!("unknown axiom `{other}`")),
        }
    }
}

/// A task completing outside the window its premise demands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub task: TaskId,
    pub window: Window,
    pub completion: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VIOLATION task={} window={} got={}",
            self.task, self.window, self.completion
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: AxiomKind,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn flags(&self, task: usize) -> bool {
        self.violations.iter().any(|v| v.task.get() == task)
    }
}

/// Window demanded of `task` by `axiom`, if its premise holds.
///
/// Release and deadline consistency always apply (with the tightest bound,
/// the earliest/latest voter completion time) and need an order profile.
/// Temporal unanimity applies only when all voters agree on the slot (order
/// mode) or on the `(release, due)` pair (interval mode).
pub fn premise(
    profile: &PreferenceProfile,
    axiom: AxiomKind,
    task: TaskId,
) -> Result<Option<Window>> {
    let n = profile.n();
    let j = task.index();
    match axiom {
        AxiomKind::ReleaseDateConsistency => {
            let earliest = profile
                .orders()?
                .iter()
                .map(|w| w.preference.completion_times()[j])
                .min()
                .expect("non-empty profile");
            Ok(Some(Window::new(earliest - 1, n)))
        }
        AxiomKind::DeadlineConsistency => {
            let latest = profile
                .orders()?
                .iter()
                .map(|w| w.preference.completion_times()[j])
                .max()
                .expect("non-empty profile");
            Ok(Some(Window::new(0, latest)))
        }
        AxiomKind::TemporalUnanimity => Ok(match profile.ballots() {
            Ballots::Order(entries) => {
                let c = entries[0].preference.completion_times()[j];
                entries
                    .iter()
                    .all(|w| w.preference.completion_times()[j] == c)
                    .then(|| Window::new(c - 1, c))
            }
            Ballots::Interval(entries) => {
                let first = entries[0].preference.window(task);
                entries
                    .iter()
                    .all(|w| w.preference.window(task) == first)
                    .then_some(first)
            }
        }),
    }
}

pub fn check(
    schedule: &Schedule,
    profile: &PreferenceProfile,
    axiom: AxiomKind,
) -> Result<AxiomReport> {
    if schedule.len() != profile.n() {
        return Err(crate::Error::SizeMismatch {
            expected: profile.n(),
            found: schedule.len(),
        });
    }
    let mut violations = Vec::new();
    for j in 0..profile.n() {
        let task = TaskId::from_index(j);
        if let Some(window) = premise(profile, axiom, task)? {
            let completion = schedule.completion(task);
            if !window.contains(completion) {
                violations.push(Violation {
                    task,
                    window,
                    completion,
                });
            }
        }
    }
    Ok(AxiomReport { axiom, violations })
}

/// Order profiles only.
pub fn check_release_consistency(
    schedule: &Schedule,
    profile: &PreferenceProfile,
) -> Result<AxiomReport> {
    check(schedule, profile, AxiomKind::ReleaseDateConsistency)
}

/// Order profiles only.
pub fn check_deadline_consistency(
    schedule: &Schedule,
    profile: &PreferenceProfile,
) -> Result<AxiomReport> {
    check(schedule, profile, AxiomKind::DeadlineConsistency)
}

/// Either profile mode.
pub fn check_temporal_unanimity(
    schedule: &Schedule,
    profile: &PreferenceProfile,
) -> Result<AxiomReport> {
    check(schedule, profile, AxiomKind::TemporalUnanimity)
}

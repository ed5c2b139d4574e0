//! Aggregation rules: the exact binary- and distance-criterion minimizers and
//! the earliest-median-date (EMD) heuristic.

use std::fmt;
use std::str::FromStr;

use crate::assignment::{build_cost_matrix, min_cost_assignment_avoiding};
use crate::criteria::{profile_cost, CriterionKind};
use crate::error::Result;
use crate::model::{EncodingKind, PreferenceProfile, Schedule, TaskId, TimeWindows, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Distance,
    Binary,
    Emd,
}

impl RuleKind {
    /// The criterion an exact rule minimizes; `None` for EMD.
    pub fn criterion(self) -> Option<CriterionKind> {
        match self {
            RuleKind::Distance => Some(CriterionKind::Distance),
            RuleKind::Binary => Some(CriterionKind::Binary),
            RuleKind::Emd => None,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Distance => "distance",
            RuleKind::Binary => "binary",
            RuleKind::Emd => "emd",
        })
    }
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distance" => Ok(Self::Distance),
            "binary" => Ok(Self::Binary),
            "emd" => Ok(Self::Emd),
            other => Err(format!("unknown rule `{other}`")),
        }
    }
}

/// A rule plus the encoding (order profiles) and optional global windows.
///
/// EMD needs an order profile and ignores `windows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpec {
    pub rule: RuleKind,
    pub encoding: Option<EncodingKind>,
    pub windows: Option<TimeWindows>,
}

impl RuleSpec {
    pub fn new(rule: RuleKind) -> Self {
        Self {
            rule,
            encoding: None,
            windows: None,
        }
    }

    pub fn with_encoding(mut self, encoding: EncodingKind) -> Self {
        self.encoding = Some(encoding);
        self
    }

    pub fn with_windows(mut self, windows: TimeWindows) -> Self {
        self.windows = Some(windows);
        self
    }

    /// Criterion used to price the output: the rule's own, or for EMD the
    /// encoding's natural one (tardiness by default).
    pub fn cost_measure(&self) -> (CriterionKind, Option<EncodingKind>) {
        match self.rule.criterion() {
            Some(c) => (c, self.encoding),
            None => {
                let enc = self.encoding.unwrap_or(EncodingKind::Tardiness);
                (enc.natural_criterion(), Some(enc))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub schedule: Schedule,
    pub cost: u64,
    pub method: &'static str,
}

/// Runs a rule.
///
/// Among equally cheap optima the exact rules return one that keeps as many
/// tasks as possible inside windows shared by all voters.
pub fn solve(profile: &PreferenceProfile, spec: &RuleSpec) -> Result<Solution> {
    match spec.rule.criterion() {
        Some(criterion) => {
            let matrix =
                build_cost_matrix(profile, criterion, spec.encoding, spec.windows.as_ref())?;
            let shared = shared_windows(profile, spec.encoding)?;
            let a = min_cost_assignment_avoiding(&matrix, |task, slot| {
                shared[task.index()].is_some_and(|w| !w.contains(slot))
            })?;
            Ok(Solution {
                schedule: a.schedule,
                cost: a.total_cost,
                method: "matching",
            })
        }
        None => {
            let schedule = emd_schedule(profile)?;
            let (criterion, encoding) = spec.cost_measure();
            let cost = profile_cost(&schedule, profile, criterion, encoding)?;
            Ok(Solution {
                schedule,
                cost,
                method: "emd",
            })
        }
    }
}

/// For each task, the window every voter gives it (after encoding), if any.
fn shared_windows(
    profile: &PreferenceProfile,
    encoding: Option<EncodingKind>,
) -> Result<Vec<Option<Window>>> {
    let prefs = profile.interval_view(encoding)?;
    let first = prefs[0].preference.windows();
    Ok(first
        .iter()
        .enumerate()
        .map(|(j, &w)| {
            prefs
                .iter()
                .all(|p| p.preference.windows()[j] == w)
                .then_some(w)
        })
        .collect())
}

/// Per-task median completion time over all voters.
///
/// For even `v` this is the lower median, the `ceil(v/2)`-th smallest value,
/// so at least half of the voters complete the task at or before its median.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianTable {
    median: Vec<usize>,
}

impl MedianTable {
    pub fn new(profile: &PreferenceProfile) -> Result<Self> {
        let n = profile.n();
        let orders = profile.orders()?;
        let rank = profile.voters().div_ceil(2);
        let median = (0..n)
            .map(|j| {
                // histogram of completion times, weighted by multiplicity
                let mut hist = vec![0u64; n + 1];
                for w in orders {
                    hist[w.preference.completion_times()[j]] += w.multiplicity;
                }
                let mut seen = 0;
                (1..=n)
                    .find(|&t| {
                        seen += hist[t];
                        seen >= rank
                    })
                    .expect("every task has v completion times")
            })
            .collect();
        Ok(Self { median })
    }

    pub fn median(&self, task: TaskId) -> usize {
        self.median[task.index()]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.median
    }
}

/// Tasks by increasing median completion time, ties broken by smaller id.
pub fn emd_schedule(profile: &PreferenceProfile) -> Result<Schedule> {
    let medians = MedianTable::new(profile)?;
    let mut ids: Vec<usize> = (1..=profile.n()).collect();
    ids.sort_by_key(|&id| (medians.median[id - 1], id));
    Ok(Schedule::new(ids).expect("sorted ids form a permutation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn single_voter_is_reproduced_by_every_rule() {
        let pref = Schedule::new([3, 1, 4, 2]).unwrap();
        let p = PreferenceProfile::from_orders(vec![(pref.clone(), 1)]).unwrap();
        for rule in [RuleKind::Distance, RuleKind::Binary, RuleKind::Emd] {
            for enc in EncodingKind::ALL {
                let s = solve(&p, &RuleSpec::new(rule).with_encoding(enc)).unwrap();
                assert_eq!(s.cost, 0, "{rule} {enc}");
                if matches!(enc, EncodingKind::Deviation | EncodingKind::ExactPosition)
                    || rule == RuleKind::Emd
                {
                    assert_eq!(s.schedule, pref, "{rule} {enc}");
                }
            }
        }
    }

    #[test]
    fn emd_defaults_to_tardiness() {
        let p = PreferenceProfile::from_permutations([[1, 2, 3], [3, 2, 1], [2, 1, 3]]).unwrap();
        let spec = RuleSpec::new(RuleKind::Emd);
        assert_eq!(
            spec.cost_measure(),
            (CriterionKind::Distance, Some(EncodingKind::Tardiness))
        );
        let s = solve(&p, &spec).unwrap();
        assert_eq!(s.schedule.ids(), vec![1, 2, 3]);
    }

    #[test]
    fn even_voter_count_uses_lower_median() {
        let p = PreferenceProfile::from_permutations([[1, 2], [2, 1]]).unwrap();
        let m = MedianTable::new(&p).unwrap();
        assert_eq!(m.as_slice(), &[1, 1]);
        assert_eq!(emd_schedule(&p).unwrap().ids(), vec![1, 2]);
    }

    #[test]
    fn emd_rejects_interval_profiles() {
        let p =
            crate::parse_profile("profile interval\ntasks 1\nvoters 1\npref 1 : (0,1)\n").unwrap();
        assert!(matches!(emd_schedule(&p), Err(Error::ModeMismatch(_))));
    }
}

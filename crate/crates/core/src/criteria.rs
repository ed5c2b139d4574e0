//! Dissatisfaction measures.
//!
//! Everything here is exact integer arithmetic. Profile-level costs are
//! weighted by multiplicity, so their work is proportional to the number of
//! distinct preferences rather than the number of voters.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::model::{EncodingKind, IntervalPreference, PreferenceProfile, Schedule, TaskId, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionKind {
    /// 0/1 penalty for completing outside the window.
    Binary,
    /// Number of slots between the completion time and the window.
    Distance,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 2] = [CriterionKind::Binary, CriterionKind::Distance];

    /// Penalty of completing at `completion` against `window`.
    pub fn penalty(self, completion: usize, window: Window) -> u64 {
        match self {
            CriterionKind::Binary => binary_penalty(completion, window),
            CriterionKind::Distance => distance_penalty(completion, window),
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionKind::Binary => "binary",
            CriterionKind::Distance => "distance",
        })
    }
}

impl FromStr for CriterionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "binary" => Ok(Self::Binary),
            "distance" => Ok(Self::Distance),
            other => Err(format!("unknown criterion `{other}`")),
        }
    }
}

impl EncodingKind {
    /// The criterion under which this encoding yields its classical measure.
    pub fn natural_criterion(self) -> CriterionKind {
        match self {
            EncodingKind::Deviation | EncodingKind::Tardiness | EncodingKind::Earliness => {
                CriterionKind::Distance
            }
            EncodingKind::LateTasks | EncodingKind::ExactPosition => CriterionKind::Binary,
        }
    }
}

pub fn binary_penalty(completion: usize, window: Window) -> u64 {
    u64::from(completion > window.due || completion <= window.release)
}

pub fn distance_penalty(completion: usize, window: Window) -> u64 {
    if completion > window.due {
        (completion - window.due) as u64
    } else if completion <= window.release {
        (window.release - (completion - 1)) as u64
    } else {
        0
    }
}

pub fn binary_task_cost(schedule: &Schedule, pref: &IntervalPreference, task: TaskId) -> u64 {
    binary_penalty(schedule.completion(task), pref.window(task))
}

pub fn distance_task_cost(schedule: &Schedule, pref: &IntervalPreference, task: TaskId) -> u64 {
    distance_penalty(schedule.completion(task), pref.window(task))
}

/// One voter's total dissatisfaction with `schedule`.
pub fn voter_cost(schedule: &Schedule, pref: &IntervalPreference, criterion: CriterionKind) -> u64 {
    schedule
        .order()
        .iter()
        .map(|&t| criterion.penalty(schedule.completion(t), pref.window(t)))
        .sum()
}

/// Summed dissatisfaction of all voters.
///
/// Order-mode profiles need `encoding`; interval-mode profiles must not get one.
pub fn profile_cost(
    schedule: &Schedule,
    profile: &PreferenceProfile,
    criterion: CriterionKind,
    encoding: Option<EncodingKind>,
) -> Result<u64> {
    check_len(schedule, profile)?;
    let prefs = profile.interval_view(encoding)?;
    Ok(prefs
        .iter()
        .map(|w| w.multiplicity * voter_cost(schedule, &w.preference, criterion))
        .sum())
}

fn check_len(schedule: &Schedule, profile: &PreferenceProfile) -> Result<()> {
    if schedule.len() != profile.n() {
        return Err(crate::Error::SizeMismatch {
            expected: profile.n(),
            found: schedule.len(),
        });
    }
    Ok(())
}

/// `(voter, task, slot)`: voter `voter` runs `task` over `[slot-1, slot]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Choice {
    /// 1-based voter index, multiplicities expanded in listing order.
    pub voter: u64,
    pub task: TaskId,
    pub slot: usize,
}

/// Breaks an order profile into its `n * v` choices.
pub fn choice_decomposition(profile: &PreferenceProfile) -> Result<Vec<Choice>> {
    let mut out = Vec::with_capacity(profile.n() * profile.voters() as usize);
    for (i, pref) in profile.expanded_orders()?.enumerate() {
        for (pos, &task) in pref.order().iter().enumerate() {
            out.push(Choice {
                voter: i as u64 + 1,
                task,
                slot: pos + 1,
            });
        }
    }
    Ok(out)
}

/// `k_y`: choices with slot `<= y` whose task completes after `y` in `schedule`.
///
/// Defined for `1 <= y <= n`; the sum over all `y` is the total tardiness.
pub fn late_at_slot(schedule: &Schedule, profile: &PreferenceProfile, y: usize) -> Result<u64> {
    check_len(schedule, profile)?;
    assert!(
        y >= 1 && y <= profile.n(),
        "slot {y} outside 1..={}",
        profile.n()
    );
    Ok(profile
        .orders()?
        .iter()
        .map(|w| {
            let late = w.preference.order()[..y]
                .iter()
                .filter(|&&t| schedule.completion(t) > y)
                .count() as u64;
            w.multiplicity * late
        })
        .sum())
}

/// `k_y` for every slot `y = 1..=n`.
pub fn late_profile(schedule: &Schedule, profile: &PreferenceProfile) -> Result<Vec<u64>> {
    (1..=profile.n())
        .map(|y| late_at_slot(schedule, profile, y))
        .collect()
}

/// Spearman footrule between two rankings of the same tasks.
pub fn footrule(a: &Schedule, b: &Schedule) -> u64 {
    a.completion_times()
        .iter()
        .zip(b.completion_times())
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum()
}

/// Number of task pairs ordered differently by the two rankings.
pub fn kendall_tau(a: &Schedule, b: &Schedule) -> u64 {
    let ca = a.completion_times();
    let cb = b.completion_times();
    let n = ca.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (ca[i] < ca[j]) != (cb[i] < cb[j]) {
                count += 1;
            }
        }
    }
    count
}

/// Spearman footrule summed over voters.
pub fn spearman_distance(schedule: &Schedule, profile: &PreferenceProfile) -> Result<u64> {
    check_len(schedule, profile)?;
    Ok(profile
        .orders()?
        .iter()
        .map(|w| w.multiplicity * footrule(schedule, &w.preference))
        .sum())
}

/// Kendall-Tau distance summed over voters.
pub fn kendall_tau_distance(schedule: &Schedule, profile: &PreferenceProfile) -> Result<u64> {
    check_len(schedule, profile)?;
    Ok(profile
        .orders()?
        .iter()
        .map(|w| w.multiplicity * kendall_tau(schedule, &w.preference))
        .sum())
}

/// Weighted pairwise majority counts: `before(a, b)` voters rank `a` ahead of `b`.
///
/// Lets the Kendall-Tau distance of many candidate rankings be evaluated in
/// `O(n^2)` each.
#[derive(Debug, Clone)]
pub struct PairwiseCounts {
    n: usize,
    before: Vec<u64>,
}

impl PairwiseCounts {
    pub fn new(profile: &PreferenceProfile) -> Result<Self> {
        let n = profile.n();
        let mut before = vec![0u64; n * n];
        for w in profile.orders()? {
            let c = w.preference.completion_times();
            for a in 0..n {
                for b in 0..n {
                    if c[a] < c[b] {
                        before[a * n + b] += w.multiplicity;
                    }
                }
            }
        }
        Ok(Self { n, before })
    }

    pub fn before(&self, a: TaskId, b: TaskId) -> u64 {
        self.before[a.index() * self.n + b.index()]
    }

    /// Kendall-Tau distance of `schedule` to the profile.
    pub fn kendall(&self, schedule: &Schedule) -> u64 {
        let order = schedule.order();
        let mut total = 0;
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                total += self.before(b, a);
            }
        }
        total
    }
}

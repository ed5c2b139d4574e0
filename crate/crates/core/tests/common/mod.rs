#![allow(dead_code)]

use consched::{IntervalPreference, PreferenceProfile, Schedule, Window};
use proptest::prelude::*;

pub fn perm(n: usize) -> impl Strategy<Value = Schedule> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|ids| Schedule::new(ids).unwrap())
}

/// Order profile with `1..=max_entries` distinct entries of multiplicity
/// `1..=max_mult`, plus an independent schedule.
pub fn order_case(
    min_n: usize,
    max_n: usize,
    max_entries: usize,
    max_mult: u64,
) -> impl Strategy<Value = (PreferenceProfile, Schedule)> {
    (min_n..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec((perm(n), 1..=max_mult), 1..=max_entries),
            perm(n),
        )
            .prop_map(|(entries, s)| (PreferenceProfile::from_orders(entries).unwrap(), s))
    })
}

/// Windows around a witness schedule, widened by up to `slack` on each side.
pub fn windows_around(witness: &Schedule, widen: &[(usize, usize)]) -> Vec<Window> {
    let n = witness.len();
    witness
        .completion_times()
        .iter()
        .zip(widen)
        .map(|(&c, &(a, b))| Window::new((c - 1).saturating_sub(a), (c + b).min(n)))
        .collect()
}

pub fn interval_pref(n: usize, slack: usize) -> impl Strategy<Value = IntervalPreference> {
    (perm(n), prop::collection::vec((0..=slack, 0..=slack), n))
        .prop_map(|(w, widen)| IntervalPreference::new(windows_around(&w, &widen)).unwrap())
}

pub fn interval_case(
    min_n: usize,
    max_n: usize,
    max_entries: usize,
) -> impl Strategy<Value = (PreferenceProfile, Schedule)> {
    (min_n..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec((interval_pref(n, 2), 1..=3u64), 1..=max_entries),
            perm(n),
        )
            .prop_map(|(entries, s)| (PreferenceProfile::from_intervals(entries).unwrap(), s))
    })
}

/// Voters who all agree on the slots of the tasks marked in `fixed` (taken
/// from `base`) and are otherwise free.
pub fn planted_orders(base: &Schedule, fixed: &[bool], free: &[Schedule]) -> Vec<Schedule> {
    let n = base.len();
    free.iter()
        .map(|sigma| {
            let mut slots = vec![0usize; n];
            for t in 1..=n {
                let task = base.task_at(t);
                if fixed[task.index()] {
                    slots[t - 1] = task.get();
                }
            }
            let mut loose = sigma.order().iter().filter(|t| !fixed[t.index()]);
            for slot in slots.iter_mut().filter(|s| **s == 0) {
                *slot = loose.next().unwrap().get();
            }
            Schedule::new(slots).unwrap()
        })
        .collect()
}

pub fn planted_case(
    max_n: usize,
    max_v: usize,
) -> impl Strategy<Value = (Schedule, Vec<bool>, Vec<Schedule>)> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            perm(n),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(perm(n), 1..=max_v),
        )
    })
}

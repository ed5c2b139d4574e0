//! Brute-force reference solver.
//!
//! Walks every permutation in lexicographic order and prices each one through
//! [`criteria::voter_cost`](crate::criteria::voter_cost), never through the
//! matching or the subset DP, so agreement with those solvers means something.

use crate::axioms::{premise, AxiomKind};
use crate::criteria::{voter_cost, CriterionKind, PairwiseCounts};
use crate::error::{Error, Result};
use crate::model::{
    EncodingKind, PrecedenceGraph, PreferenceProfile, Schedule, TaskId, TimeWindows, Window,
};

/// Largest `n` the oracle accepts (10! is about 3.6 million permutations).
pub const ORACLE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub best_cost: u64,
    /// Every minimizer, in lexicographic order.
    pub optima: Vec<Schedule>,
    /// Number of permutations that passed the filter.
    pub searched: u64,
}

impl OracleResult {
    pub fn is_unique(&self) -> bool {
        self.optima.len() == 1
    }
}

/// Advances `s` to the next permutation in lexicographic order of task ids.
/// Returns `false` (leaving `s` untouched) when `s` is the last one.
pub fn next_permutation(s: &mut Schedule) -> bool {
    let n = s.len();
    let id = |s: &Schedule, slot: usize| s.task_at(slot).get();
    let Some(i) = (1..n).rev().find(|&i| id(s, i) < id(s, i + 1)) else {
        return false;
    };
    let j = (i + 1..=n)
        .rev()
        .find(|&j| id(s, j) > id(s, i))
        .expect("pivot has a successor");
    s.swap_slots(i, j);
    let (mut lo, mut hi) = (i + 1, n);
    while lo < hi {
        s.swap_slots(lo, hi);
        lo += 1;
        hi -= 1;
    }
    true
}

/// Minimizes `cost` over the permutations of `1..=n` accepted by `feasible`.
pub fn exhaustive_min(
    n: usize,
    mut feasible: impl FnMut(&Schedule) -> bool,
    mut cost: impl FnMut(&Schedule) -> u64,
) -> Result<OracleResult> {
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    let mut s = Schedule::identity(n);
    let mut best: Option<OracleResult> = None;
    let mut searched = 0u64;
    loop {
        if feasible(&s) {
            searched += 1;
            let c = cost(&s);
            match &mut best {
                Some(b) if c > b.best_cost => {}
                Some(b) if c == b.best_cost => b.optima.push(s.clone()),
                _ => {
                    best = Some(OracleResult {
                        best_cost: c,
                        optima: vec![s.clone()],
                        searched: 0,
                    })
                }
            }
        }
        if !next_permutation(&mut s) {
            break;
        }
    }
    let mut best =
        best.ok_or_else(|| Error::Infeasible("no permutation satisfies the constraints".into()))?;
    best.searched = searched;
    Ok(best)
}

fn pricer(
    profile: &PreferenceProfile,
    criterion: CriterionKind,
    encoding: Option<EncodingKind>,
) -> Result<impl Fn(&Schedule) -> u64 + '_> {
    let prefs = profile.interval_view(encoding)?.into_owned();
    Ok(move |s: &Schedule| {
        prefs
            .iter()
            .map(|w| w.multiplicity * voter_cost(s, &w.preference, criterion))
            .sum()
    })
}

fn check_n(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::SizeMismatch { expected, found });
    }
    Ok(())
}

/// Exact optimum of `criterion` over all schedules meeting the optional
/// global windows and precedence graph.
pub fn exhaustive_optimum(
    profile: &PreferenceProfile,
    criterion: CriterionKind,
    encoding: Option<EncodingKind>,
    windows: Option<&TimeWindows>,
    graph: Option<&PrecedenceGraph>,
) -> Result<OracleResult> {
    let n = profile.n();
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    if let Some(w) = windows {
        check_n(n, w.len())?;
    }
    if let Some(g) = graph {
        check_n(n, g.n())?;
    }
    let cost = pricer(profile, criterion, encoding)?;
    exhaustive_min(
        n,
        |s| {
            windows.is_none_or(|w| w.is_satisfied_by(s))
                && graph.is_none_or(|g| g.is_satisfied_by(s))
        },
        cost,
    )
}

/// Best schedule among those satisfying `axiom` on `profile`.
pub fn constrained_best(
    profile: &PreferenceProfile,
    criterion: CriterionKind,
    encoding: Option<EncodingKind>,
    axiom: AxiomKind,
) -> Result<OracleResult> {
    let n = profile.n();
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    let demanded: Vec<(TaskId, Window)> = (0..n)
        .map(TaskId::from_index)
        .filter_map(|t| {
            premise(profile, axiom, t)
                .map(|w| w.map(|w| (t, w)))
                .transpose()
        })
        .collect::<Result<_>>()?;
    let cost = pricer(profile, criterion, encoding)?;
    exhaustive_min(
        n,
        |s| demanded.iter().all(|&(t, w)| w.contains(s.completion(t))),
        cost,
    )
}

/// Kendall-Tau optimum (a Kemeny ranking) by exhaustive search.
pub fn kendall_optimum(profile: &PreferenceProfile) -> Result<OracleResult> {
    let n = profile.n();
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    let counts = PairwiseCounts::new(profile)?;
    exhaustive_min(n, |_| true, |s| counts.kendall(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_walk() {
        let mut s = Schedule::identity(3);
        let mut seen = vec![s.ids()];
        while next_permutation(&mut s) {
            seen.push(s.ids());
        }
        assert_eq!(
            seen,
            vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
                vec![3, 2, 1]
            ]
        );
    }

    #[test]
    fn single_task() {
        let p = PreferenceProfile::from_permutations([[1]]).unwrap();
        let r = exhaustive_optimum(
            &p,
            CriterionKind::Distance,
            Some(EncodingKind::Deviation),
            None,
            None,
        )
        .unwrap();
        assert_eq!((r.best_cost, r.searched), (0, 1));
        assert_eq!(r.optima, vec![Schedule::identity(1)]);
    }

    #[test]
    fn filters_and_guards() {
        let p = PreferenceProfile::from_permutations([[2, 1, 3]]).unwrap();
        let g = PrecedenceGraph::new(3, [(1, 2)]).unwrap();
        let r = exhaustive_optimum(
            &p,
            CriterionKind::Distance,
            Some(EncodingKind::Deviation),
            None,
            Some(&g),
        )
        .unwrap();
        assert_eq!(r.searched, 3);
        assert_eq!(r.best_cost, 2);

        let tw = TimeWindows::new(vec![Window::new(0, 1); 3]).unwrap();
        assert!(matches!(
            exhaustive_optimum(
                &p,
                CriterionKind::Binary,
                Some(EncodingKind::LateTasks),
                Some(&tw),
                None
            ),
            Err(Error::Infeasible(_))
        ));

        let big = PreferenceProfile::from_orders(vec![(Schedule::identity(11), 1)]).unwrap();
        assert!(matches!(
            kendall_optimum(&big),
            Err(Error::SizeLimitExceeded { n: 11, limit: 10 })
        ));
    }

    #[test]
    fn reversed_pair_has_two_kendall_optima() {
        let p = PreferenceProfile::from_permutations([[1, 2], [2, 1]]).unwrap();
        let r = kendall_optimum(&p).unwrap();
        assert_eq!(r.best_cost, 1);
        assert_eq!(r.optima.len(), 2);
    }
}

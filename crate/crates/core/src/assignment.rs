//! Criterion minimization as a min-cost perfect matching between tasks and
//! slots.
//!
//! Both criteria are separable: the cost of a schedule is a sum of terms that
//! each depend on one task and the slot it completes in. Summing those terms
//! over voters gives an `n x n` matrix whose optimal assignment is an optimal
//! schedule. Global time windows remove (task, slot) edges instead of pricing
//! them, so an infeasible instance is reported as such rather than as an
//! expensive one.

use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::model::{EncodingKind, PreferenceProfile, Schedule, TaskId, TimeWindows};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    // row-major, row = task index, column = slot - 1
    cost: Vec<u64>,
    forbidden: Vec<bool>,
}

impl CostMatrix {
    /// # Panics
    /// If `cost` is not `n * n` long.
    pub fn from_rows(n: usize, cost: Vec<u64>) -> Self {
        assert_eq!(cost.len(), n * n, "cost matrix must be n x n");
        Self {
            n,
            cost,
            forbidden: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cost of `task` completing at 1-based `slot`.
    pub fn cost(&self, task: TaskId, slot: usize) -> u64 {
        self.cost[task.index() * self.n + slot - 1]
    }

    pub fn is_forbidden(&self, task: TaskId, slot: usize) -> bool {
        self.forbidden[task.index() * self.n + slot - 1]
    }

    pub fn forbid(&mut self, task: TaskId, slot: usize) {
        self.forbidden[task.index() * self.n + slot - 1] = true;
    }

    /// Applies global windows: `task` may only complete at `r < slot <= d`.
    pub fn restrict(&mut self, windows: &TimeWindows) -> Result<()> {
        if windows.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: windows.len(),
            });
        }
        for j in 0..self.n {
            let task = TaskId::from_index(j);
            for slot in 1..=self.n {
                if !windows.allows(task, slot) {
                    self.forbid(task, slot);
                }
            }
        }
        Ok(())
    }

    /// Sum of the entries a schedule uses; `None` if it hits a forbidden pair.
    pub fn schedule_cost(&self, schedule: &Schedule) -> Option<u64> {
        schedule.order().iter().try_fold(0u64, |acc, &t| {
            let slot = schedule.completion(t);
            (!self.is_forbidden(t, slot)).then(|| acc + self.cost(t, slot))
        })
    }
}

/// Builds the (task, slot) cost matrix in `O(distinct preferences * n^2)`.
pub fn build_cost_matrix(
    profile: &PreferenceProfile,
    criterion: CriterionKind,
    encoding: Option<EncodingKind>,
    windows: Option<&TimeWindows>,
) -> Result<CostMatrix> {
    let n = profile.n();
    let prefs = profile.interval_view(encoding)?;
    let mut cost = vec![0u64; n * n];
    for w in prefs.iter() {
        for (j, window) in w.preference.windows().iter().enumerate() {
            let row = &mut cost[j * n..(j + 1) * n];
            for (t, cell) in row.iter_mut().enumerate() {
                *cell += w.multiplicity * criterion.penalty(t + 1, *window);
            }
        }
    }
    let mut matrix = CostMatrix::from_rows(n, cost);
    if let Some(windows) = windows {
        matrix.restrict(windows)?;
    }
    Ok(matrix)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub schedule: Schedule,
    pub total_cost: u64,
}

/// Optimal perfect matching avoiding forbidden pairs, `O(n^3)`.
///
/// Shortest augmenting paths with row/column potentials, adding one task per
/// phase in increasing id order. Among equal-cost optima the result depends
/// only on the input, never on hashing or timing.
pub fn min_cost_assignment(matrix: &CostMatrix) -> Result<Assignment> {
    let n = matrix.n;
    if max_bipartite_matching(n, n, |j, t| !matrix.forbidden[j * n + t]) < n {
        return Err(Error::Infeasible(
            "no schedule places every task inside its time window".into(),
        ));
    }

    const INF: i64 = i64::MAX / 4;
    let cost = |row: usize, col: usize| -> Option<i64> {
        let k = (row - 1) * n + col - 1;
        (!matrix.forbidden[k]).then(|| matrix.cost[k] as i64)
    };

    // 1-based; column 0 is the virtual root of each phase.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = INF;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                if let Some(c) = cost(r0, col) {
                    let reduced = c - u[r0] - v[col];
                    if reduced < minv[col] {
                        minv[col] = reduced;
                        way[col] = col0;
                    }
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            if delta >= INF {
                return Err(Error::Infeasible("no augmenting path".into()));
            }
            for col in 0..=n {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }

    let order: Vec<usize> = owner[1..].to_vec();
    let schedule = Schedule::new(order).expect("assignment is a permutation");
    let total_cost = matrix
        .schedule_cost(&schedule)
        .expect("assignment avoids forbidden pairs");
    Ok(Assignment {
        schedule,
        total_cost,
    })
}

/// Optimal assignment that, among all optima, uses the fewest pairs flagged
/// by `avoid`.
///
/// Costs are scaled by `n + 1` and each flagged pair adds 1, so the secondary
/// count can never outweigh a unit of primary cost.
pub fn min_cost_assignment_avoiding(
    matrix: &CostMatrix,
    avoid: impl Fn(TaskId, usize) -> bool,
) -> Result<Assignment> {
    let n = matrix.n;
    let scale = n as u64 + 1;
    let mut scaled = matrix.clone();
    for j in 0..n {
        for slot in 1..=n {
            let k = j * n + slot - 1;
            scaled.cost[k] = scaled.cost[k] * scale + u64::from(avoid(TaskId::from_index(j), slot));
        }
    }
    let schedule = min_cost_assignment(&scaled)?.schedule;
    let total_cost = matrix
        .schedule_cost(&schedule)
        .expect("assignment avoids forbidden pairs");
    Ok(Assignment {
        schedule,
        total_cost,
    })
}

/// Size of a maximum matching in a bipartite graph (augmenting paths).
pub fn max_bipartite_matching(
    left: usize,
    right: usize,
    allowed: impl Fn(usize, usize) -> bool,
) -> usize {
    fn augment(
        l: usize,
        right: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for r in 0..right {
            if seen[r] || !allowed(l, r) {
                continue;
            }
            seen[r] = true;
            if match_right[r].is_none_or(|other| augment(other, right, allowed, seen, match_right))
            {
                match_right[r] = Some(l);
                return true;
            }
        }
        false
    }

    let mut match_right = vec![None; right];
    let mut size = 0;
    for l in 0..left {
        let mut seen = vec![false; right];
        if augment(l, right, &allowed, &mut seen, &mut match_right) {
            size += 1;
        }
    }
    size
}

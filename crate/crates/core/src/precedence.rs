//! Precedence constraints.
//!
//! Two settings are supported. With *inferred* precedences the constraints are
//! the pairs every voter agrees on; deviation and tardiness optima can then be
//! repaired into feasible optima with at most `n^2` swaps. With an *imposed*
//! graph the problem is strongly NP-hard for tardiness, deviation and late
//! tasks, so it is solved exactly by a dynamic program over task subsets,
//! which stays tractable up to roughly twenty tasks.

use std::fmt;
use std::str::FromStr;

use crate::assignment::{build_cost_matrix, min_cost_assignment, Assignment, CostMatrix};
use crate::criteria::{profile_cost, CriterionKind};
use crate::error::{Error, Result};
use crate::model::{
    EncodingKind, PrecedenceGraph, PreferenceProfile, Schedule, TaskId, TimeWindows,
};
use crate::rules::Solution;

/// Default task-count guard for the subset dynamic program.
pub const DEFAULT_DP_LIMIT: usize = 20;

/// Hard ceiling: the DP table has `2^n` entries.
const DP_HARD_LIMIT: usize = 30;

/// Edges `a -> b` such that every voter completes `a` before `b`.
///
/// Unanimous agreement is transitive, so the graph is its own transitive
/// closure and acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferredPrecedences {
    graph: PrecedenceGraph,
}

impl InferredPrecedences {
    pub fn graph(&self) -> &PrecedenceGraph {
        &self.graph
    }

    pub fn into_graph(self) -> PrecedenceGraph {
        self.graph
    }
}

/// `O(v n^2)` scan of all task pairs.
pub fn infer_precedences(profile: &PreferenceProfile) -> Result<InferredPrecedences> {
    let n = profile.n();
    let orders = profile.orders()?;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b
                && orders.iter().all(|w| {
                    let c = w.preference.completion_times();
                    c[a] < c[b]
                })
            {
                edges.push((a + 1, b + 1));
            }
        }
    }
    let graph = PrecedenceGraph::new(n, edges).expect("unanimous order is acyclic");
    Ok(InferredPrecedences { graph })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub schedule: Schedule,
    pub swaps: usize,
}

/// Makes `schedule` respect every inferred edge by pairwise swaps.
///
/// Repeatedly takes the smallest-id task `x` with no unprocessed successor and,
/// while some predecessor of `x` runs after it, swaps `x` with the closest such
/// predecessor. At most `n` swaps per task, so at most `n^2` overall. Under
/// deviation, tardiness or earliness no swap increases the cost, so an
/// unconstrained optimum stays optimal.
pub fn repair_to_inferred(schedule: &Schedule, prec: &InferredPrecedences) -> Repair {
    let graph = &prec.graph;
    let n = schedule.len();
    assert_eq!(graph.n(), n, "graph and schedule sizes differ");

    let mut s = schedule.clone();
    let mut open_succs: Vec<usize> = (0..n)
        .map(|j| graph.successors(TaskId::from_index(j)).len())
        .collect();
    let mut done = vec![false; n];
    let mut swaps = 0;

    for _ in 0..n {
        let x = (0..n)
            .find(|&j| !done[j] && open_succs[j] == 0)
            .map(TaskId::from_index)
            .expect("an acyclic graph always has a sink");
        loop {
            let cx = s.completion(x);
            let closest = graph
                .predecessors(x)
                .iter()
                .map(|&p| s.completion(p))
                .filter(|&cp| cp > cx)
                .min();
            match closest {
                Some(cp) => {
                    s.swap_slots(cx, cp);
                    swaps += 1;
                }
                None => break,
            }
        }
        done[x.index()] = true;
        for p in graph.predecessors(x) {
            open_succs[p.index()] -= 1;
        }
    }
    assert!(swaps <= n * n, "repair used {swaps} swaps for {n} tasks");
    debug_assert!(graph.is_satisfied_by(&s));
    Repair { schedule: s, swaps }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrecedenceMethod {
    /// Repair for deviation/tardiness/earliness, subset DP otherwise.
    Auto,
    /// Matching optimum followed by swap repair.
    Repair,
    /// Exact subset dynamic program.
    Dp,
}

impl FromStr for PrecedenceMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Self::Auto),
            "repair" => Ok(Self::Repair),
            "dp" => Ok(Self::Dp),
            other => Err(format!("unknown precedence method `{other}`")),
        }
    }
}

impl fmt::Display for PrecedenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::Repair => "repair",
            Self::Dp => "dp",
        })
    }
}

/// Whether swap repair preserves optimality for this measure.
pub fn repair_preserves_optimum(criterion: CriterionKind, encoding: EncodingKind) -> bool {
    criterion == CriterionKind::Distance
        && matches!(
            encoding,
            EncodingKind::Deviation | EncodingKind::Tardiness | EncodingKind::Earliness
        )
}

/// Optimal schedule respecting the inferred precedences of an order profile.
pub fn solve_inferred(
    profile: &PreferenceProfile,
    encoding: EncodingKind,
    criterion: CriterionKind,
) -> Result<Solution> {
    solve_inferred_with(
        profile,
        encoding,
        criterion,
        None,
        PrecedenceMethod::Auto,
        DEFAULT_DP_LIMIT,
    )
}

/// [`solve_inferred`] with global windows, an explicit method and a DP size
/// guard. `Repair` cannot honor windows and is rejected when they are given.
pub fn solve_inferred_with(
    profile: &PreferenceProfile,
    encoding: EncodingKind,
    criterion: CriterionKind,
    windows: Option<&TimeWindows>,
    method: PrecedenceMethod,
    dp_limit: usize,
) -> Result<Solution> {
    let prec = infer_precedences(profile)?;
    let method = match method {
        PrecedenceMethod::Auto
            if windows.is_none() && repair_preserves_optimum(criterion, encoding) =>
        {
            PrecedenceMethod::Repair
        }
        PrecedenceMethod::Auto => PrecedenceMethod::Dp,
        m => m,
    };
    match method {
        PrecedenceMethod::Repair => {
            if windows.is_some() {
                return Err(Error::ModeMismatch(
                    "swap repair cannot honor time windows; use the dp method".into(),
                ));
            }
            let matrix = build_cost_matrix(profile, criterion, Some(encoding), None)?;
            let optimum = min_cost_assignment(&matrix)?;
            let repaired = repair_to_inferred(&optimum.schedule, &prec);
            let cost = profile_cost(&repaired.schedule, profile, criterion, Some(encoding))?;
            Ok(Solution {
                schedule: repaired.schedule,
                cost,
                method: "matching+repair",
            })
        }
        _ => solve_with_graph(
            profile,
            prec.graph(),
            criterion,
            Some(encoding),
            windows,
            dp_limit,
        ),
    }
}

/// Optimal schedule respecting an imposed acyclic graph (and optional windows).
///
/// Works for either profile mode; `encoding` follows the same rules as
/// [`profile_cost`].
pub fn solve_with_graph(
    profile: &PreferenceProfile,
    graph: &PrecedenceGraph,
    criterion: CriterionKind,
    encoding: Option<EncodingKind>,
    windows: Option<&TimeWindows>,
    dp_limit: usize,
) -> Result<Solution> {
    if graph.n() != profile.n() {
        return Err(Error::SizeMismatch {
            expected: profile.n(),
            found: graph.n(),
        });
    }
    let matrix = build_cost_matrix(profile, criterion, encoding, windows)?;
    let a = subset_dp(&matrix, graph, dp_limit)?;
    Ok(Solution {
        schedule: a.schedule,
        cost: a.total_cost,
        method: "dp",
    })
}

/// Exact minimum over precedence-feasible schedules of a separable cost.
///
/// `best[A]` is the cheapest way to fill the first `|A|` slots with exactly the
/// tasks of `A`; the last of them must have all its predecessors in `A`:
///
/// ```text
/// best[{}] = 0
/// best[A]  = min { best[A - j] + cost(j, |A|) : j in A, preds(j) within A - j }
/// ```
///
/// `O(2^n * n)` time and `O(2^n)` memory.
pub fn subset_dp(matrix: &CostMatrix, graph: &PrecedenceGraph, limit: usize) -> Result<Assignment> {
    let n = matrix.n();
    let limit = limit.min(DP_HARD_LIMIT);
    if n > limit {
        return Err(Error::SizeLimitExceeded { n, limit });
    }
    let pred_mask: Vec<u32> = (0..n)
        .map(|j| {
            graph
                .predecessors(TaskId::from_index(j))
                .iter()
                .fold(0u32, |m, p| m | (1 << p.index()))
        })
        .collect();

    const UNREACHABLE: u64 = u64::MAX;
    let full = (1u32 << n) - 1;
    let mut best = vec![UNREACHABLE; 1usize << n];
    let mut last = vec![0u8; 1usize << n];
    best[0] = 0;
    for set in 1..=full {
        let slot = set.count_ones() as usize;
        let mut rest = set;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = set & !(1 << j);
            let task = TaskId::from_index(j);
            if pred_mask[j] & !prev != 0
                || best[prev as usize] == UNREACHABLE
                || matrix.is_forbidden(task, slot)
            {
                continue;
            }
            let value = best[prev as usize] + matrix.cost(task, slot);
            if value < best[set as usize] {
                best[set as usize] = value;
                last[set as usize] = j as u8;
            }
        }
    }
    if best[full as usize] == UNREACHABLE {
        return Err(Error::Infeasible(
            "no schedule satisfies both the precedence graph and the time windows".into(),
        ));
    }

    let mut order = vec![0usize; n];
    let mut set = full;
    for slot in (1..=n).rev() {
        let j = last[set as usize] as usize;
        order[slot - 1] = j + 1;
        set &= !(1 << j);
    }
    Ok(Assignment {
        schedule: Schedule::new(order).expect("dp yields a permutation"),
        total_cost: best[full as usize],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unanimous_profile_yields_full_chain() {
        let p = PreferenceProfile::from_permutations([[1, 2, 3], [1, 2, 3]]).unwrap();
        let g = infer_precedences(&p).unwrap();
        let edges: Vec<(usize, usize)> =
            g.graph().edges().map(|(a, b)| (a.get(), b.get())).collect();
        assert_eq!(edges, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn reversed_voters_agree_on_nothing() {
        let p = PreferenceProfile::from_permutations([[1, 2, 3], [3, 2, 1]]).unwrap();
        assert_eq!(infer_precedences(&p).unwrap().graph().edge_count(), 0);
    }

    #[test]
    fn repair_reverses_a_chain() {
        let p = PreferenceProfile::from_permutations([[1, 2, 3]]).unwrap();
        let prec = infer_precedences(&p).unwrap();
        let r = repair_to_inferred(&Schedule::new([3, 2, 1]).unwrap(), &prec);
        assert_eq!(r.schedule, Schedule::identity(3));
        assert_eq!(r.swaps, 3);
    }

    #[test]
    fn repair_leaves_feasible_schedules_alone() {
        let p = PreferenceProfile::from_permutations([[1, 2, 3, 4], [2, 1, 3, 4]]).unwrap();
        let prec = infer_precedences(&p).unwrap();
        let s = Schedule::new([2, 1, 3, 4]).unwrap();
        let r = repair_to_inferred(&s, &prec);
        assert_eq!(r.schedule, s);
        assert_eq!(r.swaps, 0);
    }

    #[test]
    fn unanimous_deviation_is_free() {
        let p = PreferenceProfile::from_permutations([[2, 3, 1], [2, 3, 1]]).unwrap();
        let s = solve_inferred(&p, EncodingKind::Deviation, CriterionKind::Distance).unwrap();
        assert_eq!(s.schedule.ids(), vec![2, 3, 1]);
        assert_eq!(s.cost, 0);
        assert_eq!(s.method, "matching+repair");
    }

    #[test]
    fn full_chain_forces_the_order() {
        let p = PreferenceProfile::from_permutations([[3, 2, 1], [2, 3, 1]]).unwrap();
        let chain = PrecedenceGraph::new(3, [(1, 2), (2, 3)]).unwrap();
        let s = solve_with_graph(
            &p,
            &chain,
            CriterionKind::Distance,
            Some(EncodingKind::Tardiness),
            None,
            20,
        )
        .unwrap();
        assert_eq!(s.schedule, Schedule::identity(3));
        assert_eq!(
            s.cost,
            profile_cost(
                &s.schedule,
                &p,
                CriterionKind::Distance,
                Some(EncodingKind::Tardiness)
            )
            .unwrap()
        );
    }

    #[test]
    fn dp_guards_and_infeasibility() {
        let n = 21;
        let p = PreferenceProfile::from_permutations([1..=n]).unwrap();
        let g = PrecedenceGraph::empty(n);
        assert_eq!(
            solve_with_graph(
                &p,
                &g,
                CriterionKind::Binary,
                Some(EncodingKind::LateTasks),
                None,
                DEFAULT_DP_LIMIT
            ),
            Err(Error::SizeLimitExceeded { n: 21, limit: 20 })
        );

        let p = PreferenceProfile::from_permutations([[1, 2]]).unwrap();
        let g = PrecedenceGraph::new(2, [(1, 2)]).unwrap();
        let tw =
            TimeWindows::new(vec![crate::Window::new(1, 2), crate::Window::new(0, 2)]).unwrap();
        assert!(matches!(
            solve_with_graph(
                &p,
                &g,
                CriterionKind::Binary,
                Some(EncodingKind::LateTasks),
                Some(&tw),
                20
            ),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn repair_rejects_windows() {
        let p = PreferenceProfile::from_permutations([[1, 2]]).unwrap();
        let tw = TimeWindows::unconstrained(2);
        assert!(matches!(
            solve_inferred_with(
                &p,
                EncodingKind::Deviation,
                CriterionKind::Distance,
                Some(&tw),
                PrecedenceMethod::Repair,
                20
            ),
            Err(Error::ModeMismatch(_))
        ));
    }
}

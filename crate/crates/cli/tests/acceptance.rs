//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints its PASS/FAIL line; the process fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use consched::assignment::{build_cost_matrix, min_cost_assignment};
use consched::axioms::{
    check_deadline_consistency, check_release_consistency, check_temporal_unanimity, AxiomKind,
};
use consched::criteria::{footrule, kendall_tau, late_profile, profile_cost};
use consched::generate::{
    random_dag, swap_noise_profile, trial_seed, uniform_permutation, uniform_profile, SplitMix64,
};
use consched::oracle::{constrained_best, exhaustive_optimum};
use consched::precedence::{
    infer_precedences, repair_to_inferred, solve_inferred, solve_with_graph, DEFAULT_DP_LIMIT,
};
use consched::rules::{emd_schedule, solve, MedianTable, RuleKind, RuleSpec};
use consched::{CriterionKind, EncodingKind, PreferenceProfile, Schedule, TaskId};
use consched_cli::fixtures;
use consched_cli::ratio::{run_ratio, RatioConfig};

use CriterionKind::{Binary, Distance};
use EncodingKind::{Deviation, Earliness, LateTasks, Tardiness};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn ids(s: &Schedule) -> Vec<usize> {
    s.ids()
}

fn spec(rule: RuleKind, enc: Option<EncodingKind>) -> RuleSpec {
    let mut s = RuleSpec::new(rule);
    s.encoding = enc;
    s
}

fn c1_distance_fixture() -> Outcome {
    let start = Instant::now();
    let p = fixtures::profile("distance_deadline");
    let sol = solve(&p, &spec(RuleKind::Distance, Some(Deviation))).map_err(|e| e.to_string())?;
    ensure(sol.cost == 54, format!("solver cost {} != 54", sol.cost))?;
    let oracle = exhaustive_optimum(&p, Distance, Some(Deviation), None, None).unwrap();
    ensure(
        oracle.best_cost == 54,
        format!("oracle cost {}", oracle.best_cost),
    )?;
    let filtered = constrained_best(
        &p,
        Distance,
        Some(Deviation),
        AxiomKind::DeadlineConsistency,
    )
    .unwrap();
    ensure(
        filtered.best_cost == 56,
        format!("deadline-filtered cost {} != 56", filtered.best_cost),
    )?;
    within(start, Duration::from_secs(1))?;
    let listed: Vec<Vec<usize>> = oracle.optima.iter().map(ids).collect();
    ensure(
        oracle.optima.len() == 2,
        format!(
            "costs 54/54/56 match, but the oracle finds {} optima, not exactly two: {:?}",
            oracle.optima.len(),
            listed
        ),
    )?;
    Ok("cost 54, two optima, deadline-filtered 56".into())
}

fn c2_late_tasks_fixture() -> Outcome {
    let start = Instant::now();
    let p = fixtures::profile("late_tasks_deadline");
    let sol = solve(&p, &spec(RuleKind::Binary, Some(LateTasks))).map_err(|e| e.to_string())?;
    ensure(sol.cost == 3, format!("solver cost {} != 3", sol.cost))?;
    let filtered =
        constrained_best(&p, Binary, Some(LateTasks), AxiomKind::DeadlineConsistency).unwrap();
    ensure(
        filtered.best_cost >= 4,
        format!("deadline-filtered cost {} < 4", filtered.best_cost),
    )?;
    let oracle = exhaustive_optimum(&p, Binary, Some(LateTasks), None, None).unwrap();
    within(start, Duration::from_secs(1))?;
    let listed: Vec<Vec<usize>> = oracle.optima.iter().map(ids).collect();
    ensure(
        listed == vec![vec![1, 2, 3, 5, 6, 7, 4]],
        format!(
            "cost 3 and filtered {} >= 4 hold, but the optimum is not unique: {:?}",
            filtered.best_cost, listed
        ),
    )?;
    Ok(format!(
        "cost 3, unique optimum 1 2 3 5 6 7 4, filtered {}",
        filtered.best_cost
    ))
}

fn c3_interval_fixture() -> Outcome {
    let start = Instant::now();
    let p = fixtures::profile("distance_interval_unanimity");
    let sol = solve(&p, &spec(RuleKind::Distance, None)).map_err(|e| e.to_string())?;
    ensure(sol.cost == 48, format!("solver cost {} != 48", sol.cost))?;
    let filtered = constrained_best(&p, Distance, None, AxiomKind::TemporalUnanimity).unwrap();
    ensure(
        filtered.best_cost == 50,
        format!("unanimity-filtered cost {} != 50", filtered.best_cost),
    )?;
    let report = check_temporal_unanimity(&sol.schedule, &p).unwrap();
    ensure(
        report.flags(7) || report.flags(8),
        format!("checker did not flag task 7 or 8 on {}", sol.schedule),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "cost 48, filtered 50, flagged {:?}",
        report
            .violations
            .iter()
            .map(|v| v.task.get())
            .collect::<Vec<_>>()
    ))
}

fn c4_inferred_fixture() -> Outcome {
    let start = Instant::now();
    let p = fixtures::profile("late_tasks_inferred");
    let oracle = exhaustive_optimum(&p, Binary, Some(LateTasks), None, None).unwrap();
    let listed: Vec<Vec<usize>> = oracle.optima.iter().map(ids).collect();
    ensure(
        listed == vec![vec![1, 2, 5, 4, 3]],
        format!("optima {listed:?}"),
    )?;
    let prec = infer_precedences(&p).unwrap();
    ensure(
        prec.graph().contains_edge(TaskId::new(4), TaskId::new(5)),
        "edge 4 -> 5 not inferred",
    )?;
    ensure(
        !prec.graph().is_satisfied_by(&oracle.optima[0]),
        "optimum respects the inferred edges",
    )?;
    let constrained = solve_inferred(&p, LateTasks, Binary).map_err(|e| e.to_string())?;
    ensure(
        prec.graph().is_satisfied_by(&constrained.schedule),
        "constrained output infeasible",
    )?;
    ensure(
        constrained.cost > oracle.best_cost,
        format!(
            "constrained {} not above {}",
            constrained.cost, oracle.best_cost
        ),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "unique optimum 1 2 5 4 3 (cost {}), constrained cost {}",
        oracle.best_cost, constrained.cost
    ))
}

fn c5_emd_fixtures() -> Outcome {
    let a = fixtures::profile("emd_release");
    let m = MedianTable::new(&a).unwrap();
    ensure(
        m.as_slice() == [2, 3, 3, 4],
        format!("medians {:?}", m.as_slice()),
    )?;
    let s = emd_schedule(&a).unwrap();
    let r = check_release_consistency(&s, &a).unwrap();
    ensure(
        r.flags(1) && s.completion(TaskId::new(1)) == 1,
        format!("release report {:?}", r.violations),
    )?;

    let b = fixtures::profile("emd_deadline");
    let m = MedianTable::new(&b).unwrap();
    ensure(
        m.as_slice() == [3, 1, 2, 2],
        format!("medians {:?}", m.as_slice()),
    )?;
    let s = emd_schedule(&b).unwrap();
    let d = check_deadline_consistency(&s, &b).unwrap();
    ensure(
        d.flags(1) && s.completion(TaskId::new(1)) == 4,
        format!("deadline report {:?}", d.violations),
    )?;
    Ok("medians 2 3 3 4 and 3 1 2 2; task 1 flagged at slots 1 and 4".into())
}

fn c6_identities() -> Outcome {
    let mut rng = SplitMix64::new(6);
    for trial in 0..1000u64 {
        let n = 1 + rng.index(10);
        let v = 1 + rng.index(10);
        let p = uniform_profile(n, v, trial_seed(6, trial));
        let s = uniform_permutation(n, &mut rng);
        let cost = |e| profile_cost(&s, &p, Distance, Some(e)).unwrap();
        let (dev, t, e) = (cost(Deviation), cost(Tardiness), cost(Earliness));
        ensure(dev == 2 * t, format!("trial {trial}: dev {dev} != 2 * {t}"))?;
        ensure(t == e, format!("trial {trial}: T {t} != E {e}"))?;
        let ks: u64 = late_profile(&s, &p).unwrap().iter().sum();
        ensure(ks == t, format!("trial {trial}: sum k_y {ks} != T {t}"))?;
        for w in p.orders().unwrap() {
            let (d, r) = (kendall_tau(&s, &w.preference), footrule(&s, &w.preference));
            ensure(
                d <= r && r <= 2 * d,
                format!("trial {trial}: delta {d} rho {r}"),
            )?;
        }
    }
    Ok("1000 instances".into())
}

fn c7_matching_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for trial in 0..200u64 {
        let n = 1 + (trial % 7) as usize;
        let v = 1 + (trial_seed(7, trial) % 7) as usize;
        let p = uniform_profile(n, v, trial_seed(70, trial));
        for c in CriterionKind::ALL {
            for e in EncodingKind::ALL {
                let a =
                    min_cost_assignment(&build_cost_matrix(&p, c, Some(e), None).unwrap()).unwrap();
                let o = exhaustive_optimum(&p, c, Some(e), None, None).unwrap();
                ensure(
                    a.total_cost == o.best_cost,
                    format!(
                        "trial {trial} {c} {e}: matching {} oracle {}",
                        a.total_cost, o.best_cost
                    ),
                )?;
                checks += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checks} comparisons in {:?}", start.elapsed()))
}

fn c8_emd_ratio() -> Outcome {
    let start = Instant::now();
    let mut trials = 0;
    let (mut max_t, mut max_k, mut slots) = (0f64, 0f64, 0u64);
    for n in 3..=7 {
        for v in [3, 5, 7] {
            let mut cfg = RatioConfig::uniform(700, n, v, 8_000 + (n * 10 + v) as u64);
            cfg.exact = true;
            let r = run_ratio(&cfg).map_err(|e| e.to_string())?;
            if let Some(c) = r.violations.first() {
                return Err(format!(
                    "n={n} v={v} trial {}: {}\n{}",
                    c.trial,
                    c.reasons.join("; "),
                    c.profile
                ));
            }
            trials += r.trials;
            slots += r.slot_comparisons;
            max_t = max_t.max(r.tardiness.max);
            max_k = max_k.max(r.kendall.expect("exact mode").max);
        }
    }
    ensure(trials >= 10_000, format!("only {trials} trials"))?;
    ensure(
        max_t <= 2.0 && max_k <= 4.0,
        format!("max ratios {max_t} {max_k}"),
    )?;
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "{trials} trials, max T ratio {max_t:.4}, max Kendall ratio {max_k:.4}, {slots} slot checks, {:?}",
        start.elapsed()
    ))
}

fn sample_profile(trial: u64, max_n: usize) -> PreferenceProfile {
    let seed = trial_seed(9, trial);
    let n = 1 + (seed % max_n as u64) as usize;
    if trial.is_multiple_of(2) {
        uniform_profile(n, 2 + (seed >> 8) as usize % 2, seed)
    } else {
        swap_noise_profile(
            n,
            3 + (seed >> 8) as usize % 5,
            1 + (seed >> 16) as usize % n,
            seed,
        )
    }
}

fn c9_repair() -> Outcome {
    let mut edges = 0;
    let mut moved = 0;
    for trial in 0..300u64 {
        let p = sample_profile(trial, 8);
        let n = p.n();
        let prec = infer_precedences(&p).unwrap();
        edges += prec.graph().edge_count();
        for e in [Deviation, Tardiness] {
            let opt = min_cost_assignment(&build_cost_matrix(&p, Distance, Some(e), None).unwrap())
                .unwrap();
            let r = repair_to_inferred(&opt.schedule, &prec);
            moved += usize::from(r.swaps > 0);
            ensure(
                prec.graph().is_satisfied_by(&r.schedule),
                format!("trial {trial}: infeasible"),
            )?;
            ensure(
                r.swaps <= n * n,
                format!("trial {trial}: {} swaps", r.swaps),
            )?;
            let after = profile_cost(&r.schedule, &p, Distance, Some(e)).unwrap();
            ensure(
                after == opt.total_cost,
                format!("trial {trial} {e}: {after} != {}", opt.total_cost),
            )?;
        }
    }
    Ok(format!(
        "300 profiles, {edges} inferred edges, {moved} repairs needed swaps"
    ))
}

fn c10_graph_dp() -> Outcome {
    let mut rng = SplitMix64::new(10);
    let mut edges = 0;
    for trial in 0..300u64 {
        let n = 1 + rng.index(8);
        let v = 1 + rng.index(6);
        let p = uniform_profile(n, v, trial_seed(100, trial));
        let g = random_dag(n, rng.below(60), &mut rng);
        edges += g.edge_count();
        for (c, e) in [
            (Distance, Tardiness),
            (Distance, Deviation),
            (Binary, LateTasks),
        ] {
            let dp = solve_with_graph(&p, &g, c, Some(e), None, DEFAULT_DP_LIMIT)
                .map_err(|e| e.to_string())?;
            let o = exhaustive_optimum(&p, c, Some(e), None, Some(&g)).unwrap();
            ensure(
                dp.cost == o.best_cost,
                format!("trial {trial} {e}: dp {} oracle {}", dp.cost, o.best_cost),
            )?;
            ensure(
                g.is_satisfied_by(&dp.schedule),
                format!("trial {trial}: dp output infeasible"),
            )?;
        }
    }
    Ok(format!("300 instances, {edges} edges"))
}

fn c11_scale() -> Outcome {
    let dir = std::env::temp_dir().join(format!("consched-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("large.prof");
    std::fs::write(&path, uniform_profile(100, 100, 11).to_string()).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_consched"))
        .args([
            "solve",
            "--rule",
            "distance",
            "--encoding",
            "deviation",
            "--profile",
        ])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let _ = std::fs::remove_dir_all(&dir);
    ensure(
        out.status.success(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )?;
    ensure(took < Duration::from_secs(5), format!("took {took:?}"))?;
    Ok(format!("n=100 v=100 solved in {took:?}"))
}

fn c12_hardness_substitute() -> Outcome {
    // the exponential solver is exact on imposed graphs and the inferred
    // late-task variant has a strict price, on fresh seeds
    let mut rng = SplitMix64::new(12);
    for trial in 0..100u64 {
        let n = 2 + rng.index(7);
        let p = uniform_profile(n, 1 + rng.index(5), trial_seed(120, trial));
        let g = random_dag(n, 40, &mut rng);
        for (c, e) in [(Distance, Tardiness), (Binary, LateTasks)] {
            let dp = solve_with_graph(&p, &g, c, Some(e), None, DEFAULT_DP_LIMIT).unwrap();
            let o = exhaustive_optimum(&p, c, Some(e), None, Some(&g)).unwrap();
            ensure(
                dp.cost == o.best_cost,
                format!("trial {trial}: dp {} oracle {}", dp.cost, o.best_cost),
            )?;
        }
    }
    let p = fixtures::profile("late_tasks_inferred");
    let free = solve(&p, &spec(RuleKind::Binary, Some(LateTasks)))
        .unwrap()
        .cost;
    let tied = solve_inferred(&p, LateTasks, Binary).unwrap().cost;
    ensure(tied > free, format!("no gap: {tied} vs {free}"))?;
    Ok(format!(
        "100 graph instances exact; inferred late-task gap {free} -> {tied}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (
            "distance fixture: 54, two optima, deadline-filtered 56",
            c1_distance_fixture,
        ),
        (
            "late-task fixture: 3, unique optimum, deadline-filtered >= 4",
            c2_late_tasks_fixture,
        ),
        (
            "interval fixture: 48, unanimity-filtered 50, checker flags 7 or 8",
            c3_interval_fixture,
        ),
        (
            "inferred late-task fixture: unique optimum breaks 4 -> 5, strict gap",
            c4_inferred_fixture,
        ),
        (
            "EMD fixtures: medians and release/deadline violations",
            c5_emd_fixtures,
        ),
        ("identities on 1000 random instances", c6_identities),
        (
            "matching equals oracle on 200 instances",
            c7_matching_vs_oracle,
        ),
        ("EMD ratios over >= 10000 trials", c8_emd_ratio),
        ("repair keeps optimal cost on 300 profiles", c9_repair),
        (
            "graph DP equals filtered oracle on 300 instances",
            c10_graph_dp,
        ),
        ("n = 100, v = 100 solve under 5 s", c11_scale),
        (
            "hardness results: substituted checks",
            c12_hardness_substitute,
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

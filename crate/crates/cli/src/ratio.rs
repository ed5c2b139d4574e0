//! Empirical approximation ratios of the EMD rule.
//!
//! Each trial draws a profile from its own seed, so a trial can be replayed in
//! isolation and the trials can run in any order.

use clap::ValueEnum;
use consched::assignment::{build_cost_matrix, min_cost_assignment};
use consched::criteria::{late_profile, profile_cost, PairwiseCounts};
use consched::generate::{swap_noise_profile, trial_seed, uniform_profile};
use consched::oracle::{exhaustive_optimum, kendall_optimum, ORACLE_LIMIT};
use consched::rules::emd_schedule;
use consched::{CriterionKind, EncodingKind, Error, PreferenceProfile, Schedule};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    #[value(alias = "uniform", alias = "uniform_permutations")]
    UniformPermutations,
    #[value(alias = "swap-noise", alias = "mallows_like_swap_noise")]
    MallowsLikeSwapNoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioConfig {
    pub trials: u64,
    pub n: usize,
    pub v: usize,
    pub seed: u64,
    pub generator: GeneratorKind,
    /// Adjacent swaps per voter (swap-noise generator only).
    pub swaps: usize,
    /// Use exhaustive optima: adds the Kendall-Tau ratio and checks the
    /// per-slot bound against every tardiness optimum.
    pub exact: bool,
}

impl RatioConfig {
    pub fn uniform(trials: u64, n: usize, v: usize, seed: u64) -> Self {
        Self {
            trials,
            n,
            v,
            seed,
            generator: GeneratorKind::UniformPermutations,
            swaps: 0,
            exact: false,
        }
    }

    pub fn profile(&self, trial: u64) -> PreferenceProfile {
        let seed = trial_seed(self.seed, trial);
        match self.generator {
            GeneratorKind::UniformPermutations => uniform_profile(self.n, self.v, seed),
            GeneratorKind::MallowsLikeSwapNoise => {
                swap_noise_profile(self.n, self.v, self.swaps, seed)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioStat {
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub reasons: Vec<String>,
    pub profile: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub trials: u64,
    pub tardiness: RatioStat,
    pub deviation: RatioStat,
    pub earliness: RatioStat,
    pub kendall: Option<RatioStat>,
    /// Trials whose optimum is 0 (ratio taken as 1 when EMD is also 0).
    pub opt_zero_trials: u64,
    /// `(slot, reference optimum)` pairs compared for the per-slot bound.
    pub slot_comparisons: u64,
    pub violations: Vec<Counterexample>,
}

impl RatioReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Pair {
    emd: u64,
    opt: u64,
}

impl Pair {
    fn ratio(&self) -> f64 {
        match (self.emd, self.opt) {
            (0, 0) => 1.0,
            (_, 0) => f64::INFINITY,
            (e, o) => e as f64 / o as f64,
        }
    }
}

struct Trial {
    tardiness: Pair,
    deviation: Pair,
    earliness: Pair,
    kendall: Option<Pair>,
    slot_comparisons: u64,
    reasons: Vec<String>,
}

fn matching_optimum(p: &PreferenceProfile, enc: EncodingKind) -> Result<(Schedule, u64), Error> {
    let m = build_cost_matrix(p, CriterionKind::Distance, Some(enc), None)?;
    let a = min_cost_assignment(&m)?;
    Ok((a.schedule, a.total_cost))
}

fn run_trial(p: &PreferenceProfile, exact: bool) -> Result<Trial, Error> {
    let emd = emd_schedule(p)?;
    let measure = |enc| -> Result<Pair, Error> {
        Ok(Pair {
            emd: profile_cost(&emd, p, CriterionKind::Distance, Some(enc))?,
            opt: matching_optimum(p, enc)?.1,
        })
    };
    let tardiness = measure(EncodingKind::Tardiness)?;
    let deviation = measure(EncodingKind::Deviation)?;
    let earliness = measure(EncodingKind::Earliness)?;

    let mut reasons = Vec::new();
    for (name, pair, factor) in [
        ("tardiness", &tardiness, 2),
        ("deviation", &deviation, 2),
        ("earliness", &earliness, 2),
    ] {
        if pair.emd > factor * pair.opt {
            reasons.push(format!(
                "{name}: emd {} > {factor} * opt {}",
                pair.emd, pair.opt
            ));
        }
    }

    let (references, kendall) = if exact {
        let optima = exhaustive_optimum(
            p,
            CriterionKind::Distance,
            Some(EncodingKind::Tardiness),
            None,
            None,
        )?;
        if optima.best_cost != tardiness.opt {
            reasons.push(format!(
                "oracle tardiness {} differs from matching {}",
                optima.best_cost, tardiness.opt
            ));
        }
        let k = Pair {
            emd: PairwiseCounts::new(p)?.kendall(&emd),
            opt: kendall_optimum(p)?.best_cost,
        };
        if k.emd > 4 * k.opt {
            reasons.push(format!("kendall: emd {} > 4 * opt {}", k.emd, k.opt));
        }
        (optima.optima, Some(k))
    } else {
        (vec![matching_optimum(p, EncodingKind::Tardiness)?.0], None)
    };

    let emd_slots = late_profile(&emd, p)?;
    let mut slot_comparisons = 0;
    for s in &references {
        for (y, (&a, &b)) in emd_slots.iter().zip(&late_profile(s, p)?).enumerate() {
            slot_comparisons += 1;
            if a > 2 * b {
                reasons.push(format!("slot {}: k(emd) {a} > 2 * k({s}) {b}", y + 1));
            }
        }
    }

    Ok(Trial {
        tardiness,
        deviation,
        earliness,
        kendall,
        slot_comparisons,
        reasons,
    })
}

fn stat<'a>(pairs: impl Iterator<Item = &'a Pair>) -> RatioStat {
    let (mut max, mut sum, mut count) = (0f64, 0f64, 0u64);
    for p in pairs {
        let r = p.ratio();
        max = max.max(r);
        sum += r;
        count += 1;
    }
    RatioStat {
        max,
        mean: if count == 0 { 0.0 } else { sum / count as f64 },
    }
}

/// Runs every trial (in parallel) and aggregates in trial order, so the
/// report is identical for any thread count.
///
/// # Panics
/// If `trials`, `n` or `v` is zero.
pub fn run_ratio(cfg: &RatioConfig) -> Result<RatioReport, Error> {
    assert!(
        cfg.trials > 0 && cfg.n > 0 && cfg.v > 0,
        "trials, tasks and voters must all be positive"
    );
    if cfg.exact && cfg.n > ORACLE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            n: cfg.n,
            limit: ORACLE_LIMIT,
        });
    }
    let trials: Vec<(u64, PreferenceProfile, Trial)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let p = cfg.profile(t);
            run_trial(&p, cfg.exact).map(|tr| (t, p, tr))
        })
        .collect::<Result<_, _>>()?;

    let violations = trials
        .iter()
        .filter(|(_, _, tr)| !tr.reasons.is_empty())
        .map(|(t, p, tr)| Counterexample {
            trial: *t,
            reasons: tr.reasons.clone(),
            profile: p.to_string(),
        })
        .collect();
    Ok(RatioReport {
        trials: cfg.trials,
        tardiness: stat(trials.iter().map(|(_, _, tr)| &tr.tardiness)),
        deviation: stat(trials.iter().map(|(_, _, tr)| &tr.deviation)),
        earliness: stat(trials.iter().map(|(_, _, tr)| &tr.earliness)),
        kendall: cfg
            .exact
            .then(|| stat(trials.iter().filter_map(|(_, _, tr)| tr.kendall.as_ref()))),
        opt_zero_trials: trials
            .iter()
            .filter(|(_, _, tr)| tr.tardiness.opt == 0)
            .count() as u64,
        slot_comparisons: trials.iter().map(|(_, _, tr)| tr.slot_comparisons).sum(),
        violations,
    })
}

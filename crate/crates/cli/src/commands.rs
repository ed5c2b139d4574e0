use std::io::Write;
use std::str::FromStr;

use consched::axioms::{self, AxiomKind};
use consched::criteria::{kendall_tau_distance, late_profile, profile_cost, spearman_distance};
use consched::model::ProfileMode;
use consched::oracle::{constrained_best, exhaustive_optimum, OracleResult};
use consched::precedence::{
    infer_precedences, repair_preserves_optimum, solve_inferred_with, solve_with_graph,
    PrecedenceMethod,
};
use consched::rules::{self, RuleKind, RuleSpec, Solution};
use consched::{CriterionKind, EncodingKind, PrecedenceGraph, PreferenceProfile, Schedule};
use serde::Serialize;

use crate::ratio::{run_ratio, RatioConfig};
use crate::{
    fixtures, load_graph, load_profile, load_windows, CheckArgs, CliError, CliResult, EvalArgs,
    FilterArg, FixtureAction, Format, GenArgs, MethodArg, OracleArgs, PrecMode, RatioArgs,
    SolveArgs,
};

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// The encoding to use: none for interval profiles, the given one (or the
/// rule's default) for order profiles.
fn resolve_encoding(
    profile: &PreferenceProfile,
    rule: Option<RuleKind>,
    given: Option<EncodingKind>,
) -> CliResult<Option<EncodingKind>> {
    match profile.mode() {
        ProfileMode::Interval if given.is_some() => {
            usage("--encoding only applies to order profiles")
        }
        ProfileMode::Interval => Ok(None),
        ProfileMode::Order => Ok(Some(given.unwrap_or(match rule {
            Some(RuleKind::Distance) => EncodingKind::Deviation,
            Some(RuleKind::Binary) => EncodingKind::LateTasks,
            _ => EncodingKind::Tardiness,
        }))),
    }
}

fn exact_criterion(rule: RuleKind, command: &str) -> CliResult<CriterionKind> {
    match rule.criterion() {
        Some(c) => Ok(c),
        None => usage(format!("{command} needs --rule distance or --rule binary")),
    }
}

#[derive(Serialize)]
struct SolveJson<'a> {
    schedule: Vec<usize>,
    cost: Option<u64>,
    method: &'a str,
    feasible: bool,
}

enum Route {
    Emd,
    Matching,
    Dp(PrecedenceGraph),
    Inferred(PrecedenceMethod),
}

pub(crate) fn solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let profile = load_profile(&a.instance.profile)?;
    let n = profile.n();
    let rule = RuleKind::from(a.rule);
    let encoding = resolve_encoding(&profile, Some(rule), a.encoding.map(Into::into))?;
    let windows = load_windows(a.instance.time.as_deref(), n)?;
    let graph = load_graph(a.instance.prec.as_deref(), n)?;
    let prec_mode = match (a.instance.prec_mode, graph.is_some()) {
        (Some(PrecMode::Graph), false) => return usage("--prec-mode graph needs --prec FILE"),
        (Some(PrecMode::Inferred), true) => {
            return usage("--prec FILE cannot be combined with --prec-mode inferred")
        }
        (None, true) => Some(PrecMode::Graph),
        (mode, _) => mode,
    };

    let route = match (rule, prec_mode, a.method) {
        (RuleKind::Emd, Some(PrecMode::Graph), _) => {
            return usage("the emd rule cannot take an imposed precedence graph")
        }
        (RuleKind::Emd, _, MethodArg::Auto) => Route::Emd,
        (RuleKind::Emd, _, _) => return usage("the emd rule has no --method choice"),
        (_, None, MethodArg::Auto | MethodArg::Matching) => Route::Matching,
        (_, None, MethodArg::Dp) => Route::Dp(PrecedenceGraph::empty(n)),
        (_, None, MethodArg::Repair) => return usage("--method repair needs --prec-mode inferred"),
        (_, Some(PrecMode::Graph), MethodArg::Auto | MethodArg::Dp) => {
            Route::Dp(graph.expect("checked above"))
        }
        (_, Some(PrecMode::Graph), _) => {
            return usage("an imposed graph is solved with --method dp")
        }
        (_, Some(PrecMode::Inferred), MethodArg::Matching) => {
            return usage("--method matching ignores precedences; use auto, repair or dp")
        }
        (_, Some(PrecMode::Inferred), m) => Route::Inferred(match m {
            MethodArg::Repair => PrecedenceMethod::Repair,
            MethodArg::Dp => PrecedenceMethod::Dp,
            _ => PrecedenceMethod::Auto,
        }),
    };
    if matches!(route, Route::Emd) && windows.is_some() {
        writeln!(err, "warning: the emd rule ignores --time")?;
    }

    let mut spec = RuleSpec::new(rule);
    spec.encoding = encoding;
    if rule != RuleKind::Emd {
        spec.windows = windows.clone();
    }
    let (criterion, measure_enc) = spec.cost_measure();
    let label = match &route {
        Route::Emd => "emd",
        Route::Matching => "matching",
        Route::Dp(_) => "dp",
        Route::Inferred(PrecedenceMethod::Repair) => "matching+repair",
        Route::Inferred(PrecedenceMethod::Dp) => "dp",
        Route::Inferred(PrecedenceMethod::Auto) => {
            let repairs = encoding.is_some_and(|e| repair_preserves_optimum(criterion, e));
            if windows.is_none() && repairs {
                "matching+repair"
            } else {
                "dp"
            }
        }
    };

    let result: consched::Result<Solution> = match &route {
        Route::Emd | Route::Matching => rules::solve(&profile, &spec),
        Route::Dp(g) => solve_with_graph(
            &profile,
            g,
            criterion,
            encoding,
            windows.as_ref(),
            a.max_dp_tasks,
        ),
        Route::Inferred(method) => match encoding {
            None => Err(consched::Error::ModeMismatch(
                "inferred precedences need an order profile".into(),
            )),
            Some(enc) => solve_inferred_with(
                &profile,
                enc,
                criterion,
                windows.as_ref(),
                *method,
                a.max_dp_tasks,
            ),
        },
    };
    let solution = match result {
        Ok(s) => s,
        Err(e) => {
            if matches!(e, consched::Error::Infeasible(_)) && a.format == Format::Json {
                let json = SolveJson {
                    schedule: Vec::new(),
                    cost: None,
                    method: label,
                    feasible: false,
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&json).expect("serializable")
                )?;
            }
            return Err(e.into());
        }
    };
    let recomputed = profile_cost(&solution.schedule, &profile, criterion, measure_enc)?;
    assert_eq!(
        recomputed, solution.cost,
        "reported cost must match an independent evaluation"
    );

    let unconstrained = if prec_mode.is_some() && rule != RuleKind::Emd {
        Some(rules::solve(&profile, &spec)?.cost)
    } else {
        None
    };
    match a.format {
        Format::Text => {
            writeln!(out, "schedule: {}", solution.schedule)?;
            writeln!(out, "cost: {}", solution.cost)?;
            writeln!(out, "method: {}", solution.method)?;
            if let Some(c) = unconstrained {
                writeln!(out, "unconstrained_cost: {c}")?;
            }
        }
        Format::Json => {
            let json = SolveJson {
                schedule: solution.schedule.ids(),
                cost: Some(solution.cost),
                method: solution.method,
                feasible: true,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string(&json).expect("serializable")
            )?;
        }
    }
    Ok(())
}

pub(crate) fn eval(a: EvalArgs, out: &mut dyn Write) -> CliResult {
    let profile = load_profile(&a.profile)?;
    let schedule = Schedule::from_str(&a.schedule)?;
    let encoding = resolve_encoding(&profile, None, a.encoding.map(Into::into))?;
    let criterion = a
        .criterion
        .map(Into::into)
        .or(encoding.map(EncodingKind::natural_criterion))
        .unwrap_or(CriterionKind::Distance);
    writeln!(
        out,
        "cost: {}",
        profile_cost(&schedule, &profile, criterion, encoding)?
    )?;
    if profile.mode() == ProfileMode::Order {
        writeln!(
            out,
            "kendall: {}",
            kendall_tau_distance(&schedule, &profile)?
        )?;
        writeln!(out, "spearman: {}", spearman_distance(&schedule, &profile)?)?;
        if a.slots {
            for (y, k) in late_profile(&schedule, &profile)?.iter().enumerate() {
                writeln!(out, "late_at_slot {}: {k}", y + 1)?;
            }
        }
    } else if a.slots {
        return usage("--slots needs an order profile");
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleJson {
    best_cost: u64,
    optima: Vec<Vec<usize>>,
    searched: u64,
}

pub(crate) fn oracle(a: OracleArgs, out: &mut dyn Write) -> CliResult {
    let profile = load_profile(&a.instance.profile)?;
    let n = profile.n();
    let rule = RuleKind::from(a.rule);
    let criterion = exact_criterion(rule, "oracle")?;
    let encoding = resolve_encoding(&profile, Some(rule), a.encoding.map(Into::into))?;
    let windows = load_windows(a.instance.time.as_deref(), n)?;
    let mut graph = load_graph(a.instance.prec.as_deref(), n)?;
    match (a.instance.prec_mode, graph.is_some()) {
        (Some(PrecMode::Graph), false) => return usage("--prec-mode graph needs --prec FILE"),
        (Some(PrecMode::Inferred), true) => {
            return usage("--prec FILE cannot be combined with --prec-mode inferred")
        }
        (Some(PrecMode::Inferred), false) => {
            graph = Some(infer_precedences(&profile)?.into_graph())
        }
        _ => {}
    }
    let result: OracleResult = match a.filter {
        Some(f) => {
            if windows.is_some() || graph.is_some() {
                return usage("--filter cannot be combined with --time or precedences");
            }
            let axiom = match f {
                FilterArg::Release => AxiomKind::ReleaseDateConsistency,
                FilterArg::Deadline => AxiomKind::DeadlineConsistency,
                FilterArg::Unanimity => AxiomKind::TemporalUnanimity,
            };
            constrained_best(&profile, criterion, encoding, axiom)?
        }
        None => exhaustive_optimum(
            &profile,
            criterion,
            encoding,
            windows.as_ref(),
            graph.as_ref(),
        )?,
    };
    match a.format {
        Format::Text => {
            writeln!(out, "best_cost: {}", result.best_cost)?;
            writeln!(out, "optima: {}", result.optima.len())?;
            for s in &result.optima {
                writeln!(out, "optimum: {s}")?;
            }
            writeln!(out, "searched: {}", result.searched)?;
        }
        Format::Json => {
            let json = OracleJson {
                best_cost: result.best_cost,
                optima: result.optima.iter().map(Schedule::ids).collect(),
                searched: result.searched,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string(&json).expect("serializable")
            )?;
        }
    }
    Ok(())
}

pub(crate) fn check_axioms(a: CheckArgs, out: &mut dyn Write) -> CliResult {
    let profile = load_profile(&a.profile)?;
    let schedule = match (&a.schedule, a.rule) {
        (Some(text), _) => Schedule::from_str(text)?,
        (None, Some(rule)) => {
            let rule = RuleKind::from(rule);
            let mut spec = RuleSpec::new(rule);
            spec.encoding = resolve_encoding(&profile, Some(rule), a.encoding.map(Into::into))?;
            rules::solve(&profile, &spec)?.schedule
        }
        (None, None) => return usage("give --rule or --schedule"),
    };
    writeln!(out, "schedule: {schedule}")?;
    for axiom in AxiomKind::ALL {
        let order_only = axiom != AxiomKind::TemporalUnanimity;
        if order_only && profile.mode() == ProfileMode::Interval {
            writeln!(out, "{axiom}: SKIPPED (order profiles only)")?;
            continue;
        }
        let report = axioms::check(&schedule, &profile, axiom)?;
        if report.holds() {
            writeln!(out, "{axiom}: PASS")?;
        }
        for v in &report.violations {
            writeln!(out, "{axiom}: {v}")?;
        }
    }
    Ok(())
}

pub(crate) fn gen(a: GenArgs, out: &mut dyn Write) -> CliResult {
    if a.tasks == 0 || a.voters == 0 {
        return usage("--tasks and --voters must be positive");
    }
    let profile = match a.generator {
        crate::GeneratorKind::UniformPermutations => {
            consched::generate::uniform_profile(a.tasks, a.voters, a.seed)
        }
        crate::GeneratorKind::MallowsLikeSwapNoise => {
            consched::generate::swap_noise_profile(a.tasks, a.voters, a.swaps, a.seed)
        }
    };
    let text = profile.to_string();
    match &a.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub(crate) fn ratio(a: RatioArgs, out: &mut dyn Write) -> CliResult {
    if a.trials == 0 || a.tasks == 0 || a.voters == 0 {
        return usage("--trials, --tasks and --voters must be positive");
    }
    let cfg = RatioConfig {
        trials: a.trials,
        n: a.tasks,
        v: a.voters,
        seed: a.seed,
        generator: a.generator,
        swaps: a.swaps,
        exact: a.exact,
    };
    let report = run_ratio(&cfg)?;
    match a.format {
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            )?;
        }
        Format::Text => {
            writeln!(out, "trials: {}", report.trials)?;
            let mut stat = |name: &str, s: &crate::ratio::RatioStat| {
                writeln!(out, "{name}: max {:.4} mean {:.4}", s.max, s.mean)
            };
            stat("tardiness", &report.tardiness)?;
            stat("deviation", &report.deviation)?;
            stat("earliness", &report.earliness)?;
            if let Some(k) = &report.kendall {
                stat("kendall", k)?;
            }
            writeln!(out, "opt_zero_trials: {}", report.opt_zero_trials)?;
            writeln!(out, "slot_comparisons: {}", report.slot_comparisons)?;
            writeln!(out, "violations: {}", report.violations.len())?;
            for c in &report.violations {
                writeln!(
                    out,
                    "counterexample trial={}: {}",
                    c.trial,
                    c.reasons.join("; ")
                )?;
                out.write_all(c.profile.as_bytes())?;
            }
        }
    }
    if report.holds() {
        Ok(())
    } else {
        Err(CliError::RatioViolated(report.violations.len()))
    }
}

pub(crate) fn fixtures(action: FixtureAction, out: &mut dyn Write) -> CliResult {
    match action {
        FixtureAction::List => {
            let width = fixtures::FIXTURES
                .iter()
                .map(|f| f.name.len())
                .max()
                .unwrap_or(0);
            for f in fixtures::FIXTURES {
                writeln!(out, "{:width$}  {}", f.name, f.description())?;
            }
        }
        FixtureAction::Show { name } => match fixtures::get(&name) {
            Some(f) => out.write_all(f.text.as_bytes())?,
            None => return usage(format!("no fixture named `{name}`")),
        },
        FixtureAction::Write { dir } => {
            std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(dir.clone(), e))?;
            for f in fixtures::FIXTURES {
                let path = dir.join(format!("{}.prof", f.name));
                std::fs::write(&path, f.text).map_err(|e| CliError::Io(path.clone(), e))?;
                writeln!(out, "{}", path.display())?;
            }
        }
    }
    Ok(())
}

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use prophet_core::baselines::{
    kuniform_opt_fraction_threshold, kuniform_probabilistic_threshold, partition_thresholds, samuel_cahn_threshold, BaselineMethod,
    OptSource, UniformThreshold,
};
use prophet_core::graphic::{consideration_set, derandomize_cut, sample_cut, Cut, GraphicPlan};
use prophet_core::model::{ex_ante_reduce, prophet_value_exact, worst_case_order, ExAnteReduction};
use prophet_core::sim::{
    adversarial_order_search, expected_value_exact, monte_carlo_ratio, trial_rng, ArrivalOrder, McConfig, OrderPolicy, OrderTag,
    RatioSummary, RuleMixture, SearchMode, TrialReport, EXHAUSTIVE_ORDER_CAP,
};
use prophet_core::{Error, ProphetInstance, ReductionMode};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::inspect::reduction_mode;
use crate::{emit, load_instance, CapArg, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    GraphicRandomCut,
    GraphicDerandomized,
    SamuelCahn,
    KuniformProb,
    KuniformOptfrac,
    Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartitionMethod {
    Probabilistic,
    OptFraction,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Monte Carlo trial count.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Required in mc mode.
    #[arg(long)]
    seed: Option<u64>,
    /// worst-case | random | identity | adversarial | explicit list such as 2,0,1
    #[arg(long, default_value = "worst-case")]
    order: String,
    /// Output directory for summary.json and trials.csv; summary goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    cap: CapArg,
    /// How to compute the ex-ante reduction; exact when the outcome space fits the cap if omitted.
    #[arg(long, value_enum)]
    reduction: Option<Mode>,
    #[arg(long, default_value_t = 20_000)]
    reduction_samples: u64,
    #[arg(long, value_enum, default_value = "probabilistic")]
    partition_method: PartitionMethod,
    /// Two-sided confidence level of the Monte Carlo interval.
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
}

enum OrderChoice {
    WorstCase,
    Random,
    Adversarial,
    Fixed(ArrivalOrder),
}

fn parse_order(s: &str, n: usize) -> Result<OrderChoice> {
    Ok(match s {
        "worst-case" => OrderChoice::WorstCase,
        "random" => OrderChoice::Random,
        "adversarial" => OrderChoice::Adversarial,
        "identity" => OrderChoice::Fixed(ArrivalOrder::new((0..n).collect(), OrderTag::Explicit)?),
        list => {
            let order = list
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| CliError::usage(format!("--order: '{x}' is not an index"))))
                .collect::<Result<Vec<_>>>()?;
            OrderChoice::Fixed(ArrivalOrder::new(order, OrderTag::Explicit)?)
        }
    })
}

enum Rules {
    Mixture(RuleMixture),
    /// A fresh uniform cut per trial.
    RandomCut(Box<GraphicPlan>),
}

struct Prepared {
    rules: Rules,
    reduction: ExAnteReduction,
    diagnostics: Value,
}

fn baseline_diagnostics(reduction: &ExAnteReduction, thresholds: &[UniformThreshold]) -> Value {
    json!({
        "p": reduction.bernoulli.p().as_slice(),
        "t": reduction.bernoulli.t().as_slice(),
        "thresholds": thresholds,
    })
}

fn opt_source(mode: ReductionMode, reduction: &ExAnteReduction) -> OptSource {
    match (reduction.prophet_exact, mode) {
        (Some(v), _) => OptSource::Given(v),
        (None, ReductionMode::MonteCarlo { samples, seed }) => OptSource::MonteCarlo { trials: samples, seed },
        (None, ReductionMode::Exact { cap }) => OptSource::Exact { cap },
    }
}

fn prepare(inst: &ProphetInstance, a: &RunArgs, rmode: ReductionMode, cap: u64) -> Result<Prepared> {
    let n = inst.len();
    let single = |rule| Rules::Mixture(vec![(1.0, rule)]);
    match a.algo {
        Algo::GraphicRandomCut | Algo::GraphicDerandomized => {
            let g = inst.matroid().as_graphic().map_err(|e| CliError::usage(e.to_string()))?;
            let plan = GraphicPlan::new(inst, rmode)?;
            let reduction = plan.reduction.clone();
            if a.algo == Algo::GraphicDerandomized {
                let cut = derandomize_cut(g, &plan.p_scaled, plan.t(), &plan.orientation, cap)?;
                let diagnostics = serde_json::to_value(plan.diagnostics(&cut)).expect("diagnostics serialize");
                return Ok(Prepared { rules: single(plan.rule_for_cut(&cut)), reduction, diagnostics });
            }
            let mut diagnostics = serde_json::to_value(plan.diagnostics(&Cut::new(vec![false; g.vertex_count()]))).expect("diagnostics serialize");
            let obj = diagnostics.as_object_mut().expect("diagnostics are an object");
            obj.remove("cut_a");
            obj.remove("consideration_set");
            let rules = match a.mode {
                Mode::Exact => {
                    let mixture = plan.cut_mixture(g, cap)?;
                    let sets: Vec<Value> =
                        mixture.iter().map(|(w, r)| json!({ "weight": w, "consideration_set": r.considered() })).collect();
                    obj.insert("consideration_sets".into(), Value::Array(sets));
                    Rules::Mixture(mixture)
                }
                Mode::Mc => {
                    let seed = a.seed.unwrap_or_default();
                    let cut = sample_cut(g, &mut trial_rng(seed, 0));
                    obj.insert("trial0_cut_a".into(), json!(cut.a()));
                    obj.insert("trial0_consideration_set".into(), json!(consideration_set(&plan.orientation, &cut)));
                    Rules::RandomCut(Box::new(plan))
                }
            };
            Ok(Prepared { rules, reduction, diagnostics })
        }
        Algo::SamuelCahn | Algo::KuniformProb | Algo::KuniformOptfrac => {
            inst.matroid().as_uniform().map_err(|e| CliError::usage(e.to_string()))?;
            let reduction = ex_ante_reduce(inst, rmode)?;
            let ut = match a.algo {
                Algo::SamuelCahn => samuel_cahn_threshold(inst).map_err(|e| CliError::usage(e.to_string()))?,
                Algo::KuniformProb => kuniform_probabilistic_threshold(inst)?,
                _ => kuniform_opt_fraction_threshold(inst, opt_source(rmode, &reduction))?,
            };
            let diagnostics = baseline_diagnostics(&reduction, &[ut]);
            Ok(Prepared { rules: single(ut.to_rule(n)), reduction, diagnostics })
        }
        Algo::Partition => {
            inst.matroid().as_partition().map_err(|e| CliError::usage(e.to_string()))?;
            let reduction = ex_ante_reduce(inst, rmode)?;
            let method = match a.partition_method {
                PartitionMethod::Probabilistic => BaselineMethod::Probabilistic,
                PartitionMethod::OptFraction => BaselineMethod::OptFraction,
            };
            let opt = match rmode {
                ReductionMode::Exact { cap } => OptSource::Exact { cap },
                ReductionMode::MonteCarlo { samples, seed } => OptSource::MonteCarlo { trials: samples, seed },
            };
            let pr = partition_thresholds(inst, method, opt)?;
            let diagnostics = baseline_diagnostics(&reduction, &pr.blocks);
            Ok(Prepared { rules: single(pr.rule), reduction, diagnostics })
        }
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    instance: String,
    algo: Algo,
    mode: &'static str,
    reduction_mode: &'static str,
    order_tag: &'static str,
    /// The fixed or adversarially found order; absent for random orders.
    order: Option<Vec<usize>>,
    alg_value: f64,
    prophet_value: f64,
    ratio: f64,
    half_width: f64,
    confidence: Option<f64>,
    trials: Option<u64>,
    low_sample: bool,
    /// Set when the prophet value is zero and the ratio is reported as 1.
    degenerate: bool,
    diagnostics: Value,
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    trial: u64,
    seed: u64,
    order_tag: &'a str,
    alg_value: f64,
    prophet_value: f64,
    ratio: f64,
    accepted_edges: String,
    degenerate: bool,
}

fn ratio_of(alg: f64, prophet: f64) -> (f64, bool) {
    if prophet == 0.0 {
        (1.0, true)
    } else {
        (alg / prophet, false)
    }
}

fn write_csv(path: &PathBuf, reports: &[TrialReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::usage(format!("{}: {other:?}", path.display())),
    })?;
    for r in reports {
        let (ratio, degenerate) = ratio_of(r.alg_value, r.prophet_value);
        w.serialize(CsvRow {
            trial: r.trial,
            seed: r.seed,
            order_tag: r.order_tag.as_str(),
            alg_value: r.alg_value,
            prophet_value: r.prophet_value,
            ratio,
            accepted_edges: r.accepted.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
            degenerate,
        })?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Exact value averaged over every arrival order.
fn random_order_value(inst: &ProphetInstance, mixture: &RuleMixture, cap: u64) -> Result<f64> {
    let n = inst.len();
    if n > EXHAUSTIVE_ORDER_CAP {
        return Err(Error::TooLarge { what: "exact random-order average", size: n as u128, cap: EXHAUSTIVE_ORDER_CAP as u128 }.into());
    }
    let mut total = 0.0;
    let mut count = 0u64;
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm, iterative.
    let mut c = vec![0usize; n];
    let mut visit = |perm: &[usize]| -> Result<()> {
        total += expected_value_exact(inst, mixture, &ArrivalOrder::new(perm.to_vec(), OrderTag::Random)?, cap)?;
        count += 1;
        Ok(())
    };
    visit(&perm)?;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm)?;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total / count as f64)
}

pub fn run(a: RunArgs) -> Result<()> {
    let (_, inst) = load_instance(&a.instance)?;
    let cap = a.cap.value();
    let n = inst.len();
    if a.mode == Mode::Mc && a.seed.is_none() {
        return Err(CliError::usage("--seed is required in mc mode"));
    }
    if !(a.confidence > 0.0 && a.confidence < 1.0) {
        return Err(CliError::usage("--confidence must lie in (0, 1)"));
    }
    let choice = parse_order(&a.order, n)?;
    let rmode = reduction_mode(&inst, a.reduction, cap, a.reduction_samples, a.seed.unwrap_or_default());
    let prepared = prepare(&inst, &a, rmode, cap)?;
    let worst = || ArrivalOrder::new(worst_case_order(&prepared.reduction.bernoulli), OrderTag::WorstCase).expect("sorting yields a permutation");
    let reduction_tag = if matches!(rmode, ReductionMode::Exact { .. }) { "exact" } else { "mc" };

    let (summary, reports) = match a.mode {
        Mode::Exact => {
            let Rules::Mixture(mixture) = &prepared.rules else { unreachable!("exact mode always builds a mixture") };
            let (order, alg) = match choice {
                OrderChoice::WorstCase => {
                    let o = worst();
                    let v = expected_value_exact(&inst, mixture, &o, cap)?;
                    (Some(o), v)
                }
                OrderChoice::Fixed(o) => {
                    let v = expected_value_exact(&inst, mixture, &o, cap)?;
                    (Some(o), v)
                }
                OrderChoice::Adversarial => {
                    let mode = if n <= EXHAUSTIVE_ORDER_CAP { SearchMode::Exhaustive } else { SearchMode::Local };
                    let (o, v) = adversarial_order_search(&inst, mixture, mode, cap)?;
                    (Some(o), v)
                }
                OrderChoice::Random => (None, random_order_value(&inst, mixture, cap)?),
            };
            let prophet = match prepared.reduction.prophet_exact {
                Some(v) => v,
                None => prophet_value_exact(&inst, cap)?,
            };
            let (ratio, degenerate) = ratio_of(alg, prophet);
            let summary = Summary {
                instance: a.instance.display().to_string(),
                algo: a.algo,
                mode: "exact",
                reduction_mode: reduction_tag,
                order_tag: order.as_ref().map_or(OrderTag::Random, |o| o.tag()).as_str(),
                order: order.map(|o| o.as_slice().to_vec()),
                alg_value: alg,
                prophet_value: prophet,
                ratio,
                half_width: 0.0,
                confidence: None,
                trials: None,
                low_sample: false,
                degenerate,
                diagnostics: prepared.diagnostics,
            };
            (summary, None)
        }
        Mode::Mc => {
            let seed = a.seed.expect("checked above");
            let (policy, order) = match choice {
                OrderChoice::WorstCase => {
                    let o = worst();
                    (OrderPolicy::Fixed(o.clone()), Some(o))
                }
                OrderChoice::Fixed(o) => (OrderPolicy::Fixed(o.clone()), Some(o)),
                OrderChoice::Random => (OrderPolicy::Random, None),
                OrderChoice::Adversarial => return Err(CliError::usage("adversarial order search needs --mode exact")),
            };
            let mut cfg = McConfig::new(a.trials, seed);
            cfg.confidence = a.confidence;
            let run = match &prepared.rules {
                Rules::RandomCut(plan) => {
                    let g = inst.matroid().as_graphic()?;
                    monte_carlo_ratio(&inst, |rng| plan.rule_for_cut(&sample_cut(g, rng)), &policy, cfg)?
                }
                Rules::Mixture(m) => {
                    let rule = m[0].1.clone();
                    monte_carlo_ratio(&inst, |_| rule.clone(), &policy, cfg)?
                }
            };
            let s: RatioSummary = run.summary;
            let summary = Summary {
                instance: a.instance.display().to_string(),
                algo: a.algo,
                mode: "mc",
                reduction_mode: reduction_tag,
                order_tag: order.as_ref().map_or(OrderTag::Random, |o| o.tag()).as_str(),
                order: order.map(|o| o.as_slice().to_vec()),
                alg_value: s.mean_alg,
                prophet_value: s.mean_prophet,
                ratio: s.ratio,
                half_width: s.half_width,
                confidence: Some(s.confidence),
                trials: Some(s.trials),
                low_sample: s.low_sample,
                degenerate: s.degenerate,
                diagnostics: prepared.diagnostics,
            };
            (summary, Some(run.reports))
        }
    };

    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    match &a.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            emit(Some(&dir.join("summary.json")), &text)?;
            if let Some(reports) = reports {
                write_csv(&dir.join("trials.csv"), &reports)?;
            }
            if summary.low_sample {
                eprintln!("warning: fewer than 1000 trials; the interval is unreliable");
            }
            eprintln!("ratio {:.6} (+/- {:.6}) written to {}", summary.ratio, summary.half_width, dir.display());
            Ok(())
        }
        None => emit(None, &text),
    }
}

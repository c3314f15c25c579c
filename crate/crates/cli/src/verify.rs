use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use prophet_core::baselines::{kuniform_opt_fraction_threshold, kuniform_probabilistic_threshold, partition_thresholds, BaselineMethod, OptSource};
use prophet_core::graphic::{
    blocking_probability, claim_objective, consideration_set, cut_bound_exact, derandomize_cut, orient_low_indegree, BlockingMode, GraphicPlan,
    SCALE,
};
use prophet_core::matroid::{max_weight_basis, polytope_slack, scale, AnyMatroid, Matroid, DEFAULT_POLYTOPE_CAP};
use prophet_core::model::{ex_ante_reduce, prophet_value_exact, worst_case_order, ExAnteReduction};
use prophet_core::sim::{adversarial_order_search, coupling_audit, expected_value_exact, ArrivalOrder, OrderTag, RuleMixture, SearchMode};
use prophet_core::{BernoulliInstance, ProphetInstance, ReductionMode, ThresholdRule};

use crate::error::{CliError, Result};
use crate::{load_instance, CapArg};

const TOL: f64 = 1e-9;
const MASS_TOL: f64 = 1e-12;
/// Largest edge count for the exhaustive in-edge blocking check.
const BLOCKING_EDGE_CAP: usize = 10;
/// Largest ground set for the exhaustive arrival-order check.
const ORDER_CHECK_CAP: usize = 7;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Directory of instance files (*.json).
    dir: PathBuf,
    #[command(flatten)]
    cap: CapArg,
}

/// Outcome of one check on one instance; `slack >= 0` means it holds.
struct Row {
    check: &'static str,
    slack: f64,
    pass: bool,
    note: Option<String>,
}

fn row(check: &'static str, slack: f64) -> Row {
    Row { check, slack, pass: slack >= -TOL, note: None }
}

fn failed(check: &'static str, note: String) -> Row {
    Row { check, slack: f64::NEG_INFINITY, pass: false, note: Some(note) }
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for e in entries {
        let path = e.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::usage(format!("no instances in {}", dir.display())));
    }
    Ok(files)
}

fn order_gap(inst: &ProphetInstance, b: &BernoulliInstance, mixture: &RuleMixture, cap: u64) -> prophet_core::Result<f64> {
    let asc = ArrivalOrder::new(worst_case_order(b), OrderTag::WorstCase)?;
    let asc_value = expected_value_exact(inst, mixture, &asc, cap)?;
    let (_, best) = adversarial_order_search(inst, mixture, SearchMode::Exhaustive, cap)?;
    Ok(best - asc_value)
}

fn common_checks(inst: &ProphetInstance, b: &BernoulliInstance, opt: f64, cap: u64, rows: &mut Vec<Row>) -> prophet_core::Result<()> {
    rows.push(row("benchmark bound: sum(p t) >= Opt", b.benchmark() - opt));
    match polytope_slack(inst.matroid(), b.p(), DEFAULT_POLYTOPE_CAP) {
        Ok(s) => rows.push(row("polytope membership of p", -s)),
        Err(e) => rows.push(failed("polytope membership of p", e.to_string())),
    }
    let n = inst.len();
    let worst = ArrivalOrder::new(worst_case_order(b), OrderTag::WorstCase)?;
    let mut slack = f64::INFINITY;
    let mut note = None;
    for fraction in [1.0, SCALE] {
        let audit = coupling_audit(inst, b, &vec![fraction; n], &worst, cap)?;
        slack = slack.min(audit.min_pattern_slack);
        if audit.pass_set_mismatches > 0 || audit.max_marginal_error > TOL {
            note = Some(format!("{} pass-set mismatches, marginal error {:.1e}", audit.pass_set_mismatches, audit.max_marginal_error));
        }
    }
    rows.push(match note {
        Some(n) => failed("coupling of original and Bernoulli views", n),
        None => row("coupling of original and Bernoulli views", slack),
    });
    let values: Vec<f64> = inst.dists().iter().map(|d| d.mean()).collect();
    let basis = max_weight_basis(inst.matroid(), &values)?;
    let greedy: f64 = basis.iter().map(|&i| values[i]).sum();
    if n <= 16 {
        let best = (0u64..1 << n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| inst.matroid().is_independent(s).unwrap_or(false))
            .map(|s| s.iter().map(|&i| values[i]).sum::<f64>())
            .fold(0.0, f64::max);
        rows.push(row("greedy basis matches exhaustive search", -(best - greedy).abs()));
    }
    Ok(())
}

fn graphic_checks(inst: &ProphetInstance, red: ExAnteReduction, opt: f64, cap: u64, rows: &mut Vec<Row>) -> prophet_core::Result<()> {
    let g = inst.matroid().as_graphic()?;
    let b = red.bernoulli.clone();
    let p_scaled = scale(b.p(), SCALE)?;
    let o = match orient_low_indegree(g, &p_scaled) {
        Ok(o) => o,
        Err(e) => {
            for check in ["orientation in-mass <= 1/2", "random-cut objective >= sum(p' t)/8", "graphic value >= Opt/32"] {
                rows.push(failed(check, e.to_string()));
            }
            return Ok(());
        }
    };
    let max_in = o.in_mass(&p_scaled).into_iter().fold(0.0, f64::max);
    rows.push(Row { check: "orientation in-mass <= 1/2", slack: 0.5 - max_in, pass: max_in <= 0.5 + MASS_TOL, note: None });
    let m = g.ground_size();
    if m <= BLOCKING_EDGE_CAP {
        let mut worst_b: f64 = 0.0;
        for i in 0..m {
            let v = o.head(i);
            let pool: Vec<usize> = (0..m).filter(|&j| j != i && o.tail(j) != v).collect();
            for mask in 0u64..1 << pool.len() {
                let mut s: Vec<usize> = (0..pool.len()).filter(|&k| mask >> k & 1 == 1).map(|k| pool[k]).collect();
                s.push(i);
                worst_b = worst_b.max(blocking_probability(g, &p_scaled, &s, i, BlockingMode::Exact { cap })?);
            }
        }
        rows.push(Row { check: "in-edge blocking <= 1/2", slack: 0.5 - worst_b, pass: worst_b <= 0.5 + MASS_TOL, note: None });
    }
    let t = b.t();
    let bound = cut_bound_exact(g, &p_scaled, t, &o, cap)?;
    rows.push(row("random-cut objective >= sum(p' t)/8", bound - p_scaled.dot(t) / 8.0));
    let cut = derandomize_cut(g, &p_scaled, t, &o, cap)?;
    let derand = claim_objective(g, &p_scaled, t, &consideration_set(&o, &cut), cap)?;
    rows.push(row("derandomized cut >= random-cut objective", derand - bound));
    let plan = GraphicPlan::from_reduction(inst, red)?;
    let mixture = plan.cut_mixture(g, cap)?;
    let value = expected_value_exact(inst, &mixture, &plan.worst_case_order(), cap)?;
    rows.push(row("graphic value >= Opt/32", value - opt / 32.0));
    if inst.len() <= ORDER_CHECK_CAP {
        let view = b.to_prophet_instance()?;
        let view_plan = GraphicPlan::from_reduction(&view, ExAnteReduction { bernoulli: b.clone(), prophet_exact: None, polytope_slack: None })?;
        let view_mix = view_plan.cut_mixture(g, cap)?;
        rows.push(row("t-ascending order is worst", order_gap(&view, &b, &view_mix, cap)?));
    }
    Ok(())
}

fn worst_value(inst: &ProphetInstance, b: &BernoulliInstance, rule: ThresholdRule, cap: u64) -> prophet_core::Result<f64> {
    let mixture = vec![(1.0, rule)];
    if inst.len() <= ORDER_CHECK_CAP {
        Ok(adversarial_order_search(inst, &mixture, SearchMode::Exhaustive, cap)?.1)
    } else {
        expected_value_exact(inst, &mixture, &ArrivalOrder::new(worst_case_order(b), OrderTag::WorstCase)?, cap)
    }
}

fn baseline_checks(inst: &ProphetInstance, b: &BernoulliInstance, opt: f64, cap: u64, rows: &mut Vec<Row>) -> prophet_core::Result<()> {
    let n = inst.len();
    let (prob, frac) = match inst.matroid() {
        AnyMatroid::Uniform(_) => (
            kuniform_probabilistic_threshold(inst)?.to_rule(n),
            kuniform_opt_fraction_threshold(inst, OptSource::Given(opt))?.to_rule(n),
        ),
        AnyMatroid::Partition(_) => (
            partition_thresholds(inst, BaselineMethod::Probabilistic, OptSource::Exact { cap })?.rule,
            partition_thresholds(inst, BaselineMethod::OptFraction, OptSource::Exact { cap })?.rule,
        ),
        AnyMatroid::Graphic(_) => return Ok(()),
    };
    rows.push(row("probabilistic threshold >= Opt/2", worst_value(inst, b, prob, cap)? - opt / 2.0));
    rows.push(row("Opt-fraction threshold >= Opt/2", worst_value(inst, b, frac, cap)? - opt / 2.0));
    Ok(())
}

fn check_instance(path: &Path, cap: u64) -> Result<Vec<Row>> {
    let (file, inst) = load_instance(path)?;
    let computed = ex_ante_reduce(&inst, ReductionMode::Exact { cap })?;
    let opt = match computed.prophet_exact {
        Some(v) => v,
        None => prophet_value_exact(&inst, cap)?,
    };
    // A stored reduction replaces the computed one, so corrupted vectors surface here.
    let red = match file.stored_reduction(&inst)? {
        Some(b) => ExAnteReduction { polytope_slack: None, prophet_exact: Some(opt), bernoulli: b },
        None => computed,
    };
    let mut rows = Vec::new();
    common_checks(&inst, &red.bernoulli, opt, cap, &mut rows)?;
    if inst.matroid().as_graphic().is_ok() {
        graphic_checks(&inst, red, opt, cap, &mut rows)?;
    } else {
        baseline_checks(&inst, &red.bernoulli, opt, cap, &mut rows)?;
    }
    Ok(rows)
}

#[derive(Default)]
struct Tally {
    instances: usize,
    passed: usize,
    min_slack: f64,
    failures: Vec<String>,
}

pub fn verify(a: VerifyArgs) -> Result<()> {
    let cap = a.cap.value();
    let files = instance_files(&a.dir)?;
    let mut table: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut order: Vec<&'static str> = Vec::new();
    for path in &files {
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        for r in check_instance(path, cap)? {
            if !table.contains_key(r.check) {
                order.push(r.check);
            }
            let t = table.entry(r.check).or_insert(Tally { min_slack: f64::INFINITY, ..Tally::default() });
            t.instances += 1;
            t.min_slack = t.min_slack.min(r.slack);
            if r.pass {
                t.passed += 1;
            } else {
                t.failures.push(match r.note {
                    Some(n) => format!("{name} ({n})"),
                    None => name.clone(),
                });
            }
        }
    }
    let mut report = format!("{:<44} {:>9} {:>7} {:>12}  status\n", "check", "instances", "passed", "min slack");
    let mut all_pass = true;
    for check in order {
        let t = &table[check];
        let ok = t.failures.is_empty();
        all_pass &= ok;
        // `+ 0.0` folds a negative zero slack into plain zero for display.
        let slack = t.min_slack + 0.0;
        report += &format!("{check:<44} {:>9} {:>7} {:>12.4e}  {}\n", t.instances, t.passed, slack, if ok { "PASS" } else { "FAIL" });
        for f in &t.failures {
            report += &format!("    failed: {f}\n");
        }
    }
    if all_pass {
        report += &format!("all checks passed on {} instances", files.len());
        crate::emit(None, &report)
    } else {
        crate::emit(None, report.trim_end())?;
        Err(CliError::Verification("one or more checks failed".into()))
    }
}

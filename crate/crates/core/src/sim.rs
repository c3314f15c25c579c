//! Online execution of non-adaptive threshold rules.
//!
//! An arriving item is accepted iff it passes its threshold and keeps the
//! accepted set independent in the instance matroid. Thresholds are never
//! consulted or changed based on history.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::matroid::{IndependenceTracker, Matroid};
use crate::model::ProphetInstance;
use crate::threshold::{Threshold, ThresholdRule};

/// Element cap for exhaustive order search.
pub const EXHAUSTIVE_ORDER_CAP: usize = 8;

/// Trial counts below this carry a low-sample warning.
pub const LOW_SAMPLE_TRIALS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderTag {
    WorstCase,
    Random,
    Explicit,
    AdversarialSearch,
}

impl OrderTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrderTag::WorstCase => "worst-case",
            OrderTag::Random => "random",
            OrderTag::Explicit => "explicit",
            OrderTag::AdversarialSearch => "adversarial-search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalOrder {
    order: Vec<usize>,
    tag: OrderTag,
}

impl ArrivalOrder {
    pub fn new(order: Vec<usize>, tag: OrderTag) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid(format!("{order:?} is not a permutation")));
            }
        }
        Ok(ArrivalOrder { order, tag })
    }

    pub fn identity(n: usize) -> Self {
        ArrivalOrder { order: (0..n).collect(), tag: OrderTag::Explicit }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        ArrivalOrder { order, tag: OrderTag::Random }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn tag(&self) -> OrderTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Realized values plus the upfront uniform coin of every item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub values: Vec<f64>,
    pub coins: Vec<f64>,
}

impl Realization {
    /// Values first, then all coins, both before any arrival.
    pub fn draw<R: Rng + ?Sized>(inst: &ProphetInstance, rng: &mut R) -> Self {
        let values = inst.draw_values(rng);
        let coins = (0..values.len()).map(|_| rng.gen()).collect();
        Realization { values, coins }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: u64,
    pub seed: u64,
    pub order_tag: OrderTag,
    /// Sorted ascending.
    pub accepted: Vec<usize>,
    pub alg_value: f64,
    pub prophet_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realization: Option<Realization>,
}

fn check_sizes(inst: &ProphetInstance, rule: &ThresholdRule, order: &ArrivalOrder) -> Result<()> {
    if rule.len() != inst.len() || order.len() != inst.len() {
        return Err(Error::invalid(format!(
            "instance has {} items, rule {}, order {}",
            inst.len(),
            rule.len(),
            order.len()
        )));
    }
    Ok(())
}

pub fn execute_online(
    inst: &ProphetInstance,
    rule: &ThresholdRule,
    order: &ArrivalOrder,
    realization: &Realization,
) -> Result<TrialReport> {
    check_sizes(inst, rule, order)?;
    if realization.values.len() != inst.len() || realization.coins.len() != inst.len() {
        return Err(Error::invalid("realization length does not match instance"));
    }
    let mut tracker = inst.matroid().tracker();
    let mut accepted = Vec::new();
    for &i in order.as_slice() {
        if rule.get(i).passes(realization.values[i], realization.coins[i]) && tracker.try_add(i) {
            accepted.push(i);
        }
    }
    accepted.sort_unstable();
    let alg_value = accepted.iter().fold(0.0, |acc, &i| acc + realization.values[i]);
    Ok(TrialReport {
        trial: 0,
        seed: 0,
        order_tag: order.tag(),
        accepted,
        alg_value,
        prophet_value: inst.prophet_value_of(&realization.values),
        realization: Some(realization.clone()),
    })
}

/// A finite distribution over rules, e.g. one rule per random cut.
pub type RuleMixture = Vec<(f64, ThresholdRule)>;

/// Exact expected online value of one rule under a fixed order.
///
/// Items pass independently, and whether an item is accepted depends only on
/// which items pass, so the expectation enumerates pass patterns of the items
/// whose pass probability lies strictly between 0 and 1.
pub fn rule_value_exact(inst: &ProphetInstance, rule: &ThresholdRule, order: &ArrivalOrder, cap: u64) -> Result<f64> {
    check_sizes(inst, rule, order)?;
    let laws: Vec<_> = inst.dists().iter().zip(rule.thresholds()).map(|(d, t)| d.pass_law(t)).collect();
    let uncertain: Vec<usize> = (0..inst.len()).filter(|&i| laws[i].prob > 0.0 && laws[i].prob < 1.0).collect();
    if uncertain.len() >= 64 || (1u64 << uncertain.len()) > cap {
        return Err(Error::TooLarge {
            what: "pass-pattern enumeration",
            size: 1u128 << uncertain.len().min(127),
            cap: cap as u128,
        });
    }
    let mut slot = vec![usize::MAX; inst.len()];
    for (k, &i) in uncertain.iter().enumerate() {
        slot[i] = k;
    }
    let mut total = 0.0;
    for mask in 0u64..(1u64 << uncertain.len()) {
        let mut prob = 1.0;
        for (k, &i) in uncertain.iter().enumerate() {
            prob *= if mask >> k & 1 == 1 { laws[i].prob } else { 1.0 - laws[i].prob };
        }
        if prob == 0.0 {
            continue;
        }
        let mut tracker = inst.matroid().tracker();
        let mut value = 0.0;
        for &i in order.as_slice() {
            let passes = match slot[i] {
                usize::MAX => laws[i].prob >= 1.0,
                k => mask >> k & 1 == 1,
            };
            if passes && tracker.try_add(i) {
                value += laws[i].mean_given_pass;
            }
        }
        total += prob * value;
    }
    Ok(total)
}

/// Exact expected online value over a rule mixture, all coins and realizations.
pub fn expected_value_exact(inst: &ProphetInstance, rules: &[(f64, ThresholdRule)], order: &ArrivalOrder, cap: u64) -> Result<f64> {
    rules.iter().map(|(w, r)| Ok(w * rule_value_exact(inst, r, order, cap)?)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Local,
}

/// Arrival order minimizing the exact expected value of `rules`.
///
/// Exhaustive mode visits all permutations (lexicographic; the first minimum
/// wins). Local mode starts from the identity and applies improving adjacent
/// transpositions until none remains.
pub fn adversarial_order_search(
    inst: &ProphetInstance,
    rules: &[(f64, ThresholdRule)],
    mode: SearchMode,
    cap: u64,
) -> Result<(ArrivalOrder, f64)> {
    let n = inst.len();
    let eval = |order: &[usize]| {
        let o = ArrivalOrder { order: order.to_vec(), tag: OrderTag::AdversarialSearch };
        expected_value_exact(inst, rules, &o, cap)
    };
    let best = match mode {
        SearchMode::Exhaustive => {
            if n > EXHAUSTIVE_ORDER_CAP {
                return Err(Error::TooLarge {
                    what: "exhaustive order search",
                    size: n as u128,
                    cap: EXHAUSTIVE_ORDER_CAP as u128,
                });
            }
            let mut best: Option<(Vec<usize>, f64)> = None;
            for perm in (0..n).permutations(n) {
                let v = eval(&perm)?;
                if best.as_ref().map_or(true, |(_, b)| v < *b - 1e-12) {
                    best = Some((perm, v));
                }
            }
            best.unwrap_or((Vec::new(), 0.0))
        }
        SearchMode::Local => {
            let mut order: Vec<usize> = (0..n).collect();
            let mut value = eval(&order)?;
            loop {
                let mut improved = false;
                for k in 0..n.saturating_sub(1) {
                    order.swap(k, k + 1);
                    let v = eval(&order)?;
                    if v < value - 1e-12 {
                        value = v;
                        improved = true;
                    } else {
                        order.swap(k, k + 1);
                    }
                }
                if !improved {
                    break;
                }
            }
            (order, value)
        }
    };
    Ok((ArrivalOrder { order: best.0, tag: OrderTag::AdversarialSearch }, best.1))
}

#[derive(Debug, Clone)]
pub enum OrderPolicy {
    Fixed(ArrivalOrder),
    /// Fresh uniform permutation per trial.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Two-sided confidence level of the reported half-width.
    pub confidence: f64,
    pub retain_realizations: bool,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        McConfig { trials, seed, confidence: 0.99, retain_realizations: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSummary {
    pub mean_alg: f64,
    pub mean_prophet: f64,
    /// `mean_alg / mean_prophet`, or 1 when both are zero.
    pub ratio: f64,
    /// Normal-approximation half-width of the ratio (delta method).
    pub half_width: f64,
    pub confidence: f64,
    pub trials: u64,
    pub low_sample: bool,
    /// Set when the prophet mean is zero.
    pub degenerate: bool,
}

impl RatioSummary {
    pub fn from_reports(reports: &[TrialReport], confidence: f64) -> Self {
        let n = reports.len() as u64;
        let nf = n.max(1) as f64;
        let mean_alg = reports.iter().map(|r| r.alg_value).sum::<f64>() / nf;
        let mean_prophet = reports.iter().map(|r| r.prophet_value).sum::<f64>() / nf;
        let degenerate = mean_prophet == 0.0;
        let ratio = if degenerate { 1.0 } else { mean_alg / mean_prophet };
        let half_width = if degenerate || n < 2 {
            0.0
        } else {
            let var = reports
                .iter()
                .map(|r| (r.alg_value - ratio * r.prophet_value).powi(2))
                .sum::<f64>()
                / (nf - 1.0);
            z_score(confidence) * var.sqrt() / (nf.sqrt() * mean_prophet)
        };
        RatioSummary {
            mean_alg,
            mean_prophet,
            ratio,
            half_width,
            confidence,
            trials: n,
            low_sample: n < LOW_SAMPLE_TRIALS,
            degenerate,
        }
    }
}

pub fn z_score(confidence: f64) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(0.5 + confidence / 2.0)
}

/// RNG stream for one trial: determined by `(seed, trial)` alone.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone)]
pub struct MonteCarloRun {
    pub summary: RatioSummary,
    pub reports: Vec<TrialReport>,
}

/// I.i.d. trials, each redrawing builder randomness, order (if random),
/// values and coins from its own stream; with the `parallel` feature trials
/// run on the rayon pool. Results are aggregated in trial order either way.
pub fn monte_carlo_ratio<B>(inst: &ProphetInstance, builder: B, policy: &OrderPolicy, cfg: McConfig) -> Result<MonteCarloRun>
where
    B: Fn(&mut ChaCha8Rng) -> ThresholdRule + Sync,
{
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    #[cfg(feature = "parallel")]
    let trials = (0..cfg.trials).into_par_iter();
    #[cfg(not(feature = "parallel"))]
    let trials = 0..cfg.trials;
    let reports = trials
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let rule = builder(&mut rng);
            let order = match policy {
                OrderPolicy::Fixed(o) => o.clone(),
                OrderPolicy::Random => ArrivalOrder::random(inst.len(), &mut rng),
            };
            let realization = Realization::draw(inst, &mut rng);
            let mut report = execute_online(inst, &rule, &order, &realization)?;
            report.trial = trial;
            report.seed = cfg.seed;
            if !cfg.retain_realizations {
                report.realization = None;
            }
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonteCarloRun { summary: RatioSummary::from_reports(&reports, cfg.confidence), reports })
}

/// Result of [`coupling_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingAudit {
    /// Joint outcome cells enumerated.
    pub cells: u64,
    /// Cells where the two views pass different item sets.
    pub pass_set_mismatches: u64,
    /// Pass patterns whose conditional original value falls below the Bernoulli value.
    pub pattern_violations: u64,
    /// Smallest `E[original | pattern] - bernoulli(pattern)` seen.
    pub min_pattern_slack: f64,
    /// Largest `|Pr[active_i] - p_i|`.
    pub max_marginal_error: f64,
}

/// Compares the original and Bernoulli views of a reduction under one coupling.
///
/// Both views share each item's value and upfront coin through its
/// distributional position `Pr[X_i > x] + coin * Pr[X_i = x]`: item `i` is
/// active iff the position is below `p_i`, and passes the Bernoulli-view rule
/// iff it is below `p_i * fraction[i]`. The original view uses the quantile
/// threshold at `p_i * fraction[i]`. Every joint (value, coin cell) outcome is
/// enumerated; accepted sets must agree on every outcome, and on every pass
/// pattern the conditional expected original value must be at least the
/// Bernoulli value. Pointwise domination is not required: a passing value can
/// sit below `t_i`.
pub fn coupling_audit(
    inst: &ProphetInstance,
    b: &crate::model::BernoulliInstance,
    fraction: &[f64],
    order: &ArrivalOrder,
    cap: u64,
) -> Result<CouplingAudit> {
    const EDGE_TOL: f64 = 1e-9;
    let n = inst.len();
    if b.len() != n || fraction.len() != n || order.len() != n {
        return Err(Error::invalid("instance, reduction, fractions and order must have equal length"));
    }
    if n >= 64 {
        return Err(Error::TooLarge { what: "coupling audit", size: n as u128, cap: 63 });
    }
    let p = b.p().as_slice();
    let t = b.t().as_slice();
    let levels: Vec<f64> = (0..n).map(|i| p[i] * fraction[i].clamp(0.0, 1.0)).collect();
    let mut thresholds = Vec::with_capacity(n);
    // (value, coin, probability, position) per item.
    let mut states: Vec<Vec<(f64, f64, f64, f64)>> = Vec::with_capacity(n);
    for (i, d) in inst.dists().iter().enumerate() {
        let level = levels[i];
        thresholds.push(if level > 0.0 { d.quantile_threshold(level)?.into() } else { Threshold::Infinite });
        let mut item = Vec::new();
        let mut above = 0.0;
        for atom in (0..d.len()).rev() {
            let mass = d.probs()[atom];
            let mut cuts = vec![0.0, 1.0];
            for q in [p[i], level] {
                let c = (q - above) / mass;
                if c > EDGE_TOL && c < 1.0 - EDGE_TOL {
                    cuts.push(c);
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            for w in cuts.windows(2) {
                let coin = (w[0] + w[1]) / 2.0;
                item.push((d.support()[atom], coin, mass * (w[1] - w[0]), above + coin * mass));
            }
            above += mass;
        }
        states.push(item);
    }
    let count = states.iter().try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128)).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::TooLarge { what: "coupled outcome enumeration", size: count, cap: cap as u128 });
    }
    let mut audit = CouplingAudit { cells: 0, pass_set_mismatches: 0, pattern_violations: 0, min_pattern_slack: f64::INFINITY, max_marginal_error: 0.0 };
    let mut active_mass = vec![0.0; n];
    let mut patterns: std::collections::BTreeMap<u64, (f64, f64, f64)> = std::collections::BTreeMap::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut prob = 1.0;
        let (mut orig_pass, mut bern_pass) = (0u64, 0u64);
        for i in 0..n {
            let (x, coin, w, pos) = states[i][idx[i]];
            prob *= w;
            if thresholds[i].passes(x, coin) {
                orig_pass |= 1 << i;
            }
            if pos < levels[i] {
                bern_pass |= 1 << i;
            }
        }
        for i in 0..n {
            if states[i][idx[i]].3 < p[i] {
                active_mass[i] += prob;
            }
        }
        audit.cells += 1;
        if orig_pass != bern_pass {
            audit.pass_set_mismatches += 1;
        }
        let mut tracker = inst.matroid().tracker();
        let (mut orig, mut bern) = (0.0, 0.0);
        for &i in order.as_slice() {
            if orig_pass >> i & 1 == 1 && tracker.try_add(i) {
                orig += states[i][idx[i]].0;
                bern += t[i];
            }
        }
        let e = patterns.entry(orig_pass).or_insert((0.0, 0.0, bern));
        e.0 += prob;
        e.1 += prob * orig;
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < states[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    for (prob, weighted, bern) in patterns.into_values() {
        if prob <= 0.0 {
            continue;
        }
        let slack = weighted / prob - bern;
        audit.min_pattern_slack = audit.min_pattern_slack.min(slack);
        if slack < -EDGE_TOL * bern.max(1.0) {
            audit.pattern_violations += 1;
        }
    }
    audit.max_marginal_error = (0..n).map(|i| (active_mass[i] - p[i]).abs()).fold(0.0, f64::max);
    Ok(audit)
}

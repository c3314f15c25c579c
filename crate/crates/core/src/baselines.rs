//! Single-threshold baselines for uniform and partition matroids.

use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::matroid::{Matroid, UniformMatroid};
use crate::model::{prophet_value_exact, prophet_value_mc, ProphetInstance};
use crate::threshold::{Threshold, ThresholdRule};

/// Target probability that at least one slot stays empty.
pub const EMPTY_SLOT_TARGET: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineMethod {
    Probabilistic,
    OptFraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degeneracy {
    /// Every value is zero; no threshold is meaningful.
    AllZero,
    /// Fewer items than slots, so a slot is always empty.
    FewerItemsThanSlots,
    /// Every item is deterministic.
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformThreshold {
    pub threshold: Threshold,
    pub k: usize,
    /// Method that actually produced `threshold`.
    pub method: BaselineMethod,
    pub degenerate: Option<Degeneracy>,
}

impl UniformThreshold {
    pub fn to_rule(&self, n: usize) -> ThresholdRule {
        ThresholdRule::uniform(n, self.threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptSource {
    Exact { cap: u64 },
    MonteCarlo { trials: u64, seed: u64 },
    Given(f64),
}

impl OptSource {
    fn resolve(&self, inst: &ProphetInstance) -> Result<f64> {
        match *self {
            OptSource::Exact { cap } => prophet_value_exact(inst, cap),
            OptSource::MonteCarlo { trials, seed } => Ok(prophet_value_mc(inst, trials, seed)?.estimate),
            OptSource::Given(v) => Ok(v),
        }
    }
}

/// `Pr[fewer than k successes]` for independent successes with probabilities `probs`.
pub fn prob_fewer_than(probs: &[f64], k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    // dist[c] = Pr[c successes so far], counts >= k dropped
    let mut dist = vec![0.0; k];
    dist[0] = 1.0;
    for &p in probs {
        for c in (0..k).rev() {
            let stay = dist[c] * (1.0 - p);
            let from_below = if c > 0 { dist[c - 1] * p } else { 0.0 };
            dist[c] = stay + from_below;
        }
    }
    dist.iter().sum()
}

fn pass_probs(dists: &[DiscreteDistribution], value: f64, q: f64) -> Vec<f64> {
    let t = Threshold::Finite { value, atom_accept: q };
    dists.iter().map(|d| d.pass_law(&t).prob).collect()
}

fn degeneracy(dists: &[DiscreteDistribution], k: usize) -> Option<Degeneracy> {
    if dists.iter().all(|d| d.max() == 0.0) {
        Some(Degeneracy::AllZero)
    } else if dists.len() < k {
        Some(Degeneracy::FewerItemsThanSlots)
    } else if dists.iter().all(DiscreteDistribution::is_point) {
        Some(Degeneracy::Deterministic)
    } else {
        None
    }
}

/// Prophet value of the degenerate cases, in closed form.
fn degenerate_opt(dists: &[DiscreteDistribution], k: usize) -> f64 {
    let mut means: Vec<f64> = dists.iter().map(DiscreteDistribution::mean).collect();
    means.sort_by(|a, b| b.total_cmp(a));
    means.iter().take(k).sum()
}

/// Threshold and atom coin with `Pr[fewer than k items pass] = 1/2`.
fn calibrate(dists: &[DiscreteDistribution], k: usize) -> Threshold {
    let mut candidates: Vec<f64> = dists.iter().flat_map(|d| d.support().iter().copied()).collect();
    candidates.sort_by(|a, b| b.total_cmp(a));
    candidates.dedup();
    let f = |value: f64, q: f64| prob_fewer_than(&pass_probs(dists, value, q), k);
    for &v in &candidates {
        let at_one = f(v, 1.0);
        if at_one > EMPTY_SLOT_TARGET {
            continue;
        }
        if (at_one - EMPTY_SLOT_TARGET).abs() <= 1e-15 {
            return Threshold::Finite { value: v, atom_accept: 1.0 };
        }
        // f(v, .) is continuous and nonincreasing in q, f(v, 0) >= 1/2 > f(v, 1)
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(v, mid) > EMPTY_SLOT_TARGET {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON {
                break;
            }
        }
        return Threshold::Finite { value: v, atom_accept: 0.5 * (lo + hi) };
    }
    unreachable!("with n >= k the all-pass point has no empty slot")
}

fn opt_fraction(opt: f64, k: usize) -> Threshold {
    Threshold::at_least(opt / (2.0 * k as f64))
}

fn probabilistic_on(dists: &[DiscreteDistribution], k: usize) -> UniformThreshold {
    match degeneracy(dists, k) {
        Some(Degeneracy::AllZero) => UniformThreshold {
            threshold: Threshold::Infinite,
            k,
            method: BaselineMethod::Probabilistic,
            degenerate: Some(Degeneracy::AllZero),
        },
        Some(d) => UniformThreshold {
            threshold: opt_fraction(degenerate_opt(dists, k), k),
            k,
            method: BaselineMethod::OptFraction,
            degenerate: Some(d),
        },
        None => UniformThreshold { threshold: calibrate(dists, k), k, method: BaselineMethod::Probabilistic, degenerate: None },
    }
}

fn uniform_k(inst: &ProphetInstance) -> Result<usize> {
    Ok(inst.matroid().as_uniform()?.k())
}

/// Single-item threshold passing the maximum with probability exactly 1/2.
pub fn samuel_cahn_threshold(inst: &ProphetInstance) -> Result<UniformThreshold> {
    let k = uniform_k(inst)?;
    if k != 1 {
        return Err(Error::invalid(format!("samuel-cahn needs a 1-uniform matroid, got k = {k}")));
    }
    Ok(probabilistic_on(inst.dists(), 1))
}

/// Single threshold with `Pr[fewer than k items pass] = 1/2`.
pub fn kuniform_probabilistic_threshold(inst: &ProphetInstance) -> Result<UniformThreshold> {
    Ok(probabilistic_on(inst.dists(), uniform_k(inst)?))
}

/// `T = Opt / (2k)` with a plain `X >= T` comparison.
pub fn kuniform_opt_fraction_threshold(inst: &ProphetInstance, opt: OptSource) -> Result<UniformThreshold> {
    let k = uniform_k(inst)?;
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    Ok(UniformThreshold { threshold: opt_fraction(opt.resolve(inst)?, k), k, method: BaselineMethod::OptFraction, degenerate: None })
}

#[derive(Debug, Clone)]
pub struct PartitionRule {
    pub rule: ThresholdRule,
    pub blocks: Vec<UniformThreshold>,
}

/// The chosen k-uniform method applied to every block's restriction.
pub fn partition_thresholds(inst: &ProphetInstance, method: BaselineMethod, opt: OptSource) -> Result<PartitionRule> {
    let pm = inst.matroid().as_partition()?;
    if matches!(opt, OptSource::Given(_)) && method == BaselineMethod::OptFraction && pm.blocks().len() > 1 {
        return Err(Error::invalid("a given Opt value cannot serve several partition blocks"));
    }
    let mut thresholds = vec![Threshold::Infinite; inst.len()];
    let mut blocks = Vec::with_capacity(pm.blocks().len());
    for (b, (block, &cap)) in pm.blocks().iter().zip(pm.capacities()).enumerate() {
        let dists: Vec<DiscreteDistribution> = block.iter().map(|&i| inst.dists()[i].clone()).collect();
        let sub = ProphetInstance::new(UniformMatroid::new(block.len(), cap), dists)?;
        let ut = if cap == 0 {
            UniformThreshold { threshold: Threshold::Infinite, k: 0, method, degenerate: Some(Degeneracy::FewerItemsThanSlots) }
        } else {
            match method {
                BaselineMethod::Probabilistic => kuniform_probabilistic_threshold(&sub)?,
                BaselineMethod::OptFraction => {
                    let opt = match opt {
                        OptSource::MonteCarlo { trials, seed } => OptSource::MonteCarlo { trials, seed: seed.wrapping_add(b as u64) },
                        other => other,
                    };
                    kuniform_opt_fraction_threshold(&sub, opt)?
                }
            }
        };
        for &i in block {
            thresholds[i] = ut.threshold;
        }
        blocks.push(ut);
    }
    debug_assert_eq!(thresholds.len(), inst.matroid().ground_size());
    Ok(PartitionRule { rule: ThresholdRule::new(thresholds), blocks })
}

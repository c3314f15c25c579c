//! Prophet instances, the prophet benchmark, and the ex-ante reduction to a
//! Bernoulli instance inside the matroid polytope.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distribution::{DiscreteDistribution, QuantileThreshold};
use crate::error::{Error, Result};
use crate::matroid::{greedy_basis, greedy_value, polytope_slack, AnyMatroid, GroundSet, Matroid, WeightVector};
use crate::threshold::Threshold;

/// Default cap on the number of product outcomes enumerated in exact mode.
pub const DEFAULT_OUTCOME_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ProphetInstance {
    ground: GroundSet,
    matroid: AnyMatroid,
    dists: Vec<DiscreteDistribution>,
}

impl ProphetInstance {
    pub fn new(matroid: impl Into<AnyMatroid>, dists: Vec<DiscreteDistribution>) -> Result<Self> {
        let matroid = matroid.into();
        Self::with_ground(GroundSet::new(matroid.ground_size()), matroid, dists)
    }

    pub fn with_ground(ground: GroundSet, matroid: AnyMatroid, dists: Vec<DiscreteDistribution>) -> Result<Self> {
        let n = matroid.ground_size();
        if dists.len() != n || ground.len() != n {
            return Err(Error::invalid(format!(
                "matroid has {n} elements but {} distributions and {} labels",
                dists.len(),
                ground.len()
            )));
        }
        Ok(ProphetInstance { ground, matroid, dists })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn matroid(&self) -> &AnyMatroid {
        &self.matroid
    }

    pub fn dists(&self) -> &[DiscreteDistribution] {
        &self.dists
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    /// Number of joint realizations, saturating.
    pub fn outcome_count(&self) -> u128 {
        self.dists.iter().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    fn check_outcomes(&self, cap: u64) -> Result<()> {
        let size = self.outcome_count();
        if size > cap as u128 {
            return Err(Error::TooLarge { what: "product outcome enumeration", size, cap: cap as u128 });
        }
        Ok(())
    }

    /// Calls `f(values, probability)` once per joint realization.
    pub fn for_each_outcome(&self, cap: u64, mut f: impl FnMut(&[f64], f64)) -> Result<()> {
        self.check_outcomes(cap)?;
        let n = self.len();
        let mut idx = vec![0usize; n];
        let mut values: Vec<f64> = self.dists.iter().map(|d| d.support()[0]).collect();
        loop {
            let prob: f64 = idx.iter().zip(&self.dists).map(|(&j, d)| d.probs()[j]).product();
            f(&values, prob);
            // odometer
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(());
                }
                idx[pos] += 1;
                if idx[pos] < self.dists[pos].len() {
                    values[pos] = self.dists[pos].support()[idx[pos]];
                    break;
                }
                idx[pos] = 0;
                values[pos] = self.dists[pos].support()[0];
                pos += 1;
            }
        }
    }

    pub fn draw_values<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.dists.iter().map(|d| d.sample(rng)).collect()
    }

    /// Value of the max-weight independent set for one realization.
    pub fn prophet_value_of(&self, values: &[f64]) -> f64 {
        greedy_value(&self.matroid, values)
    }
}

/// Exact `E[max_I sum_{i in I} X_i]` by enumerating the product distribution.
pub fn prophet_value_exact(inst: &ProphetInstance, cap: u64) -> Result<f64> {
    let mut total = 0.0;
    inst.for_each_outcome(cap, |values, prob| total += prob * inst.prophet_value_of(values))?;
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Unbiased Monte Carlo estimate of the prophet value; deterministic per seed.
pub fn prophet_value_mc(inst: &ProphetInstance, trials: u64, seed: u64) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..trials {
        let v = inst.prophet_value_of(&inst.draw_values(&mut rng));
        sum += v;
        sum_sq += v * v;
    }
    Ok(mean_and_stderr(sum, sum_sq, trials))
}

pub(crate) fn mean_and_stderr(sum: f64, sum_sq: f64, n: u64) -> McEstimate {
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    McEstimate { estimate: mean, stderr: (var / nf).sqrt() }
}

/// `t_i` with probability `p_i`, zero otherwise, with `p` in the matroid polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliInstance {
    matroid: AnyMatroid,
    p: WeightVector,
    t: WeightVector,
}

impl BernoulliInstance {
    pub fn new(matroid: AnyMatroid, p: WeightVector, t: WeightVector) -> Result<Self> {
        let n = matroid.ground_size();
        if p.len() != n || t.len() != n {
            return Err(Error::invalid(format!(
                "matroid has {n} elements, p has {}, t has {}",
                p.len(),
                t.len()
            )));
        }
        if p.as_slice().iter().any(|&x| x > 1.0) {
            return Err(Error::invalid("activation probabilities must lie in [0, 1]"));
        }
        Ok(BernoulliInstance { matroid, p, t })
    }

    pub fn matroid(&self) -> &AnyMatroid {
        &self.matroid
    }

    pub fn p(&self) -> &WeightVector {
        &self.p
    }

    pub fn t(&self) -> &WeightVector {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `sum_i p_i t_i`, an upper bound on the prophet of the source instance.
    pub fn benchmark(&self) -> f64 {
        self.p.dot(&self.t)
    }

    /// The two-point instance `X'_i`.
    pub fn to_prophet_instance(&self) -> Result<ProphetInstance> {
        let dists = (0..self.len())
            .map(|i| DiscreteDistribution::bernoulli(self.t[i], self.p[i].min(1.0)))
            .collect::<Result<Vec<_>>>()?;
        ProphetInstance::new(self.matroid.clone(), dists)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMode {
    Exact { cap: u64 },
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExAnteReduction {
    pub bernoulli: BernoulliInstance,
    /// Exact prophet value, available as a by-product in exact mode.
    pub prophet_exact: Option<f64>,
    /// `max_S (sum p - rank)` when the ground set is small enough to enumerate.
    pub polytope_slack: Option<f64>,
}

/// `p_i = Pr[i in I*]` with `I*` the greedy max-weight basis of each realization,
/// and `t_i` the mean of the top `p_i` mass of `X_i` (zero when `p_i = 0`).
pub fn ex_ante_reduce(inst: &ProphetInstance, mode: ReductionMode) -> Result<ExAnteReduction> {
    let n = inst.len();
    let mut p = vec![0.0; n];
    let mut prophet_exact = None;
    match mode {
        ReductionMode::Exact { cap } => {
            let mut opt = 0.0;
            inst.for_each_outcome(cap, |values, prob| {
                for i in greedy_basis(inst.matroid(), values) {
                    p[i] += prob;
                    opt += prob * values[i];
                }
            })?;
            prophet_exact = Some(opt);
        }
        ReductionMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("samples must be >= 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let values = inst.draw_values(&mut rng);
                for i in greedy_basis(inst.matroid(), &values) {
                    p[i] += 1.0;
                }
            }
            p.iter_mut().for_each(|x| *x /= samples as f64);
        }
    }
    for x in p.iter_mut() {
        *x = x.clamp(0.0, 1.0);
    }
    let t = p
        .iter()
        .zip(inst.dists())
        .map(|(&pi, d)| if pi > 0.0 { d.tail_expectation(pi) } else { Ok(0.0) })
        .collect::<Result<Vec<_>>>()?;
    let p = WeightVector::new(p)?;
    let t = WeightVector::new(t)?;
    let polytope_slack = polytope_slack(inst.matroid(), &p, crate::matroid::DEFAULT_POLYTOPE_CAP).ok();
    Ok(ExAnteReduction {
        bernoulli: BernoulliInstance::new(inst.matroid().clone(), p, t)?,
        prophet_exact,
        polytope_slack,
    })
}

/// One joint draw of the original values and the Bernoulli activity pattern.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoupledSample {
    pub values: Vec<f64>,
    /// Upfront uniform coin per item, shared by both views.
    pub coins: Vec<f64>,
    /// Items whose value clears their `(1 - p_i)`-quantile event.
    pub active: Vec<usize>,
}

/// Quantile events at `p_i` for each item, linking an instance to its reduction.
#[derive(Debug, Clone)]
pub struct Coupling {
    events: Vec<Threshold>,
}

impl Coupling {
    pub fn new(inst: &ProphetInstance, b: &BernoulliInstance) -> Result<Self> {
        if inst.len() != b.len() {
            return Err(Error::invalid(format!(
                "instance has {} items, reduction has {}",
                inst.len(),
                b.len()
            )));
        }
        let events = inst
            .dists()
            .iter()
            .zip(b.p().as_slice())
            .map(|(d, &pi)| {
                if pi > 0.0 {
                    d.quantile_threshold(pi).map(QuantileThreshold::into)
                } else {
                    Ok(Threshold::Infinite)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Coupling { events })
    }

    /// The per-item quantile events as thresholds.
    pub fn events(&self) -> &[Threshold] {
        &self.events
    }

    pub fn is_active(&self, i: usize, value: f64, coin: f64) -> bool {
        self.events[i].passes(value, coin)
    }

    pub fn sample<R: Rng + ?Sized>(&self, inst: &ProphetInstance, rng: &mut R) -> CoupledSample {
        let values = inst.draw_values(rng);
        let coins: Vec<f64> = (0..values.len()).map(|_| rng.gen()).collect();
        let active = (0..values.len()).filter(|&i| self.is_active(i, values[i], coins[i])).collect();
        CoupledSample { values, coins, active }
    }
}

pub fn coupled_sample<R: Rng + ?Sized>(
    inst: &ProphetInstance,
    b: &BernoulliInstance,
    rng: &mut R,
) -> Result<CoupledSample> {
    Ok(Coupling::new(inst, b)?.sample(inst, rng))
}

/// Elements sorted by `t` ascending, ties by index.
pub fn worst_case_order(b: &BernoulliInstance) -> Vec<usize> {
    let t = b.t();
    let mut order: Vec<usize> = (0..b.len()).collect();
    order.sort_by(|&x, &y| t[x].total_cmp(&t[y]).then(x.cmp(&y)));
    order
}

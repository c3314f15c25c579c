//! Finite-support nonnegative value distributions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::threshold::Threshold;

/// Tolerance on `sum(probs) == 1` for directly constructed distributions.
pub const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct DiscreteDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl TryFrom<RawDistribution> for DiscreteDistribution {
    type Error = Error;
    fn try_from(r: RawDistribution) -> Result<Self> {
        DiscreteDistribution::new(r.support, r.probs)
    }
}

impl From<DiscreteDistribution> for RawDistribution {
    fn from(d: DiscreteDistribution) -> Self {
        RawDistribution { support: d.support, probs: d.probs }
    }
}

/// Result of [`DiscreteDistribution::quantile_threshold`]: values above
/// `threshold` pass, values equal to it pass with probability `atom_accept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileThreshold {
    pub threshold: f64,
    pub atom_accept: f64,
}

impl From<QuantileThreshold> for Threshold {
    fn from(q: QuantileThreshold) -> Self {
        Threshold::Finite { value: q.threshold, atom_accept: q.atom_accept }
    }
}

/// Probability that an item passes a threshold and its mean value given it passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassLaw {
    pub prob: f64,
    pub mean_given_pass: f64,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

impl DiscreteDistribution {
    /// Support must be strictly increasing and nonnegative; probabilities
    /// positive and summing to one within [`PROB_SUM_TOL`].
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(support, probs, PROB_SUM_TOL)
    }

    /// Like [`new`](Self::new) with a caller-chosen sum tolerance; the stored
    /// probabilities are renormalized to sum to one.
    pub fn with_tolerance(support: Vec<f64>, probs: Vec<f64>, tol: f64) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("distribution has empty support"));
        }
        if support.len() != probs.len() {
            return Err(Error::invalid(format!(
                "support has {} values but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        if support.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("support values must be finite and >= 0"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("support must be strictly increasing"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(Error::invalid("probabilities must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
        }
        let probs = if total == 1.0 { probs } else { probs.iter().map(|p| p / total).collect() };
        Ok(DiscreteDistribution { support, probs })
    }

    /// Point mass at `value`.
    pub fn point(value: f64) -> Result<Self> {
        Self::new(vec![value], vec![1.0])
    }

    /// `value` with probability `p`, zero otherwise.
    pub fn bernoulli(value: f64, p: f64) -> Result<Self> {
        check_probability(p)?;
        if p == 0.0 || value == 0.0 {
            Self::point(0.0)
        } else if p == 1.0 {
            Self::point(value)
        } else {
            Self::new(vec![0.0, value], vec![1.0 - p, p])
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_point(&self) -> bool {
        self.support.len() == 1
    }

    pub fn min(&self) -> f64 {
        self.support[0]
    }

    pub fn max(&self) -> f64 {
        self.support[self.support.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.probs).map(|(v, p)| v * p).sum()
    }

    /// Inverse-CDF draw from a uniform `u` in `[0, 1)`.
    pub fn value_at(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (v, p) in self.support.iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return *v;
            }
        }
        self.max()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.value_at(rng.gen::<f64>())
    }

    /// `threshold` in the support and `atom_accept` in `[0, 1]` with
    /// `Pr[X > threshold] + atom_accept * Pr[X = threshold] = p`.
    ///
    /// The highest support value that reaches the target mass is chosen, so
    /// `p` equal to the top atom's mass gives that atom with `atom_accept = 1`.
    pub fn quantile_threshold(&self, p: f64) -> Result<QuantileThreshold> {
        check_probability(p)?;
        let mut above = 0.0;
        for j in (0..self.len()).rev() {
            let mass = self.probs[j];
            if above + mass >= p * (1.0 - 1e-12) || j == 0 {
                let q = ((p - above) / mass).clamp(0.0, 1.0);
                return Ok(QuantileThreshold { threshold: self.support[j], atom_accept: q });
            }
            above += mass;
        }
        unreachable!("support is nonempty")
    }

    /// Mean of the top `p` probability mass, the fractional boundary atom included.
    pub fn tail_expectation(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        if p == 0.0 {
            return Err(Error::invalid("tail expectation undefined at p = 0"));
        }
        let q = self.quantile_threshold(p)?;
        let law = self.pass_law(&q.into());
        Ok(law.mean_given_pass)
    }

    /// Pass probability and conditional mean under `t` with an independent atom coin.
    pub fn pass_law(&self, t: &Threshold) -> PassLaw {
        let (value, atom) = match *t {
            Threshold::Infinite => return PassLaw { prob: 0.0, mean_given_pass: 0.0 },
            Threshold::Finite { value, atom_accept } => (value, atom_accept),
        };
        let mut prob = 0.0;
        let mut first_moment = 0.0;
        for (v, p) in self.support.iter().zip(&self.probs) {
            let w = if *v > value {
                *p
            } else if *v == value {
                p * atom
            } else {
                0.0
            };
            prob += w;
            first_moment += w * v;
        }
        let mean_given_pass = if prob > 0.0 { first_moment / prob } else { 0.0 };
        PassLaw { prob: prob.min(1.0), mean_given_pass }
    }
}

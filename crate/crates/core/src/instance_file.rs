//! Versioned JSON document describing a prophet instance.
//!
//! ```json
//! {
//!   "version": 1,
//!   "matroid": { "type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2]] },
//!   "distributions": [ { "support": [0, 2], "probs": [0.5, 0.5] }, ... ],
//!   "labels": ["a", "b"],
//!   "reduction": { "p": [...], "t": [...] }
//! }
//! ```
//!
//! `labels` and `reduction` are optional. A stored reduction is what `verify`
//! checks instead of recomputing it.

use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::matroid::{AnyMatroid, GraphicMatroid, GroundSet, PartitionMatroid, UniformMatroid, WeightVector};
use crate::model::{BernoulliInstance, ProphetInstance};

pub const FORMAT_VERSION: u32 = 1;

/// Sum-to-one tolerance for probabilities read from files.
pub const FILE_PROB_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MatroidSection {
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Uniform { n: usize, k: usize },
    Partition { blocks: Vec<Vec<usize>>, capacities: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSection {
    pub support: Vec<f64>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionSection {
    pub p: Vec<f64>,
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub matroid: MatroidSection,
    pub distributions: Vec<DistributionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSection>,
}

impl InstanceFile {
    pub fn from_instance(inst: &ProphetInstance) -> Self {
        let matroid = match inst.matroid() {
            AnyMatroid::Graphic(g) => MatroidSection::Graphic { vertices: g.vertex_count(), edges: g.edges().to_vec() },
            AnyMatroid::Uniform(u) => MatroidSection::Uniform { n: inst.len(), k: u.k() },
            AnyMatroid::Partition(p) => MatroidSection::Partition { blocks: p.blocks().to_vec(), capacities: p.capacities().to_vec() },
        };
        InstanceFile {
            version: FORMAT_VERSION,
            matroid,
            distributions: inst
                .dists()
                .iter()
                .map(|d| DistributionSection { support: d.support().to_vec(), probs: d.probs().to_vec() })
                .collect(),
            labels: inst.ground().labels().map(<[String]>::to_vec),
            reduction: None,
        }
    }

    pub fn with_reduction(mut self, b: &BernoulliInstance) -> Self {
        self.reduction = Some(ReductionSection { p: b.p().as_slice().to_vec(), t: b.t().as_slice().to_vec() });
        self
    }

    pub fn to_instance(&self) -> Result<ProphetInstance> {
        if self.version != FORMAT_VERSION {
            return Err(Error::invalid(format!("unsupported instance format version {}", self.version)));
        }
        let matroid: AnyMatroid = match &self.matroid {
            MatroidSection::Graphic { vertices, edges } => GraphicMatroid::new(*vertices, edges.clone())?.into(),
            MatroidSection::Uniform { n, k } => UniformMatroid::new(*n, *k).into(),
            MatroidSection::Partition { blocks, capacities } => PartitionMatroid::new(blocks.clone(), capacities.clone())?.into(),
        };
        let dists = self
            .distributions
            .iter()
            .enumerate()
            .map(|(i, d)| {
                DiscreteDistribution::with_tolerance(d.support.clone(), d.probs.clone(), FILE_PROB_TOL)
                    .map_err(|e| match e {
                        Error::InvalidInput(msg) => Error::invalid(format!("distribution {i}: {msg}")),
                        other => other,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let ground = match &self.labels {
            Some(l) => GroundSet::with_labels(l.clone()),
            None => GroundSet::new(dists.len()),
        };
        ProphetInstance::with_ground(ground, matroid, dists)
    }

    /// The stored reduction, if any, attached to the parsed matroid.
    pub fn stored_reduction(&self, inst: &ProphetInstance) -> Result<Option<BernoulliInstance>> {
        self.reduction
            .as_ref()
            .map(|r| BernoulliInstance::new(inst.matroid().clone(), WeightVector::new(r.p.clone())?, WeightVector::new(r.t.clone())?))
            .transpose()
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("instance file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }
}

//! Seeded random instance families.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::matroid::{AnyMatroid, GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid};
use crate::model::ProphetInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MatroidSpec {
    RandomGraph { vertices: usize, edges: usize, parallel: bool },
    Uniform { n: usize, k: usize },
    Partition { blocks: Vec<Vec<usize>>, capacities: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DistSpec {
    /// One distribution with exactly `support_size` integer values in `0..=max_value`, shared by all items.
    IidDiscrete { support_size: usize, max_value: u32 },
    /// Independent distribution per item with `1..=support_size` values.
    PerItem { support_size: usize, max_value: u32 },
}

fn random_graph(v: usize, e: usize, parallel: bool, rng: &mut ChaCha8Rng) -> Result<GraphicMatroid> {
    if e == 0 {
        return Err(Error::invalid("edge count must be positive"));
    }
    if v < 2 {
        return Err(Error::invalid("a graph with edges needs at least 2 vertices"));
    }
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
    let edges = if parallel {
        (0..e).map(|_| pairs[rng.gen_range(0..pairs.len())]).collect()
    } else {
        if e > pairs.len() {
            return Err(Error::invalid(format!("{e} edges exceed the {} vertex pairs of a simple graph on {v} vertices", pairs.len())));
        }
        let mut idx = sample(rng, pairs.len(), e).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| pairs[i]).collect()
    };
    GraphicMatroid::new(v, edges)
}

fn random_dist(size: usize, max_value: u32, rng: &mut ChaCha8Rng) -> Result<DiscreteDistribution> {
    if size == 0 || size as u64 > max_value as u64 + 1 {
        return Err(Error::invalid(format!("cannot draw {size} distinct values from 0..={max_value}")));
    }
    let mut support: Vec<f64> = sample(rng, max_value as usize + 1, size).into_iter().map(|v| v as f64).collect();
    support.sort_by(f64::total_cmp);
    let weights: Vec<f64> = (0..size).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let head: f64 = probs[..size - 1].iter().sum();
    probs[size - 1] = 1.0 - head;
    DiscreteDistribution::new(support, probs)
}

/// Reproducible instance per `(spec, seed)`.
pub fn generate_instance(m: &MatroidSpec, d: &DistSpec, seed: u64) -> Result<ProphetInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matroid: AnyMatroid = match m {
        MatroidSpec::RandomGraph { vertices, edges, parallel } => random_graph(*vertices, *edges, *parallel, &mut rng)?.into(),
        MatroidSpec::Uniform { n, k } => {
            if *k > *n {
                return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
            }
            UniformMatroid::new(*n, *k).into()
        }
        MatroidSpec::Partition { blocks, capacities } => PartitionMatroid::new(blocks.clone(), capacities.clone())?.into(),
    };
    let n = matroid.ground_size();
    let dists = match *d {
        DistSpec::IidDiscrete { support_size, max_value } => vec![random_dist(support_size, max_value, &mut rng)?; n],
        DistSpec::PerItem { support_size, max_value } => {
            if support_size == 0 {
                return Err(Error::invalid("support size must be positive"));
            }
            (0..n)
                .map(|_| {
                    let size = rng.gen_range(1..=support_size.min(max_value as usize + 1));
                    random_dist(size, max_value, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    ProphetInstance::new(matroid, dists)
}

/// Parameters of member `j` of the small graphic suite: 3 to 6 vertices,
/// at most 9 edges (parallel edges allowed), up to 3 support points per edge.
pub fn desk_graphic_spec(base_seed: u64, j: u64) -> (MatroidSpec, DistSpec, u64) {
    let seed = base_seed.wrapping_add(j);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5u64);
    let vertices = rng.gen_range(3..=6);
    let edges = rng.gen_range(vertices - 1..=9);
    (
        MatroidSpec::RandomGraph { vertices, edges, parallel: true },
        DistSpec::PerItem { support_size: 3, max_value: 20 },
        seed,
    )
}

pub fn desk_graphic_suite(base_seed: u64, count: u64) -> Result<Vec<ProphetInstance>> {
    (0..count)
        .map(|j| {
            let (m, d, seed) = desk_graphic_spec(base_seed, j);
            generate_instance(&m, &d, seed)
        })
        .collect()
}

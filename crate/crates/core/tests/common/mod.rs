//! Brute-force oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls the library's trackers or greedy routines, so the
//! oracles check the library rather than restate it.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use prophet_core::instance_file::InstanceFile;
use prophet_core::matroid::{AnyMatroid, GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid, WeightVector};
use prophet_core::{DiscreteDistribution, ProphetInstance};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Number of connected components of the subgraph on all vertices spanned by `edges`.
fn components(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); vertices];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; vertices];
    let mut count = 0;
    for s in 0..vertices {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

/// Independence from first principles: a forest has `|V| - components` edges.
pub fn independent(m: &AnyMatroid, set: &[usize]) -> bool {
    match m {
        AnyMatroid::Graphic(g) => {
            let edges: Vec<(usize, usize)> = set.iter().map(|&i| g.edges()[i]).collect();
            edges.len() == g.vertex_count() - components(g.vertex_count(), &edges)
        }
        AnyMatroid::Uniform(u) => set.len() <= u.k(),
        AnyMatroid::Partition(p) => p.blocks().iter().zip(p.capacities()).all(|(b, &c)| set.iter().filter(|i| b.contains(i)).count() <= c),
    }
}

pub fn subset(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn rank(m: &AnyMatroid, set: &[usize]) -> usize {
    let k = set.len();
    (0u64..1 << k)
        .map(|mask| subset(mask, k).into_iter().map(|j| set[j]).collect::<Vec<_>>())
        .filter(|s| independent(m, s))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

/// Max total weight over all independent sets.
pub fn max_weight(m: &AnyMatroid, w: &[f64]) -> f64 {
    let n = m.ground_size();
    (0u64..1 << n)
        .map(|mask| subset(mask, n))
        .filter(|s| independent(m, s))
        .map(|s| s.iter().map(|&i| w[i]).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Every independent set of the matroid, by bitmask.
pub fn independent_masks(m: &AnyMatroid) -> Vec<u64> {
    let n = m.ground_size();
    (0u64..1 << n).filter(|&mask| independent(m, &subset(mask, n))).collect()
}

/// `E[max weight independent set]` by full enumeration, max taken over `masks`.
pub fn prophet(inst: &ProphetInstance) -> f64 {
    let masks = independent_masks(inst.matroid());
    let dists = inst.dists();
    let n = dists.len();
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let prob: f64 = (0..n).map(|i| dists[i].probs()[idx[i]]).product();
        let values: Vec<f64> = (0..n).map(|i| dists[i].support()[idx[i]]).collect();
        let best = masks
            .iter()
            .map(|&mask| (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| values[i]).sum::<f64>())
            .fold(0.0, f64::max);
        total += prob * best;
        let mut k = 0;
        loop {
            if k == n {
                return total;
            }
            idx[k] += 1;
            if idx[k] < dists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, vertices: usize, edges: usize) -> GraphicMatroid {
    let list = (0..edges)
        .map(|_| {
            let u = rng.gen_range(0..vertices);
            let mut v = rng.gen_range(0..vertices - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    GraphicMatroid::new(vertices, list).unwrap()
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, blocks: usize) -> PartitionMatroid {
    let mut items: Vec<usize> = (0..n).collect();
    items.shuffle(rng);
    let mut parts = vec![Vec::new(); blocks];
    for (j, i) in items.into_iter().enumerate() {
        // First `blocks` items seed every block so none is empty.
        let b = if j < blocks { j } else { rng.gen_range(0..blocks) };
        parts[b].push(i);
    }
    let caps = parts.iter().map(|b| rng.gen_range(1..=b.len())).collect();
    PartitionMatroid::new(parts, caps).unwrap()
}

/// Graphic, uniform or partition matroid with `n` elements.
pub fn random_matroid(rng: &mut ChaCha8Rng, n: usize) -> AnyMatroid {
    match rng.gen_range(0..3) {
        0 => {
            let vertices = rng.gen_range(2..=6);
            random_graph(rng, vertices, n).into()
        }
        1 => UniformMatroid::new(n, rng.gen_range(0..=n)).into(),
        _ => {
            let blocks = rng.gen_range(1..=n.min(3));
            random_partition(rng, n, blocks).into()
        }
    }
}

/// Distinct values from `0..=max` with random positive probabilities.
pub fn random_dist(rng: &mut ChaCha8Rng, support: usize, max: u32) -> DiscreteDistribution {
    let mut values: Vec<u32> = (0..=max).collect();
    values.shuffle(rng);
    let mut values: Vec<f64> = values[..support].iter().map(|&v| v as f64).collect();
    values.sort_by(f64::total_cmp);
    let w: Vec<f64> = (0..support).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    let mut probs: Vec<f64> = w.iter().map(|x| x / s).collect();
    let head: f64 = probs[..support - 1].iter().sum();
    probs[support - 1] = 1.0 - head;
    DiscreteDistribution::new(values, probs).unwrap()
}

pub fn random_instance(rng: &mut ChaCha8Rng, m: AnyMatroid, max_support: usize) -> ProphetInstance {
    let dists = (0..m.ground_size()).map(|_| {
        let s = rng.gen_range(1..=max_support);
        random_dist(rng, s, 12)
    });
    let dists = dists.collect();
    ProphetInstance::new(m, dists).unwrap()
}

/// A point of the graphic polytope: a random convex combination of forests,
/// each obtained by keeping edges in random order while they stay acyclic.
pub fn random_graphic_polytope_point(rng: &mut ChaCha8Rng, g: &GraphicMatroid) -> WeightVector {
    let m: AnyMatroid = g.clone().into();
    let n = g.ground_size();
    let pieces = rng.gen_range(1..=4);
    let weights: Vec<f64> = (0..pieces).map(|_| rng.gen_range(0.0..1.0)).collect();
    // Total below 1 sometimes, so the point is not always on the boundary.
    let total = weights.iter().sum::<f64>() * rng.gen_range(1.0..1.5);
    let mut p = vec![0.0; n];
    for w in weights {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut forest = Vec::new();
        for i in order {
            forest.push(i);
            if !independent(&m, &forest) {
                forest.pop();
            }
        }
        for i in forest {
            p[i] += w / total;
        }
    }
    WeightVector::new(p.into_iter().map(|x| x.min(1.0)).collect()).unwrap()
}

pub fn suite_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../suites/graphic")
}

/// The bundled graphic suite, sorted by file name.
pub fn load_suite() -> Vec<(String, ProphetInstance)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(suite_dir())
        .expect("bundled suite directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let inst = InstanceFile::parse(&text).unwrap().to_instance().unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), inst)
        })
        .collect()
}

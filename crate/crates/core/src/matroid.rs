//! Finite matroids as independence oracles.
//!
//! Every concrete matroid exposes an incremental [`IndependenceTracker`]; rank,
//! span and the greedy max-weight basis are all derived from it, which is valid
//! because greedy insertion computes the rank of any set in a matroid.

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default element cap for the exponential polytope-membership check.
pub const DEFAULT_POLYTOPE_CAP: usize = 20;

/// Absolute tolerance used when comparing `sum(p) <= rank(S)`.
pub const POLYTOPE_TOL: f64 = 1e-9;

/// Dense element indices `0..size` with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Self {
        GroundSet { size, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        GroundSet { size: labels.len(), labels: Some(labels) }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{i}"),
        }
    }

    pub fn check(&self, set: &[usize]) -> Result<()> {
        check_indices(self.size, set)
    }
}

fn check_indices(size: usize, set: &[usize]) -> Result<()> {
    match set.iter().find(|&&i| i >= size) {
        Some(&index) => Err(Error::ElementOutOfRange { index, size }),
        None => Ok(()),
    }
}

fn normalized(set: &[usize]) -> Vec<usize> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Incremental independence state: the set built so far is always independent.
///
/// Callers offer each element at most once; counting trackers do not
/// remember which elements they hold.
pub trait IndependenceTracker {
    /// Whether the current set plus `i` is independent.
    fn can_add(&mut self, i: usize) -> bool;

    /// Adds `i` when that keeps the set independent.
    fn try_add(&mut self, i: usize) -> bool;
}

pub trait Matroid {
    type Tracker: IndependenceTracker;

    fn ground_size(&self) -> usize;

    /// A tracker holding the empty set.
    fn tracker(&self) -> Self::Tracker;

    fn is_independent(&self, set: &[usize]) -> Result<bool> {
        check_indices(self.ground_size(), set)?;
        let mut tr = self.tracker();
        Ok(normalized(set).into_iter().all(|i| tr.try_add(i)))
    }

    fn rank(&self, set: &[usize]) -> Result<usize> {
        check_indices(self.ground_size(), set)?;
        Ok(self.rank_unchecked(&normalized(set)))
    }

    /// Rank without range or duplicate checks; `set` must be duplicate-free.
    fn rank_unchecked(&self, set: &[usize]) -> usize {
        let mut tr = self.tracker();
        set.iter().filter(|&&i| tr.try_add(i)).count()
    }

    /// `{i : rank(s + i) = rank(s)}`, sorted ascending.
    fn span(&self, set: &[usize]) -> Result<Vec<usize>> {
        check_indices(self.ground_size(), set)?;
        let set = normalized(set);
        let mut tr = self.tracker();
        for &i in &set {
            tr.try_add(i);
        }
        Ok((0..self.ground_size()).filter(|&i| set.binary_search(&i).is_ok() || !tr.can_add(i)).collect())
    }
}

/// Nonnegative finite per-element reals: realized values or probability vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid(format!("weight {i} is {v}; weights must be finite and >= 0")));
        }
        Ok(WeightVector(values))
    }

    pub fn zeros(n: usize) -> Self {
        WeightVector(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum_over(&self, set: &[usize]) -> f64 {
        set.iter().fold(0.0, |acc, &i| acc + self.0[i])
    }

    pub fn dot(&self, other: &WeightVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl Index<usize> for WeightVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Vec<f64> {
        w.0
    }
}

/// Entrywise `c * p` for `c` in `[0, 1]`; membership in `c * P_M` follows from `p` in `P_M`.
pub fn scale(p: &WeightVector, c: f64) -> Result<WeightVector> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::invalid(format!("scale factor {c} outside [0, 1]")));
    }
    Ok(WeightVector(p.0.iter().map(|x| x * c).collect()))
}

// ---------------------------------------------------------------------------
// Graphic
// ---------------------------------------------------------------------------

/// Edges of a multigraph; an edge set is independent iff it is a forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    /// Parallel edges are accepted; self-loops are rejected.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::invalid(format!(
                    "edge {i} = ({u}, {v}) references a vertex outside 0..{vertices}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("edge {i} is a self-loop at vertex {u}")));
            }
        }
        Ok(GraphicMatroid { vertices, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }
}

#[derive(Debug, Clone)]
pub struct ForestTracker {
    parent: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl ForestTracker {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn connected(&mut self, u: usize, v: usize) -> bool {
        self.find(u) == self.find(v)
    }
}

impl IndependenceTracker for ForestTracker {
    fn can_add(&mut self, i: usize) -> bool {
        let (u, v) = self.edges[i];
        !self.connected(u, v)
    }

    fn try_add(&mut self, i: usize) -> bool {
        let (u, v) = self.edges[i];
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        self.parent[ru] = rv;
        true
    }
}

impl Matroid for GraphicMatroid {
    type Tracker = ForestTracker;

    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn tracker(&self) -> ForestTracker {
        ForestTracker { parent: (0..self.vertices).collect(), edges: self.edges.clone() }
    }
}

// ---------------------------------------------------------------------------
// Uniform
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformMatroid {
    n: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, k: usize) -> Self {
        UniformMatroid { n, k }
    }

    /// Every subset independent.
    pub fn free(n: usize) -> Self {
        UniformMatroid { n, k: n }
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

#[derive(Debug, Clone)]
pub struct CountTracker {
    count: usize,
    k: usize,
}

impl IndependenceTracker for CountTracker {
    fn can_add(&mut self, _i: usize) -> bool {
        self.count < self.k
    }

    fn try_add(&mut self, _i: usize) -> bool {
        if self.count < self.k {
            self.count += 1;
            true
        } else {
            false
        }
    }
}

impl Matroid for UniformMatroid {
    type Tracker = CountTracker;

    fn ground_size(&self) -> usize {
        self.n
    }

    fn tracker(&self) -> CountTracker {
        CountTracker { count: 0, k: self.k }
    }
}

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    blocks: Vec<Vec<usize>>,
    capacities: Vec<usize>,
    block_of: Vec<usize>,
}

impl PartitionMatroid {
    /// Blocks must be disjoint and cover `0..total` where `total` is the number of listed elements.
    pub fn new(blocks: Vec<Vec<usize>>, capacities: Vec<usize>) -> Result<Self> {
        if blocks.len() != capacities.len() {
            return Err(Error::invalid(format!(
                "{} blocks but {} capacities",
                blocks.len(),
                capacities.len()
            )));
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::invalid(format!(
                        "block {b} lists element {e}; blocks must cover exactly 0..{n}"
                    )));
                }
                if block_of[e] != usize::MAX {
                    return Err(Error::invalid(format!(
                        "element {e} appears in blocks {} and {b}",
                        block_of[e]
                    )));
                }
                block_of[e] = b;
            }
        }
        Ok(PartitionMatroid { blocks, capacities, block_of })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }
}

#[derive(Debug, Clone)]
pub struct BlockTracker {
    counts: Vec<usize>,
    capacities: Vec<usize>,
    block_of: Vec<usize>,
}

impl IndependenceTracker for BlockTracker {
    fn can_add(&mut self, i: usize) -> bool {
        let b = self.block_of[i];
        self.counts[b] < self.capacities[b]
    }

    fn try_add(&mut self, i: usize) -> bool {
        let b = self.block_of[i];
        if self.counts[b] < self.capacities[b] {
            self.counts[b] += 1;
            true
        } else {
            false
        }
    }
}

impl Matroid for PartitionMatroid {
    type Tracker = BlockTracker;

    fn ground_size(&self) -> usize {
        self.block_of.len()
    }

    fn tracker(&self) -> BlockTracker {
        BlockTracker {
            counts: vec![0; self.blocks.len()],
            capacities: self.capacities.clone(),
            block_of: self.block_of.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Any
// ---------------------------------------------------------------------------

/// The closed set of realizations instances can carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyMatroid {
    Graphic(GraphicMatroid),
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
}

impl AnyMatroid {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyMatroid::Graphic(_) => "graphic",
            AnyMatroid::Uniform(_) => "uniform",
            AnyMatroid::Partition(_) => "partition",
        }
    }

    pub fn as_graphic(&self) -> Result<&GraphicMatroid> {
        match self {
            AnyMatroid::Graphic(g) => Ok(g),
            other => Err(Error::WrongMatroid { expected: "graphic", found: other.kind() }),
        }
    }

    pub fn as_uniform(&self) -> Result<&UniformMatroid> {
        match self {
            AnyMatroid::Uniform(u) => Ok(u),
            other => Err(Error::WrongMatroid { expected: "uniform", found: other.kind() }),
        }
    }

    pub fn as_partition(&self) -> Result<&PartitionMatroid> {
        match self {
            AnyMatroid::Partition(p) => Ok(p),
            other => Err(Error::WrongMatroid { expected: "partition", found: other.kind() }),
        }
    }
}

impl From<GraphicMatroid> for AnyMatroid {
    fn from(g: GraphicMatroid) -> Self {
        AnyMatroid::Graphic(g)
    }
}

impl From<UniformMatroid> for AnyMatroid {
    fn from(u: UniformMatroid) -> Self {
        AnyMatroid::Uniform(u)
    }
}

impl From<PartitionMatroid> for AnyMatroid {
    fn from(p: PartitionMatroid) -> Self {
        AnyMatroid::Partition(p)
    }
}

#[derive(Debug, Clone)]
pub enum AnyTracker {
    Forest(ForestTracker),
    Count(CountTracker),
    Block(BlockTracker),
}

impl IndependenceTracker for AnyTracker {
    fn can_add(&mut self, i: usize) -> bool {
        match self {
            AnyTracker::Forest(t) => t.can_add(i),
            AnyTracker::Count(t) => t.can_add(i),
            AnyTracker::Block(t) => t.can_add(i),
        }
    }

    fn try_add(&mut self, i: usize) -> bool {
        match self {
            AnyTracker::Forest(t) => t.try_add(i),
            AnyTracker::Count(t) => t.try_add(i),
            AnyTracker::Block(t) => t.try_add(i),
        }
    }
}

impl Matroid for AnyMatroid {
    type Tracker = AnyTracker;

    fn ground_size(&self) -> usize {
        match self {
            AnyMatroid::Graphic(m) => m.ground_size(),
            AnyMatroid::Uniform(m) => m.ground_size(),
            AnyMatroid::Partition(m) => m.ground_size(),
        }
    }

    fn tracker(&self) -> AnyTracker {
        match self {
            AnyMatroid::Graphic(m) => AnyTracker::Forest(m.tracker()),
            AnyMatroid::Uniform(m) => AnyTracker::Count(m.tracker()),
            AnyMatroid::Partition(m) => AnyTracker::Block(m.tracker()),
        }
    }
}

// ---------------------------------------------------------------------------
// Optimization and polytope
// ---------------------------------------------------------------------------

/// Greedy max-weight independent set, sorted ascending.
///
/// Elements are scanned by decreasing weight with ties broken by lower index;
/// zero-weight elements are never included.
pub fn max_weight_basis<M: Matroid>(m: &M, w: &[f64]) -> Result<Vec<usize>> {
    if w.len() != m.ground_size() {
        return Err(Error::invalid(format!(
            "weight vector has length {}, ground set has {}",
            w.len(),
            m.ground_size()
        )));
    }
    let mut basis = greedy_basis(m, w);
    basis.sort_unstable();
    Ok(basis)
}

/// Greedy basis in insertion order; no length check.
pub(crate) fn greedy_basis<M: Matroid>(m: &M, w: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    let mut tr = m.tracker();
    order.into_iter().filter(|&i| tr.try_add(i)).collect()
}

pub(crate) fn greedy_value<M: Matroid>(m: &M, w: &[f64]) -> f64 {
    greedy_basis(m, w).iter().fold(0.0, |acc, &i| acc + w[i])
}

/// `max over S of (sum_{i in S} p_i - rank(S))`; nonpositive iff `p` is in `P_M`.
pub fn polytope_slack<M: Matroid>(m: &M, p: &WeightVector, cap: usize) -> Result<f64> {
    let n = m.ground_size();
    if p.len() != n {
        return Err(Error::invalid(format!("vector has length {}, ground set has {n}", p.len())));
    }
    if n > cap {
        return Err(Error::TooLarge { what: "polytope membership", size: n as u128, cap: cap as u128 });
    }
    let mut worst: f64 = 0.0;
    let mut set = Vec::with_capacity(n);
    for mask in 1u64..(1u64 << n) {
        set.clear();
        set.extend((0..n).filter(|&i| mask >> i & 1 == 1));
        let excess = p.sum_over(&set) - m.rank_unchecked(&set) as f64;
        worst = worst.max(excess);
    }
    Ok(worst)
}

/// Exhaustive check of `sum_{i in S} p_i <= rank(S)` over every subset.
pub fn polytope_membership<M: Matroid>(m: &M, p: &WeightVector, cap: usize) -> Result<bool> {
    Ok(polytope_slack(m, p, cap)? <= POLYTOPE_TOL)
}

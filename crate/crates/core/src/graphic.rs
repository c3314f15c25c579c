//! Non-adaptive thresholds for graphic matroids via a low in-degree
//! orientation and a random directed cut.
//!
//! Pipeline: ex-ante reduction to `(p, t)`, scale `p' = p / 4`, orient every
//! edge so each vertex receives at most `1/2` of `p'` mass, draw a uniform cut
//! `(A, B)`, and give a finite threshold only to edges directed from `A` to
//! `B`. A considered edge passes on the top `p_i / 4` mass of its value
//! distribution, which keeps the conditional pass value at least `t_i`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::{scale, GraphicMatroid, Matroid, WeightVector};
use crate::model::{ex_ante_reduce, worst_case_order, ExAnteReduction, ProphetInstance, ReductionMode};
use crate::sim::{ArrivalOrder, OrderTag, RuleMixture};
use crate::threshold::{Threshold, ThresholdRule};

/// Fraction of the ex-ante probability each considered edge is allowed.
pub const SCALE: f64 = 0.25;

/// Maximum incoming scaled mass per vertex.
pub const IN_MASS_BOUND: f64 = 0.5;

const MASS_TOL: f64 = 1e-12;

/// Largest vertex count for which all `2^|V|` cuts are enumerated.
pub const MAX_CUT_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orientation {
    vertices: usize,
    /// `(tail, head)` per edge.
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn tail(&self, i: usize) -> usize {
        self.arcs[i].0
    }

    pub fn head(&self, i: usize) -> usize {
        self.arcs[i].1
    }

    pub fn incoming(&self, v: usize) -> Vec<usize> {
        (0..self.arcs.len()).filter(|&i| self.arcs[i].1 == v).collect()
    }

    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        (0..self.arcs.len()).filter(|&i| self.arcs[i].0 == v).collect()
    }

    /// Sum of `p` over the edges directed into each vertex.
    pub fn in_mass(&self, p: &WeightVector) -> Vec<f64> {
        let mut mass = vec![0.0; self.vertices];
        for (i, &(_, h)) in self.arcs.iter().enumerate() {
            mass[h] += p[i];
        }
        mass
    }
}

/// Peels vertices of fractional degree at most `1/2`, lowest index first,
/// orienting their remaining incident edges inward.
pub fn orient_low_indegree(g: &GraphicMatroid, p_scaled: &WeightVector) -> Result<Orientation> {
    if p_scaled.len() != g.ground_size() {
        return Err(Error::invalid("probability vector length does not match edge count"));
    }
    let nv = g.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut degree = vec![0.0; nv];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
        degree[u] += p_scaled[i];
        degree[v] += p_scaled[i];
    }
    let mut removed = vec![false; nv];
    let mut arcs: Vec<Option<(usize, usize)>> = vec![None; g.ground_size()];
    for _ in 0..nv {
        let v = (0..nv)
            .find(|&v| !removed[v] && degree[v] <= IN_MASS_BOUND + MASS_TOL)
            .ok_or_else(|| {
                Error::Precondition(
                    "no remaining vertex has fractional degree <= 1/2; the scaled vector is not in P_G / 4".into(),
                )
            })?;
        for &i in &incident[v] {
            if arcs[i].is_none() {
                let (a, b) = g.edge(i);
                let other = if a == v { b } else { a };
                arcs[i] = Some((other, v));
                degree[other] -= p_scaled[i];
            }
        }
        removed[v] = true;
    }
    Ok(Orientation { vertices: nv, arcs: arcs.into_iter().map(|a| a.expect("every edge has a removed endpoint")).collect() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    in_a: Vec<bool>,
}

impl Cut {
    pub fn new(in_a: Vec<bool>) -> Self {
        Cut { in_a }
    }

    /// Bit `v` set means vertex `v` is in `A`.
    pub fn from_mask(vertices: usize, mask: u64) -> Self {
        Cut { in_a: (0..vertices).map(|v| mask >> v & 1 == 1).collect() }
    }

    pub fn in_a(&self, v: usize) -> bool {
        self.in_a[v]
    }

    pub fn a(&self) -> Vec<usize> {
        (0..self.in_a.len()).filter(|&v| self.in_a[v]).collect()
    }

    pub fn b(&self) -> Vec<usize> {
        (0..self.in_a.len()).filter(|&v| !self.in_a[v]).collect()
    }

    pub fn len(&self) -> usize {
        self.in_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_a.is_empty()
    }
}

/// Each vertex joins `A` independently with probability 1/2.
pub fn sample_cut<R: Rng + ?Sized>(g: &GraphicMatroid, rng: &mut R) -> Cut {
    Cut { in_a: (0..g.vertex_count()).map(|_| rng.gen_bool(0.5)).collect() }
}

/// Edges whose tail is in `A` and head is in `B`.
pub fn consideration_set(o: &Orientation, c: &Cut) -> Vec<usize> {
    (0..o.arcs.len()).filter(|&i| c.in_a(o.tail(i)) && !c.in_a(o.head(i))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockingMode {
    Exact { cap: u64 },
    MonteCarlo { trials: u64, seed: u64 },
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn endpoints_connected(g: &GraphicMatroid, parent: &mut [usize], active: impl Iterator<Item = usize>, (u, v): (usize, usize)) -> bool {
    for (k, x) in parent.iter_mut().enumerate() {
        *x = k;
    }
    for j in active {
        let (a, b) = g.edge(j);
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    find(parent, u) == find(parent, v)
}

/// `Pr[i in span(R_p(s \ {i}))]`: edge `i` is blocked iff its endpoints are
/// joined by the active edges of `s` other than `i`.
pub fn blocking_probability(g: &GraphicMatroid, p_active: &WeightVector, s: &[usize], i: usize, mode: BlockingMode) -> Result<f64> {
    let m = g.ground_size();
    if p_active.len() != m {
        return Err(Error::invalid("probability vector length does not match edge count"));
    }
    if let Some(&bad) = s.iter().chain(std::iter::once(&i)).find(|&&j| j >= m) {
        return Err(Error::ElementOutOfRange { index: bad, size: m });
    }
    let mut others: Vec<usize> = s.iter().copied().filter(|&j| j != i && p_active[j] > 0.0).collect();
    others.sort_unstable();
    others.dedup();
    let edge = g.edge(i);
    let mut parent = vec![0; g.vertex_count()];
    match mode {
        BlockingMode::Exact { cap } => {
            let (sure, uncertain): (Vec<usize>, Vec<usize>) = others.into_iter().partition(|&j| p_active[j] >= 1.0);
            if uncertain.len() >= 64 || (1u64 << uncertain.len()) > cap {
                return Err(Error::TooLarge {
                    what: "active-subset enumeration",
                    size: 1u128 << uncertain.len().min(127),
                    cap: cap as u128,
                });
            }
            let mut total = 0.0;
            for mask in 0u64..(1u64 << uncertain.len()) {
                let mut prob = 1.0;
                for (k, &j) in uncertain.iter().enumerate() {
                    prob *= if mask >> k & 1 == 1 { p_active[j] } else { 1.0 - p_active[j] };
                }
                let active = sure.iter().copied().chain(uncertain.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &j)| j));
                if endpoints_connected(g, &mut parent, active, edge) {
                    total += prob;
                }
            }
            Ok(total.min(1.0))
        }
        BlockingMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::invalid("trials must be >= 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = 0u64;
            for _ in 0..trials {
                let draws: Vec<bool> = others.iter().map(|&j| rng.gen::<f64>() < p_active[j]).collect();
                let active = others.iter().zip(&draws).filter(|(_, &on)| on).map(|(&j, _)| j);
                if endpoints_connected(g, &mut parent, active, edge) {
                    hits += 1;
                }
            }
            Ok(hits as f64 / trials as f64)
        }
    }
}

/// `sum_{i in s_hat} p'_i t_i (1 - b_i(s_hat))` with exact blocking probabilities.
pub fn claim_objective(g: &GraphicMatroid, p_scaled: &WeightVector, t: &WeightVector, s_hat: &[usize], cap: u64) -> Result<f64> {
    s_hat
        .iter()
        .map(|&i| {
            let b = blocking_probability(g, p_scaled, s_hat, i, BlockingMode::Exact { cap })?;
            Ok(p_scaled[i] * t[i] * (1.0 - b))
        })
        .sum()
}

fn check_cut_enumeration(g: &GraphicMatroid, cap: u64) -> Result<()> {
    let nv = g.vertex_count();
    if nv > MAX_CUT_VERTICES || (1u64 << nv) > cap {
        return Err(Error::TooLarge { what: "cut enumeration", size: 1u128 << nv.min(127), cap: cap.min(1 << MAX_CUT_VERTICES) as u128 });
    }
    Ok(())
}

/// Objective per cut mask, memoized by consideration set.
fn objective_table(g: &GraphicMatroid, p_scaled: &WeightVector, t: &WeightVector, o: &Orientation, cap: u64) -> Result<Vec<f64>> {
    check_cut_enumeration(g, cap)?;
    let nv = g.vertex_count();
    let mut memo: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    (0..1u64 << nv)
        .map(|mask| {
            let s_hat = consideration_set(o, &Cut::from_mask(nv, mask));
            if let Some(&v) = memo.get(&s_hat) {
                return Ok(v);
            }
            let v = claim_objective(g, p_scaled, t, &s_hat, cap)?;
            memo.insert(s_hat, v);
            Ok(v)
        })
        .collect()
}

/// Exact expectation of [`claim_objective`] over all `2^|V|` uniform cuts.
pub fn cut_bound_exact(g: &GraphicMatroid, p_scaled: &WeightVector, t: &WeightVector, o: &Orientation, cap: u64) -> Result<f64> {
    let table = objective_table(g, p_scaled, t, o, cap)?;
    Ok(table.iter().sum::<f64>() / table.len() as f64)
}

/// Method of conditional expectations on the cut objective: vertices are
/// placed in index order, each on the side (A on ties) with the larger
/// conditional expectation given the placements so far.
pub fn derandomize_cut(g: &GraphicMatroid, p_scaled: &WeightVector, t: &WeightVector, o: &Orientation, cap: u64) -> Result<Cut> {
    let table = objective_table(g, p_scaled, t, o, cap)?;
    let nv = g.vertex_count();
    let mut prefix = 0u64;
    for v in 0..nv {
        let low = (1u64 << (v + 1)) - 1;
        let (mut sum_a, mut sum_b) = (0.0, 0.0);
        for (mask, &val) in table.iter().enumerate() {
            let mask = mask as u64;
            if mask & low == prefix | 1 << v {
                sum_a += val;
            } else if mask & low == prefix {
                sum_b += val;
            }
        }
        if sum_a >= sum_b {
            prefix |= 1 << v;
        }
    }
    Ok(Cut::from_mask(nv, prefix))
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphicDiagnostics {
    pub p: Vec<f64>,
    pub t: Vec<f64>,
    pub p_scaled: Vec<f64>,
    pub orientation: Vec<(usize, usize)>,
    pub in_mass: Vec<f64>,
    pub cut_a: Vec<usize>,
    pub consideration_set: Vec<usize>,
}

/// The cut-independent part of the construction.
#[derive(Debug, Clone)]
pub struct GraphicPlan {
    pub reduction: ExAnteReduction,
    pub p_scaled: WeightVector,
    pub orientation: Orientation,
    /// Threshold each edge receives when it is in the consideration set.
    considered: Vec<Threshold>,
}

impl GraphicPlan {
    pub fn new(inst: &ProphetInstance, mode: ReductionMode) -> Result<Self> {
        Self::from_reduction(inst, ex_ante_reduce(inst, mode)?)
    }

    pub fn from_reduction(inst: &ProphetInstance, reduction: ExAnteReduction) -> Result<Self> {
        let g = inst.matroid().as_graphic()?;
        let p = reduction.bernoulli.p();
        let p_scaled = scale(p, SCALE)?;
        let orientation = orient_low_indegree(g, &p_scaled)?;
        let considered = inst
            .dists()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if p[i] > 0.0 {
                    d.quantile_threshold(p_scaled[i]).map(Threshold::from)
                } else {
                    Ok(Threshold::Infinite)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphicPlan { reduction, p_scaled, orientation, considered })
    }

    pub fn graph<'a>(&self, inst: &'a ProphetInstance) -> Result<&'a GraphicMatroid> {
        inst.matroid().as_graphic()
    }

    pub fn t(&self) -> &WeightVector {
        self.reduction.bernoulli.t()
    }

    /// Finite thresholds on `s_hat`, infinite elsewhere.
    pub fn rule_for(&self, s_hat: &[usize]) -> ThresholdRule {
        let mut thresholds = vec![Threshold::Infinite; self.considered.len()];
        for &i in s_hat {
            thresholds[i] = self.considered[i];
        }
        ThresholdRule::new(thresholds)
    }

    pub fn rule_for_cut(&self, cut: &Cut) -> ThresholdRule {
        self.rule_for(&consideration_set(&self.orientation, cut))
    }

    /// The rule distribution induced by a uniform cut, grouped by consideration set.
    pub fn cut_mixture(&self, g: &GraphicMatroid, cap: u64) -> Result<RuleMixture> {
        check_cut_enumeration(g, cap)?;
        let nv = g.vertex_count();
        let mut weights: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        let w = 1.0 / (1u64 << nv) as f64;
        for mask in 0..1u64 << nv {
            *weights.entry(consideration_set(&self.orientation, &Cut::from_mask(nv, mask))).or_insert(0.0) += w;
        }
        Ok(weights.into_iter().map(|(s, w)| (w, self.rule_for(&s))).collect())
    }

    /// `t`-ascending order of the reduced instance.
    pub fn worst_case_order(&self) -> ArrivalOrder {
        ArrivalOrder::new(worst_case_order(&self.reduction.bernoulli), OrderTag::WorstCase).expect("sorting yields a permutation")
    }

    pub fn diagnostics(&self, cut: &Cut) -> GraphicDiagnostics {
        GraphicDiagnostics {
            p: self.reduction.bernoulli.p().as_slice().to_vec(),
            t: self.t().as_slice().to_vec(),
            p_scaled: self.p_scaled.as_slice().to_vec(),
            orientation: self.orientation.arcs().to_vec(),
            in_mass: self.orientation.in_mass(&self.p_scaled),
            cut_a: cut.a(),
            consideration_set: consideration_set(&self.orientation, cut),
        }
    }
}

/// Full pipeline with a random cut drawn from `rng`.
pub fn build_thresholds<R: Rng + ?Sized>(
    inst: &ProphetInstance,
    mode: ReductionMode,
    rng: &mut R,
) -> Result<(ThresholdRule, GraphicDiagnostics)> {
    let plan = GraphicPlan::new(inst, mode)?;
    let cut = sample_cut(inst.matroid().as_graphic()?, rng);
    Ok((plan.rule_for_cut(&cut), plan.diagnostics(&cut)))
}

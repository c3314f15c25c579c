//! The demo computations, kept free of JS types so they run natively too.

use prophet_core::baselines::samuel_cahn_threshold;
use prophet_core::generate::{generate_instance, DistSpec, MatroidSpec};
use prophet_core::graphic::{consideration_set, derandomize_cut, sample_cut, GraphicPlan};
use prophet_core::model::{prophet_value_exact, DEFAULT_OUTCOME_CAP};
use prophet_core::sim::{adversarial_order_search, expected_value_exact, trial_rng, SearchMode};
use prophet_core::{DiscreteDistribution, Error, ProphetInstance, ReductionMode, Result, UniformMatroid};
use serde::Serialize;

pub const MAX_VERTICES: usize = 8;
pub const MAX_EDGES: usize = 12;
/// Worst-case guarantee of the graphic pipeline.
pub const GUARANTEE: f64 = 1.0 / 32.0;

const SUPPORT: usize = 3;
const MAX_VALUE: u32 = 20;

fn instance(vertices: usize, edges: usize, seed: u64) -> Result<ProphetInstance> {
    if vertices > MAX_VERTICES || edges > MAX_EDGES {
        return Err(Error::InvalidInput(format!("the demo is limited to {MAX_VERTICES} vertices and {MAX_EDGES} edges")));
    }
    let m = MatroidSpec::RandomGraph { vertices, edges, parallel: true };
    generate_instance(&m, &DistSpec::PerItem { support_size: SUPPORT, max_value: MAX_VALUE }, seed)
}

fn plan(inst: &ProphetInstance) -> Result<GraphicPlan> {
    GraphicPlan::new(inst, ReductionMode::Exact { cap: DEFAULT_OUTCOME_CAP })
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphView {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub p: Vec<f64>,
    pub t: Vec<f64>,
    pub p_scaled: Vec<f64>,
    /// `(tail, head)` per edge.
    pub arcs: Vec<(usize, usize)>,
    pub in_mass: Vec<f64>,
    pub cut_a: Vec<usize>,
    pub consideration_set: Vec<usize>,
    pub derandomized_cut_a: Vec<usize>,
    pub derandomized_set: Vec<usize>,
}

/// Orientation of a generated graph plus one random cut (from `cut_seed`)
/// and the derandomized cut.
pub fn orientation_view(vertices: usize, edges: usize, seed: u64, cut_seed: u64) -> Result<GraphView> {
    let inst = instance(vertices, edges, seed)?;
    let g = inst.matroid().as_graphic()?;
    let plan = plan(&inst)?;
    let cut = sample_cut(g, &mut trial_rng(cut_seed, 0));
    let derand = derandomize_cut(g, &plan.p_scaled, plan.t(), &plan.orientation, DEFAULT_OUTCOME_CAP)?;
    Ok(GraphView {
        vertices: g.vertex_count(),
        edges: g.edges().to_vec(),
        p: plan.reduction.bernoulli.p().as_slice().to_vec(),
        t: plan.t().as_slice().to_vec(),
        p_scaled: plan.p_scaled.as_slice().to_vec(),
        arcs: plan.orientation.arcs().to_vec(),
        in_mass: plan.orientation.in_mass(&plan.p_scaled),
        consideration_set: consideration_set(&plan.orientation, &cut),
        cut_a: cut.a(),
        derandomized_set: consideration_set(&plan.orientation, &derand),
        derandomized_cut_a: derand.a(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineRatio {
    pub prophet: f64,
    pub benchmark: f64,
    pub random_cut_value: f64,
    pub derandomized_value: f64,
    pub random_cut_ratio: f64,
    pub derandomized_ratio: f64,
    pub guarantee: f64,
}

/// Exact expected values of both graphic variants under the `t`-ascending order.
pub fn pipeline_ratio(vertices: usize, edges: usize, seed: u64) -> Result<PipelineRatio> {
    let inst = instance(vertices, edges, seed)?;
    let g = inst.matroid().as_graphic()?;
    let plan = plan(&inst)?;
    let order = plan.worst_case_order();
    let prophet = prophet_value_exact(&inst, DEFAULT_OUTCOME_CAP)?;
    let random_cut_value = expected_value_exact(&inst, &plan.cut_mixture(g, DEFAULT_OUTCOME_CAP)?, &order, DEFAULT_OUTCOME_CAP)?;
    let derand = derandomize_cut(g, &plan.p_scaled, plan.t(), &plan.orientation, DEFAULT_OUTCOME_CAP)?;
    let derandomized_value = expected_value_exact(&inst, &[(1.0, plan.rule_for_cut(&derand))], &order, DEFAULT_OUTCOME_CAP)?;
    let ratio = |v: f64| if prophet > 0.0 { v / prophet } else { 1.0 };
    Ok(PipelineRatio {
        prophet,
        benchmark: plan.reduction.bernoulli.benchmark(),
        random_cut_value,
        derandomized_value,
        random_cut_ratio: ratio(random_cut_value),
        derandomized_ratio: ratio(derandomized_value),
        guarantee: GUARANTEE,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TightnessPoint {
    pub eps: f64,
    pub ratio: f64,
    pub limit: f64,
}

/// Single-item threshold rule on `X1 = 1`, `X2 = 1/eps` w.p. `eps`, worst order,
/// for `points` values of `eps` spread over `(0, 1)`.
pub fn tightness_curve(points: usize) -> Result<Vec<TightnessPoint>> {
    if points == 0 || points > 200 {
        return Err(Error::InvalidInput("points must be in 1..=200".into()));
    }
    (1..=points)
        .map(|j| {
            let eps = j as f64 / (points + 1) as f64;
            let inst = ProphetInstance::new(
                UniformMatroid::new(2, 1),
                vec![DiscreteDistribution::point(1.0)?, DiscreteDistribution::bernoulli(1.0 / eps, eps)?],
            )?;
            let rule = samuel_cahn_threshold(&inst)?.to_rule(2);
            let (_, worst) = adversarial_order_search(&inst, &[(1.0, rule)], SearchMode::Exhaustive, DEFAULT_OUTCOME_CAP)?;
            Ok(TightnessPoint { eps, ratio: worst / prophet_value_exact(&inst, DEFAULT_OUTCOME_CAP)?, limit: 0.5 })
        })
        .collect()
}

use std::path::PathBuf;

use clap::Args;
use prophet_core::graphic::{orient_low_indegree, SCALE};
use prophet_core::matroid::scale;
use prophet_core::model::{ex_ante_reduce, ExAnteReduction};
use prophet_core::{ProphetInstance, ReductionMode};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::{emit, load_instance, CapArg, Mode};

#[derive(Debug, Clone, Args)]
pub struct ReductionArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// How to compute the reduction; exact whenever the outcome space fits the cap if omitted.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Sample count for a Monte Carlo reduction.
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub cap: CapArg,
}

pub fn reduction_mode(inst: &ProphetInstance, mode: Option<Mode>, cap: u64, samples: u64, seed: u64) -> ReductionMode {
    let exact = match mode {
        Some(Mode::Exact) => true,
        Some(Mode::Mc) => false,
        None => inst.outcome_count() <= cap as u128,
    };
    if exact {
        ReductionMode::Exact { cap }
    } else {
        ReductionMode::MonteCarlo { samples, seed }
    }
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    r: ReductionArgs,
    /// Emit the instance file with the reduction attached instead of a report.
    #[arg(long)]
    embed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ReduceReport {
    mode: &'static str,
    p: Vec<f64>,
    t: Vec<f64>,
    benchmark: f64,
    prophet_exact: Option<f64>,
    polytope_slack: Option<f64>,
}

fn compute(r: &ReductionArgs) -> Result<(prophet_core::instance_file::InstanceFile, ProphetInstance, ExAnteReduction)> {
    let (file, inst) = load_instance(&r.instance)?;
    let mode = reduction_mode(&inst, r.mode, r.cap.value(), r.trials, r.seed);
    let red = ex_ante_reduce(&inst, mode)?;
    Ok((file, inst, red))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

pub fn reduce(a: ReduceArgs) -> Result<()> {
    let (file, _, red) = compute(&a.r)?;
    let text = if a.embed {
        file.with_reduction(&red.bernoulli).to_json()
    } else {
        to_json(&ReduceReport {
            mode: if red.prophet_exact.is_some() { "exact" } else { "mc" },
            p: red.bernoulli.p().as_slice().to_vec(),
            t: red.bernoulli.t().as_slice().to_vec(),
            benchmark: red.bernoulli.benchmark(),
            prophet_exact: red.prophet_exact,
            polytope_slack: red.polytope_slack,
        })
    };
    emit(a.out.as_ref(), &text)
}

#[derive(Debug, Args)]
pub struct OrientArgs {
    #[command(flatten)]
    r: ReductionArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Arc {
    edge: usize,
    tail: usize,
    head: usize,
    mass: f64,
}

#[derive(Debug, Serialize)]
struct OrientReport {
    p_scaled: Vec<f64>,
    arcs: Vec<Arc>,
    in_mass: Vec<f64>,
    max_in_mass: f64,
}

pub fn orient(a: OrientArgs) -> Result<()> {
    let (file, inst, red) = compute(&a.r)?;
    let g = inst.matroid().as_graphic().map_err(|e| CliError::usage(e.to_string()))?;
    // A reduction stored in the file takes precedence over the computed one.
    let b = file.stored_reduction(&inst)?.unwrap_or(red.bernoulli);
    let p_scaled = scale(b.p(), SCALE)?;
    let o = orient_low_indegree(g, &p_scaled)?;
    let in_mass = o.in_mass(&p_scaled);
    let report = OrientReport {
        arcs: o.arcs().iter().enumerate().map(|(edge, &(tail, head))| Arc { edge, tail, head, mass: p_scaled[edge] }).collect(),
        max_in_mass: in_mass.iter().copied().fold(0.0, f64::max),
        in_mass,
        p_scaled: p_scaled.into_vec(),
    };
    emit(a.out.as_ref(), &to_json(&report))
}

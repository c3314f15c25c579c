use std::path::PathBuf;

use clap::{Args, ValueEnum};
use prophet_core::generate::{desk_graphic_suite, generate_instance, DistSpec, MatroidSpec};
use prophet_core::instance_file::InstanceFile;

use crate::error::{CliError, Result};
use crate::emit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    RandomGraph,
    Uniform,
    Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistFamily {
    Iid,
    PerItem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Graphic instances with 3-6 vertices, at most 9 edges, support <= 3.
    DeskGraphic,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "random-graph")]
    family: Family,
    #[arg(long, default_value_t = 4)]
    vertices: usize,
    #[arg(long, default_value_t = 5)]
    edges: usize,
    /// Allow parallel edges in random graphs.
    #[arg(long)]
    parallel: bool,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Partition blocks, e.g. "0,1;2,3,4".
    #[arg(long)]
    blocks: Option<String>,
    /// Per-block capacities, e.g. "1,2".
    #[arg(long)]
    capacities: Option<String>,
    #[arg(long, value_enum, default_value = "per-item")]
    dist: DistFamily,
    #[arg(long, default_value_t = 3)]
    support_size: usize,
    #[arg(long, default_value_t = 20)]
    max_value: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write a numbered suite into the `--out` directory instead of one instance.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[arg(long, default_value_t = 50)]
    count: u64,
    /// Output file (or directory with `--suite`); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::usage(format!("{what}: '{x}' is not a non-negative integer"))))
        .collect()
}

fn matroid_spec(a: &GenArgs) -> Result<MatroidSpec> {
    Ok(match a.family {
        Family::RandomGraph => MatroidSpec::RandomGraph { vertices: a.vertices, edges: a.edges, parallel: a.parallel },
        Family::Uniform => MatroidSpec::Uniform { n: a.n, k: a.k },
        Family::Partition => {
            let blocks = a.blocks.as_deref().ok_or_else(|| CliError::usage("--blocks is required for partition"))?;
            let caps = a.capacities.as_deref().ok_or_else(|| CliError::usage("--capacities is required for partition"))?;
            MatroidSpec::Partition {
                blocks: blocks.split(';').map(|b| parse_list(b, "--blocks")).collect::<Result<_>>()?,
                capacities: parse_list(caps, "--capacities")?,
            }
        }
    })
}

pub fn gen(a: GenArgs) -> Result<()> {
    if let Some(Suite::DeskGraphic) = a.suite {
        let dir = a.out.as_ref().ok_or_else(|| CliError::usage("--suite needs an --out directory"))?;
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (j, inst) in desk_graphic_suite(a.seed, a.count)?.iter().enumerate() {
            let path = dir.join(format!("graphic-{j:03}.json"));
            emit(Some(&path), &InstanceFile::from_instance(inst).to_json())?;
        }
        eprintln!("wrote {} instances to {}", a.count, dir.display());
        return Ok(());
    }
    let dist = match a.dist {
        DistFamily::Iid => DistSpec::IidDiscrete { support_size: a.support_size, max_value: a.max_value },
        DistFamily::PerItem => DistSpec::PerItem { support_size: a.support_size, max_value: a.max_value },
    };
    let inst = generate_instance(&matroid_spec(&a)?, &dist, a.seed)?;
    emit(a.out.as_ref(), &InstanceFile::from_instance(&inst).to_json())
}

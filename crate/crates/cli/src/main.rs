use std::path::{Path, PathBuf};
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prophet_core::instance_file::InstanceFile;
use prophet_core::model::DEFAULT_OUTCOME_CAP;
use prophet_core::ProphetInstance;

mod error;
mod gen;
mod inspect;
mod run;
mod verify;

use error::{CliError, Result};

/// Overrides the default enumeration cap when `--cap` is not given.
pub const CAP_ENV: &str = "PROPHET_ENUM_CAP";

#[derive(Debug, Parser)]
#[command(name = "prophet", version, about = "Matroid prophet inequality experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random instance file, or a numbered suite of them.
    Gen(gen::GenArgs),
    /// Run one algorithm on one instance, exactly or by Monte Carlo.
    Run(run::RunArgs),
    /// Check every guarantee on a directory of instance files.
    Verify(verify::VerifyArgs),
    /// Print the ex-ante reduction (p, t) of an instance.
    Reduce(inspect::ReduceArgs),
    /// Print the low in-degree orientation of a graphic instance.
    Orient(inspect::OrientArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Args)]
pub struct CapArg {
    /// Enumeration cap for exact computations.
    #[arg(long, env = CAP_ENV)]
    pub cap: Option<u64>,
}

impl CapArg {
    pub fn value(&self) -> u64 {
        self.cap.unwrap_or(DEFAULT_OUTCOME_CAP)
    }
}

pub fn load_instance(path: &Path) -> Result<(InstanceFile, ProphetInstance)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file = InstanceFile::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let inst = file.to_instance().map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok((file, inst))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(p, text).map_err(|e| CliError::io(p, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.write_all(b"\n")).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io("<stdout>", e)),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen::gen(a),
        Command::Run(a) => run::run(a),
        Command::Verify(a) => verify::verify(a),
        Command::Reduce(a) => inspect::reduce(a),
        Command::Orient(a) => inspect::orient(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oqrw_core::{DensityMat, Error, KrausPair};

use commands::{CmdResult, Failure};
use config::{DiagArg, Format, Method, RunConfig, Walk};

/// Exact distributions, trajectory sampling and limit analysis for open quantum random walks on Z.
#[derive(Parser)]
#[command(name = "oqrw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Site distribution after a number of steps (CSV `x,p` or JSON).
    Dist(RunArgs),
    /// Monte Carlo trajectories; JSON report, optional CSV of the empirical law.
    Sample {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the empirical distribution as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Invariant state and central limit parameters (JSON).
    Clt {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Local limit ratios p_x / alpha at step 2n (CSV).
    Asym {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, value_name = "A,B")]
        rho0_diag: Option<DiagArg>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Max-abs and total variation distance between two `x,p` CSV files (JSON).
    Compare { a: PathBuf, b: PathBuf },
    /// Print a run config for a catalog example.
    InitExample {
        /// Example spec, e.g. `ex4:eps=0.1,theta=0.7`.
        #[arg(value_name = "EXAMPLE")]
        spec: String,
        #[command(flatten)]
        run: RunArgs,
        /// Write the config here instead of stdout.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WalkArgs {
    /// Catalog walk, e.g. `ex1:p=0.3` or `ex5`.
    #[arg(long, conflicts_with = "kraus")]
    example: Option<String>,
    /// JSON file holding `{"b": ..., "c": ...}`.
    #[arg(long)]
    kraus: Option<PathBuf>,
}

impl WalkArgs {
    fn resolve(&self) -> CmdResult<Option<Walk>> {
        if let Some(e) = &self.example {
            e.parse::<oqrw_core::catalog::ExampleSpec>()?;
            return Ok(Some(Walk::Example(e.clone())));
        }
        if let Some(path) = &self.kraus {
            let kp: KrausPair = serde_json::from_str(&commands::read_text(path)?)
                .map_err(|e| Failure::from(Error::Parse(e.to_string())))?;
            return Ok(Some(Walk::Kraus(kp)));
        }
        Ok(None)
    }

    fn require(&self) -> CmdResult<Walk> {
        self.resolve()?
            .ok_or_else(|| Error::Parse("one of --example or --kraus is required".into()).into())
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON run config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    walk: WalkArgs,
    /// Initial internal state diag(a, b); defaults to I/2.
    #[arg(long, value_name = "A,B")]
    rho0_diag: Option<DiagArg>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of trajectories.
    #[arg(long)]
    traj: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl RunArgs {
    fn resolve(&self, default_method: Method) -> CmdResult<RunConfig> {
        let base = match &self.config {
            Some(path) => Some(RunConfig::from_json(&commands::read_text(path)?)?),
            None => None,
        };
        let walk = match (self.walk.resolve()?, &base) {
            (Some(w), _) => w,
            (None, Some(b)) => b.walk.clone(),
            (None, None) => return Err(Error::Parse("one of --example, --kraus or --config is required".into()).into()),
        };
        let steps = self
            .steps
            .or(base.as_ref().map(|b| b.steps))
            .ok_or_else(|| Failure::from(Error::Parse("--steps is required".into())))?;
        let rho0 = match self.rho0_diag {
            Some(DiagArg(a, b)) => DensityMat::diag(a, b)?,
            None => base.as_ref().map_or_else(DensityMat::maximally_mixed, |b| b.rho0),
        };
        Ok(RunConfig {
            walk,
            rho0,
            steps,
            method: self.method.or(base.as_ref().map(|b| b.method)).unwrap_or(default_method),
            seed: self.seed.or(base.as_ref().and_then(|b| b.seed)),
            n_traj: self.traj.or(base.as_ref().and_then(|b| b.n_traj)),
            output: self.output.clone().or(base.as_ref().and_then(|b| b.output.clone())),
            format: self.format.or(base.as_ref().map(|b| b.format)).unwrap_or_default(),
        })
    }
}

fn configure_threads() -> CmdResult {
    let Ok(value) = std::env::var("OQRW_THREADS") else {
        return Ok(());
    };
    let threads: usize = match value.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => return Err(Error::Parse(format!("OQRW_THREADS must be a positive integer, got `{value}`")).into()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure { code: 2, message: e.to_string() })
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match cli.command {
        Command::Dist(args) => commands::dist(&args.resolve(Method::Dual)?),
        Command::Sample { run, csv } => commands::sample_cmd(&run.resolve(Method::Trajectory)?, csv.as_deref()),
        Command::Clt { walk, output } => commands::clt(&walk.require()?, output.as_deref()),
        Command::Asym { walk, n, rho0_diag, output } => {
            let rho0 = match rho0_diag {
                Some(DiagArg(a, b)) => DensityMat::diag(a, b)?,
                None => DensityMat::maximally_mixed(),
            };
            commands::asym(&walk.require()?, n, &rho0, output.as_deref())
        }
        Command::Compare { a, b } => commands::compare_files(&a, &b),
        Command::InitExample { spec, mut run, write } => {
            run.walk.example = Some(spec);
            run.walk.kraus = None;
            let cfg = run.resolve(Method::Dual)?;
            cfg.validate()?;
            commands::emit(write.as_deref(), &(cfg.to_json() + "\n"))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("oqrw: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}

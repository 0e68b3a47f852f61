//! Command-line driver.
//!
//! Exit status: 0 on success, 2 when a run fails in time (positivity loss,
//! tangling, step collapse, ...), 3 for bad arguments or configuration,
//! 1 for output errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lagrangian1d::closure::SolverOrder;
use lagrangian1d::config::{FileConfig, ProblemChoice};
use lagrangian1d::driver::{run, run_convergence, Method};
use lagrangian1d::output::write_text;
use lagrangian1d::problems::{sample_reference, ProblemSpec};
use lagrangian1d::sgh::SghMode;
use lagrangian1d::{HydroError, Result};

#[derive(Parser)]
#[command(name = "lagrangian1d", version, about = "1D Lagrangian SGH/CCH hydrodynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write profile, nodes and summary files.
    Run(RunArgs),
    /// Run several resolutions against the problem's reference.
    Converge(ConvergeArgs),
    /// Sample the reference solution on evenly spaced points.
    Reference(ReferenceArgs),
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Predictor,
    Pc,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SolverArg {
    Acoustic,
    Quadratic,
}

#[derive(Args)]
struct Common {
    /// Benchmark name (sod, lax, double_rarefaction, sedov, shu_osher, leblanc).
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    method: Option<Method>,
    /// TOML run configuration; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    t_end: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    cells: Vec<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ReferenceArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
}

impl Common {
    fn file_config(&self, cells: Option<usize>, out: Option<PathBuf>) -> Result<FileConfig> {
        let base = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let flags = FileConfig {
            problem: self.problem.clone().map(ProblemChoice::Named),
            method: self.method,
            sgh_mode: self.mode.map(|m| match m {
                ModeArg::Predictor => SghMode::PredictorOnly,
                ModeArg::Pc => SghMode::PredictorCorrector,
            }),
            cch_solver: self.solver.map(|s| match s {
                SolverArg::Acoustic => SolverOrder::Acoustic,
                SolverArg::Quadratic => SolverOrder::Quadratic,
            }),
            n_cells: cells,
            cfl: self.cfl,
            t_end: self.t_end,
            output: out,
            ..FileConfig::default()
        };
        Ok(base.merge(flags))
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let fc = args.common.file_config(args.cells, args.out)?;
    let out = fc.output.clone().unwrap_or_else(|| PathBuf::from("out"));
    let cfg = fc.into_run_config()?;
    let result = run(&cfg)?;
    for path in result.write(&cfg, &out)? {
        println!("{}", path.display());
    }
    eprintln!(
        "{}: t={} steps={} mass drift={:e} momentum residual={:e} energy residual={:e}",
        cfg.stem(),
        result.final_time,
        result.steps,
        result.ledger.mass_drift(),
        result.ledger.momentum_residual(),
        result.ledger.energy_residual()
    );
    Ok(())
}

fn cmd_converge(args: ConvergeArgs) -> Result<()> {
    if args.cells.is_empty() {
        return Err(HydroError::Config("empty --cells list".into()));
    }
    let cfg = args.common.file_config(Some(args.cells[0]), None)?.into_run_config()?;
    let table = run_convergence(&cfg, &args.cells)?;
    let csv = table.to_csv();
    let path = args.out.join(format!("{}_{}_convergence.csv", cfg.problem.name, cfg.method));
    write_text(&path, &csv)?;
    print!("{csv}");
    println!("{}", path.display());
    Ok(())
}

fn cmd_reference(args: ReferenceArgs) -> Result<()> {
    let problem = ProblemSpec::named(&args.problem)?;
    if args.points == 0 {
        return Err(HydroError::Config("--points must be positive".into()));
    }
    let t = args.t.unwrap_or(problem.t_end);
    if !(t >= 0.0 && t <= problem.t_end) {
        return Err(HydroError::Config(format!("--t {t} outside [0, {}]", problem.t_end)));
    }
    let (lo, h) = (problem.domain.lo, problem.domain.length() / args.points as f64);
    let x: Vec<f64> = (0..args.points).map(|i| lo + (i as f64 + 0.5) * h).collect();
    let profile = sample_reference(&problem, &x, t)?;
    write_text(&args.out, &profile.to_csv())?;
    println!("{}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Reference(a) => cmd_reference(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                ref e if e.is_solver_failure() => 2,
                HydroError::Io(_) => 1,
                _ => 3,
            })
        }
    }
}

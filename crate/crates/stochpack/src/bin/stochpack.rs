//! Command-line front end: solve instances, run the invariant suites,
//! run the capacity sweep and export cost-surface grids.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use stochpack::costs::{CostModel, TwoBinContext};
use stochpack::geometry::export_cost_grid;
use stochpack::model::{Instance, ModelError};
use stochpack::sim::{run_sweep, sweep_to_csv, MixtureSpec, SweepConfig};
use stochpack::solver::{
    error_certificate, solve_k_bins_dp, solve_two_bins, SolutionRecord, SolverError,
};
use stochpack::verify::{run_all, VerifyConfig};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "stochpack", version, about = "Stochastic packing of normal demands")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and write the solution JSON
    Solve(SolveArgs),
    /// Run the randomized invariant suites
    Verify(VerifyArgs),
    /// Run the capacity sweep and write the report CSV
    Simulate(SimulateArgs),
    /// Export the two-bin cost surface as CSV
    Grid(GridArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// instance JSON ({"capacities":[...],"services":[{"mu":..,"var":..},...]})
    instance: PathBuf,
    #[arg(long, default_value = "SPMED")]
    model: CostModel,
    /// output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// comma-separated subset of SPMED,SPMWOP,SPMOP
    #[arg(long, value_delimiter = ',', default_values_t = CostModel::ALL)]
    models: Vec<CostModel>,
    /// comma-separated c/mu ratios, each >= 1
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 500)]
    timeslots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// worker threads; 0 means one per core
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    c1: f64,
    #[arg(long)]
    c2: f64,
    #[arg(long)]
    mu: f64,
    #[arg(long)]
    var: f64,
    #[arg(long, default_value = "SPMED")]
    model: CostModel,
    #[arg(long, default_value_t = 51)]
    resolution: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn solver_exit(err: &SolverError) -> u8 {
    match err {
        SolverError::Model(ModelError::Infeasible { .. }) => EXIT_INFEASIBLE,
        SolverError::Cost(_) => EXIT_INFEASIBLE,
        _ => EXIT_USAGE,
    }
}

fn cmd_solve(args: &SolveArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&args.instance) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_USAGE, format!("{}: {e}", args.instance.display())),
    };
    let instance: Instance = match serde_json::from_str(&text) {
        Ok(i) => i,
        Err(e) => return fail(EXIT_USAGE, format!("bad instance JSON: {e}")),
    };
    if let Err(e) = instance.validate() {
        return fail(EXIT_USAGE, e);
    }
    if let Err(e) = instance.check_feasible() {
        return fail(EXIT_INFEASIBLE, e);
    }
    let record = if instance.k() == 2 {
        match solve_two_bins(&instance, args.model) {
            Ok(sol) => {
                let cert = error_certificate(&instance, args.model).ok();
                SolutionRecord::from_two_bin(&sol, args.model, cert)
            }
            Err(e) => return fail(solver_exit(&e), e),
        }
    } else {
        match solve_k_bins_dp(&instance, args.model) {
            Ok(sol) => SolutionRecord::from_k_bin(&sol, args.model),
            Err(e) => return fail(solver_exit(&e), e),
        }
    };
    let mut json = serde_json::to_string_pretty(&record).expect("record serializes");
    json.push('\n');
    match emit(&args.out, &json) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let results = run_all(&VerifyConfig {
        n_max: args.n_max,
        trials: args.trials,
        seed: args.seed,
    });
    let mut all_ok = true;
    for r in &results {
        println!("{}", r.line());
        all_ok &= r.passed;
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn cmd_simulate(args: &SimulateArgs) -> ExitCode {
    let config = SweepConfig {
        spec: MixtureSpec {
            n: args.n,
            base_mu: 500.0,
        },
        c_over_mu_values: args
            .grid
            .clone()
            .unwrap_or_else(|| SweepConfig::default().c_over_mu_values),
        k: args.k,
        models: args.models.clone(),
        repetitions: args.reps,
        timeslots: args.timeslots,
        seed: args.seed,
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let report = match pool.install(|| run_sweep(&config)) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    match emit(&args.out, &sweep_to_csv(&report)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn cmd_grid(args: &GridArgs) -> ExitCode {
    let ctx = match TwoBinContext::new(args.c1, args.c2, args.mu, args.var) {
        Ok(c) => c,
        Err(e) => {
            // under-capacity is infeasibility; anything else is bad usage
            let code = if args.c1 + args.c2 < args.mu {
                EXIT_INFEASIBLE
            } else {
                EXIT_USAGE
            };
            return fail(code, e);
        }
    };
    match export_cost_grid(&ctx, args.model, args.resolution) {
        Ok(csv) => match emit(&args.out, &csv) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(EXIT_USAGE, e),
        },
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Grid(args) => cmd_grid(&args),
    }
}

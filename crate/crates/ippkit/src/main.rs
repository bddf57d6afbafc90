use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ippkit::bench::generators::{gen_lasso, gen_lcqp};
use ippkit::bench::io::{ProblemInstance, read_problem, write_problem, write_status, write_trace};
use ippkit::bench::profile::{Metric, profile_directory, write_profile};
use ippkit::bench::runner::{Algo, RunParams, run_experiment};
use ippkit::trace::RunStatus;
use ippkit::{OptError, Result};

const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "ippkit", version, about = "First-order composite solvers and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance.
    #[command(subcommand)]
    Gen(GenKind),
    /// Run one solver on a problem file and write its trace.
    Solve(SolveArgs),
    /// Build a performance profile from a directory of traces.
    Profile(ProfileArgs),
}

#[derive(Subcommand)]
enum GenKind {
    /// ℓ₁-regularized least squares.
    Lasso {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Box- and equality-constrained quadratic program.
    Lcqp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Rank of the quadratic term; defaults to `m`.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    /// acg, racg, grad_restart, speed_restart, pgm, ialm, ifalm, or lpalm.
    #[arg(long)]
    algo: String,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 10_000)]
    max_outer: usize,
    #[arg(long, default_value_t = 100_000)]
    inner_budget: usize,
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    rhat: Option<f64>,
    /// Known optimal value; enables gap-based stopping.
    #[arg(long)]
    reference: Option<f64>,
    #[arg(long)]
    verify_certificates: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Time,
    Prox,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    traces: PathBuf,
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[arg(long)]
    out: PathBuf,
}

fn generate(kind: GenKind) -> Result<RunStatus> {
    let (instance, out) = match kind {
        GenKind::Lasso { n, m, density, gamma, seed, out } => {
            (ProblemInstance::Lasso(gen_lasso(n, m, density, gamma, seed)?), out)
        }
        GenKind::Lcqp { n, m, rank, density, seed, out } => {
            (ProblemInstance::Lcqp(gen_lcqp(n, m, rank.unwrap_or(m), density, seed)?), out)
        }
    };
    write_problem(&out, &instance)?;
    Ok(RunStatus::Converged)
}

fn solve(args: SolveArgs) -> Result<RunStatus> {
    let algo: Algo = args.algo.parse()?;
    let problem = read_problem(&args.problem)?;
    let params = RunParams {
        eps: args.eps,
        max_outer: args.max_outer,
        inner_budget: args.inner_budget,
        rho: args.rho,
        sigma: args.sigma,
        alpha: args.alpha,
        eps0: args.eps0,
        lambda: args.lambda,
        dual_radius: args.rhat,
        verify: args.verify_certificates,
        reference: args.reference,
    };
    let result = run_experiment(&problem, algo, &params)?;
    write_trace(BufWriter::new(File::create(&args.trace)?), &result.trace)?;
    write_status(&args.trace, result.status)?;
    if let Some(last) = result.trace.last() {
        println!(
            "{algo}: {:?} after {} prox evaluations, objective {:.10e}, feasibility {:.3e}",
            result.status, last.prox_evals, last.objective, last.feasibility
        );
    }
    if let Some(ok) = result.certificates_ok {
        println!("dual certificate checks: {}", if ok { "all passed" } else { "FAILED" });
    }
    Ok(result.status)
}

fn profile(args: ProfileArgs) -> Result<RunStatus> {
    let metric = match args.metric {
        MetricArg::Time => Metric::Time,
        MetricArg::Prox => Metric::Prox,
    };
    let dp = profile_directory(&args.traces, metric)?;
    for &p in &dp.profile.excluded {
        eprintln!("warning: no solver succeeded on {}; excluded", dp.problems[p]);
    }
    write_profile(BufWriter::new(File::create(&args.out)?), &dp.solvers, &dp.profile)?;
    Ok(RunStatus::Converged)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Gen(kind) => generate(kind),
        Command::Solve(args) => solve(args),
        Command::Profile(args) => profile(args),
    };
    match outcome {
        Ok(RunStatus::Converged) => ExitCode::SUCCESS,
        Ok(RunStatus::BudgetExhausted) => ExitCode::from(EXIT_BUDGET),
        Err(e @ (OptError::Usage(_) | OptError::Parameter(_) | OptError::Dimension(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edo_core::evolution::RNG_DESCRIPTION;
use edo_core::oracle::{brute_force_optimal_diversity, count_maximum_matchings, DEFAULT_CAP};
use edo_core::{optimal_diversity, run, seeds, Algorithm, Graph, RunConfig};
use edo_harness::record::{csv_writer, write_header};
use edo_harness::{
    bound_violations, fit_slopes, read_records, run_experiment_with, worker_count, ExperimentSpec,
    Family, FitAxis, HarnessError, SweepAxis,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "edo",
    version,
    about = "Evolutionary diversity optimisation of maximum matchings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one EA and print the result as JSON.
    Run(RunArgs),
    /// Run a parameter sweep and write one CSV row per run.
    Experiment(ExperimentArgs),
    /// Enumerate maximum matchings and brute-force the optimal diversity.
    Oracle(OracleArgs),
    /// Fit power laws to mean iterations from an experiment CSV.
    Fit(FitArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Left side of a complete bipartite graph.
    #[arg(long, requires = "right", conflicts_with = "m")]
    left: Option<usize>,
    /// Right side of a complete bipartite graph.
    #[arg(long, requires = "left")]
    right: Option<usize>,
    /// Number of edges of a path.
    #[arg(long)]
    m: Option<usize>,
}

impl GraphArgs {
    fn graph(&self) -> Result<Graph, HarnessError> {
        match (self.left, self.right, self.m) {
            (Some(l), Some(r), None) => Ok(Graph::complete_bipartite(l, r)?),
            (None, None, Some(m)) => Ok(Graph::path(m)?),
            _ => Err(HarnessError::Spec(
                "give either --left and --right, or --m".into(),
            )),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    mu: usize,
    #[arg(long, default_value = "ea_d")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = edo_harness::spec::DEFAULT_MAX_ITERATIONS)]
    max_iterations: u64,
    /// Start from the adversarial rotation population instead of a homogeneous one.
    #[arg(long)]
    adversarial: bool,
    /// Include a sampled diversity trace.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON spec file; flags below override its fields.
    spec: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    /// Comma-separated, e.g. `ea_d,two_phase`.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    /// `vary_m_fixed_mu` or `vary_mu_fixed_m`.
    #[arg(long)]
    axis: Option<SweepAxis>,
    /// Comma-separated sweep values: |R| or m for an m-sweep, mu for a mu-sweep.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<usize>>,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    left: Option<usize>,
    #[arg(long)]
    right: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    repetitions: Option<u32>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iterations: Option<u64>,
    /// CSV destination; standard output if absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl ExperimentArgs {
    fn into_spec(self) -> Result<ExperimentSpec, HarnessError> {
        let mut spec = match &self.spec {
            Some(path) => ExperimentSpec::from_json(&std::fs::read_to_string(path)?)?,
            None => {
                let missing = |what: &str| {
                    HarnessError::Spec(format!("--{what} is required without a spec file"))
                };
                let mut s = ExperimentSpec::vary_m(
                    self.family.ok_or_else(|| missing("family"))?,
                    &self.algorithms.clone().unwrap_or(Algorithm::ALL.to_vec()),
                    &self.values.clone().ok_or_else(|| missing("values"))?,
                    0,
                );
                s.axis = self.axis.unwrap_or(SweepAxis::VaryMFixedMu);
                s.mu = None;
                s
            }
        };
        if let Some(v) = self.family {
            spec.family = v;
        }
        if let Some(v) = self.algorithms {
            spec.algorithms = v;
        }
        if let Some(v) = self.axis {
            spec.axis = v;
        }
        if let Some(v) = self.values {
            spec.values = v;
        }
        spec.mu = self.mu.or(spec.mu);
        spec.left = self.left.or(spec.left);
        spec.right = self.right.or(spec.right);
        spec.m = self.m.or(spec.m);
        if let Some(v) = self.repetitions {
            spec.repetitions = v;
        }
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if let Some(v) = self.max_iterations {
            spec.max_iterations = v;
        }
        spec.output = self.output.or(spec.output);
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    mu: usize,
    /// Maximum number of matchings or candidate populations to examine.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

#[derive(Args)]
struct FitArgs {
    csv: PathBuf,
    /// Force the fit axis (`m` or `mu`); inferred per family and algorithm otherwise.
    #[arg(long)]
    axis: Option<FitAxis>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, HarnessError> {
    match command {
        Command::Run(args) => cmd_run(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Fit(args) => cmd_fit(args),
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, HarnessError> {
    let g = args.graph.graph()?;
    let start = if args.adversarial {
        seeds::adversarial_rotation_population(&g, args.mu)?
    } else if g.is_bipartite() {
        seeds::homogeneous_bipartite_population(&g, args.mu)?
    } else {
        seeds::all_even_path_population(&g, args.mu)?
    };
    let mut config = RunConfig::new(g, args.algorithm, start, args.seed, args.max_iterations);
    config.trace = args.trace;
    let result = run(&config)?;
    let out = json!({
        "graph": g,
        "mu": args.mu,
        "algorithm": args.algorithm,
        "seed": args.seed,
        "max_iterations": args.max_iterations,
        "rng": RNG_DESCRIPTION,
        "result": result,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<ExitCode, HarnessError> {
    let spec = args.into_spec()?;
    let sink: Box<dyn Write> = match &spec.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let mut writer = csv_writer(sink);
    write_header(&mut writer)?;
    let workers = worker_count();
    eprintln!("running on {workers} worker(s), rng {RNG_DESCRIPTION}");
    let outcome = run_experiment_with(&spec, workers, |rows| {
        for r in rows {
            writer.serialize(r)?;
        }
        writer.flush()?;
        if let Some(r) = rows.first() {
            let failed = rows.iter().filter(|r| !r.reached_target).count();
            eprintln!(
                "done {} {}: {} runs, {failed} failed",
                r.point(),
                r.algorithm,
                rows.len()
            );
        }
        Ok(())
    })?;
    for s in &outcome.skipped {
        eprintln!("skipped {} {}: {}", s.point, s.algorithm, s.reason);
    }
    for r in bound_violations(&outcome.records) {
        eprintln!(
            "warning: {} {} repetition {} took {} iterations, beyond {}x its bound",
            r.point(),
            r.algorithm,
            r.repetition,
            r.iterations,
            edo_harness::analysis::BOUND_FACTOR
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, HarnessError> {
    let g = args.graph.graph()?;
    println!("graph: {g} (m = {}, n = {})", g.m(), g.n());
    println!("maximum matching size: {}", g.max_matching_size());
    println!("maximum matchings: {}", count_maximum_matchings(&g));
    match optimal_diversity(&g, args.mu) {
        Ok(d) => println!("closed-form optimum (mu = {}): {d}", args.mu),
        Err(e) => println!("closed-form optimum (mu = {}): {e}", args.mu),
    }
    let opt = brute_force_optimal_diversity(&g, args.mu, args.cap)?;
    println!(
        "brute-force optimum: {} over {} candidate populations",
        opt.diversity, opt.candidates
    );
    println!(
        "edge-disjoint witness: {}",
        opt.witness.pairwise_edge_disjoint()
    );
    for (i, x) in opt.witness.to_hex().iter().enumerate() {
        println!("witness[{i}]: {x}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit(args: FitArgs) -> Result<ExitCode, HarnessError> {
    let records = read_records(File::open(&args.csv)?)?;
    let fits = fit_slopes(&records, args.axis)?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "family,algorithm,axis,fixed,points,missing_points,failed_runs,slope,intercept,r_squared"
    )?;
    for f in &fits {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6}",
            f.family,
            f.algorithm,
            f.axis,
            f.fixed,
            f.points,
            f.missing_points,
            f.failed_runs,
            f.fit.slope,
            f.fit.intercept,
            f.fit.r_squared
        )?;
    }
    let flagged = bound_violations(&records);
    if !flagged.is_empty() {
        eprintln!("{} run(s) exceed their theoretical bound", flagged.len());
    }
    Ok(ExitCode::SUCCESS)
}

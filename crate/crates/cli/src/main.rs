use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use robust_dsd::exact::{solve_bruteforce, DEFAULT_TOL};
use robust_dsd::experiment::{ExperimentRecord, RealConfig, RunSettings, SyntheticConfig};
use robust_dsd::robust::{
    algorithm1_basic_with, algorithm2_sampling, baseline_random_with, ratio_with_optimum, DEFAULT_SAMPLE_CAP,
};
use robust_dsd::{
    adversarial_spike, balalau_preprocess, density, emit_results, gen_knockout, gen_planted, greedy_peel,
    make_simulated_oracle, read_instance, run_real_experiment, run_synthetic_experiment, solve_exact_with,
    write_graph, write_instance, write_summary, DensestResult, Error, Format, Graph, ParsedInstance, PlantedParams,
    SamplingParams, SolveOptions, VertexSet, WeightSpace, WeightVector,
};

#[derive(Parser)]
#[command(name = "rdsd", version, about = "Densest subgraphs under edge-weight uncertainty")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Master seed (defaults: 0, or the preset's seed for experiments).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Solver stopping tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Output file; standard output if omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    JsonLines,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::JsonLines => Format::JsonLines,
        }
    }
}

/// Which weight vector of an instance file to use.
#[derive(Clone, Copy, ValueEnum)]
enum At {
    /// Point weights if the file has them, else the lower bounds.
    Auto,
    Lower,
    Upper,
    True,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Desk,
    Full,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Largest per-edge sample count before giving up.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_CAP)]
    sample_cap: u64,
    /// Sample only edges that can appear in a densest subgraph of the box.
    #[arg(long)]
    reduce: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact densest subgraph.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = At::Auto)]
        at: At,
        /// Enumerate all subsets instead (at most 25 vertices).
        #[arg(long)]
        bruteforce: bool,
    },
    /// Greedy peeling (1/2-approximation).
    Peel {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = At::Auto)]
        at: At,
    },
    /// Degree-threshold reduction; writes the reduced weighted edge list.
    Preprocess {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = At::Auto)]
        at: At,
    },
    /// Densest subgraph at the lower bounds.
    Alg1 { input: PathBuf },
    /// Oracle sampling with interval contraction (needs true weights).
    Alg2 {
        input: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Densest subgraph at a uniformly random point of the box.
    Baseline { input: PathBuf },
    /// Generate a planted uncertain dense subgraph instance.
    GenPlanted {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        n_prime: usize,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Apply the knockout weighting to a graph.
    GenKnockout {
        input: PathBuf,
        /// Keep only the largest connected component first.
        #[arg(long)]
        lcc: bool,
    },
    /// Ratio f_w(S) / OPT_w of a vertex set.
    EvalRatio {
        input: PathBuf,
        /// Comma-separated vertex ids or labels.
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = At::Auto)]
        at: At,
        /// Evaluate at the single-spike vector for the set instead.
        #[arg(long, conflicts_with = "at")]
        spike: bool,
    },
    /// Planted-model experiment grid.
    ExpSynthetic {
        #[arg(long, value_enum, default_value_t = Preset::Desk)]
        preset: Preset,
        /// Graph realizations per cell.
        #[arg(long)]
        trials: Option<usize>,
        /// Runs of Random and Algorithm 2 per realization.
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Comma-separated planted sizes.
        #[arg(long, value_delimiter = ',')]
        n_primes: Option<Vec<usize>>,
        /// Comma-separated separations.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_CAP)]
        sample_cap: u64,
        #[arg(long)]
        reduce: bool,
        /// Also write a JSON summary of the aggregates here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Knockout-model experiment on a real graph.
    ExpReal {
        input: PathBuf,
        /// Dataset name recorded in the output (default: file stem).
        #[arg(long)]
        name: Option<String>,
        /// Runs of Random and Algorithm 2.
        #[arg(long, visible_alias = "trials", default_value_t = 10)]
        repeats: usize,
        #[arg(long, default_value_t = 0.9)]
        gamma: f64,
        #[arg(long, default_value_t = 0.9)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_CAP)]
        sample_cap: u64,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

/// One row of output for the single-run commands.
#[derive(Serialize, Default)]
struct Report {
    command: &'static str,
    n: usize,
    m: usize,
    size: usize,
    density: f64,
    ratio: Option<f64>,
    optimum: Option<f64>,
    iterations: Option<usize>,
    reduced_to: Option<usize>,
    oracle_calls: Option<u64>,
    calls_per_edge: Option<f64>,
    delta: Option<f64>,
    runtime_s: f64,
    vertices: String,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } => 2,
        Error::Precondition(_) => 3,
        Error::BudgetExceeded { .. } => 4,
        _ => 1,
    }
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn weights_at(inst: &ParsedInstance, at: At) -> robust_dsd::Result<WeightVector> {
    let missing = |what: &str| Error::Precondition(format!("the input has no {what}"));
    match at {
        At::Auto => Ok(inst
            .point_weights()
            .unwrap_or_else(|| inst.space().expect("interval files have a space").lower_vector())),
        At::Lower => inst.space().map(WeightSpace::lower_vector).ok_or_else(|| missing("intervals")),
        At::Upper => inst.space().map(WeightSpace::upper_vector).ok_or_else(|| missing("intervals")),
        At::True => inst.w_true().cloned().ok_or_else(|| missing("true weights")),
    }
}

fn space_of(inst: &ParsedInstance) -> robust_dsd::Result<&WeightSpace> {
    inst.space()
        .ok_or_else(|| Error::Precondition("the input has no weight intervals (needs 4 or 5 columns)".into()))
}

fn labels(inst: &ParsedInstance, s: &VertexSet) -> String {
    s.iter().map(|v| inst.labels[v].as_str()).collect::<Vec<_>>().join(" ")
}

fn parse_set(inst: &ParsedInstance, spec: &str) -> robust_dsd::Result<VertexSet> {
    let n = inst.graph.vertex_count();
    let ids = spec
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            inst.labels
                .iter()
                .position(|l| l == t)
                .or_else(|| t.parse().ok().filter(|&v: &usize| v < n))
                .ok_or_else(|| Error::InvalidInput(format!("unknown vertex '{t}'")))
        })
        .collect::<robust_dsd::Result<Vec<_>>>()?;
    VertexSet::try_from_ids(n, ids)
}

/// Ratio at the true weights, when the instance has them.
fn true_ratio(inst: &ParsedInstance, s: &VertexSet, opts: &SolveOptions) -> robust_dsd::Result<(Option<f64>, Option<f64>)> {
    match inst.w_true() {
        Some(w) => {
            let opt = solve_exact_with(&inst.graph, w, opts)?.density;
            Ok((Some(ratio_with_optimum(&inst.graph, w, s, opt)?), Some(opt)))
        }
        None => Ok((None, None)),
    }
}

fn result_report(command: &'static str, inst: &ParsedInstance, res: &DensestResult, runtime_s: f64) -> Report {
    Report {
        command,
        n: inst.graph.vertex_count(),
        m: inst.graph.edge_count(),
        size: res.solution.len(),
        density: res.density,
        iterations: Some(res.iterations),
        reduced_to: Some(res.reduced_to),
        runtime_s,
        vertices: labels(inst, &res.solution),
        ..Report::default()
    }
}

fn write_report(report: &Report, format: OutFormat, out: Option<&Path>) -> robust_dsd::Result<()> {
    let mut w = output(out)?;
    match format {
        OutFormat::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.serialize(report)?;
            csv.flush()?;
        }
        OutFormat::JsonLines => {
            serde_json::to_writer(&mut w, report)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_record(record: &ExperimentRecord, common: &Common, summary: Option<&Path>) -> robust_dsd::Result<()> {
    let mut w = output(common.out.as_deref())?;
    emit_results(record, common.format.into(), &mut w)?;
    w.flush()?;
    if let Some(path) = summary {
        let mut s = BufWriter::new(File::create(path)?);
        write_summary(record, &mut s)?;
        writeln!(s)?;
        s.flush()?;
    }
    eprintln!("{} trial rows, {} aggregates", record.rows.len(), record.aggregates.len());
    Ok(())
}

fn run(cli: Cli) -> robust_dsd::Result<()> {
    let common = &cli.common;
    let seed = common.seed.unwrap_or(0);
    let opts = SolveOptions {
        tol: common.tol,
        preprocess: true,
    };
    let out = common.out.as_deref();

    match cli.command {
        Command::Solve { input, at, bruteforce } => {
            let inst = read_instance(&input)?;
            let w = weights_at(&inst, at)?;
            let start = Instant::now();
            let res = if bruteforce {
                solve_bruteforce(&inst.graph, &w)?
            } else {
                solve_exact_with(&inst.graph, &w, &opts)?
            };
            write_report(&result_report("solve", &inst, &res, start.elapsed().as_secs_f64()), common.format, out)
        }
        Command::Peel { input, at } => {
            let inst = read_instance(&input)?;
            let w = weights_at(&inst, at)?;
            let start = Instant::now();
            let res = greedy_peel(&inst.graph, &w)?;
            write_report(&result_report("peel", &inst, &res, start.elapsed().as_secs_f64()), common.format, out)
        }
        Command::Preprocess { input, at } => {
            let inst = read_instance(&input)?;
            let w = weights_at(&inst, at)?;
            let sub = balalau_preprocess(&inst.graph, &w)?;
            eprintln!(
                "kept {} of {} vertices, {} of {} edges",
                sub.graph.vertex_count(),
                inst.graph.vertex_count(),
                sub.graph.edge_count(),
                inst.graph.edge_count()
            );
            let mut w_out = output(out)?;
            write_graph(&sub.graph, Some(&sub.restrict_weights(&w)), &mut w_out)?;
            w_out.flush()?;
            Ok(())
        }
        Command::Alg1 { input } => {
            let inst = read_instance(&input)?;
            let start = Instant::now();
            let res = algorithm1_basic_with(&inst.graph, space_of(&inst)?, &opts)?;
            let mut report = result_report("alg1", &inst, &res, start.elapsed().as_secs_f64());
            (report.ratio, report.optimum) = true_ratio(&inst, &res.solution, &opts)?;
            write_report(&report, common.format, out)
        }
        Command::Baseline { input } => {
            let inst = read_instance(&input)?;
            let start = Instant::now();
            let res = baseline_random_with(&inst.graph, space_of(&inst)?, seed, &opts)?;
            let mut report = result_report("baseline", &inst, &res, start.elapsed().as_secs_f64());
            (report.ratio, report.optimum) = true_ratio(&inst, &res.solution, &opts)?;
            write_report(&report, common.format, out)
        }
        Command::Alg2 { input, sampling } => {
            let parsed = read_instance(&input)?;
            let labels = parsed.labels.clone();
            let inst = parsed.clone().into_instance(seed)?;
            let mut oracle = make_simulated_oracle(&inst, seed)?;
            let params = SamplingParams {
                gamma: sampling.gamma,
                epsilon: sampling.epsilon,
                sample_cap: sampling.sample_cap,
                reduce: sampling.reduce,
                solver: opts,
            };
            let start = Instant::now();
            let res = algorithm2_sampling(&inst.graph, &inst.space, &mut oracle, &params)?;
            let runtime_s = start.elapsed().as_secs_f64();
            let (ratio, optimum) = true_ratio(&parsed, &res.solution, &opts)?;
            let report = Report {
                command: "alg2",
                n: inst.graph.vertex_count(),
                m: inst.graph.edge_count(),
                size: res.solution.len(),
                density: res.solution_density,
                ratio,
                optimum,
                oracle_calls: Some(res.total_calls),
                calls_per_edge: Some(res.mean_calls_per_edge()),
                delta: Some(res.delta),
                runtime_s,
                vertices: res.solution.iter().map(|v| labels[v].as_str()).collect::<Vec<_>>().join(" "),
                ..Report::default()
            };
            write_report(&report, common.format, out)
        }
        Command::GenPlanted { n, p, n_prime, alpha } => {
            let inst = gen_planted(&PlantedParams { n, p, n_prime, alpha }, seed)?;
            let mut w = output(out)?;
            write_instance(&inst, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Command::GenKnockout { input, lcc } => {
            let graph: Graph = read_instance(&input)?.graph;
            let graph = if lcc { graph.largest_component().graph } else { graph };
            let inst = gen_knockout(&graph, seed)?;
            let mut w = output(out)?;
            write_instance(&inst, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Command::EvalRatio { input, set, at, spike } => {
            let inst = read_instance(&input)?;
            let s = parse_set(&inst, &set)?;
            let w = if spike {
                adversarial_spike(&inst.graph, space_of(&inst)?, &s)?
            } else {
                weights_at(&inst, at)?
            };
            let start = Instant::now();
            let opt = solve_exact_with(&inst.graph, &w, &opts)?.density;
            let report = Report {
                command: "eval-ratio",
                n: inst.graph.vertex_count(),
                m: inst.graph.edge_count(),
                size: s.len(),
                density: density(&inst.graph, &w, &s)?,
                ratio: Some(ratio_with_optimum(&inst.graph, &w, &s, opt)?),
                optimum: Some(opt),
                runtime_s: start.elapsed().as_secs_f64(),
                vertices: labels(&inst, &s),
                ..Report::default()
            };
            write_report(&report, common.format, out)
        }
        Command::ExpSynthetic {
            preset,
            trials,
            repeats,
            n,
            p,
            n_primes,
            alphas,
            gamma,
            epsilon,
            sample_cap,
            reduce,
            summary,
        } => {
            let mut config = match preset {
                Preset::Desk => SyntheticConfig::desk(),
                Preset::Full => SyntheticConfig::full(),
            };
            config.n = n.unwrap_or(config.n);
            config.p = p.unwrap_or(config.p);
            config.n_primes = n_primes.unwrap_or(config.n_primes);
            config.alphas = alphas.unwrap_or(config.alphas);
            config.realizations = trials.unwrap_or(config.realizations);
            config.seed = common.seed.unwrap_or(config.seed);
            let s = &mut config.settings;
            s.gamma = gamma.unwrap_or(s.gamma);
            s.epsilon = epsilon.unwrap_or(s.epsilon);
            s.repeats = repeats.unwrap_or(s.repeats);
            s.sample_cap = sample_cap;
            s.reduce = reduce;
            s.tol = common.tol;
            let record = run_synthetic_experiment(&config)?;
            write_record(&record, common, summary.as_deref())
        }
        Command::ExpReal {
            input,
            name,
            repeats,
            gamma,
            epsilon,
            sample_cap,
            reduce,
            summary,
        } => {
            let graph = read_instance(&input)?.graph;
            let name = name.unwrap_or_else(|| {
                input
                    .file_stem()
                    .map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned())
            });
            let mut settings = RunSettings::new(gamma, epsilon, repeats);
            settings.sample_cap = sample_cap;
            settings.reduce = reduce;
            settings.tol = common.tol;
            let config = RealConfig { name, seed, settings };
            let record = run_real_experiment(&graph, &config)?;
            write_record(&record, common, summary.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("rdsd: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

//! Experiment orchestration: synthetic grids over the planted model and
//! knockout runs on real graphs.
//!
//! Every output set is scored by its ratio at the true weights,
//! `f_{w_true}(S) / f_{w_true}(S*_{w_true})`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{solve_exact_with, SolveOptions};
use crate::generators::{gen_knockout, gen_planted, make_simulated_oracle, ModelTag, PlantedParams, UncertainInstance};
use crate::graph::Graph;
use crate::robust::{
    algorithm1_basic_with, algorithm2_sampling, baseline_random_with, ratio_with_optimum, SamplingParams,
    DEFAULT_SAMPLE_CAP,
};
use crate::seeds::{derive_seed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "alg1")]
    Algorithm1,
    #[serde(rename = "alg2")]
    Algorithm2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Random, Algorithm::Algorithm1, Algorithm::Algorithm2];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Random => "random",
            Algorithm::Algorithm1 => "alg1",
            Algorithm::Algorithm2 => "alg2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == s)
    }
}

/// Settings shared by both experiment kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub gamma: f64,
    pub epsilon: f64,
    /// Runs of Random and Algorithm 2 per instance.
    pub repeats: usize,
    pub sample_cap: u64,
    pub reduce: bool,
    pub tol: f64,
    /// Run trials on the rayon pool.
    #[serde(skip)]
    pub parallel: bool,
}

impl RunSettings {
    pub fn new(gamma: f64, epsilon: f64, repeats: usize) -> Self {
        RunSettings {
            gamma,
            epsilon,
            repeats,
            sample_cap: DEFAULT_SAMPLE_CAP,
            reduce: false,
            tol: crate::exact::DEFAULT_TOL,
            parallel: true,
        }
    }

    fn solver(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            preprocess: true,
        }
    }

    fn sampling(&self) -> SamplingParams {
        SamplingParams {
            gamma: self.gamma,
            epsilon: self.epsilon,
            sample_cap: self.sample_cap,
            reduce: self.reduce,
            solver: self.solver(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n: usize,
    pub p: f64,
    pub n_primes: Vec<usize>,
    pub alphas: Vec<f64>,
    /// Graph realizations per `(n', α)` cell.
    pub realizations: usize,
    pub seed: u64,
    pub settings: RunSettings,
}

fn alpha_grid() -> Vec<f64> {
    (0..=9).map(|i| i as f64 / 10.0).collect()
}

impl SyntheticConfig {
    /// `n = 500`, `p = 0.01`, `n' ∈ {50, 100, 150, 200}`, `α ∈ {0.0, …, 0.9}`,
    /// 10 realizations, 10 repeats, `(γ, ε) = (0.1, 0.5)`.
    pub fn full() -> Self {
        SyntheticConfig {
            n: 500,
            p: 0.01,
            n_primes: vec![50, 100, 150, 200],
            alphas: alpha_grid(),
            realizations: 10,
            seed: 0,
            settings: RunSettings::new(0.1, 0.5, 10),
        }
    }

    /// Small grid that finishes in minutes: `n = 120`, `p = 0.05`,
    /// `n' ∈ {15, 30}`, 5 realizations.
    pub fn desk() -> Self {
        SyntheticConfig {
            n: 120,
            p: 0.05,
            n_primes: vec![15, 30],
            alphas: alpha_grid(),
            realizations: 5,
            seed: 0,
            settings: RunSettings::new(0.1, 0.5, 10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealConfig {
    pub name: String,
    pub seed: u64,
    pub settings: RunSettings,
}

impl RealConfig {
    /// `(γ, ε) = (0.9, 0.9)` with 10 repeats.
    pub fn new(name: impl Into<String>) -> Self {
        RealConfig {
            name: name.into(),
            seed: 0,
            settings: RunSettings::new(0.9, 0.9, 10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExperimentConfig {
    Synthetic(SyntheticConfig),
    Real(RealConfig),
}

/// One algorithm invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub model: ModelTag,
    pub n: usize,
    pub p: Option<f64>,
    pub n_prime: Option<usize>,
    pub alpha: Option<f64>,
    pub gamma: f64,
    pub epsilon: f64,
    /// Seed of the instance the trial ran on.
    pub seed: u64,
    pub algorithm: Algorithm,
    pub trial: usize,
    /// `None` when the algorithm failed (e.g. sample budget exceeded).
    pub ratio: Option<f64>,
    pub runtime_s: f64,
    pub oracle_calls: u64,
    /// Edges of the instance, for per-edge call averages.
    pub edges: usize,
    pub error: Option<String>,
}

/// Per-cell, per-algorithm summary of trial rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub n_prime: Option<usize>,
    pub alpha: Option<f64>,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub failures: usize,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub mean_runtime_s: f64,
    pub mean_oracle_calls: f64,
    pub mean_calls_per_edge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub rows: Vec<TrialRow>,
    pub aggregates: Vec<Aggregate>,
}

impl ExperimentRecord {
    pub fn empty(config: ExperimentConfig) -> Self {
        ExperimentRecord {
            config,
            rows: Vec::new(),
            aggregates: Vec::new(),
        }
    }

    pub fn aggregate(&self, n_prime: Option<usize>, alpha: Option<f64>, algorithm: Algorithm) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.n_prime == n_prime && a.alpha == alpha && a.algorithm == algorithm)
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for fewer than two values.
pub(crate) fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - mu) * (x - mu)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Groups rows by `(n', α, algorithm)` in first-appearance order.
pub fn aggregate_rows(rows: &[TrialRow]) -> Vec<Aggregate> {
    let mut keys: Vec<(Option<usize>, Option<f64>, Algorithm)> = Vec::new();
    for r in rows {
        let key = (r.n_prime, r.alpha, r.algorithm);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(n_prime, alpha, algorithm)| {
            let group: Vec<&TrialRow> = rows
                .iter()
                .filter(|r| r.n_prime == n_prime && r.alpha == alpha && r.algorithm == algorithm)
                .collect();
            let ratios: Vec<f64> = group.iter().filter_map(|r| r.ratio).collect();
            let runtimes: Vec<f64> = group.iter().map(|r| r.runtime_s).collect();
            let calls: Vec<f64> = group.iter().map(|r| r.oracle_calls as f64).collect();
            let per_edge: Vec<f64> = group
                .iter()
                .map(|r| if r.edges == 0 { 0.0 } else { r.oracle_calls as f64 / r.edges as f64 })
                .collect();
            Aggregate {
                n_prime,
                alpha,
                algorithm,
                trials: group.len(),
                failures: group.len() - ratios.len(),
                mean_ratio: mean(&ratios),
                std_ratio: std_dev(&ratios),
                mean_runtime_s: mean(&runtimes),
                mean_oracle_calls: mean(&calls),
                mean_calls_per_edge: mean(&per_edge),
            }
        })
        .collect()
}

/// Row fields that identify the instance.
#[derive(Debug, Clone, Copy)]
struct CellInfo {
    model: ModelTag,
    n: usize,
    p: Option<f64>,
    n_prime: Option<usize>,
    alpha: Option<f64>,
}

/// Runs Algorithm 1 once and Random and Algorithm 2 `repeats` times each on
/// one instance. Trial indices start at `first_trial` (Algorithm 1) and
/// `first_trial * repeats` (the repeated algorithms).
fn run_instance(
    inst: &UncertainInstance,
    cell: CellInfo,
    settings: &RunSettings,
    first_trial: usize,
) -> Result<Vec<TrialRow>> {
    let g = &inst.graph;
    let solver = settings.solver();
    let optimum = solve_exact_with(g, &inst.w_true, &solver)?.density;
    let row = |algorithm, trial, ratio, runtime_s, oracle_calls, error| TrialRow {
        model: cell.model,
        n: cell.n,
        p: cell.p,
        n_prime: cell.n_prime,
        alpha: cell.alpha,
        gamma: settings.gamma,
        epsilon: settings.epsilon,
        seed: inst.seed,
        algorithm,
        trial,
        ratio,
        runtime_s,
        oracle_calls,
        edges: g.edge_count(),
        error,
    };
    let mut rows = Vec::with_capacity(1 + 2 * settings.repeats);

    let start = Instant::now();
    let a1 = algorithm1_basic_with(g, &inst.space, &solver)?;
    let elapsed = start.elapsed().as_secs_f64();
    let ratio = ratio_with_optimum(g, &inst.w_true, &a1.solution, optimum)?;
    rows.push(row(Algorithm::Algorithm1, first_trial, Some(ratio), elapsed, 0, None));

    for k in 0..settings.repeats {
        let trial = first_trial * settings.repeats + k;
        let start = Instant::now();
        let rnd = baseline_random_with(g, &inst.space, derive_seed(inst.seed, Stream::Baseline, k as u64), &solver)?;
        let elapsed = start.elapsed().as_secs_f64();
        let ratio = ratio_with_optimum(g, &inst.w_true, &rnd.solution, optimum)?;
        rows.push(row(Algorithm::Random, trial, Some(ratio), elapsed, 0, None));
    }

    let params = settings.sampling();
    for k in 0..settings.repeats {
        let trial = first_trial * settings.repeats + k;
        let mut oracle = make_simulated_oracle(inst, derive_seed(inst.seed, Stream::Oracle, k as u64))?;
        let start = Instant::now();
        let outcome = algorithm2_sampling(g, &inst.space, &mut oracle, &params);
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(out) => {
                let ratio = ratio_with_optimum(g, &inst.w_true, &out.solution, optimum)?;
                rows.push(row(Algorithm::Algorithm2, trial, Some(ratio), elapsed, out.total_calls, None));
            }
            Err(e @ Error::BudgetExceeded { .. }) => {
                rows.push(row(Algorithm::Algorithm2, trial, None, elapsed, 0, Some(e.to_string())));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

fn algorithm_rank(a: Algorithm) -> u8 {
    match a {
        Algorithm::Algorithm1 => 0,
        Algorithm::Random => 1,
        Algorithm::Algorithm2 => 2,
    }
}

/// Synthetic grid over the planted model.
pub fn run_synthetic_experiment(config: &SyntheticConfig) -> Result<ExperimentRecord> {
    let mut jobs = Vec::new();
    for (ci, &n_prime) in config.n_primes.iter().enumerate() {
        for (ai, &alpha) in config.alphas.iter().enumerate() {
            for r in 0..config.realizations {
                jobs.push((ci, ai, n_prime, alpha, r));
            }
        }
    }
    let run = |&(_, _, n_prime, alpha, r): &(usize, usize, usize, f64, usize)| -> Result<Vec<TrialRow>> {
        // The instance seed depends only on (seed, n', α, r), so instances are
        // shared across γ, ε and repeat settings.
        let cell_seed = derive_seed(
            derive_seed(config.seed, Stream::Realization, n_prime as u64),
            Stream::Realization,
            alpha.to_bits(),
        );
        let seed = derive_seed(cell_seed, Stream::Realization, r as u64);
        let params = PlantedParams {
            n: config.n,
            p: config.p,
            n_prime,
            alpha,
        };
        let inst = gen_planted(&params, seed)?;
        let cell = CellInfo {
            model: ModelTag::Planted,
            n: config.n,
            p: Some(config.p),
            n_prime: Some(n_prime),
            alpha: Some(alpha),
        };
        run_instance(&inst, cell, &config.settings, r)
    };
    let results: Vec<Result<Vec<TrialRow>>> = if config.settings.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };

    let mut keyed = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        for row in res? {
            keyed.push(((job.0, job.1, algorithm_rank(row.algorithm), row.trial), row));
        }
    }
    keyed.sort_by_key(|k| k.0);
    let rows: Vec<TrialRow> = keyed.into_iter().map(|(_, r)| r).collect();
    let aggregates = aggregate_rows(&rows);
    Ok(ExperimentRecord {
        config: ExperimentConfig::Synthetic(config.clone()),
        rows,
        aggregates,
    })
}

/// Knockout experiment on one real graph, restricted to its largest
/// connected component.
pub fn run_real_experiment(graph: &Graph, config: &RealConfig) -> Result<ExperimentRecord> {
    let lcc = graph.largest_component();
    let g = lcc.graph;
    if g.vertex_count() == 0 {
        return Err(Error::domain("real experiment on an empty graph"));
    }
    let inst = gen_knockout(&g, derive_seed(config.seed, Stream::Realization, 0))?;
    let cell = CellInfo {
        model: ModelTag::Knockout,
        n: g.vertex_count(),
        p: None,
        n_prime: None,
        alpha: None,
    };
    let mut rows = run_instance(&inst, cell, &config.settings, 0)?;
    rows.sort_by_key(|r| (algorithm_rank(r.algorithm), r.trial));
    let aggregates = aggregate_rows(&rows);
    Ok(ExperimentRecord {
        config: ExperimentConfig::Real(config.clone()),
        rows,
        aggregates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SyntheticConfig {
        SyntheticConfig {
            n: 40,
            p: 0.15,
            n_primes: vec![8],
            alphas: vec![0.0, 0.9],
            realizations: 2,
            seed: 3,
            settings: RunSettings::new(0.1, 0.5, 2),
        }
    }

    #[test]
    fn grid_shape_and_ratio_range() {
        let rec = run_synthetic_experiment(&tiny()).unwrap();
        // 2 cells x 2 realizations x (1 + 2 + 2).
        assert_eq!(rec.rows.len(), 20);
        assert_eq!(rec.aggregates.len(), 6);
        for r in &rec.rows {
            let x = r.ratio.unwrap();
            assert!((0.0..=1.0 + 1e-9).contains(&x), "{r:?}");
        }
        let a1 = rec.aggregate(Some(8), Some(0.0), Algorithm::Algorithm1).unwrap();
        assert_eq!(a1.trials, 2);
    }

    #[test]
    fn degenerate_cell_is_solved_exactly() {
        let rec = run_synthetic_experiment(&tiny()).unwrap();
        for alg in Algorithm::ALL {
            let agg = rec.aggregate(Some(8), Some(0.9), alg).unwrap();
            assert!((agg.mean_ratio - 1.0).abs() < 1e-9, "{alg:?}: {}", agg.mean_ratio);
        }
    }

    #[test]
    fn parallel_and_serial_agree() {
        let mut cfg = tiny();
        let a = run_synthetic_experiment(&cfg).unwrap();
        cfg.settings.parallel = false;
        let b = run_synthetic_experiment(&cfg).unwrap();
        let strip = |rows: &[TrialRow]| {
            rows.iter()
                .map(|r| (r.algorithm, r.trial, r.seed, r.ratio, r.oracle_calls))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a.rows), strip(&b.rows));
    }

    #[test]
    fn budget_failures_are_recorded() {
        let mut cfg = tiny();
        cfg.alphas = vec![0.0];
        cfg.settings.sample_cap = 1;
        let rec = run_synthetic_experiment(&cfg).unwrap();
        let agg = rec.aggregate(Some(8), Some(0.0), Algorithm::Algorithm2).unwrap();
        assert_eq!(agg.failures, agg.trials);
        assert!(rec.rows.iter().any(|r| r.error.is_some()));
    }

    #[test]
    fn std_dev_matches_hand_computation() {
        assert_eq!(std_dev(&[1.0]), 0.0);
        assert!((std_dev(&[1.0, 2.0, 3.0, 4.0]) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}

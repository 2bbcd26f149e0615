//! Densest subgraph discovery when edge weights are only known up to an
//! interval.
//!
//! The crate provides exact and approximate weighted densest-subgraph
//! solvers, the two robust algorithms (lower-bound solve and
//! oracle sampling with interval contraction), a random-point baseline, the
//! planted and knockout instance models, and an experiment harness that
//! writes per-trial CSV.

pub mod approx;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
pub mod report;
pub mod robust;
pub mod seeds;

pub use approx::{balalau_preprocess, greedy_peel, peel_profile, PeelProfile};
pub use error::{Error, Result};
pub use exact::{solve_bruteforce, solve_exact, solve_exact_with, DensestResult, SolveOptions};
pub use experiment::{
    run_real_experiment, run_synthetic_experiment, Aggregate, Algorithm, ExperimentConfig,
    ExperimentRecord, RealConfig, RunSettings, SyntheticConfig, TrialRow,
};
pub use generators::{
    gen_erdos_renyi, gen_knockout, gen_planted, make_simulated_oracle, ModelTag, PlantedParams,
    SimulatedOracle, UncertainInstance,
};
pub use graph::{density, induced_weight, weighted_degree, Graph, Subgraph, VertexSet, WeightSpace, WeightVector};
pub use io::{parse_instance, read_instance, write_graph, write_instance, EdgeData, ParsedInstance};
pub use report::{emit_results, read_csv, write_csv, write_json_lines, write_summary, Format};
pub use robust::{
    adversarial_spike, algorithm1_basic, algorithm2_sampling, baseline_random, ratio_at,
    theorem2_bound, SamplingOracle, SamplingOutcome, SamplingParams,
};

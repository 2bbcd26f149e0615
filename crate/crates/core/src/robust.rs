//! Densest subgraph under interval weight uncertainty.
//!
//! * [`algorithm1_basic`] solves at the lower-bound vector `w^-`.
//! * [`algorithm2_sampling`] queries a sampling oracle a Hoeffding-calibrated
//!   number of times per edge, contracts every interval around the sample
//!   mean and solves at the contracted lower bounds.
//! * [`baseline_random`] solves at a uniformly random point of the box.
//!
//! Robust ratios over a whole box are never computed; evaluation goes through
//! [`ratio_at`] at a designated weight vector.

use crate::approx::{greedy_peel, prune_below};
use crate::error::{Error, Result};
use crate::exact::{solve_exact_with, DensestResult, SolveOptions};
use crate::graph::{density, Graph, VertexSet, WeightSpace, WeightVector};
use crate::seeds::{uniform_closed, Stream};

/// Per-edge access to noisy weight observations.
///
/// Draws for edge `e` are independent, lie in `[l_e, r_e]` and have mean
/// equal to the true weight of `e`.
pub trait SamplingOracle {
    fn query(&mut self, e: usize) -> f64;

    /// Calls made so far for edge `e`.
    fn calls(&self, e: usize) -> u64;

    fn total_calls(&self) -> u64;
}

/// Algorithm 2 parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingParams {
    /// Failure probability of the containment guarantee, in `(0, 1)`.
    pub gamma: f64,
    /// Accuracy: the output's robust ratio under the contracted space is at
    /// least `1 − epsilon`.
    pub epsilon: f64,
    /// Largest per-edge sample count accepted before giving up.
    pub sample_cap: u64,
    /// Sample only edges that can belong to a densest subgraph for some
    /// weight vector in the box; the remaining intervals stay unchanged.
    pub reduce: bool,
    pub solver: SolveOptions,
}

pub const DEFAULT_SAMPLE_CAP: u64 = 100_000_000;

impl SamplingParams {
    pub fn new(gamma: f64, epsilon: f64) -> Self {
        SamplingParams {
            gamma,
            epsilon,
            sample_cap: DEFAULT_SAMPLE_CAP,
            reduce: false,
            solver: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SamplingOutcome {
    /// The contracted space `W_out ⊆ W`.
    pub space: WeightSpace,
    /// Densest subgraph at the contracted lower bounds.
    pub solution: VertexSet,
    /// Samples drawn per edge (`t_e`).
    pub sample_counts: Vec<u64>,
    /// Half-width of every contracted interval before clipping.
    pub delta: f64,
    /// Optimal density at `w^-` on the input graph.
    pub base_density: f64,
    pub total_calls: u64,
    /// Edges eligible for sampling (all edges unless `reduce` is set).
    pub sampled_edges: usize,
    /// Density of `solution` at the contracted lower bounds.
    pub solution_density: f64,
}

impl SamplingOutcome {
    pub fn mean_calls_per_edge(&self) -> f64 {
        if self.sample_counts.is_empty() {
            0.0
        } else {
            self.total_calls as f64 / self.sample_counts.len() as f64
        }
    }
}

/// Densest subgraph at `w^- = (l_e)`.
pub fn algorithm1_basic(g: &Graph, space: &WeightSpace) -> Result<DensestResult> {
    algorithm1_basic_with(g, space, &SolveOptions::default())
}

pub fn algorithm1_basic_with(
    g: &Graph,
    space: &WeightSpace,
    opts: &SolveOptions,
) -> Result<DensestResult> {
    space.check_graph(g)?;
    solve_exact_with(g, &space.lower_vector(), opts)
}

/// `1 / max_e (r_e / l_e)`, the guaranteed robust ratio of
/// [`algorithm1_basic`] when every lower bound is positive.
pub fn theorem2_bound(space: &WeightSpace) -> Result<f64> {
    if space.is_empty() {
        return Err(Error::domain("ratio bound of an empty weight space"));
    }
    let mut worst: f64 = 1.0;
    for e in 0..space.len() {
        let (l, r) = space.interval(e);
        if l <= 0.0 {
            return Err(Error::domain(format!(
                "edge {e} has lower bound 0; the ratio bound needs min l_e > 0"
            )));
        }
        worst = worst.max(r / l);
    }
    Ok(1.0 / worst)
}

/// Hoeffding sample count for one edge, before rounding up:
/// `m · width² · ln(2m/γ) / (ε² · base²)`.
pub fn required_samples(m: usize, width: f64, gamma: f64, epsilon: f64, base_density: f64) -> f64 {
    let m = m as f64;
    m * width * width * (2.0 * m / gamma).ln() / (epsilon * epsilon * base_density * base_density)
}

/// Interval half-width `ε · base / √(2m)`.
pub fn contraction_delta(m: usize, epsilon: f64, base_density: f64) -> f64 {
    epsilon * base_density / (2.0 * m as f64).sqrt()
}

/// Edges whose endpoints can both lie in a densest subgraph for some
/// `w ∈ W`. A vertex of such a set has weighted degree (inside the set, hence
/// at `w^+` in the whole graph) at least the optimum at `w`, which is at
/// least the greedy-peeling density at `w^-`.
fn eligible_edges(g: &Graph, space: &WeightSpace) -> Result<Vec<bool>> {
    let floor = greedy_peel(g, &space.lower_vector())?.density;
    let keep = prune_below(g, space.upper(), floor);
    Ok(g
        .edges()
        .iter()
        .map(|&(u, v)| keep.contains(u) && keep.contains(v))
        .collect())
}

/// Sampling with interval contraction.
///
/// With probability at least `1 − γ` the true weights lie in the returned
/// space, and the returned set has robust ratio at least `1 − ε` under it.
pub fn algorithm2_sampling<O: SamplingOracle + ?Sized>(
    g: &Graph,
    space: &WeightSpace,
    oracle: &mut O,
    params: &SamplingParams,
) -> Result<SamplingOutcome> {
    space.check_graph(g)?;
    let SamplingParams {
        gamma,
        epsilon,
        sample_cap,
        ..
    } = *params;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::precondition(format!("gamma = {gamma} is not in (0, 1)")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::precondition(format!("epsilon = {epsilon} is not positive")));
    }
    if !space.lower().iter().any(|&l| l > 0.0) {
        return Err(Error::precondition(
            "every lower bound is 0; sampling needs max_e l_e > 0",
        ));
    }

    let m = g.edge_count();
    let base = solve_exact_with(g, &space.lower_vector(), &params.solver)?.density;
    let delta = contraction_delta(m, epsilon, base);

    let eligible = if params.reduce {
        eligible_edges(g, space)?
    } else {
        vec![true; m]
    };

    let mut counts = vec![0u64; m];
    for e in 0..m {
        let width = space.width(e);
        if !eligible[e] || width == 0.0 {
            continue;
        }
        let t = required_samples(m, width, gamma, epsilon, base).ceil();
        if t.is_nan() || t > sample_cap as f64 {
            return Err(Error::BudgetExceeded {
                edge: e,
                required: t,
                cap: sample_cap,
            });
        }
        counts[e] = t as u64;
    }

    let mut lower = space.lower().to_vec();
    let mut upper = space.upper().to_vec();
    for e in 0..m {
        if counts[e] == 0 {
            continue;
        }
        let (l, r) = space.interval(e);
        let mut sum = 0.0;
        for _ in 0..counts[e] {
            let x = oracle.query(e);
            if !(l <= x && x <= r) {
                return Err(Error::invalid(format!(
                    "oracle returned {x} for edge {e}, outside [{l}, {r}]"
                )));
            }
            sum += x;
        }
        let mean = (sum / counts[e] as f64).clamp(l, r);
        lower[e] = l.max(mean - delta);
        upper[e] = r.min(mean + delta);
    }

    let contracted = WeightSpace::new(lower, upper)?;
    let total_calls = counts.iter().sum();
    let out = solve_exact_with(g, &contracted.lower_vector(), &params.solver)?;
    Ok(SamplingOutcome {
        space: contracted,
        solution: out.solution,
        sample_counts: counts,
        delta,
        base_density: base,
        total_calls,
        sampled_edges: eligible.iter().filter(|&&x| x).count(),
        solution_density: out.density,
    })
}

/// Densest subgraph at a weight vector drawn uniformly from the box.
pub fn baseline_random(g: &Graph, space: &WeightSpace, seed: u64) -> Result<DensestResult> {
    baseline_random_with(g, space, seed, &SolveOptions::default())
}

pub fn baseline_random_with(
    g: &Graph,
    space: &WeightSpace,
    seed: u64,
    opts: &SolveOptions,
) -> Result<DensestResult> {
    space.check_graph(g)?;
    let w = random_point(space, seed)?;
    solve_exact_with(g, &w, opts)
}

/// Uniform point of the box from the baseline stream of `seed`.
pub fn random_point(space: &WeightSpace, seed: u64) -> Result<WeightVector> {
    let mut rng = crate::seeds::stream_rng(seed, Stream::Baseline, 0);
    let values = (0..space.len())
        .map(|e| {
            let (l, r) = space.interval(e);
            uniform_closed(&mut rng, l, r)
        })
        .collect::<Result<Vec<_>>>()?;
    WeightVector::new(values)
}

/// `f_w(S) / f_w(S*_w)` at a fixed weight vector.
pub fn ratio_at(g: &Graph, w_ref: &WeightVector, s: &VertexSet) -> Result<f64> {
    let optimum = solve_exact_with(g, w_ref, &SolveOptions::default())?.density;
    ratio_with_optimum(g, w_ref, s, optimum)
}

/// [`ratio_at`] with the optimal density already known.
pub fn ratio_with_optimum(g: &Graph, w_ref: &WeightVector, s: &VertexSet, optimum: f64) -> Result<f64> {
    let value = density(g, w_ref, s)?;
    if optimum == 0.0 {
        if value == 0.0 {
            return Ok(1.0);
        }
        return Err(Error::domain("zero optimal density with a positive numerator"));
    }
    Ok(value / optimum)
}

/// The single-spike weight vector used to bound robust ratios from above:
/// every edge at its lower bound except one edge at its upper bound. The
/// spiked edge is the smallest-id edge not induced by `s`, or edge 0 when
/// `s` induces every edge (in particular when `s = V`).
pub fn adversarial_spike(g: &Graph, space: &WeightSpace, s: &VertexSet) -> Result<WeightVector> {
    space.check_graph(g)?;
    let mut w = space.lower().to_vec();
    if g.edge_count() == 0 {
        return WeightVector::new(w);
    }
    let spike = if s.is_full() {
        0
    } else {
        g.edges()
            .iter()
            .position(|&(u, v)| !(s.contains(u) && s.contains(v)))
            .unwrap_or(0)
    };
    w[spike] = space.upper()[spike];
    WeightVector::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{solve_bruteforce, solve_exact};

    struct Constant {
        values: Vec<f64>,
        calls: Vec<u64>,
    }

    impl SamplingOracle for Constant {
        fn query(&mut self, e: usize) -> f64 {
            self.calls[e] += 1;
            self.values[e]
        }
        fn calls(&self, e: usize) -> u64 {
            self.calls[e]
        }
        fn total_calls(&self) -> u64 {
            self.calls.iter().sum()
        }
    }

    fn triangle() -> Graph {
        Graph::complete(3)
    }

    #[test]
    fn algorithm1_on_degenerate_space_is_plain_solve() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let w = WeightVector::new(vec![0.3, 0.9, 0.2, 1.4]).unwrap();
        let a = algorithm1_basic(&g, &WeightSpace::degenerate(&w)).unwrap();
        let b = solve_exact(&g, &w).unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.density, b.density);
    }

    #[test]
    fn algorithm1_triangle_with_one_wide_interval() {
        let g = triangle();
        let space = WeightSpace::new(vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 2.0]).unwrap();
        let a = algorithm1_basic(&g, &space).unwrap();
        let brute = solve_bruteforce(&g, &WeightVector::unit(3)).unwrap();
        assert_eq!(a.solution.len(), 3);
        assert_eq!(a.density, brute.density);
        assert_eq!(theorem2_bound(&space).unwrap(), 0.5);
    }

    #[test]
    fn theorem2_bound_examples() {
        let unit = WeightSpace::new(vec![1.0; 3], vec![1.0; 3]).unwrap();
        assert_eq!(theorem2_bound(&unit).unwrap(), 1.0);
        let s = WeightSpace::new(vec![1.0, 1.0], vec![2.0, 4.0]).unwrap();
        assert_eq!(theorem2_bound(&s).unwrap(), 0.25);
        let zero = WeightSpace::new(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(theorem2_bound(&zero), Err(Error::Domain(_))));
    }

    #[test]
    fn sample_count_closed_form() {
        // m = 78, gamma = 0.1, eps = 0.5, width 0.5, base 1.0.
        let t = required_samples(78, 0.5, 0.1, 0.5, 1.0).ceil();
        assert_eq!(t, (78.0 * 1560f64.ln()).ceil());
        assert_eq!(t, 574.0);
    }

    #[test]
    fn fixed_edges_are_never_sampled() {
        let g = triangle();
        let space = WeightSpace::new(vec![0.5, 0.2, 0.3], vec![0.5, 0.6, 0.3]).unwrap();
        let mut oracle = Constant {
            values: vec![0.5, 0.4, 0.3],
            calls: vec![0; 3],
        };
        let out = algorithm2_sampling(&g, &space, &mut oracle, &SamplingParams::new(0.1, 0.5)).unwrap();
        assert_eq!(out.sample_counts[0], 0);
        assert_eq!(out.sample_counts[2], 0);
        assert!(out.sample_counts[1] > 0);
        assert_eq!(oracle.calls(0), 0);
        assert_eq!(out.space.interval(0), (0.5, 0.5));
        assert_eq!(out.space.interval(2), (0.3, 0.3));
        assert!(out.space.is_subset_of(&space));
        assert!(out.space.width(1) <= 2.0 * out.delta + 1e-15);
        assert_eq!(out.total_calls, out.sample_counts.iter().sum::<u64>());
    }

    #[test]
    fn sampling_preconditions() {
        let g = triangle();
        let zero = WeightSpace::new(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let mut oracle = Constant {
            values: vec![0.5; 3],
            calls: vec![0; 3],
        };
        let p = SamplingParams::new(0.1, 0.5);
        assert!(matches!(
            algorithm2_sampling(&g, &zero, &mut oracle, &p),
            Err(Error::Precondition(_))
        ));
        let space = WeightSpace::new(vec![0.1; 3], vec![1.0; 3]).unwrap();
        for (gamma, eps) in [(0.0, 0.5), (1.0, 0.5), (0.1, 0.0)] {
            assert!(matches!(
                algorithm2_sampling(&g, &space, &mut oracle, &SamplingParams::new(gamma, eps)),
                Err(Error::Precondition(_))
            ));
        }
    }

    #[test]
    fn budget_cap_reports_edge() {
        let g = triangle();
        let space = WeightSpace::new(vec![0.001, 0.001, 0.001], vec![0.001, 1.0, 1.0]).unwrap();
        let mut oracle = Constant {
            values: vec![0.001; 3],
            calls: vec![0; 3],
        };
        let mut p = SamplingParams::new(0.1, 0.5);
        p.sample_cap = 1000;
        match algorithm2_sampling(&g, &space, &mut oracle, &p) {
            Err(Error::BudgetExceeded { edge, cap, .. }) => {
                assert_eq!(edge, 1);
                assert_eq!(cap, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert_eq!(oracle.total_calls(), 0);
    }

    #[test]
    fn baseline_is_deterministic_and_degenerate_safe() {
        let g = Graph::complete(4);
        let w = WeightVector::new(vec![0.1, 0.5, 0.2, 0.9, 0.3, 0.4]).unwrap();
        let fixed = WeightSpace::degenerate(&w);
        let expected = solve_exact(&g, &w).unwrap();
        for seed in 0..5 {
            assert_eq!(baseline_random(&g, &fixed, seed).unwrap(), expected);
        }
        let space = WeightSpace::new(vec![0.0; 6], vec![1.0; 6]).unwrap();
        assert_eq!(
            baseline_random(&g, &space, 42).unwrap(),
            baseline_random(&g, &space, 42).unwrap()
        );
        let r = baseline_random(&g, &space, 42).unwrap();
        let sampled = random_point(&space, 42).unwrap();
        assert!(r.density >= sampled.max() / 2.0 - 1e-12);
    }

    #[test]
    fn ratio_examples() {
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let w = WeightVector::unit(2);
        let r = ratio_at(&path, &w, &VertexSet::from_ids(3, [0, 1])).unwrap();
        assert!((r - 0.75).abs() < 1e-12);
        let opt = solve_exact(&path, &w).unwrap();
        assert_eq!(ratio_at(&path, &w, &opt.solution).unwrap(), 1.0);
        let z = WeightVector::uniform(2, 0.0);
        assert_eq!(ratio_at(&path, &z, &VertexSet::from_ids(3, [2])).unwrap(), 1.0);
    }

    #[test]
    fn spike_examples() {
        // Path 0-1-2-3 with l = 0, r = 1.
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let space = WeightSpace::new(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let s = VertexSet::from_ids(4, [0, 1, 2]);
        let w = adversarial_spike(&g, &space, &s).unwrap();
        assert_eq!(w.as_slice(), &[0.0, 0.0, 1.0]);
        assert_eq!(ratio_at(&g, &w, &s).unwrap(), 0.0);

        let all = VertexSet::full(4);
        let w = adversarial_spike(&g, &space, &all).unwrap();
        assert_eq!(w.as_slice(), &[1.0, 0.0, 0.0]);
        assert!(ratio_at(&g, &w, &all).unwrap() <= 2.0 / 4.0 + 1e-12);

        let point = WeightVector::new(vec![0.2, 0.4, 0.6]).unwrap();
        let w = adversarial_spike(&g, &WeightSpace::degenerate(&point), &s).unwrap();
        assert_eq!(w, point);
    }

    #[test]
    fn spike_falls_back_when_only_isolated_vertices_are_missing() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let space = WeightSpace::new(vec![0.1], vec![0.7]).unwrap();
        let s = VertexSet::from_ids(3, [0, 1]);
        let w = adversarial_spike(&g, &space, &s).unwrap();
        assert_eq!(w.as_slice(), &[0.7]);
    }
}

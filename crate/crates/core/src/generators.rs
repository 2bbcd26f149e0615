//! Random instance models and the simulated sampling oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::solve_exact;
use crate::graph::{Graph, VertexSet, WeightSpace, WeightVector};
use crate::robust::SamplingOracle;
use crate::seeds::{derive_seed, stream_rng, uniform_closed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Planted,
    Knockout,
    Manual,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Planted => "planted",
            ModelTag::Knockout => "knockout",
            ModelTag::Manual => "manual",
        }
    }
}

/// A graph with an uncertainty box and the hidden true weights inside it.
#[derive(Debug, Clone)]
pub struct UncertainInstance {
    pub graph: Graph,
    pub space: WeightSpace,
    pub w_true: WeightVector,
    /// Planted set `S'` or knocked-out set `S*`.
    pub planted: Option<VertexSet>,
    pub model: ModelTag,
    pub seed: u64,
}

impl UncertainInstance {
    pub fn new(
        graph: Graph,
        space: WeightSpace,
        w_true: WeightVector,
        planted: Option<VertexSet>,
        model: ModelTag,
        seed: u64,
    ) -> Result<Self> {
        space.check_graph(&graph)?;
        w_true.check_graph(&graph)?;
        if !space.contains(&w_true) {
            return Err(Error::invalid("true weights lie outside the weight space"));
        }
        if let Some(s) = &planted {
            if s.universe() != graph.vertex_count() {
                return Err(Error::invalid("planted set over the wrong vertex universe"));
            }
        }
        Ok(UncertainInstance {
            graph,
            space,
            w_true,
            planted,
            model,
            seed,
        })
    }
}

/// `G(n, p)`: every unordered pair independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::domain("Erdős–Rényi graph needs n >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedParams {
    pub n: usize,
    pub p: f64,
    /// Size of the planted set `S'`.
    pub n_prime: usize,
    /// Separation in `[0, 0.9]`.
    pub alpha: f64,
}

/// Planted uncertain dense subgraph model.
///
/// Edges inside the planted set get `[rand(0.1+α, 1), 1]` and true weight
/// `rand(max(l, 0.9), 1)`; all other edges get `[0.1, rand(0.1, 1−α)]` and
/// true weight `rand(0.1, min(r, 0.2))`. The planted set is a seeded uniform
/// choice of `n'` vertices.
pub fn gen_planted(params: &PlantedParams, seed: u64) -> Result<UncertainInstance> {
    let PlantedParams {
        n,
        p,
        n_prime,
        alpha,
    } = *params;
    if !(0.0..=0.9).contains(&alpha) {
        return Err(Error::domain(format!("alpha = {alpha} outside [0, 0.9]")));
    }
    if n_prime > n {
        return Err(Error::domain(format!("planted size {n_prime} exceeds n = {n}")));
    }
    let graph = gen_erdos_renyi(n, p, derive_seed(seed, Stream::Graph, 0))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, Stream::Planted, 0));
    let planted = VertexSet::from_ids(n, order[..n_prime].iter().copied());

    let inside: Vec<bool> = graph
        .edges()
        .iter()
        .map(|&(u, v)| planted.contains(u) && planted.contains(v))
        .collect();
    let mut interval_rng = stream_rng(seed, Stream::Intervals, 0);
    let mut truth_rng = stream_rng(seed, Stream::Truth, 0);
    let m = graph.edge_count();
    let (mut lower, mut upper, mut truth) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for e in 0..m {
        if inside[e] {
            lower[e] = uniform_closed(&mut interval_rng, 0.1 + alpha, 1.0)?;
            upper[e] = 1.0;
            truth[e] = uniform_closed(&mut truth_rng, lower[e].max(0.9), 1.0)?;
        } else {
            lower[e] = 0.1;
            upper[e] = uniform_closed(&mut interval_rng, 0.1, 1.0 - alpha)?;
            truth[e] = uniform_closed(&mut truth_rng, 0.1, upper[e].min(0.2))?;
        }
    }
    let space = WeightSpace::for_graph(&graph, lower, upper)?;
    let w_true = WeightVector::for_graph(&graph, truth)?;
    UncertainInstance::new(graph, space, w_true, Some(planted), ModelTag::Planted, seed)
}

/// Knockout densest subgraph model on a fixed graph.
///
/// `S*` is a densest subgraph of `g` with unit weights. Its edges get
/// `[0.1, rand(0.1, 0.9)]` and true weight `rand(0.1, min(r, 0.11))`; all
/// other edges get `[rand(0.2, 1), 1]` and true weight `rand(max(l, 0.99), 1)`.
pub fn gen_knockout(g: &Graph, seed: u64) -> Result<UncertainInstance> {
    if g.vertex_count() == 0 {
        return Err(Error::domain("knockout model needs a nonempty graph"));
    }
    let star = solve_exact(g, &WeightVector::unit(g.edge_count()))?.solution;
    let mut interval_rng = stream_rng(seed, Stream::Intervals, 0);
    let mut truth_rng = stream_rng(seed, Stream::Truth, 0);
    let m = g.edge_count();
    let (mut lower, mut upper, mut truth) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if star.contains(u) && star.contains(v) {
            lower[e] = 0.1;
            upper[e] = uniform_closed(&mut interval_rng, 0.1, 0.9)?;
            truth[e] = uniform_closed(&mut truth_rng, 0.1, upper[e].min(0.11))?;
        } else {
            lower[e] = uniform_closed(&mut interval_rng, 0.2, 1.0)?;
            upper[e] = 1.0;
            truth[e] = uniform_closed(&mut truth_rng, lower[e].max(0.99), 1.0)?;
        }
    }
    let space = WeightSpace::for_graph(g, lower, upper)?;
    let w_true = WeightVector::for_graph(g, truth)?;
    UncertainInstance::new(g.clone(), space, w_true, Some(star), ModelTag::Knockout, seed)
}

/// Oracle returning `rand(w_e − h_e, w_e + h_e)` with
/// `h_e = min(w_e − l_e, r_e − w_e)`: unbiased and supported in `[l_e, r_e]`.
///
/// Each edge owns an independent ChaCha stream keyed by `(seed, e)`, so the
/// values seen for an edge do not depend on how queries are interleaved.
#[derive(Debug, Clone)]
pub struct SimulatedOracle {
    truth: Vec<f64>,
    half_width: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    key: u64,
    positions: Vec<u128>,
    current: Option<(usize, ChaCha8Rng)>,
    calls: Vec<u64>,
}

impl SimulatedOracle {
    pub fn new(space: &WeightSpace, w_true: &WeightVector, seed: u64) -> Result<Self> {
        if !space.contains(w_true) {
            return Err(Error::invalid("true weights lie outside the weight space"));
        }
        let m = space.len();
        let truth = w_true.as_slice().to_vec();
        let half_width = (0..m)
            .map(|e| {
                let (l, r) = space.interval(e);
                (truth[e] - l).min(r - truth[e]).max(0.0)
            })
            .collect();
        Ok(SimulatedOracle {
            truth,
            half_width,
            lower: space.lower().to_vec(),
            upper: space.upper().to_vec(),
            key: derive_seed(seed, Stream::Oracle, 0),
            positions: vec![0; m],
            current: None,
            calls: vec![0; m],
        })
    }

    fn rng_for(&mut self, e: usize) -> &mut ChaCha8Rng {
        let switch = !matches!(self.current, Some((cur, _)) if cur == e);
        if switch {
            if let Some((prev, rng)) = self.current.take() {
                self.positions[prev] = rng.get_word_pos();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(self.key);
            rng.set_stream(e as u64);
            rng.set_word_pos(self.positions[e]);
            self.current = Some((e, rng));
        }
        &mut self.current.as_mut().expect("stream selected").1
    }

    pub fn true_weight(&self, e: usize) -> f64 {
        self.truth[e]
    }

    pub fn half_width(&self, e: usize) -> f64 {
        self.half_width[e]
    }
}

impl SamplingOracle for SimulatedOracle {
    fn query(&mut self, e: usize) -> f64 {
        self.calls[e] += 1;
        let h = self.half_width[e];
        if h == 0.0 {
            return self.truth[e];
        }
        let u: f64 = self.rng_for(e).gen();
        let x = self.truth[e] - h + 2.0 * h * u;
        x.clamp(self.lower[e], self.upper[e])
    }

    fn calls(&self, e: usize) -> u64 {
        self.calls[e]
    }

    fn total_calls(&self) -> u64 {
        self.calls.iter().sum()
    }
}

pub fn make_simulated_oracle(inst: &UncertainInstance, seed: u64) -> Result<SimulatedOracle> {
    SimulatedOracle::new(&inst.space, &inst.w_true, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(gen_erdos_renyi(20, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gen_erdos_renyi(20, 1.0, 1).unwrap().edge_count(), 190);
        assert!(gen_erdos_renyi(20, 1.5, 1).is_err());
        assert!(gen_erdos_renyi(20, f64::NAN, 1).is_err());
        assert!(gen_erdos_renyi(0, 0.5, 1).is_err());
    }

    #[test]
    fn er_edge_count_is_binomial() {
        // n = 500, p = 0.01: mean 1247.5, sd sqrt(124750 * 0.01 * 0.99).
        let sd = (124_750.0f64 * 0.01 * 0.99).sqrt();
        for seed in 0..5 {
            let m = gen_erdos_renyi(500, 0.01, seed).unwrap().edge_count() as f64;
            assert!((m - 1247.5).abs() <= 5.0 * sd, "m = {m}");
        }
    }

    #[test]
    fn er_is_deterministic() {
        assert_eq!(gen_erdos_renyi(50, 0.2, 9).unwrap(), gen_erdos_renyi(50, 0.2, 9).unwrap());
    }

    #[test]
    fn planted_alpha_09_is_degenerate() {
        let params = PlantedParams { n: 80, p: 0.2, n_prime: 20, alpha: 0.9 };
        let inst = gen_planted(&params, 3).unwrap();
        let s = inst.planted.as_ref().unwrap();
        assert_eq!(s.len(), 20);
        let mut inside_edges = 0;
        for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
            if s.contains(u) && s.contains(v) {
                inside_edges += 1;
                assert_eq!(inst.space.interval(e), (1.0, 1.0));
            } else {
                assert_eq!(inst.space.interval(e), (0.1, 0.1));
            }
        }
        assert!(inside_edges > 0);
        assert!(inst.space.contains(&inst.w_true));
    }

    #[test]
    fn planted_alpha_zero_lower_bounds_average_055() {
        let params = PlantedParams { n: 200, p: 0.5, n_prime: 100, alpha: 0.0 };
        let inst = gen_planted(&params, 11).unwrap();
        let s = inst.planted.as_ref().unwrap();
        let lows: Vec<f64> = inst
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| s.contains(u) && s.contains(v))
            .map(|(e, _)| inst.space.lower()[e])
            .collect();
        let mean = lows.iter().sum::<f64>() / lows.len() as f64;
        // Uniform on [0.1, 1.0]: sd 0.9/sqrt(12) per draw.
        let se = 0.9 / 12f64.sqrt() / (lows.len() as f64).sqrt();
        assert!((mean - 0.55).abs() < 4.0 * se, "mean {mean}, n {}", lows.len());
    }

    #[test]
    fn planted_rejects_bad_parameters() {
        let bad_alpha = PlantedParams { n: 10, p: 0.5, n_prime: 5, alpha: 0.95 };
        assert!(gen_planted(&bad_alpha, 0).is_err());
        let bad_size = PlantedParams { n: 10, p: 0.5, n_prime: 11, alpha: 0.5 };
        assert!(gen_planted(&bad_size, 0).is_err());
    }

    #[test]
    fn knockout_true_weights_are_extreme() {
        let g = gen_erdos_renyi(60, 0.15, 4).unwrap();
        let inst = gen_knockout(&g, 8).unwrap();
        let star = inst.planted.as_ref().unwrap();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if star.contains(u) && star.contains(v) {
                assert!(inst.w_true[e] <= 0.11);
                assert_eq!(inst.space.lower()[e], 0.1);
            } else {
                assert!(inst.w_true[e] >= 0.99);
                assert_eq!(inst.space.upper()[e], 1.0);
            }
        }
        assert!(inst.space.contains(&inst.w_true));
    }

    #[test]
    fn oracle_degenerate_edge_returns_truth() {
        let space = WeightSpace::new(vec![0.4, 0.1], vec![0.4, 0.9]).unwrap();
        let w = WeightVector::new(vec![0.4, 0.3]).unwrap();
        let mut oracle = SimulatedOracle::new(&space, &w, 5).unwrap();
        for _ in 0..100 {
            assert_eq!(oracle.query(0), 0.4);
            let x = oracle.query(1);
            // h = min(0.2, 0.6) = 0.2.
            assert!((0.1..=0.5).contains(&x));
        }
        assert_eq!(oracle.calls(0), 100);
        assert_eq!(oracle.total_calls(), 200);
    }

    #[test]
    fn oracle_streams_ignore_interleaving() {
        let space = WeightSpace::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        let mut a = SimulatedOracle::new(&space, &w, 1).unwrap();
        let mut b = SimulatedOracle::new(&space, &w, 1).unwrap();
        let seq_a: Vec<f64> = (0..10).map(|_| a.query(0)).collect();
        let mut seq_b = Vec::new();
        for _ in 0..10 {
            seq_b.push(b.query(0));
            b.query(1);
        }
        assert_eq!(seq_a, seq_b);
        let mut c = SimulatedOracle::new(&space, &w, 2).unwrap();
        assert_ne!(c.query(0), seq_a[0]);
    }
}

//! Exact weighted densest subgraph.
//!
//! [`solve_exact`] runs a Dinkelbach iteration over Goldberg's cut network:
//! for a guess `λ` the network has arcs `s → v` with capacity `deg_w(v)`,
//! `v → t` with capacity `2λ`, and `u ↔ v` with capacity `w_e` per edge. A cut
//! `({s} ∪ S, ·)` costs `2·w(V) − 2·w(S) + 2λ|S|`, so the source side of a
//! minimum cut maximizes `w(S) − λ|S|`. Each round replaces `λ` by the density
//! of the extracted set until no set beats it.
//!
//! [`solve_bruteforce`] enumerates every nonempty subset and is the oracle the
//! flow solver is tested against.

use crate::approx::{greedy_peel, prune_below};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{density, induced_weight_unchecked, weighted_degrees, Graph, Subgraph, VertexSet, WeightVector};

/// Largest graph [`solve_bruteforce`] accepts.
pub const BRUTEFORCE_LIMIT: usize = 25;

/// Default absolute tolerance for solver comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Output of every densest-subgraph solver in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct DensestResult {
    /// Nonempty vertex set, in the ids of the graph that was solved.
    pub solution: VertexSet,
    /// `density(g, w, solution)`.
    pub density: f64,
    /// Parametric (max-flow) rounds; zero for non-parametric solvers.
    pub iterations: usize,
    /// Vertex count before preprocessing.
    pub preprocessed_from: usize,
    /// Vertex count the core solve actually ran on.
    pub reduced_to: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Relative stopping tolerance: stop when a round improves the density by
    /// at most `tol · (1 + λ)`.
    pub tol: f64,
    /// Apply the degree-threshold reduction before the flow rounds.
    pub preprocess: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_TOL,
            preprocess: true,
        }
    }
}

/// Exact densest subgraph with default options.
pub fn solve_exact(g: &Graph, w: &WeightVector) -> Result<DensestResult> {
    solve_exact_with(g, w, &SolveOptions::default())
}

pub fn solve_exact_with(g: &Graph, w: &WeightVector, opts: &SolveOptions) -> Result<DensestResult> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::domain("densest subgraph of a graph with no vertices"));
    }
    w.check_graph(g)?;
    if w.total() == 0.0 {
        return Ok(DensestResult {
            solution: VertexSet::from_ids(n, [0]),
            density: 0.0,
            iterations: 0,
            preprocessed_from: n,
            reduced_to: n,
        });
    }

    let peel = greedy_peel(g, w)?;
    let reduced = if opts.preprocess {
        let keep = prune_below(g, w.as_slice(), peel.density);
        if keep.is_empty() {
            Subgraph::identity(g)
        } else {
            g.induced_subgraph(&keep)
        }
    } else {
        Subgraph::identity(g)
    };
    let sub_w = reduced.restrict_weights(w);

    let mut best = peel.solution;
    let mut lambda = peel.density;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let candidate = max_gain_set(&reduced.graph, sub_w.as_slice(), lambda);
        if candidate.is_empty() {
            break;
        }
        let d = induced_weight_unchecked(&reduced.graph, sub_w.as_slice(), &candidate)
            / candidate.len() as f64;
        if d <= lambda + opts.tol * (1.0 + lambda) {
            break;
        }
        lambda = d;
        best = reduced.lift(&candidate);
    }

    let value = density(g, w, &best)?;
    Ok(DensestResult {
        solution: best,
        density: value,
        iterations,
        preprocessed_from: n,
        reduced_to: reduced.graph.vertex_count(),
    })
}

/// Source side (minus the source) of a minimum cut in the network for `λ`,
/// i.e. a set maximizing `w(S) − λ|S|`; empty when no set has positive gain.
fn max_gain_set(g: &Graph, w: &[f64], lambda: f64) -> VertexSet {
    let n = g.vertex_count();
    let (source, sink) = (n, n + 1);
    let deg = weighted_degrees(g, w);
    let scale = deg.iter().copied().fold(lambda, f64::max).max(1.0);
    let mut net = FlowNetwork::new(n + 2, 1e-13 * scale);
    for (v, &d) in deg.iter().enumerate() {
        if d > 0.0 {
            net.add_arc(source, v, d);
        }
        net.add_arc(v, sink, 2.0 * lambda);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if w[e] > 0.0 {
            net.add_pair(u, v, w[e], w[e]);
        }
    }
    net.max_flow(source, sink);
    let mut side = net.source_side(source);
    side.truncate(n);
    VertexSet::from_mask(side)
}

/// Exhaustive search over all `2^n − 1` nonempty subsets.
pub fn solve_bruteforce(g: &Graph, w: &WeightVector) -> Result<DensestResult> {
    let n = g.vertex_count();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::domain("densest subgraph of a graph with no vertices"));
    }
    w.check_graph(g)?;

    // Gray-code walk: one vertex enters or leaves per step.
    let mut inside = vec![false; n];
    let mut weight = 0.0;
    let mut size = 0usize;
    let mut best_mask: u32 = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 1u32..(1u32 << n) {
        let v = i.trailing_zeros() as usize;
        let touching: f64 = g
            .neighbors(v)
            .iter()
            .filter(|&&(u, _)| inside[u])
            .map(|&(_, e)| w[e])
            .sum();
        if inside[v] {
            inside[v] = false;
            weight -= touching;
            size -= 1;
        } else {
            inside[v] = true;
            weight += touching;
            size += 1;
        }
        let approx = weight / size as f64;
        if approx > best - 1e-9 {
            // Re-evaluate exactly so accumulated rounding never picks the set.
            let gray = i ^ (i >> 1);
            let set = mask_to_set(n, gray);
            let exact = induced_weight_unchecked(g, w.as_slice(), &set) / set.len() as f64;
            if exact > best {
                best = exact;
                best_mask = gray;
            }
        }
    }
    Ok(DensestResult {
        solution: mask_to_set(n, best_mask),
        density: best,
        iterations: 0,
        preprocessed_from: n,
        reduced_to: n,
    })
}

fn mask_to_set(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_ids(n, (0..n).filter(|&v| mask & (1 << v) != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn path_is_its_own_densest_subgraph() {
        let r = solve_exact(&path3(), &WeightVector::unit(2)).unwrap();
        assert_eq!(r.solution.as_slice(), &[0, 1, 2]);
        assert!((r.density - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn clique_k5() {
        let g = Graph::complete(5);
        let r = solve_exact(&g, &WeightVector::unit(10)).unwrap();
        assert_eq!(r.solution.len(), 5);
        assert!((r.density - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bruteforce_examples() {
        let tri = Graph::complete(3);
        assert_eq!(solve_bruteforce(&tri, &WeightVector::unit(3)).unwrap().density, 1.0);
        let edge = Graph::new(2, [(0, 1)]).unwrap();
        let r = solve_bruteforce(&edge, &WeightVector::new(vec![5.0]).unwrap()).unwrap();
        assert_eq!(r.density, 2.5);
        assert_eq!(r.solution.len(), 2);
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let r = solve_bruteforce(&c4, &WeightVector::unit(4)).unwrap();
        assert_eq!(r.density, 1.0);
        assert_eq!(r.solution.len(), 4);
    }

    #[test]
    fn bruteforce_refuses_large_graphs() {
        let g = Graph::empty(26);
        assert!(matches!(
            solve_bruteforce(&g, &WeightVector::unit(0)),
            Err(Error::TooLarge { n: 26, .. })
        ));
    }

    #[test]
    fn empty_graph_is_domain_error() {
        let g = Graph::empty(0);
        assert!(matches!(
            solve_exact(&g, &WeightVector::unit(0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn all_zero_weights_give_single_vertex() {
        let g = Graph::complete(4);
        let r = solve_exact(&g, &WeightVector::uniform(6, 0.0)).unwrap();
        assert_eq!(r.solution.len(), 1);
        assert_eq!(r.density, 0.0);
    }

    #[test]
    fn finds_dense_core_behind_a_long_tail() {
        // K5 on 0..5 with a path 4-5-6-...-19 attached.
        let mut edges: Vec<(usize, usize)> = Graph::complete(5).edges().to_vec();
        edges.extend((4..19).map(|v| (v, v + 1)));
        let g = Graph::new(20, edges).unwrap();
        let w = WeightVector::unit(g.edge_count());
        let r = solve_exact(&g, &w).unwrap();
        assert_eq!(r.solution.as_slice(), &[0, 1, 2, 3, 4]);
        assert!(r.reduced_to <= 6);
        let plain = solve_exact_with(&g, &w, &SolveOptions { preprocess: false, ..Default::default() }).unwrap();
        assert!((plain.density - 2.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_optimum_differs_from_unweighted() {
        // A heavy edge beats a light triangle.
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let w = WeightVector::new(vec![0.1, 0.1, 0.1, 3.0]).unwrap();
        let r = solve_exact(&g, &w).unwrap();
        assert_eq!(r.solution.as_slice(), &[3, 4]);
        assert!((r.density - 1.5).abs() < 1e-12);
    }

    #[test]
    fn disconnected_isolated_vertices() {
        let g = Graph::new(6, [(0, 1)]).unwrap();
        let r = solve_exact(&g, &WeightVector::unit(1)).unwrap();
        assert_eq!(r.solution.as_slice(), &[0, 1]);
    }
}

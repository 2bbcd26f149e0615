//! Greedy peeling and degree-threshold preprocessing.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::exact::DensestResult;
use crate::graph::{density, weighted_degrees, Graph, Subgraph, VertexSet, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// The full peeling run: removal order and the density of every prefix.
#[derive(Debug, Clone)]
pub struct PeelProfile {
    /// Vertices in the order they were removed.
    pub order: Vec<usize>,
    /// `densities[k]` is the density of the set left after `k` removals,
    /// for `k = 0..n`.
    pub densities: Vec<f64>,
}

impl PeelProfile {
    /// Number of removals giving the densest prefix (earliest on ties).
    pub fn best_prefix(&self) -> usize {
        let mut best = 0;
        for (k, &d) in self.densities.iter().enumerate() {
            if d > self.densities[best] {
                best = k;
            }
        }
        best
    }

    /// The vertex set left after `removed` removals.
    pub fn remaining(&self, n: usize, removed: usize) -> VertexSet {
        let mut mask = vec![true; n];
        for &v in &self.order[..removed] {
            mask[v] = false;
        }
        VertexSet::from_mask(mask)
    }
}

/// Repeatedly removes a vertex of minimum weighted degree (smallest id on
/// ties) and records every intermediate density.
pub fn peel_profile(g: &Graph, w: &WeightVector) -> Result<PeelProfile> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::domain("cannot peel a graph with no vertices"));
    }
    w.check_graph(g)?;
    let mut deg = weighted_degrees(g, w.as_slice());
    let mut heap: BinaryHeap<Reverse<Key>> =
        (0..n).map(|v| Reverse(Key(deg[v], v))).collect();
    let mut removed = vec![false; n];
    let mut total = w.total();
    let mut order = Vec::with_capacity(n);
    let mut densities = Vec::with_capacity(n);
    densities.push(total / n as f64);

    while let Some(Reverse(Key(d, v))) = heap.pop() {
        if removed[v] || d != deg[v] {
            continue;
        }
        removed[v] = true;
        order.push(v);
        total -= deg[v];
        for &(u, e) in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= w[e];
                heap.push(Reverse(Key(deg[u], u)));
            }
        }
        let left = n - order.len();
        if left > 0 {
            densities.push(total.max(0.0) / left as f64);
        }
    }
    Ok(PeelProfile { order, densities })
}

/// Greedy peeling: the densest set in the peeling sequence, a 1/2-approximation
/// of the optimum.
pub fn greedy_peel(g: &Graph, w: &WeightVector) -> Result<DensestResult> {
    let profile = peel_profile(g, w)?;
    let n = g.vertex_count();
    let solution = profile.remaining(n, profile.best_prefix());
    let value = density(g, w, &solution)?;
    Ok(DensestResult {
        solution,
        density: value,
        iterations: 0,
        preprocessed_from: n,
        reduced_to: n,
    })
}

/// Vertices that survive iterated removal of every vertex whose weighted
/// degree (under `w`, in the shrinking graph) is strictly below `threshold`.
pub fn prune_below(g: &Graph, w: &[f64], threshold: f64) -> VertexSet {
    let n = g.vertex_count();
    let mut deg = weighted_degrees(g, w);
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] < threshold).collect();
    for &v in &queue {
        alive[v] = false;
    }
    while let Some(v) = queue.pop_front() {
        for &(u, e) in g.neighbors(v) {
            if alive[u] {
                deg[u] -= w[e];
                if deg[u] < threshold {
                    alive[u] = false;
                    queue.push_back(u);
                }
            }
        }
    }
    VertexSet::from_mask(alive)
}

/// Removes vertices whose weighted degree is strictly below the greedy-peeling
/// density, iterated to a fixed point. Every optimal densest subgraph
/// survives, so the optimal density is unchanged. Returns the identity
/// reduction for graphs of zero total weight.
pub fn balalau_preprocess(g: &Graph, w: &WeightVector) -> Result<Subgraph> {
    let peel = greedy_peel(g, w)?;
    if w.total() == 0.0 {
        return Ok(Subgraph::identity(g));
    }
    let keep = prune_below(g, w.as_slice(), peel.density);
    if keep.is_empty() {
        return Ok(Subgraph::identity(g));
    }
    Ok(g.induced_subgraph(&keep))
}

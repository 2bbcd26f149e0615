//! Graphs, weight vectors, interval weight spaces and the density function.
//!
//! Vertices and edges are dense `usize` ids. Edges are stored with their
//! endpoints normalized so that `u < v`; the edge id is the position in the
//! edge list and indexes every per-edge array in the crate.

use std::collections::{HashSet, VecDeque};
use std::ops::Index;

use crate::error::{Error, Result};

/// Simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate pairs and endpoints
    /// outside `0..n`. Edge ids follow the order of `edges`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::new();
        let mut seen = HashSet::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge {i} ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("edge {i} is a self-loop on {u}")));
            }
            let pair = (u.min(v), u.max(v));
            if !seen.insert(pair) {
                return Err(Error::invalid(format!(
                    "edge {i} duplicates {{{}, {}}}",
                    pair.0, pair.1
                )));
            }
            normalized.push(pair);
        }
        let mut adjacency = vec![Vec::new(); n];
        for (e, &(u, v)) in normalized.iter().enumerate() {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        Ok(Graph {
            n,
            edges: normalized,
            adjacency,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Subgraph induced by `set`, with maps back to the parent's ids.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Subgraph {
        let vertices: Vec<usize> = set.iter().collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if set.contains(u) && set.contains(v) {
                edges.push((new_id[u], new_id[v]));
                edge_map.push(e);
            }
        }
        let graph = Graph::new(vertices.len(), edges).expect("induced subgraph stays simple");
        Subgraph {
            graph,
            vertex_map: vertices,
            edge_map,
            parent_vertices: self.n,
        }
    }

    /// Connected components as sorted vertex lists, in order of their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            label[start] = id;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adjacency[u] {
                    if label[v] == usize::MAX {
                        label[v] = id;
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Largest connected component; ties go to the component containing the
    /// smallest vertex id.
    pub fn largest_component(&self) -> Subgraph {
        let components = self.components();
        let mut best: &[usize] = &[];
        for c in &components {
            if c.len() > best.len() {
                best = c;
            }
        }
        self.induced_subgraph(&VertexSet::from_ids(self.n, best.iter().copied()))
    }
}

/// A graph obtained by restricting a parent graph to a vertex subset.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    /// `vertex_map[new] = old`.
    pub vertex_map: Vec<usize>,
    /// `edge_map[new] = old`.
    pub edge_map: Vec<usize>,
    parent_vertices: usize,
}

impl Subgraph {
    /// The trivial restriction that keeps everything.
    pub fn identity(g: &Graph) -> Self {
        Subgraph {
            graph: g.clone(),
            vertex_map: g.vertices().collect(),
            edge_map: (0..g.edge_count()).collect(),
            parent_vertices: g.vertex_count(),
        }
    }

    pub fn restrict_weights(&self, w: &WeightVector) -> WeightVector {
        WeightVector(self.edge_map.iter().map(|&e| w[e]).collect())
    }

    pub fn restrict_space(&self, space: &WeightSpace) -> WeightSpace {
        WeightSpace {
            lower: self.edge_map.iter().map(|&e| space.lower[e]).collect(),
            upper: self.edge_map.iter().map(|&e| space.upper[e]).collect(),
        }
    }

    /// Maps a vertex set of the subgraph back to parent ids.
    pub fn lift(&self, set: &VertexSet) -> VertexSet {
        VertexSet::from_ids(
            self.parent_vertices,
            set.iter().map(|v| self.vertex_map[v]),
        )
    }

    pub fn parent_vertex_count(&self) -> usize {
        self.parent_vertices
    }
}

/// Subset of `0..n` with constant-time membership and sorted iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl VertexSet {
    /// Builds a set over the universe `0..n`. Ids outside the universe are
    /// a programming error and panic; duplicates are ignored.
    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; n];
        for v in ids {
            assert!(v < n, "vertex {v} outside universe of size {n}");
            mask[v] = true;
        }
        Self::from_mask(mask)
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
            .collect();
        VertexSet { mask, members }
    }

    /// Checked variant of [`VertexSet::from_ids`] for user-supplied ids.
    pub fn try_from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let ids: Vec<usize> = ids.into_iter().collect();
        if let Some(&bad) = ids.iter().find(|&&v| v >= n) {
            return Err(Error::invalid(format!("vertex {bad} outside 0..{n}")));
        }
        Ok(Self::from_ids(n, ids))
    }

    pub fn full(n: usize) -> Self {
        Self::from_mask(vec![true; n])
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.mask.len()
    }
}

/// One finite, nonnegative weight per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((e, x)) = values
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_finite() || **x < 0.0)
        {
            return Err(Error::invalid(format!(
                "weight of edge {e} is {x}; weights must be finite and nonnegative"
            )));
        }
        Ok(WeightVector(values))
    }

    /// Validates the entries and the length against `g`.
    pub fn for_graph(g: &Graph, values: Vec<f64>) -> Result<Self> {
        let w = Self::new(values)?;
        w.check_graph(g)?;
        Ok(w)
    }

    pub fn uniform(m: usize, value: f64) -> Self {
        assert!(value.is_finite() && value >= 0.0);
        WeightVector(vec![value; m])
    }

    pub fn unit(m: usize) -> Self {
        Self::uniform(m, 1.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.edge_count() {
            return Err(Error::invalid(format!(
                "weight vector has {} entries, graph has {} edges",
                self.0.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

impl Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, e: usize) -> &f64 {
        &self.0[e]
    }
}

/// The box of per-edge closed intervals `[lower_e, upper_e]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl WeightSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::invalid(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for (e, (&l, &r)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && r.is_finite() && 0.0 <= l && l <= r) {
                return Err(Error::invalid(format!(
                    "interval of edge {e} is [{l}, {r}]; need 0 <= l <= r < inf"
                )));
            }
        }
        Ok(WeightSpace { lower, upper })
    }

    pub fn for_graph(g: &Graph, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let space = Self::new(lower, upper)?;
        space.check_graph(g)?;
        Ok(space)
    }

    /// The single-point space `{w}`.
    pub fn degenerate(w: &WeightVector) -> Self {
        WeightSpace {
            lower: w.0.clone(),
            upper: w.0.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn interval(&self, e: usize) -> (f64, f64) {
        (self.lower[e], self.upper[e])
    }

    pub fn width(&self, e: usize) -> f64 {
        self.upper[e] - self.lower[e]
    }

    /// `w^- = (l_e)`.
    pub fn lower_vector(&self) -> WeightVector {
        WeightVector(self.lower.clone())
    }

    /// `w^+ = (r_e)`.
    pub fn upper_vector(&self) -> WeightVector {
        WeightVector(self.upper.clone())
    }

    pub fn contains(&self, w: &WeightVector) -> bool {
        w.len() == self.len()
            && w
                .0
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&x, (&l, &r))| l <= x && x <= r)
    }

    /// True when every interval of `self` lies inside the matching interval
    /// of `outer`.
    pub fn is_subset_of(&self, outer: &WeightSpace) -> bool {
        self.len() == outer.len()
            && (0..self.len()).all(|e| {
                outer.lower[e] <= self.lower[e]
                    && self.lower[e] <= self.upper[e]
                    && self.upper[e] <= outer.upper[e]
            })
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.len() != g.edge_count() {
            return Err(Error::invalid(format!(
                "weight space has {} intervals, graph has {} edges",
                self.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<()> {
    if s.universe() != g.vertex_count() {
        return Err(Error::invalid(format!(
            "vertex set over {} vertices used with a graph of {}",
            s.universe(),
            g.vertex_count()
        )));
    }
    Ok(())
}

/// `w(S)`: total weight of the edges with both endpoints in `s`.
pub fn induced_weight(g: &Graph, w: &WeightVector, s: &VertexSet) -> Result<f64> {
    w.check_graph(g)?;
    check_set(g, s)?;
    Ok(induced_weight_unchecked(g, w.as_slice(), s))
}

pub(crate) fn induced_weight_unchecked(g: &Graph, w: &[f64], s: &VertexSet) -> f64 {
    let mut total = 0.0;
    for u in s.iter() {
        for &(v, e) in g.neighbors(u) {
            if u < v && s.contains(v) {
                total += w[e];
            }
        }
    }
    total
}

/// `f_w(S) = w(S) / |S|`. The density of the empty set is undefined.
pub fn density(g: &Graph, w: &WeightVector, s: &VertexSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::domain("density of the empty set is undefined"));
    }
    Ok(induced_weight(g, w, s)? / s.len() as f64)
}

pub fn weighted_degree(g: &Graph, w: &WeightVector, v: usize) -> Result<f64> {
    w.check_graph(g)?;
    if v >= g.vertex_count() {
        return Err(Error::invalid(format!(
            "vertex {v} outside 0..{}",
            g.vertex_count()
        )));
    }
    Ok(g.neighbors(v).iter().map(|&(_, e)| w[e]).sum())
}

/// Weighted degree of every vertex.
pub fn weighted_degrees(g: &Graph, w: &[f64]) -> Vec<f64> {
    let mut deg = vec![0.0; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        deg[u] += w[e];
        deg[v] += w[e];
    }
    deg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn path3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(Graph::new(2, [(0, 0)]).is_err());
        assert!(Graph::new(2, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn induced_weight_examples() {
        let g = triangle();
        let w = WeightVector::unit(3);
        assert_eq!(induced_weight(&g, &w, &VertexSet::full(3)).unwrap(), 3.0);
        assert_eq!(
            induced_weight(&g, &w, &VertexSet::from_ids(3, [1])).unwrap(),
            0.0
        );
        let p = path3();
        let w = WeightVector::new(vec![0.4, 0.6]).unwrap();
        assert_eq!(
            induced_weight(&p, &w, &VertexSet::from_ids(3, [0, 1])).unwrap(),
            0.4
        );
    }

    #[test]
    fn induced_weight_dimension_mismatch() {
        let g = triangle();
        let w = WeightVector::unit(2);
        assert!(matches!(
            induced_weight(&g, &w, &VertexSet::full(3)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn density_examples() {
        let all = VertexSet::full(3);
        assert_eq!(density(&triangle(), &WeightVector::unit(3), &all).unwrap(), 1.0);
        let d = density(&path3(), &WeightVector::unit(2), &all).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
        let k4 = Graph::complete(4);
        assert_eq!(
            density(&k4, &WeightVector::unit(6), &VertexSet::full(4)).unwrap(),
            1.5
        );
    }

    #[test]
    fn density_of_empty_set_is_domain_error() {
        let s = VertexSet::from_ids(3, []);
        assert!(matches!(
            density(&triangle(), &WeightVector::unit(3), &s),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn weighted_degree_examples() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(weighted_degree(&star, &WeightVector::unit(3), 0).unwrap(), 3.0);
        let g = Graph::new(4, [(0, 1)]).unwrap();
        assert_eq!(weighted_degree(&g, &WeightVector::unit(1), 3).unwrap(), 0.0);
        // Edges 1 = {1,2} and 2 = {0,2} meet at vertex 2.
        let w = WeightVector::new(vec![0.1, 0.2, 0.3]).unwrap();
        let d = weighted_degree(&triangle(), &w, 2).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert!(weighted_degree(&g, &WeightVector::unit(1), 4).is_err());
    }

    #[test]
    fn weight_space_validation() {
        assert!(WeightSpace::new(vec![0.5], vec![0.2]).is_err());
        assert!(WeightSpace::new(vec![-0.1], vec![0.2]).is_err());
        assert!(WeightSpace::new(vec![0.0], vec![f64::INFINITY]).is_err());
        let s = WeightSpace::new(vec![0.1, 0.2], vec![0.3, 0.2]).unwrap();
        assert!(s.contains(&WeightVector::new(vec![0.2, 0.2]).unwrap()));
        assert!(!s.contains(&WeightVector::new(vec![0.4, 0.2]).unwrap()));
    }

    #[test]
    fn weights_must_be_nonnegative_and_finite() {
        assert!(WeightVector::new(vec![-1.0]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn subgraph_maps_back_to_parent() {
        let g = Graph::new(5, [(0, 1), (1, 2), (3, 4), (2, 3)]).unwrap();
        let sub = g.induced_subgraph(&VertexSet::from_ids(5, [1, 2, 3]));
        assert_eq!(sub.graph.vertex_count(), 3);
        assert_eq!(sub.edge_map, vec![1, 3]);
        let lifted = sub.lift(&VertexSet::from_ids(3, [0, 2]));
        assert_eq!(lifted.as_slice(), &[1, 3]);
    }

    #[test]
    fn largest_component() {
        let g = Graph::new(6, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let lcc = g.largest_component();
        assert_eq!(lcc.vertex_map, vec![2, 3, 4]);
        assert_eq!(lcc.graph.edge_count(), 2);
    }
}

//! Dinic's max-flow on real-valued capacities.
//!
//! Residual capacities at or below `eps` are treated as saturated, both while
//! augmenting and when extracting the source side of the minimum cut.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    rev: usize,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Vec<Arc>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
    eps: f64,
}

impl FlowNetwork {
    pub fn new(nodes: usize, eps: f64) -> Self {
        FlowNetwork {
            arcs: vec![Vec::new(); nodes],
            level: vec![-1; nodes],
            cursor: vec![0; nodes],
            eps,
        }
    }

    pub fn node_count(&self) -> usize {
        self.arcs.len()
    }

    /// Adds the arc `from -> to` with capacity `cap` and its zero-capacity
    /// reverse.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        self.add_pair(from, to, cap, 0.0);
    }

    /// Adds `a -> b` with capacity `forward` and `b -> a` with capacity
    /// `backward` as one residual pair. An undirected edge of weight `w`
    /// is `add_pair(a, b, w, w)`.
    pub fn add_pair(&mut self, a: usize, b: usize, forward: f64, backward: f64) {
        debug_assert!(a != b);
        let ra = self.arcs[b].len();
        let rb = self.arcs[a].len();
        self.arcs[a].push(Arc {
            to: b,
            cap: forward,
            rev: ra,
        });
        self.arcs[b].push(Arc {
            to: a,
            cap: backward,
            rev: rb,
        });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for arc in &self.arcs[u] {
                if arc.cap > self.eps && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    // Iterative blocking-flow DFS; recursion depth would otherwise be the
    // path length, which is unbounded on long chains.
    fn augment(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let bottleneck = path
                    .iter()
                    .map(|&(x, i)| self.arcs[x][i].cap)
                    .fold(f64::INFINITY, f64::min);
                for &(x, i) in &path {
                    let (to, rev) = (self.arcs[x][i].to, self.arcs[x][i].rev);
                    self.arcs[x][i].cap -= bottleneck;
                    self.arcs[to][rev].cap += bottleneck;
                }
                total += bottleneck;
                // Restart from the tail of the first saturated arc.
                let cut = path
                    .iter()
                    .position(|&(x, i)| self.arcs[x][i].cap <= self.eps)
                    .unwrap_or(0);
                path.truncate(cut);
                u = path.last().map_or(s, |&(x, i)| self.arcs[x][i].to);
                continue;
            }
            let mut advanced = false;
            while self.cursor[u] < self.arcs[u].len() {
                let i = self.cursor[u];
                let arc = &self.arcs[u][i];
                if arc.cap > self.eps && self.level[arc.to] == self.level[u] + 1 {
                    path.push((u, i));
                    u = arc.to;
                    advanced = true;
                    break;
                }
                self.cursor[u] += 1;
            }
            if !advanced {
                if u == s {
                    return total;
                }
                // Dead end: prune u from the level graph and back up.
                self.level[u] = -1;
                let (x, _) = path.pop().expect("non-source node has a parent arc");
                self.cursor[x] += 1;
                u = x;
            }
        }
    }

    /// Pushes a maximum flow from `s` to `t` and returns its value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            flow += self.augment(s, t);
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network. After
    /// [`FlowNetwork::max_flow`] this is the source side of a minimum cut.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.arcs.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for arc in &self.arcs[u] {
                if arc.cap > self.eps && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

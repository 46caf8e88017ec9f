//! Dinic max-flow over integer or floating capacities.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

pub trait Capacity: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
}

impl Capacity for i128 {
    fn zero() -> Self {
        0
    }
}

impl Capacity for f64 {
    fn zero() -> Self {
        0.0
    }
}

#[derive(Debug, Clone)]
struct Arc<C> {
    to: usize,
    cap: C,
}

/// Residual network. Arc `2i` and `2i + 1` are mutual reverses.
#[derive(Debug, Clone)]
pub struct FlowNetwork<C> {
    arcs: Vec<Arc<C>>,
    out: Vec<Vec<usize>>,
    /// Residual capacities at or below this are treated as saturated.
    eps: C,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(node_count: usize, eps: C) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); node_count],
            eps,
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    fn push_pair(&mut self, u: usize, v: usize, forward: C, backward: C) {
        self.out[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap: forward });
        self.out[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap: backward });
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: C) {
        self.push_pair(u, v, cap, C::zero());
    }

    /// Undirected edge: capacity `cap` in both directions.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: C) {
        self.push_pair(u, v, cap, cap);
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.node_count()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if arc.cap > self.eps && level[arc.to] == usize::MAX {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        level
    }

    /// Pushes a maximum flow from `s` to `t` and returns its value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> C {
        let mut total = C::zero();
        if s == t {
            return total;
        }
        loop {
            let mut level = self.levels(s);
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; self.node_count()];
            let mut path: Vec<usize> = Vec::new();
            let mut u = s;
            loop {
                if u == t {
                    let mut bottleneck = self.arcs[path[0]].cap;
                    for &a in &path[1..] {
                        if self.arcs[a].cap < bottleneck {
                            bottleneck = self.arcs[a].cap;
                        }
                    }
                    for &a in &path {
                        self.arcs[a].cap = self.arcs[a].cap - bottleneck;
                        self.arcs[a ^ 1].cap = self.arcs[a ^ 1].cap + bottleneck;
                    }
                    total = total + bottleneck;
                    path.clear();
                    u = s;
                    continue;
                }
                let mut advanced = false;
                while next[u] < self.out[u].len() {
                    let a = self.out[u][next[u]];
                    let arc = &self.arcs[a];
                    if arc.cap > self.eps && level[arc.to] == level[u] + 1 {
                        path.push(a);
                        u = arc.to;
                        advanced = true;
                        break;
                    }
                    next[u] += 1;
                }
                if advanced {
                    continue;
                }
                // dead end: retire u from this phase
                level[u] = usize::MAX;
                match path.pop() {
                    None => break,
                    Some(a) => {
                        u = self.arcs[a ^ 1].to;
                        next[u] += 1;
                    }
                }
            }
        }
    }

    /// Nodes reachable from `s` in the residual network: the source side of
    /// the minimal minimum cut after [`FlowNetwork::max_flow`].
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if arc.cap > self.eps && !seen[arc.to] {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        seen
    }
}

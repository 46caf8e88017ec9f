//! Graphs, potentials, phases and subset counts.
//!
//! A [`Graph`] is a finite simple graph on the dense vertex set `0..n`.
//! Each vertex additionally carries a *host degree*: the degree the vertex
//! has in a larger (possibly infinite) host graph of which this graph is a
//! finite ball. Edges leaving the ball are not stored; they are accounted
//! for through the deficit `host_degree(x) - degree(x)`, which enters every
//! boundary count and every operator diagonal.

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    host_degree: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

/// Checks a directed neighbor relation for the graph invariants: indices in
/// range, no self-loops, no repeated neighbors, symmetry, and host degrees
/// no smaller than the internal degree. Reports the first violation found.
pub fn validate_relation(adjacency: &[Vec<usize>], host_degree: Option<&[usize]>) -> Result<()> {
    let n = adjacency.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    for (x, row) in adjacency.iter().enumerate() {
        let mut seen = row.clone();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(x, w[0]));
            }
        }
        for &y in row {
            if y >= n {
                return Err(Error::VertexOutOfRange {
                    index: y,
                    vertex_count: n,
                });
            }
            if y == x {
                return Err(Error::SelfLoop(x));
            }
        }
    }
    for (x, row) in adjacency.iter().enumerate() {
        for &y in row {
            if !adjacency[y].contains(&x) {
                return Err(Error::Asymmetric(x, y));
            }
        }
    }
    if let Some(host) = host_degree {
        if host.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: host.len(),
            });
        }
        for (x, (&h, row)) in host.iter().zip(adjacency).enumerate() {
            if h < row.len() {
                return Err(Error::HostDegreeDeficit {
                    vertex: x,
                    host: h,
                    internal: row.len(),
                });
            }
        }
    }
    Ok(())
}

impl Graph {
    /// Builds a graph from undirected edges. Each unordered pair may appear
    /// at most once, in either orientation.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            for idx in [u, v] {
                if idx >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        index: idx,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Self::from_adjacency_lists(adjacency, None)
    }

    /// Builds a graph from a 0/1 adjacency matrix `E(x, y)`.
    pub fn from_adjacency_matrix(matrix: &[Vec<u8>]) -> Result<Self> {
        let n = matrix.len();
        let mut adjacency = vec![Vec::new(); n];
        for (x, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (y, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => adjacency[x].push(y),
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "adjacency entry ({x},{y}) = {other} is not 0 or 1"
                        )))
                    }
                }
            }
        }
        Self::from_adjacency_lists(adjacency, None)
    }

    /// Builds a graph from directed neighbor lists, validating every invariant.
    pub fn from_adjacency_lists(
        mut adjacency: Vec<Vec<usize>>,
        host_degree: Option<Vec<usize>>,
    ) -> Result<Self> {
        validate_relation(&adjacency, host_degree.as_deref())?;
        for row in &mut adjacency {
            row.sort_unstable();
        }
        let host_degree = host_degree.unwrap_or_else(|| adjacency.iter().map(Vec::len).collect());
        let edges = adjacency
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
            .collect();
        Ok(Graph {
            adjacency,
            host_degree,
            edges,
        })
    }

    /// Replaces the host degrees. Passing the internal degrees removes every
    /// deficit.
    pub fn with_host_degrees(mut self, host_degree: Vec<usize>) -> Result<Self> {
        validate_relation(&self.adjacency, Some(&host_degree))?;
        self.host_degree = host_degree;
        Ok(self)
    }

    /// Re-checks all invariants. Graphs built through the constructors always
    /// pass; the check is idempotent.
    pub fn validate(&self) -> Result<()> {
        validate_relation(&self.adjacency, Some(&self.host_degree))
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Undirected edges `(x, y)` with `x < y`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    /// Degree inside this graph.
    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn host_degree(&self, x: usize) -> usize {
        self.host_degree[x]
    }

    pub fn host_degrees(&self) -> &[usize] {
        &self.host_degree
    }

    pub fn deficit(&self, x: usize) -> usize {
        self.host_degree[x] - self.adjacency[x].len()
    }

    pub fn has_deficits(&self) -> bool {
        (0..self.vertex_count()).any(|x| self.deficit(x) > 0)
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.vertex_count() && self.adjacency[x].binary_search(&y).is_ok()
    }

    /// Position of the undirected edge `{x, y}` in [`Graph::edges`].
    pub fn edge_index(&self, x: usize, y: usize) -> Option<usize> {
        let key = if x < y { (x, y) } else { (y, x) };
        self.edges.binary_search(&key).ok()
    }

    pub fn max_host_degree(&self) -> usize {
        self.host_degree.iter().copied().max().unwrap_or(0)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            label[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adjacency[x] {
                    if label[y] == usize::MAX {
                        label[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.vertex_count()
    }

    /// Breadth-first distances from `root`; unreachable vertices get `None`.
    pub fn distances_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0);
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub(crate) fn check_vertex(&self, x: usize) -> Result<()> {
        if x >= self.vertex_count() {
            Err(Error::VertexOutOfRange {
                index: x,
                vertex_count: self.vertex_count(),
            })
        } else {
            Ok(())
        }
    }

    /// Membership mask for a vertex list; duplicates are ignored.
    pub fn mask(&self, subset: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.vertex_count()];
        for &x in subset {
            self.check_vertex(x)?;
            mask[x] = true;
        }
        Ok(mask)
    }
}

/// Real per-vertex potential `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Self {
        Potential { values }
    }

    pub fn zeros(n: usize) -> Self {
        Potential::new(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Potential::new(vec![c; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn plus(&self, x: usize) -> f64 {
        self.values[x].max(0.0)
    }

    pub fn minus(&self, x: usize) -> f64 {
        (-self.values[x]).max(0.0)
    }

    pub fn positive_part(&self) -> Potential {
        Potential::new((0..self.len()).map(|x| self.plus(x)).collect())
    }

    pub fn is_non_negative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// Checks that the potential matches the graph and is finite.
    pub fn check_for(&self, graph: &Graph) -> Result<()> {
        if self.len() != graph.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: graph.vertex_count(),
                got: self.len(),
            });
        }
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(x) => Err(Error::NonFinite(x)),
            None => Ok(()),
        }
    }
}

/// Antisymmetric edge phase `θ(x, y) = -θ(y, x)`, stored once per
/// undirected edge for the orientation `x < y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    theta: Vec<f64>,
}

const PHASE_TOL: f64 = 1e-12;

fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl PhaseField {
    pub fn zero(graph: &Graph) -> Self {
        PhaseField {
            theta: vec![0.0; graph.edge_count()],
        }
    }

    /// One angle per entry of [`Graph::edges`], for the orientation `x < y`.
    pub fn from_edge_values(graph: &Graph, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: graph.edge_count(),
                got: theta.len(),
            });
        }
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            let (x, y) = graph.edges()[i];
            return Err(Error::InvalidParameter(format!(
                "non-finite phase on edge {x}-{y}"
            )));
        }
        Ok(PhaseField { theta })
    }

    /// Builds a phase from directed entries `(x, y, θ(x, y))`. Edges not
    /// mentioned get phase 0. If both orientations of an edge are given they
    /// must agree modulo 2π.
    pub fn from_directed(graph: &Graph, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut theta = vec![0.0; graph.edge_count()];
        let mut set: Vec<Option<f64>> = vec![None; graph.edge_count()];
        for &(x, y, t) in entries {
            let idx = graph
                .edge_index(x, y)
                .filter(|_| graph.has_edge(x, y))
                .ok_or(Error::PhaseOnNonEdge(x, y))?;
            let oriented = if x < y { t } else { -t };
            if let Some(prev) = set[idx] {
                if wrap_angle(prev - oriented).abs() > PHASE_TOL {
                    return Err(Error::PhaseNotAntisymmetric(x.min(y), x.max(y)));
                }
            }
            set[idx] = Some(oriented);
            theta[idx] = oriented;
        }
        PhaseField::from_edge_values(graph, theta)
    }

    pub fn edge_values(&self) -> &[f64] {
        &self.theta
    }

    /// `θ(x, y)` for an edge `{x, y}` in the given orientation.
    pub fn theta(&self, graph: &Graph, x: usize, y: usize) -> Option<f64> {
        let idx = graph.edge_index(x, y).filter(|_| graph.has_edge(x, y))?;
        Some(if x < y { self.theta[idx] } else { -self.theta[idx] })
    }

    /// `θ + c` on every oriented edge `x < y` (so `θ(y, x) - c` on the reverse).
    pub fn shifted(&self, c: f64) -> Self {
        PhaseField {
            theta: self.theta.iter().map(|t| t + c).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        PhaseField {
            theta: self.theta.iter().map(|t| -t).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.theta.iter().all(|&t| wrap_angle(t).abs() <= PHASE_TOL)
    }

    pub(crate) fn check_for(&self, graph: &Graph) -> Result<()> {
        if self.theta.len() != graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: graph.edge_count(),
                got: self.theta.len(),
            });
        }
        Ok(())
    }
}

/// Counts attached to a vertex subset `W`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SubsetStats {
    pub size: usize,
    /// `|E_W|`, undirected edges with both ends in `W`.
    pub induced_edges: usize,
    /// `|∂W|`: crossing edges plus the host deficits of members.
    pub boundary: usize,
    /// `deg(W)` in host degrees.
    pub degree_sum: usize,
    pub q_sum: f64,
    pub q_plus_sum: f64,
}

impl SubsetStats {
    /// `(2|E_W| - a(|∂W| + q₊(W))) / |W|`, or 0 for the empty set.
    pub fn sparseness_ratio(&self, a: f64) -> f64 {
        if self.size == 0 {
            return 0.0;
        }
        (2.0 * self.induced_edges as f64 - a * (self.boundary as f64 + self.q_plus_sum))
            / self.size as f64
    }

    /// `(|∂W| + q(W)) / (deg(W) + q(W))`, with the zero-denominator
    /// convention that the quotient is 0.
    pub fn cheeger_ratio(&self) -> f64 {
        let den = self.degree_sum as f64 + self.q_sum;
        if den == 0.0 {
            0.0
        } else {
            (self.boundary as f64 + self.q_sum) / den
        }
    }
}

/// Exact counts for `subset`, which may be empty or contain repeats.
pub fn subset_stats(graph: &Graph, potential: &Potential, subset: &[usize]) -> Result<SubsetStats> {
    let mask = graph.mask(subset)?;
    if potential.len() != graph.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: graph.vertex_count(),
            got: potential.len(),
        });
    }
    Ok(stats_from_mask(graph, potential, &mask))
}

pub(crate) fn stats_from_mask(graph: &Graph, potential: &Potential, mask: &[bool]) -> SubsetStats {
    let mut st = SubsetStats::default();
    let mut inner_endpoints = 0usize;
    for x in (0..graph.vertex_count()).filter(|&x| mask[x]) {
        st.size += 1;
        st.degree_sum += graph.host_degree(x);
        st.boundary += graph.deficit(x);
        st.q_sum += potential.value(x);
        st.q_plus_sum += potential.plus(x);
        for &y in graph.neighbors(x) {
            if mask[y] {
                inner_endpoints += 1;
            } else {
                st.boundary += 1;
            }
        }
    }
    st.induced_edges = inner_endpoints / 2;
    st
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn triangle_is_valid() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        k3.validate().unwrap();
        k3.validate().unwrap();
        assert_eq!(k3.edge_count(), 3);
    }

    #[test]
    fn asymmetric_relation_rejected() {
        let m = vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]];
        assert_eq!(Graph::from_adjacency_matrix(&m), Err(Error::Asymmetric(1, 2)));
    }

    #[test]
    fn host_degree_below_internal_rejected() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let err = k3.with_host_degrees(vec![2, 2, 1]).unwrap_err();
        assert!(matches!(err, Error::HostDegreeDeficit { vertex: 2, .. }));
        assert!(err.to_string().contains("host degree below internal degree"));
    }

    #[test]
    fn self_loops_and_duplicates_rejected() {
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(Error::SelfLoop(1)));
        assert!(matches!(
            Graph::from_edges(2, [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(..))
        ));
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn path_subset_counts() {
        let g = path3();
        let q = Potential::zeros(3);
        let st = subset_stats(&g, &q, &[0, 1]).unwrap();
        assert_eq!((st.size, st.induced_edges, st.boundary, st.degree_sum), (2, 1, 1, 3));
    }

    #[test]
    fn empty_subset_is_all_zero() {
        let g = path3();
        let st = subset_stats(&g, &Potential::constant(3, 2.0), &[]).unwrap();
        assert_eq!(st, SubsetStats::default());
        assert_eq!(st.cheeger_ratio(), 0.0);
    }

    #[test]
    fn ball_boundary_includes_deficits() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)])
            .unwrap()
            .with_host_degrees(vec![3; 4])
            .unwrap();
        let st = subset_stats(&star, &Potential::zeros(4), &[0, 1, 2, 3]).unwrap();
        assert_eq!((st.induced_edges, st.boundary, st.degree_sum), (3, 6, 12));
    }

    #[test]
    fn out_of_range_subset() {
        let g = path3();
        assert!(subset_stats(&g, &Potential::zeros(3), &[3]).is_err());
    }

    #[test]
    fn phase_antisymmetry() {
        let g = path3();
        let p = PhaseField::from_directed(&g, &[(0, 1, 0.5), (1, 0, -0.5)]).unwrap();
        assert_eq!(p.theta(&g, 1, 0), Some(-0.5));
        let wrapped = PhaseField::from_directed(&g, &[(0, 1, 0.5), (1, 0, -0.5 + 2.0 * PI)]);
        assert!(wrapped.is_ok());
        assert_eq!(
            PhaseField::from_directed(&g, &[(0, 1, 0.5), (1, 0, 0.5)]),
            Err(Error::PhaseNotAntisymmetric(0, 1))
        );
        assert_eq!(
            PhaseField::from_directed(&g, &[(0, 2, 0.5)]),
            Err(Error::PhaseOnNonEdge(0, 2))
        );
    }
}

//! Test graphs and the radial tree families, with host degrees for balls.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Graph families with a closed-form construction.
#[derive(Debug, Clone, PartialEq)]
pub enum BasicKind {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// Square `m × m` lattice.
    Grid(usize),
    /// Center plus `n` leaves.
    Star(usize),
    /// Sphere sizes; every vertex of sphere `i` is joined to every vertex of
    /// sphere `i + 1`.
    Antitree(Vec<usize>),
}

pub fn make_basic(kind: &BasicKind) -> Result<Graph> {
    let size_err = |what: &str| Err(Error::InvalidParameter(format!("{what} must be at least 1")));
    match kind {
        BasicKind::Path(n) => {
            if *n == 0 {
                return size_err("path length");
            }
            Graph::from_edges(*n, (1..*n).map(|i| (i - 1, i)))
        }
        BasicKind::Cycle(n) => {
            if *n < 3 {
                return Err(Error::InvalidParameter(
                    "cycle needs at least 3 vertices".into(),
                ));
            }
            Graph::from_edges(*n, (0..*n).map(|i| (i, (i + 1) % n)))
        }
        BasicKind::Complete(n) => {
            if *n == 0 {
                return size_err("complete graph size");
            }
            let n = *n;
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        BasicKind::Grid(m) => grid(*m, *m),
        BasicKind::Star(leaves) => Graph::from_edges(leaves + 1, (1..=*leaves).map(|i| (0, i))),
        BasicKind::Antitree(sizes) => {
            if sizes.is_empty() || sizes.contains(&0) {
                return size_err("every antitree sphere size");
            }
            let mut offsets = vec![0];
            for s in sizes {
                offsets.push(offsets.last().unwrap() + s);
            }
            let edges = (0..sizes.len() - 1).flat_map(|i| {
                let (a0, a1, b1) = (offsets[i], offsets[i + 1], offsets[i + 2]);
                (a0..a1).flat_map(move |x| (a1..b1).map(move |y| (x, y)))
            });
            Graph::from_edges(offsets[sizes.len()], edges)
        }
    }
}

/// Rectangular `rows × cols` lattice, vertex `(r, c)` at index `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("grid sides must be at least 1".into()));
    }
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges)
}

/// Radial tree `T(β)` with `γ_n`-regular graphs on the spheres, truncated at
/// `depth`. Sequences shorter than `depth + 1` repeat their last entry.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFamilySpec {
    /// Vertex degree in the tree at sphere `n`: the root has `β_0` children,
    /// every other vertex `β_n - 1`.
    pub beta: Vec<usize>,
    /// Regularity of the graph induced on sphere `n`.
    pub gamma: Vec<usize>,
    pub depth: usize,
}

fn seq_at(seq: &[usize], n: usize) -> usize {
    seq.get(n).or(seq.last()).copied().unwrap_or(0)
}

impl RadialFamilySpec {
    pub fn new(beta: Vec<usize>, gamma: Vec<usize>, depth: usize) -> Self {
        RadialFamilySpec { beta, gamma, depth }
    }

    pub fn beta_at(&self, n: usize) -> usize {
        seq_at(&self.beta, n)
    }

    pub fn gamma_at(&self, n: usize) -> usize {
        seq_at(&self.gamma, n)
    }

    /// `|S_0| = 1`, `|S_1| = β_0`, `|S_{n+1}| = |S_n| (β_n - 1)`.
    pub fn sphere_sizes(&self) -> Result<Vec<usize>> {
        let mut sizes = vec![1usize];
        for n in 0..self.depth {
            let branch = if n == 0 {
                self.beta_at(0)
            } else {
                self.beta_at(n) - 1
            };
            let next = sizes[n]
                .checked_mul(branch)
                .ok_or_else(|| Error::InvalidParameter("sphere size overflow".into()))?;
            sizes.push(next);
        }
        Ok(sizes)
    }

    /// Parameters well-formed and some `γ_n`-regular sphere graph exists for
    /// every `n ≤ depth`.
    pub fn check_feasible(&self) -> Result<()> {
        if self.beta.is_empty() {
            return Err(Error::InvalidParameter("beta must be nonempty".into()));
        }
        if let Some(n) = (0..=self.depth).find(|&n| self.beta_at(n) < 2) {
            return Err(Error::InvalidParameter(format!("beta_{n} must be at least 2")));
        }
        for (n, &s) in self.sphere_sizes()?.iter().enumerate() {
            let g = self.gamma_at(n);
            if g >= s && g > 0 {
                return Err(Error::InfeasibleFamily(format!(
                    "gamma_{n} = {g} needs a sphere larger than |S_{n}| = {s}"
                )));
            }
            if (g * s) % 2 == 1 {
                return Err(Error::InfeasibleFamily(format!(
                    "gamma_{n} * |S_{n}| = {g} * {s} is odd"
                )));
            }
        }
        Ok(())
    }
}

/// Circulant `γ`-regular edge set on `vertices` (in the given cyclic order).
fn circulant_edges(vertices: &[usize], gamma: usize, out: &mut Vec<(usize, usize)>) {
    let s = vertices.len();
    for i in 0..s {
        for j in 1..=gamma / 2 {
            out.push((vertices[i], vertices[(i + j) % s]));
        }
        if gamma % 2 == 1 && i < s / 2 {
            out.push((vertices[i], vertices[i + s / 2]));
        }
    }
}

/// Member of `G(β, γ)` truncated at the spec's depth, with host degrees
/// taken in the infinite graph. Vertices are numbered breadth first; the
/// children of a vertex are contiguous and ordered like their parents.
pub fn make_radial_family(spec: &RadialFamilySpec) -> Result<Graph> {
    spec.check_feasible()?;
    let sizes = spec.sphere_sizes()?;
    let total: usize = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut host = vec![0usize; total];
    let mut sphere_start = 0usize;
    for (n, &s) in sizes.iter().enumerate() {
        let sphere: Vec<usize> = (sphere_start..sphere_start + s).collect();
        let next_start = sphere_start + s;
        if n < spec.depth {
            let branch = if n == 0 {
                spec.beta_at(0)
            } else {
                spec.beta_at(n) - 1
            };
            for (i, &x) in sphere.iter().enumerate() {
                for c in 0..branch {
                    edges.push((x, next_start + i * branch + c));
                }
            }
        }
        circulant_edges(&sphere, spec.gamma_at(n), &mut edges);
        for &x in &sphere {
            host[x] = spec.beta_at(n) + spec.gamma_at(n);
        }
        sphere_start = next_start;
    }
    Graph::from_edges(total, edges)?.with_host_degrees(host)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Host {
    RegularTree(usize),
    RadialFamily { beta: Vec<usize>, gamma: Vec<usize> },
}

/// Ball of the given radius around the root of an infinite host, with host
/// degrees so that vertices on the outer sphere carry their missing edges
/// as deficit.
pub fn ball_truncation(host: &Host, radius: usize) -> Result<Graph> {
    let spec = match host {
        Host::RegularTree(d) => {
            if *d < 2 {
                return Err(Error::InvalidParameter("tree degree must be at least 2".into()));
            }
            RadialFamilySpec::new(vec![*d], vec![0], radius)
        }
        Host::RadialFamily { beta, gamma } => {
            RadialFamilySpec::new(beta.clone(), gamma.clone(), radius)
        }
    };
    make_radial_family(&spec)
}

/// Ways to build a graph from two graphs.
pub enum Combine<'a> {
    /// Union of edge sets on a shared vertex set.
    EdgeUnion,
    /// Product with `(x₁,x₂) ~ (y₁,y₂)` iff one coordinate agrees and the
    /// other is an edge; vertex `(x₁, x₂)` has index `x₁ |V₂| + x₂`.
    CartesianSum,
    /// The second graph, checked to be an edge subgraph of the first.
    Subgraph,
    /// Keep only the edges of the first graph accepted by the predicate.
    FilterEdges(&'a dyn Fn(usize, usize) -> bool),
}

/// Combines graphs. Host degrees: the edge union has none (no deficits), the
/// cartesian sum adds them coordinatewise, and subgraphs keep the deficits
/// of the first graph.
pub fn combine(op: Combine<'_>, g1: &Graph, g2: Option<&Graph>) -> Result<Graph> {
    let need_second = || {
        g2.ok_or_else(|| Error::InvalidParameter("this combination needs a second graph".into()))
    };
    match op {
        Combine::EdgeUnion => {
            let g2 = need_second()?;
            if g1.vertex_count() != g2.vertex_count() {
                return Err(Error::VertexSetMismatch(g1.vertex_count(), g2.vertex_count()));
            }
            let mut edges: Vec<_> = g1.edges().iter().chain(g2.edges()).copied().collect();
            edges.sort_unstable();
            edges.dedup();
            Graph::from_edges(g1.vertex_count(), edges)
        }
        Combine::CartesianSum => {
            let g2 = need_second()?;
            let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
            let mut edges = Vec::new();
            for x1 in 0..n1 {
                for &(a, b) in g2.edges() {
                    edges.push((x1 * n2 + a, x1 * n2 + b));
                }
            }
            for &(a, b) in g1.edges() {
                for x2 in 0..n2 {
                    edges.push((a * n2 + x2, b * n2 + x2));
                }
            }
            let host = (0..n1 * n2)
                .map(|v| g1.host_degree(v / n2) + g2.host_degree(v % n2))
                .collect();
            Graph::from_edges(n1 * n2, edges)?.with_host_degrees(host)
        }
        Combine::Subgraph => {
            let g2 = need_second()?;
            if g1.vertex_count() != g2.vertex_count() {
                return Err(Error::VertexSetMismatch(g1.vertex_count(), g2.vertex_count()));
            }
            if let Some(&(x, y)) = g2.edges().iter().find(|&&(x, y)| !g1.has_edge(x, y)) {
                return Err(Error::NotSubgraph(x, y));
            }
            keep_deficits(g1, g2.edges().to_vec())
        }
        Combine::FilterEdges(keep) => {
            let edges = g1.edges().iter().copied().filter(|&(x, y)| keep(x, y)).collect();
            keep_deficits(g1, edges)
        }
    }
}

fn keep_deficits(g1: &Graph, edges: Vec<(usize, usize)>) -> Result<Graph> {
    let sub = Graph::from_edges(g1.vertex_count(), edges)?;
    let host = (0..g1.vertex_count())
        .map(|x| sub.degree(x) + g1.deficit(x))
        .collect();
    sub.with_host_degrees(host)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_shapes() {
        assert_eq!(make_basic(&BasicKind::Path(3)).unwrap().edge_count(), 2);
        let k5 = make_basic(&BasicKind::Complete(5)).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!((0..5).all(|x| k5.degree(x) == 4));
        assert_eq!(make_basic(&BasicKind::Grid(3)).unwrap().edge_count(), 12);
        assert_eq!(make_basic(&BasicKind::Star(4)).unwrap().edge_count(), 4);
        assert!(make_basic(&BasicKind::Path(0)).is_err());
        assert!(make_basic(&BasicKind::Complete(0)).is_err());
    }

    #[test]
    fn antitree_density() {
        let g = make_basic(&BasicKind::Antitree(vec![1, 2, 4, 8])).unwrap();
        assert_eq!(g.vertex_count(), 15);
        assert_eq!(g.edge_count(), 2 + 8 + 32);
        assert!((2.0 * g.edge_count() as f64 / 15.0 - 84.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn figure_family_depth_two() {
        let spec = RadialFamilySpec::new(vec![3, 3, 4], vec![0, 2, 4, 5], 2);
        assert_eq!(spec.sphere_sizes().unwrap(), vec![1, 3, 6]);
        let g = make_radial_family(&spec).unwrap();
        assert_eq!(g.vertex_count(), 10);
        // tree edges 3 + 6, sphere edges 3 (triangle) + 12 (4-regular on 6)
        assert_eq!(g.edge_count(), 9 + 3 + 12);
        // outer sphere: internal degree 1 + 4, host 4 + 4
        assert_eq!(g.degree(9), 5);
        assert_eq!(g.host_degree(9), 8);
    }

    #[test]
    fn plain_tree_when_gamma_zero() {
        let g = make_radial_family(&RadialFamilySpec::new(vec![3, 5], vec![0], 3)).unwrap();
        assert!(g.is_forest());
        assert_eq!(g.vertex_count(), 1 + 3 + 12 + 48);
    }

    #[test]
    fn spheres_are_regular() {
        let spec = RadialFamilySpec::new(vec![3], vec![0, 2], 3);
        assert_eq!(spec.sphere_sizes().unwrap(), vec![1, 3, 6, 12]);
        let g = make_radial_family(&spec).unwrap();
        let sizes = spec.sphere_sizes().unwrap();
        let mut start = 0;
        for (n, &s) in sizes.iter().enumerate() {
            let range = start..start + s;
            for x in range.clone() {
                let on_sphere = g.neighbors(x).iter().filter(|y| range.contains(y)).count();
                assert_eq!(on_sphere, spec.gamma_at(n), "sphere {n}, vertex {x}");
            }
            start += s;
        }
    }

    #[test]
    fn odd_regularity_uses_antipodes() {
        let spec = RadialFamilySpec::new(vec![4, 3], vec![0, 3, 5], 2);
        let g = make_radial_family(&spec).unwrap();
        let sizes = spec.sphere_sizes().unwrap();
        assert_eq!(sizes, vec![1, 4, 8]);
        for x in 5..13 {
            let on = g.neighbors(x).iter().filter(|&&y| y >= 5).count();
            assert_eq!(on, 5);
        }
    }

    #[test]
    fn infeasible_family_names_sphere() {
        let err = make_radial_family(&RadialFamilySpec::new(vec![3], vec![0, 3], 1)).unwrap_err();
        assert!(err.to_string().contains("gamma_1"), "{err}");
        let odd = make_radial_family(&RadialFamilySpec::new(vec![3, 3], vec![0, 1], 1)).unwrap_err();
        assert!(odd.to_string().contains("odd"), "{odd}");
    }

    #[test]
    fn regular_tree_balls() {
        let b1 = ball_truncation(&Host::RegularTree(3), 1).unwrap();
        assert_eq!((b1.vertex_count(), b1.edge_count()), (4, 3));
        assert!((0..4).all(|x| b1.host_degree(x) == 3));
        assert_eq!((0..4).map(|x| b1.deficit(x)).sum::<usize>(), 6);
        let b0 = ball_truncation(&Host::RegularTree(5), 0).unwrap();
        assert_eq!((b0.vertex_count(), b0.host_degree(0)), (1, 5));
        let b8 = ball_truncation(&Host::RegularTree(3), 8).unwrap();
        assert_eq!(b8.vertex_count(), 1 + 3 * (256 - 1));
    }

    #[test]
    fn combinations() {
        let p3 = make_basic(&BasicKind::Path(3)).unwrap();
        let chord = Graph::from_edges(3, [(0, 2)]).unwrap();
        let k3 = combine(Combine::EdgeUnion, &p3, Some(&chord)).unwrap();
        assert_eq!(k3, make_basic(&BasicKind::Complete(3)).unwrap());

        let p2 = make_basic(&BasicKind::Path(2)).unwrap();
        let c4 = combine(Combine::CartesianSum, &p2, Some(&p2)).unwrap();
        assert_eq!(c4.edges(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!((0..4).all(|x| c4.degree(x) == 2));

        let dropped = combine(Combine::FilterEdges(&|x, y| (x, y) != (0, 2)), &k3, None).unwrap();
        assert_eq!(dropped, p3);
        assert_eq!(combine(Combine::Subgraph, &k3, Some(&p3)).unwrap(), p3);
        assert!(matches!(
            combine(Combine::Subgraph, &p3, Some(&k3)),
            Err(Error::NotSubgraph(0, 2))
        ));
        assert!(matches!(
            combine(Combine::EdgeUnion, &p3, Some(&p2)),
            Err(Error::VertexSetMismatch(3, 2))
        ));
    }

    #[test]
    fn cartesian_sum_degrees_add() {
        let a = make_basic(&BasicKind::Star(3)).unwrap();
        let b = make_basic(&BasicKind::Cycle(5)).unwrap();
        let g = combine(Combine::CartesianSum, &a, Some(&b)).unwrap();
        for v in 0..g.vertex_count() {
            assert_eq!(g.degree(v), a.degree(v / 5) + b.degree(v % 5));
        }
    }
}

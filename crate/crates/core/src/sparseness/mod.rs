//! Sparseness constants, the (a,0) threshold, and Cheeger constants.
//!
//! Every quantity here is an extremum of a set ratio over nonempty vertex
//! subsets. Two routes are provided: exhaustive enumeration for graphs of
//! at most [`ENUMERATION_LIMIT`] vertices, and Dinkelbach iteration whose
//! linearized subproblems are solved exactly as minimum cuts. When the
//! potential and `a` are small-denominator rationals the cut route runs in
//! exact integer arithmetic; otherwise it runs in floating point.

mod brute;
mod fractional;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{stats_from_mask, subset_stats, Graph, Potential, SubsetStats};
use brute::{mask_to_vertices, Enumerator};
use fractional::{RatioProblem, Scalar};

pub use brute::ENUMERATION_LIMIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Flow,
}

/// Answer to "smallest k such that the graph is (a,k)-sparse".
#[derive(Debug, Clone, PartialEq)]
pub struct SparsenessCertificate {
    pub a: f64,
    /// `max(ratio, 0)`.
    pub k: f64,
    /// `(2|E_W| - a(|∂W| + q₊(W))) / |W|` at the witness.
    pub ratio: f64,
    pub witness: Vec<usize>,
    pub stats: SubsetStats,
    /// `true` when every subset has negative ratio and `k` was raised to 0.
    pub clamped: bool,
}

impl SparsenessCertificate {
    fn from_witness(graph: &Graph, potential: &Potential, a: f64, witness: Vec<usize>) -> Self {
        let stats = subset_stats(graph, potential, &witness).expect("witness vertices are in range");
        let ratio = stats.sparseness_ratio(a);
        SparsenessCertificate {
            a,
            k: ratio.max(0.0),
            ratio,
            witness,
            stats,
            clamped: ratio < 0.0,
        }
    }

    /// Absolute difference between the stored ratio and one recomputed from
    /// the witness.
    pub fn recheck(&self, graph: &Graph, potential: &Potential) -> Result<f64> {
        if self.witness.is_empty() {
            return Err(Error::InvalidParameter("empty witness".into()));
        }
        let stats = subset_stats(graph, potential, &self.witness)?;
        Ok((stats.sparseness_ratio(self.a) - self.ratio).abs())
    }
}

/// The least `a` making the graph (a,0)-sparse.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCertificate {
    /// `max_W 2|E_W| / (|∂W| + q₊(W))`; `+∞` when some set with an edge has
    /// zero denominator.
    pub value: f64,
    pub witness: Vec<usize>,
    pub stats: SubsetStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheegerCertificate {
    pub witness: Vec<usize>,
    pub stats: SubsetStats,
    /// `(|∂W| + q(W)) / (deg(W) + q(W))`, 0 when the denominator vanishes.
    pub ratio: f64,
}

impl CheegerCertificate {
    fn from_witness(graph: &Graph, potential: &Potential, witness: Vec<usize>) -> Self {
        let stats = subset_stats(graph, potential, &witness).expect("witness vertices are in range");
        CheegerCertificate {
            ratio: stats.cheeger_ratio(),
            witness,
            stats,
        }
    }

    pub fn recheck(&self, graph: &Graph, potential: &Potential) -> Result<f64> {
        if self.witness.is_empty() {
            return Err(Error::InvalidParameter("empty witness".into()));
        }
        let stats = subset_stats(graph, potential, &self.witness)?;
        Ok((stats.cheeger_ratio() - self.ratio).abs())
    }
}

fn check_a(a: f64) -> Result<()> {
    if a.is_finite() && a >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("a must be finite and non-negative, got {a}")))
    }
}

fn all_vertices(graph: &Graph) -> Vec<usize> {
    (0..graph.vertex_count()).collect()
}

pub fn kmin_bruteforce(graph: &Graph, potential: &Potential, a: f64) -> Result<SparsenessCertificate> {
    potential.check_for(graph)?;
    check_a(a)?;
    let region = all_vertices(graph);
    let (w, _) = Enumerator::new(graph, potential, &region)?.max_sparseness_ratio(a);
    Ok(SparsenessCertificate::from_witness(
        graph,
        potential,
        a,
        mask_to_vertices(&region, w),
    ))
}

const MAX_DENOMINATOR: i128 = 1_000_000;
const MAX_SINGLE_DENOMINATOR: i128 = 1_000;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Smallest `d ≤ 1000` with `round(v d) / d == v` in floating point.
fn small_denominator(v: f64) -> Option<i128> {
    (1..=MAX_SINGLE_DENOMINATOR).find(|&d| {
        let p = (v * d as f64).round();
        p.abs() < 9.0e15 && p / d as f64 == v
    })
}

/// Common denominator `Q` and numerators for values that are all
/// small-denominator rationals, or `None`.
fn rational_scale(values: &[f64]) -> Option<(i128, Vec<i128>)> {
    let mut q = 1i128;
    let mut last = f64::NAN;
    for &v in values {
        if v == last {
            continue;
        }
        last = v;
        if (v * q as f64).round() / q as f64 == v {
            continue;
        }
        let d = small_denominator(v)?;
        q = q / gcd(q, d) * d;
        if q > MAX_DENOMINATOR {
            return None;
        }
    }
    let nums = values
        .iter()
        .map(|&v| {
            let p = (v * q as f64).round();
            (p.abs() < 9.0e15 && p / q as f64 == v).then_some(p as i128)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((q, nums))
}

/// Per-vertex inputs already multiplied by a common unit (`1` on the float
/// path, the common denominator on the exact path).
struct Scaled<T> {
    unit: T,
    a: T,
    q: Vec<T>,
}

fn scalar_float(a: f64, q: Vec<f64>) -> Scaled<f64> {
    Scaled { unit: 1.0, a, q }
}

fn scalar_exact(a: f64, q: &[f64]) -> Option<Scaled<i128>> {
    let mut values = Vec::with_capacity(q.len() + 1);
    values.push(a);
    values.extend_from_slice(q);
    let (unit, nums) = rational_scale(&values)?;
    Some(Scaled {
        unit,
        a: nums[0],
        q: nums[1..].to_vec(),
    })
}

fn kmin_problem<T: Scalar>(graph: &Graph, s: &Scaled<T>) -> Result<RatioProblem<T>> {
    let u2 = s.unit.mul(s.unit)?;
    let cut_coef = u2.plus(s.a.mul(s.unit)?)?;
    let num = (0..graph.vertex_count())
        .map(|x| {
            let host = u2.mul(T::from_count(graph.host_degree(x)))?;
            let lost = cut_coef.mul(T::from_count(graph.deficit(x)))?;
            let pot = s.a.mul(s.q[x])?;
            host.plus(lost.neg())?.plus(pot.neg())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioProblem {
        num,
        num_cut: cut_coef.neg(),
        den: vec![T::one(); graph.vertex_count()],
        den_cut: T::zero(),
        edges: graph.edges().to_vec(),
    })
}

fn best_start(n: usize, score: impl Fn(&[bool]) -> Option<f64>, maximize: bool) -> Vec<bool> {
    let mut candidates: Vec<Vec<bool>> = (0..n)
        .map(|x| {
            let mut m = vec![false; n];
            m[x] = true;
            m
        })
        .collect();
    candidates.push(vec![true; n]);
    let mut best: Option<(f64, Vec<bool>)> = None;
    for c in candidates {
        if let Some(s) = score(&c) {
            let better = match &best {
                None => true,
                Some((b, _)) => (maximize && s > *b) || (!maximize && s < *b),
            };
            if better {
                best = Some((s, c));
            }
        }
    }
    best.map(|(_, m)| m).unwrap_or_else(|| vec![true; n])
}

fn run_exact_or_float<F, G>(exact: Option<F>, float: G) -> Result<Vec<bool>>
where
    F: FnOnce() -> Result<Vec<bool>>,
    G: FnOnce() -> Result<Vec<bool>>,
{
    if let Some(exact) = exact {
        match exact() {
            Ok(mask) => return Ok(mask),
            Err(Error::Overflow) => {}
            Err(e) => return Err(e),
        }
    }
    float()
}

fn mask_vertices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(x, _)| x).collect()
}

pub fn kmin_flow(graph: &Graph, potential: &Potential, a: f64) -> Result<SparsenessCertificate> {
    potential.check_for(graph)?;
    check_a(a)?;
    let n = graph.vertex_count();
    let q_plus = potential.positive_part();
    let start = best_start(
        n,
        |m| Some(stats_from_mask(graph, potential, m).sparseness_ratio(a)),
        true,
    );
    let exact = scalar_exact(a, q_plus.values()).map(|s| {
        let start = start.clone();
        move || kmin_problem(graph, &s)?.maximize(start).map(|o| o.mask)
    });
    let mask = run_exact_or_float(exact, || {
        let s = scalar_float(a, q_plus.values().to_vec());
        kmin_problem(graph, &s)?.maximize(start.clone()).map(|o| o.mask)
    })?;
    Ok(SparsenessCertificate::from_witness(graph, potential, a, mask_vertices(&mask)))
}

pub fn kmin(graph: &Graph, potential: &Potential, a: f64, method: Method) -> Result<SparsenessCertificate> {
    match method {
        Method::BruteForce => kmin_bruteforce(graph, potential, a),
        Method::Flow => kmin_flow(graph, potential, a),
    }
}

/// `kmin(a)` for every `a` of the grid, computed in parallel and returned in
/// grid order.
pub fn kmin_profile(
    graph: &Graph,
    potential: &Potential,
    a_grid: &[f64],
    method: Method,
) -> Result<Vec<SparsenessCertificate>> {
    a_grid
        .par_iter()
        .map(|&a| kmin(graph, potential, a, method))
        .collect()
}

fn threshold_problem<T: Scalar>(graph: &Graph, s: &Scaled<T>) -> Result<RatioProblem<T>> {
    let n = graph.vertex_count();
    let num = (0..n)
        .map(|x| s.unit.mul(T::from_count(graph.degree(x))))
        .collect::<Result<Vec<_>>>()?;
    let den = (0..n)
        .map(|x| s.unit.mul(T::from_count(graph.deficit(x)))?.plus(s.q[x]))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioProblem {
        num,
        num_cut: s.unit.neg(),
        den,
        den_cut: s.unit,
        edges: graph.edges().to_vec(),
    })
}

/// Least `a` for which `(G, q)` is (a,0)-sparse.
pub fn amin_zero_k(graph: &Graph, potential: &Potential) -> Result<ThresholdCertificate> {
    potential.check_for(graph)?;
    let cert = |value: f64, witness: Vec<usize>| -> Result<ThresholdCertificate> {
        Ok(ThresholdCertificate {
            stats: subset_stats(graph, potential, &witness)?,
            value,
            witness,
        })
    };
    // A component with an edge, no deficit and q₊ ≡ 0 has empty boundary.
    for comp in graph.components() {
        let closed = comp
            .iter()
            .all(|&x| graph.deficit(x) == 0 && potential.plus(x) == 0.0);
        if closed && comp.len() > 1 {
            return cert(f64::INFINITY, comp);
        }
    }
    if graph.edge_count() == 0 {
        return cert(0.0, vec![0]);
    }
    let q_plus = potential.positive_part();
    let ratio = |m: &[bool]| {
        let st = stats_from_mask(graph, potential, m);
        let den = st.boundary as f64 + st.q_plus_sum;
        (den > 0.0).then(|| 2.0 * st.induced_edges as f64 / den)
    };
    let n = graph.vertex_count();
    let mut start = vec![false; n];
    let mut best = f64::NEG_INFINITY;
    for &(x, y) in graph.edges() {
        let mut m = vec![false; n];
        m[x] = true;
        m[y] = true;
        if let Some(r) = ratio(&m) {
            if r > best {
                best = r;
                start = m;
            }
        }
    }
    let exact = scalar_exact(0.0, q_plus.values()).map(|s| {
        let start = start.clone();
        move || threshold_problem(graph, &s)?.maximize(start).map(|o| o.mask)
    });
    let mask = run_exact_or_float(exact, || {
        let s = scalar_float(0.0, q_plus.values().to_vec());
        threshold_problem(graph, &s)?.maximize(start.clone()).map(|o| o.mask)
    })?;
    let value = ratio(&mask).ok_or_else(|| {
        Error::InvalidParameter("threshold witness has zero denominator".into())
    })?;
    cert(value, mask_vertices(&mask))
}

/// Cheeger ratio restricted to `region`, as a maximization of `-N / D`.
fn cheeger_problem<T: Scalar>(graph: &Graph, region: &[usize], s: &Scaled<T>) -> Result<RatioProblem<T>> {
    let mut local = vec![usize::MAX; graph.vertex_count()];
    for (i, &x) in region.iter().enumerate() {
        local[x] = i;
    }
    let mut num = Vec::with_capacity(region.len());
    let mut den = Vec::with_capacity(region.len());
    for (i, &x) in region.iter().enumerate() {
        let outside = graph.neighbors(x).iter().filter(|&&y| local[y] == usize::MAX).count();
        let fixed = s.unit.mul(T::from_count(graph.deficit(x) + outside))?;
        num.push(fixed.plus(s.q[i])?.neg());
        den.push(s.unit.mul(T::from_count(graph.host_degree(x)))?.plus(s.q[i])?);
    }
    let edges = graph
        .edges()
        .iter()
        .filter(|&&(x, y)| local[x] != usize::MAX && local[y] != usize::MAX)
        .map(|&(x, y)| (local[x], local[y]))
        .collect();
    Ok(RatioProblem {
        num,
        num_cut: s.unit.neg(),
        den,
        den_cut: T::zero(),
        edges,
    })
}

fn sorted_region(graph: &Graph, region: &[usize]) -> Result<Vec<usize>> {
    let mask = graph.mask(region)?;
    let region = mask_vertices(&mask);
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    Ok(region)
}

/// Minimum of `(|∂W| + q(W)) / (deg(W) + q(W))` over nonempty `W ⊆ region`,
/// with boundaries taken in the whole graph (including host deficits).
pub fn cheeger(
    graph: &Graph,
    potential: &Potential,
    region: &[usize],
    method: Method,
) -> Result<CheegerCertificate> {
    potential.check_for(graph)?;
    if let Some(x) = (0..graph.vertex_count()).find(|&x| potential.value(x) < 0.0) {
        return Err(Error::NegativePotential(x));
    }
    let region = sorted_region(graph, region)?;
    if method == Method::BruteForce {
        let (w, _) = Enumerator::new(graph, potential, &region)?.min_cheeger_ratio();
        return Ok(CheegerCertificate::from_witness(
            graph,
            potential,
            mask_to_vertices(&region, w),
        ));
    }
    // vanishing denominator: ratio 0 by convention, the global minimum
    if let Some(&x) = region
        .iter()
        .find(|&&x| graph.host_degree(x) as f64 + potential.value(x) == 0.0)
    {
        return Ok(CheegerCertificate::from_witness(graph, potential, vec![x]));
    }
    let local_q: Vec<f64> = region.iter().map(|&x| potential.value(x)).collect();
    let to_global = |m: &[bool]| -> Vec<usize> {
        region.iter().zip(m).filter(|(_, &b)| b).map(|(&x, _)| x).collect()
    };
    let start = {
        let n = region.len();
        let score = |m: &[bool]| {
            let st = subset_stats(graph, potential, &to_global(m)).ok()?;
            Some(st.cheeger_ratio())
        };
        best_start(n, score, false)
    };
    let exact = scalar_exact(0.0, &local_q).map(|s| {
        let start = start.clone();
        let region = &region;
        move || cheeger_problem(graph, region, &s)?.maximize(start).map(|o| o.mask)
    });
    let mask = run_exact_or_float(exact, || {
        let s = scalar_float(0.0, local_q.clone());
        cheeger_problem(graph, &region, &s)?.maximize(start.clone()).map(|o| o.mask)
    })?;
    Ok(CheegerCertificate::from_witness(graph, potential, to_global(&mask)))
}

/// Cheeger constants of the complements of balls `B_r(root)`, the finite
/// approximants of the constant at infinity. Radii whose complement is
/// empty are omitted.
pub fn cheeger_exhaustion(
    graph: &Graph,
    potential: &Potential,
    root: usize,
    radii: &[usize],
) -> Result<Vec<(usize, CheegerCertificate)>> {
    graph.check_vertex(root)?;
    let dist = graph.distances_from(root);
    let mut out = Vec::new();
    for &r in radii {
        let region: Vec<usize> = (0..graph.vertex_count())
            .filter(|&x| dist[x].is_none_or(|d| d > r))
            .collect();
        if region.is_empty() {
            continue;
        }
        out.push((r, cheeger(graph, potential, &region, Method::Flow)?));
    }
    Ok(out)
}

/// `(d - k) / (d (1 + a))`, clamped at 0: the isoperimetric lower bound of
/// an (a,k)-sparse graph with `deg + q ≥ d`.
pub fn cheeger_lower_bound(d: f64, k: f64, a: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::InvalidParameter(format!("d must be positive, got {d}")));
    }
    check_a(a)?;
    if !(k >= 0.0) {
        return Err(Error::InvalidParameter(format!("k must be non-negative, got {k}")));
    }
    Ok(((d - k) / (d * (1.0 + a))).max(0.0))
}

/// Smallest `κ ≥ 0` with `q₋ ≤ α (deg + q₊) + κ` pointwise.
///
/// On (a,k)-sparse graphs this pointwise bound for every `α ∈ (0,1)` is
/// equivalent to membership of `q` in the class of potentials whose
/// negative part is form-small; on other graphs it is only a surrogate.
pub fn potential_class_kappa(graph: &Graph, potential: &Potential, alpha: f64) -> Result<f64> {
    potential.check_for(graph)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok((0..graph.vertex_count())
        .map(|x| potential.minus(x) - alpha * (graph.host_degree(x) as f64 + potential.plus(x)))
        .fold(0.0, f64::max))
}

//! Eigenvalues, optimal form constants and eigenvalue sandwiches.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, PhaseField, Potential};
use crate::operators::{degree, schrodinger, HermitianOperator, OperatorKind, C64};

/// Largest dimension handled by the dense solver.
pub const DENSE_LIMIT: usize = 4000;
/// Above this dimension extremal eigenvalues are tried by Lanczos first.
pub const LANCZOS_THRESHOLD: usize = 500;
const LANCZOS_MAX_STEPS: usize = 400;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn check_dense(op: &HermitianOperator) -> Result<()> {
    let n = op.dimension();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > DENSE_LIMIT {
        return Err(Error::TooLargeForDense {
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    Ok(())
}

fn is_diagonal(op: &HermitianOperator) -> bool {
    op.kind() == OperatorKind::Degree || op.upper_entries().is_empty()
}

/// All eigenvalues, ascending, with multiplicity.
pub fn eigenvalues(op: &HermitianOperator) -> Result<Vec<f64>> {
    check_dense(op)?;
    if is_diagonal(op) {
        return Ok(sorted(op.diagonal().to_vec()));
    }
    Ok(sorted(match op.to_dense_real() {
        Some(m) => SymmetricEigen::new(m).eigenvalues.as_slice().to_vec(),
        None => SymmetricEigen::new(op.to_dense()).eigenvalues.as_slice().to_vec(),
    }))
}

#[derive(Debug, Clone)]
pub struct EigenPairs {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `j` is a unit eigenvector for `values[j]`.
    pub vectors: DMatrix<C64>,
}

impl EigenPairs {
    /// `max_j ‖M v_j − λ_j v_j‖`.
    pub fn max_residual(&self, op: &HermitianOperator) -> Result<f64> {
        let mut worst = 0.0f64;
        for (j, &lambda) in self.values.iter().enumerate() {
            let v: Vec<C64> = self.vectors.column(j).iter().copied().collect();
            let mv = op.apply(&v)?;
            let r = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

pub fn eigenpairs(op: &HermitianOperator) -> Result<EigenPairs> {
    check_dense(op)?;
    let (values, vectors) = match op.to_dense_real() {
        Some(m) => {
            let e = SymmetricEigen::new(m);
            (e.eigenvalues.as_slice().to_vec(), e.eigenvectors.map(|x| C64::new(x, 0.0)))
        }
        None => {
            let e = SymmetricEigen::new(op.to_dense());
            (e.eigenvalues.as_slice().to_vec(), e.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(EigenPairs {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])]),
    })
}

/// `(λ_min, λ_max)`: dense up to [`LANCZOS_THRESHOLD`], then Lanczos with a
/// dense fallback up to [`DENSE_LIMIT`], and Lanczos only beyond.
pub fn extremal_eigenvalues(op: &HermitianOperator) -> Result<(f64, f64)> {
    if op.dimension() == 0 {
        return Err(Error::EmptyGraph);
    }
    if is_diagonal(op) {
        let d = op.diagonal();
        return Ok((
            d.iter().copied().fold(f64::INFINITY, f64::min),
            d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ));
    }
    let dense = || eigenvalues(op).map(|ev| (ev[0], ev[ev.len() - 1]));
    if op.dimension() <= LANCZOS_THRESHOLD {
        return dense();
    }
    match lanczos_extremal(op, LANCZOS_MAX_STEPS) {
        Err(Error::NoConvergence(_)) if op.dimension() <= DENSE_LIMIT => dense(),
        r => r,
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Lanczos with full reorthogonalization from a fixed start vector. Both
/// extremal Ritz values must reach residual `1e-11 ‖M‖`.
pub fn lanczos_extremal(op: &HermitianOperator, max_steps: usize) -> Result<(f64, f64)> {
    let n = op.dimension();
    let scale = op.norm_bound().max(f64::MIN_POSITIVE);
    let tol = 1e-11 * scale;
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + ((i as u64).wrapping_mul(2_654_435_761) % 1000) as f64 / 1000.0, 0.0))
        .collect();
    let v_norm = norm(&v);
    v.iter_mut().for_each(|x| *x /= v_norm);
    let mut basis: Vec<Vec<C64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let steps = max_steps.min(n);
    for m in 1..=steps {
        let q = &basis[m - 1];
        let mut w = op.apply(q)?;
        let a = dot(q, &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= y * c);
            }
        }
        let b = norm(&w);
        let check = m % 10 == 0 || m == steps || b <= tol;
        if check {
            let t = DMatrix::from_fn(m, m, |i, j| match i.abs_diff(j) {
                0 => alpha[i],
                1 => beta[i.min(j)],
                _ => 0.0,
            });
            let e = SymmetricEigen::new(t);
            let (mut lo, mut hi) = (0, 0);
            for j in 0..m {
                if e.eigenvalues[j] < e.eigenvalues[lo] {
                    lo = j;
                }
                if e.eigenvalues[j] > e.eigenvalues[hi] {
                    hi = j;
                }
            }
            let res = |j: usize| b * e.eigenvectors[(m - 1, j)].abs();
            if b <= tol || (res(lo) <= tol && res(hi) <= tol) {
                return Ok((e.eigenvalues[lo], e.eigenvalues[hi]));
            }
        }
        if m == steps {
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }
    Err(Error::NoConvergence(steps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
    Both,
}

/// Constants of `(1−ã)(deg+q) − k̃ ≤ Δ+q ≤ (1+ã)(deg+q) + k̃`, for the
/// sides named by `side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormConstants {
    pub a_tilde: f64,
    pub k_tilde: f64,
    pub side: Side,
}

impl FormConstants {
    pub fn new(a_tilde: f64, k_tilde: f64, side: Side) -> Result<Self> {
        check_a_tilde(a_tilde)?;
        if !(k_tilde >= 0.0) || !k_tilde.is_finite() {
            return Err(Error::InvalidParameter(format!("k̃ must be finite and non-negative, got {k_tilde}")));
        }
        Ok(FormConstants {
            a_tilde,
            k_tilde,
            side,
        })
    }
}

pub(crate) fn check_a_tilde(a_tilde: f64) -> Result<()> {
    if a_tilde > 0.0 && a_tilde < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("ã must lie in (0,1), got {a_tilde}")))
    }
}

fn side_ktilde(t: &HermitianOperator, d: &HermitianOperator, a_tilde: f64, lower: bool) -> Result<f64> {
    let diff = if lower {
        HermitianOperator::linear_combination(&[(1.0 - a_tilde, d), (-1.0, t)])?
    } else {
        HermitianOperator::linear_combination(&[(1.0, t), (-(1.0 + a_tilde), d)])?
    };
    Ok(extremal_eigenvalues(&diff)?.1.max(0.0))
}

/// Smallest `k̃` making the requested side(s) hold as matrix inequalities.
pub fn optimal_ktilde(
    graph: &Graph,
    potential: &Potential,
    phase: Option<&PhaseField>,
    a_tilde: f64,
    side: Side,
) -> Result<FormConstants> {
    check_a_tilde(a_tilde)?;
    let t = schrodinger(graph, potential, phase)?;
    let d = degree(graph, potential)?;
    let k_tilde = match side {
        Side::Lower => side_ktilde(&t, &d, a_tilde, true)?,
        Side::Upper => side_ktilde(&t, &d, a_tilde, false)?,
        Side::Both => side_ktilde(&t, &d, a_tilde, true)?.max(side_ktilde(&t, &d, a_tilde, false)?),
    };
    Ok(FormConstants {
        a_tilde,
        k_tilde,
        side,
    })
}

/// Per-index margins of the eigenvalue sandwich; an empty vector for a side
/// the constants do not claim.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichMargins {
    /// `λ_n(Δ+q) − ((1−ã) λ_n(deg+q) − k̃)`.
    pub lower: Vec<f64>,
    /// `(1+ã) λ_n(deg+q) + k̃ − λ_n(Δ+q)`.
    pub upper: Vec<f64>,
}

impl SandwichMargins {
    pub fn min(&self) -> f64 {
        self.lower.iter().chain(&self.upper).copied().fold(f64::INFINITY, f64::min)
    }
}

/// Sandwich margins from precomputed sorted spectra of `Δ+q` and `deg+q`.
pub fn sandwich_margins(ev: &[f64], dv: &[f64], c: &FormConstants) -> SandwichMargins {
    let lower = matches!(c.side, Side::Lower | Side::Both);
    let upper = matches!(c.side, Side::Upper | Side::Both);
    SandwichMargins {
        lower: if lower {
            ev.iter().zip(dv).map(|(l, d)| l - ((1.0 - c.a_tilde) * d - c.k_tilde)).collect()
        } else {
            Vec::new()
        },
        upper: if upper {
            ev.iter().zip(dv).map(|(l, d)| (1.0 + c.a_tilde) * d + c.k_tilde - l).collect()
        } else {
            Vec::new()
        },
    }
}

pub fn verify_sandwich(graph: &Graph, potential: &Potential, constants: &FormConstants) -> Result<SandwichMargins> {
    let ev = eigenvalues(&schrodinger(graph, potential, None)?)?;
    let dv = eigenvalues(&degree(graph, potential)?)?;
    Ok(sandwich_margins(&ev, &dv, constants))
}

/// `λ_min` of `(Δ+q) − (1−s)(deg+q)` and of `(1+s)(deg+q) − (Δ+q)` on the
/// coordinates of `region`, with `s = √(1−α²)`.
pub fn cheeger_form_margins(graph: &Graph, potential: &Potential, region: &[usize], alpha: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("α must lie in [0,1], got {alpha}")));
    }
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let s = (1.0 - alpha * alpha).sqrt();
    let t = schrodinger(graph, potential, None)?;
    let d = degree(graph, potential)?;
    let lower = HermitianOperator::linear_combination(&[(1.0, &t), (-(1.0 - s), &d)])?.principal_submatrix(region)?;
    let upper = HermitianOperator::linear_combination(&[(1.0 + s, &d), (-1.0, &t)])?.principal_submatrix(region)?;
    Ok((extremal_eigenvalues(&lower)?.0, extremal_eigenvalues(&upper)?.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioEntry {
    pub index: usize,
    pub eigenvalue: f64,
    pub diag_eigenvalue: f64,
    /// `None` when `λ_n(deg+q) ≤ 0`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub a_tilde: f64,
    pub k_lower: f64,
    pub k_upper: f64,
    /// Interval guaranteed by the optimal constants for every reported
    /// ratio: `[min (1−ã) − k̃_l/d_n, max (1+ã) + k̃_u/d_n]`.
    pub certified: (f64, f64),
    /// Whether every reported ratio lies in `[1−ã, 1+ã]`.
    pub ratios_within_unit_band: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub diag_eigenvalues: Vec<f64>,
    pub ratios: Vec<RatioEntry>,
    pub brackets: Vec<Bracket>,
    /// Index into `brackets` of the narrowest certified interval.
    pub best_bracket: Option<usize>,
    pub verified: Vec<Check>,
    pub norm_bound: f64,
}

pub const DEFAULT_A_TILDE_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

pub fn ratio_report(
    graph: &Graph,
    potential: &Potential,
    phase: Option<&PhaseField>,
    top_m: usize,
    a_tilde_grid: &[f64],
) -> Result<SpectralReport> {
    let n = graph.vertex_count();
    if top_m > n {
        return Err(Error::InvalidParameter(format!("top_m = {top_m} exceeds dimension {n}")));
    }
    for &a in a_tilde_grid {
        check_a_tilde(a)?;
    }
    let t = schrodinger(graph, potential, phase)?;
    let d = degree(graph, potential)?;
    let pairs = eigenpairs(&t)?;
    let norm_bound = t.norm_bound();
    let residual = pairs.max_residual(&t)?;
    let trace: f64 = t.diagonal().iter().sum();
    let ev = pairs.values;
    let dv = eigenvalues(&d)?;

    let ratios: Vec<RatioEntry> = (n - top_m..n)
        .map(|i| RatioEntry {
            index: i,
            eigenvalue: ev[i],
            diag_eigenvalue: dv[i],
            ratio: (dv[i] > 0.0).then(|| ev[i] / dv[i]),
        })
        .collect();

    let constants: Vec<(f64, f64)> = a_tilde_grid
        .par_iter()
        .map(|&a| Ok((side_ktilde(&t, &d, a, true)?, side_ktilde(&t, &d, a, false)?)))
        .collect::<Result<_>>()?;

    let mut verified = vec![
        Check {
            id: "eigen_residual".into(),
            margin: 1e-8 * norm_bound - residual,
        },
        Check {
            id: "eigen_trace".into(),
            margin: 1e-8 * norm_bound * n as f64 - (ev.iter().sum::<f64>() - trace).abs(),
        },
    ];
    let mut brackets = Vec::with_capacity(a_tilde_grid.len());
    for (&a, &(kl, ku)) in a_tilde_grid.iter().zip(&constants) {
        let margins = sandwich_margins(
            &ev,
            &dv,
            &FormConstants {
                a_tilde: a,
                k_tilde: kl,
                side: Side::Lower,
            },
        );
        let upper = sandwich_margins(
            &ev,
            &dv,
            &FormConstants {
                a_tilde: a,
                k_tilde: ku,
                side: Side::Upper,
            },
        );
        verified.push(Check {
            id: format!("sandwich_lower[{a}]"),
            margin: margins.min(),
        });
        verified.push(Check {
            id: format!("sandwich_upper[{a}]"),
            margin: upper.min(),
        });
        let used: Vec<&RatioEntry> = ratios.iter().filter(|r| r.ratio.is_some()).collect();
        let lo = used
            .iter()
            .map(|r| (1.0 - a) - kl / r.diag_eigenvalue)
            .fold(f64::INFINITY, f64::min);
        let hi = used
            .iter()
            .map(|r| (1.0 + a) + ku / r.diag_eigenvalue)
            .fold(f64::NEG_INFINITY, f64::max);
        brackets.push(Bracket {
            a_tilde: a,
            k_lower: kl,
            k_upper: ku,
            certified: (lo, hi),
            ratios_within_unit_band: used
                .iter()
                .all(|r| (1.0 - a..=1.0 + a).contains(&r.ratio.unwrap())),
        });
    }
    let best_bracket = brackets
        .iter()
        .enumerate()
        .filter(|(_, b)| b.certified.0.is_finite() && b.certified.1.is_finite())
        .min_by(|(_, x), (_, y)| (x.certified.1 - x.certified.0).total_cmp(&(y.certified.1 - y.certified.0)))
        .map(|(i, _)| i);
    Ok(SpectralReport {
        eigenvalues: ev,
        diag_eigenvalues: dv,
        ratios,
        brackets,
        best_bracket,
        verified,
        norm_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_basic, BasicKind};

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn small_spectra() {
        let p2 = make_basic(&BasicKind::Path(2)).unwrap();
        let k3 = make_basic(&BasicKind::Complete(3)).unwrap();
        let ev = |g: &Graph| eigenvalues(&schrodinger(g, &Potential::zeros(g.vertex_count()), None).unwrap()).unwrap();
        assert!(close(&ev(&p2), &[0.0, 2.0]));
        assert!(close(&ev(&k3), &[0.0, 3.0, 3.0]));
        let q = Potential::new(vec![0.5, -2.0, 1.0]);
        assert_eq!(eigenvalues(&degree(&k3, &q).unwrap()).unwrap(), vec![0.0, 2.5, 3.0]);
    }

    #[test]
    fn one_edge_form_constants() {
        let p2 = make_basic(&BasicKind::Path(2)).unwrap();
        let z = Potential::zeros(2);
        let lo = optimal_ktilde(&p2, &z, None, 0.5, Side::Lower).unwrap();
        let up = optimal_ktilde(&p2, &z, None, 0.5, Side::Upper).unwrap();
        assert!((lo.k_tilde - 0.5).abs() < 1e-12);
        assert!((up.k_tilde - 0.5).abs() < 1e-12);
        assert!(optimal_ktilde(&p2, &z, None, 1.0, Side::Lower).is_err());
    }

    #[test]
    fn edgeless_sandwich_margins() {
        let g = Graph::from_edges(3, []).unwrap().with_host_degrees(vec![1, 2, 4]).unwrap();
        let q = Potential::new(vec![0.5, 1.0, 0.0]);
        let c = FormConstants::new(0.3, 0.0, Side::Both).unwrap();
        let m = verify_sandwich(&g, &q, &c).unwrap();
        let dv = [1.5, 3.0, 4.0];
        for i in 0..3 {
            assert!((m.lower[i] - 0.3 * dv[i]).abs() < 1e-12);
            assert!((m.upper[i] - 0.3 * dv[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn lanczos_matches_dense() {
        let g = crate::generators::grid(15, 20).unwrap();
        let q = Potential::new((0..300).map(|x| ((x * 37) % 11) as f64 / 3.0 - 1.0).collect());
        let t = schrodinger(&g, &q, None).unwrap();
        let d = degree(&g, &q).unwrap();
        let diff = HermitianOperator::linear_combination(&[(0.7, &d), (-1.0, &t)]).unwrap();
        let dense = eigenvalues(&diff).unwrap();
        let (lo, hi) = lanczos_extremal(&diff, 300).unwrap();
        assert!((lo - dense[0]).abs() < 1e-8, "{lo} {}", dense[0]);
        assert!((hi - dense[299]).abs() < 1e-8, "{hi} {}", dense[299]);
    }

    #[test]
    fn residuals_and_order() {
        let g = make_basic(&BasicKind::Cycle(7)).unwrap();
        let phase = PhaseField::from_edge_values(&g, (0..7).map(|i| i as f64 * 0.9).collect()).unwrap();
        let t = schrodinger(&g, &Potential::constant(7, 0.25), Some(&phase)).unwrap();
        let pairs = eigenpairs(&t).unwrap();
        assert!(pairs.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(pairs.max_residual(&t).unwrap() < 1e-10);
    }
}

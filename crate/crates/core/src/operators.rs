//! Finite Hermitian matrices of `Δ + q`, `deg + q` and `Δ_θ + q`.
//!
//! Diagonals always use host degrees, so a truncation carries its Dirichlet
//! boundary on the diagonal.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::graph::{Graph, PhaseField, Potential};

pub type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Schrodinger,
    Degree,
    Magnetic,
    /// Linear combination or restriction of assembled operators.
    Derived,
}

/// Sparse Hermitian matrix: a real diagonal and the entries `(x, y, m_xy)`
/// with `x < y`; `m_yx` is the conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    kind: OperatorKind,
    diagonal: Vec<f64>,
    upper: Vec<(usize, usize, C64)>,
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// `e^{iθ}`, exact for angles congruent to 0 or π.
fn unit_phase(t: f64) -> C64 {
    let w = t.rem_euclid(2.0 * std::f64::consts::PI);
    if w == 0.0 {
        C64::new(1.0, 0.0)
    } else if w == std::f64::consts::PI {
        C64::new(-1.0, 0.0)
    } else {
        C64::from_polar(1.0, t)
    }
}

pub fn assemble(
    graph: &Graph,
    potential: &Potential,
    phase: Option<&PhaseField>,
    kind: OperatorKind,
) -> Result<HermitianOperator> {
    potential.check_for(graph)?;
    let diagonal: Vec<f64> = (0..graph.vertex_count())
        .map(|x| graph.host_degree(x) as f64 + potential.value(x))
        .collect();
    let upper = match (kind, phase) {
        (OperatorKind::Degree, None) => Vec::new(),
        (OperatorKind::Schrodinger, None) => graph
            .edges()
            .iter()
            .map(|&(x, y)| (x, y, C64::new(-1.0, 0.0)))
            .collect(),
        (OperatorKind::Magnetic, Some(phase)) => {
            phase.check_for(graph)?;
            graph
                .edges()
                .iter()
                .zip(phase.edge_values())
                .map(|(&(x, y), &t)| (x, y, -unit_phase(t)))
                .collect()
        }
        (OperatorKind::Derived, _) => {
            return Err(Error::InvalidParameter("derived operators are not assembled".into()))
        }
        _ => return Err(Error::PhaseKindMismatch),
    };
    Ok(HermitianOperator {
        kind,
        diagonal,
        upper,
    })
}

/// `Δ_θ + q` when a non-trivial phase is given, `Δ + q` otherwise.
pub fn schrodinger(graph: &Graph, potential: &Potential, phase: Option<&PhaseField>) -> Result<HermitianOperator> {
    match phase {
        Some(p) if !p.is_trivial() => assemble(graph, potential, Some(p), OperatorKind::Magnetic),
        _ => assemble(graph, potential, None, OperatorKind::Schrodinger),
    }
}

pub fn degree(graph: &Graph, potential: &Potential) -> Result<HermitianOperator> {
    assemble(graph, potential, None, OperatorKind::Degree)
}

impl HermitianOperator {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn upper_entries(&self) -> &[(usize, usize, C64)] {
        &self.upper
    }

    pub fn is_real(&self) -> bool {
        self.upper.iter().all(|(_, _, m)| m.im == 0.0)
    }

    pub fn entry(&self, x: usize, y: usize) -> C64 {
        if x == y {
            return C64::new(self.diagonal[x], 0.0);
        }
        let (a, b) = (x.min(y), x.max(y));
        let m = self
            .upper
            .iter()
            .find(|&&(u, v, _)| (u, v) == (a, b))
            .map_or(C64::new(0.0, 0.0), |e| e.2);
        if x < y {
            m
        } else {
            m.conj()
        }
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let mut rows: Vec<f64> = self.diagonal.iter().map(|d| d.abs()).collect();
        for &(x, y, m) in &self.upper {
            rows[x] += m.norm();
            rows[y] += m.norm();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dimension();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.diagonal.iter().map(|&d| C64::new(d, 0.0)),
        ));
        for &(x, y, v) in &self.upper {
            m[(x, y)] += v;
            m[(y, x)] += v.conj();
        }
        m
    }

    /// Real symmetric form, when every off-diagonal entry is real.
    pub fn to_dense_real(&self) -> Option<DMatrix<f64>> {
        if !self.is_real() {
            return None;
        }
        let n = self.dimension();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        for &(x, y, v) in &self.upper {
            m[(x, y)] += v.re;
            m[(y, x)] += v.re;
        }
        debug_assert_eq!(m.nrows(), n);
        Some(m)
    }

    pub fn apply(&self, f: &[C64]) -> Result<Vec<C64>> {
        check_len(self.dimension(), f.len())?;
        let mut out: Vec<C64> = f.iter().zip(&self.diagonal).map(|(v, d)| v * d).collect();
        for &(x, y, m) in &self.upper {
            out[x] += m * f[y];
            out[y] += m.conj() * f[x];
        }
        Ok(out)
    }

    pub fn apply_real(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dimension(), f.len())?;
        let mut out: Vec<f64> = f.iter().zip(&self.diagonal).map(|(v, d)| v * d).collect();
        for &(x, y, m) in &self.upper {
            out[x] += m.re * f[y];
            out[y] += m.re * f[x];
        }
        Ok(out)
    }

    /// `⟨f, M f⟩` from the matrix entries.
    fn matrix_form(&self, f: &[C64]) -> f64 {
        let diag: f64 = f.iter().zip(&self.diagonal).map(|(v, d)| d * v.norm_sqr()).sum();
        let off: f64 = self
            .upper
            .iter()
            .map(|&(x, y, m)| 2.0 * (f[x].conj() * m * f[y]).re)
            .sum();
        diag + off
    }

    /// `Σ_{x<y} |m_xy| |f(x) + (m_xy/|m_xy|) f(y)|² + Σ_x (m_xx - Σ_y |m_xy|) |f(x)|²`,
    /// which for `Δ_θ + q` is the edge sum `Σ |f(x) - e^{iθ} f(y)|²` plus
    /// `Σ (q + deficit) |f|²`.
    fn edge_sum_form(&self, f: &[C64]) -> f64 {
        let mut rest = self.diagonal.clone();
        let mut total = 0.0;
        for &(x, y, m) in &self.upper {
            let w = m.norm();
            if w == 0.0 {
                continue;
            }
            total += w * (f[x] + (m / w) * f[y]).norm_sqr();
            rest[x] -= w;
            rest[y] -= w;
        }
        total + f.iter().zip(&rest).map(|(v, d)| d * v.norm_sqr()).sum::<f64>()
    }

    /// `⟨f, M f⟩`. For assembled Schrödinger and magnetic operators the value
    /// is cross-checked against the edge-sum expression.
    pub fn quad_form(&self, f: &[C64]) -> Result<f64> {
        check_len(self.dimension(), f.len())?;
        let value = self.matrix_form(f);
        if matches!(self.kind, OperatorKind::Schrodinger | OperatorKind::Magnetic) {
            let other = self.edge_sum_form(f);
            let scale = self.norm_bound() * f.iter().map(|v| v.norm_sqr()).sum::<f64>();
            if (value - other).abs() > 1e-10 * (1.0 + scale) {
                return Err(Error::InvalidParameter(format!(
                    "quadratic form mismatch: matrix {value}, edge sum {other}"
                )));
            }
        }
        Ok(value)
    }

    pub fn quad_form_real(&self, f: &[f64]) -> Result<f64> {
        let f: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.quad_form(&f)
    }

    /// `Σ c_i M_i` over operators of equal dimension.
    pub fn linear_combination(terms: &[(f64, &HermitianOperator)]) -> Result<HermitianOperator> {
        let n = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty combination".into()))?
            .1
            .dimension();
        let mut diagonal = vec![0.0; n];
        let mut upper: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for &(c, op) in terms {
            check_len(n, op.dimension())?;
            for (d, v) in diagonal.iter_mut().zip(&op.diagonal) {
                *d += c * v;
            }
            for &(x, y, m) in &op.upper {
                *upper.entry((x, y)).or_insert(C64::new(0.0, 0.0)) += m * c;
            }
        }
        Ok(HermitianOperator {
            kind: OperatorKind::Derived,
            diagonal,
            upper: upper
                .into_iter()
                .filter(|(_, m)| *m != C64::new(0.0, 0.0))
                .map(|((x, y), m)| (x, y, m))
                .collect(),
        })
    }

    /// Compression to the coordinates in `indices` (kept in the given order).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<HermitianOperator> {
        let n = self.dimension();
        let mut local = vec![usize::MAX; n];
        for (i, &x) in indices.iter().enumerate() {
            if x >= n {
                return Err(Error::VertexOutOfRange {
                    index: x,
                    vertex_count: n,
                });
            }
            local[x] = i;
        }
        let mut upper = Vec::new();
        for &(x, y, m) in &self.upper {
            let (i, j) = (local[x], local[y]);
            if i == usize::MAX || j == usize::MAX {
                continue;
            }
            if i < j {
                upper.push((i, j, m));
            } else {
                upper.push((j, i, m.conj()));
            }
        }
        upper.sort_by_key(|e| (e.0, e.1));
        Ok(HermitianOperator {
            kind: OperatorKind::Derived,
            diagonal: indices.iter().map(|&x| self.diagonal[x]).collect(),
            upper,
        })
    }
}

/// Largest entrywise deviation of `Δ_θ + Δ_{θ+π} − 2 deg`.
pub fn upside_down_identity(graph: &Graph, phase: &PhaseField) -> Result<f64> {
    let zero = Potential::zeros(graph.vertex_count());
    let a = assemble(graph, &zero, Some(phase), OperatorKind::Magnetic)?;
    let b = assemble(graph, &zero, Some(&phase.shifted(std::f64::consts::PI)), OperatorKind::Magnetic)?;
    let d = degree(graph, &zero)?;
    let diff = HermitianOperator::linear_combination(&[(1.0, &a), (1.0, &b), (-2.0, &d)])?;
    let diag = diff.diagonal.iter().map(|v| v.abs());
    let off = diff.upper.iter().map(|e| e.2.norm());
    Ok(diag.chain(off).fold(0.0, f64::max))
}

/// `⟨f, (Δ_θ + q) f⟩ − ⟨|f|, (Δ + q) |f|⟩`.
pub fn kato_gap(graph: &Graph, potential: &Potential, phase: &PhaseField, f: &[C64]) -> Result<f64> {
    check_len(graph.vertex_count(), f.len())?;
    let magnetic = assemble(graph, potential, Some(phase), OperatorKind::Magnetic)?;
    let plain = assemble(graph, potential, None, OperatorKind::Schrodinger)?;
    let modulus: Vec<f64> = f.iter().map(|v| v.norm()).collect();
    Ok(magnetic.quad_form(f)? - plain.quad_form_real(&modulus)?)
}

//! Exhaustive subset enumeration, the reference for the cut-based solvers.

use crate::error::{Error, Result};
use crate::graph::{Graph, Potential};

pub const ENUMERATION_LIMIT: usize = 22;

pub(crate) struct Enumerator {
    adj: Vec<u32>,
    host: Vec<f64>,
    q: Vec<f64>,
    q_plus: Vec<f64>,
}

impl Enumerator {
    /// Restricts enumeration to `region` (global vertex ids, local bit `i`
    /// is `region[i]`). Degrees and boundaries stay those of the full graph.
    pub fn new(graph: &Graph, potential: &Potential, region: &[usize]) -> Result<Self> {
        if region.len() > ENUMERATION_LIMIT {
            return Err(Error::TooLargeForEnumeration {
                size: region.len(),
                limit: ENUMERATION_LIMIT,
            });
        }
        let mut local = vec![usize::MAX; graph.vertex_count()];
        for (i, &x) in region.iter().enumerate() {
            local[x] = i;
        }
        let adj = region
            .iter()
            .map(|&x| {
                graph
                    .neighbors(x)
                    .iter()
                    .filter(|&&y| local[y] != usize::MAX)
                    .fold(0u32, |m, &y| m | (1 << local[y]))
            })
            .collect();
        Ok(Enumerator {
            adj,
            host: region.iter().map(|&x| graph.host_degree(x) as f64).collect(),
            q: region.iter().map(|&x| potential.value(x)).collect(),
            q_plus: region.iter().map(|&x| potential.plus(x)).collect(),
        })
    }

    /// Returns `(2|E_W|, |∂W|, deg(W), q(W), q₊(W), |W|)` for a local mask.
    fn counts(&self, w: u32) -> (f64, f64, f64, f64, f64, u32) {
        let mut e2 = 0u32;
        let (mut deg, mut q, mut qp) = (0.0, 0.0, 0.0);
        let mut bits = w;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            e2 += (self.adj[i] & w).count_ones();
            deg += self.host[i];
            q += self.q[i];
            qp += self.q_plus[i];
        }
        let e2 = e2 as f64;
        (e2, deg - e2, deg, q, qp, w.count_ones())
    }

    /// Best nonempty local mask under `score`; ties (within a relative
    /// 1e-12) go to the smaller set, then the lexicographically smaller one.
    fn best_by(&self, maximize: bool, score: impl Fn(&Self, u32) -> f64) -> (u32, f64) {
        let n = self.adj.len();
        let mut best: Option<(u32, f64)> = None;
        for w in 1u32..(1u32 << n) {
            let s = score(self, w);
            let replace = match best {
                None => true,
                Some((bw, bs)) => {
                    let tol = 1e-12 * (1.0 + bs.abs());
                    let strictly = if maximize { s > bs + tol } else { s < bs - tol };
                    strictly || ((s - bs).abs() <= tol && tie_break_prefers(w, bw))
                }
            };
            if replace {
                best = Some((w, s));
            }
        }
        best.expect("region is nonempty")
    }

    pub fn max_sparseness_ratio(&self, a: f64) -> (u32, f64) {
        self.best_by(true, |en, w| {
            let (e2, bnd, _, _, qp, size) = en.counts(w);
            (e2 - a * (bnd + qp)) / size as f64
        })
    }

    pub fn min_cheeger_ratio(&self) -> (u32, f64) {
        self.best_by(false, |en, w| {
            let (_, bnd, deg, q, _, _) = en.counts(w);
            let den = deg + q;
            if den == 0.0 {
                0.0
            } else {
                (bnd + q) / den
            }
        })
    }
}

fn tie_break_prefers(candidate: u32, incumbent: u32) -> bool {
    let (c, i) = (candidate.count_ones(), incumbent.count_ones());
    if c != i {
        return c < i;
    }
    let diff = candidate ^ incumbent;
    diff != 0 && candidate & (1 << diff.trailing_zeros()) != 0
}

pub(crate) fn mask_to_vertices(region: &[usize], w: u32) -> Vec<usize> {
    let mut out: Vec<usize> = (0..region.len())
        .filter(|&i| w & (1 << i) != 0)
        .map(|i| region[i])
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_break_order() {
        assert!(tie_break_prefers(0b001, 0b011));
        assert!(tie_break_prefers(0b011, 0b110));
        assert!(!tie_break_prefers(0b110, 0b011));
        assert!(!tie_break_prefers(0b101, 0b101));
    }
}

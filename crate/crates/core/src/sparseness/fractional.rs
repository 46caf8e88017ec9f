//! Maximization of cut-structured set ratios by Dinkelbach iteration.
//!
//! The ratios handled here have the form
//!
//! ```text
//!   N(W) = Σ_{x∈W} num(x) + num_cut · cut(W)
//!   D(W) = Σ_{x∈W} den(x) + den_cut · cut(W)
//! ```
//!
//! where `cut(W)` counts network edges with exactly one end in `W`. For a
//! current best set with ratio `rn / rd`, the linearized objective
//! `rd·N(W) - rn·D(W)` is a vertex-weighted cut function that is maximized
//! exactly by a minimum s-t cut. The iteration stops when no set strictly
//! beats the incumbent.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::flow::{Capacity, FlowNetwork};

pub(crate) trait Scalar: Capacity + Debug {
    const EXACT: bool;
    fn mul(self, o: Self) -> Result<Self>;
    fn plus(self, o: Self) -> Result<Self>;
    fn neg(self) -> Self;
    fn abs(self) -> Self;
    fn to_f64(self) -> f64;
    fn one() -> Self;
    fn from_count(n: usize) -> Self;
    /// `self * factor` for floats; zero on the exact path.
    fn relative(self, factor: f64) -> Self;
}

impl Scalar for i128 {
    const EXACT: bool = true;
    fn mul(self, o: Self) -> Result<Self> {
        self.checked_mul(o).ok_or(Error::Overflow)
    }
    fn plus(self, o: Self) -> Result<Self> {
        self.checked_add(o).ok_or(Error::Overflow)
    }
    fn neg(self) -> Self {
        -self
    }
    fn abs(self) -> Self {
        self.abs()
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn one() -> Self {
        1
    }
    fn from_count(n: usize) -> Self {
        n as i128
    }
    fn relative(self, _factor: f64) -> Self {
        0
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn mul(self, o: Self) -> Result<Self> {
        Ok(self * o)
    }
    fn plus(self, o: Self) -> Result<Self> {
        Ok(self + o)
    }
    fn neg(self) -> Self {
        -self
    }
    fn abs(self) -> Self {
        self.abs()
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn one() -> Self {
        1.0
    }
    fn from_count(n: usize) -> Self {
        n as f64
    }
    fn relative(self, factor: f64) -> Self {
        self * factor
    }
}

/// Float iteration cap; the exact path terminates on its own but is capped
/// far higher as a guard.
pub(crate) const FLOAT_ITERATION_CAP: usize = 64;
const EXACT_ITERATION_CAP: usize = 10_000;

#[derive(Debug, Clone)]
pub(crate) struct RatioProblem<T> {
    pub num: Vec<T>,
    pub num_cut: T,
    pub den: Vec<T>,
    pub den_cut: T,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub(crate) struct RatioOptimum {
    pub mask: Vec<bool>,
}

impl<T: Scalar> RatioProblem<T> {
    fn len(&self) -> usize {
        self.num.len()
    }

    pub fn evaluate(&self, mask: &[bool]) -> Result<(T, T)> {
        let mut n = T::zero();
        let mut d = T::zero();
        for x in (0..self.len()).filter(|&x| mask[x]) {
            n = n.plus(self.num[x])?;
            d = d.plus(self.den[x])?;
        }
        let mut cut = T::zero();
        for &(u, v) in &self.edges {
            if mask[u] != mask[v] {
                cut = cut.plus(T::one())?;
            }
        }
        Ok((n.plus(self.num_cut.mul(cut)?)?, d.plus(self.den_cut.mul(cut)?)?))
    }

    /// `max_W Σ_{x∈W} value(x) - penalty · cut(W)` with the minimal
    /// maximizing set.
    fn best_closure(&self, value: &[T], penalty: T) -> Result<(T, Vec<bool>)> {
        let n = self.len();
        let (s, t) = (n, n + 1);
        let mut scale = penalty.abs();
        for &v in value {
            if v.abs() > scale {
                scale = v.abs();
            }
        }
        let eps = scale.relative(1e-13);
        let mut net = FlowNetwork::new(n + 2, eps);
        let mut positive = T::zero();
        for (x, &v) in value.iter().enumerate() {
            if v > T::zero() {
                net.add_arc(s, x, v);
                positive = positive.plus(v)?;
            } else if v < T::zero() {
                net.add_arc(x, t, v.neg());
            }
        }
        if penalty > T::zero() {
            for &(u, v) in &self.edges {
                net.add_edge(u, v, penalty);
            }
        }
        let flow = net.max_flow(s, t);
        let mut side = net.source_side(s);
        side.truncate(n);
        Ok((positive - flow, side))
    }

    /// Dinkelbach from the nonempty incumbent `start` with `D(start) > 0`.
    pub fn maximize(&self, start: Vec<bool>) -> Result<RatioOptimum> {
        let cap = if T::EXACT {
            EXACT_ITERATION_CAP
        } else {
            FLOAT_ITERATION_CAP
        };
        let mut best = start;
        let (mut rn, mut rd) = self.evaluate(&best)?;
        if !(rd > T::zero()) {
            return Err(Error::InvalidParameter(
                "ratio iteration needs a start set with positive denominator".into(),
            ));
        }
        for _ in 0..cap {
            let mut value = Vec::with_capacity(self.len());
            let mut magnitude = 0.0f64;
            for x in 0..self.len() {
                let v = rd.mul(self.num[x])?.plus(rn.mul(self.den[x])?.neg())?;
                magnitude += v.to_f64().abs();
                value.push(v);
            }
            let penalty = rn.mul(self.den_cut)?.plus(rd.mul(self.num_cut)?.neg())?;
            if penalty < T::zero() {
                return Err(Error::InvalidParameter(
                    "cut coefficient has the wrong sign for a min-cut subproblem".into(),
                ));
            }
            let (gain, mask) = self.best_closure(&value, penalty)?;
            let threshold = if T::EXACT {
                0.0
            } else {
                1e-12 * (magnitude + penalty.to_f64() * self.edges.len() as f64 + 1.0)
            };
            if !(gain.to_f64() > threshold) || !mask.iter().any(|&b| b) {
                return Ok(RatioOptimum { mask: best });
            }
            let (n, d) = self.evaluate(&mask)?;
            if !(d > T::zero()) {
                return Err(Error::InvalidParameter(
                    "improving set has a non-positive denominator".into(),
                ));
            }
            let improved = if T::EXACT {
                n.mul(rd)? > rn.mul(d)?
            } else {
                let (new, old) = (n.to_f64() / d.to_f64(), rn.to_f64() / rd.to_f64());
                new > old + 1e-15 * (1.0 + old.abs())
            };
            if !improved {
                return Ok(RatioOptimum { mask: best });
            }
            best = mask;
            rn = n;
            rd = d;
        }
        Err(Error::NoConvergence(cap))
    }
}

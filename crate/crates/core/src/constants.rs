//! Closed-form conversions between sparseness constants, form bounds,
//! Cheeger constants and spectral-edge bounds.

use crate::error::{Error, Result};
use crate::spectra::{check_a_tilde, FormConstants, Side};

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and non-negative, got {v}")))
    }
}

/// Form bound `(ã, k̃)` to the (a,k)-sparseness it implies:
/// `a = ã/(1−ã)`, `k = k̃/(1−ã)`.
pub fn form_to_sparse(a_tilde: f64, k_tilde: f64) -> Result<(f64, f64)> {
    check_a_tilde(a_tilde)?;
    non_negative("k̃", k_tilde)?;
    Ok((a_tilde / (1.0 - a_tilde), k_tilde / (1.0 - a_tilde)))
}

/// Two-sided form bound implied by (a,k)-sparseness.
///
/// For `a = 0` the caller picks `ã ∈ (0,1)` and `k̃ = (k/2)(1/ã − ã)`. For
/// `a > 0`, `ã` is determined by `a` and the supplied value is ignored.
pub fn sparse_to_form(a: f64, k: f64, a_tilde: Option<f64>) -> Result<FormConstants> {
    non_negative("a", a)?;
    non_negative("k", k)?;
    if a == 0.0 {
        let at = a_tilde.ok_or_else(|| Error::InvalidParameter("ã is required when a = 0".into()))?;
        check_a_tilde(at)?;
        return FormConstants::new(at, (k / 2.0) * (1.0 / at - at), Side::Both);
    }
    let at = ((a * a).min(0.25) + 2.0 * a + a * a).sqrt() / (1.0 + a);
    let kt = ((1.5f64).max(1.0 / a - a) * k / (2.0 * (1.0 + a))).max(2.0 * k * (1.0 - at));
    FormConstants::new(at, kt, Side::Both)
}

/// Transports a lower bound `(1−a) Q₂ − k ≤ Q₁` through a perturbation
/// `q ≤ α Q₁ + C`, returning `(slope, offset)` of
/// `slope (Q₂ − q) − offset ≤ Q₁ − q`.
pub fn perturb(a: f64, k: f64, alpha: f64, c: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter(format!("a must lie in (0,1), got {a}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("α must lie in (0,1), got {alpha}")));
    }
    non_negative("k", k)?;
    non_negative("C", c)?;
    let den = 1.0 - alpha * (1.0 - a);
    Ok(((1.0 - alpha) * (1.0 - a) / den, ((1.0 - alpha) * k + a * c) / den))
}

/// Slopes `1 ∓ √(1 − α²)` of the two-sided bound by `deg + q` on a region
/// with Cheeger constant `α`.
pub fn cheeger_to_form(alpha: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("α must lie in [0,1), got {alpha}")));
    }
    let s = (1.0 - alpha * alpha).sqrt();
    Ok((1.0 - s, 1.0 + s))
}

/// Spectral-edge bounds for a k-sparse graph with `d ≤ deg + q ≤ D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBounds {
    /// `max(0, d − 2√((k/2)(d − k/2)))`.
    pub bottom: f64,
    /// `D + 2√((k/2)(D − k/2))`, when `D` was given.
    pub top: Option<f64>,
}

pub fn cor13(d: f64, k: f64, big_d: Option<f64>) -> Result<EdgeBounds> {
    non_negative("d", d)?;
    non_negative("k", k)?;
    let root = |m: f64, name: &str| -> Result<f64> {
        if k / 2.0 > m {
            return Err(Error::InvalidParameter(format!("k/2 = {} exceeds {name} = {m}", k / 2.0)));
        }
        Ok(((k / 2.0) * (m - k / 2.0)).sqrt())
    };
    let bottom = (d - 2.0 * root(d, "d")?).max(0.0);
    let top = match big_d {
        Some(m) => {
            non_negative("D", m)?;
            if m < d {
                return Err(Error::InvalidParameter(format!("D = {m} is below d = {d}")));
            }
            Some(m + 2.0 * root(m, "D")?)
        }
        None => None,
    };
    Ok(EdgeBounds { bottom, top })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conversion {
    FormToSparse { a_tilde: f64, k_tilde: f64 },
    SparseToForm { a: f64, k: f64, a_tilde: Option<f64> },
    Perturb { a: f64, k: f64, alpha: f64, c: f64 },
    CheegerToForm { alpha: f64 },
    Cor13 { d: f64, k: f64, big_d: Option<f64> },
}

/// Named outputs of a conversion, in a fixed order.
pub fn convert_constants(conversion: Conversion) -> Result<Vec<(&'static str, f64)>> {
    Ok(match conversion {
        Conversion::FormToSparse { a_tilde, k_tilde } => {
            let (a, k) = form_to_sparse(a_tilde, k_tilde)?;
            vec![("a", a), ("k", k)]
        }
        Conversion::SparseToForm { a, k, a_tilde } => {
            let c = sparse_to_form(a, k, a_tilde)?;
            vec![("a_tilde", c.a_tilde), ("k_tilde", c.k_tilde)]
        }
        Conversion::Perturb { a, k, alpha, c } => {
            let (slope, offset) = perturb(a, k, alpha, c)?;
            vec![("slope", slope), ("offset", offset)]
        }
        Conversion::CheegerToForm { alpha } => {
            let (lo, hi) = cheeger_to_form(alpha)?;
            vec![("lower_slope", lo), ("upper_slope", hi)]
        }
        Conversion::Cor13 { d, k, big_d } => {
            let b = cor13(d, k, big_d)?;
            let mut out = vec![("bottom", b.bottom)];
            out.extend(b.top.map(|t| ("top", t)));
            out
        }
    })
}

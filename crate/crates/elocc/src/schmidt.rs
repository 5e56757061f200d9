//! Schmidt spectra: descending-ordered, normalized squared Schmidt coefficients.
//!
//! A [`SchmidtVector`] is the common currency of every convertibility test in
//! this crate. Construction goes through [`normalize_descending`] (or
//! [`SchmidtVector::new`] for already-clean data) so the invariants hold by
//! construction: entries strictly positive, sorted descending, summing to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation threshold for squared Schmidt coefficients.
///
/// Weights below the double-precision noise floor of a normalized spectrum
/// carry no reproducible information; weights down to ~1e-16 do, and the
/// near-critical interception signal lives in them.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-16;

/// Tolerance on the sum-to-one invariant.
pub const NORM_TOL: f64 = 1e-10;

/// Descending-ordered, normalized list of squared Schmidt coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchmidtVector {
    coeffs: Vec<f64>,
}

impl SchmidtVector {
    /// Validate an already sorted and normalized coefficient list.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSchmidt("empty coefficient list".into()));
        }
        if coeffs.iter().any(|&c| !c.is_finite() || c <= 0.0) {
            return Err(Error::InvalidSchmidt(
                "coefficients must be finite and strictly positive".into(),
            ));
        }
        if coeffs.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSchmidt("coefficients must be descending".into()));
        }
        let sum: f64 = coeffs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidSchmidt(format!("coefficients sum to {sum}")));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Schmidt rank after truncation.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient.
    pub fn first(&self) -> f64 {
        self.coeffs[0]
    }

    /// Element-wise equality within `tol`, requiring equal rank.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Clean up a raw list of squared Schmidt coefficients: drop entries below
/// `trunc_tol`, renormalize the remainder to sum one, sort descending.
///
/// Entries in `[-trunc_tol, trunc_tol)` are treated as numerical noise and
/// dropped; anything below `-trunc_tol` is a genuine sign error in the input.
pub fn normalize_descending(raw: &[f64], trunc_tol: f64) -> Result<SchmidtVector> {
    assert!(trunc_tol >= 0.0, "truncation threshold must be nonnegative");
    if let Some(&bad) = raw.iter().find(|&&v| v < -trunc_tol) {
        return Err(Error::NegativeInput {
            value: bad,
            tol: trunc_tol,
        });
    }
    let mut kept: Vec<f64> = raw
        .iter()
        .copied()
        .filter(|&v| v >= trunc_tol && v > 0.0)
        .collect();
    if kept.is_empty() {
        return Err(Error::AllTruncated { tol: trunc_tol });
    }
    kept.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sum: f64 = kept.iter().sum();
    for v in &mut kept {
        *v /= sum;
    }
    Ok(SchmidtVector { coeffs: kept })
}

/// Schmidt spectrum of a tensor product of two bipartite states: all pairwise
/// products, sorted descending.
pub fn tensor_product(p: &SchmidtVector, c: &SchmidtVector) -> SchmidtVector {
    let mut prods = Vec::with_capacity(p.len() * c.len());
    for &a in p.coeffs() {
        for &b in c.coeffs() {
            prods.push(a * b);
        }
    }
    prods.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Both factors sum to one, so the products do too up to rounding.
    let sum: f64 = prods.iter().sum();
    debug_assert!((sum - 1.0).abs() < NORM_TOL);
    for v in &mut prods {
        *v /= sum;
    }
    SchmidtVector { coeffs: prods }
}

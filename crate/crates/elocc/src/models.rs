//! Spin-chain Hamiltonians as sums of Pauli strings on the 2^N computational
//! basis, with periodic boundary conditions.
//!
//! Site indices are 1-based; the basis is big-endian (site 1 is the most
//! significant bit, bit 0 means σ^z = +1). All three model builders produce
//! real symmetric operators: σ^y only ever appears in pairs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest chain the builders accept. Applying the operator to a vector
/// stays cheap well past the dense-diagonalization budget.
pub const MAX_SITES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// One weighted Pauli string: `coefficient * Π σ^axis_site`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    /// Distinct 1-based site indices with their Pauli axis.
    pub axes: Vec<(usize, Axis)>,
}

impl PauliTerm {
    pub fn new(coefficient: f64, axes: Vec<(usize, Axis)>) -> Self {
        Self { coefficient, axes }
    }
}

/// Real symmetric operator on the 2^n computational basis, stored as Pauli
/// terms plus an apply-to-vector kernel; densified on demand.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    n_sites: usize,
    dim: usize,
    terms: Vec<PauliTerm>,
    conserves_sz: bool,
}

impl SparseOperator {
    pub fn from_terms(n_sites: usize, terms: Vec<PauliTerm>, conserves_sz: bool) -> Result<Self> {
        if n_sites < 2 || n_sites > MAX_SITES {
            return Err(Error::SizeTooLarge {
                n_sites,
                max: MAX_SITES,
            });
        }
        for t in &terms {
            let mut seen = 0u32;
            for &(site, _) in &t.axes {
                assert!(
                    site >= 1 && site <= n_sites,
                    "site index {site} out of range 1..={n_sites}"
                );
                assert!(seen & (1 << site) == 0, "duplicate site {site} in term");
                seen |= 1 << site;
            }
        }
        Ok(Self {
            n_sites,
            dim: 1 << n_sites,
            terms,
            conserves_sz,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Whether the builder guarantees [H, Σσ^z] = 0.
    pub fn conserves_total_sz(&self) -> bool {
        self.conserves_sz
    }

    /// out += H * v for a single term. The i-counter from σ^y factors must
    /// come out even or the operator would be complex.
    fn apply_term(&self, term: &PauliTerm, v: &[f64], out: &mut [f64]) {
        let n = self.n_sites;
        for b in 0..self.dim {
            let mut target = b;
            let mut factor = term.coefficient;
            let mut im_units = 0usize;
            for &(site, axis) in &term.axes {
                let shift = n - site;
                let bit = (b >> shift) & 1;
                match axis {
                    Axis::X => target ^= 1 << shift,
                    Axis::Z => {
                        if bit == 1 {
                            factor = -factor;
                        }
                    }
                    Axis::Y => {
                        // σ^y|0> = i|1>, σ^y|1> = -i|0>
                        target ^= 1 << shift;
                        if bit == 1 {
                            factor = -factor;
                        }
                        im_units += 1;
                    }
                }
            }
            assert!(im_units % 2 == 0, "complex Pauli term in a real operator");
            if im_units % 4 == 2 {
                factor = -factor;
            }
            out[target] += factor * v[b];
        }
    }

    /// out = H * v.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        out.fill(0.0);
        for term in &self.terms {
            self.apply_term(term, v, out);
        }
    }

    /// Dense row-major matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let dim = self.dim;
        let mut m = vec![0.0; dim * dim];
        for term in &self.terms {
            for b in 0..dim {
                let n = self.n_sites;
                let mut target = b;
                let mut factor = term.coefficient;
                let mut im_units = 0usize;
                for &(site, axis) in &term.axes {
                    let shift = n - site;
                    let bit = (b >> shift) & 1;
                    match axis {
                        Axis::X => target ^= 1 << shift,
                        Axis::Z => {
                            if bit == 1 {
                                factor = -factor;
                            }
                        }
                        Axis::Y => {
                            target ^= 1 << shift;
                            if bit == 1 {
                                factor = -factor;
                            }
                            im_units += 1;
                        }
                    }
                }
                assert!(im_units % 2 == 0, "complex Pauli term in a real operator");
                if im_units % 4 == 2 {
                    factor = -factor;
                }
                m[target * dim + b] += factor;
            }
        }
        m
    }
}

fn bond(i: usize, n: usize) -> usize {
    i % n + 1
}

/// Transverse-field Ising chain, PBC: H = −Σ_i (σ^x_i σ^x_{i+1} + g σ^z_i).
pub fn build_ising(n: usize, g: f64) -> Result<SparseOperator> {
    let mut terms = Vec::with_capacity(2 * n);
    for i in 1..=n {
        terms.push(PauliTerm::new(-1.0, vec![(i, Axis::X), (bond(i, n), Axis::X)]));
        terms.push(PauliTerm::new(-g, vec![(i, Axis::Z)]));
    }
    SparseOperator::from_terms(n, terms, false)
}

/// Anisotropic XY chain in a transverse field, PBC:
/// H = −Σ_i [(1+γ) σ^x_i σ^x_{i+1} + (1−γ) σ^y_i σ^y_{i+1} + h σ^z_i].
pub fn build_xy(n: usize, gamma: f64, h: f64) -> Result<SparseOperator> {
    let mut terms = Vec::with_capacity(3 * n);
    for i in 1..=n {
        let j = bond(i, n);
        terms.push(PauliTerm::new(-(1.0 + gamma), vec![(i, Axis::X), (j, Axis::X)]));
        terms.push(PauliTerm::new(-(1.0 - gamma), vec![(i, Axis::Y), (j, Axis::Y)]));
        terms.push(PauliTerm::new(-h, vec![(i, Axis::Z)]));
    }
    SparseOperator::from_terms(n, terms, gamma == 0.0)
}

/// XXZ chain, PBC: H = Σ_i (σ^x_i σ^x_{i+1} + σ^y_i σ^y_{i+1} + Δ σ^z_i σ^z_{i+1}).
pub fn build_xxz(n: usize, delta: f64) -> Result<SparseOperator> {
    let mut terms = Vec::with_capacity(3 * n);
    for i in 1..=n {
        let j = bond(i, n);
        terms.push(PauliTerm::new(1.0, vec![(i, Axis::X), (j, Axis::X)]));
        terms.push(PauliTerm::new(1.0, vec![(i, Axis::Y), (j, Axis::Y)]));
        terms.push(PauliTerm::new(delta, vec![(i, Axis::Z), (j, Axis::Z)]));
    }
    SparseOperator::from_terms(n, terms, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelFamily {
    Ising,
    Xy,
    Xxz,
}

impl ModelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::Ising => "ising",
            ModelFamily::Xy => "xy",
            ModelFamily::Xxz => "xxz",
        }
    }

    fn param_names(&self) -> &'static [&'static str] {
        match self {
            ModelFamily::Ising => &["g"],
            ModelFamily::Xy => &["gamma", "h"],
            ModelFamily::Xxz => &["delta"],
        }
    }
}

/// A model family plus (possibly partial) parameter assignments, as parsed
/// from a spec string like `ising:g=0.95` or `xy:gamma=0.8660254,h=1.3`.
///
/// Sweeps start from a partial spec (`ising`) and fill the swept parameter
/// per grid point via [`ModelSpec::with_param`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: ModelFamily,
    pub params: BTreeMap<String, f64>,
}

impl ModelSpec {
    /// Parse `family[:name=value[,name=value...]]`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (fam_str, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim(), Some(r)),
            None => (s, None),
        };
        let family = match fam_str {
            "ising" => ModelFamily::Ising,
            "xy" => ModelFamily::Xy,
            "xxz" => ModelFamily::Xxz,
            other => {
                return Err(Error::InvalidModelSpec(format!(
                    "unknown family {other:?}; expected ising, xy or xxz"
                )))
            }
        };
        let mut params = BTreeMap::new();
        if let Some(rest) = rest {
            for piece in rest.split(',') {
                let piece = piece.trim();
                if piece.is_empty() {
                    return Err(Error::InvalidModelSpec("empty parameter assignment".into()));
                }
                let (name, value) = piece.split_once('=').ok_or_else(|| {
                    Error::InvalidModelSpec(format!("expected name=value, got {piece:?}"))
                })?;
                let name = name.trim();
                if !family.param_names().contains(&name) {
                    return Err(Error::InvalidModelSpec(format!(
                        "parameter {name:?} not valid for {}; expected one of {:?}",
                        family.name(),
                        family.param_names()
                    )));
                }
                let value: f64 = value.trim().parse().map_err(|_| {
                    Error::InvalidModelSpec(format!("cannot parse value in {piece:?}"))
                })?;
                if !value.is_finite() {
                    return Err(Error::InvalidModelSpec(format!(
                        "parameter {name} must be finite"
                    )));
                }
                if params.insert(name.to_string(), value).is_some() {
                    return Err(Error::InvalidModelSpec(format!("duplicate parameter {name}")));
                }
            }
        }
        Ok(Self { family, params })
    }

    /// Copy of the spec with one parameter set or overridden.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        if !self.family.param_names().contains(&name) {
            return Err(Error::InvalidModelSpec(format!(
                "parameter {name:?} not valid for {}",
                self.family.name()
            )));
        }
        let mut out = self.clone();
        out.params.insert(name.to_string(), value);
        Ok(out)
    }

    fn param(&self, name: &str) -> Result<f64> {
        self.params.get(name).copied().ok_or_else(|| {
            Error::InvalidModelSpec(format!("missing parameter {name} for {}", self.family.name()))
        })
    }

    /// Build the Hamiltonian; all family parameters must be assigned.
    pub fn build(&self, n: usize) -> Result<SparseOperator> {
        match self.family {
            ModelFamily::Ising => build_ising(n, self.param("g")?),
            ModelFamily::Xy => build_xy(n, self.param("gamma")?, self.param("h")?),
            ModelFamily::Xxz => build_xxz(n, self.param("delta")?),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family.name())?;
        let mut sep = ':';
        for (k, v) in &self.params {
            write!(f, "{sep}{k}={v}")?;
            sep = ',';
        }
        Ok(())
    }
}

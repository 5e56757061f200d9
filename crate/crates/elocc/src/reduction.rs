//! From a pure many-body state to a Schmidt spectrum: pick a bipartition,
//! gather the subsystem-A bits into the row index, and take singular values
//! of the reshaped amplitude matrix.
//!
//! The SVD route is used instead of diagonalizing the reduced density matrix;
//! squaring the amplitudes first would cost half the exponent range on the
//! small coefficients. The RDM route survives only as a test oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schmidt::{normalize_descending, SchmidtVector};

/// Which sites belong to subsystem A (1-based, sorted, proper nonempty subset).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionSpec {
    n_sites: usize,
    a_sites: Vec<usize>,
}

impl BipartitionSpec {
    pub fn new(n_sites: usize, mut a_sites: Vec<usize>) -> Result<Self> {
        a_sites.sort_unstable();
        a_sites.dedup();
        if a_sites.is_empty() || a_sites.len() >= n_sites {
            return Err(Error::InvalidPartition(format!(
                "subsystem A must be a proper nonempty subset of 1..={n_sites}"
            )));
        }
        if a_sites[0] < 1 || *a_sites.last().unwrap() > n_sites {
            return Err(Error::InvalidPartition(format!(
                "site indices must lie in 1..={n_sites}"
            )));
        }
        Ok(Self { n_sites, a_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn a_sites(&self) -> &[usize] {
        &self.a_sites
    }

    pub fn b_sites(&self) -> Vec<usize> {
        (1..=self.n_sites)
            .filter(|s| !self.a_sites.contains(s))
            .collect()
    }

    /// The same cut seen from the B side.
    pub fn complement(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            a_sites: self.b_sites(),
        }
    }
}

/// Contiguous half-chain cut A = {1..n/2}.
pub fn half_chain(n: usize) -> Result<BipartitionSpec> {
    if n % 2 != 0 {
        return Err(Error::OddSize { n });
    }
    BipartitionSpec::new(n, (1..=n / 2).collect())
}

/// Comb cut A = odd-numbered sites.
pub fn comb(n: usize) -> Result<BipartitionSpec> {
    BipartitionSpec::new(n, (1..=n).step_by(2).collect())
}

/// Partition selector as written on a command line; resolved against a
/// concrete chain length with [`PartitionKind::resolve`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionKind {
    Half,
    Comb,
    Sites(Vec<usize>),
}

impl PartitionKind {
    /// Parse `half`, `comb` or `sites=1,3,5`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "half" => Ok(PartitionKind::Half),
            "comb" => Ok(PartitionKind::Comb),
            _ => {
                let list = s.strip_prefix("sites=").ok_or_else(|| {
                    Error::InvalidPartition(format!(
                        "expected half, comb or sites=..., got {s:?}"
                    ))
                })?;
                let mut sites = Vec::new();
                for piece in list.split(',') {
                    let piece = piece.trim();
                    let idx: usize = piece.parse().map_err(|_| {
                        Error::InvalidPartition(format!("bad site index {piece:?}"))
                    })?;
                    if idx == 0 {
                        return Err(Error::InvalidPartition("site indices are 1-based".into()));
                    }
                    sites.push(idx);
                }
                Ok(PartitionKind::Sites(sites))
            }
        }
    }

    pub fn resolve(&self, n: usize) -> Result<BipartitionSpec> {
        match self {
            PartitionKind::Half => half_chain(n),
            PartitionKind::Comb => comb(n),
            PartitionKind::Sites(sites) => BipartitionSpec::new(n, sites.clone()),
        }
    }
}

/// Singular values of a dense row-major matrix by one-sided Jacobi rotations.
/// Relative accuracy holds down to the smallest singular values, which is what
/// the spectrum tails need.
fn jacobi_singular_values(m: Vec<f64>, rows: usize, cols: usize) -> Vec<f64> {
    // Work on the transpose when that gives fewer columns to orthogonalize.
    let (mut a, nr, nc) = if cols > rows {
        let mut t = vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                t[c * rows + r] = m[r * cols + c];
            }
        }
        (t, cols, rows)
    } else {
        (m, rows, cols)
    };

    let col = |a: &[f64], j: usize, i: usize| a[i * nc + j];
    let tol = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..nc {
            for q in p + 1..nc {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..nr {
                    let x = col(&a, p, i);
                    let y = col(&a, q, i);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= tol * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..nr {
                    let x = a[i * nc + p];
                    let y = a[i * nc + q];
                    a[i * nc + p] = c * x - s * y;
                    a[i * nc + q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<f64> = (0..nc)
        .map(|j| (0..nr).map(|i| col(&a, j, i).powi(2)).sum::<f64>().sqrt())
        .collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sigma
}

/// Schmidt spectrum of a pure state across a bipartition.
///
/// The state lives on the big-endian computational basis (site 1 = most
/// significant bit). Sites in A are gathered into the row index by bit
/// permutation, the amplitude matrix is 2^|A| by 2^|B|, and the squared
/// singular values go through [`normalize_descending`].
pub fn schmidt_from_state(
    state: &[f64],
    part: &BipartitionSpec,
    trunc_tol: f64,
) -> Result<SchmidtVector> {
    let n = part.n_sites();
    let dim = 1usize << n;
    if state.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: state.len(),
        });
    }
    let norm: f64 = state.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }

    let a_sites = part.a_sites();
    let b_sites = part.b_sites();
    let na = a_sites.len();
    let nb = b_sites.len();
    // Shift that extracts each site's bit from a basis index.
    let shift = |site: usize| n - site;
    let a_shifts: Vec<usize> = a_sites.iter().map(|&s| shift(s)).collect();
    let b_shifts: Vec<usize> = b_sites.iter().map(|&s| shift(s)).collect();

    let rows = 1usize << na;
    let cols = 1usize << nb;
    let mut m = vec![0.0; rows * cols];
    for (b, &amp) in state.iter().enumerate() {
        let mut r = 0usize;
        for (pos, &sh) in a_shifts.iter().enumerate() {
            r |= ((b >> sh) & 1) << (na - 1 - pos);
        }
        let mut c = 0usize;
        for (pos, &sh) in b_shifts.iter().enumerate() {
            c |= ((b >> sh) & 1) << (nb - 1 - pos);
        }
        m[r * cols + c] = amp;
    }

    let sigma = jacobi_singular_values(m, rows, cols);
    let lambdas: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    normalize_descending(&lambdas, trunc_tol)
}

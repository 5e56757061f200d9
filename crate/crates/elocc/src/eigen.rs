//! Lowest eigenpairs of a real symmetric operator by full dense reduction.
//!
//! Pipeline: densify, Householder-tridiagonalize (reflectors kept), get the
//! whole spectrum from implicit-shift QL, then recover the requested low-lying
//! eigenvectors by inverse iteration on the tridiagonal matrix and
//! back-transformation. Avoiding full eigenvector accumulation keeps a
//! 1024x1024 solve well under a second, which the parameter sweeps need.

use crate::error::{Error, Result};
use crate::models::SparseOperator;

/// Cap on the dense dimension accepted by the solvers.
pub const DENSE_DIM_CAP: usize = 1 << 16;

/// Relative gap below which neighboring eigenvalues count as degenerate.
pub const DEGENERACY_REL_TOL: f64 = 1e-10;

const SYMMETRY_TOL: f64 = 1e-12;

/// One eigenpair, indexed from the bottom of the spectrum.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub energy: f64,
    pub state: Vec<f64>,
    /// Rank from the bottom (0 = ground state).
    pub index: usize,
    /// Set when the gap to a spectral neighbor is below [`DEGENERACY_REL_TOL`]
    /// relative to the spectral radius.
    pub degenerate: bool,
}

/// Householder reduction to tridiagonal form. Returns (diag, offdiag); the
/// reflector vectors stay in the strict lower triangle of `a`, with their
/// norms-squared-over-two in `h`.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut h_store = vec![0.0; n.saturating_sub(2)];
    let mut u = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1; // trailing size below the pivot
        let scale: f64 = (k + 1..n).map(|i| a[i * n + k].abs()).sum();
        if scale == 0.0 {
            e[k] = a[(k + 1) * n + k];
            h_store[k] = 0.0;
            continue;
        }
        for i in 0..m {
            u[i] = a[(k + 1 + i) * n + k] / scale;
        }
        let sigma = u[..m].iter().map(|x| x * x).sum::<f64>().sqrt();
        let alpha = if u[0] >= 0.0 { -sigma } else { sigma };
        let h = sigma * (sigma + u[0].abs());
        u[0] -= alpha;
        e[k] = alpha * scale;
        h_store[k] = h;
        if h == 0.0 {
            continue;
        }

        // p = A_sub * u / h
        for i in 0..m {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            p[i] = row.iter().zip(&u[..m]).map(|(x, y)| x * y).sum::<f64>() / h;
        }
        let kk: f64 = u[..m].iter().zip(&p[..m]).map(|(x, y)| x * y).sum::<f64>() / (2.0 * h);
        for i in 0..m {
            p[i] -= kk * u[i];
        }
        // A_sub -= q u^T + u q^T
        for i in 0..m {
            let ui = u[i];
            let qi = p[i];
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                *x -= qi * u[j] + ui * p[j];
            }
        }
        // keep the (scaled) reflector for the back-transform
        for i in 0..m {
            a[(k + 1 + i) * n + k] = u[i];
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e, h_store)
}

/// Apply the accumulated Householder transform to a vector in tridiagonal
/// coordinates, yielding the eigenvector of the original matrix.
fn back_transform(a: &[f64], n: usize, h_store: &[f64], x: &mut [f64]) {
    for k in (0..n.saturating_sub(2)).rev() {
        let h = h_store[k];
        if h == 0.0 {
            continue;
        }
        let m = n - k - 1;
        let mut s = 0.0;
        for i in 0..m {
            s += a[(k + 1 + i) * n + k] * x[k + 1 + i];
        }
        s /= h;
        for i in 0..m {
            x[k + 1 + i] -= s * a[(k + 1 + i) * n + k];
        }
    }
}

/// All eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
fn ql_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut off = vec![0.0; n];
    off[..n - 1].copy_from_slice(&e[..n - 1.min(n)]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::NotSymmetric { max_dev: f64::NAN });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    let mut vals = d.to_vec();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// LU factors of (T - lambda I) with partial pivoting.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

fn factor_shifted(diag: &[f64], off: &[f64], lambda: f64, tiny: f64) -> TridiagLu {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|&x| x - lambda).collect();
    let mut dl: Vec<f64> = off.to_vec();
    let mut du: Vec<f64> = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n - 1 {
        if dl[i].abs() <= d[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
            if i < n - 2 {
                du2[i] = 0.0;
            }
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i < n - 2 {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    TridiagLu {
        dl,
        d,
        du,
        du2,
        swapped,
    }
}

impl TridiagLu {
    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.dl[i] * b[i];
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Deterministic pseudo-random start vector.
fn seeded_start(n: usize, salt: u64) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ salt.wrapping_mul(0xD134_2543_DE82_EF95);
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        v.push((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5);
    }
    v
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        for (x, y) in v.iter_mut().zip(b) {
            *x -= dot * y;
        }
    }
}

/// Eigenvector of the tridiagonal matrix for an isolated (possibly nudged)
/// eigenvalue, orthogonalized against previously found vectors.
fn inverse_iteration(
    diag: &[f64],
    off: &[f64],
    lambda: f64,
    prev: &[Vec<f64>],
    salt: u64,
    anorm: f64,
) -> Vec<f64> {
    let n = diag.len();
    let tiny = f64::EPSILON * anorm.max(1.0);
    let lu = factor_shifted(diag, off, lambda, tiny);
    let mut v = seeded_start(n, salt);
    normalize(&mut v);
    for _ in 0..4 {
        lu.solve(&mut v);
        orthogonalize(&mut v, prev);
        let growth = normalize(&mut v);
        if growth > 1.0 / (f64::EPSILON.sqrt() * anorm.max(1.0)) {
            break;
        }
    }
    orthogonalize(&mut v, prev);
    normalize(&mut v);
    v
}

/// Make repeated runs bit-stable: largest-magnitude component positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Rotate a two-dimensional degenerate cluster so the first vector maximizes
/// its largest basis amplitude. Any orthonormal pair spans the cluster
/// equally well; this choice is deterministic across solvers.
fn canonicalize_pair(v1: &mut [f64], v2: &mut [f64]) {
    let mut best = 0;
    let mut best_amp = -1.0;
    for i in 0..v1.len() {
        let amp = v1[i] * v1[i] + v2[i] * v2[i];
        if amp > best_amp {
            best_amp = amp;
            best = i;
        }
    }
    let phi = v2[best].atan2(v1[best]);
    let (s, c) = phi.sin_cos();
    for i in 0..v1.len() {
        let a = v1[i];
        let b = v2[i];
        v1[i] = c * a + s * b;
        v2[i] = -s * a + c * b;
    }
}

fn check_symmetric(m: &[f64], dim: usize) -> Result<()> {
    let mut worst = 0.0f64;
    for r in 0..dim {
        for c in r + 1..dim {
            worst = worst.max((m[r * dim + c] - m[c * dim + r]).abs());
        }
    }
    if worst > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { max_dev: worst });
    }
    Ok(())
}

/// The `k` lowest eigenpairs in ascending energy.
///
/// Near-degenerate clusters (relative gap below [`DEGENERACY_REL_TOL`]) are
/// flagged; two-fold clusters are additionally canonicalized so the returned
/// vectors do not depend on rounding accidents inside the solver.
pub fn lowest_states(op: &SparseOperator, k: usize) -> Result<Vec<EigenPair>> {
    let dim = op.dim();
    if dim > DENSE_DIM_CAP {
        return Err(Error::SizeTooLarge {
            n_sites: op.n_sites(),
            max: DENSE_DIM_CAP.trailing_zeros() as usize,
        });
    }
    if k == 0 || k > dim {
        return Err(Error::TooManyEigenpairs { k, dim });
    }
    let mut a = op.to_dense();
    check_symmetric(&a, dim)?;
    let (diag, off, h_store) = tridiagonalize(&mut a, dim);
    let eigs = {
        let mut d = diag.clone();
        let mut e = off.clone();
        ql_eigenvalues(&mut d, &mut e)?
    };
    let scale = eigs[0].abs().max(eigs[dim - 1].abs()).max(1.0);
    let close = |a: f64, b: f64| (a - b).abs() < DEGENERACY_REL_TOL * scale;

    // Extend through a degenerate cluster so canonicalization sees all of it.
    let mut k_eff = k;
    while k_eff < dim && k_eff < k + 4 && close(eigs[k_eff], eigs[k_eff - 1]) {
        k_eff += 1;
    }

    let anorm = scale;
    let sep = f64::EPSILON * anorm * 8.0;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k_eff);
    let mut lambda_used = f64::NEG_INFINITY;
    for i in 0..k_eff {
        // Nudge coincident shifts apart so the factorizations differ.
        let lambda = if i > 0 && eigs[i] - lambda_used < sep {
            lambda_used + sep
        } else {
            eigs[i]
        };
        lambda_used = lambda;
        let v = inverse_iteration(&diag, &off, lambda, &vectors, i as u64 + 1, anorm);
        vectors.push(v);
    }

    // Back-transform to the original basis.
    for v in &mut vectors {
        back_transform(&a, dim, &h_store, v);
        normalize(v);
    }

    // Canonicalize two-fold clusters.
    let mut i = 0;
    while i + 1 < k_eff {
        if close(eigs[i], eigs[i + 1]) && (i + 2 >= k_eff || !close(eigs[i + 1], eigs[i + 2])) {
            let (head, tail) = vectors.split_at_mut(i + 1);
            canonicalize_pair(&mut head[i], &mut tail[0]);
            i += 2;
        } else {
            i += 1;
        }
    }

    let mut out = Vec::with_capacity(k);
    for (i, mut v) in vectors.into_iter().take(k).enumerate() {
        fix_sign(&mut v);
        let degenerate = (i > 0 && close(eigs[i], eigs[i - 1]))
            || (i + 1 < dim && close(eigs[i], eigs[i + 1]));
        out.push(EigenPair {
            energy: eigs[i],
            state: v,
            index: i,
            degenerate,
        });
    }

    // Residual check against the sparse kernel, independent of the dense path.
    let mut hv = vec![0.0; dim];
    for pair in &out {
        op.apply(&pair.state, &mut hv);
        let res: f64 = hv
            .iter()
            .zip(&pair.state)
            .map(|(h, s)| (h - pair.energy * s).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(
            res < 1e-9 * anorm.max(1.0),
            "inverse iteration residual {res} too large"
        );
    }
    Ok(out)
}

/// Every eigenvalue, ascending.
pub fn full_spectrum(op: &SparseOperator) -> Result<Vec<f64>> {
    let dim = op.dim();
    if dim > DENSE_DIM_CAP {
        return Err(Error::SizeTooLarge {
            n_sites: op.n_sites(),
            max: DENSE_DIM_CAP.trailing_zeros() as usize,
        });
    }
    let mut a = op.to_dense();
    check_symmetric(&a, dim)?;
    let (mut d, mut e, _) = tridiagonalize(&mut a, dim);
    ql_eigenvalues(&mut d, &mut e)
}

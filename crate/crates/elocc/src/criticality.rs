//! Parameter sweeps, interception tables, pattern classification, boundary
//! location and finite-size scaling.
//!
//! The detector for everything here is the pair status "do the Renyi curves
//! of two ground states intercept". Sweep points and table cells are
//! independent work units evaluated in parallel and merged by index, so the
//! output never depends on thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::lowest_states;
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::monotone::{elocc_verdict, find_interceptions, AlphaGrid, ConversionVerdict};
use crate::reduction::{schmidt_from_state, BipartitionSpec};
use crate::schmidt::SchmidtVector;

/// One evaluated sweep point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub ground_energy: f64,
    pub schmidt: SchmidtVector,
    pub excited_energy: Option<f64>,
    pub excited: Option<SchmidtVector>,
}

/// A parameter sweep: ground-state Schmidt spectra over a strictly
/// increasing parameter grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub model: ModelSpec,
    pub swept: String,
    pub n_sites: usize,
    pub partition: BipartitionSpec,
    pub points: Vec<SweepPoint>,
}

/// Inclusive arithmetic grid from `from` to `to` in steps of `step`.
/// A zero-width range yields a single point.
pub fn param_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidRange(format!("step must be positive, got {step}")));
    }
    if to < from {
        return Err(Error::InvalidRange(format!("need from <= to, got [{from}, {to}]")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

fn schmidt_at(
    model: &ModelSpec,
    param: &str,
    value: f64,
    n: usize,
    part: &BipartitionSpec,
    trunc_tol: f64,
    with_excited: bool,
) -> Result<SweepPoint> {
    let spec = model.with_param(param, value)?;
    let op = spec.build(n)?;
    let k = if with_excited { 2 } else { 1 };
    let pairs = lowest_states(&op, k)?;
    let schmidt = schmidt_from_state(&pairs[0].state, part, trunc_tol)?;
    let (excited_energy, excited) = if with_excited {
        (
            Some(pairs[1].energy),
            Some(schmidt_from_state(&pairs[1].state, part, trunc_tol)?),
        )
    } else {
        (None, None)
    };
    Ok(SweepPoint {
        value,
        ground_energy: pairs[0].energy,
        schmidt,
        excited_energy,
        excited,
    })
}

/// Diagonalize the model across a parameter grid and reduce every ground
/// state (and optionally first excited state) to its Schmidt spectrum.
pub fn sweep(
    model: &ModelSpec,
    param: &str,
    range: (f64, f64, f64),
    n: usize,
    part: &BipartitionSpec,
    with_excited: bool,
    trunc_tol: f64,
) -> Result<SweepResult> {
    let values = param_grid(range.0, range.1, range.2)?;
    let points: Vec<SweepPoint> = values
        .par_iter()
        .map(|&v| schmidt_at(model, param, v, n, part, trunc_tol, with_excited))
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        model: model.clone(),
        swept: param.to_string(),
        n_sites: n,
        partition: part.clone(),
        points,
    })
}

/// Square grid of pairwise interception results over a sweep.
///
/// Cells keep the full refined crossing list; the machine-readable cell value
/// is the smallest crossing, the paper-display value emulates a 0.1-step
/// α scan (see [`paper_rounded`]).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterceptionTable {
    labels: Vec<f64>,
    /// Row-major crossing lists; empty = no interception.
    crossings: Vec<Vec<f64>>,
}

/// Crossing value as a 0.1-granular table would print it: the smallest
/// multiple k·0.1 (k ≥ 2) such that an odd number of crossings lie in
/// ((k−1)·0.1, k·0.1]. Crossings a coarse scan cannot resolve give `None`.
pub fn paper_rounded(crossings: &[f64]) -> Option<f64> {
    let last = *crossings.last()?;
    if !last.is_finite() {
        return None;
    }
    let mut k = 2u32;
    loop {
        let lo = f64::from(k - 1) / 10.0;
        if lo > last + 1e-12 {
            return None;
        }
        let hi = f64::from(k) / 10.0;
        let count = crossings
            .iter()
            .filter(|&&c| c > lo && c <= hi + 1e-12)
            .count();
        if count % 2 == 1 {
            return Some(hi);
        }
        k += 1;
    }
}

impl InterceptionTable {
    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Smallest crossing α, or `None` for no interception.
    pub fn cell(&self, i: usize, j: usize) -> Option<f64> {
        self.crossings[i * self.labels.len() + j].first().copied()
    }

    /// Full refined crossing list for a cell.
    pub fn cell_crossings(&self, i: usize, j: usize) -> &[f64] {
        &self.crossings[i * self.labels.len() + j]
    }

    /// Cell as the paper-reproduction display prints it.
    pub fn paper_cell(&self, i: usize, j: usize) -> Option<f64> {
        paper_rounded(self.cell_crossings(i, j))
    }
}

/// Pairwise interception scan over all sweep points. Symmetric by
/// construction; the diagonal never intercepts.
pub fn interception_table(s: &SweepResult, grid: &AlphaGrid) -> InterceptionTable {
    let n = s.points.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let results: Vec<(usize, usize, Vec<f64>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let cr = find_interceptions(&s.points[i].schmidt, &s.points[j].schmidt, grid);
            (i, j, cr)
        })
        .collect();
    let mut crossings = vec![Vec::new(); n * n];
    for (i, j, cr) in results {
        crossings[i * n + j] = cr.clone();
        crossings[j * n + i] = cr;
    }
    InterceptionTable {
        labels: s.points.iter().map(|p| p.value).collect(),
        crossings,
    }
}

/// The two interception-table morphologies, plus everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternClass {
    /// Crossings inside the first phase and across phases; none inside the
    /// second phase.
    CaseI,
    /// No crossings inside either phase; crossings only across.
    CaseII,
    Mixed,
}

/// Classification with the per-block crossing fractions that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternReport {
    pub class: PatternClass,
    pub first_block_crossing_fraction: f64,
    pub second_block_crossing_fraction: f64,
    pub off_diagonal_crossing_fraction: f64,
    pub tolerance: f64,
}

/// Classify the block pattern of a table split into labels `[0, split)` and
/// `[split, n)`. Block membership tolerates `tolerance` nonconforming cells
/// (fraction); the off-diagonal block of a case-(ii) table only needs to
/// contain crossings.
pub fn classify_pattern(
    table: &InterceptionTable,
    split: usize,
    tolerance: f64,
) -> Result<PatternReport> {
    let n = table.size();
    if split == 0 || split >= n {
        return Err(Error::BadSplit { split, len: n });
    }
    let mut counts = [[0usize; 2]; 3]; // [block][total, crossing]
    for i in 0..n {
        for j in i + 1..n {
            let block = if j < split {
                0
            } else if i >= split {
                1
            } else {
                2
            };
            counts[block][0] += 1;
            if !table.cell_crossings(i, j).is_empty() {
                counts[block][1] += 1;
            }
        }
    }
    let frac = |b: usize| {
        if counts[b][0] == 0 {
            0.0
        } else {
            counts[b][1] as f64 / counts[b][0] as f64
        }
    };
    let (d1, d2, od) = (frac(0), frac(1), frac(2));
    let class = if d1 >= 1.0 - tolerance && d2 <= tolerance && od >= 1.0 - tolerance {
        PatternClass::CaseI
    } else if d1 <= tolerance && d2 <= tolerance && counts[2][1] > 0 {
        PatternClass::CaseII
    } else {
        PatternClass::Mixed
    };
    Ok(PatternReport {
        class,
        first_block_crossing_fraction: d1,
        second_block_crossing_fraction: d2,
        off_diagonal_crossing_fraction: od,
        tolerance,
    })
}

/// A certified parameter interval containing a convertibility transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    /// Grid resolution at which the bracket was certified.
    pub step: f64,
}

/// How the consecutive-pair statuses change along a scan.
enum FlipShape {
    /// statuses go crossing..crossing, N..N (or the reverse) at pair `i`.
    Single(usize),
    /// One crossing pair surrounded by N on both sides; `i` is the first flip,
    /// so the crossing pair is (values[i+1], values[i+2]).
    Isolated(usize),
}

fn flip_shape(statuses: &[bool], flips: &[usize]) -> (FlipShape, bool) {
    if flips.len() >= 2 && flips[1] == flips[0] + 1 && !statuses[flips[0]] {
        (FlipShape::Isolated(flips[0]), flips.len() > 2)
    } else {
        (FlipShape::Single(flips[0]), flips.len() > 1)
    }
}

/// Generic transition locator over any parameter-to-spectrum map.
///
/// Scans consecutive-pair interception statuses, starting at a tenth of the
/// search window and shrinking tenfold (clamped to `target_step`) around the
/// first status change. Extra status changes are an error only at the coarse
/// level; refined levels keep the first.
///
/// The final report depends on how the statuses change. Where a crossing
/// region ends (crossing → N), crossing pairs occur on both sides of the
/// boundary and only the two-step window is certified. Where one begins
/// (N → crossing), the first crossing pair already straddles the boundary
/// and the last non-crossing pair pins it to one step. A single crossing
/// pair surrounded by N certifies that pair itself.
pub fn locate_boundary_with<F>(
    spectrum_at: F,
    search: (f64, f64),
    target_step: f64,
    grid: &AlphaGrid,
) -> Result<Bracket>
where
    F: Fn(f64) -> Result<SchmidtVector> + Sync,
{
    let (mut lo, mut hi) = search;
    if !target_step.is_finite() || target_step <= 0.0 {
        return Err(Error::InvalidRange("target_step must be positive".into()));
    }
    let ordered = lo.is_finite() && hi.is_finite() && lo < hi;
    if !ordered {
        return Err(Error::InvalidRange(format!("need from < to, got [{lo}, {hi}]")));
    }
    let mut step = (hi - lo) / 10.0;
    let mut coarse = true;
    loop {
        let m = ((hi - lo) / step).round() as usize;
        let values: Vec<f64> = (0..=m).map(|i| lo + i as f64 * step).collect();
        let spectra: Vec<SchmidtVector> = values
            .par_iter()
            .map(|&v| spectrum_at(v))
            .collect::<Result<_>>()?;
        let statuses: Vec<bool> = (0..m)
            .map(|i| !find_interceptions(&spectra[i], &spectra[i + 1], grid).is_empty())
            .collect();
        let flips: Vec<usize> = (0..m.saturating_sub(1))
            .filter(|&i| statuses[i] != statuses[i + 1])
            .collect();
        if flips.is_empty() {
            return Err(Error::NoTransition);
        }
        let (shape, extra) = flip_shape(&statuses, &flips);
        if coarse && extra {
            return Err(Error::MultipleTransitions { count: flips.len() });
        }
        let done = step <= target_step * (1.0 + 1e-9);
        let (win_lo, win_hi) = match shape {
            FlipShape::Single(i) => {
                if done {
                    return Ok(if statuses[i] {
                        Bracket {
                            lower: values[i],
                            upper: values[i + 2],
                            step,
                        }
                    } else {
                        Bracket {
                            lower: values[i],
                            upper: values[i + 1],
                            step,
                        }
                    });
                }
                (values[i], values[i + 2])
            }
            FlipShape::Isolated(i) => {
                if done {
                    return Ok(Bracket {
                        lower: values[i + 1],
                        upper: values[i + 2],
                        step,
                    });
                }
                (values[i + 1], values[i + 2])
            }
        };
        lo = win_lo;
        hi = win_hi;
        step = (step / 10.0).max(target_step);
        coarse = false;
    }
}

/// [`locate_boundary_with`] driven by a model family: each probe diagonalizes
/// the Hamiltonian at that parameter and reduces the ground state.
#[allow(clippy::too_many_arguments)]
pub fn locate_boundary(
    model: &ModelSpec,
    param: &str,
    search: (f64, f64),
    n: usize,
    part: &BipartitionSpec,
    target_step: f64,
    grid: &AlphaGrid,
    trunc_tol: f64,
) -> Result<Bracket> {
    locate_boundary_with(
        |v| Ok(schmidt_at(model, param, v, n, part, trunc_tol, false)?.schmidt),
        search,
        target_step,
        grid,
    )
}

/// Parameters of g_c(N) = a·exp(−N/b) + c.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rms_residual: f64,
    /// Set when the inputs are constant and b is unidentifiable.
    pub degenerate: bool,
}

fn fit_linear(xs: &[f64], ys: &[f64], b: f64) -> (f64, f64, f64) {
    let m = xs.len() as f64;
    let f: Vec<f64> = xs.iter().map(|&x| (-x / b).exp()).collect();
    let s_ff: f64 = f.iter().map(|v| v * v).sum();
    let s_f: f64 = f.iter().sum();
    let s_fy: f64 = f.iter().zip(ys).map(|(v, y)| v * y).sum();
    let s_y: f64 = ys.iter().sum();
    let det = s_ff * m - s_f * s_f;
    if det.abs() < 1e-300 {
        return (0.0, s_y / m, f64::INFINITY);
    }
    let a = (s_fy * m - s_f * s_y) / det;
    let c = (s_ff * s_y - s_f * s_fy) / det;
    let rms = (f
        .iter()
        .zip(ys)
        .map(|(v, y)| (a * v + c - y).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    (a, c, rms)
}

/// Least-squares fit of g_c(N) = a·exp(−N/b) + c: for each b on a log grid
/// over [0.1, 20] the pair (a, c) solves a 2x2 linear system; the best b is
/// polished by golden-section search.
pub fn scaling_fit(points: &[(usize, f64)]) -> Result<ScalingFit> {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.0).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if points.len() < 3 || sizes.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: sizes.len().min(points.len()),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();

    let spread = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = ys.iter().map(|y| y.abs()).fold(1.0, f64::max);
    if spread <= 1e-12 * scale {
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        return Ok(ScalingFit {
            a: 0.0,
            b: 1.0,
            c: mean,
            rms_residual: 0.0,
            degenerate: true,
        });
    }

    const GRID: usize = 400;
    let (b_lo, b_hi) = (0.1f64, 20.0f64);
    let ratio = b_hi / b_lo;
    let mut best_idx = 0;
    let mut best_rms = f64::INFINITY;
    let b_at = |i: usize| b_lo * ratio.powf(i as f64 / (GRID - 1) as f64);
    for i in 0..GRID {
        let (_, _, rms) = fit_linear(&xs, &ys, b_at(i));
        if rms < best_rms {
            best_rms = rms;
            best_idx = i;
        }
    }
    let mut lo = b_at(best_idx.saturating_sub(1));
    let mut hi = b_at((best_idx + 1).min(GRID - 1));
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    for _ in 0..200 {
        let m1 = hi - (hi - lo) * INV_PHI;
        let m2 = lo + (hi - lo) * INV_PHI;
        if fit_linear(&xs, &ys, m1).2 < fit_linear(&xs, &ys, m2).2 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let b = 0.5 * (lo + hi);
    let (a, c, rms) = fit_linear(&xs, &ys, b);
    Ok(ScalingFit {
        a,
        b,
        c,
        rms_residual: rms,
        degenerate: false,
    })
}

/// eLOCC comparison of the first excited state against the ground state at a
/// single parameter point. A degenerate ground doublet has no well-defined
/// "first excited" partner, so that is an error.
pub fn gs_vs_excited(
    model: &ModelSpec,
    n: usize,
    part: &BipartitionSpec,
    grid: &AlphaGrid,
    trunc_tol: f64,
) -> Result<ConversionVerdict> {
    let op = model.build(n)?;
    let pairs = lowest_states(&op, 2)?;
    if pairs[0].degenerate {
        let scale = pairs[0].energy.abs().max(pairs[1].energy.abs()).max(1.0);
        return Err(Error::DegenerateGround {
            gap: (pairs[1].energy - pairs[0].energy).abs() / scale,
        });
    }
    let ground = schmidt_from_state(&pairs[0].state, part, trunc_tol)?;
    let excited = schmidt_from_state(&pairs[1].state, part, trunc_tol)?;
    Ok(elocc_verdict(&excited, &ground, grid))
}

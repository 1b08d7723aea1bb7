//! Exhaustive grid search for the largest gap between the mean-constrained
//! bounds.
//!
//! Every `(prefix, mu)` cell is a pure function call, so cells are evaluated
//! in parallel and folded with a total order on candidates: larger gap wins,
//! ties go to the smaller `mu`, then to the lexicographically smaller prefix.
//! The order makes the reduction independent of scheduling.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_report, Prefix};
use crate::error::{Error, Result};

pub const MAX_PREFIX_LEN: usize = 8;

fn snap12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Number of grid steps per unit mass, if `step` divides 1.
fn steps_per_unit(step: f64) -> Result<u32> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::BadStep(step));
    }
    let k = (1.0 / step).round();
    if (k * step - 1.0).abs() > 1e-12 {
        return Err(Error::BadStep(step));
    }
    Ok(k as u32)
}

/// All prefixes `(p_1..p_L)` on the lattice `{0, step, 2 step, ...}` with
/// `sum p_i <= 1`, in lexicographic order. There are `C(1/step + L, L)`.
pub fn enumerate_prefixes(len: usize, step: f64) -> Result<Vec<Prefix>> {
    if !(1..=MAX_PREFIX_LEN).contains(&len) {
        return Err(Error::BadLength(len));
    }
    let k = steps_per_unit(step)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    compositions(len, k, k, &mut current, &mut out);
    Ok(out)
}

fn compositions(len: usize, k: u32, budget: u32, current: &mut Vec<u32>, out: &mut Vec<Prefix>) {
    if current.len() == len {
        let probs = current
            .iter()
            .map(|&i| f64::from(i) / f64::from(k))
            .collect();
        out.push(Prefix::new(probs).expect("lattice point is a valid prefix"));
        return;
    }
    for i in 0..=budget {
        current.push(i);
        compositions(len, k, budget - i, current, out);
        current.pop();
    }
}

/// `lo, lo + step, ..., hi`, snapped to 12 decimals.
pub fn mu_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || hi < lo || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::BadStep(step));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| snap12(lo + i as f64 * step)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub lengths: Vec<usize>,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub mu_step: f64,
    pub prefix_step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            lengths: vec![2, 3, 4, 5],
            mu_lo: 1.0,
            mu_hi: 5.0,
            mu_step: 0.2,
            prefix_step: 0.05,
        }
    }
}

/// The best cell for one `mu` (or overall).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCell {
    pub mu: f64,
    pub max_gap: f64,
    pub prefix: Prefix,
    pub lower_thm_a: f64,
    pub upper_thm_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuMax {
    pub mu: f64,
    pub max_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    #[serde(rename = "L")]
    pub len: usize,
    pub mu_grid: Vec<f64>,
    pub step: f64,
    pub best_gap: Option<f64>,
    pub best_prefix: Option<Prefix>,
    pub best_mu: Option<f64>,
    pub best_lower: Option<f64>,
    pub best_upper: Option<f64>,
    pub cells_total: usize,
    pub cells_feasible: usize,
    pub cells_condition_ok: usize,
    pub per_mu_max: Vec<MuMax>,
    #[serde(skip)]
    per_mu_best: Vec<Option<GapCell>>,
}

/// Per-`mu` maximum over all searched lengths (Figure 3 data).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedMuMax {
    pub mu: f64,
    pub max_gap: Option<f64>,
    #[serde(rename = "L")]
    pub len: Option<usize>,
    pub prefix: Option<Prefix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxGapResult {
    pub per_length: Vec<GridSearchResult>,
    pub combined: Vec<CombinedMuMax>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gap: f64,
    lower: f64,
    upper: f64,
    mu_idx: usize,
    prefix_idx: usize,
}

impl Candidate {
    /// `Greater` means `self` is the preferred argmax.
    fn rank(&self, other: &Candidate) -> Ordering {
        self.gap
            .total_cmp(&other.gap)
            .then_with(|| other.mu_idx.cmp(&self.mu_idx))
            .then_with(|| other.prefix_idx.cmp(&self.prefix_idx))
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.rank(&y) == Ordering::Less { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Clone)]
struct Tally {
    total: usize,
    feasible: usize,
    condition_ok: usize,
    best: Option<Candidate>,
    per_mu: Vec<Option<Candidate>>,
}

impl Tally {
    fn new(n_mu: usize) -> Self {
        Tally {
            total: 0,
            feasible: 0,
            condition_ok: 0,
            best: None,
            per_mu: vec![None; n_mu],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.feasible += other.feasible;
        self.condition_ok += other.condition_ok;
        self.best = pick(self.best, other.best);
        for (a, b) in self.per_mu.iter_mut().zip(other.per_mu) {
            *a = pick(*a, b);
        }
        self
    }

    fn visit(mut self, prefix_idx: usize, prefix: &Prefix, mus: &[f64]) -> Tally {
        for (mu_idx, &mu) in mus.iter().enumerate() {
            self.total += 1;
            let report = bounds_report(prefix, mu);
            if !report.feasible {
                continue;
            }
            self.feasible += 1;
            if !report.conditions_hold() {
                continue;
            }
            self.condition_ok += 1;
            let (Some(lower), Some(upper)) = (report.lower_thm_a, report.upper_thm_b) else {
                continue;
            };
            let cand = Some(Candidate {
                gap: upper - lower,
                lower,
                upper,
                mu_idx,
                prefix_idx,
            });
            self.best = pick(self.best, cand);
            self.per_mu[mu_idx] = pick(self.per_mu[mu_idx], cand);
        }
        self
    }
}

/// Grid search over one prefix length.
pub fn search_length(
    len: usize,
    mus: &[f64],
    prefix_step: f64,
    parallel: bool,
) -> Result<GridSearchResult> {
    let prefixes = enumerate_prefixes(len, prefix_step)?;
    let tally = if parallel {
        prefixes
            .par_iter()
            .enumerate()
            .fold(|| Tally::new(mus.len()), |acc, (i, p)| acc.visit(i, p, mus))
            .reduce(|| Tally::new(mus.len()), Tally::merge)
    } else {
        prefixes
            .iter()
            .enumerate()
            .fold(Tally::new(mus.len()), |acc, (i, p)| acc.visit(i, p, mus))
    };

    let cell = |c: &Candidate| GapCell {
        mu: mus[c.mu_idx],
        max_gap: c.gap,
        prefix: prefixes[c.prefix_idx].clone(),
        lower_thm_a: c.lower,
        upper_thm_b: c.upper,
    };
    let per_mu_best: Vec<Option<GapCell>> =
        tally.per_mu.iter().map(|c| c.as_ref().map(cell)).collect();
    let best = tally.best.as_ref().map(cell);
    Ok(GridSearchResult {
        len,
        mu_grid: mus.to_vec(),
        step: prefix_step,
        best_gap: best.as_ref().map(|b| b.max_gap),
        best_prefix: best.as_ref().map(|b| b.prefix.clone()),
        best_mu: best.as_ref().map(|b| b.mu),
        best_lower: best.as_ref().map(|b| b.lower_thm_a),
        best_upper: best.as_ref().map(|b| b.upper_thm_b),
        cells_total: tally.total,
        cells_feasible: tally.feasible,
        cells_condition_ok: tally.condition_ok,
        per_mu_max: mus
            .iter()
            .zip(&per_mu_best)
            .map(|(&mu, b)| MuMax {
                mu,
                max_gap: b.as_ref().map(|c| c.max_gap),
            })
            .collect(),
        per_mu_best,
    })
}

impl GridSearchResult {
    /// Best cell for each `mu` in the grid.
    pub fn per_mu_best(&self) -> &[Option<GapCell>] {
        &self.per_mu_best
    }
}

/// Runs [`search_length`] for every configured length and combines the
/// per-`mu` maxima (ties go to the smaller length).
pub fn max_gap_search(config: &GridConfig, parallel: bool) -> Result<MaxGapResult> {
    let mus = mu_grid(config.mu_lo, config.mu_hi, config.mu_step)?;
    let mut lengths = config.lengths.clone();
    lengths.sort_unstable();
    lengths.dedup();
    let per_length = lengths
        .iter()
        .map(|&len| search_length(len, &mus, config.prefix_step, parallel))
        .collect::<Result<Vec<_>>>()?;

    let combined = mus
        .iter()
        .enumerate()
        .map(|(i, &mu)| {
            let mut best: Option<(usize, &GapCell)> = None;
            for r in &per_length {
                if let Some(cell) = &r.per_mu_best[i] {
                    if best.is_none_or(|(_, b)| cell.max_gap > b.max_gap) {
                        best = Some((r.len, cell));
                    }
                }
            }
            CombinedMuMax {
                mu,
                max_gap: best.map(|(_, c)| c.max_gap),
                len: best.map(|(l, _)| l),
                prefix: best.map(|(_, c)| c.prefix.clone()),
            }
        })
        .collect();
    Ok(MaxGapResult {
        per_length,
        combined,
    })
}

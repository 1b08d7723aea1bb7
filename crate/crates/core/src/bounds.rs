//! Extremal degree distributions for a fixed low-degree prefix.
//!
//! A [`Prefix`] fixes `p_1..p_L` (with `p_0 = 0`); the remaining mass
//! `p_>L` sits on degrees above `L`. Three completions bound the giant
//! component over all such distributions:
//!
//! * `G` puts all of `p_>L` on `L + 1` (lower bound, any mean);
//! * `G_m` keeps the class mean `mu` by moving a vanishing share to degree
//!   `m`; its giant tends to `1 - g_G(z_G^(mu))` as `m` grows;
//! * `H` splits `p_>L` over `floor(kappa)` and `floor(kappa) + 1`, the most
//!   concentrated mean-preserving tail (upper bound).

use serde::{Deserialize, Serialize};

use crate::degree::{two_point_split, DegreePmf, MASS_TOL};
use crate::error::{Error, Result};
use crate::solver::{extinction_probability, fixed_point_with_mean, giant_fraction};

/// `p_>L` below this is treated as zero.
pub const EMPTY_TAIL_TOL: f64 = 1e-12;
/// `kappa` within this of an integer is treated as that integer.
pub const KAPPA_SNAP: f64 = 1e-12;

/// Fixed probabilities of degrees `1..=L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPrefix", into = "RawPrefix")]
pub struct Prefix {
    probs: Vec<f64>,
    p_gt: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPrefix {
    probs: Vec<f64>,
    #[serde(rename = "L", default)]
    len: usize,
}

impl TryFrom<RawPrefix> for Prefix {
    type Error = Error;

    fn try_from(raw: RawPrefix) -> Result<Self> {
        if raw.len != 0 && raw.len != raw.probs.len() {
            return Err(Error::InvalidPrefix(format!(
                "L = {} but {} probabilities given",
                raw.len,
                raw.probs.len()
            )));
        }
        Prefix::new(raw.probs)
    }
}

impl From<Prefix> for RawPrefix {
    fn from(p: Prefix) -> Self {
        RawPrefix {
            len: p.probs.len(),
            probs: p.probs,
        }
    }
}

impl Prefix {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPrefix("L must be at least 1".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidPrefix(format!("probability {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if sum > 1.0 + MASS_TOL {
            return Err(Error::InvalidPrefix(format!(
                "probabilities sum to {sum} > 1"
            )));
        }
        let rest = 1.0 - sum;
        let p_gt = if rest < EMPTY_TAIL_TOL { 0.0 } else { rest };
        Ok(Prefix { probs, p_gt })
    }

    /// `L`, the number of fixed degrees.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `p_1..p_L`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `p_>L = 1 - sum p_i`, snapped to 0 below [`EMPTY_TAIL_TOL`].
    pub fn p_gt_l(&self) -> f64 {
        self.p_gt
    }

    /// `sum_{d <= L} d p_d`.
    pub fn partial_mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }

    fn next_degree(&self) -> u32 {
        self.probs.len() as u32 + 1
    }

    fn head(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (i as u32 + 1, p))
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.probs.iter().map(|p| format!("{p}")).collect();
        format!("({})", parts.join(","))
    }

    /// Builds a prefix-completed pmf with `tail` appended after degree `L`.
    fn complete(&self, tail: impl IntoIterator<Item = (u32, f64)>, tag: &str) -> Result<DegreePmf> {
        let pmf = DegreePmf::new(self.head().chain(tail))?;
        Ok(pmf.with_provenance(format!("{}-{tag}", self.label())))
    }
}

/// `kappa = (mu - sum_{d<=L} d p_d) / p_>L`, the conditional mean above `L`
/// shared by every member of the class.
pub fn kappa(prefix: &Prefix, mu: f64) -> Result<f64> {
    let p_gt = prefix.p_gt_l();
    if p_gt == 0.0 {
        return Err(Error::EmptyTail);
    }
    let mut k = (mu - prefix.partial_mean()) / p_gt;
    if (k - k.round()).abs() < KAPPA_SNAP {
        k = k.round();
    }
    let min = prefix.next_degree();
    if k < f64::from(min) {
        return Err(Error::InfeasibleMean { kappa: k, min });
    }
    Ok(k)
}

pub fn construct_g(prefix: &Prefix) -> Result<DegreePmf> {
    prefix.complete([(prefix.next_degree(), prefix.p_gt_l())], "G")
}

pub fn construct_h(prefix: &Prefix, mu: f64) -> Result<DegreePmf> {
    let k = kappa(prefix, mu)?;
    prefix.complete(two_point_split(k, prefix.p_gt_l()), "H")
}

/// Mass `(1 - r_m) p_>L` at `L + 1` and `r_m p_>L` at `m`, with
/// `r_m = (kappa - (L+1)) / (m - (L+1))` so the mean stays `mu`.
pub fn construct_g_m(prefix: &Prefix, mu: f64, m: u32) -> Result<DegreePmf> {
    let k = kappa(prefix, mu)?;
    let base = prefix.next_degree();
    if m <= base || f64::from(m) <= k {
        return Err(Error::BadM { m, kappa: k });
    }
    let r = (k - f64::from(base)) / f64::from(m - base);
    let p_gt = prefix.p_gt_l();
    prefix.complete([(base, (1.0 - r) * p_gt), (m, r * p_gt)], &format!("G{m}"))
}

pub fn cond_a_threshold(len: usize) -> f64 {
    (-1.0 / (len as f64 + 1.0)).exp()
}

pub fn cond_b_threshold(len: usize) -> f64 {
    (-2.0 / (len as f64 + 1.0)).exp()
}

/// `(z_G <= e^{-1/(L+1)}, z_H <= e^{-2/(L+1)})`.
pub fn check_conditions(prefix: &Prefix, mu: f64) -> Result<(bool, bool)> {
    let z_g = extinction_probability(&construct_g(prefix)?)?.value;
    let h = if prefix.p_gt_l() == 0.0 {
        construct_g(prefix)?
    } else {
        construct_h(prefix, mu)?
    };
    let z_h = extinction_probability(&h)?.value;
    Ok((
        z_g <= cond_a_threshold(prefix.len()),
        z_h <= cond_b_threshold(prefix.len()),
    ))
}

/// A bound together with whether its technical condition held.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub guaranteed: bool,
}

/// `xi_G`; holds for every distribution sharing the prefix, whatever its mean.
pub fn lower_bound_prop1(prefix: &Prefix) -> Result<f64> {
    giant_fraction(&construct_g(prefix)?)
}

/// `1 - g_G(z_G^(mu))`.
pub fn lower_bound_thm_a(prefix: &Prefix, mu: f64) -> Result<BoundValue> {
    let g = construct_g(prefix)?;
    if prefix.p_gt_l() > 0.0 {
        kappa(prefix, mu)?;
    }
    let z_g = extinction_probability(&g)?.value;
    let z_mu = fixed_point_with_mean(&g, mu)?.value;
    Ok(BoundValue {
        value: 1.0 - g.pgf(z_mu)?,
        guaranteed: z_g <= cond_a_threshold(prefix.len()),
    })
}

/// `xi_H`.
pub fn upper_bound_thm_b(prefix: &Prefix, mu: f64) -> Result<BoundValue> {
    let h = construct_h(prefix, mu)?;
    let z_h = extinction_probability(&h)?.value;
    Ok(BoundValue {
        value: giant_fraction(&h)?,
        guaranteed: z_h <= cond_b_threshold(prefix.len()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub prefix: Prefix,
    pub mu: f64,
    pub kappa: Option<f64>,
    #[serde(rename = "p_gt_L")]
    pub p_gt_l: f64,
    #[serde(rename = "G")]
    pub g: DegreePmf,
    #[serde(rename = "H")]
    pub h: Option<DegreePmf>,
    #[serde(rename = "z_G")]
    pub z_g: Option<f64>,
    #[serde(rename = "z_G_mu")]
    pub z_g_mu: Option<f64>,
    #[serde(rename = "z_H")]
    pub z_h: Option<f64>,
    pub cond_a: bool,
    pub cond_b: bool,
    pub lower_prop1: Option<f64>,
    pub lower_thm_a: Option<f64>,
    pub upper_thm_b: Option<f64>,
    pub feasible: bool,
    pub reason: Option<String>,
}

impl BoundsReport {
    /// `upper_thm_b - lower_thm_a` for feasible cells.
    pub fn gap(&self) -> Option<f64> {
        if !self.feasible {
            return None;
        }
        Some(self.upper_thm_b? - self.lower_thm_a?)
    }

    pub fn conditions_hold(&self) -> bool {
        self.feasible && self.cond_a && self.cond_b
    }
}

/// Evaluates every bound for `(prefix, mu)`.
///
/// Never fails: infeasible classes and numerical failures come back with
/// `feasible = false` and a `reason`.
pub fn bounds_report(prefix: &Prefix, mu: f64) -> BoundsReport {
    let g = construct_g(prefix).expect("prefix validated on construction");
    let mut report = BoundsReport {
        prefix: prefix.clone(),
        mu,
        kappa: None,
        p_gt_l: prefix.p_gt_l(),
        g: g.clone(),
        h: None,
        z_g: None,
        z_g_mu: None,
        z_h: None,
        cond_a: false,
        cond_b: false,
        lower_prop1: None,
        lower_thm_a: None,
        upper_thm_b: None,
        feasible: false,
        reason: None,
    };
    if let Err(e) = fill_report(&mut report, prefix, &g) {
        report.feasible = false;
        report.reason = Some(e.to_string());
    }
    report
}

fn fill_report(report: &mut BoundsReport, prefix: &Prefix, g: &DegreePmf) -> Result<()> {
    let mu = report.mu;
    // Mean-free quantities first, so they survive an infeasible mean.
    let z_g = extinction_probability(g)?.value;
    report.z_g = Some(z_g);
    report.cond_a = z_g <= cond_a_threshold(prefix.len());
    report.lower_prop1 = Some(giant_fraction(g)?);

    let h = if prefix.p_gt_l() == 0.0 {
        // The class is the single prefix distribution, if its mean is mu.
        let mean = g.mean();
        if (mean - mu).abs() > MASS_TOL {
            return Err(Error::MeanMismatch { mu, mean });
        }
        g.clone()
    } else {
        report.kappa = Some(kappa(prefix, mu)?);
        construct_h(prefix, mu)?
    };
    report.h = Some(h.clone());

    let z_g_mu = fixed_point_with_mean(g, mu.max(g.mean()))?.value;
    let z_h = extinction_probability(&h)?.value;
    report.z_g_mu = Some(z_g_mu);
    report.z_h = Some(z_h);
    report.cond_b = z_h <= cond_b_threshold(prefix.len());

    report.lower_thm_a = Some(1.0 - g.pgf(z_g_mu)?);
    report.upper_thm_b = Some(giant_fraction(&h)?);
    report.feasible = true;
    Ok(())
}

/// `N = Z N1 + (1 - Z) N2` with `E[N1] = floor(kappa)`, `E[N2] = floor(kappa) + 1`
/// and `Z ~ Bernoulli(floor(kappa) + 1 - kappa)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureDecomposition {
    pub n1: DegreePmf,
    pub n2: DegreePmf,
    pub z_param: f64,
    pub kappa_low: f64,
    pub kappa_hi: f64,
    pub x_param: f64,
    pub y_param: f64,
}

impl MixtureDecomposition {
    /// Pointwise `z n1 + (1 - z) n2`.
    pub fn mixture(&self) -> Vec<(u32, f64)> {
        let mut out: Vec<(u32, f64)> = Vec::new();
        let z = self.z_param;
        let terms = self
            .n1
            .probs()
            .iter()
            .map(|&(d, p)| (d, z * p))
            .chain(self.n2.probs().iter().map(|&(d, p)| (d, (1.0 - z) * p)));
        for (d, p) in terms.filter(|&(_, p)| p > 0.0) {
            match out.binary_search_by_key(&d, |&(k, _)| k) {
                Ok(i) => out[i].1 += p,
                Err(i) => out.insert(i, (d, p)),
            }
        }
        out
    }
}

pub fn mixture_decompose(pmf: &DegreePmf) -> Result<MixtureDecomposition> {
    let mut k = pmf.mean();
    if (k - k.round()).abs() < KAPPA_SNAP {
        k = k.round();
    }
    let floor = k.floor();
    let split = floor as u32;
    type Atoms = Vec<(u32, f64)>;
    let (low, hi): (Atoms, Atoms) = pmf.probs().iter().partition(|&&(d, _)| d <= split);

    if hi.is_empty() {
        // Only a point mass at an integral kappa has nothing above floor(kappa).
        if low.len() == 1 && f64::from(low[0].0) == k {
            return Ok(MixtureDecomposition {
                n1: pmf.clone(),
                n2: DegreePmf::point_mass(split + 1),
                z_param: 1.0,
                kappa_low: k,
                kappa_hi: k,
                x_param: 1.0,
                y_param: 0.0,
            });
        }
        return Err(Error::DegenerateSplit(split));
    }
    if low.is_empty() {
        return Err(Error::DegenerateSplit(split));
    }

    let mass = |v: &[(u32, f64)]| v.iter().map(|&(_, p)| p).sum::<f64>();
    let cond_mean =
        |v: &[(u32, f64)]| v.iter().map(|&(d, p)| f64::from(d) * p).sum::<f64>() / mass(v);
    let (p_low, p_hi) = (mass(&low), mass(&hi));
    let (kappa_low, kappa_hi) = (cond_mean(&low), cond_mean(&hi));
    let spread = kappa_hi - kappa_low;
    // Both lie in [0, 1] exactly; clamp rounding noise.
    let x = ((kappa_hi - floor) / spread).clamp(0.0, 1.0);
    let y = ((kappa_hi - floor - 1.0) / spread).clamp(0.0, 1.0);

    let blend = |w: f64| -> Result<DegreePmf> {
        let entries = low
            .iter()
            .map(|&(d, p)| (d, w * p / p_low))
            .chain(hi.iter().map(|&(d, p)| (d, (1.0 - w) * p / p_hi)));
        DegreePmf::new(entries)
    };
    Ok(MixtureDecomposition {
        n1: blend(x)?.with_provenance("N1"),
        n2: blend(y)?.with_provenance("N2"),
        z_param: floor + 1.0 - k,
        kappa_low,
        kappa_hi,
        x_param: x,
        y_param: y,
    })
}

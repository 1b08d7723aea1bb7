//! Degree distributions with finite support.
//!
//! A [`DegreePmf`] is a sparse, sorted list of `(degree, probability)` pairs.
//! It is validated once at construction and immutable afterwards, so every
//! method here is a pure function of the stored values.
//!
//! Infinite tails (Poisson, power law) enter through [`TailSpec`], which
//! materializes a finite [`TailFragment`] by adaptive truncation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of the total mass from 1.
pub const MASS_TOL: f64 = 1e-9;

/// Omitted mean contribution allowed when truncating a tail.
pub const TAIL_MEAN_TOL: f64 = 1e-10;

/// Default omitted-mass tolerance for tail truncation.
pub const DEFAULT_TAIL_MASS_TOL: f64 = 1e-12;

/// Enumeration cap for power-law tails when no hint is given.
pub const DEFAULT_POWER_LAW_CAP: u32 = 10_000;

const POISSON_CAP: u32 = 1_000_000;

/// `x^k` by repeated squaring.
#[inline]
pub(crate) fn powu(mut x: f64, mut k: u32) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= x;
        }
        x *= x;
        k >>= 1;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPmf", into = "RawPmf")]
pub struct DegreePmf {
    probs: Vec<(u32, f64)>,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
struct RawPmf {
    probs: Vec<(u32, f64)>,
    #[serde(default)]
    provenance: String,
}

impl TryFrom<RawPmf> for DegreePmf {
    type Error = Error;

    fn try_from(raw: RawPmf) -> Result<Self> {
        Ok(DegreePmf::new(raw.probs)?.with_provenance(raw.provenance))
    }
}

impl From<DegreePmf> for RawPmf {
    fn from(pmf: DegreePmf) -> Self {
        RawPmf {
            probs: pmf.probs,
            provenance: pmf.provenance,
        }
    }
}

impl DegreePmf {
    /// Validates and normalizes a list of `(degree, probability)` entries.
    ///
    /// Zero-probability entries are dropped and the result is sorted by
    /// degree. The total must be within [`MASS_TOL`] of 1.
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let mut probs: Vec<(u32, f64)> = entries.into_iter().collect();
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for &(degree, prob) in &probs {
            if !prob.is_finite() {
                return Err(Error::NonFinite(degree));
            }
            if prob < 0.0 {
                return Err(Error::NegativeProbability { degree, prob });
            }
        }
        probs.sort_by_key(|&(d, _)| d);
        if let Some(w) = probs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateDegree(w[0].0));
        }
        let sum: f64 = probs.iter().map(|&(_, p)| p).sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::SumNotOne { sum });
        }
        probs.retain(|&(_, p)| p > 0.0);
        Ok(DegreePmf {
            probs,
            provenance: String::new(),
        })
    }

    pub fn point_mass(degree: u32) -> Self {
        DegreePmf {
            probs: vec![(degree, 1.0)],
            provenance: String::new(),
        }
    }

    pub fn with_provenance(mut self, label: impl Into<String>) -> Self {
        self.provenance = label.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Sorted `(degree, probability)` pairs, all probabilities positive.
    pub fn probs(&self) -> &[(u32, f64)] {
        &self.probs
    }

    pub fn prob(&self, degree: u32) -> f64 {
        match self.probs.binary_search_by_key(&degree, |&(d, _)| d) {
            Ok(i) => self.probs[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.probs.last().map_or(0, |&(d, _)| d)
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().map(|&(_, p)| p).sum()
    }

    /// `1 - total mass`; nonzero only for truncated or decimal-entered input.
    pub fn mass_deficit(&self) -> f64 {
        1.0 - self.total_mass()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().map(|&(d, p)| f64::from(d) * p).sum()
    }

    /// `E[D(D-1)]`.
    pub fn second_factorial_moment(&self) -> f64 {
        self.probs
            .iter()
            .map(|&(d, p)| {
                let d = f64::from(d);
                d * (d - 1.0) * p
            })
            .sum()
    }

    /// `nu = E[D(D-1)] / E[D]`, the mean offspring of the exploration process.
    pub fn critical_parameter(&self) -> Result<f64> {
        let mu = self.mean();
        if mu <= 0.0 {
            return Err(Error::ZeroMean);
        }
        Ok(self.second_factorial_moment() / mu)
    }

    /// Offspring law of a vertex reached along a uniformly chosen edge:
    /// `q_d = (d + 1) p_{d+1} / mu`.
    pub fn size_biased_downshift(&self) -> Result<DegreePmf> {
        let mu = self.mean();
        if mu <= 0.0 {
            return Err(Error::ZeroMean);
        }
        let probs = self
            .probs
            .iter()
            .filter(|&&(d, _)| d > 0)
            .map(|&(d, p)| (d - 1, f64::from(d) * p / mu))
            .collect();
        Ok(DegreePmf {
            probs,
            provenance: format!("{}~downshift", self.provenance),
        })
    }

    /// Generating function `g(s) = sum p_d s^d` on `[0, 1]`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        check_unit(s)?;
        Ok(self.pgf_unchecked(s))
    }

    /// Derivative `g'(s) = sum d p_d s^(d-1)` on `[0, 1]`.
    pub fn pgf_prime(&self, s: f64) -> Result<f64> {
        check_unit(s)?;
        Ok(self.pgf_prime_unchecked(s))
    }

    /// Horner over the sparse support, highest degree first.
    pub(crate) fn pgf_unchecked(&self, s: f64) -> f64 {
        let mut iter = self.probs.iter().rev();
        let Some(&(mut prev, p)) = iter.next() else {
            return 0.0;
        };
        let mut acc = p;
        for &(d, p) in iter {
            acc = acc * powu(s, prev - d) + p;
            prev = d;
        }
        acc * powu(s, prev)
    }

    pub(crate) fn pgf_prime_unchecked(&self, s: f64) -> f64 {
        let mut iter = self.probs.iter().rev().filter(|&&(d, _)| d > 0);
        let Some(&(mut prev, p)) = iter.next() else {
            return 0.0;
        };
        let mut acc = f64::from(prev) * p;
        for &(d, p) in iter {
            acc = acc * powu(s, prev - d) + f64::from(d) * p;
            prev = d;
        }
        acc * powu(s, prev - 1)
    }

    /// `g''(s)`, used by the Newton polish.
    pub(crate) fn pgf_second_unchecked(&self, s: f64) -> f64 {
        self.probs
            .iter()
            .filter(|&&(d, _)| d > 1)
            .map(|&(d, p)| {
                let df = f64::from(d);
                df * (df - 1.0) * p * powu(s, d - 2)
            })
            .sum()
    }

    /// Parses the tab-separated text format: one `degree<TAB>probability`
    /// per line, `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(d), Some(p), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected `degree<TAB>probability`, got {line:?}"),
                });
            };
            entries.push(parse_entry(d, p, idx + 1)?);
        }
        DegreePmf::new(entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.provenance.is_empty() {
            out.push_str(&format!("# {}\n", self.provenance));
        }
        for &(d, p) in &self.probs {
            out.push_str(&format!("{d}\t{p}\n"));
        }
        out
    }

    /// Parses the inline form `"d:p,d:p,..."`.
    pub fn parse_inline(spec: &str) -> Result<Self> {
        let entries = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|item| {
                let (d, p) = item.split_once(':').ok_or_else(|| Error::Parse {
                    line: 1,
                    msg: format!("expected `degree:probability`, got {item:?}"),
                })?;
                parse_entry(d.trim(), p.trim(), 1)
            })
            .collect::<Result<Vec<_>>>()?;
        DegreePmf::new(entries)
    }
}

fn parse_entry(d: &str, p: &str, line: usize) -> Result<(u32, f64)> {
    let degree = d.parse::<u32>().map_err(|e| Error::Parse {
        line,
        msg: format!("degree {d:?}: {e}"),
    })?;
    let prob = p.parse::<f64>().map_err(|e| Error::Parse {
        line,
        msg: format!("probability {p:?}: {e}"),
    })?;
    Ok((degree, prob))
}

fn check_unit(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::DomainError(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailKind {
    /// Unnormalized Poisson probabilities `P(Po(rate) = d)` for `d >= min_degree`.
    ConditionedPoisson { rate: f64, min_degree: u32 },
    /// `constant * d^(-exponent)` for `d >= min_degree`.
    PowerLaw {
        constant: f64,
        exponent: f64,
        min_degree: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    #[serde(flatten)]
    pub kind: TailKind,
    #[serde(default = "default_tail_tol")]
    pub truncation_mass_tol: f64,
}

fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_MASS_TOL
}

impl TailSpec {
    pub fn poisson(rate: f64, min_degree: u32) -> Self {
        TailSpec {
            kind: TailKind::ConditionedPoisson { rate, min_degree },
            truncation_mass_tol: DEFAULT_TAIL_MASS_TOL,
        }
    }

    pub fn power_law(constant: f64, exponent: f64, min_degree: u32) -> Self {
        TailSpec {
            kind: TailKind::PowerLaw {
                constant,
                exponent,
                min_degree,
            },
            truncation_mass_tol: DEFAULT_TAIL_MASS_TOL,
        }
    }

    pub fn with_mass_tol(mut self, tol: f64) -> Self {
        self.truncation_mass_tol = tol;
        self
    }

    pub fn min_degree(&self) -> u32 {
        match self.kind {
            TailKind::ConditionedPoisson { min_degree, .. }
            | TailKind::PowerLaw { min_degree, .. } => min_degree,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            TailKind::ConditionedPoisson { rate, min_degree } => {
                format!("poisson({rate})@{min_degree}")
            }
            TailKind::PowerLaw {
                constant,
                exponent,
                min_degree,
            } => format!("{constant}d^-{exponent}@{min_degree}"),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.truncation_mass_tol > 0.0 && self.truncation_mass_tol.is_finite()) {
            return Err(Error::InvalidTail(format!(
                "truncation tolerance {} must be positive",
                self.truncation_mass_tol
            )));
        }
        match self.kind {
            TailKind::ConditionedPoisson { rate, .. } => {
                if !(rate > 0.0 && rate.is_finite()) {
                    return Err(Error::InvalidTail(format!("poisson rate {rate}")));
                }
            }
            TailKind::PowerLaw {
                constant,
                exponent,
                min_degree,
            } => {
                if exponent.is_nan() || exponent <= 2.0 {
                    return Err(Error::DivergentTail { alpha: exponent });
                }
                if !(constant > 0.0 && constant.is_finite()) {
                    return Err(Error::InvalidTail(format!("power-law constant {constant}")));
                }
                if min_degree == 0 {
                    return Err(Error::InvalidTail("power law needs min_degree >= 1".into()));
                }
            }
        }
        Ok(())
    }

    /// Expands the tail into explicit probabilities from `min_degree` up to
    /// an adaptive cutoff.
    ///
    /// The cutoff is the first degree where the omitted mass is below
    /// `truncation_mass_tol` and the omitted mean contribution is below
    /// [`TAIL_MEAN_TOL`]. Enumeration stops early at `max_degree_hint`
    /// (default [`DEFAULT_POWER_LAW_CAP`] for power laws); the fragment then
    /// reports `capped = true` with the omitted mass and mean.
    pub fn materialize(&self, max_degree_hint: Option<u32>) -> Result<TailFragment> {
        self.validate()?;
        let tol = self.truncation_mass_tol;
        let frag = match self.kind {
            TailKind::ConditionedPoisson { rate, min_degree } => {
                let cap = max_degree_hint.unwrap_or(POISSON_CAP).max(min_degree);
                let ln_rate = rate.ln();
                let mut ln_p = -rate;
                for d in 1..=min_degree {
                    ln_p += ln_rate - f64::from(d).ln();
                }
                let mut entries = Vec::new();
                let mut d = min_degree;
                loop {
                    let p = ln_p.exp();
                    entries.push((d, p));
                    // Beyond the mode the terms decay at least geometrically
                    // with ratio rate / (d + 2).
                    let next = (ln_p + ln_rate - f64::from(d + 1).ln()).exp();
                    let (omitted_mass, omitted_mean) = if f64::from(d) + 2.0 > rate {
                        let q = rate / (f64::from(d) + 2.0);
                        let mass = next / (1.0 - q);
                        (mass, rate * (p + mass))
                    } else {
                        (f64::INFINITY, f64::INFINITY)
                    };
                    let done = omitted_mass < tol && omitted_mean < TAIL_MEAN_TOL;
                    if done || d >= cap {
                        break TailFragment {
                            entries,
                            omitted_mass: if done { 0.0 } else { omitted_mass },
                            omitted_mean: if done { 0.0 } else { omitted_mean },
                            capped: !done,
                        };
                    }
                    d += 1;
                    ln_p += ln_rate - f64::from(d).ln();
                }
            }
            TailKind::PowerLaw {
                constant,
                exponent,
                min_degree,
            } => {
                let cap = max_degree_hint
                    .unwrap_or(DEFAULT_POWER_LAW_CAP)
                    .max(min_degree);
                let mut entries = Vec::new();
                let mut d = min_degree;
                loop {
                    entries.push((d, constant * f64::from(d).powf(-exponent)));
                    let omitted_mass = constant * power_tail_sum(exponent, d);
                    let omitted_mean = constant * power_tail_sum(exponent - 1.0, d);
                    let done = omitted_mass < tol && omitted_mean < TAIL_MEAN_TOL;
                    if done || d >= cap {
                        break TailFragment {
                            entries,
                            omitted_mass: if done { 0.0 } else { omitted_mass },
                            omitted_mean: if done { 0.0 } else { omitted_mean },
                            capped: !done,
                        };
                    }
                    d += 1;
                }
            }
        };
        let total = frag.mass() + frag.omitted_mass;
        if total > 1.0 + MASS_TOL {
            return Err(Error::InvalidTail(format!("tail mass {total} exceeds 1")));
        }
        Ok(frag)
    }
}

/// `sum_{d > n} d^(-a)` for `a > 1` via Euler-Maclaurin.
pub(crate) fn power_tail_sum(a: f64, n: u32) -> f64 {
    let n = f64::from(n);
    n.powf(1.0 - a) / (a - 1.0) - 0.5 * n.powf(-a) + a / 12.0 * n.powf(-a - 1.0)
        - a * (a + 1.0) * (a + 2.0) / 720.0 * n.powf(-a - 3.0)
}

/// Explicit tail probabilities plus whatever enumeration left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFragment {
    pub entries: Vec<(u32, f64)>,
    /// Mass beyond the last entry when `capped`, otherwise 0 (below tolerance).
    pub omitted_mass: f64,
    pub omitted_mean: f64,
    pub capped: bool,
}

impl TailFragment {
    pub fn mass(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    pub fn mean_contribution(&self) -> f64 {
        self.entries.iter().map(|&(d, p)| f64::from(d) * p).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass() + self.omitted_mass
    }

    pub fn total_mean_contribution(&self) -> f64 {
        self.mean_contribution() + self.omitted_mean
    }

    /// The omitted remainder concentrated on the two integers around its
    /// conditional mean, preserving both its mass and its mean.
    pub fn lumped_remainder(&self) -> Vec<(u32, f64)> {
        if !self.capped || self.omitted_mass <= 0.0 {
            return Vec::new();
        }
        let last = self.entries.last().map_or(0, |&(d, _)| d);
        let center = (self.omitted_mean / self.omitted_mass).max(f64::from(last) + 1.0);
        two_point_split(center, self.omitted_mass)
    }

    /// Entries followed by the lumped remainder.
    pub fn completed_entries(&self) -> Vec<(u32, f64)> {
        let mut out = self.entries.clone();
        for (d, p) in self.lumped_remainder() {
            match out.last_mut() {
                Some(last) if last.0 == d => last.1 += p,
                _ => out.push((d, p)),
            }
        }
        out
    }
}

/// Splits `mass` over `floor(center)` and `floor(center) + 1` so the mean is
/// `center`. A `center` within 1e-12 of an integer yields a single atom.
pub(crate) fn two_point_split(center: f64, mass: f64) -> Vec<(u32, f64)> {
    let rounded = center.round();
    if (center - rounded).abs() < 1e-12 {
        return vec![(rounded as u32, mass)];
    }
    let lo = center.floor();
    let hi_w = (center - lo) * mass;
    let lo_w = (lo + 1.0 - center) * mass;
    vec![(lo as u32, lo_w), (lo as u32 + 1, hi_w)]
}

//! One-parameter families of degree distributions with a fixed mean.
//!
//! Three low degrees `d1 < d2 < d3` absorb whatever mass an optional fixed
//! tail leaves. `p_{d1}` is the control; `p_{d2}` and `p_{d3}` follow from
//! the mass and mean constraints, so the family is affine in the control.

use serde::{Deserialize, Serialize};

use crate::degree::{DegreePmf, TailFragment, TailSpec};
use crate::error::{Error, Result};
use crate::solver::giant_component;

const FEAS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub control: f64,
    pub pmf: DegreePmf,
    pub xi: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowDegreeFamily {
    degrees: [u32; 3],
    mu: f64,
    tail: Vec<(u32, f64)>,
    label: String,
}

impl LowDegreeFamily {
    /// Distributions on exactly `degrees` with mean `mu`.
    pub fn three_point(degrees: [u32; 3], mu: f64) -> Result<Self> {
        Self::build(degrees, mu, Vec::new(), format!("{degrees:?}"))
    }

    /// Distributions equal to `tail` from its minimum degree on, with the
    /// remaining mass on `degrees` and mean `mu`.
    pub fn fixed_tail(tail: &TailSpec, degrees: [u32; 3], mu: f64) -> Result<Self> {
        Self::with_fragment(&tail.materialize(None)?, tail.label(), degrees, mu)
    }

    pub fn with_fragment(
        fragment: &TailFragment,
        label: String,
        degrees: [u32; 3],
        mu: f64,
    ) -> Result<Self> {
        let tail = fragment.completed_entries();
        if let Some(&(first, _)) = tail.first() {
            if first <= degrees[2] {
                return Err(Error::InvalidTail(format!(
                    "tail starts at {first}, overlapping low degrees {degrees:?}"
                )));
            }
        }
        Self::build(degrees, mu, tail, label)
    }

    fn build(degrees: [u32; 3], mu: f64, tail: Vec<(u32, f64)>, label: String) -> Result<Self> {
        if !(degrees[0] < degrees[1] && degrees[1] < degrees[2]) {
            return Err(Error::InvalidTail(format!(
                "low degrees {degrees:?} must be strictly increasing"
            )));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::ZeroMean);
        }
        Ok(LowDegreeFamily {
            degrees,
            mu,
            tail,
            label,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn free_mass(&self) -> f64 {
        1.0 - self.tail.iter().map(|&(_, p)| p).sum::<f64>()
    }

    fn free_mean(&self) -> f64 {
        self.mu
            - self
                .tail
                .iter()
                .map(|&(d, p)| f64::from(d) * p)
                .sum::<f64>()
    }

    /// Low-degree probabilities for a control value, unchecked.
    fn low_probs(&self, control: f64) -> [f64; 3] {
        let [d1, d2, d3] = self.degrees.map(f64::from);
        let mass = self.free_mass() - control;
        let mean = self.free_mean() - d1 * control;
        let p3 = (mean - d2 * mass) / (d3 - d2);
        [control, mass - p3, p3]
    }

    /// Interval of controls giving probabilities in `[0, 1]`, if any.
    pub fn control_range(&self) -> Option<(f64, f64)> {
        let [d1, d2, d3] = self.degrees.map(f64::from);
        let (mass, mean) = (self.free_mass(), self.free_mean());
        let lo = ((d2 * mass - mean) / (d2 - d1)).max(0.0);
        let hi = ((d3 * mass - mean) / (d3 - d1)).min(mass);
        (lo <= hi + FEAS_TOL && mass >= -FEAS_TOL).then_some((lo, hi.max(lo)))
    }

    pub fn point(&self, control: f64) -> Result<FamilyPoint> {
        let probs = self.low_probs(control);
        if probs
            .iter()
            .any(|&p| !(-FEAS_TOL..=1.0 + FEAS_TOL).contains(&p))
        {
            return Err(Error::InfeasibleControl { control });
        }
        let low = self
            .degrees
            .iter()
            .zip(probs)
            .map(|(&d, p)| (d, p.clamp(0.0, 1.0)));
        let pmf = DegreePmf::new(low.chain(self.tail.iter().copied()))?.with_provenance(format!(
            "{} mu={} p{}={control}",
            self.label, self.mu, self.degrees[0]
        ));
        let g = giant_component(&pmf)?;
        Ok(FamilyPoint {
            control,
            xi: g.xi,
            nu: g.nu,
            pmf,
        })
    }

    /// Points at every multiple of `step` inside the control range, plus
    /// the range endpoints when they are off the grid.
    pub fn sweep(&self, step: f64) -> Result<Vec<FamilyPoint>> {
        if step.is_nan() || step <= 0.0 {
            return Err(Error::BadStep(step));
        }
        let Some((lo, hi)) = self.control_range() else {
            return Ok(Vec::new());
        };
        let mut controls = Vec::new();
        let first = (lo / step - 1e-9).ceil() as i64;
        let last = (hi / step + 1e-9).floor() as i64;
        if (first as f64 * step - lo).abs() > 1e-9 {
            controls.push(lo);
        }
        controls.extend((first..=last).map(|k| ((k as f64 * step) * 1e12).round() / 1e12));
        if (last as f64 * step - hi).abs() > 1e-9 {
            controls.push(hi);
        }
        controls.into_iter().map(|c| self.point(c)).collect()
    }
}

/// The member of the `{d1, d2, d3}` family with mean `mu` and `p_{d1} = control`.
pub fn three_point_family(degrees: [u32; 3], mu: f64, control: f64) -> Result<FamilyPoint> {
    LowDegreeFamily::three_point(degrees, mu)?.point(control)
}

/// The member with the fixed `tail`, mean `mu` and `p_{d1} = control`.
pub fn fixed_tail_family(
    tail: &TailSpec,
    low_support: [u32; 3],
    mu: f64,
    control: f64,
) -> Result<FamilyPoint> {
    LowDegreeFamily::fixed_tail(tail, low_support, mu)?.point(control)
}

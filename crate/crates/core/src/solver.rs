//! Extinction probabilities and giant-component size.
//!
//! The extinction probability of the exploration process is the smallest root
//! in `[0, 1]` of `h(s) = s - g'(s) / mu`. Because `g'` has non-negative
//! coefficients, `h` is concave, `h(0) <= 0` and `h(1) >= 0` whenever
//! `mu >= E[D]`. The set `{h >= 0}` is therefore an interval `[z, 1]`, and
//! the first grid point of a uniform scan with `h >= 0` brackets `z`.

use serde::{Deserialize, Serialize};

use crate::degree::DegreePmf;
use crate::error::{Error, Result};

/// Uniform scan resolution used to bracket the smallest root.
pub const SCAN_POINTS: u32 = 1024;
/// Bisection stops once the bracket is narrower than this.
pub const BRACKET_WIDTH: f64 = 1e-14;
/// Maximum residual `|s - g'(s)/mu|` accepted as converged.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// `|nu - 1|` below this is reported as critical.
pub const NEAR_CRITICAL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 200;
const MAX_NEWTON: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

impl FixedPointResult {
    fn exact(value: f64, residual: f64) -> Self {
        FixedPointResult {
            value,
            iterations: 0,
            residual,
            converged: true,
        }
    }
}

/// Smallest fixed point of `s -> g'(s) / mean(pmf)`.
///
/// Returns exactly 1 when `nu <= 1`.
pub fn extinction_probability(pmf: &DegreePmf) -> Result<FixedPointResult> {
    let mean = pmf.mean();
    if mean <= 0.0 {
        return Err(Error::ZeroMean);
    }
    smallest_root(pmf, mean, true)
}

/// Smallest fixed point of `s -> g'(s) / mu` for a class mean `mu >= mean(pmf)`.
pub fn fixed_point_with_mean(pmf: &DegreePmf, mu: f64) -> Result<FixedPointResult> {
    let mean = pmf.mean();
    if mean <= 0.0 {
        return Err(Error::ZeroMean);
    }
    if mu < mean * (1.0 - 1e-12) {
        return Err(Error::MeanMismatch { mu, mean });
    }
    let same_mean = (mu - mean).abs() <= 1e-12 * mean;
    smallest_root(pmf, if same_mean { mean } else { mu }, same_mean)
}

fn smallest_root(pmf: &DegreePmf, mu: f64, own_mean: bool) -> Result<FixedPointResult> {
    let h = |s: f64| s - pmf.pgf_prime_unchecked(s) / mu;

    let h0 = h(0.0);
    if h0 >= 0.0 {
        return Ok(FixedPointResult::exact(0.0, h0.abs()));
    }
    if own_mean {
        // h(1) = 0 exactly; the root below 1 exists iff nu > 1.
        let nu = pmf.second_factorial_moment() / mu;
        if nu <= 1.0 {
            return Ok(FixedPointResult::exact(1.0, h(1.0).abs()));
        }
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    for i in 1..=SCAN_POINTS {
        let s = f64::from(i) / f64::from(SCAN_POINTS);
        if h(s) >= 0.0 {
            hi = s;
            break;
        }
        lo = s;
    }

    let mut iterations = 0;
    while hi - lo > BRACKET_WIDTH && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    // Damped Newton polish, confined to the final bracket.
    let mut s = hi;
    let mut residual = h(s).abs();
    for _ in 0..MAX_NEWTON {
        if residual == 0.0 {
            break;
        }
        let slope = 1.0 - pmf.pgf_second_unchecked(s) / mu;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let mut step = h(s) / slope;
        let mut improved = false;
        for _ in 0..8 {
            let cand = (s - step).clamp(lo, hi);
            let r = h(cand).abs();
            if r < residual {
                s = cand;
                residual = r;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !improved {
            break;
        }
    }

    if residual > RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(FixedPointResult {
        value: s.clamp(0.0, 1.0),
        iterations,
        residual,
        converged: true,
    })
}

/// Summary of the giant component of a configuration model with this degree law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GiantComponent {
    pub mu: f64,
    pub nu: f64,
    pub z_tilde: f64,
    pub xi: f64,
    pub near_critical: bool,
}

pub fn giant_component(pmf: &DegreePmf) -> Result<GiantComponent> {
    if pmf.prob(2) >= 1.0 - 1e-12 {
        return Err(Error::DegenerateTwoRegular);
    }
    let mu = pmf.mean();
    let nu = pmf.critical_parameter()?;
    if (nu - 1.0).abs() < NEAR_CRITICAL || nu <= 1.0 {
        return Ok(GiantComponent {
            mu,
            nu,
            z_tilde: 1.0,
            xi: 0.0,
            near_critical: (nu - 1.0).abs() < NEAR_CRITICAL,
        });
    }
    let z = extinction_probability(pmf)?.value;
    let xi = (1.0 - pmf.pgf_unchecked(z)).clamp(0.0, 1.0);
    Ok(GiantComponent {
        mu,
        nu,
        z_tilde: z,
        xi,
        near_critical: false,
    })
}

/// Asymptotic fraction of vertices in the giant component, `1 - g(z)`.
pub fn giant_fraction(pmf: &DegreePmf) -> Result<f64> {
    giant_component(pmf).map(|g| g.xi)
}

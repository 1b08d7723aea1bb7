//! Oracles and random generators shared by the integration suites.
#![allow(dead_code)]

use giant_core::{bounds_report, BoundsReport, DegreePmf, Prefix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monotone iteration `s <- g'(s)/mu` from 0, evaluating `g'` by direct
/// summation (independent of the library's Horner evaluation).
pub fn monotone_iteration(pmf: &DegreePmf, mu: f64, steps: usize) -> f64 {
    let terms: Vec<(i32, f64)> = pmf
        .probs()
        .iter()
        .filter(|&&(d, _)| d > 0)
        .map(|&(d, p)| (d as i32 - 1, f64::from(d) * p / mu))
        .collect();
    let mut s = 0.0f64;
    for _ in 0..steps {
        let next: f64 = terms.iter().map(|&(e, c)| c * s.powi(e)).sum();
        if next == s {
            break;
        }
        s = next;
    }
    s
}

/// Direct-sum generating function.
pub fn pgf_direct(pmf: &DegreePmf, s: f64) -> f64 {
    pmf.probs().iter().map(|&(d, p)| p * s.powi(d as i32)).sum()
}

/// Random weights summing to 1 (normalized exponentials).
pub fn simplex(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Random pmf on a random subset of `0..=max_degree`.
pub fn random_pmf(rng: &mut impl Rng, max_degree: u32) -> DegreePmf {
    let k = rng.random_range(1..=6usize.min(max_degree as usize + 1));
    let mut degrees: Vec<u32> = Vec::new();
    while degrees.len() < k {
        let d = rng.random_range(0..=max_degree);
        if !degrees.contains(&d) {
            degrees.push(d);
        }
    }
    let w = simplex(rng, k);
    DegreePmf::new(degrees.into_iter().zip(w)).unwrap()
}

/// Random pmf with support in `0..=20` and `nu >= nu_min`.
pub fn random_supercritical(rng: &mut impl Rng, nu_min: f64) -> DegreePmf {
    loop {
        let f = random_pmf(rng, 20);
        if f.mean() <= 0.0 || f.prob(2) >= 1.0 - 1e-12 {
            continue;
        }
        if f.critical_parameter().unwrap() >= nu_min {
            return f;
        }
    }
}

/// Random prefix of length `len` with `p_>L >= min_tail`.
pub fn random_prefix(rng: &mut impl Rng, len: usize, min_tail: f64) -> Prefix {
    loop {
        let w = simplex(rng, len + 1);
        // Sparsify now and then so zero entries are covered.
        let probs: Vec<f64> = w[..len]
            .iter()
            .map(|&p| if rng.random_bool(0.2) { 0.0 } else { p })
            .collect();
        let p = Prefix::new(probs).unwrap();
        if p.p_gt_l() >= min_tail {
            return p;
        }
    }
}

/// Random conditional tail law on `{L+1, ..., max_degree}` with mean
/// `kappa`: random atoms and weights, then one atom's weight adjusted to hit
/// the mean. `None` when the adjustment is impossible.
pub fn random_tail_with_mean(
    rng: &mut impl Rng,
    first: u32,
    max_degree: u32,
    kappa: f64,
) -> Option<Vec<(u32, f64)>> {
    if kappa < f64::from(first) || kappa > f64::from(max_degree) {
        return None;
    }
    let k = rng.random_range(1..=5usize);
    let mut atoms: Vec<(u32, f64)> = Vec::new();
    let w = simplex(rng, k);
    for wi in w {
        let d = rng.random_range(first..=max_degree);
        match atoms.iter_mut().find(|(x, _)| *x == d) {
            Some(a) => a.1 += wi,
            None => atoms.push((d, wi)),
        }
    }
    let m: f64 = atoms.iter().map(|&(d, p)| f64::from(d) * p).sum();
    if (m - kappa).abs() < 1e-15 {
        return Some(atoms);
    }
    // Mix in an atom on the other side of kappa.
    let adj = if m < kappa {
        let lo = kappa.floor() as u32 + 1;
        if lo > max_degree {
            return None;
        }
        rng.random_range(lo..=max_degree)
    } else {
        let hi = kappa.ceil() as u32 - 1;
        if hi < first {
            return None;
        }
        rng.random_range(first..=hi)
    };
    let t = (kappa - m) / (f64::from(adj) - m);
    if !(0.0..=1.0).contains(&t) {
        return None;
    }
    for a in atoms.iter_mut() {
        a.1 *= 1.0 - t;
    }
    match atoms.iter_mut().find(|(x, _)| *x == adj) {
        Some(a) => a.1 += t,
        None => atoms.push((adj, t)),
    }
    Some(atoms)
}

/// Prefix completed by a conditional tail law scaled by `p_>L`.
pub fn complete(prefix: &Prefix, tail: &[(u32, f64)]) -> DegreePmf {
    let head = prefix
        .probs()
        .iter()
        .enumerate()
        .map(|(i, &p)| (i as u32 + 1, p));
    let p_gt = prefix.p_gt_l();
    let mut entries: Vec<(u32, f64)> = head.collect();
    for &(d, p) in tail {
        match entries.iter_mut().find(|(x, _)| *x == d) {
            Some(e) => e.1 += p * p_gt,
            None => entries.push((d, p * p_gt)),
        }
    }
    DegreePmf::new(entries).unwrap()
}

/// Random `F` in the class of `prefix` and mean `mu`.
pub fn random_member(rng: &mut impl Rng, prefix: &Prefix, mu: f64, max_degree: u32) -> DegreePmf {
    let first = prefix.len() as u32 + 1;
    let kappa = (mu - prefix.partial_mean()) / prefix.p_gt_l();
    loop {
        if let Some(tail) = random_tail_with_mean(rng, first, max_degree, kappa) {
            return complete(prefix, &tail);
        }
    }
}

/// Random `(prefix, mu)` with both technical conditions satisfied and
/// `kappa` in `[L + 1 + kappa_margin, kappa_max]`.
pub fn random_condition_ok(
    rng: &mut impl Rng,
    kappa_margin: f64,
    kappa_max: f64,
) -> (Prefix, f64, BoundsReport) {
    loop {
        let len = rng.random_range(2..=5usize);
        let prefix = random_prefix(rng, len, 0.02);
        let lo = len as f64 + 1.0 + kappa_margin;
        if lo >= kappa_max {
            continue;
        }
        let kappa = rng.random_range(lo..kappa_max);
        let mu = prefix.partial_mean() + kappa * prefix.p_gt_l();
        let report = bounds_report(&prefix, mu);
        if report.conditions_hold() {
            return (prefix, mu, report);
        }
    }
}

/// One sandwich triple: `prop1 <= thm_a <= xi_F <= thm_b` (slack 1e-9).
pub fn sandwich_case(rng: &mut impl Rng) -> Result<(), String> {
    let (prefix, mu, report) = random_condition_ok(rng, 0.0, 40.0);
    let f = random_member(rng, &prefix, mu, 60);
    let xi = giant_core::giant_fraction(&f).map_err(|e| e.to_string())?;
    let p1 = report.lower_prop1.ok_or("missing prop1")?;
    let a = report.lower_thm_a.ok_or("missing thm_a")?;
    let b = report.upper_thm_b.ok_or("missing thm_b")?;
    if (f.mean() - mu).abs() > 1e-9 {
        return Err(format!("member mean {} != {mu}", f.mean()));
    }
    if p1 - 1e-9 <= a - 1e-9 + 1e-12 && a - 1e-9 <= xi && xi <= b + 1e-9 {
        Ok(())
    } else {
        Err(format!(
            "{} mu={mu}: prop1={p1} thm_a={a} xi={xi} thm_b={b}",
            prefix.label()
        ))
    }
}

/// `xi_{G_m}` approaches the mean-constrained lower bound monotonically for
/// `m >= 2 kappa`, and `xi_H` equals the upper bound.
///
/// Prefixes with `p_1 = 0` are skipped: every member then has `xi = 1`.
pub fn convergence_case(rng: &mut impl Rng) -> Result<(), String> {
    let (prefix, mu, report) = loop {
        let c = random_condition_ok(rng, 0.5, 20.0);
        if c.0.probs()[0] > 0.0 {
            break c;
        }
    };
    let a = report.lower_thm_a.ok_or("missing thm_a")?;
    let kappa = report.kappa.ok_or("missing kappa")?;
    let err = |m: u32| -> Result<f64, String> {
        let g = giant_core::construct_g_m(&prefix, mu, m).map_err(|e| e.to_string())?;
        let xi = giant_core::giant_fraction(&g).map_err(|e| e.to_string())?;
        Ok((xi - a).abs())
    };
    let start = ((2.0 * kappa).ceil() as u32).max(prefix.len() as u32 + 2);
    let mut prev = f64::INFINITY;
    for m in start..=200 {
        let e = err(m)?;
        if e > prev + 1e-12 {
            return Err(format!("{} mu={mu}: not monotone at m={m}", prefix.label()));
        }
        prev = e;
    }
    let (e50, e200) = (err(50)?, err(200)?);
    if e200 >= e50 {
        return Err(format!(
            "{} mu={mu}: |G200 - a|={e200} >= |G50 - a|={e50}",
            prefix.label()
        ));
    }
    let h = report.h.as_ref().ok_or("missing H")?;
    let xi_h = giant_core::giant_fraction(h).map_err(|e| e.to_string())?;
    if Some(xi_h) != report.upper_thm_b {
        return Err(format!("xi_H={xi_h} != {:?}", report.upper_thm_b));
    }
    Ok(())
}

/// Mixture decomposition of a random small-support law with non-integral mean.
pub fn mixture_case(rng: &mut impl Rng) -> Result<(), String> {
    let n = loop {
        let f = random_pmf(rng, 12);
        let k = f.mean();
        let below = f.probs().iter().any(|&(d, _)| f64::from(d) <= k);
        if (k - k.round()).abs() > 1e-6 && below {
            break f;
        }
    };
    let kappa = n.mean();
    let dec = giant_core::mixture_decompose(&n).map_err(|e| e.to_string())?;
    let floor = kappa.floor();
    if (dec.n1.mean() - floor).abs() > 1e-9 || (dec.n2.mean() - floor - 1.0).abs() > 1e-9 {
        return Err(format!(
            "kappa={kappa}: E[N1]={} E[N2]={}",
            dec.n1.mean(),
            dec.n2.mean()
        ));
    }
    let z = dec.z_param;
    if !(0.0..=1.0).contains(&z) {
        return Err(format!("z={z}"));
    }
    for d in 0..=12 {
        let mix = z * dec.n1.prob(d) + (1.0 - z) * dec.n2.prob(d);
        if (mix - n.prob(d)).abs() > 1e-12 {
            return Err(format!("kappa={kappa} d={d}: {mix} vs {}", n.prob(d)));
        }
    }
    Ok(())
}

/// Bracketed solver against the monotone-iteration oracle.
pub fn solver_case(rng: &mut impl Rng) -> Result<(), String> {
    let f = random_supercritical(rng, 1.01);
    let z = giant_core::extinction_probability(&f)
        .map_err(|e| e.to_string())?
        .value;
    let oracle = monotone_iteration(&f, f.mean(), 1_000_000);
    if (z - oracle).abs() < 1e-9 {
        Ok(())
    } else {
        Err(format!("{:?}: {z} vs {oracle}", f.probs()))
    }
}

//! Finite-n configuration-model simulation.
//!
//! Each vertex draws an i.i.d. degree; an odd half-edge total is fixed by
//! giving one uniformly chosen vertex an extra half-edge. The half-edge array
//! is shuffled uniformly and consecutive entries are paired, which has the
//! same law as sequential uniform pairing. Self-loops and multi-edges are
//! kept. Components are tracked with union-find on the pairing directly.
//!
//! Replica `k` of a run with seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `k`
//! (`rand_chacha::ChaCha8Rng::set_stream`), so results depend only on
//! `(pmf, n, reps, seed)`.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::DegreePmf;
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// The random stream used by replica `k`.
pub fn replica_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// `n` i.i.d. degrees by inverse CDF, parity-fixed so the sum is even.
pub fn sample_degrees<R: Rng + ?Sized>(pmf: &DegreePmf, n: usize, rng: &mut R) -> Vec<u32> {
    let mut acc = 0.0;
    let cdf: Vec<f64> = pmf
        .probs()
        .iter()
        .map(|&(_, p)| {
            acc += p;
            acc
        })
        .collect();
    let total = acc;
    let last = cdf.len() - 1;
    let mut degrees: Vec<u32> = (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let i = cdf.partition_point(|&c| c <= u).min(last);
            pmf.probs()[i].0
        })
        .collect();
    let sum: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
    if sum % 2 == 1 && n > 0 {
        let v = rng.random_range(0..n);
        degrees[v] += 1;
    }
    degrees
}

/// Uniform pairing of the half-edges of `degrees`, returned as its
/// component structure.
pub fn pair_half_edges<R: Rng + ?Sized>(degrees: &[u32], rng: &mut R) -> Result<UnionFind> {
    let total: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
    if total % 2 == 1 {
        return Err(Error::OddSum(total));
    }
    let mut stubs: Vec<u32> = Vec::with_capacity(total as usize);
    for (v, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v as u32, d as usize));
    }
    stubs.shuffle(rng);
    let mut uf = UnionFind::new(degrees.len());
    for pair in stubs.chunks_exact(2) {
        uf.union(pair[0] as usize, pair[1] as usize);
    }
    Ok(uf)
}

/// Size of the largest component divided by the number of vertices.
pub fn largest_component_fraction<R: Rng + ?Sized>(degrees: &[u32], rng: &mut R) -> Result<f64> {
    if degrees.is_empty() {
        return Err(Error::InvalidArgument("no vertices".into()));
    }
    let uf = pair_half_edges(degrees, rng)?;
    Ok(uf.largest() as f64 / degrees.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub fractions: Vec<f64>,
    pub mean_fraction: f64,
    /// Standard error of the mean; 0 for a single replica.
    pub stderr: f64,
}

impl SimResult {
    fn from_fractions(n: usize, seed: u64, fractions: Vec<f64>) -> Self {
        let reps = fractions.len();
        let mean = fractions.iter().sum::<f64>() / reps as f64;
        let stderr = if reps > 1 {
            let var = fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
            (var / reps as f64).sqrt()
        } else {
            0.0
        };
        SimResult {
            n,
            reps,
            seed,
            fractions,
            mean_fraction: mean,
            stderr,
        }
    }

    /// `replica,fraction` rows.
    pub fn write_replicas_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["replica", "fraction"])?;
        for (k, f) in self.fractions.iter().enumerate() {
            w.write_record([k.to_string(), format!("{f}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One replica: sample degrees, pair, measure.
pub fn run_replica(pmf: &DegreePmf, n: usize, seed: u64, k: u64) -> Result<f64> {
    let mut rng = replica_rng(seed, k);
    let degrees = sample_degrees(pmf, n, &mut rng);
    largest_component_fraction(&degrees, &mut rng)
}

/// `reps` independent replicas, evaluated in parallel and stored by index.
pub fn monte_carlo(pmf: &DegreePmf, n: usize, reps: usize, seed: u64) -> Result<SimResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if reps == 0 {
        return Err(Error::InvalidArgument("reps must be at least 1".into()));
    }
    let fractions = (0..reps as u64)
        .into_par_iter()
        .map(|k| run_replica(pmf, n, seed, k))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SimResult::from_fractions(n, seed, fractions))
}

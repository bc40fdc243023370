//! Metropolis sampling of `e^{-βE_N}` with
//! `E_N = ½ Σ_{i≠j} Φ(x_i - x_j) + N Σ_k V(x_k)` inside an optional hard wall.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potential::RadialPotential;
use crate::quadrature::{integrate, QuadOptions};
use crate::special::omega;
use crate::yukawa::{Kind, YukawaParams};

/// Pair interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `-log|x - y|` on the line.
    Log1d,
    /// `φ_d(|x - y|)`, including the Coulomb branch `m = 0`.
    Yukawa(YukawaParams),
}

impl Kernel {
    pub fn dim(&self) -> usize {
        match self {
            Kernel::Log1d => 1,
            Kernel::Yukawa(p) => p.d() as usize,
        }
    }

    /// Whether `Φ` diverges at zero separation.
    pub fn singular(&self) -> bool {
        match self {
            Kernel::Log1d => true,
            Kernel::Yukawa(p) => p.d() >= 2,
        }
    }

    /// `Φ` as a function of the squared distance.
    fn pair(&self, r2: f64) -> Result<f64> {
        match self {
            Kernel::Log1d => Ok(-0.5 * r2.ln()),
            Kernel::Yukawa(p) => match (p.kind(), p.d()) {
                (Kind::Coulomb, 2) => Ok(-0.5 * r2.ln() / (p.a() * p.a())),
                (Kind::Yukawa, 3) => {
                    let r = r2.sqrt();
                    Ok((-p.kappa() * r).exp() / (p.a() * p.a() * r))
                }
                _ => p.phi(r2.sqrt()),
            },
        }
    }
}

/// Minimum separation accepted for singular kernels.
pub const COINCIDENT: f64 = 1e-12;

/// Full recomputation interval, in sweeps.
pub const RECOMPUTE_EVERY: usize = 1000;

#[derive(Debug, Clone)]
pub struct GasConfig {
    pub n: usize,
    pub beta: f64,
    pub kernel: Kernel,
    pub pot: RadialPotential,
    pub wall: Option<f64>,
    pub seed: u64,
    /// Total sweeps, burn-in included. One sweep is `n` proposals.
    pub steps: usize,
    pub burn_in: usize,
    pub step_scale: f64,
    pub bins: usize,
    /// Histogram covers `[-range, range]` (d = 1) or `[0, range]`.
    /// Defaults to the wall, or 3 without one.
    pub hist_range: Option<f64>,
}

impl GasConfig {
    pub fn new(n: usize, beta: f64, kernel: Kernel, pot: RadialPotential) -> Self {
        GasConfig {
            n,
            beta,
            kernel,
            pot,
            wall: None,
            seed: 0,
            steps: 10_000,
            burn_in: 1_000,
            step_scale: 0.1,
            bins: 64,
            hist_range: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameters(format!("need at least 2 particles, got {}", self.n)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameters(format!("beta must be > 0, got {}", self.beta)));
        }
        if self.steps <= self.burn_in {
            return Err(Error::InvalidParameters(format!(
                "steps ({}) must exceed burn-in ({})",
                self.steps, self.burn_in
            )));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::InvalidParameters(format!("step scale must be > 0, got {}", self.step_scale)));
        }
        if let Some(w) = self.wall {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameters(format!("wall radius must be > 0, got {w}")));
            }
        }
        if self.bins == 0 {
            return Err(Error::InvalidParameters("need at least one bin".into()));
        }
        if !(self.range() > 0.0 && self.range().is_finite()) {
            return Err(Error::InvalidParameters("histogram range must be > 0".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    fn range(&self) -> f64 {
        self.hist_range.or(self.wall).unwrap_or(3.0)
    }

    fn empty_histogram(&self) -> DensityHistogram {
        let d = self.dim();
        let r = self.range();
        if d == 1 {
            DensityHistogram::linear(-r, r, self.bins)
        } else {
            DensityHistogram::radial(r, self.bins, d as u32)
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `E_N` for positions stored row-major, `n × d`.
pub fn energy(config: &GasConfig, positions: &[f64]) -> Result<f64> {
    let d = config.dim();
    let n = config.n;
    if positions.len() != n * d {
        return Err(Error::InvalidParameters(format!(
            "expected {} coordinates, got {}",
            n * d,
            positions.len()
        )));
    }
    let mut e = 0.0;
    for i in 0..n {
        let xi = &positions[i * d..(i + 1) * d];
        if let Some(w) = config.wall {
            if norm(xi) > w {
                return Err(Error::Domain(format!("particle {i} lies outside the wall")));
            }
        }
        e += n as f64 * config.pot.v(norm(xi));
        for j in 0..i {
            e += pair_energy(config, xi, &positions[j * d..(j + 1) * d])?;
        }
    }
    Ok(e)
}

fn pair_energy(config: &GasConfig, x: &[f64], y: &[f64]) -> Result<f64> {
    let r2 = dist2(x, y);
    if config.kernel.singular() && r2 < COINCIDENT * COINCIDENT {
        return Err(Error::Coincident(r2.sqrt()));
    }
    config.kernel.pair(r2)
}

/// Energy of particle `i` placed at `x` against all others, plus `N V(x)`.
fn local_energy(config: &GasConfig, positions: &[f64], i: usize, x: &[f64]) -> Result<f64> {
    let d = config.dim();
    let mut e = config.n as f64 * config.pot.v(norm(x));
    for j in 0..config.n {
        if j != i {
            e += pair_energy(config, x, &positions[j * d..(j + 1) * d])?;
        }
    }
    Ok(e)
}

/// `E(x_i → x) - E(x_i)`. Log kernels take one logarithm per block of
/// distance ratios instead of two per pair.
fn delta_energy(config: &GasConfig, positions: &[f64], i: usize, x: &[f64]) -> Result<f64> {
    let d = config.dim();
    let old = &positions[i * d..(i + 1) * d];
    let scale = match config.kernel {
        Kernel::Log1d => 1.0,
        Kernel::Yukawa(p) if p.kind() == Kind::Coulomb && p.d() == 2 => 1.0 / (p.a() * p.a()),
        _ => return Ok(local_energy(config, positions, i, x)? - local_energy(config, positions, i, old)?),
    };
    let mut log_sum = 0.0;
    let mut prod = 1.0;
    let mut block = 0;
    for j in 0..config.n {
        if j == i {
            continue;
        }
        let y = &positions[j * d..(j + 1) * d];
        let (new2, old2) = (dist2(x, y), dist2(old, y));
        if new2 < COINCIDENT * COINCIDENT {
            return Err(Error::Coincident(new2.sqrt()));
        }
        prod *= old2 / new2;
        block += 1;
        if block == 8 {
            log_sum += if prod.is_normal() { prod.ln() } else { f64::NAN };
            prod = 1.0;
            block = 0;
        }
    }
    log_sum += prod.ln();
    if !log_sum.is_finite() {
        // A block over- or underflowed; redo pair by pair.
        return Ok(local_energy(config, positions, i, x)? - local_energy(config, positions, i, old)?);
    }
    let n = config.n as f64;
    Ok(0.5 * scale * log_sum + n * (config.pot.v(norm(x)) - config.pot.v(norm(old))))
}

/// Particle-position histogram, linear (d = 1) or radial in `|x|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples that fell outside the binned range.
    pub outside: u64,
    /// `None` for linear bins, `Some(d)` for radial bins.
    pub radial_dim: Option<u32>,
}

impl DensityHistogram {
    pub fn linear(lo: f64, hi: f64, bins: usize) -> Self {
        let edges = (0..=bins).map(|k| lo + (hi - lo) * k as f64 / bins as f64).collect();
        DensityHistogram { edges, counts: vec![0; bins], outside: 0, radial_dim: None }
    }

    pub fn radial(hi: f64, bins: usize, d: u32) -> Self {
        let mut h = Self::linear(0.0, hi, bins);
        h.radial_dim = Some(d);
        h
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.edges[self.bins()] - self.edges[0]) / self.bins() as f64
    }

    /// Number of recorded samples inside the range.
    pub fn samples(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn add(&mut self, coord: f64) {
        let (lo, hi) = (self.edges[0], self.edges[self.bins()]);
        if !(coord >= lo && coord <= hi) {
            self.outside += 1;
            return;
        }
        let bins = self.bins();
        let k = (((coord - lo) / (hi - lo)) * bins as f64) as usize;
        self.counts[k.min(bins - 1)] += 1;
    }

    pub fn merge(&mut self, other: &DensityHistogram) -> Result<()> {
        if self.edges != other.edges || self.radial_dim != other.radial_dim {
            return Err(Error::InvalidParameters("histograms have different bins".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.outside += other.outside;
        Ok(())
    }

    /// Probability mass per bin; sums to 1 over the binned range.
    pub fn mass(&self) -> Vec<f64> {
        let total = self.samples().max(1) as f64;
        self.counts.iter().map(|c| *c as f64 / total).collect()
    }

    /// Mass divided by bin length (linear) or shell volume (radial).
    pub fn density(&self) -> Vec<f64> {
        let mass = self.mass();
        (0..self.bins())
            .map(|k| mass[k] / self.bin_measure(k))
            .collect()
    }

    fn bin_measure(&self, k: usize) -> f64 {
        let (a, b) = (self.edges[k], self.edges[k + 1]);
        match self.radial_dim {
            None => b - a,
            Some(d) => omega(d) / d as f64 * (b.powi(d as i32) - a.powi(d as i32)),
        }
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Fraction of samples outside the binned range.
    pub fn outside_fraction(&self) -> f64 {
        let all = self.samples() + self.outside;
        if all == 0 {
            0.0
        } else {
            self.outside as f64 / all as f64
        }
    }
}

/// Result of one chain, or of several merged.
#[derive(Debug, Clone)]
pub struct McRun {
    pub histogram: DensityHistogram,
    pub acceptance_rate: f64,
    /// Largest `|E_incremental - E_full| / max(1, |E_full|)` seen.
    pub max_drift: f64,
    pub step_scale: f64,
    pub final_positions: Vec<f64>,
}

fn initial_positions(config: &GasConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = config.dim();
    let r0 = config.wall.map(|w| 0.9 * w).unwrap_or(1.0);
    let mut pos = Vec::with_capacity(config.n * d);
    while pos.len() < config.n * d {
        let x: Vec<f64> = (0..d).map(|_| r0 * (2.0 * rng.random::<f64>() - 1.0)).collect();
        if norm(&x) <= r0 {
            pos.extend(x);
        }
    }
    pos
}

/// Run one chain with the RNG stream `stream` of `config.seed`.
pub fn metropolis_chain(config: &GasConfig, stream: u64) -> Result<McRun> {
    config.validate()?;
    let d = config.dim();
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let mut pos = initial_positions(config, &mut rng);
    let mut e = energy(config, &pos)?;
    let mut step = config.step_scale;
    let mut hist = config.empty_histogram();
    let (mut accepted, mut proposed) = (0u64, 0u64);
    let (mut tune_acc, mut tune_prop) = (0u64, 0u64);
    let mut max_drift = 0.0f64;
    let mut trial = vec![0.0; d];

    for sweep in 0..config.steps {
        for _ in 0..n {
            let i = rng.random_range(0..n);
            let old = &pos[i * d..(i + 1) * d];
            for (t, o) in trial.iter_mut().zip(old) {
                *t = o + step * (2.0 * rng.random::<f64>() - 1.0);
            }
            let u: f64 = rng.random();
            let counted = sweep >= config.burn_in;
            if counted {
                proposed += 1;
            } else {
                tune_prop += 1;
            }
            if config.wall.is_some_and(|w| norm(&trial) > w) {
                continue;
            }
            if config.kernel.singular()
                && (0..n).any(|j| j != i && dist2(&trial, &pos[j * d..(j + 1) * d]) < COINCIDENT * COINCIDENT)
            {
                continue;
            }
            let de = delta_energy(config, &pos, i, &trial)?;
            if de <= 0.0 || u < (-config.beta * de).exp() {
                pos[i * d..(i + 1) * d].copy_from_slice(&trial);
                e += de;
                if counted {
                    accepted += 1;
                } else {
                    tune_acc += 1;
                }
            }
        }
        if sweep < config.burn_in && (sweep + 1) % 50 == 0 {
            let rate = tune_acc as f64 / tune_prop.max(1) as f64;
            if rate > 0.5 {
                step *= 1.25;
            } else if rate < 0.3 {
                step *= 0.8;
            }
            (tune_acc, tune_prop) = (0, 0);
        }
        if (sweep + 1) % RECOMPUTE_EVERY == 0 {
            let full = energy(config, &pos)?;
            max_drift = max_drift.max((e - full).abs() / full.abs().max(1.0));
            e = full;
        }
        if sweep >= config.burn_in {
            for i in 0..n {
                let x = &pos[i * d..(i + 1) * d];
                hist.add(if d == 1 { x[0] } else { norm(x) });
            }
        }
    }
    let full = energy(config, &pos)?;
    max_drift = max_drift.max((e - full).abs() / full.abs().max(1.0));
    Ok(McRun {
        histogram: hist,
        acceptance_rate: accepted as f64 / proposed.max(1) as f64,
        max_drift,
        step_scale: step,
        final_positions: pos,
    })
}

/// Single chain on stream 0.
pub fn metropolis_run(config: &GasConfig) -> Result<McRun> {
    metropolis_chain(config, 0)
}

/// Independent chains on streams `0..chains`, run in parallel and merged.
pub fn metropolis_chains(config: &GasConfig, chains: usize) -> Result<McRun> {
    if chains == 0 {
        return Err(Error::InvalidParameters("need at least one chain".into()));
    }
    let runs: Vec<McRun> = (0..chains as u64)
        .into_par_iter()
        .map(|s| metropolis_chain(config, s))
        .collect::<Result<_>>()?;
    let mut iter = runs.into_iter();
    let mut out = iter.next().expect("at least one chain");
    let mut rate_sum = out.acceptance_rate;
    for r in iter {
        out.histogram.merge(&r.histogram)?;
        out.max_drift = out.max_drift.max(r.max_drift);
        rate_sum += r.acceptance_rate;
    }
    out.acceptance_rate = rate_sum / chains as f64;
    Ok(out)
}

/// L1 distance `Σ |p̂_k - ∫_{bin k} ρ - atoms_k|` over bins, skipping bins
/// that come within `exclude_width` bin widths of any point in
/// `exclude_near`. For radial histograms `ρ` is a density per unit volume in
/// `|x|`. `atoms` are `(position, mass)` point masses, assigned to the bin
/// containing them (the last bin for the upper edge).
pub fn density_distance(
    hist: &DensityHistogram,
    rho: &dyn Fn(f64) -> f64,
    atoms: &[(f64, f64)],
    exclude_near: &[f64],
    exclude_width: f64,
) -> Result<f64> {
    let mass = hist.mass();
    let band = exclude_width * hist.bin_width();
    let opts = QuadOptions { rel_tol: 1e-9, abs_tol: 1e-13, max_panels: 2000 };
    let mut dist = 0.0;
    for (k, &m) in mass.iter().enumerate() {
        let (a, b) = (hist.edges[k], hist.edges[k + 1]);
        if exclude_near.iter().any(|p| b > p - band && a < p + band) {
            continue;
        }
        let predicted = match hist.radial_dim {
            None => integrate(rho, a, b, opts)?,
            Some(d) => {
                let w = omega(d);
                integrate(|r| w * r.powi(d as i32 - 1) * rho(r), a, b, opts)?
            }
        };
        let last = k + 1 == hist.bins();
        let atom: f64 = atoms
            .iter()
            .filter(|(x, _)| *x >= a && (*x < b || (last && *x <= b)))
            .map(|(_, m)| m)
            .sum();
        dist += (m - predicted - atom).abs();
    }
    Ok(dist)
}

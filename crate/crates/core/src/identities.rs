//! Numerical checks of the expansion and kernel identities the solvers rely
//! on. Each suite compares a closed form against an independent evaluation.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_pieces, QuadOptions};
use crate::special::{chebyshev_log_moment, multipole_log_partial_sum};
use crate::yukawa::YukawaParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Partial sums of the Chebyshev expansion of `-log|x - y|`.
    Multipole,
    /// Log moments of `T_n` against the arcsine weight.
    Electrostatic,
    /// Spherical means of `φ_d` against `ψ_d(min) φ_d(max)`.
    Shell,
    /// `φ′ψ - φψ′ = -1/(a² r^{d-1})`.
    Wronskian,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Multipole, Suite::Electrostatic, Suite::Shell, Suite::Wronskian];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Multipole => "multipole",
            Suite::Electrostatic => "electrostatic",
            Suite::Shell => "shell",
            Suite::Wronskian => "wronskian",
        }
    }

    pub fn threshold(self) -> f64 {
        match self {
            Suite::Multipole => 1e-3,
            Suite::Electrostatic => 1e-8,
            Suite::Shell => 1e-8,
            Suite::Wronskian => 1e-10,
        }
    }

    fn default_dims(self) -> Vec<u32> {
        match self {
            Suite::Shell => vec![2, 3],
            Suite::Wronskian => vec![1, 2, 3, 4],
            _ => vec![1],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown identity suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityOptions {
    /// Dimensions for the kernel suites; `None` uses the suite default.
    pub dims: Option<Vec<u32>>,
    /// Random `(|x|, r)` pairs per dimension and parameter set (shell suite).
    pub pairs: usize,
    /// Number of partial-sum terms (multipole suite).
    pub terms: usize,
    pub seed: u64,
}

impl Default for IdentityOptions {
    fn default() -> Self {
        IdentityOptions { dims: None, pairs: 10, terms: 10_000, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub suite: Suite,
    pub max_deviation: f64,
    pub threshold: f64,
    pub cases: usize,
    pub passed: bool,
}

fn report(suite: Suite, devs: Vec<f64>) -> IdentityReport {
    let max_deviation = devs.iter().cloned().fold(0.0, f64::max);
    let threshold = suite.threshold();
    // NaN deviations fail.
    let passed = devs.iter().all(|d| *d <= threshold);
    IdentityReport { suite, max_deviation, threshold, cases: devs.len(), passed }
}

const KERNEL_PARAMS: [(f64, f64); 3] = [(1.0, 1.0), (0.7, 1.3), (2.0, 0.5)];

pub fn run_suite(suite: Suite, opts: &IdentityOptions) -> Result<IdentityReport> {
    let dims = opts.dims.clone().unwrap_or_else(|| suite.default_dims());
    let devs = match suite {
        Suite::Multipole => multipole(opts.terms)?,
        Suite::Electrostatic => electrostatic()?,
        Suite::Shell => {
            let mut all = Vec::new();
            for d in dims {
                if !(2..=3).contains(&d) {
                    return Err(Error::InvalidParameters(format!("shell suite supports d = 2, 3; got {d}")));
                }
                all.extend(shell(d, opts.pairs, opts.seed)?);
            }
            all
        }
        Suite::Wronskian => {
            let mut all = Vec::new();
            for d in dims {
                all.extend(wronskian(d)?);
            }
            all
        }
    };
    Ok(report(suite, devs))
}

pub fn run_all(opts: &IdentityOptions) -> Result<Vec<IdentityReport>> {
    Suite::ALL.iter().map(|s| run_suite(*s, opts)).collect()
}

/// `|S_N(x, y) + log|x - y||` on a grid of `[-1, 1]` with `|x - y| ≥ 0.1`.
fn multipole(terms: usize) -> Result<Vec<f64>> {
    let pts: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
    let pairs: Vec<(f64, f64)> = pts
        .iter()
        .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
        .filter(|(x, y)| (x - y).abs() >= 0.1 - 1e-12)
        .collect();
    pairs
        .par_iter()
        .map(|&(x, y)| Ok((multipole_log_partial_sum(x, y, terms)? + (x - y).abs().ln()).abs()))
        .collect()
}

/// `-(1/π)∫_0^π log|x - cos θ| cos(nθ) dθ`, split at the singularity.
pub fn log_moment_by_quadrature(n: usize, x: f64) -> Result<f64> {
    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, max_panels: 20_000 };
    let nf = n as f64;
    if x.abs() <= 1.0 {
        // cos θ₀ - cos θ = 2 sin((θ+θ₀)/2) sin((θ-θ₀)/2) stays accurate near θ₀.
        let t0 = x.acos();
        let f = |t: f64| {
            let g = 2.0 * (0.5 * (t + t0)).sin() * (0.5 * (t - t0)).sin();
            -g.abs().ln() * (nf * t).cos() / PI
        };
        let mut pts = vec![0.0];
        if t0 > 0.0 && t0 < PI {
            pts.push(t0);
        }
        pts.push(PI);
        integrate_pieces(f, &pts, opts)
    } else {
        integrate(|t| -(x - t.cos()).abs().ln() * (nf * t).cos() / PI, 0.0, PI, opts)
    }
}

fn electrostatic() -> Result<Vec<f64>> {
    let xs = [0.0, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 3.0, -3.0];
    let cases: Vec<(usize, f64)> = (1..=20).flat_map(|n| xs.iter().map(move |&x| (n, x))).collect();
    cases
        .par_iter()
        .map(|&(n, x)| Ok((chebyshev_log_moment(n, x)? - log_moment_by_quadrature(n, x)?).abs()))
        .collect()
}

/// Mean of `φ_d(|x - y|)` over the sphere `|y| = r`, with `|x| = s`.
pub fn shell_mean_by_quadrature(p: &YukawaParams, s: f64, r: f64) -> Result<f64> {
    let opts = QuadOptions { rel_tol: 1e-12, abs_tol: 1e-16, max_panels: 20_000 };
    let dist = |t: f64| (s * s + r * r - 2.0 * s * r * t.cos()).max(0.0).sqrt();
    let mut failure = None;
    let mut phi = |t: f64| match p.phi(dist(t)) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let v = match p.d() {
        2 => integrate(&mut phi, 0.0, PI, opts).map(|v| v / PI),
        3 => integrate(|t| phi(t) * t.sin(), 0.0, PI, opts).map(|v| v / 2.0),
        d => return Err(Error::InvalidParameters(format!("surface quadrature implemented for d = 2, 3; got {d}"))),
    };
    match failure {
        Some(e) => Err(e),
        None => v,
    }
}

fn shell(d: u32, pairs: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for &(a, m) in &KERNEL_PARAMS {
        let p = YukawaParams::new(d, a, m)?;
        let mut k = 0;
        while k < pairs {
            let s = 0.05 + 2.95 * rng.random::<f64>();
            let r = 0.05 + 2.95 * rng.random::<f64>();
            if (s - r).abs() < 0.1 {
                continue;
            }
            cases.push((p, s, r));
            k += 1;
        }
    }
    cases
        .par_iter()
        .map(|(p, s, r)| {
            let closed = p.shell_average(*s, *r)?;
            let direct = shell_mean_by_quadrature(p, *s, *r)?;
            Ok(((closed - direct) / direct).abs())
        })
        .collect()
}

fn wronskian(d: u32) -> Result<Vec<f64>> {
    let mut devs = Vec::new();
    for &(a, m) in &KERNEL_PARAMS {
        let p = YukawaParams::new(d, a, m)?;
        for i in 1..=40 {
            let r = 0.25 * i as f64;
            let w = p.dphi(r)? * p.psi(r)? - p.phi(r)? * p.dpsi(r)?;
            let target = -1.0 / (a * a * r.powi(d as i32 - 1));
            devs.push(((w - target) / target).abs());
        }
    }
    Ok(devs)
}

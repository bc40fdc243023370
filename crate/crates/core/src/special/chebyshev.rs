//! Chebyshev polynomials of the first kind, Gauss–Chebyshev quadrature and
//! truncated Chebyshev expansions.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// `T_n(u)` by the three-term recurrence.
pub fn chebyshev_t(n: usize, u: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => u,
        _ => {
            let (mut prev, mut cur) = (1.0, u);
            for _ in 1..n {
                let next = 2.0 * u * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Nodes `cos((2k-1)π/(2n))` and uniform weights `π/n` for the weight
/// `1/√(1-u²)` on `[-1, 1]`.
pub fn gauss_chebyshev(n_nodes: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n_nodes == 0 {
        return Err(Error::InvalidParameters("gauss_chebyshev needs at least one node".into()));
    }
    let n = n_nodes as f64;
    let nodes = (1..=n_nodes)
        .map(|k| ((2 * k - 1) as f64 * PI / (2.0 * n)).cos())
        .collect();
    Ok((nodes, vec![PI / n; n_nodes]))
}

/// `log 2 + Σ_{n=1}^{N} (2/n) T_n(x) T_n(y)`, which tends to `-log|x-y|`.
pub fn multipole_log_partial_sum(x: f64, y: f64, n_terms: usize) -> Result<f64> {
    if x == y {
        return Err(Error::Degenerate(format!("multipole sum at coincident points x = y = {x}")));
    }
    let mut sum = LN_2;
    let (mut tx0, mut tx1) = (1.0, x);
    let (mut ty0, mut ty1) = (1.0, y);
    for n in 1..=n_terms {
        sum += 2.0 / n as f64 * tx1 * ty1;
        let tx2 = 2.0 * x * tx1 - tx0;
        let ty2 = 2.0 * y * ty1 - ty0;
        tx0 = tx1;
        tx1 = tx2;
        ty0 = ty1;
        ty1 = ty2;
    }
    Ok(sum)
}

/// `-∫ log|x-y| T_n(y) dy / (π√(1-y²))` for `n ≥ 1`.
///
/// Equals `T_n(x)/n` inside `[-1, 1]` and `e^{-nz}/n` with `x = cosh z`
/// outside, reflected with parity `(-1)^n` for `x < -1`.
pub fn chebyshev_log_moment(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameters("log moment is defined for n >= 1".into()));
    }
    let nf = n as f64;
    if x.abs() <= 1.0 {
        return Ok(chebyshev_t(n, x) / nf);
    }
    let z = x.abs().acosh();
    let outer = (-nf * z).exp() / nf;
    Ok(if x < 0.0 && n % 2 == 1 { -outer } else { outer })
}

/// Coefficients of `u T_n'(u)` in the `T` basis for even `n`.
pub fn cheb_prime_expansion(n: usize) -> Result<Vec<f64>> {
    if n % 2 == 1 {
        return Err(Error::InvalidParameters(format!("cheb_prime_expansion needs even n, got {n}")));
    }
    let mut out = vec![0.0; n + 1];
    if n == 0 {
        return Ok(out);
    }
    let nf = n as f64;
    out[0] = nf;
    out[n] = nf;
    for k in (2..n).step_by(2) {
        out[k] = 2.0 * nf;
    }
    Ok(out)
}

/// Truncated series `Σ c_n T_n(x / scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebExpansion {
    pub coeffs: Vec<f64>,
    pub scale: f64,
    /// Largest `|n c_n|` among the discarded or final coefficients.
    pub tail_bound: f64,
}

impl ChebExpansion {
    pub fn new(coeffs: Vec<f64>, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameters(format!("expansion scale must be > 0, got {scale}")));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameters("non-finite Chebyshev coefficient".into()));
        }
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Ok(ChebExpansion { coeffs, scale, tail_bound: 0.0 })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// Clenshaw evaluation at `x` (not restricted to `|x| ≤ scale`).
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x / self.scale)
    }

    /// `d/dx Σ c_n T_n(x/scale)`.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        let u = x / self.scale;
        // T_n' = n U_{n-1}
        let mut sum = 0.0;
        let (mut u0, mut u1) = (0.0, 1.0);
        for (n, &c) in self.coeffs.iter().enumerate().skip(1) {
            sum += n as f64 * c * u1;
            let u2 = 2.0 * u * u1 - u0;
            u0 = u1;
            u1 = u2;
        }
        sum / self.scale
    }

    /// `Σ_{n≥1} n c_n`.
    pub fn weighted_sum(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(n, c)| n as f64 * c).sum()
    }
}

fn clenshaw(coeffs: &[f64], u: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * u * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + u * b1 - b2
}

const MIN_NODES: usize = 64;
const MAX_NODES: usize = 1 << 16;
/// Truncation cap on the expansion degree.
pub const MAX_DEGREE: usize = 4096;

/// Chebyshev coefficients of `f(scale·u)` on `[-1, 1]`.
///
/// Coefficients are discrete cosine sums over Gauss–Chebyshev nodes. The
/// node count doubles from 64 until successive estimates agree to `1e-12`
/// relative and the tail `|n c_n|` falls below `tol` relative to the
/// largest `|k c_k|`. With `even` set, odd coefficients are zeroed.
pub fn expand<F: Fn(f64) -> f64>(f: F, scale: f64, tol: f64, even: bool) -> Result<ChebExpansion> {
    if !(scale > 0.0 && scale.is_finite()) || !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!("expand: scale {scale}, tol {tol}")));
    }
    let mut prev: Option<Vec<f64>> = None;
    let mut m = MIN_NODES;
    while m <= MAX_NODES {
        let n_max = (m / 2).min(MAX_DEGREE);
        let coeffs = dct_coeffs(&f, scale, m, n_max, even)?;
        if let Some(p) = &prev {
            let size = coeffs.iter().fold(1f64, |acc, c| acc.max(c.abs()));
            let agree = p.iter().zip(&coeffs).all(|(a, b)| (a - b).abs() <= 1e-12 * size);
            if agree {
                let weighted_max = coeffs
                    .iter()
                    .enumerate()
                    .fold(1f64, |acc, (n, c)| acc.max((n as f64 * c).abs()));
                let cut = tol * weighted_max;
                // Coefficients at rounding level carry no information.
                let noise = 1e-15 * coeffs.iter().map(|c| c.abs()).sum::<f64>();
                let last = coeffs
                    .iter()
                    .enumerate()
                    .rposition(|(n, c)| c.abs() > noise && (n as f64 * c).abs() >= cut)
                    .unwrap_or(0);
                if last < n_max || n_max == MAX_DEGREE {
                    let tail_bound = coeffs
                        .iter()
                        .enumerate()
                        .skip(last + 1)
                        .map(|(n, c)| (n as f64 * c).abs())
                        .fold(0.0, f64::max);
                    let mut kept = coeffs;
                    kept.truncate(last + 1);
                    let tail_bound = if n_max == MAX_DEGREE && last == n_max {
                        (n_max as f64 * kept[last]).abs()
                    } else {
                        tail_bound
                    };
                    let mut out = ChebExpansion::new(kept, scale)?;
                    out.tail_bound = tail_bound;
                    return Ok(out);
                }
            }
        }
        prev = Some(coeffs);
        m *= 2;
    }
    Err(Error::QuadratureNonConvergence(format!(
        "Chebyshev coefficients not converged with {MAX_NODES} nodes"
    )))
}

fn dct_coeffs<F: Fn(f64) -> f64>(f: &F, scale: f64, m: usize, n_max: usize, even: bool) -> Result<Vec<f64>> {
    let mf = m as f64;
    // cos(jπ/(2m)) for j in 0..4m; cos(nθ_k) is an entry of this table,
    // which avoids the error growth of the three-term recurrence at large n.
    let period = 4 * m;
    let table: Vec<f64> = (0..period).map(|j| (j as f64 * PI / (2.0 * mf)).cos()).collect();
    let mut coeffs = vec![0.0; n_max + 1];
    for k in 0..m {
        let j = 2 * k + 1;
        let fu = f(scale * table[j]);
        if !fu.is_finite() {
            return Err(Error::QuadratureNonConvergence(format!(
                "non-finite potential at r = {}",
                scale * table[j]
            )));
        }
        let mut idx = 0;
        for c in coeffs.iter_mut() {
            *c += fu * table[idx];
            idx += j;
            if idx >= period {
                idx -= period;
            }
        }
    }
    for (n, c) in coeffs.iter_mut().enumerate() {
        *c *= if n == 0 { 1.0 / mf } else { 2.0 / mf };
        if even && n % 2 == 1 {
            *c = 0.0;
        }
    }
    Ok(coeffs)
}

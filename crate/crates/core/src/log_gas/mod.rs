//! One-dimensional log-gas confined by symmetric hard walls at `±R`.
//!
//! The potential is expanded as `V(Ru) = Σ c_n(R) T_n(u)`. The constrained
//! density is `(1/π) P_R(x)/√(R²-x²)` with edge polynomial
//! `P_R(x) = 1 - Σ_{n≥1} n c_n(R) T_n(x/R)`, and the critical radius solves
//! `Σ n c_n(R★) = 1`.

pub mod single_wall;

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::potential::RadialPotential;
use crate::quadrature::{bisect, integrate, QuadOptions};
use crate::special::{chebyshev_log_moment, expand, ChebExpansion};
use crate::Phase;

/// Default truncation tolerance on `|n c_n|`.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_RADIUS: f64 = 1e6;
const MIN_RADIUS: f64 = 1e-6;

/// Chebyshev coefficients of `V(R·)`; odd coefficients are zero.
pub fn expand_potential(pot: &RadialPotential, big_r: f64, tol: f64) -> Result<ChebExpansion> {
    if !(big_r > 0.0 && big_r.is_finite()) {
        return Err(Error::InvalidParameters(format!("wall radius must be > 0, got {big_r}")));
    }
    expand(|x| pot.on_line(x), big_r, tol, true)
}

/// `P_R` from the coefficients of `V(R·)`: `a_0 = 1`, `a_n = -n c_n`.
pub fn edge_polynomial(coeffs: &ChebExpansion) -> ChebExpansion {
    let mut a: Vec<f64> = coeffs
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| -(n as f64) * c)
        .collect();
    a[0] = 1.0;
    ChebExpansion {
        coeffs: a,
        scale: coeffs.scale,
        tail_bound: coeffs.tail_bound,
    }
}

/// `g(R) = Σ n c_n(R)`; the edge value is `P_R(R) = 1 - g(R)`.
fn weighted_sum(pot: &RadialPotential, big_r: f64, tol: f64) -> Result<f64> {
    Ok(expand_potential(pot, big_r, tol)?.weighted_sum())
}

/// Smallest `R` with `Σ n c_n(R) = 1`.
pub fn critical_radius(pot: &RadialPotential, tol: f64) -> Result<f64> {
    let g = |r: f64| weighted_sum(pot, r, tol).map(|s| s - 1.0);
    let (mut lo, mut hi) = (1.0, 1.0);
    if g(1.0)? < 0.0 {
        while g(hi)? < 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > MAX_RADIUS {
                return Err(Error::BracketFailure(format!(
                    "Σ n c_n(R) < 1 up to R = {MAX_RADIUS}; potential '{}' grows too slowly",
                    pot.label()
                )));
            }
        }
    } else {
        while g(lo)? >= 0.0 {
            hi = lo;
            lo *= 0.5;
            if lo < MIN_RADIUS {
                return Err(Error::BracketFailure(format!(
                    "Σ n c_n(R) ≥ 1 down to R = {MIN_RADIUS} for '{}'",
                    pot.label()
                )));
            }
        }
    }
    bisect(g, lo, hi, 1e-15)
}

/// Constrained equilibrium at a fixed wall radius.
#[derive(Debug, Clone)]
pub struct LogGasEquilibrium {
    pub r: f64,
    pub r_star: f64,
    /// Expansion of `V` at the support radius `min(R, R★)`.
    pub coeffs: ChebExpansion,
    pub edge_poly: ChebExpansion,
    pub mu: f64,
    pub phase: Phase,
}

impl LogGasEquilibrium {
    /// Radius of the support, `min(R, R★)`.
    pub fn support(&self) -> f64 {
        self.edge_poly.scale
    }

    /// Density of the equilibrium measure; `+∞` exactly at a pushed wall.
    pub fn density(&self, x: f64) -> f64 {
        let l = self.support();
        let ax = x.abs();
        if ax > l {
            return 0.0;
        }
        if ax == l {
            return match self.phase {
                Phase::Pushed => f64::INFINITY,
                Phase::Pulled => 0.0,
            };
        }
        self.edge_poly.eval(x) / (PI * ((l - ax) * (l + ax)).sqrt())
    }

    /// `μ = -log(L/2) + c_0(L)` with `L = min(R, R★)`.
    pub fn chemical_potential(&self) -> f64 {
        self.mu
    }

    /// Total mass, by quadrature in the angle variable `x = L cos θ`.
    pub fn normalization(&self) -> Result<f64> {
        let l = self.support();
        integrate(
            |t| self.edge_poly.eval(l * t.cos()) / PI,
            0.0,
            PI,
            QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, max_panels: 2000 },
        )
    }

    /// `-∫ log|x-y| dρ(y)`, term by term through the Chebyshev log moments.
    pub fn log_potential(&self, x: f64) -> Result<f64> {
        let l = self.support();
        let s = x / l;
        let mut u = LN_2 - l.ln();
        for (n, &a) in self.edge_poly.coeffs.iter().enumerate().skip(1) {
            if a != 0.0 {
                u += a * chebyshev_log_moment(n, s)?;
            }
        }
        Ok(u)
    }

    /// `max |-∫log|x-y|dρ(y) + V(x) - μ|` over grid points in the support.
    pub fn euler_lagrange_residual(&self, pot: &RadialPotential, grid: &[f64]) -> Result<f64> {
        let l = self.support();
        let mut worst: f64 = 0.0;
        for &x in grid {
            if x.abs() > l {
                continue;
            }
            let r = self.log_potential(x)? + pot.on_line(x) - self.mu;
            worst = worst.max(r.abs());
        }
        Ok(worst)
    }
}

/// Log-gas solver for one potential; caches `R★`.
#[derive(Debug, Clone)]
pub struct LogGas {
    pot: RadialPotential,
    tol: f64,
    r_star: f64,
}

impl LogGas {
    pub fn new(pot: RadialPotential, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameters(format!("tolerance must be > 0, got {tol}")));
        }
        let r_star = critical_radius(&pot, tol)?;
        Ok(LogGas { pot, tol, r_star })
    }

    pub fn potential(&self) -> &RadialPotential {
        &self.pot
    }

    pub fn critical_radius(&self) -> f64 {
        self.r_star
    }

    pub fn phase(&self, big_r: f64) -> Phase {
        if big_r < self.r_star {
            Phase::Pushed
        } else {
            Phase::Pulled
        }
    }

    pub fn equilibrium(&self, big_r: f64) -> Result<LogGasEquilibrium> {
        if !(big_r > 0.0 && big_r.is_finite()) {
            return Err(Error::InvalidParameters(format!("wall radius must be > 0, got {big_r}")));
        }
        let phase = self.phase(big_r);
        let l = big_r.min(self.r_star);
        let coeffs = expand_potential(&self.pot, l, self.tol)?;
        let edge_poly = edge_polynomial(&coeffs);
        let mu = -(l / 2.0).ln() + coeffs.coeff(0);
        Ok(LogGasEquilibrium {
            r: big_r,
            r_star: self.r_star,
            coeffs,
            edge_poly,
            mu,
            phase,
        })
    }

    /// `P_r(r) = 1 - Σ n c_n(r)`, defined for every `r > 0`.
    pub fn edge_value(&self, r: f64) -> Result<f64> {
        Ok(1.0 - weighted_sum(&self.pot, r, self.tol)?)
    }

    /// Wall pressure `P_r(r)²/(4r)`; zero for `r ≥ R★`.
    pub fn wall_pressure(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameters(format!("radius must be > 0, got {r}")));
        }
        if r >= self.r_star {
            return Ok(0.0);
        }
        let p = self.edge_value(r)?;
        Ok(p * p / (4.0 * r))
    }

    /// `F(R) = ½∫_{R∧R★}^{R★} P_r(r)²/r dr`.
    pub fn free_energy(&self, big_r: f64) -> Result<f64> {
        if !(big_r > 0.0) {
            return Err(Error::InvalidParameters(format!("wall radius must be > 0, got {big_r}")));
        }
        if big_r >= self.r_star {
            return Ok(0.0);
        }
        let mut failure = None;
        let v = integrate(
            |r| match self.edge_value(r) {
                Ok(p) => 0.5 * p * p / r,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            big_r,
            self.r_star,
            QuadOptions { rel_tol: 1e-10, abs_tol: 1e-15, max_panels: 2000 },
        );
        if let Some(e) = failure {
            return Err(e);
        }
        v
    }

    /// `-P_R(R)²/(2R)` evaluated without the pulled-phase clamp.
    pub fn force_continued(&self, big_r: f64) -> Result<f64> {
        let p = self.edge_value(big_r)?;
        Ok(-p * p / (2.0 * big_r))
    }

    /// `F′(R)`: the continued force for `R < R★`, zero otherwise.
    pub fn free_energy_derivative(&self, big_r: f64) -> Result<f64> {
        if big_r >= self.r_star {
            Ok(0.0)
        } else {
            self.force_continued(big_r)
        }
    }

    /// Total derivative `d/dr P_r(r)` at `R★`: central differences with
    /// `h = 1e-5 R★` and one Richardson step.
    pub fn edge_slope_at_critical(&self) -> Result<f64> {
        let r = self.r_star;
        let h = 1e-5 * r;
        let d = |h: f64| -> Result<f64> { Ok((self.edge_value(r + h)? - self.edge_value(r - h)?) / (2.0 * h)) };
        let (d1, d2) = (d(h)?, d(h / 2.0)?);
        Ok((4.0 * d2 - d1) / 3.0)
    }

    /// `lim_{R↑R★} F‴(R) = -[d/dr P_r(r)]²/R★`.
    pub fn predicted_jump(&self) -> Result<f64> {
        let s = self.edge_slope_at_critical()?;
        Ok(-s * s / self.r_star)
    }
}

/// Closed forms for the quadratic potential `v = r²/2`.
pub mod gue {
    use std::f64::consts::LN_2;

    pub const R_STAR: f64 = std::f64::consts::SQRT_2;

    pub fn free_energy(r: f64) -> f64 {
        if r >= R_STAR {
            return 0.0;
        }
        (8.0 * r * r - r.powi(4) - 16.0 * r.ln() - 12.0 + 8.0 * LN_2) / 32.0
    }

    /// Pushed-phase density `(2 + R² - 2x²)/(2π√(R²-x²))`.
    pub fn pushed_density(r: f64, x: f64) -> f64 {
        if x.abs() >= r {
            return 0.0;
        }
        (2.0 + r * r - 2.0 * x * x) / (2.0 * std::f64::consts::PI * (r * r - x * x).sqrt())
    }

    /// Semicircle `√(2-x²)/π`.
    pub fn semicircle(x: f64) -> f64 {
        if x.abs() >= R_STAR {
            return 0.0;
        }
        (2.0 - x * x).sqrt() / std::f64::consts::PI
    }
}

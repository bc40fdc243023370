//! Rate functions for a single hard wall at `x = b` (top-eigenvalue large
//! deviations), available for two closed-form models.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleWallModel {
    /// Quadratic potential `x²/2`, unconstrained support `[-√2, √2]`.
    GueWall,
    /// Laguerre ensemble with `c = 1`, unconstrained support `[0, 4]`.
    WishartC1,
}

impl SingleWallModel {
    pub fn b_star(self) -> f64 {
        match self {
            SingleWallModel::GueWall => std::f64::consts::SQRT_2,
            SingleWallModel::WishartC1 => 4.0,
        }
    }

    fn check(self, b: f64) -> Result<()> {
        if !b.is_finite() {
            return Err(Error::Domain(format!("wall position {b} is not finite")));
        }
        if self == SingleWallModel::WishartC1 && b <= 0.0 {
            return Err(Error::Domain(format!("wishart wall must be at b > 0, got {b}")));
        }
        Ok(())
    }

    /// Left edge of the constrained support.
    pub fn left_edge(self, b: f64) -> Result<f64> {
        self.check(b)?;
        let b = b.min(self.b_star());
        Ok(match self {
            SingleWallModel::GueWall => -(2.0 * (b * b + 6.0).sqrt() - b) / 3.0,
            SingleWallModel::WishartC1 => 0.0,
        })
    }

    /// Constrained density with the wall at `b` (pulled density for `b ≥ b★`).
    pub fn density(self, b: f64, x: f64) -> Result<f64> {
        let a = self.left_edge(b)?;
        let b = b.min(self.b_star());
        if x <= a || x >= b {
            return Ok(0.0);
        }
        Ok(match self {
            SingleWallModel::GueWall => ((x - a) / (b - x)).sqrt() * (b - a - 2.0 * x) / (2.0 * PI),
            SingleWallModel::WishartC1 => (b / 2.0 + 2.0 - x) / (2.0 * PI * (x * (b - x)).sqrt()),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SingleWallModel::GueWall => "gue_wall",
            SingleWallModel::WishartC1 => "wishart_c1",
        }
    }

    /// Wall pressure `p(u)`; zero for `u ≥ b★`.
    pub fn pressure(self, u: f64) -> Result<f64> {
        if u >= self.b_star() {
            self.check(u)?;
            return Ok(0.0);
        }
        self.pressure_continued(u)
    }

    /// Pushed-phase pressure formula, continued past `b★`.
    pub fn pressure_continued(self, u: f64) -> Result<f64> {
        self.check(u)?;
        Ok(match self {
            SingleWallModel::GueWall => {
                let s = (u * u + 6.0).sqrt();
                (u.powi(3) + s * u * u + 6.0 * s - 18.0 * u) / 27.0
            }
            SingleWallModel::WishartC1 => (u * u - 8.0 * u + 16.0) / (32.0 * u),
        })
    }

    /// `(π²/2)|Res_{z=u} ρ_u(z)²|`, from the pole of the squared density at
    /// the wall. Matches [`pressure`](Self::pressure) on `u < b★`.
    pub fn pressure_from_residue(self, u: f64) -> Result<f64> {
        self.check(u)?;
        if u >= self.b_star() {
            return Ok(0.0);
        }
        let a = self.left_edge(u)?;
        // ρ_u(z)² = g(z)/(u-z) with g analytic at z = u.
        let g_at_u = match self {
            SingleWallModel::GueWall => (u - a) * (u + a).powi(2) / (4.0 * PI * PI),
            SingleWallModel::WishartC1 => (2.0 - u / 2.0).powi(2) / (4.0 * PI * PI * u),
        };
        Ok(PI * PI / 2.0 * g_at_u)
    }

    /// `lim_{b↑b★} F‴(b) = -p″(b★)`: `-√2/2` and `-1/64`.
    pub fn predicted_jump(self) -> f64 {
        match self {
            SingleWallModel::GueWall => -std::f64::consts::FRAC_1_SQRT_2,
            SingleWallModel::WishartC1 => -1.0 / 64.0,
        }
    }

    /// Closed-form rate function; zero for `b ≥ b★`.
    pub fn rate(self, b: f64) -> Result<f64> {
        self.check(b)?;
        if b >= self.b_star() {
            return Ok(0.0);
        }
        Ok(match self {
            SingleWallModel::GueWall => {
                let s = (b * b + 6.0).sqrt();
                3f64.ln() / 4.0
                    - (b * (b * b + 15.0) * s + b.powi(4) - 36.0 * b * b + 54.0 * (b / 6f64.sqrt()).asinh())
                        / 108.0
            }
            SingleWallModel::WishartC1 => -b * b / 64.0 + b / 4.0 - 0.5 * (b / 4.0).ln() - 0.75,
        })
    }

    /// `F(b) = -∫_{b★}^{b} p(u) du` by adaptive quadrature.
    pub fn rate_by_quadrature(self, b: f64) -> Result<f64> {
        self.check(b)?;
        if b >= self.b_star() {
            return Ok(0.0);
        }
        let mut failure = None;
        let v = integrate(
            |u| match self.pressure(u) {
                Ok(p) => p,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            b,
            self.b_star(),
            QuadOptions { rel_tol: 1e-12, abs_tol: 1e-15, max_panels: 2000 },
        );
        match failure {
            Some(e) => Err(e),
            None => v,
        }
    }
}

//! Free-energy sweeps across wall radii, third-derivative jump at `R★`, and
//! the cubic coefficient `C★` of `F(R) ≈ C★ (R★ - R)³`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::log_gas::single_wall::SingleWallModel;
use crate::log_gas::LogGas;
use crate::yukawa::YukawaGas;
use crate::Phase;

/// Anything with a free energy `F(R)` that vanishes for `R ≥ R★`.
pub trait FreeEnergyModel: Sync {
    fn id(&self) -> String;
    fn critical_radius(&self) -> f64;
    fn free_energy(&self, big_r: f64) -> Result<f64>;
    /// Analytic `F′(R)`; zero in the pulled phase.
    fn free_energy_derivative(&self, big_r: f64) -> Result<f64>;
    /// Pushed-phase `F′` continued analytically past `R★`.
    fn force_continued(&self, big_r: f64) -> Result<f64>;
    /// Closed-form `lim_{R↑R★} F‴(R)`.
    fn predicted_jump(&self) -> Result<f64>;
}

impl FreeEnergyModel for LogGas {
    fn id(&self) -> String {
        format!("loggas:{}", self.potential().label())
    }

    fn critical_radius(&self) -> f64 {
        LogGas::critical_radius(self)
    }

    fn free_energy(&self, big_r: f64) -> Result<f64> {
        LogGas::free_energy(self, big_r)
    }

    fn free_energy_derivative(&self, big_r: f64) -> Result<f64> {
        LogGas::free_energy_derivative(self, big_r)
    }

    fn force_continued(&self, big_r: f64) -> Result<f64> {
        LogGas::force_continued(self, big_r)
    }

    fn predicted_jump(&self) -> Result<f64> {
        LogGas::predicted_jump(self)
    }
}

impl FreeEnergyModel for YukawaGas {
    fn id(&self) -> String {
        let p = self.params();
        format!("{}:d={}:a={}:m={}:{}", p.kind().as_str(), p.d(), p.a(), p.m(), self.potential().label())
    }

    fn critical_radius(&self) -> f64 {
        YukawaGas::critical_radius(self)
    }

    fn free_energy(&self, big_r: f64) -> Result<f64> {
        YukawaGas::free_energy(self, big_r)
    }

    fn free_energy_derivative(&self, big_r: f64) -> Result<f64> {
        YukawaGas::free_energy_derivative(self, big_r)
    }

    fn force_continued(&self, big_r: f64) -> Result<f64> {
        YukawaGas::force_continued(self, big_r)
    }

    fn predicted_jump(&self) -> Result<f64> {
        YukawaGas::predicted_jump(self)
    }
}

/// The wall position `b` plays the role of `R`.
impl FreeEnergyModel for SingleWallModel {
    fn id(&self) -> String {
        self.as_str().to_string()
    }

    fn critical_radius(&self) -> f64 {
        self.b_star()
    }

    fn free_energy(&self, b: f64) -> Result<f64> {
        self.rate(b)
    }

    fn free_energy_derivative(&self, b: f64) -> Result<f64> {
        Ok(-self.pressure(b)?)
    }

    fn force_continued(&self, b: f64) -> Result<f64> {
        Ok(-self.pressure_continued(b)?)
    }

    fn predicted_jump(&self) -> Result<f64> {
        Ok(SingleWallModel::predicted_jump(*self))
    }
}

/// Sampled `(R, F, F′, F″, F‴)` with phase labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyCurve {
    pub model_id: String,
    pub grid: Vec<f64>,
    pub f: Vec<f64>,
    pub df: Vec<f64>,
    pub d2f: Vec<f64>,
    pub d3f: Vec<f64>,
    pub phases: Vec<Phase>,
    pub r_star: f64,
    /// Finite-difference estimate of `lim_{R↑R★} F‴(R)`.
    pub jump: f64,
    /// `-jump/6`.
    pub c_star: f64,
}

impl FreeEnergyCurve {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Relative step for the sweep stencils.
const SWEEP_STEP: f64 = 1e-3;

fn second_derivative5(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let (m2, m1, c, p1, p2) = (f(x - 2.0 * h)?, f(x - h)?, f(x)?, f(x + h)?, f(x + 2.0 * h)?);
    Ok((-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h))
}

fn first_derivative5(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let (m2, m1, p1, p2) = (f(x - 2.0 * h)?, f(x - h)?, f(x + h)?, f(x + 2.0 * h)?);
    Ok((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h))
}

/// `lim_{R↑R★} F‴` from five-point second differences of the continued
/// force at `h = 1e-3 R★` and `5e-4 R★`, combined by Richardson.
pub fn estimate_jump(model: &dyn FreeEnergyModel) -> Result<f64> {
    let r = model.critical_radius();
    let f = |x: f64| model.force_continued(x);
    let h = 1e-3 * r;
    let (d1, d2) = (second_derivative5(&f, r, h)?, second_derivative5(&f, r, h / 2.0)?);
    Ok((16.0 * d2 - d1) / 15.0)
}

/// Evaluate `F` and its derivatives on an ascending grid of radii.
pub fn sweep(model: &dyn FreeEnergyModel, grid: &[f64]) -> Result<FreeEnergyCurve> {
    if grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameters("grid radii must be finite and positive".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameters("grid must be strictly ascending".into()));
    }
    let r_star = model.critical_radius();
    let h = SWEEP_STEP * r_star;
    let force = |x: f64| model.force_continued(x);
    let rows: Vec<(f64, f64, f64, f64, Phase)> = grid
        .par_iter()
        .map(|&r| {
            // R★ is a bisection root; points within rounding of it are pulled.
            if r >= r_star * (1.0 - 1e-12) {
                return Ok((0.0, 0.0, 0.0, 0.0, Phase::Pulled));
            }
            let f = model.free_energy(r)?;
            let df = model.free_energy_derivative(r)?;
            let step = h.min(0.25 * r);
            let d2f = first_derivative5(&force, r, step)?;
            let d3f = second_derivative5(&force, r, step)?;
            Ok((f, df, d2f, d3f, Phase::Pushed))
        })
        .collect::<Result<_>>()?;
    let jump = estimate_jump(model)?;
    let mut curve = FreeEnergyCurve {
        model_id: model.id(),
        grid: grid.to_vec(),
        f: Vec::with_capacity(grid.len()),
        df: Vec::with_capacity(grid.len()),
        d2f: Vec::with_capacity(grid.len()),
        d3f: Vec::with_capacity(grid.len()),
        phases: Vec::with_capacity(grid.len()),
        r_star,
        jump,
        c_star: -jump / 6.0,
    };
    for (f, df, d2f, d3f, phase) in rows {
        curve.f.push(f);
        curve.df.push(df);
        curve.d2f.push(d2f);
        curve.d3f.push(d3f);
        curve.phases.push(phase);
    }
    Ok(curve)
}

/// Width of the cubic-fit window as a fraction of `R★`.
pub const FIT_WINDOW: f64 = 0.05;

/// `n` radii `R★ - t` with offsets `t` geometrically spaced from
/// `1e-3 R★` to `FIT_WINDOW·R★`.
pub fn fit_window(r_star: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (1e-3f64, FIT_WINDOW);
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let s = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            r_star * (1.0 - lo * (hi / lo).powf(s))
        })
        .collect();
    v.reverse();
    v
}

/// Least-squares `C★` of `F ≈ C★ (R★ - R)³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicFit {
    pub c_star: f64,
    /// `‖F - C★t³‖ / ‖F‖` over the window.
    pub residual: f64,
    pub points: usize,
}

/// Fit `F` against `(R★ - R)³` on the points of `curve` inside
/// `[R★(1 - FIT_WINDOW), R★)`. Needs at least five such points.
pub fn cubic_fit(curve: &FreeEnergyCurve) -> Result<CubicFit> {
    let r_star = curve.r_star;
    let lo = r_star * (1.0 - FIT_WINDOW) * (1.0 - 1e-12);
    let pts: Vec<(f64, f64)> = curve
        .grid
        .iter()
        .zip(&curve.f)
        .filter(|(r, _)| **r >= lo && **r < r_star)
        .map(|(r, f)| ((r_star - r).powi(3), *f))
        .collect();
    if pts.len() < 5 {
        return Err(Error::InvalidParameters(format!(
            "cubic fit needs at least 5 points within {FIT_WINDOW}·R★ below R★ = {r_star}, found {}",
            pts.len()
        )));
    }
    let num: f64 = pts.iter().map(|(t3, f)| t3 * f).sum();
    let den: f64 = pts.iter().map(|(t3, _)| t3 * t3).sum();
    let c = num / den;
    let res: f64 = pts.iter().map(|(t3, f)| (f - c * t3).powi(2)).sum();
    let norm: f64 = pts.iter().map(|(_, f)| f * f).sum();
    Ok(CubicFit { c_star: c, residual: (res / norm).sqrt(), points: pts.len() })
}

/// One-sided limits at `R★`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub model_id: String,
    pub r_star: f64,
    /// `F`, `F′`, `F″` approached from the pushed side.
    pub f_left: f64,
    pub df_left: f64,
    pub d2f_left: f64,
    /// Finite-difference `lim_{R↑R★} F‴`; the pulled side is identically 0.
    pub jump: f64,
    pub predicted_jump: f64,
    pub passed: bool,
}

/// Tolerance on the vanishing one-sided limits.
pub const CONTINUITY_TOL: f64 = 1e-6;

pub fn continuity_report(model: &dyn FreeEnergyModel) -> Result<ContinuityReport> {
    let r_star = model.critical_radius();
    let f = |x: f64| model.force_continued(x);
    let f_left = model.free_energy(r_star * (1.0 - 1e-6))?;
    let df_left = model.force_continued(r_star)?;
    let d2f_left = first_derivative5(&f, r_star, 1e-3 * r_star)?;
    let jump = estimate_jump(model)?;
    let predicted_jump = model.predicted_jump()?;
    let passed = f_left.abs() < CONTINUITY_TOL
        && df_left.abs() < CONTINUITY_TOL
        && d2f_left.abs() < CONTINUITY_TOL
        && jump < 0.0;
    Ok(ContinuityReport { model_id: model.id(), r_star, f_left, df_left, d2f_left, jump, predicted_jump, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log_gas::{gue, DEFAULT_TOL};
    use crate::yukawa::{ginue, YukawaParams};
    use crate::RadialPotential;

    fn gue_gas() -> LogGas {
        LogGas::new(RadialPotential::quadratic(0.5).unwrap(), DEFAULT_TOL).unwrap()
    }

    fn ginue_gas() -> YukawaGas {
        YukawaGas::new(YukawaParams::coulomb(2).unwrap(), RadialPotential::quadratic(0.5).unwrap()).unwrap()
    }

    #[test]
    fn gue_sweep_values() {
        let c = sweep(&gue_gas(), &[1.0, 1.2, 2f64.sqrt(), 1.5]).unwrap();
        let want = [0.017_036_795_139_986_327, 0.002_326_016_743_009_014_2, 0.0, 0.0];
        for (f, w) in c.f.iter().zip(want) {
            assert!((f - w).abs() < 1e-12, "{f} vs {w}");
        }
        assert!((c.f[0] - gue::free_energy(1.0)).abs() < 1e-12);
        assert_eq!(c.phases, vec![Phase::Pushed, Phase::Pushed, Phase::Pulled, Phase::Pulled]);
        assert!((c.jump + 2f64.sqrt()).abs() < 1e-3);
        assert!((c.c_star - 2f64.sqrt() / 6.0).abs() < 1e-3);
    }

    #[test]
    fn ginue_sweep_values() {
        let c = sweep(&ginue_gas(), &[0.5, 1.0, 2.0]).unwrap();
        assert!((c.f[0] - ginue::free_energy(0.5)).abs() < 1e-12);
        assert_eq!(&c.f[1..], &[0.0, 0.0]);
        assert!((c.jump + 4.0).abs() < 1e-3);
    }

    #[test]
    fn pulled_grid_is_zero() {
        let c = sweep(&gue_gas(), &[1.5, 2.0, 3.0]).unwrap();
        assert!(c.f.iter().chain(&c.df).chain(&c.d2f).chain(&c.d3f).all(|v| *v == 0.0));
    }

    #[test]
    fn grid_validation() {
        assert!(sweep(&gue_gas(), &[1.0, 0.5]).is_err());
        assert!(sweep(&gue_gas(), &[0.0, 0.5]).is_err());
        assert!(sweep(&gue_gas(), &[]).unwrap().is_empty());
    }

    #[test]
    fn stencil_derivatives_match_closed_form() {
        // F″ and F‴ of the GUE closed form at R = 1.
        let r: f64 = 1.0;
        let d2 = (16.0 - 12.0 * r * r + 16.0 / (r * r)) / 32.0;
        let d3 = (-24.0 * r - 32.0 / r.powi(3)) / 32.0;
        let c = sweep(&gue_gas(), &[r]).unwrap();
        assert!((c.d2f[0] - d2).abs() < 1e-7, "{} vs {d2}", c.d2f[0]);
        assert!((c.d3f[0] - d3).abs() < 1e-5, "{} vs {d3}", c.d3f[0]);
    }

    #[test]
    fn cubic_fit_gue_and_ginue() {
        let g = gue_gas();
        let fit = cubic_fit(&sweep(&g, &fit_window(g.critical_radius(), 20)).unwrap()).unwrap();
        assert_eq!(fit.points, 20);
        assert!((fit.c_star - 2f64.sqrt() / 6.0).abs() < 0.05 * 2f64.sqrt() / 6.0, "{fit:?}");
        let g = ginue_gas();
        let fit = cubic_fit(&sweep(&g, &fit_window(1.0, 20)).unwrap()).unwrap();
        assert!((fit.c_star - 2.0 / 3.0).abs() < 0.05 * 2.0 / 3.0, "{fit:?}");
    }

    #[test]
    fn cubic_fit_needs_window() {
        let c = sweep(&gue_gas(), &[0.5, 1.0, 1.2]).unwrap();
        assert!(matches!(cubic_fit(&c), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn continuity_gue_ginue() {
        for (m, want) in [(&gue_gas() as &dyn FreeEnergyModel, -2f64.sqrt()), (&ginue_gas(), -4.0)] {
            let rep = continuity_report(m).unwrap();
            assert!(rep.passed, "{rep:?}");
            assert!((rep.jump - want).abs() < 1e-3, "{rep:?}");
            assert!((rep.predicted_jump - want).abs() < 1e-3, "{rep:?}");
        }
    }

    #[test]
    fn single_wall_jump() {
        for m in [SingleWallModel::GueWall, SingleWallModel::WishartC1] {
            let rep = continuity_report(&m).unwrap();
            assert!(rep.passed, "{rep:?}");
            assert!((rep.jump - rep.predicted_jump).abs() < 1e-6, "{rep:?}");
        }
    }

    #[test]
    fn fit_window_layout() {
        let w = fit_window(2.0, 20);
        assert_eq!(w.len(), 20);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert!((w[0] - 2.0 * 0.95).abs() < 1e-14);
        assert!((w[19] - 2.0 * 0.999).abs() < 1e-14);
    }
}

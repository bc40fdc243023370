//! Radial profiles of the screened kernel and the shell-theorem pair
//! `(φ_d, ψ_d)`.
//!
//! `φ_d(r) = (κ/r)^ν K_ν(κr) / (a² 2^ν Γ(d/2))` and
//! `ψ_d(r) = Γ(ν+1) (2/(κr))^ν I_ν(κr)` with `ν = d/2 - 1`, `κ = m/a`.

use crate::error::{Error, Result};
use crate::special::{bessel_i_scaled, bessel_k_scaled, gamma, BesselOrder};

/// Interaction family selected by `(a, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// `a > 0`, `m > 0`.
    Yukawa,
    /// `m = 0`: Newtonian kernel, scaled by `1/a²`.
    Coulomb,
    /// `a = 0`: contact interaction.
    ThomasFermi,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Yukawa => "yukawa",
            Kind::Coulomb => "coulomb",
            Kind::ThomasFermi => "thomas_fermi",
        }
    }
}

/// Dimension `d`, range `a` and screening mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YukawaParams {
    d: u32,
    a: f64,
    m: f64,
}

impl YukawaParams {
    pub fn new(d: u32, a: f64, m: f64) -> Result<Self> {
        if !(1..=6).contains(&d) {
            return Err(Error::InvalidParameters(format!("dimension must be in 1..=6, got {d}")));
        }
        if !(a.is_finite() && m.is_finite()) || a < 0.0 || m < 0.0 {
            return Err(Error::InvalidParameters(format!("need finite a, m >= 0, got a = {a}, m = {m}")));
        }
        if a == 0.0 && m == 0.0 {
            return Err(Error::InvalidParameters("a and m cannot both vanish".into()));
        }
        Ok(YukawaParams { d, a, m })
    }

    pub fn coulomb(d: u32) -> Result<Self> {
        Self::new(d, 1.0, 0.0)
    }

    pub fn thomas_fermi(d: u32) -> Result<Self> {
        Self::new(d, 0.0, 1.0)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn kind(&self) -> Kind {
        if self.m == 0.0 {
            Kind::Coulomb
        } else if self.a == 0.0 {
            Kind::ThomasFermi
        } else {
            Kind::Yukawa
        }
    }

    /// Inverse screening length `κ = m/a`.
    pub fn kappa(&self) -> f64 {
        self.m / self.a
    }

    fn nu(&self) -> f64 {
        self.d as f64 / 2.0 - 1.0
    }

    fn df(&self) -> f64 {
        self.d as f64
    }

    fn require(&self, allowed: &[Kind], op: &'static str) -> Result<()> {
        let k = self.kind();
        if allowed.contains(&k) {
            Ok(())
        } else {
            Err(Error::Kind { kind: k.as_str(), op })
        }
    }

    fn phi_prefactor(&self) -> f64 {
        let nu = self.nu();
        1.0 / (self.a * self.a * 2f64.powf(nu) * gamma(self.df() / 2.0))
    }

    /// `e^{κr} φ_d(r)` (Yukawa only).
    pub fn phi_scaled(&self, r: f64) -> Result<f64> {
        self.require(&[Kind::Yukawa], "phi_scaled")?;
        let k = self.kappa();
        let nu = self.nu();
        if self.d == 1 {
            // K_{1/2}(z) closed form gives φ_1 at every r ≥ 0.
            check_radius(r, true)?;
            return Ok(1.0 / (self.a * self.m));
        }
        check_radius(r, false)?;
        let kv = bessel_k_scaled(BesselOrder::abs(nu)?, k * r)?;
        Ok(self.phi_prefactor() * (k / r).powf(nu) * kv)
    }

    /// `φ_d(r)`. Coulomb: `r^{2-d}/((d-2)a²)`, or `-log(r)/a²` for `d = 2`.
    pub fn phi(&self, r: f64) -> Result<f64> {
        match self.kind() {
            Kind::Yukawa => Ok(self.phi_scaled(r)? * (-self.kappa() * r).exp()),
            Kind::Coulomb => {
                check_radius(r, self.d == 1)?;
                let a2 = self.a * self.a;
                Ok(if self.d == 2 {
                    -r.ln() / a2
                } else {
                    r.powi(2 - self.d as i32) / ((self.df() - 2.0) * a2)
                })
            }
            Kind::ThomasFermi => Err(Error::Kind { kind: "thomas_fermi", op: "phi" }),
        }
    }

    /// `φ_d′(r)`.
    pub fn dphi(&self, r: f64) -> Result<f64> {
        match self.kind() {
            Kind::Yukawa => {
                check_radius(r, self.d == 1)?;
                let k = self.kappa();
                if self.d == 1 {
                    return Ok(-k * self.phi(r)?);
                }
                let nu = self.nu();
                let kv1 = bessel_k_scaled(BesselOrder::new(nu + 1.0)?, k * r)?;
                Ok(-self.phi_prefactor() * k * (k / r).powf(nu) * kv1 * (-k * r).exp())
            }
            Kind::Coulomb => {
                check_radius(r, self.d == 1)?;
                Ok(-1.0 / (self.a * self.a * r.powi(self.d as i32 - 1)))
            }
            Kind::ThomasFermi => Err(Error::Kind { kind: "thomas_fermi", op: "dphi" }),
        }
    }

    /// `φ_d(r)/φ_d′(r) = -K_ν(κr)/(κ K_{ν+1}(κr))`, free of under/overflow.
    pub fn phi_over_dphi(&self, r: f64) -> Result<f64> {
        match self.kind() {
            Kind::Yukawa => {
                check_radius(r, self.d == 1)?;
                let k = self.kappa();
                if self.d == 1 {
                    return Ok(-1.0 / k);
                }
                let nu = self.nu();
                let num = bessel_k_scaled(BesselOrder::abs(nu)?, k * r)?;
                let den = bessel_k_scaled(BesselOrder::new(nu + 1.0)?, k * r)?;
                Ok(-num / (k * den))
            }
            Kind::Coulomb => Ok(self.phi(r)? / self.dphi(r)?),
            Kind::ThomasFermi => Err(Error::Kind { kind: "thomas_fermi", op: "phi_over_dphi" }),
        }
    }

    /// `e^{-κr} ψ_d(r)` (Yukawa only).
    pub fn psi_scaled(&self, r: f64) -> Result<f64> {
        self.require(&[Kind::Yukawa], "psi")?;
        check_radius(r, true)?;
        let z = self.kappa() * r;
        if z == 0.0 {
            return Ok(1.0);
        }
        let nu = self.nu();
        let i_nu = if self.d == 1 {
            // I_{-1/2}(z) = I_{3/2}(z) + I_{1/2}(z)/z
            bessel_i_scaled(BesselOrder::new(1.5)?, z)? + bessel_i_scaled(BesselOrder::new(0.5)?, z)? / z
        } else {
            bessel_i_scaled(BesselOrder::new(nu)?, z)?
        };
        Ok(gamma(nu + 1.0) * (2.0 / z).powf(nu) * i_nu)
    }

    /// `ψ_d(r)`, with `ψ_d(0) = 1`.
    pub fn psi(&self, r: f64) -> Result<f64> {
        Ok(self.psi_scaled(r)? * (self.kappa() * r).exp())
    }

    /// `ψ_d′(r) = Γ(ν+1) κ (2/(κr))^ν I_{ν+1}(κr)`.
    pub fn dpsi(&self, r: f64) -> Result<f64> {
        self.require(&[Kind::Yukawa], "dpsi")?;
        check_radius(r, true)?;
        let k = self.kappa();
        let z = k * r;
        if z == 0.0 {
            return Ok(0.0);
        }
        let nu = self.nu();
        let i1 = bessel_i_scaled(BesselOrder::new(nu + 1.0)?, z)?;
        Ok(gamma(nu + 1.0) * k * (2.0 / z).powf(nu) * i1 * z.exp())
    }

    /// Spherical mean of `Φ(x - y)` over `|y| = r` at `|x| = x_norm`:
    /// `ψ_d(min) φ_d(max)` (Yukawa) or `φ_d(max)` (Coulomb).
    pub fn shell_average(&self, x_norm: f64, r: f64) -> Result<f64> {
        check_radius(x_norm, true)?;
        check_radius(r, true)?;
        let (lo, hi) = if x_norm < r { (x_norm, r) } else { (r, x_norm) };
        match self.kind() {
            Kind::Yukawa => {
                let k = self.kappa();
                Ok(self.psi_scaled(lo)? * self.phi_scaled(hi)? * (-k * (hi - lo)).exp())
            }
            Kind::Coulomb => self.phi(hi),
            Kind::ThomasFermi => Err(Error::Kind { kind: "thomas_fermi", op: "shell_average" }),
        }
    }
}

fn check_radius(r: f64, allow_zero: bool) -> Result<()> {
    if !r.is_finite() || r < 0.0 || (!allow_zero && r == 0.0) {
        return Err(Error::Domain(format!("kernel radius {r} out of domain")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(d: u32, a: f64, m: f64) -> YukawaParams {
        YukawaParams::new(d, a, m).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(YukawaParams::new(0, 1.0, 1.0).is_err());
        assert!(YukawaParams::new(7, 1.0, 1.0).is_err());
        assert!(YukawaParams::new(2, 0.0, 0.0).is_err());
        assert!(YukawaParams::new(2, -1.0, 1.0).is_err());
        assert_eq!(y(2, 1.0, 0.0).kind(), Kind::Coulomb);
        assert_eq!(y(2, 0.0, 1.0).kind(), Kind::ThomasFermi);
        assert_eq!(y(2, 1.0, 1.0).kind(), Kind::Yukawa);
    }

    #[test]
    fn phi_examples() {
        assert!((y(3, 1.0, 1.0).phi(2.0).unwrap() - (-2f64).exp() / 2.0).abs() < 1e-15);
        assert!((y(1, 2.0, 1.0).phi(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(y(2, 1.0, 0.0).phi(1.0).unwrap(), 0.0);
        assert!(y(3, 1.0, 1.0).phi(0.0).is_err());
        assert!(matches!(y(3, 0.0, 1.0).phi(1.0), Err(Error::Kind { .. })));
    }

    #[test]
    fn phi_closed_forms_d1_d3() {
        for &(a, m) in &[(0.5, 2.0), (1.0, 1.0), (2.0, 0.5)] {
            for &r in &[0.1, 0.7, 3.0, 9.0] {
                let p1 = y(1, a, m).phi(r).unwrap();
                assert!((p1 - (-m * r / a).exp() / (a * m)).abs() < 1e-14 * p1);
                let p3 = y(3, a, m).phi(r).unwrap();
                assert!((p3 - (-m * r / a).exp() / (a * a * r)).abs() < 1e-14 * p3);
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert!((y(3, 1.0, 1.0).psi(1.0).unwrap() - 1f64.sinh()).abs() < 1e-14);
        assert!((1f64.sinh() - 1.175_201).abs() < 1e-6);
        for d in 1..=6 {
            assert_eq!(y(d, 1.3, 0.7).psi(0.0).unwrap(), 1.0);
        }
        assert!((y(1, 1.0, 2.0).psi(0.5).unwrap() - 1f64.cosh()).abs() < 1e-14);
        assert!(matches!(y(2, 1.0, 0.0).psi(1.0), Err(Error::Kind { .. })));
    }

    #[test]
    fn psi_closed_forms() {
        for &r in &[1e-3, 0.4, 2.0, 11.0] {
            let z = 0.8 * r / 1.3;
            assert!((y(1, 1.3, 0.8).psi(r).unwrap() - z.cosh()).abs() < 1e-13 * z.cosh());
            let i0 = y(2, 1.3, 0.8).psi(r).unwrap();
            let want = crate::special::bessel_i(BesselOrder::new(0.0).unwrap(), z).unwrap();
            assert!((i0 - want).abs() < 1e-14 * want);
            assert!((y(3, 1.3, 0.8).psi(r).unwrap() - z.sinh() / z).abs() < 1e-13 * z.sinh() / z);
        }
    }

    #[test]
    fn wronskian() {
        for d in 1..=4 {
            for &(a, m) in &[(0.5, 0.5), (1.0, 1.0), (2.0, 0.7), (0.7, 3.0)] {
                let p = y(d, a, m);
                for i in 1..=20 {
                    let r = 0.5 * i as f64;
                    let w = p.dphi(r).unwrap() * p.psi(r).unwrap() - p.phi(r).unwrap() * p.dpsi(r).unwrap();
                    let target = -1.0 / (a * a * r.powi(d as i32 - 1));
                    assert!(((w - target) / target).abs() < 1e-10, "d={d} a={a} m={m} r={r}");
                }
            }
        }
    }

    #[test]
    fn phi_over_dphi_matches_ratio_and_limit() {
        for d in 1..=4 {
            let p = y(d, 0.9, 1.4);
            for &r in &[0.3, 1.0, 4.0] {
                let direct = p.phi(r).unwrap() / p.dphi(r).unwrap();
                assert!((p.phi_over_dphi(r).unwrap() - direct).abs() < 1e-13 * direct.abs());
            }
            // φ/φ′ → -a/m as a → 0
            let q = y(d, 1e-5, 1.0);
            assert!((q.phi_over_dphi(1.0).unwrap() + 1e-5).abs() < 1e-8);
        }
        let d3 = y(3, 1.0, 1.0);
        assert!((d3.phi_over_dphi(1.0).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn shell_average_examples() {
        let p = y(3, 1.0, 1.0);
        assert!((p.shell_average(0.0, 1.3).unwrap() - p.phi(1.3).unwrap()).abs() < 1e-15);
        let want = 1f64.sinh() * (-2f64).exp() / 2.0;
        assert!((p.shell_average(2.0, 1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.079_523_093_200_894_6).abs() < 1e-15);
        let c = y(3, 1.0, 0.0);
        assert!((c.shell_average(0.5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        // d = 1: mean of the two reflected points.
        let p1 = y(1, 1.0, 1.5);
        let (x, r) = (0.4f64, 1.1f64);
        let direct = 0.5 * (p1.phi((x - r).abs()).unwrap() + p1.phi(x + r).unwrap());
        assert!((p1.shell_average(x, r).unwrap() - direct).abs() < 1e-15);
        // Continuous at x = r.
        let lo = p.shell_average(1.0 - 1e-12, 1.0).unwrap();
        let hi = p.shell_average(1.0 + 1e-12, 1.0).unwrap();
        assert!((lo - hi).abs() < 1e-11);
    }

    #[test]
    fn coulomb_derivative() {
        for d in 1..=4 {
            let p = y(d, 1.5, 0.0);
            let r = 0.8;
            let h = 1e-6;
            let fd = (p.phi(r + h).unwrap() - p.phi(r - h).unwrap()) / (2.0 * h);
            assert!((fd - p.dphi(r).unwrap()).abs() < 1e-8);
        }
    }
}

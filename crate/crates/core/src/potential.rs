//! Radial confining potentials `V(x) = v(|x|)`.
//!
//! Symmetry is structural: every potential is a function of the radius only.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

type Radial = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Moment = Arc<dyn Fn(f64, u32) -> f64 + Send + Sync>;

/// `v`, `v′`, `v″` and optionally a closed form for `∫_0^R r^{d-1} v(r) dr`.
#[derive(Clone)]
pub struct RadialPotential {
    label: String,
    v: Radial,
    dv: Radial,
    ddv: Radial,
    moment: Option<Moment>,
}

impl fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialPotential").field("label", &self.label).finish()
    }
}

impl RadialPotential {
    /// `Σ k_i r^{p_i}` with `p_i ≥ 0`. Exponents in `(0, 2)` other than 1
    /// make `v″` singular at the origin and are rejected.
    pub fn monomial_sum(terms: &[(f64, f64)]) -> Result<Self> {
        for &(k, p) in terms {
            if !k.is_finite() || !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidParameters(format!("bad monomial term {k}·r^{p}")));
            }
            if p > 0.0 && p < 2.0 && p != 1.0 {
                return Err(Error::InvalidParameters(format!(
                    "exponent {p} gives a singular second derivative at r = 0"
                )));
            }
        }
        let label = terms
            .iter()
            .map(|(k, p)| format!("{k}*r^{p}"))
            .collect::<Vec<_>>()
            .join("+");
        let t0: Vec<(f64, f64)> = terms.to_vec();
        let t1 = t0.clone();
        let t2 = t0.clone();
        let t3 = t0.clone();
        Ok(RadialPotential {
            label: if label.is_empty() { "0".into() } else { label },
            v: Arc::new(move |r| t0.iter().map(|&(k, p)| k * pow(r, p)).sum()),
            dv: Arc::new(move |r| {
                t1.iter()
                    .filter(|(_, p)| *p != 0.0)
                    .map(|&(k, p)| k * p * pow(r, p - 1.0))
                    .sum()
            }),
            ddv: Arc::new(move |r| {
                t2.iter()
                    .filter(|(_, p)| *p != 0.0 && *p != 1.0)
                    .map(|&(k, p)| k * p * (p - 1.0) * pow(r, p - 2.0))
                    .sum()
            }),
            moment: Some(Arc::new(move |big_r, d| {
                let d = d as f64;
                t3.iter().map(|&(k, p)| k * big_r.powf(p + d) / (p + d)).sum()
            })),
        })
    }

    /// `k r²`.
    pub fn quadratic(k: f64) -> Result<Self> {
        Self::monomial_sum(&[(k, 2.0)])
    }

    /// `k r⁴`.
    pub fn quartic(k: f64) -> Result<Self> {
        Self::monomial_sum(&[(k, 4.0)])
    }

    /// `k r^p`.
    pub fn monomial(p: f64, k: f64) -> Result<Self> {
        Self::monomial_sum(&[(k, p)])
    }

    /// The constant potential `k`.
    pub fn constant(k: f64) -> Result<Self> {
        Self::monomial_sum(&[(k, 0.0)])
    }

    /// User-supplied evaluators, checked against central differences of
    /// `v` and `v′` at a few sample radii in `(0, probe_radius]`.
    pub fn custom<V, D, DD>(label: &str, v: V, dv: D, ddv: DD, probe_radius: f64) -> Result<Self>
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        DD: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let pot = RadialPotential {
            label: label.to_string(),
            v: Arc::new(v),
            dv: Arc::new(dv),
            ddv: Arc::new(ddv),
            moment: None,
        };
        pot.check_derivatives(probe_radius)?;
        Ok(pot)
    }

    /// Attach a closed form for `∫_0^R r^{d-1} v(r) dr`.
    pub fn with_moment<M>(mut self, moment: M) -> Self
    where
        M: Fn(f64, u32) -> f64 + Send + Sync + 'static,
    {
        self.moment = Some(Arc::new(moment));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn v(&self, r: f64) -> f64 {
        (self.v)(r)
    }

    pub fn dv(&self, r: f64) -> f64 {
        (self.dv)(r)
    }

    pub fn ddv(&self, r: f64) -> f64 {
        (self.ddv)(r)
    }

    /// `V(x) = v(|x|)` on the line.
    pub fn on_line(&self, x: f64) -> f64 {
        (self.v)(x.abs())
    }

    /// `∫_0^R r^{d-1} v(r) dr`, closed form when available.
    pub fn radial_moment(&self, big_r: f64, d: u32) -> Result<f64> {
        if let Some(m) = &self.moment {
            return Ok(m(big_r, d));
        }
        let di = d as i32;
        integrate(|r| r.powi(di - 1) * self.v(r), 0.0, big_r, QuadOptions { rel_tol: 1e-12, abs_tol: 1e-15, max_panels: 4000 })
    }

    /// Compare `v′`, `v″` with central differences; tolerance `1e-6`
    /// relative to `max(1, |value|)`.
    pub fn check_derivatives(&self, probe_radius: f64) -> Result<()> {
        if !(probe_radius > 0.0) {
            return Err(Error::InvalidParameters("probe radius must be positive".into()));
        }
        for i in 1..=8 {
            let r = probe_radius * i as f64 / 8.0;
            let h = 1e-4 * r.max(1e-3);
            let fd1 = (self.v(r + h) - self.v(r - h)) / (2.0 * h);
            let fd2 = (self.dv(r + h) - self.dv(r - h)) / (2.0 * h);
            for (name, analytic, fd) in [("v'", self.dv(r), fd1), ("v''", self.ddv(r), fd2)] {
                if !analytic.is_finite() || (analytic - fd).abs() > 1e-6 * analytic.abs().max(1.0) {
                    return Err(Error::InvalidParameters(format!(
                        "{name} of '{}' inconsistent at r = {r}: {analytic} vs finite difference {fd}",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

fn pow(r: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p.fract() == 0.0 && p.abs() < 64.0 {
        r.powi(p as i32)
    } else {
        r.powf(p)
    }
}

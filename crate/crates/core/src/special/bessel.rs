//! Modified Bessel functions of real order and positive real argument.
//!
//! `I_ν`: ascending power series for moderate arguments, the Hankel
//! asymptotic series beyond `max(25, ν²)`, and closed forms for
//! half-integer orders when `x ≥ 2`.
//!
//! `K_ν`: closed forms for half-integer orders; otherwise the trapezoidal
//! rule applied to `K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt`, which
//! converges geometrically in the step size for this integrand.
//!
//! The `_scaled` variants return `e^{-x} I_ν(x)` and `e^{x} K_ν(x)` and
//! stay finite where the unscaled values overflow or underflow.

use std::f64::consts::PI;

use super::gamma;
use crate::error::{Error, Result};

/// Order `ν ≥ 0` of a modified Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::Domain(format!("Bessel order must be finite and >= 0, got {nu}")));
        }
        Ok(BesselOrder(nu))
    }

    /// Order `|nu|`. `K_ν` is even in `ν`, so callers holding a possibly
    /// negative order for `K` can use this directly.
    pub fn abs(nu: f64) -> Result<Self> {
        Self::new(nu.abs())
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `Some(n)` when `ν = n + 1/2`.
    pub fn half_integer(self) -> Option<u32> {
        let shifted = self.0 - 0.5;
        if shifted >= 0.0 && shifted.fract() == 0.0 && shifted < 64.0 {
            Some(shifted as u32)
        } else {
            None
        }
    }
}

fn check_arg(x: f64, allow_zero: bool) -> Result<()> {
    if !x.is_finite() || x < 0.0 || (!allow_zero && x == 0.0) {
        return Err(Error::Domain(format!("Bessel argument {x} out of domain")));
    }
    Ok(())
}

/// `I_ν(x)` for `x ≥ 0`.
pub fn bessel_i(order: BesselOrder, x: f64) -> Result<f64> {
    check_arg(x, true)?;
    let nu = order.value();
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if let Some(n) = order.half_integer() {
        if n == 0 {
            return Ok((2.0 / (PI * x)).sqrt() * x.sinh());
        }
        if (2.0..=700.0).contains(&x) {
            return Ok(half_integer_i_scaled(n, x) * x.exp());
        }
    }
    if x > asymptotic_threshold(nu) {
        let s = hankel_i_scaled(nu, x);
        return Ok(s * x.exp());
    }
    Ok(series_i(nu, x))
}

/// `e^{-x} I_ν(x)` for `x ≥ 0`.
pub fn bessel_i_scaled(order: BesselOrder, x: f64) -> Result<f64> {
    check_arg(x, true)?;
    let nu = order.value();
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if let Some(n) = order.half_integer() {
        if x >= 2.0 {
            return Ok(half_integer_i_scaled(n, x));
        }
    }
    if x > asymptotic_threshold(nu) {
        return Ok(hankel_i_scaled(nu, x));
    }
    Ok(series_i(nu, x) * (-x).exp())
}

/// `K_ν(x)` for `x > 0`.
pub fn bessel_k(order: BesselOrder, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(order, x)? * (-x).exp())
}

/// `e^{x} K_ν(x)` for `x > 0`.
pub fn bessel_k_scaled(order: BesselOrder, x: f64) -> Result<f64> {
    check_arg(x, false)?;
    if let Some(n) = order.half_integer() {
        return Ok(half_integer_k_scaled(n, x));
    }
    Ok(trapezoid_k_scaled(order.value(), x))
}

fn asymptotic_threshold(nu: f64) -> f64 {
    25f64.max(nu * nu)
}

fn series_i(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = (0.5 * x).powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

fn hankel_i_scaled(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * kf * x);
        if next.abs() >= term.abs() && k > 1 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

// (n+k)! / (k! (n-k)! 2^k) / x^k, the Bessel polynomial coefficients.
fn reverse_bessel_terms(n: u32, x: f64) -> impl Iterator<Item = f64> {
    let mut coef = 1.0;
    (0..=n).map(move |k| {
        if k > 0 {
            let kf = k as f64;
            let nf = n as f64;
            coef *= (nf + kf) * (nf - kf + 1.0) / (2.0 * kf * x);
        }
        coef
    })
}

fn half_integer_k_scaled(n: u32, x: f64) -> f64 {
    let poly: f64 = reverse_bessel_terms(n, x).sum();
    (PI / (2.0 * x)).sqrt() * poly
}

fn half_integer_i_scaled(n: u32, x: f64) -> f64 {
    let mut growing = 0.0;
    let mut decaying = 0.0;
    for (k, c) in reverse_bessel_terms(n, x).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        growing += sign * c;
        decaying += c;
    }
    let sign_n = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    (growing + sign_n * (-2.0 * x).exp() * decaying) / (2.0 * PI * x).sqrt()
}

fn trapezoid_k_scaled(nu: f64, x: f64) -> f64 {
    let h = 0.1f64.min(0.5 / x.sqrt());
    let mut sum = 0.5;
    let mut k = 1u32;
    loop {
        let t = k as f64 * h;
        let term = (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-18 * sum || k > 100_000 {
            break;
        }
        k += 1;
    }
    sum * h
}

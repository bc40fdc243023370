//! Special functions: modified Bessel functions, Chebyshev tools, Γ.

mod bessel;
mod chebyshev;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_k, bessel_k_scaled, BesselOrder};
pub use chebyshev::{
    cheb_prime_expansion, chebyshev_log_moment, chebyshev_t, expand, gauss_chebyshev,
    multipole_log_partial_sum, ChebExpansion, MAX_DEGREE,
};

use std::f64::consts::PI;

/// Γ(x). Integer and half-integer arguments use exact products.
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if x > 0.0 && x <= 40.0 && twice.fract() == 0.0 {
        let (mut acc, mut y) = if x.fract() == 0.0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
        while y < x {
            acc *= y;
            y += 1.0;
        }
        return acc;
    }
    statrs::function::gamma::gamma(x)
}

/// Surface area of the unit sphere in `R^d`, `2π^{d/2}/Γ(d/2)`.
pub fn omega(d: u32) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

//! Constrained equilibrium measures, excess free energies and the
//! pushed-to-pulled third-order transition for repulsive gases in a ball.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values in tests keep all the digits they were frozen with.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod error;
pub mod identities;
pub mod log_gas;
pub mod mc;
pub mod potential;
pub mod quadrature;
pub mod special;
pub mod transition;
pub mod yukawa;

pub use error::{Error, Result};
pub use potential::RadialPotential;

/// Whether the wall constrains the gas (`R < R★`) or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Pushed,
    Pulled,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Pushed => "pushed",
            Phase::Pulled => "pulled",
        }
    }
}

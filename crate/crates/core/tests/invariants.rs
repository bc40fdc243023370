use proptest::prelude::*;

use gaswall::log_gas::{LogGas, DEFAULT_TOL};
use gaswall::mc::{metropolis_run, GasConfig, Kernel};
use gaswall::transition::FreeEnergyModel;
use gaswall::yukawa::{YukawaGas, YukawaParams};
use gaswall::{Phase, RadialPotential};

fn log_gas(k2: f64, k4: f64) -> LogGas {
    LogGas::new(RadialPotential::monomial_sum(&[(k2, 2.0), (k4, 4.0)]).unwrap(), DEFAULT_TOL).unwrap()
}

fn yukawa_gas(d: u32, a: f64, m: f64, k: f64) -> YukawaGas {
    YukawaGas::new(YukawaParams::new(d, a, m).unwrap(), RadialPotential::quadratic(k).unwrap()).unwrap()
}

/// Monotonicity, sign of the force and agreement of `F′` with central
/// differences of `F` at `R = lo·R★` and `hi·R★`.
fn check_curve(model: &dyn FreeEnergyModel, lo: f64, hi: f64) -> Result<(), TestCaseError> {
    let rs = model.critical_radius();
    let (r1, r2) = (lo * rs, hi * rs);
    let (f1, f2) = (model.free_energy(r1).unwrap(), model.free_energy(r2).unwrap());
    prop_assert!(f1 >= f2 - 1e-14, "F({r1}) = {f1} < F({r2}) = {f2}");
    prop_assert!(f1 >= 0.0 && f2 >= 0.0);
    for r in [r1, r2] {
        let df = model.free_energy_derivative(r).unwrap();
        prop_assert!(df <= 0.0, "F'({r}) = {df}");
        let h = 1e-4 * r;
        let fd = (model.free_energy(r + h).unwrap() - model.free_energy(r - h).unwrap()) / (2.0 * h);
        prop_assert!((df - fd).abs() < 1e-5, "F'({r}) = {df}, difference quotient {fd}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn log_gas_free_energy(k2 in 0.1..1.0f64, k4 in 0.0..0.5f64, lo in 0.2..1.3f64, step in 0.0..0.5f64) {
        check_curve(&log_gas(k2, k4), lo, lo + step)?;
    }

    #[test]
    fn yukawa_free_energy(
        d in 1u32..=3, a in 0.5..2.0f64, m in 0.5..2.0f64, k in 0.25..1.0f64,
        lo in 0.2..1.3f64, step in 0.0..0.5f64,
    ) {
        check_curve(&yukawa_gas(d, a, m, k), lo, lo + step)?;
    }

    #[test]
    fn log_gas_density_is_normalized(k2 in 0.1..1.0f64, k4 in 0.0..0.5f64, frac in 0.3..1.5f64) {
        let gas = log_gas(k2, k4);
        let eq = gas.equilibrium(frac * gas.critical_radius()).unwrap();
        prop_assert!((eq.normalization().unwrap() - 1.0).abs() < 1e-9);
        prop_assert_eq!(eq.phase == Phase::Pushed, frac < 1.0);
    }

    #[test]
    fn yukawa_mass_is_conserved(d in 1u32..=3, a in 0.5..2.0f64, m in 0.5..2.0f64, frac in 0.3..1.5f64) {
        let gas = yukawa_gas(d, a, m, 0.5);
        let eq = gas.equilibrium(frac * gas.critical_radius()).unwrap();
        prop_assert!((eq.normalization().unwrap() - 1.0).abs() < 1e-8);
        prop_assert!(eq.c >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sampler_respects_the_wall(wall in 0.3..1.5f64, d in 0u32..=3, seed in any::<u64>()) {
        let kernel = match d {
            0 => Kernel::Log1d,
            d => Kernel::Yukawa(YukawaParams::new(d, 1.0, 1.0).unwrap()),
        };
        let mut cfg = GasConfig::new(12, 2.0, kernel, RadialPotential::quadratic(0.5).unwrap());
        cfg.wall = Some(wall);
        cfg.seed = seed;
        cfg.steps = 300;
        cfg.burn_in = 100;
        let run = metropolis_run(&cfg).unwrap();
        let dim = cfg.dim();
        for p in run.final_positions.chunks(dim) {
            let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!(r <= wall, "particle at {r} outside wall {wall}");
        }
        prop_assert_eq!(run.histogram.outside_fraction(), 0.0);
        prop_assert!(run.max_drift < 1e-9);
    }
}

//! Model selection from presets and explicit flags.

use clap::{Args, ValueEnum};

use gaswall::log_gas::single_wall::SingleWallModel;
use gaswall::log_gas::{LogGas, DEFAULT_TOL};
use gaswall::mc::Kernel;
use gaswall::transition::FreeEnergyModel;
use gaswall::yukawa::{YukawaGas, YukawaParams};
use gaswall::RadialPotential;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Preset {
    Gue,
    Ginue,
    WishartC1,
    Tf1,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Gue, Preset::Ginue, Preset::WishartC1, Preset::Tf1];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Gue => "gue",
            Preset::Ginue => "ginue",
            Preset::WishartC1 => "wishart_c1",
            Preset::Tf1 => "tf1",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Preset::Gue => "log-gas on the line, v = r^2/2, critical radius sqrt(2)",
            Preset::Ginue => "coulomb gas in the plane, v = r^2/2, critical radius 1",
            Preset::WishartC1 => "single hard wall on the Laguerre ensemble with c = 1, critical wall 4",
            Preset::Tf1 => "thomas-fermi gas in d = 1, v = r^2/2",
        }
    }

    fn family(self) -> Option<Family> {
        match self {
            Preset::Gue => Some(Family::Loggas),
            Preset::Ginue => Some(Family::Coulomb),
            Preset::Tf1 => Some(Family::ThomasFermi),
            Preset::WishartC1 => None,
        }
    }

    fn dim(self) -> u32 {
        match self {
            Preset::Ginue => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    Loggas,
    Yukawa,
    Coulomb,
    ThomasFermi,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Named model with closed-form reference values.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Dimension (1..=6).
    #[arg(long)]
    pub d: Option<u32>,
    /// Interaction range.
    #[arg(long)]
    pub a: Option<f64>,
    /// Screening mass.
    #[arg(long)]
    pub m: Option<f64>,
    /// quadratic:K, quartic:K, monomial:P:K, or a sum such as 0.25*r^4+0.5*r^2.
    #[arg(long)]
    pub pot: Option<String>,
    /// Chebyshev truncation tolerance (log-gas).
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

pub enum Model {
    LogGas(LogGas),
    Yukawa(YukawaGas),
    SingleWall(SingleWallModel),
}

impl Model {
    pub fn as_free_energy(&self) -> &dyn FreeEnergyModel {
        match self {
            Model::LogGas(g) => g,
            Model::Yukawa(g) => g,
            Model::SingleWall(m) => m,
        }
    }

    /// Pair kernel for sampling.
    pub fn kernel(&self) -> Result<Kernel, CliError> {
        match self {
            Model::LogGas(_) => Ok(Kernel::Log1d),
            Model::Yukawa(g) if g.params().a() > 0.0 => Ok(Kernel::Yukawa(*g.params())),
            Model::Yukawa(_) => Err(CliError::Invalid("the contact interaction (thomas_fermi) cannot be sampled".into())),
            Model::SingleWall(_) => Err(CliError::Invalid("single-wall presets cannot be sampled".into())),
        }
    }

    pub fn potential(&self) -> Option<&RadialPotential> {
        match self {
            Model::LogGas(g) => Some(g.potential()),
            Model::Yukawa(g) => Some(g.potential()),
            Model::SingleWall(_) => None,
        }
    }
}

/// Parse a potential. Every exponent must be 0 or an even integer ≥ 2.
pub fn parse_potential(s: &str) -> Result<RadialPotential, CliError> {
    let bad = |why: &str| CliError::Invalid(format!("bad potential '{s}': {why}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("'{t}' is not a number")));
    let parts: Vec<&str> = s.split(':').collect();
    let terms: Vec<(f64, f64)> = match parts.as_slice() {
        ["quadratic", k] => vec![(num(k)?, 2.0)],
        ["quartic", k] => vec![(num(k)?, 4.0)],
        ["monomial", p, k] => vec![(num(k)?, num(p)?)],
        [expr] => expr.split('+').map(|t| parse_term(t).ok_or_else(|| bad(&format!("cannot read term '{t}'")))).collect::<Result<_, _>>()?,
        _ => return Err(bad("expected quadratic:K, quartic:K, monomial:P:K or a monomial sum")),
    };
    for &(_, p) in &terms {
        if !(p == 0.0 || (p >= 2.0 && p.fract() == 0.0 && (p as i64) % 2 == 0)) {
            return Err(bad(&format!("exponent {p} must be 0 or an even integer >= 2")));
        }
    }
    Ok(RadialPotential::monomial_sum(&terms)?)
}

/// `K*r^P`, `K*r`, `r^P`, `r` or `K`.
fn parse_term(t: &str) -> Option<(f64, f64)> {
    let t = t.trim();
    let (k, rest) = match t.split_once('*') {
        Some((k, r)) => (k.trim().parse().ok()?, r.trim()),
        None if t.starts_with('r') => (1.0, t),
        None => return Some((t.parse().ok()?, 0.0)),
    };
    let p = match rest.strip_prefix('r')? {
        "" => 1.0,
        e => e.strip_prefix('^')?.trim().parse().ok()?,
    };
    Some((k, p))
}

pub fn build(args: &ModelArgs) -> Result<Model, CliError> {
    if args.preset == Some(Preset::WishartC1) {
        if args.family.is_some() || args.pot.is_some() || args.d.is_some() {
            return Err(CliError::Invalid("wishart_c1 takes no model flags".into()));
        }
        return Ok(Model::SingleWall(SingleWallModel::WishartC1));
    }
    let family = args
        .family
        .or(args.preset.and_then(Preset::family))
        .ok_or_else(|| CliError::Invalid("give --preset or --family".into()))?;
    let d = args.d.or(args.preset.map(Preset::dim)).unwrap_or(1);
    let pot = parse_potential(args.pot.as_deref().unwrap_or("quadratic:0.5"))?;
    let params = match family {
        Family::Loggas => {
            if d != 1 || args.a.is_some() || args.m.is_some() {
                return Err(CliError::Invalid("loggas is one-dimensional and takes no --a/--m".into()));
            }
            return Ok(Model::LogGas(LogGas::new(pot, args.tol)?));
        }
        Family::Yukawa => YukawaParams::new(d, args.a.unwrap_or(1.0), args.m.unwrap_or(1.0))?,
        Family::Coulomb => {
            if args.m.is_some_and(|m| m != 0.0) {
                return Err(CliError::Invalid("coulomb has m = 0".into()));
            }
            YukawaParams::new(d, args.a.unwrap_or(1.0), 0.0)?
        }
        Family::ThomasFermi => {
            if args.a.is_some_and(|a| a != 0.0) {
                return Err(CliError::Invalid("thomas_fermi has a = 0".into()));
            }
            YukawaParams::new(d, 0.0, args.m.unwrap_or(1.0))?
        }
    };
    Ok(Model::Yukawa(YukawaGas::new(params, pot)?))
}

// `!(b > a)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use gaswall::identities::{self, IdentityOptions, Suite};
use gaswall::mc::{self, GasConfig};
use gaswall::quadrature::{integrate, QuadOptions};
use gaswall::special::omega;
use gaswall::transition::{self, cubic_fit, fit_window};
use gaswall::Phase;

mod model;
mod output;

use model::{Model, ModelArgs, Preset};
use output::{emit, Cell, JsonObject, OutputArgs, Table, Value};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] gaswall::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("identity check failed")]
    IdentityFailure,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use gaswall::Error as E;
        match self {
            CliError::IdentityFailure => 1,
            CliError::Invalid(_) => 2,
            CliError::Core(E::InvalidParameters(_) | E::Domain(_) | E::Kind { .. }) => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gaswall", version, about = "Repulsive gases confined by hard walls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Constrained equilibrium density and scalars at one wall radius.
    Equilibrium(EquilibriumArgs),
    /// F(R) and its derivatives over a radius grid.
    Sweep(SweepArgs),
    /// Numerical identity suites.
    Identities(IdentityArgs),
    /// Metropolis sampling of the finite-N gas.
    Mc(McArgs),
    /// List the model presets.
    Presets(PresetArgs),
}

#[derive(Debug, Args)]
struct EquilibriumArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Wall radius (wall position for single-wall presets). Defaults to R★.
    #[arg(long)]
    wall: Option<f64>,
    /// Number of density samples.
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated ascending radii.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<f64>,
    /// Uniform grid from --from to --to with --points entries.
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long, default_value_t = 41)]
    points: usize,
    /// Add 20 radii clustered below R★ for the cubic fit.
    #[arg(long)]
    fit_window: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    /// One of multipole, electrostatic, shell, wronskian; all when absent.
    #[arg(long)]
    suite: Option<String>,
    /// Dimension for the kernel suites; may be repeated.
    #[arg(long)]
    d: Vec<u32>,
    /// Random radius pairs per parameter set (shell suite).
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    /// Partial-sum length (multipole suite).
    #[arg(long, default_value_t = 10_000)]
    terms: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct McArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 10_000)]
    sweeps: usize,
    /// Defaults to a tenth of --sweeps.
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    wall: Option<f64>,
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Histogram extent; defaults to the wall, or 1.5 R★ without one.
    #[arg(long)]
    range: Option<f64>,
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Initial proposal width, tuned during burn-in.
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PresetArgs {
    #[command(flatten)]
    output: OutputArgs,
}

fn phase_of(r: f64, r_star: f64) -> Phase {
    if r < r_star {
        Phase::Pushed
    } else {
        Phase::Pulled
    }
}

fn cmd_equilibrium(args: &EquilibriumArgs) -> Result<(), CliError> {
    if args.points < 2 {
        return Err(CliError::Invalid("need at least 2 points".into()));
    }
    let model = model::build(&args.model)?;
    let fm = model.as_free_energy();
    let r_star = fm.critical_radius();
    let wall = args.wall.unwrap_or(r_star);
    let mut s = JsonObject::new();
    s.str("model_id", &fm.id()).num("wall", wall).num("r_star", r_star);
    let n = args.points;
    let (header, xs, rho): (&'static str, Vec<f64>, Vec<f64>) = match &model {
        Model::LogGas(g) => {
            let eq = g.equilibrium(wall)?;
            let l = eq.support();
            s.num("mu", eq.mu).num("support", l).num("edge_value", g.edge_value(l)?).str("phase", eq.phase.as_str());
            // Midpoints: the pushed density diverges at ±R.
            let xs: Vec<f64> = (0..n).map(|k| -l + 2.0 * l * (k as f64 + 0.5) / n as f64).collect();
            let rho = xs.iter().map(|&x| eq.density(x)).collect();
            ("x", xs, rho)
        }
        Model::Yukawa(g) => {
            let eq = g.equilibrium(wall)?;
            let l = eq.support();
            s.num("mu", eq.mu).num("c", eq.c).num("support", l).str("phase", eq.phase.as_str());
            let xs: Vec<f64> = (0..n).map(|k| l * k as f64 / (n - 1) as f64).collect();
            let rho = xs.iter().map(|&r| eq.bulk_density(r)).collect();
            ("r", xs, rho)
        }
        Model::SingleWall(m) => {
            let a = m.left_edge(wall)?;
            let b = wall.min(m.b_star());
            s.num("rate", m.rate(wall)?)
                .num("pressure", m.pressure(wall)?)
                .num("left_edge", a)
                .str("phase", phase_of(wall, m.b_star()).as_str());
            let xs: Vec<f64> = (0..n).map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64).collect();
            let rho = xs.iter().map(|&x| m.density(wall, x)).collect::<Result<_, _>>()?;
            ("x", xs, rho)
        }
    };
    let table = Table {
        headers: vec![header, "density"],
        rows: xs.into_iter().zip(rho).map(|(x, r)| vec![Cell::Num(x), Cell::Num(r)]).collect(),
    };
    emit(&args.output, table, s)?;
    Ok(())
}

fn sweep_grid(args: &SweepArgs, r_star: f64) -> Result<Vec<f64>, CliError> {
    let mut grid = args.grid.clone();
    match (args.from, args.to) {
        (Some(a), Some(b)) => {
            if args.points < 2 || !(b > a) {
                return Err(CliError::Invalid("need --from < --to and --points >= 2".into()));
            }
            grid.extend((0..args.points).map(|k| a + (b - a) * k as f64 / (args.points - 1) as f64));
        }
        (None, None) => {}
        _ => return Err(CliError::Invalid("--from and --to go together".into())),
    }
    if args.fit_window {
        grid.extend(fit_window(r_star, 20));
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    } else if args.from.is_some() && !args.grid.is_empty() {
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    }
    if grid.is_empty() {
        return Err(CliError::Invalid("empty grid: give --grid, --from/--to or --fit-window".into()));
    }
    Ok(grid)
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let model = model::build(&args.model)?;
    let fm = model.as_free_energy();
    let grid = sweep_grid(args, fm.critical_radius())?;
    let curve = transition::sweep(fm, &grid)?;
    let mut s = JsonObject::new();
    s.str("model_id", &curve.model_id)
        .num("r_star", curve.r_star)
        .num("jump", curve.jump)
        .num("c_star", curve.c_star)
        .num("predicted_jump", fm.predicted_jump()?);
    match cubic_fit(&curve) {
        Ok(fit) => s.num("c_star_fit", fit.c_star).num("fit_residual", fit.residual),
        Err(_) => s.set("c_star_fit", Value::Null).set("fit_residual", Value::Null),
    };
    let rows = (0..curve.len())
        .map(|k| {
            vec![
                Cell::Num(curve.grid[k]),
                Cell::Num(curve.f[k]),
                Cell::Num(curve.df[k]),
                Cell::Num(curve.d2f[k]),
                Cell::Num(curve.d3f[k]),
                Cell::Text(curve.phases[k].as_str().into()),
            ]
        })
        .collect();
    let table = Table { headers: vec!["r", "f", "df", "d2f", "d3f", "phase"], rows };
    emit(&args.output, table, s)?;
    Ok(())
}

fn cmd_identities(args: &IdentityArgs) -> Result<(), CliError> {
    let suites: Vec<Suite> = match &args.suite {
        None => Suite::ALL.to_vec(),
        Some(name) => vec![name.parse()?],
    };
    let opts = IdentityOptions {
        dims: if args.d.is_empty() { None } else { Some(args.d.clone()) },
        pairs: args.pairs,
        terms: args.terms,
        seed: args.seed,
    };
    let reports = suites.iter().map(|s| identities::run_suite(*s, &opts)).collect::<Result<Vec<_>, _>>()?;
    let all_passed = reports.iter().all(|r| r.passed);
    let mut s = JsonObject::new();
    s.set("passed", Value::Bool(all_passed));
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.suite.as_str().into()),
                Cell::Num(r.max_deviation),
                Cell::Num(r.threshold),
                Cell::Int(r.cases as u64),
                Cell::Text(r.passed.to_string()),
            ]
        })
        .collect();
    let table = Table { headers: vec!["suite", "max_deviation", "threshold", "cases", "passed"], rows };
    emit(&args.output, table, s)?;
    if all_passed {
        Ok(())
    } else {
        Err(CliError::IdentityFailure)
    }
}

/// Predicted bulk density, point masses at the wall, and points whose
/// neighbouring bins are skipped.
struct Prediction {
    rho: Box<dyn Fn(f64) -> f64>,
    atoms: Vec<(f64, f64)>,
    exclude: Vec<f64>,
}

fn predicted(model: &Model, wall: Option<f64>) -> Result<Prediction, CliError> {
    match model {
        Model::LogGas(g) => {
            let eq = g.equilibrium(wall.unwrap_or(g.critical_radius()))?;
            let exclude = if eq.phase == Phase::Pushed { vec![-eq.r, eq.r] } else { vec![] };
            Ok(Prediction { rho: Box::new(move |x| eq.density(x)), atoms: vec![], exclude })
        }
        Model::Yukawa(g) => {
            let eq = g.equilibrium(wall.unwrap_or(g.critical_radius()))?;
            let r = eq.support();
            let atoms = match (eq.c > 0.0, g.params().d()) {
                (false, _) => vec![],
                (true, 1) => vec![(-r, eq.c / 2.0), (r, eq.c / 2.0)],
                (true, _) => vec![(r, eq.c)],
            };
            Ok(Prediction { rho: Box::new(move |x| eq.bulk_density(x.abs())), atoms, exclude: vec![] })
        }
        Model::SingleWall(_) => Err(CliError::Invalid("single-wall presets cannot be sampled".into())),
    }
}

fn cmd_mc(args: &McArgs) -> Result<(), CliError> {
    if args.n < 2 {
        return Err(CliError::Invalid(format!("need at least 2 particles, got {}", args.n)));
    }
    let model = model::build(&args.model)?;
    let kernel = model.kernel()?;
    let pot = model.potential().expect("gas models carry a potential").clone();
    let r_star = model.as_free_energy().critical_radius();
    let mut cfg = GasConfig::new(args.n, args.beta, kernel, pot);
    cfg.wall = args.wall;
    cfg.seed = args.seed;
    cfg.steps = args.sweeps;
    cfg.burn_in = args.burn_in.unwrap_or(args.sweeps / 10);
    cfg.step_scale = args.step;
    cfg.bins = args.bins;
    cfg.hist_range = args.range.or(args.wall).or(Some(1.5 * r_star));
    cfg.validate()?;
    let run = mc::metropolis_chains(&cfg, args.chains)?;
    let h = &run.histogram;
    let pred = predicted(&model, args.wall)?;
    let l1 = mc::density_distance(h, pred.rho.as_ref(), &pred.atoms, &pred.exclude, 2.0)?;

    // Mass within two bin widths of the wall, against the bulk prediction.
    let (mut surface, mut bulk) = (0.0, 0.0);
    if let Some(w) = args.wall {
        let mass = h.mass();
        let band = 2.0 * h.bin_width();
        let radial = h.radial_dim;
        let opts = QuadOptions { rel_tol: 1e-9, abs_tol: 1e-13, max_panels: 2000 };
        for (k, &m) in mass.iter().enumerate() {
            let (a, b) = (h.edges[k], h.edges[k + 1]);
            if a.abs().max(b.abs()) > w - band - 1e-12 {
                surface += m;
                bulk += match radial {
                    Some(d) => integrate(|r| omega(d) * r.powi(d as i32 - 1) * (pred.rho)(r), a, b, opts)?,
                    None => integrate(|x| (pred.rho)(x), a, b, opts)?,
                };
            }
        }
    }
    let mut s = JsonObject::new();
    s.str("model_id", &model.as_free_energy().id())
        .set("seed", Value::Int(args.seed))
        .set("n", Value::Int(args.n as u64))
        .num("beta", args.beta)
        .num("acceptance_rate", run.acceptance_rate)
        .num("l1_distance", l1)
        .num("max_drift", run.max_drift)
        .num("step_scale", run.step_scale)
        .num("outside_fraction", h.outside_fraction())
        .num("surface_mass", surface)
        .num("surface_bulk_prediction", bulk);
    let centers = h.centers();
    let (mass, dens) = (h.mass(), h.density());
    let rows = (0..h.bins())
        .map(|k| {
            vec![
                Cell::Num(h.edges[k]),
                Cell::Num(h.edges[k + 1]),
                Cell::Num(centers[k]),
                Cell::Num(mass[k]),
                Cell::Num(dens[k]),
            ]
        })
        .collect();
    let table = Table { headers: vec!["lo", "hi", "center", "mass", "density"], rows };
    emit(&args.output, table, s)?;
    Ok(())
}

fn cmd_presets(args: &PresetArgs) -> Result<(), CliError> {
    let mut s = JsonObject::new();
    s.set("count", Value::Int(Preset::ALL.len() as u64));
    let rows = Preset::ALL
        .iter()
        .map(|p| vec![Cell::Text(p.name().into()), Cell::Text(p.describe().into())])
        .collect();
    let table = Table { headers: vec!["name", "description"], rows };
    emit(&args.output, table, s)?;
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("GASWALL_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Invalid(format!("GASWALL_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(format!("cannot configure threads: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Equilibrium(a) => cmd_equilibrium(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Identities(a) => cmd_identities(a),
        Command::Mc(a) => cmd_mc(a),
        Command::Presets(a) => cmd_presets(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::IdentityFailure) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

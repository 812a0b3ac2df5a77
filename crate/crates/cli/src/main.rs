//! `lightspeed`: quantum limits on measuring the speed of light with cavity
//! light, and the space-time curvature that light produces.
//!
//! ```sh
//! lightspeed bounds --config configs/default.json
//! lightspeed field-map --mode 011 --slice xi=1.5 --grid 48x48 --out slice.csv
//! lightspeed validate --n 1e26 --strict
//! ```

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lightspeed::bounds::{
    comparison_bounds, solve_tradeoff, table1, tradeoff_curves, CoherentFormula, Probe,
};
use lightspeed::grid::{AxisSpec, GridSpec};
use lightspeed::metric::{g_integrals, metric_011, metric_grid, LightSpeed};
use lightspeed::modes::{fundamental_sources, ModeKind};
use lightspeed::quadrature::{kernel, mc_oracle_vector};
use lightspeed::resonance::{average_epsilon, epsilon_field, frequency_shift, Averaging, LengthDefinition};
use lightspeed::setup::{derive_params, validate_regime, ExperimentConfig};
use lightspeed_cli::{
    emit_fieldmap, emit_report, emit_table, emit_tradeoff, write_output, CliError, Format,
    Provenance, RunConfig, TradeoffPoint, EXIT_INVALID_CONFIG, EXIT_QUADRATURE, EXIT_REGIME,
};

#[derive(Parser)]
#[command(name = "lightspeed", version)]
#[command(about = "Speed-of-light estimation bounds and the metric perturbation of cavity light")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; the 1 km, 500 nm, F = 1e4 cavity when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for Monte Carlo checks (default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Exit with status 3 when a physical-regime check fails.
    #[arg(long, global = true)]
    strict: bool,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Trade-off solutions and comparison bounds as a seven-entry table.
    Bounds,
    /// Metric perturbation and light-speed deviation on a grid.
    FieldMap(FieldMapArgs),
    /// Quantum bound and back-action along a photon-number sweep.
    Tradeoff(TradeoffArgs),
    /// Relative shift of the cavity resonance.
    FrequencyShift(ShiftArgs),
    /// Physical-regime checks at a photon number.
    Validate(PhotonArgs),
    /// Kernel, source integrals and metric at one point.
    Kernel(KernelArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    /// The (0,1,1) mode.
    #[value(name = "011")]
    Fundamental,
    /// The (0,1,M) mode with M from the config.
    #[value(name = "01m")]
    Axial,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum VariantArg {
    Coordinate,
    Measured,
}

#[derive(Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Axis {
    Xi,
    Eta,
    Zeta,
}

/// `axis=value`, e.g. `xi=1.5`.
#[derive(Clone, Copy, Serialize)]
struct Slice {
    axis: Axis,
    value: f64,
}

impl FromStr for Slice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (axis, value) = s.split_once('=').ok_or("expected axis=value")?;
        let axis = match axis.trim() {
            "xi" => Axis::Xi,
            "eta" => Axis::Eta,
            "zeta" => Axis::Zeta,
            other => return Err(format!("unknown axis {other}")),
        };
        let value: f64 = value.trim().parse().map_err(|e| format!("{e}"))?;
        if !value.is_finite() {
            return Err("slice position must be finite".into());
        }
        Ok(Self { axis, value })
    }
}

/// Node counts `N`, `NxN` or `NxNxN`.
#[derive(Clone, Serialize)]
struct Counts(Vec<usize>);

impl FromStr for Counts {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let counts = s
            .split('x')
            .map(|c| c.trim().parse::<usize>().map_err(|e| format!("{c}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if counts.is_empty() || counts.len() > 3 {
            return Err("expected N, NxN or NxNxN".into());
        }
        Ok(Self(counts))
    }
}

/// `xi,eta,zeta`.
#[derive(Clone, Copy, Serialize)]
struct Point([f64; 3]);

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        match values[..] {
            [xi, eta, zeta] if values.iter().all(|v| v.is_finite()) => Ok(Self([xi, eta, zeta])),
            _ => Err("expected three finite numbers xi,eta,zeta".into()),
        }
    }
}

#[derive(Args, Serialize)]
struct FieldMapArgs {
    #[arg(long, value_enum, default_value = "011")]
    mode: ModeArg,
    /// Node counts per axis over the configured ranges.
    #[arg(long)]
    grid: Option<Counts>,
    /// Fix one axis, e.g. `xi=1.5`.
    #[arg(long)]
    slice: Option<Slice>,
    #[arg(long, value_enum, default_value = "coordinate")]
    lightspeed: VariantArg,
    /// Multiply by the amplitude P of the configured photon number.
    #[arg(long)]
    absolute: bool,
}

#[derive(Args, Serialize)]
struct TradeoffArgs {
    #[arg(long, default_value_t = 1.0)]
    n_min: f64,
    #[arg(long, default_value_t = 1e50)]
    n_max: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum DefinitionArg {
    LightSignal,
    RigidRods,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum AveragingArg {
    CenterLine,
    Volume,
}

#[derive(Args, Serialize)]
struct ShiftArgs {
    /// Photon number; the config value when absent.
    #[arg(long)]
    n: Option<f64>,
    #[arg(long, value_enum, default_value = "light-signal")]
    definition: DefinitionArg,
    #[arg(long, value_enum, default_value = "center-line")]
    averaging: AveragingArg,
}

#[derive(Args, Serialize)]
struct PhotonArgs {
    /// Photon number; the config value when absent.
    #[arg(long)]
    n: Option<f64>,
}

#[derive(Args, Serialize)]
struct KernelArgs {
    /// `xi,eta,zeta` in units of L/pi.
    #[arg(long, allow_hyphen_values = true)]
    point: Point,
    /// Monte Carlo samples for an independent check (0 skips it).
    #[arg(long, default_value_t = 0)]
    samples: usize,
}

/// An error with the process exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            code,
            error: error.into(),
        }
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Self::new(e.exit_code(), e)
    }
}

impl From<lightspeed::Error> for Failure {
    fn from(e: lightspeed::Error) -> Self {
        CliError::from(e).into()
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::reference(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(tol) = cli.tolerance {
        config.quadrature.tolerance = tol;
    }
    config.validate()?;
    let out = cli.out.clone().or_else(|| config.output.clone());
    let format = cli.format.or(config.format);

    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Failure::new(1, anyhow!("cannot start worker threads: {e}")))?;

    let command = serde_json::to_value(&cli.command).map_err(|e| Failure::new(1, e))?;
    let provenance = Provenance::new(&config, command);
    let experiment = config.experiment()?;
    let ctx = Context {
        config: &config,
        experiment,
        provenance: &provenance,
        strict: cli.strict,
    };

    let (text, quadrature_ok) = match &cli.command {
        Command::Bounds => (ctx.bounds(format.unwrap_or(Format::Text))?, true),
        Command::FieldMap(args) => ctx.field_map(args, format.unwrap_or(Format::Csv))?,
        Command::Tradeoff(args) => (ctx.tradeoff(args, format.unwrap_or(Format::Csv))?, true),
        Command::FrequencyShift(args) => (ctx.shift(args, format.unwrap_or(Format::Text))?, true),
        Command::Validate(args) => (ctx.validate(args, format.unwrap_or(Format::Text))?, true),
        Command::Kernel(args) => ctx.kernel(args, format.unwrap_or(Format::Text))?,
    };
    write_output(out.as_deref(), &text)?;
    if !quadrature_ok {
        return Err(Failure::new(
            EXIT_QUADRATURE,
            anyhow!("quadrature missed the tolerance {:e}; output written anyway", config.quadrature.tolerance),
        ));
    }
    Ok(())
}

struct Context<'a> {
    config: &'a RunConfig,
    experiment: ExperimentConfig,
    provenance: &'a Provenance,
    strict: bool,
}

impl Context<'_> {
    fn photons(&self, flag: Option<f64>) -> Outcome<f64> {
        let n = flag.or(self.config.photons).ok_or_else(|| {
            Failure::new(EXIT_INVALID_CONFIG, anyhow!("no photon number: pass --n or set \"photons\""))
        })?;
        if !(n.is_finite() && n >= 0.0) {
            return Err(Failure::new(
                EXIT_INVALID_CONFIG,
                anyhow!("photon number must be finite and non-negative, got {n}"),
            ));
        }
        Ok(n)
    }

    /// Warn about regime violations; fail under `--strict`.
    fn check_regime(&self, config: &ExperimentConfig, photons: f64, what: &str) -> Outcome {
        let report = validate_regime(config, photons);
        for msg in &report.messages {
            log::warn!("{what}: {msg}");
        }
        if self.strict && !report.all_ok() {
            return Err(Failure::new(
                EXIT_REGIME,
                anyhow!("{what}: physical-regime check failed: {}", report.messages.join("; ")),
            ));
        }
        Ok(())
    }

    fn bounds(&self, format: Format) -> Outcome<String> {
        let mut table = table1(&self.experiment)?;
        table.comparison = comparison_bounds(&self.experiment.lossless(), self.config.l_qg)?;
        let lossless = self.experiment.lossless();
        self.check_regime(&lossless, table.optimal_lossless.n_opt, "optimal lossless")?;
        self.check_regime(&lossless, table.coherent_lossless.n_opt, "coherent lossless")?;
        if let Some(s) = &table.optimal_lossy {
            self.check_regime(&self.experiment, s.n_opt, "optimal lossy")?;
        }
        if let Some(s) = &table.coherent_lossy {
            self.check_regime(&self.experiment, s.n_opt, "coherent lossy")?;
        }
        Ok(emit_table(&table, format, self.provenance)?)
    }

    fn field_grid(&self, args: &FieldMapArgs) -> Outcome<GridSpec> {
        let mut grid = self.config.grid.unwrap_or_default();
        let bad = |msg: String| Failure::new(EXIT_INVALID_CONFIG, anyhow!(msg));
        let mut free: Vec<&mut AxisSpec> = Vec::new();
        let sliced = args.slice.map(|s| s.axis);
        for (axis, spec) in [
            (Axis::Xi, &mut grid.xi),
            (Axis::Eta, &mut grid.eta),
            (Axis::Zeta, &mut grid.zeta),
        ] {
            if sliced == Some(axis) {
                *spec = AxisSpec::fixed(args.slice.expect("slice is set").value);
            } else {
                free.push(spec);
            }
        }
        if let Some(Counts(counts)) = &args.grid {
            let counts: Vec<usize> = match counts.len() {
                1 => vec![counts[0]; free.len()],
                n if n == free.len() => counts.clone(),
                n => return Err(bad(format!("--grid gives {n} counts for {} free axes", free.len()))),
            };
            for (spec, count) in free.into_iter().zip(counts) {
                if count == 1 && spec.min != spec.max {
                    return Err(bad("a single-node axis needs --slice".into()));
                }
                spec.count = count;
            }
        }
        grid.validate()?;
        Ok(grid)
    }

    fn field_map(&self, args: &FieldMapArgs, format: Format) -> Outcome<(String, bool)> {
        let grid = self.field_grid(args)?;
        let kind = match args.mode {
            ModeArg::Fundamental => ModeKind::Fundamental,
            ModeArg::Axial => ModeKind::Axial {
                m: self.experiment.mode.lz,
            },
        };
        let variant = match args.lightspeed {
            VariantArg::Coordinate => LightSpeed::Coordinate,
            VariantArg::Measured => LightSpeed::Measured,
        };
        let mut map = metric_grid(kind, &grid, &self.config.quadrature, variant)?;
        if args.absolute {
            let n = self.photons(None)?;
            self.check_regime(&self.experiment, n, "field map")?;
            let params = derive_params(&self.experiment)?;
            map = map.scaled(params.amplitude(n));
        }
        let ok = map.converged();
        Ok((emit_fieldmap(&map, format, self.provenance)?, ok))
    }

    fn tradeoff(&self, args: &TradeoffArgs, format: Format) -> Outcome<String> {
        let bad = |msg: String| Failure::new(EXIT_INVALID_CONFIG, anyhow!(msg));
        if !(args.n_min > 0.0 && args.n_max > args.n_min && args.n_max.is_finite()) {
            return Err(bad(format!("need 0 < n_min < n_max, got {} and {}", args.n_min, args.n_max)));
        }
        if args.points < 2 {
            return Err(bad("need at least two sweep points".into()));
        }
        let params = derive_params(&self.experiment)?;
        let (lo, hi) = (args.n_min.log10(), args.n_max.log10());
        let photons: Vec<f64> = (0..args.points)
            .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (args.points - 1) as f64))
            .collect();
        let probes = [
            Probe::OptimalSuperposition,
            Probe::Coherent(CoherentFormula::Exact),
            Probe::Coherent(CoherentFormula::Asymptotic),
        ];
        let curves = probes
            .iter()
            .map(|p| tradeoff_curves(&params, *p, &photons))
            .collect::<Result<Vec<_>, _>>()?;
        let curve: Vec<TradeoffPoint> = (0..photons.len())
            .map(|k| TradeoffPoint {
                n: photons[k],
                optimal: curves[0][k].1,
                coherent: curves[1][k].1,
                coherent_asymptotic: curves[2][k].1,
                backaction: curves[0][k].2,
            })
            .collect();
        let solutions = probes
            .iter()
            .map(|p| solve_tradeoff(&params, *p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(emit_tradeoff(&curve, &solutions, format, self.provenance)?)
    }

    fn shift(&self, args: &ShiftArgs, format: Format) -> Outcome<String> {
        #[derive(Serialize)]
        struct Shift {
            photons: f64,
            definition: LengthDefinition,
            averaging: Averaging,
            /// Mean of epsilon per unit `P M`.
            mean_epsilon: f64,
            delta_omega_over_omega: f64,
        }
        let n = self.photons(args.n)?;
        self.check_regime(&self.experiment, n, "frequency shift")?;
        let definition = match args.definition {
            DefinitionArg::LightSignal => LengthDefinition::LightSignal,
            DefinitionArg::RigidRods => LengthDefinition::RigidRods,
        };
        let averaging = match args.averaging {
            AveragingArg::CenterLine => Averaging::CenterLine,
            AveragingArg::Volume => Averaging::Volume,
        };
        let spec = &self.config.quadrature;
        let result = Shift {
            photons: n,
            definition,
            averaging,
            mean_epsilon: average_epsilon(averaging, spec)?,
            delta_omega_over_omega: frequency_shift(&self.experiment, n, spec, definition, averaging)?,
        };
        Ok(emit_report(&result, format, self.provenance)?)
    }

    fn validate(&self, args: &PhotonArgs, format: Format) -> Outcome<String> {
        let n = self.photons(args.n)?;
        let report = validate_regime(&self.experiment, n);
        let text = emit_report(&report, format, self.provenance)?;
        if self.strict && !report.all_ok() {
            write_output(None, &text)?;
            return Err(Failure::new(
                EXIT_REGIME,
                anyhow!("physical-regime check failed: {}", report.messages.join("; ")),
            ));
        }
        for msg in &report.messages {
            log::warn!("{msg}");
        }
        Ok(text)
    }

    fn kernel(&self, args: &KernelArgs, format: Format) -> Outcome<(String, bool)> {
        #[derive(Serialize)]
        struct Estimate {
            value: f64,
            std_error: f64,
        }
        #[derive(Serialize)]
        struct KernelReport {
            point: [f64; 3],
            kernel: f64,
            g: [f64; 5],
            g_error: [f64; 5],
            h: [f64; 5],
            trace: f64,
            epsilon: f64,
            /// Monte Carlo estimates of the five g integrals.
            #[serde(skip_serializing_if = "Option::is_none")]
            oracle: Option<Vec<Estimate>>,
        }
        let point = args.point.0;
        let spec = &self.config.quadrature;
        let g = g_integrals(point, spec)?;
        let h = metric_011(point, spec)?;
        let eps = epsilon_field(point, spec)?;
        let oracle = if args.samples > 0 {
            let est = mc_oracle_vector(&fundamental_sources, point, args.samples, self.config.seed)?;
            Some(
                est.iter()
                    .map(|e| Estimate {
                        value: e.value,
                        std_error: e.std_error,
                    })
                    .collect(),
            )
        } else {
            None
        };
        let report = KernelReport {
            point,
            kernel: kernel(point[0], point[1], point[2])?,
            g: g.values(),
            g_error: g.error,
            h: [h.h00, h.h11, h.h22, h.h33, h.h23],
            trace: h.trace(),
            epsilon: eps.value[0],
            oracle,
        };
        let ok = g.converged && h.converged && eps.converged;
        Ok((emit_report(&report, format, self.provenance)?, ok))
    }
}

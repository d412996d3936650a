//! Command-line front end: key=value configuration with flag overrides,
//! experiment dispatch, and artifact emission into an output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{evolve, Integrator, SimulationConfig, REFERENCE_TAU};
use crate::error::{Error, Result};
use crate::experiments::{
    run_comparison, run_dynamics2d, run_sweep, DynamicsCase, ErrorTarget, InitialCondition,
    SweepAxis, SweepSpec,
};
use crate::grid::Grid;
use crate::io::{atomic_write, dump_field, emit_csv};
use crate::regularization::{RegKind, Regularization};

pub const EPSILON_SWEEP_VALUES: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
pub const TAU_SWEEP_VALUES: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

#[derive(Parser, Debug)]
#[command(
    name = "snlse",
    version,
    about = "Pseudospectral solvers for the nonlinear Schrödinger equation with a singular power nonlinearity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve one configuration and dump the final field.
    Evolve(RawArgs),
    /// Model-error sweep over the regularization parameter ε.
    SweepEps(RawArgs),
    /// Scheme-error sweep over the time step τ.
    SweepTau(RawArgs),
    /// Compare the three regularizations at one fixed ε.
    CompareReg(RawArgs),
    /// 2D scenarios (gausson, vortex-pair, vortex-dipole) with vortex tracking.
    Dynamics2d(RawArgs),
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Evolve(_) => CommandKind::Evolve,
            Command::SweepEps(_) => CommandKind::SweepEps,
            Command::SweepTau(_) => CommandKind::SweepTau,
            Command::CompareReg(_) => CommandKind::CompareReg,
            Command::Dynamics2d(_) => CommandKind::Dynamics2d,
        }
    }

    fn raw(&self) -> &RawArgs {
        match self {
            Command::Evolve(r)
            | Command::SweepEps(r)
            | Command::SweepTau(r)
            | Command::CompareReg(r)
            | Command::Dynamics2d(r) => r,
        }
    }
}

/// Raw string-valued arguments; values from a config file and from flags are
/// merged, then validated in one place so every error names its key.
#[derive(Args, Debug, Default, Clone)]
pub struct RawArgs {
    /// Plain UTF-8 key=value file, '#' starts a comment; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    /// Regularization kind: exact | ler | shift | rational.
    #[arg(long)]
    pub reg: Option<String>,
    /// Polynomial degree of the local regularization.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Integrator: tsfp | eifp.
    #[arg(long)]
    pub integrator: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t_final: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Nodes per axis.
    #[arg(long = "N", allow_hyphen_values = true)]
    pub nodes: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub dim: Option<String>,
    /// Initial data: gaussian | gausson | vortex-pair | vortex-dipole.
    #[arg(long)]
    pub ic: Option<String>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    /// Comma-separated snapshot times.
    #[arg(long, allow_hyphen_values = true)]
    pub snapshots: Option<String>,
    /// Run 2D cases at the fine grids instead of desk scale.
    #[arg(long = "paper-scale", num_args = 0..=1, default_missing_value = "true")]
    pub paper_scale: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Evolve,
    SweepEps,
    SweepTau,
    CompareReg,
    Dynamics2d,
}

impl CommandKind {
    pub fn token(&self) -> &'static str {
        match self {
            CommandKind::Evolve => "evolve",
            CommandKind::SweepEps => "sweep-eps",
            CommandKind::SweepTau => "sweep-tau",
            CommandKind::CompareReg => "compare-reg",
            CommandKind::Dynamics2d => "dynamics2d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcToken {
    Gaussian,
    Gausson,
    VortexPair,
    VortexDipole,
}

impl IcToken {
    pub fn token(&self) -> &'static str {
        match self {
            IcToken::Gaussian => "gaussian",
            IcToken::Gausson => "gausson",
            IcToken::VortexPair => "vortex-pair",
            IcToken::VortexDipole => "vortex-dipole",
        }
    }

    fn parse(s: &str) -> Result<IcToken> {
        match s {
            "gaussian" => Ok(IcToken::Gaussian),
            "gausson" => Ok(IcToken::Gausson),
            "vortex-pair" => Ok(IcToken::VortexPair),
            "vortex-dipole" => Ok(IcToken::VortexDipole),
            other => Err(Error::InvalidParameter {
                name: "ic",
                message: format!(
                    "`{other}` is not one of gaussian, gausson, vortex-pair, vortex-dipole"
                ),
            }),
        }
    }

    pub fn initial(&self) -> InitialCondition {
        match self {
            IcToken::Gaussian => InitialCondition::Gaussian1d,
            IcToken::Gausson => InitialCondition::Gausson2d,
            IcToken::VortexPair => InitialCondition::VortexPair2d,
            IcToken::VortexDipole => InitialCondition::VortexDipole2d,
        }
    }
}

/// The fully resolved configuration; `resolved.cfg` is its echo.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: CommandKind,
    pub lambda: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub reg: RegKind,
    pub degree: usize,
    pub integrator: Integrator,
    pub tau: f64,
    pub t_final: f64,
    pub a: f64,
    pub b: f64,
    pub nodes: usize,
    pub dim: usize,
    pub ic: IcToken,
    pub out_dir: PathBuf,
    pub snapshots: Vec<f64>,
    pub paper_scale: bool,
}

const KEYS: [&str; 16] = [
    "lambda", "alpha", "epsilon", "reg", "n", "integrator", "tau", "T", "a", "b", "N", "dim",
    "ic", "out-dir", "snapshots", "paper-scale",
];

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidParameter {
                name: "config",
                message: format!("line {} is not key=value: `{raw_line}`", lineno + 1),
            });
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::InvalidParameter {
                name: "config",
                message: format!("unknown key `{key}` on line {}", lineno + 1),
            });
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct Resolver {
    merged: BTreeMap<String, String>,
}

impl Resolver {
    fn new(raw: &RawArgs) -> Result<Resolver> {
        let mut merged = match &raw.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let overrides: [(&str, &Option<String>); 15] = [
            ("lambda", &raw.lambda),
            ("alpha", &raw.alpha),
            ("epsilon", &raw.epsilon),
            ("reg", &raw.reg),
            ("n", &raw.n),
            ("integrator", &raw.integrator),
            ("tau", &raw.tau),
            ("T", &raw.t_final),
            ("a", &raw.a),
            ("b", &raw.b),
            ("N", &raw.nodes),
            ("dim", &raw.dim),
            ("ic", &raw.ic),
            ("snapshots", &raw.snapshots),
            ("paper-scale", &raw.paper_scale),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                merged.insert(key.to_string(), v.clone());
            }
        }
        if let Some(dir) = &raw.out_dir {
            merged.insert("out-dir".to_string(), dir.to_string_lossy().into_owned());
        }
        Ok(Resolver { merged })
    }

    fn f64(&self, key: &'static str, default: f64) -> Result<f64> {
        match self.merged.get(key) {
            None => Ok(default),
            Some(s) => s.parse::<f64>().map_err(|_| Error::InvalidParameter {
                name: key,
                message: format!("`{s}` is not a number"),
            }),
        }
    }

    fn usize(&self, key: &'static str, default: usize) -> Result<usize> {
        match self.merged.get(key) {
            None => Ok(default),
            Some(s) => s.parse::<usize>().map_err(|_| Error::InvalidParameter {
                name: key,
                message: format!("`{s}` is not a nonnegative integer"),
            }),
        }
    }

    fn str(&self, key: &str, default: &str) -> String {
        self.merged.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    fn bool(&self, key: &'static str, default: bool) -> Result<bool> {
        match self.merged.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(s) => Err(Error::InvalidParameter {
                name: key,
                message: format!("`{s}` is not true or false"),
            }),
        }
    }
}

fn parse_snapshots(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let t: f64 = part.parse().map_err(|_| Error::InvalidParameter {
            name: "snapshots",
            message: format!("`{part}` is not a number"),
        })?;
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidParameter {
                name: "snapshots",
                message: format!("snapshot time {t} must be finite and nonnegative"),
            });
        }
        out.push(t);
    }
    Ok(out)
}

/// Per-command defaults, following the experiment protocols.
struct Defaults {
    reg: &'static str,
    epsilon: f64,
    tau: f64,
    t_final: f64,
    dim: usize,
    ic: &'static str,
    alpha: f64,
    snapshots: &'static str,
}

fn defaults_for(kind: CommandKind) -> Defaults {
    let base = Defaults {
        reg: "shift",
        epsilon: 1e-4,
        tau: 1e-3,
        t_final: 1.0,
        dim: 1,
        ic: "gaussian",
        alpha: -0.2,
        snapshots: "",
    };
    match kind {
        CommandKind::Evolve => base,
        CommandKind::SweepEps => Defaults { reg: "rational", tau: REFERENCE_TAU, ..base },
        CommandKind::SweepTau => base,
        CommandKind::CompareReg => Defaults { epsilon: 1e-3, tau: REFERENCE_TAU, ..base },
        CommandKind::Dynamics2d => Defaults {
            dim: 2,
            ic: "vortex-pair",
            alpha: -0.1,
            t_final: 2.0,
            snapshots: "0,0.5,1,1.5,2",
            ..base
        },
    }
}

pub fn resolve(kind: CommandKind, raw: &RawArgs) -> Result<CliConfig> {
    let r = Resolver::new(raw)?;
    let d = defaults_for(kind);

    let lambda = r.f64("lambda", 1.0)?;
    let alpha = r.f64("alpha", d.alpha)?;
    let epsilon = r.f64("epsilon", d.epsilon)?;
    let degree = r.usize("n", 5)?;
    let tau = r.f64("tau", d.tau)?;
    let t_final = r.f64("T", d.t_final)?;
    let a = r.f64("a", -16.0)?;
    let b = r.f64("b", 16.0)?;
    let nodes = r.usize("N", 512)?;
    let dim = r.usize("dim", d.dim)?;
    let ic = IcToken::parse(&r.str("ic", d.ic))?;
    let out_dir = PathBuf::from(r.str("out-dir", "snlse-out"));
    let snapshots = parse_snapshots(&r.str("snapshots", d.snapshots))?;
    let paper_scale = r.bool("paper-scale", false)?;

    let reg_token = r.str("reg", d.reg);
    let reg = match reg_token.as_str() {
        "exact" => RegKind::Exact,
        "ler" => RegKind::Ler { degree },
        "shift" => RegKind::GlobalShift,
        "rational" => RegKind::GlobalRational,
        other => {
            return Err(Error::InvalidParameter {
                name: "reg",
                message: format!("`{other}` is not one of exact, ler, shift, rational"),
            })
        }
    };
    let integrator = match r.str("integrator", "tsfp").as_str() {
        "tsfp" => Integrator::Tsfp,
        "eifp" => Integrator::Eifp,
        other => {
            return Err(Error::InvalidParameter {
                name: "integrator",
                message: format!("`{other}` is not one of tsfp, eifp"),
            })
        }
    };

    let alpha_ok =
        alpha > -1.0 / 3.0 && alpha < 0.0 || (kind == CommandKind::Dynamics2d && alpha == 1.0);
    if !alpha_ok {
        return Err(Error::InvalidParameter {
            name: "alpha",
            message: format!(
                "{alpha} is outside (-1/3, 0); alpha = 1 is allowed only for dynamics2d"
            ),
        });
    }
    // construct the kernel once so epsilon and the degree are validated with
    // the same messages the library uses
    if !(kind == CommandKind::Dynamics2d && alpha == 1.0) && reg != RegKind::Exact {
        Regularization::new(reg, alpha, epsilon)?;
    }

    if !(1..=2).contains(&dim) {
        return Err(Error::InvalidParameter {
            name: "dim",
            message: format!("{dim} is not 1 or 2"),
        });
    }
    let ic_dim = ic.initial().dim();
    if ic_dim != dim {
        return Err(Error::InvalidParameter {
            name: "ic",
            message: format!("{} is {ic_dim}-dimensional but dim = {dim}", ic.token()),
        });
    }
    if kind == CommandKind::Dynamics2d && dim != 2 {
        return Err(Error::InvalidParameter {
            name: "dim",
            message: "dynamics2d runs in two dimensions".into(),
        });
    }
    if matches!(kind, CommandKind::SweepEps | CommandKind::SweepTau | CommandKind::CompareReg) {
        let h = (b - a) / nodes as f64;
        if !h.is_finite() || (h - 1.0 / 16.0).abs() > 1e-9 / 16.0 {
            return Err(Error::InvalidParameter {
                name: "N",
                message: format!(
                    "sweeps run on the reference grid: N must equal 16*(b-a) = {}, got {nodes}",
                    16.0 * (b - a)
                ),
            });
        }
        if reg == RegKind::Exact {
            return Err(Error::InvalidParameter {
                name: "reg",
                message: "sweeps compare regularized kernels; the exact kernel has no ε".into(),
            });
        }
    }

    let mut cfg = CliConfig {
        command: kind,
        lambda,
        alpha,
        epsilon,
        reg,
        degree,
        integrator,
        tau,
        t_final,
        a,
        b,
        nodes,
        dim,
        ic,
        out_dir,
        snapshots,
        paper_scale,
    };
    if kind == CommandKind::Dynamics2d {
        // the case pins λ, the window, and the grid; echo the effective values
        let case = dynamics_case(cfg.ic)?;
        let (wa, wb) = match case {
            DynamicsCase::Gausson => (-8.0, 8.0),
            _ => (-16.0, 16.0),
        };
        cfg.lambda = if case == DynamicsCase::Gausson { -10.0 } else { 1.0 };
        cfg.a = wa;
        cfg.b = wb;
        cfg.nodes = match (case, cfg.paper_scale) {
            (DynamicsCase::Gausson, false) => 256,
            (_, false) => 512,
            (_, true) => 1024,
        };
        cfg.tau = 1e-3;
        cfg.t_final = cfg.snapshots.iter().cloned().fold(0.0, f64::max);
        if cfg.snapshots.is_empty() {
            return Err(Error::InvalidParameter {
                name: "snapshots",
                message: "dynamics2d needs at least one snapshot time".into(),
            });
        }
    }
    Ok(cfg)
}

/// Parse a full argv (including the binary name) into a resolved config.
pub fn parse_config<I, S>(argv: I) -> Result<CliConfig>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::InvalidParameter {
        name: "argv",
        message: e.to_string(),
    })?;
    resolve(cli.command.kind(), cli.command.raw())
}

impl CliConfig {
    /// Deterministic key=value echo, one line per key in a fixed order.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command={}", self.command.token());
        let _ = writeln!(s, "lambda={}", self.lambda);
        let _ = writeln!(s, "alpha={}", self.alpha);
        let _ = writeln!(s, "epsilon={}", self.epsilon);
        let _ = writeln!(s, "reg={}", self.reg.token());
        let _ = writeln!(s, "n={}", self.degree);
        let _ = writeln!(s, "integrator={}", self.integrator.token());
        let _ = writeln!(s, "tau={}", self.tau);
        let _ = writeln!(s, "T={}", self.t_final);
        let _ = writeln!(s, "a={}", self.a);
        let _ = writeln!(s, "b={}", self.b);
        let _ = writeln!(s, "N={}", self.nodes);
        let _ = writeln!(s, "dim={}", self.dim);
        let _ = writeln!(s, "ic={}", self.ic.token());
        let _ = writeln!(s, "out-dir={}", self.out_dir.display());
        let snapshots: Vec<String> = self.snapshots.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(s, "snapshots={}", snapshots.join(","));
        let _ = writeln!(s, "paper-scale={}", self.paper_scale);
        s
    }

    fn grid(&self) -> Result<Grid> {
        match self.dim {
            1 => Grid::line(self.a, self.b, self.nodes),
            _ => Grid::square(self.a, self.b, self.nodes),
        }
    }

    fn regularization(&self) -> Result<Regularization> {
        match self.reg {
            RegKind::Exact => Regularization::exact(self.alpha),
            kind => Regularization::new(kind, self.alpha, self.epsilon),
        }
    }
}

fn dynamics_case(ic: IcToken) -> Result<DynamicsCase> {
    match ic {
        IcToken::Gausson => Ok(DynamicsCase::Gausson),
        IcToken::VortexPair => Ok(DynamicsCase::VortexPair),
        IcToken::VortexDipole => Ok(DynamicsCase::VortexDipole),
        IcToken::Gaussian => Err(Error::InvalidParameter {
            name: "ic",
            message: "dynamics2d cases are gausson, vortex-pair, vortex-dipole".into(),
        }),
    }
}

fn run_resolved(cfg: &CliConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)?;
    atomic_write(&cfg.out_dir.join("resolved.cfg"), cfg.render().as_bytes())?;
    let cache_dir = cfg.out_dir.join("ref-cache");
    match cfg.command {
        CommandKind::Evolve => {
            let sim = SimulationConfig {
                lambda: cfg.lambda,
                reg: cfg.regularization()?,
                integrator: cfg.integrator,
                tau: cfg.tau,
                t_final: cfg.t_final,
                grid: cfg.grid()?,
                initial: cfg.ic.initial(),
            };
            let evolution = evolve(&sim, &cfg.snapshots)?;
            for (i, (_, field)) in evolution.snapshots.iter().enumerate() {
                dump_field(field, &cfg.out_dir.join(format!("snapshot-{i}.fld")))?;
            }
            dump_field(&evolution.final_field, &cfg.out_dir.join("final.fld"))?;
        }
        CommandKind::SweepEps | CommandKind::SweepTau => {
            let (axis, values, target) = if cfg.command == CommandKind::SweepEps {
                (
                    SweepAxis::Epsilon { tau: cfg.tau },
                    EPSILON_SWEEP_VALUES.to_vec(),
                    ErrorTarget::ModelVsSingular,
                )
            } else {
                (
                    SweepAxis::Tau { epsilon: cfg.epsilon },
                    TAU_SWEEP_VALUES.to_vec(),
                    ErrorTarget::SchemeVsRegularized,
                )
            };
            let spec = SweepSpec {
                lambda: cfg.lambda,
                alpha: cfg.alpha,
                window: (cfg.a, cfg.b),
                initial: cfg.ic.initial(),
                t_final: cfg.t_final,
                axis,
                values,
                regs: vec![cfg.reg],
                target,
                integrator: cfg.integrator,
            };
            let table = run_sweep(&spec, &cache_dir)?;
            let name = format!("{}.csv", cfg.command.token());
            emit_csv(&table, &cfg.out_dir.join(name))?;
        }
        CommandKind::CompareReg => {
            let table = run_comparison(
                cfg.lambda,
                cfg.alpha,
                (cfg.a, cfg.b),
                cfg.ic.initial(),
                cfg.t_final,
                cfg.epsilon,
                cfg.degree,
                &cache_dir,
            )?;
            emit_csv(&table, &cfg.out_dir.join("compare-reg.csv"))?;
        }
        CommandKind::Dynamics2d => {
            let case = dynamics_case(cfg.ic)?;
            let reports = run_dynamics2d(case, cfg.alpha, cfg.paper_scale, Some(&cfg.snapshots))?;
            let stamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            let mut csv = format!("# generated-at-unix {stamp}\ntime,x,y,charge\n");
            for (i, report) in reports.iter().enumerate() {
                dump_field(&report.field, &cfg.out_dir.join(format!("snapshot-{i}.fld")))?;
                for v in &report.vortices {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{}",
                        report.time, v.position[0], v.position[1], v.charge
                    );
                }
            }
            atomic_write(&cfg.out_dir.join("vortices.csv"), csv.as_bytes())?;
        }
    }
    Ok(())
}

/// Resolve and execute a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let cfg = resolve(cli.command.kind(), cli.command.raw())?;
    run_resolved(&cfg)
}

//! Initial-condition factory, convergence sweeps over ε and τ with fitted
//! log-log slopes, and the 2D dynamics scenarios with vortex tracking.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dynamics::{
    evolve, reference_grid, reference_solution, Integrator, ReferenceProblem, ReferenceTarget,
    SimulationConfig, REFERENCE_TAU, SINGULAR_EPSILON,
};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::observables::{error_norms, locate_vortices, ErrorReport, Vortex};
use crate::regularization::{RegKind, Regularization};

#[derive(Clone)]
pub enum InitialCondition {
    /// Normalized 1D Gaussian π^{−1/4} e^{−x²/2}.
    Gaussian1d,
    /// Radial bump e^{−(x²+y²)}.
    Gausson2d,
    /// Two like-signed vortices at (±0.5, 0) under a Gaussian envelope.
    VortexPair2d,
    /// A vortex and an antivortex at (±0.5, 0).
    VortexDipole2d,
    Custom {
        dim: usize,
        /// Stable name, part of reference cache keys.
        tag: String,
        f: Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>,
    },
}

impl fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InitialCondition({})", self.tag())
    }
}

impl InitialCondition {
    pub fn dim(&self) -> usize {
        match self {
            InitialCondition::Gaussian1d => 1,
            InitialCondition::Custom { dim, .. } => *dim,
            _ => 2,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            InitialCondition::Gaussian1d => "gaussian1d".into(),
            InitialCondition::Gausson2d => "gausson2d".into(),
            InitialCondition::VortexPair2d => "vortexpair2d".into(),
            InitialCondition::VortexDipole2d => "vortexdipole2d".into(),
            InitialCondition::Custom { tag, .. } => format!("custom:{tag}"),
        }
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            InitialCondition::Gaussian1d => Complex64::new(
                std::f64::consts::PI.powf(-0.25) * (-x[0] * x[0] / 2.0).exp(),
                0.0,
            ),
            InitialCondition::Gausson2d => {
                Complex64::new((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
            }
            InitialCondition::VortexPair2d => {
                let env = (-(x[0] * x[0] + x[1] * x[1])).exp();
                Complex64::new(x[0] - 0.5, x[1]) * Complex64::new(x[0] + 0.5, x[1]) * env
            }
            InitialCondition::VortexDipole2d => {
                let env = (-(x[0] * x[0] + x[1] * x[1])).exp();
                Complex64::new(x[0] - 0.5, x[1]) * Complex64::new(x[0] + 0.5, -x[1]) * env
            }
            InitialCondition::Custom { f, .. } => f(x),
        }
    }

    /// Pointwise evaluation at the grid nodes.
    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        if grid.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: grid.dim() });
        }
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.len() {
            let v = self.eval(&grid.coords(j));
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "ic",
                    message: format!("initial data is not finite at node {j}"),
                });
            }
            values.push(v);
        }
        Field::new(grid.clone(), values)
    }
}

/// Which parameter the sweep varies; the other is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepAxis {
    Epsilon { tau: f64 },
    Tau { epsilon: f64 },
}

/// Which reference the error is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorTarget {
    /// Regularized model vs the near-singular reference, at the protocol τ.
    ModelVsSingular,
    /// Scheme vs a reference with the same regularization and ε.
    SchemeVsRegularized,
    /// Full run vs the near-singular reference.
    TotalVsSingular,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub lambda: f64,
    pub alpha: f64,
    /// Domain window shared by all axes; must divide into h = 1/16 cells so
    /// runs live on the reference grid.
    pub window: (f64, f64),
    pub initial: InitialCondition,
    pub t_final: f64,
    pub axis: SweepAxis,
    /// Swept values, strictly decreasing, at least three.
    pub values: Vec<f64>,
    pub regs: Vec<RegKind>,
    pub target: ErrorTarget,
    pub integrator: Integrator,
}

impl SweepSpec {
    /// The 1D Gaussian model-error study: ε from 1e−1 to 1e−5 against the
    /// near-singular reference.
    pub fn gaussian_defaults() -> SweepSpec {
        SweepSpec {
            lambda: 1.0,
            alpha: -0.2,
            window: (-16.0, 16.0),
            initial: InitialCondition::Gaussian1d,
            t_final: 1.0,
            axis: SweepAxis::Epsilon { tau: REFERENCE_TAU },
            values: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
            regs: vec![RegKind::GlobalRational],
            target: ErrorTarget::ModelVsSingular,
            integrator: Integrator::Tsfp,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.values.len() < 3 {
            return Err(Error::InvalidParameter {
                name: "values",
                message: format!("a sweep needs at least 3 values, got {}", self.values.len()),
            });
        }
        let decreasing = self
            .values
            .windows(2)
            .all(|w| w[0] > w[1] && w[1] > 0.0 && w[0].is_finite());
        if !decreasing || self.values[0] <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "values",
                message: "sweep values must be strictly decreasing and positive".into(),
            });
        }
        if self.regs.is_empty() {
            return Err(Error::InvalidParameter {
                name: "reg",
                message: "a sweep needs at least one regularization kind".into(),
            });
        }
        if self.regs.iter().any(|k| matches!(k, RegKind::Exact)) {
            return Err(Error::InvalidParameter {
                name: "reg",
                message: "sweeps compare regularized kernels; the exact kernel has no ε".into(),
            });
        }
        Ok(())
    }
}

/// One sweep point: the run parameters plus its error report.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub reg: RegKind,
    pub alpha: f64,
    pub epsilon: f64,
    /// Polynomial degree for the local kind; the default degree otherwise.
    pub degree: usize,
    pub integrator: Integrator,
    pub tau: f64,
    pub errors: ErrorReport,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Fitted log-log wave-error slope per regularization kind, in input
    /// order; None when any error in the column is zero.
    pub slopes: Vec<(RegKind, Option<f64>)>,
}

pub const DEFAULT_LER_DEGREE: usize = 5;

fn degree_of(kind: RegKind) -> usize {
    match kind {
        RegKind::Ler { degree } => degree,
        _ => DEFAULT_LER_DEGREE,
    }
}

fn run_field(
    problem: &ReferenceProblem,
    reg: &Regularization,
    integrator: Integrator,
    tau: f64,
    cache_dir: &Path,
) -> Result<Field> {
    // a run at the protocol step IS the regularized reference; fetch it from
    // the cache instead of recomputing 10⁵ steps
    if integrator == Integrator::Tsfp && tau == REFERENCE_TAU {
        return reference_solution(problem, ReferenceTarget::Regularized(reg), cache_dir);
    }
    let cfg = SimulationConfig {
        lambda: problem.lambda,
        reg: reg.clone(),
        integrator,
        tau,
        t_final: problem.t_final,
        grid: reference_grid(problem.window, problem.initial.dim())?,
        initial: problem.initial.clone(),
    };
    Ok(evolve(&cfg, &[])?.final_field)
}

/// Run every (regularization, value) pair of the sweep and fit slopes.
pub fn run_sweep(spec: &SweepSpec, cache_dir: &Path) -> Result<SweepTable> {
    spec.validate()?;
    let problem = ReferenceProblem {
        lambda: spec.lambda,
        window: spec.window,
        initial: spec.initial.clone(),
        t_final: spec.t_final,
    };
    let grid = reference_grid(spec.window, spec.initial.dim())?;
    let psi0 = spec.initial.sample(&grid)?;
    let mut rows = Vec::with_capacity(spec.regs.len() * spec.values.len());
    let mut slopes = Vec::with_capacity(spec.regs.len());
    for &kind in &spec.regs {
        let mut errs = Vec::with_capacity(spec.values.len());
        for &value in &spec.values {
            let (epsilon, tau) = match spec.axis {
                SweepAxis::Epsilon { tau } => (value, tau),
                SweepAxis::Tau { epsilon } => (epsilon, value),
            };
            let reg = Regularization::new(kind, spec.alpha, epsilon)?;
            let reference = match spec.target {
                ErrorTarget::ModelVsSingular | ErrorTarget::TotalVsSingular => {
                    reference_solution(
                        &problem,
                        ReferenceTarget::Singular { alpha: spec.alpha },
                        cache_dir,
                    )?
                }
                ErrorTarget::SchemeVsRegularized => reference_solution(
                    &problem,
                    ReferenceTarget::Regularized(&reg),
                    cache_dir,
                )?,
            };
            let run = run_field(&problem, &reg, spec.integrator, tau, cache_dir)?;
            let errors = error_norms(&reference, &run, spec.lambda, &reg, &psi0)?;
            errs.push(errors.wave_l2);
            rows.push(SweepRow {
                reg: kind,
                alpha: spec.alpha,
                epsilon,
                degree: degree_of(kind),
                integrator: spec.integrator,
                tau,
                errors,
            });
        }
        let points: Vec<(f64, f64)> =
            spec.values.iter().copied().zip(errs.iter().copied()).collect();
        slopes.push((kind, fit_slope(&points).ok()));
    }
    Ok(SweepTable { rows, slopes })
}

/// Model error of the three regularizations at one fixed ε, against the
/// near-singular reference.
pub fn run_comparison(
    lambda: f64,
    alpha: f64,
    window: (f64, f64),
    initial: InitialCondition,
    t_final: f64,
    epsilon: f64,
    degree: usize,
    cache_dir: &Path,
) -> Result<SweepTable> {
    let problem =
        ReferenceProblem { lambda, window, initial: initial.clone(), t_final };
    let grid = reference_grid(window, initial.dim())?;
    let psi0 = initial.sample(&grid)?;
    let reference =
        reference_solution(&problem, ReferenceTarget::Singular { alpha }, cache_dir)?;
    let mut rows = Vec::new();
    for kind in [RegKind::Ler { degree }, RegKind::GlobalShift, RegKind::GlobalRational] {
        let reg = Regularization::new(kind, alpha, epsilon)?;
        let run = run_field(&problem, &reg, Integrator::Tsfp, REFERENCE_TAU, cache_dir)?;
        let errors = error_norms(&reference, &run, lambda, &reg, &psi0)?;
        rows.push(SweepRow {
            reg: kind,
            alpha,
            epsilon,
            degree: degree_of(kind),
            integrator: Integrator::Tsfp,
            tau: REFERENCE_TAU,
            errors,
        });
    }
    Ok(SweepTable { rows, slopes: Vec::new() })
}

/// Least-squares slope of log(error) against log(value).
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit);
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::DegenerateFit);
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsCase {
    /// Focusing bump, λ = −10 on [−8, 8]².
    Gausson,
    /// Like-signed vortex pair, λ = 1 on [−16, 16]².
    VortexPair,
    /// Vortex-antivortex pair, λ = 1 on [−16, 16]².
    VortexDipole,
}

impl DynamicsCase {
    fn lambda(&self) -> f64 {
        match self {
            DynamicsCase::Gausson => -10.0,
            _ => 1.0,
        }
    }

    fn window(&self) -> (f64, f64) {
        match self {
            DynamicsCase::Gausson => (-8.0, 8.0),
            _ => (-16.0, 16.0),
        }
    }

    fn initial(&self) -> InitialCondition {
        match self {
            DynamicsCase::Gausson => InitialCondition::Gausson2d,
            DynamicsCase::VortexPair => InitialCondition::VortexPair2d,
            DynamicsCase::VortexDipole => InitialCondition::VortexDipole2d,
        }
    }

    fn nodes(&self, paper_scale: bool) -> usize {
        match (self, paper_scale) {
            (DynamicsCase::Gausson, false) => 256,
            (_, false) => 512,
            (_, true) => 1024,
        }
    }
}

pub const DYNAMICS_TAU: f64 = 1e-3;
pub const DEFAULT_SNAPSHOT_TIMES: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

#[derive(Debug, Clone)]
pub struct SnapshotReport {
    pub time: f64,
    pub field: Field,
    pub vortices: Vec<Vortex>,
}

/// Evolve one of the 2D scenarios with TSFP at τ = 1e−3 and report each
/// snapshot together with its detected vortices. α in (−1/3, 0) runs the
/// shifted kernel at ε = 1e−12; α = 1 runs the smooth cubic kernel directly.
/// A blow-up abort carries the step index m, i.e. the time mτ reached.
pub fn run_dynamics2d(
    case: DynamicsCase,
    alpha: f64,
    paper_scale: bool,
    snapshot_times: Option<&[f64]>,
) -> Result<Vec<SnapshotReport>> {
    let times: Vec<f64> = match snapshot_times {
        Some(ts) => ts.to_vec(),
        None => DEFAULT_SNAPSHOT_TIMES.to_vec(),
    };
    if times.is_empty() {
        return Err(Error::InvalidParameter {
            name: "snapshots",
            message: "at least one snapshot time is required".into(),
        });
    }
    let t_final = times.iter().cloned().fold(0.0, f64::max);
    let reg = if alpha == 1.0 {
        Regularization::exact(1.0)?
    } else {
        Regularization::global_shift(alpha, SINGULAR_EPSILON)?
    };
    let (a, b) = case.window();
    let cfg = SimulationConfig {
        lambda: case.lambda(),
        reg,
        integrator: Integrator::Tsfp,
        tau: DYNAMICS_TAU,
        t_final,
        grid: Grid::square(a, b, case.nodes(paper_scale))?,
        initial: case.initial(),
    };
    let evolution = evolve(&cfg, &times)?;
    let mut reports = Vec::with_capacity(evolution.snapshots.len());
    for (time, field) in evolution.snapshots {
        let vortices = locate_vortices(&field, None)?;
        reports.push(SnapshotReport { time, field, vortices });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn initial_conditions_hit_their_anchor_values() {
        let line = Grid::line(-16.0, 16.0, 512).unwrap();
        let g1 = InitialCondition::Gaussian1d.sample(&line).unwrap();
        // x = 0 is node 256
        assert!((g1.values()[256].re - PI.powf(-0.25)).abs() < 1e-15);
        assert!((g1.values()[256].re - 0.7511255444649425).abs() < 1e-15);

        let square = Grid::square(-16.0, 16.0, 512).unwrap();
        let pair = InitialCondition::VortexPair2d.sample(&square).unwrap();
        // (0.5, 0) is a grid node at h = 1/16
        let idx = (264 * 512) + 256;
        assert_eq!(square.coords(idx), vec![0.5, 0.0]);
        assert_eq!(pair.values()[idx], Complex64::new(0.0, 0.0));

        let gausson = InitialCondition::Gausson2d.sample(&square).unwrap();
        let origin = (256 * 512) + 256;
        assert_eq!(gausson.values()[origin], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn sampling_rejects_dimension_mismatches_and_bad_data() {
        let line = Grid::line(0.0, 1.0, 8).unwrap();
        assert!(matches!(
            InitialCondition::Gausson2d.sample(&line),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        let nan = InitialCondition::Custom {
            dim: 1,
            tag: "nan".into(),
            f: Arc::new(|_| Complex64::new(f64::NAN, 0.0)),
        };
        assert!(matches!(
            nan.sample(&line),
            Err(Error::InvalidParameter { name: "ic", .. })
        ));
    }

    #[test]
    fn custom_conditions_sample_their_closure() {
        let line = Grid::line(0.0, 2.0, 8).unwrap();
        let ic = InitialCondition::Custom {
            dim: 1,
            tag: "ramp".into(),
            f: Arc::new(|x| Complex64::new(x[0], -x[0])),
        };
        let f = ic.sample(&line).unwrap();
        assert_eq!(f.values()[3], Complex64::new(0.75, -0.75));
        assert_eq!(ic.tag(), "custom:ramp");
    }

    #[test]
    fn slope_fitting_matches_hand_values_and_the_normal_equations() {
        let s = fit_slope(&[(1.0, 1.0), (0.1, 0.1), (0.01, 0.01)]).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        let s = fit_slope(&[(1.0, 1.0), (0.1, 0.01)]).unwrap();
        assert!((s - 2.0).abs() < 1e-12);

        // ten perturbed points around slope 1.1, checked against the
        // uncentered normal-equations formula
        let points: Vec<(f64, f64)> = (1..=10)
            .map(|i| {
                let x = 10f64.powi(-i);
                let wiggle = 1.0 + 0.05 * ((i * i) as f64).sin();
                (x, 2.5 * x.powf(1.1) * wiggle)
            })
            .collect();
        let s = fit_slope(&points).unwrap();
        let n = points.len() as f64;
        let (sx, sy, sxx, sxy) = points.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, &(x, y)| {
            let (lx, ly) = (x.ln(), y.ln());
            (acc.0 + lx, acc.1 + ly, acc.2 + lx * lx, acc.3 + lx * ly)
        });
        let oracle = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((s - oracle).abs() < 1e-12);
    }

    #[test]
    fn slope_fitting_rejects_degenerate_input() {
        assert!(matches!(fit_slope(&[(1.0, 1.0)]), Err(Error::DegenerateFit)));
        assert!(matches!(
            fit_slope(&[(1.0, 0.0), (0.1, 0.1), (0.01, 0.01)]),
            Err(Error::DegenerateFit)
        ));
        assert!(matches!(
            fit_slope(&[(1.0, 1.0), (1.0, 2.0)]),
            Err(Error::DegenerateFit)
        ));
    }

    #[test]
    fn sweep_specs_are_validated() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = SweepSpec::gaussian_defaults();
        spec.values = vec![1e-2, 1e-3];
        assert!(matches!(
            run_sweep(&spec, dir.path()),
            Err(Error::InvalidParameter { name: "values", .. })
        ));
        spec.values = vec![1e-3, 1e-2, 1e-1];
        assert!(matches!(
            run_sweep(&spec, dir.path()),
            Err(Error::InvalidParameter { name: "values", .. })
        ));
        spec.values = vec![1e-1, 1e-2, 1e-3];
        spec.regs = vec![];
        assert!(matches!(
            run_sweep(&spec, dir.path()),
            Err(Error::InvalidParameter { name: "reg", .. })
        ));
        spec.regs = vec![RegKind::Exact];
        assert!(matches!(
            run_sweep(&spec, dir.path()),
            Err(Error::InvalidParameter { name: "reg", .. })
        ));
    }

    fn small_spec() -> SweepSpec {
        SweepSpec {
            window: (-4.0, 4.0),
            t_final: 0.1,
            ..SweepSpec::gaussian_defaults()
        }
    }

    #[test]
    fn self_comparison_rows_have_exactly_zero_error() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec {
            axis: SweepAxis::Tau { epsilon: 1e-2 },
            values: vec![4e-5, 2e-5, 1e-5],
            regs: vec![RegKind::GlobalShift],
            target: ErrorTarget::SchemeVsRegularized,
            t_final: 0.05,
            ..small_spec()
        };
        let table = run_sweep(&spec, dir.path()).unwrap();
        assert_eq!(table.rows.len(), 3);
        // the τ = 1e−5 run coincides with its own reference
        assert_eq!(table.rows[2].errors.wave_l2, 0.0);
        assert_eq!(table.rows[2].errors.density_l1, 0.0);
        assert!(table.rows[0].errors.wave_l2 > table.rows[1].errors.wave_l2);
        assert!(table.rows[1].errors.wave_l2 > 0.0);
        // a zero error makes the log-log fit undefined
        assert_eq!(table.slopes[0].1, None);
    }

    #[test]
    fn tau_sweep_recovers_first_order_convergence() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec {
            axis: SweepAxis::Tau { epsilon: 1e-2 },
            values: vec![1e-2, 5e-3, 2.5e-3],
            regs: vec![RegKind::GlobalShift],
            target: ErrorTarget::SchemeVsRegularized,
            ..small_spec()
        };
        let table = run_sweep(&spec, dir.path()).unwrap();
        let slope = table.slopes[0].1.unwrap();
        assert!((0.7..=1.3).contains(&slope), "slope {slope}");
    }

    #[test]
    fn epsilon_sweep_recovers_first_order_model_error() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec {
            values: vec![1e-2, 1e-3, 1e-4],
            ..small_spec()
        };
        let table = run_sweep(&spec, dir.path()).unwrap();
        let slope = table.slopes[0].1.unwrap();
        assert!((0.7..=1.3).contains(&slope), "slope {slope}");
        let errs: Vec<f64> = table.rows.iter().map(|r| r.errors.wave_l2).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
    }

    #[test]
    fn comparison_table_lists_each_kernel_once() {
        let dir = tempfile::tempdir().unwrap();
        let table = run_comparison(
            1.0,
            -0.2,
            (-4.0, 4.0),
            InitialCondition::Gaussian1d,
            0.05,
            1e-3,
            5,
            dir.path(),
        )
        .unwrap();
        assert_eq!(table.rows.len(), 3);
        let kinds: Vec<RegKind> = table.rows.iter().map(|r| r.reg).collect();
        assert_eq!(
            kinds,
            vec![RegKind::Ler { degree: 5 }, RegKind::GlobalShift, RegKind::GlobalRational]
        );
        for row in &table.rows {
            assert!(row.errors.wave_l2 > 0.0);
            assert!(row.errors.energy > 0.0);
        }
    }

    #[test]
    fn dynamics_cases_record_their_vortices_at_release() {
        let reports =
            run_dynamics2d(DynamicsCase::VortexPair, -0.2, false, Some(&[0.0])).unwrap();
        assert_eq!(reports.len(), 1);
        let v = &reports[0].vortices;
        assert_eq!(v.len(), 2, "{v:?}");
        assert_eq!(v.iter().map(|w| w.charge).sum::<i32>(), 2);
    }

    #[test]
    fn focusing_cubic_bump_grows_its_peak() {
        let reports =
            run_dynamics2d(DynamicsCase::Gausson, 1.0, false, Some(&[0.0, 0.25])).unwrap();
        let peak = |f: &Field| f.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        let (p0, p1) = (peak(&reports[0].field), peak(&reports[1].field));
        assert!(reports[0].vortices.is_empty());
        assert!(p1 > 1.05 * p0, "peak went {p0} -> {p1}");
    }

    #[test]
    fn dynamics_validation_rejects_empty_snapshot_lists() {
        assert!(matches!(
            run_dynamics2d(DynamicsCase::Gausson, -0.2, false, Some(&[])),
            Err(Error::InvalidParameter { name: "snapshots", .. })
        ));
        // α outside the admissible set is caught by kernel construction
        assert!(run_dynamics2d(DynamicsCase::Gausson, -0.5, false, Some(&[0.0])).is_err());
    }
}

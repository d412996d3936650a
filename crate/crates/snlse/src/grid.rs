//! Periodic grids, trigonometric interpolation, and the free Schrödinger flow.
//!
//! A field lives on an equispaced periodic grid over [a, b) per axis. Its
//! spectral coefficients are stored in FFT-native order: storage index p maps
//! to the integer mode l = p for p < n/2 and l = p − n otherwise, with angular
//! wavenumber μ_l = 2πl/(b − a). The forward transform carries the 1/n
//! normalization per axis, so the inverse is plain synthesis Σ ψ̃_l e^{iμ_l (x − a)}.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// One periodic axis: the interval [a, b) sampled at n equispaced nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    a: f64,
    b: f64,
    n: usize,
}

impl Axis {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Axis> {
        if !a.is_finite() || !b.is_finite() || b <= a {
            return Err(Error::InvalidGrid(format!(
                "interval [{a}, {b}) is not a finite interval with b > a"
            )));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "node count {n} must be even and at least 4"
            )));
        }
        Ok(Axis { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.a + j as f64 * self.spacing()
    }

    /// Integer mode l for storage index p (FFT-native order).
    pub fn mode(&self, p: usize) -> i64 {
        debug_assert!(p < self.n);
        if p < self.n / 2 {
            p as i64
        } else {
            p as i64 - self.n as i64
        }
    }

    /// Angular wavenumber μ_l = 2πl/(b − a) for storage index p.
    pub fn wavenumber(&self, p: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.mode(p) as f64 / (self.b - self.a)
    }
}

/// Tensor-product periodic grid in one or two dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn line(a: f64, b: f64, n: usize) -> Result<Grid> {
        Ok(Grid { axes: vec![Axis::new(a, b, n)?] })
    }

    pub fn square(a: f64, b: f64, n: usize) -> Result<Grid> {
        let ax = Axis::new(a, b, n)?;
        Ok(Grid { axes: vec![ax.clone(), ax] })
    }

    pub fn rect(x: Axis, y: Axis) -> Grid {
        Grid { axes: vec![x, y] }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume h_x · h_y (h in 1D) of one grid cell; the quadrature weight.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    /// Node coordinates for a flat storage index. 2D storage is row-major
    /// with the second axis fastest: idx = j_x · n_y + j_y.
    pub fn coords(&self, idx: usize) -> Vec<f64> {
        match self.axes.as_slice() {
            [x] => vec![x.node(idx)],
            [x, y] => vec![x.node(idx / y.len()), y.node(idx % y.len())],
            _ => unreachable!("grids are 1- or 2-dimensional"),
        }
    }
}

/// Complex field sampled on the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Spectral coefficients of a field, FFT-native mode order per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    grid: Grid,
    values: Vec<Complex64>,
}

macro_rules! gridded {
    ($t:ident) => {
        impl $t {
            pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<$t> {
                if values.len() != grid.len() {
                    return Err(Error::InvalidGrid(format!(
                        "{} values on a grid of {} nodes",
                        values.len(),
                        grid.len()
                    )));
                }
                Ok($t { grid, values })
            }

            pub fn grid(&self) -> &Grid {
                &self.grid
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn values_mut(&mut self) -> &mut [Complex64] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }
        }
    };
}

gridded!(Field);
gridded!(SpectralCoeffs);

impl Field {
    pub fn zeros(grid: Grid) -> Field {
        let n = grid.len();
        Field { grid, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// Sample a function of the node coordinates.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> Complex64) -> Field {
        let mut values = Vec::with_capacity(grid.len());
        match grid.axes.as_slice() {
            [x] => {
                for j in 0..x.len() {
                    values.push(f(&[x.node(j)]));
                }
            }
            [x, y] => {
                for jx in 0..x.len() {
                    let cx = x.node(jx);
                    for jy in 0..y.len() {
                        values.push(f(&[cx, y.node(jy)]));
                    }
                }
            }
            _ => unreachable!(),
        }
        Field { grid, values }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

fn fft_rows(values: &mut [Complex64], row_len: usize, inverse: bool) {
    let fft = plan(row_len, inverse);
    SCRATCH.with(|s| {
        let mut scratch = s.borrow_mut();
        scratch.resize(fft.get_inplace_scratch_len(), Complex64::new(0.0, 0.0));
        for row in values.chunks_exact_mut(row_len) {
            fft.process_with_scratch(row, &mut scratch);
        }
    });
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

/// Unnormalized DFT along every axis, in place.
pub(crate) fn dft_inplace(values: &mut [Complex64], grid: &Grid, inverse: bool) {
    match grid.axes.as_slice() {
        [x] => fft_rows(values, x.len(), inverse),
        [x, y] => {
            let (nx, ny) = (x.len(), y.len());
            fft_rows(values, ny, inverse);
            let mut flipped = vec![Complex64::new(0.0, 0.0); values.len()];
            transpose(values, &mut flipped, nx, ny);
            fft_rows(&mut flipped, nx, inverse);
            transpose(&flipped, values, ny, nx);
        }
        _ => unreachable!(),
    }
}

pub(crate) fn forward_inplace(values: &mut [Complex64], grid: &Grid) {
    dft_inplace(values, grid, false);
    let scale = 1.0 / grid.len() as f64;
    for v in values.iter_mut() {
        *v *= scale;
    }
}

pub(crate) fn inverse_inplace(values: &mut [Complex64], grid: &Grid) {
    dft_inplace(values, grid, true);
}

/// Forward transform; coefficient p (per axis) belongs to mode `Axis::mode(p)`.
pub fn to_spectral(field: &Field) -> SpectralCoeffs {
    let mut values = field.values.clone();
    forward_inplace(&mut values, &field.grid);
    SpectralCoeffs { grid: field.grid.clone(), values }
}

/// Synthesis of the trigonometric interpolant on the grid nodes.
pub fn from_spectral(coeffs: &SpectralCoeffs) -> Field {
    let mut values = coeffs.values.clone();
    inverse_inplace(&mut values, &coeffs.grid);
    Field { grid: coeffs.grid.clone(), values }
}

/// Tables of e^{−i t μ_l²} per axis, reusable across steps of the same size.
pub(crate) fn kinetic_phases(grid: &Grid, t: f64) -> Vec<Vec<Complex64>> {
    grid.axes
        .iter()
        .map(|ax| {
            (0..ax.len())
                .map(|p| {
                    let mu = ax.wavenumber(p);
                    Complex64::cis(-t * mu * mu)
                })
                .collect()
        })
        .collect()
}

pub(crate) fn apply_phases(values: &mut [Complex64], grid: &Grid, phases: &[Vec<Complex64>]) {
    match grid.axes.as_slice() {
        [_] => {
            for (v, ph) in values.iter_mut().zip(&phases[0]) {
                *v *= ph;
            }
        }
        [_, y] => {
            let ny = y.len();
            for (px, row) in values.chunks_exact_mut(ny).enumerate() {
                let phx = phases[0][px];
                for (v, phy) in row.iter_mut().zip(&phases[1]) {
                    *v *= phx * phy;
                }
            }
        }
        _ => unreachable!(),
    }
}

/// Exact flow of i ∂_t ψ = −Δψ for the interpolant: ψ̃_l ↦ e^{−i t μ_l²} ψ̃_l.
pub fn free_propagate(field: &Field, t: f64) -> Field {
    let mut values = field.values.clone();
    let phases = kinetic_phases(&field.grid, t);
    forward_inplace(&mut values, &field.grid);
    apply_phases(&mut values, &field.grid, &phases);
    inverse_inplace(&mut values, &field.grid);
    Field { grid: field.grid.clone(), values }
}

/// Partial derivative along one axis via synthesis of iμ_l ψ̃_l.
pub fn spectral_derivative(field: &Field, axis: usize) -> Field {
    let mut coeffs = to_spectral(field);
    let grid = coeffs.grid.clone();
    match grid.axes.as_slice() {
        [x] => {
            debug_assert_eq!(axis, 0);
            for (p, v) in coeffs.values.iter_mut().enumerate() {
                *v *= Complex64::new(0.0, x.wavenumber(p));
            }
        }
        [x, y] => {
            let ny = y.len();
            for (idx, v) in coeffs.values.iter_mut().enumerate() {
                let mu = if axis == 0 {
                    x.wavenumber(idx / ny)
                } else {
                    y.wavenumber(idx % ny)
                };
                *v *= Complex64::new(0.0, mu);
            }
        }
        _ => unreachable!(),
    }
    from_spectral(&coeffs)
}

/// All first partials, one field per axis.
pub fn spectral_gradient(field: &Field) -> Vec<Field> {
    (0..field.grid.dim()).map(|ax| spectral_derivative(field, ax)).collect()
}

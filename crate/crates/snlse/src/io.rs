//! Binary field dumps, atomic file writes, and CSV output for sweeps.
//!
//! Dump layout, all little-endian:
//!   magic "SNLS" | version u32 | dim u32 | per axis (a f64, b f64, n u64) |
//!   interleaved re/im f64 per node in row-major storage order.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::experiments::SweepTable;
use crate::grid::{Axis, Field, Grid};

pub const MAGIC: [u8; 4] = *b"SNLS";
pub const VERSION: u32 = 1;

/// Serialize a field to the binary dump format.
pub fn field_bytes(field: &Field) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(12 + 24 * grid.dim() + 16 * grid.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    for axis in grid.axes() {
        out.extend_from_slice(&axis.a().to_le_bytes());
        out.extend_from_slice(&axis.b().to_le_bytes());
        out.extend_from_slice(&(axis.len() as u64).to_le_bytes());
    }
    for v in field.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

/// Write a field dump atomically.
pub fn dump_field(field: &Field, path: &Path) -> Result<()> {
    atomic_write(path, &field_bytes(field))
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::ShortRead);
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Read a field dump back. Truncated data, trailing junk, a foreign magic,
/// and an unknown version are all distinct errors.
pub fn load_field(path: &Path) -> Result<Field> {
    let buf = fs::read(path)?;
    let mut c = Cursor { buf: &buf, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let dim = c.u32()? as usize;
    if !(1..=2).contains(&dim) {
        return Err(Error::InvalidGrid(format!("field dump declares dimension {dim}")));
    }
    let mut axes = Vec::with_capacity(dim);
    for _ in 0..dim {
        let a = c.f64()?;
        let b = c.f64()?;
        let n = c.u64()? as usize;
        axes.push(Axis::new(a, b, n)?);
    }
    let grid = if dim == 1 {
        Grid::line(axes[0].a(), axes[0].b(), axes[0].len())?
    } else {
        Grid::rect(axes[0].clone(), axes[1].clone())
    };
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = c.f64()?;
        let im = c.f64()?;
        values.push(Complex64::new(re, im));
    }
    if c.pos != buf.len() {
        return Err(Error::ShortRead);
    }
    Field::new(grid, values)
}

static WRITE_SEQ: AtomicU64 = AtomicU64::new(0);

/// Write bytes to `path` via a uniquely named sibling file plus rename, so a
/// crash mid-write never leaves a half-written file under the final name.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = path.with_file_name(format!(
        ".{}.{}-{}.tmp",
        name.to_string_lossy(),
        std::process::id(),
        WRITE_SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, bytes)?;
    match fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e.into())
        }
    }
}

/// Write a sweep table as CSV. One row per run, slope comment lines per
/// regularization at the bottom, and a timestamp comment up top that
/// byte-compare harnesses are expected to strip.
pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<()> {
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("# generated-at-unix {stamp}\n"));
    out.push_str("reg,alpha,epsilon,n,integrator,tau,err_wave_l2,err_density_l1,err_energy\n");
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.reg.token(),
            row.alpha,
            row.epsilon,
            row.degree,
            row.integrator.token(),
            row.tau,
            row.errors.wave_l2,
            row.errors.density_l1,
            row.errors.energy,
        ));
    }
    for (kind, slope) in &table.slopes {
        if let Some(s) = slope {
            out.push_str(&format!("# slope,{},{}\n", kind.token(), s));
        }
    }
    atomic_write(path, out.as_bytes())
}

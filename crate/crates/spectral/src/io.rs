//! Binary field snapshots.
//!
//! Layout: magic `NSRF`, version `u32`, `n u32`, `m u32`, `c u32`, `T f64`,
//! then `m * c * n^3` coefficients as little-endian `f64` pairs (re, im),
//! frames outermost, components next, modes in FFT index order.

use std::io::{Read, Write};
use std::path::Path;

use crate::{Complex64, Component, Grid, Result, SpectralError, SpectralField, TimeSeries};

const MAGIC: &[u8; 4] = b"NSRF";
const VERSION: u32 = 1;

pub fn write_series<P: AsRef<Path>>(path: P, series: &TimeSeries, period: f64) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    let first = &series.frames[0];
    let n = first.grid().n as u32;
    let m = series.frames.len() as u32;
    let c = first.comps() as u32;
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&n.to_le_bytes())?;
    w.write_all(&m.to_le_bytes())?;
    w.write_all(&c.to_le_bytes())?;
    w.write_all(&period.to_le_bytes())?;
    for frame in &series.frames {
        for v in frame.data() {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn write_field<P: AsRef<Path>>(path: P, field: &SpectralField) -> Result<()> {
    let series = TimeSeries::new(vec![0.0], vec![field.clone()]);
    write_series(path, &series, 1.0)
}

pub fn read_series<P: AsRef<Path>>(path: P) -> Result<(TimeSeries, f64)> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SpectralError::BadSnapshot("bad magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(SpectralError::BadSnapshot(format!("unsupported version {version}")));
    }
    let n = read_u32(&mut r)? as usize;
    let m = read_u32(&mut r)? as usize;
    let c = read_u32(&mut r)? as usize;
    let period = read_f64(&mut r)?;
    let grid = Grid::new(n)?;
    let comp = Component::from_count(c)?;
    let n3 = grid.len();
    let mut frames = Vec::with_capacity(m);
    for _ in 0..m {
        let mut field = SpectralField::zeros(grid, comp);
        for idx in 0..c * n3 {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            field.data_mut()[idx] = Complex64::new(re, im);
        }
        frames.push(field);
    }
    Ok((TimeSeries::uniform(period, frames), period))
}

pub fn read_field<P: AsRef<Path>>(path: P) -> Result<SpectralField> {
    let (series, _) = read_series(path)?;
    Ok(series.frames.into_iter().next().unwrap())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

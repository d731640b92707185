//! Binary field snapshot format.
//!
//! Layout: 64-byte header (magic `MSFLD1`, u32 N, f64 L, u8 component count,
//! u8 real/complex flag, zero padding), then little-endian f64 values,
//! component-major, x-fastest within a component.  Complex components store
//! re/im interleaved per grid point.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{RealField, ScalarField, VectorField};
use crate::grid::GridSpec;

const MAGIC: &[u8; 6] = b"MSFLD1";
const HEADER_LEN: usize = 64;

#[derive(Debug, Clone)]
pub enum FieldSnapshot {
    Complex(ScalarField),
    Real(RealField),
    Vector(VectorField),
}

impl FieldSnapshot {
    pub fn grid(&self) -> GridSpec {
        match self {
            FieldSnapshot::Complex(f) => f.grid(),
            FieldSnapshot::Real(f) => f.grid(),
            FieldSnapshot::Vector(f) => f.grid(),
        }
    }
}

fn header(grid: GridSpec, components: u8, complex: bool) -> [u8; HEADER_LEN] {
    let mut h = [0u8; HEADER_LEN];
    h[0..6].copy_from_slice(MAGIC);
    h[6..10].copy_from_slice(&(grid.n() as u32).to_le_bytes());
    h[10..18].copy_from_slice(&grid.box_length().to_le_bytes());
    h[18] = components;
    h[19] = u8::from(complex);
    h
}

pub fn write_snapshot(mut w: impl Write, snap: &FieldSnapshot) -> Result<()> {
    match snap {
        FieldSnapshot::Complex(f) => {
            w.write_all(&header(f.grid(), 1, true))?;
            for v in f.values() {
                w.write_all(&v.re.to_le_bytes())?;
                w.write_all(&v.im.to_le_bytes())?;
            }
        }
        FieldSnapshot::Real(f) => {
            w.write_all(&header(f.grid(), 1, false))?;
            for v in f.values() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        FieldSnapshot::Vector(f) => {
            w.write_all(&header(f.grid(), 3, false))?;
            for axis in 0..3 {
                for v in f.component(axis) {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
        }
    }
    Ok(())
}

pub fn read_snapshot(mut r: impl Read) -> Result<FieldSnapshot> {
    let mut h = [0u8; HEADER_LEN];
    r.read_exact(&mut h)?;
    if &h[0..6] != MAGIC {
        return Err(Error::Format("bad snapshot magic".into()));
    }
    let n = u32::from_le_bytes(h[6..10].try_into().unwrap()) as usize;
    let l = f64::from_le_bytes(h[10..18].try_into().unwrap());
    let components = h[18];
    let complex = h[19] != 0;
    let grid = GridSpec::new(n, l)?;
    let mut read_f64s = |count: usize| -> Result<Vec<f64>> {
        let mut buf = vec![0u8; count * 8];
        r.read_exact(&mut buf)?;
        Ok(buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    };
    match (components, complex) {
        (1, true) => {
            let raw = read_f64s(2 * grid.len())?;
            let values = raw
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect();
            Ok(FieldSnapshot::Complex(ScalarField::from_values(grid, values)?))
        }
        (1, false) => Ok(FieldSnapshot::Real(RealField::from_values(grid, read_f64s(grid.len())?)?)),
        (3, false) => {
            let a = read_f64s(grid.len())?;
            let b = read_f64s(grid.len())?;
            let c = read_f64s(grid.len())?;
            Ok(FieldSnapshot::Vector(VectorField::from_components(grid, [a, b, c])?))
        }
        other => Err(Error::Format(format!("unsupported component layout {other:?}"))),
    }
}

pub fn save_snapshot(path: impl AsRef<Path>, snap: &FieldSnapshot) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_snapshot(std::io::BufWriter::new(file), snap)
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<FieldSnapshot> {
    let file = std::fs::File::open(path)?;
    read_snapshot(std::io::BufReader::new(file))
}

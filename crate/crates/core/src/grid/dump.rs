//! Headerless little-endian f64 dumps with a JSON sidecar manifest.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{KGrid, PhysicalConstants};
use crate::error::{Error, Result};

/// Lattice description written next to every dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridManifest {
    pub shape: [usize; 3],
    pub dk: f64,
    pub dx: f64,
    pub offset: bool,
    pub units: PhysicalConstants,
}

impl GridManifest {
    pub fn of(grid: &KGrid) -> Self {
        let n = grid.n();
        GridManifest { shape: [n, n, n], dk: grid.dk(), dx: grid.dx(), offset: grid.offset(), units: *grid.constants() }
    }

    pub fn to_grid(&self) -> Result<KGrid> {
        let n = self.shape[0];
        if self.shape != [n, n, n] {
            return Err(Error::InvalidGrid(format!("non-cubic shape {:?}", self.shape)));
        }
        KGrid::new(n, self.dk * n as f64 / 2.0, self.offset, self.units)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrayKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    K,
    X,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayEntry {
    pub file: String,
    pub label: String,
    pub kind: ArrayKind,
    pub lattice: Lattice,
}

/// Sidecar for a set of arrays on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DumpManifest {
    pub grid: GridManifest,
    pub arrays: Vec<ArrayEntry>,
}

pub fn write_complex(path: &Path, data: &[Complex64]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for v in data {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_real(path: &Path, data: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_f64s(path: &Path) -> Result<Vec<f64>> {
    let mut bytes = Vec::new();
    BufReader::new(fs::File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Io(format!("{}: length {} is not a multiple of 8", path.display(), bytes.len())));
    }
    Ok(bytes.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect())
}

pub fn read_complex(path: &Path, expected: usize) -> Result<Vec<Complex64>> {
    let raw = read_f64s(path)?;
    if raw.len() != 2 * expected {
        return Err(Error::ShapeMismatch { expected, got: raw.len() / 2 });
    }
    Ok(raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

pub fn read_real(path: &Path, expected: usize) -> Result<Vec<f64>> {
    let raw = read_f64s(path)?;
    if raw.len() != expected {
        return Err(Error::ShapeMismatch { expected, got: raw.len() });
    }
    Ok(raw)
}

pub fn write_manifest<T: Serialize>(path: &Path, manifest: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(manifest)?)?;
    Ok(())
}

pub fn read_manifest<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn complex_layout_is_interleaved_little_endian() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.bin");
        write_complex(&p, &[Complex64::new(1.0, -2.0), Complex64::new(0.5, 3.0)]).unwrap();
        let bytes = fs::read(&p).unwrap();
        assert_eq!(bytes.len(), 32);
        assert_eq!(&bytes[0..8], &1.0f64.to_le_bytes());
        assert_eq!(&bytes[8..16], &(-2.0f64).to_le_bytes());
        let back = read_complex(&p, 2).unwrap();
        assert_eq!(back[1], Complex64::new(0.5, 3.0));
        assert!(read_complex(&p, 3).is_err());
    }

    #[test]
    fn manifest_round_trip_rebuilds_grid() {
        let g = make_grid(8, 4.0, true).unwrap();
        let m = GridManifest::of(&g);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.json");
        write_manifest(&p, &m).unwrap();
        let back: GridManifest = read_manifest(&p).unwrap();
        assert_eq!(back.to_grid().unwrap(), g);
    }
}

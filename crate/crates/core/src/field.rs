//! Complex grid fields and their on-disk formats.

use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Maximum complex modulus over a set of values; the paper's error metric.
pub fn cnorm(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.norm()))
}

/// Complex values on a grid, row-major with z as the slow axis.
#[derive(Debug, Clone)]
pub struct Field {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    nx: usize,
    nz: usize,
    h: f64,
    gamma: f64,
    origin: (f64, f64),
    format: String,
}

impl Field {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { values: vec![Complex64::new(0.0, 0.0); grid.len()], grid }
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.values[self.grid.index(m, n)]
    }

    pub fn set(&mut self, m: usize, n: usize, v: Complex64) {
        let idx = self.grid.index(m, n);
        self.values[idx] = v;
    }

    pub fn cnorm(&self) -> f64 {
        cnorm(&self.values)
    }

    /// Write the real and imaginary parts as two CSV grids
    /// (`<stem>_re.csv`, `<stem>_im.csv`), nz rows by nx columns.
    pub fn write_csv(&self, stem: &Path) -> Result<()> {
        for (suffix, pick) in
            [("re", true), ("im", false)] as [(&str, bool); 2]
        {
            let path = stem.with_extension(format!("{suffix}.csv"));
            let mut w = BufWriter::new(std::fs::File::create(path)?);
            for n in 0..self.grid.nz {
                let mut line = String::with_capacity(self.grid.nx * 24);
                for m in 0..self.grid.nx {
                    if m > 0 {
                        line.push(',');
                    }
                    let v = self.get(m, n);
                    let x = if pick { v.re } else { v.im };
                    line.push_str(&format!("{x:.17e}"));
                }
                writeln!(w, "{line}")?;
            }
        }
        Ok(())
    }

    /// Write interleaved re/im little-endian f64 plus a JSON sidecar with the
    /// grid metadata.
    pub fn write_raw(&self, stem: &Path) -> Result<()> {
        let bin = stem.with_extension("bin");
        let mut w = BufWriter::new(std::fs::File::create(bin)?);
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        w.flush()?;
        let sidecar = Sidecar {
            nx: self.grid.nx,
            nz: self.grid.nz,
            h: self.grid.h,
            gamma: self.grid.gamma,
            origin: self.grid.origin,
            format: "interleaved-re-im-f64-le".into(),
        };
        let json = serde_json::to_string_pretty(&sidecar)
            .map_err(|e| Error::Domain(format!("sidecar serialization: {e}")))?;
        std::fs::write(stem.with_extension("json"), json)?;
        Ok(())
    }

    pub fn read_raw(stem: &Path) -> Result<Self> {
        let json = std::fs::read_to_string(stem.with_extension("json"))?;
        let sc: Sidecar = serde_json::from_str(&json)
            .map_err(|e| Error::Domain(format!("sidecar parse: {e}")))?;
        let grid = GridSpec::new(sc.nx, sc.nz, sc.h, sc.gamma, sc.origin)?;
        let bytes = std::fs::read(stem.with_extension("bin"))?;
        if bytes.len() != grid.len() * 16 {
            return Err(Error::Domain(format!(
                "raw field has {} bytes, expected {}",
                bytes.len(),
                grid.len() * 16
            )));
        }
        let values = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Ok(Self { grid, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnorm_examples() {
        assert_eq!(cnorm(&[Complex64::new(3.0, 4.0)]), 5.0);
        assert_eq!(cnorm(&[]), 0.0);
        assert_eq!(cnorm(&[Complex64::new(0.0, 0.0); 4]), 0.0);
        let vals = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 1.0),
        ];
        assert_eq!(cnorm(&vals), 2.0);
    }

    #[test]
    fn raw_roundtrip() {
        let grid = GridSpec::new(6, 5, 0.25, 1.5, (1.0, 2.0)).unwrap();
        let mut f = Field::zeros(grid);
        for (i, v) in f.values.iter_mut().enumerate() {
            *v = Complex64::new(i as f64, -(i as f64) * 0.5);
        }
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("field");
        f.write_raw(&stem).unwrap();
        let g = Field::read_raw(&stem).unwrap();
        assert_eq!(g.grid, f.grid);
        assert_eq!(g.values, f.values);
    }

    #[test]
    fn csv_written() {
        let grid = GridSpec::new(5, 5, 1.0, 1.0, (0.0, 0.0)).unwrap();
        let f = Field::zeros(grid);
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("field");
        f.write_csv(&stem).unwrap();
        let text = std::fs::read_to_string(dir.path().join("field.re.csv")).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(text.lines().next().unwrap().split(',').count(), 5);
    }
}

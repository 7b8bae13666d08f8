use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const GRID_MAGIC: &[u8; 7] = b"PSWF2D\0";

/// Complex samples on the square [-L, L)^2 at points x_j = -L + j h with
/// h = 2L / G, stored row-major: entry (i, j) sits at (x_j, x_i), i.e. i
/// indexes the second coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D {
    extent: f64,
    size: usize,
    values: Vec<Complex64>,
}

impl GridFunction2D {
    pub fn new(extent: f64, size: usize, values: Vec<Complex64>) -> Result<Self> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidParameter {
                name: "extent",
                value: extent,
                constraint: "> 0",
            });
        }
        if size < 2 {
            return Err(Error::Invalid(format!("grid size must be >= 2, got {size}")));
        }
        if values.len() != size * size {
            return Err(Error::LengthMismatch {
                expected: size * size,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Invalid("non-finite grid value".into()));
        }
        Ok(Self {
            extent,
            size,
            values,
        })
    }

    pub fn zeros(extent: f64, size: usize) -> Result<Self> {
        Self::new(extent, size, vec![Complex64::new(0.0, 0.0); size * size])
    }

    pub fn from_fn<F>(extent: f64, size: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let xs = axis(extent, size);
        let values = xs
            .iter()
            .flat_map(|&x2| xs.iter().map(move |&x1| (x1, x2)))
            .map(|(x1, x2)| f(x1, x2))
            .collect();
        Self::new(extent, size, values)
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.size as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        axis(self.extent, self.size)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.size + j]
    }

    /// Same samples with the coordinates relabelled by a factor (the grid
    /// now covers [-factor L, factor L)^2).
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.extent * factor, self.size, self.values.clone())
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(f64, f64, Complex64) -> Complex64,
    {
        let xs = self.axis();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| f(xs[idx % self.size], xs[idx / self.size], v))
            .collect();
        Self {
            extent: self.extent,
            size: self.size,
            values,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.size != other.size || self.extent != other.extent {
            return Err(Error::Invalid("grids differ in size or extent".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Self::new(self.extent, self.size, values)
    }

    /// Zero outside the closed disk of the given radius about the origin.
    pub fn restrict_to_disk(&self, radius: f64) -> Self {
        self.map(|x1, x2, v| {
            if x1.hypot(x2) <= radius {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Riemann-sum L2 norm h (sum |f|^2)^{1/2}.
    pub fn l2_norm(&self) -> f64 {
        self.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Binary layout: magic, u32 G, f64 L, then G^2 (re, im) f64 pairs,
    /// all little-endian, row-major.
    pub fn write_bin<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(GRID_MAGIC)?;
        w.write_all(&(self.size as u32).to_le_bytes())?;
        w.write_all(&self.extent.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_bin<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 7];
        r.read_exact(&mut magic)?;
        if &magic != GRID_MAGIC {
            return Err(Error::Invalid("bad grid file magic".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        let size = u32::from_le_bytes(b4) as usize;
        r.read_exact(&mut b8)?;
        let extent = f64::from_le_bytes(b8);
        let mut values = Vec::with_capacity(size * size);
        for _ in 0..size * size {
            r.read_exact(&mut b8)?;
            let re = f64::from_le_bytes(b8);
            r.read_exact(&mut b8)?;
            values.push(Complex64::new(re, f64::from_le_bytes(b8)));
        }
        Self::new(extent, size, values)
    }
}

pub fn axis(extent: f64, size: usize) -> Vec<f64> {
    let h = 2.0 * extent / size as f64;
    (0..size).map(|j| -extent + j as f64 * h).collect()
}

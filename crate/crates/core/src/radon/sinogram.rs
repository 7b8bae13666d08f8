use std::f64::consts::PI;

use num_complex::Complex64;

use super::phantom::Phantom;
use crate::error::{Error, Result};

/// Samples u(y_m, theta_k) on a uniform offset grid y_m in [-1, 1] (M points,
/// endpoints included) and angles phi_k = k pi / K in [0, pi).
///
/// Storage is angle-major: column k occupies `values[k * M .. (k + 1) * M]`.
/// Directions in [pi, 2pi) are never stored; they follow from
/// u(y, -theta) = u(-y, theta), which on the symmetric offset grid is an
/// exact index reversal.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    samples: usize,
    angles: usize,
    values: Vec<Complex64>,
}

impl Sinogram {
    pub fn new(samples: usize, angles: usize, values: Vec<Complex64>) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Invalid(format!("sinogram needs at least 2 offsets, got {samples}")));
        }
        if angles == 0 {
            return Err(Error::InsufficientAngles(0));
        }
        if values.len() != samples * angles {
            return Err(Error::LengthMismatch {
                expected: samples * angles,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Invalid("non-finite sinogram value".into()));
        }
        Ok(Self {
            samples,
            angles,
            values,
        })
    }

    pub fn zeros(samples: usize, angles: usize) -> Result<Self> {
        Self::new(samples, angles, vec![Complex64::new(0.0, 0.0); samples * angles])
    }

    pub fn from_fn<F>(samples: usize, angles: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let ys = offset_grid(samples);
        let values = (0..angles)
            .flat_map(|k| {
                let phi = angle(k, angles);
                ys.iter().map(move |&y| (y, phi)).collect::<Vec<_>>()
            })
            .map(|(y, phi)| f(y, phi))
            .collect();
        Self::new(samples, angles, values)
    }

    /// R[v] of a planar phantom sampled on the grid.
    pub fn from_phantom(phantom: &Phantom, samples: usize, angles: usize) -> Result<Self> {
        phantom.radon(0.0, 0.0)?;
        Self::from_fn(samples, angles, |y, phi| {
            Complex64::new(phantom.radon(y, phi).unwrap_or(0.0), 0.0)
        })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn spacing(&self) -> f64 {
        2.0 / (self.samples - 1) as f64
    }

    pub fn y_grid(&self) -> Vec<f64> {
        offset_grid(self.samples)
    }

    pub fn phi(&self, k: usize) -> f64 {
        angle(k, self.angles)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.values[k * self.samples..(k + 1) * self.samples]
    }

    /// Column for direction index k in 0..2K, where k >= K denotes the
    /// antipode of direction k - K.
    pub fn extended_column(&self, k: usize) -> Vec<Complex64> {
        if k < self.angles {
            self.column(k).to_vec()
        } else {
            self.column(k - self.angles).iter().rev().copied().collect()
        }
    }
}

pub fn offset_grid(samples: usize) -> Vec<f64> {
    let h = 2.0 / (samples - 1) as f64;
    (0..samples)
        .map(|m| if m + 1 == samples { 1.0 } else { -1.0 + m as f64 * h })
        .collect()
}

pub fn angle(k: usize, angles: usize) -> f64 {
    PI * k as f64 / angles as f64
}

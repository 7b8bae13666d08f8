use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_positive, Error, Result};
use crate::pswf::PswfBasis;
use crate::radon::sinogram::angle;
use crate::radon::Phantom;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Noisy { seed: u64, delta: f64, noise_scale: f64 },
}

/// Fourier data w on the ball of radius r.
///
/// Samples sit at p = r x_i theta_k, with x_i the Gauss nodes of the basis
/// for bandwidth c = r sigma and phi_k = k pi / K; in one dimension K = 1
/// and theta = 1. Each angle therefore covers a full diameter, and storage
/// is angle-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierData {
    r: f64,
    sigma: f64,
    dim: usize,
    angles: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    samples: Vec<Complex64>,
    provenance: Provenance,
}

pub(crate) fn check_bandwidth(r: f64, sigma: f64, basis: &PswfBasis) -> Result<()> {
    check_positive("r", r)?;
    check_positive("sigma", sigma)?;
    let c = r * sigma;
    if (c - basis.c()).abs() > 1e-9 * basis.c() {
        return Err(Error::BandwidthMismatch {
            data: c,
            basis: basis.c(),
        });
    }
    Ok(())
}

impl FourierData {
    /// Wraps raw samples laid out as described on the type.
    pub fn from_samples(
        dim: usize,
        r: f64,
        sigma: f64,
        basis: &PswfBasis,
        angles: usize,
        samples: Vec<Complex64>,
    ) -> Result<Self> {
        check_bandwidth(r, sigma, basis)?;
        let angles = match dim {
            1 => 1,
            2 if angles >= crate::radon::inverse::MIN_ANGLES => angles,
            2 => return Err(Error::InsufficientAngles(angles)),
            d => return Err(Error::DimensionMismatch { expected: 2, found: d }),
        };
        let n = basis.nodes().len();
        if samples.len() != n * angles {
            return Err(Error::LengthMismatch {
                expected: n * angles,
                found: samples.len(),
            });
        }
        Ok(Self {
            r,
            sigma,
            dim,
            angles,
            nodes: basis.nodes().to_vec(),
            weights: basis.weights().to_vec(),
            samples,
            provenance: Provenance::Exact,
        })
    }

    pub fn zeros(dim: usize, r: f64, sigma: f64, basis: &PswfBasis, angles: usize) -> Result<Self> {
        let k = if dim == 1 { 1 } else { angles };
        Self::from_samples(dim, r, sigma, basis, angles, vec![Complex64::new(0.0, 0.0); k * basis.nodes().len()])
    }

    /// Exact data v^ of a phantom supported in the ball of radius sigma.
    /// `angles` is ignored in one dimension.
    pub fn sample(phantom: &Phantom, r: f64, sigma: f64, basis: &PswfBasis, angles: usize) -> Result<Self> {
        phantom.validate()?;
        if phantom.support_radius() > sigma {
            return Err(Error::Invalid(format!(
                "phantom support radius {} exceeds sigma = {sigma}",
                phantom.support_radius()
            )));
        }
        let mut data = Self::zeros(phantom.dimension(), r, sigma, basis, angles)?;
        let n = data.nodes.len();
        for k in 0..data.angles {
            let phi = angle(k, data.angles);
            for i in 0..n {
                let t = r * data.nodes[i];
                let p = if data.dim == 1 {
                    vec![t]
                } else {
                    vec![t * phi.cos(), t * phi.sin()]
                };
                data.samples[k * n + i] = phantom.fourier(&p)?;
            }
        }
        Ok(data)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn c(&self) -> f64 {
        self.r * self.sigma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Samples along the diameter in direction k.
    pub fn ray(&self, k: usize) -> &[Complex64] {
        let n = self.nodes.len();
        &self.samples[k * n..(k + 1) * n]
    }

    /// (int_{-1}^{1} |w(r x theta)|^2 dx)^{1/2} for a single direction.
    pub fn ray_norm(&self, k: usize) -> f64 {
        weighted_norm_sq(self.ray(k), &self.weights).sqrt()
    }

    /// The data norm (int_{B_r} |p|^{1-d} |w(p)|^2 dp)^{1/2}.
    pub fn norm_r(&self) -> f64 {
        norm_r_of(&self.samples, self)
    }

    /// Data with an additive complex Gaussian perturbation rescaled so that
    /// its norm_r equals delta * noise_scale exactly. Each direction draws
    /// from its own stream keyed by (seed, k).
    pub fn make_noisy(&self, delta: f64, noise_scale: f64, seed: u64) -> Result<Self> {
        crate::error::check_open_unit("delta", delta)?;
        if !(noise_scale.is_finite() && noise_scale >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "noise_scale",
                value: noise_scale,
                constraint: ">= 0",
            });
        }
        let level = delta * noise_scale;
        if level == 0.0 {
            return Ok(self.clone());
        }
        let n = self.nodes.len();
        let noise: Vec<Complex64> = (0..self.angles)
            .into_par_iter()
            .flat_map_iter(|k| {
                let mut g = rng::stream(seed, k as u64);
                (0..n)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut g);
                        let im: f64 = StandardNormal.sample(&mut g);
                        Complex64::new(re, im)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let scale = level / norm_r_of(&noise, self);
        let samples = self
            .samples
            .iter()
            .zip(&noise)
            .map(|(w, e)| w + e * scale)
            .collect();
        Ok(Self {
            samples,
            provenance: Provenance::Noisy {
                seed,
                delta,
                noise_scale,
            },
            ..self.clone()
        })
    }

    /// norm_r of the difference with another data set on the same layout.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_layout(other)?;
        let diff: Vec<Complex64> = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(norm_r_of(&diff, self))
    }

    pub(crate) fn check_same_layout(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.angles != other.angles || self.nodes != other.nodes {
            return Err(Error::Invalid("data sets live on different sample layouts".into()));
        }
        Ok(())
    }
}

fn weighted_norm_sq(values: &[Complex64], weights: &[f64]) -> f64 {
    values.iter().zip(weights).map(|(v, w)| w * v.norm_sqr()).sum()
}

/// With p = r x theta over phi in [0, pi) and x in [-1, 1], polar measure
/// |p|^{1-d} dp becomes r dx in one dimension and r dx dphi in two.
fn norm_r_of(values: &[Complex64], layout: &FourierData) -> f64 {
    let n = layout.nodes.len();
    let total: f64 = values
        .chunks(n)
        .map(|ray| weighted_norm_sq(ray, &layout.weights))
        .sum();
    let angle_weight = if layout.dim == 1 {
        1.0
    } else {
        PI / layout.angles as f64
    };
    (layout.r * angle_weight * total).sqrt()
}

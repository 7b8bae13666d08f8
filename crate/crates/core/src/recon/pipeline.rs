use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::data::FourierData;
use crate::bandlimit::{
    coefficients_on_rule, piecewise_l2_distance, projection_error, truncated_inverse_coefficients,
    Coefficients, RegParams,
};
use crate::error::{Error, Result};
use crate::pswf::{GaussLegendre, PswfBasis};
use crate::radon::sinogram::offset_grid;
use crate::radon::{inverse_radon, sobolev_norm_grid, GridFunction2D, InverseRadonOptions, Phantom, Sinogram};

/// Reconstruction on (-sigma, sigma), stored as PSWF coefficients of
/// f(y) = v(sigma y).
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction1D {
    sigma: f64,
    n: usize,
    clamped: bool,
    coeffs: Coefficients,
}

impl Reconstruction1D {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clamped(&self) -> bool {
        self.clamped
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn eval(&self, basis: &PswfBasis, q: &[f64]) -> Result<Vec<Complex64>> {
        let ys: Vec<f64> = q.iter().map(|x| x / self.sigma).collect();
        self.coeffs.synthesize(basis, &ys)
    }

    /// ||v - v_rec||_{L2(-sigma, sigma)}.
    pub fn l2_error(&self, basis: &PswfBasis, phantom: &Phantom) -> Result<f64> {
        let f = pulled_back(phantom, self.sigma)?;
        let breaks: Vec<f64> = phantom.breakpoints().iter().map(|b| b / self.sigma).collect();
        Ok(self.sigma.sqrt() * piecewise_l2_distance(basis, &self.coeffs, f, &breaks)?)
    }
}

fn pulled_back(phantom: &Phantom, sigma: f64) -> Result<impl Fn(f64) -> Complex64 + '_> {
    if phantom.dimension() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: phantom.dimension(),
        });
    }
    Ok(move |y: f64| Complex64::new(phantom.value(&[sigma * y]).unwrap_or(0.0), 0.0))
}

fn check_dim(data: &FourierData, d: usize) -> Result<()> {
    if data.dim() == d {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: d,
            found: data.dim(),
        })
    }
}

fn check_data(data: &FourierData, basis: &PswfBasis) -> Result<()> {
    if (data.c() - basis.c()).abs() > 1e-9 * basis.c() {
        return Err(Error::BandwidthMismatch {
            data: data.c(),
            basis: basis.c(),
        });
    }
    if data.ray(0).len() != basis.nodes().len() {
        return Err(Error::LengthMismatch {
            expected: basis.nodes().len(),
            found: data.ray(0).len(),
        });
    }
    Ok(())
}

fn check_params(params: &RegParams, basis: &PswfBasis) -> Result<()> {
    if (params.c - basis.c()).abs() > 1e-9 * basis.c() {
        return Err(Error::BandwidthMismatch {
            data: params.c,
            basis: basis.c(),
        });
    }
    Ok(())
}

/// F^{-1}_{n,c} applied to (2 pi / sigma)^d w(r x theta) along direction k.
fn invert_ray(data: &FourierData, basis: &PswfBasis, k: usize, n: usize) -> Result<Coefficients> {
    let scale = (2.0 * PI / data.sigma()).powi(data.dim() as i32);
    let g: Vec<Complex64> = data.ray(k).iter().map(|w| w * scale).collect();
    truncated_inverse_coefficients(basis, &g, n)
}

pub fn reconstruct_exact_1d(data: &FourierData, basis: &PswfBasis, n: usize) -> Result<Reconstruction1D> {
    check_dim(data, 1)?;
    check_data(data, basis)?;
    Ok(Reconstruction1D {
        sigma: data.sigma(),
        n,
        clamped: false,
        coeffs: invert_ray(data, basis, 0, n)?,
    })
}

/// Truncated inverse at n* from `params`, clamped to the certified range.
pub fn reconstruct_regularized_1d(
    data: &FourierData,
    basis: &PswfBasis,
    params: &RegParams,
) -> Result<Reconstruction1D> {
    check_params(params, basis)?;
    let (n, clamped) = params.effective_n(basis);
    let mut rec = reconstruct_exact_1d(data, basis, n)?;
    rec.clamped = clamped;
    Ok(rec)
}

/// ||v - pi_n v|| on (-sigma, sigma) in the PSWF basis of f(y) = v(sigma y).
pub fn projection_error_1d(basis: &PswfBasis, phantom: &Phantom, sigma: f64, n: usize) -> Result<f64> {
    basis.check_index(n)?;
    let f = pulled_back(phantom, sigma)?;
    let breaks: Vec<f64> = phantom.breakpoints().iter().map(|b| b / sigma).collect();
    let (coeffs, _) = crate::bandlimit::piecewise_coefficients(basis, &f, &breaks, n)?;
    Ok(sigma.sqrt() * piecewise_l2_distance(basis, &coeffs, &f, &breaks)?)
}

/// Error bound on (-sigma, sigma) for data with ||w - v^||_r = noise_level.
pub fn lemma13_bound_1d(
    basis: &PswfBasis,
    phantom: &Phantom,
    data: &FourierData,
    noise_level: f64,
    n: usize,
) -> Result<f64> {
    let sigma = data.sigma();
    let delta_f = 2.0 * PI / sigma * noise_level / data.r().sqrt();
    let proj = projection_error_1d(basis, phantom, sigma, n)? / sigma.sqrt();
    Ok(sigma.sqrt() * crate::bandlimit::lemma13_bound(basis, n, delta_f, proj)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recon2dOptions {
    /// Offsets per direction in the sinogram.
    pub samples: usize,
    /// Output grid resolution.
    pub grid: usize,
    /// Half-width of the output box in q units; defaults to 2 sigma.
    pub extent: Option<f64>,
    /// Radial frequency cut for the inverse Radon step (y units).
    pub s_max: Option<f64>,
}

impl Default for Recon2dOptions {
    fn default() -> Self {
        Self {
            samples: 256,
            grid: 256,
            extent: None,
            s_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction2D {
    pub n: usize,
    pub clamped: bool,
    /// u_{r,sigma}(y, theta) on [-1, 1].
    pub sinogram: Sinogram,
    /// v^delta on [-extent, extent)^2 in q units.
    pub grid: GridFunction2D,
}

/// Per-direction coefficients of F^{-1}_{n,c}[w_{r,theta}].
pub fn per_angle_coefficients(data: &FourierData, basis: &PswfBasis, n: usize) -> Result<Vec<Coefficients>> {
    check_dim(data, 2)?;
    check_data(data, basis)?;
    (0..data.angles())
        .into_par_iter()
        .map(|k| invert_ray(data, basis, k, n))
        .collect()
}

pub fn reconstruct_exact_2d(
    data: &FourierData,
    basis: &PswfBasis,
    n: usize,
    opts: &Recon2dOptions,
) -> Result<Reconstruction2D> {
    let coeffs = per_angle_coefficients(data, basis, n)?;
    let m = opts.samples;
    if m < 2 {
        return Err(Error::Invalid(format!("need at least 2 sinogram offsets, got {m}")));
    }
    let ys = offset_grid(m);
    let psi: Vec<Vec<f64>> = ys
        .iter()
        .map(|&y| basis.eval_upto(n, y))
        .collect::<Result<_>>()?;
    let values: Vec<Complex64> = coeffs
        .par_iter()
        .flat_map_iter(|c| {
            psi.iter()
                .map(|row| row.iter().zip(c.values()).map(|(p, v)| v * p).sum::<Complex64>())
                .collect::<Vec<_>>()
        })
        .collect();
    let sinogram = Sinogram::new(m, data.angles(), values)?;
    let sigma = data.sigma();
    let extent = opts.extent.unwrap_or(2.0 * sigma);
    let unit = inverse_radon(
        &sinogram,
        extent / sigma,
        opts.grid,
        InverseRadonOptions {
            s_max: opts.s_max,
            s_points: None,
        },
    )?;
    Ok(Reconstruction2D {
        n,
        clamped: false,
        sinogram,
        grid: unit.rescaled(sigma)?,
    })
}

pub fn reconstruct_regularized_2d(
    data: &FourierData,
    basis: &PswfBasis,
    params: &RegParams,
    opts: &Recon2dOptions,
) -> Result<Reconstruction2D> {
    check_params(params, basis)?;
    let (n, clamped) = params.effective_n(basis);
    let mut rec = reconstruct_exact_2d(data, basis, n, opts)?;
    rec.clamped = clamped;
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reconstruction {
    OneD(Reconstruction1D),
    TwoD(Reconstruction2D),
}

/// Dispatches on the data dimension.
pub fn reconstruct_regularized(
    data: &FourierData,
    basis: &PswfBasis,
    params: &RegParams,
    opts: &Recon2dOptions,
) -> Result<Reconstruction> {
    match data.dim() {
        1 => reconstruct_regularized_1d(data, basis, params).map(Reconstruction::OneD),
        _ => reconstruct_regularized_2d(data, basis, params, opts).map(Reconstruction::TwoD),
    }
}

fn disks(phantom: &Phantom, out: &mut Vec<([f64; 2], f64)>) -> Result<()> {
    match phantom {
        Phantom::Disk { center, radius } => {
            out.push((*center, *radius));
            Ok(())
        }
        Phantom::Sum { parts } => parts.iter().try_for_each(|p| disks(p, out)),
        _ => Err(Error::DimensionMismatch {
            expected: 2,
            found: phantom.dimension(),
        }),
    }
}

/// Coefficients up to n and squared norm of f(y) = sigma^{-1} R[v](sigma y, theta).
///
/// Between chord endpoints the rule uses y = m + h sin u, which removes the
/// square-root behaviour of R[v] at the ends of each chord.
pub fn slice_coefficients(
    basis: &PswfBasis,
    phantom: &Phantom,
    sigma: f64,
    phi: f64,
    n: usize,
) -> Result<(Coefficients, f64)> {
    let mut parts = Vec::new();
    disks(phantom, &mut parts)?;
    let theta = [phi.cos(), phi.sin()];
    let mut cuts = vec![-1.0, 1.0];
    for (c, a) in &parts {
        let t0 = theta[0] * c[0] + theta[1] * c[1];
        for e in [(t0 - a) / sigma, (t0 + a) / sigma] {
            if e > -1.0 && e < 1.0 {
                cuts.push(e);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let rule = GaussLegendre::new(basis.legendre_degree() + 16);
    let (us, uw) = rule.on_interval(-0.5 * PI, 0.5 * PI);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for pair in cuts.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        let half = 0.5 * (pair[1] - pair[0]);
        for (u, w) in us.iter().zip(&uw) {
            xs.push(mid + half * u.sin());
            ws.push(w * half * u.cos());
        }
    }
    coefficients_on_rule(
        basis,
        |y| Complex64::new(phantom.radon(sigma * y, phi).unwrap_or(0.0) / sigma, 0.0),
        &xs,
        &ws,
        n,
    )
}

/// Sinogram-domain error bound: the per-direction bound
/// delta_theta / |mu_n| plus ||f_theta - pi_n f_theta||, integrated in L2
/// over [-1, 1] x S^1, where delta_theta is the L2 size of the scaled data
/// error along the diameter.
pub fn sinogram_bound_2d(
    basis: &PswfBasis,
    noisy: &FourierData,
    exact: &FourierData,
    phantom: &Phantom,
    n: usize,
) -> Result<f64> {
    check_dim(noisy, 2)?;
    noisy.check_same_layout(exact)?;
    basis.check_index(n)?;
    let sigma = noisy.sigma();
    let scale = (2.0 * PI / sigma).powi(2);
    let mu = basis.mu()[n].norm();
    let k_angles = noisy.angles();
    let terms: Vec<f64> = (0..k_angles)
        .into_par_iter()
        .map(|k| {
            let delta = scale
                * noisy
                    .ray(k)
                    .iter()
                    .zip(exact.ray(k))
                    .zip(basis.weights())
                    .map(|((a, b), w)| w * (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
            let phi = crate::radon::sinogram::angle(k, k_angles);
            let (coeffs, norm_sq) = slice_coefficients(basis, phantom, sigma, phi, n)?;
            let b = delta / mu + projection_error(&coeffs, norm_sq, n);
            Ok(b * b)
        })
        .collect::<Result<_>>()?;
    Ok((2.0 * PI / k_angles as f64 * terms.iter().sum::<f64>()).sqrt())
}

/// Discrete H^{-1/2} norm of (v - v_rec) restricted to the ball of radius
/// sigma, on the reconstruction grid.
pub fn h_minus_half_error(rec: &GridFunction2D, phantom: &Phantom, sigma: f64) -> Result<f64> {
    let exact = GridFunction2D::from_fn(rec.extent(), rec.size(), |a, b| {
        Complex64::new(phantom.value(&[a, b]).unwrap_or(0.0), 0.0)
    })?;
    let diff = exact.sub(rec)?.restrict_to_disk(sigma);
    sobolev_norm_grid(&diff, -0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandlimit::n_star;
    use crate::pswf::Bandwidth;

    #[test]
    fn eigenfunction_round_trip_1d() {
        // v(q) = psi_k(q / sigma): data = (1/2pi) int e^{ipq} v(q) dq
        let (r, sigma) = (5.0, 2.0);
        let b = PswfBasis::with_default_floor(r * sigma, 12).unwrap();
        let k = 3;
        let psi_k: Vec<Complex64> = b.psi_at_nodes(k).unwrap().iter().map(|&x| Complex64::new(x, 0.0)).collect();
        // v^(r x) = sigma / 2pi * F_c[psi_k](x) = sigma / 2pi * mu_k psi_k(x)
        let samples: Vec<Complex64> = psi_k.iter().map(|p| p * b.mu()[k] * sigma / (2.0 * PI)).collect();
        let data = FourierData::from_samples(1, r, sigma, &b, 1, samples).unwrap();
        let rec = reconstruct_exact_1d(&data, &b, 8).unwrap();
        let q = [-1.9, -0.4, 0.0, 1.3];
        for (qq, v) in q.iter().zip(rec.eval(&b, &q).unwrap()) {
            assert!((v.re - b.eval_psi(k, qq / sigma).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let b = PswfBasis::with_default_floor(10.0, 12).unwrap();
        let z1 = FourierData::zeros(1, 10.0, 1.0, &b, 1).unwrap();
        let p = n_star(Bandwidth::new(10.0).unwrap(), 0.4, 1e-2).unwrap();
        let rec = reconstruct_regularized_1d(&z1, &b, &p).unwrap();
        assert!(rec.coefficients().values().iter().all(|v| v.norm() == 0.0));
        let z2 = FourierData::zeros(2, 10.0, 1.0, &b, 16).unwrap();
        let opts = Recon2dOptions {
            samples: 32,
            grid: 16,
            ..Default::default()
        };
        let rec = reconstruct_regularized_2d(&z2, &b, &p, &opts).unwrap();
        assert!(rec.grid.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn regularized_matches_exact_at_n_star() {
        let b = PswfBasis::with_default_floor(10.0, 20).unwrap();
        let hat = Phantom::hat(0.0, 0.5);
        let data = FourierData::sample(&hat, 10.0, 1.0, &b, 1).unwrap();
        let p = n_star(Bandwidth::new(10.0).unwrap(), 0.5, 1e-3).unwrap();
        let a = reconstruct_regularized_1d(&data, &b, &p).unwrap();
        let e = reconstruct_exact_1d(&data, &b, p.n_star).unwrap();
        assert_eq!(a.coefficients(), e.coefficients());
        assert!(!a.clamped());
    }

    #[test]
    fn rejects_mismatch() {
        let b = PswfBasis::with_default_floor(10.0, 12).unwrap();
        let data = FourierData::zeros(1, 10.0, 1.0, &b, 1).unwrap();
        let p = n_star(Bandwidth::new(9.0).unwrap(), 0.4, 1e-2).unwrap();
        assert!(matches!(
            reconstruct_regularized_1d(&data, &b, &p),
            Err(Error::BandwidthMismatch { .. })
        ));
        let other = PswfBasis::with_default_floor(8.0, 12).unwrap();
        assert!(reconstruct_exact_1d(&data, &other, 3).is_err());
    }

    #[test]
    fn slice_coefficients_match_direct_projection() {
        let b = PswfBasis::with_default_floor(8.0, 10).unwrap();
        let disk = Phantom::disk(0.5);
        let (coeffs, norm_sq) = slice_coefficients(&b, &disk, 1.0, 0.3, 6).unwrap();
        // int_{-a}^{a} (2 sqrt(a^2 - y^2))^2 dy = 16 a^3 / 3
        assert!((norm_sq - 16.0 * 0.125 / 3.0).abs() < 1e-12);
        // odd modes vanish for a centred disk
        assert!(coeffs.values()[1].norm() < 1e-13 && coeffs.values()[3].norm() < 1e-13);
        // even modes against a dense midpoint rule
        let n = 200_000;
        let h = 2.0 / n as f64;
        let direct: f64 = (0..n)
            .map(|i| {
                let y = -1.0 + (i as f64 + 0.5) * h;
                h * b.eval_psi(2, y).unwrap() * disk.radon(y, 0.3).unwrap()
            })
            .sum();
        assert!((coeffs.values()[2].re - direct).abs() < 1e-6);
    }
}

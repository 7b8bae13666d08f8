//! Discrete Sobolev norms on a square grid and the dilation bounds.
//!
//! The continuous transform is taken unitary, so the order-0 norm is the
//! plain L2 norm; the grid version replaces it by a DFT with spacing
//! factors, which is exact Parseval on the grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::grid::GridFunction2D;
use crate::error::{Error, Result};

const SCALING_SLACK: f64 = 0.02;
const REPRESENTABLE_TOL: f64 = 1e-6;

/// Unnormalized 2D DFT of a row-major G x G array.
fn fft2(values: &[Complex64], size: usize) -> Vec<Complex64> {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(size);
    let mut data = values.to_vec();
    for row in data.chunks_mut(size) {
        fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); size];
    for j in 0..size {
        for i in 0..size {
            col[i] = data[i * size + j];
        }
        fft.process(&mut col);
        for i in 0..size {
            data[i * size + j] = col[i];
        }
    }
    data
}

/// Signed DFT index for position k of an FFT output of length n.
fn signed(k: usize, n: usize) -> f64 {
    if k < n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Power spectrum |f^_u(p)|^2 dp on the DFT frequency lattice together with
/// the |p|^2 of each entry.
fn spectrum(f: &GridFunction2D) -> Result<Vec<(f64, f64)>> {
    let g = f.size();
    if !g.is_power_of_two() {
        return Err(Error::NonPowerOfTwo(g));
    }
    let h = f.spacing();
    let dp = PI / f.extent();
    let spec = fft2(f.values(), g);
    // f^_u(p) = (1/2pi) h^2 sum f e^{-ipx}; measure dp^2
    let scale = (h * h / (2.0 * PI) * dp).powi(2);
    Ok(spec
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let p1 = dp * signed(idx % g, g);
            let p2 = dp * signed(idx / g, g);
            (p1 * p1 + p2 * p2, scale * v.norm_sqr())
        })
        .collect())
}

/// (int (1 + |p|^2)^order |f^(p)|^2 dp)^{1/2} on the grid.
pub fn sobolev_norm_grid(f: &GridFunction2D, order: f64) -> Result<f64> {
    if !order.is_finite() {
        return Err(Error::InvalidParameter {
            name: "order",
            value: order,
            constraint: "finite",
        });
    }
    Ok(spectrum(f)?
        .iter()
        .map(|(p2, e)| (1.0 + p2).powf(order) * e)
        .sum::<f64>()
        .sqrt())
}

/// Outcome of comparing the dilate's norm with the two-sided scaling bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingCheck {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub slack: f64,
}

impl ScalingCheck {
    pub fn holds(&self) -> bool {
        self.lower * (1.0 - self.slack) <= self.value && self.value <= self.upper * (1.0 + self.slack)
    }
}

/// Lower and upper factors a, b with a ||v|| <= ||v_sigma|| <= b ||v|| in d dimensions.
pub fn scaling_factors(sigma: f64, order: f64, d: usize) -> (f64, f64) {
    let dh = d as f64 / 2.0;
    let outer = (1.0 + sigma).powf(order) / sigma.powf(dh);
    let inner = sigma.powf(order - dh) / (1.0 + sigma).powf(order);
    if order >= 0.0 {
        (inner, outer)
    } else {
        (outer, inner)
    }
}

/// Computes ||v_sigma||_{H^order} with v_sigma(q) = v(sigma q) by
/// trigonometric interpolation of the samples, and the bounds implied by
/// ||v||_{H^order}.
pub fn scaling_check(f: &GridFunction2D, sigma: f64, order: f64) -> Result<ScalingCheck> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            constraint: "> 0",
        });
    }
    check_representable(f, sigma)?;
    let dilated = dilate(f, sigma)?;
    let base = sobolev_norm_grid(f, order)?;
    let value = sobolev_norm_grid(&dilated, order)?;
    let (a, b) = scaling_factors(sigma, order, 2);
    Ok(ScalingCheck {
        lower: a * base,
        value,
        upper: b * base,
        slack: SCALING_SLACK,
    })
}

/// The dilate v(sigma q) stays on the grid when v is negligible on the
/// boundary ring and, for sigma < 1, outside [-sigma L, sigma L]^2; for
/// sigma > 1 the spectrum must be negligible beyond Nyquist / sigma.
fn check_representable(f: &GridFunction2D, sigma: f64) -> Result<()> {
    let peak = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(());
    }
    let inner = f.extent() * sigma.min(1.0) * (1.0 - 2.0 / f.size() as f64);
    let outside = f
        .map(|x1, x2, v| {
            if x1.abs().max(x2.abs()) >= inner {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .values()
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if outside > REPRESENTABLE_TOL * peak {
        return Err(Error::DilateOutsideExtent(sigma));
    }
    if sigma > 1.0 {
        let nyquist = PI / f.spacing();
        let spec = spectrum(f)?;
        let total: f64 = spec.iter().map(|(_, e)| e).sum();
        let cut = (nyquist / sigma).powi(2);
        let beyond: f64 = spec.iter().filter(|(p2, _)| *p2 > cut).map(|(_, e)| e).sum();
        if beyond > REPRESENTABLE_TOL * REPRESENTABLE_TOL * total {
            return Err(Error::DilateOutsideExtent(sigma));
        }
    }
    Ok(())
}

/// Periodic trigonometric interpolation matrix evaluating a length-n sample
/// vector (period 2L) at the points `targets`.
fn interpolation_matrix(extent: f64, n: usize, targets: &[f64]) -> Vec<Vec<f64>> {
    let h = 2.0 * extent / n as f64;
    targets
        .iter()
        .map(|&t| {
            (0..n)
                .map(|j| {
                    // Dirichlet kernel with the Nyquist term split symmetrically
                    let u = PI * ((t + extent) / h - j as f64) / n as f64;
                    let half = n / 2;
                    let mut s = 1.0;
                    for k in 1..half {
                        s += 2.0 * (2.0 * k as f64 * u).cos();
                    }
                    s += (2.0 * half as f64 * u).cos();
                    s / n as f64
                })
                .collect()
        })
        .collect()
}

/// v(sigma q) sampled on the same grid; points whose preimage leaves the
/// extent are set to zero.
pub fn dilate(f: &GridFunction2D, sigma: f64) -> Result<GridFunction2D> {
    let g = f.size();
    let l = f.extent();
    let xs = f.axis();
    let targets: Vec<f64> = xs.iter().map(|x| sigma * x).collect();
    let inside: Vec<bool> = targets.iter().map(|t| t.abs() < l).collect();
    let m = interpolation_matrix(l, g, &targets);
    // rows (second coordinate) first, then columns
    let mut tmp = vec![Complex64::new(0.0, 0.0); g * g];
    for i in 0..g {
        let row = &f.values()[i * g..(i + 1) * g];
        for (j, mj) in m.iter().enumerate() {
            tmp[i * g + j] = row.iter().zip(mj).map(|(v, w)| v * w).sum();
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); g * g];
    for (i, mi) in m.iter().enumerate() {
        if !inside[i] {
            continue;
        }
        for j in 0..g {
            if !inside[j] {
                continue;
            }
            out[i * g + j] = (0..g).map(|k| tmp[k * g + j] * mi[k]).sum();
        }
    }
    GridFunction2D::new(l, g, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(extent: f64, size: usize) -> GridFunction2D {
        GridFunction2D::from_fn(extent, size, |x1, x2| Complex64::new((-(x1 * x1 + x2 * x2)).exp(), 0.0))
            .unwrap()
    }

    #[test]
    fn order_zero_is_grid_l2() {
        let g = GridFunction2D::from_fn(3.0, 32, |x1, x2| Complex64::new((x1 * 1.3).sin(), x2.cos() * x1))
            .unwrap();
        assert!((sobolev_norm_grid(&g, 0.0).unwrap() - g.l2_norm()).abs() < 1e-10 * g.l2_norm());
    }

    #[test]
    fn gaussian_order_one_closed_form() {
        // unitary transform of e^{-|q|^2} is e^{-|p|^2/4}/2, so the squared
        // norm is int (1 + p^2) e^{-p^2/2} / 4 dp = 3 pi / 2
        let g = gaussian(8.0, 256);
        let got = sobolev_norm_grid(&g, 1.0).unwrap();
        let want = (1.5 * PI).sqrt();
        assert!((got - want).abs() < 0.01 * want);
        // order 0: pi / 2
        let l2 = sobolev_norm_grid(&g, 0.0).unwrap();
        assert!((l2 - (0.5 * PI).sqrt()).abs() < 1e-10);
        assert!(sobolev_norm_grid(&g, -0.5).unwrap() <= l2);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let g = GridFunction2D::zeros(1.0, 12).unwrap();
        assert!(matches!(sobolev_norm_grid(&g, 0.0), Err(Error::NonPowerOfTwo(12))));
    }

    #[test]
    fn dilation_by_one_is_identity() {
        let g = gaussian(6.0, 64);
        let d = dilate(&g, 1.0).unwrap();
        for (a, b) in g.values().iter().zip(d.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn scaling_order_zero_is_exact_change_of_variables() {
        let g = gaussian(8.0, 128);
        for sigma in [0.5, 2.0] {
            let chk = scaling_check(&g, sigma, 0.0).unwrap();
            let base = sobolev_norm_grid(&g, 0.0).unwrap();
            assert!((chk.value - base / sigma).abs() < 1e-9 * base, "sigma={sigma}");
            assert!(chk.holds());
        }
    }

    #[test]
    fn scaling_bounds_hold() {
        let g = gaussian(8.0, 128);
        for sigma in [0.5, 2.0] {
            for order in [-0.5, 0.0, 1.0] {
                assert!(scaling_check(&g, sigma, order).unwrap().holds(), "sigma={sigma} order={order}");
            }
        }
        let at_one = scaling_check(&g, 1.0, 1.0).unwrap();
        assert!((at_one.lower * 2.0 - at_one.value).abs() < 1e-9);
        assert!((at_one.upper / 2.0 - at_one.value).abs() < 1e-9);
    }

    #[test]
    fn rejects_unrepresentable_dilates() {
        let wide = gaussian(2.0, 64);
        assert!(matches!(scaling_check(&wide, 0.5, 0.0), Err(Error::DilateOutsideExtent(_))));
        let sharp = GridFunction2D::from_fn(8.0, 64, |x1, x2| Complex64::new((-(x1 * x1 + x2 * x2) * 4.0).exp(), 0.0))
            .unwrap();
        assert!(matches!(scaling_check(&sharp, 4.0, 0.0), Err(Error::DilateOutsideExtent(_))));
    }
}

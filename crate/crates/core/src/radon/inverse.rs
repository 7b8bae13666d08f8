//! Inverse Radon transform in the plane by direct quadrature of
//!
//!   v(q) = (1/2pi) int_{S^1} int_0^inf e^{-is theta.q} u^(s, theta) s ds dtheta,
//!   u^(s, theta) = (1/2pi) int e^{ist} u(t, theta) dt.
//!
//! Pairing theta with -theta folds the s-integral into the real kernel
//! K(tau) = (1/pi) int_0^{s_max} s cos(s tau) ds, so that
//! v(q) = (1/2pi) int_0^pi int u(t, theta) K(t - theta.q) dt dphi.
//! Per angle, h(tau) = int u(t) K(t - tau) dt is tabulated on a lattice
//! commensurate with the offset grid and then interpolated linearly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{axis, GridFunction2D};
use super::sinogram::Sinogram;
use crate::error::{Error, Result};

pub const MIN_ANGLES: usize = 8;
/// Largest phase step s_max * dt per lattice cell.
const LATTICE_PHASE_STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InverseRadonOptions {
    /// Truncation of the radial frequency integral; defaults to twice the
    /// Nyquist frequency pi / h of the target grid.
    pub s_max: Option<f64>,
    /// Number of radial frequency nodes; defaults to 4 M.
    pub s_points: Option<usize>,
}

/// Trapezoid discretization of K on a uniform s-grid.
struct Kernel {
    s: Vec<f64>,
    w: Vec<f64>,
}

impl Kernel {
    fn new(s_max: f64, points: usize) -> Self {
        let ds = s_max / (points - 1) as f64;
        let s = (0..points).map(|j| j as f64 * ds).collect();
        let w = (0..points)
            .map(|j| if j == 0 || j + 1 == points { 0.5 * ds } else { ds })
            .collect();
        Self { s, w }
    }

    fn eval(&self, tau: f64) -> f64 {
        self.s
            .iter()
            .zip(&self.w)
            .map(|(s, w)| w * s * (s * tau).cos())
            .sum::<f64>()
            / PI
    }
}

/// Reconstructs v on the G x G grid covering [-extent, extent)^2.
pub fn inverse_radon(
    sino: &Sinogram,
    extent: f64,
    size: usize,
    opts: InverseRadonOptions,
) -> Result<GridFunction2D> {
    if sino.angles() < MIN_ANGLES {
        return Err(Error::InsufficientAngles(sino.angles()));
    }
    if !(extent.is_finite() && extent > 0.0) || size < 2 {
        return Err(Error::Invalid(format!(
            "target grid needs extent > 0 and size >= 2, got {extent} and {size}"
        )));
    }
    let m = sino.samples();
    let h_grid = 2.0 * extent / size as f64;
    let s_max = opts.s_max.unwrap_or(2.0 * PI / h_grid);
    let s_points = opts.s_points.unwrap_or(4 * m);
    if !(s_max.is_finite() && s_max > 0.0) || s_points < 2 {
        return Err(Error::Invalid(format!(
            "radial quadrature needs s_max > 0 and >= 2 nodes, got {s_max} and {s_points}"
        )));
    }
    let kernel = Kernel::new(s_max, s_points);

    let dy = sino.spacing();
    // even refinement keeps the offset grid on the lattice
    let refine = ((s_max * dy / LATTICE_PHASE_STEP).ceil() as usize).max(2).next_multiple_of(2);
    let dt = dy / refine as f64;
    // lattice t_l = l dt for |t| <= reach covers every theta.q on the grid
    let reach = extent * std::f64::consts::SQRT_2 + dt;
    let half_len = (reach / dt).ceil() as i64;
    let lattice_len = (2 * half_len + 1) as usize;

    // offsets y_m = -1 + m dy = (m refine - c0) dt and t_l = (l - half_len) dt,
    // so y_m - t_l is lattice point m refine - c0 - (l - half_len)
    let c0 = ((m - 1) * refine / 2) as i64;
    let kmin = -(c0 + half_len) - 1;
    let kmax = (m as i64 - 1) * refine as i64 - c0 + half_len + 1;
    let ktab: Vec<f64> = (kmin..=kmax)
        .into_par_iter()
        .map(|k| kernel.eval(k as f64 * dt))
        .collect();

    let weights: Vec<f64> = (0..m)
        .map(|i| if i == 0 || i + 1 == m { 0.5 * dy } else { dy })
        .collect();

    let k_angles = sino.angles();
    let tables: Vec<Vec<Complex64>> = (0..k_angles)
        .into_par_iter()
        .map(|k| {
            let col = sino.column(k);
            let mut table = vec![Complex64::new(0.0, 0.0); lattice_len];
            for (mi, (u, w)) in col.iter().zip(&weights).enumerate() {
                if u.re == 0.0 && u.im == 0.0 {
                    continue;
                }
                let uw = u * w;
                let base = mi as i64 * refine as i64 - c0;
                for (l, slot) in table.iter_mut().enumerate() {
                    let idx = base - (l as i64 - half_len) - kmin;
                    *slot += uw * ktab[idx as usize];
                }
            }
            table
        })
        .collect();

    let xs = axis(extent, size);
    let dirs: Vec<(f64, f64)> = (0..k_angles)
        .map(|k| {
            let phi = sino.phi(k);
            (phi.cos(), phi.sin())
        })
        .collect();
    let t0 = -(half_len as f64) * dt;
    let norm = 1.0 / (2.0 * k_angles as f64);
    let values: Vec<Complex64> = (0..size * size)
        .into_par_iter()
        .map(|idx| {
            let q1 = xs[idx % size];
            let q2 = xs[idx / size];
            let mut acc = Complex64::new(0.0, 0.0);
            for (table, (c, s)) in tables.iter().zip(&dirs) {
                let pos = (c * q1 + s * q2 - t0) / dt;
                let l = (pos.floor() as usize).min(lattice_len - 2);
                let frac = pos - l as f64;
                acc += table[l] * (1.0 - frac) + table[l + 1] * frac;
            }
            acc * norm
        })
        .collect();
    GridFunction2D::new(extent, size, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radon::phantom::Phantom;

    #[test]
    fn kernel_matches_closed_form() {
        // (1/pi) int_0^S s cos(s tau) ds = (S sin(S tau)/tau + (cos(S tau) - 1)/tau^2) / pi
        let kern = Kernel::new(20.0, 4001);
        for tau in [0.3, 1.0, 2.5] {
            let s: f64 = 20.0;
            let exact = (s * (s * tau).sin() / tau + ((s * tau).cos() - 1.0) / (tau * tau)) / PI;
            assert!((kern.eval(tau) - exact).abs() < 1e-3 * exact.abs().max(1.0));
        }
        assert!((kern.eval(0.0) - 200.0 / PI).abs() < 1e-3);
    }

    #[test]
    fn zero_sinogram_gives_zero() {
        let s = Sinogram::zeros(33, 16).unwrap();
        let g = inverse_radon(&s, 1.0, 16, InverseRadonOptions::default()).unwrap();
        assert!(g.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rejects_few_angles() {
        let s = Sinogram::zeros(33, 7).unwrap();
        assert!(matches!(
            inverse_radon(&s, 1.0, 16, InverseRadonOptions::default()),
            Err(Error::InsufficientAngles(7))
        ));
    }

    #[test]
    fn disk_centre_and_outside() {
        let disk = Phantom::disk(0.5);
        let s = Sinogram::from_phantom(&disk, 256, 180).unwrap();
        let opts = InverseRadonOptions {
            s_max: Some(40.0),
            s_points: None,
        };
        let g = inverse_radon(&s, 1.0, 64, opts).unwrap();
        // cutting the radial integral at S leaves 1 - J0(a S) at the centre
        let centre = g.get(32, 32);
        let want = 1.0 - crate::radon::bessel::j0(0.5 * 40.0);
        assert!((centre.re - want).abs() < 0.01 && centre.im.abs() < 1e-12, "centre {centre}");
        // |q| = 0.9 along the first axis: x = -1 + j/32
        let far = g.get(32, 61);
        assert!(far.norm() <= 0.05, "far {far}");
    }
}

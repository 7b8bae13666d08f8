//! Analytic test functions with closed-form Fourier and Radon transforms.
//!
//! Fourier transforms use the convention v^(p) = (2pi)^{-d} int e^{ipq} v(q) dq.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::j1_over_x;
use crate::error::{Error, Result};
use crate::pswf::GaussLegendre;

const CHORD_NODES: usize = 96;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Phantom {
    /// Indicator of [a, b] on the line.
    Interval { a: f64, b: f64 },
    /// Triangle of height one, supported on [center - half_width, center + half_width].
    Hat { center: f64, half_width: f64 },
    /// Indicator of a disk in the plane.
    Disk {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Sum { parts: Vec<Phantom> },
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn direction(phi: f64) -> [f64; 2] {
    [phi.cos(), phi.sin()]
}

impl Phantom {
    pub fn disk(radius: f64) -> Self {
        Phantom::Disk {
            center: [0.0, 0.0],
            radius,
        }
    }

    pub fn hat(center: f64, half_width: f64) -> Self {
        Phantom::Hat { center, half_width }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            Phantom::Interval { a, b } if finite(&[*a, *b]) && a < b => Ok(()),
            Phantom::Hat { center, half_width } if finite(&[*center, *half_width]) && *half_width > 0.0 => {
                Ok(())
            }
            Phantom::Disk { center, radius } if finite(center) && radius.is_finite() && *radius > 0.0 => {
                Ok(())
            }
            Phantom::Sum { parts } if !parts.is_empty() => {
                let d = parts[0].dimension();
                for p in parts {
                    p.validate()?;
                    if p.dimension() != d {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            found: p.dimension(),
                        });
                    }
                }
                Ok(())
            }
            other => Err(Error::Invalid(format!("malformed phantom {other:?}"))),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Phantom::Interval { .. } | Phantom::Hat { .. } => 1,
            Phantom::Disk { .. } => 2,
            Phantom::Sum { parts } => parts.first().map_or(1, Phantom::dimension),
        }
    }

    fn check_dimension(&self, d: usize) -> Result<()> {
        if self.dimension() == d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: d,
            })
        }
    }

    /// Supremum of the Sobolev orders nu with v in H^nu: jumps cap it at
    /// 1/2, kinks at 3/2.
    pub fn sobolev_limit(&self) -> f64 {
        match self {
            Phantom::Interval { .. } | Phantom::Disk { .. } => 0.5,
            Phantom::Hat { .. } => 1.5,
            Phantom::Sum { parts } => parts.iter().map(Phantom::sobolev_limit).fold(f64::INFINITY, f64::min),
        }
    }

    /// Radius of the smallest origin-centred ball containing the support.
    pub fn support_radius(&self) -> f64 {
        match self {
            Phantom::Interval { a, b } => a.abs().max(b.abs()),
            Phantom::Hat { center, half_width } => center.abs() + half_width,
            Phantom::Disk { center, radius } => center[0].hypot(center[1]) + radius,
            Phantom::Sum { parts } => parts.iter().map(Phantom::support_radius).fold(0.0, f64::max),
        }
    }

    /// Point value; `q` has one entry per dimension.
    pub fn value(&self, q: &[f64]) -> Result<f64> {
        self.check_dimension(q.len())?;
        Ok(self.value_unchecked(q))
    }

    fn value_unchecked(&self, q: &[f64]) -> f64 {
        match self {
            Phantom::Interval { a, b } => {
                if (*a..=*b).contains(&q[0]) {
                    1.0
                } else {
                    0.0
                }
            }
            Phantom::Hat { center, half_width } => (1.0 - (q[0] - center).abs() / half_width).max(0.0),
            Phantom::Disk { center, radius } => {
                if (q[0] - center[0]).hypot(q[1] - center[1]) <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            Phantom::Sum { parts } => parts.iter().map(|p| p.value_unchecked(q)).sum(),
        }
    }

    /// Closed-form v^(p).
    pub fn fourier(&self, p: &[f64]) -> Result<Complex64> {
        self.check_dimension(p.len())?;
        Ok(self.fourier_unchecked(p))
    }

    fn fourier_unchecked(&self, p: &[f64]) -> Complex64 {
        match self {
            Phantom::Interval { a, b } => {
                let mid = 0.5 * (a + b);
                let len = b - a;
                Complex64::from_polar(len / (2.0 * PI) * sinc(0.5 * p[0] * len), p[0] * mid)
            }
            Phantom::Hat { center, half_width } => {
                let s = sinc(0.5 * p[0] * half_width);
                Complex64::from_polar(half_width * s * s / (2.0 * PI), p[0] * center)
            }
            Phantom::Disk { center, radius } => {
                let rho = p[0].hypot(p[1]);
                let mag = radius * radius / (2.0 * PI) * j1_over_x(radius * rho);
                Complex64::from_polar(mag, p[0] * center[0] + p[1] * center[1])
            }
            Phantom::Sum { parts } => parts.iter().map(|q| q.fourier_unchecked(p)).sum(),
        }
    }

    /// R[v](y, theta) with theta = (cos phi, sin phi).
    pub fn radon(&self, y: f64, phi: f64) -> Result<f64> {
        self.check_dimension(2)?;
        Ok(self.radon_unchecked(y, direction(phi)))
    }

    fn radon_unchecked(&self, y: f64, theta: [f64; 2]) -> f64 {
        match self {
            Phantom::Disk { center, radius } => {
                let t = y - (theta[0] * center[0] + theta[1] * center[1]);
                2.0 * (radius * radius - t * t).max(0.0).sqrt()
            }
            Phantom::Sum { parts } => parts.iter().map(|p| p.radon_unchecked(y, theta)).sum(),
            _ => 0.0,
        }
    }

    /// Points where a 1D phantom fails to be smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            Phantom::Interval { a, b } => vec![*a, *b],
            Phantom::Hat { center, half_width } => {
                vec![center - half_width, *center, center + half_width]
            }
            Phantom::Disk { .. } => Vec::new(),
            Phantom::Sum { parts } => parts.iter().flat_map(Phantom::breakpoints).collect(),
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// (2pi)^{-2} int e^{ist} R[v](t, theta) dt, integrated chord by chord
    /// with t = theta.c0 + a sin u so the square-root edges become smooth.
    fn slice_transform(&self, s: f64, theta: [f64; 2], rule: &GaussLegendre) -> Complex64 {
        match self {
            Phantom::Disk { center, radius } => {
                let t0 = theta[0] * center[0] + theta[1] * center[1];
                let (us, ws) = rule.on_interval(-0.5 * PI, 0.5 * PI);
                let integral: Complex64 = us
                    .iter()
                    .zip(&ws)
                    .map(|(&u, &w)| {
                        let cu = u.cos();
                        let jac = 2.0 * radius * radius * cu * cu;
                        Complex64::from_polar(w * jac, s * (t0 + radius * u.sin()))
                    })
                    .sum();
                integral / (4.0 * PI * PI)
            }
            Phantom::Sum { parts } => parts.iter().map(|p| p.slice_transform(s, theta, rule)).sum(),
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

/// Both sides of the projection theorem at (s, theta): the closed-form
/// v^(s theta) and the transform of the Radon projection by quadrature.
pub fn projection_theorem_check(phantom: &Phantom, s: f64, phi: f64) -> Result<(Complex64, Complex64)> {
    phantom.check_dimension(2)?;
    let theta = direction(phi);
    let lhs = phantom.fourier_unchecked(&[s * theta[0], s * theta[1]]);
    let rule = GaussLegendre::new(CHORD_NODES);
    let rhs = phantom.slice_transform(s, theta, &rule);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_at_origin() {
        let iv = Phantom::Interval { a: -1.0, b: 1.0 };
        assert!((iv.fourier(&[0.0]).unwrap().re - 1.0 / PI).abs() < 1e-15);
        let a = 0.7;
        let d = Phantom::disk(a);
        let v = d.fourier(&[0.0, 0.0]).unwrap();
        assert!((v.re - a * a / (4.0 * PI)).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn interval_matches_direct_formula() {
        let (a, b) = (-0.3, 0.8);
        let iv = Phantom::Interval { a, b };
        for p in [0.5, 3.0, -7.0] {
            let direct = (Complex64::from_polar(1.0, p * b) - Complex64::from_polar(1.0, p * a))
                / (Complex64::i() * 2.0 * PI * p);
            assert!((iv.fourier(&[p]).unwrap() - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn hat_matches_quadrature() {
        let h = Phantom::hat(0.2, 0.5);
        let rule = GaussLegendre::new(40);
        for p in [0.0, 2.0, 11.0] {
            let mut quad = Complex64::new(0.0, 0.0);
            for (lo, hi) in [(-0.3, 0.2), (0.2, 0.7)] {
                let (xs, ws) = rule.on_interval(lo, hi);
                for (x, w) in xs.iter().zip(&ws) {
                    quad += Complex64::from_polar(w * h.value(&[*x]).unwrap(), p * x);
                }
            }
            quad /= 2.0 * PI;
            assert!((h.fourier(&[p]).unwrap() - quad).norm() < 1e-13);
        }
    }

    #[test]
    fn disk_matches_polar_quadrature() {
        // int_0^1 int_0^{2pi} e^{i |p| rho cos t} rho dt drho / (2pi)^2
        let d = Phantom::disk(1.0);
        let p = 3.0;
        let rule = GaussLegendre::new(60);
        let (rs, ws) = rule.on_interval(0.0, 1.0);
        let nt = 256;
        let mut acc = Complex64::new(0.0, 0.0);
        for (rho, w) in rs.iter().zip(&ws) {
            for k in 0..nt {
                let t = 2.0 * PI * k as f64 / nt as f64;
                acc += Complex64::from_polar(w * rho * 2.0 * PI / nt as f64, p * rho * t.cos());
            }
        }
        acc /= 4.0 * PI * PI;
        let got = d.fourier(&[p * 0.6, p * 0.8]).unwrap();
        assert!((got - acc).norm() < 1e-8);
        assert!((got.re - super::super::bessel::j1(3.0) / (6.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn disk_radon_values() {
        let a = 0.7;
        let d = Phantom::disk(a);
        assert!((d.radon(0.0, 0.3).unwrap() - 2.0 * a).abs() < 1e-15);
        assert_eq!(d.radon(0.7, 1.0).unwrap(), 0.0);
        assert_eq!(d.radon(-0.9, 1.0).unwrap(), 0.0);
        // chord length by midpoint quadrature of the indicator along the line
        let y = 0.5;
        let n = 400_000;
        let h = 2.0 / n as f64;
        let chord: f64 = (0..n)
            .map(|k| {
                let t = -1.0 + (k as f64 + 0.5) * h;
                d.value(&[y, t]).unwrap() * h
            })
            .sum();
        let want = 2.0 * 0.24f64.sqrt();
        assert!((d.radon(y, 2.1).unwrap() - want).abs() < 1e-12);
        assert!((chord - want).abs() < 1e-4);
    }

    #[test]
    fn projection_theorem_holds() {
        let d = Phantom::disk(1.0);
        let (l, r) = projection_theorem_check(&d, 0.0, 0.4).unwrap();
        assert!((l.re - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((r - l).norm() < 1e-14);
        let (l, r) = projection_theorem_check(&d, 3.0, 1.1).unwrap();
        assert!((l - r).norm() < 1e-8);

        let two = Phantom::Sum {
            parts: vec![
                Phantom::Disk { center: [0.2, -0.1], radius: 0.3 },
                Phantom::Disk { center: [-0.3, 0.25], radius: 0.2 },
            ],
        };
        let (l, r) = projection_theorem_check(&two, 2.0, 0.7).unwrap();
        let (l1, _) = projection_theorem_check(&Phantom::Disk { center: [0.2, -0.1], radius: 0.3 }, 2.0, 0.7).unwrap();
        let (l2, _) = projection_theorem_check(&Phantom::Disk { center: [-0.3, 0.25], radius: 0.2 }, 2.0, 0.7).unwrap();
        assert!((l - (l1 + l2)).norm() < 1e-15);
        assert!((l - r).norm() < 1e-8);
    }

    #[test]
    fn dimension_checks_and_validation() {
        assert!(Phantom::hat(0.0, 0.5).radon(0.0, 0.0).is_err());
        assert!(Phantom::disk(0.5).fourier(&[1.0]).is_err());
        assert!(Phantom::Interval { a: 1.0, b: 0.0 }.validate().is_err());
        assert!(Phantom::Sum { parts: vec![Phantom::disk(0.1), Phantom::hat(0.0, 1.0)] }
            .validate()
            .is_err());
        let p: Phantom = serde_json::from_str(r#"{"kind":"disk","radius":0.5}"#).unwrap();
        assert_eq!(p, Phantom::disk(0.5));
        assert_eq!(Phantom::hat(0.1, 0.2).breakpoints().len(), 3);
    }
}

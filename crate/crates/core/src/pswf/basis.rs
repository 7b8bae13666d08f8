use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{normalized_legendre_into, GaussLegendre};
use super::tridiag::symmetric_tridiagonal_eigen;
use crate::error::{Error, Result};

/// Eigenpairs with lambda below this cannot be certified in double precision.
pub const DEFAULT_LAMBDA_FLOOR: f64 = 1e-13;

/// Trailing Legendre coefficients of the highest requested row must fall
/// below this for the expansion degree to be accepted.
const TAIL_TOLERANCE: f64 = 1e-15;

/// Number of trailing coefficients inspected by the tail check.
const TAIL_WIDTH: usize = 4;

/// Minimum |psi(x*)| accepted when dividing out the eigen-relation.
const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Allowed deviation of mu_n / |mu_n| from i^n for a certified mode.
const PHASE_TOLERANCE: f64 = 1e-6;

/// Dimensionless bandwidth c > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Bandwidth(f64);

impl Bandwidth {
    pub fn new(c: f64) -> Result<Self> {
        if c.is_finite() && c > 0.0 {
            Ok(Self(c))
        } else {
            Err(Error::InvalidBandwidth(c))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Whether every requested mode was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Coverage {
    Complete,
    Truncated { requested: usize, achieved: usize },
}

/// PSWF system (psi_{n,c})_{n <= n_max} for a fixed bandwidth.
///
/// Each psi_n is stored by its coefficients in the orthonormal Legendre
/// basis sqrt(k + 1/2) P_k, together with the Sturm–Liouville eigenvalue
/// chi_n, the eigenvalue mu_n of the finite Fourier operator and
/// lambda_n = c |mu_n|^2 / (2 pi). Immutable after construction.
#[derive(Debug, Clone)]
pub struct PswfBasis {
    c: Bandwidth,
    n_max: usize,
    legendre_degree: usize,
    coeffs: Vec<Vec<f64>>,
    chi: Vec<f64>,
    lambda: Vec<f64>,
    mu: Vec<Complex64>,
    quadrature: GaussLegendre,
    psi_nodes: Vec<Vec<f64>>,
    lambda_floor: f64,
    coverage: Coverage,
}

impl PswfBasis {
    /// Builds the basis up to `n_request`, keeping only modes whose lambda
    /// stays above `lambda_floor`.
    ///
    /// The Sturm–Liouville operator -(d/dx)(1 - x^2)(d/dx) + c^2 x^2 is
    /// diagonal plus a c^2 x^2 coupling between Legendre degrees k and
    /// k + 2, so it splits into an even and an odd symmetric tridiagonal
    /// block. A run that stops short of `n_request` is not an error; it is
    /// reported through [`PswfBasis::coverage`].
    pub fn build(c: Bandwidth, n_request: usize, lambda_floor: f64) -> Result<Self> {
        if !(lambda_floor > 0.0 && lambda_floor < 1.0) {
            return Err(Error::InvalidParameter {
                name: "lambda_floor",
                value: lambda_floor,
                constraint: "(0,1)",
            });
        }
        let cv = c.value();
        let base_degree = 2 * n_request + cv.ceil() as usize + 30;

        let mut degree = base_degree;
        let (chi, coeffs) = loop {
            let (chi, coeffs) = galerkin_eigenpairs(cv, degree, n_request)?;
            let row = &coeffs[n_request];
            let tail = row[row.len() - TAIL_WIDTH..]
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            if tail < TAIL_TOLERANCE || degree != base_degree {
                break (chi, coeffs);
            }
            degree *= 2;
        };

        let quadrature = GaussLegendre::new(degree + cv.ceil() as usize + 10);
        let psi_nodes = synthesize_at(&coeffs, degree, quadrature.nodes());

        let mut mu = Vec::with_capacity(n_request + 1);
        let mut lambda: Vec<f64> = Vec::with_capacity(n_request + 1);
        for (n, values) in psi_nodes.iter().enumerate() {
            let m = eigen_relation_mu(cv, quadrature.nodes(), quadrature.weights(), values, n)?;
            let l = cv / (2.0 * PI) * m.norm_sqr();
            let phase_ok = (m / m.norm() - i_pow(n)).norm() <= PHASE_TOLERANCE;
            let decreasing = lambda.last().is_none_or(|&prev| l < prev);
            if !(l >= lambda_floor && phase_ok && decreasing) {
                break;
            }
            mu.push(m);
            lambda.push(l);
        }
        if mu.is_empty() {
            return Err(Error::BeyondLambdaFloor {
                n: 0,
                n_max: 0,
                floor: lambda_floor,
            });
        }
        let n_max = mu.len() - 1;
        let coverage = if n_max < n_request {
            Coverage::Truncated {
                requested: n_request,
                achieved: n_max,
            }
        } else {
            Coverage::Complete
        };

        let mut chi = chi;
        let mut coeffs = coeffs;
        let mut psi_nodes = psi_nodes;
        chi.truncate(n_max + 1);
        coeffs.truncate(n_max + 1);
        psi_nodes.truncate(n_max + 1);

        Ok(Self {
            c,
            n_max,
            legendre_degree: degree,
            coeffs,
            chi,
            lambda,
            mu,
            quadrature,
            psi_nodes,
            lambda_floor,
            coverage,
        })
    }

    /// [`PswfBasis::build`] with the default lambda floor.
    pub fn with_default_floor(c: f64, n_request: usize) -> Result<Self> {
        Self::build(Bandwidth::new(c)?, n_request, DEFAULT_LAMBDA_FLOOR)
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.c
    }

    pub fn c(&self) -> f64 {
        self.c.value()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn lambda_floor(&self) -> f64 {
        self.lambda_floor
    }

    /// Highest Legendre degree N_leg in the expansion.
    pub fn legendre_degree(&self) -> usize {
        self.legendre_degree
    }

    pub fn legendre_coeffs(&self, n: usize) -> Result<&[f64]> {
        self.check_index(n)?;
        Ok(&self.coeffs[n])
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }

    pub fn quadrature(&self) -> &GaussLegendre {
        &self.quadrature
    }

    pub fn nodes(&self) -> &[f64] {
        self.quadrature.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.quadrature.weights()
    }

    /// psi_n sampled on the quadrature nodes.
    pub fn psi_at_nodes(&self, n: usize) -> Result<&[f64]> {
        self.check_index(n)?;
        Ok(&self.psi_nodes[n])
    }

    pub(crate) fn check_index(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            Err(Error::IndexOutOfRange {
                n,
                n_max: self.n_max,
            })
        } else {
            Ok(())
        }
    }

    /// psi_n(x) by Legendre recurrence summed against row n.
    pub fn eval_psi(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        check_unit_interval(x)?;
        let mut leg = Vec::new();
        normalized_legendre_into(self.legendre_degree, x, &mut leg);
        Ok(dot(&self.coeffs[n], &leg))
    }

    /// psi_0(x), ..., psi_n(x) sharing one Legendre recurrence.
    pub fn eval_upto(&self, n: usize, x: f64) -> Result<Vec<f64>> {
        self.check_index(n)?;
        check_unit_interval(x)?;
        let mut leg = Vec::new();
        normalized_legendre_into(self.legendre_degree, x, &mut leg);
        Ok(self.coeffs[..=n].iter().map(|row| dot(row, &leg)).collect())
    }

    /// Coefficient f_n = int psi_n f over [-1, 1] from samples on the
    /// quadrature nodes.
    pub fn inner_product(&self, samples: &[Complex64], n: usize) -> Result<Complex64> {
        self.check_index(n)?;
        self.check_samples(samples.len())?;
        Ok(self.psi_nodes[n]
            .iter()
            .zip(self.weights())
            .zip(samples)
            .map(|((p, w), f)| f * (p * w))
            .sum())
    }

    /// Real-valued variant of [`PswfBasis::inner_product`].
    pub fn inner_product_real(&self, samples: &[f64], n: usize) -> Result<f64> {
        self.check_index(n)?;
        self.check_samples(samples.len())?;
        Ok(self.psi_nodes[n]
            .iter()
            .zip(self.weights())
            .zip(samples)
            .map(|((p, w), f)| p * w * f)
            .sum())
    }

    pub(crate) fn check_samples(&self, len: usize) -> Result<()> {
        if len != self.quadrature.len() {
            Err(Error::LengthMismatch {
                expected: self.quadrature.len(),
                found: len,
            })
        } else {
            Ok(())
        }
    }
}

/// mu_n from the eigen-relation F_c[psi_n](x*) = mu_n psi_n(x*), with x*
/// the node where |psi_n| is largest and F_c applied by quadrature.
pub fn eigen_relation_mu(
    c: f64,
    nodes: &[f64],
    weights: &[f64],
    psi: &[f64],
    n: usize,
) -> Result<Complex64> {
    if psi.len() != nodes.len() || weights.len() != nodes.len() {
        return Err(Error::LengthMismatch {
            expected: nodes.len(),
            found: psi.len(),
        });
    }
    let (star, &peak) = psi
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .ok_or(Error::LengthMismatch {
            expected: 1,
            found: 0,
        })?;
    if peak.abs() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateEigenfunction {
            n,
            value: peak.abs(),
        });
    }
    let x = nodes[star];
    let integral: Complex64 = nodes
        .iter()
        .zip(weights)
        .zip(psi)
        .map(|((&y, &w), &p)| Complex64::from_polar(w * p, c * x * y))
        .sum();
    Ok(integral / peak)
}

/// i^n
pub(crate) fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn check_unit_interval(x: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::PointOutsideInterval(x))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvalues chi_0..=chi_n and full Legendre coefficient rows.
fn galerkin_eigenpairs(c: f64, degree: usize, n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let c2 = c * c;
    let diag_entry = |k: usize| {
        let kf = k as f64;
        kf * (kf + 1.0) + c2 * (2.0 * kf * (kf + 1.0) - 1.0) / ((2.0 * kf + 3.0) * (2.0 * kf - 1.0))
    };
    let off_entry = |k: usize| {
        let kf = k as f64;
        c2 * (kf + 1.0) * (kf + 2.0)
            / ((2.0 * kf + 3.0) * ((2.0 * kf + 1.0) * (2.0 * kf + 5.0)).sqrt())
    };

    let mut chi = vec![0.0; n + 1];
    let mut rows = vec![vec![0.0; degree + 1]; n + 1];
    for parity in 0..2usize {
        let degrees: Vec<usize> = (parity..=degree).step_by(2).collect();
        let diag: Vec<f64> = degrees.iter().map(|&k| diag_entry(k)).collect();
        let off: Vec<f64> = degrees[..degrees.len() - 1]
            .iter()
            .map(|&k| off_entry(k))
            .collect();
        let eig = symmetric_tridiagonal_eigen(&diag, &off)?;
        for (j, (value, vector)) in eig.values.iter().zip(&eig.vectors).enumerate() {
            let idx = 2 * j + parity;
            if idx > n {
                break;
            }
            // sign: degree-idx Legendre coefficient positive
            let sign = if vector[j] < 0.0 { -1.0 } else { 1.0 };
            chi[idx] = *value;
            for (&k, &v) in degrees.iter().zip(vector) {
                rows[idx][k] = sign * v;
            }
        }
    }
    Ok((chi, rows))
}

fn synthesize_at(rows: &[Vec<f64>], degree: usize, xs: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; xs.len()]; rows.len()];
    let mut leg = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        normalized_legendre_into(degree, x, &mut leg);
        for (n, row) in rows.iter().enumerate() {
            out[n][i] = dot(row, &leg);
        }
    }
    out
}

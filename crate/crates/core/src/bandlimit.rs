//! The one-dimensional operator layer on [-1, 1]: the finite Fourier
//! operator F_c, projections onto leading PSWF modes, the truncated inverse
//! and the truncation rule n*(c, alpha, delta).
//!
//! Functions enter as samples on the basis quadrature nodes; synthesized
//! output goes onto whatever grid the caller supplies.

use std::f64::consts::E;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_open_unit, Error, Result};
use crate::pswf::{Bandwidth, Coverage, GaussLegendre, PswfBasis};

const TAU_TOLERANCE: f64 = 1e-12;
const TAU_MAX_ITER: usize = 100;

/// PSWF coefficients (f_{n,c})_{n = 0..len-1} of a function on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    c: Bandwidth,
    values: Vec<Complex64>,
}

impl Coefficients {
    pub fn new(c: Bandwidth, values: Vec<Complex64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Invalid(format!("non-finite coefficient {bad}")));
        }
        Ok(Self { c, values })
    }

    pub fn zeros(c: Bandwidth, len: usize) -> Self {
        Self {
            c,
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.c
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Euclidean norm, equal to the L2([-1, 1]) norm of the synthesized
    /// function by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_basis(&self, basis: &PswfBasis) -> Result<()> {
        if self.c != basis.bandwidth() {
            return Err(Error::BandwidthMismatch {
                data: self.c.value(),
                basis: basis.c(),
            });
        }
        if self.values.len() > basis.n_max() + 1 {
            return Err(Error::IndexOutOfRange {
                n: self.values.len() - 1,
                n_max: basis.n_max(),
            });
        }
        Ok(())
    }

    /// sum_j f_j psi_j(y) on `grid`.
    pub fn synthesize(&self, basis: &PswfBasis, grid: &[f64]) -> Result<Vec<Complex64>> {
        self.check_basis(basis)?;
        if self.values.is_empty() {
            return Ok(vec![Complex64::new(0.0, 0.0); grid.len()]);
        }
        let top = self.values.len() - 1;
        grid.iter()
            .map(|&y| {
                let psi = basis.eval_upto(top, y)?;
                Ok(psi.iter().zip(&self.values).map(|(p, v)| v * p).sum())
            })
            .collect()
    }

    /// Same as [`Coefficients::synthesize`] on the quadrature nodes, using
    /// the cached psi samples.
    pub fn synthesize_at_nodes(&self, basis: &PswfBasis) -> Result<Vec<Complex64>> {
        self.check_basis(basis)?;
        let mut out = vec![Complex64::new(0.0, 0.0); basis.nodes().len()];
        for (n, v) in self.values.iter().enumerate() {
            for (o, p) in out.iter_mut().zip(basis.psi_at_nodes(n)?) {
                *o += v * p;
            }
        }
        Ok(out)
    }
}

/// g(x) = int_{-1}^{1} e^{icxy} f(y) dy for x on `grid`, with f given on the
/// quadrature nodes.
pub fn apply_fc(basis: &PswfBasis, f: &[Complex64], grid: &[f64]) -> Result<Vec<Complex64>> {
    basis.check_samples(f.len())?;
    let c = basis.c();
    grid.iter()
        .map(|&x| {
            if !(-1.0..=1.0).contains(&x) {
                return Err(Error::PointOutsideInterval(x));
            }
            Ok(basis
                .nodes()
                .iter()
                .zip(basis.weights())
                .zip(f)
                .map(|((&y, &w), fy)| fy * Complex64::from_polar(w, c * x * y))
                .sum())
        })
        .collect()
}

/// Leading coefficients f_0..=f_n, i.e. the projection pi_n[f].
pub fn project(basis: &PswfBasis, f: &[Complex64], n: usize) -> Result<Coefficients> {
    basis.check_index(n)?;
    basis.check_samples(f.len())?;
    let values = (0..=n)
        .map(|j| basis.inner_product(f, j))
        .collect::<Result<Vec<_>>>()?;
    Coefficients::new(basis.bandwidth(), values)
}

/// Coefficients of F^{-1}_{n,c}[w] = sum_{j <= n} <psi_j, w> / mu_j psi_j.
pub fn truncated_inverse_coefficients(
    basis: &PswfBasis,
    w: &[Complex64],
    n: usize,
) -> Result<Coefficients> {
    if n > basis.n_max() {
        return Err(Error::BeyondLambdaFloor {
            n,
            n_max: basis.n_max(),
            floor: basis.lambda_floor(),
        });
    }
    basis.check_samples(w.len())?;
    let values = (0..=n)
        .map(|j| Ok(basis.inner_product(w, j)? / basis.mu()[j]))
        .collect::<Result<Vec<_>>>()?;
    Coefficients::new(basis.bandwidth(), values)
}

/// F^{-1}_{n,c}[w] evaluated on `grid`.
pub fn truncated_inverse(
    basis: &PswfBasis,
    w: &[Complex64],
    n: usize,
    grid: &[f64],
) -> Result<Vec<Complex64>> {
    truncated_inverse_coefficients(basis, w, n)?.synthesize(basis, grid)
}

/// The unique tau > 1 with tau log tau = rho.
///
/// Newton from the midpoint of [max(1, rho / log(1 + rho)), 1 + rho], with
/// bisection on that bracket if Newton leaves it or stalls.
pub fn solve_tau(rho: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            constraint: "> 0",
        });
    }
    let (lo, hi) = tau_bracket(rho);
    let f = |t: f64| t * t.ln() - rho;

    let mut tau = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..TAU_MAX_ITER {
        let step = f(tau) / (tau.ln() + 1.0);
        let next = tau - step;
        if !(next.is_finite() && next >= lo && next <= hi) {
            break;
        }
        tau = next;
        if step.abs() <= 4.0 * f64::EPSILON * tau {
            converged = true;
            break;
        }
    }
    if !converged || f(tau).abs() > TAU_TOLERANCE {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if f(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        tau = if f(a).abs() < f(b).abs() { a } else { b };
    }
    Ok(tau.clamp(lo, hi))
}

/// Enclosure rho / log(1 + rho) <= tau(rho) <= 1 + rho (lower end at least 1).
pub fn tau_bracket(rho: f64) -> (f64, f64) {
    let lo = (rho / rho.ln_1p()).max(1.0);
    (lo, 1.0 + rho)
}

/// Regularization parameters and the quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegParams {
    pub c: f64,
    pub alpha: f64,
    pub delta: f64,
    /// A priori bound N on the data norm; the noise level is delta * N.
    pub noise_scale: f64,
    pub rho: f64,
    pub tau: f64,
    pub n_star: usize,
}

/// rho = 4 alpha log(1/delta) / (e c), tau from tau log tau = rho and
/// n* = floor(3 + tau e c / 4).
pub fn n_star(c: Bandwidth, alpha: f64, delta: f64) -> Result<RegParams> {
    check_open_unit("alpha", alpha)?;
    check_open_unit("delta", delta)?;
    let cv = c.value();
    let rho = 4.0 / (E * cv) * alpha * (1.0 / delta).ln();
    let tau = solve_tau(rho)?;
    let n_star = (3.0 + tau * E * cv / 4.0).floor() as usize;
    Ok(RegParams {
        c: cv,
        alpha,
        delta,
        noise_scale: 1.0,
        rho,
        tau,
        n_star,
    })
}

impl RegParams {
    pub fn with_noise_scale(mut self, n: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "noise_scale",
                value: n,
                constraint: ">= 0",
            });
        }
        self.noise_scale = n;
        Ok(self)
    }

    /// Truncation index actually usable with `basis`: n* itself, or n_max
    /// when n* lies past the certified range (flagged by the bool).
    pub fn effective_n(&self, basis: &PswfBasis) -> (usize, bool) {
        if self.n_star > basis.n_max() {
            (basis.n_max(), true)
        } else {
            (self.n_star, false)
        }
    }
}

/// delta / |mu_n| + proj_err: the error bound for F^{-1}_{n,c} applied to
/// data within delta of F_c[f], given proj_err = ||f - pi_n f||.
pub fn lemma13_bound(basis: &PswfBasis, n: usize, delta: f64, proj_err: f64) -> Result<f64> {
    basis.check_index(n)?;
    if !(delta >= 0.0 && proj_err >= 0.0) {
        return Err(Error::Invalid(format!(
            "delta and projection error must be >= 0, got {delta} and {proj_err}"
        )));
    }
    Ok(delta / basis.mu()[n].norm() + proj_err)
}

/// Both sides, in log form, of e^{eta (log eta - kappa)} <= (4 eta / c)^q delta^{-alpha}
/// with eta = q + tau e c / 4 and kappa = log(e c / 4).
pub fn lemma52_log_sides(c: Bandwidth, alpha: f64, delta: f64, q: f64) -> Result<(f64, f64)> {
    let params = n_star(c, alpha, delta)?;
    if !(q >= 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q,
            constraint: ">= 0",
        });
    }
    let cv = c.value();
    let kappa = (E * cv / 4.0).ln();
    let eta = q + params.tau * E * cv / 4.0;
    let lhs = eta * (eta.ln() - kappa);
    let rhs = q * (4.0 * eta / cv).ln() + alpha * (1.0 / delta).ln();
    Ok((lhs, rhs))
}

/// Value of the weighted norm (sum chi_n^nu |f_n|^2)^{1/2} together with
/// whether the series had to stop early.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HtildeNorm {
    pub value: f64,
    pub terms: usize,
    pub truncated: bool,
}

pub fn htilde_norm(basis: &PswfBasis, coeffs: &Coefficients, nu: f64) -> Result<HtildeNorm> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            constraint: ">= 0",
        });
    }
    coeffs.check_basis(basis)?;
    let value = coeffs
        .values()
        .iter()
        .zip(basis.chi())
        .map(|(v, chi)| chi.powf(nu) * v.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let truncated =
        coeffs.len() < basis.n_max() + 1 || matches!(basis.coverage(), Coverage::Truncated { .. });
    Ok(HtildeNorm {
        value,
        terms: coeffs.len(),
        truncated,
    })
}

/// Composite Gauss rule on [-1, 1] split at `breakpoints`, fine enough to
/// integrate products of a PSWF expansion with a piecewise polynomial of
/// low degree exactly.
pub fn piecewise_rule(basis: &PswfBasis, breakpoints: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| *b > -1.0 && *b < 1.0)
        .collect();
    cuts.push(-1.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let rule = GaussLegendre::new(basis.legendre_degree() + 16);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for pair in cuts.windows(2) {
        let (x, w) = rule.on_interval(pair[0], pair[1]);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

/// Coefficients f_0..=f_n of an arbitrary function that is smooth between
/// `breakpoints`, plus its squared L2([-1, 1]) norm on the same rule.
pub fn piecewise_coefficients<F>(
    basis: &PswfBasis,
    f: F,
    breakpoints: &[f64],
    n: usize,
) -> Result<(Coefficients, f64)>
where
    F: Fn(f64) -> Complex64,
{
    let (xs, ws) = piecewise_rule(basis, breakpoints);
    coefficients_on_rule(basis, f, &xs, &ws, n)
}

/// Same as [`piecewise_coefficients`] on a caller-supplied rule for [-1, 1].
pub fn coefficients_on_rule<F>(
    basis: &PswfBasis,
    f: F,
    xs: &[f64],
    ws: &[f64],
    n: usize,
) -> Result<(Coefficients, f64)>
where
    F: Fn(f64) -> Complex64,
{
    basis.check_index(n)?;
    let mut values = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut norm_sq = 0.0;
    for (&x, &w) in xs.iter().zip(ws) {
        let fx = f(x);
        norm_sq += w * fx.norm_sqr();
        for (v, p) in values.iter_mut().zip(basis.eval_upto(n, x)?) {
            *v += fx * (w * p);
        }
    }
    Ok((Coefficients::new(basis.bandwidth(), values)?, norm_sq))
}

/// ||f - sum_j a_j psi_j||_{L2([-1, 1])} measured by composite quadrature.
pub fn piecewise_l2_distance<F>(
    basis: &PswfBasis,
    coeffs: &Coefficients,
    f: F,
    breakpoints: &[f64],
) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    let (xs, ws) = piecewise_rule(basis, breakpoints);
    coeffs.check_basis(basis)?;
    let rec = coeffs.synthesize(basis, &xs)?;
    Ok(xs
        .iter()
        .zip(&ws)
        .zip(&rec)
        .map(|((&x, &w), r)| w * (f(x) - r).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// ||f - pi_n f|| from the coefficients and the squared norm of f.
pub fn projection_error(coeffs: &Coefficients, norm_sq: f64, n: usize) -> f64 {
    let kept: f64 = coeffs
        .values()
        .iter()
        .take(n + 1)
        .map(|v| v.norm_sqr())
        .sum();
    (norm_sq - kept).max(0.0).sqrt()
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::FourierData;
use super::pipeline::{
    h_minus_half_error, lemma13_bound_1d, reconstruct_regularized, sinogram_bound_2d, Recon2dOptions,
    Reconstruction,
};
use crate::bandlimit::n_star;
use crate::error::{check_open_unit, Error, Result};
use crate::pswf::{Bandwidth, PswfBasis, DEFAULT_LAMBDA_FLOOR};
use crate::radon::Phantom;

fn default_angles() -> usize {
    180
}

fn default_samples() -> usize {
    256
}

fn default_grid() -> usize {
    256
}

fn default_floor() -> f64 {
    DEFAULT_LAMBDA_FLOOR
}

/// Stability sweep description, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub phantom: Phantom,
    pub c: f64,
    pub r: f64,
    pub sigma: f64,
    pub alpha: f64,
    /// Noise levels, strictly decreasing.
    pub deltas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub beta: f64,
    pub mu: f64,
    /// A priori bound N on the data norm; defaults to norm_r of the exact data.
    #[serde(default)]
    pub noise_scale: Option<f64>,
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub s_max: Option<f64>,
    #[serde(default = "default_floor")]
    pub lambda_floor: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.phantom.validate()?;
        Bandwidth::new(self.c)?;
        let rs = self.r * self.sigma;
        if !(rs.is_finite() && rs > 0.0) || (rs - self.c).abs() > 1e-9 * self.c {
            return Err(Error::BandwidthMismatch { data: rs, basis: self.c });
        }
        check_open_unit("alpha", self.alpha)?;
        if self.deltas.is_empty() || self.seeds.is_empty() {
            return Err(Error::Invalid("deltas and seeds must be non-empty".into()));
        }
        for &d in &self.deltas {
            check_open_unit("delta", d)?;
        }
        if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Invalid("deltas must be strictly decreasing".into()));
        }
        if !(self.beta > 0.0 && self.beta < 1.0 - self.alpha) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: self.beta,
                constraint: "(0, 1 - alpha)",
            });
        }
        let d = self.phantom.dimension() as f64;
        let mu_max = self.phantom.sobolev_limit() + (d - 1.0) / 2.0;
        if !(self.mu > 0.0 && self.mu < mu_max) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: self.mu,
                constraint: "(0, nu + (d - 1) / 2)",
            });
        }
        if let Some(n) = self.noise_scale {
            if !(n.is_finite() && n >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "noise_scale",
                    value: n,
                    constraint: ">= 0",
                });
            }
        }
        if self.phantom.dimension() == 2 {
            if self.angles < crate::radon::inverse::MIN_ANGLES {
                return Err(Error::InsufficientAngles(self.angles));
            }
            if !self.grid.is_power_of_two() {
                return Err(Error::NonPowerOfTwo(self.grid));
            }
        }
        Ok(())
    }

    fn recon_options(&self) -> Recon2dOptions {
        Recon2dOptions {
            samples: self.samples,
            grid: self.grid,
            extent: None,
            s_max: self.s_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta: f64,
    pub n_star: usize,
    pub n_used: usize,
    pub clamped: bool,
    pub errors: Vec<f64>,
    pub mean_error: f64,
    pub lemma13_bound: f64,
    pub fit_residual: f64,
}

/// Non-negative least-squares fit of C1 delta^beta + C2 (log 1/delta)^-mu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoTermFit {
    pub c1: f64,
    pub c2: f64,
    pub beta: f64,
    pub mu: f64,
    /// ||fit - e|| / ||e|| over the sweep.
    pub relative_residual: f64,
}

impl TwoTermFit {
    pub fn eval(&self, delta: f64) -> f64 {
        self.c1 * delta.powf(self.beta) + self.c2 * (1.0 / delta).ln().powf(-self.mu)
    }
}

pub fn fit_two_term(deltas: &[f64], errors: &[f64], beta: f64, mu: f64) -> TwoTermFit {
    let a: Vec<f64> = deltas.iter().map(|d| d.powf(beta)).collect();
    let b: Vec<f64> = deltas.iter().map(|d| (1.0 / d).ln().powf(-mu)).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
    let (ae, be) = (dot(&a, errors), dot(&b, errors));

    let residual = |c1: f64, c2: f64| {
        a.iter()
            .zip(&b)
            .zip(errors)
            .map(|((x, y), e)| (c1 * x + c2 * y - e).powi(2))
            .sum::<f64>()
    };
    let mut candidates = vec![(0.0, 0.0), ((ae / aa).max(0.0), 0.0), (0.0, (be / bb).max(0.0))];
    let det = aa * bb - ab * ab;
    if det.abs() > 1e-14 * aa * bb {
        let c1 = (ae * bb - be * ab) / det;
        let c2 = (aa * be - ab * ae) / det;
        if c1 >= 0.0 && c2 >= 0.0 {
            candidates.push((c1, c2));
        }
    }
    let (c1, c2) = candidates
        .into_iter()
        .min_by(|x, y| residual(x.0, x.1).total_cmp(&residual(y.0, y.1)))
        .unwrap_or((0.0, 0.0));
    let norm_e = dot(errors, errors).sqrt();
    TwoTermFit {
        c1,
        c2,
        beta,
        mu,
        relative_residual: if norm_e > 0.0 { residual(c1, c2).sqrt() / norm_e } else { 0.0 },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub noise_scale: f64,
    pub n_max: usize,
    pub rows: Vec<SweepRow>,
    pub fit: TwoTermFit,
}

/// Runs the regularized reconstruction for every (delta, seed) pair and
/// averages errors over seeds. Jobs run in parallel; results are gathered
/// in (delta, seed) order so output does not depend on scheduling.
pub fn stability_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let c = Bandwidth::new(cfg.c)?;
    let finest = cfg.deltas[cfg.deltas.len() - 1];
    let n_request = n_star(c, cfg.alpha, finest)?.n_star;
    let basis = PswfBasis::build(c, n_request, cfg.lambda_floor)?;
    let exact = FourierData::sample(&cfg.phantom, cfg.r, cfg.sigma, &basis, cfg.angles)?;
    let noise_scale = cfg.noise_scale.unwrap_or_else(|| exact.norm_r());
    let opts = cfg.recon_options();

    let jobs: Vec<(usize, u64)> = (0..cfg.deltas.len())
        .flat_map(|i| cfg.seeds.iter().map(move |&s| (i, s)))
        .collect();
    let outcomes: Vec<(usize, usize, bool, f64, f64)> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let delta = cfg.deltas[i];
            let params = n_star(c, cfg.alpha, delta)?.with_noise_scale(noise_scale)?;
            let noisy = exact.make_noisy(delta, noise_scale, seed)?;
            let (n, clamped, error, bound) = match reconstruct_regularized(&noisy, &basis, &params, &opts)? {
                Reconstruction::OneD(rec) => {
                    let err = rec.l2_error(&basis, &cfg.phantom)?;
                    let bound =
                        lemma13_bound_1d(&basis, &cfg.phantom, &exact, delta * noise_scale, rec.n())?;
                    (rec.n(), rec.clamped(), err, bound)
                }
                Reconstruction::TwoD(rec) => {
                    let err = h_minus_half_error(&rec.grid, &cfg.phantom, cfg.sigma)?;
                    let bound = sinogram_bound_2d(&basis, &noisy, &exact, &cfg.phantom, rec.n)?;
                    (rec.n, rec.clamped, err, bound)
                }
            };
            Ok((params.n_star, n, clamped, error, bound))
        })
        .collect::<Result<_>>()?;

    let per = cfg.seeds.len();
    let mut rows: Vec<SweepRow> = outcomes
        .chunks(per)
        .zip(&cfg.deltas)
        .map(|(chunk, &delta)| {
            let errors: Vec<f64> = chunk.iter().map(|o| o.3).collect();
            SweepRow {
                delta,
                n_star: chunk[0].0,
                n_used: chunk[0].1,
                clamped: chunk[0].2,
                mean_error: errors.iter().sum::<f64>() / per as f64,
                lemma13_bound: chunk.iter().map(|o| o.4).sum::<f64>() / per as f64,
                errors,
                fit_residual: 0.0,
            }
        })
        .collect();
    let means: Vec<f64> = rows.iter().map(|r| r.mean_error).collect();
    let fit = fit_two_term(&cfg.deltas, &means, cfg.beta, cfg.mu);
    for row in &mut rows {
        row.fit_residual = if row.mean_error > 0.0 {
            (fit.eval(row.delta) - row.mean_error).abs() / row.mean_error
        } else {
            0.0
        };
    }
    Ok(SweepResult {
        noise_scale,
        n_max: basis.n_max(),
        rows,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hat_config() -> SweepConfig {
        SweepConfig {
            phantom: Phantom::hat(0.0, 0.5),
            c: 20.0,
            r: 20.0,
            sigma: 1.0,
            alpha: 0.3,
            deltas: vec![1e-1, 1e-2, 1e-3, 1e-4],
            seeds: vec![1, 2, 3, 4, 5],
            beta: 0.5,
            mu: 0.5,
            noise_scale: None,
            angles: 180,
            samples: 256,
            grid: 256,
            s_max: None,
            lambda_floor: DEFAULT_LAMBDA_FLOOR,
        }
    }

    #[test]
    fn fit_recovers_exact_model() {
        let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
        let errors: Vec<f64> = deltas
            .iter()
            .map(|d: &f64| 2.0 * d.powf(0.5) + 0.3 * (1.0 / d).ln().powf(-0.5))
            .collect();
        let fit = fit_two_term(&deltas, &errors, 0.5, 0.5);
        assert!((fit.c1 - 2.0).abs() < 1e-9 && (fit.c2 - 0.3).abs() < 1e-9);
        assert!(fit.relative_residual < 1e-12);
    }

    #[test]
    fn fit_never_goes_negative() {
        let fit = fit_two_term(&[1e-1, 1e-2, 1e-3], &[0.1, 0.5, 1.0], 0.5, 0.5);
        assert!(fit.c1 >= 0.0 && fit.c2 >= 0.0);
    }

    #[test]
    fn hat_sweep_is_monotone() {
        let res = stability_sweep(&hat_config()).unwrap();
        for w in res.rows.windows(2) {
            assert!(w[1].mean_error <= w[0].mean_error);
            assert!(w[1].n_star >= w[0].n_star);
        }
        for row in &res.rows {
            for e in &row.errors {
                assert!(*e <= row.lemma13_bound + 1e-9);
            }
        }
    }

    #[test]
    fn noiseless_entry_is_projection_error() {
        let mut cfg = hat_config();
        cfg.deltas = vec![1e-15];
        cfg.seeds = vec![9];
        cfg.noise_scale = Some(0.0);
        cfg.lambda_floor = 1e-15;
        let res = stability_sweep(&cfg).unwrap();
        let row = &res.rows[0];
        let basis = PswfBasis::build(Bandwidth::new(20.0).unwrap(), 40, 1e-15).unwrap();
        let proj =
            super::super::pipeline::projection_error_1d(&basis, &cfg.phantom, 1.0, row.n_used).unwrap();
        assert!((row.mean_error - proj).abs() < 1e-8, "{} vs {proj}", row.mean_error);
    }

    #[test]
    fn config_validation() {
        let mut cfg = hat_config();
        cfg.beta = 0.8;
        assert!(cfg.validate().is_err());
        let mut cfg = hat_config();
        cfg.deltas = vec![1e-3, 1e-2];
        assert!(cfg.validate().is_err());
        let mut cfg = hat_config();
        cfg.r = 10.0;
        assert!(cfg.validate().is_err());
        let mut cfg = hat_config();
        cfg.phantom = Phantom::Interval { a: -0.5, b: 0.5 };
        cfg.mu = 0.7;
        assert!(cfg.validate().is_err());
        let json = r#"{"phantom":{"kind":"disk","radius":0.5},"c":15,"r":15,"sigma":1,
            "alpha":0.3,"deltas":[0.1,0.01],"seeds":[1],"beta":0.5,"mu":0.5}"#;
        let cfg: SweepConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.angles, 180);
        cfg.validate().unwrap();
        assert!(serde_json::from_str::<SweepConfig>(&json.replace("\"mu\"", "\"nu\"")).is_err());
    }
}

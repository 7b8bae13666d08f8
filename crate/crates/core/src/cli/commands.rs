use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::output::{write_atomic, write_csv, write_json};
use super::{Command, PhantomCommand, PhantomKind, Phantom1d, PswfCommand, Recon1dArgs, Recon2dArgs, SinogramArgs, SweepArgs, TableArgs};
use crate::bandlimit::{n_star, RegParams};
use crate::error::{check_positive, Error, Result};
use crate::pswf::{Bandwidth, Coverage, PswfBasis};
use crate::radon::{Phantom, Sinogram};
use crate::recon::{
    h_minus_half_error, lemma13_bound_1d, projection_error_1d, reconstruct_regularized_1d,
    reconstruct_regularized_2d, sinogram_bound_2d, stability_sweep, FourierData, Recon2dOptions, SweepConfig,
    SweepResult, SweepRow, TwoTermFit,
};

pub(super) fn dispatch(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Pswf(PswfCommand::Table(a)) => table(a),
        Command::Recon1d(a) => recon1d(a),
        Command::Recon2d(a) => recon2d(a),
        Command::Phantom(PhantomCommand::Sinogram(a)) => sinogram(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn num(x: f64) -> String {
    x.to_string()
}

fn csv_or_stdout(out: Option<&Path>, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    match out {
        Some(p) => write_csv(p, header, rows),
        None => {
            let mut stdout = std::io::stdout().lock();
            let written = writeln!(stdout, "{}", header.join(","))
                .and_then(|_| rows.iter().try_for_each(|row| writeln!(stdout, "{}", row.join(","))));
            match written {
                // a closed downstream pipe (`| head`) is not a failure
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

/// Basis certified up to n*, or the clamp error when n* lies past n_max.
fn basis_for(params: &RegParams, floor: f64) -> Result<PswfBasis> {
    let basis = PswfBasis::build(Bandwidth::new(params.c)?, params.n_star, floor)?;
    if params.n_star > basis.n_max() {
        return Err(Error::ClampedTruncation {
            n_star: params.n_star,
            n_max: basis.n_max(),
        });
    }
    Ok(basis)
}

fn table(a: &TableArgs) -> Result<()> {
    let basis = PswfBasis::build(Bandwidth::new(a.c)?, a.n, a.lambda_floor)?;
    if let Coverage::Truncated { requested, achieved } = basis.coverage() {
        return Err(Error::BeyondLambdaFloor {
            n: requested,
            n_max: achieved,
            floor: basis.lambda_floor(),
        });
    }
    let rows = (0..=basis.n_max())
        .map(|n| {
            let mu = basis.mu()[n];
            vec![n.to_string(), num(basis.chi()[n]), num(basis.lambda()[n]), num(mu.norm()), num(mu.arg())]
        })
        .collect();
    csv_or_stdout(a.out.as_deref(), &["n", "chi", "lambda", "abs_mu", "arg_mu"], rows)
}

#[derive(Serialize)]
struct Recon1dReport<'a> {
    config: &'a Recon1dArgs,
    r: f64,
    noise_scale: f64,
    noise_level: f64,
    n_max: usize,
    n_star: usize,
    rho: f64,
    tau: f64,
    l2_error: f64,
    projection_error: f64,
    lemma13_bound: f64,
}

fn recon1d(a: &Recon1dArgs) -> Result<()> {
    check_positive("sigma", a.sigma)?;
    let params = n_star(Bandwidth::new(a.c)?, a.alpha, a.delta)?;
    if a.points < 2 {
        return Err(Error::Invalid(format!("need at least 2 evaluation points, got {}", a.points)));
    }
    let sigma = a.sigma;
    let phantom = match a.phantom {
        Phantom1d::Hat => Phantom::hat(0.0, sigma / 2.0),
        Phantom1d::Interval => Phantom::Interval {
            a: -sigma / 2.0,
            b: sigma / 2.0,
        },
    };
    let basis = basis_for(&params, a.lambda_floor)?;
    let r = a.c / sigma;
    let exact = FourierData::sample(&phantom, r, sigma, &basis, 1)?;
    let noise_scale = a.noise_scale.unwrap_or_else(|| exact.norm_r());
    let params = params.with_noise_scale(noise_scale)?;
    let noisy = exact.make_noisy(a.delta, noise_scale, a.noise_seed)?;
    let rec = reconstruct_regularized_1d(&noisy, &basis, &params)?;
    let n = rec.n();
    let noise_level = a.delta * noise_scale;

    let report = Recon1dReport {
        config: a,
        r,
        noise_scale,
        noise_level,
        n_max: basis.n_max(),
        n_star: params.n_star,
        rho: params.rho,
        tau: params.tau,
        l2_error: rec.l2_error(&basis, &phantom)?,
        projection_error: projection_error_1d(&basis, &phantom, sigma, n)?,
        lemma13_bound: lemma13_bound_1d(&basis, &phantom, &exact, noise_level, n)?,
    };

    let coeffs = rec
        .coefficients()
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| vec![k.to_string(), num(v.re), num(v.im)])
        .collect::<Vec<_>>();
    let step = 2.0 * sigma / (a.points - 1) as f64;
    let qs: Vec<f64> = (0..a.points)
        .map(|i| if i + 1 == a.points { sigma } else { -sigma + i as f64 * step })
        .collect();
    let values = rec.eval(&basis, &qs)?;
    let recon = qs
        .iter()
        .zip(&values)
        .map(|(&q, v)| Ok(vec![num(q), num(v.re), num(v.im), num(phantom.value(&[q])?), num(0.0)]))
        .collect::<Result<Vec<_>>>()?;

    write_csv(&a.out.join("coeffs.csv"), &["n", "re", "im"], coeffs)?;
    write_csv(&a.out.join("recon.csv"), &["y", "re", "im", "exact_re", "exact_im"], recon)?;
    write_json(&a.out.join("report.json"), &report)
}

#[derive(Serialize)]
struct Recon2dReport<'a> {
    config: &'a Recon2dArgs,
    phantom: &'a Phantom,
    noise_scale: f64,
    noise_level: f64,
    n_max: usize,
    n_star: usize,
    rho: f64,
    tau: f64,
    h_minus_half_error: f64,
    sinogram_bound: f64,
}

fn recon2d(a: &Recon2dArgs) -> Result<()> {
    check_positive("r", a.r)?;
    check_positive("sigma", a.sigma)?;
    let rs = a.r * a.sigma;
    if (rs - a.c).abs() > 1e-9 * a.c.abs().max(1.0) {
        return Err(Error::BandwidthMismatch { data: rs, basis: a.c });
    }
    let params = n_star(Bandwidth::new(a.c)?, a.alpha, a.delta)?;
    if !a.grid.is_power_of_two() {
        return Err(Error::NonPowerOfTwo(a.grid));
    }
    let phantom = Phantom::disk(a.radius.unwrap_or(a.sigma / 2.0));
    phantom.validate()?;
    let basis = basis_for(&params, a.lambda_floor)?;
    let exact = FourierData::sample(&phantom, a.r, a.sigma, &basis, a.angles)?;
    let noise_scale = a.noise_scale.unwrap_or_else(|| exact.norm_r());
    let params = params.with_noise_scale(noise_scale)?;
    let noisy = exact.make_noisy(a.delta, noise_scale, a.seed)?;
    let opts = Recon2dOptions {
        samples: a.samples,
        grid: a.grid,
        extent: None,
        s_max: a.s_max,
    };
    let rec = reconstruct_regularized_2d(&noisy, &basis, &params, &opts)?;

    let report = Recon2dReport {
        config: a,
        phantom: &phantom,
        noise_scale,
        noise_level: a.delta * noise_scale,
        n_max: basis.n_max(),
        n_star: params.n_star,
        rho: params.rho,
        tau: params.tau,
        h_minus_half_error: h_minus_half_error(&rec.grid, &phantom, a.sigma)?,
        sinogram_bound: sinogram_bound_2d(&basis, &noisy, &exact, &phantom, rec.n)?,
    };

    // Back to physical units: R[v](y, theta) = sigma u(y / sigma, theta).
    let sino = &rec.sinogram;
    let ys = sino.y_grid();
    let rows = (0..sino.angles())
        .flat_map(|k| {
            let phi = sino.phi(k);
            ys.iter().zip(sino.column(k)).map(move |(&y, v)| {
                vec![num(a.sigma * y), num(phi), num(a.sigma * v.re), num(a.sigma * v.im)]
            })
        })
        .collect::<Vec<_>>();
    let mut grid_bytes = Vec::new();
    rec.grid.write_bin(&mut grid_bytes)?;

    write_csv(&a.out.join("sinogram.csv"), &["y", "theta", "re", "im"], rows)?;
    write_atomic(&a.out.join("recon_grid.bin"), &grid_bytes)?;
    write_json(&a.out.join("report.json"), &report)
}

fn sinogram(a: &SinogramArgs) -> Result<()> {
    let phantom = match a.kind {
        PhantomKind::Disk => Phantom::disk(a.radius),
    };
    phantom.validate()?;
    if a.samples < 2 {
        return Err(Error::Invalid(format!("need at least 2 offsets, got {}", a.samples)));
    }
    if a.angles == 0 {
        return Err(Error::Invalid("need at least one angle".into()));
    }
    let sino = Sinogram::from_phantom(&phantom, a.samples, a.angles)?;
    let ys = sino.y_grid();
    let rows = (0..sino.angles())
        .flat_map(|k| {
            let phi = sino.phi(k);
            ys.iter()
                .zip(sino.column(k))
                .map(move |(&y, v)| vec![num(y), num(phi), num(v.re)])
        })
        .collect();
    csv_or_stdout(a.out.as_deref(), &["y", "theta", "value"], rows)
}

#[derive(Serialize)]
struct SweepReport<'a> {
    config: &'a SweepConfig,
    noise_scale: f64,
    n_max: usize,
    fit: &'a TwoTermFit,
    rows: &'a [SweepRow],
}

fn sweep(a: &SweepArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.config)?;
    let cfg: SweepConfig = serde_json::from_str(&text)?;
    let SweepResult {
        noise_scale,
        n_max,
        rows,
        fit,
    } = stability_sweep(&cfg)?;
    if let Some(row) = rows.iter().find(|r| r.clamped) {
        return Err(Error::ClampedTruncation {
            n_star: row.n_star,
            n_max,
        });
    }
    let table = rows
        .iter()
        .map(|r| {
            vec![
                num(r.delta),
                r.n_star.to_string(),
                num(r.mean_error),
                num(r.lemma13_bound),
                num(r.fit_residual),
            ]
        })
        .collect::<Vec<_>>();
    let report = SweepReport {
        config: &cfg,
        noise_scale,
        n_max,
        fit: &fit,
        rows: &rows,
    };
    write_csv(
        &a.out.join("sweep.csv"),
        &["delta", "n_star", "mean_error", "lemma13_bound", "fit_residual"],
        table,
    )?;
    write_json(&a.out.join("sweep_report.json"), &report)
}

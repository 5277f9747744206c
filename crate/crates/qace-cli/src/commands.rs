//! Command implementations behind the subcommands.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use qace_core::causal::{cace_lb, qace_lb, report, AceReport};
use qace_core::families::{ms1, ms1_optimal_phi0, ms2, Family, SweepSpec};
use qace_core::measurement::{solve_eta, HardwareParams};
use qace_core::oracle::{min_classical_ace, witness_ace};
use qace_core::scenario::{observed_quantum, ObservedDistribution, Settings};
use qace_core::states::{noisy_state, pure_state, NoiseParams, TwoQubitState};
use qace_core::stats::{counts_to_distribution, fit_noise, monte_carlo_bounds};

use crate::io::{
    core_error, csv_metadata, json_metadata, parse_counts_csv, parse_dataset_json,
    parse_probs_json, read_to_string, write_output, CliError, CliResult, RESAMPLING_LAW,
};

struct CurveRow {
    alpha: f64,
    report: AceReport<f64>,
    probs: Option<[[[f64; 2]; 2]; 2]>,
}

fn alpha_grid(start: f64, end: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 {
        return Err(CliError::Input("steps must be at least 1".into()));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    if !(end > start) {
        return Err(CliError::Input(format!(
            "alpha range must satisfy start < end, got [{start}, {end}]"
        )));
    }
    let h = (end - start) / (steps - 1) as f64;
    Ok((0..steps).map(|i| start + h * i as f64).collect())
}

struct SweepPointModel {
    settings: Settings<f64>,
    rho: TwoQubitState<f64>,
}

fn sweep_point(
    family: Family,
    alpha: f64,
    phi0_fixed: Option<f64>,
    noise: Option<NoiseParams<f64>>,
    delta: Option<f64>,
) -> CliResult<SweepPointModel> {
    let mut settings = match family {
        Family::Ms1 => {
            let phi0 = phi0_fixed.unwrap_or_else(|| ms1_optimal_phi0(alpha));
            ms1(alpha, phi0).settings
        }
        Family::Ms2 => ms2(alpha).map_err(core_error)?,
    };
    if let Some(delta) = delta {
        // the switch rotation is calibrated per point on the ideal state
        let eta = match family {
            Family::Ms1 => 0.0,
            Family::Ms2 => solve_eta(alpha, &settings).map_err(core_error)?,
        };
        let hw = HardwareParams::new(delta, eta).map_err(core_error)?;
        settings = settings.with_hardware(hw);
    }
    let rho = match noise {
        Some(n) => noisy_state(alpha, n).map_err(core_error)?,
        None => pure_state(alpha).map_err(core_error)?,
    };
    Ok(SweepPointModel { settings, rho })
}

#[allow(clippy::too_many_arguments)]
pub fn sweep(
    family: Family,
    alpha_start: f64,
    alpha_end: f64,
    steps: usize,
    phi0: Option<f64>,
    v: Option<f64>,
    lambda: Option<f64>,
    delta: Option<f64>,
    emit_probs: bool,
    out: &Path,
) -> CliResult<()> {
    let noise = match (v, lambda) {
        (None, None) => None,
        (Some(v), Some(lambda)) => Some(NoiseParams::new(v, lambda).map_err(core_error)?),
        _ => {
            return Err(CliError::Input(
                "--v and --lambda must be given together".into(),
            ))
        }
    };
    let spec = SweepSpec {
        family,
        alpha_grid: alpha_grid(alpha_start, alpha_end, steps)?,
        noise,
        hardware_delta: delta,
    };
    spec.validate().map_err(core_error)?;
    let rows: Vec<CurveRow> = spec
        .alpha_grid
        .par_iter()
        .map(|&alpha| -> CliResult<CurveRow> {
            let model = sweep_point(family, alpha, phi0, noise, delta)?;
            let r = report(&model.rho, &model.settings).map_err(core_error)?;
            let probs = if emit_probs {
                let p = observed_quantum(&model.rho, &model.settings).map_err(core_error)?;
                Some(*p.table())
            } else {
                None
            };
            Ok(CurveRow {
                alpha,
                report: r,
                probs,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut text = csv_metadata(&[
        ("family", family.name().to_string()),
        (
            "noise",
            match noise {
                Some(n) => format!("v={},lambda={}", n.v(), n.lambda()),
                None => "none".to_string(),
            },
        ),
        ("delta", delta.map_or("none".to_string(), |d| d.to_string())),
        (
            "phi0",
            phi0.map_or("optimized per point".to_string(), |p| p.to_string()),
        ),
        ("seed", "none".to_string()),
    ]);
    text.push_str("alpha,cace_lb_raw,cace_lb,qace,qace_lb_raw,qace_lb,gap");
    if emit_probs {
        for x in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let _ = write!(text, ",p{x}{a}{b}");
                }
            }
        }
    }
    text.push('\n');
    for row in &rows {
        let r = &row.report;
        let _ = write!(
            text,
            "{},{},{},{},{},{},{}",
            row.alpha, r.cace_lb_raw, r.cace_lb, r.qace, r.qace_lb_raw, r.qace_lb, r.gap
        );
        if let Some(p) = &row.probs {
            for x in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let _ = write!(text, ",{}", p[x][a][b]);
                    }
                }
            }
        }
        text.push('\n');
    }
    write_output(out, &text)
}

fn load_distribution(input: &Path, counts_format: bool) -> CliResult<ObservedDistribution<f64>> {
    let text = read_to_string(input)?;
    if counts_format {
        let counts = parse_counts_csv(&text)?;
        counts_to_distribution(&counts).map_err(core_error)
    } else {
        parse_probs_json(&text)
    }
}

pub fn bounds(input: &Path, counts_format: bool, out: &Path) -> CliResult<()> {
    let p = load_distribution(input, counts_format)?;
    let c = cace_lb(&p);
    let q = qace_lb(&p);
    let value = json!({
        "meta": json_metadata(&[(
            "input_format",
            json!(if counts_format { "counts" } else { "probs" }),
        )]),
        "cace_lb_raw": c,
        "cace_lb": c.max(0.0),
        "qace_lb_raw": q.value,
        "qace_lb": q.value.max(0.0),
        "zeta": q.zeta,
        "zeta_radicand_plus": q.radicand_plus,
        "zeta_radicand_minus": q.radicand_minus,
    });
    write_output(out, &format!("{:#}\n", value))
}

pub fn oracle(input: &Path, out: &Path) -> CliResult<()> {
    let text = read_to_string(input)?;
    let p = parse_probs_json(&text)?;
    let result = min_classical_ace(&p).map_err(core_error)?;
    let bound = cace_lb(&p);
    let dominance_ok = !result.feasible || result.min_ace >= bound - 1e-7;
    if !dominance_ok {
        return Err(CliError::Numeric(format!(
            "polytope optimum {} undercuts the closed-form bound {bound}",
            result.min_ace
        )));
    }
    let value = json!({
        "meta": json_metadata(&[]),
        "feasible": result.feasible,
        "min_ace": result.min_ace,
        "cace_lb_raw": bound,
        "dominance_ok": dominance_ok,
        "witness_ace": witness_ace(&result),
        "witness_weights": result.witness_weights.to_vec(),
    });
    write_output(out, &format!("{:#}\n", value))
}

pub fn mc(input: &Path, samples: usize, seed: u64, out: &Path) -> CliResult<()> {
    let text = read_to_string(input)?;
    let counts = parse_counts_csv(&text)?;
    let mc = monte_carlo_bounds::<f64>(&counts, samples, seed).map_err(core_error)?;
    let plugin = counts_to_distribution::<f64>(&counts).map_err(core_error)?;
    let plug_c = cace_lb(&plugin);
    let plug_q = qace_lb(&plugin);
    let value = json!({
        "meta": json_metadata(&[
            ("seed", json!(seed)),
            ("samples", json!(samples)),
            ("resampling", json!(RESAMPLING_LAW)),
        ]),
        "cace_lb": { "value": mc.cace_lb.value, "sigma": mc.cace_lb.sigma },
        "qace_lb": { "value": mc.qace_lb.value, "sigma": mc.qace_lb.sigma },
        "plugin": {
            "cace_lb_raw": plug_c,
            "cace_lb": plug_c.max(0.0),
            "qace_lb_raw": plug_q.value,
            "qace_lb": plug_q.value.max(0.0),
            "zeta": plug_q.zeta,
        },
    });
    write_output(out, &format!("{:#}\n", value))
}

pub fn fit(dataset: &Path, family: Family, out: &Path) -> CliResult<()> {
    let text = read_to_string(dataset)?;
    let points = parse_dataset_json(&text)?;
    let result = fit_noise(&points, family).map_err(core_error)?;
    let value = json!({
        "meta": json_metadata(&[("family", json!(family.name()))]),
        "v": result.v,
        "lambda": result.lambda,
        "delta": result.delta,
        "residual": result.residual,
        "lambda_flat": result.lambda_flat,
    });
    write_output(out, &format!("{:#}\n", value))
}

use std::path::{Path, PathBuf};

use serde::Serialize;
use wlc_core::metrics::{system_integral, FigureOfMerit};
use wlc_core::model::{assemble_system, QuadratureSystem};
use wlc_core::response::{ep_indicator, poles, pt_check, Stability};
use wlc_core::spectra::noise_budget;
use wlc_core::sweep::{grid_sweep, optimize_baseline, optimize_scan_rate, Axis};
use wlc_core::units::to_hz;

use crate::config::{
    from_value, set_path, AxionTopologyConfig, DetectorConfig, MetricConfig, RunConfig,
};
use crate::error::CliError;
use crate::output::{num, write_csv, write_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Poles,
    Gain,
    ScanRate,
    Optimize,
    Sweep,
}

/// A parsed command line: the config after `--set` overrides.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub command: Command,
    pub raw: serde_json::Value,
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub strict_stability: bool,
}

/// Runs one command and returns the files written.
pub fn run(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    match inv.command {
        Command::Spectrum => spectrum(inv),
        Command::Poles => cmd_poles(inv),
        Command::Gain => gain(inv),
        Command::ScanRate => scan_rate(inv),
        Command::Optimize => optimize(inv),
        Command::Sweep => sweep(inv),
    }
}

fn detector(cfg: &RunConfig) -> Result<&DetectorConfig, CliError> {
    cfg.detector
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `detector` section".into()))
}

fn reference(cfg: &RunConfig) -> Result<DetectorConfig, CliError> {
    match &cfg.reference {
        Some(r) => Ok(r.clone()),
        None => detector(cfg)?.default_reference().ok_or_else(|| {
            CliError::Config(
                "this detector kind has no default reference; add a `reference` section".into(),
            )
        }),
    }
}

fn build(det: &DetectorConfig) -> Result<QuadratureSystem, CliError> {
    Ok(assemble_system(&det.to_spec())?)
}

fn stability_label(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Marginal => "marginal",
        Stability::Unstable => "unstable",
    }
}

fn check_stable(sys: &QuadratureSystem, what: &str) -> Result<(), CliError> {
    let c = poles(sys)?.classification;
    if c == Stability::Stable {
        Ok(())
    } else {
        Err(CliError::Unstable(format!(
            "{what} is {}",
            stability_label(c)
        )))
    }
}

#[derive(Serialize)]
pub struct FomJson {
    pub value: f64,
    pub abs_error: f64,
    pub cutoff_hz: f64,
    pub tail_corrected: bool,
}

impl From<FigureOfMerit> for FomJson {
    fn from(f: FigureOfMerit) -> Self {
        Self {
            value: f.value,
            abs_error: f.abs_error,
            cutoff_hz: to_hz(f.cutoff),
            tail_corrected: f.tail_corrected,
        }
    }
}

fn spectrum(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    let sys = build(detector(&inv.config)?)?;
    if inv.strict_stability {
        check_stable(&sys, "detector")?;
    }
    let grid = inv.config.grid.omegas()?;
    let t = noise_budget(&sys, &grid)?;
    let mut header: Vec<String> = ["f_hz", "referred", "signal_transfer_sq", "output_total"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(t.source_names.iter().cloned());
    let referred: Vec<Vec<f64>> = (0..t.source_names.len())
        .map(|k| t.source_referred(k))
        .collect();
    let rows: Vec<Vec<String>> = (0..t.len())
        .map(|i| {
            let mut r = vec![
                num(to_hz(t.omega[i])),
                num(t.referred[i]),
                num(t.signal_transfer_sq[i]),
                num(t.total[i]),
            ];
            r.extend(referred.iter().map(|s| num(s[i])));
            r
        })
        .collect();
    Ok(vec![write_csv(
        &inv.out_dir,
        "spectrum.csv",
        &header,
        &rows,
    )?])
}

#[derive(Serialize)]
struct PoleJson {
    re_hz: f64,
    im_hz: f64,
    hidden: bool,
}

#[derive(Serialize)]
struct GroupJson {
    re_hz: f64,
    im_hz: f64,
    multiplicity: usize,
    hidden: usize,
}

#[derive(Serialize)]
struct PolesJson {
    classification: &'static str,
    tolerance_hz: f64,
    poles: Vec<PoleJson>,
    groups: Vec<GroupJson>,
    pt_symmetric: bool,
    ep_indicator: f64,
}

fn cmd_poles(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    let det = detector(&inv.config)?;
    let spec = det.to_spec();
    let sys = assemble_system(&spec)?;
    let set = poles(&sys)?;
    let pt = pt_check(&spec)?;
    let group_tol = 1e-6 * sys.max_rate();
    let mut groups: Vec<GroupJson> = Vec::new();
    for p in &set.poles {
        let (re, im) = (to_hz(p.omega.re), to_hz(p.omega.im));
        match groups
            .iter_mut()
            .find(|g| (g.re_hz - re).hypot(g.im_hz - im) <= to_hz(group_tol))
        {
            Some(g) => {
                g.multiplicity += 1;
                g.hidden += p.hidden as usize;
            }
            None => groups.push(GroupJson {
                re_hz: re,
                im_hz: im,
                multiplicity: 1,
                hidden: p.hidden as usize,
            }),
        }
    }
    let out = PolesJson {
        classification: stability_label(set.classification),
        tolerance_hz: to_hz(set.tolerance),
        poles: set
            .poles
            .iter()
            .map(|p| PoleJson {
                re_hz: to_hz(p.omega.re),
                im_hz: to_hz(p.omega.im),
                hidden: p.hidden,
            })
            .collect(),
        groups,
        pt_symmetric: pt.is_pt_symmetric,
        ep_indicator: pt.ep_indicator,
    };
    let path = write_json(&inv.out_dir, "poles.json", &out)?;
    if inv.strict_stability && set.classification != Stability::Stable {
        return Err(CliError::Unstable(format!(
            "detector is {}",
            out.classification
        )));
    }
    Ok(vec![path])
}

#[derive(Serialize)]
struct GainJson {
    lambda: f64,
    detector: FomJson,
    reference: FomJson,
}

fn gain(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    let amp = build(detector(&inv.config)?)?;
    let reference = build(&reference(&inv.config)?)?;
    if inv.strict_stability {
        check_stable(&amp, "detector")?;
        check_stable(&reference, "reference")?;
    }
    let a = system_integral(&amp, 1)?;
    let r = system_integral(&reference, 1)?;
    let out = GainJson {
        lambda: a.value / r.value,
        detector: a.into(),
        reference: r.into(),
    };
    Ok(vec![write_json(&inv.out_dir, "gain.json", &out)?])
}

fn scan_rate(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    let sys = build(detector(&inv.config)?)?;
    if inv.strict_stability {
        check_stable(&sys, "detector")?;
    }
    let fom: FomJson = system_integral(&sys, 2)?.into();
    Ok(vec![write_json(&inv.out_dir, "scan_rate.json", &fom)?])
}

#[derive(Serialize)]
struct BaselineJson {
    gamma_r_over_gamma_l: f64,
    scan_rate: f64,
    evaluations: usize,
    converged: bool,
}

#[derive(Serialize)]
struct OptimizeJson {
    topology: AxionTopologyConfig,
    chi_over_gamma_l: f64,
    squeeze_r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    enhancement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa_over_gamma_l: Option<f64>,
    gamma_r_over_gamma_l: f64,
    scan_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coarse_scan_rate: Option<f64>,
    baseline: BaselineJson,
    evaluations: usize,
    converged: bool,
}

fn optimize(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    let oc = inv
        .config
        .optimize
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `optimize` section".into()))?;
    let opts = oc.options()?;
    let out = if oc.topology == AxionTopologyConfig::SingleCavity {
        let b = optimize_baseline(oc.squeeze_r, &opts)?;
        OptimizeJson {
            topology: oc.topology,
            chi_over_gamma_l: 0.0,
            squeeze_r: oc.squeeze_r,
            enhancement: None,
            kappa_over_gamma_l: None,
            gamma_r_over_gamma_l: b.gamma_r,
            scan_rate: b.scan_rate,
            coarse_scan_rate: None,
            baseline: BaselineJson {
                gamma_r_over_gamma_l: b.gamma_r,
                scan_rate: b.scan_rate,
                evaluations: b.evaluations,
                converged: b.converged,
            },
            evaluations: b.evaluations,
            converged: b.converged,
        }
    } else {
        let r = optimize_scan_rate(
            oc.chi_over_gamma_l,
            oc.squeeze_r,
            oc.topology.to_core(),
            &opts,
        )?;
        let b = r.baseline;
        OptimizeJson {
            topology: oc.topology,
            chi_over_gamma_l: oc.chi_over_gamma_l,
            squeeze_r: oc.squeeze_r,
            enhancement: Some(r.enhancement),
            kappa_over_gamma_l: Some(r.kappa),
            gamma_r_over_gamma_l: r.gamma_r,
            scan_rate: r.scan_rate,
            coarse_scan_rate: Some(r.coarse_scan_rate),
            baseline: BaselineJson {
                gamma_r_over_gamma_l: b.gamma_r,
                scan_rate: b.scan_rate,
                evaluations: b.evaluations,
                converged: b.converged,
            },
            evaluations: r.evaluations,
            converged: r.converged,
        }
    };
    Ok(vec![write_json(&inv.out_dir, "optimize.json", &out)?])
}

fn sweep_point(
    raw: &serde_json::Value,
    paths: &[String],
    point: &[f64],
    metrics: &[MetricConfig],
    require_stable: bool,
) -> Result<Vec<f64>, wlc_core::Error> {
    let bad = |e: CliError| wlc_core::Error::InvalidArgument(e.to_string());
    let mut v = raw.clone();
    for (p, x) in paths.iter().zip(point) {
        set_path(&mut v, p, serde_json::json!(x)).map_err(bad)?;
    }
    let cfg = from_value(v).map_err(bad)?;
    let det = detector(&cfg).map_err(bad)?;
    let sys = assemble_system(&det.to_spec())?;
    let set = poles(&sys)?;
    if require_stable && set.classification != Stability::Stable {
        return Err(wlc_core::Error::Unstable);
    }
    metrics
        .iter()
        .map(|m| match m {
            MetricConfig::Lambda => {
                let r = assemble_system(&reference(&cfg).map_err(bad)?.to_spec())?;
                Ok(system_integral(&sys, 1)?.value / system_integral(&r, 1)?.value)
            }
            MetricConfig::Integral => Ok(system_integral(&sys, 1)?.value),
            MetricConfig::ScanRate => Ok(system_integral(&sys, 2)?.value),
            MetricConfig::MaxPoleImHz => Ok(set
                .visible()
                .map(|z| to_hz(z.im))
                .fold(f64::NEG_INFINITY, f64::max)),
            MetricConfig::EpIndicator => ep_indicator(&sys),
        })
        .collect()
}

fn sweep(inv: &Invocation) -> Result<Vec<PathBuf>, CliError> {
    let sc = inv
        .config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("missing `sweep` section".into()))?;
    if sc.axes.is_empty() || sc.axes.iter().any(|a| a.values.is_empty()) {
        return Err(CliError::Config("sweep axes must be nonempty".into()));
    }
    if sc.metrics.is_empty() {
        return Err(CliError::Config("sweep needs at least one metric".into()));
    }
    let axes: Vec<Axis> = sc
        .axes
        .iter()
        .map(|a| Axis::new(&a.path, a.values.clone()))
        .collect();
    let paths: Vec<String> = sc.axes.iter().map(|a| a.path.clone()).collect();
    let names: Vec<&str> = sc.metrics.iter().map(|m| m.name()).collect();
    let table = grid_sweep(&axes, &names, |p| {
        sweep_point(&inv.raw, &paths, p, &sc.metrics, sc.require_stable)
    })?;
    let mut header = table.axes.clone();
    header.extend(table.metrics.iter().cloned());
    header.push("status".into());
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut row: Vec<String> = r.point.iter().map(|x| num(*x)).collect();
            match &r.result {
                Ok(vals) => {
                    row.extend(vals.iter().map(|v| num(*v)));
                    row.push("ok".into());
                }
                Err(e) => {
                    row.extend(std::iter::repeat_n(String::new(), names.len()));
                    row.push(match e {
                        wlc_core::Error::Unstable => "unstable".into(),
                        other => format!("error: {other}"),
                    });
                }
            }
            row
        })
        .collect();
    Ok(vec![write_csv(&inv.out_dir, "sweep.csv", &header, &rows)?])
}

/// Reads a config file and applies overrides in order.
pub fn load(path: &Path, overrides: &[String]) -> Result<(serde_json::Value, RunConfig), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
        CliError::Config(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    for o in overrides {
        crate::config::apply_override(&mut raw, o)?;
    }
    let cfg = from_value(raw.clone())?;
    Ok((raw, cfg))
}

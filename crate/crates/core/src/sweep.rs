//! Parameter sweeps, the scan-rate optimizer and the interferometer noise budget.

use alloc::string::String;
use alloc::vec::Vec;

use libm::{log10, pow};

use crate::detectors::{build_axion, build_gw, AxionParams, AxionTopology, GwParams, GwTopology};
use crate::error::Error;
use crate::metrics::{integrated_inverse_psd, IntegrationOptions};
use crate::model::{assemble_system, QuadratureSystem};
use crate::response::{poles, Stability};
use crate::simplex::{minimize, SimplexOptions};
use crate::spectra::{noise_budget, referred_psd, SpectrumTable};

/// Evaluates `f(0..n)` in index order, concurrently when the `parallel`
/// feature is on.
fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    let (a, b) = (log10(lo), log10(hi));
    (0..n)
        .map(|i| pow(10.0, a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Search settings. Rates are in units of `γ_L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerOptions {
    pub grid_points: usize,
    pub kappa_max: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub max_iter: usize,
    pub rel_tol: f64,
    /// sWLC points need `χ ≤ margin · κ`.
    pub stability_margin: f64,
    /// Relative tolerance of each scan-rate integral.
    pub quad_rel_tol: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            grid_points: 40,
            kappa_max: 1e3,
            gamma_min: 1e-1,
            gamma_max: 1e3,
            max_iter: 200,
            rel_tol: 1e-5,
            stability_margin: 0.999,
            quad_rel_tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineResult {
    pub gamma_r: f64,
    pub scan_rate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptResult {
    /// `R_a` of the amplified network over the optimized single cavity.
    pub enhancement: f64,
    pub kappa: f64,
    pub gamma_r: f64,
    pub scan_rate: f64,
    /// Best objective on the coarse grid, before refinement.
    pub coarse_scan_rate: f64,
    pub baseline: BaselineResult,
    pub evaluations: usize,
    pub converged: bool,
}

fn scan_rate_of(sys: &QuadratureSystem, rel_tol: f64) -> Result<f64, Error> {
    let mut o = IntegrationOptions::for_system(sys);
    o.rel_tol = rel_tol;
    Ok(integrated_inverse_psd(|w| referred_psd(sys, w), 2, &o)?.value)
}

/// `R_a` with `γ_L = α = 1`, or `-∞` outside the feasible region.
fn axion_objective(params: &AxionParams, opts: &OptimizerOptions) -> f64 {
    if params.topology == AxionTopology::Swlc && params.chi > opts.stability_margin * params.kappa {
        return f64::NEG_INFINITY;
    }
    let Ok(sys) = assemble_system(&build_axion(params)) else {
        return f64::NEG_INFINITY;
    };
    if params.topology != AxionTopology::SingleCavity {
        match poles(&sys) {
            Ok(p) if p.classification == Stability::Stable => {}
            _ => return f64::NEG_INFINITY,
        }
    }
    scan_rate_of(&sys, opts.quad_rel_tol).unwrap_or(f64::NEG_INFINITY)
}

fn check_squeeze(r: f64) -> Result<(), Error> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "squeeze factor must satisfy exp(-2r) in (0, 1], got r = {r}"
        )));
    }
    Ok(())
}

/// Lossy single cavity optimized over `γ_R/γ_L` alone.
pub fn optimize_baseline(squeeze_r: f64, opts: &OptimizerOptions) -> Result<BaselineResult, Error> {
    check_squeeze(squeeze_r)?;
    let params = |g: f64| AxionParams {
        gamma_l: 1.0,
        gamma_r: g,
        kappa: 0.0,
        chi: 0.0,
        squeeze_r,
        alpha: 1.0,
        topology: AxionTopology::SingleCavity,
    };
    let (lo, hi) = (log10(opts.gamma_min), log10(opts.gamma_max));
    let grid = log_space(opts.gamma_min, opts.gamma_max, 10 * opts.grid_points);
    let vals = map_indexed(grid.len(), |i| axion_objective(&params(grid[i]), opts));
    let k = argmax(&vals).ok_or(Error::Infeasible { chi: 0.0 })?;
    let simplex = SimplexOptions {
        max_iter: opts.max_iter,
        rel_tol: opts.rel_tol * 1e-3,
        initial_step: 0.05,
    };
    let res = minimize(
        |x| {
            if x[0] < lo || x[0] > hi {
                return f64::INFINITY;
            }
            -axion_objective(&params(pow(10.0, x[0])), opts)
        },
        &[log10(grid[k])],
        &simplex,
    );
    let (gamma_r, scan_rate) = if -res.value >= vals[k] {
        (pow(10.0, res.x[0]), -res.value)
    } else {
        (grid[k], vals[k])
    };
    Ok(BaselineResult {
        gamma_r,
        scan_rate,
        evaluations: grid.len() + res.evaluations,
        converged: res.converged,
    })
}

fn argmax(vals: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in vals.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| *v > vals[b]) {
            best = Some(i);
        }
    }
    best
}

/// Maximizes the scan rate over `(κ/γ_L, γ_R/γ_L)` at fixed `χ/γ_L` and
/// readout squeeze factor `r`, and reports it relative to the optimized
/// single cavity with the same squeezing.
pub fn optimize_scan_rate(
    chi: f64,
    squeeze_r: f64,
    topology: AxionTopology,
    opts: &OptimizerOptions,
) -> Result<OptResult, Error> {
    if topology == AxionTopology::SingleCavity {
        return Err(Error::InvalidArgument(
            "optimize_scan_rate needs an amplified topology; use optimize_baseline".into(),
        ));
    }
    if !(chi >= 0.0 && chi.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "chi must be non-negative, got {chi}"
        )));
    }
    check_squeeze(squeeze_r)?;
    let baseline = optimize_baseline(squeeze_r, opts)?;
    let kappa_min = chi.max(0.1);
    if kappa_min >= opts.kappa_max {
        return Err(Error::Infeasible { chi });
    }
    let params = |kappa: f64, gamma_r: f64| AxionParams {
        gamma_l: 1.0,
        gamma_r,
        kappa,
        chi,
        squeeze_r,
        alpha: 1.0,
        topology,
    };
    let kappas = log_space(kappa_min, opts.kappa_max, opts.grid_points);
    let gammas = log_space(opts.gamma_min, opts.gamma_max, opts.grid_points);
    let n = opts.grid_points;
    let vals = map_indexed(n * n, |i| {
        axion_objective(&params(kappas[i / n], gammas[i % n]), opts)
    });
    let k = argmax(&vals).ok_or(Error::Infeasible { chi })?;
    let coarse = vals[k];
    let bounds = [
        (log10(kappa_min), log10(opts.kappa_max)),
        (log10(opts.gamma_min), log10(opts.gamma_max)),
    ];
    let simplex = SimplexOptions {
        max_iter: opts.max_iter,
        rel_tol: opts.rel_tol,
        initial_step: 0.05,
    };
    let res = minimize(
        |x| {
            if x.iter()
                .zip(&bounds)
                .any(|(v, (lo, hi))| *v < *lo || *v > *hi)
            {
                return f64::INFINITY;
            }
            -axion_objective(&params(pow(10.0, x[0]), pow(10.0, x[1])), opts)
        },
        &[log10(kappas[k / n]), log10(gammas[k % n])],
        &simplex,
    );
    let (kappa, gamma_r, scan_rate) = if -res.value >= coarse {
        (pow(10.0, res.x[0]), pow(10.0, res.x[1]), -res.value)
    } else {
        (kappas[k / n], gammas[k % n], coarse)
    };
    Ok(OptResult {
        enhancement: scan_rate / baseline.scan_rate,
        kappa,
        gamma_r,
        scan_rate,
        coarse_scan_rate: coarse,
        baseline,
        evaluations: n * n + res.evaluations + baseline.evaluations,
        converged: res.converged,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    /// Axis values, one per axis.
    pub point: Vec<f64>,
    pub result: Result<Vec<f64>, Error>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub axes: Vec<String>,
    pub metrics: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// Evaluates `metric` on the Cartesian product of `axes`. Rows run with the
/// last axis fastest; a failing point keeps its error in the row.
pub fn grid_sweep<F>(axes: &[Axis], metrics: &[&str], metric: F) -> Result<SweepTable, Error>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, Error> + Sync + Send,
{
    if axes.is_empty() || axes.iter().any(|a| a.values.is_empty()) {
        return Err(Error::InvalidArgument("sweep axes must be nonempty".into()));
    }
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let point = |mut i: usize| -> Vec<f64> {
        let mut p = alloc::vec![0.0; axes.len()];
        for (k, a) in axes.iter().enumerate().rev() {
            p[k] = a.values[i % a.values.len()];
            i /= a.values.len();
        }
        p
    };
    let rows = map_indexed(total, |i| {
        let p = point(i);
        let result = metric(&p);
        SweepRow { point: p, result }
    });
    Ok(SweepTable {
        axes: axes.iter().map(|a| a.name.clone()).collect(),
        metrics: metrics.iter().map(|m| (*m).into()).collect(),
        rows,
    })
}

/// Fails with [`Error::Unstable`] unless the readout poles are all damped.
pub fn require_stable(sys: &QuadratureSystem) -> Result<(), Error> {
    match poles(sys)?.classification {
        Stability::Stable => Ok(()),
        _ => Err(Error::Unstable),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GwBudget {
    pub swlc: SpectrumTable,
    pub uwlc: SpectrumTable,
    pub conventional: SpectrumTable,
}

/// Strain noise budgets of the three interferometer topologies on a shared
/// grid with shared optical and thermal settings.
pub fn gw_budget_run(params: &GwParams, grid: &[f64]) -> Result<GwBudget, Error> {
    let table = |topology: GwTopology| -> Result<SpectrumTable, Error> {
        let sys = assemble_system(&build_gw(&GwParams {
            topology,
            ..*params
        }))?;
        noise_budget(&sys, grid)
    };
    Ok(GwBudget {
        swlc: table(GwTopology::Swlc)?,
        uwlc: table(GwTopology::Uwlc)?,
        conventional: table(GwTopology::Conventional)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{build_swlc, ModeLosses, SwlcParams};
    use crate::metrics::system_integral;

    #[test]
    fn sweep_shape_and_order() {
        let t = grid_sweep(
            &[
                Axis::new("x", alloc::vec![1.0, 2.0]),
                Axis::new("y", alloc::vec![3.0, 4.0]),
            ],
            &["s"],
            |p| Ok(alloc::vec![p[0] + p[1]]),
        )
        .unwrap();
        let pts: Vec<Vec<f64>> = t.rows.iter().map(|r| r.point.clone()).collect();
        assert_eq!(
            pts,
            alloc::vec![
                alloc::vec![1.0, 3.0],
                alloc::vec![1.0, 4.0],
                alloc::vec![2.0, 3.0],
                alloc::vec![2.0, 4.0]
            ]
        );
        assert_eq!(t.rows[3].result, Ok(alloc::vec![6.0]));
        assert!(grid_sweep(&[], &[], |_| Ok(Vec::new())).is_err());
    }

    #[test]
    fn gain_sweep_and_error_capture() {
        let t = grid_sweep(
            &[Axis::new("chi_over_kappa", alloc::vec![0.0, 0.5, 1.5])],
            &["lambda"],
            |p| {
                let amp = SwlcParams {
                    kappa: 2.0,
                    chi: 2.0 * p[0],
                    gamma_r: 1.0,
                    losses: ModeLosses::default(),
                    alpha: 1.0,
                };
                let sys = assemble_system(&build_swlc(&amp))?;
                require_stable(&sys)?;
                let conv = assemble_system(&crate::detectors::build_conventional(1.0, 0.0, 1.0))?;
                Ok(alloc::vec![
                    system_integral(&sys, 1)?.value / system_integral(&conv, 1)?.value
                ])
            },
        )
        .unwrap();
        let l: Vec<f64> = t.rows[..2]
            .iter()
            .map(|r| r.result.clone().unwrap()[0])
            .collect();
        assert!(
            (l[0] - 1.0).abs() < 1e-8 && (l[1] - 4.0 / 3.0).abs() < 1e-8,
            "{l:?}"
        );
        assert_eq!(t.rows[2].result, Err(Error::Unstable));
    }

    #[test]
    fn baseline_optimum() {
        let b = optimize_baseline(0.0, &OptimizerOptions::default()).unwrap();
        assert!((b.gamma_r / 2.0 - 1.0).abs() < 1e-3, "{b:?}");
        assert!((b.scan_rate / (2.0 / 27.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_cavity_topology_rejected() {
        assert!(optimize_scan_rate(
            1.0,
            0.0,
            AxionTopology::SingleCavity,
            &OptimizerOptions::default()
        )
        .is_err());
    }
}

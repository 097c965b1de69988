//! Single-sided noise spectra at the readout phase quadrature.

use alloc::string::String;
use alloc::vec::Vec;

use libm::{log10, pow};

use crate::error::Error;
use crate::model::{BathSpec, Quadrature, QuadratureSystem};
use crate::response::phase_response;
use crate::units::{HBAR, K_B};

/// Per-port contributions to the readout phase PSD at one frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdDecomposition {
    pub omega: f64,
    pub per_port: Vec<f64>,
    pub total: f64,
    /// `|signal transfer|²`.
    pub signal_transfer_sq: f64,
}

impl PsdDecomposition {
    /// Signal-referred PSD; `+∞` where the signal transfer vanishes.
    pub fn referred(&self) -> f64 {
        if self.signal_transfer_sq > 0.0 {
            self.total / self.signal_transfer_sq
        } else {
            f64::INFINITY
        }
    }
}

/// `|T_p|² S_p` summed over both quadratures of each port.
pub fn output_psd(
    sys: &QuadratureSystem,
    baths: &[BathSpec],
    omega: f64,
) -> Result<PsdDecomposition, Error> {
    if baths.len() != sys.port_count() {
        return Err(Error::MissingBath {
            expected: sys.port_count(),
            got: baths.len(),
        });
    }
    let (row, sig) = phase_response(sys, omega)?;
    let per_port: Vec<f64> = baths
        .iter()
        .enumerate()
        .map(|(p, bath)| {
            row[2 * p].norm_sqr() * bath.psd(Quadrature::Amplitude)
                + row[2 * p + 1].norm_sqr() * bath.psd(Quadrature::Phase)
        })
        .collect();
    let total = per_port.iter().sum();
    Ok(PsdDecomposition {
        omega,
        per_port,
        total,
        signal_transfer_sq: sig.norm_sqr(),
    })
}

/// Signal-referred PSD at one frequency using the spec's own baths.
pub fn referred_psd(sys: &QuadratureSystem, omega: f64) -> Result<f64, Error> {
    if !sys.has_signal() {
        return Err(Error::NoSignal);
    }
    Ok(output_psd(sys, &sys.default_baths(), omega)?.referred())
}

/// Sampled spectra. `sources` hold output-referred contributions; divide by
/// `signal_transfer_sq` (or use [`SpectrumTable::source_referred`]) for the
/// signal-referred form.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable {
    pub omega: Vec<f64>,
    pub source_names: Vec<String>,
    /// `sources[k][i]`: source `k` at grid point `i`.
    pub sources: Vec<Vec<f64>>,
    pub total: Vec<f64>,
    pub signal_transfer_sq: Vec<f64>,
    pub referred: Vec<f64>,
}

impl SpectrumTable {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn source_index(&self, name: &str) -> Option<usize> {
        self.source_names.iter().position(|n| n == name)
    }

    /// Signal-referred contribution of one source.
    pub fn source_referred(&self, k: usize) -> Vec<f64> {
        self.sources[k]
            .iter()
            .zip(&self.signal_transfer_sq)
            .map(|(s, t)| if *t > 0.0 { s / t } else { f64::INFINITY })
            .collect()
    }
}

/// Spectra over a frequency grid with the given per-port baths.
pub fn signal_referred_psd(
    sys: &QuadratureSystem,
    baths: &[BathSpec],
    grid: &[f64],
) -> Result<SpectrumTable, Error> {
    if !sys.has_signal() {
        return Err(Error::NoSignal);
    }
    let np = sys.port_count();
    let mut sources = alloc::vec![Vec::with_capacity(grid.len()); np];
    let mut total = Vec::with_capacity(grid.len());
    let mut tsq = Vec::with_capacity(grid.len());
    let mut referred = Vec::with_capacity(grid.len());
    for &w in grid {
        let d = output_psd(sys, baths, w)?;
        for (k, v) in d.per_port.iter().enumerate() {
            sources[k].push(*v);
        }
        referred.push(d.referred());
        total.push(d.total);
        tsq.push(d.signal_transfer_sq);
    }
    Ok(SpectrumTable {
        omega: grid.to_vec(),
        source_names: sys.ports().iter().map(|p| p.name.clone()).collect(),
        sources,
        total,
        signal_transfer_sq: tsq,
        referred,
    })
}

/// Noise budget with the baths declared in the spec. Sources are named
/// `quantum` (readout), `thermal_<mode>` and `loss_<mode>`.
pub fn noise_budget(sys: &QuadratureSystem, grid: &[f64]) -> Result<SpectrumTable, Error> {
    signal_referred_psd(sys, &sys.default_baths(), grid)
}

/// `points` log-spaced angular frequencies from `w_min` to `w_max`.
pub fn log_grid(w_min: f64, w_max: f64, points: usize) -> Result<Vec<f64>, Error> {
    if !(w_min > 0.0 && w_max > w_min && points >= 2 && w_max.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "log grid needs 0 < min < max and at least 2 points (got {w_min}, {w_max}, {points})"
        )));
    }
    let (l0, l1) = (log10(w_min), log10(w_max));
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                w_max
            } else {
                pow(10.0, l0 + (l1 - l0) * i as f64 / (points - 1) as f64)
            }
        })
        .collect())
}

/// Loss-port noise referred to the signal for the sWLC in the small-loss
/// limit: `[2γ_a S_a + 2γ_b (Ω/κ)² S_b + 2γ_c (χ/κ)² S_c] / α²`.
#[allow(clippy::too_many_arguments)]
pub fn loss_referred_noise(
    gamma: [f64; 3],
    psd: [f64; 3],
    kappa: f64,
    chi: f64,
    alpha: f64,
    omega: f64,
) -> Result<f64, Error> {
    if kappa == 0.0 {
        return Err(Error::InvalidArgument(
            "loss-referred noise needs kappa > 0".into(),
        ));
    }
    if gamma.iter().any(|g| *g < 0.0) {
        return Err(Error::InvalidArgument(
            "loss rates must be non-negative".into(),
        ));
    }
    let wk = omega / kappa;
    let ck = chi / kappa;
    Ok((2.0 * gamma[0] * psd[0]
        + 2.0 * gamma[1] * wk * wk * psd[1]
        + 2.0 * gamma[2] * ck * ck * psd[2])
        / (alpha * alpha))
}

/// Closed-form uWLC spectra, signal-referred, valid for `γ_m ≪ Ω`:
/// returns `(S_shot, S_thermal)`.
///
/// `S_shot = [γ_R² + Ω²((Ω² + χ² − κ²)/(Ω² + χ²))²] / (2γ_R α²)`,
/// `S_thermal = 4κ²χ² / (α²(χ² + Ω²)²) · k_B T / (ħ Q)`.
#[allow(clippy::too_many_arguments)]
pub fn uwlc_closed_form(
    gamma_r: f64,
    _gamma_m: f64,
    kappa: f64,
    chi: f64,
    alpha: f64,
    temperature: f64,
    q_m: f64,
    omega: f64,
) -> (f64, f64) {
    let w2 = omega * omega;
    let (k2, c2, a2) = (kappa * kappa, chi * chi, alpha * alpha);
    let ratio = (w2 + c2 - k2) / (w2 + c2);
    let shot = (gamma_r * gamma_r + w2 * ratio * ratio) / (2.0 * gamma_r * a2);
    let thermal = if temperature == 0.0 {
        0.0
    } else {
        4.0 * k2 * c2 / (a2 * (c2 + w2) * (c2 + w2)) * K_B * temperature / (HBAR * q_m)
    };
    (shot, thermal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{build_conventional, build_swlc, ModeLosses, SwlcParams};
    use crate::model::assemble_system;

    #[test]
    fn conventional_dc_level() {
        let sys = assemble_system(&build_conventional(1.0, 0.0, 1.0)).unwrap();
        assert!((referred_psd(&sys, 0.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lossless_swlc_output_is_vacuum() {
        let sys = assemble_system(&build_swlc(&SwlcParams {
            kappa: 2.0,
            chi: 1.5,
            gamma_r: 1.0,
            losses: ModeLosses::default(),
            alpha: 1.0,
        }))
        .unwrap();
        for w in [0.0, 0.3, 2.0, 50.0] {
            let d = output_psd(&sys, &[BathSpec::Vacuum], w).unwrap();
            assert!((d.total - 1.0).abs() < 1e-13);
            let sq = output_psd(
                &sys,
                &[BathSpec::Squeezed {
                    r: 0.5 * core::f64::consts::LN_2,
                }],
                w,
            )
            .unwrap();
            assert!((sq.total - 0.5).abs() < 1e-13);
        }
        assert_eq!(
            output_psd(&sys, &[], 1.0).err(),
            Some(Error::MissingBath {
                expected: 1,
                got: 0
            })
        );
    }

    #[test]
    fn twenty_db_at_dc() {
        let (g, k) = (1.0, 10.0);
        let chi = libm::sqrt(k * k - g * g);
        let amp = assemble_system(&build_swlc(&SwlcParams {
            kappa: k,
            chi,
            gamma_r: g,
            losses: ModeLosses::default(),
            alpha: 1.0,
        }))
        .unwrap();
        let con = assemble_system(&build_conventional(g, 0.0, 1.0)).unwrap();
        let r = referred_psd(&amp, 0.0).unwrap() / referred_psd(&con, 0.0).unwrap();
        assert!((r - 0.01).abs() < 1e-12, "{r}");
    }

    #[test]
    fn zero_signal_gives_infinite_referred_noise() {
        let sys = assemble_system(&build_conventional(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(referred_psd(&sys, 1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn loss_formula_cases() {
        assert_eq!(
            loss_referred_noise([0.0; 3], [1.0; 3], 2.0, 1.0, 1.0, 0.5).unwrap(),
            0.0
        );
        let v = loss_referred_noise([0.0, 0.0, 0.3], [1.0; 3], 2.0, 2.0, 1.5, 0.0).unwrap();
        assert!((v - 2.0 * 0.3 / 2.25).abs() < 1e-15);
        assert!(loss_referred_noise([0.1; 3], [1.0; 3], 0.0, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn uwlc_closed_form_limits() {
        let (s, t) = uwlc_closed_form(0.7, 0.0, 2.0, 1.0, 1.0, 4.0, 1e9, 0.0);
        assert!((s - 0.35).abs() < 1e-15);
        assert!(t > 0.0);
        assert_eq!(
            uwlc_closed_form(0.7, 0.0, 2.0, 1.0, 1.0, 0.0, 1e9, 0.3).1,
            0.0
        );
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1.0, 1e3, 4).unwrap();
        assert_eq!(g[0], 1.0);
        assert_eq!(g[3], 1e3);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert!(log_grid(0.0, 1.0, 10).is_err());
    }
}

//! Run configuration. Every rate and frequency is given in Hz and converted
//! to rad/s when a network is built.

use serde::{Deserialize, Serialize};
use wlc_core::detectors::{
    build_axion, build_conventional, build_gw, build_swlc, build_uwlc, AxionParams, AxionTopology,
    GwParams, GwTopology, LossPort, ModeLosses, SwlcParams, UwlcParams,
};
use wlc_core::model::{
    BathSpec, CouplingKind, CouplingTerm, ModeKind, ModeSpec, NetworkSpec, PortKind, PortSpec,
    Quadrature, SignalName, SignalSpec,
};
use wlc_core::sweep::OptimizerOptions;
use wlc_core::units::hz;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorConfig>,
    /// Comparator for `gain`; defaults to the conventional counterpart of `detector`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<DetectorConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub f_min_hz: f64,
    pub f_max_hz: f64,
    pub points: usize,
    /// Prepend an `f = 0` row.
    #[serde(default)]
    pub include_zero: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            f_min_hz: 1.0,
            f_max_hz: 1e4,
            points: 200,
            include_zero: false,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.f_min_hz > 0.0 && self.f_min_hz < self.f_max_hz && self.f_max_hz.is_finite()) {
            return Err(CliError::Config(format!(
                "grid needs 0 < f_min_hz < f_max_hz, got {} and {}",
                self.f_min_hz, self.f_max_hz
            )));
        }
        if self.points < 2 {
            return Err(CliError::Config(format!(
                "grid needs at least 2 points, got {}",
                self.points
            )));
        }
        Ok(())
    }

    /// Angular frequencies of the grid.
    pub fn omegas(&self) -> Result<Vec<f64>, CliError> {
        self.validate()?;
        let mut w = wlc_core::spectra::log_grid(hz(self.f_min_hz), hz(self.f_max_hz), self.points)?;
        if self.include_zero {
            w.insert(0, 0.0);
        }
        Ok(w)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BathConfig {
    #[default]
    Vacuum,
    Squeezed {
        r: f64,
    },
    Thermal {
        temperature_k: f64,
        frequency_hz: f64,
        #[serde(default)]
        vacuum_floor: bool,
    },
}

impl BathConfig {
    pub fn to_bath(self) -> BathSpec {
        match self {
            BathConfig::Vacuum => BathSpec::Vacuum,
            BathConfig::Squeezed { r } => BathSpec::Squeezed { r },
            BathConfig::Thermal {
                temperature_k,
                frequency_hz,
                vacuum_floor,
            } => BathSpec::Thermal {
                temperature: temperature_k,
                frequency: hz(frequency_hz),
                vacuum_floor,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossConfig {
    pub rate_hz: f64,
    #[serde(default)]
    pub bath: BathConfig,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<LossConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<LossConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<LossConfig>,
}

impl LossesConfig {
    fn to_losses(self) -> ModeLosses {
        let port = |l: Option<LossConfig>| {
            l.map(|l| LossPort {
                rate: hz(l.rate_hz),
                bath: l.bath.to_bath(),
            })
        };
        ModeLosses {
            a: port(self.a),
            b: port(self.b),
            c: port(self.c),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GwTopologyConfig {
    Conventional,
    Swlc,
    Uwlc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxionTopologyConfig {
    SingleCavity,
    Swlc,
    Uwlc,
}

impl AxionTopologyConfig {
    pub fn to_core(self) -> AxionTopology {
        match self {
            AxionTopologyConfig::SingleCavity => AxionTopology::SingleCavity,
            AxionTopologyConfig::Swlc => AxionTopology::Swlc,
            AxionTopologyConfig::Uwlc => AxionTopology::Uwlc,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn voyager_mass() -> f64 {
    200.0
}
fn voyager_length() -> f64 {
    4e3
}
fn voyager_power() -> f64 {
    3e6
}
fn voyager_wavelength() -> f64 {
    2e-6
}
fn voyager_q() -> f64 {
    8e9
}
fn voyager_fm() -> f64 {
    1e5
}
fn voyager_temperature() -> f64 {
    4.0
}

/// Detector description, discriminated by `kind`. `alpha` is the signal
/// coupling in the network's own normalization and is not converted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DetectorConfig {
    Conventional {
        gamma_r_hz: f64,
        #[serde(default)]
        gamma_l_hz: f64,
        #[serde(default = "one")]
        alpha: f64,
    },
    Swlc {
        kappa_hz: f64,
        chi_hz: f64,
        gamma_r_hz: f64,
        #[serde(default = "one")]
        alpha: f64,
        #[serde(default)]
        losses: LossesConfig,
    },
    Uwlc {
        kappa_hz: f64,
        chi_hz: f64,
        gamma_r_hz: f64,
        #[serde(default = "one")]
        alpha: f64,
        /// Damping of `c`; zero leaves it closed.
        #[serde(default)]
        gamma_m_hz: f64,
        #[serde(default = "one")]
        q_m: f64,
        #[serde(default)]
        temperature_k: f64,
    },
    /// Interferometer with a free differential mirror; defaults are LIGO Voyager.
    Gw {
        topology: GwTopologyConfig,
        gamma_r_hz: f64,
        #[serde(default)]
        kappa_hz: f64,
        #[serde(default)]
        chi_hz: f64,
        #[serde(default = "voyager_mass")]
        mirror_mass_kg: f64,
        #[serde(default = "voyager_length")]
        arm_length_m: f64,
        #[serde(default = "voyager_power")]
        power_w: f64,
        #[serde(default = "voyager_wavelength")]
        wavelength_m: f64,
        #[serde(default = "voyager_q")]
        q_m: f64,
        #[serde(default = "voyager_fm")]
        f_m_hz: f64,
        #[serde(default = "voyager_temperature")]
        temperature_k: f64,
    },
    Axion {
        topology: AxionTopologyConfig,
        gamma_l_hz: f64,
        gamma_r_hz: f64,
        #[serde(default)]
        kappa_hz: f64,
        #[serde(default)]
        chi_hz: f64,
        #[serde(default)]
        squeeze_r: f64,
        #[serde(default = "one")]
        alpha: f64,
    },
    /// Free-form network.
    Network {
        modes: Vec<ModeConfig>,
        #[serde(default)]
        couplings: Vec<CouplingConfig>,
        ports: Vec<PortConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signal: Option<SignalConfig>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeConfig {
    Field {
        name: String,
    },
    Mechanical {
        name: String,
        reduced_mass: f64,
        frequency_hz: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKindConfig {
    BeamSplitter,
    TwoModeSqueeze,
    PositionPhase,
    MomentumKick,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub kind: CouplingKindConfig,
    pub modes: (String, String),
    /// Beam-splitter and squeezing rates in Hz; position-phase and
    /// momentum-kick coefficients pass through unconverted.
    pub rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortKindConfig {
    Readout,
    Loss,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortConfig {
    pub kind: PortKindConfig,
    pub mode: String,
    pub rate_hz: f64,
    #[serde(default)]
    pub bath: BathConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureConfig {
    Amplitude,
    Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalNameConfig {
    #[default]
    Strain,
    Psi1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalConfig {
    pub mode: String,
    #[serde(default = "phase")]
    pub quadrature: QuadratureConfig,
    pub coupling: f64,
    #[serde(default)]
    pub name: SignalNameConfig,
}

fn phase() -> QuadratureConfig {
    QuadratureConfig::Phase
}

impl DetectorConfig {
    pub fn to_spec(&self) -> NetworkSpec {
        match self.clone() {
            DetectorConfig::Conventional {
                gamma_r_hz,
                gamma_l_hz,
                alpha,
            } => build_conventional(hz(gamma_r_hz), hz(gamma_l_hz), alpha),
            DetectorConfig::Swlc {
                kappa_hz,
                chi_hz,
                gamma_r_hz,
                alpha,
                losses,
            } => build_swlc(&SwlcParams {
                kappa: hz(kappa_hz),
                chi: hz(chi_hz),
                gamma_r: hz(gamma_r_hz),
                losses: losses.to_losses(),
                alpha,
            }),
            DetectorConfig::Uwlc {
                kappa_hz,
                chi_hz,
                gamma_r_hz,
                alpha,
                gamma_m_hz,
                q_m,
                temperature_k,
            } => build_uwlc(&UwlcParams {
                kappa: hz(kappa_hz),
                chi: hz(chi_hz),
                gamma_r: hz(gamma_r_hz),
                gamma_m: hz(gamma_m_hz),
                q_m,
                temperature: temperature_k,
                alpha,
            }),
            DetectorConfig::Gw {
                topology,
                gamma_r_hz,
                kappa_hz,
                chi_hz,
                mirror_mass_kg,
                arm_length_m,
                power_w,
                wavelength_m,
                q_m,
                f_m_hz,
                temperature_k,
            } => build_gw(&GwParams {
                mirror_mass: mirror_mass_kg,
                arm_length: arm_length_m,
                power: power_w,
                wavelength: wavelength_m,
                gamma_r: hz(gamma_r_hz),
                kappa: hz(kappa_hz),
                chi: hz(chi_hz),
                q_m,
                omega_m: hz(f_m_hz),
                temperature: temperature_k,
                topology: match topology {
                    GwTopologyConfig::Conventional => GwTopology::Conventional,
                    GwTopologyConfig::Swlc => GwTopology::Swlc,
                    GwTopologyConfig::Uwlc => GwTopology::Uwlc,
                },
            }),
            DetectorConfig::Axion {
                topology,
                gamma_l_hz,
                gamma_r_hz,
                kappa_hz,
                chi_hz,
                squeeze_r,
                alpha,
            } => build_axion(&AxionParams {
                gamma_l: hz(gamma_l_hz),
                gamma_r: hz(gamma_r_hz),
                kappa: hz(kappa_hz),
                chi: hz(chi_hz),
                squeeze_r,
                alpha,
                topology: topology.to_core(),
            }),
            DetectorConfig::Network {
                modes,
                couplings,
                ports,
                signal,
            } => NetworkSpec {
                modes: modes
                    .iter()
                    .map(|m| match m {
                        ModeConfig::Field { name } => ModeSpec::field(name),
                        ModeConfig::Mechanical {
                            name,
                            reduced_mass,
                            frequency_hz,
                        } => ModeSpec {
                            name: name.clone(),
                            kind: ModeKind::MechanicalPair {
                                reduced_mass: *reduced_mass,
                                frequency: hz(*frequency_hz),
                            },
                        },
                    })
                    .collect(),
                couplings: couplings
                    .iter()
                    .map(|c| {
                        let (kind, rate) = match c.kind {
                            CouplingKindConfig::BeamSplitter => {
                                (CouplingKind::BeamSplitter, hz(c.rate))
                            }
                            CouplingKindConfig::TwoModeSqueeze => {
                                (CouplingKind::TwoModeSqueeze, hz(c.rate))
                            }
                            CouplingKindConfig::PositionPhase => {
                                (CouplingKind::PositionPhase, c.rate)
                            }
                            CouplingKindConfig::MomentumKick => {
                                (CouplingKind::MomentumKick, c.rate)
                            }
                        };
                        CouplingTerm::new(kind, &c.modes.0, &c.modes.1, rate)
                    })
                    .collect(),
                ports: ports
                    .iter()
                    .map(|p| {
                        let kind = match p.kind {
                            PortKindConfig::Readout => PortKind::Readout,
                            PortKindConfig::Loss => PortKind::Loss,
                        };
                        PortSpec {
                            kind,
                            mode: p.mode.clone(),
                            rate: hz(p.rate_hz),
                            bath: p.bath.to_bath(),
                        }
                    })
                    .collect(),
                signal: signal.map(|s| SignalSpec {
                    mode: s.mode,
                    quadrature: match s.quadrature {
                        QuadratureConfig::Amplitude => Quadrature::Amplitude,
                        QuadratureConfig::Phase => Quadrature::Phase,
                    },
                    coupling: s.coupling,
                    name: match s.name {
                        SignalNameConfig::Strain => SignalName::Strain,
                        SignalNameConfig::Psi1 => SignalName::Psi1,
                    },
                }),
            },
        }
    }

    /// Conventional comparator sharing readout rate, signal coupling and losses.
    pub fn default_reference(&self) -> Option<DetectorConfig> {
        match self.clone() {
            DetectorConfig::Swlc {
                gamma_r_hz, alpha, ..
            }
            | DetectorConfig::Uwlc {
                gamma_r_hz, alpha, ..
            } => Some(DetectorConfig::Conventional {
                gamma_r_hz,
                gamma_l_hz: 0.0,
                alpha,
            }),
            DetectorConfig::Gw { .. } => {
                let mut r = self.clone();
                if let DetectorConfig::Gw { topology, .. } = &mut r {
                    *topology = GwTopologyConfig::Conventional;
                }
                Some(r)
            }
            DetectorConfig::Axion { .. } => {
                let mut r = self.clone();
                if let DetectorConfig::Axion { topology, .. } = &mut r {
                    *topology = AxionTopologyConfig::SingleCavity;
                }
                Some(r)
            }
            DetectorConfig::Conventional { .. } | DetectorConfig::Network { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    /// Dotted path into the configuration, e.g. `detector.chi_hz`.
    pub path: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricConfig {
    /// Gain over the reference detector.
    Lambda,
    /// `∫ dΩ/2π S^{-1}`.
    Integral,
    ScanRate,
    /// Largest imaginary part of the visible poles (Hz).
    MaxPoleImHz,
    EpIndicator,
}

impl MetricConfig {
    pub fn name(self) -> &'static str {
        match self {
            MetricConfig::Lambda => "lambda",
            MetricConfig::Integral => "integral",
            MetricConfig::ScanRate => "scan_rate",
            MetricConfig::MaxPoleImHz => "max_pole_im_hz",
            MetricConfig::EpIndicator => "ep_indicator",
        }
    }
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<AxisConfig>,
    pub metrics: Vec<MetricConfig>,
    /// Mark points that are not stable as `unstable` instead of evaluating them.
    #[serde(default = "yes")]
    pub require_stable: bool,
}

/// Scan-rate search. Rates are in units of the loss rate `γ_L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub topology: AxionTopologyConfig,
    #[serde(default)]
    pub chi_over_gamma_l: f64,
    #[serde(default)]
    pub squeeze_r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability_margin: Option<f64>,
}

impl OptimizeConfig {
    pub fn options(&self) -> Result<OptimizerOptions, CliError> {
        let d = OptimizerOptions::default();
        let o = OptimizerOptions {
            grid_points: self.grid_points.unwrap_or(d.grid_points),
            kappa_max: self.kappa_max.unwrap_or(d.kappa_max),
            gamma_min: self.gamma_min.unwrap_or(d.gamma_min),
            gamma_max: self.gamma_max.unwrap_or(d.gamma_max),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            stability_margin: self.stability_margin.unwrap_or(d.stability_margin),
            quad_rel_tol: d.quad_rel_tol,
        };
        if o.grid_points < 2
            || !(o.gamma_min > 0.0 && o.gamma_min < o.gamma_max)
            || o.kappa_max.is_nan()
            || o.kappa_max <= 0.0
        {
            return Err(CliError::Config("optimizer bounds need grid_points >= 2, 0 < gamma_min < gamma_max and kappa_max > 0".into()));
        }
        if !(o.stability_margin > 0.0 && o.stability_margin <= 1.0) {
            return Err(CliError::Config(format!(
                "stability_margin must lie in (0, 1], got {}",
                o.stability_margin
            )));
        }
        Ok(o)
    }
}

/// Parses a configuration; syntax errors carry line and column.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(CliError::from_json)?;
    from_value(value)
}

pub fn from_value(value: serde_json::Value) -> Result<RunConfig, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}

/// Applies `key=value` with a dotted key. The value is read as JSON when it
/// parses, otherwise as a string.
pub fn apply_override(root: &mut serde_json::Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{assignment}`")))?;
    let value =
        serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    set_path(root, key, value)
}

pub fn set_path(
    root: &mut serde_json::Value,
    key: &str,
    value: serde_json::Value,
) -> Result<(), CliError> {
    let mut cur = root;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("malformed key `{key}`")));
    }
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        if let Ok(idx) = part.parse::<usize>() {
            let arr = cur.as_array_mut().ok_or_else(|| {
                CliError::Config(format!("`{key}`: `{part}` indexes a non-array"))
            })?;
            let slot = arr
                .get_mut(idx)
                .ok_or_else(|| CliError::Config(format!("`{key}`: index {idx} out of range")))?;
            if last {
                *slot = value;
                return Ok(());
            }
            cur = slot;
        } else {
            if cur.is_null() {
                *cur = serde_json::Value::Object(Default::default());
            }
            let obj = cur.as_object_mut().ok_or_else(|| {
                CliError::Config(format!("`{key}`: `{part}` is not inside an object"))
            })?;
            if last {
                obj.insert((*part).to_string(), value);
                return Ok(());
            }
            cur = obj
                .entry((*part).to_string())
                .or_insert(serde_json::Value::Null);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_nested_and_indexed() {
        let mut v: serde_json::Value = serde_json::json!({"detector": {"kind": "swlc", "chi_hz": 1.0}, "sweep": {"axes": [{"values": [1]}]}});
        apply_override(&mut v, "detector.chi_hz=2.5").unwrap();
        apply_override(&mut v, "sweep.axes.0.path=detector.kappa_hz").unwrap();
        apply_override(&mut v, "output.dir=out").unwrap();
        assert_eq!(v["detector"]["chi_hz"], 2.5);
        assert_eq!(v["sweep"]["axes"][0]["path"], "detector.kappa_hz");
        assert_eq!(v["output"]["dir"], "out");
        assert!(apply_override(&mut v, "nokey").is_err());
        assert!(apply_override(&mut v, "sweep.axes.4.path=x").is_err());
    }

    #[test]
    fn syntax_errors_report_position() {
        let e = parse_config("{\n  \"detector\": ,\n}").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_config(
            r#"{"detector": {"kind": "conventional", "gamma_r_hz": 1.0, "bogus": 1}}"#
        )
        .is_err());
    }

    #[test]
    fn gw_defaults_are_voyager() {
        let c = parse_config(
            r#"{"detector": {"kind": "gw", "topology": "conventional", "gamma_r_hz": 500}}"#,
        )
        .unwrap();
        match c.detector.unwrap() {
            DetectorConfig::Gw {
                mirror_mass_kg,
                power_w,
                q_m,
                ..
            } => {
                assert_eq!((mirror_mass_kg, power_w, q_m), (200.0, 3e6, 8e9));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridConfig {
            f_min_hz: 10.0,
            f_max_hz: 1.0,
            points: 5,
            include_zero: false
        }
        .validate()
        .is_err());
        assert!(GridConfig {
            f_min_hz: 1.0,
            f_max_hz: 10.0,
            points: 1,
            include_zero: false
        }
        .validate()
        .is_err());
        let w = GridConfig {
            f_min_hz: 1.0,
            f_max_hz: 10.0,
            points: 2,
            include_zero: true,
        }
        .omegas()
        .unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[0], 0.0);
    }
}

//! Ready-made networks: conventional cavity, stable and unstable white-light
//! cavities, the GW interferometer with radiation pressure, and the axion
//! haloscope.
//!
//! Rates are in rad/s. Signals always drive the phase quadrature of mode `a`.

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

use crate::model::{
    BathSpec, CouplingKind, CouplingTerm, ModeSpec, NetworkSpec, PortSpec, Quadrature, SignalName,
    SignalSpec,
};
use crate::units::{C_LIGHT, HBAR, TWO_PI};

/// Loss channel attached to one mode.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LossPort {
    pub rate: f64,
    pub bath: BathSpec,
}

impl LossPort {
    pub fn vacuum(rate: f64) -> Self {
        Self {
            rate,
            bath: BathSpec::Vacuum,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ModeLosses {
    pub a: Option<LossPort>,
    pub b: Option<LossPort>,
    pub c: Option<LossPort>,
}

impl ModeLosses {
    /// The same vacuum loss on all three modes.
    pub fn uniform(rate: f64) -> Self {
        let p = Some(LossPort::vacuum(rate));
        Self { a: p, b: p, c: p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwlcParams {
    pub kappa: f64,
    pub chi: f64,
    pub gamma_r: f64,
    pub losses: ModeLosses,
    pub alpha: f64,
}

/// Unstable white-light cavity. The auxiliary mode `c` is a mechanical
/// oscillator with damping `gamma_m = ω_m / q_m` in a thermal bath at
/// `temperature`; `ω_m` is recovered as `q_m * gamma_m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UwlcParams {
    pub kappa: f64,
    pub chi: f64,
    pub gamma_r: f64,
    pub gamma_m: f64,
    pub q_m: f64,
    pub temperature: f64,
    pub alpha: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GwTopology {
    Conventional,
    Swlc,
    Uwlc,
}

/// Interferometer parameters in SI units, rates in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GwParams {
    /// Mass of each test mirror (kg); the differential mode has `μ = M/4`.
    pub mirror_mass: f64,
    pub arm_length: f64,
    /// Circulating arm power (W).
    pub power: f64,
    pub wavelength: f64,
    pub gamma_r: f64,
    pub kappa: f64,
    pub chi: f64,
    pub q_m: f64,
    /// Resonance of the `c` oscillator; enters through its damping and bath.
    pub omega_m: f64,
    pub temperature: f64,
    pub topology: GwTopology,
}

impl GwParams {
    /// LIGO Voyager: 200 kg mirrors, 4 km arms, 3 MW, 2 µm, with a
    /// `Q_m = 8e9` oscillator at 4 K resonating at 100 kHz.
    pub fn voyager(kappa: f64, chi: f64, gamma_r: f64, topology: GwTopology) -> Self {
        Self {
            mirror_mass: 200.0,
            arm_length: 4e3,
            power: 3e6,
            wavelength: 2e-6,
            gamma_r,
            kappa,
            chi,
            q_m: 8e9,
            omega_m: TWO_PI * 1e5,
            temperature: 4.0,
            topology,
        }
    }

    pub fn reduced_mass(&self) -> f64 {
        self.mirror_mass / 4.0
    }

    pub fn alpha_gw(&self) -> f64 {
        alpha_gw(self.power, self.arm_length, self.wavelength)
    }

    /// Coefficient of `h` in the arm phase equation (rad/s per unit strain).
    pub fn strain_coupling(&self) -> f64 {
        self.alpha_gw() * self.arm_length / HBAR
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxionTopology {
    SingleCavity,
    Swlc,
    Uwlc,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxionParams {
    /// Loss rate shared by every mode.
    pub gamma_l: f64,
    pub gamma_r: f64,
    pub kappa: f64,
    pub chi: f64,
    /// Squeeze factor of the readout input; phase noise `e^{−2r}`.
    pub squeeze_r: f64,
    pub alpha: f64,
    pub topology: AxionTopology,
}

/// `α_GW = √(2 P_c ħ ω₀ / (L c))` in J/m, with `ω₀ = 2πc/λ`.
pub fn alpha_gw(power: f64, arm_length: f64, wavelength: f64) -> f64 {
    let omega0 = TWO_PI * C_LIGHT / wavelength;
    sqrt(2.0 * power * HBAR * omega0 / (arm_length * C_LIGHT))
}

/// `α_axion = 4π η g √(ħ ω₀ 𝓔_B)`.
pub fn alpha_axion(eta: f64, g_agg: f64, omega0: f64, field_energy: f64) -> f64 {
    2.0 * TWO_PI * eta * g_agg * sqrt(HBAR * omega0 * field_energy)
}

fn phase_signal(alpha: f64, name: SignalName) -> Option<SignalSpec> {
    Some(SignalSpec {
        mode: "a".into(),
        quadrature: Quadrature::Phase,
        coupling: alpha,
        name,
    })
}

fn push_loss(ports: &mut Vec<PortSpec>, mode: &str, loss: Option<LossPort>) {
    if let Some(l) = loss {
        ports.push(PortSpec::loss(mode, l.rate, l.bath));
    }
}

fn three_modes() -> Vec<ModeSpec> {
    vec![
        ModeSpec::field("a"),
        ModeSpec::field("b"),
        ModeSpec::field("c"),
    ]
}

/// Single readout cavity `a` with optional vacuum loss.
pub fn build_conventional(gamma_r: f64, gamma_l: f64, alpha: f64) -> NetworkSpec {
    let mut ports = vec![PortSpec::readout("a", gamma_r, BathSpec::Vacuum)];
    if gamma_l > 0.0 {
        ports.push(PortSpec::loss("a", gamma_l, BathSpec::Vacuum));
    }
    NetworkSpec {
        modes: vec![ModeSpec::field("a")],
        couplings: vec![],
        ports,
        signal: phase_signal(alpha, SignalName::Strain),
    }
}

/// Sensor `a`, readout `b`, auxiliary `c`: `a–b` beam splitter, `b–c`
/// two-mode squeezer, readout on `b`.
pub fn build_swlc(p: &SwlcParams) -> NetworkSpec {
    let mut ports = vec![PortSpec::readout("b", p.gamma_r, BathSpec::Vacuum)];
    push_loss(&mut ports, "a", p.losses.a);
    push_loss(&mut ports, "b", p.losses.b);
    push_loss(&mut ports, "c", p.losses.c);
    NetworkSpec {
        modes: three_modes(),
        couplings: vec![
            CouplingTerm::beam_splitter("a", "b", p.kappa),
            CouplingTerm::two_mode_squeeze("b", "c", p.chi),
        ],
        ports,
        signal: phase_signal(p.alpha, SignalName::Strain),
    }
}

/// Same couplings as the sWLC with the readout moved to `a` and a thermal
/// damping port on `c` when `gamma_m > 0`.
pub fn build_uwlc(p: &UwlcParams) -> NetworkSpec {
    let mut ports = vec![PortSpec::readout("a", p.gamma_r, BathSpec::Vacuum)];
    if p.gamma_m > 0.0 {
        ports.push(PortSpec::loss(
            "c",
            p.gamma_m,
            BathSpec::thermal(p.temperature, p.q_m * p.gamma_m),
        ));
    }
    NetworkSpec {
        modes: three_modes(),
        couplings: vec![
            CouplingTerm::beam_splitter("a", "b", p.kappa),
            CouplingTerm::two_mode_squeeze("b", "c", p.chi),
        ],
        ports,
        signal: phase_signal(p.alpha, SignalName::Strain),
    }
}

/// Interferometer with the differential mirror mode `x`.
///
/// `x` and `p` are stored as `X = x/√ħ`, `P = p/√ħ`, so that the
/// radiation-pressure and phase couplings both read `g = α_GW/√ħ`:
/// `Ẋ = P/μ`, `Ṗ = g a1`, `ȧ2 = g X − (α_GW L/ħ) h`. The `c` oscillator
/// (all but the conventional topology) is damped at `ω_m/Q_m` into a thermal
/// bath at `T_env`.
pub fn build_gw(p: &GwParams) -> NetworkSpec {
    let g = p.alpha_gw() / sqrt(HBAR);
    let mut modes = vec![ModeSpec::field("a")];
    let mut couplings = vec![
        CouplingTerm::new(CouplingKind::PositionPhase, "a", "x", g),
        CouplingTerm::new(CouplingKind::MomentumKick, "a", "x", g),
    ];
    let mut ports = Vec::new();
    match p.topology {
        GwTopology::Conventional => {
            ports.push(PortSpec::readout("a", p.gamma_r, BathSpec::Vacuum));
        }
        GwTopology::Swlc | GwTopology::Uwlc => {
            modes.push(ModeSpec::field("b"));
            modes.push(ModeSpec::field("c"));
            couplings.push(CouplingTerm::beam_splitter("a", "b", p.kappa));
            couplings.push(CouplingTerm::two_mode_squeeze("b", "c", p.chi));
            let readout = if p.topology == GwTopology::Swlc {
                "b"
            } else {
                "a"
            };
            ports.push(PortSpec::readout(readout, p.gamma_r, BathSpec::Vacuum));
            ports.push(PortSpec::loss(
                "c",
                p.omega_m / p.q_m,
                BathSpec::thermal(p.temperature, p.omega_m),
            ));
        }
    }
    modes.push(ModeSpec::mechanical("x", p.reduced_mass(), 0.0));
    NetworkSpec {
        modes,
        couplings,
        ports,
        signal: phase_signal(-p.strain_coupling(), SignalName::Strain),
    }
}

/// Haloscope with vacuum loss `γ_L` on every mode and squeezed readout input.
pub fn build_axion(p: &AxionParams) -> NetworkSpec {
    let bath = if p.squeeze_r == 0.0 {
        BathSpec::Vacuum
    } else {
        BathSpec::Squeezed { r: p.squeeze_r }
    };
    let signal = phase_signal(p.alpha, SignalName::Psi1);
    if p.topology == AxionTopology::SingleCavity {
        let mut ports = vec![PortSpec::readout("a", p.gamma_r, bath)];
        if p.gamma_l > 0.0 {
            ports.push(PortSpec::loss("a", p.gamma_l, BathSpec::Vacuum));
        }
        return NetworkSpec {
            modes: vec![ModeSpec::field("a")],
            couplings: vec![],
            ports,
            signal,
        };
    }
    let readout = if p.topology == AxionTopology::Swlc {
        "b"
    } else {
        "a"
    };
    let mut ports = vec![PortSpec::readout(readout, p.gamma_r, bath)];
    if p.gamma_l > 0.0 {
        for m in ["a", "b", "c"] {
            ports.push(PortSpec::loss(m, p.gamma_l, BathSpec::Vacuum));
        }
    }
    NetworkSpec {
        modes: three_modes(),
        couplings: vec![
            CouplingTerm::beam_splitter("a", "b", p.kappa),
            CouplingTerm::two_mode_squeeze("b", "c", p.chi),
        ],
        ports,
        signal,
    }
}

/// Multi-mode sensor bank for the generalized readout relation.
///
/// Sensors `a0..` couple among themselves through beam splitters
/// (`sensor_couplings` entries `(j, k, r)` give `𝓜_jk = −r`, `𝓜_kj = r`),
/// to the hub `b` with `κβ_j` and to their auxiliaries `c0..` with `χβ_j`.
/// The auxiliaries mirror the sensor couplings. The signal drives the phase
/// quadrature of sensor `signal_mode` with coupling `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultimodeParams {
    pub sensor_couplings: Vec<(usize, usize, f64)>,
    pub beta: Vec<f64>,
    pub signal_mode: usize,
    pub alpha: f64,
    pub kappa: f64,
    pub chi: f64,
    pub gamma_r: f64,
}

pub fn build_multimode_swlc(p: &MultimodeParams) -> NetworkSpec {
    use alloc::format;
    let j = p.beta.len();
    let a = |k: usize| format!("a{k}");
    let c = |k: usize| format!("c{k}");
    let mut modes: Vec<ModeSpec> = (0..j).map(|k| ModeSpec::field(&a(k))).collect();
    modes.push(ModeSpec::field("b"));
    modes.extend((0..j).map(|k| ModeSpec::field(&c(k))));
    let mut couplings = Vec::new();
    for &(x, y, r) in &p.sensor_couplings {
        couplings.push(CouplingTerm::beam_splitter(&a(x), &a(y), r));
        couplings.push(CouplingTerm::beam_splitter(&c(x), &c(y), r));
    }
    for k in 0..j {
        couplings.push(CouplingTerm::beam_splitter(&a(k), "b", p.kappa * p.beta[k]));
        couplings.push(CouplingTerm::two_mode_squeeze(
            "b",
            &c(k),
            p.chi * p.beta[k],
        ));
    }
    NetworkSpec {
        modes,
        couplings,
        ports: vec![PortSpec::readout("b", p.gamma_r, BathSpec::Vacuum)],
        signal: Some(SignalSpec {
            mode: a(p.signal_mode),
            quadrature: Quadrature::Phase,
            coupling: p.alpha,
            name: SignalName::Strain,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_spec;

    #[test]
    fn builders_validate() {
        let specs = [
            build_conventional(1.0, 0.5, 1.0),
            build_swlc(&SwlcParams {
                kappa: 2.0,
                chi: 1.0,
                gamma_r: 1.0,
                losses: ModeLosses::uniform(0.1),
                alpha: 1.0,
            }),
            build_uwlc(&UwlcParams {
                kappa: 2.0,
                chi: 1.0,
                gamma_r: 1.0,
                gamma_m: 1e-3,
                q_m: 1e6,
                temperature: 4.0,
                alpha: 1.0,
            }),
            build_gw(&GwParams::voyager(1.0, 0.9, 0.1, GwTopology::Swlc)),
            build_gw(&GwParams::voyager(1.0, 0.9, 0.1, GwTopology::Conventional)),
            build_axion(&AxionParams {
                gamma_l: 1.0,
                gamma_r: 2.0,
                kappa: 3.0,
                chi: 1.0,
                squeeze_r: 0.3,
                alpha: 1.0,
                topology: AxionTopology::Uwlc,
            }),
        ];
        for s in &specs {
            assert!(validate_spec(s).is_empty(), "{:?}", validate_spec(s));
        }
    }

    #[test]
    fn voyager_alpha() {
        let a = alpha_gw(3e6, 4e3, 2e-6);
        assert!((a / 7.05e-13 - 1.0).abs() < 2e-3, "{a}");
    }

    #[test]
    fn axion_coupling_formula() {
        let (eta, g, w, e) = (0.6, 1e-15, 6e9, 2.0);
        let want = 4.0 * core::f64::consts::PI * eta * g * sqrt(HBAR * w * e);
        assert!((alpha_axion(eta, g, w, e) / want - 1.0).abs() < 1e-15);
    }

    #[test]
    fn axion_topologies_differ_only_in_readout_mode() {
        let base = AxionParams {
            gamma_l: 1.0,
            gamma_r: 2.0,
            kappa: 3.0,
            chi: 1.0,
            squeeze_r: 0.0,
            alpha: 1.0,
            topology: AxionTopology::Swlc,
        };
        let s = build_axion(&base);
        let u = build_axion(&AxionParams {
            topology: AxionTopology::Uwlc,
            ..base
        });
        assert_eq!(s.modes, u.modes);
        assert_eq!(s.couplings, u.couplings);
        assert_eq!(s.ports[1..], u.ports[1..]);
        assert_eq!(s.ports[0].mode, "b");
        assert_eq!(u.ports[0].mode, "a");
    }
}

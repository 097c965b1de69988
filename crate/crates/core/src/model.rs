//! Network descriptions and their compilation into quadrature state space.
//!
//! Each field mode contributes the quadratures `(y1, y2)` with
//! `y1 = (y + y†)/√2`, `y2 = (y − y†)/(√2 i)`; a mechanical pair contributes
//! `(x, p)`. The frequency convention is `d/dt → −iΩ`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use libm::{exp, sqrt};

use crate::error::Error;
use crate::kalman::Decomposition;
use crate::linalg::RMatrix;
use crate::units::{HBAR, K_B};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModeKind {
    /// Optical or microwave field mode.
    Field,
    /// Mechanical degree of freedom `(x, p)` with reduced mass and eigenfrequency.
    MechanicalPair { reduced_mass: f64, frequency: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpec {
    pub name: String,
    pub kind: ModeKind,
}

impl ModeSpec {
    pub fn field(name: &str) -> Self {
        Self {
            name: name.into(),
            kind: ModeKind::Field,
        }
    }

    pub fn mechanical(name: &str, reduced_mass: f64, frequency: f64) -> Self {
        Self {
            name: name.into(),
            kind: ModeKind::MechanicalPair {
                reduced_mass,
                frequency,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingKind {
    BeamSplitter,
    TwoModeSqueeze,
    /// Field phase picks up the mechanical position: `ẏ2 += α x`.
    PositionPhase,
    /// Field amplitude kicks the mechanical momentum: `ṗ += α y1`.
    MomentumKick,
}

/// A bilinear coupling. For position-phase and momentum-kick terms `modes`
/// is `(field, mechanical)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingTerm {
    pub kind: CouplingKind,
    pub modes: (String, String),
    pub rate: f64,
}

impl CouplingTerm {
    pub fn new(kind: CouplingKind, a: &str, b: &str, rate: f64) -> Self {
        Self {
            kind,
            modes: (a.into(), b.into()),
            rate,
        }
    }

    pub fn beam_splitter(a: &str, b: &str, kappa: f64) -> Self {
        Self::new(CouplingKind::BeamSplitter, a, b, kappa)
    }

    pub fn two_mode_squeeze(b: &str, c: &str, chi: f64) -> Self {
        Self::new(CouplingKind::TwoModeSqueeze, b, c, chi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PortKind {
    Readout,
    Loss,
}

/// Statistics of the field entering a port.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum BathSpec {
    #[default]
    Vacuum,
    /// Phase quadrature `e^{−2r}`, amplitude quadrature `e^{+2r}`.
    Squeezed { r: f64 },
    /// High-temperature level `2 k_B T / (ħ ω_m)` on both quadratures, plus 1
    /// when `vacuum_floor` is set.
    Thermal {
        temperature: f64,
        frequency: f64,
        vacuum_floor: bool,
    },
}

impl BathSpec {
    pub fn thermal(temperature: f64, frequency: f64) -> Self {
        BathSpec::Thermal {
            temperature,
            frequency,
            vacuum_floor: false,
        }
    }

    /// Single-sided PSD of the given quadrature.
    pub fn psd(&self, quadrature: Quadrature) -> f64 {
        match *self {
            BathSpec::Vacuum => 1.0,
            BathSpec::Squeezed { r } => match quadrature {
                Quadrature::Amplitude => exp(2.0 * r),
                Quadrature::Phase => exp(-2.0 * r),
            },
            BathSpec::Thermal {
                temperature,
                frequency,
                vacuum_floor,
            } => {
                let level = 2.0 * K_B * temperature / (HBAR * frequency);
                if vacuum_floor {
                    level + 1.0
                } else {
                    level
                }
            }
        }
    }

    fn is_valid(&self) -> bool {
        match *self {
            BathSpec::Vacuum => true,
            BathSpec::Squeezed { r } => r.is_finite(),
            BathSpec::Thermal {
                temperature,
                frequency,
                ..
            } => {
                temperature.is_finite()
                    && temperature >= 0.0
                    && frequency.is_finite()
                    && frequency > 0.0
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PortSpec {
    pub kind: PortKind,
    pub mode: String,
    pub rate: f64,
    pub bath: BathSpec,
}

impl PortSpec {
    pub fn readout(mode: &str, rate: f64, bath: BathSpec) -> Self {
        Self {
            kind: PortKind::Readout,
            mode: mode.into(),
            rate,
            bath,
        }
    }

    pub fn loss(mode: &str, rate: f64, bath: BathSpec) -> Self {
        Self {
            kind: PortKind::Loss,
            mode: mode.into(),
            rate,
            bath,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadrature {
    Amplitude,
    Phase,
}

impl Quadrature {
    fn offset(self) -> usize {
        match self {
            Quadrature::Amplitude => 0,
            Quadrature::Phase => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalName {
    /// GW strain `h`.
    Strain,
    /// Axion field quadrature `Ψ₁`.
    Psi1,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignalSpec {
    pub mode: String,
    pub quadrature: Quadrature,
    pub coupling: f64,
    pub name: SignalName,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NetworkSpec {
    pub modes: Vec<ModeSpec>,
    pub couplings: Vec<CouplingTerm>,
    pub ports: Vec<PortSpec>,
    pub signal: Option<SignalSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    DuplicateModeName,
    UnknownMode,
    NegativeCouplingRate,
    NonFinite,
    NegativePortRate,
    ReadoutCount,
    NonPositiveMass,
    NegativeFrequency,
    ModeKindMismatch,
    SelfCoupling,
    InvalidBath,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::DuplicateModeName => "duplicate mode name",
            Rule::UnknownMode => "unknown mode",
            Rule::NegativeCouplingRate => "negative coupling rate",
            Rule::NonFinite => "non-finite value",
            Rule::NegativePortRate => "negative port rate",
            Rule::ReadoutCount => "exactly one readout port required",
            Rule::NonPositiveMass => "reduced mass must be positive",
            Rule::NegativeFrequency => "mechanical frequency must be non-negative",
            Rule::ModeKindMismatch => "coupling incompatible with mode kind",
            Rule::SelfCoupling => "coupling must join two distinct modes",
            Rule::InvalidBath => "invalid bath parameters",
        };
        f.write_str(s)
    }
}

/// One validation failure: the offending element and the broken rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub element: String,
    pub rule: Rule,
}

impl Diagnostic {
    fn new(element: String, rule: Rule) -> Self {
        Self { element, rule }
    }

    pub fn message(&self) -> String {
        format!("{}: {}", self.element, self.rule)
    }
}

pub fn validate_spec(spec: &NetworkSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (i, m) in spec.modes.iter().enumerate() {
        let el = format!("modes[{i}] '{}'", m.name);
        if spec.modes[..i].iter().any(|o| o.name == m.name) {
            out.push(Diagnostic::new(el.clone(), Rule::DuplicateModeName));
        }
        if let ModeKind::MechanicalPair {
            reduced_mass,
            frequency,
        } = m.kind
        {
            if !reduced_mass.is_finite() || !frequency.is_finite() {
                out.push(Diagnostic::new(el.clone(), Rule::NonFinite));
            } else {
                if reduced_mass <= 0.0 {
                    out.push(Diagnostic::new(el.clone(), Rule::NonPositiveMass));
                }
                if frequency < 0.0 {
                    out.push(Diagnostic::new(el, Rule::NegativeFrequency));
                }
            }
        }
    }
    let kind_of = |name: &str| spec.modes.iter().find(|m| m.name == name).map(|m| m.kind);
    let is_field = |k: ModeKind| matches!(k, ModeKind::Field);

    for (i, c) in spec.couplings.iter().enumerate() {
        let el = format!("couplings[{i}] {:?}({}, {})", c.kind, c.modes.0, c.modes.1);
        let (ka, kb) = (kind_of(&c.modes.0), kind_of(&c.modes.1));
        if ka.is_none() || kb.is_none() {
            out.push(Diagnostic::new(el.clone(), Rule::UnknownMode));
        }
        if c.modes.0 == c.modes.1 {
            out.push(Diagnostic::new(el.clone(), Rule::SelfCoupling));
        }
        if !c.rate.is_finite() {
            out.push(Diagnostic::new(el.clone(), Rule::NonFinite));
        }
        match c.kind {
            CouplingKind::BeamSplitter | CouplingKind::TwoModeSqueeze => {
                if c.rate < 0.0 {
                    out.push(Diagnostic::new(el.clone(), Rule::NegativeCouplingRate));
                }
                if let (Some(a), Some(b)) = (ka, kb) {
                    if !is_field(a) || !is_field(b) {
                        out.push(Diagnostic::new(el, Rule::ModeKindMismatch));
                    }
                }
            }
            CouplingKind::PositionPhase | CouplingKind::MomentumKick => {
                if let (Some(a), Some(b)) = (ka, kb) {
                    if !is_field(a) || is_field(b) {
                        out.push(Diagnostic::new(el, Rule::ModeKindMismatch));
                    }
                }
            }
        }
    }

    let readouts = spec
        .ports
        .iter()
        .filter(|p| p.kind == PortKind::Readout)
        .count();
    if readouts != 1 {
        out.push(Diagnostic::new(
            format!("ports ({readouts} readout)"),
            Rule::ReadoutCount,
        ));
    }
    for (i, p) in spec.ports.iter().enumerate() {
        let el = format!("ports[{i}] {:?} on '{}'", p.kind, p.mode);
        match kind_of(&p.mode) {
            None => out.push(Diagnostic::new(el.clone(), Rule::UnknownMode)),
            Some(k) if !is_field(k) => {
                out.push(Diagnostic::new(el.clone(), Rule::ModeKindMismatch))
            }
            _ => {}
        }
        if !p.rate.is_finite() {
            out.push(Diagnostic::new(el.clone(), Rule::NonFinite));
        } else if p.rate < 0.0 {
            out.push(Diagnostic::new(el.clone(), Rule::NegativePortRate));
        }
        if !p.bath.is_valid() {
            out.push(Diagnostic::new(el, Rule::InvalidBath));
        }
    }

    if let Some(s) = &spec.signal {
        let el = format!("signal on '{}'", s.mode);
        match kind_of(&s.mode) {
            None => out.push(Diagnostic::new(el.clone(), Rule::UnknownMode)),
            Some(k) if !is_field(k) => {
                out.push(Diagnostic::new(el.clone(), Rule::ModeKindMismatch))
            }
            _ => {}
        }
        if !s.coupling.is_finite() {
            out.push(Diagnostic::new(el, Rule::NonFinite));
        }
    }
    out
}

/// A port as seen by the assembled system.
#[derive(Clone, Debug, PartialEq)]
pub struct PortInfo {
    /// Source name used in spectra: `quantum` for the readout, `thermal_<mode>`
    /// or `loss_<mode>` for loss ports.
    pub name: String,
    pub kind: PortKind,
    pub mode: String,
    pub rate: f64,
    pub bath: BathSpec,
}

/// Real state-space model `ẏ = A y + B u + s h`, `v = C y + D u`.
///
/// Inputs are ordered port by port, amplitude quadrature first. The two output
/// rows are the amplitude and phase quadratures of the readout field.
#[derive(Clone, Debug)]
pub struct QuadratureSystem {
    labels: Vec<String>,
    drift: RMatrix,
    input: RMatrix,
    output: RMatrix,
    feedthrough: RMatrix,
    signal: Vec<f64>,
    has_signal: bool,
    ports: Vec<PortInfo>,
    readout: usize,
    max_rate: f64,
    min_rate: f64,
    block: Vec<usize>,
    minimal: Decomposition,
}

impl QuadratureSystem {
    pub fn state_dim(&self) -> usize {
        self.drift.rows()
    }

    pub fn port_count(&self) -> usize {
        self.ports.len()
    }

    pub fn input_count(&self) -> usize {
        2 * self.ports.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn drift(&self) -> &RMatrix {
        &self.drift
    }

    pub fn input_map(&self) -> &RMatrix {
        &self.input
    }

    pub fn output_map(&self) -> &RMatrix {
        &self.output
    }

    pub fn feedthrough(&self) -> &RMatrix {
        &self.feedthrough
    }

    pub fn signal_map(&self) -> &[f64] {
        &self.signal
    }

    pub fn has_signal(&self) -> bool {
        self.has_signal
    }

    pub fn ports(&self) -> &[PortInfo] {
        &self.ports
    }

    pub fn readout_port(&self) -> usize {
        self.readout
    }

    /// Largest coupling, port or mechanical rate (rad/s).
    pub fn max_rate(&self) -> f64 {
        self.max_rate
    }

    /// Smallest positive rate among couplings, ports and mechanical frequencies.
    pub fn min_rate(&self) -> f64 {
        self.min_rate
    }

    /// State indices structurally connected to the readout phase quadrature.
    pub fn readout_block(&self) -> &[usize] {
        &self.block
    }

    /// Minimal realization of the full input (ports, then signal) to readout map.
    pub fn minimal(&self) -> &Decomposition {
        &self.minimal
    }

    pub fn default_baths(&self) -> Vec<BathSpec> {
        self.ports.iter().map(|p| p.bath).collect()
    }
}

struct Layout {
    offsets: Vec<usize>,
    labels: Vec<String>,
}

impl Layout {
    fn new(spec: &NetworkSpec) -> Self {
        let mut offsets = Vec::with_capacity(spec.modes.len());
        let mut labels = Vec::new();
        for m in &spec.modes {
            offsets.push(labels.len());
            match m.kind {
                ModeKind::Field => {
                    labels.push(format!("{}1", m.name));
                    labels.push(format!("{}2", m.name));
                }
                ModeKind::MechanicalPair { .. } => {
                    labels.push(format!("{}.x", m.name));
                    labels.push(format!("{}.p", m.name));
                }
            }
        }
        Self { offsets, labels }
    }

    fn at(&self, spec: &NetworkSpec, name: &str) -> usize {
        let i = spec
            .modes
            .iter()
            .position(|m| m.name == name)
            .expect("validated mode name");
        self.offsets[i]
    }

    fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Adds the Hamiltonian (port-free) drift of `spec` into `a`.
fn hamiltonian_terms(spec: &NetworkSpec, layout: &Layout, a: &mut RMatrix) {
    for (m, &o) in spec.modes.iter().zip(&layout.offsets) {
        if let ModeKind::MechanicalPair {
            reduced_mass,
            frequency,
        } = m.kind
        {
            a[(o, o + 1)] += 1.0 / reduced_mass;
            a[(o + 1, o)] -= reduced_mass * frequency * frequency;
        }
    }
    for c in &spec.couplings {
        let x = layout.at(spec, &c.modes.0);
        let y = layout.at(spec, &c.modes.1);
        let r = c.rate;
        match c.kind {
            CouplingKind::BeamSplitter => {
                for q in 0..2 {
                    a[(x + q, y + q)] -= r;
                    a[(y + q, x + q)] += r;
                }
            }
            CouplingKind::TwoModeSqueeze => {
                a[(x, y)] += r;
                a[(x + 1, y + 1)] -= r;
                a[(y, x)] += r;
                a[(y + 1, x + 1)] -= r;
            }
            CouplingKind::PositionPhase => a[(x + 1, y)] += r,
            CouplingKind::MomentumKick => a[(y + 1, x)] += r,
        }
    }
}

/// Port-free drift matrix of a validated spec.
pub fn hamiltonian_drift(spec: &NetworkSpec) -> Result<RMatrix, Error> {
    let diags = validate_spec(spec);
    if !diags.is_empty() {
        return Err(Error::InvalidSpec(diags));
    }
    let layout = Layout::new(spec);
    let mut a = RMatrix::zeros(layout.dim(), layout.dim());
    hamiltonian_terms(spec, &layout, &mut a);
    Ok(a)
}

fn port_names(spec: &NetworkSpec) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for p in &spec.ports {
        let base = match (p.kind, p.bath) {
            (PortKind::Readout, _) => "quantum".to_string(),
            (PortKind::Loss, BathSpec::Thermal { .. }) => format!("thermal_{}", p.mode),
            (PortKind::Loss, _) => format!("loss_{}", p.mode),
        };
        let mut name = base.clone();
        let mut k = 2;
        while names.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        names.push(name);
    }
    names
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

fn union(parent: &mut [usize], i: usize, j: usize) {
    let (ri, rj) = (find(parent, i), find(parent, j));
    if ri != rj {
        parent[ri] = rj;
    }
}

fn readout_block(spec: &NetworkSpec, layout: &Layout, readout_state: usize) -> Vec<usize> {
    let n = layout.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    for (m, &o) in spec.modes.iter().zip(&layout.offsets) {
        if let ModeKind::MechanicalPair { .. } = m.kind {
            union(&mut parent, o, o + 1);
        }
    }
    for c in &spec.couplings {
        let x = layout.at(spec, &c.modes.0);
        let y = layout.at(spec, &c.modes.1);
        match c.kind {
            CouplingKind::BeamSplitter | CouplingKind::TwoModeSqueeze => {
                union(&mut parent, x, y);
                union(&mut parent, x + 1, y + 1);
            }
            CouplingKind::PositionPhase => union(&mut parent, x + 1, y),
            CouplingKind::MomentumKick => union(&mut parent, x, y + 1),
        }
    }
    let root = find(&mut parent, readout_state);
    (0..n).filter(|&i| find(&mut parent, i) == root).collect()
}

pub fn assemble_system(spec: &NetworkSpec) -> Result<QuadratureSystem, Error> {
    let diags = validate_spec(spec);
    if !diags.is_empty() {
        return Err(Error::InvalidSpec(diags));
    }
    let layout = Layout::new(spec);
    let n = layout.dim();
    let np = spec.ports.len();
    let mut a = RMatrix::zeros(n, n);
    hamiltonian_terms(spec, &layout, &mut a);

    let mut b = RMatrix::zeros(n, 2 * np);
    let mut c = RMatrix::zeros(2, n);
    let mut d = RMatrix::zeros(2, 2 * np);
    let names = port_names(spec);
    let mut ports = Vec::with_capacity(np);
    let mut readout = 0;
    let mut readout_state = 0;
    for (k, (p, name)) in spec.ports.iter().zip(names).enumerate() {
        let o = layout.at(spec, &p.mode);
        let g = sqrt(2.0 * p.rate);
        for q in 0..2 {
            a[(o + q, o + q)] -= p.rate;
            b[(o + q, 2 * k + q)] = g;
        }
        if p.kind == PortKind::Readout {
            readout = k;
            readout_state = o + 1;
            for q in 0..2 {
                c[(q, o + q)] = -g;
                d[(q, 2 * k + q)] = 1.0;
            }
        }
        ports.push(PortInfo {
            name,
            kind: p.kind,
            mode: p.mode.clone(),
            rate: p.rate,
            bath: p.bath,
        });
    }

    let mut s = vec![0.0; n];
    if let Some(sig) = &spec.signal {
        s[layout.at(spec, &sig.mode) + sig.quadrature.offset()] += sig.coupling;
    }

    let mut rates: Vec<f64> = Vec::new();
    for cpl in &spec.couplings {
        if matches!(
            cpl.kind,
            CouplingKind::BeamSplitter | CouplingKind::TwoModeSqueeze
        ) {
            rates.push(cpl.rate.abs());
        }
    }
    rates.extend(spec.ports.iter().map(|p| p.rate));
    for m in &spec.modes {
        if let ModeKind::MechanicalPair { frequency, .. } = m.kind {
            rates.push(frequency);
        }
    }
    rates.retain(|r| *r > 0.0);
    let mut max_rate = rates.iter().copied().fold(0.0, f64::max);
    if max_rate == 0.0 {
        max_rate = a.max_abs();
    }
    let min_rate = rates.iter().copied().fold(max_rate, f64::min);

    let block = readout_block(spec, &layout, readout_state);
    let mut b_aug = RMatrix::zeros(n, 2 * np + 1);
    for i in 0..n {
        for j in 0..2 * np {
            b_aug[(i, j)] = b[(i, j)];
        }
        b_aug[(i, 2 * np)] = s[i];
    }
    let minimal = Decomposition::new(&a, &b_aug, &c);

    Ok(QuadratureSystem {
        labels: layout.labels,
        drift: a,
        input: b,
        output: c,
        feedthrough: d,
        signal: s,
        has_signal: spec.signal.is_some(),
        ports,
        readout,
        max_rate,
        min_rate,
        block,
        minimal,
    })
}

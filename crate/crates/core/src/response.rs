//! Frequency response, poles, PT symmetry and exceptional-point diagnostics.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;
use num_complex::Complex64;

use crate::error::Error;
use crate::kalman::Decomposition;
use crate::linalg::{condition_number, CMatrix, Lu, RMatrix, Schur};
use crate::model::{
    assemble_system, hamiltonian_drift, CouplingKind, ModeKind, NetworkSpec, QuadratureSystem,
};

/// Poles with `|Im Ω|` below this fraction of the largest rate are marginal.
pub const MARGINAL_TOL: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Readout response at one frequency. Row 0 is the amplitude quadrature of the
/// readout field, row 1 the phase quadrature.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub omega: f64,
    /// `2 × inputs`, inputs ordered port by port with amplitude quadrature first.
    pub noise: CMatrix,
    pub signal: [Complex64; 2],
}

impl TransferMatrix {
    /// Phase-quadrature response to input column `j`.
    pub fn phase_noise(&self, j: usize) -> Complex64 {
        self.noise[(1, j)]
    }

    pub fn phase_signal(&self) -> Complex64 {
        self.signal[1]
    }
}

/// `C (−iΩ − A)^{-1} [B | s]` for the requested output rows of a realization.
fn respond(dec: &Decomposition, rows: &[usize], omega: f64) -> Result<Vec<Vec<Complex64>>, Error> {
    let m = dec.order();
    let cols = dec.b.cols();
    if m == 0 {
        return Ok(rows.iter().map(|_| vec![ZERO; cols]).collect());
    }
    let mat = CMatrix::from_fn(m, m, |i, j| {
        let diag = if i == j {
            Complex64::new(0.0, -omega)
        } else {
            ZERO
        };
        diag - dec.a[(i, j)]
    });
    let lu = Lu::new(mat).map_err(|_| Error::EvaluationAtPole { omega })?;
    let mut out = Vec::with_capacity(rows.len());
    for &r in rows {
        let c: Vec<Complex64> = dec
            .c
            .row(r)
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let w = lu.solve_transpose(&c);
        let row = (0..cols)
            .map(|j| (0..m).map(|i| w[i] * dec.b[(i, j)]).sum())
            .collect();
        out.push(row);
    }
    Ok(out)
}

pub fn transfer_matrix(sys: &QuadratureSystem, omega: f64) -> Result<TransferMatrix, Error> {
    if !omega.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "frequency must be finite, got {omega}"
        )));
    }
    let n_in = sys.input_count();
    let resp = respond(sys.minimal(), &[0, 1], omega)?;
    let d = sys.feedthrough();
    let noise = CMatrix::from_fn(2, n_in, |r, j| resp[r][j] + d[(r, j)]);
    Ok(TransferMatrix {
        omega,
        noise,
        signal: [resp[0][n_in], resp[1][n_in]],
    })
}

/// Phase-quadrature row only: `(noise entries per input, signal entry)`.
pub fn phase_response(
    sys: &QuadratureSystem,
    omega: f64,
) -> Result<(Vec<Complex64>, Complex64), Error> {
    let n_in = sys.input_count();
    let mut row = respond(sys.minimal(), &[1], omega)?
        .pop()
        .unwrap_or_default();
    let d = sys.feedthrough();
    for (j, z) in row.iter_mut().enumerate().take(n_in) {
        *z += d[(1, j)];
    }
    let s = row.pop().unwrap_or(ZERO);
    Ok((row, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Marginal,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pole {
    pub omega: Complex64,
    /// Not visible in the phase readout (uncontrollable or unobservable).
    pub hidden: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleSet {
    pub poles: Vec<Pole>,
    pub classification: Stability,
    /// Absolute marginality tolerance used (rad/s).
    pub tolerance: f64,
}

impl PoleSet {
    pub fn visible(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.poles.iter().filter(|p| !p.hidden).map(|p| p.omega)
    }

    pub fn hidden(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.poles.iter().filter(|p| p.hidden).map(|p| p.omega)
    }

    /// Groups poles closer than `tol` and counts them.
    pub fn multiplicities(&self, tol: f64) -> Vec<(Complex64, usize)> {
        let mut groups: Vec<(Complex64, usize)> = Vec::new();
        for p in &self.poles {
            match groups.iter_mut().find(|(z, _)| (z - p.omega).norm() <= tol) {
                Some(g) => g.1 += 1,
                None => groups.push((p.omega, 1)),
            }
        }
        groups
    }
}

fn classify(visible: &[Complex64], tol: f64) -> Stability {
    if visible.iter().any(|z| z.im > tol) {
        Stability::Unstable
    } else if visible.iter().any(|z| z.im.abs() <= tol) {
        Stability::Marginal
    } else {
        Stability::Stable
    }
}

/// Realization of the readout block seen through the phase quadrature.
fn block_realization(sys: &QuadratureSystem) -> (RMatrix, RMatrix, RMatrix) {
    let idx = sys.readout_block();
    let a = sys.drift().select(idx, idx);
    let n_in = sys.input_count();
    let mut b = RMatrix::zeros(idx.len(), n_in + 1);
    for (r, &i) in idx.iter().enumerate() {
        for j in 0..n_in {
            b[(r, j)] = sys.input_map()[(i, j)];
        }
        b[(r, n_in)] = sys.signal_map()[i];
    }
    let c = RMatrix::from_fn(1, idx.len(), |_, j| sys.output_map()[(1, idx[j])]);
    (a, b, c)
}

/// Poles `Ω = iλ` of the drift block connected to the phase readout, with
/// modes absent from the minimal realization flagged as hidden. Stability is
/// classified from the visible poles.
pub fn poles(sys: &QuadratureSystem) -> Result<PoleSet, Error> {
    let (a, b, c) = block_realization(sys);
    let dec = Decomposition::new(&a, &b, &c);
    let visible: Vec<Complex64> = dec
        .visible_eigenvalues()?
        .into_iter()
        .map(|l| I * l)
        .collect();
    let hidden: Vec<Complex64> = dec
        .hidden_eigenvalues()?
        .into_iter()
        .map(|l| I * l)
        .collect();
    let tolerance = MARGINAL_TOL * sys.max_rate();
    let classification = classify(&visible, tolerance);
    let mut poles: Vec<Pole> = visible
        .into_iter()
        .map(|omega| Pole {
            omega,
            hidden: false,
        })
        .collect();
    poles.extend(hidden.into_iter().map(|omega| Pole {
        omega,
        hidden: true,
    }));
    Ok(PoleSet {
        poles,
        classification,
        tolerance,
    })
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: Vec<f64>,
    /// Pole sets with poles reordered to follow their predecessors.
    pub sets: Vec<PoleSet>,
    pub warnings: Vec<String>,
}

/// Poles along a monotone parameter sweep, matched point to point by
/// nearest-neighbour assignment.
pub fn pole_trajectory<F>(family: F, sweep: &[f64]) -> Result<Trajectory, Error>
where
    F: Fn(f64) -> Result<QuadratureSystem, Error>,
{
    if sweep.is_empty() {
        return Err(Error::InvalidArgument("empty sweep".into()));
    }
    let up = sweep.windows(2).all(|w| w[1] > w[0]);
    let down = sweep.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(Error::InvalidArgument(
            "sweep must be strictly monotone".into(),
        ));
    }
    let mut sets: Vec<PoleSet> = Vec::with_capacity(sweep.len());
    let mut warnings = Vec::new();
    for (k, &x) in sweep.iter().enumerate() {
        let mut set = poles(&family(x)?)?;
        if let Some(prev) = sets.last() {
            if prev.poles.len() == set.poles.len() {
                set.poles = match_poles(&prev.poles, &set.poles);
                let sep = min_separation(&prev.poles, prev.tolerance.max(f64::MIN_POSITIVE));
                let step = prev
                    .poles
                    .iter()
                    .zip(&set.poles)
                    .map(|(a, b)| (a.omega - b.omega).norm())
                    .fold(0.0, f64::max);
                if sep.is_finite() && step > 0.5 * sep {
                    warnings.push(format!("step {k} (param {x}): pole motion {step:e} exceeds half the pole separation {sep:e}"));
                }
            } else {
                warnings.push(format!("step {k} (param {x}): pole count changed"));
            }
        }
        sets.push(set);
    }
    Ok(Trajectory {
        params: sweep.to_vec(),
        sets,
        warnings,
    })
}

fn match_poles(prev: &[Pole], next: &[Pole]) -> Vec<Pole> {
    let n = prev.len();
    // visible poles pair with visible ones first, then by distance
    let mut pairs: Vec<(bool, f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push((p.hidden != q.hidden, (p.omega - q.omega).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut slot: Vec<Option<Pole>> = vec![None; n];
    let mut used = vec![false; n];
    for (_, _, i, j) in pairs {
        if slot[i].is_none() && !used[j] {
            slot[i] = Some(next[j]);
            used[j] = true;
        }
    }
    slot.into_iter()
        .map(|p| p.expect("complete assignment"))
        .collect()
}

fn min_separation(poles: &[Pole], tol: f64) -> f64 {
    let mut sep = f64::INFINITY;
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            let d = (poles[i].omega - poles[j].omega).norm();
            if d > tol {
                sep = sep.min(d);
            }
        }
    }
    sep
}

/// Mode exchange used to certify PT symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct PtWitness {
    /// `(sensor, auxiliary)` mode pairs swapped by P.
    pub pairs: Vec<(String, String)>,
    /// Modes whose phase quadrature is negated by T.
    pub conjugated: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtReport {
    pub is_pt_symmetric: bool,
    pub witness: Option<PtWitness>,
    pub ep_indicator: f64,
}

/// Tests invariance of the port-free Hamiltonian form under exchanging sensor
/// and auxiliary modes combined with time reversal.
///
/// The hub is the mode carrying both beam-splitter and two-mode-squeeze
/// partners. Sensors are the rest of its beam-splitter cluster, auxiliaries
/// the two-mode-squeeze partners and their own beam-splitter cluster. Every
/// bijection between the two sides is tried.
pub fn pt_check(spec: &NetworkSpec) -> Result<PtReport, Error> {
    let sys = assemble_system(spec)?;
    let ep = ep_indicator(&sys)?;
    let a = hamiltonian_drift(spec)?;
    let witness = find_pt_witness(spec, &a);
    Ok(PtReport {
        is_pt_symmetric: witness.is_some(),
        witness,
        ep_indicator: ep,
    })
}

fn find_pt_witness(spec: &NetworkSpec, a: &RMatrix) -> Option<PtWitness> {
    let names: Vec<&str> = spec.modes.iter().map(|m| m.name.as_str()).collect();
    let idx = |s: &str| names.iter().position(|n| *n == s).expect("validated name");
    let nm = names.len();
    let mut bs = vec![Vec::new(); nm];
    let mut tms = vec![Vec::new(); nm];
    for c in &spec.couplings {
        let (i, j) = (idx(&c.modes.0), idx(&c.modes.1));
        match c.kind {
            CouplingKind::BeamSplitter => {
                bs[i].push(j);
                bs[j].push(i);
            }
            CouplingKind::TwoModeSqueeze => {
                tms[i].push(j);
                tms[j].push(i);
            }
            _ => return None,
        }
    }
    if spec
        .modes
        .iter()
        .any(|m| !matches!(m.kind, ModeKind::Field))
    {
        return None;
    }
    let hub = (0..nm).find(|&i| !bs[i].is_empty() && !tms[i].is_empty())?;
    let cluster = |seeds: &[usize]| {
        let mut seen = vec![false; nm];
        let mut stack: Vec<usize> = seeds.to_vec();
        seen[hub] = true;
        let mut out = Vec::new();
        while let Some(i) = stack.pop() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            out.push(i);
            stack.extend(bs[i].iter().copied());
        }
        out.sort_unstable();
        out
    };
    let sensors = cluster(&bs[hub]);
    let aux = cluster(&tms[hub]);
    if sensors.is_empty()
        || sensors.len() != aux.len()
        || sensors.iter().any(|s| aux.contains(s))
        || sensors.len() > 7
    {
        return None;
    }

    // H = Σ^{-1} A with Σ = ⊕ [[0, 1], [-1, 0]], so Σ^{-1} A = -Σ A.
    let n = a.rows();
    let h = RMatrix::from_fn(n, n, |i, j| {
        if i % 2 == 0 {
            -a[(i + 1, j)]
        } else {
            a[(i - 1, j)]
        }
    });
    let tol = 1e-9 * h.max_abs().max(f64::MIN_POSITIVE);

    let mut perm: Vec<usize> = (0..aux.len()).collect();
    loop {
        let mut target: Vec<usize> = (0..nm).collect();
        let mut sign = vec![1.0; n];
        for (k, &s) in sensors.iter().enumerate() {
            let c = aux[perm[k]];
            target[s] = c;
            target[c] = s;
            sign[2 * s + 1] = -1.0;
            sign[2 * c + 1] = -1.0;
        }
        // (M y)_{2 target(m) + q} = sign · y_{2m + q}; check Mᵀ H M = H.
        let map = |i: usize| 2 * target[i / 2] + i % 2;
        let ok = (0..n).all(|i| {
            (0..n).all(|j| (sign[i] * sign[j] * h[(map(i), map(j))] - h[(i, j)]).abs() <= tol)
        });
        if ok {
            let pairs = sensors
                .iter()
                .enumerate()
                .map(|(k, &s)| (names[s].into(), names[aux[perm[k]]].into()))
                .collect();
            let mut conjugated: Vec<String> = sensors
                .iter()
                .chain(aux.iter())
                .map(|&i| names[i].into())
                .collect();
            conjugated.sort();
            return Some(PtWitness { pairs, conjugated });
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Condition number of the unit-column eigenvector matrix of the readout
/// block drift (hidden modes included), divided by the dimension so that a
/// normal matrix scores 1. Diverges at an exceptional point.
pub fn ep_indicator(sys: &QuadratureSystem) -> Result<f64, Error> {
    let idx = sys.readout_block();
    let a = sys.drift().select(idx, idx);
    if a.rows() == 0 {
        return Ok(1.0);
    }
    let v = Schur::new(&a.to_complex())?.eigenvectors();
    Ok(condition_number(&v) / a.rows() as f64)
}

/// `Δ(Ω) = (χ² − κ²) βᵀ (−iΩ − 𝓜)^{-1} β`.
pub fn delta_detuning(
    m: &CMatrix,
    beta: &[f64],
    kappa: f64,
    chi: f64,
    omega: f64,
) -> Result<Complex64, Error> {
    let g_beta = resolvent_apply(m, beta, omega)?;
    let bgb: Complex64 = beta.iter().zip(&g_beta).map(|(b, z)| z * *b).sum();
    Ok(bgb * (chi * chi - kappa * kappa))
}

fn resolvent_apply(m: &CMatrix, v: &[f64], omega: f64) -> Result<Vec<Complex64>, Error> {
    let n = m.rows();
    if v.len() != n || m.cols() != n {
        return Err(Error::InvalidArgument(
            "coupling vector length does not match mode matrix".into(),
        ));
    }
    let mat = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(0.0, -omega) - m[(i, j)]
        } else {
            -m[(i, j)]
        }
    });
    let lu = Lu::new(mat)?;
    let rhs: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(lu.solve(&rhs))
}

/// Phase-quadrature readout of a multi-mode sensor fed back through `b` and
/// an auxiliary bank: returns the `(u₂, h)` coefficients of `v₂`.
///
/// Sensors obey `ȧ = 𝓜 a − κ β b + α h`, the hub `ḃ = −γ_R b + κ βᵀa + χ βᵀc†
/// + √(2γ_R) u`, with the same normalization as [`transfer_matrix`].
pub fn multimode_readout(
    m: &CMatrix,
    beta: &[f64],
    alpha: &[f64],
    kappa: f64,
    chi: f64,
    gamma_r: f64,
    omega: f64,
) -> Result<(Complex64, Complex64), Error> {
    if alpha.len() != beta.len() {
        return Err(Error::InvalidArgument(
            "signal vector length does not match coupling vector".into(),
        ));
    }
    let delta = delta_detuning(m, beta, kappa, chi, omega)?;
    let g_alpha = resolvent_apply(m, alpha, omega)?;
    let bga: Complex64 = beta.iter().zip(&g_alpha).map(|(b, z)| z * *b).sum();
    let w = Complex64::new(omega, 0.0);
    let noise = (w - I * gamma_r - I * delta) / (w + I * gamma_r - I * delta);
    let signal = -bga * (sqrt(2.0 * gamma_r) * kappa) / (Complex64::new(gamma_r, -omega) - delta);
    Ok((noise, signal))
}

//! Integrated figures of merit: inverse-PSD integrals, sensitivity gain,
//! scan rate and the loss and thermal limits.

use alloc::vec::Vec;

use libm::log;

use crate::error::Error;
use crate::model::QuadratureSystem;
use crate::quad::integrate;
use crate::spectra::referred_psd;
use crate::units::{HBAR, K_B, TWO_PI};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureOfMerit {
    pub value: f64,
    pub abs_error: f64,
    /// Upper limit of the adaptive part (rad/s).
    pub cutoff: f64,
    pub tail_corrected: bool,
}

/// Quadrature layout for an integral over `[0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationOptions {
    /// Largest rate of the problem; the cutoff is `1e3` times this.
    pub max_rate: f64,
    /// Smallest rate; decade breakpoints start two decades below it.
    pub min_rate: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl IntegrationOptions {
    pub fn new(max_rate: f64, min_rate: f64) -> Self {
        Self {
            max_rate,
            min_rate: min_rate.min(max_rate),
            rel_tol: 1e-10,
            max_panels: 4000,
        }
    }

    pub fn for_system(sys: &QuadratureSystem) -> Self {
        Self::new(sys.max_rate(), sys.min_rate())
    }

    pub fn cutoff(&self) -> f64 {
        1e3 * self.max_rate
    }

    fn breakpoints(&self) -> Vec<f64> {
        let wc = self.cutoff();
        let mut pts = alloc::vec![0.0];
        let mut b = 1e-2 * self.min_rate;
        while b < wc {
            pts.push(b);
            b *= 10.0;
        }
        pts.push(wc);
        pts
    }
}

/// Divergence is declared when the fitted tail exponent is at least this.
pub const DIVERGENCE_EXPONENT: f64 = -1.1;

/// `∫₀^∞ dΩ/2π S(Ω)^{-power}`: adaptive Gauss-Kronrod up to the cutoff plus a
/// power-law tail fitted between `Ω_c` and `2Ω_c`.
pub fn integrated_inverse_psd<S>(
    s: S,
    power: u32,
    opts: &IntegrationOptions,
) -> Result<FigureOfMerit, Error>
where
    S: Fn(f64) -> Result<f64, Error>,
{
    if !(power == 1 || power == 2) {
        return Err(Error::InvalidArgument(alloc::format!(
            "power must be 1 or 2, got {power}"
        )));
    }
    if !(opts.max_rate > 0.0 && opts.min_rate > 0.0) {
        return Err(Error::InvalidArgument(
            "integration scales must be positive".into(),
        ));
    }
    let f = |w: f64| -> Result<f64, Error> {
        let v = s(w)?;
        if v.is_nan() || v <= 0.0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "spectrum must be positive, got {v} at {w} rad/s"
            )));
        }
        Ok(if power == 1 { 1.0 / v } else { 1.0 / (v * v) })
    };
    let wc = opts.cutoff();
    let f1 = f(wc)?;
    let f2 = f(2.0 * wc)?;
    let f4 = f(4.0 * wc)?;
    let (tail, tail_err, corrected) = if f1 == 0.0 {
        (0.0, 0.0, false)
    } else {
        let n = log(f2 / f1) / log(2.0);
        if n.is_nan() || n >= DIVERGENCE_EXPONENT {
            return Err(Error::Divergent { exponent: n });
        }
        let tail = f1 * wc / (-n - 1.0);
        let err = if f2 > 0.0 && f4 > 0.0 {
            let n2 = log(f4 / f2) / log(2.0);
            (f1 * wc / (-n2 - 1.0) - tail).abs()
        } else {
            tail.abs()
        };
        (tail, err, true)
    };
    let q = integrate(f, &opts.breakpoints(), opts.rel_tol, 0.0, opts.max_panels)?;
    Ok(FigureOfMerit {
        value: (q.value + tail) / TWO_PI,
        abs_error: (q.abs_error + tail_err) / TWO_PI,
        cutoff: wc,
        tail_corrected: corrected,
    })
}

/// Integrated inverse signal-referred PSD of an assembled system.
pub fn system_integral(sys: &QuadratureSystem, power: u32) -> Result<FigureOfMerit, Error> {
    integrated_inverse_psd(
        |w| referred_psd(sys, w),
        power,
        &IntegrationOptions::for_system(sys),
    )
}

/// Scan rate `R = ∫ dΩ/2π S_Ψ^{-2}`.
pub fn scan_rate(sys: &QuadratureSystem) -> Result<FigureOfMerit, Error> {
    system_integral(sys, 2)
}

/// Ratio of the power-1 integrals of two spectra.
pub fn gain_lambda<A, C>(amp: A, conv: C, opts: &IntegrationOptions) -> Result<f64, Error>
where
    A: Fn(f64) -> Result<f64, Error>,
    C: Fn(f64) -> Result<f64, Error>,
{
    let a = integrated_inverse_psd(amp, 1, opts)?;
    let c = integrated_inverse_psd(conv, 1, opts)?;
    Ok(a.value / c.value)
}

/// Gain of an amplified system over a reference, each integrated on its own scales.
pub fn system_gain(amp: &QuadratureSystem, reference: &QuadratureSystem) -> Result<f64, Error> {
    Ok(system_integral(amp, 1)?.value / system_integral(reference, 1)?.value)
}

/// Integral over the energy-fluctuation bound `ΔE²/(4ħ²)` (ħ = 1).
pub fn eql_ratio(integral: f64, energy_variance: f64) -> f64 {
    integral / (energy_variance / 4.0)
}

/// `ħ γ_R Q_m / (k_B T)`.
pub fn lambda_max_thermal(q_m: f64, gamma_r: f64, temperature: f64) -> f64 {
    HBAR * gamma_r * q_m / (K_B * temperature)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossBudget {
    pub within: bool,
    /// Left side over right side of the budget inequality.
    pub ratio: f64,
}

/// `γ_a S_a + (γ_R/κ)² γ_b S_b + (χ/κ)² γ_c S_c ≤ γ_R³ / (4κ²)`.
pub fn loss_budget_check(
    gamma: [f64; 3],
    psd: [f64; 3],
    kappa: f64,
    chi: f64,
    gamma_r: f64,
) -> LossBudget {
    let rk = gamma_r / kappa;
    let ck = chi / kappa;
    let lhs = gamma[0] * psd[0] + rk * rk * gamma[1] * psd[1] + ck * ck * gamma[2] * psd[2];
    let rhs = gamma_r * gamma_r * gamma_r / (4.0 * kappa * kappa);
    let ratio = lhs / rhs;
    LossBudget {
        within: ratio <= 1.0,
        ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_spectrum_diverges() {
        let r = integrated_inverse_psd(|_| Ok(2.0), 1, &IntegrationOptions::new(1.0, 1.0));
        assert!(matches!(r, Err(Error::Divergent { .. })));
    }

    #[test]
    fn lorentzian_integral() {
        let (g, a) = (3.0, 0.7);
        let fom = integrated_inverse_psd(
            |w| Ok((w * w + g * g) / (2.0 * g * a * a)),
            1,
            &IntegrationOptions::new(g, g),
        )
        .unwrap();
        assert!((fom.value / (a * a / 2.0) - 1.0).abs() < 1e-8);
        assert!(fom.tail_corrected);
        assert!(fom.abs_error < 1e-6 * fom.value);
    }

    #[test]
    fn thermal_limit_scalings() {
        let base = lambda_max_thermal(8e9, TWO_PI * 1e3, 4.0);
        assert!((base / 96.0 - 1.0).abs() < 0.01, "{base}");
        assert!((lambda_max_thermal(8e9, TWO_PI * 500.0, 4.0) / base - 0.5).abs() < 1e-14);
        assert!((lambda_max_thermal(8e9, TWO_PI * 1e3, 8.0) / base - 0.5).abs() < 1e-14);
    }

    #[test]
    fn eql_linearity() {
        assert_eq!(eql_ratio(0.5, 2.0), 1.0);
        assert_eq!(eql_ratio(0.5, 4.0), 0.5);
    }

    #[test]
    fn loss_budget_boundaries() {
        let b = loss_budget_check([0.0; 3], [1.0; 3], 10.0, 9.9, 1.0);
        assert!(b.within && b.ratio == 0.0);
        let (k, g) = (10.0, 1.0);
        let b = loss_budget_check([g * g * g / (4.0 * k * k), 0.0, 0.0], [1.0; 3], k, 9.9, g);
        assert!(b.within && (b.ratio - 1.0).abs() < 1e-15);
    }
}

//! Closed-form scattering off a bare two-level detector.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::BareParams;
use crate::solution::{DetectionReport, ScatterSolution};

/// A denominator is treated as zero below this fraction of its term scale.
pub const DEGENERACY_TOLERANCE: f64 = 1e-14;

pub(crate) fn guard(factor: &'static str, value: Complex64, scale: f64) -> Result<Complex64> {
    let magnitude = value.norm();
    if magnitude <= DEGENERACY_TOLERANCE * scale || magnitude == 0.0 {
        return Err(Error::DegenerateDenominator {
            factor,
            magnitude,
            scale,
        });
    }
    Ok(value)
}

/// `t`, `r` and `e_q` for a photon incident from the left:
///
/// ```text
/// t   = (iγ_q + Δ) / D
/// r   = −iΓ₁ / D
/// e_q = h / D,        D = (iγ_q + Δ) + iΓ₁
/// ```
pub fn bare_amplitudes(p: &BareParams) -> Result<ScatterSolution> {
    p.validate()?;
    let i = Complex64::i();
    let gamma_1 = p.gamma_1();
    let detuned = Complex64::new(p.delta, p.gamma_q);
    let den = guard(
        "(iγ_q + Δ) + iΓ₁",
        detuned + i * gamma_1,
        p.delta.abs() + p.gamma_q + gamma_1,
    )?;
    Ok(ScatterSolution::bare(
        detuned / den,
        -i * gamma_1 / den,
        Complex64::new(p.h, 0.0) / den,
    ))
}

pub fn bare_dp(p: &BareParams) -> Result<DetectionReport> {
    bare_amplitudes(p).map(|s| s.report())
}

/// Resonant DP `Γ₁ / (Γ₁² + Γ₁ + γ_q²)` (valid for `v_g = 1`).
pub fn resonant_bare_dp(gamma_q: f64, gamma_1: f64) -> f64 {
    gamma_1 / (gamma_1 * gamma_1 + gamma_1 + gamma_q * gamma_q)
}

/// Largest bare DP over the coupling at detuning `Δ`, attained at
/// `Γ₁ = √(Δ² + γ_q²)` (valid for `v_g = 1`).
pub fn bare_dp_ceiling(gamma_q: f64, delta: f64) -> (f64, f64) {
    let gamma_1 = delta.hypot(gamma_q);
    let eta = gamma_1 / (gamma_1 * gamma_1 + gamma_1 + delta * delta + gamma_q * gamma_q);
    (gamma_1, eta)
}

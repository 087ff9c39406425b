//! Phase- and magnitude-matching conditions for maximal photon conversion
//! into the cavity, and the atom–cavity coupling that satisfies them at `h = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::CavityParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingReport {
    /// `Γ₂ V g h`; zero when the phase condition holds.
    pub phase_residual: f64,
    /// `(γ_c − Γ₂)[2g² + γ_q(γ_c + Γ₂) + γ_c Γ₁] + g²V² − h²γ_c²`.
    pub magnitude_residual: f64,
    /// Sum of the magnitudes of the terms in `magnitude_residual`.
    pub magnitude_scale: f64,
    /// `None` when `Γ₂ < γ_c`.
    pub g_opt: Option<f64>,
}

impl MatchingReport {
    pub fn g_opt(&self, p: &CavityParams) -> Result<f64> {
        self.g_opt.ok_or(Error::GOptUndefined {
            gamma_2: p.gamma_2(),
            gamma_c: p.gamma_c,
        })
    }

    pub fn relative_magnitude_residual(&self) -> f64 {
        if self.magnitude_scale > 0.0 {
            self.magnitude_residual.abs() / self.magnitude_scale
        } else {
            0.0
        }
    }
}

pub fn matching_report(p: &CavityParams) -> MatchingReport {
    let gamma_1 = p.gamma_1();
    let gamma_2 = p.gamma_2();
    let (gq, gc, g, v, h) = (p.gamma_q, p.gamma_c, p.g, p.v, p.h);

    let lead = (gc - gamma_2) * (2.0 * g * g + gq * (gc + gamma_2) + gc * gamma_1);
    let mode = g * g * v * v;
    let direct = h * h * gc * gc;

    MatchingReport {
        phase_residual: gamma_2 * v * g * h,
        magnitude_residual: lead + mode - direct,
        magnitude_scale: lead.abs() + mode + direct,
        g_opt: optimal_atom_cavity_coupling(p).ok(),
    }
}

/// `g_opt = √((Γ₂² − γ_c²) γ_q / (2γ_c))`.
pub fn optimal_atom_cavity_coupling(p: &CavityParams) -> Result<f64> {
    if p.gamma_c <= 0.0 {
        return Err(Error::InvalidParams(
            "optimal atom-cavity coupling needs gamma_c > 0".into(),
        ));
    }
    let gamma_2 = p.gamma_2();
    if gamma_2 < p.gamma_c {
        return Err(Error::GOptUndefined {
            gamma_2,
            gamma_c: p.gamma_c,
        });
    }
    Ok(matched_coupling(p))
}

/// `g_opt` continued by zero below the threshold `Γ₂ = γ_c`.
pub fn matched_coupling(p: &CavityParams) -> f64 {
    if p.gamma_c <= 0.0 {
        return 0.0;
    }
    let gamma_2 = p.gamma_2();
    let g2 = (gamma_2 * gamma_2 - p.gamma_c * p.gamma_c) * p.gamma_q / (2.0 * p.gamma_c);
    g2.max(0.0).sqrt()
}

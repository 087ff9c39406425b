//! Closed-form scattering off an atom embedded in a two-mode microring cavity.
//!
//! With `A = Δ_c + iγ_c`, `B = Δ + iγ_q`, `Λ = Ah + gV`, `Υ = 2g² − AB`,
//! `Θ = AΓ₁ + BΓ₂` and `D = 2iΥ + 2Θ + 4hgV`:
//!
//! ```text
//! e_q = −2iΛ / D
//! e_b = −(2ig + hV) Λ / ((A + iΓ₂) D)
//! e_a = (V D − (2ig + hV) Λ) / ((A + iΓ₂) D)
//! r   = −2Λ² / ((A + iΓ₂) D)
//! t   = ((A − iΓ₂) D − 2Λ²) / ((A + iΓ₂) D)
//! ```
//!
//! Every expression agrees with the direct solve of the five stationary
//! conditions in [`crate::oracle`] to rounding. `2iΥ` is `2i(2g² − AB)`.

use num_complex::Complex64;

use crate::bare::guard;
use crate::error::Result;
use crate::params::{CavityParams, Flavor};
use crate::solution::{DetectionReport, ScatterSolution};

pub fn cavity_amplitudes(p: &CavityParams) -> Result<ScatterSolution> {
    p.validate()?;
    let i = Complex64::i();
    let (h, v, g) = (p.h, p.v, p.g);
    let gamma_1 = p.gamma_1();
    let gamma_2 = p.gamma_2();

    let a = Complex64::new(p.delta_c, p.gamma_c);
    let b = Complex64::new(p.delta, p.gamma_q);
    let lambda = a * h + g * v;
    let upsilon = 2.0 * g * g - a * b;
    let theta = a * gamma_1 + b * gamma_2;

    let cavity_den = guard("A + iΓ₂", a + i * gamma_2, a.norm() + gamma_2)?;
    let den = guard(
        "2iΥ + 2Θ + 4hgV",
        2.0 * i * upsilon + 2.0 * theta + 4.0 * h * g * v,
        2.0 * (2.0 * g * g + a.norm() * b.norm())
            + 2.0 * (a.norm() * gamma_1 + b.norm() * gamma_2)
            + 4.0 * h * g * v,
    )?;
    let full = cavity_den * den;
    let mode_drive = 2.0 * i * g + h * v;

    Ok(ScatterSolution {
        t: ((a - i * gamma_2) * den - 2.0 * lambda * lambda) / full,
        r: -2.0 * lambda * lambda / full,
        e_q: -2.0 * i * lambda / den,
        e_a: (v * den - mode_drive * lambda) / full,
        e_b: -mode_drive * lambda / full,
        flavor: Flavor::Cavity,
    })
}

pub fn cavity_dp(p: &CavityParams) -> Result<DetectionReport> {
    cavity_amplitudes(p).map(|s| s.report())
}

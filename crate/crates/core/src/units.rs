//! Unit conventions.
//!
//! Every rate, frequency and coupling is stored as an angular quantity
//! (rad·MHz, or √(rad·MHz) for the waveguide couplings under `v_g = 1`).
//! User-facing values are quoted divided by 2π, e.g. `γ_q/2π = 0.16 MHz`.

use std::f64::consts::TAU;

/// Converts a `/2π` user value to its angular counterpart.
#[inline]
pub fn to_angular(user: f64) -> f64 {
    TAU * user
}

/// Converts an angular value back to `/2π` user units.
#[inline]
pub fn to_user(angular: f64) -> f64 {
    angular / TAU
}

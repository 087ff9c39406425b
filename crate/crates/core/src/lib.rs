//! Detection probability of a single waveguided photon absorbed by a
//! two-level atomic detector, either coupled directly to the waveguide or
//! embedded in a two-mode microring cavity.
//!
//! All quantities are angular (rad·MHz) internally; see [`units`].

pub mod bare;
pub mod cavity;
pub mod error;
pub mod figures;
pub mod matching;
pub mod optimize;
pub mod oracle;
pub mod params;
pub mod solution;
pub mod sweep;
pub mod units;
pub mod verify;

pub use bare::{bare_amplitudes, bare_dp};
pub use cavity::{cavity_amplitudes, cavity_dp};
pub use error::{Error, Result};
pub use matching::{matching_report, optimal_atom_cavity_coupling, MatchingReport};
pub use params::{BareParams, CavityParams, Flavor, Param, SystemParams};
pub use solution::{DetectionReport, OutcomeShares, ScatterSolution};

/// Evaluates the closed-form model for either parameter flavor.
pub fn evaluate(p: &SystemParams) -> Result<ScatterSolution> {
    match p {
        SystemParams::Bare(b) => bare_amplitudes(b),
        SystemParams::Cavity(c) => cavity_amplitudes(c),
    }
}

//! Randomized equivalence run between the closed forms and the linear oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::{BareParams, CavityParams};
use crate::units::to_angular;
use crate::{bare_amplitudes, cavity_amplitudes, oracle};

/// Fixed so that every run draws the same parameter sets.
pub const VERIFY_SEED: u64 = 0x5EED_0D7E_C7A1;

/// Acceptance bound on the relative amplitude deviation.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub draws: usize,
    pub max_bare_deviation: f64,
    pub max_cavity_deviation: f64,
    /// Largest oracle back-substitution residual relative to the largest
    /// coefficient of its system.
    pub max_relative_residual: f64,
}

impl VerifyReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_bare_deviation.max(self.max_cavity_deviation)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() < EQUIVALENCE_TOLERANCE && self.max_relative_residual < 1e-10
    }
}

/// One physical parameter set in `/2π` ranges: dissipations in `[0.01, 2]`,
/// `h, V` in `[0, 2]`, `g` in `[0, 1]`, detunings in `[−2, 2]`.
pub fn random_cavity_params<R: Rng>(rng: &mut R) -> CavityParams {
    let mut u = |lo: f64, hi: f64| to_angular(rng.gen_range(lo..=hi));
    CavityParams {
        delta: u(-2.0, 2.0),
        delta_c: u(-2.0, 2.0),
        gamma_q: u(0.01, 2.0),
        gamma_c: u(0.01, 2.0),
        h: u(0.0, 2.0),
        v: u(0.0, 2.0),
        g: u(0.0, 1.0),
        v_g: 1.0,
    }
}

pub fn verify_oracle_equivalence(draws: usize) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let mut report = VerifyReport {
        draws,
        max_bare_deviation: 0.0,
        max_cavity_deviation: 0.0,
        max_relative_residual: 0.0,
    };
    for _ in 0..draws {
        let cavity = random_cavity_params(&mut rng);
        let bare: BareParams = cavity.bare();

        let bare_sys = oracle::build_bare_system(&bare);
        let (bare_ref, bare_diag) = oracle::solve(&bare_sys)?;
        let closed = bare_amplitudes(&bare)?;
        report.max_bare_deviation = report
            .max_bare_deviation
            .max(closed.relative_deviation(&bare_ref));

        let cav_sys = oracle::build_cavity_system(&cavity);
        let (cav_ref, cav_diag) = oracle::solve(&cav_sys)?;
        let closed = cavity_amplitudes(&cavity)?;
        report.max_cavity_deviation = report
            .max_cavity_deviation
            .max(closed.relative_deviation(&cav_ref));

        report.max_relative_residual = report
            .max_relative_residual
            .max(bare_diag.residual_norm / bare_sys.max_coefficient())
            .max(cav_diag.residual_norm / cav_sys.max_coefficient());
    }
    Ok(report)
}

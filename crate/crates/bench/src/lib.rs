//! Shared fixtures for the criterion benches.

use wgdp_core::figures::{reference_cavity, FigurePreset};
use wgdp_core::optimize::{Bounds, FreeParameter, OptimizationProblem};
use wgdp_core::units::to_angular;
use wgdp_core::{BareParams, CavityParams, Param, SystemParams};

pub fn bare_point() -> BareParams {
    BareParams::with_gamma_1(0.0, to_angular(0.16), to_angular(0.16))
}

/// Near the cavity optimum.
pub fn cavity_point() -> CavityParams {
    reference_cavity(0.0, to_angular(0.61), to_angular(0.29))
}

/// The `(h, V)` map at reduced resolution.
pub fn small_fig4(count: usize) -> FigurePreset {
    FigurePreset::for_figure(4)
        .expect("preset")
        .with_count(count)
}

pub fn cavity_problem() -> OptimizationProblem {
    OptimizationProblem::new(
        SystemParams::Cavity(reference_cavity(0.0, 0.0, 0.0)),
        vec![
            FreeParameter {
                param: Param::V,
                bounds: Bounds::new(0.0, 2.0),
            },
            FreeParameter {
                param: Param::G,
                bounds: Bounds::new(0.0, 1.0),
            },
        ],
    )
}

//! Parameter sets and axis ranges that regenerate the reference figures.
//! Ranges bracket the visible maxima; counts follow the default grid
//! resolutions and can be overridden.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{BareParams, CavityParams, Param, SystemParams};
use crate::sweep::{
    line_scan_with, sweep_with, AtomCavityCoupling, AxisSpec, Execution, SweepResult,
    DEFAULT_GRID_COUNT, DEFAULT_LINE_COUNT,
};
use crate::units::to_angular;

/// Atomic dissipation `γ_q/2π` in MHz.
pub const GAMMA_Q_USER: f64 = 0.16;
/// Cavity dissipation `γ_c/2π` in MHz.
pub const GAMMA_C_USER: f64 = 0.76;
/// Atom–cavity coupling `g/2π` in MHz used for the `(h, V)` map.
pub const G_USER: f64 = 0.29;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigurePreset {
    pub figure: u8,
    pub description: String,
    pub base: SystemParams,
    pub axes: Vec<AxisSpec>,
    /// Set for the `V` line scan only.
    pub coupling: Option<AtomCavityCoupling>,
}

pub fn reference_cavity(h: f64, v: f64, g: f64) -> CavityParams {
    CavityParams::resonant(to_angular(GAMMA_Q_USER), to_angular(GAMMA_C_USER), h, v, g)
}

impl FigurePreset {
    pub fn for_figure(figure: u8) -> Result<Self> {
        let n = DEFAULT_GRID_COUNT;
        let gamma_q = to_angular(GAMMA_Q_USER);
        let preset = match figure {
            2 => Self {
                figure,
                description: "bare DP vs gamma_q and resonant h".into(),
                base: SystemParams::Bare(BareParams::new(0.0, gamma_q, 0.0)),
                axes: vec![
                    AxisSpec::new(Param::GammaQ, 0.01, 1.0, n),
                    AxisSpec::new(Param::H, 0.0, 0.5, n),
                ],
                coupling: None,
            },
            3 => Self {
                figure,
                description: "bare DP vs detuning and Gamma1 at gamma_q/2pi = 0.16".into(),
                base: SystemParams::Bare(BareParams::new(0.0, gamma_q, 0.0)),
                axes: vec![
                    AxisSpec::new(Param::Delta, -2.0, 2.0, n),
                    AxisSpec::new(Param::Gamma1, 0.0, 1.0, n),
                ],
                coupling: None,
            },
            4 => Self {
                figure,
                description: "cavity DP vs h and V at g/2pi = 0.29".into(),
                base: SystemParams::Cavity(reference_cavity(0.0, 0.0, to_angular(G_USER))),
                axes: vec![
                    AxisSpec::new(Param::H, 0.0, 1.0, n),
                    AxisSpec::new(Param::V, 0.0, 2.0, n),
                ],
                coupling: None,
            },
            5 => Self {
                figure,
                description: "cavity DP vs V and g at h = 0".into(),
                base: SystemParams::Cavity(reference_cavity(0.0, 0.0, 0.0)),
                axes: vec![
                    AxisSpec::new(Param::V, 0.0, 2.0, n),
                    AxisSpec::new(Param::G, 0.0, 1.0, n),
                ],
                coupling: None,
            },
            6 => Self {
                figure,
                description: "outcome budget vs V at h = 0, g matched to V".into(),
                base: SystemParams::Cavity(reference_cavity(0.0, 0.0, 0.0)),
                axes: vec![AxisSpec::new(Param::V, 0.0, 2.0, DEFAULT_LINE_COUNT)],
                coupling: Some(AtomCavityCoupling::Matched),
            },
            other => {
                return Err(Error::InvalidParams(format!(
                    "no preset for figure {other}; expected 2 to 6"
                )))
            }
        };
        Ok(preset)
    }

    pub fn with_count(mut self, count: usize) -> Self {
        for axis in &mut self.axes {
            axis.count = count;
        }
        self
    }

    pub fn run(&self) -> Result<SweepResult> {
        self.run_with(Execution::Parallel)
    }

    pub fn run_with(&self, execution: Execution) -> Result<SweepResult> {
        match (self.coupling, self.base) {
            (Some(coupling), SystemParams::Cavity(base)) => {
                line_scan_with(&base, &self.axes[0], coupling, execution)
            }
            _ => sweep_with(&self.base, &self.axes, execution),
        }
    }
}

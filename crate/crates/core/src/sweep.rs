//! Detection probability over 1-D and 2-D parameter grids.
//!
//! Cells are independent; each one is evaluated from a copy of the base
//! parameters and written into its own slot, so serial and parallel
//! evaluation give identical grids.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::matched_coupling;
use crate::params::{CavityParams, Param, SystemParams};
use crate::solution::{DetectionReport, ScatterSolution};
use crate::units::to_user;

pub const DEFAULT_GRID_COUNT: usize = 201;
pub const DEFAULT_LINE_COUNT: usize = 2001;

/// A linear axis in `/2π` user units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub parameter: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(parameter: Param, start: f64, stop: f64, count: usize) -> Self {
        Self {
            parameter,
            start,
            stop,
            count,
        }
    }

    /// `start == stop` is accepted and yields `count` identical points.
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidAxis(format!(
                "{}: bounds must be finite",
                self.parameter
            )));
        }
        if self.start > self.stop {
            return Err(Error::InvalidAxis(format!(
                "{}: start {} exceeds stop {}",
                self.parameter, self.start, self.stop
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidAxis(format!(
                "{}: count must be at least 2, got {}",
                self.parameter, self.count
            )));
        }
        let non_negative = !matches!(self.parameter, Param::Delta | Param::DeltaC);
        if non_negative && self.start < 0.0 {
            return Err(Error::InvalidAxis(format!(
                "{}: must be non-negative, axis starts at {}",
                self.parameter, self.start
            )));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            self.stop
        } else {
            self.start + (self.stop - self.start) * k as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.value(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CellOutcome {
    Ok {
        report: DetectionReport,
        solution: ScatterSolution,
    },
    /// The model has no finite solution at this point.
    Degenerate { reason: String },
}

impl CellOutcome {
    pub fn report(&self) -> Option<&DetectionReport> {
        match self {
            CellOutcome::Ok { report, .. } => Some(report),
            CellOutcome::Degenerate { .. } => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CellOutcome::Ok { .. } => "ok",
            CellOutcome::Degenerate { .. } => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    /// Axis values in user units, one per axis.
    pub coords: Vec<f64>,
    /// Value of a dependent parameter set per cell (see [`SweepResult::derived`]).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<f64>,
    #[serde(flatten)]
    pub outcome: CellOutcome,
}

/// A parameter that is not an axis but is recomputed for every cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedParam {
    pub parameter: Param,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub timestamp_unix: u64,
    pub code_version: String,
    /// Base parameters in user units.
    pub parameters: BTreeMap<String, f64>,
}

impl Provenance {
    pub fn capture(base: &SystemParams) -> Self {
        Self {
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: parameter_echo(base),
        }
    }
}

/// Every parameter of `base` in `/2π` user units.
pub fn parameter_echo(base: &SystemParams) -> BTreeMap<String, f64> {
    let mut echo = BTreeMap::new();
    for p in Param::ALL {
        if let Ok(v) = base.get(p) {
            echo.insert(p.name().to_string(), v);
        }
    }
    if let SystemParams::Cavity(c) = base {
        echo.insert("gamma_c".to_string(), to_user(c.gamma_c));
    }
    echo
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: Vec<AxisSpec>,
    pub base: SystemParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<DerivedParam>,
    /// Row-major: the last axis varies fastest.
    pub cells: Vec<Cell>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn reports(&self) -> impl Iterator<Item = &DetectionReport> {
        self.cells.iter().filter_map(|c| c.outcome.report())
    }

    /// The cell with the largest DP; ties go to the earliest cell.
    pub fn max_eta_cell(&self) -> Option<&Cell> {
        self.cells
            .iter()
            .filter(|c| c.outcome.report().is_some())
            .fold(None, |best: Option<&Cell>, c| match best {
                Some(b) if b.outcome.report().unwrap().eta >= c.outcome.report().unwrap().eta => {
                    Some(b)
                }
                _ => Some(c),
            })
    }

    pub fn degenerate_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.outcome.report().is_none())
            .count()
    }

    /// Identity of the grid contents, ignoring provenance.
    pub fn same_grid(&self, other: &SweepResult) -> bool {
        self.axes == other.axes
            && self.base == other.base
            && self.derived == other.derived
            && self.cells == other.cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

fn validate_axes(base: &SystemParams, axes: &[AxisSpec]) -> Result<()> {
    base.validate()?;
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::InvalidAxis(format!(
            "expected 1 or 2 axes, got {}",
            axes.len()
        )));
    }
    for axis in axes {
        axis.validate()?;
        if axis.parameter.is_cavity_only() && base.flavor() == crate::Flavor::Bare {
            return Err(Error::InvalidAxis(format!(
                "parameter `{}` does not apply to a bare detector",
                axis.parameter
            )));
        }
    }
    if axes.len() == 2 && axes[0].parameter.conflicts_with(axes[1].parameter) {
        return Err(Error::InvalidAxis(format!(
            "axes `{}` and `{}` address the same parameter",
            axes[0].parameter, axes[1].parameter
        )));
    }
    Ok(())
}

fn coords_at(axes: &[AxisSpec], index: usize) -> Vec<f64> {
    let mut coords = vec![0.0; axes.len()];
    let mut rest = index;
    for (slot, axis) in coords.iter_mut().zip(axes).rev() {
        *slot = axis.value(rest % axis.count);
        rest /= axis.count;
    }
    coords
}

fn outcome(p: &SystemParams) -> CellOutcome {
    match crate::evaluate(p) {
        Ok(solution) => CellOutcome::Ok {
            report: solution.report(),
            solution,
        },
        Err(e) => CellOutcome::Degenerate {
            reason: e.to_string(),
        },
    }
}

fn run_cells<F>(len: usize, execution: Execution, cell: F) -> Vec<Cell>
where
    F: Fn(usize) -> Cell + Sync + Send,
{
    match execution {
        Execution::Serial => (0..len).map(cell).collect(),
        Execution::Parallel => (0..len).into_par_iter().map(cell).collect(),
    }
}

pub fn sweep(base: &SystemParams, axes: &[AxisSpec]) -> Result<SweepResult> {
    sweep_with(base, axes, Execution::Parallel)
}

pub fn sweep_with(
    base: &SystemParams,
    axes: &[AxisSpec],
    execution: Execution,
) -> Result<SweepResult> {
    validate_axes(base, axes)?;
    let len = axes.iter().map(|a| a.count).product();
    let cells = run_cells(len, execution, |k| {
        let coords = coords_at(axes, k);
        let mut p = *base;
        for (axis, &value) in axes.iter().zip(&coords) {
            p.set(axis.parameter, value).expect("axis validated");
        }
        Cell {
            coords,
            derived: None,
            outcome: outcome(&p),
        }
    });
    Ok(SweepResult {
        axes: axes.to_vec(),
        base: *base,
        derived: None,
        cells,
        provenance: Provenance::capture(base),
    })
}

/// How the atom–cavity coupling is chosen along a `V` line scan.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomCavityCoupling {
    /// Keep `g` from the base parameters.
    Fixed,
    /// `g = g_opt(V)` from the matching conditions, zero below threshold.
    #[default]
    Matched,
}

/// Scan of the outcome budget against the waveguide–cavity coupling with
/// the atom shielded from the waveguide (`h = 0`).
pub fn line_scan_fig6(
    base: &CavityParams,
    v_axis: &AxisSpec,
    coupling: AtomCavityCoupling,
) -> Result<SweepResult> {
    line_scan_with(base, v_axis, coupling, Execution::Parallel)
}

pub fn line_scan_with(
    base: &CavityParams,
    v_axis: &AxisSpec,
    coupling: AtomCavityCoupling,
    execution: Execution,
) -> Result<SweepResult> {
    if v_axis.parameter != Param::V {
        return Err(Error::InvalidAxis(format!(
            "line scan runs over V, got `{}`",
            v_axis.parameter
        )));
    }
    if base.h != 0.0 {
        return Err(Error::InvalidParams(format!(
            "line scan requires h = 0, got {}",
            base.h
        )));
    }
    let system = SystemParams::Cavity(*base);
    validate_axes(&system, std::slice::from_ref(v_axis))?;
    let cells = run_cells(v_axis.count, execution, |k| {
        let v_user = v_axis.value(k);
        let mut p = SystemParams::Cavity(*base);
        p.set(Param::V, v_user).expect("axis validated");
        let SystemParams::Cavity(ref mut c) = p else {
            unreachable!()
        };
        let derived = match coupling {
            AtomCavityCoupling::Fixed => None,
            AtomCavityCoupling::Matched => {
                c.g = matched_coupling(c);
                Some(to_user(c.g))
            }
        };
        Cell {
            coords: vec![v_user],
            derived,
            outcome: outcome(&p),
        }
    });
    Ok(SweepResult {
        axes: vec![*v_axis],
        base: system,
        derived: (coupling == AtomCavityCoupling::Matched).then(|| DerivedParam {
            parameter: Param::G,
            rule: "matched: g = sqrt(max(0, (Gamma2^2 - gamma_c^2) gamma_q / (2 gamma_c)))".into(),
        }),
        cells,
        provenance: Provenance::capture(&system),
    })
}

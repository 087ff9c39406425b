//! Data files and run manifests.
//!
//! CSV: one row per cell, header
//! `param1,param2,eta,p_t,p_r,p_q,p_a,p_b,conversion,status`, LF line
//! endings, numbers as `{:.16e}`. Unused parameter columns and the numbers
//! of degenerate cells are left empty. JSON: `{manifest, axes, cells}` with
//! complex amplitudes as `[re, im]`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use wgdp_core::optimize::Optimum;
use wgdp_core::sweep::{AtomCavityCoupling, AxisSpec, Cell, CellOutcome, DerivedParam};
use wgdp_core::verify::VerifyReport;
use wgdp_core::{DetectionReport, Flavor, OutcomeShares};

use crate::args::Format;
use crate::error::CliError;

pub const CSV_HEADER: [&str; 10] = [
    "param1",
    "param2",
    "eta",
    "p_t",
    "p_r",
    "p_q",
    "p_a",
    "p_b",
    "conversion",
    "status",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub flavor: Option<Flavor>,
    /// Inputs in `/2π` MHz.
    pub parameters: BTreeMap<String, f64>,
    /// The same inputs in rad·MHz.
    pub angular: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<AtomCavityCoupling>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<DerivedParam>,
    pub timestamp_unix: u64,
    pub wall_time_s: f64,
    pub degenerate_cells: usize,
}

#[derive(Debug, Clone)]
pub enum Payload {
    /// Single points and grids. A point has no axes and one cell.
    Cells {
        axes: Vec<AxisSpec>,
        cells: Vec<Cell>,
    },
    Optimum(Box<Optimum>),
    Verify(VerifyReport),
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub manifest: RunManifest,
    pub payload: Payload,
}

#[derive(Serialize)]
struct CellRecord<'a> {
    coords: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    derived: Option<f64>,
    #[serde(flatten)]
    outcome: &'a CellOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    shares: Option<OutcomeShares>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn report_fields(r: Option<&DetectionReport>) -> [String; 7] {
    match r {
        Some(r) => [r.eta, r.p_t, r.p_r, r.p_q, r.p_a, r.p_b, r.conversion].map(num),
        None => Default::default(),
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

impl RunOutput {
    pub fn write_data<W: Write>(&self, format: Format, w: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv_writer(w);
        match &self.payload {
            Payload::Cells { cells, .. } => {
                out.write_record(CSV_HEADER)?;
                for cell in cells {
                    let mut params = cell.coords.iter().copied().map(num).collect::<Vec<_>>();
                    if let Some(d) = cell.derived {
                        params.push(num(d));
                    }
                    params.resize(2, String::new());
                    let record = params
                        .into_iter()
                        .chain(report_fields(cell.outcome.report()))
                        .chain([cell.outcome.status().to_string()]);
                    out.write_record(record)?;
                }
            }
            Payload::Optimum(opt) => {
                out.write_record(CSV_HEADER)?;
                let mut params: Vec<String> = opt.location.iter().map(|&(_, v)| num(v)).collect();
                params.resize(2, String::new());
                let status = serde_json::to_value(opt.stop)?;
                let record = params
                    .into_iter()
                    .chain(report_fields(Some(&opt.report)))
                    .chain([status.as_str().unwrap_or_default().to_string()]);
                out.write_record(record)?;
            }
            Payload::Verify(v) => {
                out.write_record([
                    "draws",
                    "max_bare_deviation",
                    "max_cavity_deviation",
                    "max_relative_residual",
                    "status",
                ])?;
                out.write_record([
                    v.draws.to_string(),
                    num(v.max_bare_deviation),
                    num(v.max_cavity_deviation),
                    num(v.max_relative_residual),
                    if v.passed() { "pass" } else { "fail" }.to_string(),
                ])?;
            }
        }
        out.flush().map_err(|e| CliError::io("<output>", e))?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut w: W) -> Result<(), CliError> {
        let value = match &self.payload {
            Payload::Cells { axes, cells } => {
                let records: Vec<CellRecord> = cells
                    .iter()
                    .map(|c| CellRecord {
                        coords: &c.coords,
                        derived: c.derived,
                        outcome: &c.outcome,
                        shares: c.outcome.report().map(DetectionReport::shares),
                    })
                    .collect();
                serde_json::json!({ "manifest": self.manifest, "axes": axes, "cells": records })
            }
            Payload::Optimum(opt) => serde_json::json!({
                "manifest": self.manifest,
                "optimum": opt,
                "shares": opt.report.shares(),
            }),
            Payload::Verify(v) => serde_json::json!({
                "manifest": self.manifest,
                "verify": v,
                "passed": v.passed(),
            }),
        };
        serde_json::to_writer_pretty(&mut w, &value)?;
        writeln!(w).map_err(|e| CliError::io("<output>", e))?;
        Ok(())
    }

    /// A few human-readable lines describing the result.
    pub fn summary(&self) -> String {
        let m = &self.manifest;
        match &self.payload {
            Payload::Cells { axes, cells } if axes.is_empty() => match cells[0].outcome.report() {
                Some(r) => format!(
                    "{}: eta={:.6} p_t={:.6} p_r={:.6} p_q={:.6} p_a={:.6} p_b={:.6} conversion={:.6}",
                    m.command, r.eta, r.p_t, r.p_r, r.p_q, r.p_a, r.p_b, r.conversion
                ),
                None => format!("{}: degenerate", m.command),
            },
            Payload::Cells { axes, cells } => {
                let names: Vec<&str> = axes.iter().map(|a| a.parameter.name()).collect();
                let best = cells
                    .iter()
                    .filter_map(|c| c.outcome.report().map(|r| (c, r.eta)))
                    .fold(None::<(&Cell, f64)>, |acc, (c, eta)| match acc {
                        Some((_, b)) if b >= eta => acc,
                        _ => Some((c, eta)),
                    });
                let mut s = format!(
                    "{}: {} cells over ({}), {} degenerate, {:.3}s",
                    m.command,
                    cells.len(),
                    names.join(", "),
                    m.degenerate_cells,
                    m.wall_time_s
                );
                if let Some((c, eta)) = best {
                    let at: Vec<String> = names
                        .iter()
                        .zip(&c.coords)
                        .map(|(n, v)| format!("{n}={v:.6}"))
                        .collect();
                    s.push_str(&format!("\nmax eta={eta:.6} at {}", at.join(", ")));
                    if let (Some(d), Some(p)) = (c.derived, &m.derived) {
                        s.push_str(&format!(", {}={d:.6}", p.parameter.name()));
                    }
                }
                s
            }
            Payload::Optimum(opt) => {
                let at: Vec<String> = opt
                    .location
                    .iter()
                    .map(|(p, v)| format!("{}={v:.6}", p.name()))
                    .collect();
                let sh = opt.report.shares();
                format!(
                    "{}: eta_max={:.6} at {} ({:?}, {} evaluations)\nshares: t={:.4} r={:.4} q={:.4} a={:.4} b={:.4} conversion={:.4}",
                    m.command,
                    opt.eta_max,
                    at.join(", "),
                    opt.stop,
                    opt.evaluations,
                    sh.t,
                    sh.r,
                    sh.q,
                    sh.a,
                    sh.b,
                    sh.conversion
                )
            }
            Payload::Verify(v) => format!(
                "{}: {} draws, max deviation bare {:.2e}, cavity {:.2e}, max residual {:.2e}: {}",
                m.command,
                v.draws,
                v.max_bare_deviation,
                v.max_cavity_deviation,
                v.max_relative_residual,
                if v.passed() { "PASS" } else { "FAIL" }
            ),
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use wgdp_core::figures::FigurePreset;
use wgdp_core::optimize::{optimize_bare, optimize_cavity, optimize_matched, OptimizationProblem};
use wgdp_core::sweep::{sweep, Cell, CellOutcome, DerivedParam};
use wgdp_core::verify::verify_oracle_equivalence;
use wgdp_core::{evaluate, Param, SystemParams};

use crate::config::{RunConfig, Target, Task};
use crate::error::CliError;
use crate::output::{Payload, RunManifest, RunOutput};

/// Runs the task without touching stdout or the filesystem.
pub fn execute(config: &RunConfig) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let mut coupling = None;
    let mut derived: Option<DerivedParam> = None;
    let payload = match &config.task {
        Task::Bare | Task::Cavity => {
            let solution = evaluate(&config.system_params()?)?;
            Payload::Cells {
                axes: Vec::new(),
                cells: vec![Cell {
                    coords: Vec::new(),
                    derived: None,
                    outcome: CellOutcome::Ok {
                        report: solution.report(),
                        solution,
                    },
                }],
            }
        }
        Task::Sweep { .. } => {
            let res = sweep(&config.system_params()?, &config.axes)?;
            Payload::Cells {
                axes: res.axes,
                cells: res.cells,
            }
        }
        Task::Fig {
            figure,
            count,
            coupling: c,
        } => {
            let mut preset = FigurePreset::for_figure(*figure)?;
            preset.base = config.system_params()?;
            preset.coupling = *c;
            if let Some(n) = count {
                preset = preset.with_count(*n);
            }
            coupling = *c;
            let res = preset.run()?;
            derived = res.derived;
            Payload::Cells {
                axes: res.axes,
                cells: res.cells,
            }
        }
        Task::Optimize { target, free } => {
            let params = config.system_params()?;
            let opt = match (target, params) {
                (Target::Bare, SystemParams::Bare(_)) => optimize_bare(
                    params.get(Param::GammaQ)?,
                    params.get(Param::Delta)?,
                    free[0].bounds,
                )?,
                (Target::Matched, SystemParams::Cavity(c)) => optimize_matched(&c, free[0].bounds)?,
                _ => optimize_cavity(&OptimizationProblem::new(params, free.clone()))?,
            };
            Payload::Optimum(Box::new(opt))
        }
        Task::Verify { draws } => Payload::Verify(verify_oracle_equivalence(*draws)?),
    };
    let degenerate_cells = match &payload {
        Payload::Cells { cells, .. } => cells
            .iter()
            .filter(|c| c.outcome.report().is_none())
            .count(),
        _ => 0,
    };
    let manifest = RunManifest {
        tool: "wgdp".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: config.task.name(),
        flavor: config.task.flavor(),
        parameters: config.parameters.clone(),
        angular: config.angular_parameters(),
        figure: config.figure_defaults.clone(),
        coupling,
        derived,
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        wall_time_s: start.elapsed().as_secs_f64(),
        degenerate_cells,
    };
    Ok(RunOutput { manifest, payload })
}

pub fn manifest_path(out: &std::path::Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Runs the task and writes its outputs. Returns the process exit status:
/// 0 on success, 1 when `verify` finds a deviation.
pub fn run(config: &RunConfig) -> Result<u8, CliError> {
    let output = execute(config)?;
    let manifest_json = serde_json::to_string_pretty(&output.manifest)?;
    match &config.output.path {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            output.write_data(config.output.format, &mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))?;
            let sidecar = manifest_path(path);
            std::fs::write(&sidecar, manifest_json + "\n")
                .map_err(|e| CliError::io(&sidecar, e))?;
            println!("{}", output.summary());
            println!("wrote {} and {}", path.display(), sidecar.display());
        }
        None => {
            output.write_data(config.output.format, io::stdout().lock())?;
            eprintln!("{manifest_json}");
            eprintln!("{}", output.summary());
        }
    }
    Ok(match &output.payload {
        Payload::Verify(v) if !v.passed() => 1,
        _ => 0,
    })
}

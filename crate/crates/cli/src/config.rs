//! Resolution of command-line arguments into a validated [`RunConfig`].
//!
//! Parameter values come from three layers, later ones winning: the
//! subcommand's defaults (figure presets included), an optional `--config`
//! JSON file, then explicit flags. Setting `h` in a layer drops `Gamma1`
//! from the layers below it, and the reverse.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use wgdp_core::figures::FigurePreset;
use wgdp_core::optimize::{Bounds, FreeParameter};
use wgdp_core::sweep::{AtomCavityCoupling, AxisSpec};
use wgdp_core::units::to_angular;
use wgdp_core::{BareParams, CavityParams, Flavor, Param, SystemParams};

use crate::args::{Cli, Command, FlavorArg, Format, OptimizeTarget, OutputArgs, ParamArgs};
use crate::error::CliError;

/// Every name accepted in a parameter map, in user units.
pub const PARAMETER_NAMES: [&str; 8] = [
    "gamma_q", "gamma_c", "h", "V", "g", "delta", "delta_c", "Gamma1",
];

const CAVITY_ONLY: [&str; 4] = ["gamma_c", "V", "g", "delta_c"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Task {
    Bare,
    Cavity,
    Sweep {
        flavor: Flavor,
    },
    Fig {
        figure: u8,
        count: Option<usize>,
        coupling: Option<AtomCavityCoupling>,
    },
    Optimize {
        target: Target,
        free: Vec<FreeParameter>,
    },
    Verify {
        draws: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Bare,
    Cavity,
    Matched,
}

impl Task {
    pub fn name(&self) -> String {
        match self {
            Task::Bare => "bare".into(),
            Task::Cavity => "cavity".into(),
            Task::Sweep { .. } => "sweep".into(),
            Task::Fig { figure, .. } => format!("fig {figure}"),
            Task::Optimize { target, .. } => format!("optimize {}", target.name()),
            Task::Verify { .. } => "verify".into(),
        }
    }

    pub fn flavor(&self) -> Option<Flavor> {
        match self {
            Task::Bare => Some(Flavor::Bare),
            Task::Cavity => Some(Flavor::Cavity),
            Task::Sweep { flavor } => Some(*flavor),
            Task::Fig { figure, .. } => Some(if *figure <= 3 {
                Flavor::Bare
            } else {
                Flavor::Cavity
            }),
            Task::Optimize { target, .. } => Some(match target {
                Target::Bare => Flavor::Bare,
                _ => Flavor::Cavity,
            }),
            Task::Verify { .. } => None,
        }
    }
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Bare => "bare",
            Target::Cavity => "cavity",
            Target::Matched => "matched",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    /// Resolved parameters in `/2π` user units.
    pub parameters: BTreeMap<String, f64>,
    pub axes: Vec<AxisSpec>,
    pub output: OutputSpec,
    /// Description of the figure preset used, if any.
    pub figure_defaults: Option<String>,
}

impl RunConfig {
    /// Parameter set for the task's flavor, angular.
    pub fn system_params(&self) -> Result<SystemParams, CliError> {
        let flavor = self
            .task
            .flavor()
            .ok_or_else(|| CliError::Usage("this command takes no physical parameters".into()))?;
        build_params(flavor, &self.parameters)
    }

    /// Angular counterparts of [`RunConfig::parameters`].
    pub fn angular_parameters(&self) -> BTreeMap<String, f64> {
        self.parameters
            .iter()
            .map(|(k, &v)| (k.clone(), to_angular(v)))
            .collect()
    }
}

pub fn build_params(
    flavor: Flavor,
    values: &BTreeMap<String, f64>,
) -> Result<SystemParams, CliError> {
    let mut p = match flavor {
        Flavor::Bare => SystemParams::Bare(BareParams::new(0.0, 0.0, 0.0)),
        Flavor::Cavity => SystemParams::Cavity(CavityParams::resonant(0.0, 0.0, 0.0, 0.0, 0.0)),
    };
    for (name, &value) in values {
        if name == "gamma_c" {
            match &mut p {
                SystemParams::Cavity(c) => c.gamma_c = to_angular(value),
                SystemParams::Bare(_) => return Err(not_for_bare(name)),
            }
            continue;
        }
        let param: Param = name
            .parse()
            .map_err(|_| CliError::UnknownParameter(name.clone()))?;
        p.set(param, value).map_err(|e| match e {
            wgdp_core::Error::InvalidAxis(_) => not_for_bare(name),
            other => CliError::Model(other),
        })?;
    }
    p.validate()?;
    Ok(p)
}

fn not_for_bare(name: &str) -> CliError {
    CliError::Usage(format!("`{name}` does not apply to the bare detector"))
}

/// Parses a full argument vector (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    resolve(cli.command)
}

fn output_spec(o: &OutputArgs) -> OutputSpec {
    OutputSpec {
        path: o.out.clone(),
        format: o.format,
    }
}

struct ConfigFile {
    parameters: BTreeMap<String, f64>,
    axes: Vec<AxisSpec>,
    flavor: Option<Flavor>,
}

fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let root: Value = serde_json::from_str(&text)?;
    let params_value = root
        .pointer("/manifest/parameters")
        .or_else(|| root.get("parameters"));
    let mut parameters = BTreeMap::new();
    if let Some(map) = params_value {
        let map = map
            .as_object()
            .ok_or_else(|| CliError::Usage("config `parameters` must be an object".into()))?;
        for (name, value) in map {
            if !PARAMETER_NAMES.contains(&name.as_str()) {
                return Err(CliError::UnknownParameter(name.clone()));
            }
            let v = value.as_f64().ok_or_else(|| {
                CliError::Usage(format!("config parameter `{name}` must be a number"))
            })?;
            parameters.insert(name.clone(), v);
        }
    }
    let axes = match root.get("axes") {
        Some(a) => serde_json::from_value(a.clone())?,
        None => Vec::new(),
    };
    let flavor = match root.pointer("/manifest/flavor") {
        Some(Value::Null) | None => None,
        Some(f) => Some(serde_json::from_value(f.clone())?),
    };
    Ok(ConfigFile {
        parameters,
        axes,
        flavor,
    })
}

/// Merges `layer` over `base`, keeping `h` and `Gamma1` mutually exclusive.
fn overlay(base: &mut BTreeMap<String, f64>, layer: &[(String, f64)]) -> Result<(), CliError> {
    let has = |n: &str| layer.iter().any(|(k, _)| k == n);
    if has("h") && has("Gamma1") {
        return Err(CliError::Usage("give either h or Gamma1, not both".into()));
    }
    for (name, value) in layer {
        if !value.is_finite() {
            return Err(CliError::Usage(format!("`{name}` must be finite")));
        }
        match name.as_str() {
            "h" => {
                base.remove("Gamma1");
            }
            "Gamma1" => {
                base.remove("h");
            }
            _ => {}
        }
        base.insert(name.clone(), *value);
    }
    Ok(())
}

fn defaults(flavor: Flavor) -> BTreeMap<String, f64> {
    let mut d = BTreeMap::from([
        ("gamma_q".to_string(), wgdp_core::figures::GAMMA_Q_USER),
        ("delta".to_string(), 0.0),
        ("h".to_string(), 0.0),
    ]);
    if flavor == Flavor::Cavity {
        d.insert("gamma_c".into(), wgdp_core::figures::GAMMA_C_USER);
        d.insert("V".into(), 0.0);
        d.insert("g".into(), 0.0);
        d.insert("delta_c".into(), 0.0);
    }
    d
}

fn parse_axis(spec: &str) -> Result<AxisSpec, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [name, start, stop, count] = parts[..] else {
        return Err(CliError::Usage(format!(
            "--axis expects <param>:<start>:<stop>:<count>, got `{spec}`"
        )));
    };
    let param: Param = name
        .parse()
        .map_err(|_| CliError::UnknownParameter(name.to_string()))?;
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--axis {spec}: `{s}` is not a number")))
    };
    let count = count
        .parse::<usize>()
        .map_err(|_| CliError::Usage(format!("--axis {spec}: `{count}` is not a count")))?;
    let axis = AxisSpec::new(param, num(start)?, num(stop)?, count);
    axis.validate()?;
    Ok(axis)
}

fn parse_bounds(spec: &str) -> Result<(Param, Bounds), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [name, lower, upper] = parts[..] else {
        return Err(CliError::Usage(format!(
            "--bounds expects <param>:<lower>:<upper>, got `{spec}`"
        )));
    };
    let param: Param = name
        .parse()
        .map_err(|_| CliError::UnknownParameter(name.to_string()))?;
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--bounds {spec}: `{s}` is not a number")))
    };
    Ok((param, Bounds::new(num(lower)?, num(upper)?)))
}

fn default_bounds(param: Param) -> Bounds {
    match param {
        Param::V => Bounds::new(0.0, 2.0),
        Param::Gamma1 => Bounds::new(1e-3, 2.0),
        _ => Bounds::new(0.0, 1.0),
    }
}

fn cli_layer(params: &ParamArgs) -> Vec<(String, f64)> {
    params
        .given()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

fn check_bare_names<'a>(names: impl IntoIterator<Item = &'a String>) -> Result<(), CliError> {
    for n in names {
        if CAVITY_ONLY.contains(&n.as_str()) {
            return Err(not_for_bare(n));
        }
    }
    Ok(())
}

fn resolve(command: Command) -> Result<RunConfig, CliError> {
    match command {
        Command::Bare { params, output } => single(Task::Bare, Flavor::Bare, &params, &output),
        Command::Cavity { params, output } => {
            single(Task::Cavity, Flavor::Cavity, &params, &output)
        }
        Command::Sweep {
            flavor,
            axes,
            params,
            output,
        } => {
            let file = params.config.as_deref().map(read_config).transpose()?;
            let mut axis_specs = axes
                .iter()
                .map(|a| parse_axis(a))
                .collect::<Result<Vec<_>, _>>()?;
            if axis_specs.is_empty() {
                axis_specs = file.as_ref().map(|f| f.axes.clone()).unwrap_or_default();
            }
            if axis_specs.is_empty() || axis_specs.len() > 2 {
                return Err(CliError::Usage("sweep needs one or two --axis".into()));
            }
            let flag_layer = cli_layer(&params);
            let flavor = match flavor {
                Some(FlavorArg::Bare) => Flavor::Bare,
                Some(FlavorArg::Cavity) => Flavor::Cavity,
                None => {
                    let cavity_named = flag_layer
                        .iter()
                        .map(|(k, _)| k.as_str())
                        .chain(
                            file.iter()
                                .flat_map(|f| f.parameters.keys().map(|k| k.as_str())),
                        )
                        .any(|k| CAVITY_ONLY.contains(&k))
                        || axis_specs.iter().any(|a| a.parameter.is_cavity_only());
                    file.as_ref()
                        .and_then(|f| f.flavor)
                        .unwrap_or(if cavity_named {
                            Flavor::Cavity
                        } else {
                            Flavor::Bare
                        })
                }
            };
            let parameters = layered(flavor, defaults(flavor), file.as_ref(), &flag_layer)?;
            let config = RunConfig {
                task: Task::Sweep { flavor },
                parameters,
                axes: axis_specs,
                output: output_spec(&output),
                figure_defaults: None,
            };
            config.system_params()?;
            Ok(config)
        }
        Command::Fig {
            figure,
            count,
            params,
            output,
        } => {
            let preset = FigurePreset::for_figure(figure)?;
            let flavor = preset.base.flavor();
            let mut base = defaults(flavor);
            if figure == 4 {
                base.insert("g".into(), wgdp_core::figures::G_USER);
            }
            if preset.coupling.is_some() {
                base.remove("g");
            }
            base.retain(|k, _| !preset.axes.iter().any(|a| a.parameter.name() == k));
            let file = params.config.as_deref().map(read_config).transpose()?;
            let flag_layer = cli_layer(&params);
            let parameters = layered(flavor, base, file.as_ref(), &flag_layer)?;
            if let Some(count) = count {
                if count < 2 {
                    return Err(CliError::Usage("--count must be at least 2".into()));
                }
            }
            let coupling = preset.coupling.map(|c| {
                if parameters.contains_key("g") {
                    AtomCavityCoupling::Fixed
                } else {
                    c
                }
            });
            let mut preset = preset;
            if let Some(n) = count {
                preset = preset.with_count(n);
            }
            let config = RunConfig {
                task: Task::Fig {
                    figure,
                    count,
                    coupling,
                },
                parameters,
                axes: preset.axes.clone(),
                output: output_spec(&output),
                figure_defaults: Some(preset.description.clone()),
            };
            config.system_params()?;
            Ok(config)
        }
        Command::Optimize {
            target,
            free,
            bounds,
            params,
            output,
        } => {
            let target = match target {
                OptimizeTarget::Bare => Target::Bare,
                OptimizeTarget::Cavity => Target::Cavity,
                OptimizeTarget::Matched => Target::Matched,
            };
            let flavor = if target == Target::Bare {
                Flavor::Bare
            } else {
                Flavor::Cavity
            };
            let free_names: Vec<Param> = if free.is_empty() {
                match target {
                    Target::Bare => vec![Param::Gamma1],
                    Target::Cavity => vec![Param::V, Param::G],
                    Target::Matched => vec![Param::V],
                }
            } else {
                free.iter()
                    .map(|n| n.parse().map_err(|_| CliError::UnknownParameter(n.clone())))
                    .collect::<Result<_, _>>()?
            };
            match target {
                Target::Bare if free_names != [Param::Gamma1] => {
                    return Err(CliError::Usage("optimize bare varies Gamma1 only".into()))
                }
                Target::Matched if free_names != [Param::V] => {
                    return Err(CliError::Usage("optimize matched varies V only".into()))
                }
                _ => {}
            }
            let mut bound_map: BTreeMap<Param, Bounds> = BTreeMap::new();
            for spec in &bounds {
                let (p, b) = parse_bounds(spec)?;
                if !free_names.contains(&p) {
                    return Err(CliError::Usage(format!(
                        "--bounds given for non-free `{p}`"
                    )));
                }
                bound_map.insert(p, b);
            }
            let free: Vec<FreeParameter> = free_names
                .iter()
                .map(|&param| FreeParameter {
                    param,
                    bounds: bound_map
                        .get(&param)
                        .copied()
                        .unwrap_or(default_bounds(param)),
                })
                .collect();
            let file = params.config.as_deref().map(read_config).transpose()?;
            let flag_layer = cli_layer(&params);
            let parameters = layered(flavor, defaults(flavor), file.as_ref(), &flag_layer)?;
            let config = RunConfig {
                task: Task::Optimize { target, free },
                parameters,
                axes: Vec::new(),
                output: output_spec(&output),
                figure_defaults: None,
            };
            config.system_params()?;
            Ok(config)
        }
        Command::Verify { draws, output } => {
            if draws == 0 {
                return Err(CliError::Usage("--draws must be positive".into()));
            }
            Ok(RunConfig {
                task: Task::Verify { draws },
                parameters: BTreeMap::new(),
                axes: Vec::new(),
                output: output_spec(&output),
                figure_defaults: None,
            })
        }
    }
}

fn layered(
    flavor: Flavor,
    mut base: BTreeMap<String, f64>,
    file: Option<&ConfigFile>,
    flags: &[(String, f64)],
) -> Result<BTreeMap<String, f64>, CliError> {
    if let Some(f) = file {
        let layer: Vec<(String, f64)> = f.parameters.iter().map(|(k, &v)| (k.clone(), v)).collect();
        overlay(&mut base, &layer)?;
    }
    overlay(&mut base, flags)?;
    if flavor == Flavor::Bare {
        check_bare_names(base.keys())?;
    }
    Ok(base)
}

fn single(
    task: Task,
    flavor: Flavor,
    params: &ParamArgs,
    output: &OutputArgs,
) -> Result<RunConfig, CliError> {
    let file = params.config.as_deref().map(read_config).transpose()?;
    let parameters = layered(flavor, defaults(flavor), file.as_ref(), &cli_layer(params))?;
    let config = RunConfig {
        task,
        parameters,
        axes: Vec::new(),
        output: output_spec(output),
        figure_defaults: None,
    };
    config.system_params()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        parse_args(std::iter::once("wgdp").chain(args.iter().copied()))
    }

    #[test]
    fn bare_point() {
        let c = parse(&[
            "bare",
            "--gamma-q",
            "0.16",
            "--delta",
            "0",
            "--Gamma1",
            "0.16",
        ])
        .unwrap();
        assert_eq!(c.task, Task::Bare);
        assert_eq!(c.parameters.get("Gamma1"), Some(&0.16));
        assert!(!c.parameters.contains_key("h"));
        let SystemParams::Bare(p) = c.system_params().unwrap() else {
            panic!()
        };
        assert!((p.gamma_1() - to_angular(0.16)).abs() < 1e-15);
    }

    #[test]
    fn angular_values_are_exact_multiples() {
        let c = parse(&["cavity", "--V", "0.61", "--g", "0.29"]).unwrap();
        for (k, v) in c.angular_parameters() {
            assert_eq!(v, std::f64::consts::TAU * c.parameters[&k]);
        }
    }

    #[test]
    fn figure_six_preset() {
        let c = parse(&["fig", "6"]).unwrap();
        assert_eq!(c.parameters.get("h"), Some(&0.0));
        assert!((c.parameters["gamma_q"] - 0.16).abs() < 1e-15);
        assert!((c.parameters["gamma_c"] - 0.76).abs() < 1e-15);
        assert_eq!(c.axes[0].parameter, Param::V);
        assert!(matches!(
            c.task,
            Task::Fig {
                coupling: Some(AtomCavityCoupling::Matched),
                ..
            }
        ));
        let fixed = parse(&["fig", "6", "--g", "0.29"]).unwrap();
        assert!(matches!(
            fixed.task,
            Task::Fig {
                coupling: Some(AtomCavityCoupling::Fixed),
                ..
            }
        ));
    }

    #[test]
    fn bogus_axis_parameter() {
        let err = parse(&["sweep", "--axis", "bogus:0:1:3"]).unwrap_err();
        assert!(matches!(err, CliError::UnknownParameter(ref n) if n == "bogus"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn sweep_flavor_inference() {
        let c = parse(&["sweep", "--axis", "delta:-1:1:5"]).unwrap();
        assert_eq!(
            c.task,
            Task::Sweep {
                flavor: Flavor::Bare
            }
        );
        let c = parse(&["sweep", "--axis", "V:0:1:5", "--axis", "h:0:1:3"]).unwrap();
        assert_eq!(
            c.task,
            Task::Sweep {
                flavor: Flavor::Cavity
            }
        );
        let c = parse(&["sweep", "--axis", "h:0:1:5", "--g", "0.3"]).unwrap();
        assert_eq!(
            c.task,
            Task::Sweep {
                flavor: Flavor::Cavity
            }
        );
    }

    #[test]
    fn usage_errors() {
        for args in [
            vec!["bare", "--h", "0.1", "--Gamma1", "0.2"],
            vec!["bare", "--V", "0.3"],
            vec!["sweep"],
            vec!["sweep", "--axis", "h:0:1"],
            vec!["sweep", "--axis", "h:0:x:3"],
            vec!["optimize", "bare", "--free", "V"],
            vec!["optimize", "cavity", "--bounds", "h:0:1"],
            vec!["verify", "--draws", "0"],
        ] {
            assert!(parse(&args).is_err(), "{args:?}");
        }
        assert!(matches!(
            parse(&["bare", "--bogus", "1"]),
            Err(CliError::Clap(_))
        ));
    }

    #[test]
    fn optimize_defaults() {
        let c = parse(&["optimize", "cavity"]).unwrap();
        let Task::Optimize { target, free } = c.task else {
            panic!()
        };
        assert_eq!(target, Target::Cavity);
        assert_eq!(
            free.iter().map(|f| f.param).collect::<Vec<_>>(),
            vec![Param::V, Param::G]
        );
        assert_eq!(c.parameters["h"], 0.0);
    }

    #[test]
    fn negative_detuning_flag() {
        let c = parse(&["bare", "--delta", "-0.5", "--h", "0.2"]).unwrap();
        assert_eq!(c.parameters["delta"], -0.5);
    }
}

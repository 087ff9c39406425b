//! Physical parameter sets.
//!
//! Detunings are canonical: the model only ever sees `Δ = ω − Ω` and
//! `Δ_c = ω − ω_c`. Absolute frequencies are accepted through the
//! `from_frequencies` constructors and reduced on the way in.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{to_angular, to_user};

/// A two-level atom coupled at a point to the waveguide. All values angular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BareParams {
    /// Photon–atom detuning `ω − Ω`.
    pub delta: f64,
    /// Atomic dissipation rate.
    pub gamma_q: f64,
    /// Atom–waveguide coupling amplitude (real, non-negative).
    pub h: f64,
    /// Group velocity, `1` by convention.
    pub v_g: f64,
}

impl BareParams {
    pub fn new(delta: f64, gamma_q: f64, h: f64) -> Self {
        Self {
            delta,
            gamma_q,
            h,
            v_g: 1.0,
        }
    }

    pub fn from_frequencies(omega: f64, atomic: f64, gamma_q: f64, h: f64) -> Self {
        Self::new(omega - atomic, gamma_q, h)
    }

    /// Builds the coupling from the effective decay rate `Γ₁ = h²/v_g`.
    pub fn with_gamma_1(delta: f64, gamma_q: f64, gamma_1: f64) -> Self {
        Self::new(delta, gamma_q, gamma_1.max(0.0).sqrt())
    }

    /// Effective atom–waveguide decay rate `Γ₁ = h²/v_g`.
    pub fn gamma_1(&self) -> f64 {
        self.h * self.h / self.v_g
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("delta", self.delta)?;
        check_non_negative("gamma_q", self.gamma_q)?;
        check_non_negative("h", self.h)?;
        check_finite("v_g", self.v_g)?;
        if self.v_g <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "v_g must be positive, got {}",
                self.v_g
            )));
        }
        Ok(())
    }
}

/// The atom inside a two-mode microring cavity side-coupled to the waveguide.
/// Both whispering-gallery modes share `ω_c`, `γ_c`, `V` and `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub delta: f64,
    /// Photon–cavity detuning `ω − ω_c`.
    pub delta_c: f64,
    pub gamma_q: f64,
    /// Cavity dissipation rate.
    pub gamma_c: f64,
    pub h: f64,
    /// Waveguide–cavity coupling amplitude.
    pub v: f64,
    /// Atom–cavity coupling.
    pub g: f64,
    pub v_g: f64,
}

impl CavityParams {
    /// Resonant parameter set (`Δ = Δ_c = 0`).
    pub fn resonant(gamma_q: f64, gamma_c: f64, h: f64, v: f64, g: f64) -> Self {
        Self {
            delta: 0.0,
            delta_c: 0.0,
            gamma_q,
            gamma_c,
            h,
            v,
            g,
            v_g: 1.0,
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn from_frequencies(
        omega: f64,
        atomic: f64,
        omega_c: f64,
        gamma_q: f64,
        gamma_c: f64,
        h: f64,
        v: f64,
        g: f64,
    ) -> Self {
        Self {
            delta: omega - atomic,
            delta_c: omega - omega_c,
            ..Self::resonant(gamma_q, gamma_c, h, v, g)
        }
    }

    /// Embeds a bare detector in a cavity that is not yet coupled to anything.
    pub fn decoupled(bare: BareParams, delta_c: f64, gamma_c: f64) -> Self {
        Self {
            delta: bare.delta,
            delta_c,
            gamma_q: bare.gamma_q,
            gamma_c,
            h: bare.h,
            v: 0.0,
            g: 0.0,
            v_g: bare.v_g,
        }
    }

    pub fn bare(&self) -> BareParams {
        BareParams {
            delta: self.delta,
            gamma_q: self.gamma_q,
            h: self.h,
            v_g: self.v_g,
        }
    }

    pub fn gamma_1(&self) -> f64 {
        self.h * self.h / self.v_g
    }

    /// Effective cavity–waveguide decay rate per mode, `Γ₂ = V²/(2 v_g)`.
    pub fn gamma_2(&self) -> f64 {
        self.v * self.v / (2.0 * self.v_g)
    }

    pub fn validate(&self) -> Result<()> {
        self.bare().validate()?;
        check_finite("delta_c", self.delta_c)?;
        check_non_negative("gamma_c", self.gamma_c)?;
        check_non_negative("V", self.v)?;
        check_non_negative("g", self.g)?;
        Ok(())
    }
}

fn check_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

fn check_non_negative(name: &str, value: f64) -> Result<()> {
    check_finite(name, value)?;
    if value < 0.0 {
        return Err(Error::InvalidParams(format!(
            "{name} must be non-negative, got {value}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Bare,
    Cavity,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Bare => "bare",
            Flavor::Cavity => "cavity",
        })
    }
}

/// Either parameter set, as carried by sweeps and optimization problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flavor", rename_all = "lowercase")]
pub enum SystemParams {
    Bare(BareParams),
    Cavity(CavityParams),
}

impl SystemParams {
    pub fn flavor(&self) -> Flavor {
        match self {
            SystemParams::Bare(_) => Flavor::Bare,
            SystemParams::Cavity(_) => Flavor::Cavity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SystemParams::Bare(p) => p.validate(),
            SystemParams::Cavity(p) => p.validate(),
        }
    }

    /// Reads a parameter in `/2π` user units.
    pub fn get(&self, param: Param) -> Result<f64> {
        param.check_flavor(self.flavor())?;
        let (delta, gamma_q, h, v_g) = match self {
            SystemParams::Bare(p) => (p.delta, p.gamma_q, p.h, p.v_g),
            SystemParams::Cavity(p) => (p.delta, p.gamma_q, p.h, p.v_g),
        };
        let angular = match (param, self) {
            (Param::Delta, _) => delta,
            (Param::GammaQ, _) => gamma_q,
            (Param::H, _) => h,
            (Param::Gamma1, _) => h * h / v_g,
            (Param::V, SystemParams::Cavity(p)) => p.v,
            (Param::G, SystemParams::Cavity(p)) => p.g,
            (Param::DeltaC, SystemParams::Cavity(p)) => p.delta_c,
            _ => unreachable!("flavor checked above"),
        };
        Ok(to_user(angular))
    }

    /// Writes a parameter given in `/2π` user units.
    pub fn set(&mut self, param: Param, user: f64) -> Result<()> {
        param.check_flavor(self.flavor())?;
        if !user.is_finite() {
            return Err(Error::InvalidParams(format!(
                "{param} must be finite, got {user}"
            )));
        }
        let angular = to_angular(user);
        let (delta, gamma_q, h, v_g) = match self {
            SystemParams::Bare(p) => (&mut p.delta, &mut p.gamma_q, &mut p.h, p.v_g),
            SystemParams::Cavity(p) => (&mut p.delta, &mut p.gamma_q, &mut p.h, p.v_g),
        };
        match param {
            Param::Delta => *delta = angular,
            Param::GammaQ => *gamma_q = angular,
            Param::H => *h = angular,
            Param::Gamma1 => {
                if angular < 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "Gamma1 must be non-negative, got {user}"
                    )));
                }
                *h = (angular * v_g).sqrt();
            }
            Param::V | Param::G | Param::DeltaC => {
                let SystemParams::Cavity(p) = self else {
                    unreachable!("flavor checked above")
                };
                match param {
                    Param::V => p.v = angular,
                    Param::G => p.g = angular,
                    _ => p.delta_c = angular,
                }
            }
        }
        Ok(())
    }
}

/// Names of the parameters that can be swept or optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    #[serde(rename = "gamma_q")]
    GammaQ,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "V")]
    V,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "Gamma1", alias = "Gamma_1")]
    Gamma1,
    #[serde(rename = "delta_c")]
    DeltaC,
}

impl Param {
    pub const ALL: [Param; 7] = [
        Param::GammaQ,
        Param::H,
        Param::V,
        Param::G,
        Param::Delta,
        Param::Gamma1,
        Param::DeltaC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::GammaQ => "gamma_q",
            Param::H => "h",
            Param::V => "V",
            Param::G => "g",
            Param::Delta => "delta",
            Param::Gamma1 => "Gamma1",
            Param::DeltaC => "delta_c",
        }
    }

    pub fn is_cavity_only(self) -> bool {
        matches!(self, Param::V | Param::G | Param::DeltaC)
    }

    /// `h` and `Gamma1` address the same underlying coupling.
    pub fn conflicts_with(self, other: Param) -> bool {
        self == other
            || matches!(
                (self, other),
                (Param::H, Param::Gamma1) | (Param::Gamma1, Param::H)
            )
    }

    fn check_flavor(self, flavor: Flavor) -> Result<()> {
        if flavor == Flavor::Bare && self.is_cavity_only() {
            return Err(Error::InvalidAxis(format!(
                "parameter `{self}` does not apply to a bare detector"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma_q" | "gamma-q" => Ok(Param::GammaQ),
            "h" => Ok(Param::H),
            "V" => Ok(Param::V),
            "g" => Ok(Param::G),
            "delta" => Ok(Param::Delta),
            "Gamma1" | "Gamma_1" => Ok(Param::Gamma1),
            "delta_c" | "delta-c" => Ok(Param::DeltaC),
            other => Err(Error::InvalidAxis(format!("unknown parameter `{other}`"))),
        }
    }
}

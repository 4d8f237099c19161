//! Physical parameters of the atom-laser system and the internal unit system.
//!
//! Every rate, detuning and Rabi frequency in [`PhysicalConfig`] is an
//! angular frequency in rad/s. The numerical kernels work in units where the
//! excited-state decay rate is one and the medium spans `z ∈ [0, 1]`; see
//! [`Scaled`].

use std::f64::consts::TAU;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Atomic and laser parameters. Frequencies are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    /// Excited-state population decay rate Γ.
    pub gamma_big: f64,
    /// Ground-state coherence decay rate γ.
    pub gamma_small: f64,
    /// Pump Rabi frequency Ω.
    pub omega_rabi: f64,
    /// One-photon pump detuning Δ from |1⟩ → |3⟩.
    pub delta_big: f64,
    /// Two-photon detuning δ.
    pub delta_small: f64,
    /// Level offset ω0 = ω21 − ω43.
    pub omega_zero: f64,
    /// Resonant optical depth 𝒩σ0L.
    pub optical_depth: f64,
    /// Medium length in meters. Only used for bookkeeping; the physics
    /// depends on the optical depth alone.
    pub length: f64,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            gamma_big: TAU * 5.7e6,
            gamma_small: TAU * 10e3,
            omega_rabi: TAU * 0.3e9,
            delta_big: TAU * 1e9,
            delta_small: 0.0,
            omega_zero: TAU * 3e9,
            optical_depth: 150.0,
            length: 0.01,
        }
    }
}

/// Constants derived once from a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Propagation prefactor g²𝒩L/c, calibrated so that a weak probe on a
    /// closed two-level transition obeys Beer–Lambert: κ = OD·Γ/4 (rad/s).
    pub coupling: f64,
    /// τ = 2Γ² + 4Ω² + 4ω0² + 8Δ² + 8Δω0 (rad²/s²).
    pub tau: f64,
}

/// A configuration expressed in internal units: every rate divided by Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub gamma_big: f64,
    pub gamma_small: f64,
    pub omega_rabi: f64,
    pub delta_big: f64,
    pub delta_small: f64,
    pub omega_zero: f64,
    pub optical_depth: f64,
}

impl Scaled {
    /// Dimensionless coupling κL/Γ for a unit-length medium.
    pub fn coupling(&self) -> f64 {
        self.optical_depth * self.gamma_big / 4.0
    }

    pub fn tau(&self) -> f64 {
        tau(
            self.gamma_big,
            self.omega_rabi,
            self.delta_big,
            self.omega_zero,
        )
    }

    /// Converts back to laboratory units given the decay rate Γ (rad/s) and
    /// the medium length (m) that were divided out.
    pub fn to_physical(&self, gamma_big: f64, length: f64) -> PhysicalConfig {
        PhysicalConfig {
            gamma_big: self.gamma_big * gamma_big,
            gamma_small: self.gamma_small * gamma_big,
            omega_rabi: self.omega_rabi * gamma_big,
            delta_big: self.delta_big * gamma_big,
            delta_small: self.delta_small * gamma_big,
            omega_zero: self.omega_zero * gamma_big,
            optical_depth: self.optical_depth,
            length,
        }
    }
}

fn tau(gamma_big: f64, omega_rabi: f64, delta_big: f64, omega_zero: f64) -> f64 {
    2.0 * gamma_big * gamma_big
        + 4.0 * omega_rabi * omega_rabi
        + 4.0 * omega_zero * omega_zero
        + 8.0 * delta_big * delta_big
        + 8.0 * delta_big * omega_zero
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl PhysicalConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma_big", self.gamma_big),
            ("gamma_small", self.gamma_small),
            ("omega_rabi", self.omega_rabi),
            ("delta_big", self.delta_big),
            ("delta_small", self.delta_small),
            ("omega_zero", self.omega_zero),
            ("optical_depth", self.optical_depth),
            ("length", self.length),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(invalid(name, format!("{value} is not finite")));
            }
        }
        if self.gamma_big <= 0.0 {
            return Err(invalid("gamma_big", "must be > 0"));
        }
        if self.gamma_small < 0.0 {
            return Err(invalid("gamma_small", "must be >= 0"));
        }
        if self.omega_rabi < 0.0 {
            return Err(invalid("omega_rabi", "must be >= 0"));
        }
        if self.optical_depth < 0.0 {
            return Err(invalid("optical_depth", "must be >= 0"));
        }
        if self.length <= 0.0 {
            return Err(invalid("length", "must be > 0"));
        }
        Ok(())
    }

    pub fn derive_constants(&self) -> Result<DerivedConstants> {
        self.validate()?;
        Ok(DerivedConstants {
            coupling: self.optical_depth * self.gamma_big / 4.0,
            tau: tau(
                self.gamma_big,
                self.omega_rabi,
                self.delta_big,
                self.omega_zero,
            ),
        })
    }

    pub fn scaled(&self) -> Scaled {
        let g = self.gamma_big;
        Scaled {
            gamma_big: 1.0,
            gamma_small: self.gamma_small / g,
            omega_rabi: self.omega_rabi / g,
            delta_big: self.delta_big / g,
            delta_small: self.delta_small / g,
            omega_zero: self.omega_zero / g,
            optical_depth: self.optical_depth,
        }
    }

    /// Loads a `key = value` file and overlays it on the defaults. Keys ending
    /// in `_hz` hold ordinary frequencies and are multiplied by 2π.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_config_str(&text)
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let config = file.apply(Self::default());
        config.validate()?;
        Ok(config)
    }

    /// Renders the configuration in the config-file format.
    pub fn to_config_string(&self) -> String {
        format!(
            "gamma_big_hz = {:e}\ngamma_small_hz = {:e}\nomega_rabi_hz = {:e}\ndelta_big_hz = {:e}\n\
             delta_small_hz = {:e}\nomega_zero_hz = {:e}\noptical_depth = {:e}\nlength_m = {:e}\n",
            self.gamma_big / TAU,
            self.gamma_small / TAU,
            self.omega_rabi / TAU,
            self.delta_big / TAU,
            self.delta_small / TAU,
            self.omega_zero / TAU,
            self.optical_depth,
            self.length,
        )
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    gamma_big_hz: Option<f64>,
    gamma_small_hz: Option<f64>,
    omega_rabi_hz: Option<f64>,
    delta_big_hz: Option<f64>,
    delta_small_hz: Option<f64>,
    omega_zero_hz: Option<f64>,
    optical_depth: Option<f64>,
    length_m: Option<f64>,
}

impl ConfigFile {
    fn apply(self, mut c: PhysicalConfig) -> PhysicalConfig {
        let hz = |v: Option<f64>, slot: &mut f64| {
            if let Some(v) = v {
                *slot = TAU * v;
            }
        };
        hz(self.gamma_big_hz, &mut c.gamma_big);
        hz(self.gamma_small_hz, &mut c.gamma_small);
        hz(self.omega_rabi_hz, &mut c.omega_rabi);
        hz(self.delta_big_hz, &mut c.delta_big);
        hz(self.delta_small_hz, &mut c.delta_small);
        hz(self.omega_zero_hz, &mut c.omega_zero);
        if let Some(v) = self.optical_depth {
            c.optical_depth = v;
        }
        if let Some(v) = self.length_m {
            c.length = v;
        }
        c
    }
}

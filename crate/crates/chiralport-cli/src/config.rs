//! Configuration file schema.
//!
//! A config is a TOML document with up to three sections:
//!
//! ```toml
//! # Either explicit rates ...
//! [device]
//! gamma_dr = 0.95      # chiral coupling rates, lower then upper waveguide
//! gamma_dl = 0.05
//! gamma_ur = 0.9
//! gamma_ul = 0.1
//! omega_eg = 0.0       # optional, default 0
//! omega_g = 0.0        # optional, default 0
//! gamma_star = 0.05    # optional free-space loss, default 0
//! v_g = 1.0            # optional group velocity, default 1
//!
//! # ... or design-space coordinates (choose exactly one of the two).
//! [design]
//! dir_d = 0.9
//! dir_u = 0.9
//! purcell = 20.0       # `inf` selects the lossless limit
//! gamma_d = 1.0        # optional rate scale, default 1
//! rectified = true     # derive gamma_u from the rectification condition ...
//! # gamma_u = 0.5      # ... or set it explicitly
//!
//! [sweep]
//! target = "transistor-heatmap"
//! # Optional axis overrides; omitted axes use per-target defaults
//! # (200 points, documented ranges).
//! [[sweep.axis]]
//! name = "dir_d"
//! min = 0.05
//! max = 1.0
//! count = 200
//! scale = "linear"     # or "log"
//! [sweep.fixed]
//! purcell = 20.0
//! ```
//!
//! Unknown keys anywhere are rejected so typos fail loudly instead of
//! silently falling back to defaults.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use chiralport::params::{DesignPoint, DeviceParams, EmitterSpec};
use chiralport::scattering::rectified_device;
use chiralport::CouplingSet;
use serde::Deserialize;

/// Top-level configuration document.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub device: Option<DeviceSection>,
    pub design: Option<DesignSection>,
    pub sweep: Option<SweepSpec>,
}

/// Explicit physical rates.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSection {
    pub gamma_dr: f64,
    pub gamma_dl: f64,
    pub gamma_ur: f64,
    pub gamma_ul: f64,
    #[serde(default)]
    pub omega_eg: f64,
    #[serde(default)]
    pub omega_g: f64,
    #[serde(default)]
    pub gamma_star: f64,
    #[serde(default = "one")]
    pub v_g: f64,
}

/// Design-space coordinates, optionally constrained to the rectification
/// manifold.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    pub dir_d: f64,
    pub dir_u: f64,
    /// Purcell factor; TOML `inf` encodes the lossless limit.
    pub purcell: f64,
    #[serde(default = "one")]
    pub gamma_d: f64,
    /// Explicit upper-waveguide rate. Mutually exclusive with `rectified`.
    pub gamma_u: Option<f64>,
    /// Derive `gamma_u` from the rectification condition `t(ω_eg) = 0`.
    #[serde(default)]
    pub rectified: bool,
}

fn one() -> f64 {
    1.0
}

impl Config {
    /// Reads and parses a config file.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: Config = toml::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        Ok(config)
    }

    /// Builds the device the config describes.
    ///
    /// Exactly one of `[device]` and `[design]` must be present. Infeasible
    /// rectified designs surface as [`chiralport::Error::BelowThreshold`] so
    /// the caller can distinguish them from plain config mistakes.
    pub fn resolve_device(&self) -> anyhow::Result<DeviceParams> {
        match (&self.device, &self.design) {
            (Some(_), Some(_)) => {
                bail!("config must contain exactly one of [device] and [design], found both")
            }
            (None, None) => {
                bail!("config must contain a [device] or [design] section for this command")
            }
            (Some(d), None) => {
                let couplings = CouplingSet::new(d.gamma_dr, d.gamma_dl, d.gamma_ur, d.gamma_ul)?;
                let emitter = EmitterSpec::new(d.omega_eg, d.omega_g, d.gamma_star)?;
                Ok(DeviceParams::new(couplings, emitter, d.v_g)?)
            }
            (None, Some(d)) => {
                if d.rectified && d.gamma_u.is_some() {
                    bail!("[design] cannot set both rectified = true and gamma_u");
                }
                if d.rectified {
                    Ok(rectified_device(d.dir_d, d.dir_u, d.purcell, d.gamma_d)?)
                } else {
                    let gamma_u = d.gamma_u.ok_or_else(|| {
                        anyhow::anyhow!("[design] needs gamma_u (or rectified = true)")
                    })?;
                    let point = DesignPoint::new(d.dir_d, d.dir_u, d.purcell, d.gamma_d)?;
                    Ok(point.realize(gamma_u)?)
                }
            }
        }
    }

    /// The `[sweep]` section, or an error naming the file's omission.
    pub fn sweep(&self) -> anyhow::Result<&SweepSpec> {
        self.sweep
            .as_ref()
            .ok_or_else(|| anyhow::anyhow!("config has no [sweep] section"))
    }
}

/// What a sweep computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Rectification efficiency over (Purcell factor, shared directionality).
    RectifierEfficiency,
    /// Diode figures of merit over the lower directionality.
    Diode,
    /// Transistor success probability over both directionalities at a fixed
    /// Purcell factor.
    TransistorHeatmap,
    /// Transistor success probability versus Purcell factor at fixed
    /// directionalities.
    TransistorVsPurcell,
    /// Single-photon amplitudes versus detuning for the configured device.
    AmplitudesVsDetuning,
    /// Closed-form amplitudes against the lattice oracle at random points.
    OracleVerify,
    /// Grid dump of the two-photon wavefunctions of the configured device.
    WavefunctionDump,
}

impl Target {
    /// Kebab-case name, as written in config files.
    pub fn name(&self) -> &'static str {
        match self {
            Target::RectifierEfficiency => "rectifier-efficiency",
            Target::Diode => "diode",
            Target::TransistorHeatmap => "transistor-heatmap",
            Target::TransistorVsPurcell => "transistor-vs-purcell",
            Target::AmplitudesVsDetuning => "amplitudes-vs-detuning",
            Target::OracleVerify => "oracle-verify",
            Target::WavefunctionDump => "wavefunction-dump",
        }
    }
}

/// Declarative sweep description.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub target: Target,
    /// Axis overrides; axes a target does not use are rejected.
    #[serde(default)]
    pub axis: Vec<AxisSpec>,
    /// Scalar overrides (for example `purcell` for the heatmap, or `k1`,
    /// `k2` for the wavefunction dump).
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    /// Number of random points for `oracle-verify`.
    pub points: Option<usize>,
    /// Restrict `wavefunction-dump` to one component label.
    pub component: Option<String>,
}

impl SweepSpec {
    /// Bare spec with defaults for everything but the target.
    pub fn for_target(target: Target) -> Self {
        SweepSpec {
            target,
            axis: Vec::new(),
            fixed: BTreeMap::new(),
            points: None,
            component: None,
        }
    }

    /// Grid values for `name`: the override if present, `fallback` otherwise.
    /// `used` collects axis names consumed so unknown overrides can be
    /// rejected afterwards.
    pub fn axis_values(
        &self,
        name: &str,
        fallback: AxisSpec,
        used: &mut Vec<String>,
    ) -> anyhow::Result<Vec<f64>> {
        used.push(name.to_string());
        let spec = self
            .axis
            .iter()
            .find(|a| a.name == name)
            .cloned()
            .unwrap_or(fallback);
        spec.values()
    }

    /// Errors when the config declares axes the target never consumed.
    pub fn reject_unused_axes(&self, used: &[String]) -> anyhow::Result<()> {
        for axis in &self.axis {
            if !used.iter().any(|u| u == &axis.name) {
                bail!(
                    "target {} does not use an axis named {:?} (expected one of {:?})",
                    self.target.name(),
                    axis.name,
                    used
                );
            }
        }
        Ok(())
    }

    /// A fixed scalar with a default, tracking consumed names like
    /// [`SweepSpec::axis_values`].
    pub fn fixed_or(&self, name: &str, default: f64, used: &mut Vec<String>) -> f64 {
        used.push(name.to_string());
        self.fixed.get(name).copied().unwrap_or(default)
    }

    /// Errors when the config fixes scalars the target never consumed.
    pub fn reject_unused_fixed(&self, used: &[String]) -> anyhow::Result<()> {
        for key in self.fixed.keys() {
            if !used.iter().any(|u| u == key) {
                bail!(
                    "target {} does not use a fixed parameter named {key:?} (expected one of {:?})",
                    self.target.name(),
                    used
                );
            }
        }
        Ok(())
    }
}

/// One sweep axis.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

fn default_count() -> usize {
    200
}

/// Axis spacing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl AxisSpec {
    /// Convenience constructor for built-in defaults.
    pub fn new(name: &str, min: f64, max: f64, count: usize, scale: Scale) -> Self {
        AxisSpec {
            name: name.to_string(),
            min,
            max,
            count,
            scale,
        }
    }

    /// The grid this axis describes, endpoints included.
    pub fn values(&self) -> anyhow::Result<Vec<f64>> {
        if self.count < 2 {
            bail!("axis {:?} needs at least 2 points, got {}", self.name, self.count);
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            bail!(
                "axis {:?} needs finite min < max, got [{}, {}]",
                self.name,
                self.min,
                self.max
            );
        }
        let n = self.count;
        let values = match self.scale {
            Scale::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            Scale::Log => {
                if self.min <= 0.0 {
                    bail!("axis {:?} is log-scaled and needs min > 0", self.name);
                }
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        };
        Ok(values)
    }
}

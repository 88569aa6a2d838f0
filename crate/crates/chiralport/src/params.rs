//! Device parameterisations: raw coupling rates, design-space coordinates and
//! the driven W-system that reduces to an effective Λ device.
//!
//! Two coordinate systems are used throughout the crate. The *physical* one
//! lists the four chiral decay rates `γ_dR, γ_dL, γ_uR, γ_uL` (lower/upper
//! waveguide × right/left movers) together with the free-space rate `Γ*`. The
//! *design* one uses the directionalities `D_j = (γ_jR − γ_jL)/γ_j`, the
//! Purcell factor `P_F = (γ_d + γ_u)/Γ*` and one overall rate scale, which is
//! the natural space for the rectifier/diode/transistor conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which waveguide a quantity refers to: the lower one couples `|g⟩–|e⟩`,
/// the upper one couples `|s⟩–|e⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Waveguide {
    Lower,
    Upper,
}

impl std::fmt::Display for Waveguide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Waveguide::Lower => write!(f, "lower"),
            Waveguide::Upper => write!(f, "upper"),
        }
    }
}

fn ensure_rate(name: &str, value: f64) -> Result<f64> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite and >= 0, got {value}"
        )));
    }
    Ok(value)
}

fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite, got {value}"
        )));
    }
    Ok(value)
}

/// The four chiral emission rates of the emitter into the two waveguides.
///
/// All rates are non-negative; a fully bidirectional coupling has equal right
/// and left rates, a perfectly chiral one has a single non-zero entry per
/// waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    /// Lower waveguide, right-moving modes.
    pub gamma_dr: f64,
    /// Lower waveguide, left-moving modes.
    pub gamma_dl: f64,
    /// Upper waveguide, right-moving modes.
    pub gamma_ur: f64,
    /// Upper waveguide, left-moving modes.
    pub gamma_ul: f64,
}

impl CouplingSet {
    /// Validates and builds a coupling set. Every rate must be finite and
    /// non-negative.
    pub fn new(gamma_dr: f64, gamma_dl: f64, gamma_ur: f64, gamma_ul: f64) -> Result<Self> {
        Ok(Self {
            gamma_dr: ensure_rate("gamma_dr", gamma_dr)?,
            gamma_dl: ensure_rate("gamma_dl", gamma_dl)?,
            gamma_ur: ensure_rate("gamma_ur", gamma_ur)?,
            gamma_ul: ensure_rate("gamma_ul", gamma_ul)?,
        })
    }

    /// Total decay rate into one waveguide, `γ_j = γ_jR + γ_jL`.
    pub fn total(&self, j: Waveguide) -> f64 {
        match j {
            Waveguide::Lower => self.gamma_dr + self.gamma_dl,
            Waveguide::Upper => self.gamma_ur + self.gamma_ul,
        }
    }

    /// Total waveguide decay rate `γ = γ_d + γ_u` (free space excluded).
    pub fn total_waveguide(&self) -> f64 {
        self.total(Waveguide::Lower) + self.total(Waveguide::Upper)
    }

    /// Directionality `D_j = (γ_jR − γ_jL)/(γ_jR + γ_jL)` of one waveguide.
    ///
    /// `D_j = 1` is perfectly chiral towards the right, `D_j = −1` towards the
    /// left and `D_j = 0` bidirectional. Errors when the waveguide carries no
    /// coupling at all, in which case the ratio is undefined.
    pub fn directionality(&self, j: Waveguide) -> Result<f64> {
        let total = self.total(j);
        if total == 0.0 {
            return Err(Error::DegenerateCoupling(j));
        }
        let diff = match j {
            Waveguide::Lower => self.gamma_dr - self.gamma_dl,
            Waveguide::Upper => self.gamma_ur - self.gamma_ul,
        };
        Ok(diff / total)
    }
}

/// Emitter-level parameters that are not coupling rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmitterSpec {
    /// `|g⟩–|e⟩` transition energy `ω_eg = ω_e − ω_g`.
    pub omega_eg: f64,
    /// Energy of the metastable state `|s⟩` relative to `|g⟩`; enters the
    /// phases of upper-waveguide photons only.
    pub omega_g: f64,
    /// Free-space (loss) emission rate `Γ*`.
    pub gamma_star: f64,
}

impl EmitterSpec {
    /// Validates and builds the emitter spec.
    pub fn new(omega_eg: f64, omega_g: f64, gamma_star: f64) -> Result<Self> {
        Ok(Self {
            omega_eg: ensure_finite("omega_eg", omega_eg)?,
            omega_g: ensure_finite("omega_g", omega_g)?,
            gamma_star: ensure_rate("gamma_star", gamma_star)?,
        })
    }
}

/// Full parameter set of one device: couplings, emitter and group velocity.
///
/// The group velocity is common to both waveguides (linearised dispersion);
/// keeping it explicit makes the units of positions and wavevectors visible in
/// the two-photon machinery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    pub couplings: CouplingSet,
    pub emitter: EmitterSpec,
    /// Group velocity `v_g > 0` shared by both waveguides.
    pub v_g: f64,
}

impl DeviceParams {
    /// Validates and builds a device. `v_g` must be finite and positive.
    pub fn new(couplings: CouplingSet, emitter: EmitterSpec, v_g: f64) -> Result<Self> {
        if !v_g.is_finite() || v_g <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "v_g must be finite and > 0, got {v_g}"
            )));
        }
        Ok(Self {
            couplings,
            emitter,
            v_g,
        })
    }

    /// Builds a device with `v_g = 1`, the convention used by most examples.
    pub fn with_unit_velocity(couplings: CouplingSet, emitter: EmitterSpec) -> Result<Self> {
        Self::new(couplings, emitter, 1.0)
    }

    /// Total waveguide decay rate `γ = γ_d + γ_u`.
    pub fn gamma_waveguides(&self) -> f64 {
        self.couplings.total_waveguide()
    }

    /// Purcell factor `P_F = (γ_d + γ_u)/Γ*`.
    ///
    /// Errors when `Γ* = 0` (the lossless limit), where the ratio diverges;
    /// callers that want to treat that limit should branch on
    /// `emitter.gamma_star` instead.
    pub fn purcell_factor(&self) -> Result<f64> {
        if self.emitter.gamma_star == 0.0 {
            return Err(Error::ZeroFreeSpaceRate);
        }
        Ok(self.gamma_waveguides() / self.emitter.gamma_star)
    }

    /// Total-emission beta factor `β = (γ_d + γ_u)/(γ_d + γ_u + Γ*)`,
    /// equivalently `1 − 1/(P_F + 1)`.
    ///
    /// Errors only when every rate (waveguide and free space) vanishes.
    pub fn beta_factor(&self) -> Result<f64> {
        let gamma = self.gamma_waveguides();
        let denom = gamma + self.emitter.gamma_star;
        if denom == 0.0 {
            return Err(Error::DegenerateDevice);
        }
        Ok(gamma / denom)
    }

    /// Coupling amplitude `V_R = √(γ_dR · v_g)` (lower waveguide, right).
    pub fn v_r(&self) -> f64 {
        (self.couplings.gamma_dr * self.v_g).sqrt()
    }

    /// Coupling amplitude `V_L = √(γ_dL · v_g)`.
    pub fn v_l(&self) -> f64 {
        (self.couplings.gamma_dl * self.v_g).sqrt()
    }

    /// Coupling amplitude `W_R = √(γ_uR · v_g)` (upper waveguide, right).
    pub fn w_r(&self) -> f64 {
        (self.couplings.gamma_ur * self.v_g).sqrt()
    }

    /// Coupling amplitude `W_L = √(γ_uL · v_g)`.
    pub fn w_l(&self) -> f64 {
        (self.couplings.gamma_ul * self.v_g).sqrt()
    }

    /// The same device with the lower-waveguide chirality mirrored
    /// (`γ_dR ↔ γ_dL`); used to describe photons injected from the right.
    pub fn mirrored_lower(&self) -> Self {
        let mut c = self.couplings;
        std::mem::swap(&mut c.gamma_dr, &mut c.gamma_dl);
        Self {
            couplings: c,
            ..*self
        }
    }

    /// The same device with the loss channel removed (`Γ* = 0`).
    ///
    /// Detection probabilities are defined against the outgoing norm of this
    /// twin, so that loss shows up as probabilities summing to less than one.
    pub fn lossless_twin(&self) -> Self {
        let mut emitter = self.emitter;
        emitter.gamma_star = 0.0;
        Self { emitter, ..*self }
    }
}

/// Design-space coordinates: directionalities, Purcell factor and the lower
/// waveguide rate that fixes the overall scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    /// Lower-waveguide directionality `D_d ∈ [−1, 1]`.
    pub dir_d: f64,
    /// Upper-waveguide directionality `D_u ∈ [−1, 1]`.
    pub dir_u: f64,
    /// Purcell factor `P_F > 0`; `f64::INFINITY` encodes the lossless limit.
    pub purcell: f64,
    /// Total lower-waveguide rate `γ_d > 0` (sets the unit of rate).
    pub gamma_d: f64,
}

impl DesignPoint {
    /// Validates and builds a design point.
    pub fn new(dir_d: f64, dir_u: f64, purcell: f64, gamma_d: f64) -> Result<Self> {
        for (name, d) in [("dir_d", dir_d), ("dir_u", dir_u)] {
            if !d.is_finite() || !(-1.0..=1.0).contains(&d) {
                return Err(Error::InvalidDesign(format!(
                    "{name} must lie in [-1, 1], got {d}"
                )));
            }
        }
        if purcell.is_nan() || purcell <= 0.0 {
            return Err(Error::InvalidDesign(format!(
                "purcell must be > 0 (INFINITY allowed), got {purcell}"
            )));
        }
        if !gamma_d.is_finite() || gamma_d <= 0.0 {
            return Err(Error::InvalidDesign(format!(
                "gamma_d must be finite and > 0, got {gamma_d}"
            )));
        }
        Ok(Self {
            dir_d,
            dir_u,
            purcell,
            gamma_d,
        })
    }

    /// Reconstructs physical rates from design coordinates and a chosen total
    /// upper-waveguide rate `γ_u ≥ 0`.
    ///
    /// The chiral split is `γ_jR = γ_j (1 + D_j)/2`, `γ_jL = γ_j (1 − D_j)/2`,
    /// and the free-space rate follows from the Purcell factor,
    /// `Γ* = (γ_d + γ_u)/P_F` (zero in the lossless limit `P_F = ∞`).
    /// Frequencies are set to zero and `v_g = 1`; adjust the returned value
    /// for other conventions. Directionality and Purcell factor of the result
    /// reproduce the inputs to floating-point accuracy.
    pub fn realize(&self, gamma_u: f64) -> Result<DeviceParams> {
        let gamma_u = ensure_rate("gamma_u", gamma_u)?;
        let couplings = CouplingSet::new(
            self.gamma_d * (1.0 + self.dir_d) / 2.0,
            self.gamma_d * (1.0 - self.dir_d) / 2.0,
            gamma_u * (1.0 + self.dir_u) / 2.0,
            gamma_u * (1.0 - self.dir_u) / 2.0,
        )?;
        let gamma_star = if self.purcell.is_infinite() {
            0.0
        } else {
            (self.gamma_d + gamma_u) / self.purcell
        };
        let emitter = EmitterSpec::new(0.0, 0.0, gamma_star)?;
        DeviceParams::with_unit_velocity(couplings, emitter)
    }
}

/// Reconstructs a device from design coordinates; free-function form of
/// [`DesignPoint::realize`].
pub fn from_design(design: &DesignPoint, gamma_u: f64) -> Result<DeviceParams> {
    design.realize(gamma_u)
}

/// A driven W-type level scheme that reduces to the Λ device.
///
/// Two classical drives with Rabi amplitudes `Ω_d, Ω_u` and detunings
/// `Δ_d, Δ_u` dress two auxiliary excited states; adiabatic elimination of
/// those states leaves an effective Λ emitter whose rates are the bare ones
/// scaled by `(Ω_j/Δ_j)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WSystemSpec {
    /// Bare chiral rates of the two optical transitions.
    pub bare: CouplingSet,
    /// Bare emitter data; `gamma_star` is the bare free-space rate.
    pub emitter: EmitterSpec,
    /// Group velocity of both waveguides.
    pub v_g: f64,
    /// Rabi amplitude of the drive addressing the lower transition.
    pub drive_d: f64,
    /// Rabi amplitude of the drive addressing the upper transition.
    pub drive_u: f64,
    /// Detuning of the lower drive (must be non-zero).
    pub detuning_d: f64,
    /// Detuning of the upper drive (must be non-zero).
    pub detuning_u: f64,
}

/// Result of adiabatically eliminating the driven states of a W system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanEffective {
    /// The effective Λ device.
    pub params: DeviceParams,
    /// `|Ω_d/Δ_d|`, the small parameter of the lower branch.
    pub ratio_d: f64,
    /// `|Ω_u/Δ_u|`, the small parameter of the upper branch.
    pub ratio_u: f64,
    /// True when both ratios are ≤ 0.1, the regime where the elimination is
    /// quantitatively trustworthy.
    pub adiabatic: bool,
}

impl WSystemSpec {
    /// Performs the adiabatic elimination.
    ///
    /// Lower-waveguide rates scale by `(Ω_d/Δ_d)²`, upper ones by
    /// `(Ω_u/Δ_u)²`, and the free-space rate picks up both branches,
    /// `Γ*_eff = [(Ω_d/Δ_d)² + (Ω_u/Δ_u)²] Γ*`. Directionalities are
    /// untouched because right and left movers scale identically. Errors
    /// when a drive detuning is zero.
    pub fn raman_effective(&self) -> Result<RamanEffective> {
        if self.detuning_d == 0.0 || self.detuning_u == 0.0 {
            return Err(Error::ZeroDetuning);
        }
        ensure_finite("drive_d", self.drive_d)?;
        ensure_finite("drive_u", self.drive_u)?;
        ensure_finite("detuning_d", self.detuning_d)?;
        ensure_finite("detuning_u", self.detuning_u)?;
        let ratio_d = (self.drive_d / self.detuning_d).abs();
        let ratio_u = (self.drive_u / self.detuning_u).abs();
        let (sd, su) = (ratio_d * ratio_d, ratio_u * ratio_u);
        let couplings = CouplingSet::new(
            self.bare.gamma_dr * sd,
            self.bare.gamma_dl * sd,
            self.bare.gamma_ur * su,
            self.bare.gamma_ul * su,
        )?;
        let emitter = EmitterSpec::new(
            self.emitter.omega_eg,
            self.emitter.omega_g,
            (sd + su) * self.emitter.gamma_star,
        )?;
        Ok(RamanEffective {
            params: DeviceParams::new(couplings, emitter, self.v_g)?,
            ratio_d,
            ratio_u,
            adiabatic: ratio_d <= 0.1 && ratio_u <= 0.1,
        })
    }
}

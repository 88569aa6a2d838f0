//! Single-photon scattering amplitudes and the closed-form design conditions
//! built on top of them (rectification, diode operation, thresholds).
//!
//! A photon of energy `ω` injected from the left of the lower waveguide
//! scatters into four outgoing channels with amplitudes
//!
//! ```text
//!   t  — transmitted, lower waveguide right-movers   (port 2)
//!   r  — reflected, lower waveguide left-movers      (port 1)
//!   t̃  — Raman-transferred, upper right-movers       (port 3)
//!   r̃  — Raman-transferred, upper left-movers        (port 4)
//! ```
//!
//! All four share the resonance denominator
//! `den(ω) = ω − ω_eg + i(Γ* + γ)/2` with `γ = γ_dR + γ_dL + γ_uR + γ_uL`:
//!
//! ```text
//!   t  = (ω − ω_eg + i(Γ* + γ − 2 γ_dR)/2) / den      (= 1 − i γ_dR/den)
//!   r  = −i √(γ_dR γ_dL) / den
//!   t̃  = −i √(γ_dR γ_uR) / den
//!   r̃  = −i √(γ_dR γ_uL) / den
//! ```
//!
//! Perfect rectification (`t(ω_eg) = 0`) requires the forward rate to balance
//! every other decay channel, `γ_dR = γ_dL + γ_uR + γ_uL + Γ*`, which is
//! feasible only above the Purcell threshold `P_F ≥ 1/D_d`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CouplingSet, DesignPoint, DeviceParams, EmitterSpec};

/// The four outgoing amplitudes for a single photon of energy `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes {
    /// Photon energy the amplitudes were evaluated at.
    pub omega: f64,
    /// Transmission into the co-propagating lower-waveguide modes.
    pub t: Complex64,
    /// Reflection into the counter-propagating lower-waveguide modes.
    pub r: Complex64,
    /// Raman transfer into the co-propagating upper-waveguide modes.
    pub t_tilde: Complex64,
    /// Raman transfer into the counter-propagating upper-waveguide modes.
    pub r_tilde: Complex64,
}

impl Amplitudes {
    /// `T = |t|²`.
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// `R = |r|²`.
    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// `T̃ = |t̃|²`.
    pub fn transfer_t(&self) -> f64 {
        self.t_tilde.norm_sqr()
    }

    /// `R̃ = |r̃|²`.
    pub fn transfer_r(&self) -> f64 {
        self.r_tilde.norm_sqr()
    }

    /// The four detection probabilities as `[R, T, T̃, R̃]`, ordered by port.
    pub fn probabilities(&self) -> [f64; 4] {
        [
            self.reflection(),
            self.transmission(),
            self.transfer_t(),
            self.transfer_r(),
        ]
    }

    /// Sum of the four probabilities; equals 1 for a lossless device and is
    /// strictly below 1 whenever `Γ* > 0` and the emitter is excited.
    pub fn probability_sum(&self) -> f64 {
        self.probabilities().iter().sum()
    }
}

/// Shared resonance denominator `ω − ω_eg + i(Γ* + γ)/2`.
fn denominator(p: &DeviceParams, omega: f64) -> Complex64 {
    Complex64::new(
        omega - p.emitter.omega_eg,
        (p.emitter.gamma_star + p.gamma_waveguides()) / 2.0,
    )
}

/// Exact amplitudes for a photon injected from the left (right-moving input).
///
/// Errors only for the fully degenerate case where every rate vanishes and
/// the photon sits exactly at `ω = ω_eg`, which makes the shared denominator
/// zero.
pub fn amplitudes_forward(p: &DeviceParams, omega: f64) -> Result<Amplitudes> {
    let den = denominator(p, omega);
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateDevice);
    }
    let c = &p.couplings;
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(Amplitudes {
        omega,
        t: 1.0 - Complex64::new(0.0, c.gamma_dr) / den,
        r: minus_i * (c.gamma_dr * c.gamma_dl).sqrt() / den,
        t_tilde: minus_i * (c.gamma_dr * c.gamma_ur).sqrt() / den,
        r_tilde: minus_i * (c.gamma_dr * c.gamma_ul).sqrt() / den,
    })
}

/// Exact amplitudes for a photon injected from the right (left-moving input).
///
/// Obtained from the forward formulas on the spatially mirrored device
/// (`γ_dR ↔ γ_dL`): `t` then denotes transmission to the *left* output of the
/// lower waveguide, `r` reflection back to the right, while `t̃` and `r̃`
/// keep their port meaning (3 and 4 respectively) because the upper-waveguide
/// swap and the port relabelling cancel.
pub fn amplitudes_backward(p: &DeviceParams, omega: f64) -> Result<Amplitudes> {
    amplitudes_forward(&p.mirrored_lower(), omega)
}

/// Resonant backward amplitudes in the closed form valid on the
/// rectification manifold (`t(ω_eg) = 0`):
///
/// ```text
///   t_{r→l} = 1 − R,   r_{r→l} = r,
///   t̃_{r→l} = t̃ √(γ_dL/γ_dR),   r̃_{r→l} = r̃ √(γ_dL/γ_dR),
/// ```
///
/// with `R, r, t̃, r̃` the forward resonant quantities. Away from that
/// manifold the relations do not hold; use [`amplitudes_backward`] instead.
/// Errors when `γ_dR = 0` (the ratio is undefined).
pub fn amplitudes_backward_resonant(p: &DeviceParams) -> Result<Amplitudes> {
    if p.couplings.gamma_dr == 0.0 {
        return Err(Error::ZeroChiralCoupling);
    }
    let fwd = amplitudes_forward(p, p.emitter.omega_eg)?;
    let s = (p.couplings.gamma_dl / p.couplings.gamma_dr).sqrt();
    Ok(Amplitudes {
        omega: fwd.omega,
        t: Complex64::new(1.0 - fwd.reflection(), 0.0),
        r: fwd.r,
        t_tilde: fwd.t_tilde * s,
        r_tilde: fwd.r_tilde * s,
    })
}

/// Upper-waveguide rate that makes the device a perfect rectifier,
/// `γ_u = γ_d D_d − Γ*`, i.e. the solution of `γ_dR = γ_dL + γ_u + Γ*`.
///
/// Errors when the balance cannot be struck with a positive rate
/// (`γ_d D_d ≤ Γ*`), which is exactly the sub-threshold regime `P_F < 1/D_d`.
pub fn rectification_gamma_u(gamma_d: f64, dir_d: f64, gamma_star: f64) -> Result<f64> {
    if !(gamma_d.is_finite() && gamma_d > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma_d must be finite and > 0, got {gamma_d}"
        )));
    }
    if !(dir_d.is_finite() && (-1.0..=1.0).contains(&dir_d)) {
        return Err(Error::InvalidDesign(format!(
            "dir_d must lie in [-1, 1], got {dir_d}"
        )));
    }
    if !(gamma_star.is_finite() && gamma_star >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma_star must be finite and >= 0, got {gamma_star}"
        )));
    }
    let excess = gamma_d * dir_d - gamma_star;
    if excess <= 0.0 {
        return Err(Error::InfeasibleRectifier {
            gamma_d,
            dir_d,
            gamma_star,
            excess,
        });
    }
    Ok(excess)
}

/// Builds a perfect rectifier from design coordinates.
///
/// Fixing `(D_d, D_u, P_F, γ_d)` and imposing `t(ω_eg) = 0` determines the
/// upper rate, `γ_u = γ_d (D_d P_F − 1)/(P_F + 1)`, and through the Purcell
/// factor the free-space rate `Γ* = (γ_d + γ_u)/P_F`. Requires
/// `P_F > 1/D_d` (strictly above threshold so that `γ_u > 0`); the lossless
/// limit `P_F = ∞` gives `γ_u = γ_d D_d`, `Γ* = 0`.
pub fn rectified_device(dir_d: f64, dir_u: f64, purcell: f64, gamma_d: f64) -> Result<DeviceParams> {
    let design = DesignPoint::new(dir_d, dir_u, purcell, gamma_d)?;
    if dir_d <= 0.0 {
        return Err(Error::InvalidDesign(format!(
            "rectification needs dir_d > 0, got {dir_d}"
        )));
    }
    let gamma_u = if purcell.is_infinite() {
        gamma_d * dir_d
    } else {
        if purcell <= 1.0 / dir_d {
            return Err(Error::BelowThreshold {
                purcell,
                required: 1.0 / dir_d,
            });
        }
        gamma_d * (dir_d * purcell - 1.0) / (purcell + 1.0)
    };
    design.realize(gamma_u)
}

/// Minimum Purcell factor for which rectification is feasible, `P_F = 1/D_d`.
///
/// Errors for `dir_d ≤ 0`: a rectifier needs net forward chirality.
pub fn purcell_threshold(dir_d: f64) -> Result<f64> {
    if !(dir_d.is_finite() && 0.0 < dir_d && dir_d <= 1.0) {
        return Err(Error::InvalidDesign(format!(
            "dir_d must lie in (0, 1], got {dir_d}"
        )));
    }
    Ok(1.0 / dir_d)
}

/// Resonant rectifier efficiency `T̃ = |t̃(ω_eg)|²` of the device built by
/// [`rectified_device`]:
///
/// ```text
///   T̃ = (1 + D_u)/(1 + D_d) · (D_d P_F − 1)/(P_F + 1).
/// ```
///
/// Monotonically increasing in `P_F`, zero exactly at the threshold
/// `P_F = 1/D_d` and approaching `D_d (1 + D_u)/(1 + D_d)` (unity for
/// `D_d = D_u = 1`) in the lossless limit. Errors strictly below threshold.
pub fn rectifier_efficiency(dir_d: f64, dir_u: f64, purcell: f64) -> Result<f64> {
    if !(dir_d.is_finite() && 0.0 < dir_d && dir_d <= 1.0) {
        return Err(Error::InvalidDesign(format!(
            "dir_d must lie in (0, 1], got {dir_d}"
        )));
    }
    if !(dir_u.is_finite() && (-1.0..=1.0).contains(&dir_u)) {
        return Err(Error::InvalidDesign(format!(
            "dir_u must lie in [-1, 1], got {dir_u}"
        )));
    }
    if purcell.is_nan() || purcell <= 0.0 {
        return Err(Error::InvalidDesign(format!(
            "purcell must be > 0, got {purcell}"
        )));
    }
    let loss_factor = if purcell.is_infinite() {
        dir_d
    } else {
        if purcell < 1.0 / dir_d {
            return Err(Error::BelowThreshold {
                purcell,
                required: 1.0 / dir_d,
            });
        }
        // At the threshold the numerator is zero only up to rounding; clamp
        // so the efficiency is a probability even there.
        ((dir_d * purcell - 1.0) / (purcell + 1.0)).max(0.0)
    };
    Ok((1.0 + dir_u) / (1.0 + dir_d) * loss_factor)
}

/// Reflection and backward transmission of the rectifier operated as a diode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiodeReport {
    /// Resonant forward reflection `R = (1 − D_d)/(1 + D_d)`.
    pub reflection: f64,
    /// Resonant right-to-left transmission `T_{r→l} = (1 − R)²`.
    pub transmission_rl: f64,
}

/// Resonant reflection of a perfect rectifier, `R = (1 − D_d)/(1 + D_d)`.
///
/// On the rectification manifold the reflection depends on the lower
/// directionality alone — not on how `γ_dL + γ_uR + γ_uL + Γ*` is split.
/// Requires `dir_d ∈ (0, 1]`.
pub fn diode_reflection(dir_d: f64) -> Result<f64> {
    if !(dir_d.is_finite() && 0.0 < dir_d && dir_d <= 1.0) {
        return Err(Error::InvalidDesign(format!(
            "dir_d must lie in (0, 1], got {dir_d}"
        )));
    }
    Ok((1.0 - dir_d) / (1.0 + dir_d))
}

/// Diode figures of merit for a perfect rectifier with directionality
/// `dir_d`: forward reflection `R` and backward transmission `(1 − R)²`.
pub fn diode_report(dir_d: f64) -> Result<DiodeReport> {
    let reflection = diode_reflection(dir_d)?;
    Ok(DiodeReport {
        reflection,
        transmission_rl: (1.0 - reflection) * (1.0 - reflection),
    })
}

/// Convenience: a textbook two-level mirror (`γ_dR = γ_dL`, no upper
/// waveguide, no loss) used in several tests.
pub fn symmetric_two_level(gamma_d: f64) -> Result<DeviceParams> {
    DeviceParams::with_unit_velocity(
        CouplingSet::new(gamma_d / 2.0, gamma_d / 2.0, 0.0, 0.0)?,
        EmitterSpec::new(0.0, 0.0, 0.0)?,
    )
}

//! Error type shared by the whole crate.

use crate::params::Waveguide;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building devices or evaluating transport.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A raw parameter failed validation (negative rate, non-finite value, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Directionality is undefined because the waveguide carries no coupling.
    #[error("directionality undefined: total coupling to the {0} waveguide is zero")]
    DegenerateCoupling(Waveguide),

    /// The Purcell factor diverges because the free-space rate vanishes.
    #[error("Purcell factor undefined: free-space rate is zero")]
    ZeroFreeSpaceRate,

    /// A design point cannot be mapped back to physical rates.
    #[error("invalid design point: {0}")]
    InvalidDesign(String),

    /// Raman reduction requires non-zero drive detunings.
    #[error("adiabatic elimination undefined: drive detuning is zero")]
    ZeroDetuning,

    /// The rectification condition has no physical solution for these inputs.
    #[error(
        "rectifier infeasible: gamma_d * D_d - gamma_star = {excess} <= 0 \
         (gamma_d = {gamma_d}, dir_d = {dir_d}, gamma_star = {gamma_star})"
    )]
    InfeasibleRectifier {
        gamma_d: f64,
        dir_d: f64,
        gamma_star: f64,
        excess: f64,
    },

    /// A Purcell factor below the rectification threshold was requested.
    #[error("below rectification threshold: purcell = {purcell} < required {required}")]
    BelowThreshold { purcell: f64, required: f64 },

    /// Operations conditioned on forward chirality need `gamma_dR > 0`.
    #[error("operation requires a non-zero right-moving lower-waveguide coupling")]
    ZeroChiralCoupling,

    /// The amplitude denominator vanishes; the device is fully degenerate.
    #[error("degenerate device: zero total linewidth at resonance")]
    DegenerateDevice,

    /// Two-photon machinery needs at least one waveguide coupling.
    #[error("two-photon state undefined: all waveguide couplings are zero")]
    UncoupledEmitter,

    /// Finite integration windows must cover several correlation lengths.
    #[error("integration window too small: L*gamma/v_g = {got}, need >= {need}")]
    WindowTooSmall { got: f64, need: f64 },

    /// The discretized scattering system could not be solved.
    #[error("singular linear system in the lattice oracle")]
    SingularSystem,

    /// Lattice parameters outside the validated range for the oracle.
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
}

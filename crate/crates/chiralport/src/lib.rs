//! Photon transport through a chirally coupled Λ-type emitter bridging two
//! waveguides.
//!
//! The device modelled here is a four-port element: a three-level emitter in a
//! Λ configuration (ground `|g⟩`, metastable `|s⟩`, excited `|e⟩`) couples the
//! `|g⟩–|e⟩` transition to a *lower* waveguide and the `|s⟩–|e⟩` transition to
//! an *upper* waveguide. Each transition may couple with different strengths to
//! the right- and left-moving modes of its waveguide (chiral coupling), and the
//! emitter additionally leaks into free space at rate `Γ*`. Ports are numbered
//!
//! ```text
//!   1 ── lower waveguide, left-moving  (output to the left)
//!   2 ── lower waveguide, right-moving (output to the right)
//!   3 ── upper waveguide, right-moving
//!   4 ── upper waveguide, left-moving
//! ```
//!
//! with photons injected from port 2's input side (right-moving in the lower
//! waveguide) unless stated otherwise.
//!
//! The crate provides
//!
//! * exact single-photon scattering amplitudes `t, r, t̃, r̃` for arbitrary
//!   couplings, loss and detuning ([`scattering`]),
//! * closed-form design conditions for the single-photon rectifier, diode and
//!   transistor regimes, together with their figures of merit ([`scattering`]),
//! * the full two-photon output state of the rectifier — including the
//!   wavefunctions on every spatial region — and the derived two-photon
//!   detection probabilities `P_mn` ([`twophoton`]),
//! * an independent numerical oracle that re-derives amplitudes from a
//!   discretized scattering problem and probabilities from brute-force
//!   integration of the wavefunctions on a finite window ([`oracle`]),
//! * randomized verification sweeps used by tests and by the `check`
//!   subcommand of the companion CLI ([`verify`]).
//!
//! Throughout, rates and frequencies are measured in the same units (ħ = 1)
//! and positions in units of `v_g` over that rate scale; the group velocity is
//! carried explicitly so dimensional bookkeeping stays visible.

pub mod error;
pub mod oracle;
pub mod params;
mod quad;
pub mod scattering;
pub mod twophoton;
pub mod verify;

pub use error::{Error, Result};
pub use oracle::{LatticeModel, WindowReport};
pub use params::{CouplingSet, DesignPoint, DeviceParams, EmitterSpec, WSystemSpec, Waveguide};
pub use scattering::{Amplitudes, DiodeReport};
pub use twophoton::{PortProbabilities, TwoPhotonInput, TwoPhotonState};
pub use verify::CheckReport;

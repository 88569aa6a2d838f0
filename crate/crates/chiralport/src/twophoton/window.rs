//! Finite-window norms of the outgoing channels.
//!
//! Detection probabilities compare, channel by channel, the weight
//! `∫∫ |wavefunction|²` accumulated over the detection box
//! `[−L/2, L/2]²` centred on the emitter, against the total outgoing weight
//! of the matching lossless device. Every output component is a short sum of
//! complex plane waves on one sign quadrant, so the box clips each channel to
//! a square of side `L/2` and `|w|²` expands into pair terms
//! `c_m c̄_n e^{i(P ξ₁ + Q ξ₂)}` in region-local coordinates
//! `ξ = |x| ∈ [0, L/2]`. The integrals then reduce to the two primitives in
//! [`crate::quad`]. The seam (the light cone where the photons meet at the
//! emitter) always maps onto the local diagonal `ξ₂ = ξ₁`, splitting the
//! square into two triangles, each with its own smooth term set; bound pairs
//! decay *away* from the diagonal in the triangle they belong to, which is
//! what keeps the triangle recurrences overflow-free at windows thousands of
//! decay lengths wide.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DeviceParams;
use crate::quad::{line_sum, triangle_sum, Grid, Triangle};
use crate::twophoton::state::{
    Component, OnePhotonComponent, Region, RegionWave, Seam, Term, Term1, TwoPhotonState,
};

/// Boxes narrower than this many correlation lengths `v_g/γ` leave visible
/// transient weight near the emitter and are rejected.
pub const MIN_WINDOW_DECAY_LENGTHS: f64 = 10.0;

/// The seven outgoing two-photon channels and the region each occupies,
/// ordered by port pair: `(1,1), (2,2), (1,2), (1,3), (1,4), (2,3), (2,4)`.
pub const OUTPUT_CHANNELS: [(Component, Region); 7] = [
    (Component::PhiLL, Region::I),
    (Component::PhiRR, Region::III),
    (Component::PhiRL, Region::IV),
    (Component::PsiLR, Region::II),
    (Component::PsiLL, Region::I),
    (Component::PsiRR, Region::III),
    (Component::PsiRL, Region::IV),
];

/// Squared norms of each outgoing channel over one detection box.
///
/// Two-photon entries are `∫∫ |w|²` over the channel's clipped quadrant
/// (side `L/2`), without bosonic multiplicity; one-photon entries are
/// `∫ |φ|²` over the matching half-line segment of length `L/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelIntegrals {
    /// Box side `L`: coordinates range over `[−L/2, L/2]`.
    pub window: f64,
    /// Both photons reflected: `∫∫ |φ_LL^{(i)}|²`.
    pub phi_ll: f64,
    /// Both photons transmitted: `∫∫ |φ_RR^{(iii)}|²`.
    pub phi_rr: f64,
    /// One transmitted, one reflected: `∫∫ |φ_RL^{(iv)}|²`.
    pub phi_rl: f64,
    /// Lower reflected, upper right-moving: `∫∫ |ψ_LR^{(ii)}|²`.
    pub psi_lr: f64,
    /// Lower reflected, upper left-moving: `∫∫ |ψ_LL^{(i)}|²`.
    pub psi_ll: f64,
    /// Lower transmitted, upper right-moving: `∫∫ |ψ_RR^{(iii)}|²`.
    pub psi_rr: f64,
    /// Lower transmitted, upper left-moving: `∫∫ |ψ_RL^{(iv)}|²`.
    pub psi_rl: f64,
    /// Emitter still excited, photon past it: `∫ |φ_R^>|²`.
    pub one_r_out: f64,
    /// Emitter still excited, photon reflected: `∫ |φ_L^<|²`.
    pub one_l_out: f64,
}

impl ChannelIntegrals {
    /// Two-photon part of the outgoing norm. Identical-direction lower-pair
    /// channels count twice (both orderings of the pair land in the same
    /// quadrant); the mixed channels already enumerate distinguishable
    /// coordinates.
    pub fn two_photon_norm(&self) -> f64 {
        2.0 * self.phi_ll
            + 2.0 * self.phi_rr
            + self.phi_rl
            + self.psi_lr
            + self.psi_ll
            + self.psi_rr
            + self.psi_rl
    }

    /// Full outgoing norm over the box, including the one-photon components
    /// whose partner excitation is still on the emitter.
    pub fn norm(&self) -> f64 {
        self.two_photon_norm() + self.one_r_out + self.one_l_out
    }

    /// Fraction of the outgoing norm carried by the one-photon components —
    /// a pure finite-window transient, decaying like `1/L`.
    pub fn one_photon_share(&self) -> f64 {
        (self.one_r_out + self.one_l_out) / self.norm()
    }
}

/// Step giving ~100 samples per correlation length; comfortable for every
/// tolerance used in this crate.
pub fn default_step(params: &DeviceParams) -> f64 {
    0.01 * params.v_g / params.gamma_waveguides()
}

/// Integrates every outgoing channel over the box `[−L/2, L/2]²` with
/// `L = window`.
///
/// `max_step` bounds the trapezoid spacing (in the same length units).
/// Errors with [`Error::WindowTooSmall`] when the box covers fewer than
/// [`MIN_WINDOW_DECAY_LENGTHS`] correlation lengths.
pub fn channel_integrals(
    state: &TwoPhotonState,
    window: f64,
    max_step: f64,
) -> Result<ChannelIntegrals> {
    let p = state.params();
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window must be finite and > 0, got {window}"
        )));
    }
    let lengths = window * p.gamma_waveguides() / p.v_g;
    if lengths < MIN_WINDOW_DECAY_LENGTHS {
        return Err(Error::WindowTooSmall {
            got: lengths,
            need: MIN_WINDOW_DECAY_LENGTHS,
        });
    }
    if !(max_step.is_finite() && max_step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "max_step must be finite and > 0, got {max_step}"
        )));
    }
    let grid = Grid::new(window / 2.0, max_step);

    let mut values = [0.0_f64; 7];
    for (slot, (component, region)) in OUTPUT_CHANNELS.iter().enumerate() {
        let rw = state
            .region_wave(*component, *region)
            .expect("all output channels are populated");
        values[slot] = region_norm(rw, &grid);
    }

    Ok(ChannelIntegrals {
        window,
        phi_ll: values[0],
        phi_rr: values[1],
        phi_rl: values[2],
        psi_lr: values[3],
        psi_ll: values[4],
        psi_rr: values[5],
        psi_rl: values[6],
        one_r_out: line_norm(state.one_photon_terms(OnePhotonComponent::ROutgoing), 1.0, &grid),
        one_l_out: line_norm(state.one_photon_terms(OnePhotonComponent::LOutgoing), -1.0, &grid),
    })
}

/// `∫∫ |w|²` over the region's clipped square.
///
/// Local coordinates `ξᵢ = σᵢ xᵢ` send the region to `[0, L/2]²` and its seam
/// to the diagonal: the seam coordinate becomes `σ₂ (ξ₂ − ξ₁)` for both seam
/// kinds on the quadrants where they occur, so the `plus` branch covers the
/// upper triangle exactly when `σ₂ > 0`.
fn region_norm(rw: &RegionWave, grid: &Grid) -> f64 {
    let (s1, s2) = rw.region.signs();
    let (upper, lower): (&[Term], &[Term]) = match rw.seam {
        Seam::None => (&rw.plus, &rw.plus),
        Seam::Diff => {
            assert_eq!(s1, s2, "difference seam crosses only diagonal quadrants");
            if s2 > 0.0 {
                (&rw.plus, &rw.minus)
            } else {
                (&rw.minus, &rw.plus)
            }
        }
        Seam::Sum => {
            assert!(s1 != s2, "sum seam crosses only anti-diagonal quadrants");
            if s2 > 0.0 {
                (&rw.plus, &rw.minus)
            } else {
                (&rw.minus, &rw.plus)
            }
        }
    };
    let total = pair_sum(upper, s1, s2, grid, Triangle::Upper)
        + pair_sum(lower, s1, s2, grid, Triangle::Lower);
    total.re
}

/// Σ_{m,n} c_m c̄_n ∬_tri e^{i(P ξ₁ + Q ξ₂)} with `P = σ₁(p_m − p̄_n)`,
/// `Q = σ₂(q_m − q̄_n)`.
fn pair_sum(terms: &[Term], s1: f64, s2: f64, grid: &Grid, tri: Triangle) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in terms {
        for n in terms {
            let coeff = m.c * n.c.conj();
            if coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            let p = s1 * (m.p - n.p.conj());
            let q = s2 * (m.q - n.q.conj());
            acc += coeff * triangle_sum(p, q, grid, tri);
        }
    }
    acc
}

/// `∫ |φ|²` over a half-line segment of length `L/2`, with `x = sign · ξ`.
fn line_norm(terms: &[Term1], sign: f64, grid: &Grid) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in terms {
        for n in terms {
            acc += m.c * n.c.conj() * line_sum(sign * (m.p - n.p.conj()), grid);
        }
    }
    acc.re
}

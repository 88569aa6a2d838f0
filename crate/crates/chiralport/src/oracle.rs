//! Independent numerical verification of the closed forms.
//!
//! Two oracles live here, and neither touches the analytic expressions it is
//! meant to test:
//!
//! * [`oracle_amplitudes`] solves the one-excitation scattering problem on a
//!   discretized waveguide. The transport equations are integrated over the
//!   central lattice cell with the plane-wave ansatz left as five unknowns
//!   `(t, r, t̃, r̃, α)`, producing a 5×5 complex linear system that is then
//!   solved by Gaussian elimination. Nothing about the closed-form amplitude
//!   formulas enters the assembly; agreement is a genuine check.
//! * [`oracle_pmn`] forms detection probabilities by numerically integrating
//!   the squared two-photon wavefunctions over a finite box and dividing by
//!   the lossless outgoing norm — the defining ratio — rather than using the
//!   closed-form probability table. (The wavefunctions themselves come from
//!   [`crate::twophoton::build_state`]; their correctness is established
//!   separately by residual and boundary checks, and the single-photon
//!   coefficients they carry are covered by the first oracle.)

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DeviceParams;
use crate::scattering::Amplitudes;
use crate::twophoton::{build_state, channel_integrals, default_step, PortProbabilities, TwoPhotonInput};

/// Discretized waveguide pair used by the one-excitation oracle.
///
/// Each waveguide direction is represented by `sites` lattice points of
/// spacing `spacing`; the emitter couples to the central cell, where the
/// delta coupling is regularized with the midpoint convention
/// `φ(0) → (φ(0⁻) + φ(0⁺))/2`. Transport is first-order (exactly linear
/// dispersion), so plane waves solve the bulk exactly and all discretization
/// error concentrates in the central-cell matching, shrinking like the cube
/// of the phase advance per half cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeModel {
    /// Lattice points per waveguide direction.
    pub sites: usize,
    /// Lattice spacing, in the same length units as `v_g/γ`.
    pub spacing: f64,
}

/// Largest spacing, in correlation lengths `v_g/γ`, accepted by the oracle.
pub const MAX_SPACING_DECAY_LENGTHS: f64 = 0.01;

/// Fewest lattice sites accepted per waveguide direction.
pub const MIN_SITES: usize = 1000;

/// Smallest box, in correlation lengths, accepted by [`oracle_pmn`].
pub const MIN_ORACLE_WINDOW_DECAY_LENGTHS: f64 = 100.0;

impl LatticeModel {
    /// Validates the device-independent constraints (`sites`, positivity).
    pub fn new(sites: usize, spacing: f64) -> Result<Self> {
        if sites < MIN_SITES {
            return Err(Error::InvalidLattice(format!(
                "need at least {MIN_SITES} sites per direction, got {sites}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "spacing must be finite and > 0, got {spacing}"
            )));
        }
        Ok(LatticeModel { sites, spacing })
    }

    /// The reference lattice for a device: spacing `1e−3 · v_g/γ`,
    /// 2000 sites.
    pub fn standard(p: &DeviceParams) -> Result<Self> {
        Self::with_spacing_lengths(p, 1e-3)
    }

    /// Lattice whose spacing is `fraction` correlation lengths of `p`.
    pub fn with_spacing_lengths(p: &DeviceParams, fraction: f64) -> Result<Self> {
        let gamma = p.gamma_waveguides();
        if gamma <= 0.0 {
            return Err(Error::UncoupledEmitter);
        }
        Self::new(2000, fraction * p.v_g / gamma)
    }

    /// Half the lattice with double the spacing — same physical length,
    /// coarser sampling. Used by refinement ladders (in reverse).
    pub fn refined(&self) -> Self {
        LatticeModel {
            sites: self.sites * 2,
            spacing: self.spacing / 2.0,
        }
    }

    /// Checks the device-dependent validity bound `a·γ/v_g ≤ 0.01`.
    pub fn validate_for(&self, p: &DeviceParams) -> Result<()> {
        let lengths = self.spacing * p.gamma_waveguides() / p.v_g;
        if lengths > MAX_SPACING_DECAY_LENGTHS {
            return Err(Error::InvalidLattice(format!(
                "spacing is {lengths} correlation lengths, limit is {MAX_SPACING_DECAY_LENGTHS}"
            )));
        }
        Ok(())
    }
}

/// Solves `m · x = rhs` by Gaussian elimination with partial pivoting.
fn solve5(mut m: [[Complex64; 5]; 5], mut rhs: [Complex64; 5]) -> Result<[Complex64; 5]> {
    let zero = Complex64::new(0.0, 0.0);
    for col in 0..5 {
        let mut pivot = col;
        for row in (col + 1)..5 {
            if m[row][col].norm_sqr() > m[pivot][col].norm_sqr() {
                pivot = row;
            }
        }
        if m[pivot][col].norm_sqr() == 0.0 {
            return Err(Error::SingularSystem);
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].inv();
        for row in (col + 1)..5 {
            let factor = m[row][col] * inv;
            if factor == zero {
                continue;
            }
            for k in col..5 {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            let sub = factor * rhs[col];
            rhs[row] -= sub;
        }
    }
    let mut x = [zero; 5];
    for row in (0..5).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..5 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// One-excitation scattering amplitudes from the discretized model.
///
/// The four transport equations are integrated over the central cell
/// `[−a/2, a/2]` by the trapezoid rule applied to each half cell, with
/// one-sided limits at the emitter site and the midpoint convention for the
/// delta coupling; the emitter equation closes the system. With the phase
/// advance per half cell `θ = ωa/(2v_g)` (and `θᵤ = (ω+ω_g)a/(2v_g)` in the
/// upper waveguide) the unknowns `(t, r, t̃, r̃, α)` satisfy
///
/// ```text
///   [i v_g e^{iθ} + (ωa/4)(1+e^{iθ})] t − V_R α = i v_g e^{−iθ} − (ωa/4)(1+e^{−iθ})
///   [i v_g e^{iθ} + (ωa/4)(1+e^{iθ})] r − V_L α = 0
///   [i v_g e^{iθᵤ} + ((ω+ω_g)a/4)(1+e^{iθᵤ})] t̃ − W_R α = 0
///   [i v_g e^{iθᵤ} + ((ω+ω_g)a/4)(1+e^{iθᵤ})] r̃ − W_L α = 0
///   (ω − ω_eg + iΓ*/2) α − (V_R t + V_L r + W_R t̃ + W_L r̃)/2 = V_R/2
/// ```
///
/// The half-cell symmetry cancels the second-order quadrature error, so the
/// residual amplitude error scales as `θ³` — an eightfold drop per halving
/// of the spacing.
pub fn oracle_amplitudes(p: &DeviceParams, omega: f64, model: &LatticeModel) -> Result<Amplitudes> {
    model.validate_for(p)?;
    let vg = p.v_g;
    let a = model.spacing;
    let omega_u = omega + p.emitter.omega_g;
    let theta = omega * a / (2.0 * vg);
    let theta_u = omega_u * a / (2.0 * vg);
    let e_p = Complex64::from_polar(1.0, theta);
    let e_m = Complex64::from_polar(1.0, -theta);
    let e_pu = Complex64::from_polar(1.0, theta_u);
    let i_vg = Complex64::new(0.0, vg);

    let lower = i_vg * e_p + (omega * a / 4.0) * (1.0 + e_p);
    let upper = i_vg * e_pu + (omega_u * a / 4.0) * (1.0 + e_pu);
    let (v_r, v_l, w_r, w_l) = (p.v_r(), p.v_l(), p.w_r(), p.w_l());
    let zero = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);

    let m = [
        [lower, zero, zero, zero, re(-v_r)],
        [zero, lower, zero, zero, re(-v_l)],
        [zero, zero, upper, zero, re(-w_r)],
        [zero, zero, zero, upper, re(-w_l)],
        [
            re(-v_r / 2.0),
            re(-v_l / 2.0),
            re(-w_r / 2.0),
            re(-w_l / 2.0),
            Complex64::new(omega - p.emitter.omega_eg, p.emitter.gamma_star / 2.0),
        ],
    ];
    let rhs = [
        i_vg * e_m - (omega * a / 4.0) * (1.0 + e_m),
        zero,
        zero,
        zero,
        re(v_r / 2.0),
    ];
    let x = solve5(m, rhs)?;
    Ok(Amplitudes {
        omega,
        t: x[0],
        r: x[1],
        t_tilde: x[2],
        r_tilde: x[3],
    })
}

/// Finite-box detection report: probabilities plus transient diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowReport {
    /// Box side `L` (coordinates in `[−L/2, L/2]`).
    pub window: f64,
    /// Finite-box estimates of the seven two-photon probabilities.
    pub probabilities: PortProbabilities,
    /// One-excitation weight `P(φ_R^>)`; vanishes like `1/L`.
    pub one_photon_r: f64,
    /// One-excitation weight `P(φ_L^<)`; vanishes like `1/L`.
    pub one_photon_l: f64,
    /// Outgoing norm of the (possibly lossy) state over the box.
    pub outgoing_norm: f64,
    /// Outgoing norm of the lossless twin — the probability denominator.
    pub reference_norm: f64,
}

/// Integrates the output channels of the exact two-photon state over the box
/// `[−L/2, L/2]²` and forms probability estimates channel by channel:
///
/// ```text
///   P_mn ≈ (bosonic weight) · ∫∫ |channel|²  /  (lossless outgoing norm)
/// ```
///
/// with weight 2 for the identical-direction lower-waveguide pairs (both
/// orderings fold into the same quadrant) and 1 otherwise. The denominator is
/// the same integral set evaluated on the device with `Γ* = 0`, which is what
/// makes lossy probabilities add up to less than one instead of being
/// silently renormalized.
pub fn window_report(
    p: &DeviceParams,
    input: TwoPhotonInput,
    window: f64,
    max_step: f64,
) -> Result<WindowReport> {
    let state = build_state(p, input)?;
    let ints = channel_integrals(&state, window, max_step)?;
    let reference = if p.emitter.gamma_star == 0.0 {
        ints
    } else {
        let lossless = p.lossless_twin();
        let state0 = build_state(&lossless, input)?;
        channel_integrals(&state0, window, max_step)?
    };
    let denom = reference.norm();
    Ok(WindowReport {
        window,
        probabilities: PortProbabilities {
            p11: 2.0 * ints.phi_ll / denom,
            p22: 2.0 * ints.phi_rr / denom,
            p12: ints.phi_rl / denom,
            p13: ints.psi_lr / denom,
            p14: ints.psi_ll / denom,
            p23: ints.psi_rr / denom,
            p24: ints.psi_rl / denom,
        },
        one_photon_r: ints.one_r_out / denom,
        one_photon_l: ints.one_l_out / denom,
        outgoing_norm: ints.norm(),
        reference_norm: denom,
    })
}

/// Finite-box probability estimates at the standard step, for boxes of at
/// least [`MIN_ORACLE_WINDOW_DECAY_LENGTHS`] correlation lengths.
pub fn oracle_pmn(p: &DeviceParams, input: TwoPhotonInput, window: f64) -> Result<PortProbabilities> {
    let lengths = window * p.gamma_waveguides() / p.v_g;
    if lengths < MIN_ORACLE_WINDOW_DECAY_LENGTHS {
        return Err(Error::WindowTooSmall {
            got: lengths,
            need: MIN_ORACLE_WINDOW_DECAY_LENGTHS,
        });
    }
    Ok(window_report(p, input, window, default_step(p))?.probabilities)
}

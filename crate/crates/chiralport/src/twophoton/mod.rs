//! Two-photon transport: exact eigenstates and port-resolved detection
//! probabilities.
//!
//! A photon pair entering port 2's input side (both photons right-moving in
//! the lower waveguide) leaves through seven possible port pairs. This module
//! builds the exact two-photon eigenstate ([`state`]), integrates its outgoing
//! channels over finite detection boxes ([`window`]), and provides the
//! infinite-window closed forms for the detection probabilities `P_mn`
//! together with the resonant transistor operating point.

pub mod state;
pub mod window;

pub use state::{build_state, Component, OnePhotonComponent, Region, TwoPhotonState};
pub use window::{
    channel_integrals, default_step, ChannelIntegrals, MIN_WINDOW_DECAY_LENGTHS, OUTPUT_CHANNELS,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DeviceParams;
use crate::scattering::{amplitudes_forward, Amplitudes};

/// Wavevectors of the two photons injected at port 2's input side.
///
/// Energies follow from the linear dispersion, `ω_j = v_g k_j`; the pair is
/// unordered (a bosonic input), so every downstream quantity is symmetric
/// under `k₁ ↔ k₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonInput {
    pub k1: f64,
    pub k2: f64,
}

impl TwoPhotonInput {
    /// Validates that both wavevectors are finite.
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1.is_finite() && k2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "wavevectors must be finite, got ({k1}, {k2})"
            )));
        }
        Ok(TwoPhotonInput { k1, k2 })
    }

    /// Two photons of identical wavevector.
    pub fn degenerate(k: f64) -> Self {
        TwoPhotonInput { k1: k, k2: k }
    }

    /// Two photons exactly on the emitter resonance of `p`.
    pub fn resonant(p: &DeviceParams) -> Self {
        Self::degenerate(p.emitter.omega_eg / p.v_g)
    }

    /// Total wavevector `k = k₁ + k₂`.
    pub fn total(&self) -> f64 {
        self.k1 + self.k2
    }
}

/// Symmetric table of two-photon detection probabilities.
///
/// `p_mn` is the probability of finding one photon in port `m` and the other
/// in port `n`. Pairs involving two upper-waveguide ports (`P_33`, `P_34`,
/// `P_44`) vanish identically: transferring a photon upward flips the emitter
/// to its metastable state, and a second transfer would need a second
/// excited-state passage that the scattering eigenstate does not contain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortProbabilities {
    pub p11: f64,
    pub p12: f64,
    pub p22: f64,
    pub p13: f64,
    pub p14: f64,
    pub p23: f64,
    pub p24: f64,
}

impl PortProbabilities {
    /// The probabilities computed from two single-photon amplitude sets:
    ///
    /// ```text
    ///   P_11 = R₁R₂                    P_12 = R₁T₂ + R₂T₁
    ///   P_22 = T₁T₂                    P_13 = (T̃₁R₂ + T̃₂R₁)/2
    ///   P_14 = (R̃₁R₂ + R̃₂R₁)/2       P_23 = (T̃₂(T₁+1) + T̃₁(T₂+1))/2
    ///   P_24 = (R̃₂(T₁+1) + R̃₁(T₂+1))/2
    /// ```
    ///
    /// with `T, R, T̃, R̃` the squared moduli of `t, r, t̃, r̃` at the two
    /// input energies. The sum of all seven is exactly 1 for a lossless
    /// device and below 1 otherwise.
    pub fn from_amplitudes(a1: &Amplitudes, a2: &Amplitudes) -> Self {
        let [r1, t1, tt1, rr1] = a1.probabilities();
        let [r2, t2, tt2, rr2] = a2.probabilities();
        PortProbabilities {
            p11: r1 * r2,
            p12: r1 * t2 + r2 * t1,
            p22: t1 * t2,
            p13: (tt1 * r2 + tt2 * r1) / 2.0,
            p14: (rr1 * r2 + rr2 * r1) / 2.0,
            p23: (tt2 * (t1 + 1.0) + tt1 * (t2 + 1.0)) / 2.0,
            p24: (rr2 * (t1 + 1.0) + rr1 * (t2 + 1.0)) / 2.0,
        }
    }

    /// Symmetric lookup. Ports run from 1 to 4; the always-zero upper-pair
    /// entries return `Some(0.0)`, out-of-range ports `None`.
    pub fn get(&self, m: u8, n: u8) -> Option<f64> {
        let (lo, hi) = if m <= n { (m, n) } else { (n, m) };
        match (lo, hi) {
            (1, 1) => Some(self.p11),
            (1, 2) => Some(self.p12),
            (2, 2) => Some(self.p22),
            (1, 3) => Some(self.p13),
            (1, 4) => Some(self.p14),
            (2, 3) => Some(self.p23),
            (2, 4) => Some(self.p24),
            (3, 3) | (3, 4) | (4, 4) => Some(0.0),
            _ => None,
        }
    }

    /// The seven nonzero channels in canonical order.
    pub fn entries(&self) -> [((u8, u8), f64); 7] {
        [
            ((1, 1), self.p11),
            ((1, 2), self.p12),
            ((2, 2), self.p22),
            ((1, 3), self.p13),
            ((1, 4), self.p14),
            ((2, 3), self.p23),
            ((2, 4), self.p24),
        ]
    }

    /// Total detection probability `Σ_{m≤n} P_mn`.
    pub fn total(&self) -> f64 {
        self.p11 + self.p12 + self.p22 + self.p13 + self.p14 + self.p23 + self.p24
    }

    /// Largest absolute difference over the seven channels.
    pub fn max_abs_diff(&self, other: &PortProbabilities) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|((_, a), (_, b))| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Infinite-window detection probabilities for the photon pair `input` on the
/// device `p`, from the closed forms in [`PortProbabilities::from_amplitudes`].
pub fn detection_probabilities(p: &DeviceParams, input: TwoPhotonInput) -> Result<PortProbabilities> {
    let a1 = amplitudes_forward(p, p.v_g * input.k1)?;
    let a2 = amplitudes_forward(p, p.v_g * input.k2)?;
    Ok(PortProbabilities::from_amplitudes(&a1, &a2))
}

/// Resonant two-photon probabilities of a rectified device (`t(ω_eg) = 0`),
/// written directly in design coordinates:
///
/// ```text
///   P_23 = (1+D_u)/(1+D_d) · (D_d P_F − 1)/(P_F + 1)
///   P_24 = Q_u P_23,  P_13 = Q_d P_23,  P_14 = Q_d Q_u P_23,
///   P_11 = Q_d²,      P_12 = P_22 = 0,
/// ```
///
/// with `Q_j = (1−D_j)/(1+D_j)`. The expressions are evaluated in a form
/// that stays finite at `D_u = ±1`, and `P_F = ∞` selects the lossless limit.
/// Errors below the rectification threshold `P_F < 1/D_d`; at the threshold
/// itself the transfer channels are exactly zero and only the reflection
/// channel `P_11` survives.
pub fn transistor_probabilities(dir_d: f64, dir_u: f64, purcell: f64) -> Result<PortProbabilities> {
    if !(dir_d.is_finite() && 0.0 < dir_d && dir_d <= 1.0) {
        return Err(Error::InvalidDesign(format!(
            "transistor operation needs dir_d in (0, 1], got {dir_d}"
        )));
    }
    if !(dir_u.is_finite() && (-1.0..=1.0).contains(&dir_u)) {
        return Err(Error::InvalidDesign(format!(
            "dir_u must lie in [-1, 1], got {dir_u}"
        )));
    }
    if !(purcell > 0.0) {
        return Err(Error::InvalidDesign(format!(
            "purcell must be > 0, got {purcell}"
        )));
    }
    if purcell < 1.0 / dir_d {
        return Err(Error::BelowThreshold {
            purcell,
            required: 1.0 / dir_d,
        });
    }
    let upward = if purcell.is_infinite() {
        dir_d
    } else {
        // Clamp guards the exact-threshold point against a negative rounding
        // residue in D_d·P_F − 1.
        ((dir_d * purcell - 1.0) / (purcell + 1.0)).max(0.0)
    };
    let base = upward / (1.0 + dir_d);
    let q_d = (1.0 - dir_d) / (1.0 + dir_d);
    let p23 = (1.0 + dir_u) * base;
    let p24 = (1.0 - dir_u) * base;
    Ok(PortProbabilities {
        p11: q_d * q_d,
        p12: 0.0,
        p22: 0.0,
        p13: q_d * p23,
        p14: q_d * p24,
        p23,
        p24,
    })
}

/// Outgoing-norm ladder over detection boxes `L, 2L, 4L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormScaling {
    /// The three box sides.
    pub windows: [f64; 3],
    /// Outgoing norm at each box.
    pub norms: [f64; 3],
    /// One-photon share of the norm at each box; decays like `1/L`.
    pub one_photon_shares: [f64; 3],
    /// Norm at the requested (smallest) box.
    pub norm: f64,
    /// Least-squares slope of `ln norm` vs `ln L`; `→ 2` for large boxes.
    pub fitted_power: f64,
}

/// Integrates the outgoing norm over boxes `window`, `2·window`, `4·window`
/// and fits the growth power, which tends to 2 (the norm is dominated by the
/// plane-wave channels, `⟨ε_o|ε_o⟩ ∝ L²` up to `O(L)` one-photon and
/// bound-state corrections).
pub fn norm_scaling(
    p: &DeviceParams,
    input: TwoPhotonInput,
    window: f64,
    max_step: f64,
) -> Result<NormScaling> {
    let state = build_state(p, input)?;
    let windows = [window, 2.0 * window, 4.0 * window];
    let mut norms = [0.0_f64; 3];
    let mut shares = [0.0_f64; 3];
    for (i, &w) in windows.iter().enumerate() {
        let ints = channel_integrals(&state, w, max_step)?;
        norms[i] = ints.norm();
        shares[i] = ints.one_photon_share();
    }
    // Least-squares slope of ln(norm) against ln(window).
    let xs: Vec<f64> = windows.iter().map(|w| w.ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|n| n.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / 3.0;
    let ybar = ys.iter().sum::<f64>() / 3.0;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let den: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    Ok(NormScaling {
        windows,
        norms,
        one_photon_shares: shares,
        norm: norms[0],
        fitted_power: num / den,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{CouplingSet, DeviceParams, EmitterSpec};
    use crate::scattering::rectified_device;

    fn lossless_device() -> DeviceParams {
        DeviceParams::with_unit_velocity(
            CouplingSet::new(0.6, 0.25, 0.4, 0.1).unwrap(),
            EmitterSpec::new(0.3, 0.2, 0.0).unwrap(),
        )
        .unwrap()
    }

    fn lossy_device() -> DeviceParams {
        DeviceParams::with_unit_velocity(
            CouplingSet::new(0.6, 0.25, 0.4, 0.1).unwrap(),
            EmitterSpec::new(0.3, 0.2, 0.25).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn lossless_probabilities_close_to_one() {
        let p = lossless_device();
        for input in [
            TwoPhotonInput::new(0.3, 0.3).unwrap(),
            TwoPhotonInput::new(1.1, -0.7).unwrap(),
            TwoPhotonInput::new(-2.0, 0.05).unwrap(),
        ] {
            let probs = detection_probabilities(&p, input).unwrap();
            assert!((probs.total() - 1.0).abs() < 1e-12, "total {}", probs.total());
        }
    }

    #[test]
    fn loss_drains_total_probability() {
        let probs =
            detection_probabilities(&lossy_device(), TwoPhotonInput::new(0.4, 0.9).unwrap())
                .unwrap();
        assert!(probs.total() < 1.0 - 1e-3);
        for ((_, _), v) in probs.entries() {
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let p = lossy_device();
        let a = detection_probabilities(&p, TwoPhotonInput::new(0.7, -0.2).unwrap()).unwrap();
        let b = detection_probabilities(&p, TwoPhotonInput::new(-0.2, 0.7).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identical_direction_channels_factorize() {
        let p = lossy_device();
        let input = TwoPhotonInput::new(0.5, -0.4).unwrap();
        let probs = detection_probabilities(&p, input).unwrap();
        let a1 = amplitudes_forward(&p, input.k1).unwrap();
        let a2 = amplitudes_forward(&p, input.k2).unwrap();
        assert!((probs.p11 - a1.reflection() * a2.reflection()).abs() < 1e-15);
        assert!((probs.p22 - a1.transmission() * a2.transmission()).abs() < 1e-15);
    }

    #[test]
    fn table_lookup_is_symmetric_and_bounded() {
        let probs =
            detection_probabilities(&lossy_device(), TwoPhotonInput::new(0.1, 0.6).unwrap())
                .unwrap();
        for m in 1..=4u8 {
            for n in 1..=4u8 {
                let v = probs.get(m, n).unwrap();
                assert_eq!(probs.get(n, m).unwrap(), v);
                assert!((0.0..=1.0).contains(&v));
            }
        }
        assert_eq!(probs.get(3, 3), Some(0.0));
        assert_eq!(probs.get(3, 4), Some(0.0));
        assert_eq!(probs.get(4, 4), Some(0.0));
        assert_eq!(probs.get(0, 1), None);
        assert_eq!(probs.get(1, 5), None);
    }

    #[test]
    fn transistor_headline_point() {
        let probs = transistor_probabilities(0.9, 0.9, 20.0).unwrap();
        assert!((probs.p23 - 17.0 / 21.0).abs() < 1e-15);
        assert!((probs.p11 - (1.0_f64 / 19.0).powi(2)).abs() < 1e-15);
        assert!((probs.p13 - 17.0 / (21.0 * 19.0)).abs() < 1e-15);
        assert!((probs.p24 - 17.0 / (21.0 * 19.0)).abs() < 1e-15);
        assert!((probs.p14 - 17.0 / (21.0 * 19.0 * 19.0)).abs() < 1e-15);
        assert_eq!(probs.p12, 0.0);
        assert_eq!(probs.p22, 0.0);
    }

    #[test]
    fn transistor_matches_explicit_device() {
        for (dir_d, dir_u, purcell) in [
            (0.8, 0.35, 12.0),
            (0.9, 0.9, 20.0),
            (0.6, -0.5, 30.0),
            (1.0, 1.0, f64::INFINITY),
        ] {
            let closed = transistor_probabilities(dir_d, dir_u, purcell).unwrap();
            let device = rectified_device(dir_d, dir_u, purcell, 1.0).unwrap();
            let explicit =
                detection_probabilities(&device, TwoPhotonInput::resonant(&device)).unwrap();
            assert!(
                closed.max_abs_diff(&explicit) < 1e-12,
                "({dir_d}, {dir_u}, {purcell}): {closed:?} vs {explicit:?}"
            );
        }
    }

    #[test]
    fn transistor_lossless_limit_closes() {
        for (dir_d, dir_u) in [(1.0, 1.0), (0.9, 0.4), (0.5, -1.0), (0.3, 0.0)] {
            let probs = transistor_probabilities(dir_d, dir_u, f64::INFINITY).unwrap();
            assert!(
                (probs.total() - 1.0).abs() < 1e-12,
                "({dir_d}, {dir_u}): total {}",
                probs.total()
            );
        }
    }

    #[test]
    fn transistor_threshold_and_edges() {
        // Exact threshold: only reflection survives.
        let probs = transistor_probabilities(0.5, 0.2, 2.0).unwrap();
        assert_eq!(probs.p23, 0.0);
        assert_eq!(probs.p24, 0.0);
        assert!((probs.p11 - 1.0 / 9.0).abs() < 1e-15);
        // Below threshold: error.
        assert!(matches!(
            transistor_probabilities(0.5, 0.2, 1.9),
            Err(Error::BelowThreshold { .. })
        ));
        // Fully chiral upper waveguide: one transfer channel closes exactly.
        let probs = transistor_probabilities(0.9, 1.0, 20.0).unwrap();
        assert_eq!(probs.p24, 0.0);
        assert_eq!(probs.p14, 0.0);
        let probs = transistor_probabilities(0.9, -1.0, 20.0).unwrap();
        assert_eq!(probs.p23, 0.0);
        assert_eq!(probs.p13, 0.0);
        assert!(probs.p24 > 0.0);
        // Invalid directionalities.
        assert!(transistor_probabilities(0.0, 0.2, 10.0).is_err());
        assert!(transistor_probabilities(1.2, 0.2, 10.0).is_err());
        assert!(transistor_probabilities(0.9, -1.2, 10.0).is_err());
    }

    #[test]
    fn norm_grows_quadratically() {
        let p = lossless_device();
        let input = TwoPhotonInput::new(0.9, -0.5).unwrap();
        let scaling = norm_scaling(&p, input, 60.0, 0.02).unwrap();
        assert!(
            (1.95..=2.05).contains(&scaling.fitted_power),
            "fitted power {}",
            scaling.fitted_power
        );
        assert_eq!(scaling.norm, scaling.norms[0]);
        assert!(scaling.norms[0] < scaling.norms[1] && scaling.norms[1] < scaling.norms[2]);
        // One-photon share halves with each doubling, roughly.
        let ratio = scaling.one_photon_shares[0] / scaling.one_photon_shares[1];
        assert!((1.6..=2.4).contains(&ratio), "share ratio {ratio}");
    }

    #[test]
    fn norm_scaling_rejects_small_windows() {
        let p = lossless_device();
        assert!(matches!(
            norm_scaling(&p, TwoPhotonInput::degenerate(0.3), 5.0, 0.02),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn input_validation() {
        assert!(TwoPhotonInput::new(f64::NAN, 0.0).is_err());
        assert!(TwoPhotonInput::new(0.0, f64::INFINITY).is_err());
        let input = TwoPhotonInput::degenerate(0.25);
        assert_eq!(input.total(), 0.5);
    }
}

//! Randomized structural properties of the closed-form layer.

use chiralport::params::{from_design, CouplingSet, DesignPoint, DeviceParams, EmitterSpec, WSystemSpec, Waveguide};
use chiralport::scattering::{amplitudes_backward, amplitudes_forward, diode_reflection, rectified_device};
use chiralport::twophoton::{detection_probabilities, transistor_probabilities, TwoPhotonInput};
use proptest::prelude::*;

fn device(
    gdr: f64,
    gdl: f64,
    gur: f64,
    gul: f64,
    weg: f64,
    wg: f64,
    gs: f64,
) -> DeviceParams {
    DeviceParams::with_unit_velocity(
        CouplingSet::new(gdr, gdl, gur, gul).unwrap(),
        EmitterSpec::new(weg, wg, gs).unwrap(),
    )
    .unwrap()
}

proptest! {
    /// Without loss, single-photon flux is conserved for injection from
    /// either side of the lower waveguide.
    #[test]
    fn flux_conserved_without_loss(
        gdr in 0.02f64..1.0, gdl in 0.02f64..1.0,
        gur in 0.02f64..1.0, gul in 0.02f64..1.0,
        weg in -1.0f64..1.0, wg in 0.0f64..1.5,
        delta in -6.0f64..6.0,
    ) {
        let p = device(gdr, gdl, gur, gul, weg, wg, 0.0);
        let omega = weg + delta * p.gamma_waveguides();
        let fwd = amplitudes_forward(&p, omega).unwrap();
        let bwd = amplitudes_backward(&p, omega).unwrap();
        prop_assert!((fwd.probability_sum() - 1.0).abs() < 1e-12);
        prop_assert!((bwd.probability_sum() - 1.0).abs() < 1e-12);
    }

    /// With loss the scattered flux can only shrink, never grow.
    #[test]
    fn loss_only_removes_flux(
        gdr in 0.02f64..1.0, gdl in 0.02f64..1.0,
        gur in 0.02f64..1.0, gul in 0.02f64..1.0,
        gs in 1e-3f64..1.0,
        delta in -6.0f64..6.0,
    ) {
        let p = device(gdr, gdl, gur, gul, 0.0, 0.3, gs);
        let omega = delta * p.gamma_waveguides();
        let a = amplitudes_forward(&p, omega).unwrap();
        let sum = a.probability_sum();
        prop_assert!(sum <= 1.0 + 1e-12);
        prop_assert!(sum > 0.0);
    }

    /// The seven two-photon detection probabilities close to one without
    /// loss, and each lies in the unit interval.
    #[test]
    fn pair_table_closes_without_loss(
        gdr in 0.02f64..1.0, gdl in 0.02f64..1.0,
        gur in 0.02f64..1.0, gul in 0.02f64..1.0,
        weg in -1.0f64..1.0,
        d1 in -3.0f64..3.0, d2 in -3.0f64..3.0,
    ) {
        let p = device(gdr, gdl, gur, gul, weg, 0.4, 0.0);
        let gamma = p.gamma_waveguides();
        let input = TwoPhotonInput::new(weg + d1 * gamma, weg + d2 * gamma).unwrap();
        let table = detection_probabilities(&p, input).unwrap();
        prop_assert!((table.total() - 1.0).abs() < 1e-12);
        for ((_, _), value) in table.entries() {
            prop_assert!((-1e-15..=1.0 + 1e-12).contains(&value));
        }
    }

    /// Detection probabilities are symmetric in the two input wavevectors —
    /// bit for bit, since the closed forms only reorder commutative sums.
    #[test]
    fn pair_table_symmetric_under_swap(
        gdr in 0.02f64..1.0, gdl in 0.02f64..1.0,
        gur in 0.02f64..1.0, gul in 0.02f64..1.0,
        gs in 0.0f64..0.5,
        k1 in -2.0f64..2.0, k2 in -2.0f64..2.0,
    ) {
        let p = device(gdr, gdl, gur, gul, 0.1, 0.4, gs);
        let a = detection_probabilities(&p, TwoPhotonInput::new(k1, k2).unwrap()).unwrap();
        let b = detection_probabilities(&p, TwoPhotonInput::new(k2, k1).unwrap()).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries().iter()) {
            prop_assert_eq!(x.1, y.1);
        }
    }

    /// On the impedance-matched manifold the resonant transmission vanishes
    /// for every upper-waveguide split and every feasible Purcell factor.
    #[test]
    fn resonant_transmission_vanishes_on_manifold(
        dir_d in 0.05f64..0.999,
        dir_u in -0.999f64..0.999,
        margin in 1.05f64..20.0,
        gamma_d in 0.05f64..3.0,
    ) {
        let purcell = margin / dir_d;
        let p = rectified_device(dir_d, dir_u, purcell, gamma_d).unwrap();
        let a = amplitudes_forward(&p, p.emitter.omega_eg).unwrap();
        prop_assert!(a.t.norm() < 1e-12);
    }

    /// The diode's resonant reflection is a function of the lower
    /// directionality alone: it ignores the upper split, the Purcell factor
    /// and the overall rate scale.
    #[test]
    fn diode_reflection_tracks_lower_directionality_only(
        dir_d in 0.05f64..0.999,
        dir_u_a in -0.9f64..0.95, dir_u_b in -0.9f64..0.95,
        margin_a in 1.05f64..12.0, margin_b in 1.05f64..12.0,
        gamma_a in 0.05f64..3.0, gamma_b in 0.05f64..3.0,
    ) {
        let expected = diode_reflection(dir_d).unwrap();
        for (du, m, g) in [(dir_u_a, margin_a, gamma_a), (dir_u_b, margin_b, gamma_b)] {
            let p = rectified_device(dir_d, du, m / dir_d, g).unwrap();
            let a = amplitudes_forward(&p, p.emitter.omega_eg).unwrap();
            prop_assert!((a.r.norm_sqr() - expected).abs() < 1e-12);
        }
    }

    /// The design-space transistor table is the resonant special case of the
    /// full detection probabilities.
    #[test]
    fn transistor_table_specializes_full_detection(
        dir_d in 0.2f64..0.95,
        dir_u in -0.6f64..0.95,
        margin in 1.05f64..8.0,
    ) {
        let purcell = margin / dir_d;
        let table = transistor_probabilities(dir_d, dir_u, purcell).unwrap();
        let p = rectified_device(dir_d, dir_u, purcell, 1.0).unwrap();
        let full = detection_probabilities(&p, TwoPhotonInput::resonant(&p)).unwrap();
        prop_assert!(table.max_abs_diff(&full) < 1e-10);
    }

    /// Realizing a design point and reading the coordinates back is the
    /// identity to floating-point accuracy.
    #[test]
    fn design_coordinates_round_trip(
        dir_d in -0.99f64..0.99,
        dir_u in -0.99f64..0.99,
        purcell in 0.5f64..50.0,
        gamma_d in 0.05f64..3.0,
        gamma_u in 0.01f64..2.0,
    ) {
        let design = DesignPoint::new(dir_d, dir_u, purcell, gamma_d).unwrap();
        let p = from_design(&design, gamma_u).unwrap();
        prop_assert!((p.couplings.directionality(Waveguide::Lower).unwrap() - dir_d).abs() < 1e-12);
        prop_assert!((p.couplings.directionality(Waveguide::Upper).unwrap() - dir_u).abs() < 1e-12);
        prop_assert!((p.purcell_factor().unwrap() - purcell).abs() / purcell < 1e-12);
        prop_assert!((p.couplings.total(Waveguide::Lower) - gamma_d).abs() < 1e-12);
        prop_assert!((p.couplings.total(Waveguide::Upper) - gamma_u).abs() < 1e-12);
    }

    /// Adiabatic elimination of a driven W system rescales rates but leaves
    /// both directionalities untouched.
    #[test]
    fn raman_elimination_preserves_directionalities(
        gdr in 0.02f64..1.0, gdl in 0.02f64..1.0,
        gur in 0.02f64..1.0, gul in 0.02f64..1.0,
        drive_d in 0.01f64..0.5, drive_u in 0.01f64..0.5,
        det_d in 0.5f64..5.0, det_u in 0.5f64..5.0,
        flip_d: bool, flip_u: bool,
    ) {
        let bare = CouplingSet::new(gdr, gdl, gur, gul).unwrap();
        let spec = WSystemSpec {
            bare,
            emitter: EmitterSpec::new(0.2, 0.1, 0.3).unwrap(),
            v_g: 1.0,
            drive_d,
            drive_u,
            detuning_d: if flip_d { -det_d } else { det_d },
            detuning_u: if flip_u { -det_u } else { det_u },
        };
        let eff = spec.raman_effective().unwrap();
        for wg in [Waveguide::Lower, Waveguide::Upper] {
            let before = bare.directionality(wg).unwrap();
            let after = eff.params.couplings.directionality(wg).unwrap();
            prop_assert!((before - after).abs() < 1e-12);
        }
        let (sd, su) = (eff.ratio_d * eff.ratio_d, eff.ratio_u * eff.ratio_u);
        let expected_loss = (sd + su) * 0.3;
        prop_assert!((eff.params.emitter.gamma_star - expected_loss).abs() < 1e-12);
    }
}

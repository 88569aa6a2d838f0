//! The two-photon wavefunctions against the equations that define them:
//! free transport in the bulk, emitter matching at the seams, and the
//! finite-window route to the detection probabilities.

use chiralport::oracle::{oracle_pmn, window_report, LatticeModel, oracle_amplitudes};
use chiralport::params::{CouplingSet, DeviceParams, EmitterSpec};
use chiralport::scattering::{amplitudes_forward, rectified_device};
use chiralport::twophoton::{
    build_state, default_step, detection_probabilities, norm_scaling, Component,
    OnePhotonComponent, Region, TwoPhotonInput, TwoPhotonState,
};
use num_complex::Complex64;

fn lossless_device() -> DeviceParams {
    DeviceParams::with_unit_velocity(
        CouplingSet::new(0.6, 0.25, 0.4, 0.1).unwrap(),
        EmitterSpec::new(0.3, 0.2, 0.0).unwrap(),
    )
    .unwrap()
}

fn lossy_device() -> DeviceParams {
    DeviceParams::with_unit_velocity(
        CouplingSet::new(0.55, 0.3, 0.35, 0.15).unwrap(),
        EmitterSpec::new(-0.2, 0.45, 0.35).unwrap(),
    )
    .unwrap()
}

fn test_input(p: &DeviceParams) -> TwoPhotonInput {
    let gamma = p.gamma_waveguides();
    let k0 = p.emitter.omega_eg / p.v_g;
    TwoPhotonInput::new(k0 + 1.2 * gamma / p.v_g, k0 - 0.8 * gamma / p.v_g).unwrap()
}

/// Direction signs of a component's two coordinates and whether it lives in
/// the mixed (one photon per waveguide) sector.
fn directions(c: Component) -> (f64, f64, bool) {
    match c {
        Component::PhiRR => (1.0, 1.0, false),
        Component::PhiRL => (1.0, -1.0, false),
        Component::PhiLL => (-1.0, -1.0, false),
        Component::PsiRR => (1.0, 1.0, true),
        Component::PsiRL => (1.0, -1.0, true),
        Component::PsiLR => (-1.0, 1.0, true),
        Component::PsiLL => (-1.0, -1.0, true),
    }
}

/// Away from the seams every component obeys free transport at the total
/// energy: `(E + i v_g (η₁ ∂₁ + η₂ ∂₂)) f = 0`, with `E` shifted by `ω_g`
/// in the mixed sector. Checked by central differences on both devices; the
/// lossy device exercises the claim that loss redistributes decay between
/// the two exponents of each bound term without touching the total.
#[test]
fn bulk_transport_residuals_vanish() {
    for p in [lossless_device(), lossy_device()] {
        let input = test_input(&p);
        let state = build_state(&p, input).unwrap();
        let gamma = p.gamma_waveguides();
        let unit = p.v_g / gamma;
        let h = 5e-4 * unit;
        let omega = input.total() * p.v_g;
        let scale = omega.abs() + p.emitter.omega_g.abs() + gamma;
        // Sample points keep a wide margin from both diagonals and both axes
        // so the finite-difference stencil never straddles a seam.
        let offsets = [(0.41, 1.07), (1.23, 0.59), (0.83, 1.71)];
        for component in Component::ALL {
            let (eta1, eta2, mixed) = directions(component);
            let energy = if mixed { omega + p.emitter.omega_g } else { omega };
            for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                for (a, b) in offsets {
                    let (x1, x2) = (s1 * a * unit, s2 * b * unit);
                    let f = |u: f64, v: f64| state.eval(component, u, v);
                    let value = f(x1, x2);
                    let d1 = (f(x1 + h, x2) - f(x1 - h, x2)) / (2.0 * h);
                    let d2 = (f(x1, x2 + h) - f(x1, x2 - h)) / (2.0 * h);
                    let residual =
                        energy * value + Complex64::new(0.0, p.v_g) * (eta1 * d1 + eta2 * d2);
                    let magnitude = value
                        .norm()
                        .max(p.v_g * (d1.norm() + d2.norm()) / scale);
                    if magnitude == 0.0 {
                        continue; // unpopulated region
                    }
                    assert!(
                        residual.norm() / (scale * magnitude) < 2e-6,
                        "{} at ({x1:.3}, {x2:.3}): residual {:.3e}",
                        component.label(),
                        residual.norm() / (scale * magnitude)
                    );
                }
            }
        }
    }
}

struct SeamCase {
    name: &'static str,
    /// Sign of the coordinate running along the seam.
    side: f64,
    lhs: fn(&TwoPhotonState, f64) -> Complex64,
    coupling: fn(&DeviceParams) -> f64,
    line: OnePhotonComponent,
}

/// Crossing an axis means one photon passes the emitter; integrating the
/// transport equation across the crossing ties the jump of the wavefunction
/// to the emitter-excited one-photon line at the spectator coordinate,
/// weighted by the coupling amplitude of the channel being entered or left.
#[test]
fn seam_jumps_match_one_photon_lines() {
    use Component::*;
    use OnePhotonComponent::*;
    use Region::{I, II, III, IV};
    let cases = [
        SeamCase {
            name: "phi_rr lower edge",
            side: -1.0,
            lhs: |s, x| s.eval_region(PhiRR, II, x, 0.0) - s.eval_region(PhiRR, I, x, 0.0),
            coupling: |p| p.v_r() / 2.0,
            line: RIncoming,
        },
        SeamCase {
            name: "phi_rr left edge",
            side: 1.0,
            lhs: |s, x| s.eval_region(PhiRR, III, 0.0, x) - s.eval_region(PhiRR, II, 0.0, x),
            coupling: |p| p.v_r() / 2.0,
            line: ROutgoing,
        },
        SeamCase {
            name: "phi_ll upper edge",
            side: -1.0,
            lhs: |s, x| s.eval_region(PhiLL, I, x, 0.0),
            coupling: |p| p.v_l() / 2.0,
            line: LOutgoing,
        },
        SeamCase {
            name: "phi_rl upper edge, incoming side",
            side: -1.0,
            lhs: |s, x| s.eval_region(PhiRL, I, x, 0.0),
            coupling: |p| p.v_l(),
            line: RIncoming,
        },
        SeamCase {
            name: "phi_rl upper edge, outgoing side",
            side: 1.0,
            lhs: |s, x| s.eval_region(PhiRL, IV, x, 0.0),
            coupling: |p| p.v_l(),
            line: ROutgoing,
        },
        SeamCase {
            name: "phi_rl vertical jump",
            side: -1.0,
            lhs: |s, x| s.eval_region(PhiRL, IV, 0.0, x) - s.eval_region(PhiRL, I, 0.0, x),
            coupling: |p| p.v_r(),
            line: LOutgoing,
        },
        SeamCase {
            name: "psi_rr lower edge, incoming side",
            side: -1.0,
            lhs: |s, x| s.eval_region(PsiRR, II, x, 0.0),
            coupling: |p| p.w_r(),
            line: RIncoming,
        },
        SeamCase {
            name: "psi_rr lower edge, outgoing side",
            side: 1.0,
            lhs: |s, x| s.eval_region(PsiRR, III, x, 0.0),
            coupling: |p| p.w_r(),
            line: ROutgoing,
        },
        SeamCase {
            name: "psi_rl upper edge, incoming side",
            side: -1.0,
            lhs: |s, x| s.eval_region(PsiRL, I, x, 0.0),
            coupling: |p| p.w_l(),
            line: RIncoming,
        },
        SeamCase {
            name: "psi_rl upper edge, outgoing side",
            side: 1.0,
            lhs: |s, x| s.eval_region(PsiRL, IV, x, 0.0),
            coupling: |p| p.w_l(),
            line: ROutgoing,
        },
        SeamCase {
            name: "psi_ll upper edge",
            side: -1.0,
            lhs: |s, x| s.eval_region(PsiLL, I, x, 0.0),
            coupling: |p| p.w_l(),
            line: LOutgoing,
        },
        SeamCase {
            name: "psi_lr lower edge",
            side: -1.0,
            lhs: |s, x| s.eval_region(PsiLR, II, x, 0.0),
            coupling: |p| p.w_r(),
            line: LOutgoing,
        },
    ];
    for p in [lossless_device(), lossy_device()] {
        let input = test_input(&p);
        let state = build_state(&p, input).unwrap();
        let unit = p.v_g / p.gamma_waveguides();
        let i_vg = Complex64::new(0.0, p.v_g);
        for case in &cases {
            for step in [0.37, 0.92, 1.73] {
                let x = case.side * step * unit;
                let lhs = i_vg * (case.lhs)(&state, x);
                let rhs = (case.coupling)(&p) * state.eval_one_photon(case.line, x);
                let scale = lhs.norm().max(rhs.norm());
                assert!(scale > 0.0, "{}: trivial comparison", case.name);
                assert!(
                    (lhs - rhs).norm() / scale < 1e-10,
                    "{} at x = {x:.3}: lhs {lhs}, rhs {rhs}",
                    case.name
                );
            }
        }
    }
}

/// Where the *lower* photon crosses the emitter in the mixed sector, the
/// emitter sits in the metastable state and cannot scatter it: the mixed
/// components are continuous there, and vanish outright when the photon is
/// left-moving with nothing upstream to sustain them.
#[test]
fn mixed_sector_continuity_and_zeros() {
    for p in [lossless_device(), lossy_device()] {
        let input = test_input(&p);
        let state = build_state(&p, input).unwrap();
        let unit = p.v_g / p.gamma_waveguides();
        for step in [0.39, 1.21, 2.63] {
            let y = step * unit;
            let out = state.eval_region(Component::PsiRR, Region::III, 0.0, y);
            let inner = state.eval_region(Component::PsiRR, Region::II, 0.0, y);
            assert!((out - inner).norm() <= 1e-10 * out.norm().max(inner.norm()));

            let out = state.eval_region(Component::PsiRL, Region::IV, 0.0, -y);
            let inner = state.eval_region(Component::PsiRL, Region::I, 0.0, -y);
            assert!((out - inner).norm() <= 1e-10 * out.norm().max(inner.norm()));

            let scale = p.w_r().max(p.w_l());
            assert!(state.eval_region(Component::PsiLR, Region::II, 0.0, y).norm() < 1e-12 * scale);
            assert!(state.eval_region(Component::PsiLL, Region::I, 0.0, -y).norm() < 1e-12 * scale);
        }
    }
}

/// Finite-box estimates of the detection probabilities approach the closed
/// forms as the box grows, and the residual one-excitation weight decays.
#[test]
fn finite_window_probabilities_converge() {
    let p = lossless_device();
    let input = test_input(&p);
    let gamma = p.gamma_waveguides();
    let closed = detection_probabilities(&p, input).unwrap();
    let step = default_step(&p);
    let small = window_report(&p, input, 150.0 * p.v_g / gamma, step).unwrap();
    let large = window_report(&p, input, 450.0 * p.v_g / gamma, step).unwrap();
    let err_small = small.probabilities.max_abs_diff(&closed);
    let err_large = large.probabilities.max_abs_diff(&closed);
    assert!(
        err_large < err_small,
        "no convergence: {err_small:.3e} -> {err_large:.3e}"
    );
    assert!(err_large < 0.02, "error at the large box: {err_large:.3e}");
    assert!(large.one_photon_r < small.one_photon_r);
    assert!(large.one_photon_l < small.one_photon_l);
    assert!((large.probabilities.total() - 1.0).abs() < 0.05);
}

/// On a lossy device the finite-box probabilities (referenced to the
/// lossless twin's norm) must total strictly less than one.
#[test]
fn finite_window_detects_loss() {
    let p = lossy_device();
    let input = test_input(&p);
    let window = 300.0 * p.v_g / p.gamma_waveguides();
    let numeric = oracle_pmn(&p, input, window).unwrap();
    let closed = detection_probabilities(&p, input).unwrap();
    assert!(numeric.max_abs_diff(&closed) < 0.02);
    assert!(numeric.total() < 0.95);
    assert!((numeric.total() - closed.total()).abs() < 0.05);
}

/// The ideal rectifier at resonance: the transmitted-pair channel survives
/// only through the photon-photon bound state, and the full resonant pair is
/// routed to the upper-right port.
#[test]
fn ideal_rectifier_routes_resonant_pair() {
    let p = rectified_device(1.0, 1.0, f64::INFINITY, 1.0).unwrap();
    let input = TwoPhotonInput::resonant(&p);
    let closed = detection_probabilities(&p, input).unwrap();
    assert!((closed.p23 - 1.0).abs() < 1e-12);
    for ((m, n), value) in closed.entries() {
        if (m, n) != (2, 3) {
            assert!(value.abs() < 1e-12, "P_{m}{n} = {value}");
        }
    }

    // With t = 0 the transmitted pair's plane waves cancel exactly; what
    // remains hugs the light cone and decays at the two-photon bound rate.
    let state = build_state(&p, input).unwrap();
    let unit = p.v_g / p.gamma_waveguides();
    let near = state.eval(Component::PhiRR, 3.0 * unit, 3.2 * unit).norm();
    let far = state.eval(Component::PhiRR, 3.0 * unit, 9.0 * unit).norm();
    assert!(near > 0.0);
    let expected = (-(p.gamma_waveguides() / 2.0) * (9.0 - 3.2) * unit / p.v_g).exp();
    assert!((far / near - expected).abs() < 1e-9 * expected.max(1.0));

    // Its finite-box weight is a pure surface term, vanishing like 1/L.
    let window = 400.0 * p.v_g / p.gamma_waveguides();
    let numeric = oracle_pmn(&p, input, window).unwrap();
    assert!(numeric.p22 < 0.01);
    assert!(numeric.p23 > 0.95);
}

/// The outgoing two-photon norm grows with the square of the box side; the
/// fitted power over a doubling ladder should sit near two.
#[test]
fn outgoing_norm_scales_quadratically() {
    let p = lossless_device();
    let input = test_input(&p);
    let gamma = p.gamma_waveguides();
    let scaling = norm_scaling(&p, input, 80.0 * p.v_g / gamma, 0.02 * p.v_g / gamma).unwrap();
    assert!(
        (1.95..=2.05).contains(&scaling.fitted_power),
        "fitted power {}",
        scaling.fitted_power
    );
}

/// End to end: the lattice oracle and the finite-box integrals agree with
/// the closed forms on the same lossy device, tying the layers together.
#[test]
fn oracle_layers_agree_on_one_device() {
    let p = lossy_device();
    let omega = p.emitter.omega_eg + 0.7 * p.gamma_waveguides();
    let model = LatticeModel::standard(&p).unwrap();
    let numeric = oracle_amplitudes(&p, omega, &model).unwrap();
    let closed = amplitudes_forward(&p, omega).unwrap();
    assert!((numeric.t - closed.t).norm() < 1e-6);
    assert!((numeric.r - closed.r).norm() < 1e-6);
    assert!((numeric.t_tilde - closed.t_tilde).norm() < 1e-6);
    assert!((numeric.r_tilde - closed.r_tilde).norm() < 1e-6);
}

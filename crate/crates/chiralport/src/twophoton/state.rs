//! Exact two-photon eigenstate of the device for a right-moving photon pair
//! injected in the lower waveguide.
//!
//! The state has three sectors: a two-photon lower-waveguide sector
//! `φ_αβ(x₁, x₂)` (directions `α, β ∈ {R, L}`), a mixed sector
//! `ψ_αβ(x, y)` with one photon in each waveguide (`x` the lower photon, `y`
//! the upper one), and one-photon amplitudes `φ_α(x)` describing the
//! component where the second excitation still sits on the emitter. Each
//! component is supported on sign quadrants ("regions") of the plane,
//!
//! ```text
//!   (i) both < 0   (ii) first < 0 < second   (iii) both > 0   (iv) second < 0 < first
//! ```
//!
//! and inside a region is a finite sum of complex plane waves
//! `c · e^{i p x₁} e^{i q x₂}`, possibly switching term sets across a *seam* —
//! the light cone `x₂ = x₁` or `x₁ + x₂ = 0` where the two photons coincide
//! at the emitter. Bound-state terms (the saturable-absorber correlation)
//! decay away from the seam at rate `(γ + Γ*)/2` per unit `v_g⁻¹`; their
//! decay is encoded in the imaginary parts of `p` and `q`, with free-space
//! loss entering through the complex transition wavevector
//! `κ_eg = (ω_eg − iΓ*/2)/v_g`.
//!
//! Which regions are populated follows from causality: nothing reaches an
//! outgoing channel before touching the emitter. In particular the
//! right-left component `φ_RL` lives on regions (i) (transient, the reflected
//! partner still inbound) and (iv) (both photons outbound); regions (ii) and
//! (iii) are empty, as the residual and boundary checks in the test suite
//! confirm.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DeviceParams;
use crate::scattering::{amplitudes_forward, Amplitudes};
use crate::twophoton::TwoPhotonInput;

/// Sign quadrant of the two-coordinate plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Both coordinates negative.
    I,
    /// First negative, second positive.
    II,
    /// Both positive.
    III,
    /// First positive, second negative.
    IV,
}

impl Region {
    /// Region containing `(x1, x2)`; points on an axis are attached to the
    /// non-negative side.
    pub fn of(x1: f64, x2: f64) -> Self {
        match (x1 >= 0.0, x2 >= 0.0) {
            (false, false) => Region::I,
            (false, true) => Region::II,
            (true, true) => Region::III,
            (true, false) => Region::IV,
        }
    }

    /// Short lower-case label used in data dumps.
    pub fn label(&self) -> &'static str {
        match self {
            Region::I => "i",
            Region::II => "ii",
            Region::III => "iii",
            Region::IV => "iv",
        }
    }

    /// Signs `(σ₁, σ₂)` of the two coordinates inside the region.
    pub(crate) fn signs(&self) -> (f64, f64) {
        match self {
            Region::I => (-1.0, -1.0),
            Region::II => (-1.0, 1.0),
            Region::III => (1.0, 1.0),
            Region::IV => (1.0, -1.0),
        }
    }
}

/// Two-photon components of the eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    /// Both photons in the lower waveguide, both right-moving.
    PhiRR,
    /// Lower waveguide: first coordinate right-moving, second left-moving.
    PhiRL,
    /// Both photons in the lower waveguide, both left-moving.
    PhiLL,
    /// Lower photon right-moving, upper photon right-moving.
    PsiRR,
    /// Lower photon right-moving, upper photon left-moving.
    PsiRL,
    /// Lower photon left-moving, upper photon right-moving.
    PsiLR,
    /// Lower photon left-moving, upper photon left-moving.
    PsiLL,
}

impl Component {
    /// Label used in data dumps.
    pub fn label(&self) -> &'static str {
        match self {
            Component::PhiRR => "phi_rr",
            Component::PhiRL => "phi_rl",
            Component::PhiLL => "phi_ll",
            Component::PsiRR => "psi_rr",
            Component::PsiRL => "psi_rl",
            Component::PsiLR => "psi_lr",
            Component::PsiLL => "psi_ll",
        }
    }

    /// All two-photon components.
    pub const ALL: [Component; 7] = [
        Component::PhiRR,
        Component::PhiRL,
        Component::PhiLL,
        Component::PsiRR,
        Component::PsiRL,
        Component::PsiLR,
        Component::PsiLL,
    ];
}

/// One-photon components (the other excitation rides on the emitter).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OnePhotonComponent {
    /// `φ_R^<`: right-mover still left of the emitter (transient).
    RIncoming,
    /// `φ_R^>`: right-mover past the emitter (output).
    ROutgoing,
    /// `φ_L^<`: reflected left-mover (output).
    LOutgoing,
}

impl OnePhotonComponent {
    /// Label used in data dumps.
    pub fn label(&self) -> &'static str {
        match self {
            OnePhotonComponent::RIncoming => "varphi_r_in",
            OnePhotonComponent::ROutgoing => "varphi_r_out",
            OnePhotonComponent::LOutgoing => "varphi_l_out",
        }
    }

    /// All one-photon components.
    pub const ALL: [OnePhotonComponent; 3] = [
        OnePhotonComponent::RIncoming,
        OnePhotonComponent::ROutgoing,
        OnePhotonComponent::LOutgoing,
    ];
}

/// One complex plane wave `c · e^{i p x₁} e^{i q x₂}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    pub c: Complex64,
    pub p: Complex64,
    pub q: Complex64,
}

/// How a region's term set switches across the light-cone seam.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Seam {
    /// Single term set over the whole region.
    None,
    /// Branch by the sign of `x₂ − x₁`.
    Diff,
    /// Branch by the sign of `x₁ + x₂`.
    Sum,
}

/// Closed form of one component on one region.
#[derive(Debug, Clone)]
pub(crate) struct RegionWave {
    pub component: Component,
    pub region: Region,
    pub seam: Seam,
    /// Terms where the seam coordinate is positive (the whole region for
    /// [`Seam::None`]).
    pub plus: Vec<Term>,
    /// Terms where the seam coordinate is negative (unused for
    /// [`Seam::None`]).
    pub minus: Vec<Term>,
}

impl RegionWave {
    /// Evaluates the regional closed form at `(x1, x2)` — also meaningful
    /// slightly outside the region when taking one-sided limits.
    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        let branch = match self.seam {
            Seam::None => &self.plus,
            Seam::Diff => {
                if x2 - x1 >= 0.0 {
                    &self.plus
                } else {
                    &self.minus
                }
            }
            Seam::Sum => {
                if x1 + x2 >= 0.0 {
                    &self.plus
                } else {
                    &self.minus
                }
            }
        };
        branch
            .iter()
            .map(|t| t.c * (Complex64::i() * (t.p * x1 + t.q * x2)).exp())
            .sum()
    }
}

/// One-photon plane-wave term `c · e^{i p x}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term1 {
    pub c: Complex64,
    pub p: Complex64,
}

/// The full two-photon eigenstate for a given device and photon pair,
/// normalised to a unit-amplitude symmetrised plane-wave input.
#[derive(Debug, Clone)]
pub struct TwoPhotonState {
    params: DeviceParams,
    input: TwoPhotonInput,
    amp1: Amplitudes,
    amp2: Amplitudes,
    pub(crate) regions: Vec<RegionWave>,
    pub(crate) one_photon: Vec<(OnePhotonComponent, Vec<Term1>)>,
}

/// Builds the eigenstate. Requires at least one non-zero waveguide coupling;
/// free-space loss, detunings and the metastable offset `ω_g` are arbitrary.
pub fn build_state(params: &DeviceParams, input: TwoPhotonInput) -> Result<TwoPhotonState> {
    if params.gamma_waveguides() == 0.0 {
        return Err(Error::UncoupledEmitter);
    }
    let p = *params;
    let vg = p.v_g;
    let (k1, k2) = (input.k1, input.k2);
    let k = k1 + k2;
    let amp1 = amplitudes_forward(&p, vg * k1)?;
    let amp2 = amplitudes_forward(&p, vg * k2)?;
    let (t1, t2) = (amp1.t, amp2.t);
    let (r1, r2) = (amp1.r, amp2.r);
    let (tt1, tt2) = (amp1.t_tilde, amp2.t_tilde);
    let (rr1, rr2) = (amp1.r_tilde, amp2.r_tilde);

    // Complex transition wavevector: free-space loss shifts ω_eg into the
    // lower half plane wherever it appears in an exponent.
    let kappa = Complex64::new(p.emitter.omega_eg, -p.emitter.gamma_star / 2.0) / vg;
    // Waveguide-sum decay per unit length (the explicit bound-state factor).
    let ig2 = Complex64::new(0.0, p.gamma_waveguides() / (2.0 * vg));
    // Metastable offset as a wavevector; upper-waveguide phases only.
    let kg = p.emitter.omega_g / vg;
    // Shared single-photon denominators den_j = ω_j − ω_eg + i(Γ* + γ)/2.
    let half_width = (p.emitter.gamma_star + p.gamma_waveguides()) / 2.0;
    let den1 = Complex64::new(vg * k1 - p.emitter.omega_eg, half_width);
    let den2 = Complex64::new(vg * k2 - p.emitter.omega_eg, half_width);

    let c = Complex64::new;
    let re = |x: f64| Complex64::new(x, 0.0);
    let term = |coeff: Complex64, p: Complex64, q: Complex64| Term { c: coeff, p, q };
    // Frequently recurring coefficients; (t_j − 1) = −i γ_dR / den_j.
    let tm11 = t1 - 1.0;
    let tm12 = t2 - 1.0;

    let mut regions = Vec::new();

    // ---- lower-lower sector φ ------------------------------------------
    // Input pair.
    regions.push(RegionWave {
        component: Component::PhiRR,
        region: Region::I,
        seam: Seam::None,
        plus: vec![term(re(1.0), re(k1), re(k2)), term(re(1.0), re(k2), re(k1))],
        minus: vec![],
    });
    // Transient: trailing photon not yet scattered.
    regions.push(RegionWave {
        component: Component::PhiRR,
        region: Region::II,
        seam: Seam::None,
        plus: vec![term(t2, re(k1), re(k2)), term(t1, re(k2), re(k1))],
        minus: vec![],
    });
    // Bosonic mirror of region (ii).
    regions.push(RegionWave {
        component: Component::PhiRR,
        region: Region::IV,
        seam: Seam::None,
        plus: vec![term(t1, re(k1), re(k2)), term(t2, re(k2), re(k1))],
        minus: vec![],
    });
    // Both photons transmitted, plus the bound state trailing the seam.
    regions.push(RegionWave {
        component: Component::PhiRR,
        region: Region::III,
        seam: Seam::Diff,
        plus: vec![
            term(t1 * t2, re(k1), re(k2)),
            term(t1 * t2, re(k2), re(k1)),
            term(-2.0 * tm11 * tm12, kappa - ig2, re(k) - kappa + ig2),
        ],
        minus: vec![
            term(t1 * t2, re(k1), re(k2)),
            term(t1 * t2, re(k2), re(k1)),
            term(-2.0 * tm11 * tm12, re(k) - kappa + ig2, kappa - ig2),
        ],
    });

    // One transmitted, one reflected. Transient part: the reflected partner
    // is still inbound.
    regions.push(RegionWave {
        component: Component::PhiRL,
        region: Region::I,
        seam: Seam::None,
        plus: vec![
            term(2.0 * r2, re(k1), re(-k2)),
            term(2.0 * r1, re(k2), re(-k1)),
        ],
        minus: vec![],
    });
    regions.push(RegionWave {
        component: Component::PhiRL,
        region: Region::IV,
        seam: Seam::Sum,
        plus: vec![
            term(2.0 * r2 * t1, re(k1), re(-k2)),
            term(2.0 * r1 * t2, re(k2), re(-k1)),
            term(-4.0 * r1 * tm12, re(k) - kappa + ig2, -kappa + ig2),
        ],
        minus: vec![
            term(2.0 * r2 * t1, re(k1), re(-k2)),
            term(2.0 * r1 * t2, re(k2), re(-k1)),
            term(-4.0 * r1 * tm12, kappa - ig2, re(-k) + kappa - ig2),
        ],
    });

    // Both reflected.
    regions.push(RegionWave {
        component: Component::PhiLL,
        region: Region::I,
        seam: Seam::Diff,
        plus: vec![
            term(r1 * r2, re(-k1), re(-k2)),
            term(r1 * r2, re(-k2), re(-k1)),
            term(-2.0 * r1 * r2, re(-k) + kappa - ig2, -kappa + ig2),
        ],
        minus: vec![
            term(r1 * r2, re(-k1), re(-k2)),
            term(r1 * r2, re(-k2), re(-k1)),
            term(-2.0 * r1 * r2, -kappa + ig2, re(-k) + kappa - ig2),
        ],
    });

    // ---- mixed sector ψ (x: lower photon, y: upper photon) -------------
    // Transient: lower photon inbound, upper photon already emitted.
    regions.push(RegionWave {
        component: Component::PsiRR,
        region: Region::II,
        seam: Seam::None,
        plus: vec![
            term(2.0 * tt2, re(k1), re(k2 + kg)),
            term(2.0 * tt1, re(k2), re(k1 + kg)),
        ],
        minus: vec![],
    });
    // Output: ahead of the seam the transient set continues; behind it the
    // lower photon has overtaken and carries its transmission factor.
    regions.push(RegionWave {
        component: Component::PsiRR,
        region: Region::III,
        seam: Seam::Diff,
        plus: vec![
            term(2.0 * tt2, re(k1), re(k2 + kg)),
            term(2.0 * tt1, re(k2), re(k1 + kg)),
        ],
        minus: vec![
            term(2.0 * tt2 * t1, re(k1), re(k2 + kg)),
            term(2.0 * tt1 * t2, re(k2), re(k1 + kg)),
            term(
                -4.0 * tt1 * tm12,
                re(k) - kappa + ig2,
                kappa + kg - ig2,
            ),
        ],
    });

    regions.push(RegionWave {
        component: Component::PsiRL,
        region: Region::I,
        seam: Seam::None,
        plus: vec![
            term(2.0 * rr2, re(k1), re(-k2 - kg)),
            term(2.0 * rr1, re(k2), re(-k1 - kg)),
        ],
        minus: vec![],
    });
    regions.push(RegionWave {
        component: Component::PsiRL,
        region: Region::IV,
        seam: Seam::Sum,
        plus: vec![
            term(2.0 * rr2 * t1, re(k1), re(-k2 - kg)),
            term(2.0 * rr1 * t2, re(k2), re(-k1 - kg)),
            term(
                -4.0 * rr1 * tm12,
                re(k) - kappa + ig2,
                -kappa - re(kg) + ig2,
            ),
        ],
        minus: vec![
            term(2.0 * rr2, re(k1), re(-k2 - kg)),
            term(2.0 * rr1, re(k2), re(-k1 - kg)),
        ],
    });

    // Lower photon reflected, upper photon transmitted: populated only
    // behind the seam (the upper photon is emitted second).
    regions.push(RegionWave {
        component: Component::PsiLR,
        region: Region::II,
        seam: Seam::Sum,
        plus: vec![],
        minus: vec![
            term(2.0 * tt1 * r2, re(-k1), re(k2 + kg)),
            term(2.0 * tt1 * r2, re(-k2), re(k1 + kg)),
            term(
                -4.0 * tt1 * r2,
                re(-k) + kappa - ig2,
                kappa + kg - ig2,
            ),
        ],
    });

    // Both left-moving: the reflected lower photon leads (y > x).
    regions.push(RegionWave {
        component: Component::PsiLL,
        region: Region::I,
        seam: Seam::Diff,
        plus: vec![
            term(2.0 * rr1 * r2, re(-k1), re(-k2 - kg)),
            term(2.0 * rr1 * r2, re(-k2), re(-k1 - kg)),
            term(
                -4.0 * rr1 * r2,
                re(-k) + kappa - ig2,
                -kappa - re(kg) + ig2,
            ),
        ],
        minus: vec![],
    });

    // ---- one-photon sector --------------------------------------------
    let vr = p.v_r();
    let gamma_dr = p.couplings.gamma_dr;
    let mut one_photon = Vec::new();
    one_photon.push((
        OnePhotonComponent::RIncoming,
        vec![
            Term1 {
                c: 2.0 * vr / den2,
                p: re(k1),
            },
            Term1 {
                c: 2.0 * vr / den1,
                p: re(k2),
            },
        ],
    ));
    one_photon.push((
        OnePhotonComponent::ROutgoing,
        vec![
            Term1 {
                c: 2.0 * vr * t1 / den2,
                p: re(k1),
            },
            Term1 {
                c: 2.0 * vr * t2 / den1,
                p: re(k2),
            },
            Term1 {
                c: 4.0 * c(0.0, gamma_dr) * vr / (den1 * den2),
                p: re(k) - kappa + ig2,
            },
        ],
    ));
    one_photon.push((
        OnePhotonComponent::LOutgoing,
        vec![
            Term1 {
                c: 2.0 * vr * r1 / den2,
                p: re(-k1),
            },
            Term1 {
                c: 2.0 * vr * r1 / den2,
                p: re(-k2),
            },
            Term1 {
                c: -4.0 * vr * r1 / den2,
                p: re(-k) + kappa - ig2,
            },
        ],
    ));

    Ok(TwoPhotonState {
        params: p,
        input,
        amp1,
        amp2,
        regions,
        one_photon,
    })
}

impl TwoPhotonState {
    /// Device the state belongs to.
    pub fn params(&self) -> &DeviceParams {
        &self.params
    }

    /// Input wavevectors.
    pub fn input(&self) -> TwoPhotonInput {
        self.input
    }

    /// Single-photon amplitudes at the two input energies.
    pub fn single_photon(&self) -> (&Amplitudes, &Amplitudes) {
        (&self.amp1, &self.amp2)
    }

    pub(crate) fn region_wave(&self, component: Component, region: Region) -> Option<&RegionWave> {
        self.regions
            .iter()
            .find(|rw| rw.component == component && rw.region == region)
    }

    /// `(component, region)` pairs that carry a non-zero closed form.
    pub fn populated_regions(&self) -> Vec<(Component, Region)> {
        self.regions.iter().map(|rw| (rw.component, rw.region)).collect()
    }

    /// Evaluates a two-photon component at `(x1, x2)`, returning zero on
    /// regions the component does not populate.
    pub fn eval(&self, component: Component, x1: f64, x2: f64) -> Complex64 {
        match self.region_wave(component, Region::of(x1, x2)) {
            Some(rw) => rw.eval(x1, x2),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Evaluates the closed form attached to a specific region — useful for
    /// one-sided limits at the region boundaries. Returns zero when the
    /// component does not populate that region.
    pub fn eval_region(&self, component: Component, region: Region, x1: f64, x2: f64) -> Complex64 {
        match self.region_wave(component, region) {
            Some(rw) => rw.eval(x1, x2),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Evaluates a one-photon component; zero outside its half-line.
    pub fn eval_one_photon(&self, component: OnePhotonComponent, x: f64) -> Complex64 {
        let in_domain = match component {
            OnePhotonComponent::RIncoming | OnePhotonComponent::LOutgoing => x <= 0.0,
            OnePhotonComponent::ROutgoing => x >= 0.0,
        };
        if !in_domain {
            return Complex64::new(0.0, 0.0);
        }
        self.one_photon
            .iter()
            .find(|(c, _)| *c == component)
            .map(|(_, terms)| {
                terms
                    .iter()
                    .map(|t| t.c * (Complex64::i() * t.p * x).exp())
                    .sum()
            })
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub(crate) fn one_photon_terms(&self, component: OnePhotonComponent) -> &[Term1] {
        self.one_photon
            .iter()
            .find(|(c, _)| *c == component)
            .map(|(_, terms)| terms.as_slice())
            .unwrap_or(&[])
    }
}

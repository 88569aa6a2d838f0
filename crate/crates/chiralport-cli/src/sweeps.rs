//! Sweep execution: expands a [`SweepSpec`] into a deterministic [`Table`].
//!
//! Cells are evaluated in parallel; rows are assembled in grid order, so a
//! given spec always produces byte-identical output. Design points outside
//! the feasible region are emitted as rows flagged `feasible = false` with
//! empty value cells — never silently dropped, and never zero-filled.

use anyhow::Context;
use chiralport::oracle::{oracle_amplitudes, LatticeModel};
use chiralport::params::{CouplingSet, DeviceParams, EmitterSpec};
use chiralport::scattering::{amplitudes_forward, diode_report, rectifier_efficiency};
use chiralport::twophoton::{build_state, transistor_probabilities, Component, Region, TwoPhotonInput};
use chiralport::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{AxisSpec, Config, Scale, SweepSpec, Target};
use crate::output::{Cell, Table};

/// Expands `spec` into a table. `seed` feeds the randomized targets.
pub fn run_sweep(config: &Config, spec: &SweepSpec, seed: u64) -> anyhow::Result<Table> {
    match spec.target {
        Target::RectifierEfficiency => rectifier_efficiency_table(spec),
        Target::Diode => diode_table(spec),
        Target::TransistorHeatmap => transistor_heatmap_table(spec),
        Target::TransistorVsPurcell => transistor_vs_purcell_table(spec),
        Target::AmplitudesVsDetuning => {
            let device = config.resolve_device()?;
            amplitudes_vs_detuning_table(&device, spec)
        }
        Target::OracleVerify => oracle_verify_table(spec.points.unwrap_or(50), seed),
        Target::WavefunctionDump => {
            let device = config.resolve_device()?;
            wavefunction_dump_table(&device, spec)
        }
    }
}

/// Splits a design-solver result into `(value, feasible)` cells, flagging
/// sub-threshold points and propagating genuine errors.
fn feasibility(result: Result<f64, Error>) -> anyhow::Result<(Cell, Cell)> {
    match result {
        Ok(value) => Ok((Cell::Num(value), Cell::Bool(true))),
        Err(Error::BelowThreshold { .. }) | Err(Error::InfeasibleRectifier { .. }) => {
            Ok((Cell::Empty, Cell::Bool(false)))
        }
        Err(e) => Err(e).context("sweep cell evaluation failed"),
    }
}

/// Rectification efficiency over (Purcell factor, shared directionality
/// `D_d = D_u = D`). Columns: `purcell, dir, efficiency, feasible`.
pub fn rectifier_efficiency_table(spec: &SweepSpec) -> anyhow::Result<Table> {
    let mut used = Vec::new();
    let purcell = spec.axis_values(
        "purcell",
        AxisSpec::new("purcell", 1.0, 1000.0, 200, Scale::Log),
        &mut used,
    )?;
    let dir = spec.axis_values(
        "dir",
        AxisSpec::new("dir", 0.05, 1.0, 200, Scale::Linear),
        &mut used,
    )?;
    spec.reject_unused_axes(&used)?;
    spec.reject_unused_fixed(&[])?;
    let rows = purcell
        .par_iter()
        .flat_map(|&pf| dir.par_iter().map(move |&d| (pf, d)))
        .map(|(pf, d)| -> anyhow::Result<Vec<Cell>> {
            let (value, feasible) = feasibility(rectifier_efficiency(d, d, pf))?;
            Ok(vec![Cell::Num(pf), Cell::Num(d), value, feasible])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut table = Table::new(vec!["purcell", "dir", "efficiency", "feasible"]);
    table.extend(rows);
    Ok(table)
}

/// Diode figures of merit over the lower directionality. Columns:
/// `dir_d, reflection, transmission_rl`.
pub fn diode_table(spec: &SweepSpec) -> anyhow::Result<Table> {
    let mut used = Vec::new();
    let dir = spec.axis_values(
        "dir_d",
        AxisSpec::new("dir_d", 0.05, 1.0, 200, Scale::Linear),
        &mut used,
    )?;
    spec.reject_unused_axes(&used)?;
    spec.reject_unused_fixed(&[])?;
    let rows = dir
        .par_iter()
        .map(|&d| -> anyhow::Result<Vec<Cell>> {
            let report = diode_report(d).context("diode sweep cell")?;
            Ok(vec![
                Cell::Num(d),
                Cell::Num(report.reflection),
                Cell::Num(report.transmission_rl),
            ])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut table = Table::new(vec!["dir_d", "reflection", "transmission_rl"]);
    table.extend(rows);
    Ok(table)
}

/// Transistor success probability over both directionalities at a fixed
/// Purcell factor. Columns: `purcell, dir_d, dir_u, p23, feasible`.
pub fn transistor_heatmap_table(spec: &SweepSpec) -> anyhow::Result<Table> {
    let mut used_axes = Vec::new();
    let dir_d = spec.axis_values(
        "dir_d",
        AxisSpec::new("dir_d", 0.05, 1.0, 200, Scale::Linear),
        &mut used_axes,
    )?;
    let dir_u = spec.axis_values(
        "dir_u",
        AxisSpec::new("dir_u", -1.0, 1.0, 200, Scale::Linear),
        &mut used_axes,
    )?;
    spec.reject_unused_axes(&used_axes)?;
    let mut used_fixed = Vec::new();
    let purcell = spec.fixed_or("purcell", f64::INFINITY, &mut used_fixed);
    spec.reject_unused_fixed(&used_fixed)?;
    let rows = dir_d
        .par_iter()
        .flat_map(|&dd| dir_u.par_iter().map(move |&du| (dd, du)))
        .map(|(dd, du)| -> anyhow::Result<Vec<Cell>> {
            let (value, feasible) =
                feasibility(transistor_probabilities(dd, du, purcell).map(|t| t.p23))?;
            Ok(vec![
                Cell::Num(purcell),
                Cell::Num(dd),
                Cell::Num(du),
                value,
                feasible,
            ])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut table = Table::new(vec!["purcell", "dir_d", "dir_u", "p23", "feasible"]);
    table.extend(rows);
    Ok(table)
}

/// Transistor success probability versus Purcell factor at fixed
/// directionalities. Columns: `purcell, dir_d, dir_u, p23, feasible`.
pub fn transistor_vs_purcell_table(spec: &SweepSpec) -> anyhow::Result<Table> {
    let mut used_axes = Vec::new();
    let purcell = spec.axis_values(
        "purcell",
        AxisSpec::new("purcell", 1.0, 1000.0, 200, Scale::Log),
        &mut used_axes,
    )?;
    spec.reject_unused_axes(&used_axes)?;
    let mut used_fixed = Vec::new();
    let dir_d = spec.fixed_or("dir_d", 0.9, &mut used_fixed);
    let dir_u = spec.fixed_or("dir_u", 0.9, &mut used_fixed);
    spec.reject_unused_fixed(&used_fixed)?;
    let rows = purcell
        .par_iter()
        .map(|&pf| -> anyhow::Result<Vec<Cell>> {
            let (value, feasible) =
                feasibility(transistor_probabilities(dir_d, dir_u, pf).map(|t| t.p23))?;
            Ok(vec![
                Cell::Num(pf),
                Cell::Num(dir_d),
                Cell::Num(dir_u),
                value,
                feasible,
            ])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut table = Table::new(vec!["purcell", "dir_d", "dir_u", "p23", "feasible"]);
    table.extend(rows);
    Ok(table)
}

/// Single-photon amplitudes of the configured device versus detuning, in
/// units of the total waveguide rate. Columns: detuning, absolute frequency,
/// real/imaginary parts of all four amplitudes, and the scattered flux.
pub fn amplitudes_vs_detuning_table(p: &DeviceParams, spec: &SweepSpec) -> anyhow::Result<Table> {
    let mut used = Vec::new();
    let delta = spec.axis_values(
        "delta",
        AxisSpec::new("delta", -5.0, 5.0, 200, Scale::Linear),
        &mut used,
    )?;
    spec.reject_unused_axes(&used)?;
    spec.reject_unused_fixed(&[])?;
    let gamma = p.gamma_waveguides();
    let rows = delta
        .par_iter()
        .map(|&d| -> anyhow::Result<Vec<Cell>> {
            let omega = p.emitter.omega_eg + d * gamma;
            let a = amplitudes_forward(p, omega).context("amplitude sweep cell")?;
            Ok(vec![
                Cell::Num(d),
                Cell::Num(omega),
                Cell::Num(a.t.re),
                Cell::Num(a.t.im),
                Cell::Num(a.r.re),
                Cell::Num(a.r.im),
                Cell::Num(a.t_tilde.re),
                Cell::Num(a.t_tilde.im),
                Cell::Num(a.r_tilde.re),
                Cell::Num(a.r_tilde.im),
                Cell::Num(a.probability_sum()),
            ])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut table = Table::new(vec![
        "delta",
        "omega",
        "t_re",
        "t_im",
        "r_re",
        "r_im",
        "t_tilde_re",
        "t_tilde_im",
        "r_tilde_re",
        "r_tilde_im",
        "flux_sum",
    ]);
    table.extend(rows);
    Ok(table)
}

/// One randomly sampled verification point.
struct OraclePoint {
    device: DeviceParams,
    omega: f64,
}

fn sample_points(count: usize, seed: u64) -> Vec<OraclePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let couplings = CouplingSet::new(
                rng.gen_range(0.05..1.0),
                rng.gen_range(0.05..1.0),
                rng.gen_range(0.05..1.0),
                rng.gen_range(0.05..1.0),
            )
            .unwrap();
            let gamma_star = if i % 2 == 0 {
                0.0
            } else {
                rng.gen_range(0.01..0.5)
            };
            let emitter = EmitterSpec::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..1.5),
                gamma_star,
            )
            .unwrap();
            let device = DeviceParams::with_unit_velocity(couplings, emitter).unwrap();
            let omega =
                device.emitter.omega_eg + rng.gen_range(-5.0..5.0) * device.gamma_waveguides();
            OraclePoint { device, omega }
        })
        .collect()
}

/// Closed-form amplitudes against the lattice oracle at `count` random
/// parameter points, four rows (one per amplitude) each.
pub fn oracle_verify_table(count: usize, seed: u64) -> anyhow::Result<Table> {
    let points = sample_points(count, seed);
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, point)| -> anyhow::Result<Vec<Vec<Cell>>> {
            let p = &point.device;
            let model = LatticeModel::standard(p)?;
            let numeric = oracle_amplitudes(p, point.omega, &model)?;
            let closed = amplitudes_forward(p, point.omega)?;
            let quantities = [
                ("t", closed.t, numeric.t),
                ("r", closed.r, numeric.r),
                ("t_tilde", closed.t_tilde, numeric.t_tilde),
                ("r_tilde", closed.r_tilde, numeric.r_tilde),
            ];
            Ok(quantities
                .into_iter()
                .map(|(name, analytic, oracle)| {
                    vec![
                        Cell::Int(i as u64),
                        Cell::Num(p.couplings.gamma_dr),
                        Cell::Num(p.couplings.gamma_dl),
                        Cell::Num(p.couplings.gamma_ur),
                        Cell::Num(p.couplings.gamma_ul),
                        Cell::Num(p.emitter.gamma_star),
                        Cell::Num(p.emitter.omega_eg),
                        Cell::Num(p.emitter.omega_g),
                        Cell::Num(point.omega),
                        Cell::Str(name.to_string()),
                        Cell::Num(analytic.re),
                        Cell::Num(analytic.im),
                        Cell::Num(oracle.re),
                        Cell::Num(oracle.im),
                        Cell::Num((analytic - oracle).norm()),
                    ]
                })
                .collect())
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut table = Table::new(vec![
        "index",
        "gamma_dr",
        "gamma_dl",
        "gamma_ur",
        "gamma_ul",
        "gamma_star",
        "omega_eg",
        "omega_g",
        "omega",
        "quantity",
        "analytic_re",
        "analytic_im",
        "oracle_re",
        "oracle_im",
        "abs_error",
    ]);
    table.extend(rows.into_iter().flatten());
    Ok(table)
}

/// Grid dump of the two-photon wavefunctions for the configured device.
/// Wavevectors default to the emitter resonance; coordinates default to ten
/// correlation lengths around the emitter.
pub fn wavefunction_dump_table(p: &DeviceParams, spec: &SweepSpec) -> anyhow::Result<Table> {
    let unit = p.v_g / p.gamma_waveguides();
    let mut used_fixed = Vec::new();
    let k0 = p.emitter.omega_eg / p.v_g;
    let k1 = spec.fixed_or("k1", k0, &mut used_fixed);
    let k2 = spec.fixed_or("k2", k0, &mut used_fixed);
    spec.reject_unused_fixed(&used_fixed)?;
    let mut used = Vec::new();
    let x1 = spec.axis_values(
        "x1",
        AxisSpec::new("x1", -10.0 * unit, 10.0 * unit, 101, Scale::Linear),
        &mut used,
    )?;
    let x2 = spec.axis_values(
        "x2",
        AxisSpec::new("x2", -10.0 * unit, 10.0 * unit, 101, Scale::Linear),
        &mut used,
    )?;
    spec.reject_unused_axes(&used)?;
    let components: Vec<Component> = match &spec.component {
        None => Component::ALL.to_vec(),
        Some(label) => {
            let found = Component::ALL.iter().find(|c| c.label() == label);
            vec![*found.ok_or_else(|| {
                anyhow::anyhow!(
                    "unknown component {label:?}; expected one of {:?}",
                    Component::ALL.map(|c| c.label())
                )
            })?]
        }
    };
    let state = build_state(p, TwoPhotonInput::new(k1, k2)?)?;
    let rows = x1
        .par_iter()
        .flat_map(|&a| x2.par_iter().map(move |&b| (a, b)))
        .map(|(a, b)| {
            let region = Region::of(a, b);
            components
                .iter()
                .map(|&component| {
                    let value = state.eval(component, a, b);
                    vec![
                        Cell::Str(component.label().to_string()),
                        Cell::Str(region.label().to_string()),
                        Cell::Num(a),
                        Cell::Num(b),
                        Cell::Num(value.re),
                        Cell::Num(value.im),
                    ]
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    let mut table = Table::new(vec!["component", "region", "x1", "x2", "re", "im"]);
    table.extend(rows.into_iter().flatten());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SweepSpec;

    fn small_spec(target: Target) -> SweepSpec {
        let mut spec = SweepSpec::for_target(target);
        spec.axis = match target {
            Target::RectifierEfficiency => vec![
                AxisSpec::new("purcell", 1.0, 100.0, 5, Scale::Log),
                AxisSpec::new("dir", 0.2, 1.0, 5, Scale::Linear),
            ],
            Target::Diode => vec![AxisSpec::new("dir_d", 0.1, 1.0, 7, Scale::Linear)],
            Target::TransistorHeatmap => vec![
                AxisSpec::new("dir_d", 0.2, 1.0, 5, Scale::Linear),
                AxisSpec::new("dir_u", -0.5, 1.0, 4, Scale::Linear),
            ],
            Target::TransistorVsPurcell => {
                vec![AxisSpec::new("purcell", 1.0, 1000.0, 9, Scale::Log)]
            }
            _ => Vec::new(),
        };
        spec
    }

    #[test]
    fn rectifier_table_flags_infeasible_rows() {
        let table = rectifier_efficiency_table(&small_spec(Target::RectifierEfficiency)).unwrap();
        assert_eq!(table.len(), 25);
        let feasible: Vec<bool> = table
            .rows()
            .iter()
            .map(|row| row[3] == Cell::Bool(true))
            .collect();
        assert!(feasible.iter().any(|&f| f));
        assert!(feasible.iter().any(|&f| !f));
        for row in table.rows() {
            match (&row[2], &row[3]) {
                (Cell::Num(v), Cell::Bool(true)) => assert!((0.0..=1.0).contains(v)),
                (Cell::Empty, Cell::Bool(false)) => {}
                other => panic!("unexpected cells {other:?}"),
            }
        }
    }

    #[test]
    fn diode_table_matches_closed_form() {
        let table = diode_table(&small_spec(Target::Diode)).unwrap();
        assert_eq!(table.len(), 7);
        let last = table.rows().last().unwrap();
        assert_eq!(last[0], Cell::Num(1.0));
        assert_eq!(last[1], Cell::Num(0.0));
        assert_eq!(last[2], Cell::Num(1.0));
    }

    #[test]
    fn heatmap_default_purcell_is_lossless() {
        let table = transistor_heatmap_table(&small_spec(Target::TransistorHeatmap)).unwrap();
        assert_eq!(table.len(), 20);
        for row in table.rows() {
            assert_eq!(row[0], Cell::Num(f64::INFINITY));
            assert_eq!(row[4], Cell::Bool(true), "lossless heatmap is feasible");
        }
    }

    #[test]
    fn unknown_axis_is_rejected() {
        let mut spec = small_spec(Target::Diode);
        spec.axis.push(AxisSpec::new("purcell", 1.0, 2.0, 3, Scale::Linear));
        let err = diode_table(&spec).unwrap_err().to_string();
        assert!(err.contains("does not use an axis"), "{err}");
    }

    #[test]
    fn unknown_fixed_parameter_is_rejected() {
        let mut spec = small_spec(Target::TransistorVsPurcell);
        spec.fixed.insert("frequency".into(), 1.0);
        let err = transistor_vs_purcell_table(&spec).unwrap_err().to_string();
        assert!(err.contains("does not use a fixed parameter"), "{err}");
    }

    // Seeded determinism of the full file is checked at the CLI level.
    #[test]
    fn oracle_table_has_small_errors() {
        let table = oracle_verify_table(4, 7).unwrap();
        assert_eq!(table.len(), 16);
        for row in table.rows() {
            match row.last().unwrap() {
                Cell::Num(err) => assert!(*err < 1e-6, "oracle deviation {err}"),
                other => panic!("unexpected error cell {other:?}"),
            }
        }
    }
}

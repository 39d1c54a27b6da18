//! The verification suite behind `vwave verify`.
//!
//! Each check measures one quantity and compares it with a fixed threshold.

use serde::Serialize;

use crate::constants::Constants;
use crate::error::Result;
use crate::free_motion::{free_params, node_trajectory, wave_value};
use crate::nodes::{
    beat_period, find_nodes, superposition_grid, track_superposition_nodes, NodeKind, DEFAULT_TOLERANCE,
};
use crate::oracle::{
    energy_closed_form, ode_residual, pde_residual_free, shoot_inward, ResidualGrid, ShootOptions, SpaceTimeGrid,
};
use crate::series::{build_series, quantization_scan, u_plus, SeriesSolution};
use crate::state::{derive_state, AtomSpec};
use crate::wronskian::{sample_wave, tail_decay_fit, QuadratureOptions, RadialGrid, WronskianIntegrator};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            passed: value < threshold,
        }
    }

    fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold: hi,
            passed: value >= lo && value <= hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub z: u32,
    pub n_max: u32,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn u_plus_residual(sol: &SeriesSolution) -> Result<crate::oracle::ResidualReport> {
    let grid = ResidualGrid::standard(&sol.state, sol.atom.n);
    ode_residual(
        |r: &[f64]| Ok(r.iter().map(|&x| u_plus(x, sol)).collect()),
        &sol.state,
        &grid,
    )
}

pub fn u_minus_residual(sol: &SeriesSolution) -> Result<crate::oracle::ResidualReport> {
    let grid = ResidualGrid::standard(&sol.state, sol.atom.n);
    let integrator = WronskianIntegrator::new(sol, QuadratureOptions::default());
    ode_residual(
        |r: &[f64]| Ok(integrator.evaluate(r)?.into_iter().map(|p| p.0).collect()),
        &sol.state,
        &grid,
    )
}

/// Largest relative deviation between the inward-shot solution and `u₋` on
/// `[1.2, 3]·r_o`, both normalized at `2·r_o`.
pub fn shooting_deviation(sol: &SeriesSolution, c: Constants) -> Result<f64> {
    let r_o = sol.r_o();
    let radii: Vec<f64> = (0..=180).map(|i| r_o * (1.2 + 0.01 * i as f64)).collect();
    let mut outputs = radii.clone();
    outputs.push(2.0 * r_o);
    let r_start = 3.0 * r_o + 20.0 / sol.k_o();
    let shot = shoot_inward(
        sol.state.energy,
        sol.atom.z,
        r_start,
        1.2 * r_o,
        c,
        &ShootOptions {
            tolerance: 1e-10,
            outputs,
        },
    )?;
    let wave = WronskianIntegrator::new(sol, QuadratureOptions::default()).evaluate(&radii)?;
    let anchor_shot = shot.u[radii.len()];
    let anchor_wave = WronskianIntegrator::new(sol, QuadratureOptions::default()).u_minus(2.0 * r_o)?;
    Ok(radii
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let a = shot.u[i] / anchor_shot;
            let b = wave[i].0 / anchor_wave;
            ((a - b) / b).abs()
        })
        .fold(0.0, f64::max))
}

/// Largest node-radius difference (in `r_o` of the lower state) between `t`
/// and `t + T_beat` for the `(1, 2)` superposition, and the spread of the
/// node radii over one period.
pub fn beat_periodicity(z: u32, c: Constants) -> Result<(f64, f64)> {
    let states = [
        build_series(AtomSpec::new(z, 1)?, c),
        build_series(AtomSpec::new(z, 2)?, c),
    ];
    let beat = beat_period(z, &[1, 2], c)?;
    let grid = superposition_grid(&states, 3.0, 1000, 1e-3)?;
    let base: Vec<f64> = (0..8).map(|i| 0.37 + beat * i as f64 / 8.0).collect();
    let shifted: Vec<f64> = base.iter().map(|t| t + beat).collect();
    let a = track_superposition_nodes(&states, &[1.0, 1.0], &base, &grid, DEFAULT_TOLERANCE)?;
    let b = track_superposition_nodes(&states, &[1.0, 1.0], &shifted, &grid, DEFAULT_TOLERANCE)?;
    let r_ref = a.r_ref;
    let mut worst = 0.0_f64;
    for (sa, sb) in a.slices.iter().zip(&b.slices) {
        let (ra, rb) = (sa.report.radii(), sb.report.radii());
        if ra.len() != rb.len() {
            return Ok((f64::INFINITY, 0.0));
        }
        for (x, y) in ra.iter().zip(&rb) {
            worst = worst.max((x - y).abs() / r_ref);
        }
    }
    let plain: Vec<f64> = a
        .slices
        .iter()
        .filter_map(|s| {
            s.report
                .nodes
                .iter()
                .find(|n| n.kind == NodeKind::PlainZero)
                .map(|n| n.radius)
        })
        .collect();
    let spread = plain.iter().cloned().fold(f64::MIN, f64::max) - plain.iter().cloned().fold(f64::MAX, f64::min);
    Ok((worst, spread / r_ref))
}

fn state_checks(z: u32, n: u32, samples: usize, exclusion: f64, c: Constants, out: &mut Vec<Check>) -> Result<()> {
    let atom = AtomSpec::new(z, n)?;
    let tag = |name: &str| format!("{name}[z={z},n={n}]");
    let state = derive_state(atom, c);
    let exact = energy_closed_form(atom, c);
    out.push(Check::below(
        tag("energy_rel_error"),
        ((state.energy - exact) / exact).abs(),
        1e-12,
    ));

    let sol = build_series(atom, c);
    out.push(Check::below(
        tag("series_termination"),
        sol.next_coefficient().abs() / sol.max_abs_coefficient(),
        1e-14,
    ));

    let plus = u_plus_residual(&sol)?;
    out.push(Check::below(tag("u_plus_residual"), plus.max_rel_residual, 1e-6));
    out.push(Check::within(
        tag("u_plus_residual_order"),
        plus.order_estimate,
        1.7,
        2.3,
    ));
    let minus = u_minus_residual(&sol)?;
    out.push(Check::below(tag("u_minus_residual"), minus.max_rel_residual, 1e-4));
    out.push(Check::within(
        tag("u_minus_residual_order"),
        minus.order_estimate,
        1.7,
        2.3,
    ));

    let tail = tail_decay_fit(&sol, 5.0, 20.0, 61)?;
    out.push(Check::below(
        tag("tail_rate_rel_error"),
        ((tail.rate - sol.k_o()) / sol.k_o()).abs(),
        0.01,
    ));

    let r_o = sol.r_o();
    let integrator = WronskianIntegrator::new(&sol, QuadratureOptions::default());
    let left = integrator.u_minus(r_o * (1.0 - 1e-3))?;
    let right = integrator.u_minus(r_o * (1.0 + 1e-3))?;
    out.push(Check::below(
        tag("sign_change_at_ro"),
        if left * right < 0.0 { 0.0 } else { 1.0 },
        0.5,
    ));
    let (lim_l, lim_r) = integrator.one_sided_limits()?;
    let slope = sol.u_plus_derivs(r_o).1;
    let err = ((lim_l + 1.0 / slope) * slope)
        .abs()
        .max(((lim_r - 1.0 / slope) * slope).abs());
    out.push(Check::below(tag("one_sided_limits_rel_error"), err, 1e-4));

    let grid = RadialGrid::for_state(&sol, 3.0, samples, exclusion)?;
    let wave = sample_wave(&sol, &grid)?;
    let report = find_nodes(&wave, DEFAULT_TOLERANCE)?;
    let surfaces: Vec<f64> = report
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::TrajectorySurface)
        .map(|n| n.radius)
        .collect();
    out.push(Check::below(
        tag("trajectory_surface_count_error"),
        (surfaces.len() as f64 - 1.0).abs(),
        0.5,
    ));
    let offset = surfaces.first().map_or(f64::INFINITY, |r| (r - r_o).abs() / r_o);
    out.push(Check::below(tag("trajectory_surface_offset"), offset, 1e-6));
    let others = report.nodes.len() - surfaces.len();
    let plain = report.count(NodeKind::PlainZero);
    out.push(Check::below(tag("non_plain_extra_nodes"), (others - plain) as f64, 0.5));

    out.push(Check::below(
        tag("shooting_deviation"),
        shooting_deviation(&sol, c)?,
        1e-4,
    ));
    Ok(())
}

fn free_checks(c: Constants, out: &mut Vec<Check>) -> Result<()> {
    let p = free_params(1.0, 1.0, c)?;
    let mut worst = 0.0_f64;
    for branch in 0..=5 {
        for i in 0..100 {
            let t = 0.1 * i as f64;
            let x = node_trajectory(&p, branch, t);
            worst = worst.max(wave_value(x, t, &p).abs() / p.amplitude);
        }
    }
    out.push(Check::below("free_node_value", worst, 1e-12));
    out.push(Check::below(
        "free_de_broglie",
        (p.lambda * p.m * p.v - c.h).abs(),
        f64::EPSILON * c.h,
    ));
    let grid = SpaceTimeGrid {
        x0: 0.0,
        x1: 1.0,
        t0: 0.0,
        t1: 1.0,
        dx: 1e-3,
    };
    let res = pde_residual_free(&p, p.v, &grid)?;
    out.push(Check::below("free_pde_residual", res.max_rel_residual, 1e-6));
    out.push(Check::within("free_pde_residual_order", res.order_estimate, 1.7, 2.3));
    Ok(())
}

/// Runs every check for `Z = z`, `n = 1..=n_max`.
pub fn run_verification(z: u32, n_max: u32, samples: usize, exclusion: f64) -> Result<VerificationReport> {
    let c = Constants::ATOMIC;
    let mut checks = Vec::new();
    AtomSpec::new(z, n_max)?;
    for n in 1..=n_max {
        state_checks(z, n, samples, exclusion, c, &mut checks)?;
    }

    let zf = f64::from(z);
    let hi = -zf * zf / (2.0 * (f64::from(n_max) + 0.5).powi(2));
    let found = quantization_scan(z, -3.0 * zf * zf, hi, c)?;
    let mut scan_err = if found.len() == n_max as usize {
        0.0_f64
    } else {
        f64::INFINITY
    };
    for (n, e) in &found {
        let exact = energy_closed_form(AtomSpec::new(z, *n)?, c);
        scan_err = scan_err.max(((e - exact) / exact).abs());
    }
    checks.push(Check::below(format!("quantization_scan[z={z}]"), scan_err, 1e-9));

    free_checks(c, &mut checks)?;

    if n_max >= 2 {
        let (diff, spread) = beat_periodicity(z, c)?;
        checks.push(Check::below(format!("beat_periodicity[z={z}]"), diff, 1e-6));
        checks.push(Check {
            name: format!("beat_node_motion[z={z}]"),
            value: spread,
            threshold: 1e-3,
            passed: spread > 1e-3,
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        z,
        n_max,
        passed,
        checks,
    })
}

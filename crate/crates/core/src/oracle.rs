//! Independent checks: finite-difference residuals of the wave equations,
//! inward shooting of the radial equation, closed-form energies.
//!
//! Residuals use the three-point second difference, whose truncation error
//! is `h²u''''/12`; halving the spacing should divide the residual by four.
//! Each point is normalized by the largest scale `|u''| + k₀²|u| + |pole·u|`
//! found within `±0.05·r_o` (a quarter wavelength for the free wave). A
//! strictly pointwise scale vanishes at every zero of `u` while the
//! truncation error does not, so it would report spurious failures there.

use serde::Serialize;

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::free_motion::{wave_value, FreeParams};
use crate::state::{level_energy, AtomSpec, StateParams};

/// Fewest points a uniform residual segment may have.
pub const MIN_SEGMENT_POINTS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub grid_spacing: f64,
    pub max_rel_residual: f64,
    /// `log₂` of the residual ratio between spacing `2h` and `h`.
    pub order_estimate: f64,
    pub excluded_zones: Vec<(f64, f64)>,
}

/// Uniform segments on which a residual is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualGrid {
    pub segments: Vec<(f64, f64)>,
    pub spacing: f64,
    pub excluded_zones: Vec<(f64, f64)>,
}

impl ResidualGrid {
    /// `[0.05, 0.95]·r_o ∪ [1.05, 3]·r_o` at spacing `r_o/(4000n)`.
    pub fn standard(state: &StateParams, n: u32) -> Self {
        let r_o = state.r_o;
        ResidualGrid {
            segments: vec![(0.05 * r_o, 0.95 * r_o), (1.05 * r_o, 3.0 * r_o)],
            spacing: r_o / (4000.0 * f64::from(n)),
            excluded_zones: vec![(0.0, 0.05 * r_o), (0.95 * r_o, 1.05 * r_o)],
        }
    }

    pub fn with_spacing(&self, spacing: f64) -> Self {
        ResidualGrid {
            spacing,
            ..self.clone()
        }
    }

    /// The sample radii of each segment at spacing `h`.
    fn points(&self, h: f64) -> Result<Vec<Vec<f64>>> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        self.segments
            .iter()
            .map(|&(a, b)| {
                let steps = ((b - a) / h).round() as usize;
                if steps + 1 < MIN_SEGMENT_POINTS {
                    return Err(Error::GridTooCoarse {
                        start: a,
                        end: b,
                        points: steps + 1,
                        required: MIN_SEGMENT_POINTS,
                    });
                }
                Ok((0..=steps).map(|i| a + i as f64 * h).collect())
            })
            .collect()
    }
}

/// `out[i] = max(scale[j])` over `|j − i| ≤ w`.
fn window_max(scale: &[f64], w: usize) -> Vec<f64> {
    let n = scale.len();
    let mut out = Vec::with_capacity(n);
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    let mut next = 0;
    for i in 0..n {
        let hi = (i + w).min(n - 1);
        while next <= hi {
            while deque.back().is_some_and(|&j| scale[j] <= scale[next]) {
                deque.pop_back();
            }
            deque.push_back(next);
            next += 1;
        }
        while deque.front().is_some_and(|&j| j + w < i) {
            deque.pop_front();
        }
        out.push(scale[*deque.front().unwrap()]);
    }
    out
}

fn ode_max_residual<F>(sampler: &mut F, state: &StateParams, grid: &ResidualGrid, h: f64) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let k2 = state.k_o * state.k_o;
    let w = (0.05 * state.r_o / h).ceil() as usize;
    let mut worst = 0.0_f64;
    for r in grid.points(h)? {
        let u = sampler(&r)?;
        if u.len() != r.len() {
            return Err(Error::Mismatched(format!(
                "sampler returned {} values for {} radii",
                u.len(),
                r.len()
            )));
        }
        let m = r.len();
        let mut res = Vec::with_capacity(m - 2);
        let mut scale = Vec::with_capacity(m - 2);
        for i in 1..m - 1 {
            let upp = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h);
            let pole = state.pole_coefficient(r[i]);
            res.push((upp + (pole - k2) * u[i]).abs());
            scale.push(upp.abs() + k2 * u[i].abs() + (pole * u[i]).abs());
        }
        let local = window_max(&scale, w);
        for (r, s) in res.iter().zip(&local) {
            if *s > 0.0 {
                worst = worst.max(r / s);
            }
        }
    }
    Ok(worst)
}

/// Residual of `u'' + q(r) u = 0` for the function produced by `sampler`
/// (which maps radii to values) on `grid`; the order comes from a second
/// pass at twice the spacing.
pub fn ode_residual<F>(mut sampler: F, state: &StateParams, grid: &ResidualGrid) -> Result<ResidualReport>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let h = grid.spacing;
    let coarse = ode_max_residual(&mut sampler, state, grid, 2.0 * h)?;
    let fine = ode_max_residual(&mut sampler, state, grid, h)?;
    Ok(ResidualReport {
        grid_spacing: h,
        max_rel_residual: fine,
        order_estimate: order(coarse, fine),
        excluded_zones: grid.excluded_zones.clone(),
    })
}

fn order(coarse: f64, fine: f64) -> f64 {
    if coarse == 0.0 && fine == 0.0 {
        2.0
    } else {
        (coarse / fine).log2()
    }
}

/// Rectangle `[x0, x1] × [t0, t1]` sampled at spacing `dx` and `dt = dx/(2|v|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceTimeGrid {
    pub x0: f64,
    pub x1: f64,
    pub t0: f64,
    pub t1: f64,
    pub dx: f64,
}

fn pde_max_residual(p: &FreeParams, v_op: f64, g: &SpaceTimeGrid, dx: f64) -> Result<f64> {
    let dt = 0.5 * dx / p.v.abs();
    let nx = ((g.x1 - g.x0) / dx).round() as usize + 1;
    let nt = ((g.t1 - g.t0) / dt).round() as usize + 1;
    if nx < MIN_SEGMENT_POINTS || nt < MIN_SEGMENT_POINTS {
        return Err(Error::GridTooCoarse {
            start: g.x0,
            end: g.x1,
            points: nx.min(nt),
            required: MIN_SEGMENT_POINTS,
        });
    }
    let k = (p.omega / p.v).abs();
    let w = if k > 0.0 {
        (0.25 * std::f64::consts::TAU / k / dx).ceil() as usize
    } else {
        nx
    };
    let value = |i: usize, j: usize| wave_value(g.x0 + i as f64 * dx, g.t0 + j as f64 * dt, p);
    let mut worst = 0.0_f64;
    for j in 1..nt - 1 {
        let row: Vec<[f64; 3]> = (0..nx)
            .map(|i| [value(i, j - 1), value(i, j), value(i, j + 1)])
            .collect();
        let mut res = Vec::with_capacity(nx - 2);
        let mut scale = Vec::with_capacity(nx - 2);
        for i in 1..nx - 1 {
            let vtt = (row[i][0] - 2.0 * row[i][1] + row[i][2]) / (dt * dt);
            let vxx = (row[i - 1][1] - 2.0 * row[i][1] + row[i + 1][1]) / (dx * dx);
            res.push((vtt - v_op * v_op * vxx).abs());
            scale.push(vtt.abs() + v_op * v_op * vxx.abs());
        }
        for (r, s) in res.iter().zip(window_max(&scale, w)) {
            if s > 0.0 {
                worst = worst.max(r / s);
            }
        }
    }
    Ok(worst)
}

/// Residual of `∂²V/∂t² − v_op²∂²V/∂x² = 0` on the analytic free wave.
pub fn pde_residual_free(p: &FreeParams, v_op: f64, grid: &SpaceTimeGrid) -> Result<ResidualReport> {
    if !(grid.x1 > grid.x0 && grid.t1 > grid.t0) {
        return Err(Error::InvalidGrid("space-time rectangle is empty".into()));
    }
    let coarse = pde_max_residual(p, v_op, grid, 2.0 * grid.dx)?;
    let fine = pde_max_residual(p, v_op, grid, grid.dx)?;
    Ok(ResidualReport {
        grid_spacing: grid.dx,
        max_rel_residual: fine,
        order_estimate: order(coarse, fine),
        excluded_zones: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootOptions {
    /// Local relative error tolerance per step.
    pub tolerance: f64,
    /// Radii (any order, inside `[r_stop, r_start]`) at which to report `u`.
    pub outputs: Vec<f64>,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            tolerance: 1e-10,
            outputs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotProfile {
    /// Requested radii in the order given, then `r_stop`.
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub steps: usize,
}

impl ShotProfile {
    pub fn at_stop(&self) -> (f64, f64) {
        let last = self.r.len() - 1;
        (self.u[last], self.du[last])
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dp_step(state: &StateParams, r: f64, y: [f64; 2], h: f64) -> ([f64; 2], f64) {
    let f = |r: f64, y: [f64; 2]| [y[1], -state.radial_coefficient(r) * y[0]];
    let mut k = [[0.0; 2]; 7];
    for s in 0..7 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(s) {
            ys[0] += h * A[s][j] * kj[0];
            ys[1] += h * A[s][j] * kj[1];
        }
        k[s] = f(r + C[s] * h, ys);
    }
    let mut y5 = y;
    let mut err = [0.0; 2];
    for s in 0..7 {
        for c in 0..2 {
            y5[c] += h * B5[s] * k[s][c];
            err[c] += h * (B5[s] - B4[s]) * k[s][c];
        }
    }
    let scale = y5[0].abs().max(y5[1].abs() / state.k_o).max(y[0].abs());
    let e = (err[0].abs().max(err[1].abs() / state.k_o)) / scale;
    (y5, e)
}

/// Integrates `u'' + q(r) u = 0` inward from `r_start`, starting on the pure
/// decaying asymptote `(e^{−k₀r}, −k₀e^{−k₀r})`.
pub fn shoot_inward(
    energy: f64,
    z: u32,
    r_start: f64,
    r_stop: f64,
    c: Constants,
    opts: &ShootOptions,
) -> Result<ShotProfile> {
    let state = StateParams::from_energy(energy, z, c)?;
    if r_stop <= state.r_o {
        return Err(Error::CrossesPole { r_o: state.r_o, r_stop });
    }
    if r_start < 3.0 * state.r_o {
        return Err(Error::InvalidArgument(format!(
            "r_start = {r_start} must be at least 3 r_o = {}",
            3.0 * state.r_o
        )));
    }
    if !(r_start > r_stop) {
        return Err(Error::InvalidArgument(format!(
            "need r_start > r_stop, got {r_start} <= {r_stop}"
        )));
    }
    if let Some(&bad) = opts.outputs.iter().find(|&&x| !(x >= r_stop && x <= r_start)) {
        return Err(Error::OutsideDomain {
            r: bad,
            lo: r_stop,
            hi: r_start,
        });
    }
    let tol = opts.tolerance;
    let mut targets: Vec<(f64, usize)> = opts.outputs.iter().copied().zip(0..).collect();
    targets.push((r_stop, opts.outputs.len()));
    targets.sort_by(|a, b| b.0.total_cmp(&a.0));

    let k = state.k_o;
    let mut r = r_start;
    let mut y = [(-k * r).exp(), -k * (-k * r).exp()];
    let mut h = -0.01 / k;
    let mut steps = 0usize;
    let n_out = targets.len();
    let mut out_u = vec![0.0; n_out];
    let mut out_du = vec![0.0; n_out];
    for &(target, slot) in &targets {
        while r > target {
            let mut step = h;
            let landing = r + step <= target;
            if landing {
                step = target - r;
            }
            let (y_new, err) = dp_step(&state, r, y, step);
            if err <= tol {
                r = if landing { target } else { r + step };
                y = y_new;
                steps += 1;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
            };
            if !(landing && err <= tol) {
                h = step * factor;
            }
            if h.abs() < 1e-14 * r.abs().max(1.0) || !h.is_finite() {
                return Err(Error::StepFailure { last_safe_r: r });
            }
        }
        out_u[slot] = y[0];
        out_du[slot] = y[1];
    }
    let mut radii = opts.outputs.clone();
    radii.push(r_stop);
    Ok(ShotProfile {
        r: radii,
        u: out_u,
        du: out_du,
        steps,
    })
}

/// `E_n = −Z²e⁴m/(2ħ²n²)`.
pub fn energy_closed_form(atom: AtomSpec, c: Constants) -> f64 {
    level_energy(atom, c)
}

//! Uniform rectilinear motion: the wave `V(x, t) = A cos(ω(x/v − t) − φ)`
//! and the trajectory carried by its nodes.
//!
//! With `A = ħ` and `k₂ = m` the node conditions fix `ω = mv²/ħ = 2E/ħ` and
//! `λ = h/(mv)`. The phase offset `φ` defaults to zero (the cosine branch);
//! `φ = π/2` turns the wave into the sine solution.

use serde::Serialize;
use std::f64::consts::PI;

use crate::constants::Constants;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeParams {
    pub v: f64,
    pub m: f64,
    pub energy: f64,
    pub omega: f64,
    pub lambda: f64,
    pub amplitude: f64,
    pub k1: f64,
    pub k2: f64,
    pub phase_offset: f64,
}

pub fn free_params(v: f64, m: f64, c: Constants) -> Result<FreeParams> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::ZeroVelocity);
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::NonPositiveMass(m));
    }
    let k1 = m * v * v;
    Ok(FreeParams {
        v,
        m,
        energy: 0.5 * m * v * v,
        omega: k1 / c.hbar,
        lambda: c.h / (m * v.abs()),
        amplitude: c.hbar,
        k1,
        k2: m,
        phase_offset: 0.0,
    })
}

impl FreeParams {
    pub fn with_phase_offset(mut self, phase: f64) -> Self {
        self.phase_offset = phase;
        self
    }

    fn phase(&self, x: f64, t: f64) -> f64 {
        self.omega * (x / self.v - t) - self.phase_offset
    }

    pub fn dv_dx(&self, x: f64, t: f64) -> f64 {
        -(self.omega / self.v) * self.amplitude * self.phase(x, t).sin()
    }

    pub fn dv_dt(&self, x: f64, t: f64) -> f64 {
        self.omega * self.amplitude * self.phase(x, t).sin()
    }
}

pub fn wave_value(x: f64, t: f64, p: &FreeParams) -> f64 {
    p.amplitude * p.phase(x, t).cos()
}

/// Position of node `branch` at time `t`: `x = v[t + (π/ω)(n + ½)]`.
pub fn node_trajectory(p: &FreeParams, branch: i64, t: f64) -> f64 {
    let shift = (PI * (branch as f64 + 0.5) + p.phase_offset) / p.omega;
    p.v * (t + shift)
}

/// `ω_n = ω₀(n + ½)` with `ω₀ = π/|C|`, for `n = 1..=n_max`.
pub fn quantized_frequencies(time_offset: f64, n_max: u32) -> Result<Vec<f64>> {
    if time_offset == 0.0 || !time_offset.is_finite() {
        return Err(Error::ZeroTimeOffset);
    }
    let omega0 = PI / time_offset.abs();
    Ok((1..=n_max).map(|n| omega0 * (f64::from(n) + 0.5)).collect())
}

/// `| |∂V/∂x| − k₂|v| |` at the node of `branch` at time `t`.
///
/// The sign of `sin` alternates between neighbouring nodes, so the gradient
/// condition is compared in magnitude.
pub fn gradient_condition_check(p: &FreeParams, t: f64, branch: i64) -> f64 {
    let x = node_trajectory(p, branch, t);
    (p.dv_dx(x, t).abs() - p.k2 * p.v.abs()).abs()
}

/// `| |∂V/∂t| − k₁ |` at the node of `branch`.
pub fn time_condition_check(p: &FreeParams, t: f64, branch: i64) -> f64 {
    let x = node_trajectory(p, branch, t);
    (p.dv_dt(x, t).abs() - p.k1).abs()
}

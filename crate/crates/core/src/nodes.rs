//! Zero loci of sampled radial waves.
//!
//! A locus is one of
//!
//! * a sign change between two adjacent samples, refined by bisection on the
//!   Hermite interpolant;
//! * a sign change across an exclusion zone, reported at the zone center with
//!   the values and slopes at the two zone edges as its one-sided data;
//! * a local minimum of `|R|` below the tolerance without a sign change.
//!
//! The kind follows the derivative-sign rule: a locus where the slope of `R`
//! has opposite signs on the two sides is a trajectory surface. Otherwise a
//! jump in the one-sided values makes it a discontinuity, and a smooth
//! single-signed crossing is a plain zero.
//!
//! For stationary states the trajectory is frozen (`ẋ = 0`), so the gradient
//! condition `∂V/∂x = k₂ẋ` at the node degenerates to `0 = 0` and gives no
//! discrimination. The detector relies on the slope-sign rule alone.

use serde::Serialize;

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::profile::SampledProfile;
use crate::series::SeriesSolution;
use crate::state::{derive_state, AtomSpec};
use crate::wronskian::{check_superposition, sample_wave, BoundWave, RadialGrid};

/// Relative tolerance (fraction of `max|R|`) used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Track continuation threshold, as a fraction of the reference `r_o`.
pub const JUMP_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    TrajectorySurface,
    PlainZero,
    Discontinuity,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::TrajectorySurface => "trajectory_surface",
            NodeKind::PlainZero => "plain_zero",
            NodeKind::Discontinuity => "discontinuity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Node {
    pub radius: f64,
    pub radius_over_ro: f64,
    pub kind: NodeKind,
    pub left_slope_sign: i8,
    pub right_slope_sign: i8,
    pub value_left: f64,
    pub value_right: f64,
    /// One-sided values differ beyond tolerance (locus inside an exclusion zone).
    pub discontinuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeReport {
    pub r_o: f64,
    pub nodes: Vec<Node>,
}

impl NodeReport {
    pub fn count(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.radius).collect()
    }
}

fn sign(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

fn kind_for(left_slope: i8, right_slope: i8, discontinuous: bool) -> NodeKind {
    if left_slope != right_slope {
        NodeKind::TrajectorySurface
    } else if discontinuous {
        NodeKind::Discontinuity
    } else {
        NodeKind::PlainZero
    }
}

/// Bisection for a sign change of `g` on `[a, b]`.
fn bisect(mut g: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if sign(gm) == sign(ga) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Nodes of an arbitrary sampled profile. `tol` is relative to `max|R|`;
/// `r_ref` scales the localization width and the reported `r/r_o`.
pub fn find_profile_nodes(profile: &SampledProfile, r_ref: f64, tol: f64) -> Result<NodeReport> {
    if profile.len() < 2 {
        return Err(Error::TooFewSamples {
            got: profile.len(),
            required: 2,
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "node tolerance must be positive, got {tol}"
        )));
    }
    let tol_abs = tol * profile.max_abs();
    let width = 1e-12 * r_ref;
    let (r, v, s) = (&profile.r, &profile.value, &profile.slope);
    let mut nodes: Vec<Node> = Vec::new();
    let mut push = |node: Node| {
        if nodes.last().is_none_or(|last: &Node| node.radius - last.radius > width) {
            nodes.push(node);
        }
    };

    for k in 0..profile.len() - 1 {
        let crosses = sign(v[k]) != sign(v[k + 1]);
        if let Some(zone) = profile.gap_zone(k) {
            if crosses {
                let (ls, rs) = (sign(s[k]), sign(s[k + 1]));
                let discontinuous = (v[k] - v[k + 1]).abs() > tol_abs;
                push(Node {
                    radius: zone.center,
                    radius_over_ro: zone.center / r_ref,
                    kind: kind_for(ls, rs, discontinuous),
                    left_slope_sign: ls,
                    right_slope_sign: rs,
                    value_left: v[k],
                    value_right: v[k + 1],
                    discontinuous,
                });
            }
            continue;
        }
        let h = r[k + 1] - r[k];
        let delta = (1e-6 * h).max(width);
        if crosses {
            let root = bisect(|x| profile.hermite(k, x).0, r[k], r[k + 1], width);
            let (value, _) = profile.hermite(k, root);
            let ls = sign(profile.hermite(k, (root - delta).max(r[k])).1);
            let rs = sign(profile.hermite(k, (root + delta).min(r[k + 1])).1);
            push(Node {
                radius: root,
                radius_over_ro: root / r_ref,
                kind: kind_for(ls, rs, false),
                left_slope_sign: ls,
                right_slope_sign: rs,
                value_left: value,
                value_right: value,
                discontinuous: false,
            });
        } else if sign(s[k]) != sign(s[k + 1]) {
            // interior extremum: a touch if |R| dips below tolerance
            let x = bisect(|x| profile.hermite(k, x).1, r[k], r[k + 1], width);
            let (value, _) = profile.hermite(k, x);
            if value.abs() <= tol_abs && sign(value) == sign(v[k]) {
                let ls = sign(profile.hermite(k, (x - delta).max(r[k])).1);
                let rs = sign(profile.hermite(k, (x + delta).min(r[k + 1])).1);
                push(Node {
                    radius: x,
                    radius_over_ro: x / r_ref,
                    kind: kind_for(ls, rs, false),
                    left_slope_sign: ls,
                    right_slope_sign: rs,
                    value_left: value,
                    value_right: value,
                    discontinuous: false,
                });
            }
        }
    }
    Ok(NodeReport { r_o: r_ref, nodes })
}

/// Nodes of `R = u₋/r`. `tol` is relative to `max|R|`.
pub fn find_nodes(wave: &BoundWave, tol: f64) -> Result<NodeReport> {
    if wave.grid.len() < 2 {
        return Err(Error::TooFewSamples {
            got: wave.grid.len(),
            required: 2,
        });
    }
    find_profile_nodes(&wave.radial_profile(), wave.r_o(), tol)
}

/// Kind of the locus at `r_star`, or `None` if the wave has no zero there.
///
/// A point inside an exclusion zone is judged by the zone's one-sided data.
pub fn classify_locus(wave: &BoundWave, r_star: f64, tol: f64) -> Result<Option<NodeKind>> {
    let profile = wave.radial_profile();
    let (lo, hi) = profile.domain();
    let in_zone = profile.zone_containing(r_star);
    if in_zone.is_none() && !(r_star >= lo && r_star <= hi) {
        return Err(Error::OutsideDomain { r: r_star, lo, hi });
    }
    let report = find_nodes(wave, tol)?;
    let reach = match in_zone {
        Some(zone) => zone.half_width,
        None => 1e-6 * wave.r_o(),
    };
    Ok(report
        .nodes
        .iter()
        .filter(|n| (n.radius - r_star).abs() <= reach)
        .min_by(|a, b| (a.radius - r_star).abs().total_cmp(&(b.radius - r_star).abs()))
        .map(|n| n.kind))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSlice {
    pub t: f64,
    /// The superposed wave vanishes identically at this time.
    pub degenerate: bool,
    pub report: NodeReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeTrack {
    /// Index of the first time slice of the track.
    pub start: usize,
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperpositionNodes {
    pub r_ref: f64,
    pub slices: Vec<TimeSlice>,
    pub tracks: Vec<NodeTrack>,
}

/// Grid for a superposition: `r_max` relative to the largest `r_o`, exclusion
/// half-width relative to the smallest, and zones around every state's zeros.
pub fn superposition_grid(
    states: &[SeriesSolution],
    r_max_factor: f64,
    count: usize,
    exclusion_fraction: f64,
) -> Result<RadialGrid> {
    if states.is_empty() {
        return Err(Error::Mismatched("superposition needs at least one state".into()));
    }
    let r_hi = states.iter().map(|s| s.r_o()).fold(0.0, f64::max);
    let r_lo = states.iter().map(|s| s.r_o()).fold(f64::INFINITY, f64::min);
    let centers: Vec<f64> = states.iter().flat_map(|s| s.all_zeros()).collect();
    RadialGrid::new(r_max_factor * r_hi, count, exclusion_fraction * r_lo, &centers)
}

/// Common period `2π/gcd(ω_i)` of the time factors. With `ω_n = ω₁/n²` the
/// gcd is `ω₁/lcm(n_i²)`.
pub fn beat_period(z: u32, levels: &[u32], c: Constants) -> Result<f64> {
    if levels.is_empty() {
        return Err(Error::Mismatched("beat period needs at least one level".into()));
    }
    let omega1 = derive_state(AtomSpec::new(z, 1)?, c).omega;
    let mut l: u64 = 1;
    for &n in levels {
        AtomSpec::new(z, n)?;
        let sq = u64::from(n) * u64::from(n);
        l = l / gcd(l, sq) * sq;
    }
    Ok(std::f64::consts::TAU * l as f64 / omega1)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nodes of `Σ c_i u₋,i(r) cos(ω_i t)/r` at each time, linked into tracks by
/// nearest-radius matching.
pub fn track_superposition_nodes(
    states: &[SeriesSolution],
    weights: &[f64],
    times: &[f64],
    grid: &RadialGrid,
    tol: f64,
) -> Result<SuperpositionNodes> {
    check_superposition(states.iter().map(|s| s.atom), states.len(), weights.len())?;
    if times.len() < 2 {
        return Err(Error::TooFewSamples {
            got: times.len(),
            required: 2,
        });
    }
    let waves: Vec<BoundWave> = states.iter().map(|s| sample_wave(s, grid)).collect::<Result<_>>()?;
    let r_ref = waves.iter().map(|w| w.r_o()).fold(f64::INFINITY, f64::min);
    let profiles: Vec<SampledProfile> = waves.iter().map(|w| w.radial_profile()).collect();
    let scale: f64 = profiles.iter().zip(weights).map(|(p, c)| c.abs() * p.max_abs()).sum();

    let mut slices = Vec::with_capacity(times.len());
    for &t in times {
        let mut value = vec![0.0; grid.len()];
        let mut slope = vec![0.0; grid.len()];
        for ((p, w), &c) in profiles.iter().zip(&waves).zip(weights) {
            let factor = c * (w.state.omega * t).cos();
            for i in 0..grid.len() {
                value[i] += factor * p.value[i];
                slope[i] += factor * p.slope[i];
            }
        }
        let combined = SampledProfile::new(grid.samples.clone(), value, slope, grid.zones())?;
        let degenerate = combined.max_abs() <= 1e-9 * scale;
        let report = if degenerate {
            NodeReport {
                r_o: r_ref,
                nodes: Vec::new(),
            }
        } else {
            find_profile_nodes(&combined, r_ref, tol)?
        };
        slices.push(TimeSlice { t, degenerate, report });
    }
    let tracks = link_tracks(&slices, JUMP_THRESHOLD * r_ref);
    Ok(SuperpositionNodes { r_ref, slices, tracks })
}

/// Mutual-nearest matching between consecutive slices. A node claimed by two
/// tracks, or a track claimed by two nodes, ends the old tracks and starts
/// new ones.
fn link_tracks(slices: &[TimeSlice], threshold: f64) -> Vec<NodeTrack> {
    let mut tracks: Vec<NodeTrack> = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    for (s, slice) in slices.iter().enumerate() {
        let radii = slice.report.radii();
        let ends: Vec<f64> = open.iter().map(|&i| *tracks[i].radii.last().unwrap()).collect();
        let nearest = |x: f64, set: &[f64]| -> Option<usize> {
            set.iter()
                .enumerate()
                .filter(|(_, y)| (x - **y).abs() <= threshold)
                .min_by(|a, b| (x - *a.1).abs().total_cmp(&(x - *b.1).abs()))
                .map(|(i, _)| i)
        };
        let node_to_track: Vec<Option<usize>> = radii.iter().map(|&x| nearest(x, &ends)).collect();
        let track_to_node: Vec<Option<usize>> = ends.iter().map(|&y| nearest(y, &radii)).collect();
        let mut next_open = Vec::new();
        for (j, &x) in radii.iter().enumerate() {
            let matched = node_to_track[j].filter(|&i| {
                track_to_node[i] == Some(j)
                    && node_to_track.iter().filter(|m| **m == Some(i)).count() == 1
                    && track_to_node.iter().filter(|m| **m == Some(j)).count() == 1
            });
            let id = match matched {
                Some(i) => open[i],
                None => {
                    tracks.push(NodeTrack {
                        start: s,
                        times: Vec::new(),
                        radii: Vec::new(),
                    });
                    tracks.len() - 1
                }
            };
            tracks[id].times.push(slice.t);
            tracks[id].radii.push(x);
            next_open.push(id);
        }
        open = next_open;
    }
    tracks
}

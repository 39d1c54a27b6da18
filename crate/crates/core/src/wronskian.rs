//! The decaying bound wave
//!
//! ```text
//! u₋(r) = u₊(r) · ∫₀^r dr'/u₊²      (r < r_o)
//! u₋(r) = u₊(r) · ∫_r^∞ dr'/u₊²     (r > r_o)
//! ```
//!
//! `1/u₊²` has a double pole at every zero of `u₊`. The integrals are taken
//! as Hadamard finite parts: inside a window around each zero `z` the Laurent
//! part `c₂/(r−z)² + c₁/(r−z)` is subtracted, the analytic remainder is
//! integrated numerically and the subtracted part is added back through its
//! antiderivative `−c₂/(r−z) + c₁ ln|r−z|`. At interior zeros `u₊'' = 0`, so
//! `c₁ = 0` and the result is the smooth second solution; at `r_o` the
//! coefficient of the radial equation has a pole, `c₁ ≠ 0`, and `u₋` tends
//! to the one-sided limits `∓1/u₊'(r_o)`.
//!
//! Right of the last window the integral is carried in the scaled form
//! `T(r) = ∫_r^∞ e^{−2k₀(x−r)}/f(x)² dx` (with `u₊ = e^{k₀r} f`) so that the
//! exponentials never overflow; the tail is cut where the scaled integrand
//! has fallen by 1e-16 and closed with the pure exponential asymptote.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{least_squares, solve_linear};
use crate::profile::{ExclusionZone, SampledProfile};
use crate::quadrature::{integrate_graded, GaussLegendre, PanelPolicy};
use crate::series::SeriesSolution;
use crate::state::{AtomSpec, StateParams};

/// Default half-width of the exclusion zones, as a fraction of `r_o`.
pub const DEFAULT_EXCLUSION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureOptions {
    /// Gauss–Legendre points per panel.
    pub order: usize,
    /// Panel refinement; `2` doubles the number of quadrature nodes.
    pub refinement: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            order: 10,
            refinement: 1,
        }
    }
}

/// A zero `z` of `u₊` with the local factorization `f(z + t) = t·Q(t)`.
#[derive(Debug, Clone)]
struct Pole {
    center: f64,
    /// Taylor coefficients `b_1..b_n` of `f` about `z`, so `Q(t) = Σ b_j t^{j−1}`.
    taylor: Vec<f64>,
    half_width: f64,
    /// Power series of `t²/u₊²` about `z`.
    series: Vec<f64>,
    c2: f64,
    c1: f64,
}

const SERIES_TERMS: usize = 18;

impl Pole {
    fn new(sol: &SeriesSolution, center: f64, half_width: f64) -> Self {
        let s_z = sol.r_o() - center;
        let taylor = match sol.linear_factors() {
            // f = lead·Π(s − ρ_i) with s = s_z − t; the factor at ρ = s_z is −t
            Some((lead, zeros)) => {
                let own = zeros
                    .iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - s_z).abs().total_cmp(&(b.1 - s_z).abs()))
                    .map(|(i, _)| i)
                    .expect("at least the zero at s = 0");
                let mut q = vec![-lead];
                for (i, z) in zeros.iter().enumerate() {
                    if i == own {
                        continue;
                    }
                    let d = s_z - z;
                    let mut next = vec![0.0; q.len() + 1];
                    for (j, c) in q.iter().enumerate() {
                        next[j] += d * c;
                        next[j + 1] -= c;
                    }
                    q = next;
                }
                q
            }
            // shift Σ a_m s^m to s = s_z + d, then d = −t
            None => {
                let mut c: Vec<f64> = std::iter::once(0.0).chain(sol.coeffs.iter().copied()).collect();
                let deg = c.len() - 1;
                for i in 0..deg {
                    for j in (i..deg).rev() {
                        c[j] += s_z * c[j + 1];
                    }
                }
                (1..=deg).map(|j| if j % 2 == 0 { c[j] } else { -c[j] }).collect()
            }
        };
        // Laurent data from the power series of h(t) = e^{−2k(z+t)}/Q(t)²
        let k = sol.k_o();
        let mut q2 = vec![0.0; 2 * taylor.len() - 1];
        for (i, a) in taylor.iter().enumerate() {
            for (j, b) in taylor.iter().enumerate() {
                q2[i + j] += a * b;
            }
        }
        let mut inv = [0.0; SERIES_TERMS];
        inv[0] = 1.0 / q2[0];
        for m in 1..SERIES_TERMS {
            let acc: f64 = (1..=m.min(q2.len() - 1)).map(|i| q2[i] * inv[m - i]).sum();
            inv[m] = -acc / q2[0];
        }
        let mut expo = [(-2.0 * k * center).exp(); SERIES_TERMS];
        for j in 1..SERIES_TERMS {
            expo[j] = expo[j - 1] * (-2.0 * k) / j as f64;
        }
        let series: Vec<f64> = (0..SERIES_TERMS)
            .map(|j| (0..=j).map(|i| expo[i] * inv[j - i]).sum())
            .collect();
        Pole {
            center,
            taylor,
            half_width,
            c2: series[0],
            c1: series[1],
            series,
        }
    }

    /// `(f, df/dr)` from the factored form.
    fn poly(&self, x: f64) -> (f64, f64) {
        let t = x - self.center;
        let (mut q, mut dq) = (0.0, 0.0);
        for &b in self.taylor.iter().rev() {
            dq = dq * t + q;
            q = q * t + b;
        }
        (t * q, q + t * dq)
    }

    /// `e^{−2kx}/Q(t)²`, the regular factor of `1/u₊²`.
    fn regular_part(&self, k: f64, x: f64) -> f64 {
        let t = x - self.center;
        let q = self.taylor.iter().rev().fold(0.0, |acc, &b| acc * t + b);
        (-2.0 * k * x).exp() / (q * q)
    }

    /// `1/u₊² − c₂/t² − c₁/t`.
    fn remainder(&self, k: f64, x: f64) -> f64 {
        let t = x - self.center;
        if t.abs() < 0.1 * self.half_width {
            // the direct difference cancels catastrophically this close to z
            return self.series[2..].iter().rev().fold(0.0, |acc, &h| acc * t + h);
        }
        (self.regular_part(k, x) - self.c2 - self.c1 * t) / (t * t)
    }

    fn antiderivative(&self, x: f64) -> f64 {
        let t = x - self.center;
        -self.c2 / t + self.c1 * t.abs().ln()
    }
}

#[derive(Debug, Clone)]
enum Piece {
    Regular,
    Window(Pole),
}

#[derive(Debug, Clone)]
struct Segment {
    lo: f64,
    hi: f64,
    piece: Piece,
}

/// Evaluates `u₋` and `u₋'` for one series solution.
#[derive(Debug, Clone)]
pub struct WronskianIntegrator {
    sol: SeriesSolution,
    rule: GaussLegendre,
    policy: PanelPolicy,
    centers: Vec<f64>,
    poles: Vec<Pole>,
    left: Vec<Segment>,
    left_start: Vec<f64>,
    right_window: Segment,
    tail_start: f64,
    tail_len: f64,
}

impl WronskianIntegrator {
    pub fn new(sol: &SeriesSolution, opts: QuadratureOptions) -> Self {
        let r_o = sol.r_o();
        let k = sol.k_o();
        let centers = sol.all_zeros();
        let refine = f64::from(opts.refinement.max(1));
        let policy = PanelPolicy {
            max_len: (0.5 / k).min(0.1 * r_o) / refine,
            pole_fraction: 0.5 / refine,
        };

        let m = centers.len();
        let widths: Vec<f64> = (0..m)
            .map(|i| {
                let left_gap = if i == 0 {
                    centers[0]
                } else {
                    centers[i] - centers[i - 1]
                };
                let right_gap = if i + 1 < m {
                    centers[i + 1] - centers[i]
                } else {
                    f64::INFINITY
                };
                (0.4 * left_gap.min(right_gap)).min(0.25 * r_o)
            })
            .collect();
        let poles: Vec<Pole> = centers
            .iter()
            .zip(&widths)
            .map(|(&z, &w)| Pole::new(sol, z, w))
            .collect();

        let mut left = Vec::new();
        let mut cursor = 0.0;
        for i in 0..m {
            let (z, w) = (centers[i], widths[i]);
            left.push(Segment {
                lo: cursor,
                hi: z - w,
                piece: Piece::Regular,
            });
            let hi = if i + 1 == m { z } else { z + w };
            left.push(Segment {
                lo: z - w,
                hi,
                piece: Piece::Window(poles[i].clone()),
            });
            cursor = z + w;
        }
        let w_o = widths[m - 1];
        let right_window = Segment {
            lo: r_o,
            hi: r_o + w_o,
            piece: Piece::Window(poles[m - 1].clone()),
        };

        let mut integrator = WronskianIntegrator {
            sol: sol.clone(),
            rule: GaussLegendre::new(opts.order),
            policy,
            centers,
            poles,
            left,
            left_start: Vec::new(),
            right_window,
            tail_start: r_o + w_o,
            tail_len: (1e16_f64).ln() / (2.0 * k),
        };
        let mut starts = Vec::with_capacity(integrator.left.len());
        let mut acc = 0.0;
        for seg in &integrator.left {
            starts.push(acc);
            if seg.hi < r_o {
                acc += integrator.segment_part(seg, seg.lo, seg.hi);
            }
        }
        integrator.left_start = starts;
        integrator
    }

    pub fn solution(&self) -> &SeriesSolution {
        &self.sol
    }

    /// Zeros of `u₊` on r > 0 (the singular points of the integrand).
    pub fn singular_points(&self) -> &[f64] {
        &self.centers
    }

    /// `(f, df/dr)`, from the factored form inside a window so that `f`
    /// keeps its relative accuracy next to a zero.
    fn poly(&self, x: f64) -> (f64, f64) {
        match self.poles.iter().find(|p| (x - p.center).abs() < p.half_width) {
            Some(p) => p.poly(x),
            None => {
                let (f, df, _) = self.sol.poly_derivs(x);
                (f, df)
            }
        }
    }

    /// `(u₊, u₊')`.
    fn u_plus(&self, x: f64) -> (f64, f64) {
        let k = self.sol.k_o();
        let (f, df) = self.poly(x);
        let e = (k * x).exp();
        (e * f, e * (k * f + df))
    }

    fn inverse_square(&self, x: f64) -> f64 {
        let (f, _) = self.poly(x);
        (-2.0 * self.sol.k_o() * x).exp() / (f * f)
    }

    /// `∫_a^b` of the segment integrand, including the analytic part in windows.
    fn segment_part(&self, seg: &Segment, a: f64, b: f64) -> f64 {
        self.segment_smooth(seg, a, b) + self.segment_singular(seg, b) - self.segment_singular(seg, a)
    }

    /// Antiderivative of the subtracted Laurent part (zero outside windows).
    fn segment_singular(&self, seg: &Segment, x: f64) -> f64 {
        match &seg.piece {
            Piece::Regular => 0.0,
            Piece::Window(pole) => pole.antiderivative(x),
        }
    }

    /// `∫_a^b` of the numerically integrated part of the segment integrand.
    fn segment_smooth(&self, seg: &Segment, a: f64, b: f64) -> f64 {
        match &seg.piece {
            Piece::Regular => {
                let mut g = |x: f64| self.inverse_square(x);
                integrate_graded(&self.rule, &mut g, a, b, &self.centers, self.policy)
            }
            Piece::Window(pole) => {
                let others: Vec<f64> = self.centers.iter().copied().filter(|&c| c != pole.center).collect();
                let k = self.sol.k_o();
                let mut rho = |x: f64| pole.remainder(k, x);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let remainder = if lo < pole.center && pole.center < hi {
                    integrate_graded(&self.rule, &mut rho, lo, pole.center, &others, self.policy)
                        + integrate_graded(&self.rule, &mut rho, pole.center, hi, &others, self.policy)
                } else {
                    integrate_graded(&self.rule, &mut rho, lo, hi, &others, self.policy)
                };
                if b < a {
                    -remainder
                } else {
                    remainder
                }
            }
        }
    }

    /// `∫_a^b e^{−2k(x−a)}/f² dx` on the region right of all zeros.
    fn scaled_tail_part(&self, a: f64, b: f64) -> f64 {
        let k = self.sol.k_o();
        let mut g = |x: f64| {
            let (f, _) = self.poly(x);
            (-2.0 * k * (x - a)).exp() / (f * f)
        };
        integrate_graded(&self.rule, &mut g, a, b, &self.centers, self.policy)
    }

    /// `T(a)` from scratch: cut at `a + L`, exponential tail added.
    fn scaled_tail_from(&self, a: f64) -> f64 {
        let k = self.sol.k_o();
        let cut = a + self.tail_len;
        let body = self.scaled_tail_part(a, cut);
        let (f, _) = self.poly(cut);
        let at_cut = (-2.0 * k * (cut - a)).exp() / (f * f);
        body + at_cut / (2.0 * k)
    }

    fn check_admissible(&self, r: f64) -> Result<()> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("u_minus needs r > 0, got {r}")));
        }
        if let Some(&z) = self.centers.iter().find(|&&z| z == r) {
            return Err(Error::SingularPoint {
                r,
                nearest: z + DEFAULT_EXCLUSION * self.sol.r_o(),
            });
        }
        Ok(())
    }

    /// `(u₋, u₋')` at every radius in `radii` (any order).
    pub fn evaluate(&self, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
        for &r in radii {
            self.check_admissible(r)?;
        }
        let r_o = self.sol.r_o();
        let k = self.sol.k_o();
        let mut order: Vec<usize> = (0..radii.len()).collect();
        order.sort_by(|&i, &j| radii[i].total_cmp(&radii[j]));
        let mut out = vec![(0.0, 0.0); radii.len()];

        // left branch: forward accumulation. Inside windows the large
        // antiderivative term is added per point and never accumulated.
        let mut seg_idx = 0usize;
        let mut last_x = 0.0;
        let mut last_smooth = 0.0;
        let mut started = false;
        for &i in order.iter().filter(|&&i| radii[i] < r_o) {
            let r = radii[i];
            let mut j = if started { seg_idx } else { 0 };
            while j + 1 < self.left.len() && r > self.left[j].hi {
                j += 1;
            }
            let seg = &self.left[j];
            let (from, base) = if started && j == seg_idx {
                (last_x, last_smooth)
            } else {
                (seg.lo, self.left_start[j] - self.segment_singular(seg, seg.lo))
            };
            let smooth = base + self.segment_smooth(seg, from, r);
            let f_val = smooth + self.segment_singular(seg, r);
            seg_idx = j;
            last_x = r;
            last_smooth = smooth;
            started = true;
            let (u, du) = self.u_plus(r);
            out[i] = (u * f_val, du * f_val + 1.0 / u);
        }

        // right branch: backward accumulation in scaled form
        let right: Vec<usize> = order.iter().copied().filter(|&i| radii[i] > r_o).collect();
        let mut t_next: Option<(f64, f64)> = None;
        let step_back = |x: f64, next: Option<(f64, f64)>| -> f64 {
            match next {
                None => self.scaled_tail_from(x),
                Some((xn, tn)) => self.scaled_tail_part(x, xn) + (-2.0 * k * (xn - x)).exp() * tn,
            }
        };
        for &i in right.iter().rev().filter(|&&i| radii[i] >= self.tail_start) {
            let r = radii[i];
            let t_val = step_back(r, t_next);
            t_next = Some((r, t_val));
            let (f, df) = self.poly(r);
            let decay = (-k * r).exp();
            out[i] = (f * decay * t_val, decay * ((k * f + df) * t_val - 1.0 / f));
        }
        if right.iter().any(|&i| radii[i] < self.tail_start) {
            let b = self.tail_start;
            let t_b = step_back(b, t_next);
            let f_b = (-2.0 * k * b).exp() * t_b;
            let win = &self.right_window;
            let mut prev: Option<(f64, f64)> = None;
            for &i in right.iter().rev().filter(|&&i| radii[i] < self.tail_start) {
                let r = radii[i];
                let (from, base) = prev.unwrap_or((b, f_b + self.segment_singular(win, b)));
                let smooth = base + self.segment_smooth(win, r, from);
                let fr = smooth - self.segment_singular(win, r);
                prev = Some((r, smooth));
                let (u, du) = self.u_plus(r);
                out[i] = (u * fr, du * fr - 1.0 / u);
            }
        }
        Ok(out)
    }

    pub fn u_minus(&self, r: f64) -> Result<f64> {
        Ok(self.evaluate(&[r])?[0].0)
    }

    /// One-sided limits of `u₋` at `r_o`, extrapolated from evaluations at
    /// `r_o ∓ t` with the local form `A + B τlnτ + Cτ + Dτ²lnτ + Eτ²`,
    /// `τ = t/r_o`.
    pub fn one_sided_limits(&self) -> Result<(f64, f64)> {
        let r_o = self.sol.r_o();
        // the local length scale near r_o shrinks like r_o/n
        let t0 = DEFAULT_EXCLUSION / f64::from(self.sol.atom.n);
        let taus: Vec<f64> = (0..5).map(|i| t0 / f64::from(1u32 << i)).collect();
        let rows: Vec<Vec<f64>> = taus
            .iter()
            .map(|&t| vec![1.0, t * t.ln(), t, t * t * t.ln(), t * t])
            .collect();
        let mut limits = [0.0; 2];
        for (side, sign) in [(0usize, -1.0), (1, 1.0)] {
            let radii: Vec<f64> = taus.iter().map(|t| r_o + sign * t * r_o).collect();
            let values: Vec<f64> = self.evaluate(&radii)?.into_iter().map(|p| p.0).collect();
            let coeffs = solve_linear(rows.clone(), values)
                .ok_or_else(|| Error::InvalidArgument("singular extrapolation system".into()))?;
            limits[side] = coeffs[0];
        }
        Ok((limits[0], limits[1]))
    }
}

pub fn u_minus(r: f64, sol: &SeriesSolution) -> Result<f64> {
    WronskianIntegrator::new(sol, QuadratureOptions::default()).u_minus(r)
}

/// Radial sample points with open exclusion zones `(c − ε, c + ε)` around
/// singular points; the zone edges `c ± ε` are themselves sampled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    pub samples: Vec<f64>,
    pub exclusion_radius: f64,
    pub r_max: f64,
    pub exclusion_centers: Vec<f64>,
}

impl RadialGrid {
    /// `count` uniform points on `(0, r_max]`, minus the zones, plus zone edges.
    pub fn new(r_max: f64, count: usize, exclusion_radius: f64, centers: &[f64]) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::InvalidGrid(format!("r_max must be positive, got {r_max}")));
        }
        if count < 2 {
            return Err(Error::TooFewSamples {
                got: count,
                required: 2,
            });
        }
        if !(exclusion_radius > 0.0) {
            return Err(Error::InvalidGrid("exclusion radius must be positive".into()));
        }
        let mut centers: Vec<f64> = centers.to_vec();
        centers.sort_by(f64::total_cmp);
        centers.dedup();
        for w in centers.windows(2) {
            if w[1] - w[0] <= 2.0 * exclusion_radius {
                return Err(Error::InvalidGrid(format!(
                    "exclusion zones around {} and {} overlap",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&c) = centers.first() {
            if c <= exclusion_radius {
                return Err(Error::InvalidGrid(format!("exclusion zone around {c} reaches r = 0")));
            }
        }
        let inside = |r: f64| centers.iter().any(|&c| (r - c).abs() < exclusion_radius);
        let mut samples: Vec<f64> = (1..=count)
            .map(|i| r_max * i as f64 / count as f64)
            .filter(|&r| !inside(r))
            .collect();
        for &c in &centers {
            for edge in [c - exclusion_radius, c + exclusion_radius] {
                if edge > 0.0 && edge <= r_max {
                    samples.push(edge);
                }
            }
        }
        samples.sort_by(f64::total_cmp);
        samples.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        let grid = RadialGrid {
            samples,
            exclusion_radius,
            r_max,
            exclusion_centers: centers,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid over `(0, r_max_factor·r_o]` for one state with zones of half-width
    /// `exclusion_fraction·r_o` around every zero of `u₊`.
    pub fn for_state(sol: &SeriesSolution, r_max_factor: f64, count: usize, exclusion_fraction: f64) -> Result<Self> {
        let r_o = sol.r_o();
        RadialGrid::new(r_max_factor * r_o, count, exclusion_fraction * r_o, &sol.all_zeros())
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::TooFewSamples {
                got: self.samples.len(),
                required: 2,
            });
        }
        if self.samples[0] <= 0.0 {
            return Err(Error::InvalidGrid("all samples must be positive".into()));
        }
        if self.samples.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("samples must be strictly increasing".into()));
        }
        for &r in &self.samples {
            if let Some(&c) = self
                .exclusion_centers
                .iter()
                .find(|&&c| (r - c).abs() < self.exclusion_radius * (1.0 - 1e-9))
            {
                return Err(Error::InvalidGrid(format!(
                    "sample {r} lies inside the zone around {c}"
                )));
            }
        }
        Ok(())
    }

    pub fn zones(&self) -> Vec<ExclusionZone> {
        self.exclusion_centers
            .iter()
            .map(|&center| ExclusionZone {
                center,
                half_width: self.exclusion_radius,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A bound wave sampled on a radial grid. `r_vals = u_minus / r` is the
/// amplitude shown in the figures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundWave {
    pub atom: AtomSpec,
    pub state: StateParams,
    pub grid: RadialGrid,
    pub u_minus: Vec<f64>,
    pub du_minus: Vec<f64>,
    pub u_plus_vals: Vec<f64>,
    pub r_vals: Vec<f64>,
    pub dr_vals: Vec<f64>,
    pub left_limit_at_ro: f64,
    pub right_limit_at_ro: f64,
}

impl BoundWave {
    pub fn r_o(&self) -> f64 {
        self.state.r_o
    }

    /// Profile of `R(r)` with exact slopes, for interpolation and node search.
    pub fn radial_profile(&self) -> SampledProfile {
        SampledProfile {
            r: self.grid.samples.clone(),
            value: self.r_vals.clone(),
            slope: self.dr_vals.clone(),
            zones: self.grid.zones(),
        }
    }

    pub fn radial_value(&self, r: f64) -> Result<f64> {
        self.radial_profile().eval(r)
    }
}

pub fn sample_wave(sol: &SeriesSolution, grid: &RadialGrid) -> Result<BoundWave> {
    sample_wave_with(sol, grid, QuadratureOptions::default())
}

pub fn sample_wave_with(sol: &SeriesSolution, grid: &RadialGrid, opts: QuadratureOptions) -> Result<BoundWave> {
    grid.validate()?;
    for z in sol.all_zeros() {
        let covered = grid
            .exclusion_centers
            .iter()
            .any(|&c| (c - z).abs() <= 1e-12 * z.abs().max(1.0));
        if !covered {
            return Err(Error::InvalidGrid(format!(
                "grid has no exclusion zone around the zero {z} of u_plus"
            )));
        }
    }
    let integrator = WronskianIntegrator::new(sol, opts);
    let values = integrator.evaluate(&grid.samples)?;
    let (left, right) = integrator.one_sided_limits()?;
    let mut u_minus = Vec::with_capacity(values.len());
    let mut du_minus = Vec::with_capacity(values.len());
    let mut r_vals = Vec::with_capacity(values.len());
    let mut dr_vals = Vec::with_capacity(values.len());
    let mut u_plus_vals = Vec::with_capacity(values.len());
    for (&r, &(u, du)) in grid.samples.iter().zip(&values) {
        u_minus.push(u);
        du_minus.push(du);
        r_vals.push(u / r);
        dr_vals.push(du / r - u / (r * r));
        u_plus_vals.push(sol.u_plus_derivs(r).0);
    }
    Ok(BoundWave {
        atom: sol.atom,
        state: sol.state,
        grid: grid.clone(),
        u_minus,
        du_minus,
        u_plus_vals,
        r_vals,
        dr_vals,
        left_limit_at_ro: left,
        right_limit_at_ro: right,
    })
}

/// `V_n(r, t) = u₋(r) cos(ω_n t)/r`, interpolated on the sampled wave.
pub fn wave_full(r: f64, t: f64, wave: &BoundWave) -> Result<f64> {
    Ok(wave.radial_value(r)? * (wave.state.omega * t).cos())
}

/// `Σ c_i V_i(r, t)`.
pub fn superpose(waves: &[BoundWave], weights: &[f64], r: f64, t: f64) -> Result<f64> {
    check_superposition(waves.iter().map(|w| w.atom), waves.len(), weights.len())?;
    waves
        .iter()
        .zip(weights)
        .map(|(w, &c)| Ok(c * wave_full(r, t, w)?))
        .sum()
}

pub(crate) fn check_superposition(
    atoms: impl Iterator<Item = AtomSpec>,
    n_waves: usize,
    n_weights: usize,
) -> Result<()> {
    if n_waves == 0 {
        return Err(Error::Mismatched("superposition needs at least one state".into()));
    }
    if n_waves != n_weights {
        return Err(Error::Mismatched(format!("{n_waves} states but {n_weights} weights")));
    }
    let mut z0 = None;
    for a in atoms {
        match z0 {
            None => z0 = Some(a.z),
            Some(z) if z != a.z => return Err(Error::MixedCharge(z, a.z)),
            _ => {}
        }
    }
    Ok(())
}

/// Exponential decay rate of the far tail of `u₋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFit {
    /// Fitted `κ` in `|u₋| ≈ C e^{−κr} r^{−p}`.
    pub rate: f64,
    /// Fitted algebraic power `p`.
    pub power: f64,
    /// Window `[from, to]` in bohr.
    pub window: (f64, f64),
}

/// Least-squares fit of `ln|u₋| = c − κr − p ln r` on `points` radii spread
/// over `[from·r_o, to·r_o]`.
///
/// The local decay rate of the decaying solution is `√(k₀² + β₁/(r − r_o))`,
/// so the algebraic factor has to be part of the model before `κ` can be
/// compared with `k₀`.
pub fn tail_decay_fit(sol: &SeriesSolution, from: f64, to: f64, points: usize) -> Result<TailFit> {
    if !(from > 1.0 && to > from) || points < 3 {
        return Err(Error::InvalidArgument(format!(
            "tail window must satisfy 1 < from < to with >= 3 points (got {from}, {to}, {points})"
        )));
    }
    let r_o = sol.r_o();
    let radii: Vec<f64> = (0..points)
        .map(|i| r_o * (from + (to - from) * i as f64 / (points - 1) as f64))
        .collect();
    let values = WronskianIntegrator::new(sol, QuadratureOptions::default()).evaluate(&radii)?;
    let y: Vec<f64> = values.iter().map(|p| p.0.abs().ln()).collect();
    let cols = vec![
        vec![1.0; points],
        radii.iter().map(|r| r / r_o).collect::<Vec<_>>(),
        radii.iter().map(|r| (r / r_o).ln()).collect::<Vec<_>>(),
    ];
    let c = least_squares(&cols, &y).ok_or_else(|| Error::InvalidArgument("degenerate tail fit".into()))?;
    Ok(TailFit {
        rate: -c[1] / r_o,
        power: -c[2],
        window: (radii[0], radii[points - 1]),
    })
}

//! The growing branch `u₊ = e^{k₀r} Σ_{m=1}^{n} a_m (r_o − r)^m` of the radial
//! equation and the quantization condition that makes it terminate.
//!
//! The coefficients follow `a_{m+1} = (2k₀m − β₁)/((m+1)m) · a_m` from
//! `a₁ = 1`. The overall constant in front of `u₊` is fixed to one.

use serde::Serialize;

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::state::{derive_state, AtomSpec, StateParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSolution {
    pub atom: AtomSpec,
    pub state: StateParams,
    /// `a_1..a_n`.
    pub coeffs: Vec<f64>,
    /// Real zeros of `Σ a_m s^{m−1}` in the variable `s`, ascending.
    pub roots: Vec<f64>,
}

/// Recurrence factor `(2k₀m − β₁)/((m+1)m)` for the growing branch.
fn growth_factor(state: &StateParams, m: usize) -> f64 {
    let mf = m as f64;
    (2.0 * state.k_o * mf - state.beta1) / ((mf + 1.0) * mf)
}

pub fn build_series(atom: AtomSpec, c: Constants) -> SeriesSolution {
    let state = derive_state(atom, c);
    let n = atom.n as usize;
    let mut coeffs = Vec::with_capacity(n);
    coeffs.push(1.0);
    for m in 1..n {
        let next = growth_factor(&state, m) * coeffs[m - 1];
        coeffs.push(next);
    }
    let mut roots = real_roots(&coeffs);
    roots.sort_by(f64::total_cmp);
    SeriesSolution {
        atom,
        state,
        coeffs,
        roots,
    }
}

impl SeriesSolution {
    pub fn r_o(&self) -> f64 {
        self.state.r_o
    }

    pub fn k_o(&self) -> f64 {
        self.state.k_o
    }

    /// One more application of the recurrence past the last kept term.
    pub fn next_coefficient(&self) -> f64 {
        let n = self.coeffs.len();
        growth_factor(&self.state, n) * self.coeffs[n - 1]
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |acc, a| acc.max(a.abs()))
    }

    /// Leading coefficient and all zeros in `s` (including `s = 0`) when
    /// every zero of the polynomial is real.
    pub fn linear_factors(&self) -> Option<(f64, Vec<f64>)> {
        if self.roots.len() + 1 != self.coeffs.len() {
            return None;
        }
        let mut all = Vec::with_capacity(self.coeffs.len());
        all.push(0.0);
        all.extend_from_slice(&self.roots);
        Some((self.coeffs[self.coeffs.len() - 1], all))
    }

    /// Polynomial part `f(r) = Σ a_m s^m` and its first two r-derivatives,
    /// with `s = r_o − r`.
    ///
    /// The product over linear factors is used when all zeros are real: it
    /// keeps full relative accuracy where the alternating power sum cancels.
    pub fn poly_derivs(&self, r: f64) -> (f64, f64, f64) {
        let s = self.r_o() - r;
        if let Some((lead, zeros)) = self.linear_factors() {
            let (mut p, mut dp, mut ddp) = (lead, 0.0, 0.0);
            for z in zeros {
                let l = s - z;
                ddp = ddp * l + 2.0 * dp;
                dp = dp * l + p;
                p *= l;
            }
            return (p, -dp, ddp);
        }
        // Horner on Σ a_m s^m = s · Σ a_m s^{m-1}
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            ddp = ddp * s + 2.0 * dp;
            dp = dp * s + p;
            p = p * s + a;
        }
        // f = s p(s); df/ds = p + s p'; d²f/ds² = 2p' + s p''
        let f = s * p;
        let fs = p + s * dp;
        let fss = 2.0 * dp + s * ddp;
        (f, -fs, fss)
    }

    pub fn poly(&self, r: f64) -> f64 {
        self.poly_derivs(r).0
    }

    /// `u₊(r)`, `u₊'(r)` and `u₊''(r)`.
    pub fn u_plus_derivs(&self, r: f64) -> (f64, f64, f64) {
        let k = self.k_o();
        let (f, df, ddf) = self.poly_derivs(r);
        let e = (k * r).exp();
        (e * f, e * (k * f + df), e * (k * k * f + 2.0 * k * df + ddf))
    }

    /// Real roots of the reduced polynomial `Σ a_m s^{m−1}` mapped to
    /// `r = r_o − s`, keeping `r > 0`. Sorted ascending.
    pub fn interior_zeros(&self) -> Vec<f64> {
        let mut zeros: Vec<f64> = self.roots.iter().map(|s| self.r_o() - s).filter(|&r| r > 0.0).collect();
        zeros.sort_by(f64::total_cmp);
        zeros
    }

    /// All zeros of `u₊` on `r > 0`, including `r_o`, sorted.
    pub fn all_zeros(&self) -> Vec<f64> {
        let mut z = self.interior_zeros();
        z.push(self.r_o());
        z.sort_by(f64::total_cmp);
        z
    }
}

pub fn u_plus(r: f64, sol: &SeriesSolution) -> f64 {
    if r == sol.r_o() {
        return 0.0;
    }
    sol.u_plus_derivs(r).0
}

pub fn interior_zeros(sol: &SeriesSolution) -> Vec<f64> {
    sol.interior_zeros()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect()
}

/// Bisection on a sign-changing bracket down to adjacent floats.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of `Σ c_i x^i`. Critical points of the polynomial (roots of
/// its derivative, found recursively) split the line into monotone pieces,
/// each bracketing at most one root.
pub(crate) fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c[c.len() - 1] == 0.0 {
        c.pop();
    }
    let degree = c.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = c[degree];
    let bound = 1.0 + c[..degree].iter().fold(0.0_f64, |acc, a| acc.max((a / lead).abs()));
    let mut knots = vec![-bound];
    knots.extend(real_roots(&derivative(&c)));
    knots.push(bound);

    let p = |x: f64| horner(&c, x);
    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (p(a), p(b));
        if fa == 0.0 {
            if roots.last().is_none_or(|&r| r != a) {
                roots.push(a);
            }
            continue;
        }
        if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(p, a, b));
        }
    }
    if p(bound) == 0.0 {
        roots.push(bound);
    }
    roots
}

/// Scans `(e_lo, e_hi)` for energies at which `β₁(E)/(2k₀(E))` is a positive
/// integer. Brackets come from a 1001-point grid; every integer crossing in
/// a cell is refined by bisection.
pub fn quantization_scan(z: u32, e_lo: f64, e_hi: f64, c: Constants) -> Result<Vec<(u32, f64)>> {
    if z == 0 {
        return Err(Error::InvalidAtom { z, n: 1 });
    }
    if !(e_lo < e_hi && e_hi < 0.0) || !e_lo.is_finite() {
        return Err(Error::InvalidEnergyRange { lo: e_lo, hi: e_hi });
    }
    let ratio = |e: f64| {
        StateParams::from_energy(e, z, c)
            .map(|s| s.quantum_ratio())
            .unwrap_or(f64::NAN)
    };
    const CELLS: usize = 1000;
    let grid: Vec<f64> = (0..=CELLS)
        .map(|i| e_lo + (e_hi - e_lo) * i as f64 / CELLS as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&e| ratio(e)).collect();

    let mut found = Vec::new();
    for i in 0..CELLS {
        let (ea, eb) = (grid[i], grid[i + 1]);
        let (ga, gb) = (values[i], values[i + 1]);
        let (lo, hi) = if ga <= gb { (ga, gb) } else { (gb, ga) };
        // integers in the half-open range (lo, hi]
        let first = lo.floor() as i64 + 1;
        let last = hi.floor() as i64;
        for k in first.max(1)..=last {
            let kf = k as f64;
            let e = if (ga - kf) == 0.0 {
                ea
            } else if (gb - kf) == 0.0 {
                eb
            } else {
                bisect(|e| ratio(e) - kf, ea, eb)
            };
            if e > e_lo && e < e_hi {
                found.push((k as u32, e));
            }
        }
    }
    found.sort_by_key(|p| p.0);
    found.dedup_by_key(|p| p.0);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn series(z: u32, n: u32) -> SeriesSolution {
        build_series(AtomSpec::new(z, n).unwrap(), Constants::ATOMIC)
    }

    #[test]
    fn low_order_coefficients() {
        let s = series(1, 1);
        assert_eq!(s.coeffs, vec![1.0]);
        assert!(s.next_coefficient().abs() < 1e-15);

        let s = series(1, 2);
        assert_eq!(s.coeffs.len(), 2);
        assert_relative_eq!(s.coeffs[1], -0.5, max_relative = 1e-15);

        let s = series(1, 3);
        assert_relative_eq!(s.coeffs[1], -2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(s.coeffs[2], 2.0 / 27.0, max_relative = 1e-14);
        assert!(s.next_coefficient().abs() < 1e-16);
    }

    #[test]
    fn termination_over_table() {
        for z in 1..=3 {
            for n in 1..=12 {
                let s = series(z, n);
                assert_eq!(s.coeffs.len(), n as usize);
                assert!(s.next_coefficient().abs() <= 1e-14 * s.max_abs_coefficient());
            }
        }
    }

    #[test]
    fn u_plus_values() {
        let s = series(1, 1);
        assert_eq!(u_plus(2.0, &s), 0.0);
        assert_relative_eq!(u_plus(0.0, &s), 2.0, max_relative = 1e-15);
        let s = series(1, 2);
        assert_relative_eq!(u_plus(0.0, &s), -24.0, max_relative = 1e-15);
        assert_eq!(u_plus(s.r_o(), &s), 0.0);
    }

    #[test]
    fn u_plus_changes_sign_at_r_o() {
        for n in 1..=6 {
            let s = series(1, n);
            let eps = 1e-6 * s.r_o();
            assert!(u_plus(s.r_o() - eps, &s) * u_plus(s.r_o() + eps, &s) < 0.0);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let s = series(1, 3);
        for r in [0.7, 5.0, 13.0, 25.0] {
            let h = 1e-5;
            let (_, du, ddu) = s.u_plus_derivs(r);
            let fd1 = (u_plus(r + h, &s) - u_plus(r - h, &s)) / (2.0 * h);
            let h2 = 1e-3;
            let fd2 = (u_plus(r + h2, &s) - 2.0 * u_plus(r, &s) + u_plus(r - h2, &s)) / (h2 * h2);
            assert_relative_eq!(du, fd1, max_relative = 1e-7);
            assert_relative_eq!(ddu, fd2, max_relative = 1e-4);
        }
    }

    #[test]
    fn interior_zero_locations() {
        assert!(series(1, 1).interior_zeros().is_empty());
        let z = series(1, 2).interior_zeros();
        assert_eq!(z.len(), 1);
        assert_relative_eq!(z[0], 6.0, max_relative = 1e-14);
        // 1 − (2/3)s + (2/27)s² = 0  →  s = (9 ± √27)/2
        let z = series(1, 3).interior_zeros();
        let d = 27.0_f64.sqrt();
        assert_eq!(z.len(), 2);
        assert_relative_eq!(z[0], 18.0 - (9.0 + d) / 2.0, max_relative = 1e-13);
        assert_relative_eq!(z[1], 18.0 - (9.0 - d) / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn interior_zeros_are_zeros() {
        for z in 1..=3 {
            for n in 2..=12 {
                let s = series(z, n);
                let zeros = s.interior_zeros();
                assert_eq!(zeros.len(), n as usize - 1, "Z={z} n={n}");
                for &r in &zeros {
                    assert!(r > 0.0 && r < s.r_o());
                    let (_, du, _) = s.u_plus_derivs(r);
                    // a step of 1e-12 relative must cross the zero
                    let h = 1e-11 * s.r_o();
                    assert!(u_plus(r - h, &s) * u_plus(r + h, &s) <= 0.0, "Z={z} n={n} r={r}");
                    assert!(du != 0.0);
                }
            }
        }
    }

    #[test]
    fn real_roots_of_known_polynomials() {
        // (x − 1)(x − 2)(x + 3) = x³ − 7x + 6
        let r = real_roots(&[6.0, -7.0, 0.0, 1.0]);
        assert_eq!(r.len(), 3);
        assert_relative_eq!(r[0], -3.0, max_relative = 1e-14);
        assert_relative_eq!(r[1], 1.0, max_relative = 1e-14);
        assert_relative_eq!(r[2], 2.0, max_relative = 1e-14);
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
        assert!(real_roots(&[4.0]).is_empty());
    }

    #[test]
    fn scan_recovers_levels() {
        let c = Constants::ATOMIC;
        let found = quantization_scan(1, -1.0, -0.01, c).unwrap();
        let ns: Vec<u32> = found.iter().map(|p| p.0).collect();
        assert_eq!(ns, (1..=7).collect::<Vec<_>>());
        for &(n, e) in &found {
            let nf = f64::from(n);
            assert_relative_eq!(e, -1.0 / (2.0 * nf * nf), max_relative = 1e-9);
        }
        assert_relative_eq!(found[2].1, -1.0 / 18.0, max_relative = 1e-9);

        let found = quantization_scan(2, -3.0, -0.3, c).unwrap();
        assert_eq!(found.len(), 2);
        assert_relative_eq!(found[0].1, -2.0, max_relative = 1e-9);
        assert_relative_eq!(found[1].1, -0.5, max_relative = 1e-9);

        // E_5 = −0.02 sits on the open boundary; E_6 and E_7 are inside
        let found = quantization_scan(1, -0.02, -0.01, c).unwrap();
        let ns: Vec<u32> = found.iter().map(|p| p.0).collect();
        assert_eq!(ns, vec![6, 7]);
        assert_relative_eq!(found[0].1, -1.0 / 72.0, max_relative = 1e-9);
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        let c = Constants::ATOMIC;
        assert!(quantization_scan(1, -0.1, -0.2, c).is_err());
        assert!(quantization_scan(1, -0.1, 0.0, c).is_err());
        assert!(quantization_scan(1, -0.3, -0.29, c).unwrap().is_empty());
    }
}

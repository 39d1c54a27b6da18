//! Piecewise cubic Hermite representation of a sampled radial function whose
//! samples avoid exclusion zones around singular points.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExclusionZone {
    pub center: f64,
    pub half_width: f64,
}

impl ExclusionZone {
    /// Open interval `(center − h, center + h)`.
    pub fn contains(&self, r: f64) -> bool {
        (r - self.center).abs() < self.half_width
    }
}

/// Samples `(r, value, slope)` with exact slopes; interpolation never spans
/// an interval that contains a zone center.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub r: Vec<f64>,
    pub value: Vec<f64>,
    pub slope: Vec<f64>,
    pub zones: Vec<ExclusionZone>,
}

impl SampledProfile {
    pub fn new(r: Vec<f64>, value: Vec<f64>, slope: Vec<f64>, zones: Vec<ExclusionZone>) -> Result<Self> {
        if r.len() != value.len() || r.len() != slope.len() {
            return Err(Error::Mismatched(format!(
                "profile arrays have lengths {}, {}, {}",
                r.len(),
                value.len(),
                slope.len()
            )));
        }
        if r.len() < 2 {
            return Err(Error::TooFewSamples {
                got: r.len(),
                required: 2,
            });
        }
        if r.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("radii must be strictly increasing".into()));
        }
        Ok(SampledProfile { r, value, slope, zones })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.r[0], self.r[self.r.len() - 1])
    }

    pub fn max_abs(&self) -> f64 {
        self.value.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Zone whose center lies strictly between samples `k` and `k + 1`.
    pub fn gap_zone(&self, k: usize) -> Option<ExclusionZone> {
        let (a, b) = (self.r[k], self.r[k + 1]);
        self.zones.iter().copied().find(|z| z.center > a && z.center < b)
    }

    pub fn zone_containing(&self, r: f64) -> Option<ExclusionZone> {
        self.zones.iter().copied().find(|z| z.contains(r))
    }

    /// Index `k` with `r_k <= r <= r_{k+1}` on an interpolable interval.
    pub fn locate(&self, r: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(r >= lo && r <= hi) {
            return Err(Error::OutsideDomain { r, lo, hi });
        }
        if let Some(zone) = self.zone_containing(r) {
            let left = zone.center - zone.half_width;
            let right = zone.center + zone.half_width;
            let nearest = if r < zone.center { left } else { right };
            return Err(Error::InExclusionZone {
                r,
                center: zone.center,
                nearest,
            });
        }
        let k = match self.r.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i.min(self.r.len() - 2),
            Err(i) => i - 1,
        };
        if let Some(zone) = self.gap_zone(k) {
            let nearest = if r < zone.center { self.r[k] } else { self.r[k + 1] };
            return Err(Error::InExclusionZone {
                r,
                center: zone.center,
                nearest,
            });
        }
        Ok(k)
    }

    /// Hermite value and slope on interval `k`.
    pub fn hermite(&self, k: usize, r: f64) -> (f64, f64) {
        let (x0, x1) = (self.r[k], self.r[k + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (y0, y1) = (self.value[k], self.value[k + 1]);
        let (m0, m1) = (self.slope[k] * h, self.slope[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let value = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        let slope = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
        (value, slope)
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        let k = self.locate(r)?;
        Ok(self.hermite(k, r).0)
    }

    pub fn eval_with_slope(&self, r: f64) -> Result<(f64, f64)> {
        let k = self.locate(r)?;
        Ok(self.hermite(k, r))
    }

    pub fn scaled(&self, factor: f64) -> SampledProfile {
        SampledProfile {
            r: self.r.clone(),
            value: self.value.iter().map(|v| v * factor).collect(),
            slope: self.slope.iter().map(|v| v * factor).collect(),
            zones: self.zones.clone(),
        }
    }
}

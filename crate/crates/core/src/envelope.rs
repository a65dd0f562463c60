//! Level-convex envelopes of sampled profiles.
//!
//! For samples `ξ_k` with values `f_k`, the envelope is
//! `f^lc(ξ) = inf { λ in the ladder of sampled values : ξ ∈ conv{ξ_k : f_k ≤ λ} }`.
//! Its sublevel sets are the convex hulls of the sampled sublevel sets, so
//! it is the largest level-convex function below `f` on the sample grid.

use alloc::vec;
use alloc::vec::Vec;

use crate::hull;

/// Tolerance for "ξ lies on a hull edge", in units of the sample step.
const HULL_TOL: f64 = 1e-9;

/// A sampled profile together with its level-convex envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeProfile {
    pub dim: usize,
    /// Sample points, row-major in the first axis.
    pub points: Vec<[f64; 2]>,
    pub step: f64,
    pub f: Vec<f64>,
    pub flc: Vec<f64>,
    /// 2-D only: the ladder of finite levels and the hull of each sublevel set.
    levels: Vec<f64>,
    hulls: Vec<Vec<[f64; 2]>>,
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// 1-D envelope on points sorted ascending: `max(prefix min, suffix min)`.
pub fn envelope_1d(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut prefix = vec![f64::INFINITY; n];
    let mut suffix = vec![f64::INFINITY; n];
    let mut m = f64::INFINITY;
    for k in 0..n {
        m = m.min(finite_or_inf(values[k]));
        prefix[k] = m;
    }
    m = f64::INFINITY;
    for k in (0..n).rev() {
        m = m.min(finite_or_inf(values[k]));
        suffix[k] = m;
    }
    (0..n).map(|k| prefix[k].max(suffix[k])).collect()
}

impl EnvelopeProfile {
    /// Builds the envelope of samples. In 1-D the points must be sorted by
    /// their first coordinate.
    pub fn from_samples(
        dim: usize,
        points: Vec<[f64; 2]>,
        f: Vec<f64>,
        step: f64,
    ) -> EnvelopeProfile {
        assert_eq!(points.len(), f.len());
        if dim == 1 {
            let flc = envelope_1d(&f);
            return EnvelopeProfile {
                dim,
                points,
                step,
                f,
                flc,
                levels: Vec::new(),
                hulls: Vec::new(),
            };
        }
        let mut order: Vec<usize> = (0..f.len())
            .filter(|&k| finite_or_inf(f[k]).is_finite())
            .collect();
        order.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
        let mut levels = Vec::new();
        let mut hulls: Vec<Vec<[f64; 2]>> = Vec::new();
        let mut k = 0;
        while k < order.len() {
            let level = f[order[k]];
            let mut batch: Vec<[f64; 2]> = hulls.last().cloned().unwrap_or_default();
            while k < order.len() && f[order[k]] == level {
                batch.push(points[order[k]]);
                k += 1;
            }
            levels.push(level);
            hulls.push(hull::convex_hull(&batch));
        }
        let mut prof = EnvelopeProfile {
            dim,
            points,
            step,
            f,
            flc: Vec::new(),
            levels,
            hulls,
        };
        prof.flc = prof.points.iter().map(|&p| prof.hull_level(p)).collect();
        prof
    }

    fn hull_level(&self, p: [f64; 2]) -> f64 {
        let tol = HULL_TOL * self.step;
        // hulls are nested, so membership is monotone in the level index
        let (mut lo, mut hi) = (0usize, self.hulls.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if hull::hull_contains(&self.hulls[mid], p, tol) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        self.levels.get(lo).copied().unwrap_or(f64::INFINITY)
    }

    /// Envelope value at an arbitrary `ξ` (between samples too).
    pub fn value_at(&self, xi: [f64; 2]) -> f64 {
        if self.dim == 2 {
            return self.hull_level(xi);
        }
        let tol = HULL_TOL * self.step;
        let left = self
            .points
            .iter()
            .zip(&self.f)
            .filter(|(p, _)| p[0] <= xi[0] + tol)
            .map(|(_, &v)| finite_or_inf(v))
            .fold(f64::INFINITY, f64::min);
        let right = self
            .points
            .iter()
            .zip(&self.f)
            .filter(|(p, _)| p[0] >= xi[0] - tol)
            .map(|(_, &v)| finite_or_inf(v))
            .fold(f64::INFINITY, f64::min);
        left.max(right)
    }

    /// Envelope of the envelope, on the same samples.
    pub fn reapply(&self) -> EnvelopeProfile {
        EnvelopeProfile::from_samples(self.dim, self.points.clone(), self.flc.clone(), self.step)
    }

    /// Largest finite difference quotient of `f` between grid neighbours.
    pub fn lipschitz_estimate(&self) -> f64 {
        let n = self.points.len();
        let row = if self.dim == 2 { self.row_len() } else { n };
        let mut lip: f64 = 0.0;
        for a in 0..n {
            let right = ((a + 1) % row != 0 && a + 1 < n).then_some(a + 1);
            let up = (self.dim == 2 && a + row < n).then_some(a + row);
            for b in [right, up].into_iter().flatten() {
                if self.f[a].is_finite() && self.f[b].is_finite() {
                    lip = lip.max((self.f[a] - self.f[b]).abs() / self.step);
                }
            }
        }
        lip
    }

    fn row_len(&self) -> usize {
        let y0 = self.points[0][1];
        self.points.iter().take_while(|p| p[1] == y0).count()
    }
}

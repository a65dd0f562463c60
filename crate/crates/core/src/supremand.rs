//! Supremands `f(x, ξ)`: piecewise closed-form profiles over gradient space.
//!
//! Sublevel sections `E_λ(x) = {ξ : f(x, ξ) ≤ λ}` are sampled on a bounded
//! gradient window; support functions and level-convex envelopes are read
//! off those samples.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use crate::domain::GridDomain;
use crate::envelope::EnvelopeProfile;
use crate::expr::Expr;
use crate::num;
use crate::region::Region;

/// Slack in the sublevel test `f ≤ λ`.
pub const LEVEL_SLACK: f64 = 1e-12;

/// Bounded sampling window `[-W, W]^dim` with resolution `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientWindow {
    pub half_width: f64,
    pub step: f64,
}

impl GradientWindow {
    pub fn new(half_width: f64, step: f64) -> Self {
        GradientWindow { half_width, step }
    }

    pub fn default_for(dim: usize) -> Self {
        if dim == 1 {
            GradientWindow::new(10.0, 0.01)
        } else {
            GradientWindow::new(10.0, 0.05)
        }
    }

    /// Sample index range per axis is `0..=last()`.
    pub fn last(&self) -> usize {
        num::round(2.0 * self.half_width / self.step) as usize
    }

    pub fn coord(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.step
    }

    fn is_valid(&self) -> bool {
        self.half_width > 0.0 && self.step > 0.0 && self.step <= 2.0 * self.half_width
    }

    /// Samples row-major in the first axis, with their per-axis indices.
    pub fn samples(&self, dim: usize) -> impl Iterator<Item = ([f64; 2], [usize; 2])> + '_ {
        let k = self.last();
        let rows = if dim == 2 { k + 1 } else { 1 };
        (0..rows).flat_map(move |j| {
            (0..=k).map(move |i| {
                let y = if dim == 2 { self.coord(j) } else { 0.0 };
                ([self.coord(i), y], [i, j])
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub region: Region,
    pub profile: Expr,
}

/// Value of `sup{ξ·dir : f(x, ξ) ≤ λ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Finite(f64),
    /// The section reaches the window boundary in this direction.
    Unbounded,
    /// `E_λ(x)` has no samples.
    Empty,
}

impl Support {
    /// `+∞` for unbounded, `-∞` for empty.
    pub fn value(self) -> f64 {
        match self {
            Support::Finite(v) => v,
            Support::Unbounded => f64::INFINITY,
            Support::Empty => f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SupremandError {
    #[error("no supremand piece covers cell {cell} at ({}, {})", .at[0], .at[1])]
    Uncovered { cell: usize, at: [f64; 2] },
    #[error("pieces {first} and {second} both cover cell {cell}")]
    Overlap {
        cell: usize,
        first: usize,
        second: usize,
    },
    #[error("direction ({}, {}) is not a unit vector", .0[0], .0[1])]
    NotUnit([f64; 2]),
    #[error("gradient window is empty or malformed")]
    EmptyWindow,
    #[error("supremand is {supremand}-dimensional but the domain is {domain}-dimensional")]
    DimensionMismatch { supremand: usize, domain: usize },
    #[error("profile on cell {cell} is not lower semicontinuous near ξ = ({}, {})", .xi[0], .xi[1])]
    NotLowerSemicontinuous { cell: usize, xi: [f64; 2] },
}

/// Sampled sublevel section `E_λ(x) ∩ window`.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelSection {
    pub cell: usize,
    pub lambda: f64,
    pub samples: Vec<[f64; 2]>,
}

/// Key under which per-cell quantities can be shared: cells of an
/// `x`-independent piece all see the same profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProfileClass {
    Piece(usize),
    Cell(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Supremand {
    pub dim: usize,
    pub pieces: Vec<Piece>,
    /// Declared `β` with `f(x, ξ) ≥ β|ξ|`.
    pub coercivity: Option<f64>,
    /// Declared `α` with `f(x, ξ) ≤ α|ξ|`.
    pub linear_bound: Option<f64>,
    pub window: GradientWindow,
}

impl Supremand {
    pub fn new(dim: usize, pieces: Vec<Piece>) -> Self {
        Supremand {
            dim,
            pieces,
            coercivity: None,
            linear_bound: None,
            window: GradientWindow::default_for(dim),
        }
    }

    /// One profile on the whole domain.
    pub fn homogeneous(dim: usize, profile: Expr) -> Self {
        Supremand::new(
            dim,
            vec![Piece {
                region: Region::All,
                profile,
            }],
        )
    }

    pub fn parse_homogeneous(dim: usize, profile: &str) -> Result<Self, crate::expr::ParseError> {
        Ok(Supremand::homogeneous(dim, Expr::parse(profile)?))
    }

    pub fn with_window(mut self, window: GradientWindow) -> Self {
        self.window = window;
        self
    }

    pub fn with_coercivity(mut self, beta: f64) -> Self {
        self.coercivity = Some(beta);
        self
    }

    pub fn with_linear_bound(mut self, alpha: f64) -> Self {
        self.linear_bound = Some(alpha);
        self
    }

    /// First piece whose region contains `p`.
    pub fn piece_at(&self, p: [f64; 2]) -> Option<usize> {
        self.pieces.iter().position(|pc| pc.region.contains(p))
    }

    pub fn piece_for_cell(&self, dom: &GridDomain, cell: usize) -> Result<usize, SupremandError> {
        let at = dom.cell(cell).center;
        self.piece_at(at)
            .ok_or(SupremandError::Uncovered { cell, at })
    }

    pub fn class_of(&self, dom: &GridDomain, cell: usize) -> Result<ProfileClass, SupremandError> {
        let k = self.piece_for_cell(dom, cell)?;
        Ok(if self.pieces[k].profile.depends_on_x() {
            ProfileClass::Cell(cell)
        } else {
            ProfileClass::Piece(k)
        })
    }

    /// Evaluates at a spatial point.
    pub fn eval_at(&self, p: [f64; 2], xi: [f64; 2]) -> Option<f64> {
        self.piece_at(p).map(|k| self.pieces[k].profile.eval(p, xi))
    }

    pub fn eval(&self, dom: &GridDomain, cell: usize, xi: [f64; 2]) -> Result<f64, SupremandError> {
        let k = self.piece_for_cell(dom, cell)?;
        Ok(self.pieces[k].profile.eval(dom.cell(cell).center, xi))
    }

    /// Checks that every cell is covered by exactly one piece.
    pub fn validate(&self, dom: &GridDomain) -> Result<(), SupremandError> {
        if self.dim != dom.dim() {
            return Err(SupremandError::DimensionMismatch {
                supremand: self.dim,
                domain: dom.dim(),
            });
        }
        if !self.window.is_valid() {
            return Err(SupremandError::EmptyWindow);
        }
        for (cell, c) in dom.cells().iter().enumerate() {
            let mut hits = self
                .pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| p.region.contains(c.center))
                .map(|(k, _)| k);
            match (hits.next(), hits.next()) {
                (None, _) => return Err(SupremandError::Uncovered { cell, at: c.center }),
                (Some(first), Some(second)) => {
                    return Err(SupremandError::Overlap {
                        cell,
                        first,
                        second,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn profile_for(
        &self,
        dom: &GridDomain,
        cell: usize,
    ) -> Result<(&Expr, [f64; 2]), SupremandError> {
        let k = self.piece_for_cell(dom, cell)?;
        Ok((&self.pieces[k].profile, dom.cell(cell).center))
    }

    pub fn section(
        &self,
        dom: &GridDomain,
        cell: usize,
        lambda: f64,
    ) -> Result<SublevelSection, SupremandError> {
        let (profile, x) = self.profile_for(dom, cell)?;
        let samples = self
            .window
            .samples(self.dim)
            .filter(|(xi, _)| profile.eval(x, *xi) <= lambda + LEVEL_SLACK)
            .map(|(xi, _)| xi)
            .collect();
        Ok(SublevelSection {
            cell,
            lambda,
            samples,
        })
    }

    pub fn support_function(
        &self,
        dom: &GridDomain,
        cell: usize,
        lambda: f64,
        dir: [f64; 2],
    ) -> Result<Support, SupremandError> {
        Ok(self.supports(dom, cell, lambda, &[dir])?[0])
    }

    /// Support function in several unit directions from one pass over the
    /// window. The sampled maximiser is refined by bisection along the
    /// direction up to one sample spacing, so smooth boundaries are located
    /// to round-off rather than to the grid step.
    pub fn supports(
        &self,
        dom: &GridDomain,
        cell: usize,
        lambda: f64,
        dirs: &[[f64; 2]],
    ) -> Result<Vec<Support>, SupremandError> {
        for &d in dirs {
            if (num::norm(d) - 1.0).abs() > 1e-9 {
                return Err(SupremandError::NotUnit(d));
            }
        }
        if !self.window.is_valid() {
            return Err(SupremandError::EmptyWindow);
        }
        let (profile, x) = self.profile_for(dom, cell)?;
        let level = lambda + LEVEL_SLACK;
        let members: Vec<([f64; 2], [usize; 2])> = self
            .window
            .samples(self.dim)
            .filter(|(xi, _)| profile.eval(x, *xi) <= level)
            .collect();
        if members.is_empty() {
            return Ok(vec![Support::Empty; dirs.len()]);
        }
        let last = self.window.last();
        let step = self.window.step;
        let inside = |p: [f64; 2]| profile.eval(x, p) <= lambda;
        Ok(dirs
            .iter()
            .map(|&d| {
                let (v, xi, idx) = members
                    .iter()
                    .map(|&(xi, idx)| (num::dot(xi, d), xi, idx))
                    .fold((f64::NEG_INFINITY, [0.0; 2], [0; 2]), |b, c| {
                        if c.0 > b.0 {
                            c
                        } else {
                            b
                        }
                    });
                let touches = (0..self.dim).any(|ax| {
                    (d[ax] > 1e-12 && idx[ax] == last) || (d[ax] < -1e-12 && idx[ax] == 0)
                });
                if touches {
                    return Support::Unbounded;
                }
                let mut best = v.max(refine_support(&inside, xi, d, step, self.dim));
                if self.dim == 2 {
                    // samples tied with the maximiser span a chord; refine from its midpoint too
                    let perp = [-d[1], d[0]];
                    let (mut lo, mut hi) = ((f64::INFINITY, xi), (f64::NEG_INFINITY, xi));
                    for (p, _) in members.iter().filter(|(p, _)| num::dot(*p, d) >= v - 1e-12) {
                        let s = num::dot(*p, perp);
                        if s < lo.0 {
                            lo = (s, *p);
                        }
                        if s > hi.0 {
                            hi = (s, *p);
                        }
                    }
                    let (lo, hi) = (lo.1, hi.1);
                    let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
                    if inside(mid) {
                        best = best.max(refine_support(&inside, mid, d, step, self.dim));
                    }
                }
                Support::Finite(best)
            })
            .collect())
    }

    /// Minimum of `f(x, ·)` over the window samples and the samples attaining it.
    pub fn window_minimum(
        &self,
        dom: &GridDomain,
        cell: usize,
    ) -> Result<(f64, Vec<[f64; 2]>), SupremandError> {
        let (profile, x) = self.profile_for(dom, cell)?;
        let mut min = f64::INFINITY;
        let mut at = Vec::new();
        for (xi, _) in self.window.samples(self.dim) {
            let v = profile.eval(x, xi);
            if v < min {
                min = v;
                at.clear();
            }
            if v == min {
                at.push(xi);
            }
        }
        Ok((min, at))
    }

    /// Level-convex envelope of `f(x, ·)` sampled on `window`.
    pub fn level_convex_envelope(
        &self,
        dom: &GridDomain,
        cell: usize,
        window: GradientWindow,
    ) -> Result<EnvelopeProfile, SupremandError> {
        if !window.is_valid() {
            return Err(SupremandError::EmptyWindow);
        }
        let (profile, x) = self.profile_for(dom, cell)?;
        let (points, values): (Vec<[f64; 2]>, Vec<f64>) = window
            .samples(self.dim)
            .map(|(xi, _)| (xi, profile.eval(x, xi)))
            .unzip();
        Ok(EnvelopeProfile::from_samples(
            self.dim,
            points,
            values,
            window.step,
        ))
    }

    /// Sampled lower-semicontinuity check: at each window sample, the gap
    /// `f(ξ) - min over a ring of radius r` must shrink as `r → 0`.
    pub fn check_lower_semicontinuity(
        &self,
        dom: &GridDomain,
        cell: usize,
    ) -> Result<(), SupremandError> {
        let (profile, x) = self.profile_for(dom, cell)?;
        let dirs: &[[f64; 2]] = if self.dim == 1 {
            &[[1.0, 0.0], [-1.0, 0.0]]
        } else {
            &[
                [1.0, 0.0],
                [-1.0, 0.0],
                [0.0, 1.0],
                [0.0, -1.0],
                [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
                [-FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
            ]
        };
        let gap = |xi: [f64; 2], r: f64| {
            let v = profile.eval(x, xi);
            let m = dirs
                .iter()
                .map(|d| profile.eval(x, [xi[0] + r * d[0], xi[1] + r * d[1]]))
                .fold(f64::INFINITY, f64::min);
            if v.is_infinite() && m.is_infinite() {
                0.0
            } else {
                v - m
            }
        };
        for (xi, _) in self.window.samples(self.dim) {
            let coarse = gap(xi, self.window.step * 0.5);
            if !(coarse > 1e-6) {
                continue;
            }
            let fine = gap(xi, self.window.step * 0.5 / 1024.0);
            if fine > 1e-6 && fine >= 0.5 * coarse {
                return Err(SupremandError::NotLowerSemicontinuous { cell, xi });
            }
        }
        Ok(())
    }

    fn map_profiles(&self, f: impl Fn(&Expr) -> Expr) -> Supremand {
        Supremand {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    region: p.region.clone(),
                    profile: f(&p.profile),
                })
                .collect(),
            ..self.clone()
        }
    }

    /// `f ∨ g`, on the common refinement of both piece partitions.
    pub fn sup_with(&self, other: &Supremand) -> Supremand {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.push(Piece {
                    region: p.region.clone().and(q.region.clone()),
                    profile: p.profile.clone().max(q.profile.clone()),
                });
            }
        }
        Supremand {
            dim: self.dim,
            pieces,
            coercivity: match (self.coercivity, other.coercivity) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
            linear_bound: match (self.linear_bound, other.linear_bound) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            },
            window: self.window,
        }
    }

    /// `f ∨ c`.
    pub fn sup_const(&self, c: f64) -> Supremand {
        let mut s = self.map_profiles(|e| e.clone().max(Expr::c(c)));
        if c > 0.0 {
            s.linear_bound = None;
        }
        s
    }

    /// `f - c`.
    pub fn minus_const(&self, c: f64) -> Supremand {
        let mut s = self.map_profiles(|e| e.clone() - Expr::c(c));
        s.coercivity = None;
        s.linear_bound = None;
        s
    }

    /// `(x, ξ) ↦ f(x, ξ + shift)`.
    pub fn shift_gradient(&self, shift: [f64; 2]) -> Supremand {
        let mut s = self.map_profiles(|e| e.shift_xi(shift));
        if shift != [0.0, 0.0] {
            s.coercivity = None;
            s.linear_bound = None;
        }
        s
    }

    /// `(x, ξ) ↦ f(x, ξ) ∨ |ξ|/n`.
    pub fn sup_norm_over(&self, n: f64) -> Supremand {
        let mut s = self.map_profiles(|e| e.clone().max(Expr::norm_xi() / Expr::c(n)));
        s.coercivity = Some(self.coercivity.unwrap_or(0.0).max(1.0 / n));
        s.linear_bound = None;
        s
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                s.push_str("; ");
            }
            s.push_str(&alloc::format!("{} on {}", p.profile, p.region));
        }
        s
    }
}

/// Largest `ξ·d` over boundary points near the sampled maximiser `xi`.
///
/// Along each line parallel to `d` the upper end of the section is found by
/// bisection; in 2-D the offset of that line is optimised by ternary search
/// over two sample spacings (ties among samples spread up to `√2·step`), which is exact for convex sections up to
/// round-off.
fn refine_support(
    inside: &dyn Fn([f64; 2]) -> bool,
    xi: [f64; 2],
    d: [f64; 2],
    step: f64,
    dim: usize,
) -> f64 {
    let base = num::dot(xi, d);
    let upper_end = |s: f64| -> f64 {
        let perp = [-d[1], d[0]];
        let p = |t: f64| {
            [
                xi[0] + s * perp[0] + t * d[0],
                xi[1] + s * perp[1] + t * d[1],
            ]
        };
        let reach = 3.0 * step;
        let Some(mut lo) = [0.0, -0.5 * step, -step, -2.0 * step, -reach]
            .into_iter()
            .find(|&t| inside(p(t)))
        else {
            return f64::NEG_INFINITY;
        };
        if inside(p(reach)) {
            return base + reach;
        }
        let mut hi = reach;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if inside(p(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        base + lo
    };
    let at_sample = upper_end(0.0);
    if dim == 1 {
        return at_sample;
    }
    let (mut a, mut b) = (-2.0 * step, 2.0 * step);
    for _ in 0..60 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if upper_end(m1) < upper_end(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    at_sample.max(upper_end(0.5 * (a + b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::domain::DomainSpec;

    fn line(lo: f64, hi: f64, h: f64) -> GridDomain {
        GridDomain::build(&DomainSpec::interval(lo, hi, h)).unwrap()
    }

    fn cell_near(dom: &GridDomain, x: f64) -> usize {
        dom.cells()
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.center[0] - x)
                    .abs()
                    .total_cmp(&(b.1.center[0] - x).abs())
            })
            .unwrap()
            .0
    }

    #[test]
    fn example_four_values() {
        let dom = line(-2.0, 2.0, 0.01);
        let f = catalog::boh();
        f.validate(&dom).unwrap();
        assert_eq!(f.eval(&dom, cell_near(&dom, 0.5), [0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(f.eval(&dom, cell_near(&dom, 1.5), [2.0, 0.0]).unwrap(), 4.0);
        let g = Supremand::parse_homogeneous(1, "|xi|").unwrap();
        assert_eq!(g.eval(&dom, 0, [0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn uncovered_and_overlapping_pieces() {
        let dom = line(-2.0, 2.0, 0.1);
        let f = Supremand::new(
            1,
            vec![Piece {
                region: Region::interval(-2.0, 0.0),
                profile: Expr::c(1.0),
            }],
        );
        assert!(matches!(
            f.validate(&dom),
            Err(SupremandError::Uncovered { .. })
        ));
        let c = cell_near(&dom, 1.0);
        assert!(matches!(
            f.eval(&dom, c, [0.0; 2]),
            Err(SupremandError::Uncovered { .. })
        ));
        let g = Supremand::new(
            1,
            vec![
                Piece {
                    region: Region::All,
                    profile: Expr::c(1.0),
                },
                Piece {
                    region: Region::interval(0.0, 1.0),
                    profile: Expr::c(2.0),
                },
            ],
        );
        assert!(matches!(
            g.validate(&dom),
            Err(SupremandError::Overlap { .. })
        ));
    }

    #[test]
    fn support_values() {
        let dom = line(-2.0, 2.0, 0.01);
        let norm = Supremand::parse_homogeneous(1, "|xi|").unwrap();
        for d in [[1.0, 0.0], [-1.0, 0.0]] {
            match norm.support_function(&dom, 3, 2.0, d).unwrap() {
                Support::Finite(v) => assert!((v - 2.0).abs() < 1e-12),
                other => panic!("{other:?}"),
            }
        }
        let f = catalog::boh();
        let inner = cell_near(&dom, 0.0);
        assert_eq!(
            f.support_function(&dom, inner, 0.5, [1.0, 0.0]).unwrap(),
            Support::Unbounded
        );
        let outer = cell_near(&dom, 1.5);
        match f.support_function(&dom, outer, 3.0, [1.0, 0.0]).unwrap() {
            Support::Finite(v) => assert!((v - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            f.support_function(&dom, outer, 1.0, [1.0, 0.0]).unwrap(),
            Support::Empty
        );
        assert!(matches!(
            norm.support_function(&dom, 0, 1.0, [2.0, 0.0]),
            Err(SupremandError::NotUnit(_))
        ));
    }

    #[test]
    fn support_two_dimensional_ball() {
        let dom = GridDomain::build(&DomainSpec::rectangle([0.0, 0.0], [1.0, 1.0], 0.25)).unwrap();
        let f = Supremand::parse_homogeneous(2, "2*nxi").unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        for d in [[1.0, 0.0], [0.0, -1.0], [s, s], [-s, s]] {
            let v = f.support_function(&dom, 0, 3.0, d).unwrap().value();
            assert!((v - 1.5).abs() < 1e-9, "{d:?} {v}");
        }
    }

    #[test]
    fn sections_respect_level() {
        let dom = line(-1.0, 1.0, 0.1);
        let f = catalog::double_well(1).with_window(GradientWindow::new(3.0, 0.05));
        let s = f.section(&dom, 0, 0.25).unwrap();
        assert!(!s.samples.is_empty());
        for xi in &s.samples {
            assert!(f.eval(&dom, 0, *xi).unwrap() <= 0.25 + LEVEL_SLACK);
        }
    }

    #[test]
    fn lower_semicontinuity_check() {
        let dom = line(-1.0, 1.0, 0.1);
        let window = GradientWindow::new(2.0, 0.1);
        let lsc = Supremand::parse_homogeneous(1, "max(1 - |xi|, 0)")
            .unwrap()
            .with_window(window);
        lsc.check_lower_semicontinuity(&dom, 0).unwrap();
        // jump up at every sample: value 1 at xi = 0.05 + 0.1k only. Use an
        // upper-semicontinuous step at xi = 0.5 that is sampled exactly.
        let usc = Supremand::parse_homogeneous(1, "max(0, 1 - 1e9*abs(xi - 0.5))")
            .unwrap()
            .with_window(window);
        assert!(matches!(
            usc.check_lower_semicontinuity(&dom, 0),
            Err(SupremandError::NotLowerSemicontinuous { .. })
        ));
    }

    #[test]
    fn lattice_constructions() {
        let dom = line(-1.0, 1.0, 0.1);
        let f = Supremand::parse_homogeneous(1, "|xi|").unwrap();
        let g = Supremand::parse_homogeneous(1, "1 - xi").unwrap();
        let fg = f.sup_with(&g);
        for xi in [-2.0f64, 0.0, 0.4, 3.0] {
            let want = xi.abs().max(1.0 - xi);
            assert_eq!(fg.eval(&dom, 0, [xi, 0.0]).unwrap(), want);
        }
        let fc = f.sup_const(0.5);
        assert_eq!(fc.eval(&dom, 0, [0.1, 0.0]).unwrap(), 0.5);
        let fn_ = Supremand::parse_homogeneous(1, "0")
            .unwrap()
            .sup_norm_over(4.0);
        assert_eq!(fn_.eval(&dom, 0, [2.0, 0.0]).unwrap(), 0.5);
        let sh = f.shift_gradient([1.0, 0.0]);
        assert_eq!(sh.eval(&dom, 0, [-1.0, 0.0]).unwrap(), 0.0);
    }
}

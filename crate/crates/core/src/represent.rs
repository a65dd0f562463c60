//! The representation supremand `φ(x, ξ) = inf{F(u) : Du(x) = ξ}` and the
//! localized relaxed supremand.
//!
//! `φ` is estimated from above by a finite family of competitors whose
//! gradient on the cell at `x` is exactly `ξ`: the affine `u_ξ`, patches
//! `u_ζ + clamp((ξ-ζ)·(z-x), -m, m)` over backgrounds `ζ` (zero and the
//! minimisers of each profile class), cones from the McShane extension of
//! `u_ξ` off a ball, and in 1-D the field whose other cells each sit at a
//! minimiser of their own profile.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::GridDomain;
use crate::envelope::EnvelopeProfile;
use crate::field::{FieldError, GridFunction};
use crate::num;
use crate::relax::{self, RelaxError, RelaxSettings, Witness};
use crate::supremand::{GradientWindow, ProfileClass, Supremand, SupremandError};

/// Default number of competitors per `(x, ξ)`.
pub const DEFAULT_BUDGET: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum Competitor {
    Affine,
    CellMinimisers,
    Patch {
        background: [f64; 2],
        half_width: f64,
    },
    Cone {
        radius: usize,
        upper: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiEstimate {
    pub value: f64,
    pub best: Competitor,
    pub evaluated: usize,
}

/// Upper estimate of `φ(x, ξ)` for the cell `cell`.
pub fn representation_supremand(
    f: &Supremand,
    dom: &GridDomain,
    cell: usize,
    xi: [f64; 2],
    budget: usize,
) -> Result<PhiEstimate, FieldError> {
    let budget = budget.max(1);
    let backgrounds = backgrounds(f, dom, xi)?;
    let mut best = PhiEstimate {
        value: f64::INFINITY,
        best: Competitor::Affine,
        evaluated: 0,
    };
    let consider = |v: Option<GridFunction<'_>>,
                    kind: Competitor,
                    best: &mut PhiEstimate|
     -> Result<(), FieldError> {
        let Some(v) = v else { return Ok(()) };
        let g = v.gradient_at(cell);
        if (0..dom.dim()).any(|ax| (g[ax] - xi[ax]).abs() > 1e-9 * (1.0 + xi[ax].abs())) {
            return Ok(());
        }
        best.evaluated += 1;
        let value = v.supremal_value(f, None)?;
        if value < best.value {
            best.value = value;
            best.best = kind;
        }
        Ok(())
    };

    consider(
        Some(GridFunction::affine(dom, xi)),
        Competitor::Affine,
        &mut best,
    )?;
    if dom.dim() == 1 && best.evaluated < budget {
        consider(
            cell_minimiser_field(f, dom, cell, xi)?,
            Competitor::CellMinimisers,
            &mut best,
        )?;
    }
    let base = dom.coords(dom.cell(cell).base);
    let span = dom.shape()[0].max(dom.shape()[1]);
    let mut k = 1usize;
    'patches: while k <= span {
        for &zeta in &backgrounds {
            if best.evaluated >= budget {
                break 'patches;
            }
            let diff = [xi[0] - zeta[0], xi[1] - zeta[1]];
            let scale = diff[0].abs() + diff[1].abs();
            if scale == 0.0 {
                continue;
            }
            let m = k as f64 * dom.h() * scale;
            let v = GridFunction::from_fn(dom, |p| {
                let t = diff[0] * (p[0] - base[0]) + diff[1] * (p[1] - base[1]);
                num::dot(zeta, p) + t.clamp(-m, m)
            })?;
            consider(
                Some(v),
                Competitor::Patch {
                    background: zeta,
                    half_width: m,
                },
                &mut best,
            )?;
        }
        k *= 2;
    }
    let affine = GridFunction::affine(dom, xi);
    let lip = num::norm(xi);
    for radius in [0usize, 2, 8] {
        for upper in [false, true] {
            if best.evaluated >= budget {
                break;
            }
            let sub: Vec<bool> = (0..dom.node_count())
                .map(|n| {
                    dom.contains(n)
                        && num::dist(dom.coords(n), base) <= (radius as f64 + 1.5) * dom.h()
                })
                .collect();
            let v = if upper {
                affine
                    .scale(-1.0)
                    .mcshane_extend(&sub, lip)
                    .map(|v| v.scale(-1.0))
            } else {
                affine.mcshane_extend(&sub, lip)
            };
            consider(v.ok(), Competitor::Cone { radius, upper }, &mut best)?;
        }
    }
    Ok(best)
}

/// Zero and one minimiser (the one nearest `ξ`) of each profile class.
fn backgrounds(
    f: &Supremand,
    dom: &GridDomain,
    xi: [f64; 2],
) -> Result<Vec<[f64; 2]>, SupremandError> {
    let mut seen: BTreeMap<ProfileClass, ()> = BTreeMap::new();
    let mut out = vec![[0.0, 0.0]];
    for cell in 0..dom.cells().len() {
        let class = f.class_of(dom, cell)?;
        if seen.insert(class, ()).is_some() {
            continue;
        }
        let (_, at) = f.window_minimum(dom, cell)?;
        if let Some(z) = at
            .iter()
            .copied()
            .min_by(|a, b| num::dist(*a, xi).total_cmp(&num::dist(*b, xi)))
        {
            if !out.contains(&z) {
                out.push(z);
            }
        }
        if out.len() > 16 {
            break;
        }
    }
    Ok(out)
}

/// 1-D field with gradient `ξ` on `cell` and a minimiser of `f(y, ·)` on
/// every other cell.
fn cell_minimiser_field<'d>(
    f: &Supremand,
    dom: &'d GridDomain,
    cell: usize,
    xi: [f64; 2],
) -> Result<Option<GridFunction<'d>>, FieldError> {
    let mut values = vec![0.0; dom.node_count()];
    let mut cache: BTreeMap<ProfileClass, f64> = BTreeMap::new();
    for (k, c) in dom.cells().iter().enumerate() {
        let g = if k == cell {
            xi[0]
        } else {
            let class = f.class_of(dom, k)?;
            match cache.get(&class) {
                Some(g) => *g,
                None => {
                    let (_, at) = f.window_minimum(dom, k)?;
                    let g = at.first().map_or(0.0, |z| z[0]);
                    cache.insert(class, g);
                    g
                }
            }
        };
        if c.forward[0] != c.base + 1 {
            return Ok(None);
        }
        values[c.forward[0]] = values[c.base] + dom.h() * g;
    }
    Ok(Some(GridFunction::new(dom, values)?))
}

/// `φ` and `f` on a grid of cells and gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationTable {
    pub cells: Vec<usize>,
    pub xs: Vec<[f64; 2]>,
    pub xis: Vec<[f64; 2]>,
    /// `phi[i][j]` for cell `i` and gradient `j`.
    pub phi: Vec<Vec<f64>>,
    pub f: Vec<Vec<f64>>,
}

impl RepresentationTable {
    pub fn build(
        f: &Supremand,
        dom: &GridDomain,
        cells: &[usize],
        xis: &[[f64; 2]],
        budget: usize,
    ) -> Result<Self, FieldError> {
        let mut phi = Vec::with_capacity(cells.len());
        let mut fv = Vec::with_capacity(cells.len());
        for &c in cells {
            let mut prow = Vec::with_capacity(xis.len());
            let mut frow = Vec::with_capacity(xis.len());
            for &xi in xis {
                prow.push(representation_supremand(f, dom, c, xi, budget)?.value);
                frow.push(f.eval(dom, c, xi)?);
            }
            phi.push(prow);
            fv.push(frow);
        }
        Ok(RepresentationTable {
            cells: cells.to_vec(),
            xs: cells.iter().map(|&c| dom.cell(c).center).collect(),
            xis: xis.to_vec(),
            phi,
            f: fv,
        })
    }

    /// Entries with `φ < f - tol`: the exceptional set.
    pub fn below_f(&self, tol: f64) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|&(i, j)| self.phi[i][j] < self.f[i][j] - tol)
            .collect()
    }

    /// Entries where `φ` strictly exceeds `f`.
    pub fn above_f(&self, tol: f64) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|&(i, j)| self.phi[i][j] > self.f[i][j] + tol)
            .collect()
    }

    fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.cells.len()).flat_map(move |i| (0..self.xis.len()).map(move |j| (i, j)))
    }

    /// Triples `ξ_a, ξ_b, ξ_c` with `ξ_b` on the segment between the others
    /// (sample order in 1-D) and `φ(ξ_b) > φ(ξ_a) ∨ φ(ξ_c) + tol`.
    pub fn level_convexity_violations(&self, tol: f64) -> usize {
        let on_segment = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
            let ab = [b[0] - a[0], b[1] - a[1]];
            let ac = [c[0] - a[0], c[1] - a[1]];
            let cross = ab[0] * ac[1] - ab[1] * ac[0];
            let t = num::dot(ab, ac);
            cross.abs() < 1e-12 && t > 0.0 && t < num::dot(ac, ac)
        };
        let mut bad = 0;
        for row in &self.phi {
            for a in 0..self.xis.len() {
                for c in a + 1..self.xis.len() {
                    for b in 0..self.xis.len() {
                        if on_segment(self.xis[a], self.xis[b], self.xis[c])
                            && row[b] > row[a].max(row[c]) + tol
                        {
                            bad += 1;
                        }
                    }
                }
            }
        }
        bad
    }
}

/// One probe field on one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitRow {
    pub probe: usize,
    /// `Γ(F)(u, A)` from bisection.
    pub relaxed: f64,
    /// `max_{cells in A} g(x, Du)` with the fitted `g`.
    pub fitted: f64,
    /// `F(u, A)`.
    pub raw: f64,
    pub witness_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionFit {
    pub region: usize,
    pub witness: [f64; 2],
    pub rows: Vec<FitRow>,
    pub max_residual: f64,
}

impl RegionFit {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

/// Localized relaxed supremand: for each region `A`, `g(x, ·)` is fitted as
/// the level-convex envelope of `f(x, ·)` and compared with the bisection
/// value of `Γ(F)(u, A)` on every probe field.
///
/// The witness for each region is the affine `u_ζ` with the smallest
/// `F(u_ζ, A)` among `ζ = 0` and the profile minimisers.
pub fn localized_relaxed_supremand(
    f: &Supremand,
    dom: &GridDomain,
    regions: &[Vec<bool>],
    probes: &[GridFunction<'_>],
    settings: &RelaxSettings,
    envelope_window: GradientWindow,
) -> Result<Vec<RegionFit>, RelaxError> {
    let mut envelopes: BTreeMap<ProfileClass, EnvelopeProfile> = BTreeMap::new();
    let mut fits = Vec::new();
    for (ri, region) in regions.iter().enumerate() {
        let cells: Vec<usize> = dom.cells_within(region).collect();
        if cells.is_empty() {
            return Err(FieldError::NoInteriorCell.into());
        }
        let mut witness = [0.0; 2];
        let mut wbest = f64::INFINITY;
        for z in backgrounds(f, dom, [0.0; 2])? {
            let v = GridFunction::affine(dom, z).supremal_value(f, Some(region))?;
            if v < wbest {
                wbest = v;
                witness = z;
            }
        }
        let s = RelaxSettings {
            region: Some(region.clone()),
            witness: Witness::Affine(witness),
            ..settings.clone()
        };
        let mut rows = Vec::new();
        let mut max_residual: f64 = 0.0;
        for (pi, u) in probes.iter().enumerate() {
            let r = relax::relax_value(f, dom, u, &s)?;
            let mut fitted = f64::NEG_INFINITY;
            for &c in &cells {
                let class = f.class_of(dom, c)?;
                if let Entry::Vacant(slot) = envelopes.entry(class) {
                    slot.insert(f.level_convex_envelope(dom, c, envelope_window)?);
                }
                fitted = fitted.max(envelopes[&class].value_at(u.gradient_at(c)));
            }
            let raw = u.supremal_value(f, Some(region))?;
            max_residual = max_residual.max((r.value - fitted).abs());
            rows.push(FitRow {
                probe: pi,
                relaxed: r.value,
                fitted,
                raw,
                witness_value: r.witness_value,
            });
        }
        fits.push(RegionFit {
            region: ri,
            witness,
            rows,
            max_residual,
        });
    }
    Ok(fits)
}

/// Short label for reports.
pub fn competitor_label(c: &Competitor) -> String {
    match c {
        Competitor::Affine => "affine".into(),
        Competitor::CellMinimisers => "cell-minimisers".into(),
        Competitor::Patch {
            background,
            half_width,
        } => {
            alloc::format!(
                "patch(zeta=({}, {}), m={})",
                background[0],
                background[1],
                half_width
            )
        }
        Competitor::Cone { radius, upper } => {
            alloc::format!(
                "cone(r={radius}, {})",
                if *upper { "upper" } else { "lower" }
            )
        }
    }
}

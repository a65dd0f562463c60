//! The pseudo-distances `d^λ(x, y) = sup{u(x) - u(y) : F(u) ≤ λ}`.
//!
//! On the grid the constraint `F(u) ≤ λ` becomes one difference bound per
//! stencil edge, `u(b) - u(a) ≤ σ(cell, λ, b - a)`, where `σ` is the support
//! function of the sampled sublevel section of the cell that owns the edge.
//! The largest `u(x) - u(y)` under these bounds is the shortest path from
//! `y` to `x`. Three solvers are provided: Dijkstra (with Johnson
//! potentials when some bound is negative), label-correcting Bellman-Ford,
//! and a randomized coordinate ascent over admissible grid functions that
//! never looks at the edge bounds.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{GridDomain, Stencil};
use crate::graph;
use crate::num;
use crate::supremand::{ProfileClass, Support, Supremand, SupremandError, LEVEL_SLACK};

/// Largest domain the coordinate-ascent solver accepts.
pub const BRUTE_NODE_LIMIT: usize = 60;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DistanceError {
    #[error("sublevel section of cell {cell} at level {lambda} is empty")]
    EmptyLevel { cell: usize, lambda: f64 },
    #[error("no grid function satisfies F(u) ≤ {lambda} (negative cycle)")]
    Infeasible { lambda: f64 },
    #[error("source node {0} is outside the domain or region")]
    SourceOutside(usize),
    #[error("coordinate ascent needs at most {limit} nodes, got {nodes}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("coordinate ascent needs finite nonnegative edge bounds")]
    BruteUnsupported,
    #[error(transparent)]
    Supremand(#[from] SupremandError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fast,
    Oracle,
    Brute,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fast => "fast",
            Method::Oracle => "oracle",
            Method::Brute => "brute",
        })
    }
}

/// `dist[x] = d^λ(x, source)`. Nodes outside the domain (or region) hold `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoDistanceField {
    pub lambda: f64,
    pub source: usize,
    pub dist: Vec<f64>,
    pub method: Method,
}

/// Difference bounds of one level, optionally restricted to a node mask.
#[derive(Debug, Clone)]
pub struct LevelGraph {
    pub lambda: f64,
    active: Vec<bool>,
    adjacency: Vec<Vec<(usize, f64)>>,
    potential: Option<Vec<f64>>,
}

impl LevelGraph {
    /// Edge bounds at level `lambda`. With a region, only nodes in the region
    /// and cells whose stencil lies in it take part.
    pub fn build(
        f: &Supremand,
        dom: &GridDomain,
        lambda: f64,
        region: Option<&[bool]>,
    ) -> Result<Self, DistanceError> {
        let active: Vec<bool> = match region {
            Some(r) => (0..dom.node_count())
                .map(|n| dom.contains(n) && r[n])
                .collect(),
            None => dom.mask().to_vec(),
        };
        let cell_ok: Vec<bool> = dom
            .cells()
            .iter()
            .map(|c| c.nodes(dom.dim()).all(|n| active[n]))
            .collect();
        let dirs = dom.directions();
        let mut by_class: BTreeMap<ProfileClass, Vec<Support>> = BTreeMap::new();
        let mut cell_support: Vec<Option<ProfileClass>> = vec![None; dom.cells().len()];
        for cell in (0..dom.cells().len()).filter(|&c| cell_ok[c]) {
            let class = f.class_of(dom, cell)?;
            if let Entry::Vacant(slot) = by_class.entry(class) {
                let s = f.supports(dom, cell, lambda, &dirs)?;
                if s.contains(&Support::Empty) {
                    return Err(DistanceError::EmptyLevel { cell, lambda });
                }
                slot.insert(s);
            }
            cell_support[cell] = Some(class);
        }
        let mut adjacency = vec![Vec::new(); dom.node_count()];
        let mut negative = false;
        for a in (0..dom.node_count()).filter(|&a| active[a]) {
            for e in dom.edges(a) {
                if !active[e.to] {
                    continue;
                }
                let Some(cell) = e.cells.iter().flatten().copied().find(|&c| cell_ok[c]) else {
                    continue;
                };
                let class = cell_support[cell].expect("active cell has a class");
                let w = by_class[&class][e.direction].value() * e.len;
                negative |= w < 0.0;
                adjacency[a].push((e.to, w));
            }
        }
        let mut g = LevelGraph {
            lambda,
            active,
            adjacency,
            potential: None,
        };
        if negative {
            let sources: Vec<usize> = (0..dom.node_count()).filter(|&n| g.active[n]).collect();
            let p = graph::bellman_ford(dom.node_count(), &sources, |a| {
                g.adjacency[a].iter().copied()
            })
            .map_err(|_| DistanceError::Infeasible { lambda })?;
            g.potential = Some(p);
        }
        Ok(g)
    }

    pub fn is_active(&self, node: usize) -> bool {
        self.active[node]
    }

    /// Outgoing bounds `(b, w)` meaning `u(b) - u(a) ≤ w`.
    pub fn bounds(&self, a: usize) -> &[(usize, f64)] {
        &self.adjacency[a]
    }

    pub fn has_negative_bounds(&self) -> bool {
        self.potential.is_some()
    }

    fn check_source(&self, y: usize) -> Result<(), DistanceError> {
        if y >= self.active.len() || !self.active[y] {
            return Err(DistanceError::SourceOutside(y));
        }
        Ok(())
    }

    pub fn fast(&self, y: usize) -> Result<PseudoDistanceField, DistanceError> {
        self.check_source(y)?;
        let dist = graph::dijkstra(self.active.len(), y, self.potential.as_deref(), |a| {
            self.adjacency[a].iter().copied()
        });
        Ok(PseudoDistanceField {
            lambda: self.lambda,
            source: y,
            dist,
            method: Method::Fast,
        })
    }

    pub fn oracle(&self, y: usize) -> Result<PseudoDistanceField, DistanceError> {
        self.check_source(y)?;
        let dist = graph::bellman_ford(self.active.len(), &[y], |a| {
            self.adjacency[a].iter().copied()
        })
        .map_err(|_| DistanceError::Infeasible {
            lambda: self.lambda,
        })?;
        Ok(PseudoDistanceField {
            lambda: self.lambda,
            source: y,
            dist,
            method: Method::Oracle,
        })
    }
}

pub fn pseudo_distance_fast(
    f: &Supremand,
    dom: &GridDomain,
    lambda: f64,
    y: usize,
) -> Result<PseudoDistanceField, DistanceError> {
    LevelGraph::build(f, dom, lambda, None)?.fast(y)
}

pub fn pseudo_distance_oracle(
    f: &Supremand,
    dom: &GridDomain,
    lambda: f64,
    y: usize,
) -> Result<PseudoDistanceField, DistanceError> {
    LevelGraph::build(f, dom, lambda, None)?.oracle(y)
}

/// Randomized Gauss-Seidel ascent over grid functions with `u(y) = 0` whose
/// every cell gradient satisfies `f(cell, Du) ≤ λ`, starting from `u = 0`.
///
/// Each iterate is admissible, so the result is a lower bound for the
/// discrete supremum at every node; in 1-D with interval sections it
/// converges to it. Requires `F(0) ≤ λ` and bounded sections.
pub fn pseudo_distance_brute(
    f: &Supremand,
    dom: &GridDomain,
    lambda: f64,
    y: usize,
    seed: u64,
) -> Result<PseudoDistanceField, DistanceError> {
    let nodes: Vec<usize> = dom.nodes().collect();
    if nodes.len() > BRUTE_NODE_LIMIT {
        return Err(DistanceError::TooLarge {
            nodes: nodes.len(),
            limit: BRUTE_NODE_LIMIT,
        });
    }
    if !dom.contains(y) {
        return Err(DistanceError::SourceOutside(y));
    }
    let dim = dom.dim();
    let level = lambda + LEVEL_SLACK;
    for cell in 0..dom.cells().len() {
        if f.eval(dom, cell, [0.0; 2])? > level {
            return Err(DistanceError::BruteUnsupported);
        }
    }
    let mut touching = vec![Vec::new(); dom.node_count()];
    for (k, c) in dom.cells().iter().enumerate() {
        for n in c.nodes(dim) {
            touching[n].push(k);
        }
    }
    let h = dom.h();
    let reach = 2.0 * f.window.half_width * h;
    let mut u = vec![0.0; dom.node_count()];
    let admissible = |u: &[f64], cells: &[usize]| -> Result<bool, SupremandError> {
        for &k in cells {
            let c = dom.cell(k);
            let mut xi = [0.0; 2];
            for (ax, g) in xi.iter_mut().enumerate().take(dim) {
                *g = (u[c.forward[ax]] - u[c.base]) / h;
            }
            if f.eval(dom, k, xi)? > level {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = nodes.iter().copied().filter(|&n| n != y).collect();
    for _ in 0..20 * nodes.len() {
        order.shuffle(&mut rng);
        let mut moved: f64 = 0.0;
        for &n in &order {
            let base = u[n];
            u[n] = base + reach;
            if admissible(&u, &touching[n])? {
                return Err(DistanceError::BruteUnsupported);
            }
            let (mut lo, mut hi) = (0.0, reach);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                u[n] = base + mid;
                if admissible(&u, &touching[n])? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            u[n] = base + lo;
            moved = moved.max(lo);
        }
        if moved <= 1e-13 * (1.0 + u.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            break;
        }
    }
    let dist = (0..dom.node_count())
        .map(|n| if dom.contains(n) { u[n] } else { f64::INFINITY })
        .collect();
    Ok(PseudoDistanceField {
        lambda,
        source: y,
        dist,
        method: Method::Brute,
    })
}

/// `(α_coeff, β_coeff) = (λ/α, λ/β)` from the declared linear bound `α` and
/// coercivity `β` of `f`.
pub fn coefficients_from_tags(f: &Supremand, lambda: f64) -> (Option<f64>, Option<f64>) {
    (
        f.linear_bound.map(|a| lambda / a),
        f.coercivity.map(|b| lambda / b),
    )
}

/// Slack allowed in [`sandwich_check`]: `coeff · (relative·|x-y| + absolute)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichTolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl SandwichTolerance {
    /// Stencil anisotropy relative to the distance plus `2h`.
    pub fn for_domain(dom: &GridDomain) -> Self {
        let kappa = if dom.dim() == 1 {
            0.0
        } else {
            dom.stencil().anisotropy(dom.dim())
        };
        SandwichTolerance {
            relative: kappa,
            absolute: 2.0 * dom.h(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    /// Node with the largest violation (or smallest margin).
    pub worst_node: usize,
    /// `d / bound` at that node.
    pub ratio: f64,
    /// `bound - d` for the lower bound and `d - bound` for the upper, minus slack.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub lower: Option<BoundCheck>,
    pub upper: Option<BoundCheck>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower.is_none_or(|c| c.holds) && self.upper.is_none_or(|c| c.holds)
    }
}

/// Checks `α_coeff |x-y| ≤ d(x, y) ≤ β_coeff |x-y|_Ω` at every node `x`.
pub fn sandwich_check(
    field: &PseudoDistanceField,
    dom: &GridDomain,
    alpha_coeff: Option<f64>,
    beta_coeff: Option<f64>,
    tol: SandwichTolerance,
) -> Result<SandwichReport, DistanceError> {
    let geo = dom
        .geodesic_distance(field.source)
        .map_err(|_| DistanceError::SourceOutside(field.source))?;
    let y = dom.coords(field.source);
    let targets: Vec<usize> = dom.nodes().filter(|&x| x != field.source).collect();
    let check = |coeff: f64, bound_of: &dyn Fn(usize) -> f64, sign: f64| -> BoundCheck {
        let mut worst = BoundCheck {
            holds: true,
            worst_node: field.source,
            ratio: 1.0,
            excess: f64::NEG_INFINITY,
        };
        for &x in &targets {
            let e = num::dist(y, dom.coords(x));
            let bound = coeff * bound_of(x);
            let slack = coeff * (tol.relative * e + tol.absolute);
            let excess = sign * (bound - field.dist[x]) - slack;
            if excess > worst.excess {
                worst = BoundCheck {
                    holds: excess <= 0.0,
                    worst_node: x,
                    ratio: field.dist[x] / bound,
                    excess,
                };
            }
        }
        worst
    };
    let lower = alpha_coeff.map(|a| check(a, &|x| num::dist(y, dom.coords(x)), 1.0));
    let upper = beta_coeff.map(|b| check(b, &|x| geo.dist[x], -1.0));
    Ok(SandwichReport { lower, upper })
}

/// Largest anisotropy allowed for a stencil, as used by the seminorm checks.
pub fn stencil_tolerance(stencil: Stencil) -> f64 {
    match stencil {
        Stencil::Diagonal => 0.09,
        Stencil::Axis => 0.45,
    }
}

//! Grid functions `u`, their forward-difference gradients, and the
//! quantities built from them: `F(u)`, `F(u, A)`, Lipschitz seminorms,
//! McShane extensions and sawtooth perturbations.

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{self, GridDomain};
use crate::graph;
use crate::num;
use crate::supremand::{Supremand, SupremandError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("expected {expected} node values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value at node {0} is not finite")]
    NonFinite(usize),
    #[error("the region contains no interior cell")]
    NoInteriorCell,
    #[error("Lipschitz constant {given} is below the seminorm {required} of the data")]
    LipschitzTooSmall { required: f64, given: f64 },
    #[error("operation needs a 1-D domain")]
    NotOneDimensional,
    #[error("invalid parameter: {0}")]
    BadParameter(&'static str),
    #[error(transparent)]
    Supremand(#[from] SupremandError),
}

/// Scalar field on the nodes of a domain. Values outside the mask are kept
/// but never read.
#[derive(Debug, Clone)]
pub struct GridFunction<'d> {
    dom: &'d GridDomain,
    values: Vec<f64>,
}

impl PartialEq for GridFunction<'_> {
    fn eq(&self, other: &Self) -> bool {
        core::ptr::eq(self.dom, other.dom) && self.values == other.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGradient {
    pub cell: usize,
    pub xi: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seminorms {
    /// `max_cells |Du|`.
    pub grad_sup: f64,
    /// `sup |u(x) - u(y)| / |x - y|`.
    pub lip_euclid: f64,
    /// `sup |u(x) - u(y)| / |x - y|_Ω`.
    pub lip_geodesic: f64,
}

impl<'d> GridFunction<'d> {
    pub fn new(dom: &'d GridDomain, values: Vec<f64>) -> Result<Self, FieldError> {
        if values.len() != dom.node_count() {
            return Err(FieldError::LengthMismatch {
                expected: dom.node_count(),
                got: values.len(),
            });
        }
        if let Some(n) = dom.nodes().find(|&n| !values[n].is_finite()) {
            return Err(FieldError::NonFinite(n));
        }
        Ok(GridFunction { dom, values })
    }

    /// Samples `g` at every node (outside nodes get 0).
    pub fn from_fn(dom: &'d GridDomain, g: impl Fn([f64; 2]) -> f64) -> Result<Self, FieldError> {
        let values = (0..dom.node_count())
            .map(|n| {
                if dom.contains(n) {
                    g(dom.coords(n))
                } else {
                    0.0
                }
            })
            .collect();
        GridFunction::new(dom, values)
    }

    pub fn constant(dom: &'d GridDomain, c: f64) -> Self {
        GridFunction {
            dom,
            values: vec![c; dom.node_count()],
        }
    }

    /// `u_ξ(x) = ξ·x`.
    pub fn affine(dom: &'d GridDomain, xi: [f64; 2]) -> Self {
        let values = (0..dom.node_count())
            .map(|n| num::dot(xi, dom.coords(n)))
            .collect();
        GridFunction { dom, values }
    }

    pub fn domain(&self) -> &'d GridDomain {
        self.dom
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, node: usize) -> f64 {
        self.values[node]
    }

    fn zip_with(&self, other: &GridFunction<'_>, op: impl Fn(f64, f64) -> f64) -> GridFunction<'d> {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        GridFunction {
            dom: self.dom,
            values,
        }
    }

    pub fn add(&self, other: &GridFunction<'_>) -> GridFunction<'d> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction<'_>) -> GridFunction<'d> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, t: f64) -> GridFunction<'d> {
        GridFunction {
            dom: self.dom,
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    pub fn shift(&self, c: f64) -> GridFunction<'d> {
        GridFunction {
            dom: self.dom,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// `θu + (1-θ)v`.
    pub fn blend(&self, other: &GridFunction<'_>, theta: f64) -> GridFunction<'d> {
        self.zip_with(other, |a, b| theta * a + (1.0 - theta) * b)
    }

    /// `max_nodes |u - v|`.
    pub fn sup_distance(&self, other: &GridFunction<'_>) -> f64 {
        self.dom
            .nodes()
            .map(|n| (self.values[n] - other.values[n]).abs())
            .fold(0.0, f64::max)
    }

    pub fn gradient_at(&self, cell: usize) -> [f64; 2] {
        let c = self.dom.cell(cell);
        let h = self.dom.h();
        let mut xi = [0.0; 2];
        for (ax, g) in xi.iter_mut().enumerate().take(self.dom.dim()) {
            *g = (self.values[c.forward[ax]] - self.values[c.base]) / h;
        }
        xi
    }

    /// Forward differences on every cell.
    pub fn discrete_gradient(&self) -> Vec<CellGradient> {
        (0..self.dom.cells().len())
            .map(|cell| CellGradient {
                cell,
                xi: self.gradient_at(cell),
            })
            .collect()
    }

    /// Discrete `F(u, A)`: the largest `f(x, Du)` over cells inside `region`
    /// (the whole domain when `None`).
    pub fn supremal_value(
        &self,
        f: &Supremand,
        region: Option<&[bool]>,
    ) -> Result<f64, FieldError> {
        let mut best = f64::NEG_INFINITY;
        let mut any = false;
        for cell in cells_in(self.dom, region) {
            any = true;
            best = best.max(f.eval(self.dom, cell, self.gradient_at(cell))?);
        }
        if !any {
            return Err(FieldError::NoInteriorCell);
        }
        Ok(best)
    }

    pub fn lipschitz_seminorms(&self, seed: u64) -> Seminorms {
        let dom = self.dom;
        let grad_sup = (0..dom.cells().len())
            .map(|c| num::norm(self.gradient_at(c)))
            .fold(0.0, f64::max);
        let nodes: Vec<usize> = dom.nodes().collect();
        let mut lip_euclid: f64 = 0.0;
        let mut lip_geodesic: f64 = 0.0;
        for s in domain::scan_sources(&nodes, seed) {
            let geo = graph::dijkstra(dom.node_count(), s, None, |a| {
                dom.edges(a).iter().map(|e| (e.to, e.len))
            });
            let ps = dom.coords(s);
            for &t in &nodes {
                if t == s {
                    continue;
                }
                let du = (self.values[t] - self.values[s]).abs();
                lip_euclid = lip_euclid.max(du / num::dist(ps, dom.coords(t)));
                lip_geodesic = lip_geodesic.max(du / geo[t]);
            }
        }
        Seminorms {
            grad_sup,
            lip_euclid,
            lip_geodesic,
        }
    }

    /// McShane extension from `sub`: `ũ(x) = min_{y ∈ sub} u(y) + L|x - y|`.
    pub fn mcshane_extend(&self, sub: &[bool], lip: f64) -> Result<GridFunction<'d>, FieldError> {
        let dom = self.dom;
        let inner: Vec<usize> = dom.nodes().filter(|&n| sub[n]).collect();
        if inner.is_empty() {
            return Err(FieldError::BadParameter("empty extension set"));
        }
        let mut required: f64 = 0.0;
        for (k, &a) in inner.iter().enumerate() {
            for &b in &inner[k + 1..] {
                let q = (self.values[a] - self.values[b]).abs()
                    / num::dist(dom.coords(a), dom.coords(b));
                required = required.max(q);
            }
        }
        if lip < required * (1.0 - 1e-12) {
            return Err(FieldError::LipschitzTooSmall {
                required,
                given: lip,
            });
        }
        let values = (0..dom.node_count())
            .map(|x| {
                if !dom.contains(x) {
                    return 0.0;
                }
                if sub[x] {
                    return self.values[x];
                }
                let px = dom.coords(x);
                inner
                    .iter()
                    .map(|&y| self.values[y] + lip * num::dist(px, dom.coords(y)))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        Ok(GridFunction { dom, values })
    }
}

/// Cells whose forward stencil lies in `region`.
pub fn cells_in<'a>(
    dom: &'a GridDomain,
    region: Option<&'a [bool]>,
) -> alloc::boxed::Box<dyn Iterator<Item = usize> + 'a> {
    match region {
        None => alloc::boxed::Box::new(0..dom.cells().len()),
        Some(r) => alloc::boxed::Box::new(dom.cells_within(r)),
    }
}

/// Odd sawtooth through the node nearest to 0 with slopes `±slope`.
///
/// The half period is the largest whole number of cells not exceeding
/// `1/(2n)` (at least one cell), so every cell gradient is exactly `±slope`
/// and the amplitude is `slope · max(h, ⌊1/(2nh)⌋h) ≤ slope · max(h, 1/(2n))`.
pub fn sawtooth(dom: &GridDomain, n: usize, slope: f64) -> Result<GridFunction<'_>, FieldError> {
    if dom.dim() != 1 {
        return Err(FieldError::NotOneDimensional);
    }
    if n == 0 {
        return Err(FieldError::BadParameter(
            "sawtooth count must be at least 1",
        ));
    }
    if !(slope > 0.0) {
        return Err(FieldError::BadParameter("sawtooth slope must be positive"));
    }
    let h = dom.h();
    let half = (num::floor(1.0 / (2.0 * n as f64 * h) + 1e-9) as i64).max(1);
    let anchor = dom.nearest_node([0.0, 0.0]).expect("nonempty domain") as i64;
    let tri = |k: i64| -> i64 {
        let r = k.abs() % (2 * half);
        let v = if r <= half { r } else { 2 * half - r };
        if k < 0 {
            -v
        } else {
            v
        }
    };
    let values = (0..dom.node_count())
        .map(|node| slope * h * tri(node as i64 - anchor) as f64)
        .collect();
    GridFunction::new(dom, values)
}

//! Turns a parsed scenario into core objects: the domain, supremands,
//! field values and region masks. Every reference is checked here, before
//! any operation runs.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supremal_core::{
    catalog, field, DomainSpec, Expr, GradientWindow, GridDomain, GridFunction, Piece, Region,
    Stencil, Supremand, Witness,
};

use crate::config::{
    DomainConfig, FieldConfig, Operation, RandomFieldConfig, Scenario, SupremandConfig,
    WitnessConfig,
};
use crate::ScenarioError;

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid(msg.into())
}

fn pair(v: &[f64], dim: usize, what: &str) -> Result<[f64; 2], ScenarioError> {
    if v.len() != dim {
        return Err(invalid(format!(
            "{what} has {} coordinates, expected {dim}",
            v.len()
        )));
    }
    Ok([v[0], if dim == 2 { v[1] } else { 0.0 }])
}

pub fn build_domain(c: &DomainConfig) -> Result<GridDomain, ScenarioError> {
    let (lower, upper) = (
        pair(&c.lower, c.dim, "domain.lower")?,
        pair(&c.upper, c.dim, "domain.upper")?,
    );
    let mut spec = if c.dim == 1 {
        DomainSpec::interval(lower[0], upper[0], c.h)
    } else {
        DomainSpec::rectangle(lower, upper, c.h)
    };
    spec.dim = c.dim;
    for o in &c.obstacles {
        spec = spec.with_obstacle(
            pair(&o.lower, c.dim, "obstacle.lower")?,
            pair(&o.upper, c.dim, "obstacle.upper")?,
        );
    }
    match c.stencil.as_deref() {
        None => {}
        Some("axis") => spec = spec.with_stencil(Stencil::Axis),
        Some("diagonal") => spec = spec.with_stencil(Stencil::Diagonal),
        Some(other) => {
            return Err(invalid(format!(
                "unknown stencil `{other}` (axis or diagonal)"
            )))
        }
    }
    GridDomain::build(&spec).map_err(|e| invalid(format!("domain: {e}")))
}

pub fn parse_region(src: &str) -> Result<Region, ScenarioError> {
    Region::parse(src).map_err(|e| invalid(format!("region `{src}`: {e}")))
}

fn parse_expr(src: &str) -> Result<Expr, ScenarioError> {
    Expr::parse(src).map_err(|e| invalid(format!("expression `{src}`: {e}")))
}

pub fn build_supremand(
    name: &str,
    c: &SupremandConfig,
    dim: usize,
) -> Result<Supremand, ScenarioError> {
    let ctx = |msg: String| invalid(format!("supremand `{name}`: {msg}"));
    let given = [c.catalog.is_some(), c.profile.is_some(), c.pieces.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if given != 1 {
        return Err(ctx("set exactly one of catalog, profile and pieces".into()));
    }
    let mut f = if let Some(cat) = &c.catalog {
        let one_d = |f: Supremand| {
            if dim == 1 {
                Ok(f)
            } else {
                Err(ctx(format!("catalog `{cat}` is one-dimensional")))
            }
        };
        match cat.as_str() {
            "norm" => catalog::scaled_norm(dim, c.scale.unwrap_or(1.0)),
            "double-well" => catalog::double_well(dim),
            "asymmetric" => one_d(catalog::asymmetric())?,
            "boh" => one_d(catalog::boh())?,
            "fg-f" => one_d(catalog::fg_meet().0)?,
            "fg-g" => one_d(catalog::fg_meet().1)?,
            other => return Err(ctx(format!("unknown catalog entry `{other}`"))),
        }
    } else if let Some(p) = &c.profile {
        Supremand::homogeneous(dim, parse_expr(p)?)
    } else {
        let mut pieces = Vec::new();
        for p in c.pieces.as_deref().unwrap_or_default() {
            pieces.push(Piece {
                region: parse_region(&p.region)?,
                profile: parse_expr(&p.profile)?,
            });
        }
        Supremand::new(dim, pieces)
    };
    if c.scale.is_some() && c.catalog.as_deref() != Some("norm") {
        return Err(ctx("scale applies to catalog = \"norm\" only".into()));
    }
    if let Some(b) = c.coercivity {
        f = f.with_coercivity(b);
    }
    if let Some(a) = c.linear_bound {
        f = f.with_linear_bound(a);
    }
    if let Some(w) = c.window {
        f = f.with_window(window(w)?);
    }
    Ok(f)
}

pub fn window(w: crate::config::WindowConfig) -> Result<GradientWindow, ScenarioError> {
    let g = GradientWindow::new(w.half_width, w.step);
    if !(w.half_width > 0.0 && w.step > 0.0 && w.step <= w.half_width) {
        return Err(invalid(format!(
            "gradient window needs 0 < step <= half_width, got {w:?}"
        )));
    }
    Ok(g)
}

/// `a x + Σ b_k sin(k_k x + φ_k)` in 1-D; three plane waves in 2-D.
pub fn random_values(dom: &GridDomain, rng: &mut ChaCha8Rng, slope: f64, wiggle: f64) -> Vec<f64> {
    let terms: Vec<(f64, [f64; 2], f64)> = (0..3)
        .map(|_| {
            let amp = if wiggle > 0.0 {
                rng.gen_range(-wiggle..=wiggle)
            } else {
                0.0
            };
            let k = if dom.dim() == 1 {
                [rng.gen_range(0.5..4.0), 0.0]
            } else {
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]
            };
            (amp, k, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    (0..dom.mask().len())
        .map(|n| {
            let p = dom.coords(n);
            let ripple: f64 = terms
                .iter()
                .map(|(b, k, ph)| b * (k[0] * p[0] + k[1] * p[1] + ph).sin())
                .sum();
            slope * p[0] + ripple
        })
        .collect()
}

pub fn draw_slope(rng: &mut ChaCha8Rng, range: [f64; 2]) -> f64 {
    if range[0] < range[1] {
        rng.gen_range(range[0]..range[1])
    } else {
        range[0]
    }
}

/// FNV-1a, so that each named field gets its own stream.
fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

fn random_field(name: &str, dom: &GridDomain, c: &RandomFieldConfig, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed ^ name_hash(name) ^ c.stream.wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    let slope = draw_slope(&mut rng, c.slope);
    random_values(dom, &mut rng, slope, c.wiggle)
}

pub fn build_field(
    name: &str,
    c: &FieldConfig,
    dom: &GridDomain,
    seed: u64,
    base_dir: &Path,
) -> Result<Vec<f64>, ScenarioError> {
    let ctx = |msg: String| invalid(format!("field `{name}`: {msg}"));
    let given = [
        c.expr.is_some(),
        c.csv.is_some(),
        c.affine.is_some(),
        c.random.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if given > 1 || (given == 0 && c.sawtooth.is_none()) {
        return Err(ctx(
            "set exactly one of expr, csv, affine and random (or only sawtooth)".into(),
        ));
    }
    let mut values = if let Some(src) = &c.expr {
        let e = parse_expr(src)?;
        if e.depends_on_xi() {
            return Err(ctx("field expressions depend on x only".into()));
        }
        GridFunction::from_fn(dom, |p| e.eval(p, [0.0; 2]))
            .map_err(|e| ctx(e.to_string()))?
            .values()
            .to_vec()
    } else if let Some(path) = &c.csv {
        crate::csvio::read_field(&base_dir.join(path), dom)?
    } else if let Some(z) = &c.affine {
        GridFunction::affine(dom, pair(z, dom.dim(), "affine gradient")?)
            .values()
            .to_vec()
    } else if let Some(r) = &c.random {
        random_field(name, dom, r, seed)
    } else {
        vec![0.0; dom.mask().len()]
    };
    if let Some(s) = c.sawtooth {
        let saw = field::sawtooth(dom, s.n, s.slope).map_err(|e| ctx(e.to_string()))?;
        for (v, w) in values.iter_mut().zip(saw.values()) {
            *v += w;
        }
    }
    Ok(values)
}

/// Names an operation refers to, by kind.
fn references(op: &Operation) -> Vec<(&'static str, &str)> {
    fn s(n: &str) -> (&'static str, &str) {
        ("supremand", n)
    }
    fn fl(n: &str) -> (&'static str, &str) {
        ("field", n)
    }
    fn witness<'a>(w: &'a Option<WitnessConfig>, out: &mut Vec<(&'static str, &'a str)>) {
        if let Some(WitnessConfig::Field { field }) = w {
            out.push(fl(field));
        }
    }
    let mut out = Vec::new();
    match op {
        Operation::Supremal {
            supremand, field, ..
        } => out.extend([s(supremand), fl(field)]),
        Operation::MeetLocality { f, g, field, .. } => out.extend([s(f), s(g), fl(field)]),
        Operation::SupIdentity { f, g, fields, .. } => {
            out.extend([s(f), s(g)]);
            out.extend(fields.iter().map(|n| fl(n)));
        }
        Operation::Distance { supremand, .. } | Operation::Envelope { supremand, .. } => {
            out.push(s(supremand))
        }
        Operation::Relax {
            supremand,
            field,
            witness: w,
            ..
        } => {
            out.extend([s(supremand), fl(field)]);
            witness(w, &mut out);
        }
        Operation::Represent {
            supremand, expect, ..
        } => {
            out.push(s(supremand));
            out.extend(expect.iter().map(|n| s(n)));
        }
        Operation::Localized {
            supremand,
            fields,
            expect,
            ..
        } => {
            out.push(s(supremand));
            out.extend(fields.iter().map(|n| fl(n)));
            out.extend(expect.iter().map(|n| s(n)));
        }
        Operation::LevelConvexity {
            supremand,
            pairs,
            witness: w,
            ..
        } => {
            out.push(s(supremand));
            out.extend(pairs.iter().flatten().map(|n| fl(n)));
            witness(w, &mut out);
        }
        Operation::SupConst {
            supremand,
            fields,
            witness: w,
            ..
        }
        | Operation::Coercive {
            supremand,
            fields,
            witness: w,
            ..
        } => {
            out.push(s(supremand));
            out.extend(fields.iter().map(|n| fl(n)));
            witness(w, &mut out);
        }
        Operation::Seminorms { fields, .. } => out.extend(fields.iter().map(|n| fl(n))),
        Operation::ExportField { field, .. } => out.push(fl(field)),
        Operation::Geodesic { .. } => {}
    }
    out
}

fn regions_of(op: &Operation) -> Vec<&str> {
    match op {
        Operation::Supremal { region, .. }
        | Operation::Distance { region, .. }
        | Operation::Relax { region, .. } => region.iter().map(String::as_str).collect(),
        Operation::MeetLocality { parts, .. } => parts.iter().map(String::as_str).collect(),
        Operation::Localized { regions, .. } => regions.iter().map(String::as_str).collect(),
        _ => Vec::new(),
    }
}

/// Everything an operation needs, built once per scenario.
pub struct Resolved {
    pub dom: GridDomain,
    pub supremands: BTreeMap<String, Supremand>,
    pub fields: BTreeMap<String, Vec<f64>>,
}

impl Resolved {
    pub fn build(s: &Scenario, seed: u64, base_dir: &Path) -> Result<Self, ScenarioError> {
        let dom = build_domain(&s.domain)?;
        let mut supremands = BTreeMap::new();
        for (name, c) in &s.supremands {
            let f = build_supremand(name, c, dom.dim())?;
            f.validate(&dom)
                .map_err(|e| invalid(format!("supremand `{name}`: {e}")))?;
            supremands.insert(name.clone(), f);
        }
        let mut fields = BTreeMap::new();
        for (name, c) in &s.fields {
            let values = build_field(name, c, &dom, seed, base_dir)?;
            GridFunction::new(&dom, values.clone())
                .map_err(|e| invalid(format!("field `{name}`: {e}")))?;
            fields.insert(name.clone(), values);
        }
        let r = Resolved {
            dom,
            supremands,
            fields,
        };
        for (k, op) in s.operations.iter().enumerate() {
            for (kind, name) in references(op) {
                let known = match kind {
                    "supremand" => r.supremands.contains_key(name),
                    _ => r.fields.contains_key(name),
                };
                if !known {
                    return Err(ScenarioError::Unresolved {
                        operation: k + 1,
                        kind,
                        name: name.to_string(),
                    });
                }
            }
            for src in regions_of(op) {
                parse_region(src)?;
            }
        }
        Ok(r)
    }

    pub fn supremand(&self, name: &str) -> &Supremand {
        &self.supremands[name]
    }

    pub fn field(&self, name: &str) -> GridFunction<'_> {
        GridFunction::new(&self.dom, self.fields[name].clone())
            .expect("field length checked at build")
    }

    pub fn mask(&self, region: &str) -> Result<Vec<bool>, ScenarioError> {
        Ok(self.dom.mask_of(&parse_region(region)?))
    }

    pub fn node_at(&self, p: [f64; 2]) -> Result<usize, ScenarioError> {
        self.dom
            .nearest_node(p)
            .ok_or_else(|| invalid(format!("no domain node near {p:?}")))
    }

    /// Cell whose centre is nearest to `p`.
    pub fn cell_at(&self, p: [f64; 2]) -> Result<usize, ScenarioError> {
        let d2 = |c: [f64; 2]| (c[0] - p[0]).powi(2) + (c[1] - p[1]).powi(2);
        (0..self.dom.cells().len())
            .min_by(|&a, &b| d2(self.dom.cell(a).center).total_cmp(&d2(self.dom.cell(b).center)))
            .ok_or_else(|| invalid("domain has no cells"))
    }

    pub fn witness(&self, w: Option<&WitnessConfig>) -> Result<Witness, ScenarioError> {
        Ok(match w {
            None => Witness::Zero,
            Some(WitnessConfig::Named(n)) if n == "zero" => Witness::Zero,
            Some(WitnessConfig::Named(n)) => return Err(invalid(format!("unknown witness `{n}`"))),
            Some(WitnessConfig::Affine(z)) => {
                Witness::Affine(pair(z, self.dom.dim(), "witness gradient")?)
            }
            Some(WitnessConfig::Field { field }) => Witness::Field(self.fields[field].clone()),
        })
    }
}

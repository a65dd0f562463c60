//! Executes scenario operations in order and collects the report.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use supremal_core::distance::{self, SandwichTolerance};
use supremal_core::domain::SAMPLED_PAIRS;
use supremal_core::relax::{self, RelaxSettings};
use supremal_core::represent::{self, RepresentationTable};
use supremal_core::{Expr, GridFunction, LevelGraph, PseudoDistanceField};

use crate::config::{self, Operation, Point, Scenario, WitnessConfig};
use crate::report::{num, Report, Section, Table};
use crate::resolve::{self, Resolved};
use crate::ScenarioError;

/// Default bisection tolerance for relaxed values.
pub const DEFAULT_TOL: f64 = 1e-3;

/// Overrides from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// Bisection tolerance for operations that do not set one.
    pub tol: Option<f64>,
}

/// Reads, runs and (with an output directory) writes a scenario file.
pub fn run_scenario(path: &Path, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let name = path
        .file_stem()
        .map_or("scenario".into(), |s| s.to_string_lossy().into_owned());
    run_text(&text, &name, base, opts)
}

/// Runs scenario text; relative paths inside it resolve against `base_dir`.
pub fn run_text(
    text: &str,
    name: &str,
    base_dir: &Path,
    opts: &RunOptions,
) -> Result<Report, ScenarioError> {
    let scenario = config::parse(text)?;
    run(&scenario, name, base_dir, opts)
}

pub fn run(
    scenario: &Scenario,
    name: &str,
    base_dir: &Path,
    opts: &RunOptions,
) -> Result<Report, ScenarioError> {
    if let Some(t) = opts.tol {
        if !(t > 0.0) {
            return Err(ScenarioError::Invalid(format!(
                "tolerance must be positive, got {t}"
            )));
        }
    }
    let seed = opts.seed.unwrap_or(scenario.seed);
    let r = Resolved::build(scenario, seed, base_dir)?;
    let mut report = Report {
        name: scenario.name.clone().unwrap_or_else(|| name.to_string()),
        seed,
        config: toml::to_string(scenario).map_err(|e| ScenarioError::Invalid(e.to_string()))?,
        sections: Vec::new(),
        tables: Vec::new(),
    };
    let runner = Runner {
        r: &r,
        seed,
        tol: opts.tol,
    };
    for (k, op) in scenario.operations.iter().enumerate() {
        let index = k + 1;
        let label = op
            .label()
            .map_or_else(|| format!("{index:02}-{}", op.kind()), str::to_string);
        let mut section = Section {
            index,
            kind: op.kind().to_string(),
            label: label.clone(),
            lines: Vec::new(),
            checks: Vec::new(),
        };
        let tables = runner
            .execute(op, &label, index, &mut section)
            .map_err(|message| ScenarioError::Operation {
                index,
                label: label.clone(),
                message,
            })?;
        report.sections.push(section);
        report.tables.extend(tables);
    }
    let out = opts
        .out
        .clone()
        .or_else(|| scenario.out.as_ref().map(|o| base_dir.join(o)));
    if let Some(dir) = out {
        report.write_to(&dir)?;
    }
    Ok(report)
}

type OpResult = Result<Vec<Table>, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn coord_header(dim: usize, stem: &str) -> Vec<String> {
    if dim == 1 {
        vec![stem.to_string()]
    } else {
        vec![format!("{stem}1"), format!("{stem}2")]
    }
}

fn coord_cells(p: [f64; 2], dim: usize) -> Vec<String> {
    p[..dim].iter().map(|&v| num(v)).collect()
}

fn table(name: &str, parts: &[Vec<String>]) -> Table {
    let header: Vec<String> = parts.concat();
    Table {
        name: name.to_string(),
        header,
        rows: Vec::new(),
    }
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

struct Runner<'a> {
    r: &'a Resolved,
    seed: u64,
    tol: Option<f64>,
}

impl Runner<'_> {
    fn bisection_tol(&self, op_tol: Option<f64>) -> f64 {
        op_tol.or(self.tol).unwrap_or(DEFAULT_TOL)
    }

    fn settings(
        &self,
        tol: f64,
        witness: Option<&WitnessConfig>,
        region: Option<&str>,
        index: usize,
    ) -> Result<RelaxSettings, String> {
        let mut s = RelaxSettings::default()
            .with_tol(tol)
            .with_witness(self.r.witness(witness).map_err(err)?);
        s.pair_seed = self.seed.wrapping_add(index as u64);
        if let Some(reg) = region {
            s = s.with_region(self.r.mask(reg).map_err(err)?);
        }
        Ok(s)
    }

    fn point(&self, p: &Point) -> Result<[f64; 2], String> {
        p.to_array(self.r.dom.dim()).map_err(err)
    }

    fn execute(&self, op: &Operation, label: &str, index: usize, sec: &mut Section) -> OpResult {
        let r = self.r;
        let dom = &r.dom;
        let dim = dom.dim();
        match op {
            Operation::Supremal {
                supremand,
                field,
                region,
                expect,
                tol,
                ..
            } => {
                let mask = region
                    .as_deref()
                    .map(|s| r.mask(s))
                    .transpose()
                    .map_err(err)?;
                let v = r
                    .field(field)
                    .supremal_value(r.supremand(supremand), mask.as_deref())
                    .map_err(err)?;
                let on = region.as_deref().unwrap_or("Ω");
                sec.line(format!("F({field}, {on}) = {}", num(v)));
                if let Some(e) = expect {
                    let t = tol.unwrap_or(1e-9);
                    sec.check(
                        "value",
                        (v - e).abs() <= t,
                        format!("|{} - {}| <= {t:e}", num(v), num(*e)),
                    );
                }
                Ok(vec![])
            }
            Operation::MeetLocality {
                f,
                g,
                field,
                parts,
                expect_union,
                expect_parts,
                ..
            } => {
                let masks: Vec<Vec<bool>> = parts
                    .iter()
                    .map(|p| r.mask(p))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                let m =
                    relax::meet_locality(r.supremand(f), r.supremand(g), &r.field(field), &masks)
                        .map_err(err)?;
                sec.line(format!("(F∧G)({field}, ∪ parts) = {}", num(m.union_value)));
                sec.line(format!(
                    "max over parts of (F∧G)({field}, part) = {}",
                    num(m.parts_max)
                ));
                sec.line(format!("gap = {}", num(m.union_value - m.parts_max)));
                for (what, got, want) in [
                    ("union", m.union_value, expect_union),
                    ("parts", m.parts_max, expect_parts),
                ] {
                    if let Some(w) = want {
                        sec.check(
                            what,
                            (got - w).abs() <= 1e-9,
                            format!("{} (expected {})", num(got), num(*w)),
                        );
                    }
                }
                Ok(vec![])
            }
            Operation::SupIdentity { f, g, fields, .. } => {
                let mut exact = true;
                for name in fields {
                    let s = relax::sup_identity(r.supremand(f), r.supremand(g), &r.field(name))
                        .map_err(err)?;
                    sec.line(format!(
                        "{name}: (F∨G) = {}, F ∨ G = {}",
                        num(s.combined),
                        num(s.separate)
                    ));
                    exact &= s.exact();
                }
                sec.check(
                    "identity",
                    exact,
                    format!("exact on {} fields", fields.len()),
                );
                Ok(vec![])
            }
            Operation::Distance {
                supremand,
                lambda,
                source,
                methods,
                region,
                sandwich,
                compare_tol,
                expect_unbounded,
                ..
            } => {
                let f = r.supremand(supremand);
                let y = r.node_at(self.point(source)?).map_err(err)?;
                let mask = region
                    .as_deref()
                    .map(|s| r.mask(s))
                    .transpose()
                    .map_err(err)?;
                let graph = LevelGraph::build(f, dom, *lambda, mask.as_deref()).map_err(err)?;
                let mut fields: Vec<PseudoDistanceField> = Vec::new();
                for m in methods {
                    let field = match m.as_str() {
                        "fast" => graph.fast(y),
                        "oracle" => graph.oracle(y),
                        "brute" if mask.is_none() => {
                            distance::pseudo_distance_brute(f, dom, *lambda, y, self.seed)
                        }
                        "brute" => {
                            return Err("the brute-force method does not take a region".into())
                        }
                        other => {
                            return Err(format!("unknown method `{other}` (fast, oracle, brute)"))
                        }
                    }
                    .map_err(err)?;
                    fields.push(field);
                }
                let yc = dom.coords(y);
                sec.line(format!(
                    "source node {y} at {:?}, λ = {}",
                    &yc[..dim],
                    num(*lambda)
                ));
                if graph.has_negative_bounds() {
                    sec.line("level graph has negative edge bounds; potentials applied");
                }
                let active: Vec<usize> = dom.nodes().filter(|&n| graph.is_active(n)).collect();
                let mut t = table(
                    label,
                    &[
                        coord_header(dim, "x"),
                        coord_header(dim, "y"),
                        cols(&["lambda", "d", "method"]),
                    ],
                );
                for field in &fields {
                    let finite = active
                        .iter()
                        .filter(|&&n| field.dist[n].is_finite())
                        .count();
                    let top = active
                        .iter()
                        .map(|&n| field.dist[n])
                        .filter(|d| d.is_finite())
                        .fold(0.0, f64::max);
                    sec.line(format!(
                        "{}: {finite} of {} nodes finite, max finite d = {}",
                        field.method,
                        active.len(),
                        num(top)
                    ));
                    for &n in &active {
                        let mut row = coord_cells(dom.coords(n), dim);
                        row.extend(coord_cells(yc, dim));
                        row.extend([num(*lambda), num(field.dist[n]), field.method.to_string()]);
                        t.push(row);
                    }
                }
                let by = |name: &str| fields.iter().find(|f| f.method.to_string() == name);
                if let Some(tol) = compare_tol {
                    let fast = by("fast").ok_or("compare_tol needs the fast method")?;
                    for other in fields.iter().filter(|f| f.method.to_string() != "fast") {
                        let mut worst: f64 = 0.0;
                        let mut pattern = true;
                        for &n in &active {
                            let (a, b) = (fast.dist[n], other.dist[n]);
                            if other.method.to_string() == "brute" {
                                // ascent values are lower bounds
                                worst = worst.max(b - a);
                            } else if a.is_finite() != b.is_finite() {
                                pattern = false;
                            } else if a.is_finite() {
                                worst = worst.max((a - b).abs());
                            }
                        }
                        sec.check(
                            format!("fast vs {}", other.method),
                            pattern && worst <= *tol,
                            format!("max deviation {worst:.3e} (tol {tol:e}), same infinite set: {pattern}"),
                        );
                    }
                }
                if *sandwich {
                    let fast = by("fast").ok_or("sandwich needs the fast method")?;
                    let (a, b) = distance::coefficients_from_tags(f, *lambda);
                    if a.is_none() && b.is_none() {
                        return Err(
                            "sandwich needs coercivity or linear_bound on the supremand".into()
                        );
                    }
                    let rep = distance::sandwich_check(
                        fast,
                        dom,
                        a,
                        b,
                        SandwichTolerance::for_domain(dom),
                    )
                    .map_err(err)?;
                    for (side, c) in [("lower", rep.lower), ("upper", rep.upper)] {
                        if let Some(c) = c {
                            sec.check(
                                format!("sandwich {side}"),
                                c.holds,
                                format!(
                                    "worst node {} ratio d/bound {:.4}, excess {:.3e}",
                                    c.worst_node, c.ratio, c.excess
                                ),
                            );
                        }
                    }
                }
                if let Some(want) = expect_unbounded {
                    let fast = fields.first().ok_or("no method requested")?;
                    let others = active.iter().filter(|&&n| n != y);
                    let all_inf = others.clone().all(|&n| fast.dist[n] == f64::INFINITY);
                    let all_finite = others.clone().all(|&n| fast.dist[n].is_finite());
                    let ok = if *want { all_inf } else { all_finite };
                    sec.check(
                        "unbounded",
                        ok,
                        if *want {
                            "d = +∞ away from the source".to_string()
                        } else {
                            "d finite everywhere".to_string()
                        },
                    );
                }
                Ok(vec![t])
            }
            Operation::Relax {
                supremand,
                field,
                eps,
                tol,
                bracket,
                witness,
                region,
                expect,
                expect_tol,
                ..
            } => {
                let tol = self.bisection_tol(*tol);
                let mut s = self.settings(tol, witness.as_ref(), region.as_deref(), index)?;
                if let Some(e) = eps {
                    s.eps = *e;
                }
                if let Some([lo, hi]) = bracket {
                    s = s.with_bracket(*lo, *hi);
                }
                let u = r.field(field);
                let res = relax::relax_value(r.supremand(supremand), dom, &u, &s).map_err(err)?;
                let raw = u
                    .supremal_value(r.supremand(supremand), s.region.as_deref())
                    .map_err(err)?;
                sec.line(format!(
                    "Γ(F)({field}) = {} (F = {})",
                    num(res.value),
                    num(raw)
                ));
                sec.line(format!(
                    "bracket [{}, {}], ε = {}, witness value {}, {} probes",
                    num(res.bracket.0),
                    num(res.bracket.1),
                    num(res.eps),
                    num(res.witness_value),
                    res.probes.len()
                ));
                if res.not_reached {
                    sec.line("quotient never fell to 1 inside the bracket; value is the upper end");
                }
                if let Some(e) = expect {
                    let t = expect_tol.unwrap_or(2.0 * tol);
                    sec.check(
                        "value",
                        (res.value - e).abs() <= t,
                        format!("|{} - {}| <= {t:e}", num(res.value), num(*e)),
                    );
                }
                let mut t = Table::new(label, &["mu", "eps", "quotient", "pairs", "admissible"]);
                for p in &res.probes {
                    let (q, n) = p.quotient.map_or((String::new(), String::new()), |q| {
                        (num(q.value), q.pairs.to_string())
                    });
                    t.push(vec![num(p.mu), num(p.eps), q, n, p.admissible.to_string()]);
                }
                Ok(vec![t])
            }
            Operation::Envelope {
                supremand,
                at,
                window,
                expect,
                tol,
                ..
            } => {
                let f = r.supremand(supremand);
                let cell = r.cell_at(self.point(at)?).map_err(err)?;
                let w = match window {
                    Some(w) => resolve::window(*w).map_err(err)?,
                    None => f.window,
                };
                let env = f.level_convex_envelope(dom, cell, w).map_err(err)?;
                let center = dom.cell(cell).center;
                let idem = env.reapply().flc == env.flc;
                sec.line(format!(
                    "cell {cell} centred at {:?}, {} samples",
                    &center[..dim],
                    env.points.len()
                ));
                sec.check("idempotent", idem, "envelope of the envelope is unchanged");
                let closed = expect
                    .as_deref()
                    .map(Expr::parse)
                    .transpose()
                    .map_err(err)?;
                let mut t = table(label, &[coord_header(dim, "xi"), cols(&["f", "flc"])]);
                if closed.is_some() {
                    t.header.push("expected".into());
                }
                let mut worst: f64 = 0.0;
                for (k, p) in env.points.iter().enumerate() {
                    let mut row = coord_cells(*p, dim);
                    row.extend([num(env.f[k]), num(env.flc[k])]);
                    if let Some(e) = &closed {
                        let v = e.eval(center, *p);
                        worst = worst.max((env.flc[k] - v).abs());
                        row.push(num(v));
                    }
                    t.push(row);
                }
                if closed.is_some() {
                    let bound = tol.unwrap_or(2.0 * env.lipschitz_estimate() * w.step);
                    sec.check(
                        "closed form",
                        worst <= bound,
                        format!("max error {worst:.3e} (bound {bound:.3e})"),
                    );
                }
                Ok(vec![t])
            }
            Operation::Represent {
                supremand,
                xs,
                xis,
                budget,
                expect,
                tol,
                ..
            } => {
                let f = r.supremand(supremand);
                let cells: Vec<usize> = xs
                    .iter()
                    .map(|p| self.point(p).and_then(|q| r.cell_at(q).map_err(err)))
                    .collect::<Result<_, _>>()?;
                let xis: Vec<[f64; 2]> = xis
                    .iter()
                    .map(|p| self.point(p))
                    .collect::<Result<_, _>>()?;
                let tab = RepresentationTable::build(
                    f,
                    dom,
                    &cells,
                    &xis,
                    budget.unwrap_or(represent::DEFAULT_BUDGET),
                )
                .map_err(err)?;
                let reference = expect.as_deref().map(|n| r.supremand(n));
                let mut t = table(
                    label,
                    &[
                        coord_header(dim, "x"),
                        coord_header(dim, "xi"),
                        cols(&["f", "phi"]),
                    ],
                );
                if reference.is_some() {
                    t.header.push("expected".into());
                }
                let mut worst: f64 = 0.0;
                for (i, &c) in cells.iter().enumerate() {
                    for (j, &xi) in xis.iter().enumerate() {
                        let mut row = coord_cells(tab.xs[i], dim);
                        row.extend(coord_cells(xi, dim));
                        row.extend([num(tab.f[i][j]), num(tab.phi[i][j])]);
                        if let Some(g) = reference {
                            let v = g.eval(dom, c, xi).map_err(err)?;
                            worst = worst.max((tab.phi[i][j] - v).abs());
                            row.push(num(v));
                        }
                        t.push(row);
                    }
                }
                let below = tab.below_f(1e-9).len();
                sec.line(format!(
                    "{} entries, φ < f at {below}, φ > f at {}",
                    cells.len() * xis.len(),
                    tab.above_f(1e-9).len()
                ));
                let lc = tab.level_convexity_violations(1e-9);
                sec.check(
                    "level convex in ξ",
                    lc == 0,
                    format!("{lc} violating triples"),
                );
                if reference.is_some() {
                    let t_ = tol.unwrap_or(1e-9);
                    sec.check(
                        "matches reference",
                        worst <= t_,
                        format!("max |φ - expected| = {worst:.3e} (tol {t_:e})"),
                    );
                }
                Ok(vec![t])
            }
            Operation::Localized {
                supremand,
                regions,
                fields,
                tol,
                envelope_window,
                expect,
                expect_tol,
                ..
            } => {
                let f = r.supremand(supremand);
                let tol = self.bisection_tol(*tol);
                let masks: Vec<Vec<bool>> = regions
                    .iter()
                    .map(|p| r.mask(p))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                let probes: Vec<GridFunction<'_>> = fields.iter().map(|n| r.field(n)).collect();
                let s = self.settings(tol, None, None, index)?;
                let w = match envelope_window {
                    Some(w) => resolve::window(*w).map_err(err)?,
                    None => f.window,
                };
                sec.line(format!(
                    "envelope sampled with step {} on [-{1}, {1}]",
                    num(w.step),
                    num(w.half_width)
                ));
                let fits = represent::localized_relaxed_supremand(f, dom, &masks, &probes, &s, w)
                    .map_err(err)?;
                let reference = expect.as_deref().map(|n| r.supremand(n));
                let bound = expect_tol.unwrap_or(2.0 * tol);
                let mut t = table(
                    label,
                    &[
                        cols(&["region", "field"]),
                        coord_header(dim, "witness"),
                        cols(&["relaxed", "fitted", "raw"]),
                    ],
                );
                if reference.is_some() {
                    t.header.push("expected".into());
                }
                let mut worst_ref: f64 = 0.0;
                for fit in &fits {
                    let region = &regions[fit.region];
                    sec.check(
                        format!("fit on {region}"),
                        fit.passes(bound),
                        format!(
                            "max |Γ(F)(u, A) - g fit| = {:.3e} (tol {bound:e})",
                            fit.max_residual
                        ),
                    );
                    for row in &fit.rows {
                        let mut cells = vec![region.clone(), fields[row.probe].clone()];
                        cells.extend(coord_cells(fit.witness, dim));
                        cells.extend([num(row.relaxed), num(row.fitted), num(row.raw)]);
                        if let Some(g) = reference {
                            let u = &probes[row.probe];
                            let mut v = f64::NEG_INFINITY;
                            for c in dom.cells_within(&masks[fit.region]) {
                                v = v.max(g.eval(dom, c, u.gradient_at(c)).map_err(err)?);
                            }
                            worst_ref = worst_ref.max((row.relaxed - v).abs());
                            cells.push(num(v));
                        }
                        t.push(cells);
                    }
                }
                if reference.is_some() {
                    sec.check(
                        "matches reference",
                        worst_ref <= bound,
                        format!("max |Γ(F)(u, A) - expected| = {worst_ref:.3e}"),
                    );
                }
                Ok(vec![t])
            }
            Operation::LevelConvexity {
                supremand,
                functional,
                pairs,
                random_pairs,
                thetas,
                tol,
                bisection_tol,
                witness,
                expect,
                ..
            } => {
                let f = r.supremand(supremand);
                let mut list: Vec<(GridFunction<'_>, GridFunction<'_>)> = pairs
                    .iter()
                    .map(|[a, b]| (r.field(a), r.field(b)))
                    .collect();
                if let Some(rp) = random_pairs {
                    let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(index as u64));
                    for k in 0..rp.count {
                        let (su, sv) = if rp.opposed && k % 2 == 0 {
                            let s = rp.slope[1].abs();
                            (s, -s)
                        } else {
                            (
                                resolve::draw_slope(&mut rng, rp.slope),
                                resolve::draw_slope(&mut rng, rp.slope),
                            )
                        };
                        let u = resolve::random_values(dom, &mut rng, su, rp.wiggle);
                        let v = resolve::random_values(dom, &mut rng, sv, rp.wiggle);
                        list.push((
                            GridFunction::new(dom, u).map_err(err)?,
                            GridFunction::new(dom, v).map_err(err)?,
                        ));
                    }
                }
                let report = match functional.as_str() {
                    "relax" => {
                        let s = self.settings(
                            self.bisection_tol(*bisection_tol),
                            witness.as_ref(),
                            None,
                            index,
                        )?;
                        let t = tol.unwrap_or(s.tol);
                        relax::level_convexity_test(
                            |u| relax::relax_value(f, dom, u, &s).map(|v| v.value),
                            &list,
                            thetas,
                            t,
                        )
                        .map_err(err)?
                    }
                    "supremal" => relax::level_convexity_test(
                        |u| u.supremal_value(f, None),
                        &list,
                        thetas,
                        tol.unwrap_or(1e-9),
                    )
                    .map_err(err)?,
                    other => {
                        return Err(format!("unknown functional `{other}` (relax or supremal)"))
                    }
                };
                let worst = report.worst.map_or(0.0, |w| w.excess);
                sec.line(format!(
                    "{} checks on {} pairs, {} violations, worst excess {}",
                    report.checks,
                    list.len(),
                    report.violations.len(),
                    num(worst)
                ));
                let want_pass = match expect.as_deref().unwrap_or("pass") {
                    "pass" => true,
                    "fail" => false,
                    other => return Err(format!("expect must be pass or fail, got `{other}`")),
                };
                sec.check(
                    if want_pass {
                        "level convex"
                    } else {
                        "not level convex"
                    },
                    report.passes() == want_pass,
                    format!(
                        "{} violations above tol {:e}",
                        report.violations.len(),
                        report.tol
                    ),
                );
                let mut t = Table::new(label, &["pair", "theta", "excess", "violation"]);
                for (k, _) in list.iter().enumerate() {
                    for &theta in thetas {
                        let v = report
                            .violations
                            .iter()
                            .find(|v| v.pair == k && v.theta == theta);
                        t.push(vec![
                            k.to_string(),
                            num(theta),
                            v.map_or(String::new(), |v| num(v.excess)),
                            v.is_some().to_string(),
                        ]);
                    }
                }
                Ok(vec![t])
            }
            Operation::SupConst {
                supremand,
                fields,
                cs,
                tol,
                witness,
                ..
            } => {
                let f = r.supremand(supremand);
                let tol = self.bisection_tol(*tol);
                let s = self.settings(tol, witness.as_ref(), None, index)?;
                let mut t = Table::new(label, &["c", "field", "lhs", "rhs", "gap"]);
                let mut worst: f64 = 0.0;
                for name in fields {
                    let u = r.field(name);
                    let base = relax::relax_value(f, dom, &u, &s).map_err(err)?;
                    for &c in cs {
                        let lhs = relax::relax_value(&f.sup_const(c), dom, &u, &s).map_err(err)?;
                        let gap = (lhs.value - base.value.max(c)).abs();
                        worst = worst.max(gap);
                        t.push(vec![
                            num(c),
                            name.clone(),
                            num(lhs.value),
                            num(base.value.max(c)),
                            num(gap),
                        ]);
                    }
                }
                sec.check(
                    "Γ(F∨c) = Γ(F)∨c",
                    worst <= 2.0 * tol,
                    format!(
                        "max gap {worst:.3e} over {} values of c (bound {:e})",
                        cs.len(),
                        2.0 * tol
                    ),
                );
                Ok(vec![t])
            }
            Operation::Coercive {
                supremand,
                fields,
                ns,
                tol,
                witness,
                expect_gap,
                ..
            } => {
                let f = r.supremand(supremand);
                if ns.is_empty() {
                    return Err("ns must not be empty".into());
                }
                let probes: Vec<GridFunction<'_>> = fields.iter().map(|n| r.field(n)).collect();
                let mut values = Vec::new();
                let mut t = Table::new(label, &["field", "n", "value"]);
                for &n in ns {
                    let fnn = relax::coercive_approximation(f, n);
                    let row: Vec<f64> = probes
                        .iter()
                        .map(|u| u.supremal_value(&fnn, None))
                        .collect::<Result<_, _>>()
                        .map_err(err)?;
                    for (name, v) in fields.iter().zip(&row) {
                        t.push(vec![name.clone(), n.to_string(), num(*v)]);
                    }
                    values.push(row);
                }
                let limit: Vec<f64> = probes
                    .iter()
                    .map(|u| u.supremal_value(f, None))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                for (name, v) in fields.iter().zip(&limit) {
                    t.push(vec![name.clone(), "inf".into(), num(*v)]);
                }
                match relax::monotone_gamma_limit(&values, &limit, 0.0) {
                    Ok(g) => {
                        let ok = g.direction == relax::Direction::Decreasing;
                        sec.check(
                            "F_n decreasing",
                            ok,
                            format!("{:?}; last gap to F: {}", g.direction, num(g.max_gap)),
                        )
                    }
                    Err(e) => sec.check("F_n decreasing", false, e.to_string()),
                }
                let last = *ns.last().expect("nonempty");
                let s = self.settings(self.bisection_tol(*tol), witness.as_ref(), None, index)?;
                let fnn = relax::coercive_approximation(f, last);
                let mut rt = Table::new(
                    format!("{label}-relaxed"),
                    &["field", "n", "relaxed_n", "relaxed", "gap"],
                );
                let mut worst: f64 = 0.0;
                for (name, u) in fields.iter().zip(&probes) {
                    let a = relax::relax_value(&fnn, dom, u, &s).map_err(err)?.value;
                    let b = relax::relax_value(f, dom, u, &s).map_err(err)?.value;
                    worst = worst.max((a - b).abs());
                    rt.push(vec![
                        name.clone(),
                        last.to_string(),
                        num(a),
                        num(b),
                        num((a - b).abs()),
                    ]);
                }
                sec.line(format!("max |Γ(F_{last}) - Γ(F)| = {}", num(worst)));
                if let Some(g) = expect_gap {
                    sec.check("Γ-limit gap", worst <= *g, format!("{worst:.3e} <= {g:e}"));
                }
                Ok(vec![t, rt])
            }
            Operation::Seminorms {
                fields,
                max_relative_gap,
                check_euclid,
                ..
            } => {
                let c = dom.estimate_domain_constant(SAMPLED_PAIRS, self.seed);
                let bound =
                    max_relative_gap.unwrap_or_else(|| distance::stencil_tolerance(dom.stencil()));
                sec.line(format!("domain constant estimate C = {}", num(c)));
                let mut t = Table::new(
                    label,
                    &[
                        "field",
                        "grad_sup",
                        "lip_euclid",
                        "lip_geodesic",
                        "relative_gap",
                    ],
                );
                let (mut worst_rel, mut worst_euclid): (f64, f64) = (0.0, f64::NEG_INFINITY);
                for (k, name) in fields.iter().enumerate() {
                    let s = r
                        .field(name)
                        .lipschitz_seminorms(self.seed.wrapping_add(k as u64));
                    let rel = if s.grad_sup > 0.0 {
                        (s.grad_sup - s.lip_geodesic).abs() / s.grad_sup
                    } else {
                        0.0
                    };
                    worst_rel = worst_rel.max(rel);
                    worst_euclid = worst_euclid.max(s.lip_euclid - c * s.grad_sup);
                    t.push(vec![
                        name.clone(),
                        num(s.grad_sup),
                        num(s.lip_euclid),
                        num(s.lip_geodesic),
                        num(rel),
                    ]);
                }
                sec.check(
                    "gradient vs geodesic",
                    worst_rel <= bound,
                    format!("max relative gap {worst_rel:.4} (bound {bound})"),
                );
                if *check_euclid {
                    sec.check(
                        "euclidean bound",
                        worst_euclid <= 1e-12,
                        format!("max lip_euclid - C·grad_sup = {worst_euclid:.3e}"),
                    );
                }
                Ok(vec![t])
            }
            Operation::Geodesic { source, .. } => {
                let y = r.node_at(self.point(source)?).map_err(err)?;
                let g = dom.geodesic_distance(y).map_err(err)?;
                let yc = dom.coords(y);
                let mut t = table(
                    label,
                    &[
                        coord_header(dim, "x"),
                        coord_header(dim, "y"),
                        cols(&["dist"]),
                    ],
                );
                let mut below = 0;
                for n in dom.nodes() {
                    let p = dom.coords(n);
                    if g.dist[n] < (p[0] - yc[0]).hypot(p[1] - yc[1]) - 1e-12 {
                        below += 1;
                    }
                    let mut row = coord_cells(p, dim);
                    row.extend(coord_cells(yc, dim));
                    row.push(num(g.dist[n]));
                    t.push(row);
                }
                sec.check(
                    "geodesic >= euclidean",
                    below == 0,
                    format!("{below} nodes below the straight-line distance"),
                );
                Ok(vec![t])
            }
            Operation::ExportField { field, .. } => {
                let u = r.field(field);
                let mut t = table(label, &[coord_header(dim, "x"), cols(&["u"])]);
                for n in dom.nodes() {
                    let mut row = coord_cells(dom.coords(n), dim);
                    row.push(num(u.value(n)));
                    t.push(row);
                }
                sec.line(format!("{} nodes", t.rows.len()));
                Ok(vec![t])
            }
        }
    }
}

/// `Witness` used by ad-hoc verbs that take a gradient list.
pub fn affine_witness(z: &[f64]) -> Option<WitnessConfig> {
    (!z.is_empty()).then(|| WitnessConfig::Affine(z.to_vec()))
}

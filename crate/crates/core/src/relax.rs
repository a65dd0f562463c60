//! Difference quotients and the relaxed envelope `Γ(F)(u)`.
//!
//! `Γ(F)(u) ≤ μ` holds exactly when `R_{μ+ε}(u) ≤ 1` for every `ε > 0`, where
//! `R_λ(u) = sup (u(x) - u(y)) / d^λ(x, y)` over pairs with
//! `0 < d^λ(x, y) < ∞`. [`relax_value`] bisects on `μ` for that predicate.
//!
//! The characterization needs a supremand whose minimum is `0` and is
//! attained at `u = 0`. A [`Witness`] `w` with `c = F(w)` close to `inf F`
//! reduces the general case to that one via
//! `G(v) = F(v + w) ∨ c - c` and `Γ(F)(u) ∨ c = c + Γ(G)(u - w)`.
//! On the grid `d_G^μ(x, y) = d_F^{μ+c}(x, y) - (w(x) - w(y))`.

use alloc::vec::Vec;

use crate::distance::{DistanceError, LevelGraph};
use crate::domain::{self, GridDomain};
use crate::field::{FieldError, GridFunction};
use crate::supremand::{Supremand, SupremandError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelaxError {
    #[error("ε must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("bracket ({0}, {1}) is empty or not finite")]
    BadBracket(f64, f64),
    #[error("bisection tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("sequence is not monotone at sample {sample} (step {step})")]
    NotMonotone { sample: usize, step: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Supremand(#[from] SupremandError),
}

/// Competitor attaining (or approaching) `inf F`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Witness {
    /// `w = 0`.
    #[default]
    Zero,
    /// `w = u_ζ`.
    Affine([f64; 2]),
    /// Explicit node values.
    Field(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxSettings {
    pub eps: f64,
    /// Search interval for `Γ(F)(u)`; defaults to `[F(w), F(u) ∨ F(w)]`.
    pub bracket: Option<(f64, f64)>,
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
    pub witness: Witness,
    /// Node mask of the open set `A` for the localized envelope.
    pub region: Option<Vec<bool>>,
    pub pair_seed: u64,
}

impl Default for RelaxSettings {
    fn default() -> Self {
        RelaxSettings {
            eps: 1e-4,
            bracket: None,
            tol: 1e-4,
            witness: Witness::Zero,
            region: None,
            pair_seed: 0,
        }
    }
}

impl RelaxSettings {
    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = w;
        self
    }

    pub fn with_region(mut self, region: Vec<bool>) -> Self {
        self.region = Some(region);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.eps = self.eps.min(tol);
        self
    }

    pub fn with_bracket(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = Some((lo, hi));
        self
    }
}

/// Value of `R` at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quotient {
    pub value: f64,
    /// Pairs with `0 < d < ∞` that entered the supremum. Zero means the
    /// supremum was empty and `value` is `0` by convention.
    pub pairs: usize,
}

/// One evaluation of the bisection predicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    /// Level of `F` (not of the shifted `G`).
    pub mu: f64,
    pub eps: f64,
    /// `None` when the level is empty or infeasible.
    pub quotient: Option<Quotient>,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeResult {
    pub value: f64,
    pub bracket: (f64, f64),
    pub eps: f64,
    /// `F(w)` for the witness used.
    pub witness_value: f64,
    pub probes: Vec<Probe>,
    /// The predicate failed at the top of the bracket; `value` is that end.
    pub not_reached: bool,
}

impl EnvelopeResult {
    /// Some probe found no pair with `0 < d < ∞`.
    pub fn had_empty_quotient(&self) -> bool {
        self.probes
            .iter()
            .any(|p| p.quotient.is_some_and(|q| q.pairs == 0))
    }
}

/// `sup (v(x) - v(s)) / d_G(x, s)` over `s ∈ sources` and active `x`, where
/// `v = u - w` and `d_G = d - (w(x) - w(s))`. With `stop_above`, the scan
/// ends as soon as the running value exceeds it.
pub fn difference_quotient(
    g: &LevelGraph,
    u: &GridFunction<'_>,
    witness: Option<&[f64]>,
    sources: &[usize],
    stop_above: Option<f64>,
) -> Result<Quotient, DistanceError> {
    let n = u.values().len();
    let w = |k: usize| witness.map_or(0.0, |w| w[k]);
    let mut best = Quotient {
        value: 0.0,
        pairs: 0,
    };
    for &s in sources {
        let field = g.fast(s)?;
        let (us, ws) = (u.value(s), w(s));
        for x in (0..n).filter(|&x| x != s && g.is_active(x)) {
            let d = field.dist[x] - (w(x) - ws);
            // a tiny positive d from round-off would blow the quotient up
            if !(d > 1e-12 * (1.0 + field.dist[x].abs())) || !d.is_finite() {
                continue;
            }
            best.pairs += 1;
            let q = ((u.value(x) - w(x)) - (us - ws)) / d;
            if q > best.value {
                best.value = q;
            }
        }
        if stop_above.is_some_and(|t| best.value > t) {
            break;
        }
    }
    Ok(best)
}

/// `R_{d^λ}(u)` with all scanned pairs, for reporting.
pub fn quotient_at_level(
    f: &Supremand,
    dom: &GridDomain,
    u: &GridFunction<'_>,
    lambda: f64,
    settings: &RelaxSettings,
) -> Result<Quotient, RelaxError> {
    let g = LevelGraph::build(f, dom, lambda, settings.region.as_deref())?;
    let w = witness_values(dom, &settings.witness)?;
    let sources = scan_sources(dom, settings);
    Ok(difference_quotient(&g, u, w.as_deref(), &sources, None)?)
}

fn witness_values(dom: &GridDomain, w: &Witness) -> Result<Option<Vec<f64>>, FieldError> {
    Ok(match w {
        Witness::Zero => None,
        Witness::Affine(z) => Some(GridFunction::affine(dom, *z).values().to_vec()),
        Witness::Field(v) => Some(GridFunction::new(dom, v.clone())?.values().to_vec()),
    })
}

fn scan_sources(dom: &GridDomain, settings: &RelaxSettings) -> Vec<usize> {
    let nodes: Vec<usize> = dom
        .nodes()
        .filter(|&n| settings.region.as_ref().is_none_or(|r| r[n]))
        .collect();
    domain::scan_sources(&nodes, settings.pair_seed)
}

/// Bisection for `Γ(F)(u)` (or the localized `Γ(F)(u, A)` when a region is set).
pub fn relax_value(
    f: &Supremand,
    dom: &GridDomain,
    u: &GridFunction<'_>,
    settings: &RelaxSettings,
) -> Result<EnvelopeResult, RelaxError> {
    if !(settings.eps > 0.0) {
        return Err(RelaxError::BadEpsilon(settings.eps));
    }
    if !(settings.tol > 0.0) {
        return Err(RelaxError::BadTolerance(settings.tol));
    }
    let region = settings.region.as_deref();
    let w = witness_values(dom, &settings.witness)?;
    let c = match &w {
        None => GridFunction::constant(dom, 0.0).supremal_value(f, region)?,
        Some(v) => GridFunction::new(dom, v.clone())?.supremal_value(f, region)?,
    };
    let (lo, hi) = match settings.bracket {
        Some(b) => b,
        None => (c, u.supremal_value(f, region)?.max(c)),
    };
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(RelaxError::BadBracket(lo, hi));
    }
    // values below c are invisible through the shift
    let (mut lo, mut hi) = (lo.max(c), hi);
    let sources = scan_sources(dom, settings);
    let mut probes = Vec::new();
    let mut predicate = |mu: f64, width: f64| -> Result<bool, RelaxError> {
        let eps = settings.eps.min(0.5 * width).max(f64::MIN_POSITIVE);
        let graph = match LevelGraph::build(f, dom, mu + eps, region) {
            Ok(g) => g,
            Err(DistanceError::EmptyLevel { .. } | DistanceError::Infeasible { .. }) => {
                probes.push(Probe {
                    mu,
                    eps,
                    quotient: None,
                    admissible: false,
                });
                return Ok(false);
            }
            Err(e) => return Err(e.into()),
        };
        let q = difference_quotient(&graph, u, w.as_deref(), &sources, Some(1.0))?;
        let admissible = q.value <= 1.0;
        probes.push(Probe {
            mu,
            eps,
            quotient: Some(q),
            admissible,
        });
        Ok(admissible)
    };
    if hi < lo {
        // the whole bracket lies below F(w)
        return Ok(EnvelopeResult {
            value: hi,
            bracket: (hi, hi),
            eps: settings.eps,
            witness_value: c,
            probes,
            not_reached: true,
        });
    }
    let width0 = (hi - lo).max(settings.tol);
    if predicate(lo, width0)? {
        return Ok(EnvelopeResult {
            value: lo,
            bracket: (lo, lo),
            eps: settings.eps.min(0.5 * width0),
            witness_value: c,
            probes,
            not_reached: false,
        });
    }
    if !predicate(hi, width0)? {
        return Ok(EnvelopeResult {
            value: hi,
            bracket: (lo, hi),
            eps: settings.eps.min(0.5 * width0),
            witness_value: c,
            probes,
            not_reached: true,
        });
    }
    while hi - lo > settings.tol {
        let mid = 0.5 * (lo + hi);
        if predicate(mid, hi - lo)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let eps = probes.last().map_or(settings.eps, |p| p.eps);
    Ok(EnvelopeResult {
        value: 0.5 * (lo + hi),
        bracket: (lo, hi),
        eps,
        witness_value: c,
        probes,
        not_reached: false,
    })
}

/// `f_n(x, ξ) = f(x, ξ) ∨ |ξ|/n`.
pub fn coercive_approximation(f: &Supremand, n: usize) -> Supremand {
    f.sup_norm_over(n.max(1) as f64)
}

/// `(F∨G)(u)` through the combined supremand against `F(u) ∨ G(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupIdentity {
    pub combined: f64,
    pub separate: f64,
}

impl SupIdentity {
    pub fn exact(&self) -> bool {
        self.combined == self.separate
    }
}

pub fn sup_identity(
    f: &Supremand,
    g: &Supremand,
    u: &GridFunction<'_>,
) -> Result<SupIdentity, FieldError> {
    let combined = u.supremal_value(&f.sup_with(g), None)?;
    let separate = u.supremal_value(f, None)?.max(u.supremal_value(g, None)?);
    Ok(SupIdentity { combined, separate })
}

/// `Γ(F ∨ c)(u)` against `Γ(F)(u) ∨ c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupConstCheck {
    pub c: f64,
    pub lhs: EnvelopeResult,
    pub rhs: EnvelopeResult,
}

impl SupConstCheck {
    pub fn gap(&self) -> f64 {
        (self.lhs.value - self.rhs.value.max(self.c)).abs()
    }
}

pub fn sup_const_check(
    f: &Supremand,
    dom: &GridDomain,
    u: &GridFunction<'_>,
    c: f64,
    settings: &RelaxSettings,
) -> Result<SupConstCheck, RelaxError> {
    let lhs = relax_value(&f.sup_const(c), dom, u, settings)?;
    let rhs = relax_value(f, dom, u, settings)?;
    Ok(SupConstCheck { c, lhs, rhs })
}

/// Locality of `F ∧ G`: the value on a union against the largest value on
/// the parts. A supremal functional has both equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeetLocality {
    pub union_value: f64,
    pub parts_max: f64,
}

pub fn meet_locality(
    f: &Supremand,
    g: &Supremand,
    u: &GridFunction<'_>,
    parts: &[Vec<bool>],
) -> Result<MeetLocality, FieldError> {
    let meet = |mask: &[bool]| -> Result<f64, FieldError> {
        Ok(u.supremal_value(f, Some(mask))?
            .min(u.supremal_value(g, Some(mask))?))
    };
    let mut parts_max = f64::NEG_INFINITY;
    for p in parts {
        parts_max = parts_max.max(meet(p)?);
    }
    // the union's cells are those inside some part, not ones straddling a gap
    let union_value = {
        let dom = u.domain();
        let cells: Vec<usize> = (0..dom.cells().len())
            .filter(|&c| {
                parts
                    .iter()
                    .any(|p| dom.cell(c).nodes(dom.dim()).all(|k| p[k]))
            })
            .collect();
        if cells.is_empty() {
            return Err(FieldError::NoInteriorCell);
        }
        let side = |s: &Supremand| -> Result<f64, FieldError> {
            let mut best = f64::NEG_INFINITY;
            for &c in &cells {
                best = best.max(s.eval(dom, c, u.gradient_at(c))?);
            }
            Ok(best)
        };
        side(f)?.min(side(g)?)
    };
    Ok(MeetLocality {
        union_value,
        parts_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub pair: usize,
    pub theta: f64,
    /// `V(θu + (1-θ)v) - V(u) ∨ V(v)`.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelConvexityReport {
    pub checks: usize,
    pub tol: f64,
    pub violations: Vec<Violation>,
    /// Largest excess seen, violation or not.
    pub worst: Option<Violation>,
}

impl LevelConvexityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `V(θu + (1-θ)v) ≤ V(u) ∨ V(v) + tol` on every pair and `θ`.
pub fn level_convexity_test<'d, E>(
    mut value: impl FnMut(&GridFunction<'d>) -> Result<f64, E>,
    pairs: &[(GridFunction<'d>, GridFunction<'d>)],
    thetas: &[f64],
    tol: f64,
) -> Result<LevelConvexityReport, E> {
    let mut report = LevelConvexityReport {
        checks: 0,
        tol,
        violations: Vec::new(),
        worst: None,
    };
    for (k, (u, v)) in pairs.iter().enumerate() {
        let top = value(u)?.max(value(v)?);
        for &theta in thetas {
            let mid = value(&u.blend(v, theta))?;
            let excess = mid - top;
            let here = Violation {
                pair: k,
                theta,
                excess,
            };
            report.checks += 1;
            if report.worst.is_none_or(|w| excess > w.excess) {
                report.worst = Some(here);
            }
            if excess > tol {
                report.violations.push(here);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaLimitReport {
    pub direction: Direction,
    /// Per sample, `|V_last(u) - V_limit(u)|`.
    pub gaps: Vec<f64>,
    pub max_gap: f64,
}

/// For a monotone sequence `values[n][sample]`, compares its last term with
/// `limit[sample]`. Monotonicity is checked first, with slack `tol`.
pub fn monotone_gamma_limit(
    values: &[Vec<f64>],
    limit: &[f64],
    tol: f64,
) -> Result<GammaLimitReport, RelaxError> {
    let decreasing = values
        .windows(2)
        .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| *b <= *a + tol));
    let increasing = values
        .windows(2)
        .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| *b + tol >= *a));
    let direction = if decreasing {
        Direction::Decreasing
    } else if increasing {
        Direction::Increasing
    } else {
        let (step, sample) = values
            .windows(2)
            .enumerate()
            .find_map(|(s, w)| {
                w[0].iter()
                    .zip(&w[1])
                    .position(|(a, b)| *b > *a + tol)
                    .map(|k| (s + 1, k))
            })
            .unwrap_or((0, 0));
        return Err(RelaxError::NotMonotone { sample, step });
    };
    let last = values.last().map(|v| v.as_slice()).unwrap_or(&[]);
    let gaps: Vec<f64> = last.iter().zip(limit).map(|(a, b)| (a - b).abs()).collect();
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    Ok(GammaLimitReport {
        direction,
        gaps,
        max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::domain::DomainSpec;
    use crate::region::Region;
    use alloc::vec;
    use proptest::prelude::*;

    fn line(lo: f64, hi: f64, h: f64) -> GridDomain {
        GridDomain::build(&DomainSpec::interval(lo, hi, h)).unwrap()
    }

    /// Closed form of the relaxed double well along a 1-D field.
    fn double_well_lc(u: &GridFunction<'_>) -> f64 {
        u.discrete_gradient()
            .iter()
            .map(|g| (g.xi[0].abs() - 1.0).max(0.0).powi(2))
            .fold(0.0, f64::max)
    }

    #[test]
    fn quotient_basics() {
        let d = GridDomain::build(&DomainSpec::rectangle([0.0, 0.0], [1.0, 1.0], 0.1)).unwrap();
        let f = catalog::scaled_norm(2, 1.0);
        let s = RelaxSettings::default();
        let c = GridFunction::constant(&d, 4.0);
        assert_eq!(quotient_at_level(&f, &d, &c, 2.0, &s).unwrap().value, 0.0);
        let u = GridFunction::affine(&d, [3.0, 0.0]);
        let q = quotient_at_level(&f, &d, &u, 2.0, &s).unwrap();
        assert!((q.value - 1.5).abs() < 1e-9, "{q:?}");
        let scaled = u.scale(0.5).shift(7.0);
        let q2 = quotient_at_level(&f, &d, &scaled, 2.0, &s).unwrap();
        assert!((q2.value - 0.75).abs() < 1e-9);
    }

    #[test]
    fn admissible_field_has_quotient_at_most_one() {
        let d = line(-1.0, 1.0, 0.02);
        let f = catalog::double_well(1);
        let u = GridFunction::from_fn(&d, |p| libm::sin(3.0 * p[0]) * 0.3).unwrap();
        let level = u.supremal_value(&f, None).unwrap();
        let s = RelaxSettings::default().with_witness(Witness::Affine([1.0, 0.0]));
        assert!(quotient_at_level(&f, &d, &u, level, &s).unwrap().value <= 1.0 + 1e-12);
    }

    #[test]
    fn norm_envelope_is_the_functional() {
        let d = line(-1.0, 1.0, 0.02);
        let f = catalog::scaled_norm(1, 1.0);
        let u = GridFunction::from_fn(&d, |p| libm::sin(2.0 * p[0])).unwrap();
        let r = relax_value(&f, &d, &u, &RelaxSettings::default()).unwrap();
        let fu = u.supremal_value(&f, None).unwrap();
        assert!((r.value - fu).abs() <= 2.0 * 1e-4, "{} vs {fu}", r.value);
        assert!(r.bracket.0 <= r.value && r.value <= r.bracket.1);
        assert!(!r.not_reached);
    }

    #[test]
    fn double_well_affine_gives_envelope() {
        let d = line(-1.0, 1.0, 0.02);
        let f = catalog::double_well(1);
        let s = RelaxSettings::default().with_witness(Witness::Affine([1.0, 0.0]));
        for xi in [0.0, 0.5, -0.9, 1.4, -2.0] {
            let u = GridFunction::affine(&d, [xi, 0.0]);
            let r = relax_value(&f, &d, &u, &s).unwrap();
            let want = (f64::abs(xi) - 1.0).max(0.0).powi(2);
            assert!(
                (r.value - want).abs() <= 2e-4,
                "ξ={xi}: {} vs {want}",
                r.value
            );
        }
    }

    #[test]
    fn zero_witness_hides_values_below_f_of_zero() {
        let d = line(-1.0, 1.0, 0.05);
        let f = catalog::double_well(1);
        let u = GridFunction::affine(&d, [1.0, 0.0]);
        let r = relax_value(&f, &d, &u, &RelaxSettings::default()).unwrap();
        assert_eq!(r.witness_value, 1.0);
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn localized_two_regime_example() {
        let d = line(-2.0, 2.0, 0.02);
        let f = catalog::boh();
        let inner = d.mask_of(&Region::interval(-0.7, 0.9));
        let s = RelaxSettings::default()
            .with_witness(Witness::Affine([1.0, 0.0]))
            .with_region(inner.clone());
        for k in 0..3 {
            let u = GridFunction::from_fn(&d, |p| libm::cos((k + 1) as f64 * p[0])).unwrap();
            assert!(u.supremal_value(&f, Some(&inner)).unwrap() > 0.5);
            let r = relax_value(&f, &d, &u, &s).unwrap();
            assert!(r.value.abs() < 1e-3, "{r:?}");
        }
        let u1 = GridFunction::affine(&d, [1.0, 0.0]);
        let r = relax_value(&f, &d, &u1, &RelaxSettings::default()).unwrap();
        assert!((r.value - 3.0).abs() < 1e-3, "{}", r.value);
    }

    #[test]
    fn rejects_bad_settings() {
        let d = line(0.0, 1.0, 0.1);
        let f = catalog::scaled_norm(1, 1.0);
        let u = GridFunction::constant(&d, 0.0);
        let mut s = RelaxSettings {
            eps: 0.0,
            ..RelaxSettings::default()
        };
        assert_eq!(
            relax_value(&f, &d, &u, &s).unwrap_err(),
            RelaxError::BadEpsilon(0.0)
        );
        s.eps = 1e-3;
        s.bracket = Some((2.0, 1.0));
        assert_eq!(
            relax_value(&f, &d, &u, &s).unwrap_err(),
            RelaxError::BadBracket(2.0, 1.0)
        );
    }

    #[test]
    fn top_of_bracket_not_reached_is_flagged() {
        let d = line(0.0, 1.0, 0.05);
        let f = catalog::scaled_norm(1, 1.0);
        let u = GridFunction::affine(&d, [3.0, 0.0]);
        let r = relax_value(&f, &d, &u, &RelaxSettings::default().with_bracket(0.0, 2.0)).unwrap();
        assert!(r.not_reached);
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn coercive_approximation_of_zero() {
        let d = line(-1.0, 1.0, 0.05);
        let f = Supremand::parse_homogeneous(1, "0").unwrap();
        let u = GridFunction::affine(&d, [1.5, 0.0]);
        let mut prev = f64::INFINITY;
        for n in [1usize, 2, 4, 8] {
            let fnn = coercive_approximation(&f, n);
            assert!(fnn.eval(&d, 0, [2.0, 0.0]).unwrap() == 2.0 / n as f64);
            let r = relax_value(&fnn, &d, &u, &RelaxSettings::default()).unwrap();
            assert!((r.value - 1.5 / n as f64).abs() < 2e-4);
            assert!(r.value <= prev);
            prev = r.value;
        }
    }

    #[test]
    fn meet_is_not_local() {
        let d = line(-1.0, 1.0, 0.01);
        let (f, g) = catalog::fg_meet();
        let u = GridFunction::from_fn(&d, |p| p[0] * p[0]).unwrap();
        let a = d.mask_of(&Region::interval(-1.0, -0.5));
        let b = d.mask_of(&Region::interval(0.0, 1.0));
        let m = meet_locality(&f, &g, &u, &[a, b]).unwrap();
        assert_eq!((m.union_value, m.parts_max), (3.0, 2.0));
        let id = sup_identity(&f, &g, &u).unwrap();
        assert!(id.exact());
    }

    #[test]
    fn level_convexity_of_double_well() {
        let d = line(-1.0, 1.0, 0.05);
        let f = catalog::double_well(1);
        let pairs = vec![(
            GridFunction::affine(&d, [1.0, 0.0]),
            GridFunction::affine(&d, [-1.0, 0.0]),
        )];
        let raw =
            level_convexity_test(|u| u.supremal_value(&f, None), &pairs, &[0.5], 1e-9).unwrap();
        assert!(!raw.passes());
        assert!((raw.violations[0].excess - 1.0).abs() < 1e-12);
        let s = RelaxSettings::default().with_witness(Witness::Affine([1.0, 0.0]));
        let relaxed = level_convexity_test(
            |u| relax_value(&f, &d, u, &s).map(|r| r.value),
            &pairs,
            &[0.25, 0.5],
            1e-3,
        )
        .unwrap();
        assert!(relaxed.passes(), "{relaxed:?}");
        let norm = catalog::scaled_norm(1, 1.0);
        assert!(level_convexity_test(
            |u| u.supremal_value(&norm, None),
            &pairs,
            &[0.1, 0.5, 0.9],
            1e-12
        )
        .unwrap()
        .passes());
    }

    #[test]
    fn gamma_limit_checks_monotonicity() {
        let r = monotone_gamma_limit(
            &[vec![3.0, 2.0], vec![2.0, 2.0], vec![1.01, 1.5]],
            &[1.0, 1.5],
            0.0,
        )
        .unwrap();
        assert_eq!(r.direction, Direction::Decreasing);
        assert!((r.max_gap - 0.01).abs() < 1e-12);
        assert_eq!(
            monotone_gamma_limit(&[vec![1.0, 2.0], vec![2.0, 1.0]], &[0.0, 0.0], 0.0).unwrap_err(),
            RelaxError::NotMonotone { sample: 0, step: 1 }
        );
    }

    #[test]
    fn sup_const_lattice() {
        let d = line(-1.0, 1.0, 0.05);
        let f = catalog::scaled_norm(1, 1.0);
        let u = GridFunction::from_fn(&d, |p| 0.8 * p[0] * p[0]).unwrap();
        for c in [-1.0, 0.7, 5.0] {
            let chk = sup_const_check(&f, &d, &u, c, &RelaxSettings::default()).unwrap();
            assert!(chk.gap() <= 2e-4, "c={c}: {chk:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn relaxed_double_well_matches_closed_form(a in -1.5f64..1.5, b in -1.0f64..1.0, k in 1.0f64..4.0) {
            let d = line(-1.0, 1.0, 0.04);
            let f = catalog::double_well(1);
            let u = GridFunction::from_fn(&d, |p| a * p[0] + b * libm::sin(k * p[0])).unwrap();
            let s = RelaxSettings::default().with_witness(Witness::Affine([1.0, 0.0]));
            let r = relax_value(&f, &d, &u, &s).unwrap();
            let want = double_well_lc(&u);
            prop_assert!((r.value - want).abs() <= 2e-4, "{} vs {}", r.value, want);
            prop_assert!(r.value <= u.supremal_value(&f, None).unwrap() + 1e-4);
        }

        #[test]
        fn quotient_is_convex_and_translation_invariant(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -5.0f64..5.0) {
            let d = line(-1.0, 1.0, 0.1);
            let f = catalog::asymmetric();
            let s = RelaxSettings::default();
            let u = GridFunction::from_fn(&d, |p| a * p[0] * p[0]).unwrap();
            let v = GridFunction::from_fn(&d, |p| b * libm::sin(2.0 * p[0])).unwrap();
            let q = |w: &GridFunction<'_>| quotient_at_level(&f, &d, w, 1.5, &s).unwrap().value;
            prop_assert!(q(&u.blend(&v, 0.5)) <= 0.5 * q(&u) + 0.5 * q(&v) + 1e-12);
            prop_assert!((q(&u.shift(c)) - q(&u)).abs() < 1e-9);
            prop_assert!((q(&u.scale(2.0)) - 2.0 * q(&u)).abs() < 1e-9);
        }
    }
}

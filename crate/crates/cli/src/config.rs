//! Scenario files: a single TOML document with a domain, named supremands,
//! named fields and an ordered list of operations.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::ScenarioError;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: Option<String>,
    pub description: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub domain: DomainConfig,
    #[serde(default)]
    pub supremands: BTreeMap<String, SupremandConfig>,
    #[serde(default)]
    pub fields: BTreeMap<String, FieldConfig>,
    #[serde(default)]
    pub operations: Vec<Operation>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub h: f64,
    /// `diagonal` (8 neighbours, the default) or `axis` (4 neighbours).
    pub stencil: Option<String>,
    #[serde(default)]
    pub obstacles: Vec<BoxConfig>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PieceConfig {
    pub region: String,
    pub profile: String,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub half_width: f64,
    pub step: f64,
}

/// Exactly one of `catalog`, `profile` and `pieces`.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SupremandConfig {
    /// `norm`, `double-well`, `asymmetric`, `boh`, `fg-f`, `fg-g`.
    pub catalog: Option<String>,
    /// Constant `c` for `catalog = "norm"`.
    pub scale: Option<f64>,
    /// Homogeneous profile `f(x, ξ)`.
    pub profile: Option<String>,
    pub pieces: Option<Vec<PieceConfig>>,
    pub coercivity: Option<f64>,
    pub linear_bound: Option<f64>,
    pub window: Option<WindowConfig>,
}

/// Exactly one of `expr`, `csv`, `affine`, `random`; `sawtooth` is added on top.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    /// Expression in `x` (or `x1`, `x2`).
    pub expr: Option<String>,
    /// CSV file with a header row, coordinates and one value column,
    /// relative to the scenario file.
    pub csv: Option<PathBuf>,
    /// Gradient of a linear field `ξ·x`.
    pub affine: Option<Vec<f64>>,
    pub random: Option<RandomFieldConfig>,
    pub sawtooth: Option<SawtoothConfig>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFieldConfig {
    /// Range of the mean slope (1-D only).
    #[serde(default)]
    pub slope: [f64; 2],
    /// Amplitude bound of the three smooth ripples.
    pub wiggle: f64,
    /// Mixed into the scenario seed together with the field name.
    #[serde(default)]
    pub stream: u64,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SawtoothConfig {
    pub n: usize,
    pub slope: f64,
}

/// A number or a coordinate list.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Point {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Point {
    pub fn to_array(&self, dim: usize) -> Result<[f64; 2], ScenarioError> {
        match self {
            Point::Scalar(v) if dim == 1 => Ok([*v, 0.0]),
            Point::Vector(v) if v.len() == dim => Ok([v[0], if dim == 2 { v[1] } else { 0.0 }]),
            _ => Err(ScenarioError::Invalid(format!(
                "point {self:?} does not have {dim} coordinates"
            ))),
        }
    }
}

/// `"zero"`, a gradient list for `u_ζ`, or `{ field = "name" }`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum WitnessConfig {
    Named(String),
    Affine(Vec<f64>),
    Field { field: String },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RandomPairs {
    pub count: usize,
    #[serde(default)]
    pub slope: [f64; 2],
    pub wiggle: f64,
    /// Give every other pair opposite slopes `+s` and `-s`.
    #[serde(default)]
    pub opposed: bool,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Operation {
    /// `F(u, A)`.
    Supremal {
        label: Option<String>,
        supremand: String,
        field: String,
        region: Option<String>,
        expect: Option<f64>,
        tol: Option<f64>,
    },
    /// `(F∧G)(u, ∪A_i)` against `max_i (F∧G)(u, A_i)`.
    MeetLocality {
        label: Option<String>,
        f: String,
        g: String,
        field: String,
        parts: Vec<String>,
        expect_union: Option<f64>,
        expect_parts: Option<f64>,
    },
    /// `F∨G` evaluated through the combined supremand.
    SupIdentity {
        label: Option<String>,
        f: String,
        g: String,
        fields: Vec<String>,
    },
    /// Pseudo-distance fields from one source.
    Distance {
        label: Option<String>,
        supremand: String,
        lambda: f64,
        source: Point,
        #[serde(default = "default_methods")]
        methods: Vec<String>,
        region: Option<String>,
        #[serde(default)]
        sandwich: bool,
        /// Assert `|fast - oracle| ≤ compare_tol` (and `oracle ≤ fast`).
        compare_tol: Option<f64>,
        /// Assert every other node is at distance `+∞`.
        expect_unbounded: Option<bool>,
    },
    Relax {
        label: Option<String>,
        supremand: String,
        field: String,
        eps: Option<f64>,
        tol: Option<f64>,
        bracket: Option<[f64; 2]>,
        witness: Option<WitnessConfig>,
        region: Option<String>,
        expect: Option<f64>,
        expect_tol: Option<f64>,
    },
    /// Level-convex envelope of `f(x, ·)`.
    Envelope {
        label: Option<String>,
        supremand: String,
        at: Point,
        window: Option<WindowConfig>,
        /// Closed form of the envelope, an expression in `xi`.
        expect: Option<String>,
        tol: Option<f64>,
    },
    /// Table of the representation supremand.
    Represent {
        label: Option<String>,
        supremand: String,
        xs: Vec<Point>,
        xis: Vec<Point>,
        budget: Option<usize>,
        /// Name of a supremand holding the expected `φ`.
        expect: Option<String>,
        tol: Option<f64>,
    },
    /// Localized relaxed supremand on a family of regions.
    Localized {
        label: Option<String>,
        supremand: String,
        regions: Vec<String>,
        fields: Vec<String>,
        tol: Option<f64>,
        /// Sampling of the fitted envelope; the supremand's window by default.
        envelope_window: Option<WindowConfig>,
        /// Name of a supremand holding the expected `g`.
        expect: Option<String>,
        expect_tol: Option<f64>,
    },
    LevelConvexity {
        label: Option<String>,
        supremand: String,
        /// `relax` or `supremal`.
        functional: String,
        #[serde(default)]
        pairs: Vec<[String; 2]>,
        random_pairs: Option<RandomPairs>,
        thetas: Vec<f64>,
        tol: Option<f64>,
        bisection_tol: Option<f64>,
        witness: Option<WitnessConfig>,
        /// `pass` or `fail`.
        expect: Option<String>,
    },
    /// `Γ(F∨c) = Γ(F)∨c`.
    SupConst {
        label: Option<String>,
        supremand: String,
        fields: Vec<String>,
        cs: Vec<f64>,
        tol: Option<f64>,
        witness: Option<WitnessConfig>,
    },
    /// `F_n = F ∨ |Du|/n` and the limit of `Γ(F_n)`.
    Coercive {
        label: Option<String>,
        supremand: String,
        fields: Vec<String>,
        ns: Vec<usize>,
        tol: Option<f64>,
        witness: Option<WitnessConfig>,
        expect_gap: Option<f64>,
    },
    /// Gradient bound against Euclidean and geodesic Lipschitz constants.
    Seminorms {
        label: Option<String>,
        fields: Vec<String>,
        max_relative_gap: Option<f64>,
        #[serde(default)]
        check_euclid: bool,
    },
    /// Geodesic distance table from one node.
    Geodesic {
        label: Option<String>,
        source: Point,
    },
    /// Node values of a field.
    ExportField {
        label: Option<String>,
        field: String,
    },
}

fn default_methods() -> Vec<String> {
    vec!["fast".into(), "oracle".into()]
}

impl Operation {
    pub fn kind(&self) -> &'static str {
        match self {
            Operation::Supremal { .. } => "supremal",
            Operation::MeetLocality { .. } => "meet-locality",
            Operation::SupIdentity { .. } => "sup-identity",
            Operation::Distance { .. } => "distance",
            Operation::Relax { .. } => "relax",
            Operation::Envelope { .. } => "envelope",
            Operation::Represent { .. } => "represent",
            Operation::Localized { .. } => "localized",
            Operation::LevelConvexity { .. } => "level-convexity",
            Operation::SupConst { .. } => "sup-const",
            Operation::Coercive { .. } => "coercive",
            Operation::Seminorms { .. } => "seminorms",
            Operation::Geodesic { .. } => "geodesic",
            Operation::ExportField { .. } => "export-field",
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Operation::Supremal { label, .. }
            | Operation::MeetLocality { label, .. }
            | Operation::SupIdentity { label, .. }
            | Operation::Distance { label, .. }
            | Operation::Relax { label, .. }
            | Operation::Envelope { label, .. }
            | Operation::Represent { label, .. }
            | Operation::Localized { label, .. }
            | Operation::LevelConvexity { label, .. }
            | Operation::SupConst { label, .. }
            | Operation::Coercive { label, .. }
            | Operation::Seminorms { label, .. }
            | Operation::Geodesic { label, .. }
            | Operation::ExportField { label, .. } => label.as_deref(),
        }
    }
}

/// Parses a scenario, reporting syntax errors with line and column.
pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ScenarioError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    if scenario.version != VERSION {
        return Err(ScenarioError::Version(scenario.version));
    }
    Ok(scenario)
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |k| before.len() - k - 1)
        + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_positions() {
        let text = "version = 1\n[domain]\ndim = 1\nlower = [0.0]\nupper = [1.0]\nh = \"x\"\n";
        match parse(text) {
            Err(ScenarioError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let text = "version = 7\n[domain]\ndim = 1\nlower = [0.0]\nupper = [1.0]\nh = 0.1\n";
        assert!(matches!(parse(text), Err(ScenarioError::Version(7))));
    }

    #[test]
    fn operations_are_tagged() {
        let text = r#"
version = 1
[domain]
dim = 1
lower = [0.0]
upper = [1.0]
h = 0.1
[[operations]]
kind = "distance"
supremand = "f"
lambda = 2.0
source = 0.5
"#;
        let s = parse(text).unwrap();
        assert_eq!(s.operations[0].kind(), "distance");
        let bad = text.replace("distance", "teleport");
        assert!(matches!(parse(&bad), Err(ScenarioError::Parse { .. })));
    }
}

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use supremal::builtins;
use supremal::config::{
    BoxConfig, DomainConfig, FieldConfig, Operation, Point, Scenario, SupremandConfig,
    WindowConfig, VERSION,
};
use supremal::{Report, RunOptions, ScenarioError};

#[derive(Parser)]
#[command(
    name = "supremal",
    version,
    about = "Run supremal-functional scenarios"
)]
struct Cli {
    /// Seed overriding the scenario's own.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for report.txt and CSV tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Bisection tolerance for relaxed values where the scenario sets none.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario by name.
    Run { scenario: String },
    /// List the built-in scenarios.
    List,
    /// Pseudo-distance field d^λ from one source node.
    Distance {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        supremand: SupremandArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Source point, one coordinate per dimension.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        source: Vec<f64>,
        /// fast, oracle, brute (repeatable).
        #[arg(long = "method", default_values = ["fast", "oracle"])]
        methods: Vec<String>,
        #[arg(long)]
        region: Option<String>,
    },
    /// Relaxed value Γ(F)(u) by bisection.
    Relax {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        supremand: SupremandArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        eps: Option<f64>,
        /// `lo,hi`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        bracket: Option<Vec<f64>>,
        /// Gradient of the affine witness; zero when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        witness: Vec<f64>,
        #[arg(long)]
        region: Option<String>,
    },
    /// Level-convex envelope of f(x, ·) at one point.
    Envelope {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        supremand: SupremandArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        /// Closed form to compare with, an expression in xi.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Representation supremand φ on a table of points and gradients.
    Represent {
        /// Run a built-in example instead (for instance `boh`).
        #[arg(long)]
        example: Option<String>,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        supremand: SupremandArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xs: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xis: Vec<f64>,
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Args)]
struct DomainArgs {
    /// Lower corner (comma separated for 2-D).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-1.0])]
    lower: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1.0])]
    upper: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    /// axis or diagonal.
    #[arg(long)]
    stencil: Option<String>,
    /// Removed box `lo1,lo2,hi1,hi2` (repeatable).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    obstacle: Vec<f64>,
}

fn arity(flag: &str, v: &[f64], n: usize) -> Result<(), ScenarioError> {
    if !v.len().is_multiple_of(n) {
        return Err(ScenarioError::Invalid(format!(
            "--{flag} takes groups of {n} numbers, got {}",
            v.len()
        )));
    }
    Ok(())
}

impl DomainArgs {
    fn config(&self) -> Result<DomainConfig, ScenarioError> {
        arity("obstacle", &self.obstacle, 4)?;
        Ok(DomainConfig {
            dim: self.lower.len(),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            h: self.h,
            stencil: self.stencil.clone(),
            obstacles: self
                .obstacle
                .chunks(4)
                .map(|c| BoxConfig {
                    lower: c[..2].to_vec(),
                    upper: c[2..].to_vec(),
                })
                .collect(),
        })
    }
}

#[derive(Args)]
struct SupremandArgs {
    /// Homogeneous profile f(x, ξ), e.g. "|xi| + x^2".
    #[arg(long)]
    profile: Option<String>,
    /// Named supremand: norm, double-well, asymmetric, boh, fg-f, fg-g.
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    coercivity: Option<f64>,
    #[arg(long)]
    linear_bound: Option<f64>,
    /// Gradient window `half_width,step`.
    #[arg(long, value_delimiter = ',')]
    window: Option<Vec<f64>>,
}

impl SupremandArgs {
    fn config(&self) -> Result<SupremandConfig, ScenarioError> {
        if let Some(w) = &self.window {
            if w.len() != 2 {
                return Err(ScenarioError::Invalid(
                    "--window takes half_width,step".into(),
                ));
            }
        }
        Ok(SupremandConfig {
            catalog: self.catalog.clone(),
            scale: self.scale,
            profile: self.profile.clone(),
            pieces: None,
            coercivity: self.coercivity,
            linear_bound: self.linear_bound,
            window: self.window.as_ref().map(|w| WindowConfig {
                half_width: w[0],
                step: w[1],
            }),
        })
    }
}

#[derive(Args)]
struct FieldArgs {
    /// Field expression in x (or x1, x2).
    #[arg(long)]
    field: Option<String>,
    /// Field from a CSV file.
    #[arg(long)]
    field_csv: Option<PathBuf>,
}

impl FieldArgs {
    fn config(&self) -> Result<FieldConfig, ScenarioError> {
        let csv = match &self.field_csv {
            Some(p) => Some(std::fs::canonicalize(p).map_err(|e| ScenarioError::Io {
                path: p.clone(),
                source: e,
            })?),
            None => None,
        };
        Ok(FieldConfig {
            expr: self.field.clone(),
            csv,
            ..FieldConfig::default()
        })
    }
}

fn scenario(
    name: &str,
    domain: &DomainArgs,
    supremand: &SupremandArgs,
    op: Operation,
) -> Result<Scenario, ScenarioError> {
    let mut supremands = BTreeMap::new();
    supremands.insert("f".to_string(), supremand.config()?);
    Ok(Scenario {
        version: VERSION,
        name: Some(name.to_string()),
        description: None,
        seed: 0,
        out: None,
        domain: domain.config()?,
        supremands,
        fields: BTreeMap::new(),
        operations: vec![op],
    })
}

fn point(v: &[f64]) -> Point {
    if v.len() == 1 {
        Point::Scalar(v[0])
    } else {
        Point::Vector(v.to_vec())
    }
}

fn dispatch(cli: Cli) -> Result<Option<Report>, ScenarioError> {
    let opts = RunOptions {
        seed: cli.seed,
        out: cli.out,
        tol: cli.tol,
    };
    let here = Path::new(".");
    let report = match cli.command {
        Command::List => {
            for name in builtins::list_builtins() {
                println!("{name}");
            }
            return Ok(None);
        }
        Command::Run { scenario } => {
            let path = Path::new(&scenario);
            if path.exists() {
                supremal::run_scenario(path, &opts)?
            } else if builtins::builtin_text(&scenario).is_some() {
                builtins::run_builtin(&scenario, &opts)?
            } else {
                return Err(ScenarioError::Io {
                    path: path.to_path_buf(),
                    source: std::io::Error::new(
                        std::io::ErrorKind::NotFound,
                        "no such file or built-in scenario",
                    ),
                });
            }
        }
        Command::Distance {
            domain,
            supremand,
            lambda,
            source,
            methods,
            region,
        } => {
            let op = Operation::Distance {
                label: Some("distance".into()),
                supremand: "f".into(),
                lambda,
                source: point(&source),
                methods,
                region,
                sandwich: false,
                compare_tol: None,
                expect_unbounded: None,
            };
            supremal::run(
                &scenario("distance", &domain, &supremand, op)?,
                "distance",
                here,
                &opts,
            )?
        }
        Command::Relax {
            domain,
            supremand,
            field,
            eps,
            bracket,
            witness,
            region,
        } => {
            if let Some(b) = &bracket {
                if b.len() != 2 {
                    return Err(ScenarioError::Invalid("--bracket takes lo,hi".into()));
                }
            }
            let op = Operation::Relax {
                label: Some("relax".into()),
                supremand: "f".into(),
                field: "u".into(),
                eps,
                tol: None,
                bracket: bracket.map(|b| [b[0], b[1]]),
                witness: supremal::affine_witness(&witness),
                region,
                expect: None,
                expect_tol: None,
            };
            let mut s = scenario("relax", &domain, &supremand, op)?;
            s.fields.insert("u".into(), field.config()?);
            supremal::run(&s, "relax", here, &opts)?
        }
        Command::Envelope {
            domain,
            supremand,
            at,
            expect,
        } => {
            let at = if at.is_empty() {
                vec![0.0; domain.lower.len()]
            } else {
                at
            };
            let op = Operation::Envelope {
                label: Some("envelope".into()),
                supremand: "f".into(),
                at: point(&at),
                window: None,
                expect,
                tol: None,
            };
            supremal::run(
                &scenario("envelope", &domain, &supremand, op)?,
                "envelope",
                here,
                &opts,
            )?
        }
        Command::Represent {
            example: Some(name),
            ..
        } => {
            let builtin = format!("example-{name}");
            builtins::run_builtin(&builtin, &opts)?
        }
        Command::Represent {
            example: None,
            domain,
            supremand,
            xs,
            xis,
            budget,
        } => {
            let dim = domain.lower.len();
            let pts = |v: &[f64]| v.chunks(dim).map(point).collect::<Vec<_>>();
            let op = Operation::Represent {
                label: Some("represent".into()),
                supremand: "f".into(),
                xs: pts(&xs),
                xis: pts(&xis),
                budget,
                expect: None,
                tol: None,
            };
            supremal::run(
                &scenario("represent", &domain, &supremand, op)?,
                "represent",
                here,
                &opts,
            )?
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            print!("{}", report.render());
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ScenarioError::EXIT_CODE)
        }
    }
}

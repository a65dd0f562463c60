use std::fs;
use std::path::Path;

use supremal::builtins::{list_builtins, run_builtin};
use supremal::{run_scenario, run_text, RunOptions, ScenarioError};

const LINE: &str = r#"
version = 1
seed = 5

[domain]
dim = 1
lower = [-1.0]
upper = [1.0]
h = 0.05
"#;

fn run(text: &str) -> Result<supremal::Report, ScenarioError> {
    run_text(text, "test", Path::new("."), &RunOptions::default())
}

#[test]
fn every_builtin_passes() {
    for name in list_builtins() {
        let report =
            run_builtin(name, &RunOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(report.passed(), "{name}:\n{}", report.render());
        assert!(report.check_count().1 > 0, "{name} asserts nothing");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        run_builtin(
            "main-theorem-suite",
            &RunOptions {
                out: Some(dir.to_path_buf()),
                ..RunOptions::default()
            },
        )
        .unwrap();
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n.to_string_lossy().ends_with(".csv")));
    for n in names {
        assert_eq!(
            fs::read(a.path().join(&n)).unwrap(),
            fs::read(b.path().join(&n)).unwrap(),
            "{n:?} differs"
        );
    }
}

#[test]
fn seed_override_changes_random_fields_only_through_the_seed() {
    let text = format!("{LINE}\n[fields.r]\nrandom = {{ slope = [-1.0, 1.0], wiggle = 0.3 }}\n[[operations]]\nkind = \"export-field\"\nfield = \"r\"\n");
    let base = run(&text).unwrap();
    let same = run_text(
        &text,
        "t",
        Path::new("."),
        &RunOptions {
            seed: Some(5),
            ..RunOptions::default()
        },
    )
    .unwrap();
    let other = run_text(
        &text,
        "t",
        Path::new("."),
        &RunOptions {
            seed: Some(6),
            ..RunOptions::default()
        },
    )
    .unwrap();
    assert_eq!(base.tables, same.tables);
    assert_ne!(base.tables, other.tables);
}

#[test]
fn empty_operation_list_passes() {
    let report = run(LINE).unwrap();
    assert!(report.passed());
    assert!(report.sections.is_empty());
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn failed_assertion_is_reported_not_raised() {
    let text = format!(
        "{LINE}\n[supremands.f]\nprofile = \"|xi|\"\n[fields.u]\naffine = [2.0]\n[[operations]]\nkind = \"supremal\"\nsupremand = \"f\"\nfield = \"u\"\nexpect = 1.0\n"
    );
    let report = run(&text).unwrap();
    assert!(!report.passed());
    assert_eq!(report.exit_code(), 1);
    assert!(report.render().contains("FAIL value"));
}

#[test]
fn unresolved_references_are_config_errors() {
    let text = format!("{LINE}\n[fields.u]\nexpr = \"x\"\n[[operations]]\nkind = \"supremal\"\nsupremand = \"nope\"\nfield = \"u\"\n");
    match run(&text) {
        Err(ScenarioError::Unresolved {
            operation: 1,
            kind: "supremand",
            name,
        }) => assert_eq!(name, "nope"),
        other => panic!("{other:?}"),
    }
    let text = format!("{LINE}\n[supremands.f]\nprofile = \"|xi|\"\n[fields.u]\nexpr = \"x\"\n[[operations]]\nkind = \"supremal\"\nsupremand = \"f\"\nfield = \"u\"\nregion = \"(0,\"\n");
    assert!(matches!(run(&text), Err(ScenarioError::Invalid(m)) if m.contains("region")));
}

#[test]
fn parse_errors_name_the_line() {
    let text = format!("{LINE}\n[supremands.f]\nprofile = |xi|\n");
    match run(&text) {
        Err(e @ ScenarioError::Parse { line: 12, .. }) => {
            assert!(e.to_string().starts_with("line 12"))
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn csv_fields_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let export = format!("{LINE}\n[fields.u]\nexpr = \"x^2 - x\"\n[[operations]]\nkind = \"export-field\"\nlabel = \"u\"\nfield = \"u\"\n");
    run_text(
        &export,
        "e",
        Path::new("."),
        &RunOptions {
            out: Some(dir.path().to_path_buf()),
            ..RunOptions::default()
        },
    )
    .unwrap();
    let scenario = format!(
        "{LINE}\n[supremands.f]\nprofile = \"|xi|\"\n[fields.a]\nexpr = \"x^2 - x\"\n[fields.b]\ncsv = \"u.csv\"\n\
         [[operations]]\nkind = \"supremal\"\nsupremand = \"f\"\nfield = \"b\"\nexpect = 2.85\ntol = 1e-12\n"
    );
    let path = dir.path().join("s.toml");
    fs::write(&path, scenario).unwrap();
    let report = run_scenario(&path, &RunOptions::default()).unwrap();
    assert!(report.passed(), "{}", report.render());
}

use std::fs;
use std::process::{Command, Output};

fn supremal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supremal"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_is_sorted_and_stable() {
    let a = supremal(&["list"]);
    assert!(a.status.success());
    let names: Vec<String> = stdout(&a).lines().map(str::to_string).collect();
    for required in [
        "example-boh",
        "example-fg-meet",
        "main-theorem-suite",
        "sandwich-suite",
    ] {
        assert!(names.iter().any(|n| n == required), "{required} missing");
    }
    assert!(names.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(stdout(&supremal(&["list"])), stdout(&a));
}

#[test]
fn builtin_runs_exit_zero() {
    let o = supremal(&["run", "example-fg-meet"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("(F∧G)(u, ∪ parts) = 3"));
    assert!(text.contains("max over parts of (F∧G)(u, part) = 2"));
    assert_eq!(
        supremal(&["represent", "--example", "boh"]).status.code(),
        Some(0)
    );
}

#[test]
fn exit_codes_separate_failures_from_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let base = "version = 1\n[domain]\ndim = 1\nlower = [0.0]\nupper = [1.0]\nh = 0.1\n";
    let failing = dir.path().join("fail.toml");
    fs::write(
        &failing,
        format!("{base}[supremands.f]\nprofile = \"xi^2\"\n[fields.u]\naffine = [1.0]\n[[operations]]\nkind = \"supremal\"\nsupremand = \"f\"\nfield = \"u\"\nexpect = 0.0\n"),
    )
    .unwrap();
    assert_eq!(
        supremal(&["run", failing.to_str().unwrap()]).status.code(),
        Some(1)
    );

    let broken = dir.path().join("broken.toml");
    fs::write(&broken, format!("{base}h = 0.2\n")).unwrap();
    let o = supremal(&["run", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 7"));

    let versioned = dir.path().join("v2.toml");
    fs::write(&versioned, base.replace("version = 1", "version = 2")).unwrap();
    assert_eq!(
        supremal(&["run", versioned.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        supremal(&["run", "no-such-scenario"]).status.code(),
        Some(2)
    );
}

#[test]
fn distance_verb_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let o = supremal(&[
        "distance",
        "--profile",
        "|xi|",
        "--lower",
        "0",
        "--upper",
        "1",
        "--h",
        "0.25",
        "--lambda",
        "2",
        "--source",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = fs::read_to_string(out.join("distance.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,lambda,d,method"));
    // interior nodes 0.25, 0.5, 0.75; the source snaps to 0.25
    assert!(csv.contains("0.75,0.25,2,1,fast"));
    assert!(csv.contains("0.75,0.25,2,1,oracle"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn relax_and_envelope_verbs() {
    let o = supremal(&[
        "relax",
        "--catalog",
        "double-well",
        "--field",
        "1.5 * x",
        "--witness",
        "1",
        "--h",
        "0.05",
        "--tol",
        "1e-4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("Γ(F)(u) =")).unwrap();
    let value: f64 = line
        .split('=')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 0.25).abs() <= 2e-4, "{line}");

    let o = supremal(&[
        "envelope",
        "--catalog",
        "double-well",
        "--window",
        "3,0.01",
        "--expect",
        "max(|xi| - 1, 0)^2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS closed form"));
}

#[test]
fn bad_arguments_are_config_errors() {
    let o = supremal(&[
        "distance",
        "--profile",
        "|xi",
        "--lambda",
        "1",
        "--source",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expression"));
}

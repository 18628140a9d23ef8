use std::fs;

use gradlie::catalog::{closed_form_derivation, ClosedForm, Fixture, Param, Reading};
use gradlie::derivations::ExtensionSpec;
use gradlie_cli::file::{AlgebraFile, DerivationsFile};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = gradlie_cli::run(
        std::iter::once("gradlie").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn catalog_lists_every_fixture() {
    let (code, out, _) = run(&["catalog", "list"]);
    assert_eq!(code, 0);
    for f in Fixture::ALL {
        assert!(out.contains(f.name()), "{f}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "jacobi", "--name", "n2", "--truncate", "24"]).0, 0);
    let (code, out, _) = run(&["signature", "--name", "witt_nonneg", "--truncate", "12"]);
    assert_eq!(code, 1);
    assert!(out.contains("not pro-nilpotent"), "{out}");
    assert_eq!(run(&["signature", "--name", "nope", "--truncate", "12"]).0, 2);
    assert_eq!(run(&["derivations", "--name", "n1", "--truncate", "5", "--margin", "2"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn completeness_verdicts() {
    assert_eq!(run(&["complete", "--name", "Rn1", "--truncate", "15", "--margin", "3"]).0, 0);
    assert_eq!(run(&["complete", "--name", "n1", "--truncate", "15", "--margin", "3"]).0, 1);
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"name\": \"x\",\n  \"truncation\": oops\n}\n").unwrap();
    let (code, _, err) = run(&["algebra", "show", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.json:3:"), "{err}");
}

#[test]
fn exported_files_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text, _) = run(&["algebra", "export", "--name", "Rn2", "--truncate", "12"]);
    assert_eq!(code, 0);
    let path = dir.path().join("rn2.json");
    fs::write(&path, &text).unwrap();
    let parsed = AlgebraFile::parse("rn2.json", &text).unwrap();
    assert_eq!(parsed.to_algebra("rn2.json").unwrap(), Fixture::Rn2.build(12).unwrap());
    let (code, _, _) = run(&["check", "jacobi", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for n in 0..2 {
        let path = dir.path().join(format!("h1-{n}.json"));
        let (code, _, _) = run(&[
            "h1", "--name", "Rn1", "--truncate", "12", "--margin", "3", "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        reports.push(fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert!(v.is_object());
}

#[test]
fn math_failures_still_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sig.json");
    let (code, _, _) = run(&[
        "signature", "--name", "witt_nonneg", "--truncate", "10", "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn extend_with_a_derivations_file() {
    let base = Fixture::N1.build(12).unwrap();
    let a = closed_form_derivation(ClosedForm::N1, Param::Alpha(1), Reading::Corrected, &base).unwrap();
    let b = closed_form_derivation(ClosedForm::N1, Param::Beta(2), Reading::Corrected, &base).unwrap();
    let file = DerivationsFile::from_spec(&ExtensionSpec::new(vec![("x".into(), a), ("y".into(), b)]));
    let dir = tempfile::tempdir().unwrap();
    let ders = dir.path().join("ders.json");
    fs::write(&ders, file.to_json()).unwrap();
    let report = dir.path().join("ext.json");
    let (code, _, err) = run(&[
        "extend", "--base", "n1", "--truncate", "12", "--derivations", ders.to_str().unwrap(),
        "--json", report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    let ext = AlgebraFile::parse("ext", &v["file"].to_string()).unwrap().to_algebra("ext").unwrap();
    assert_eq!(ext.dim(), 14);
    assert!(ext.jacobi_check().is_empty());

    let mut bad = file.clone();
    bad.generators[0].images = vec![(1, vec![(1, "1".into())])];
    fs::write(&ders, bad.to_json()).unwrap();
    let (code, _, _) = run(&[
        "extend", "--base", "n1", "--truncate", "12", "--derivations", ders.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
}

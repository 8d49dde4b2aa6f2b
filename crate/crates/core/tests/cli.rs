use std::process::Command;

use erfkit::cli::{
    approximant_from_document, cmd_eval, cmd_gen, cmd_sweep, ApproximantDescriptor, ApproximantDocument, Family,
    TransitionSpec,
};
use erfkit::PrecisionContext;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_erfkit"))
}

fn roundtrip(desc: ApproximantDescriptor) {
    let mut buf = Vec::new();
    let doc = cmd_gen(&desc, &mut buf).unwrap();
    let parsed: ApproximantDocument = serde_json::from_slice(&buf).unwrap();
    assert_eq!(parsed, doc);
    let built = desc.build(8.0).unwrap();
    let loaded = approximant_from_document(&parsed).unwrap();
    let ctx = desc.ctx().unwrap();
    for x in ["0.01", "0.5", "1.25", "2.9", "-3.3"] {
        let x = ctx.parse(x).unwrap();
        let a = built.eval(&x, &ctx).unwrap();
        let b = loaded.eval(&x, &ctx).unwrap();
        assert_eq!(a, b, "{} at {x}", doc.label);
    }
}

#[test]
fn documents_roundtrip_bit_for_bit() {
    roundtrip(ApproximantDescriptor::new(Family::Spline, 6));
    roundtrip(ApproximantDescriptor::new(Family::Sqrt, 4));
    roundtrip(ApproximantDescriptor::new(Family::GaussH, 5));
    let mut sub = ApproximantDescriptor::new(Family::Subinterval, 2);
    sub.subintervals = Some(4);
    sub.transition = Some(TransitionSpec::At("2.5".into()));
    roundtrip(sub);
    let mut g = ApproximantDescriptor::new(Family::Grid, 3);
    g.resolution = Some("1/2".into());
    roundtrip(g);
}

#[test]
fn eval_matches_library() {
    let desc = ApproximantDescriptor::new(Family::Spline, 2);
    let mut out = Vec::new();
    let v = cmd_eval(&desc, "1", &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let ctx = PrecisionContext::default();
    let printed = ctx.parse(text.trim()).unwrap();
    let rel = (v.clone() - printed).abs() / v;
    assert!(rel < 1e-32);
}

#[test]
fn sweep_csv_has_labelled_columns() {
    let desc = ApproximantDescriptor::new(Family::Spline, 4);
    let mut out = Vec::new();
    let res = cmd_sweep(&desc, "0:2", 50, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    let head = lines.next().unwrap();
    assert!(head.trim_start_matches('"').starts_with("x[grid="), "{head}");
    assert!(head.contains("erf[digits=34]"));
    assert_eq!(lines.count(), 50);
    assert_eq!(res.rows, 50);
}

#[test]
fn binary_eval_and_usage_exit_codes() {
    let ok = bin().args(["eval", "--family", "sqrt", "--order", "3", "--x", "0.5"]).output().unwrap();
    assert!(ok.status.success());
    let v: f64 = String::from_utf8_lossy(&ok.stdout).trim().parse().unwrap();
    assert!((v - 0.5204998778130465).abs() < 1e-4);

    let even_taylor = bin().args(["gen", "--family", "taylor", "--order", "2"]).output().unwrap();
    assert_eq!(even_taylor.status.code(), Some(2));

    let bad_family = bin().args(["gen", "--family", "nope"]).output().unwrap();
    assert_eq!(bad_family.status.code(), Some(2));

    let bad_table = bin().args(["table", "11"]).output().unwrap();
    assert_eq!(bad_table.status.code(), Some(2));
}

#[test]
fn binary_gen_is_parseable() {
    let out = bin().args(["gen", "--family", "spline", "--order", "3", "--transition", "auto"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: ApproximantDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.kind, "poly_exp");
    assert!(doc.transition.is_some());
}

#[test]
fn binary_table_writes_csv() {
    let dir = std::env::temp_dir().join(format!("erfkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t4.csv");
    let out = bin().args(["table", "4", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.lines().count() > 10);
    std::fs::remove_dir_all(&dir).ok();
}

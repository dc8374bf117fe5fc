mod common;

use morita_core::instances;
use morita_core::numerics::Tolerance;
use morita_core::runner::{self, Suite, TierMode};
use morita_core::schema::{self, Instance};
use morita_core::Error;
use proptest::prelude::*;
use serde_json::Value;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn pointed_text() -> String {
    std::fs::read_to_string(common::corpus_dir().join("pointed_context.json")).unwrap()
}

fn verdicts(insts: &[Instance]) -> Vec<(String, String, bool, usize)> {
    let r = runner::run(insts, &Suite::ALL, TierMode::Auto, tol(), 1).unwrap();
    r.reports.iter().map(|c| (c.suite.clone(), c.target.clone(), c.pass, c.checked())).collect()
}

#[test]
fn corpus_files_are_regenerated_byte_for_byte() {
    for (rel, inst) in instances::corpus().unwrap() {
        let on_disk = std::fs::read_to_string(common::corpus_dir().join(&rel)).unwrap();
        assert_eq!(on_disk, schema::to_json(&inst.to_file()), "{rel}");
    }
}

#[test]
fn load_and_write_round_trip() {
    for inst in common::bundled() {
        let file = inst.to_file();
        let text = schema::to_json(&file);
        let (again, warnings) = schema::parse(&text, true).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(again, file);
        let rebuilt = schema::build(&again).unwrap();
        assert_eq!(schema::to_json(&rebuilt.to_file()), text);
    }
}

#[test]
fn strict_rejects_unknown_fields_and_lenient_warns() {
    let mut v: Value = serde_json::from_str(&pointed_text()).unwrap();
    v["comment"] = Value::String("extra".into());
    v["fusion"][0]["color"] = Value::from(3);
    let text = v.to_string();
    assert!(matches!(schema::parse(&text, true), Err(Error::Schema(_))));
    let (file, warnings) = schema::parse(&text, false).unwrap();
    assert_eq!(warnings.len(), 2, "{warnings:?}");
    assert!(warnings.iter().any(|w| w.contains("comment")));
    assert!(warnings.iter().any(|w| w.contains("color")));
    assert!(schema::build(&file).is_ok());
}

#[test]
fn bad_version_and_missing_fusion_are_rejected() {
    let mut v: Value = serde_json::from_str(&pointed_text()).unwrap();
    v["schema_version"] = Value::String("0.1".into());
    assert!(matches!(schema::parse(&v.to_string(), true), Err(Error::Schema(m)) if m.contains("schema_version")));
    let mut v: Value = serde_json::from_str(&pointed_text()).unwrap();
    v["fusion"] = Value::Array(Vec::new());
    assert!(matches!(schema::parse(&v.to_string(), true), Err(Error::Schema(_))));
    assert!(schema::parse("{not json", true).is_err());
}

#[test]
fn gauge_mismatch_is_a_warning() {
    let mut v: Value = serde_json::from_str(&pointed_text()).unwrap();
    v["gauge"] = Value::String("other".into());
    let (_, warnings) = schema::parse(&v.to_string(), true).unwrap();
    assert_eq!(warnings.len(), 1);
}

#[test]
fn unresolved_references_are_errors() {
    let (file, _) = schema::parse(&pointed_text(), true).unwrap();
    let mut bad = file.clone();
    bad.modules[0].base = "nowhere".into();
    assert!(matches!(schema::build(&bad), Err(Error::Schema(m)) if m.contains("nowhere")));
    let mut bad = file.clone();
    bad.contexts[0].module = "nowhere".into();
    assert!(schema::build(&bad).is_err());
    let mut bad = file.clone();
    bad.fusion[0].unit = "zzz".into();
    assert!(matches!(schema::build(&bad), Err(Error::Schema(m)) if m.contains("zzz")));
    let mut bad = file;
    bad.pivotal[1].base = Some("nowhere".into());
    assert!(schema::build(&bad).is_err());
}

#[test]
fn runner_is_deterministic_across_jobs() {
    let insts = common::bundled();
    let one = runner::run(&insts, &Suite::ALL, TierMode::Auto, tol(), 1).unwrap();
    let four = runner::run(&insts, &Suite::ALL, TierMode::Auto, tol(), 4).unwrap();
    assert!(one.pass);
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&four).unwrap());
}

#[test]
fn dimension_tier_skips_structure_suites() {
    let insts = common::bundled();
    let r = runner::run(&insts, &Suite::ALL, TierMode::Dimension, tol(), 2).unwrap();
    assert!(r.pass);
    assert!(r.reports.iter().all(|c| !Suite::parse(&c.suite).unwrap().needs_structure()));
    assert!(!r.skipped.is_empty());
    assert!(TierMode::parse("bogus").is_err());
    assert!(Suite::parse("bogus").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn relabeling_preserves_verdicts(picks in prop::collection::vec(any::<prop::sample::Index>(), 64), which in 0usize..6) {
        let inst = common::bundled().swap_remove(which);
        let mut draws = picks.into_iter().cycle();
        let mut perm = |n: usize| {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, draws.next().unwrap().index(i + 1));
            }
            p
        };
        let relabeled = schema::build(&schema::reorder(&inst.to_file(), &mut perm)).unwrap();
        prop_assert_eq!(verdicts(&[inst]), verdicts(&[relabeled]));
    }
}

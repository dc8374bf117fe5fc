mod common;

use std::collections::BTreeMap;

use morita_core::graded::{self, GradingData, Group};
use morita_core::instances;
use morita_core::modulecat;
use morita_core::numerics::Tolerance;
use morita_core::report::CheckReport;
use morita_core::schema::Instance;
use morita_core::skeleton::Skeleton;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn graded_targets() -> Vec<(Instance, GradingData)> {
    common::bundled()
        .into_iter()
        .flat_map(|i| i.gradings.clone().into_iter().map(move |g| (i.clone(), g)))
        .collect()
}

fn single_degree(sk: &Skeleton, target: &str) -> GradingData {
    GradingData {
        name: "trivial".into(),
        target: target.into(),
        group: Group::cyclic(1),
        deg: sk.labels.iter().map(|l| (l.clone(), 0)).collect(),
    }
}

#[test]
fn bundled_gradings_validate() {
    let all = graded_targets();
    assert!(all.len() >= 6);
    for (inst, g) in all {
        let sk = inst.skeleton_named(&g.target).unwrap();
        let r = graded::validate_grading(sk, &g.target, &g);
        assert!(r.pass, "{}", r.summary_line());
    }
}

#[test]
fn fibonacci_with_odd_tau_is_rejected() {
    let f = instances::make_fibonacci();
    let g = instances::fibonacci_bad_grading();
    let r = graded::validate_grading(&f.sk, "fib", &g);
    assert!(!r.pass);
    let failed = r.failed_families();
    assert_eq!(failed.len(), 1, "{failed:?}");
    assert!(failed[0].starts_with("multiplicativity"));
    let fam = r.family(failed[0]).unwrap();
    assert!(fam.failures.iter().any(|f| f.index == ["tau", "tau", "tau"]));
}

#[test]
fn trivial_group_grades_everything() {
    for inst in common::bundled() {
        for ctx in &inst.contexts {
            let g = single_degree(&ctx.sk, &ctx.name);
            assert!(graded::validate_grading(&ctx.sk, &ctx.name, &g).pass);
            assert!(graded::graded_dual_degree_check(&ctx.sk, &ctx.name, &g).pass);
        }
    }
}

#[test]
fn grading_must_cover_and_be_faithful() {
    let f = instances::make_vec_z2(false);
    let mut g = GradingData {
        name: "z3_on_z2".into(),
        target: f.name.clone(),
        group: Group::cyclic(3),
        deg: [("1".to_string(), 0), ("g".to_string(), 1)].into_iter().collect(),
    };
    let r = graded::validate_grading(&f.sk, &f.name, &g);
    assert!(r.failed_families().contains(&"faithfulness"));
    g.group = Group::cyclic(2);
    g.deg.remove("g");
    assert!(graded::validate_grading(&f.sk, &f.name, &g).failed_families().contains(&"coverage"));
}

#[test]
fn dual_degree_is_inverse() {
    for (inst, g) in graded_targets() {
        let sk = inst.skeleton_named(&g.target).unwrap();
        let r = graded::graded_dual_degree_check(sk, &g.target, &g);
        assert!(r.pass, "{}", r.summary_line());
        for x in 0..sk.len() {
            let d = sk.dual(x).unwrap();
            assert_eq!(g.degree(sk, d), Some(g.group.inv(g.degree(sk, x).unwrap())));
        }
    }
    let f = instances::make_vec_z3();
    let g = f.sk.label("g").unwrap();
    let gg = f.sk.label("g^2").unwrap();
    assert_eq!(f.sk.dual(g).unwrap(), gg);
    let z3 = Group::cyclic(3);
    assert_eq!(z3.inv(1), 2);
}

#[test]
fn group_tables_are_validated() {
    let bad = Group::new(vec!["e".into(), "a".into()], vec![vec![0, 1], vec![1, 1]]);
    assert!(bad.is_err());
    let z4 = Group::cyclic(4);
    for x in 0..4 {
        assert_eq!(z4.mul(x, z4.inv(x)), z4.identity);
    }
}

#[test]
fn serre_preserves_degree() {
    let inst = common::bundled().into_iter().find(|i| i.name == "vec_z2_trivial").unwrap();
    let ctx = &inst.contexts[0];
    let g = inst.gradings.iter().find(|g| g.target == ctx.name).unwrap();
    let mut serre = modulecat::serre_data(&ctx.m, tol()).unwrap();
    assert!(graded::graded_serre_check(&ctx.sk, &ctx.name, &serre, g).pass);
    let keys: Vec<usize> = serre.object_map.keys().copied().collect();
    let (x, y) = (keys[0], keys[1]);
    assert_ne!(g.degree(&ctx.sk, x), g.degree(&ctx.sk, y));
    serre.object_map.insert(x, y);
    serre.object_map.insert(y, x);
    let r = graded::graded_serre_check(&ctx.sk, &ctx.name, &serre, g);
    assert_eq!(r.failed_families(), vec!["serre-degree"]);
}

#[test]
fn graded_pivotals_restrict_to_trivial_component() {
    for (inst, g) in graded_targets() {
        let Some(f) = inst.fusion_named(&g.target) else { continue };
        let r = graded::graded_pivotal_check(f, &g, tol()).unwrap();
        assert!(r.pass, "{}", r.summary_line());
        let fe = graded::trivial_component(f, &g).unwrap();
        assert_eq!(fe.len(), 1, "{}", f.name);
    }
}

fn merged(parts: Vec<(usize, CheckReport)>) -> (usize, bool, f64) {
    let checked = parts.iter().map(|(_, r)| r.checked()).sum();
    let pass = parts.iter().all(|(_, r)| r.pass);
    let worst = parts.iter().map(|(_, r)| r.max_residual()).fold(0.0, f64::max);
    (checked, pass, worst)
}

#[test]
fn per_degree_pentagons_recombine() {
    for (inst, g) in graded_targets() {
        let sk = inst.skeleton_named(&g.target).unwrap();
        let graded_parts = graded::per_degree_pentagon(sk, &g.target, &g, tol());
        assert_eq!(graded_parts.len(), graded::homogeneous_components(sk, &g).len());
        let whole = graded::per_degree_pentagon(sk, &g.target, &single_degree(sk, &g.target), tol());
        assert_eq!(whole.len(), 1);
        let (c1, p1, r1) = merged(graded_parts);
        let (c2, p2, r2) = merged(whole);
        assert_eq!((c1, p1), (c2, p2), "{}", g.name);
        assert!(p1, "{}", g.name);
        assert!((r1 - r2).abs() < 1e-12);
    }
}

#[test]
fn homogeneous_components_partition_labels() {
    for (inst, g) in graded_targets() {
        let sk = inst.skeleton_named(&g.target).unwrap();
        let comps: BTreeMap<usize, Vec<usize>> = graded::homogeneous_components(sk, &g);
        let mut all: Vec<usize> = comps.values().flatten().copied().collect();
        all.sort();
        assert_eq!(all, (0..sk.len()).collect::<Vec<_>>());
    }
}

mod common;

use std::collections::BTreeSet;

use morita_core::fusion::{self, PivotalAssignment};
use morita_core::instances;
use morita_core::modulecat::{self, ModuleData, RightAction};
use morita_core::morita::{self, CellKind, ContextPivotal, MoritaContextData, OneMorphism, Side};
use morita_core::numerics::{real, Tolerance, ONE};
use morita_core::report::Tier;
use morita_core::Error;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn contexts() -> Vec<MoritaContextData> {
    common::bundled().into_iter().flat_map(|i| i.contexts).collect()
}

fn pointed() -> MoritaContextData {
    instances::make_pointed_context().unwrap()
}

fn matched(ctx: &MoritaContextData) -> ContextPivotal {
    let p = fusion::solve_pivotal(&ctx.a, tol()).unwrap().into_iter().find(|p| p.values.iter().all(|v| *v == ONE)).unwrap();
    let pt = modulecat::solve_module_pivotal(&ctx.m, &p, tol()).unwrap().pinned.remove(0);
    let t = morita::pivotal_transport(ctx, &p, &pt, tol()).unwrap();
    assert!(t.report.pass, "{}", t.report.summary_line());
    ContextPivotal { p, pt, q: t.q, ph: t.ph }
}

#[test]
fn coherence_covers_thirty_two_families() {
    for ctx in contexts() {
        let r = morita::verify_context_coherence(&ctx, tol());
        assert!(r.pass, "{}", r.summary_line());
        assert_eq!(r.tier, Tier::Structure);
        assert_eq!(r.families.len(), 32, "{}", ctx.name);
        assert!(r.families.iter().all(|f| !f.family.starts_with("unknown")));
    }
}

#[test]
fn coherence_family_names() {
    assert_eq!(morita::coherence_family(&[0, 0, 0, 0, 0]), "pentagon[00000]");
    assert_eq!(morita::coherence_family(&[0, 1, 0, 1, 0]), "alpha-pentagon[01010]");
    assert_eq!(morita::coherence_family(&[1, 0, 1, 0, 1]), "beta-pentagon[10101]");
}

#[test]
fn perturbed_alpha_fails_locally() {
    let ctx = pointed();
    let (key, value) = ctx
        .coherence_components(CellKind::M)
        .into_iter()
        .find(|(k, _)| k.iter().all(|&x| !ctx.sk.is_unit(x)))
        .unwrap();
    let bad = ctx.with_symbol(key, value + real(0.1)).unwrap();
    let r = morita::verify_context_coherence(&bad, tol());
    assert!(!r.pass);
    let failed = r.failed_families();
    assert!(failed.contains(&"alpha-pentagon[01010]"), "{failed:?}");
    assert!(!failed.contains(&"pentagon[00000]") && !failed.contains(&"pentagon[11111]"));
}

#[test]
fn canonical_context_is_dimension_tier() {
    let m = instances::make_regular_module(&instances::make_vec_z2(false)).unwrap();
    let ctx = morita::build_canonical_context(&m).unwrap();
    assert_eq!(ctx.tier, Tier::Dimension);
    assert!(!ctx.warnings.is_empty());
    assert_eq!(ctx.labels_of(CellKind::N).len(), 2);
    let coh = morita::verify_context_coherence(&ctx, tol());
    assert!(coh.pass, "{}", coh.summary_line());
    assert_eq!(coh.tier, Tier::Dimension);
    assert!(morita::duality_dim_suite(&ctx).pass);
    assert!(morita::strong_context_suite(&ctx, tol()).pass);
    assert!(morita::double_dual_suite(&ctx, tol()).pass);
    assert_eq!(morita::snake_suite(&ctx, tol()).failed_families(), vec!["structure"]);
}

#[test]
fn canonical_context_rejects_noncommuting_actions() {
    let z2 = instances::make_vec_z2(false);
    let labels: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let left = [(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 2, 2, 1)];
    let right = vec![(0, 0, 0, 1), (1, 0, 1, 1), (2, 0, 2, 1), (0, 1, 0, 1), (1, 1, 2, 1), (2, 1, 1, 1)];
    let b = fusion::FusionData::new("z2_right", vec!["e'".into(), "g'".into()], 0, &z2.fusion_entries(), None).unwrap();
    let m = ModuleData::new("twisted", z2, labels, &left, Some(RightAction { base: b, action: right }), None).unwrap();
    assert!(matches!(morita::build_canonical_context(&m), Err(Error::ActionsDoNotCommute(_))));
}

#[test]
fn snakes_hold_on_every_cell() {
    for ctx in contexts() {
        let r = morita::snake_suite(&ctx, tol());
        assert!(r.pass, "{}", r.summary_line());
        assert!(r.max_residual() < 1e-9);
    }
}

#[test]
fn duality_suite_has_twenty_four_families() {
    for ctx in contexts() {
        let r = morita::duality_dim_suite(&ctx);
        assert!(r.pass, "{}", r.summary_line());
        assert_eq!(r.families.len(), 24);
    }
}

#[test]
fn duals_of_pointed_one_morphisms() {
    let ctx = pointed();
    let m = ctx.sk.label("m").unwrap();
    let ms = ctx.sk.label("m*").unwrap();
    for side in [Side::Right, Side::Left] {
        let d = morita::dual_1morphism(&ctx, &OneMorphism::simple(&ctx, m), side).unwrap();
        assert_eq!(d.dual, OneMorphism { cell: CellKind::N, summands: vec![(ms, 1)] });
        assert!(d.snake_residual < 1e-12);
        assert!(d.data.is_some());
    }
    let sum = OneMorphism { cell: CellKind::A, summands: vec![(0, 1), (1, 2)] };
    let d = morita::dual_1morphism(&ctx, &sum, Side::Right).unwrap();
    assert_eq!(d.dual.summands, vec![(0, 1), (1, 2)]);
    let wrong = OneMorphism { cell: CellKind::B, summands: vec![(m, 1)] };
    assert!(morita::dual_1morphism(&ctx, &wrong, Side::Right).is_err());
}

proptest! {
    #[test]
    fn duality_is_an_involution_that_flips_cells(which in 0usize..6, pick in 0usize..64) {
        let ctx = &contexts()[which];
        let x = pick % ctx.sk.len();
        let one = OneMorphism::simple(ctx, x);
        let d = morita::dual_1morphism(ctx, &one, Side::Right).unwrap();
        let dd = morita::dual_1morphism(ctx, &d.dual, Side::Left).unwrap();
        prop_assert_eq!(dd.dual, one.clone());
        let (s, t) = one.cell.cell();
        prop_assert_eq!(d.dual.cell.cell(), (t, s));
    }
}

#[test]
fn double_duals_match_serre() {
    for ctx in contexts() {
        let r = morita::double_dual_suite(&ctx, tol());
        assert!(r.pass, "{}", r.summary_line());
        for fam in ["double-dual=serre[A|M]", "double-dual=serre[B|N]", "double-dual=serre[M|B]", "double-dual=serre[N|A]", "twist=serre[M]"] {
            assert!(r.family(fam).is_some(), "{fam}");
        }
    }
}

#[test]
fn strong_contexts() {
    for ctx in contexts() {
        let r = morita::strong_context_suite(&ctx, tol());
        assert!(r.pass, "{}", r.summary_line());
    }
}

#[test]
fn radford_suite_and_negated_component() {
    for ctx in contexts() {
        let r = morita::context_radford(&ctx).unwrap();
        let rep = morita::radford_pseudo_suite(&ctx, &r, tol());
        assert!(rep.pass, "{}", rep.summary_line());
        if ctx.sk.len() > 4 {
            let mut bad = r.clone();
            let m = ctx.labels_of(CellKind::M)[0];
            bad[m] = -bad[m];
            assert!(!morita::radford_pseudo_suite(&ctx, &bad, tol()).pass, "{}", ctx.name);
        }
    }
}

#[test]
fn pivotal_morita_matched_and_mismatched() {
    let ctx = pointed();
    let data = matched(&ctx);
    let r = morita::pivotal_morita_suite(&ctx, &data, tol());
    assert!(r.pass, "{}", r.summary_line());
    assert_eq!(r.families.len(), 8);
    assert_eq!(r.families[0].family, "(i)[AA]");
    assert_eq!(r.families[7].family, "(viii)[NM]");

    let mut bad = data.clone();
    bad.q = PivotalAssignment::new(bad.q.labels.clone(), vec![ONE, -bad.q.values[1]]);
    let failed: BTreeSet<String> = morita::pivotal_morita_suite(&ctx, &bad, tol()).failed_families().into_iter().map(String::from).collect();
    assert!(!failed.is_empty());
    let touching_b: BTreeSet<String> = ["(ii)[BB]", "(iv)[MB]", "(v)[BN]", "(viii)[NM]"].iter().map(|s| s.to_string()).collect();
    assert!(failed.is_subset(&touching_b), "{failed:?}");

    let mut bad = data.clone();
    bad.ph = PivotalAssignment::new(bad.ph.labels.clone(), vec![-bad.ph.values[0]]);
    let failed = morita::pivotal_morita_suite(&ctx, &bad, tol());
    assert!(failed.failed_families().iter().all(|f| f.contains('N')));
}

#[test]
fn transport_on_regular_contexts() {
    for ctx in contexts() {
        for p in fusion::solve_pivotal(&ctx.a, tol()).unwrap() {
            for pt in modulecat::solve_module_pivotal(&ctx.m, &p, tol()).unwrap().raw {
                let t = morita::pivotal_transport(&ctx, &p, &pt, tol()).unwrap();
                assert!(t.report.pass, "{}", t.report.summary_line());
                let data = ContextPivotal { p: p.clone(), pt, q: t.q, ph: t.ph };
                assert!(morita::pivotal_morita_suite(&ctx, &data, tol()).pass);
            }
        }
    }
}

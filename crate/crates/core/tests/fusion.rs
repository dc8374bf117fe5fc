mod common;

use morita_core::fusion::{self, FusionData};
use morita_core::graded::Group;
use morita_core::instances::{self, golden_ratio};
use morita_core::numerics::{approx_eq, real, Scalar, Tolerance, ONE};
use morita_core::Error;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn bases() -> Vec<FusionData> {
    vec![
        instances::make_vec(),
        instances::make_vec_z2(false),
        instances::make_vec_z2(true),
        instances::make_vec_z3(),
        instances::make_fibonacci(),
    ]
}

fn perturbed(f: &FusionData, key: [usize; 6], by: f64) -> FusionData {
    let mut sym = f.sk.symbols().cloned().unwrap();
    *sym.get_mut(&key).unwrap() += real(by);
    FusionData::new(&format!("{}_bumped", f.name), f.labels().to_vec(), f.unit(), &f.fusion_entries(), Some(sym)).unwrap()
}

#[test]
fn bundled_categories_validate() {
    for f in bases() {
        let r = fusion::validate_fusion(&f);
        assert!(r.pass, "{}", r.summary_line());
    }
}

#[test]
fn pentagon_agrees_with_termwise_oracle() {
    for f in bases() {
        let r = fusion::verify_pentagon(&f, tol());
        assert!(r.pass, "{}", r.summary_line());
        assert!(r.max_residual() < 1e-9);
        assert!(common::pentagon_defect(&f.sk) < 1e-9, "{}", f.name);
    }
}

#[test]
fn single_entry_perturbation_breaks_pentagon() {
    let cases = [
        (instances::make_vec_z2(false), [1, 1, 1, 1, 0, 0]),
        (instances::make_vec_z2(true), [1, 1, 1, 1, 0, 0]),
        (instances::make_vec_z3(), [1, 1, 1, 0, 2, 2]),
        (instances::make_fibonacci(), [1, 1, 1, 1, 1, 1]),
    ];
    for (f, key) in cases {
        let bad = perturbed(&f, key, 0.1);
        let r = fusion::verify_pentagon(&bad, tol());
        assert!(!r.pass, "{}", f.name);
        assert!(common::pentagon_defect(&bad.sk) > 1e-3);
        assert!(r.argmax().is_some());
    }
}

#[test]
fn z2_sign_is_a_cocycle_on_all_sixteen_quadruples() {
    let w = instances::z2_sign_cocycle;
    let m = |x: usize, y: usize| (x + y) % 2;
    for g in 0..2 {
        for h in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let lhs = w(h, k, l) * w(g, m(h, k), l) * w(g, h, k);
                    let rhs = w(m(g, h), k, l) * w(g, h, m(k, l));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn pointed_constructor_rejects_non_cocycle() {
    let omega = |g: usize, h: usize, k: usize| if (g, h, k) == (1, 2, 1) { -ONE } else { ONE };
    let err = instances::make_pointed("bad_z3", &Group::cyclic(3), &omega).unwrap_err();
    assert!(matches!(err, Error::NotACocycle(_)));
}

#[test]
fn trivial_z2_has_all_one_table() {
    let f = instances::make_vec_z2(false);
    assert_eq!(f.len(), 2);
    assert!(f.sk.symbols().unwrap().values().all(|v| *v == ONE));
}

#[test]
fn fibonacci_duals_and_dimensions() {
    let f = instances::make_fibonacci();
    let tau = f.sk.label("tau").unwrap();
    assert_eq!(fusion::dual_label(&f, tau).unwrap(), tau);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((golden_ratio() - phi).abs() < 1e-15);
    // Perron-Frobenius eigenvalue of N_tau = [[0,1],[1,1]].
    let pf = (1.0 + (1.0f64 + 4.0).sqrt()) / 2.0;
    assert!((f.fp_dim() - (1.0 + pf * pf)).abs() < 1e-9);
    let p = &fusion::solve_pivotal(&f, tol()).unwrap()[0];
    let dims = fusion::quantum_dimensions(&f, p).unwrap();
    assert!((dims[tau].0.norm() - pf).abs() < 1e-6);
    assert!((dims[tau].1.norm() - pf).abs() < 1e-6);
}

#[test]
fn snakes_hold_in_the_gauge() {
    for f in bases() {
        let (data, r) = fusion::ev_coev_data(&f, tol()).unwrap();
        assert!(r.pass, "{}", r.summary_line());
        assert!(data.iter().all(|d| d.coev == ONE && d.lcoev == ONE));
    }
    let fib = instances::make_fibonacci();
    let (data, _) = fusion::ev_coev_data(&fib, tol()).unwrap();
    assert!(approx_eq(data[1].ev, real(golden_ratio()), tol()));
}

#[test]
fn radford_components_are_trivial_and_monoidal() {
    for f in bases() {
        let dd = fusion::double_dual_structure(&f, tol()).unwrap();
        assert!(dd.report.pass, "{}", dd.report.summary_line());
        for (_, r) in &dd.radford.r_components {
            assert!(approx_eq(*r, ONE, tol()));
        }
    }
}

#[test]
fn pivotal_census_matches_enumeration() {
    let expected = [("vec", 1), ("vec_z2", 2), ("vec_z2_omega", 2), ("vec_z3", 3), ("fib", 1)];
    for (f, (name, count)) in bases().iter().zip(expected) {
        assert_eq!(f.name, name);
        let sols: Vec<Vec<Scalar>> = fusion::solve_pivotal(f, tol()).unwrap().into_iter().map(|p| p.values).collect();
        assert_eq!(sols.len(), count, "{name}");
        assert!(common::same_sets(&sols, &common::brute_force_pivotals(f, tol()), tol()), "{name}");
        for s in &sols {
            let r = fusion::verify_pivotal(f, &morita_core::fusion::PivotalAssignment::new(f.labels().to_vec(), s.clone()), tol());
            assert!(r.pass);
        }
    }
}

#[test]
fn trivial_cocycle_pivotals_are_characters() {
    let f = instances::make_vec_z3();
    let sols = fusion::solve_pivotal(&f, tol()).unwrap();
    let characters: Vec<Vec<Scalar>> = (0..3)
        .map(|j| (0..3).map(|k| morita_core::numerics::root_of_unity(3, (j * k) % 3)).collect())
        .collect();
    let got: Vec<Vec<Scalar>> = sols.into_iter().map(|p| p.values).collect();
    assert!(common::same_sets(&got, &characters, tol()));
}

#[test]
fn sphericality_verdicts_agree() {
    for f in bases() {
        let dd = fusion::double_dual_structure(&f, tol()).unwrap();
        for p in fusion::solve_pivotal(&f, tol()).unwrap() {
            let v = fusion::check_spherical_tensor(&f, &p, &dd.radford, tol()).unwrap();
            assert_eq!(v.radford, v.trace, "{} {}", f.name, p.describe());
            let real_valued = p.values.iter().all(|x| x.im.abs() < 1e-12);
            assert_eq!(v.radford, real_valued, "{} {}", f.name, p.describe());
        }
    }
}

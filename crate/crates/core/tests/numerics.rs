use morita_core::numerics::{
    approx_eq, cmp_vectors, nth_roots, root_of_unity, solve_multiplicative, MultiplicativeSystem, NumericsError, Scalar, Tolerance,
};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Scalar::new(re, im))
}

fn unit_phase() -> impl Strategy<Value = Scalar> {
    (0u32..12).prop_map(|k| root_of_unity(12, k))
}

proptest! {
    #[test]
    fn approx_eq_is_reflexive_and_symmetric(x in scalar(), y in scalar()) {
        let tol = Tolerance::default();
        prop_assert!(approx_eq(x, x, tol));
        prop_assert_eq!(approx_eq(x, y, tol), approx_eq(y, x, tol));
    }

    #[test]
    fn approx_eq_accepts_perturbation_inside_band(x in scalar(), t in -1.0f64..1.0) {
        let tol = Tolerance::new(1e-9, 1e-9);
        let bump = Scalar::new(t * 5e-10, 0.0);
        prop_assert!(approx_eq(x, x + bump, tol));
        prop_assert!(!approx_eq(x, x + Scalar::new(1e-3, 0.0), tol));
    }

    #[test]
    fn nth_roots_are_roots(w in scalar(), k in 1u32..7) {
        prop_assume!(w.norm() > 1e-3);
        let roots = nth_roots(w, k);
        prop_assert_eq!(roots.len(), k as usize);
        for r in &roots {
            prop_assert!((r.powi(k as i32) - w).norm() < 1e-9 * (1.0 + w.norm()));
        }
    }
}

/// A system with every unknown pinned by `x_i^{k_i} = t_i`, plus extra monomial constraints.
#[derive(Debug, Clone)]
struct Case {
    pins: Vec<(u32, Scalar)>,
    extra: Vec<(Vec<i64>, Option<Scalar>)>,
    witness: Vec<usize>,
}

fn case() -> impl Strategy<Value = Case> {
    (1usize..4).prop_flat_map(|n| {
        (
            prop::collection::vec((1u32..4, unit_phase()), n),
            prop::collection::vec((prop::collection::vec(-2i64..3, n), prop::option::of(unit_phase())), 0..3),
            prop::collection::vec(0usize..3, n),
        )
            .prop_map(|(pins, extra, witness)| Case { pins, extra, witness })
    })
}

fn build(s: &Case) -> MultiplicativeSystem {
    let n = s.pins.len();
    let mut sys = MultiplicativeSystem::new((0..n).map(|i| format!("x{i}")).collect());
    for (i, &(k, t)) in s.pins.iter().enumerate() {
        sys.add(&[(i, k as i64)], t, format!("pin{i}"));
    }
    let witness: Vec<Scalar> = s.pins.iter().zip(&s.witness).map(|(&(k, t), &w)| nth_roots(t, k)[w % k as usize]).collect();
    for (j, (exps, target)) in s.extra.iter().enumerate() {
        let exps: Vec<(usize, i64)> = exps.iter().copied().enumerate().collect();
        let t = target.unwrap_or_else(|| exps.iter().fold(Scalar::new(1.0, 0.0), |acc, &(u, e)| acc * witness[u].powi(e as i32)));
        sys.add(&exps, t, format!("extra{j}"));
    }
    sys
}

/// Enumerates every combination of pinned roots and keeps those satisfying the system.
fn brute_force(s: &Case, sys: &MultiplicativeSystem, tol: Tolerance) -> Vec<Vec<Scalar>> {
    let choices: Vec<Vec<Scalar>> = s.pins.iter().map(|&(k, t)| nth_roots(t, k)).collect();
    let mut out = vec![Vec::new()];
    for c in &choices {
        out = out.into_iter().flat_map(|prefix: Vec<Scalar>| c.iter().map(move |v| [prefix.clone(), vec![*v]].concat())).collect();
    }
    let mut sols: Vec<Vec<Scalar>> = out.into_iter().filter(|v| sys.satisfied_by(v, tol)).collect();
    sols.sort_by(|a, b| cmp_vectors(a, b, tol));
    sols
}

proptest! {
    #[test]
    fn solver_matches_enumeration(s in case()) {
        let tol = Tolerance::new(1e-8, 1e-8);
        let sys = build(&s);
        let expected = brute_force(&s, &sys, tol);
        let got = match solve_multiplicative(&sys, &vec![27; s.pins.len()], tol) {
            Ok(v) => v,
            Err(NumericsError::InconsistentSystem(_)) => Vec::new(),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            for (x, y) in g.iter().zip(e) {
                prop_assert!(approx_eq(*x, *y, tol));
            }
        }
    }
}

#[test]
fn square_roots_of_one() {
    let mut sys = MultiplicativeSystem::new(vec!["x".into()]);
    sys.add(&[(0, 2)], Scalar::new(1.0, 0.0), "sq");
    let sols = solve_multiplicative(&sys, &[2], Tolerance::default()).unwrap();
    assert_eq!(sols.len(), 2);
}

#[test]
fn lead_exponent_above_bound_is_unbounded() {
    let mut sys = MultiplicativeSystem::new(vec!["x".into()]);
    sys.add(&[(0, 3)], Scalar::new(1.0, 0.0), "cube");
    assert!(matches!(solve_multiplicative(&sys, &[2], Tolerance::default()), Err(NumericsError::UnboundedBranching(_))));
}

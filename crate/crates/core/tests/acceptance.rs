mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use morita_core::fusion::{self, FusionData, PivotalAssignment};
use morita_core::graded;
use morita_core::instances;
use morita_core::modulecat;
use morita_core::morita::{self, CellKind, ContextPivotal, MoritaContextData, OneMorphism, Side};
use morita_core::numerics::{real, Scalar, Tolerance, ONE};
use morita_core::runner::{self, Suite, TierMode};
use morita_core::schema::{self, Instance};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn contexts(bundled: &[Instance]) -> Vec<MoritaContextData> {
    bundled.iter().flat_map(|i| i.contexts.clone()).collect()
}

fn perturbed(f: &FusionData, key: [usize; 6]) -> FusionData {
    let mut sym = f.sk.symbols().cloned().unwrap();
    *sym.get_mut(&key).unwrap() += real(0.1);
    FusionData::new(&f.name, f.labels().to_vec(), f.unit(), &f.fusion_entries(), Some(sym)).unwrap()
}

fn pentagon() -> Outcome {
    let cases = [
        (instances::make_vec_z2(false), [1, 1, 1, 1, 0, 0]),
        (instances::make_vec_z2(true), [1, 1, 1, 1, 0, 0]),
        (instances::make_vec_z3(), [1, 1, 1, 0, 2, 2]),
        (instances::make_fibonacci(), [1, 1, 1, 1, 1, 1]),
    ];
    for (f, key) in cases {
        let start = Instant::now();
        let r = fusion::verify_pentagon(&f, tol());
        let took = start.elapsed();
        ensure!(r.pass && r.max_residual() < 1e-9, "{}: {}", f.name, r.summary_line());
        ensure!(took < Duration::from_secs(1), "{} took {took:?}", f.name);
        ensure!(common::pentagon_defect(&f.sk) < 1e-9, "{}: oracle disagrees", f.name);
        let bad = fusion::verify_pentagon(&perturbed(&f, key), tol());
        ensure!(!bad.pass, "{}: perturbation not detected", f.name);
    }
    Ok(())
}

fn internal_hom(bundled: &[Instance]) -> Outcome {
    let mut triples = 0;
    for m in bundled.iter().flat_map(|i| &i.modules) {
        for x in m.mlabels() {
            for y in m.mlabels() {
                let hom = modulecat::internal_hom(m, x, y);
                for a in m.base_labels() {
                    let brute: u32 = m.sk.prod(a, x).iter().filter(|&&k| k == y).map(|_| m.sk.n(a, x, y)).sum();
                    ensure!(hom.mults[a] == brute, "{}: {:?}", m.name, m.sk.names(&[a, x, y]));
                    triples += 1;
                }
            }
        }
    }
    ensure!(triples > 0, "no module triples");
    Ok(())
}

fn duality(bundled: &[Instance]) -> Outcome {
    for ctx in contexts(bundled) {
        let r = morita::duality_dim_suite(&ctx);
        ensure!(r.pass && r.families.len() == 24, "{}: {}", ctx.name, r.summary_line());
    }
    let ctx = instances::make_pointed_context().map_err(|e| e.to_string())?;
    let snakes = morita::snake_suite(&ctx, tol());
    ensure!(snakes.pass && snakes.max_residual() < 1e-9, "{}", snakes.summary_line());
    for x in 0..ctx.sk.len() {
        for side in [Side::Right, Side::Left] {
            let d = morita::dual_1morphism(&ctx, &OneMorphism::simple(&ctx, x), side).map_err(|e| e.to_string())?;
            ensure!(d.snake_residual < 1e-9, "snake residual {} at {}", d.snake_residual, ctx.sk.name(x));
        }
    }
    Ok(())
}

fn double_dual(bundled: &[Instance]) -> Outcome {
    for ctx in contexts(bundled) {
        let r = morita::double_dual_suite(&ctx, tol());
        ensure!(r.pass, "{}: {}", ctx.name, r.summary_line());
        ensure!(r.family("double-dual=serre[A|M]").is_some(), "{}: label map family missing", ctx.name);
        ensure!(r.family("twist=serre[M]").is_some(), "{}: structure family missing", ctx.name);
    }
    Ok(())
}

fn census() -> Outcome {
    for (f, count) in [(instances::make_vec_z2(false), 2), (instances::make_vec(), 1), (instances::make_fibonacci(), 1)] {
        let sols: Vec<Vec<Scalar>> = fusion::solve_pivotal(&f, tol()).map_err(|e| e.to_string())?.into_iter().map(|p| p.values).collect();
        ensure!(sols.len() == count, "{}: {} solutions", f.name, sols.len());
        ensure!(common::same_sets(&sols, &common::brute_force_pivotals(&f, tol()), tol()), "{}: oracle disagrees", f.name);
    }
    Ok(())
}

fn sphericality(bundled: &[Instance]) -> Outcome {
    let mut pairs = 0;
    for inst in bundled {
        for f in &inst.fusion {
            let dd = fusion::double_dual_structure(f, tol()).map_err(|e| e.to_string())?;
            for p in fusion::solve_pivotal(f, tol()).map_err(|e| e.to_string())? {
                let v = fusion::check_spherical_tensor(f, &p, &dd.radford, tol()).map_err(|e| e.to_string())?;
                ensure!(v.radford == v.trace, "{} {}: verdicts differ", f.name, p.describe());
                pairs += 1;
            }
        }
    }
    ensure!(pairs > 0, "no pivotal structures");
    Ok(())
}

fn radford(bundled: &[Instance]) -> Outcome {
    let pointed: Vec<MoritaContextData> = contexts(bundled)
        .into_iter()
        .filter(|c| c.name == "pointed_context" || c.a.name == "vec_z2_omega")
        .collect();
    ensure!(pointed.len() == 2, "expected both cocycle classes, found {}", pointed.len());
    for ctx in pointed {
        let r = morita::context_radford(&ctx).map_err(|e| e.to_string())?;
        let rep = morita::radford_pseudo_suite(&ctx, &r, tol());
        ensure!(rep.pass, "{}: {}", ctx.name, rep.summary_line());
        let mut bad = r.clone();
        let m = ctx.labels_of(CellKind::M)[0];
        bad[m] = -bad[m];
        let rep = morita::radford_pseudo_suite(&ctx, &bad, tol());
        ensure!(!rep.pass, "{}: negated component not detected", ctx.name);
    }
    Ok(())
}

fn pivotal_morita() -> Outcome {
    let ctx = instances::make_pointed_context().map_err(|e| e.to_string())?;
    let p = PivotalAssignment::new(ctx.a.labels().to_vec(), vec![ONE, ONE]);
    let pt = modulecat::solve_module_pivotal(&ctx.m, &p, tol()).map_err(|e| e.to_string())?.pinned.remove(0);
    let t = morita::pivotal_transport(&ctx, &p, &pt, tol()).map_err(|e| e.to_string())?;
    let data = ContextPivotal { p, pt, q: t.q, ph: t.ph };
    let r = morita::pivotal_morita_suite(&ctx, &data, tol());
    ensure!(r.pass && r.families.len() == 8, "{}", r.summary_line());
    let mut bad = data.clone();
    bad.q = PivotalAssignment::new(bad.q.labels.clone(), vec![ONE, -bad.q.values[1]]);
    let failed: BTreeSet<String> = morita::pivotal_morita_suite(&ctx, &bad, tol()).failed_families().into_iter().map(String::from).collect();
    let expected: BTreeSet<String> = ["(ii)[BB]", "(iv)[MB]", "(v)[BN]", "(viii)[NM]"].into_iter().map(String::from).collect();
    ensure!(!failed.is_empty() && failed.is_subset(&expected), "mismatch reported as {failed:?}");
    Ok(())
}

fn graded_duals(bundled: &[Instance]) -> Outcome {
    let mut graded_contexts = 0;
    for inst in bundled {
        for g in &inst.gradings {
            if inst.context_named(&g.target).is_none() {
                continue;
            }
            let sk = inst.skeleton_named(&g.target).unwrap();
            let r = graded::graded_dual_degree_check(sk, &g.target, g);
            ensure!(r.pass, "{}: {}", g.name, r.summary_line());
            graded_contexts += 1;
        }
    }
    ensure!(graded_contexts >= 4, "only {graded_contexts} graded contexts");
    let bad = schema::load(&common::corpus_dir().join("invalid/fib_z2_bad_grading.json"), true).map_err(|e| e.to_string())?;
    let run = runner::run(&[bad], &[Suite::Grading], TierMode::Auto, tol(), 1).map_err(|e| e.to_string())?;
    ensure!(!run.pass, "Fibonacci Z/2 grading accepted");
    Ok(())
}

fn full_corpus(bundled: &[Instance]) -> Outcome {
    let start = Instant::now();
    let one = runner::run(bundled, &Suite::ALL, TierMode::Auto, tol(), 1).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure!(one.pass, "corpus run failed");
    ensure!(took < Duration::from_secs(10), "corpus took {took:?}");
    let many = runner::run(bundled, &Suite::ALL, TierMode::Auto, tol(), 4).map_err(|e| e.to_string())?;
    let a = serde_json::to_string(&one).map_err(|e| e.to_string())?;
    let b = serde_json::to_string(&many).map_err(|e| e.to_string())?;
    ensure!(a == b, "reports differ between 1 and 4 jobs");
    Ok(())
}

#[test]
fn acceptance() {
    let bundled = common::bundled();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("pentagon on pointed and Fibonacci data, perturbation detected", Box::new(pentagon)),
        ("internal Hom agrees with the decomposition oracle", Box::new(|| internal_hom(&bundled))),
        ("duality identities at both tiers", Box::new(|| duality(&bundled))),
        ("double duals agree with the Serre functor", Box::new(|| double_dual(&bundled))),
        ("pivotal census matches enumeration", Box::new(census)),
        ("sphericality verdicts agree", Box::new(|| sphericality(&bundled))),
        ("Radford pseudo-naturality on pointed contexts", Box::new(|| radford(&bundled))),
        ("pivotal Morita families, mismatch localized", Box::new(pivotal_morita)),
        ("graded dual degrees, bad grading rejected", Box::new(|| graded_duals(&bundled))),
        ("full corpus in time, identical across jobs", Box::new(|| full_corpus(&bundled))),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("[PASS] criterion {}: {name}", i + 1),
            Err(why) => {
                println!("[FAIL] criterion {}: {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use morita_core::fusion::{self, FusionData};
use morita_core::numerics::{approx_eq, cmp_vectors, root_of_unity, Scalar, Tolerance, ONE, ZERO};
use morita_core::schema::{self, Instance};
use morita_core::skeleton::Skeleton;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn bundled() -> Vec<Instance> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| schema::load(p, true).unwrap()).collect()
}

/// Largest pentagon defect over all admissible labelings, evaluated term by term:
/// `F^{fcd}_e[g,l] F^{abl}_e[f,k] = Σ_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]`.
pub fn pentagon_defect(sk: &Skeleton) -> f64 {
    let n = sk.len();
    let f = |a, b, c, d, e, g| sk.f(a, b, c, d, e, g);
    let mut worst = 0.0f64;
    let ok = |x: usize, y: usize| sk.composable(x, y);
    for a in 0..n {
        for b in (0..n).filter(|&b| ok(a, b)) {
            for c in (0..n).filter(|&c| ok(b, c)) {
                for d in (0..n).filter(|&d| ok(c, d)) {
                    for &ff in sk.prod(a, b) {
                        for &g in sk.prod(ff, c) {
                            for &e in sk.prod(g, d) {
                                for k in 0..n {
                                    for l in 0..n {
                                        let lhs = f(ff, c, d, e, g, l) * f(a, b, l, e, ff, k);
                                        let mut rhs = ZERO;
                                        for h in 0..n {
                                            rhs += f(a, b, c, g, ff, h) * f(a, h, d, e, g, k) * f(b, c, d, k, h, l);
                                        }
                                        worst = worst.max((lhs - rhs).norm());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Every assignment of twelfth roots of unity with `p_1 = 1` satisfying `P_x P_y = δ P_z`.
pub fn brute_force_pivotals(f: &FusionData, tol: Tolerance) -> Vec<Vec<Scalar>> {
    let dd = fusion::double_dual_structure(f, tol).unwrap();
    let n = f.len();
    let roots: Vec<Scalar> = (0..12).map(|k| root_of_unity(12, k)).collect();
    let mut out = Vec::new();
    let total = 12usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let vals: Vec<Scalar> = (0..n)
            .map(|_| {
                let v = roots[c % 12];
                c /= 12;
                v
            })
            .collect();
        if !approx_eq(vals[f.unit()], ONE, tol) {
            continue;
        }
        let good = dd.delta.iter().all(|(&[x, y, z], &d)| approx_eq(vals[x] * vals[y], d * vals[z], tol));
        if good {
            out.push(vals);
        }
    }
    out.sort_by(|a, b| cmp_vectors(a, b, tol));
    out
}

pub fn same_sets(a: &[Vec<Scalar>], b: &[Vec<Scalar>], tol: Tolerance) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| x.iter().zip(y).all(|(u, v)| approx_eq(*u, *v, tol))))
}

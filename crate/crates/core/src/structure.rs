//! Structure-tier quantities shared by every cell layout: zig-zag residuals, the tensor
//! structure of the double dual, traces and canonical Radford components.

use std::collections::BTreeMap;

use crate::calculus::{Calc, Word};
use crate::numerics::{MultiplicativeSystem, Scalar, Tolerance, ONE};
use crate::report::FamilyAcc;
use crate::skeleton::Skeleton;

/// Tensor-structure scalars `δ[x,y,z]` of the double dual: `(v: z → x⊗y)** = δ·v`.
pub type DeltaTable = BTreeMap<[usize; 3], Scalar>;

/// Labels whose duals exist in the skeleton.
pub fn dualizable(sk: &Skeleton) -> Vec<usize> {
    (0..sk.len()).filter(|&x| sk.dual(x).is_ok()).collect()
}

/// Admissible triples `(x, y, z)`, `z ∈ x⊗y`, with all three labels in `within`.
pub fn admissible_triples(sk: &Skeleton, within: &[usize]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for &x in within {
        for &y in within {
            if !sk.composable(x, y) {
                continue;
            }
            for &z in sk.prod(x, y) {
                if within.contains(&z) {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

pub fn delta_table(sk: &Skeleton, within: &[usize]) -> DeltaTable {
    let calc = Calc::new(sk);
    admissible_triples(sk, within)
        .into_iter()
        .map(|t| (t, calc.double_dual_scalar(t[0], t[1], t[2])))
        .collect()
}

/// Records the four zig-zag residuals of every label in `within` under `prefix`.
pub fn snakes_into(sk: &Skeleton, within: &[usize], prefix: &str, accs: &mut BTreeMap<String, FamilyAcc>, tol: Tolerance) {
    let calc = Calc::new(sk);
    for &x in within {
        let w = Word::leaf(x);
        let xs = Word::leaf(sk.star(x));
        let cases = [
            ("right-snake", calc.right_snake(&w).max_diff(&calc.id(&w))),
            ("right-snake-dual", calc.right_snake_dual(&w).max_diff(&calc.id(&xs))),
            ("left-snake", calc.left_snake(&w).max_diff(&calc.id(&w))),
            ("left-snake-dual", calc.left_snake_dual(&w).max_diff(&calc.id(&xs))),
        ];
        for (name, r) in cases {
            let fam = format!("{prefix}{name}");
            accs.entry(fam.clone()).or_insert_with(|| FamilyAcc::new(&fam)).residual(|| vec![sk.name(x).to_string()], r, tol);
        }
    }
}

/// Right and left traces of `id_x` under the pivotal value `p`.
pub fn traces(sk: &Skeleton, x: usize, p: Scalar) -> (Scalar, Scalar) {
    let calc = Calc::new(sk);
    let xs = sk.star(x);
    let (i, j) = sk.cells[x];
    let right = calc.compose(&calc.ev(xs), &calc.coev(x).scale(p));
    let left = calc.compose(&calc.ev(x), &calc.coev(xs).scale(ONE / p));
    (right.coeff(&[sk.unit(i)], &[sk.unit(i)]), left.coeff(&[sk.unit(j)], &[sk.unit(j)]))
}

/// Canonical Radford components: the ratio of left to right trace of `id_x` with no pivotal
/// correction.
pub fn radford_components(sk: &Skeleton, within: &[usize]) -> BTreeMap<usize, Scalar> {
    within
        .iter()
        .map(|&x| {
            let (right, left) = traces(sk, x, ONE);
            (x, left / right)
        })
        .collect()
}

/// Equations `P_x P_y = δ[x,y,z] P_z` over the given triples, unknowns indexed by `slot`.
pub fn pivotal_equations(
    sys: &mut MultiplicativeSystem,
    sk: &Skeleton,
    delta: &DeltaTable,
    slot: &dyn Fn(usize) -> usize,
) {
    for (&[x, y, z], &d) in delta {
        sys.add(&[(slot(x), 1), (slot(y), 1), (slot(z), -1)], d, format!("{}⊗{}→{}", sk.name(x), sk.name(y), sk.name(z)));
    }
}

/// Residual family `P_x P_y = δ P_z`.
pub fn monoidality_into(
    acc: &mut FamilyAcc,
    sk: &Skeleton,
    delta: &DeltaTable,
    power: i32,
    values: &dyn Fn(usize) -> Scalar,
    tol: Tolerance,
) {
    for (&[x, y, z], &d) in delta {
        acc.compare(|| sk.names(&[x, y, z]), values(x) * values(y), d.powi(power) * values(z), tol);
    }
}

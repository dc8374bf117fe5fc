//! Skeletal fusion categories: validation, pentagon, duals, dimensions, double-dual
//! structure, pivotal solving and sphericality.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{solve_multiplicative, MultiplicativeSystem, NumericsError, Scalar, Tolerance, ONE};
use crate::report::{CheckReport, FamilyAcc, Tier};
use crate::skeleton::{FKey, Skeleton, SkeletonError};
use crate::structure::{self, DeltaTable};

/// One skeletal tensor category: a single-object [`Skeleton`].
#[derive(Debug, Clone)]
pub struct FusionData {
    pub name: String,
    pub sk: Skeleton,
}

impl FusionData {
    pub fn new(
        name: &str,
        labels: Vec<String>,
        unit: usize,
        fusion: &[(usize, usize, usize, u32)],
        symbols: Option<BTreeMap<FKey, Scalar>>,
    ) -> Result<Self> {
        if unit >= labels.len() {
            return Err(Error::Schema(format!("unit index {unit} out of range")));
        }
        let cells = vec![(0, 0); labels.len()];
        let sk = Skeleton::new(labels, cells, vec![Some(unit)], fusion, symbols)?;
        Ok(FusionData { name: name.to_string(), sk })
    }

    pub fn unit(&self) -> usize {
        self.sk.unit(0)
    }

    pub fn len(&self) -> usize {
        self.sk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sk.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.sk.labels
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.sk.n(a, b, c)
    }

    /// Nonzero fusion entries `(a, b, c, N_ab^c)` in lexicographic order.
    pub fn fusion_entries(&self) -> Vec<(usize, usize, usize, u32)> {
        fusion_entries(&self.sk, &(0..self.len()).collect::<Vec<_>>())
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// Frobenius-Perron dimension of the whole category.
    pub fn fp_dim(&self) -> f64 {
        fp_dims(&self.sk).iter().map(|d| d * d).sum()
    }
}

pub(crate) fn fusion_entries(sk: &Skeleton, within: &[usize]) -> Vec<(usize, usize, usize, u32)> {
    let mut out = Vec::new();
    for &a in within {
        for &b in within {
            if !sk.composable(a, b) {
                continue;
            }
            for &c in sk.prod(a, b) {
                out.push((a, b, c, sk.n(a, b, c)));
            }
        }
    }
    out
}

/// Frobenius-Perron dimensions of the endomorphism cells by power iteration on the
/// fusion matrices of each label.
pub fn fp_dims(sk: &Skeleton) -> Vec<f64> {
    let n = sk.len();
    (0..n)
        .map(|a| {
            let cell = sk.cells[a];
            if cell.0 != cell.1 {
                return f64::NAN;
            }
            let basis = sk.cell_labels(cell);
            let mut v = vec![1.0; n];
            let mut lambda = 0.0;
            for _ in 0..200 {
                let mut w = vec![0.0; n];
                for &b in &basis {
                    for &c in sk.prod(a, b) {
                        w[c] += f64::from(sk.n(a, b, c)) * v[b];
                    }
                }
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return 0.0;
                }
                lambda = basis.iter().map(|&b| w[b] * v[b]).sum::<f64>() / basis.iter().map(|&b| v[b] * v[b]).sum::<f64>();
                v = w.iter().map(|x| x / norm).collect();
            }
            lambda
        })
        .collect()
}

/// Per-label pivotal values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PivotalAssignment {
    pub labels: Vec<String>,
    pub values: Vec<Scalar>,
}

impl PivotalAssignment {
    pub fn new(labels: Vec<String>, values: Vec<Scalar>) -> Self {
        assert_eq!(labels.len(), values.len());
        PivotalAssignment { labels, values }
    }

    pub fn get(&self, label: &str) -> Option<Scalar> {
        self.labels.iter().position(|l| l == label).map(|i| self.values[i])
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.values)
            .map(|(l, v)| format!("{l}={}", crate::numerics::format_scalar(*v)))
            .collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadfordData {
    pub d_object: String,
    pub r_components: Vec<(String, Scalar)>,
}

impl RadfordData {
    pub fn get(&self, label: &str) -> Option<Scalar> {
        self.r_components.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }
}

/// Structure scalars of the four (co)evaluations of one label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvCoev {
    pub ev: Scalar,
    pub coev: Scalar,
    pub lev: Scalar,
    pub lcoev: Scalar,
}

#[derive(Debug, Clone)]
pub struct DoubleDual {
    pub delta: DeltaTable,
    /// Tensor structure of the fourth dual, `δ²` in the skeleton.
    pub fourth: DeltaTable,
    pub radford: RadfordData,
    pub report: CheckReport,
}

#[derive(Debug, Clone)]
pub struct SphericalVerdict {
    /// `p² = r` componentwise.
    pub radford: bool,
    /// Left and right traces agree.
    pub trace: bool,
    pub report: CheckReport,
}

pub fn validate_fusion(f: &FusionData) -> CheckReport {
    let sk = &f.sk;
    let mut report = CheckReport::new("fusion", &f.name, Tier::Dimension, Tolerance::default());
    let u = f.unit();
    let mut unit_law = FamilyAcc::new("unit-law");
    for a in f.all() {
        for b in f.all() {
            let want = i64::from(a == b);
            unit_law.compare_int(|| vec![sk.name(u).into(), sk.name(a).into(), sk.name(b).into()], sk.n(u, a, b).into(), want);
            unit_law.compare_int(|| vec![sk.name(a).into(), sk.name(u).into(), sk.name(b).into()], sk.n(a, u, b).into(), want);
        }
    }
    report.push(unit_law.finish());
    let mut accs = BTreeMap::new();
    sk.associativity_into(&sk.chains(3), &|_| "associativity".to_string(), &mut accs);
    report.extend(accs);
    let mut duality = FamilyAcc::new("duality");
    for a in f.all() {
        match sk.dual(a) {
            Ok(d) => duality.check(|| vec![sk.name(a).into()], sk.dual(d) == Ok(a)),
            Err(e) => duality.record(|| vec![sk.name(a).into(), e.to_string()], f64::INFINITY, false),
        }
    }
    report.push(duality.finish());
    if let Some(sym) = sk.symbols() {
        let mut adm = FamilyAcc::new("admissibility");
        for k in sym.keys() {
            adm.check(|| vec![sk.key_name(k)], sk.admissible(k));
        }
        report.push(adm.finish());
    }
    report
}

pub fn verify_pentagon(f: &FusionData, tol: Tolerance) -> CheckReport {
    let mut report = CheckReport::new("pentagon", &f.name, Tier::Structure, tol);
    if let Err(e) = f.sk.structure_ready() {
        report.fail("structure", e.to_string());
        return report;
    }
    let mut accs = BTreeMap::new();
    f.sk.pentagon_into(&f.sk.chains(4), &|_| "pentagon".to_string(), &mut accs, tol);
    report.extend(accs);
    report
}

pub fn dual_label(f: &FusionData, a: usize) -> std::result::Result<usize, SkeletonError> {
    f.sk.dual(a)
}

fn structure_ready(sk: &Skeleton) -> Result<()> {
    sk.structure_ready()?;
    sk.all_duals()?;
    Ok(())
}

/// (Co)evaluation scalars in the recorded gauge, with all zig-zag residuals.
pub fn ev_coev_data(f: &FusionData, tol: Tolerance) -> Result<(Vec<EvCoev>, CheckReport)> {
    structure_ready(&f.sk)?;
    let data = f
        .all()
        .into_iter()
        .map(|x| EvCoev { ev: f.sk.ev_scalar(x), coev: ONE, lev: f.sk.lev_scalar(x), lcoev: ONE })
        .collect();
    let mut report = CheckReport::new("snake", &f.name, Tier::Structure, tol);
    let mut accs = BTreeMap::new();
    structure::snakes_into(&f.sk, &f.all(), "", &mut accs, tol);
    report.extend(accs);
    Ok((data, report))
}

/// `(d⁺, d⁻)` per label: right and left traces of the identity.
pub fn quantum_dimensions(f: &FusionData, p: &PivotalAssignment) -> Result<Vec<(Scalar, Scalar)>> {
    structure_ready(&f.sk)?;
    Ok(f.all().into_iter().map(|x| structure::traces(&f.sk, x, p.values[x])).collect())
}

pub fn double_dual_structure(f: &FusionData, tol: Tolerance) -> Result<DoubleDual> {
    structure_ready(&f.sk)?;
    let all = f.all();
    let delta = structure::delta_table(&f.sk, &all);
    let fourth: DeltaTable = delta.iter().map(|(k, d)| (*k, d * d)).collect();
    let r = structure::radford_components(&f.sk, &all);
    let mut report = CheckReport::new("double-dual", &f.name, Tier::Structure, tol);
    let mut acc = FamilyAcc::new("radford-monoidality");
    structure::monoidality_into(&mut acc, &f.sk, &delta, 2, &|x| r[&x], tol);
    report.push(acc.finish());
    let mut unit = FamilyAcc::new("radford-unit");
    unit.compare(|| vec![f.sk.name(f.unit()).into()], r[&f.unit()], ONE, tol);
    report.push(unit.finish());
    let radford = RadfordData {
        d_object: f.sk.name(f.unit()).to_string(),
        r_components: all.iter().map(|&x| (f.sk.name(x).to_string(), r[&x])).collect(),
    };
    Ok(DoubleDual { delta, fourth, radford, report })
}

/// Solves `P_x P_y = δ P_z` over `labels` with the given pins, rank-bounded root orders.
pub(crate) fn solve_pivotal_system(
    sk: &Skeleton,
    labels: &[usize],
    delta: &DeltaTable,
    pins: &[(usize, Scalar)],
    tol: Tolerance,
) -> Result<Vec<Vec<Scalar>>> {
    let slot = |x: usize| labels.iter().position(|&l| l == x).expect("label outside the system");
    let mut sys = MultiplicativeSystem::new(sk.names(labels));
    structure::pivotal_equations(&mut sys, sk, delta, &slot);
    for &(x, v) in pins {
        sys.add(&[(slot(x), 1)], v, format!("pin {}", sk.name(x)));
    }
    let bound = labels.len().max(2) as u32;
    match solve_multiplicative(&sys, &vec![bound; labels.len()], tol) {
        Ok(s) => Ok(s),
        Err(NumericsError::InconsistentSystem(_)) => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}

pub fn solve_pivotal(f: &FusionData, tol: Tolerance) -> Result<Vec<PivotalAssignment>> {
    let dd = double_dual_structure(f, tol)?;
    let all = f.all();
    let sols = solve_pivotal_system(&f.sk, &all, &dd.delta, &[(f.unit(), ONE)], tol)?;
    Ok(sols.into_iter().map(|v| PivotalAssignment::new(f.labels().to_vec(), v)).collect())
}

pub fn verify_pivotal(f: &FusionData, p: &PivotalAssignment, tol: Tolerance) -> CheckReport {
    let mut report = CheckReport::new("pivotal", &f.name, Tier::Structure, tol);
    let dd = match double_dual_structure(f, tol) {
        Ok(dd) => dd,
        Err(e) => {
            report.fail("structure", e.to_string());
            return report;
        }
    };
    let mut unit = FamilyAcc::new("pivotal-unit");
    unit.compare(|| vec![f.sk.name(f.unit()).into()], p.values[f.unit()], ONE, tol);
    report.push(unit.finish());
    let mut acc = FamilyAcc::new("pivotal-monoidality");
    structure::monoidality_into(&mut acc, &f.sk, &dd.delta, 1, &|x| p.values[x], tol);
    report.push(acc.finish());
    report
}

pub fn check_spherical_tensor(f: &FusionData, p: &PivotalAssignment, radford: &RadfordData, tol: Tolerance) -> Result<SphericalVerdict> {
    let dims = quantum_dimensions(f, p)?;
    let mut report = CheckReport::new("spherical", &f.name, Tier::Structure, tol);
    let mut a = FamilyAcc::new("radford-square");
    let mut b = FamilyAcc::new("trace");
    for x in f.all() {
        let name = f.sk.name(x);
        let r = radford.get(name).ok_or_else(|| Error::MissingStructure(format!("radford component of {name}")))?;
        a.compare(|| vec![name.into()], p.values[x] * p.values[x], r, tol);
        b.compare(|| vec![name.into()], dims[x].0, dims[x].1, tol);
    }
    let (a, b) = (a.finish(), b.finish());
    let verdict = (a.passed(), b.passed());
    report.push(a);
    report.push(b);
    Ok(SphericalVerdict { radford: verdict.0, trace: verdict.1, report })
}

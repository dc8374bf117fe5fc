//! Group gradings over skeletons: validation, degrees of duals, Serre degree preservation
//! and the reduction of pivotal data to the trivial component.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fusion::{self, FusionData};
use crate::modulecat::{digits, SerreData};
use crate::numerics::Tolerance;
use crate::report::{CheckReport, FamilyAcc, Tier};
use crate::skeleton::Skeleton;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl Group {
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Schema("group table must be square over the elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Schema("group table has no identity".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == identity) {
                return Err(Error::Schema(format!("element `{}` has no inverse", elements[x])));
            }
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::Schema("group table is not associative".into()));
                    }
                }
            }
        }
        Ok(Group { elements, table, identity })
    }

    /// The cyclic group of order `n` with elements `e, g, g^2, …`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Group::new(elements, table).expect("cyclic table is a group")
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        (0..self.elements.len()).find(|&y| self.table[x][y] == self.identity).unwrap()
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.elements.iter().position(|e| e == name).ok_or_else(|| Error::Schema(format!("unknown group element `{name}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingData {
    pub name: String,
    /// Name of the graded fusion category, module or context.
    pub target: String,
    pub group: Group,
    /// Label name ↦ group element.
    pub deg: BTreeMap<String, usize>,
}

impl GradingData {
    pub fn degree(&self, sk: &Skeleton, x: usize) -> Option<usize> {
        self.deg.get(sk.name(x)).copied()
    }
}

/// Coverage, faithfulness and multiplicativity of a grading on every label of `sk`.
pub fn validate_grading(sk: &Skeleton, target: &str, g: &GradingData) -> CheckReport {
    let mut report = CheckReport::new("grading", target, Tier::Dimension, Tolerance::default());
    let mut cover = FamilyAcc::new("coverage");
    for x in 0..sk.len() {
        cover.check(|| vec![sk.name(x).into()], g.degree(sk, x).is_some());
    }
    for name in g.deg.keys() {
        cover.check(|| vec![name.clone()], sk.label(name).is_ok());
    }
    report.push(cover.finish());
    let mut faithful = FamilyAcc::new("faithfulness");
    for (e, name) in g.group.elements.iter().enumerate() {
        faithful.check(|| vec![name.clone()], (0..sk.len()).any(|x| g.degree(sk, x) == Some(e)));
    }
    report.push(faithful.finish());
    let mut accs: BTreeMap<String, FamilyAcc> = BTreeMap::new();
    for x in 0..sk.len() {
        for y in 0..sk.len() {
            if !sk.composable(x, y) {
                continue;
            }
            for &z in sk.prod(x, y) {
                let fam = format!("multiplicativity[{}]", digits(&sk.path(&[x, y])));
                let acc = accs.entry(fam.clone()).or_insert_with(|| FamilyAcc::new(&fam));
                let ok = match (g.degree(sk, x), g.degree(sk, y), g.degree(sk, z)) {
                    (Some(a), Some(b), Some(c)) => g.group.mul(a, b) == c,
                    _ => false,
                };
                acc.check(|| sk.names(&[x, y, z]), ok);
            }
        }
    }
    report.extend(accs);
    report
}

/// `deg(x^∨) = deg(^∨x) = deg(x)^{-1}` for every label; both duals share a label.
pub fn graded_dual_degree_check(sk: &Skeleton, target: &str, g: &GradingData) -> CheckReport {
    let mut report = CheckReport::new("graded-duals", target, Tier::Dimension, Tolerance::default());
    let mut right = FamilyAcc::new("dual-degree[right]");
    let mut left = FamilyAcc::new("dual-degree[left]");
    for x in 0..sk.len() {
        let ok = match (sk.dual(x), g.degree(sk, x)) {
            (Ok(d), Some(dx)) => g.degree(sk, d) == Some(g.group.inv(dx)),
            _ => false,
        };
        right.check(|| vec![sk.name(x).into()], ok);
        left.check(|| vec![sk.name(x).into()], ok);
    }
    report.push(right.finish());
    report.push(left.finish());
    report
}

/// `deg(S(m)) = deg(m)` for every module label.
pub fn graded_serre_check(sk: &Skeleton, target: &str, serre: &SerreData, g: &GradingData) -> CheckReport {
    let mut report = CheckReport::new("graded-serre", target, Tier::Dimension, Tolerance::default());
    let mut acc = FamilyAcc::new("serre-degree");
    for (&x, &y) in &serre.object_map {
        acc.check(|| sk.names(&[x, y]), g.degree(sk, x).is_some() && g.degree(sk, x) == g.degree(sk, y));
    }
    report.push(acc.finish());
    report
}

/// Labels of each degree.
pub fn homogeneous_components(sk: &Skeleton, g: &GradingData) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..sk.len() {
        if let Some(d) = g.degree(sk, x) {
            out.entry(d).or_default().push(x);
        }
    }
    out
}

/// Pentagon over the chains whose first label has degree `d`, one report per degree.
pub fn per_degree_pentagon(sk: &Skeleton, target: &str, g: &GradingData, tol: Tolerance) -> Vec<(usize, CheckReport)> {
    let chains = sk.chains(4);
    homogeneous_components(sk, g)
        .into_keys()
        .map(|d| {
            let part: Vec<Vec<usize>> = chains.iter().filter(|c| g.degree(sk, c[0]) == Some(d)).cloned().collect();
            let mut report = CheckReport::new("pentagon", &format!("{target}@{}", g.group.elements[d]), Tier::Structure, tol);
            let mut accs = BTreeMap::new();
            sk.pentagon_into(&part, &|_| "pentagon".into(), &mut accs, tol);
            report.extend(accs);
            (d, report)
        })
        .collect()
}

/// The fusion subcategory of degree-`e` labels.
pub fn trivial_component(f: &FusionData, g: &GradingData) -> Result<FusionData> {
    let keep: Vec<usize> = f.all().into_iter().filter(|&x| g.degree(&f.sk, x) == Some(g.group.identity)).collect();
    let pos = |x: usize| keep.iter().position(|&y| y == x);
    let labels = f.sk.names(&keep);
    let mut fusion = Vec::new();
    for (a, b, c, m) in f.fusion_entries() {
        if let (Some(a), Some(b), Some(c)) = (pos(a), pos(b), pos(c)) {
            fusion.push((a, b, c, m));
        }
    }
    let symbols = f.sk.symbols().map(|sym| {
        sym.iter()
            .filter_map(|(k, v)| {
                let mapped: Option<Vec<usize>> = k.iter().map(|&x| pos(x)).collect();
                mapped.map(|m| ([m[0], m[1], m[2], m[3], m[4], m[5]], *v))
            })
            .collect()
    });
    let unit = pos(f.unit()).ok_or_else(|| Error::Schema("unit is not of trivial degree".into()))?;
    FusionData::new(&format!("{}_e", f.name), labels, unit, &fusion, symbols)
}

/// Every pivotal structure of the full category restricts to one of the trivial component,
/// and the verdicts of the two solvers agree on existence.
pub fn graded_pivotal_check(f: &FusionData, g: &GradingData, tol: Tolerance) -> Result<CheckReport> {
    let fe = trivial_component(f, g)?;
    let full = fusion::solve_pivotal(f, tol)?;
    let part = fusion::solve_pivotal(&fe, tol)?;
    let mut report = CheckReport::new("graded-pivotal", &f.name, Tier::Structure, tol);
    let mut restrict = FamilyAcc::new("restriction");
    for (i, p) in full.iter().enumerate() {
        let values: Vec<_> = fe.labels().iter().map(|l| p.get(l).unwrap()).collect();
        let hit = part.iter().any(|q| crate::numerics::approx_eq_slice(&q.values, &values, tol));
        restrict.check(|| vec![format!("solution {i}")], hit);
    }
    report.push(restrict.finish());
    let mut exist = FamilyAcc::new("existence");
    exist.check(|| vec![f.name.clone()], full.is_empty() == part.is_empty());
    report.push(exist.finish());
    Ok(report)
}

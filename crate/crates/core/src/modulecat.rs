//! Skeletal module categories: mixed pentagon, internal Hom and coHom, relative Serre data,
//! module pivotal structures, module Radford components and module sphericality.
//!
//! A module category lives in a two-object skeleton: the base occupies cell `(0,0)`, module
//! labels cell `(0,1)` and an optional right base cell `(1,1)`. Labels are laid out as base,
//! module, right base, in that order, so every index of the module skeleton is also valid in
//! an ambient context skeleton that extends it.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{self, FusionData, PivotalAssignment};
use crate::numerics::{format_scalar, Mat, Scalar, Tolerance, ONE, ZERO};
use crate::report::{CheckReport, FamilyAcc, Tier};
use crate::skeleton::{FKey, Skeleton};
use crate::structure::{self, DeltaTable};

/// Right action of a second base on the module labels.
#[derive(Debug, Clone)]
pub struct RightAction {
    pub base: FusionData,
    /// `(m, b, k, n_{mb}^k)` with module indices local to the module labels.
    pub action: Vec<(usize, usize, usize, u32)>,
}

#[derive(Debug, Clone)]
pub struct ModuleData {
    pub name: String,
    pub base: FusionData,
    pub right: Option<FusionData>,
    pub sk: Skeleton,
    /// A structure-tier context skeleton whose first labels coincide with `sk`.
    pub ambient: Option<Arc<Skeleton>>,
}


impl ModuleData {
    /// Builds a module category. `action` lists `(a, m, k, n_{am}^k)` with `a` a base index and
    /// `m, k` module-local indices. `symbols` are keyed in combined indices (base, module,
    /// right base); base and right-base symbols are copied in automatically.
    pub fn new(
        name: &str,
        base: FusionData,
        mlabels: Vec<String>,
        action: &[(usize, usize, usize, u32)],
        right: Option<RightAction>,
        symbols: Option<BTreeMap<FKey, Scalar>>,
    ) -> Result<Self> {
        if mlabels.is_empty() {
            return Err(Error::EmptyModule);
        }
        let na = base.len();
        let nm = mlabels.len();
        let mut labels = base.labels().to_vec();
        labels.extend(mlabels);
        let mut cells = vec![(0, 0); na];
        cells.extend(vec![(0, 1); nm]);
        let mut fusion = base.fusion_entries();
        fusion.extend(action.iter().map(|&(a, m, k, c)| (a, na + m, na + k, c)));
        let mut units = vec![Some(base.unit()), None];
        if let Some(r) = &right {
            let off = na + nm;
            labels.extend(r.base.labels().iter().cloned());
            cells.extend(vec![(1, 1); r.base.len()]);
            fusion.extend(r.base.fusion_entries().into_iter().map(|(a, b, c, m)| (off + a, off + b, off + c, m)));
            fusion.extend(r.action.iter().map(|&(m, b, k, c)| (na + m, off + b, na + k, c)));
            units[1] = Some(off + r.base.unit());
        }
        let symbols = match symbols {
            None => None,
            Some(mut sym) => {
                if let Some(bs) = base.sk.symbols() {
                    sym.extend(bs.iter().map(|(k, v)| (*k, *v)));
                }
                if let Some(rs) = right.as_ref().and_then(|r| r.base.sk.symbols()) {
                    let off = na + nm;
                    sym.extend(rs.iter().map(|(k, v)| (k.map(|x| x + off), *v)));
                }
                Some(sym)
            }
        };
        let sk = Skeleton::new(labels, cells, units, &fusion, symbols)?;
        Ok(ModuleData { name: name.to_string(), base, right: right.map(|r| r.base), sk, ambient: None })
    }

    pub fn with_ambient(mut self, ambient: Arc<Skeleton>) -> Self {
        self.ambient = Some(ambient);
        self
    }

    pub fn base_labels(&self) -> Vec<usize> {
        self.sk.cell_labels((0, 0))
    }

    /// Module labels as combined indices.
    pub fn mlabels(&self) -> Vec<usize> {
        self.sk.cell_labels((0, 1))
    }

    pub fn right_labels(&self) -> Vec<usize> {
        self.sk.cell_labels((1, 1))
    }

    pub fn offset(&self) -> usize {
        self.base.len()
    }

    /// Combined index of a module label given by name.
    pub fn module_label(&self, name: &str) -> Result<usize> {
        let x = self.sk.label(name)?;
        if self.sk.cells[x] != (0, 1) {
            return Err(Error::Schema(format!("`{name}` is not a module label")));
        }
        Ok(x)
    }

    /// Action multiplicity `n[a][m][k]` in combined indices.
    pub fn n(&self, a: usize, m: usize, k: usize) -> u32 {
        self.sk.n(a, m, k)
    }

    /// The structure-tier skeleton used for duality data: the ambient context if present.
    pub fn structure_skeleton(&self) -> Result<&Skeleton> {
        match &self.ambient {
            Some(a) => Ok(a),
            None => Err(Error::MissingStructure(format!(
                "module `{}` has no ambient context carrying dual data",
                self.name
            ))),
        }
    }
}

/// Multiplicities of simples of a named category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectDecomposition {
    pub labels: Vec<String>,
    pub mults: Vec<u32>,
}

impl ObjectDecomposition {
    pub fn new(labels: Vec<String>, mults: Vec<u32>) -> Self {
        ObjectDecomposition { labels, mults }
    }

    pub fn get(&self, label: &str) -> u32 {
        self.labels.iter().position(|l| l == label).map_or(0, |i| self.mults[i])
    }

    pub fn total(&self) -> u32 {
        self.mults.iter().sum()
    }

    pub fn describe(&self) -> String {
        let terms: Vec<String> = self
            .labels
            .iter()
            .zip(&self.mults)
            .filter(|(_, &m)| m > 0)
            .map(|(l, &m)| if m == 1 { l.clone() } else { format!("{m}·{l}") })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

pub fn validate_module(m: &ModuleData, tol: Tolerance) -> CheckReport {
    let sk = &m.sk;
    let tier = if sk.has_symbols() { Tier::Structure } else { Tier::Dimension };
    let mut report = CheckReport::new("module", &m.name, tier, tol);
    let ml = m.mlabels();
    let mut unit = FamilyAcc::new("unit-action");
    let ua = m.base.unit();
    let ub = m.right.as_ref().map(|_| sk.unit(1));
    for &x in &ml {
        for &y in &ml {
            let want = i64::from(x == y);
            unit.compare_int(|| sk.names(&[ua, x, y]), sk.n(ua, x, y).into(), want);
            if let Some(ub) = ub {
                unit.compare_int(|| sk.names(&[x, ub, y]), sk.n(x, ub, y).into(), want);
            }
        }
    }
    report.push(unit.finish());
    let touches_module = |c: &Vec<usize>| c.iter().any(|&x| sk.cells[x] == (0, 1));
    let chains3: Vec<Vec<usize>> = sk.chains(3).into_iter().filter(touches_module).collect();
    let mut accs = BTreeMap::new();
    sk.associativity_into(&chains3, &|p| format!("mixed-associativity[{}]", digits(p)), &mut accs);
    report.extend(accs);
    if sk.has_symbols() {
        if let Err(e) = sk.structure_ready() {
            report.fail("structure", e.to_string());
            return report;
        }
        let chains4: Vec<Vec<usize>> = sk.chains(4).into_iter().filter(touches_module).collect();
        let mut accs = BTreeMap::new();
        sk.pentagon_into(&chains4, &|p| format!("module-pentagon[{}]", digits(p)), &mut accs, tol);
        report.extend(accs);
    }
    report
}

pub(crate) fn digits(path: &[usize]) -> String {
    path.iter().map(|o| o.to_string()).collect()
}

/// `Hom(m, n)` over the base through the adjunction `Hom(a⊷m, n) ≅ Hom(m, a^∨⊷n)`:
/// `mult_a = n[a*][n][m]`.
pub fn internal_hom(m: &ModuleData, x: usize, y: usize) -> ObjectDecomposition {
    let labels = m.base.labels().to_vec();
    let mults = m.base_labels().into_iter().map(|a| m.n(m.base.sk.star(a), y, x)).collect();
    ObjectDecomposition::new(labels, mults)
}

/// `coHom(m, n)` over the base: `mult_a = mult_{a*}(Hom(n, m))`.
pub fn internal_cohom(m: &ModuleData, x: usize, y: usize) -> ObjectDecomposition {
    let labels = m.base.labels().to_vec();
    let hom = internal_hom(m, y, x);
    let mults = m.base_labels().into_iter().map(|a| hom.mults[m.base.sk.star(a)]).collect();
    ObjectDecomposition::new(labels, mults)
}

/// Brute-force `dim Hom_M(a⊷m, n)` by decomposing `a⊷m`.
pub fn action_hom_dim(m: &ModuleData, a: usize, x: usize, y: usize) -> u32 {
    m.sk.prod(a, x).iter().filter(|&&k| k == y).map(|&k| m.n(a, x, k)).sum()
}

/// Structure matrices of the internal Hom `Hom(m, −)`.
#[derive(Debug, Clone)]
pub struct IhomStructure {
    /// `b ⊗ Hom(m,n) ≅ Hom(m, b⊷n)` on the `a`-isotypic part, keyed `(b, n, a)`.
    pub module_functor: BTreeMap<[usize; 3], Mat>,
    /// `Hom(a⊷m, n) ≅ Hom(m, n) ⊗ a^∨` on the `c`-isotypic part, keyed `(a, n, c)`.
    pub coevaluation: BTreeMap<[usize; 3], Mat>,
    pub report: CheckReport,
}

/// Both families are realized by mixed associator blocks `F^{x,y,m}_n`; the report records
/// their invertibility residuals and the module-functor coherence, which is the mixed
/// pentagon on chains ending in `m`.
pub fn ihom_structure_maps(m: &ModuleData, x: usize, tol: Tolerance) -> Result<IhomStructure> {
    let sk = &m.sk;
    sk.structure_ready()?;
    m.base.sk.all_duals()?;
    let mut report = CheckReport::new("ihom-structure", &m.name, Tier::Structure, tol);
    let mut inv = FamilyAcc::new("invertibility");
    let mut module_functor = BTreeMap::new();
    let mut coevaluation = BTreeMap::new();
    let base = m.base_labels();
    for &b in &base {
        for &n in &m.mlabels() {
            for &a in &base {
                let bs = m.base.sk.star(b);
                if let Some(blk) = sk.block(bs, a, x, n) {
                    let r = (blk.mat.mul(&blk.inv).max_abs_diff(&Mat::identity(blk.rows.len()))).max(0.0);
                    inv.residual(|| sk.names(&[b, n, a]), r, tol);
                    module_functor.insert([b, n, a], blk.mat.clone());
                }
                if let Some(blk) = sk.block(a, b, x, n) {
                    coevaluation.insert([b, n, a], blk.mat.clone());
                }
            }
        }
    }
    report.push(inv.finish());
    let chains: Vec<Vec<usize>> = sk.chains(4).into_iter().filter(|c| c[3] == x && c[..3].iter().all(|&y| sk.cells[y] == (0, 0))).collect();
    let mut accs = BTreeMap::new();
    sk.pentagon_into(&chains, &|_| "module-functor-coherence".into(), &mut accs, tol);
    report.extend(accs);
    Ok(IhomStructure { module_functor, coevaluation, report })
}

/// Object map of the relative Serre functor of the module cell `module` over the endomorphism
/// cell `acting`, from the Hom-duality `Hom(a⊷m, n) ≅ Hom(n, a^∨⊷S(m))^*`: the unique `k`
/// with `n[a][m][n] = n[a*][n][k]` for all `a, n`.
pub fn hom_duality_map(sk: &Skeleton, acting: &[usize], module: &[usize]) -> std::result::Result<BTreeMap<usize, usize>, String> {
    let mut out = BTreeMap::new();
    for &x in module {
        let candidates: Vec<usize> = module
            .iter()
            .copied()
            .filter(|&k| {
                acting.iter().all(|&a| {
                    let Ok(as_) = sk.dual(a) else { return false };
                    module.iter().all(|&y| sk.n(a, x, y) == sk.n(as_, y, k))
                })
            })
            .collect();
        match candidates.as_slice() {
            [k] => {
                out.insert(x, *k);
            }
            [] => {
                let worst = module
                    .iter()
                    .map(|&k| {
                        let miss: u32 = acting
                            .iter()
                            .flat_map(|&a| module.iter().map(move |&y| (a, y)))
                            .map(|(a, y)| sk.n(a, x, y).abs_diff(sk.dual(a).map_or(0, |as_| sk.n(as_, y, k))))
                            .sum();
                        (miss, k)
                    })
                    .min()
                    .unwrap();
                return Err(format!(
                    "no Serre image for `{}`: best candidate `{}` misses {} multiplicities",
                    sk.name(x),
                    sk.name(worst.1),
                    worst.0
                ));
            }
            _ => return Err(format!("Serre image of `{}` is ambiguous", sk.name(x))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SerreData {
    /// Module label ↦ image, combined indices.
    pub object_map: BTreeMap<usize, usize>,
    /// `S(a⊷m) ≅ a^∨∨ ⊷ S(m)` on the channel `k ∈ a⊷m`, keyed `(a, m, k)`.
    pub twist: DeltaTable,
    pub report: CheckReport,
}

impl SerreData {
    pub fn is_identity(&self) -> bool {
        self.object_map.iter().all(|(x, y)| x == y)
    }
}

/// Twisted coherence of `twist` against the mixed associator:
/// `F^{abm}_k[e,f] δ(a,b,e) σ(e,m,k) = σ(b,m,f) σ(a,f,k) F^{abm}_k[e,f]`.
pub(crate) fn twisted_coherence_into(
    acc: &mut FamilyAcc,
    sk: &Skeleton,
    acting: &[usize],
    module: &[usize],
    delta: &DeltaTable,
    twist: &DeltaTable,
    tol: Tolerance,
) {
    let d = |k: [usize; 3]| delta.get(&k).copied().unwrap_or(ZERO);
    let s = |k: [usize; 3]| twist.get(&k).copied().unwrap_or(ZERO);
    for &a in acting {
        for &b in acting {
            for &x in module {
                for &k in module {
                    let Some(blk) = sk.block(a, b, x, k) else { continue };
                    for &e in &blk.rows {
                        for &f in &blk.cols {
                            let v = blk.entry(e, f);
                            if v == ZERO {
                                continue;
                            }
                            let lhs = v * d([a, b, e]) * s([e, x, k]);
                            let rhs = s([b, x, f]) * s([a, f, k]) * v;
                            acc.compare(|| sk.names(&[a, b, x, k, e, f]), lhs, rhs, tol);
                        }
                    }
                }
            }
        }
    }
}

pub fn serre_data(m: &ModuleData, tol: Tolerance) -> Result<SerreData> {
    m.sk.structure_ready()?;
    let amb = m.structure_skeleton()?;
    amb.structure_ready()?;
    let (base, ml) = (m.base_labels(), m.mlabels());
    let object_map = hom_duality_map(&m.sk, &base, &ml).map_err(Error::MissingStructure)?;
    let mut within = base.clone();
    within.extend(&ml);
    let full = structure::delta_table(amb, &within);
    let twist: DeltaTable = full.iter().filter(|(k, _)| amb.cells[k[1]] == (0, 1)).map(|(k, v)| (*k, *v)).collect();
    let delta: DeltaTable = full.iter().filter(|(k, _)| amb.cells[k[1]] == (0, 0)).map(|(k, v)| (*k, *v)).collect();
    let mut report = CheckReport::new("serre", &m.name, Tier::Structure, tol);
    let mut obj = FamilyAcc::new("object-map");
    for (&x, &y) in &object_map {
        obj.check(|| m.sk.names(&[x, y]), x == y);
    }
    report.push(obj.finish());
    let mut acc = FamilyAcc::new("twisted-coherence");
    twisted_coherence_into(&mut acc, &m.sk, &base, &ml, &delta, &twist, tol);
    report.push(acc.finish());
    Ok(SerreData { object_map, twist, report })
}

/// Module pivotal solutions: pinned (first module label set to 1) and raw (global scale
/// fixed up to sign by `p̃_{m₀}² = r_M(m₀)`).
#[derive(Debug, Clone)]
pub struct ModulePivotalSolutions {
    pub pinned: Vec<PivotalAssignment>,
    pub raw: Vec<PivotalAssignment>,
}

fn module_assignment(m: &ModuleData, values: Vec<Scalar>) -> PivotalAssignment {
    PivotalAssignment::new(m.sk.names(&m.mlabels()), values)
}

pub fn solve_module_pivotal(m: &ModuleData, p: &PivotalAssignment, tol: Tolerance) -> Result<ModulePivotalSolutions> {
    let serre = serre_data(m, tol)?;
    let ml = m.mlabels();
    let off = m.offset();
    let mut sys = crate::numerics::MultiplicativeSystem::new(m.sk.names(&ml));
    for (&[a, x, k], &s) in &serre.twist {
        sys.add(&[(k - off, 1), (x - off, -1)], p.values[a] / s, format!("{}⊷{}→{}", m.sk.name(a), m.sk.name(x), m.sk.name(k)));
    }
    sys.add(&[(0, 1)], ONE, "pin");
    let bound = ml.len().max(2) as u32;
    let pinned: Vec<Vec<Scalar>> = match crate::numerics::solve_multiplicative(&sys, &vec![bound; ml.len()], tol) {
        Ok(s) => s,
        Err(crate::numerics::NumericsError::InconsistentSystem(_)) => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    let (r, _) = radford_module_components(m, tol)?;
    let scale = r[&ml[0]].sqrt();
    let mut raw = Vec::new();
    for s in &pinned {
        for sign in [ONE, -ONE] {
            raw.push(module_assignment(m, s.iter().map(|v| crate::numerics::clean(v * scale * sign)).collect()));
        }
    }
    raw.sort_by(|a, b| crate::numerics::cmp_vectors(&a.values, &b.values, tol));
    Ok(ModulePivotalSolutions { pinned: pinned.into_iter().map(|v| module_assignment(m, v)).collect(), raw })
}

/// The defining square of a module pivotal structure for every `(a, m)` and channel `k`.
pub fn verify_module_pivotal(m: &ModuleData, p: &PivotalAssignment, pt: &PivotalAssignment, tol: Tolerance) -> CheckReport {
    let mut report = CheckReport::new("module-pivotal", &m.name, Tier::Structure, tol);
    let serre = match serre_data(m, tol) {
        Ok(s) => s,
        Err(e) => {
            report.fail("structure", e.to_string());
            return report;
        }
    };
    let off = m.offset();
    let mut acc = FamilyAcc::new("module-pivotal-square");
    for (&[a, x, k], &s) in &serre.twist {
        acc.compare(|| m.sk.names(&[a, x, k]), p.values[a] * pt.values[x - off], s * pt.values[k - off], tol);
    }
    report.push(acc.finish());
    report
}

/// Canonical module Radford components `r_M(m)` (left over right trace of `id_m` in the
/// ambient context) with their twisted naturality `r_A(a) r_M(m) = σ² r_M(k)`.
pub fn radford_module_components(m: &ModuleData, tol: Tolerance) -> Result<(BTreeMap<usize, Scalar>, CheckReport)> {
    let serre = serre_data(m, tol)?;
    let amb = m.structure_skeleton()?;
    let ml = m.mlabels();
    let r = structure::radford_components(amb, &ml);
    let ra = structure::radford_components(&m.base.sk, &m.base.all());
    let mut report = CheckReport::new("module-radford", &m.name, Tier::Structure, tol);
    let mut acc = FamilyAcc::new("radford-naturality");
    for (&[a, x, k], &s) in &serre.twist {
        acc.compare(|| m.sk.names(&[a, x, k]), ra[&a] * r[&x], s * s * r[&k], tol);
    }
    report.push(acc.finish());
    Ok((r, report))
}

pub fn check_spherical_module(m: &ModuleData, p: &PivotalAssignment, pt: &PivotalAssignment, tol: Tolerance) -> Result<CheckReport> {
    let dd = fusion::double_dual_structure(&m.base, tol)?;
    let base = fusion::check_spherical_tensor(&m.base, p, &dd.radford, tol)?;
    let serre = serre_data(m, tol)?;
    let (r, _) = radford_module_components(m, tol)?;
    let off = m.offset();
    let mut report = CheckReport::new("module-spherical", &m.name, Tier::Structure, tol);
    let mut b = FamilyAcc::new("base-spherical");
    b.check(|| vec![m.base.name.clone()], base.radford && base.trace);
    report.push(b.finish());
    let mut acc = FamilyAcc::new("serre-square");
    for (&x, &sx) in &serre.object_map {
        acc.compare(|| vec![m.sk.name(x).into(), format_scalar(r[&x])], pt.values[sx - off] * pt.values[x - off], r[&x], tol);
    }
    report.push(acc.finish());
    Ok(report)
}

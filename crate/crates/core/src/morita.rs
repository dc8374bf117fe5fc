//! Two-object bicategories of Morita contexts: assembly, coherence, duals of 1-morphisms,
//! the duality calculus, double duals against Serre data, pivotal transport, and the
//! pivotal-Morita, Radford and strong-context suites.
//!
//! Object 0 carries `A`, object 1 carries `B`. Cells: `A = (0,0)`, `M = (0,1)`,
//! `N = (1,0)`, `B = (1,1)`. Labels are laid out as `A, M, B, N`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{self, EvCoev, FusionData, PivotalAssignment};
use crate::modulecat::{self, digits, ModuleData};
use crate::numerics::{Scalar, Tolerance, ONE};
use crate::report::{CheckReport, FamilyAcc, Tier};
use crate::skeleton::{FKey, Skeleton};
use crate::structure::{self, DeltaTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellKind {
    A,
    M,
    N,
    B,
}

impl CellKind {
    pub fn of(cell: (usize, usize)) -> CellKind {
        match cell {
            (0, 0) => CellKind::A,
            (0, 1) => CellKind::M,
            (1, 0) => CellKind::N,
            _ => CellKind::B,
        }
    }

    pub fn cell(self) -> (usize, usize) {
        match self {
            CellKind::A => (0, 0),
            CellKind::M => (0, 1),
            CellKind::N => (1, 0),
            CellKind::B => (1, 1),
        }
    }

    pub fn letter(self) -> char {
        match self {
            CellKind::A => 'A',
            CellKind::M => 'M',
            CellKind::N => 'N',
            CellKind::B => 'B',
        }
    }
}

#[derive(Debug, Clone)]
pub struct MoritaContextData {
    pub name: String,
    pub a: FusionData,
    pub b: FusionData,
    /// The bimodule `M`, with this context as its ambient skeleton at structure tier.
    pub m: ModuleData,
    pub sk: Arc<Skeleton>,
    pub tier: Tier,
    pub warnings: Vec<String>,
}

impl MoritaContextData {
    /// Assembles a context from a bimodule, the `N` labels and the products involving `N`
    /// (`(x, y, z, mult)` in combined indices). `symbols`, if present, covers the cells not
    /// already carried by the bimodule.
    pub fn new(
        name: &str,
        m: ModuleData,
        nlabels: Vec<String>,
        mixed: &[(usize, usize, usize, u32)],
        symbols: Option<BTreeMap<FKey, Scalar>>,
    ) -> Result<Self> {
        let b = m.right.clone().ok_or_else(|| Error::Schema(format!("module `{}` has no right base", m.name)))?;
        let a = m.base.clone();
        let mut labels = m.sk.labels.clone();
        let mut cells = m.sk.cells.clone();
        labels.extend(nlabels.iter().cloned());
        cells.extend(vec![(1, 0); nlabels.len()]);
        let prefix: Vec<usize> = (0..m.sk.len()).collect();
        let mut fusion = fusion::fusion_entries(&m.sk, &prefix);
        fusion.extend_from_slice(mixed);
        let symbols = symbols.map(|mut s| {
            if let Some(ms) = m.sk.symbols() {
                s.extend(ms.iter().map(|(k, v)| (*k, *v)));
            }
            s
        });
        let tier = if symbols.is_some() && m.sk.has_symbols() { Tier::Structure } else { Tier::Dimension };
        let sk = Skeleton::new(labels, cells, m.sk.units.clone(), &fusion, symbols)?;
        let sk = Arc::new(sk);
        let m = if tier == Tier::Structure { m.with_ambient(sk.clone()) } else { m };
        Ok(MoritaContextData { name: name.to_string(), a, b, m, sk, tier, warnings: Vec::new() })
    }

    pub fn labels_of(&self, kind: CellKind) -> Vec<usize> {
        self.sk.cell_labels(kind.cell())
    }

    pub fn kind(&self, x: usize) -> CellKind {
        CellKind::of(self.sk.cells[x])
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.sk.len()).collect()
    }

    pub fn is_structure(&self) -> bool {
        self.tier == Tier::Structure && self.sk.structure_ready().is_ok()
    }

    /// Rebuilds the context with one F-entry replaced.
    pub fn with_symbol(&self, key: FKey, value: Scalar) -> Result<Self> {
        let mut sym = self.sk.symbols().cloned().ok_or(crate::skeleton::SkeletonError::NoSymbols)?;
        sym.insert(key, value);
        let sk = Skeleton::new(self.sk.labels.clone(), self.sk.cells.clone(), self.sk.units.clone(), &fusion::fusion_entries(&self.sk, &self.all()), Some(sym))?;
        let sk = Arc::new(sk);
        let mut out = self.clone();
        out.m = out.m.with_ambient(sk.clone());
        out.sk = sk;
        Ok(out)
    }

    /// F-entries of `α` (type `(M, N, M)`) or `β` (type `(N, M, N)`).
    pub fn coherence_components(&self, first: CellKind) -> Vec<(FKey, Scalar)> {
        let Some(sym) = self.sk.symbols() else { return Vec::new() };
        let second = if first == CellKind::M { CellKind::N } else { CellKind::M };
        let mut out = Vec::new();
        for (&k, &v) in sym {
            if self.kind(k[0]) == first && self.kind(k[1]) == second && self.kind(k[2]) == first {
                out.push((k, v));
            }
        }
        out
    }
}

/// Dimension-tier canonical context of a bimodule: `N` is modeled on `m ↦ m*` and the
/// products involving `N` are derived from the adjunction dimensions.
pub fn build_canonical_context(m: &ModuleData) -> Result<MoritaContextData> {
    let right = m.right.as_ref().ok_or_else(|| Error::Schema(format!("module `{}` has no right base", m.name)))?;
    let sk = &m.sk;
    let (al, ml, bl) = (m.base_labels(), m.mlabels(), m.right_labels());
    for &a in &al {
        for &x in &ml {
            for &b in &bl {
                for &k in &ml {
                    let lhs: u32 = ml.iter().map(|&e| sk.n(a, x, e) * sk.n(e, b, k)).sum();
                    let rhs: u32 = ml.iter().map(|&f| sk.n(x, b, f) * sk.n(a, f, k)).sum();
                    if lhs != rhs {
                        return Err(Error::ActionsDoNotCommute(format!("({})", sk.names(&[a, x, b, k]).join(","))));
                    }
                }
            }
        }
    }
    m.base.sk.all_duals()?;
    right.sk.all_duals()?;
    let base_dual = |a: usize| m.base.sk.star(a);
    let off_b = m.base.len() + ml.len();
    let right_dual = |b: usize| off_b + right.sk.star(b - off_b);
    let off_n = sk.len();
    let nlab = |x: usize| off_n + (x - m.offset());
    let nlabels: Vec<String> = ml.iter().map(|&x| format!("{}*", sk.name(x))).collect();
    let mut mixed = Vec::new();
    for &x in &ml {
        for &k in &ml {
            for &a in &al {
                push_nonzero(&mut mixed, nlab(x), a, nlab(k), sk.n(base_dual(a), x, k));
                push_nonzero(&mut mixed, x, nlab(k), a, sk.n(a, k, x));
            }
            for &b in &bl {
                push_nonzero(&mut mixed, b, nlab(x), nlab(k), sk.n(x, right_dual(b), k));
                push_nonzero(&mut mixed, nlab(k), x, b, sk.n(k, b, x));
            }
        }
    }
    let mut ctx = MoritaContextData::new(&format!("canonical({})", m.name), m.clone(), nlabels, &mixed, None)?;
    ctx.warnings.push("N-side structure scalars are not derived; the context is dimension tier".into());
    Ok(ctx)
}

fn push_nonzero(out: &mut Vec<(usize, usize, usize, u32)>, x: usize, y: usize, z: usize, n: u32) {
    if n > 0 {
        out.push((x, y, z, n));
    }
}

/// Diagram family of a chain of four 1-morphisms, keyed by the object path it traverses.
pub fn coherence_family(path: &[usize]) -> String {
    let d = digits(path);
    let kind = match d.as_str() {
        "00000" | "11111" => "pentagon",
        "00001" | "01111" | "11110" | "10000" => "module-pentagon",
        "00011" | "00111" | "11100" | "11000" => "middle-associativity",
        "00010" | "00100" | "01000" | "11101" | "11011" | "10111" => "bimodule-functor",
        "01110" | "10001" => "balancing",
        "00110" | "01100" | "11001" | "10011" => "compatibility",
        "00101" | "01011" | "11010" | "10100" => "alpha-beta-bimodule",
        "01101" | "01001" | "10010" | "10110" => "alpha-beta-balanced",
        "01010" => "alpha-pentagon",
        "10101" => "beta-pentagon",
        _ => "unknown",
    };
    format!("{kind}[{d}]")
}

/// `dim Hom(w, z)` for the left-comb word `((x₁x₂)x₃)…` or the right-comb word.
fn comb_dims(sk: &Skeleton, chain: &[usize], right_comb: bool) -> BTreeMap<usize, u32> {
    let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
    if right_comb {
        acc.insert(*chain.last().unwrap(), 1);
        for &x in chain.iter().rev().skip(1) {
            let mut next = BTreeMap::new();
            for (&y, &c) in &acc {
                for &z in sk.prod(x, y) {
                    *next.entry(z).or_insert(0) += c * sk.n(x, y, z);
                }
            }
            acc = next;
        }
    } else {
        acc.insert(chain[0], 1);
        for &x in &chain[1..] {
            let mut next = BTreeMap::new();
            for (&y, &c) in &acc {
                for &z in sk.prod(y, x) {
                    *next.entry(z).or_insert(0) += c * sk.n(y, x, z);
                }
            }
            acc = next;
        }
    }
    acc
}

pub fn verify_context_coherence(ctx: &MoritaContextData, tol: Tolerance) -> CheckReport {
    let sk = &ctx.sk;
    let structure = ctx.is_structure();
    let tier = if structure { Tier::Structure } else { Tier::Dimension };
    let mut report = CheckReport::new("coherence", &ctx.name, tier, tol);
    let chains = sk.chains(4);
    let mut accs = BTreeMap::new();
    if structure {
        sk.pentagon_into(&chains, &|p| coherence_family(p), &mut accs, tol);
    } else {
        for chain in &chains {
            let fam = coherence_family(&sk.path(chain));
            let acc = accs.entry(fam.clone()).or_insert_with(|| FamilyAcc::new(&fam));
            let (l, r) = (comb_dims(sk, chain, false), comb_dims(sk, chain, true));
            let cell = (sk.cells[chain[0]].0, sk.cells[chain[3]].1);
            for z in sk.cell_labels(cell) {
                let (x, y) = (l.get(&z).copied().unwrap_or(0), r.get(&z).copied().unwrap_or(0));
                acc.compare_int(
                    || {
                        let mut idx = sk.names(chain);
                        idx.push(sk.name(z).into());
                        idx
                    },
                    x.into(),
                    y.into(),
                );
            }
        }
    }
    report.extend(accs);
    if !structure {
        report.note("dimension tier: multiplicity shadows of the pentagon families");
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A 1-morphism: a formal direct sum of simples of one cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneMorphism {
    pub cell: CellKind,
    pub summands: Vec<(usize, u32)>,
}

impl OneMorphism {
    pub fn simple(ctx: &MoritaContextData, x: usize) -> Self {
        OneMorphism { cell: ctx.kind(x), summands: vec![(x, 1)] }
    }
}

#[derive(Debug, Clone)]
pub struct DualResult {
    pub dual: OneMorphism,
    /// (Co)evaluation scalars per summand at structure tier.
    pub data: Option<Vec<EvCoev>>,
    pub snake_residual: f64,
}

pub fn dual_1morphism(ctx: &MoritaContextData, x: &OneMorphism, side: Side) -> Result<DualResult> {
    let sk = &ctx.sk;
    let mut summands = Vec::new();
    for &(y, c) in &x.summands {
        if CellKind::of(sk.cells[y]) != x.cell {
            return Err(Error::Schema(format!("`{}` is not in cell {}", sk.name(y), x.cell.letter())));
        }
        summands.push((sk.dual(y)?, c));
    }
    summands.sort();
    let dual_cell = CellKind::of((x.cell.cell().1, x.cell.cell().0));
    let (data, snake_residual) = if ctx.is_structure() {
        let calc = crate::calculus::Calc::new(sk);
        let mut data = Vec::new();
        let mut worst: f64 = 0.0;
        for &(y, _) in &x.summands {
            let w = crate::calculus::Word::leaf(y);
            let r = match side {
                Side::Right => calc.right_snake(&w).max_diff(&calc.id(&w)),
                Side::Left => calc.left_snake(&w).max_diff(&calc.id(&w)),
            };
            worst = worst.max(r);
            data.push(EvCoev { ev: sk.ev_scalar(y), coev: ONE, lev: sk.lev_scalar(y), lcoev: ONE });
        }
        (Some(data), worst)
    } else {
        (None, 0.0)
    };
    Ok(DualResult { dual: OneMorphism { cell: dual_cell, summands }, data, snake_residual })
}

/// Zig-zag residuals of every simple 1-morphism.
pub fn snake_suite(ctx: &MoritaContextData, tol: Tolerance) -> CheckReport {
    let mut report = CheckReport::new("snake", &ctx.name, Tier::Structure, tol);
    if !ctx.is_structure() {
        report.fail("structure", "context is dimension tier");
        return report;
    }
    if let Err(e) = ctx.sk.all_duals() {
        report.fail("structure", e.to_string());
        return report;
    }
    let mut accs = BTreeMap::new();
    for kind in [CellKind::A, CellKind::M, CellKind::N, CellKind::B] {
        structure::snakes_into(&ctx.sk, &ctx.labels_of(kind), &format!("{}:", kind.letter()), &mut accs, tol);
    }
    report.extend(accs);
    report
}

const PAIRS: [(CellKind, CellKind); 8] = [
    (CellKind::A, CellKind::A),
    (CellKind::B, CellKind::B),
    (CellKind::A, CellKind::M),
    (CellKind::M, CellKind::B),
    (CellKind::B, CellKind::N),
    (CellKind::N, CellKind::A),
    (CellKind::M, CellKind::N),
    (CellKind::N, CellKind::M),
];

const ROMAN: [&str; 8] = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii"];

fn pair_name(p: (CellKind, CellKind)) -> String {
    format!("{}{}", p.0.letter(), p.1.letter())
}

/// The 24 label-level identity families: duals of products, adjunction dimensions and
/// internal (co)Homs against products.
pub fn duality_dim_suite(ctx: &MoritaContextData) -> CheckReport {
    let sk = &ctx.sk;
    let mut report = CheckReport::new("duality", &ctx.name, Tier::Dimension, Tolerance::default());
    if let Err(e) = sk.all_duals() {
        report.fail("duals", e.to_string());
        return report;
    }
    let s = |x: usize| sk.star(x);
    let n = |x: usize, y: usize, z: usize| i64::from(sk.n(x, y, z));
    let of = |k: CellKind| ctx.labels_of(k);
    use CellKind::*;

    for (x_kind, y_kind) in [(A, M), (M, B), (B, N), (N, A), (M, N), (N, M)] {
        let mut acc = FamilyAcc::new(&format!("dual-of-product[{}{}]", x_kind.letter(), y_kind.letter()));
        for x in of(x_kind) {
            for y in of(y_kind) {
                let cell = (sk.cells[x].0, sk.cells[y].1);
                for z in sk.cell_labels(cell) {
                    acc.compare_int(|| sk.names(&[x, y, z]), n(x, y, z), n(s(y), s(x), s(z)));
                }
            }
        }
        report.push(acc.finish());
    }
    for kind in [M, N] {
        let mut acc = FamilyAcc::new(&format!("double-dual-label[{}]", kind.letter()));
        for x in of(kind) {
            acc.check(|| vec![sk.name(x).into()], s(s(x)) == x);
        }
        report.push(acc.finish());
    }

    for (x_kind, y_kind) in [(A, M), (M, B), (M, N), (N, M)] {
        let mut right = FamilyAcc::new(&format!("adjunction-right[{}{}]", x_kind.letter(), y_kind.letter()));
        let mut left = FamilyAcc::new(&format!("adjunction-left[{}{}]", x_kind.letter(), y_kind.letter()));
        for x in of(x_kind) {
            for y in of(y_kind) {
                let cell = (sk.cells[x].0, sk.cells[y].1);
                for z in sk.cell_labels(cell) {
                    right.compare_int(|| sk.names(&[x, y, z]), n(x, y, z), n(z, s(y), x));
                    left.compare_int(|| sk.names(&[x, y, z]), n(x, y, z), n(s(x), z, y));
                }
            }
        }
        report.push(right.finish());
        report.push(left.finish());
    }

    // Internal Hom and coHom of each module structure against the products.
    let left_module = |acting: CellKind, module: CellKind, tag: &str, report: &mut CheckReport| {
        let mut ihom = FamilyAcc::new(&format!("internal-hom[{tag}]"));
        let mut cohom = FamilyAcc::new(&format!("internal-cohom[{tag}]"));
        for x in of(module) {
            for y in of(module) {
                for a in of(acting) {
                    ihom.compare_int(|| sk.names(&[x, y, a]), n(a, x, y), n(y, s(x), a));
                    cohom.compare_int(|| sk.names(&[x, y, a]), n(s(a), y, x), n(y, s(x), a));
                }
            }
        }
        report.push(ihom.finish());
        report.push(cohom.finish());
    };
    left_module(A, M, "A|M", &mut report);
    left_module(B, N, "B|N", &mut report);
    let right_module = |acting: CellKind, module: CellKind, tag: &str, report: &mut CheckReport| {
        let mut ihom = FamilyAcc::new(&format!("internal-hom[{tag}]"));
        let mut cohom = FamilyAcc::new(&format!("internal-cohom[{tag}]"));
        for x in of(module) {
            for y in of(module) {
                for b in of(acting) {
                    ihom.compare_int(|| sk.names(&[x, y, b]), n(x, b, y), n(s(x), y, b));
                    cohom.compare_int(|| sk.names(&[x, y, b]), n(y, s(b), x), n(s(x), y, b));
                }
            }
        }
        report.push(ihom.finish());
        report.push(cohom.finish());
    };
    right_module(B, M, "M|B", &mut report);
    right_module(A, N, "N|A", &mut report);
    report
}

/// Serre object map of a right module cell from `Hom(m⊶b, n) ≅ Hom(n, S(m)⊶b^∨)^*`.
fn right_hom_duality_map(sk: &Skeleton, acting: &[usize], module: &[usize]) -> std::result::Result<BTreeMap<usize, usize>, String> {
    let mut out = BTreeMap::new();
    for &x in module {
        let c: Vec<usize> = module
            .iter()
            .copied()
            .filter(|&k| acting.iter().all(|&b| module.iter().all(|&y| sk.n(x, b, y) == sk.n(y, sk.star(b), k))))
            .collect();
        match c.as_slice() {
            [k] => {
                out.insert(x, *k);
            }
            _ => return Err(format!("no unique right Serre image for `{}`", sk.name(x))),
        }
    }
    Ok(out)
}

/// Double duals against Serre data: label maps on `M` and `N` for both module structures,
/// and at structure tier the twist coherence of the double dual on both cells.
pub fn double_dual_suite(ctx: &MoritaContextData, tol: Tolerance) -> CheckReport {
    let sk = &ctx.sk;
    let structure = ctx.is_structure();
    let tier = if structure { Tier::Structure } else { Tier::Dimension };
    let mut report = CheckReport::new("double-dual", &ctx.name, tier, tol);
    if let Err(e) = sk.all_duals() {
        report.fail("duals", e.to_string());
        return report;
    }
    use CellKind::*;
    let cases = [(A, M, false), (B, N, false), (B, M, true), (A, N, true)];
    for (acting, module, right) in cases {
        let (al, ml) = (ctx.labels_of(acting), ctx.labels_of(module));
        let fam = format!("double-dual=serre[{}{}]", if right { "" } else { acting_str(acting) }, module_tag(module, acting, right));
        let mut acc = FamilyAcc::new(&fam);
        let map = if right { right_hom_duality_map(sk, &al, &ml) } else { modulecat::hom_duality_map(sk, &al, &ml) };
        match map {
            Ok(map) => {
                for (&x, &y) in &map {
                    let dd = sk.star(sk.star(x));
                    acc.check(|| sk.names(&[x, dd, y]), dd == y);
                }
                report.push(acc.finish());
            }
            Err(e) => report.fail(&fam, e),
        }
    }
    if structure {
        let all = ctx.all();
        let delta = structure::delta_table(sk, &all);
        for (acting, module) in [(A, M), (B, N)] {
            let (al, ml) = (ctx.labels_of(acting), ctx.labels_of(module));
            let base: DeltaTable = delta.iter().filter(|(k, _)| k.iter().all(|x| al.contains(x))).map(|(k, v)| (*k, *v)).collect();
            let twist: DeltaTable = delta
                .iter()
                .filter(|(k, _)| al.contains(&k[0]) && ml.contains(&k[1]))
                .map(|(k, v)| (*k, *v))
                .collect();
            let mut acc = FamilyAcc::new(&format!("twisted-coherence[{}]", module.letter()));
            modulecat::twisted_coherence_into(&mut acc, sk, &al, &ml, &base, &twist, tol);
            report.push(acc.finish());
            let mut unit = FamilyAcc::new(&format!("twist-unit[{}]", module.letter()));
            let u = sk.unit(sk.cells[ml[0]].0);
            for &x in &ml {
                unit.compare(|| sk.names(&[u, x]), twist[&[u, x, x]], ONE, tol);
            }
            report.push(unit.finish());
        }
        match modulecat::serre_data(&ctx.m, tol) {
            Ok(serre) => {
                let mut acc = FamilyAcc::new("twist=serre[M]");
                for (k, &v) in &serre.twist {
                    acc.compare(|| sk.names(k), delta[k], v, tol);
                }
                report.push(acc.finish());
            }
            Err(e) => report.fail("twist=serre[M]", e.to_string()),
        }
    }
    report
}

fn acting_str(k: CellKind) -> &'static str {
    match k {
        CellKind::A => "A|",
        _ => "B|",
    }
}

fn module_tag(module: CellKind, acting: CellKind, right: bool) -> String {
    if right {
        format!("{}|{}", module.letter(), acting.letter())
    } else {
        module.letter().to_string()
    }
}

/// Pivotal data on every label of the context.
#[derive(Debug, Clone)]
pub struct ContextPivotal {
    pub p: PivotalAssignment,
    pub pt: PivotalAssignment,
    pub q: PivotalAssignment,
    pub ph: PivotalAssignment,
}

#[derive(Debug, Clone)]
pub struct Transport {
    pub q: PivotalAssignment,
    pub ph: PivotalAssignment,
    pub report: CheckReport,
}

fn structure_delta(ctx: &MoritaContextData) -> Result<DeltaTable> {
    if !ctx.is_structure() {
        return Err(Error::MissingStructure(format!("context `{}` is dimension tier", ctx.name)));
    }
    ctx.sk.all_duals()?;
    Ok(structure::delta_table(&ctx.sk, &ctx.all()))
}

/// Transports a module pivotal structure on `M` to `q` on `B` and `p̂` on `N`.
pub fn pivotal_transport(ctx: &MoritaContextData, p: &PivotalAssignment, pt: &PivotalAssignment, tol: Tolerance) -> Result<Transport> {
    use CellKind::*;
    let delta = structure_delta(ctx)?;
    let sk = &ctx.sk;
    let (al, ml, bl, nl) = (ctx.labels_of(A), ctx.labels_of(M), ctx.labels_of(B), ctx.labels_of(N));
    let pv = |a: usize| p.values[al.iter().position(|&x| x == a).unwrap()];
    let ptv = |m: usize| pt.values[ml.iter().position(|&x| x == m).unwrap()];
    let mut report = CheckReport::new("pivotal-transport", &ctx.name, Tier::Structure, tol);
    let mut wd_q = FamilyAcc::new("q-well-defined");
    let mut q = Vec::new();
    for &b in &bl {
        let mut val = None;
        for &x in &ml {
            for &k in sk.prod(x, b) {
                let v = delta[&[x, b, k]] * ptv(k) / ptv(x);
                match val {
                    None => val = Some(v),
                    Some(v0) => wd_q.compare(|| sk.names(&[x, b, k]), v, v0, tol),
                }
            }
        }
        q.push(val.ok_or_else(|| Error::MissingStructure(format!("`{}` acts by zero", sk.name(b))))?);
    }
    report.push(wd_q.finish());
    let mut wd_h = FamilyAcc::new("phat-well-defined");
    let mut ph = Vec::new();
    for &h in &nl {
        let mut val = None;
        for &x in &ml {
            for &a in sk.prod(x, h) {
                let v = delta[&[x, h, a]] * pv(a) / ptv(x);
                match val {
                    None => val = Some(v),
                    Some(v0) => wd_h.compare(|| sk.names(&[x, h, a]), v, v0, tol),
                }
            }
        }
        ph.push(val.ok_or_else(|| Error::MissingStructure(format!("`{}` pairs to zero", sk.name(h))))?);
    }
    report.push(wd_h.finish());
    let q = PivotalAssignment::new(sk.names(&bl), q);
    let ph = PivotalAssignment::new(sk.names(&nl), ph);
    let mut mono = FamilyAcc::new("q-monoidality");
    let bdelta: DeltaTable = delta.iter().filter(|(k, _)| k.iter().all(|x| bl.contains(x))).map(|(k, v)| (*k, *v)).collect();
    let qv = |b: usize| q.values[bl.iter().position(|&x| x == b).unwrap()];
    structure::monoidality_into(&mut mono, sk, &bdelta, 1, &qv, tol);
    report.push(mono.finish());
    let mut module = FamilyAcc::new("phat-module");
    let phv = |h: usize| ph.values[nl.iter().position(|&x| x == h).unwrap()];
    for (&[b, h, k], &d) in delta.iter().filter(|(k, _)| bl.contains(&k[0]) && nl.contains(&k[1])) {
        module.compare(|| sk.names(&[b, h, k]), qv(b) * phv(h), d * phv(k), tol);
    }
    report.push(module.finish());
    Ok(Transport { q, ph, report })
}

/// Assembles `(p, p̃, q, p̂)` into one value per context label.
pub fn context_values(ctx: &MoritaContextData, data: &ContextPivotal) -> Vec<Scalar> {
    let mut out = vec![ONE; ctx.sk.len()];
    for (kind, asg) in [(CellKind::A, &data.p), (CellKind::M, &data.pt), (CellKind::B, &data.q), (CellKind::N, &data.ph)] {
        for (x, v) in ctx.labels_of(kind).into_iter().zip(&asg.values) {
            out[x] = *v;
        }
    }
    out
}

/// The eight condition families `P_s P_t = δ P_u`, grouped by the cells of `(s, t)`.
pub fn pivotal_morita_suite(ctx: &MoritaContextData, data: &ContextPivotal, tol: Tolerance) -> CheckReport {
    let mut report = CheckReport::new("pivotal-morita", &ctx.name, Tier::Structure, tol);
    let delta = match structure_delta(ctx) {
        Ok(d) => d,
        Err(e) => {
            report.fail("structure", e.to_string());
            return report;
        }
    };
    let values = context_values(ctx, data);
    for (i, pair) in PAIRS.iter().enumerate() {
        let mut acc = FamilyAcc::new(&format!("({})[{}]", ROMAN[i], pair_name(*pair)));
        let part: DeltaTable = delta
            .iter()
            .filter(|(k, _)| ctx.kind(k[0]) == pair.0 && ctx.kind(k[1]) == pair.1)
            .map(|(k, v)| (*k, *v))
            .collect();
        structure::monoidality_into(&mut acc, &ctx.sk, &part, 1, &|x| values[x], tol);
        report.push(acc.finish());
    }
    report
}

/// Canonical Radford components on every label of the context.
pub fn context_radford(ctx: &MoritaContextData) -> Result<Vec<Scalar>> {
    structure_delta(ctx)?;
    let r = structure::radford_components(&ctx.sk, &ctx.all());
    Ok(ctx.all().into_iter().map(|x| r[&x]).collect())
}

/// Pseudo-naturality squares `R_s R_t = δ² R_u` for every composable pair of simples, plus
/// agreement of the components with the base and module Radford data.
pub fn radford_pseudo_suite(ctx: &MoritaContextData, r: &[Scalar], tol: Tolerance) -> CheckReport {
    let mut report = CheckReport::new("radford", &ctx.name, Tier::Structure, tol);
    let delta = match structure_delta(ctx) {
        Ok(d) => d,
        Err(e) => {
            report.fail("structure", e.to_string());
            return report;
        }
    };
    for pair in PAIRS {
        let mut acc = FamilyAcc::new(&format!("pseudo-naturality[{}]", pair_name(pair)));
        let part: DeltaTable = delta
            .iter()
            .filter(|(k, _)| ctx.kind(k[0]) == pair.0 && ctx.kind(k[1]) == pair.1)
            .map(|(k, v)| (*k, *v))
            .collect();
        structure::monoidality_into(&mut acc, &ctx.sk, &part, 2, &|x| r[x], tol);
        report.push(acc.finish());
    }
    let mut base = FamilyAcc::new("components[A]");
    match fusion::double_dual_structure(&ctx.a, tol) {
        Ok(dd) => {
            for (x, a) in ctx.labels_of(CellKind::A).into_iter().enumerate() {
                base.compare(|| vec![ctx.sk.name(a).into()], r[a], dd.radford.r_components[x].1, tol);
            }
            report.push(base.finish());
        }
        Err(e) => report.fail("components[A]", e.to_string()),
    }
    let mut module = FamilyAcc::new("components[M]");
    match modulecat::radford_module_components(&ctx.m, tol) {
        Ok((rm, _)) => {
            for (x, v) in rm {
                module.compare(|| vec![ctx.sk.name(x).into()], r[x], v, tol);
            }
            report.push(module.finish());
        }
        Err(e) => report.fail("components[M]", e.to_string()),
    }
    report
}

/// Grothendieck-level consequences of strongness.
pub fn strong_context_suite(ctx: &MoritaContextData, tol: Tolerance) -> CheckReport {
    use CellKind::*;
    let sk = &ctx.sk;
    let mut report = CheckReport::new("strong", &ctx.name, Tier::Dimension, tol);
    let (al, ml, bl, nl) = (ctx.labels_of(A), ctx.labels_of(M), ctx.labels_of(B), ctx.labels_of(N));

    let mut rank = FamilyAcc::new("rank[N~M]");
    rank.compare_int(|| vec!["|N|".into(), "|M|".into()], nl.len() as i64, ml.len() as i64);
    let mut seen = Vec::new();
    for &x in &ml {
        let d = sk.dual(x).ok().filter(|d| nl.contains(d));
        rank.check(|| vec![sk.name(x).into()], d.is_some_and(|d| !seen.contains(&d)));
        if let Some(d) = d {
            seen.push(d);
        }
    }
    report.push(rank.finish());

    let mut fp = FamilyAcc::new("fp-dim[A=B]");
    let (da, db) = (ctx.a.fp_dim(), ctx.b.fp_dim());
    fp.compare(|| vec![ctx.a.name.clone(), ctx.b.name.clone()], da.into(), db.into(), Tolerance::new(1e-6, 1e-6));
    report.push(fp.finish());

    let onto = |name: &str, targets: &[usize], left: &[usize], right: &[usize], report: &mut CheckReport| {
        let mut acc = FamilyAcc::new(name);
        for &z in targets {
            let hit = left.iter().any(|&x| right.iter().any(|&y| sk.n(x, y, z) > 0));
            acc.check(|| vec![sk.name(z).into()], hit);
        }
        report.push(acc.finish());
    };
    onto("surjective[MN→A]", &al, &ml, &nl, &mut report);
    onto("surjective[NM→B]", &bl, &nl, &ml, &mut report);
    onto("surjective[AM→M]", &ml, &al, &ml, &mut report);
    onto("surjective[MB→M]", &ml, &ml, &bl, &mut report);

    // Action matrices of B on K(M) and A on K(M) respect the fusion rules.
    let homo = |name: &str, acting: &[usize], right: bool, report: &mut CheckReport| {
        let mut acc = FamilyAcc::new(name);
        let act = |b: usize, x: usize, y: usize| if right { sk.n(x, b, y) } else { sk.n(b, x, y) };
        for &b in acting {
            for &c in acting {
                for &x in &ml {
                    for &y in &ml {
                        let lhs: u32 = if right {
                            ml.iter().map(|&w| act(b, x, w) * act(c, w, y)).sum()
                        } else {
                            ml.iter().map(|&w| act(c, x, w) * act(b, w, y)).sum()
                        };
                        let rhs: u32 = acting.iter().map(|&d| sk.n(b, c, d) * act(d, x, y)).sum();
                        acc.compare_int(|| sk.names(&[b, c, x, y]), lhs.into(), rhs.into());
                    }
                }
            }
        }
        report.push(acc.finish());
    };
    homo("action-homomorphism[A]", &al, false, &mut report);
    homo("action-homomorphism[B]", &bl, true, &mut report);

    let mut accs = BTreeMap::new();
    let chains: Vec<Vec<usize>> = sk
        .chains(3)
        .into_iter()
        .filter(|c| {
            let k: Vec<CellKind> = c.iter().map(|&x| ctx.kind(x)).collect();
            k == [M, N, M] || k == [N, M, N]
        })
        .collect();
    sk.associativity_into(&chains, &|p| format!("square[{}]", digits(p)), &mut accs);
    report.extend(accs);
    report
}

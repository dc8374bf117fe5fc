//! Closed-form constructors for the bundled instances.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fusion::{self, FusionData, PivotalAssignment};
use crate::graded::{Group, GradingData};
use crate::modulecat::{ModuleData, RightAction};
use crate::morita::MoritaContextData;
use crate::numerics::{real, Scalar, Tolerance, ONE};
use crate::schema::{Instance, Seed};
use crate::skeleton::{FKey, Skeleton};

/// Pointed category of a group with a 3-cocycle `ω`, `F^{g,h,k}_{ghk}[gh, hk] = ω(g,h,k)`.
pub fn make_pointed(name: &str, group: &Group, omega: &dyn Fn(usize, usize, usize) -> Scalar) -> Result<FusionData> {
    let n = group.elements.len();
    let labels: Vec<String> =
        (0..n).map(|x| if x == group.identity { "1".to_string() } else { group.elements[x].clone() }).collect();
    let mut fusion = Vec::new();
    let mut sym = BTreeMap::new();
    for g in 0..n {
        for h in 0..n {
            fusion.push((g, h, group.mul(g, h), 1));
            for k in 0..n {
                let gh = group.mul(g, h);
                let hk = group.mul(h, k);
                sym.insert([g, h, k, group.mul(gh, k), gh, hk], omega(g, h, k));
            }
        }
    }
    let f = FusionData::new(name, labels, group.identity, &fusion, Some(sym))?;
    let report = fusion::verify_pentagon(&f, Tolerance::default());
    if !report.pass {
        let idx = report.argmax().map(|(_, i)| i.join(",")).unwrap_or_default();
        return Err(Error::NotACocycle(format!("{name}: pentagon fails at ({idx})")));
    }
    Ok(f)
}

pub fn z2_sign_cocycle(g: usize, h: usize, k: usize) -> Scalar {
    if g == 1 && h == 1 && k == 1 {
        -ONE
    } else {
        ONE
    }
}

pub fn make_vec() -> FusionData {
    make_pointed("vec", &Group::cyclic(1), &|_, _, _| ONE).expect("trivial group")
}

pub fn make_vec_z2(nontrivial: bool) -> FusionData {
    let name = if nontrivial { "vec_z2_omega" } else { "vec_z2" };
    let omega = move |g, h, k| if nontrivial { z2_sign_cocycle(g, h, k) } else { ONE };
    make_pointed(name, &Group::cyclic(2), &omega).expect("valid Z/2 cocycle")
}

pub fn make_vec_z3() -> FusionData {
    make_pointed("vec_z3", &Group::cyclic(3), &|_, _, _| ONE).expect("trivial cocycle")
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Fibonacci category, `τ⊗τ = 1⊕τ`, in the real symmetric gauge.
pub fn make_fibonacci() -> FusionData {
    let phi = golden_ratio();
    let labels = vec!["1".to_string(), "tau".to_string()];
    let fusion = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)];
    let mut sym = unit_leg_symbols(&labels, &fusion, 0);
    sym.insert([1, 1, 1, 0, 1, 1], ONE);
    sym.insert([1, 1, 1, 1, 0, 0], real(1.0 / phi));
    sym.insert([1, 1, 1, 1, 0, 1], real(phi.powf(-0.5)));
    sym.insert([1, 1, 1, 1, 1, 0], real(phi.powf(-0.5)));
    sym.insert([1, 1, 1, 1, 1, 1], real(-1.0 / phi));
    FusionData::new("fib", labels, 0, &fusion, Some(sym)).expect("fibonacci data")
}

/// Explicit unit entries `= 1` for every admissible key with a unit leg.
fn unit_leg_symbols(labels: &[String], fusion: &[(usize, usize, usize, u32)], unit: usize) -> BTreeMap<FKey, Scalar> {
    let sk = Skeleton::new(labels.to_vec(), vec![(0, 0); labels.len()], vec![Some(unit)], fusion, None).expect("fusion table");
    let mut sym = BTreeMap::new();
    let n = sk.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != unit && b != unit && c != unit {
                    continue;
                }
                for &e in sk.prod(a, b) {
                    for &d in sk.prod(e, c) {
                        for &f in sk.prod(b, c) {
                            if sk.n(a, f, d) > 0 {
                                sym.insert([a, b, c, d, e, f], ONE);
                            }
                        }
                    }
                }
            }
        }
    }
    sym
}

/// Label name of a copy of `x` in cell `kind` of a regular context.
fn regular_name(kind: char, x: &str) -> String {
    match kind {
        'A' => x.to_string(),
        _ => format!("{kind}:{x}"),
    }
}

/// The regular context of `A`: every cell is a copy of `A` and every F-entry is the
/// corresponding entry of `A`.
pub fn make_regular_context(f: &FusionData) -> Result<MoritaContextData> {
    let n = f.len();
    let names = f.labels();
    let cell_of = |k: usize| [(0, 0), (0, 1), (1, 1), (1, 0)][k];
    let idx = |k: usize, x: usize| k * n + x;
    let kind_of = |cell: (usize, usize)| (0..4).find(|&k| cell_of(k) == cell).unwrap();
    let entries = f.fusion_entries();

    let b_names: Vec<String> = names.iter().map(|x| regular_name('B', x)).collect();
    let b_fusion = FusionData::new(&format!("{}_B", f.name), b_names, f.unit(), &entries, f.sk.symbols().cloned())?;
    let action: Vec<_> = entries.clone();
    let m_names: Vec<String> = names.iter().map(|x| regular_name('M', x)).collect();
    let mut msym = BTreeMap::new();
    let mut fus = Vec::new();
    let mut sym = BTreeMap::new();
    let src = f.sk.symbols().cloned().unwrap_or_default();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let (ka, kb) = (kind_of((i, j)), kind_of((j, k)));
                let kc = kind_of((i, k));
                for &(a, b, c, m) in &entries {
                    fus.push((idx(ka, a), idx(kb, b), idx(kc, c), m));
                }
                for l in 0..2 {
                    let kcc = kind_of((k, l));
                    let kd = kind_of((i, l));
                    let ke = kind_of((i, k));
                    let kf = kind_of((j, l));
                    for (key, v) in &src {
                        let nk = [idx(ka, key[0]), idx(kb, key[1]), idx(kcc, key[2]), idx(kd, key[3]), idx(ke, key[4]), idx(kf, key[5])];
                        let cells = [ka, kb, kcc];
                        if cells.contains(&3) {
                            sym.insert(nk, *v);
                        } else if cells.contains(&1) {
                            msym.insert(nk, *v);
                        }
                    }
                }
            }
        }
    }
    let mleft: Vec<_> = action.iter().map(|&(a, m, k, c)| (a, m, k, c)).collect();
    let mright: Vec<_> = action.iter().map(|&(m, b, k, c)| (m, b, k, c)).collect();
    let module = ModuleData::new(
        &format!("{}_regular", f.name),
        f.clone(),
        m_names,
        &mleft,
        Some(RightAction { base: b_fusion, action: mright }),
        f.sk.has_symbols().then_some(msym),
    )?;
    let mixed: Vec<_> = fus.into_iter().filter(|&(x, y, z, _)| [x, y, z].iter().any(|&w| w >= 3 * n)).collect();
    let n_names: Vec<String> = names.iter().map(|x| regular_name('N', x)).collect();
    MoritaContextData::new(&format!("{}_regular_context", f.name), module, n_names, &mixed, f.sk.has_symbols().then_some(sym))
}

/// The regular module of `A`, carrying its regular context as ambient structure.
pub fn make_regular_module(f: &FusionData) -> Result<ModuleData> {
    Ok(make_regular_context(f)?.m)
}

/// The pointed context of `Z/2`: `A = Vec_{Z/2}`, `M = Vec`, `B = Vec_{Z/2}` as the dual
/// category, `N = Vec`, with structure scalars of the `Z/2`-graded extension of `Vec_{Z/2}`
/// by `Vec` whose odd-odd associator is the normalized Hadamard block.
pub fn make_pointed_context() -> Result<MoritaContextData> {
    let a = make_vec_z2(false);
    let b = FusionData::new("rep_z2", vec!["1'".into(), "pi".into()], 0, &a.fusion_entries(), a.sk.symbols().cloned())?;
    // Layout: 1, g, m, 1', pi, m*.
    let (one, g, m, one_b, pi, ms) = (0, 1, 2, 3, 4, 5);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let is_a = |x: usize| x == one || x == g;
    let is_b = |x: usize| x == one_b || x == pi;
    let cell = |x: usize| match x {
        0 | 1 => (0, 0),
        2 => (0, 1),
        3 | 4 => (1, 1),
        _ => (1, 0),
    };
    // Products from the Ising rules with ψ split into g (even on 0) and pi (even on 1).
    let prod = |x: usize, y: usize| -> Vec<usize> {
        match (x, y) {
            _ if is_a(x) && is_a(y) => vec![if x == y { one } else { g }],
            _ if is_b(x) && is_b(y) => vec![if x == y { one_b } else { pi }],
            (_, 2) if is_a(x) => vec![m],
            (2, _) if is_b(y) => vec![m],
            (5, _) if is_a(y) => vec![ms],
            (_, 5) if is_b(x) => vec![ms],
            (2, 5) => vec![one, g],
            (5, 2) => vec![one_b, pi],
            _ => vec![],
        }
    };
    let odd = |x: usize| x == m || x == ms;
    let psi = |x: usize| x == g || x == pi;
    let mut fusion = Vec::new();
    for x in 0..6 {
        for y in 0..6 {
            if cell(x).1 != cell(y).0 {
                continue;
            }
            for z in prod(x, y) {
                fusion.push((x, y, z, 1));
            }
        }
    }
    let mut sym = BTreeMap::new();
    for x in 0..6 {
        for y in 0..6 {
            for z in 0..6 {
                if cell(x).1 != cell(y).0 || cell(y).1 != cell(z).0 {
                    continue;
                }
                for e in prod(x, y) {
                    for d in prod(e, z) {
                        for f in prod(y, z) {
                            if !prod(x, f).contains(&d) {
                                continue;
                            }
                            let v = if odd(x) && odd(y) && odd(z) {
                                let sign = if psi(e) && psi(f) { -1.0 } else { 1.0 };
                                real(sign * s)
                            } else if psi(x) && odd(y) && psi(z) {
                                -ONE
                            } else if odd(x) && psi(y) && odd(z) && psi(d) {
                                -ONE
                            } else {
                                ONE
                            };
                            sym.insert([x, y, z, d, e, f], v);
                        }
                    }
                }
            }
        }
    }
    let local = |x: usize| x - 2;
    let left: Vec<_> = fusion.iter().filter(|t| is_a(t.0) && t.1 == m).map(|&(x, y, z, c)| (x, local(y), local(z), c)).collect();
    let right: Vec<_> = fusion.iter().filter(|t| t.0 == m && is_b(t.1)).map(|&(x, y, z, c)| (local(x), y - 3, local(z), c)).collect();
    let touches = |k: &FKey, x: usize| k[..3].contains(&x);
    let msym: BTreeMap<FKey, Scalar> =
        sym.iter().filter(|(k, _)| touches(k, m) && !touches(k, ms)).map(|(k, v)| (*k, *v)).collect();
    let nsym: BTreeMap<FKey, Scalar> = sym.iter().filter(|(k, _)| touches(k, ms)).map(|(k, v)| (*k, *v)).collect();
    let module = ModuleData::new("vec_over_z2", a, vec!["m".into()], &left, Some(RightAction { base: b, action: right }), Some(msym))?;
    let mixed: Vec<_> = fusion.iter().copied().filter(|t| [t.0, t.1, t.2].contains(&ms)).collect();
    MoritaContextData::new("pointed_context", module, vec!["m*".into()], &mixed, Some(nsym))
}

/// `M = Vec` over `Vec_{Z/2}` with its ambient pointed context.
pub fn make_vec_module_z2() -> Result<ModuleData> {
    let ctx = make_pointed_context()?;
    let mut m = ctx.m;
    m.ambient = Some(Arc::clone(&ctx.sk));
    Ok(m)
}

/// Grading of every label of a regular context of a cyclic group by its group degree.
pub fn regular_grading(ctx: &MoritaContextData, base: &FusionData, group: &Group) -> GradingData {
    let mut deg = BTreeMap::new();
    for x in 0..ctx.sk.len() {
        let name = ctx.sk.name(x);
        let bare = name.split_once(':').map_or(name, |(_, b)| b);
        let d = base.sk.label(bare).expect("regular copy of a base label");
        deg.insert(name.to_string(), d);
    }
    GradingData { name: format!("{}_graded", ctx.name), target: ctx.name.clone(), group: group.clone(), deg }
}

/// `Z/2`-grading of the pointed context: even cells in degree `e`, `m` and `m*` in degree `g`.
pub fn pointed_context_grading(ctx: &MoritaContextData) -> GradingData {
    let deg = ctx
        .sk
        .labels
        .iter()
        .map(|l| (l.clone(), usize::from(l == "m" || l == "m*")))
        .collect();
    GradingData { name: "pointed_context_graded".into(), target: ctx.name.clone(), group: Group::cyclic(2), deg }
}

/// The invalid `Z/2`-grading of Fibonacci with `τ` odd.
pub fn fibonacci_bad_grading() -> GradingData {
    let deg = [("1".to_string(), 0), ("tau".to_string(), 1)].into_iter().collect();
    GradingData { name: "fib_z2_bad".into(), target: "fib".into(), group: Group::cyclic(2), deg }
}

fn seed(name: &str, target: &str, base: Option<&str>, labels: &[&str], values: &[f64]) -> Seed {
    Seed {
        name: name.into(),
        target: target.into(),
        base: base.map(String::from),
        values: PivotalAssignment::new(labels.iter().map(|l| l.to_string()).collect(), values.iter().map(|&v| real(v)).collect()),
    }
}

fn trivial_grading(name: &str, target: &str, sk: &Skeleton) -> GradingData {
    GradingData {
        name: name.into(),
        target: target.into(),
        group: Group::cyclic(1),
        deg: sk.labels.iter().map(|l| (l.clone(), 0)).collect(),
    }
}

/// Bundle of a fusion category with its regular module and context.
fn regular_instance(name: &str, f: FusionData, group: Option<Group>) -> Result<Instance> {
    let ctx = make_regular_context(&f)?;
    let mut gradings = Vec::new();
    match group {
        Some(g) => {
            gradings.push(GradingData {
                name: format!("{}_graded", f.name),
                target: f.name.clone(),
                group: g.clone(),
                deg: f.labels().iter().enumerate().map(|(i, l)| (l.clone(), i)).collect(),
            });
            gradings.push(regular_grading(&ctx, &f, &g));
        }
        None => gradings.push(trivial_grading(&format!("{}_trivial", ctx.name), &ctx.name, &ctx.sk)),
    }
    Ok(Instance {
        name: name.into(),
        fusion: vec![f, ctx.b.clone()],
        modules: vec![ctx.m.clone()],
        contexts: vec![ctx],
        gradings,
        seeds: Vec::new(),
        warnings: Vec::new(),
    })
}

/// The bundled corpus as `(relative path, instance)`; invalid examples live under `invalid/`.
pub fn corpus() -> Result<Vec<(String, Instance)>> {
    let mut out = vec![
        ("vec.json".to_string(), regular_instance("vec", make_vec(), None)?),
        ("vec_z2_trivial.json".to_string(), regular_instance("vec_z2_trivial", make_vec_z2(false), Some(Group::cyclic(2)))?),
        ("vec_z2_omega.json".to_string(), regular_instance("vec_z2_omega", make_vec_z2(true), Some(Group::cyclic(2)))?),
        ("vec_z3.json".to_string(), regular_instance("vec_z3", make_vec_z3(), Some(Group::cyclic(3)))?),
        ("fib.json".to_string(), regular_instance("fib", make_fibonacci(), None)?),
    ];
    let ctx = make_pointed_context()?;
    let grading = pointed_context_grading(&ctx);
    out.push((
        "pointed_context.json".into(),
        Instance {
            name: "pointed_context".into(),
            fusion: vec![ctx.a.clone(), ctx.b.clone()],
            modules: vec![ctx.m.clone()],
            gradings: vec![grading],
            seeds: vec![
                seed("p_vec_z2", "vec_z2", None, &["1", "g"], &[1.0, 1.0]),
                seed("pt_vec_over_z2", "vec_over_z2", Some("p_vec_z2"), &["m"], &[1.0]),
            ],
            contexts: vec![ctx],
            warnings: Vec::new(),
        },
    ));
    let fib = make_fibonacci();
    let mut sym = fib.sk.symbols().cloned().unwrap_or_default();
    *sym.get_mut(&[1, 1, 1, 1, 1, 1]).expect("fibonacci entry") += real(0.1);
    let broken = FusionData::new("fib_broken", fib.labels().to_vec(), fib.unit(), &fib.fusion_entries(), Some(sym))?;
    out.push((
        "invalid/broken_pentagon.json".into(),
        Instance { name: "broken_pentagon".into(), fusion: vec![broken], ..empty_instance() },
    ));
    out.push((
        "invalid/fib_z2_bad_grading.json".into(),
        Instance { name: "fib_z2_bad_grading".into(), fusion: vec![fib], gradings: vec![fibonacci_bad_grading()], ..empty_instance() },
    ));
    Ok(out)
}

fn empty_instance() -> Instance {
    Instance {
        name: String::new(),
        fusion: Vec::new(),
        modules: Vec::new(),
        contexts: Vec::new(),
        gradings: Vec::new(),
        seeds: Vec::new(),
        warnings: Vec::new(),
    }
}

/// Writes the corpus below `dir`, returning the written paths.
pub fn write_corpus(dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>> {
    let mut written = Vec::new();
    for (rel, inst) in corpus()? {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        crate::schema::save(&inst, &path)?;
        written.push(path);
    }
    Ok(written)
}

//! The instance file format: blocks for fusion categories, modules, contexts, gradings and
//! pivotal seeds, with name resolution, strict and lenient ingestion, and a stable writer.
//!
//! Labels are strings everywhere. Symbol entries are arrays `[a, b, c, d, e, f, re, im]`
//! keyed by label names in the convention `((ab)_e c)_d = Σ_f F[e,f] (a(bc)_f)_d`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fusion::{self, FusionData, PivotalAssignment};
use crate::graded::{Group, GradingData};
use crate::modulecat::{ModuleData, RightAction};
use crate::morita::{self, MoritaContextData};
use crate::numerics::Scalar;
use crate::skeleton::{FKey, Skeleton};

pub const SCHEMA_VERSION: &str = "1.0";

/// `[a, b, c, d, e, f, re, im]`.
pub type SymbolEntry = (String, String, String, String, String, String, f64, f64);
/// `[x, y, z, multiplicity]`.
pub type FusionEntry = (String, String, String, u32);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: String,
    pub name: String,
    pub gauge: String,
    pub fusion: Vec<FusionBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<ContextBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gradings: Vec<GradingBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pivotal: Vec<PivotalSeed>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionBlock {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: String,
    pub fusion: Vec<FusionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<SymbolEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    pub name: String,
    /// Name of the acting fusion block.
    pub base: String,
    pub labels: Vec<String>,
    /// `[a, m, k, n]`.
    pub action: Vec<FusionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<RightBlock>,
    /// Entries with at least one module leg; base entries come from the base block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<SymbolEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RightBlock {
    pub base: String,
    /// `[m, b, k, n]`.
    pub action: Vec<FusionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextBlock {
    pub name: String,
    pub module: String,
    /// Labels of the opposite bimodule. When absent the canonical dimension-tier context of
    /// the module is built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_labels: Option<Vec<String>>,
    /// Products involving an `N` label.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mixed: Vec<FusionEntry>,
    /// Entries not carried by the module block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<SymbolEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingBlock {
    pub name: String,
    /// A fusion, module or context block.
    pub target: String,
    pub group: GroupBlock,
    pub degrees: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PivotalSeed {
    pub name: String,
    /// A fusion block (tensor pivotal) or a module block (module pivotal).
    pub target: String,
    /// For module seeds, the tensor seed of the base.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    /// `[label, re, im]`.
    pub values: Vec<(String, f64, f64)>,
}

/// A resolved pivotal seed.
#[derive(Debug, Clone)]
pub struct Seed {
    pub name: String,
    pub target: String,
    pub base: Option<String>,
    pub values: PivotalAssignment,
}

/// A loaded instance file with every block built.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub fusion: Vec<FusionData>,
    pub modules: Vec<ModuleData>,
    pub contexts: Vec<MoritaContextData>,
    pub gradings: Vec<GradingData>,
    pub seeds: Vec<Seed>,
    pub warnings: Vec<String>,
}

impl Instance {
    pub fn fusion_named(&self, name: &str) -> Option<&FusionData> {
        self.fusion.iter().find(|f| f.name == name)
    }

    pub fn module_named(&self, name: &str) -> Option<&ModuleData> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn context_named(&self, name: &str) -> Option<&MoritaContextData> {
        self.contexts.iter().find(|c| c.name == name)
    }

    /// Skeleton of the fusion, module or context block called `name`.
    pub fn skeleton_named(&self, name: &str) -> Option<&Skeleton> {
        self.context_named(name)
            .map(|c| c.sk.as_ref())
            .or_else(|| self.module_named(name).map(|m| &m.sk))
            .or_else(|| self.fusion_named(name).map(|f| &f.sk))
    }

    pub fn seed_named(&self, name: &str) -> Option<&Seed> {
        self.seeds.iter().find(|s| s.name == name)
    }

    /// Regenerates the file blocks from the built data.
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            schema_version: SCHEMA_VERSION.into(),
            name: self.name.clone(),
            gauge: crate::GAUGE.into(),
            fusion: self.fusion.iter().map(fusion_block).collect(),
            modules: self.modules.iter().map(module_block).collect(),
            contexts: self.contexts.iter().map(context_block).collect(),
            gradings: self.gradings.iter().map(grading_block).collect(),
            pivotal: self.seeds.iter().map(seed_block).collect(),
        }
    }
}

const FILE_KEYS: &[&str] = &["schema_version", "name", "gauge", "fusion", "modules", "contexts", "gradings", "pivotal"];
const FUSION_KEYS: &[&str] = &["name", "labels", "unit", "fusion", "symbols"];
const MODULE_KEYS: &[&str] = &["name", "base", "labels", "action", "right", "symbols"];
const RIGHT_KEYS: &[&str] = &["base", "action"];
const CONTEXT_KEYS: &[&str] = &["name", "module", "n_labels", "mixed", "symbols"];
const GRADING_KEYS: &[&str] = &["name", "target", "group", "degrees"];
const GROUP_KEYS: &[&str] = &["elements", "table"];
const SEED_KEYS: &[&str] = &["name", "target", "base", "values"];

fn strip(value: &mut Value, known: &[&str], at: &str, warnings: &mut Vec<String>) {
    if let Value::Object(map) = value {
        let unknown: Vec<String> = map.keys().filter(|k| !known.contains(&k.as_str())).cloned().collect();
        for k in unknown {
            warnings.push(format!("ignored unknown field `{k}` in {at}"));
            map.remove(&k);
        }
    }
}

fn strip_each(value: &mut Value, key: &str, known: &[&str], warnings: &mut Vec<String>, nested: impl Fn(&mut Value, &str, &mut Vec<String>)) {
    if let Some(Value::Array(items)) = value.get_mut(key) {
        for (i, item) in items.iter_mut().enumerate() {
            let at = format!("{key}[{i}]");
            strip(item, known, &at, warnings);
            nested(item, &at, warnings);
        }
    }
}

/// Parses an instance file. In lenient mode unknown fields are dropped with a warning.
pub fn parse(text: &str, strict: bool) -> Result<(InstanceFile, Vec<String>)> {
    let mut warnings = Vec::new();
    let file: InstanceFile = if strict {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?
    } else {
        let mut v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        strip(&mut v, FILE_KEYS, "file", &mut warnings);
        strip_each(&mut v, "fusion", FUSION_KEYS, &mut warnings, |_, _, _| {});
        strip_each(&mut v, "modules", MODULE_KEYS, &mut warnings, |item, at, w| {
            if let Some(r) = item.get_mut("right") {
                strip(r, RIGHT_KEYS, &format!("{at}.right"), w);
            }
        });
        strip_each(&mut v, "contexts", CONTEXT_KEYS, &mut warnings, |_, _, _| {});
        strip_each(&mut v, "gradings", GRADING_KEYS, &mut warnings, |item, at, w| {
            if let Some(g) = item.get_mut("group") {
                strip(g, GROUP_KEYS, &format!("{at}.group"), w);
            }
        });
        strip_each(&mut v, "pivotal", SEED_KEYS, &mut warnings, |_, _, _| {});
        serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))?
    };
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!("unsupported schema_version `{}`", file.schema_version)));
    }
    if file.fusion.is_empty() {
        return Err(Error::Schema("at least one fusion block is required".into()));
    }
    if file.gauge != crate::GAUGE {
        warnings.push(format!("gauge descriptor differs from `{}`", crate::GAUGE));
    }
    Ok((file, warnings))
}

pub fn load(path: &Path, strict: bool) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let (file, warnings) = parse(&text, strict)?;
    let mut inst = build(&file)?;
    inst.warnings.splice(0..0, warnings);
    Ok(inst)
}

pub fn save(inst: &Instance, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(&inst.to_file()))?;
    Ok(())
}

fn index_of(labels: &[String], name: &str, at: &str) -> Result<usize> {
    labels.iter().position(|l| l == name).ok_or_else(|| Error::Schema(format!("unknown label `{name}` in {at}")))
}

fn entries(labels: (&[String], &[String], &[String]), list: &[FusionEntry], at: &str) -> Result<Vec<(usize, usize, usize, u32)>> {
    list.iter()
        .map(|(x, y, z, n)| Ok((index_of(labels.0, x, at)?, index_of(labels.1, y, at)?, index_of(labels.2, z, at)?, *n)))
        .collect()
}

fn symbols(labels: &[String], list: &Option<Vec<SymbolEntry>>, at: &str) -> Result<Option<BTreeMap<FKey, Scalar>>> {
    let Some(list) = list else { return Ok(None) };
    let mut out = BTreeMap::new();
    for (a, b, c, d, e, f, re, im) in list {
        let mut key = [0; 6];
        for (slot, name) in key.iter_mut().zip([a, b, c, d, e, f]) {
            *slot = index_of(labels, name, at)?;
        }
        if out.insert(key, Scalar::new(*re, *im)).is_some() {
            return Err(Error::Schema(format!("duplicate symbol entry {:?} in {at}", [a, b, c, d, e, f])));
        }
    }
    Ok(Some(out))
}

fn find<'a, T>(items: &'a [T], name: &str, get: impl Fn(&T) -> &str, what: &str) -> Result<&'a T> {
    items.iter().find(|x| get(x) == name).ok_or_else(|| Error::Schema(format!("unknown {what} `{name}`")))
}

/// Builds every block of a parsed file, resolving references by name.
pub fn build(file: &InstanceFile) -> Result<Instance> {
    let mut fusion = Vec::new();
    for blk in &file.fusion {
        let at = format!("fusion `{}`", blk.name);
        let l = blk.labels.as_slice();
        let unit = index_of(l, &blk.unit, &at)?;
        let fus = entries((l, l, l), &blk.fusion, &at)?;
        fusion.push(FusionData::new(&blk.name, blk.labels.clone(), unit, &fus, symbols(l, &blk.symbols, &at)?)?);
    }
    let mut modules: Vec<ModuleData> = Vec::new();
    for blk in &file.modules {
        let at = format!("module `{}`", blk.name);
        let base = find(&fusion, &blk.base, |f| &f.name, "fusion block")?.clone();
        let action = entries((base.labels(), &blk.labels, &blk.labels), &blk.action, &at)?;
        let mut combined = base.labels().to_vec();
        combined.extend(blk.labels.iter().cloned());
        let right = match &blk.right {
            None => None,
            Some(r) => {
                let rb = find(&fusion, &r.base, |f| &f.name, "fusion block")?.clone();
                combined.extend(rb.labels().iter().cloned());
                let action = entries((&blk.labels, rb.labels(), &blk.labels), &r.action, &at)?;
                Some(RightAction { base: rb, action })
            }
        };
        let sym = symbols(&combined, &blk.symbols, &at)?;
        modules.push(ModuleData::new(&blk.name, base, blk.labels.clone(), &action, right, sym)?);
    }
    let mut contexts = Vec::new();
    for blk in &file.contexts {
        let at = format!("context `{}`", blk.name);
        let m = find(&modules, &blk.module, |m| &m.name, "module block")?.clone();
        let ctx = match &blk.n_labels {
            None => {
                let mut ctx = morita::build_canonical_context(&m)?;
                ctx.name = blk.name.clone();
                ctx
            }
            Some(nl) => {
                let mut combined = m.sk.labels.clone();
                combined.extend(nl.iter().cloned());
                let c = combined.as_slice();
                let mixed = entries((c, c, c), &blk.mixed, &at)?;
                let sym = symbols(c, &blk.symbols, &at)?;
                MoritaContextData::new(&blk.name, m, nl.clone(), &mixed, sym)?
            }
        };
        contexts.push(ctx);
    }
    for ctx in &contexts {
        if let Some(m) = modules.iter_mut().find(|m| m.name == ctx.m.name && m.ambient.is_none()) {
            m.ambient = ctx.m.ambient.clone();
        }
    }
    let mut inst = Instance {
        name: file.name.clone(),
        fusion,
        modules,
        contexts,
        gradings: Vec::new(),
        seeds: Vec::new(),
        warnings: Vec::new(),
    };
    for ctx in &inst.contexts {
        inst.warnings.extend(ctx.warnings.iter().map(|w| format!("{}: {w}", ctx.name)));
    }
    for blk in &file.gradings {
        let sk = inst.skeleton_named(&blk.target).ok_or_else(|| Error::Schema(format!("unknown grading target `{}`", blk.target)))?;
        let els = &blk.group.elements;
        let table = blk
            .group
            .table
            .iter()
            .map(|row| row.iter().map(|x| index_of(els, x, &format!("grading `{}`", blk.name))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let group = Group::new(els.clone(), table)?;
        let mut deg = BTreeMap::new();
        for (label, d) in &blk.degrees {
            sk.label(label)?;
            deg.insert(label.clone(), group.element(d)?);
        }
        inst.gradings.push(GradingData { name: blk.name.clone(), target: blk.target.clone(), group, deg });
    }
    for blk in &file.pivotal {
        let labels: Vec<String> = if let Some(f) = inst.fusion_named(&blk.target) {
            f.labels().to_vec()
        } else if let Some(m) = inst.module_named(&blk.target) {
            m.sk.names(&m.mlabels()).into_iter().map(String::from).collect()
        } else {
            return Err(Error::Schema(format!("unknown pivotal target `{}`", blk.target)));
        };
        let mut values = vec![None; labels.len()];
        for (l, re, im) in &blk.values {
            values[index_of(&labels, l, &format!("pivotal seed `{}`", blk.name))?] = Some(Scalar::new(*re, *im));
        }
        let values = values
            .into_iter()
            .zip(&labels)
            .map(|(v, l)| v.ok_or_else(|| Error::Schema(format!("pivotal seed `{}` misses `{l}`", blk.name))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(b) = &blk.base {
            if inst.seed_named(b).is_none() {
                return Err(Error::Schema(format!("unknown base seed `{b}`")));
            }
        }
        inst.seeds.push(Seed {
            name: blk.name.clone(),
            target: blk.target.clone(),
            base: blk.base.clone(),
            values: PivotalAssignment::new(labels, values),
        });
    }
    Ok(inst)
}

fn name_entry(sk: &Skeleton, (x, y, z, n): (usize, usize, usize, u32)) -> FusionEntry {
    (sk.name(x).into(), sk.name(y).into(), sk.name(z).into(), n)
}

fn symbol_entries(sk: &Skeleton, keep: impl Fn(&FKey) -> bool) -> Option<Vec<SymbolEntry>> {
    let sym = sk.symbols()?;
    Some(
        sym.iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, v)| {
                let n = |i: usize| sk.name(k[i]).to_string();
                (n(0), n(1), n(2), n(3), n(4), n(5), v.re + 0.0, v.im + 0.0)
            })
            .collect(),
    )
}

pub fn fusion_block(f: &FusionData) -> FusionBlock {
    FusionBlock {
        name: f.name.clone(),
        labels: f.labels().to_vec(),
        unit: f.sk.name(f.unit()).into(),
        fusion: f.fusion_entries().into_iter().map(|e| name_entry(&f.sk, e)).collect(),
        symbols: symbol_entries(&f.sk, |_| true),
    }
}

pub fn module_block(m: &ModuleData) -> ModuleBlock {
    let sk = &m.sk;
    let all: Vec<usize> = (0..sk.len()).collect();
    let fus = fusion::fusion_entries(sk, &all);
    let cell = |x: usize| sk.cells[x];
    let action = fus.iter().filter(|e| cell(e.0) == (0, 0) && cell(e.1) == (0, 1)).map(|&e| name_entry(sk, e)).collect();
    let right = m.right.as_ref().map(|r| RightBlock {
        base: r.name.clone(),
        action: fus.iter().filter(|e| cell(e.0) == (0, 1) && cell(e.1) == (1, 1)).map(|&e| name_entry(sk, e)).collect(),
    });
    ModuleBlock {
        name: m.name.clone(),
        base: m.base.name.clone(),
        labels: sk.names(&m.mlabels()).into_iter().map(String::from).collect(),
        action,
        right,
        symbols: symbol_entries(sk, |k| k[..3].iter().any(|&x| cell(x) == (0, 1))),
    }
}

pub fn context_block(c: &MoritaContextData) -> ContextBlock {
    let sk = &c.sk;
    let n_labels: Vec<usize> = sk.cell_labels((1, 0));
    let is_n = |x: usize| sk.cells[x] == (1, 0);
    let mixed = fusion::fusion_entries(sk, &c.all())
        .into_iter()
        .filter(|e| is_n(e.0) || is_n(e.1) || is_n(e.2))
        .map(|e| name_entry(sk, e))
        .collect();
    let carried = c.m.sk.symbols();
    let symbols = if c.tier == crate::report::Tier::Structure {
        symbol_entries(sk, |k| !carried.is_some_and(|s| s.contains_key(k)))
    } else {
        None
    };
    ContextBlock {
        name: c.name.clone(),
        module: c.m.name.clone(),
        n_labels: Some(sk.names(&n_labels).into_iter().map(String::from).collect()),
        mixed,
        symbols,
    }
}

pub fn grading_block(g: &GradingData) -> GradingBlock {
    let els = &g.group.elements;
    GradingBlock {
        name: g.name.clone(),
        target: g.target.clone(),
        group: GroupBlock {
            elements: els.clone(),
            table: g.group.table.iter().map(|row| row.iter().map(|&x| els[x].clone()).collect()).collect(),
        },
        degrees: g.deg.iter().map(|(l, &d)| (l.clone(), els[d].clone())).collect(),
    }
}

pub fn seed_block(s: &Seed) -> PivotalSeed {
    PivotalSeed {
        name: s.name.clone(),
        target: s.target.clone(),
        base: s.base.clone(),
        values: s.values.labels.iter().zip(&s.values.values).map(|(l, v)| (l.clone(), v.re, v.im)).collect(),
    }
}

/// Serializes with two-space indentation, printing arrays of scalars on one line.
pub fn to_json(file: &InstanceFile) -> String {
    let value = serde_json::to_value(file).expect("instance files serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

/// Reorders every label list and entry list of `file` by the permutations `perm(len)`
/// returns. Names are unchanged, so the result describes the same instance.
pub fn reorder(file: &InstanceFile, perm: &mut dyn FnMut(usize) -> Vec<usize>) -> InstanceFile {
    fn apply<T: Clone>(items: &[T], perm: &mut dyn FnMut(usize) -> Vec<usize>) -> Vec<T> {
        perm(items.len()).into_iter().map(|i| items[i].clone()).collect()
    }
    let mut out = file.clone();
    for f in &mut out.fusion {
        f.labels = apply(&f.labels, perm);
        f.fusion = apply(&f.fusion, perm);
        if let Some(s) = &f.symbols {
            f.symbols = Some(apply(s, perm));
        }
    }
    for m in &mut out.modules {
        m.labels = apply(&m.labels, perm);
        m.action = apply(&m.action, perm);
        if let Some(r) = &mut m.right {
            r.action = apply(&r.action, perm);
        }
        if let Some(s) = &m.symbols {
            m.symbols = Some(apply(s, perm));
        }
    }
    for c in &mut out.contexts {
        if let Some(n) = &c.n_labels {
            c.n_labels = Some(apply(n, perm));
        }
        c.mixed = apply(&c.mixed, perm);
        if let Some(s) = &c.symbols {
            c.symbols = Some(apply(s, perm));
        }
    }
    out
}

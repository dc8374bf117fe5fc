//! Suite runner: enumerates `(suite, target)` jobs over loaded instances, runs them on a
//! worker pool and returns the reports in job order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{self, FusionData};
use crate::graded::{self, GradingData};
use crate::modulecat::{self, ModuleData, SerreData};
use crate::morita::{self, ContextPivotal, MoritaContextData};
use crate::numerics::Tolerance;
use crate::report::{CheckReport, FamilyAcc, Tier};
use crate::schema::{Instance, Seed};
use crate::skeleton::Skeleton;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fusion,
    Pentagon,
    Snake,
    DoubleDual,
    Pivotal,
    Module,
    Ihom,
    Serre,
    ModulePivotal,
    ModuleRadford,
    Coherence,
    Duality,
    Strong,
    Radford,
    PivotalMorita,
    Grading,
    GradedDuals,
    GradedSerre,
    GradedPivotal,
    Seeds,
}

impl Suite {
    pub const ALL: [Suite; 20] = [
        Suite::Fusion,
        Suite::Pentagon,
        Suite::Snake,
        Suite::DoubleDual,
        Suite::Pivotal,
        Suite::Module,
        Suite::Ihom,
        Suite::Serre,
        Suite::ModulePivotal,
        Suite::ModuleRadford,
        Suite::Coherence,
        Suite::Duality,
        Suite::Strong,
        Suite::Radford,
        Suite::PivotalMorita,
        Suite::Grading,
        Suite::GradedDuals,
        Suite::GradedSerre,
        Suite::GradedPivotal,
        Suite::Seeds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fusion => "fusion",
            Suite::Pentagon => "pentagon",
            Suite::Snake => "snake",
            Suite::DoubleDual => "double-dual",
            Suite::Pivotal => "pivotal",
            Suite::Module => "module",
            Suite::Ihom => "ihom",
            Suite::Serre => "serre",
            Suite::ModulePivotal => "module-pivotal",
            Suite::ModuleRadford => "module-radford",
            Suite::Coherence => "coherence",
            Suite::Duality => "duality",
            Suite::Strong => "strong",
            Suite::Radford => "radford",
            Suite::PivotalMorita => "pivotal-morita",
            Suite::Grading => "grading",
            Suite::GradedDuals => "graded-duals",
            Suite::GradedSerre => "graded-serre",
            Suite::GradedPivotal => "graded-pivotal",
            Suite::Seeds => "seeds",
        }
    }

    pub fn parse(name: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::Schema(format!("unknown suite `{name}`")))
    }

    /// Whether the suite needs explicit structure scalars.
    pub fn needs_structure(self) -> bool {
        !matches!(
            self,
            Suite::Fusion
                | Suite::Module
                | Suite::Ihom
                | Suite::Coherence
                | Suite::Duality
                | Suite::Strong
                | Suite::DoubleDual
                | Suite::Grading
                | Suite::GradedDuals
                | Suite::GradedSerre
        )
    }
}

/// Which suites run on data that lacks structure scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TierMode {
    /// Run structure suites only where the data supports them.
    Auto,
    /// Run dimension-tier suites only.
    Dimension,
    /// Run every suite; missing structure is a failure.
    Structure,
}

impl TierMode {
    pub fn parse(s: &str) -> Result<TierMode> {
        match s {
            "auto" => Ok(TierMode::Auto),
            "dimension" => Ok(TierMode::Dimension),
            "structure" => Ok(TierMode::Structure),
            _ => Err(Error::Schema(format!("unknown tier `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Fusion(usize),
    Module(usize),
    Context(usize),
    Grading(usize),
    Seeds,
}

#[derive(Debug, Clone)]
struct Job {
    instance: usize,
    suite: Suite,
    target: Target,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub instance: String,
    pub suite: String,
    pub target: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tolerance: Tolerance,
    pub tier: TierMode,
    pub reports: Vec<CheckReport>,
    pub skipped: Vec<Skipped>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for r in &self.reports {
            out.push_str(&r.summary_line());
            out.push('\n');
            for f in r.families.iter().filter(|f| !f.passed()) {
                out.push_str(&format!("  {}: {} of {} failed, max residual {:.3e}\n", f.family, f.failed, f.checked, f.max_residual));
                for fail in &f.failures {
                    out.push_str(&format!("    ({}) residual {:.3e}\n", fail.index.join(","), fail.residual));
                }
            }
            for n in &r.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
        }
        for s in &self.skipped {
            out.push_str(&format!("[SKIP] {} on {}: {}\n", s.suite, s.target, s.reason));
        }
        let failed = self.reports.iter().filter(|r| !r.pass).count();
        out.push_str(&format!(
            "{}: {} reports, {} failed, {} skipped\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.reports.len(),
            failed,
            self.skipped.len()
        ));
        out
    }
}

fn fusion_ready(f: &FusionData) -> bool {
    f.sk.structure_ready().is_ok()
}

fn module_ready(m: &ModuleData) -> bool {
    m.sk.structure_ready().is_ok() && m.ambient.as_ref().is_some_and(|a| a.structure_ready().is_ok())
}

fn applicable(inst: &Instance, suite: Suite, target: Target) -> Option<bool> {
    match (suite, target) {
        (Suite::Fusion | Suite::Pentagon | Suite::Snake | Suite::DoubleDual | Suite::Pivotal, Target::Fusion(i)) => {
            Some(suite == Suite::Fusion || fusion_ready(&inst.fusion[i]))
        }
        (Suite::Module | Suite::Ihom, Target::Module(_)) => Some(true),
        (Suite::Serre | Suite::ModulePivotal | Suite::ModuleRadford, Target::Module(i)) => Some(module_ready(&inst.modules[i])),
        (Suite::Coherence | Suite::Duality | Suite::Strong | Suite::DoubleDual, Target::Context(_)) => Some(true),
        (Suite::Snake | Suite::Radford | Suite::PivotalMorita, Target::Context(i)) => Some(inst.contexts[i].is_structure()),
        (Suite::Grading | Suite::GradedDuals, Target::Grading(_)) => Some(true),
        (Suite::GradedSerre, Target::Grading(i)) => Some(inst.module_named(&context_module_name(inst, &inst.gradings[i])?).is_some()),
        (Suite::GradedPivotal, Target::Grading(i)) => Some(fusion_ready(inst.fusion_named(&inst.gradings[i].target)?)),
        (Suite::Seeds, Target::Seeds) if !inst.seeds.is_empty() => Some(true),
        _ => None,
    }
}

/// Module name attached to a grading target that is a module or context.
fn context_module_name(inst: &Instance, g: &GradingData) -> Option<String> {
    inst.context_named(&g.target).map(|c| c.m.name.clone()).or_else(|| inst.module_named(&g.target).map(|m| m.name.clone()))
}

fn target_name(inst: &Instance, target: Target) -> String {
    match target {
        Target::Fusion(i) => inst.fusion[i].name.clone(),
        Target::Module(i) => inst.modules[i].name.clone(),
        Target::Context(i) => inst.contexts[i].name.clone(),
        Target::Grading(i) => inst.gradings[i].name.clone(),
        Target::Seeds => inst.name.clone(),
    }
}

fn targets(inst: &Instance) -> Vec<Target> {
    let mut out: Vec<Target> = (0..inst.fusion.len()).map(Target::Fusion).collect();
    out.extend((0..inst.modules.len()).map(Target::Module));
    out.extend((0..inst.contexts.len()).map(Target::Context));
    out.extend((0..inst.gradings.len()).map(Target::Grading));
    out.push(Target::Seeds);
    out
}

/// Runs `suites` over every applicable target of every instance with `jobs` workers.
pub fn run(instances: &[Instance], suites: &[Suite], tier: TierMode, tol: Tolerance, jobs: usize) -> Result<RunReport> {
    let mut plan = Vec::new();
    let mut skipped = Vec::new();
    for (ii, inst) in instances.iter().enumerate() {
        for target in targets(inst) {
            for &suite in suites {
                let Some(ready) = applicable(inst, suite, target) else { continue };
                let skip = match tier {
                    TierMode::Dimension if suite.needs_structure() => Some("dimension tier requested"),
                    TierMode::Auto if !ready => Some("data lacks structure scalars"),
                    _ => None,
                };
                match skip {
                    Some(reason) => skipped.push(Skipped {
                        instance: inst.name.clone(),
                        suite: suite.name().into(),
                        target: target_name(inst, target),
                        reason: reason.into(),
                    }),
                    None => plan.push(Job { instance: ii, suite, target }),
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Schema(format!("cannot start workers: {e}")))?;
    let reports: Vec<CheckReport> = pool.install(|| plan.par_iter().map(|job| run_job(&instances[job.instance], job, tol)).collect());
    let warnings = instances.iter().flat_map(|i| i.warnings.iter().map(move |w| format!("{}: {w}", i.name))).collect();
    let pass = reports.iter().all(|r| r.pass);
    Ok(RunReport { tolerance: tol, tier, reports, skipped, warnings, pass })
}

fn errored(suite: Suite, target: &str, tol: Tolerance, e: Error) -> CheckReport {
    let mut r = CheckReport::new(suite.name(), target, Tier::Structure, tol);
    r.fail("error", e.to_string());
    r
}

fn run_job(inst: &Instance, job: &Job, tol: Tolerance) -> CheckReport {
    let name = target_name(inst, job.target);
    let out = match job.target {
        Target::Fusion(i) => fusion_suite(&inst.fusion[i], job.suite, tol),
        Target::Module(i) => module_suite(&inst.modules[i], job.suite, tol),
        Target::Context(i) => context_suite(&inst.contexts[i], job.suite, tol),
        Target::Grading(i) => grading_suite(inst, &inst.gradings[i], job.suite, tol),
        Target::Seeds => seeds_suite(inst, tol),
    };
    out.unwrap_or_else(|e| errored(job.suite, &name, tol, e))
}

fn fusion_suite(f: &FusionData, suite: Suite, tol: Tolerance) -> Result<CheckReport> {
    Ok(match suite {
        Suite::Fusion => fusion::validate_fusion(f),
        Suite::Pentagon => fusion::verify_pentagon(f, tol),
        Suite::Snake => fusion::ev_coev_data(f, tol)?.1,
        Suite::DoubleDual => fusion::double_dual_structure(f, tol)?.report,
        Suite::Pivotal => pivotal_census(f, tol)?,
        _ => unreachable!("not a fusion suite"),
    })
}

/// Solves for every pivotal structure, verifies each, and checks that the two sphericality
/// verdicts agree per solution.
pub fn pivotal_census(f: &FusionData, tol: Tolerance) -> Result<CheckReport> {
    let mut report = CheckReport::new("pivotal", &f.name, Tier::Structure, tol);
    let dd = fusion::double_dual_structure(f, tol)?;
    let sols = fusion::solve_pivotal(f, tol)?;
    report.note(format!("{} pivotal structure(s)", sols.len()));
    let mut agree = FamilyAcc::new("sphericality-agreement");
    for p in &sols {
        report.merge(fusion::verify_pivotal(f, p, tol));
        let v = fusion::check_spherical_tensor(f, p, &dd.radford, tol)?;
        agree.check(|| vec![p.describe()], v.radford == v.trace);
        report.note(format!("{}: spherical={}", p.describe(), v.radford && v.trace));
    }
    report.push(agree.finish());
    Ok(report)
}

fn module_suite(m: &ModuleData, suite: Suite, tol: Tolerance) -> Result<CheckReport> {
    Ok(match suite {
        Suite::Module => modulecat::validate_module(m, tol),
        Suite::Ihom => ihom_suite(m, tol)?,
        Suite::Serre => modulecat::serre_data(m, tol)?.report,
        Suite::ModuleRadford => modulecat::radford_module_components(m, tol)?.1,
        Suite::ModulePivotal => module_pivotal_census(m, tol)?,
        _ => unreachable!("not a module suite"),
    })
}

/// Internal Hom and coHom multiplicities against brute-force action decompositions, plus the
/// structure maps when scalars are present.
pub fn ihom_suite(m: &ModuleData, tol: Tolerance) -> Result<CheckReport> {
    m.base.sk.all_duals()?;
    let structure = m.sk.structure_ready().is_ok();
    let tier = if structure { Tier::Structure } else { Tier::Dimension };
    let mut report = CheckReport::new("ihom", &m.name, tier, tol);
    let mut hom = FamilyAcc::new("ihom-oracle");
    let mut cohom = FamilyAcc::new("cohom-oracle");
    let ml = m.mlabels();
    for &x in &ml {
        for &y in &ml {
            let h = modulecat::internal_hom(m, x, y);
            let c = modulecat::internal_cohom(m, x, y);
            for a in m.base_labels() {
                let brute = modulecat::action_hom_dim(m, a, x, y) as i64;
                hom.compare_int(|| m.sk.names(&[a, x, y]), h.mults[a] as i64, brute);
                cohom.compare_int(|| m.sk.names(&[a, y, x]), c.mults[a] as i64, brute);
            }
        }
    }
    report.push(hom.finish());
    report.push(cohom.finish());
    if structure {
        for &x in &ml {
            report.merge(modulecat::ihom_structure_maps(m, x, tol)?.report);
        }
    }
    Ok(report)
}

/// Module pivotal structures over every pivotal structure of the base.
pub fn module_pivotal_census(m: &ModuleData, tol: Tolerance) -> Result<CheckReport> {
    let mut report = CheckReport::new("module-pivotal", &m.name, Tier::Structure, tol);
    for p in fusion::solve_pivotal(&m.base, tol)? {
        let sols = modulecat::solve_module_pivotal(m, &p, tol)?;
        report.note(format!("over p={}: {} pinned, {} raw", p.describe(), sols.pinned.len(), sols.raw.len()));
        for pt in &sols.raw {
            report.merge(modulecat::verify_module_pivotal(m, &p, pt, tol));
            let sph = modulecat::check_spherical_module(m, &p, pt, tol)?;
            report.note(format!("  {}: spherical={}", pt.describe(), sph.pass));
        }
    }
    Ok(report)
}

fn context_suite(c: &MoritaContextData, suite: Suite, tol: Tolerance) -> Result<CheckReport> {
    Ok(match suite {
        Suite::Coherence => morita::verify_context_coherence(c, tol),
        Suite::Snake => morita::snake_suite(c, tol),
        Suite::Duality => morita::duality_dim_suite(c),
        Suite::DoubleDual => morita::double_dual_suite(c, tol),
        Suite::Strong => morita::strong_context_suite(c, tol),
        Suite::Radford => morita::radford_pseudo_suite(c, &morita::context_radford(c)?, tol),
        Suite::PivotalMorita => pivotal_morita_census(c, tol)?,
        _ => unreachable!("not a context suite"),
    })
}

/// Every matched datum `(p, p̃, q, p̂)` obtained by transport, run through the eight families.
pub fn pivotal_morita_census(c: &MoritaContextData, tol: Tolerance) -> Result<CheckReport> {
    let mut report = CheckReport::new("pivotal-morita", &c.name, Tier::Structure, tol);
    let mut count = 0;
    for p in fusion::solve_pivotal(&c.a, tol)? {
        for pt in modulecat::solve_module_pivotal(&c.m, &p, tol)?.raw {
            let t = morita::pivotal_transport(c, &p, &pt, tol)?;
            report.merge(t.report);
            let data = ContextPivotal { p: p.clone(), pt, q: t.q, ph: t.ph };
            report.merge(morita::pivotal_morita_suite(c, &data, tol));
            count += 1;
        }
    }
    report.note(format!("{count} matched pivotal datum(s)"));
    Ok(report)
}

fn grading_suite(inst: &Instance, g: &GradingData, suite: Suite, tol: Tolerance) -> Result<CheckReport> {
    let sk: &Skeleton = inst.skeleton_named(&g.target).ok_or_else(|| Error::Schema(format!("unknown grading target `{}`", g.target)))?;
    Ok(match suite {
        Suite::Grading => graded::validate_grading(sk, &g.target, g),
        Suite::GradedDuals => graded::graded_dual_degree_check(sk, &g.target, g),
        Suite::GradedSerre => {
            let name = context_module_name(inst, g).expect("applicable");
            let m = inst.module_named(&name).expect("applicable");
            let serre = match modulecat::serre_data(m, tol) {
                Ok(s) => s,
                Err(_) => {
                    let object_map = modulecat::hom_duality_map(&m.sk, &m.base_labels(), &m.mlabels()).map_err(Error::MissingStructure)?;
                    SerreData { object_map, twist: Default::default(), report: CheckReport::new("serre", &m.name, Tier::Dimension, tol) }
                }
            };
            graded::graded_serre_check(sk, &g.target, &serre, g)
        }
        Suite::GradedPivotal => graded::graded_pivotal_check(inst.fusion_named(&g.target).expect("applicable"), g, tol)?,
        _ => unreachable!("not a grading suite"),
    })
}

fn seeds_suite(inst: &Instance, tol: Tolerance) -> Result<CheckReport> {
    let mut report = CheckReport::new("seeds", &inst.name, Tier::Structure, tol);
    for s in &inst.seeds {
        report.merge(check_seed(inst, s, tol)?);
    }
    Ok(report)
}

fn check_seed(inst: &Instance, s: &Seed, tol: Tolerance) -> Result<CheckReport> {
    if let Some(f) = inst.fusion_named(&s.target) {
        return Ok(fusion::verify_pivotal(f, &s.values, tol));
    }
    let m = inst.module_named(&s.target).ok_or_else(|| Error::Schema(format!("unknown seed target `{}`", s.target)))?;
    let base = s
        .base
        .as_ref()
        .and_then(|b| inst.seed_named(b))
        .ok_or_else(|| Error::Schema(format!("module seed `{}` names no base seed", s.name)))?;
    Ok(modulecat::verify_module_pivotal(m, &base.values, &s.values, tol))
}

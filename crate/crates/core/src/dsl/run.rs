//! Executes the directives of a scenario and assembles a plain-text report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::path::{Path, PathBuf};

use super::ast::{Directive, Scenario};
use super::model;
use crate::adjunction::{factor_through_meaning, QuotientFactorization};
use crate::context::{check_presheaf, global_sections, set_str, stage_truth, truth_downset, ConstraintPresheaf};
use crate::equiv::{make_partition, Basin, Certificate, QuotientSystem};
use crate::fincat::{category_of, check_category};
use crate::scalar::{self, fmt17, fmt_short, ScalarParams, TrajectoryRecord, TrajectoryStatus};
use crate::temporal::{check_tree, unfold, TreeObject};
use crate::Result;

/// State standing for "no admissible reading"; never a valid identifier.
pub const SINK: &str = "_none";

pub const DEFAULT_STEPS: u64 = 16;

const TRAJECTORY_HEAD: usize = 10;
const TRAJECTORY_TAIL: usize = 5;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Where CSV/SVG artifacts go; plots are skipped without it.
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub directive: &'static str,
    pub failed: bool,
    /// The `== RESULT ==` body.
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub scenario: String,
    pub text: String,
    pub runs: Vec<RunOutcome>,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn failed(&self) -> bool {
        self.runs.iter().any(|r| r.failed)
    }
}

struct Section {
    text: String,
    failed: bool,
    result: String,
}

impl Section {
    fn new(ops: &[&str]) -> Self {
        Section { text: format!("ops: {}\n", ops.join(" -> ")), failed: false, result: String::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn header(&mut self, name: &str) {
        let _ = writeln!(self.text, "== {name} ==");
    }

    fn finish(&mut self, result: impl Into<String>, failed: bool) {
        self.result = result.into();
        self.failed |= failed;
    }
}

fn names(v: &[String]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.join(", ")
    }
}

fn header(s: &Scenario) -> Result<String> {
    let mut out = String::from("== SCENARIO ==\n");
    let _ = writeln!(out, "name: {}", s.name.node);
    if !s.universe.is_empty() {
        let _ = writeln!(out, "meanings: {}", set_str(&model::universe(s)));
    }
    if !s.sentences.is_empty() {
        let _ = writeln!(out, "sentences: {}", set_str(&model::sentences(s)));
    }
    if let Some(poset) = model::context_poset(s) {
        let poset = poset?;
        let covers: Vec<String> = poset.covers().iter().map(|(a, b)| format!("{a} <= {b}")).collect();
        let _ = writeln!(out, "contexts: {} ({})", set_str(poset.elements()), names(&covers));
    }
    let list = |d: &[super::ast::MapDecl]| names(&d.iter().map(|m| m.name.node.clone()).collect::<Vec<_>>());
    if !s.filters.is_empty() {
        let _ = writeln!(out, "filters: {}", list(&s.filters));
    }
    if !s.maps.is_empty() {
        let _ = writeln!(out, "maps: {}", list(&s.maps));
    }
    if !s.interpretations.is_empty() {
        let _ = writeln!(out, "interpretations: {}", list(&s.interpretations));
    }
    let _ = writeln!(out, "runs: {}", s.runs.len());
    Ok(out)
}

/// Runs every directive in order.
pub fn run_scenario(s: &Scenario, options: &RunOptions) -> Result<RunReport> {
    let mut text = header(s)?;
    let mut runs = Vec::new();
    let mut artifacts = Vec::new();
    for (i, r) in s.runs.iter().enumerate() {
        let n = i + 1;
        let section = match &r.node {
            Directive::Disambiguate { filter, via, from, steps } => disambiguate(
                s,
                filter.as_str(),
                via.as_ref().map(|v| v.as_str()),
                from.as_ref().map(|f| f.iter().map(|m| m.node.clone()).collect()),
                steps.as_ref().map_or(DEFAULT_STEPS, |n| n.node),
            )?,
            Directive::TruthQuery { prop } => truth_query(s, prop.as_str())?,
            Directive::CheckLaws => check_laws(s)?,
            Directive::IterateScalar { alpha, beta, x0, eps, plot } => {
                let stem = format!("{}-run{n}-trajectory", s.name.node);
                iterate_scalar(
                    alpha.node,
                    beta.node,
                    x0.as_ref().map_or(1.0, |x| x.node),
                    eps.as_ref().map(|e| e.node),
                    plot_dir(*plot, options),
                    &stem,
                    &mut artifacts,
                )?
            }
            Directive::FixedPoints { alpha, beta, range, plot } => {
                let stem = format!("{}-run{n}-map", s.name.node);
                fixed_points(
                    alpha.node,
                    beta.node,
                    (range.0.node, range.1.node),
                    plot_dir(*plot, options),
                    &stem,
                    &mut artifacts,
                )?
            }
        };
        let keyword = r.node.keyword();
        let _ = write!(text, "\n== RUN {n}: {keyword} ==\n{}", section.text);
        let _ = write!(text, "== RESULT ==\n{}\n", section.result);
        runs.push(RunOutcome { directive: keyword, failed: section.failed, result: section.result });
    }
    Ok(RunReport { scenario: s.name.node.clone(), text, runs, artifacts })
}

/// The law checks of a scenario as a stand-alone report.
pub fn check_scenario(s: &Scenario) -> Result<RunReport> {
    let mut text = header(s)?;
    let section = check_laws(s)?;
    let _ = write!(text, "\n== RUN 1: check-laws ==\n{}== RESULT ==\n{}\n", section.text, section.result);
    Ok(RunReport {
        scenario: s.name.node.clone(),
        text,
        runs: vec![RunOutcome { directive: "check-laws", failed: section.failed, result: section.result }],
        artifacts: Vec::new(),
    })
}

enum PlotTarget<'a> {
    None,
    Skipped,
    Dir(&'a Path),
}

fn plot_dir(plot: bool, options: &RunOptions) -> PlotTarget<'_> {
    match (plot, &options.out_dir) {
        (false, _) => PlotTarget::None,
        (true, None) => PlotTarget::Skipped,
        (true, Some(d)) => PlotTarget::Dir(d),
    }
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn quotient_system(s: &Scenario, filter: &str, via: Option<&str>) -> Result<QuotientSystem> {
    let universe = model::universe(s);
    let f = model::filter(s, filter).unwrap_or_default();
    let big_f = via.and_then(|m| model::map(s, m));
    let mut transform = BTreeMap::new();
    let mut interpret = BTreeMap::new();
    for x in &universe {
        let fx = match f.get(x) {
            Some(Some(y)) => y.clone(),
            Some(None) => SINK.to_string(),
            None => x.clone(),
        };
        transform.insert(x.clone(), fx);
        let gx = big_f.as_ref().map_or_else(|| x.clone(), |m| m[x].clone());
        interpret.insert(x.clone(), gx);
    }
    transform.insert(SINK.into(), SINK.into());
    interpret.insert(SINK.into(), SINK.into());
    let states = universe.iter().cloned().chain([SINK.to_string()]);
    let partition = make_partition(states, model::meaning_pairs(s))?;
    QuotientSystem::new(transform, interpret, partition, Some(SINK.into()))
}

/// `X_{t+1} = π(F(f(X_t)))` on sets, dropping the sink.
fn set_step(q: &QuotientSystem, x: &BTreeSet<String>) -> BTreeSet<String> {
    x.iter()
        .filter_map(|m| q.update(m))
        .filter(|y| *y != SINK)
        .filter_map(|y| q.partition().class_of(y))
        .map(str::to_string)
        .collect()
}

fn disambiguate(
    s: &Scenario,
    filter: &str,
    via: Option<&str>,
    from: Option<Vec<String>>,
    bound: u64,
) -> Result<Section> {
    let mut sec = Section::new(&[
        "equiv::make_partition",
        "equiv::QuotientSystem::certify_compatibility",
        "equiv::QuotientSystem::find_class_fixed_points",
        "set trajectory",
    ]);
    let q = quotient_system(s, filter, via)?;
    let x0: BTreeSet<String> = from
        .unwrap_or_else(|| model::universe(s))
        .iter()
        .filter_map(|m| q.partition().class_of(m))
        .map(str::to_string)
        .collect();
    sec.line(format!("filter: {filter}"));
    match via {
        Some(m) => sec.line(format!("update: {m}")),
        None => sec.line("update: identity (defaulted)"),
    }
    let classes: Vec<String> = q
        .partition()
        .classes()
        .into_iter()
        .filter(|(rep, _)| *rep != SINK)
        .map(|(_, members)| format!("[{}]", members.join(" ~ ")))
        .collect();
    sec.line(format!("classes: {}", classes.join(", ")));
    sec.line(format!("X_0: {}", set_str(&x0)));
    sec.line(format!("step bound: {bound}"));

    let certificate = q.certify_compatibility();
    sec.line(format!("certificate: {certificate}"));
    if let Certificate::Counterexample { x, y } = &certificate {
        sec.finish(
            format!("failed: quotient not certified, {x} ~ {y} but their updates lie in different classes"),
            true,
        );
        return Ok(sec);
    }
    let dynamics = q.find_class_fixed_points()?;
    sec.line(format!("fixed classes: {}", set_str(&dynamics.fixed)));
    for c in &dynamics.cycles {
        sec.line(format!("class cycle: {}", c.join(" -> ")));
    }
    let basins: Vec<String> = dynamics
        .basin
        .iter()
        .map(|(rep, b)| match b {
            Basin::Fixed(f) => format!("{rep} -> {f}"),
            Basin::Cycle(i) => format!("{rep} -> cycle {}", i + 1),
            Basin::Absorbed => format!("{rep} -> dropped"),
        })
        .collect();
    sec.line(format!("basins: {}", names(&basins)));

    sec.header("TRAJECTORY");
    let mut history = vec![x0];
    let result = loop {
        let t = history.len() - 1;
        let current = &history[t];
        sec.line(format!("t={t}: {}", set_str(current)));
        let next = set_step(&q, current);
        if next == *current {
            break format!("stabilized at t={t}: {}", set_str(current));
        }
        if let Some(s) = history.iter().position(|h| *h == next) {
            sec.line(format!("t={}: {}", t + 1, set_str(&next)));
            break format!("cycle of period {} entered at t={s}", t + 1 - s);
        }
        if t as u64 >= bound {
            break format!("step bound {bound} reached at {}", set_str(current));
        }
        history.push(next);
    };
    sec.finish(result, false);
    Ok(sec)
}

fn presheaf(s: &Scenario) -> Result<ConstraintPresheaf> {
    model::presheaf(s).expect("resolution requires contexts")
}

fn truth_query(s: &Scenario, prop: &str) -> Result<Section> {
    let mut sec = Section::new(&[
        "context::check_presheaf",
        "context::stage_truth",
        "context::truth_downset",
        "context::global_sections",
    ]);
    let p = presheaf(s)?;
    let proposition = model::proposition(s, prop).expect("resolved proposition");
    sec.line(format!("proposition: {prop} = {}", set_str(&proposition)));
    let laws = check_presheaf(&p);
    sec.line(format!("presheaf: {}", if laws.is_pass() { "pass".to_string() } else { laws.to_string() }));
    sec.header("STAGE TRUTH");
    let width = p.poset.elements().iter().map(String::len).max().unwrap_or(0);
    for c in p.poset.elements() {
        let truth = stage_truth(&p, &proposition, c)?;
        let admissible = p.admissible(c).expect("context of the poset");
        sec.line(format!("{c:<width$}  {:<12}  admissible {}", truth.to_string(), set_str(admissible)));
    }
    let global = global_sections(&p);
    sec.line(format!("global sections: {}", set_str(&global)));
    let result = match truth_downset(&p, &proposition) {
        Ok(d) => {
            let at: Vec<String> = d.members().iter().cloned().collect();
            format!("{prop} validated at {}", set_str(&at))
        }
        Err(e) => {
            sec.line(format!("truth value: {e}"));
            format!("{prop} has no coherent truth value")
        }
    };
    sec.finish(result, !laws.is_pass());
    Ok(sec)
}

/// Stages the admissible sets along a chain of contexts, coarsest first.
fn staged_tree(p: &ConstraintPresheaf, chain: &[String]) -> Result<TreeObject> {
    let seeds = p.admissible(&chain[0]).expect("context").clone();
    unfold(seeds, chain.len() - 1, |n, x| p.admissible(&chain[n]).filter(|a| a.contains(x)).map(|_| x.to_string()))
}

fn check_laws(s: &Scenario) -> Result<Section> {
    let mut sec = Section::new(&[
        "fincat::check_category",
        "context::check_presheaf",
        "temporal::check_tree",
        "equiv::QuotientSystem::certify_compatibility",
        "adjunction::factor_through_meaning",
    ]);
    sec.header("LAWS");
    let mut failures = 0usize;
    let mut verdict = |sec: &mut Section, name: String, pass: bool, detail: String| {
        if !pass {
            failures += 1;
        }
        let status = if pass { "pass" } else { "FAIL" };
        if detail.is_empty() {
            sec.line(format!("{name}: {status}"));
        } else {
            sec.line(format!("{name}: {status}, {detail}"));
        }
    };
    if let Some(p) = model::presheaf(s) {
        let p = p?;
        let cat = check_category(&category_of(&p.poset))?;
        verdict(&mut sec, "context category".into(), cat.is_pass(), join_violations(&cat.violations));
        let laws = check_presheaf(&p);
        verdict(&mut sec, "presheaf".into(), laws.is_pass(), join_violations(&laws.violations));
        match model::context_chain(&p.poset) {
            Some(chain) if laws.is_pass() => {
                let tree = staged_tree(&p, &chain)?;
                let report = check_tree(&tree)?;
                let levels: Vec<String> =
                    tree.levels.iter().enumerate().map(|(n, l)| format!("X({n}) = {}", set_str(l))).collect();
                verdict(&mut sec, format!("staged tree {}", chain.join(" <= ")), report.is_pass(), levels.join(", "));
            }
            Some(_) => sec.line("staged tree: skipped, presheaf is not antitone"),
            None => sec.line("staged tree: skipped, contexts do not form a chain"),
        }
    }
    for f in &s.filters {
        let q = quotient_system(s, f.name.as_str(), None)?;
        let c = q.certify_compatibility();
        verdict(&mut sec, format!("filter {}", f.name.node), c.is_compatible(), c.to_string());
    }
    for m in &s.maps {
        let q = quotient_system(s, "", Some(m.name.as_str()))?;
        let c = q.certify_compatibility();
        verdict(&mut sec, format!("map {}", m.name.node), c.is_compatible(), c.to_string());
    }
    for h in &s.interpretations {
        let partition = make_partition(model::sentences(s), model::sentence_pairs(s))?;
        let q = QuotientFactorization {
            partition,
            meaning: model::interpretation(s, h.name.as_str()).expect("declared"),
            codomain: model::universe(s).into_iter().collect(),
        };
        match factor_through_meaning(&q) {
            Ok(fac) => {
                let mediator: Vec<String> = fac.mediator.iter().map(|(c, v)| format!("[{c}] -> {v}")).collect();
                let unique = fac.certificate.is_unique();
                let detail = format!("{}, {}", mediator.join(", "), if unique { "unique" } else { "not unique" });
                verdict(&mut sec, format!("interpretation {}", h.name.node), unique, detail);
            }
            Err(e) => verdict(&mut sec, format!("interpretation {}", h.name.node), false, e.to_string()),
        }
    }
    let result = if failures == 0 { "all laws hold".to_string() } else { format!("{failures} law check(s) failed") };
    sec.finish(result, failures > 0);
    Ok(sec)
}

fn join_violations<V: std::fmt::Display>(v: &[V]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn params(alpha: f64, beta: f64, eps: Option<f64>) -> Result<ScalarParams> {
    let p = ScalarParams::new(alpha, beta)?;
    match eps {
        Some(e) => p.with_epsilon(e),
        None => Ok(p),
    }
}

fn trajectory_lines(sec: &mut Section, record: &TrajectoryRecord) {
    let n = record.samples.len();
    for (i, (t, x)) in record.samples.iter().enumerate() {
        if n > TRAJECTORY_HEAD + TRAJECTORY_TAIL && i == TRAJECTORY_HEAD {
            sec.line(format!("... {} steps omitted", n - TRAJECTORY_HEAD - TRAJECTORY_TAIL));
        }
        if n <= TRAJECTORY_HEAD + TRAJECTORY_TAIL || i < TRAJECTORY_HEAD || i >= n - TRAJECTORY_TAIL {
            sec.line(format!("t={t}: {}", fmt17(*x)));
        }
    }
}

fn iterate_scalar(
    alpha: f64,
    beta: f64,
    x0: f64,
    eps: Option<f64>,
    plot: PlotTarget<'_>,
    stem: &str,
    artifacts: &mut Vec<PathBuf>,
) -> Result<Section> {
    let mut ops = vec!["scalar::contraction_report", "scalar::iterate"];
    if matches!(plot, PlotTarget::Dir(_)) {
        ops.push("scalar::emit_trajectory");
    }
    let mut sec = Section::new(&ops);
    let p = params(alpha, beta, eps)?;
    sec.line(format!(
        "alpha: {}, beta: {}, x0: {}, eps: {}, tol: {}, max_iter: {}",
        fmt_short(alpha),
        fmt_short(beta),
        fmt_short(x0),
        fmt_short(p.epsilon),
        fmt_short(p.tol),
        p.max_iter
    ));
    sec.line(format!("contraction: {}", scalar::contraction_report(&p)?));
    let record = scalar::iterate(&p, x0)?;
    sec.header("TRAJECTORY");
    trajectory_lines(&mut sec, &record);
    emit(&mut sec, plot, artifacts, |dir| {
        let path = dir.join(format!("{stem}.csv"));
        scalar::emit_trajectory(&record, &path)?;
        Ok(vec![path])
    })?;
    let failed = !matches!(record.status, TrajectoryStatus::Converged { .. });
    sec.finish(record.status.to_string(), failed);
    Ok(sec)
}

fn fixed_points(
    alpha: f64,
    beta: f64,
    range: (f64, f64),
    plot: PlotTarget<'_>,
    stem: &str,
    artifacts: &mut Vec<PathBuf>,
) -> Result<Section> {
    let mut ops = vec!["scalar::find_fixed_points"];
    if matches!(plot, PlotTarget::Dir(_)) {
        ops.extend(["scalar::map_plot", "scalar::emit_map_plot"]);
    }
    let mut sec = Section::new(&ops);
    let p = params(alpha, beta, None)?;
    sec.line(format!(
        "alpha: {}, beta: {}, range: [{}, {}]",
        fmt_short(alpha),
        fmt_short(beta),
        fmt_short(range.0),
        fmt_short(range.1)
    ));
    let points = scalar::find_fixed_points(&p, range.0, range.1)?;
    for fp in &points {
        sec.line(format!("x = {}, phi' = {}, {}", fmt17(fp.x), fmt17(fp.derivative), fp.stability));
    }
    emit(&mut sec, plot, artifacts, |dir| {
        let plot = scalar::map_plot(&p, range.0, range.1)?;
        scalar::emit_map_plot(&plot, dir, stem, true)
    })?;
    sec.finish(format!("{} fixed point(s)", points.len()), false);
    Ok(sec)
}

fn emit<F>(sec: &mut Section, plot: PlotTarget<'_>, artifacts: &mut Vec<PathBuf>, write: F) -> Result<()>
where
    F: FnOnce(&Path) -> Result<Vec<PathBuf>>,
{
    match plot {
        PlotTarget::None => {}
        PlotTarget::Skipped => sec.line("artifacts: skipped, no output directory"),
        PlotTarget::Dir(dir) => {
            let written = write(dir)?;
            let listed: Vec<String> = written.iter().map(|p| file_name(p)).collect();
            sec.line(format!("artifacts: {}", listed.join(", ")));
            artifacts.extend(written);
        }
    }
    Ok(())
}

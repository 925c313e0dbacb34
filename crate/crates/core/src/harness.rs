//! Command implementations behind the `graphlet` binary: loading, running,
//! repeated experiments, budget planning and provenance-stamped output.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::draw::{RngSource, Tape};
use crate::error::{Error, Result};
use crate::estimators::{self, motif_label, opt, EstimateReport, MotifPlan};
use crate::exact::{self, ExactCounts};
use crate::graph::Graph;
use crate::samplers::{worker_rng, Method, Sampler, Tally};
use crate::vertex;
use crate::weights::{Constants, IndexedGraph};

/// A sampler or the fork-tree plus 5-path combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Moss4,
    Moss4min,
    Moss5,
    T5,
    Path5,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            Self::Moss4 => vec![Method::Moss4],
            Self::Moss4min => vec![Method::Moss4Min],
            Self::Moss5 => vec![Method::T5, Method::Path5],
            Self::T5 => vec![Method::T5],
            Self::Path5 => vec![Method::Path5],
        }
    }

    pub fn nodes(self) -> usize {
        self.methods()[0].nodes()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    #[default]
    Direct,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything a sampling, experiment or planning command needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub method: MethodChoice,
    /// `K`, `Ǩ` or `K₁`.
    pub budget: u64,
    /// `K₂` for the combined 5-node estimator; defaults to `budget`.
    pub budget2: Option<u64>,
    pub repeats: u64,
    pub seed: u64,
    pub workers: usize,
    pub engine: EngineChoice,
    /// Direct engine: where to write the decision tape. Vertex engine:
    /// the tape to replay.
    pub tape: Option<PathBuf>,
    pub level: f64,
    pub ground_truth: Option<PathBuf>,
    pub epsilon: f64,
    pub delta: f64,
    /// Motifs to plan for; empty means every directly sampled motif.
    pub motifs: Vec<usize>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, method: MethodChoice) -> Self {
        Self {
            input: input.into(),
            method,
            budget: 1000,
            budget2: None,
            repeats: 1,
            seed: 0,
            workers: 1,
            engine: EngineChoice::Direct,
            tape: None,
            level: 0.95,
            ground_truth: None,
            epsilon: 0.1,
            delta: 0.01,
            motifs: Vec::new(),
        }
    }

    pub fn budget2(&self) -> u64 {
        self.budget2.unwrap_or(self.budget)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.budget == 0 || self.budget2 == Some(0) {
            return bad("budgets must be at least 1");
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad("level must be in (0, 1)");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad("delta must be in (0, 1)");
        }
        Ok(())
    }
}

/// Exit status for an error: 3 inapplicable method, 4 scale-cap refusal,
/// 2 for everything caused by the input or the flags.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Inapplicable { .. } => 3,
        Error::ScaleCap { .. } => 4,
        _ => 2,
    }
}

/// Seed for sub-run `index` of a master seed (splitmix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `part`-th sampler of a combined run; the first uses the
/// master seed itself.
fn part_seed(seed: u64, part: usize) -> u64 {
    if part == 0 {
        seed
    } else {
        derive_seed(seed, part as u64)
    }
}

pub fn load_graph(path: &Path) -> Result<IndexedGraph> {
    let file = File::open(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    IndexedGraph::new(Graph::load_edge_list(BufReader::new(file))?)
}

pub fn read_ground_truth(path: &Path) -> Result<ExactCounts> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    ExactCounts::from_json(&text)
}

/// Tool version, command, config echo, seed and graph hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub graph_sha256: String,
}

impl Provenance {
    pub fn new(command: &str, config: &impl Serialize, seed: Option<u64>, graph: &Graph) -> Result<Self> {
        Ok(Self {
            tool: "graphlet".into(),
            version: crate::VERSION.into(),
            command: command.into(),
            config: serde_json::to_value(config)?,
            seed,
            graph_sha256: graph.content_hash(),
        })
    }

    /// Leading `#` comment lines for CSV output.
    pub fn write_csv_header<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# tool: {} {}", self.tool, self.version)?;
        writeln!(out, "# command: {}", self.command)?;
        if let Some(seed) = self.seed {
            writeln!(out, "# seed: {seed}")?;
        }
        writeln!(out, "# graph_sha256: {}", self.graph_sha256)?;
        writeln!(out, "# config: {}", self.config)?;
        Ok(())
    }
}

/// A command result together with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct Document<T> {
    pub provenance: Provenance,
    #[serde(flatten)]
    pub body: T,
}

/// Anything that can be written as a provenance-stamped JSON or CSV file.
pub trait Output: Serialize {
    fn write_csv_rows(&self, out: &mut dyn Write) -> Result<()>;
}

impl<T: Output> Document<T> {
    pub fn write<W: Write>(&self, mut out: W, format: Format) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                self.provenance.write_csv_header(&mut out)?;
                self.body.write_csv_rows(&mut out)?;
            }
        }
        Ok(())
    }
}

// ---- stats

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub nodes: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub constants: Constants,
    /// `Γ / Γ̌`, absent when `Γ̌ = 0`.
    pub gamma_ratio: Option<f64>,
    pub warnings: Vec<String>,
}

impl Output for StatsReport {
    fn write_csv_rows(&self, out: &mut dyn Write) -> Result<()> {
        let c = &self.constants;
        writeln!(out, "key,value")?;
        writeln!(out, "nodes,{}", self.nodes)?;
        writeln!(out, "edges,{}", self.edges)?;
        writeln!(out, "max_degree,{}", self.max_degree)?;
        for (k, v) in [
            ("gamma", c.gamma),
            ("gamma_check", c.gamma_check),
            ("gamma1", c.gamma1),
            ("gamma2", c.gamma2),
            ("lambda3", c.lambda3),
            ("lambda4", c.lambda4),
        ] {
            writeln!(out, "{k},{v}")?;
        }
        writeln!(out, "gamma_ratio,{}", opt(self.gamma_ratio))?;
        for w in &self.warnings {
            writeln!(out, "warning,\"{w}\"")?;
        }
        Ok(())
    }
}

pub fn cmd_stats(g: &IndexedGraph) -> StatsReport {
    let c = g.constants();
    let warnings = Method::ALL
        .iter()
        .filter_map(|&m| Sampler::new(g, m).err().map(|e| e.to_string()))
        .collect();
    StatsReport {
        nodes: g.graph.node_count(),
        edges: g.graph.edge_count(),
        max_degree: g.graph.max_degree(),
        constants: c,
        gamma_ratio: (c.gamma_check > 0).then(|| c.gamma as f64 / c.gamma_check as f64),
        warnings,
    }
}

// ---- exact

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub counts: ExactCounts,
    pub total4: Option<u64>,
    pub total5: Option<u64>,
}

impl Output for ExactReport {
    fn write_csv_rows(&self, out: &mut dyn Write) -> Result<()> {
        self.counts.write_csv(out)
    }
}

pub fn cmd_exact(g: &IndexedGraph, sizes: &[usize], cap: u128) -> Result<ExactReport> {
    if sizes.is_empty() || sizes.iter().any(|&k| k != 4 && k != 5) {
        return Err(Error::InvalidArgument("motif sizes must be 4 and/or 5".into()));
    }
    let counts = exact::exact_counts(g, sizes, cap)?;
    Ok(ExactReport { total4: counts.total4(), total5: counts.total5(), counts })
}

// ---- sample

/// Superstep statistics of a vertex-engine run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStats {
    pub method: Method,
    pub message_supersteps: u32,
    pub messages: u64,
    pub nonlocal_messages: u64,
    pub root_nodes: usize,
}

/// Decision tapes of one sampling command, one per sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapeFile {
    pub seed: u64,
    pub workers: usize,
    pub tapes: BTreeMap<Method, Tape>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleResult {
    pub tallies: Vec<Tally>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub engine: Vec<EngineStats>,
    pub report: EstimateReport,
}

impl Output for SampleResult {
    fn write_csv_rows(&self, out: &mut dyn Write) -> Result<()> {
        self.report.write_csv(out)
    }
}

fn run_method(
    g: &IndexedGraph,
    method: Method,
    budget: u64,
    seed: u64,
    cfg: &RunConfig,
    replay: Option<&Tape>,
    record: bool,
) -> Result<(Tally, Option<Tape>, Option<EngineStats>)> {
    let sampler = Sampler::new(g, method)?;
    match cfg.engine {
        EngineChoice::Direct if record => {
            let (tally, tape) = sampler.run_recording(budget, seed, cfg.workers)?;
            Ok((tally, Some(tape), None))
        }
        EngineChoice::Direct => Ok((sampler.run(budget, seed, cfg.workers)?, None, None)),
        EngineChoice::Vertex => {
            let run = match replay {
                Some(tape) => vertex::replay(&sampler, tape, None)?,
                None => vertex::run_vertex(&sampler, budget, &mut RngSource::new(worker_rng(seed, 0)), None)?,
            };
            let stats = EngineStats {
                method,
                message_supersteps: run.message_supersteps,
                messages: run.messages,
                nonlocal_messages: run.nonlocal_messages,
                root_nodes: run.trials_per_root.len(),
            };
            Ok((run.tally, None, Some(stats)))
        }
    }
}

fn build_report(g: &IndexedGraph, tallies: &[Tally], level: f64) -> Result<EstimateReport> {
    let mut report = match tallies {
        [one] => estimators::estimate(one, g)?,
        [t5, path5] => estimators::estimate_moss5(t5, path5, g)?,
        _ => unreachable!("one or two samplers per run"),
    };
    report.set_level(level)?;
    Ok(report)
}

/// Runs the configured sampler(s) once. With the direct engine and a tape
/// path the decision tape is written there; with the vertex engine and a
/// tape path that tape is replayed instead of drawing fresh randomness.
pub fn cmd_sample(g: &IndexedGraph, cfg: &RunConfig) -> Result<SampleResult> {
    cfg.validate()?;
    let methods = cfg.method.methods();
    let replay: Option<TapeFile> = match (cfg.engine, &cfg.tape) {
        (EngineChoice::Vertex, Some(path)) => {
            let file = File::open(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            Some(serde_json::from_reader(BufReader::new(file))?)
        }
        _ => None,
    };
    let record = cfg.engine == EngineChoice::Direct && cfg.tape.is_some();
    let budgets = [cfg.budget, cfg.budget2()];

    let mut tallies = Vec::new();
    let mut engine = Vec::new();
    let mut tapes = BTreeMap::new();
    for (part, &method) in methods.iter().enumerate() {
        let tape = match &replay {
            Some(file) => Some(file.tapes.get(&method).ok_or_else(|| {
                Error::InvalidArgument(format!("tape file has no {method} tape"))
            })?),
            None => None,
        };
        let (tally, recorded, stats) = run_method(g, method, budgets[part], part_seed(cfg.seed, part), cfg, tape, record)?;
        tallies.push(tally);
        engine.extend(stats);
        if let Some(t) = recorded {
            tapes.insert(method, t);
        }
    }
    if let (true, Some(path)) = (record, &cfg.tape) {
        let file = TapeFile { seed: cfg.seed, workers: cfg.workers, tapes };
        let mut out = std::io::BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut out, &file)?;
        out.flush()?;
    }

    let mut report = build_report(g, &tallies, cfg.level)?;
    if let Some(path) = &cfg.ground_truth {
        if let Some(truth) = read_ground_truth(path)?.truth(cfg.method.nodes()) {
            report.attach_truth(&truth)?;
        }
    }
    Ok(SampleResult { tallies, engine, report })
}

// ---- experiment

/// Per-motif summary over `R` runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub id: usize,
    pub mean_estimate: f64,
    pub empirical_variance: f64,
    pub truth: Option<f64>,
    /// Analytic variance at the true frequencies.
    pub true_variance: Option<f64>,
    pub nrmse: Option<f64>,
    /// Analytic StdErr; from the mean plug-in variance when no truth is given.
    pub stderr: Option<f64>,
    pub nrmse_over_stderr: Option<f64>,
    pub mean_ci_low: f64,
    pub mean_ci_high: f64,
    /// Fraction of runs whose confidence interval covers the truth.
    pub coverage: Option<f64>,
    /// `NRMSE(MOSS-4) / NRMSE(MOSS-4Min)` at equal budgets, for motifs 3, 5, 6.
    pub nrmse_ratio_moss4: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub method: MethodChoice,
    pub nodes: usize,
    pub repeats: u64,
    pub budgets: Vec<u64>,
    /// Set when `R = 1`: NRMSE is then a single absolute error.
    pub nrmse_degenerate: bool,
    pub warnings: Vec<String>,
    pub rows: Vec<ExperimentRow>,
}

impl Output for ExperimentResult {
    fn write_csv_rows(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(
            out,
            "motif_id,estimate,variance,stderr,nrmse,ci_low,ci_high,truth,true_variance,nrmse_over_stderr,coverage,nrmse_ratio_moss4"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                motif_label(self.nodes, r.id),
                r.mean_estimate,
                r.empirical_variance,
                opt(r.stderr),
                opt(r.nrmse),
                r.mean_ci_low,
                r.mean_ci_high,
                opt(r.truth),
                opt(r.true_variance),
                opt(r.nrmse_over_stderr),
                opt(r.coverage),
                opt(r.nrmse_ratio_moss4),
            )?;
        }
        Ok(())
    }
}

struct Repetition {
    report: EstimateReport,
    moss4: Option<Vec<f64>>,
}

/// Seed of repetition `r`.
pub fn repetition_seed(seed: u64, r: u64) -> u64 {
    derive_seed(seed, (1 << 32) | r)
}

/// `R` independent runs summarized per motif. For MOSS-4Min a MOSS-4 run
/// with the same budget is made alongside each repetition and the NRMSE
/// ratio is reported.
pub fn cmd_experiment(g: &IndexedGraph, cfg: &RunConfig, truth: Option<&ExactCounts>) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.tape.is_some() {
        return Err(Error::InvalidArgument("tapes apply to single sampling runs only".into()));
    }
    let methods = cfg.method.methods();
    let nodes = cfg.method.nodes();
    let budgets: Vec<u64> = [cfg.budget, cfg.budget2()][..methods.len()].to_vec();
    let compare = cfg.method == MethodChoice::Moss4min;
    for &m in &methods {
        Sampler::new(g, m)?;
    }

    let reps: Vec<Repetition> = (0..cfg.repeats)
        .into_par_iter()
        .map(|r| {
            let seed = repetition_seed(cfg.seed, r);
            let mut tallies = Vec::new();
            for (part, &m) in methods.iter().enumerate() {
                tallies.push(run_method(g, m, budgets[part], part_seed(seed, part), cfg, None, false)?.0);
            }
            let report = build_report(g, &tallies, cfg.level)?;
            let moss4 = if compare {
                let (t, _, _) = run_method(g, Method::Moss4, cfg.budget, part_seed(seed, 1), cfg, None, false)?;
                Some(estimators::estimate_moss4(&t, g)?.estimates())
            } else {
                None
            };
            Ok(Repetition { report, moss4 })
        })
        .collect::<Result<_>>()?;

    let mut warnings = Vec::new();
    let truth = match truth.map(|t| t.truth(nodes)) {
        Some(Some(t)) => Some(t),
        Some(None) => {
            warnings.push(format!("ground truth has no {nodes}-node counts; NRMSE omitted"));
            None
        }
        None => {
            warnings.push("no ground truth; NRMSE omitted".into());
            None
        }
    };
    let nrmse_degenerate = cfg.repeats == 1;
    if nrmse_degenerate {
        warnings.push("R = 1: NRMSE is a single run's relative error".into());
    }
    let true_variance = match &truth {
        Some(t) => Some(reps[0].report.true_variances(t)?),
        None => None,
    };

    let estimates: Vec<Vec<f64>> = reps.iter().map(|r| r.report.estimates()).collect();
    let metrics = estimators::error_metrics(&estimates, truth.as_deref(), true_variance.as_deref());
    let moss4_estimates: Option<Vec<Vec<f64>>> = reps.iter().map(|r| r.moss4.clone()).collect();
    let reported: Vec<usize> = reps[0].report.motifs.iter().map(|m| m.id).collect();
    let rf = cfg.repeats as f64;

    let rows = reported
        .into_iter()
        .map(|id| {
            let m = &metrics[&id];
            let per_run = reps.iter().map(|r| r.report.motif(id).expect("same motifs every run"));
            let (mut lo, mut hi, mut var, mut covered) = (0.0, 0.0, 0.0, 0u64);
            for e in per_run {
                lo += e.ci_low;
                hi += e.ci_high;
                var += e.variance;
                if let Some(t) = m.truth {
                    covered += u64::from(e.ci_low <= t && t <= e.ci_high);
                }
            }
            let stderr = m.stderr.or_else(|| {
                (truth.is_none() && m.mean_estimate != 0.0).then(|| (var / rf).max(0.0).sqrt() / m.mean_estimate.abs())
            });
            let nrmse_ratio_moss4 = match (&moss4_estimates, m.truth) {
                (Some(est), Some(t)) if matches!(id, 3 | 5 | 6) => {
                    let xs: Vec<f64> = est.iter().map(|e| e[id - 1]).collect();
                    estimators::nrmse(&xs, t).zip(m.nrmse).filter(|&(_, b)| b > 0.0).map(|(a, b)| a / b)
                }
                _ => None,
            };
            ExperimentRow {
                id,
                mean_estimate: m.mean_estimate,
                empirical_variance: m.empirical_variance,
                truth: m.truth,
                true_variance: m.true_variance,
                nrmse: m.nrmse,
                stderr,
                nrmse_over_stderr: m.nrmse.zip(stderr).filter(|&(_, s)| s > 0.0).map(|(n, s)| n / s),
                mean_ci_low: lo / rf,
                mean_ci_high: hi / rf,
                coverage: m.truth.map(|_| covered as f64 / rf),
                nrmse_ratio_moss4,
            }
        })
        .collect();

    Ok(ExperimentResult { method: cfg.method, nodes, repeats: cfg.repeats, budgets, nrmse_degenerate, warnings, rows })
}

// ---- plan

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub method: Method,
    pub pilot_budget: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub motifs: Vec<MotifPlan>,
    pub max_budget: u64,
}

impl Output for PlanReport {
    fn write_csv_rows(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "motif_id,inclusion_probability,pilot_estimate,budget")?;
        for p in &self.motifs {
            writeln!(
                out,
                "{},{},{},{}",
                motif_label(self.method.nodes(), p.id),
                p.inclusion_probability,
                p.pilot_estimate,
                p.budget
            )?;
        }
        Ok(())
    }
}

/// Pilot run with `cfg.budget` trials, then the smallest budget meeting
/// `P(|n̂ − n| > εn) ≤ δ` under the normal approximation, per motif.
pub fn cmd_plan(g: &IndexedGraph, cfg: &RunConfig) -> Result<PlanReport> {
    cfg.validate()?;
    let method = match cfg.method.methods()[..] {
        [m] => m,
        _ => return Err(Error::InvalidArgument("plan one sampler at a time (t5 or path5)".into())),
    };
    let (tally, _, _) = run_method(g, method, cfg.budget, cfg.seed, cfg, None, false)?;
    let report = estimators::estimate(&tally, g)?;
    let motifs = estimators::plan_from_report(&report, &cfg.motifs, cfg.epsilon, cfg.delta)?;
    let max_budget = motifs.iter().map(|p| p.budget).max().unwrap_or(0);
    Ok(PlanReport { method, pilot_budget: cfg.budget, epsilon: cfg.epsilon, delta: cfg.delta, motifs, max_budget })
}

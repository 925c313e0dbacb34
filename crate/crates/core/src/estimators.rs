//! From hit tallies to frequency estimates, analytic (co)variances,
//! confidence intervals, estimator mixing and budget planning.
//!
//! Every estimator here has the same shape. A run `l` with budget `K_l`
//! credits motif `i` with per-trial probability `p_i^l · n_i`, so
//! `m_i^l / (K_l p_i^l)` is unbiased for `n_i`. The final estimate of a
//! directly sampled motif is a convex combination `Σ_l c_i^l m_i^l / (K_l p_i^l)`
//! over the runs that observe it, and at most one motif per size is derived
//! from a degree identity instead. Because each run's tally is multinomial,
//!
//! ```text
//! Cov(n̂_i, n̂_j) = Σ_l c_i^l c_j^l (δ_ij n_i / p_i^l − n_i n_j) / K_l
//! ```
//!
//! covers every variance and covariance formula the samplers need, and the
//! derived motif's row follows by linearity.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::catalog::MotifCatalog;
use crate::error::{Error, Result};
use crate::samplers::{Method, Tally};
use crate::weights::{Constants, IndexedGraph};

/// Per-motif inclusion probabilities `p_i` of `method` (`p[i - 1]`, zero when
/// the method never credits motif `i`).
pub fn inclusion_probabilities(method: Method, constants: &Constants) -> Vec<f64> {
    let catalog = MotifCatalog::global();
    let total = constants.total(method.root_weight()) as f64;
    match method {
        Method::Moss4 => (1..=6).map(|i| 2.0 * catalog.phi4(i).0 as f64 / total).collect(),
        Method::Moss4Min => (1..=6)
            .map(|i| match i {
                3 | 5 => 2.0 / total,
                6 => 6.0 / total,
                _ => 0.0,
            })
            .collect(),
        Method::T5 => (1..=21).map(|i| 2.0 * catalog.phi5(i).0 as f64 / total).collect(),
        Method::Path5 => (1..=21).map(|i| 2.0 * catalog.phi5(i).1 as f64 / total).collect(),
    }
}

/// A motif whose estimate is `constant − Σ_i coeff[i-1] · n̂_i`.
#[derive(Debug, Clone, PartialEq)]
struct Derived {
    id: usize,
    constant: f64,
    coeff: Vec<f64>,
}

/// Which runs feed which motifs, and how.
#[derive(Debug, Clone, PartialEq)]
struct Design {
    motif_count: usize,
    budgets: Vec<f64>,
    /// `p[l][i-1]`.
    p: Vec<Vec<f64>>,
    derived: Option<Derived>,
}

impl Design {
    fn observed(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.p.len()).filter(move |&l| self.p[l][i] > 0.0)
    }

    /// `m_i^l / (K_l p_i^l)` for every run and motif (zero where unobserved).
    fn sub_estimates(&self, hits: &[Vec<u64>]) -> Vec<Vec<f64>> {
        (0..self.p.len())
            .map(|l| {
                (0..self.motif_count)
                    .map(|i| {
                        let p = self.p[l][i];
                        if p > 0.0 {
                            hits[l][i] as f64 / (self.budgets[l] * p)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Budget-weighted average of the sub-estimates of each motif.
    fn pooled(&self, sub: &[Vec<f64>]) -> Vec<f64> {
        (0..self.motif_count)
            .map(|i| {
                let (mut num, mut den) = (0.0, 0.0);
                for l in self.observed(i) {
                    num += self.budgets[l] * sub[l][i];
                    den += self.budgets[l];
                }
                if den > 0.0 {
                    num / den
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Inverse-variance weights `c[l][i-1]`. The common factor `n_i` of every
    /// run's variance cancels, leaving `c_l ∝ K_l / (1/p_l − plug)`; a
    /// non-positive plug-in or negative bracket falls back to `1/p_l`.
    fn weights(&self, plug: &[f64]) -> Vec<Vec<f64>> {
        let mut c = vec![vec![0.0; self.motif_count]; self.p.len()];
        for i in 0..self.motif_count {
            let runs: Vec<usize> = self.observed(i).collect();
            if runs.len() == 1 {
                c[runs[0]][i] = 1.0;
                continue;
            }
            let spread: Vec<f64> = runs
                .iter()
                .map(|&l| {
                    let inv = 1.0 / self.p[l][i];
                    let a = inv - plug[i];
                    let a = if plug[i] > 0.0 && a >= 0.0 { a } else { inv };
                    a / self.budgets[l]
                })
                .collect();
            let certain = spread.iter().filter(|&&s| s == 0.0).count();
            for (&l, &s) in runs.iter().zip(&spread) {
                c[l][i] = if certain > 0 {
                    if s == 0.0 {
                        1.0 / certain as f64
                    } else {
                        0.0
                    }
                } else {
                    let inv_sum: f64 = spread.iter().map(|s| 1.0 / s).sum();
                    (1.0 / s) / inv_sum
                };
            }
        }
        c
    }

    fn combine(&self, sub: &[Vec<f64>], c: &[Vec<f64>]) -> Vec<f64> {
        let mut est: Vec<f64> = (0..self.motif_count)
            .map(|i| (0..self.p.len()).map(|l| c[l][i] * sub[l][i]).sum())
            .collect();
        if let Some(d) = &self.derived {
            est[d.id - 1] = d.constant - d.coeff.iter().zip(&est).map(|(a, e)| a * e).sum::<f64>();
        }
        est
    }

    /// Full covariance matrix under plug-in values `n` and weights `c`.
    fn covariance(&self, c: &[Vec<f64>], n: &[f64]) -> Vec<Vec<f64>> {
        let m = self.motif_count;
        let mut cov = vec![vec![0.0; m]; m];
        for l in 0..self.p.len() {
            let k = self.budgets[l];
            for i in 0..m {
                if c[l][i] == 0.0 {
                    continue;
                }
                for j in 0..m {
                    if c[l][j] == 0.0 {
                        continue;
                    }
                    let mut term = -n[i] * n[j];
                    if i == j {
                        term += n[i] / self.p[l][i];
                    }
                    cov[i][j] += c[l][i] * c[l][j] * term / k;
                }
            }
        }
        if let Some(d) = &self.derived {
            let di = d.id - 1;
            let row: Vec<f64> = (0..m)
                .map(|j| -(0..m).map(|i| d.coeff[i] * cov[i][j]).sum::<f64>())
                .collect();
            let var: f64 = (0..m).map(|j| -d.coeff[j] * row[j]).sum();
            for j in 0..m {
                cov[di][j] = row[j];
                cov[j][di] = row[j];
            }
            // a sum of squares up to rounding
            cov[di][di] = var.max(0.0);
        }
        for (i, row) in cov.iter_mut().enumerate() {
            row[i] = row[i].max(0.0);
        }
        cov
    }

    fn reported(&self) -> Vec<usize> {
        (1..=self.motif_count)
            .filter(|&i| {
                self.observed(i - 1).next().is_some() || self.derived.as_ref().is_some_and(|d| d.id == i)
            })
            .collect()
    }
}

/// Summary of one sampling run feeding a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub method: Method,
    pub budget: u64,
    pub hits: Vec<u64>,
    pub degenerate_trials: u64,
    pub noncredited: u64,
    /// Inclusion probability per motif ID (`p[i - 1]`).
    pub inclusion_probability: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifEstimate {
    pub id: usize,
    pub estimate: f64,
    /// Analytic variance with the run's own estimates plugged in.
    pub variance: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Weight of each run's sub-estimate (empty for the derived motif).
    pub mixing_weights: Vec<f64>,
    pub derived: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truth: Option<f64>,
    /// Analytic variance evaluated at the true frequencies.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub true_variance: Option<f64>,
    /// `sqrt(true_variance) / truth`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    /// `|estimate − truth| / truth` for this single run.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nrmse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEntry {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: String,
    /// Motif size, 4 or 5.
    pub nodes: usize,
    pub level: f64,
    pub constants: Constants,
    pub runs: Vec<RunSummary>,
    pub motifs: Vec<MotifEstimate>,
    /// Off-diagonal covariances between reported motifs, `i < j`.
    pub covariance: Vec<CovarianceEntry>,
    #[serde(skip)]
    design: Option<Design>,
}

impl EstimateReport {
    fn assemble(label: &str, nodes: usize, constants: Constants, tallies: &[&Tally], derived: Option<Derived>) -> Result<Self> {
        let motif_count = if nodes == 4 { 6 } else { 21 };
        let mut runs = Vec::new();
        for t in tallies {
            if t.budget == 0 {
                return Err(Error::InvalidArgument(format!("{} budget must be at least 1", t.method)));
            }
            if t.method.motif_count() != motif_count {
                return Err(Error::InvalidArgument("tallies of different motif sizes".into()));
            }
            runs.push(RunSummary {
                method: t.method,
                budget: t.budget,
                hits: t.hits.clone(),
                degenerate_trials: t.degenerate_trials,
                noncredited: t.noncredited,
                inclusion_probability: inclusion_probabilities(t.method, &constants),
            });
        }
        let design = Design {
            motif_count,
            budgets: runs.iter().map(|r| r.budget as f64).collect(),
            p: runs.iter().map(|r| r.inclusion_probability.clone()).collect(),
            derived,
        };
        let hits: Vec<Vec<u64>> = runs.iter().map(|r| r.hits.clone()).collect();
        let sub = design.sub_estimates(&hits);
        let plug = design.pooled(&sub);
        let c = design.weights(&plug);
        let est = design.combine(&sub, &c);
        let cov = design.covariance(&c, &plug);
        let ids = design.reported();

        let motifs = ids
            .iter()
            .map(|&i| {
                let derived = design.derived.as_ref().is_some_and(|d| d.id == i);
                MotifEstimate {
                    id: i,
                    estimate: est[i - 1],
                    variance: cov[i - 1][i - 1],
                    ci_low: est[i - 1],
                    ci_high: est[i - 1],
                    mixing_weights: if derived { Vec::new() } else { c.iter().map(|cl| cl[i - 1]).collect() },
                    derived,
                    truth: None,
                    true_variance: None,
                    stderr: None,
                    nrmse: None,
                }
            })
            .collect();
        let mut covariance = Vec::new();
        for (a, &i) in ids.iter().enumerate() {
            for &j in &ids[a + 1..] {
                covariance.push(CovarianceEntry { i, j, value: cov[i - 1][j - 1] });
            }
        }
        let mut report = Self {
            method: label.to_string(),
            nodes,
            level: 0.95,
            constants,
            runs,
            motifs,
            covariance,
            design: Some(design),
        };
        report.set_level(0.95)?;
        Ok(report)
    }

    /// Recomputes every confidence interval at `level`.
    pub fn set_level(&mut self, level: f64) -> Result<()> {
        let z = normal_quantile_two_sided(level)?;
        self.level = level;
        for m in &mut self.motifs {
            let hw = z * m.variance.sqrt();
            m.ci_low = m.estimate - hw;
            m.ci_high = m.estimate + hw;
        }
        Ok(())
    }

    pub fn motif(&self, id: usize) -> Option<&MotifEstimate> {
        self.motifs.iter().find(|m| m.id == id)
    }

    /// Estimates indexed by motif ID (`out[i - 1]`, zero when not reported).
    pub fn estimates(&self) -> Vec<f64> {
        let mut out = vec![0.0; if self.nodes == 4 { 6 } else { 21 }];
        for m in &self.motifs {
            out[m.id - 1] = m.estimate;
        }
        out
    }

    /// Analytic variances with the true frequencies plugged in, including
    /// the mixing weights they imply. Requires a report built in this process.
    pub fn true_variances(&self, truth: &[f64]) -> Result<Vec<f64>> {
        let design = self
            .design
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("report was not built in this process".into()))?;
        if truth.len() != design.motif_count {
            return Err(Error::InvalidArgument("ground truth has the wrong motif count".into()));
        }
        let c = design.weights(truth);
        let cov = design.covariance(&c, truth);
        Ok((0..design.motif_count).map(|i| cov[i][i]).collect())
    }

    /// Analytic covariance matrix at the true frequencies.
    pub fn true_covariance(&self, truth: &[f64]) -> Result<Vec<Vec<f64>>> {
        let design = self
            .design
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("report was not built in this process".into()))?;
        let c = design.weights(truth);
        Ok(design.covariance(&c, truth))
    }

    /// Fills truth, true-form variance, StdErr and single-run NRMSE. Motifs
    /// with zero truth get no metrics.
    pub fn attach_truth(&mut self, truth: &[f64]) -> Result<()> {
        let var = self.true_variances(truth)?;
        for m in &mut self.motifs {
            let n = truth[m.id - 1];
            m.truth = Some(n);
            m.true_variance = Some(var[m.id - 1]);
            if n > 0.0 {
                m.stderr = Some(var[m.id - 1].sqrt() / n);
                m.nrmse = Some((m.estimate - n).abs() / n);
            } else {
                m.stderr = None;
                m.nrmse = None;
            }
        }
        Ok(())
    }

    /// One CSV row per motif: `motif_id, estimate, variance, stderr, nrmse, ci_low, ci_high`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "motif_id,estimate,variance,stderr,nrmse,ci_low,ci_high")?;
        for m in &self.motifs {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                motif_label(self.nodes, m.id),
                m.estimate,
                m.variance,
                opt(m.stderr),
                opt(m.nrmse),
                m.ci_low,
                m.ci_high
            )?;
        }
        Ok(())
    }
}

/// `m4_6`, `m5_21`, ...
pub fn motif_label(nodes: usize, id: usize) -> String {
    format!("m{nodes}_{id}")
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn single_report(tally: &Tally, constants: Constants, derived: Option<Derived>) -> Result<EstimateReport> {
    EstimateReport::assemble(tally.method.name(), tally.method.nodes(), constants, &[tally], derived)
}

fn star3_identity(constants: &Constants) -> Derived {
    let catalog = MotifCatalog::global();
    let coeff = (1..=6).map(|i| if i == 2 { 0.0 } else { catalog.phi4(i).1 as f64 }).collect();
    Derived { id: 2, constant: constants.lambda3 as f64, coeff }
}

fn star4_identity(constants: &Constants) -> Derived {
    let catalog = MotifCatalog::global();
    let star = catalog.omega3_star();
    let coeff = (1..=21).map(|i| if star.contains(&i) { catalog.phi5(i).2 as f64 } else { 0.0 }).collect();
    Derived { id: 2, constant: constants.lambda4 as f64, coeff }
}

fn expect_method(tally: &Tally, method: Method) -> Result<()> {
    if tally.method != method {
        return Err(Error::InvalidArgument(format!("expected a {method} tally, got {}", tally.method)));
    }
    Ok(())
}

/// All six 4-node frequencies from a 3-path sampler run; the 3-star count
/// follows from `Λ₃ = n₂ + n₄ + 2n₅ + 4n₆`.
pub fn estimate_moss4(tally: &Tally, g: &IndexedGraph) -> Result<EstimateReport> {
    expect_method(tally, Method::Moss4)?;
    let c = g.constants();
    single_report(tally, c, Some(star3_identity(&c)))
}

/// Frequencies of motifs 3, 5 and 6 from an order-centered run.
pub fn estimate_moss4min(tally: &Tally, g: &IndexedGraph) -> Result<EstimateReport> {
    expect_method(tally, Method::Moss4Min)?;
    single_report(tally, g.constants(), None)
}

/// Fork-tree-only estimates for the motifs it reaches.
pub fn estimate_t5(tally: &Tally, g: &IndexedGraph) -> Result<EstimateReport> {
    expect_method(tally, Method::T5)?;
    single_report(tally, g.constants(), None)
}

/// 5-path-only estimates for the motifs it reaches.
pub fn estimate_path5(tally: &Tally, g: &IndexedGraph) -> Result<EstimateReport> {
    expect_method(tally, Method::Path5)?;
    single_report(tally, g.constants(), None)
}

/// All 21 five-node frequencies: fork-tree and 5-path sub-estimates mixed by
/// inverse variance, and the 4-star from `Λ₄ = Σ φ_i⁽³⁾ η_i`.
pub fn estimate_moss5(t5: &Tally, path5: &Tally, g: &IndexedGraph) -> Result<EstimateReport> {
    expect_method(t5, Method::T5)?;
    expect_method(path5, Method::Path5)?;
    let c = g.constants();
    EstimateReport::assemble("moss5", 5, c, &[t5, path5], Some(star4_identity(&c)))
}

/// Both 4-node samplers together: motifs 3, 5 and 6 mix the two runs by
/// inverse variance, the rest come from the 3-path run alone.
pub fn estimate_moss4_combined(full: &Tally, min: &Tally, g: &IndexedGraph) -> Result<EstimateReport> {
    expect_method(full, Method::Moss4)?;
    expect_method(min, Method::Moss4Min)?;
    let c = g.constants();
    EstimateReport::assemble("moss4+moss4min", 4, c, &[full, min], Some(star3_identity(&c)))
}

/// Dispatches on the tally's method.
pub fn estimate(tally: &Tally, g: &IndexedGraph) -> Result<EstimateReport> {
    match tally.method {
        Method::Moss4 => estimate_moss4(tally, g),
        Method::Moss4Min => estimate_moss4min(tally, g),
        Method::T5 => estimate_t5(tally, g),
        Method::Path5 => estimate_path5(tally, g),
    }
}

/// Inverse-variance combination of two independent unbiased estimates.
/// Returns `(estimate, variance)`.
pub fn mix_estimates(a: (f64, f64), b: (f64, f64)) -> Result<(f64, f64)> {
    if a.1 < 0.0 || b.1 < 0.0 || a.1.is_nan() || b.1.is_nan() {
        return Err(Error::InvalidArgument("variances must be non-negative".into()));
    }
    if a.1 == 0.0 {
        return Ok((a.0, 0.0));
    }
    if b.1 == 0.0 {
        return Ok((b.0, 0.0));
    }
    let (ia, ib) = (1.0 / a.1, 1.0 / b.1);
    Ok(((ia * a.0 + ib * b.0) / (ia + ib), 1.0 / (ia + ib)))
}

/// `z` such that a standard normal lies in `[−z, z]` with probability `level`.
pub fn normal_quantile_two_sided(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level {level} is outside (0, 1)")));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(0.5 + level / 2.0))
}

/// Half-width `z · sqrt(variance)` of the normal confidence interval.
pub fn confidence_half_width(variance: f64, level: f64) -> Result<f64> {
    if variance < 0.0 {
        return Err(Error::InvalidArgument("variance must be non-negative".into()));
    }
    Ok(normal_quantile_two_sided(level)? * variance.sqrt())
}

/// Approximate upper-tail mass `e^{−ε²/2} / (sqrt(2π) ε)` of a standard
/// normal beyond `ε` standard deviations.
pub fn gaussian_tail_bound(epsilon: f64) -> Result<f64> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    Ok((-epsilon * epsilon / 2.0).exp() / ((2.0 * std::f64::consts::PI).sqrt() * epsilon))
}

/// Smallest budget `K` with `z_{1−δ/2} sqrt((1/(p n) − 1)/K) ≤ ε`, at least 1.
pub fn plan_budget(p: f64, pilot_estimate: f64, epsilon: f64, delta: f64) -> Result<u64> {
    if !(p > 0.0) {
        return Err(Error::InvalidArgument("inclusion probability must be positive".into()));
    }
    if !(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument("need epsilon > 0 and 0 < delta < 1".into()));
    }
    if !(pilot_estimate > 0.0) {
        return Err(Error::InvalidArgument("pilot produced no hits; increase pilot budget".into()));
    }
    let z = normal_quantile_two_sided(1.0 - delta)?;
    let spread = (1.0 / (p * pilot_estimate) - 1.0).max(0.0);
    Ok(((z * z * spread / (epsilon * epsilon)).ceil() as u64).max(1))
}

/// Budget planned for one motif.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifPlan {
    pub id: usize,
    pub inclusion_probability: f64,
    pub pilot_estimate: f64,
    pub budget: u64,
}

/// Plans budgets for `motifs` (all directly sampled motifs with pilot hits
/// when empty) from a single-method pilot report.
pub fn plan_from_report(report: &EstimateReport, motifs: &[usize], epsilon: f64, delta: f64) -> Result<Vec<MotifPlan>> {
    let run = report
        .runs
        .first()
        .filter(|_| report.runs.len() == 1)
        .ok_or_else(|| Error::InvalidArgument("planning needs a single-method pilot".into()))?;
    let explicit = !motifs.is_empty();
    let ids: Vec<usize> = if explicit {
        motifs.to_vec()
    } else {
        (1..=run.hits.len()).filter(|&i| run.inclusion_probability[i - 1] > 0.0).collect()
    };
    let mut plans = Vec::new();
    for id in ids {
        let p = *run
            .inclusion_probability
            .get(id.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidArgument(format!("motif {id} does not exist")))?;
        if p == 0.0 {
            return Err(Error::InvalidArgument(format!("motif {id} is not sampled directly by {}", run.method)));
        }
        if run.hits[id - 1] == 0 {
            if explicit {
                return Err(Error::NoPilotHits(id));
            }
            continue;
        }
        let pilot = report.motif(id).map(|m| m.estimate).unwrap_or(0.0);
        plans.push(MotifPlan { id, inclusion_probability: p, pilot_estimate: pilot, budget: plan_budget(p, pilot, epsilon, delta)? });
    }
    Ok(plans)
}

/// `sqrt(mean((x − truth)²)) / truth`; `None` when `truth` is zero or there
/// are no runs.
pub fn nrmse(estimates: &[f64], truth: f64) -> Option<f64> {
    if truth == 0.0 || estimates.is_empty() {
        return None;
    }
    let mse = estimates.iter().map(|x| (x - truth).powi(2)).sum::<f64>() / estimates.len() as f64;
    Some(mse.sqrt() / truth)
}

/// `sqrt(variance) / truth`; `None` when `truth` is zero.
pub fn std_err(true_variance: f64, truth: f64) -> Option<f64> {
    (truth != 0.0).then(|| true_variance.max(0.0).sqrt() / truth)
}

/// Mean and unbiased sample variance.
pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}

/// Unbiased sample covariance of paired observations.
pub fn sample_covariance(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / (n - 1.0)
}

/// Per-motif error metrics over repeated runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub id: usize,
    pub mean_estimate: f64,
    pub empirical_variance: f64,
    pub truth: Option<f64>,
    pub true_variance: Option<f64>,
    pub nrmse: Option<f64>,
    pub stderr: Option<f64>,
}

/// NRMSE and StdErr for each motif, from `estimates[run][i - 1]`.
pub fn error_metrics(estimates: &[Vec<f64>], truth: Option<&[f64]>, true_variance: Option<&[f64]>) -> BTreeMap<usize, ErrorMetrics> {
    let count = estimates.first().map(Vec::len).unwrap_or(0);
    (1..=count)
        .map(|id| {
            let xs: Vec<f64> = estimates.iter().map(|e| e[id - 1]).collect();
            let (mean, var) = mean_and_variance(&xs);
            let t = truth.map(|t| t[id - 1]);
            let tv = true_variance.map(|v| v[id - 1]);
            let metrics = ErrorMetrics {
                id,
                mean_estimate: mean,
                empirical_variance: var,
                truth: t,
                true_variance: tv,
                nrmse: t.and_then(|t| nrmse(&xs, t)),
                stderr: t.zip(tv).and_then(|(t, v)| std_err(v, t)),
            };
            (id, metrics)
        })
        .collect()
}

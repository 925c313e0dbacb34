//! The four subgraph samplers and their hit tallies.
//!
//! A trial draws a root node by its global weight and then walks a few
//! neighbor steps; if the walk touches the target number of distinct nodes,
//! the induced subgraph is classified and its motif credited. Each step is a
//! separate function so the vertex-centric engine can execute exactly the
//! same draws at the node that owns them.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::MotifCatalog;
use crate::draw::{Choice, DrawSource, RngSource, Tape};
use crate::error::{Error, Result};
use crate::weights::{sample_uniform, sample_uniform_excluding, IndexedGraph, RootWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Moss4,
    Moss4Min,
    T5,
    Path5,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Moss4, Method::Moss4Min, Method::T5, Method::Path5];

    pub fn name(self) -> &'static str {
        match self {
            Method::Moss4 => "moss4",
            Method::Moss4Min => "moss4min",
            Method::T5 => "t5",
            Method::Path5 => "path5",
        }
    }

    pub fn root_weight(self) -> RootWeight {
        match self {
            Method::Moss4 => RootWeight::Gamma,
            Method::Moss4Min => RootWeight::GammaCheck,
            Method::T5 => RootWeight::Gamma1,
            Method::Path5 => RootWeight::Gamma2,
        }
    }

    /// Nodes per sampled subgraph.
    pub fn nodes(self) -> usize {
        match self {
            Method::Moss4 | Method::Moss4Min => 4,
            Method::T5 | Method::Path5 => 5,
        }
    }

    /// Number of motif classes of that size.
    pub fn motif_count(self) -> usize {
        if self.nodes() == 4 {
            6
        } else {
            21
        }
    }

    fn missing_structure(self) -> &'static str {
        match self {
            Method::Moss4 => "graph contains no 3-path",
            Method::Moss4Min => "no centered 3-path under the node order",
            Method::T5 => "graph contains no fork tree",
            Method::Path5 => "graph contains no 5-path center",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// A subgraph of this motif ID was sampled and credited.
    Hit(usize),
    /// A valid subgraph was sampled but the method does not credit its class.
    NonCredited(usize),
    /// The walk revisited a node.
    Degenerate,
}

/// Per-motif hit counts of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub method: Method,
    pub budget: u64,
    /// `hits[i - 1]` is the number of trials crediting motif `i`.
    pub hits: Vec<u64>,
    pub degenerate_trials: u64,
    /// Valid subgraphs of a class the method does not credit.
    pub noncredited: u64,
}

impl Tally {
    pub fn new(method: Method) -> Self {
        Self { method, budget: 0, hits: vec![0; method.motif_count()], degenerate_trials: 0, noncredited: 0 }
    }

    pub fn record(&mut self, outcome: Outcome) {
        self.budget += 1;
        match outcome {
            Outcome::Hit(id) => self.hits[id - 1] += 1,
            Outcome::NonCredited(_) => self.noncredited += 1,
            Outcome::Degenerate => self.degenerate_trials += 1,
        }
    }

    /// Hits of motif `id` (1-based).
    pub fn hits(&self, id: usize) -> u64 {
        self.hits[id - 1]
    }

    pub fn merge(&mut self, other: &Tally) -> Result<()> {
        if other.method != self.method {
            return Err(Error::InvalidArgument("cannot merge tallies of different methods".into()));
        }
        self.budget += other.budget;
        for (a, b) in self.hits.iter_mut().zip(&other.hits) {
            *a += b;
        }
        self.degenerate_trials += other.degenerate_trials;
        self.noncredited += other.noncredited;
        Ok(())
    }

    /// `Σ hits + degenerate + non-credited = budget`.
    pub fn is_consistent(&self) -> bool {
        self.hits.iter().sum::<u64>() + self.degenerate_trials + self.noncredited == self.budget
    }
}

/// Nodes drawn at the root of a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct RootDraws {
    pub u: usize,
    pub w: usize,
    /// Only the fork-tree sampler draws a third root neighbor.
    pub r: Option<usize>,
}

/// The PRNG of worker `worker` under master seed `seed`.
pub fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// Splits `budget` trials into `workers` contiguous `(first_trial, count)` ranges.
pub fn partition(budget: u64, workers: usize) -> Vec<(u64, u64)> {
    let w = workers.max(1) as u64;
    let (base, extra) = (budget / w, budget % w);
    let mut start = 0;
    (0..w)
        .map(|i| {
            let len = base + u64::from(i < extra);
            let range = (start, len);
            start += len;
            range
        })
        .collect()
}

/// Runs one method on one graph.
#[derive(Debug, Clone, Copy)]
pub struct Sampler<'g> {
    g: &'g IndexedGraph,
    method: Method,
    catalog: &'static MotifCatalog,
}

impl<'g> Sampler<'g> {
    /// Fails with [`Error::Inapplicable`] when the method's root weight is zero.
    pub fn new(g: &'g IndexedGraph, method: Method) -> Result<Self> {
        if g.constants().total(method.root_weight()) == 0 {
            return Err(Error::Inapplicable { method: method.name(), reason: method.missing_structure() });
        }
        Ok(Self { g, method, catalog: MotifCatalog::global() })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn graph(&self) -> &'g IndexedGraph {
        self.g
    }

    pub(crate) fn draw_root<S: DrawSource>(&self, src: &mut S) -> Result<usize> {
        self.g.weights.sample_node(self.method.root_weight(), src)
    }

    pub(crate) fn at_root<S: DrawSource>(&self, v: usize, src: &mut S) -> Result<RootDraws> {
        let (graph, weights) = (&self.g.graph, &self.g.weights);
        Ok(match self.method {
            Method::Moss4 => {
                let u = weights.sample_neighbor_sigma(graph, v, src)?;
                let w = sample_uniform_excluding(graph, v, &[u], Choice::W, src)?;
                RootDraws { u, w, r: None }
            }
            Method::Moss4Min => {
                let u = weights.sample_neighbor_sigma_check(graph, v, src)?;
                let w = sample_uniform(self.g.order.above(v, u), Choice::W, src)?;
                RootDraws { u, w, r: None }
            }
            Method::T5 => {
                let u = weights.sample_neighbor_sigma(graph, v, src)?;
                let w = sample_uniform_excluding(graph, v, &[u], Choice::W, src)?;
                let r = sample_uniform_excluding(graph, v, &[u, w], Choice::R, src)?;
                RootDraws { u, w, r: Some(r) }
            }
            Method::Path5 => {
                let u = weights.sample_neighbor_tau(graph, v, src)?;
                let w = weights.sample_neighbor_mu_excluding(graph, v, u, src)?;
                RootDraws { u, w, r: None }
            }
        })
    }

    /// The draw made at `u`: `r` for the 4-node samplers and the 5-path
    /// sampler, `t` for the fork-tree sampler.
    pub(crate) fn at_u<S: DrawSource>(&self, u: usize, v: usize, src: &mut S) -> Result<usize> {
        let graph = &self.g.graph;
        match self.method {
            Method::Moss4 | Method::Path5 => sample_uniform_excluding(graph, u, &[v], Choice::R, src),
            Method::Moss4Min => sample_uniform(self.g.order.above(u, v), Choice::R, src),
            Method::T5 => sample_uniform_excluding(graph, u, &[v], Choice::T, src),
        }
    }

    /// The 5-path sampler's last draw, made at `w`.
    pub(crate) fn at_w<S: DrawSource>(&self, w: usize, v: usize, src: &mut S) -> Result<usize> {
        sample_uniform_excluding(&self.g.graph, w, &[v], Choice::T, src)
    }

    /// True when the sampled role nodes `[v, u, w, r(, t)]` are distinct,
    /// using exactly the comparisons each algorithm prescribes.
    pub(crate) fn distinct(&self, nodes: &[usize]) -> bool {
        match self.method {
            Method::Moss4 => {
                let (u, w, r) = (nodes[1], nodes[2], nodes[3]);
                r != u && r != w
            }
            Method::Moss4Min => nodes[3] != nodes[2],
            Method::T5 => {
                let (w, r, t) = (nodes[2], nodes[3], nodes[4]);
                t != w && t != r
            }
            Method::Path5 => {
                let (u, w, r, t) = (nodes[1], nodes[2], nodes[3], nodes[4]);
                t != u && r != w && t != r
            }
        }
    }

    /// Classifies the induced subgraph whose pair mask over the role nodes
    /// is `mask` and applies the method's crediting rule.
    pub(crate) fn credit(&self, mask: u16) -> Outcome {
        let id = if self.method.nodes() == 4 {
            self.catalog.classify4_mask(mask)
        } else {
            self.catalog.classify5_mask(mask)
        }
        .expect("sampled role nodes always induce a connected subgraph");
        match self.method {
            Method::Moss4Min if !matches!(id, 3 | 5 | 6) => Outcome::NonCredited(id),
            _ => Outcome::Hit(id),
        }
    }

    /// One trial, drawing every random choice from `src`.
    pub fn trial<S: DrawSource>(&self, src: &mut S) -> Result<Outcome> {
        let v = self.draw_root(src)?;
        let RootDraws { u, w, r } = self.at_root(v, src)?;
        let mut nodes = [v, u, w, 0, 0];
        let len = self.method.nodes();
        match self.method {
            Method::Moss4 | Method::Moss4Min => nodes[3] = self.at_u(u, v, src)?,
            Method::T5 => {
                nodes[3] = r.expect("fork-tree root draws r");
                nodes[4] = self.at_u(u, v, src)?;
            }
            Method::Path5 => {
                nodes[3] = self.at_u(u, v, src)?;
                nodes[4] = self.at_w(w, v, src)?;
            }
        }
        if !self.distinct(&nodes[..len]) {
            return Ok(Outcome::Degenerate);
        }
        Ok(self.credit(self.g.graph.induced_mask(&nodes[..len])))
    }

    /// Runs trials `first_trial .. first_trial + budget` from one source.
    pub fn run_with<S: DrawSource>(&self, budget: u64, first_trial: u64, src: &mut S) -> Result<Tally> {
        let mut tally = Tally::new(self.method);
        for k in 0..budget {
            src.begin_trial(first_trial + k);
            tally.record(self.trial(src)?);
        }
        Ok(tally)
    }

    fn run_partitioned(&self, budget: u64, seed: u64, workers: usize, record: bool) -> Result<(Tally, Tape)> {
        if budget == 0 {
            return Err(Error::InvalidArgument("budget must be at least 1".into()));
        }
        let parts: Vec<Result<(Tally, Tape)>> = partition(budget, workers)
            .into_par_iter()
            .enumerate()
            .map(|(worker, (start, len))| {
                let rng = worker_rng(seed, worker);
                let mut src = if record { RngSource::recording(rng) } else { RngSource::new(rng) };
                let tally = self.run_with(len, start, &mut src)?;
                Ok((tally, src.take_tape().unwrap_or_default()))
            })
            .collect();
        let mut tally = Tally::new(self.method);
        let mut tape = Tape::default();
        for part in parts {
            let (t, tp) = part?;
            tally.merge(&t)?;
            tape.extend(tp);
        }
        Ok((tally, tape))
    }

    /// Runs `budget` trials split over `workers` independent PRNG streams.
    /// The result depends only on `(seed, workers)`.
    pub fn run(&self, budget: u64, seed: u64, workers: usize) -> Result<Tally> {
        Ok(self.run_partitioned(budget, seed, workers, false)?.0)
    }

    /// As [`Sampler::run`], also returning every draw as a decision tape.
    pub fn run_recording(&self, budget: u64, seed: u64, workers: usize) -> Result<(Tally, Tape)> {
        self.run_partitioned(budget, seed, workers, true)
    }
}

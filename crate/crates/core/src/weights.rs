//! Per-node sampling weights, their cumulative indexes, and the weighted and
//! uniform draw primitives every sampler is built from.
//!
//! All weights are exact `u64` counts. A weighted draw picks a uniform
//! integer below the total and binary-searches the cumulative array, so no
//! floating point ever enters the sampling path.

use serde::{Deserialize, Serialize};

use crate::draw::{Choice, Domain, DrawSource};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::order::TotalOrder;

/// Which per-node weight a root node is drawn by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootWeight {
    /// `Γ_v = (d_v − 1) Σ_{x∈N_v} (d_x − 1)`: 3-paths through `v` as an inner node.
    Gamma,
    /// `Γ̌_v = Σ_{x∈N_v} d_{v,x} d_{x,v}`: order-centered 3-paths.
    GammaCheck,
    /// `Γ_v⁽¹⁾ = (d_v − 1)(d_v − 2) Σ_{x∈N_v} (d_x − 1)`: fork trees.
    Gamma1,
    /// `Γ_v⁽²⁾ = (Σ_{x∈N_v} (d_x − 1))² − Σ_{x∈N_v} (d_x − 1)²`: 5-paths centered at `v`.
    Gamma2,
}

impl RootWeight {
    pub const ALL: [RootWeight; 4] =
        [RootWeight::Gamma, RootWeight::GammaCheck, RootWeight::Gamma1, RootWeight::Gamma2];

    pub fn name(self) -> &'static str {
        match self {
            RootWeight::Gamma => "gamma",
            RootWeight::GammaCheck => "gamma_check",
            RootWeight::Gamma1 => "gamma1",
            RootWeight::Gamma2 => "gamma2",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// Global weight totals and degree-only constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    pub gamma: u64,
    pub gamma_check: u64,
    pub gamma1: u64,
    pub gamma2: u64,
    /// `Σ_v C(d_v, 3)`: non-induced 3-stars.
    pub lambda3: u64,
    /// `Σ_v C(d_v, 4)`: non-induced 4-stars.
    pub lambda4: u64,
}

impl Constants {
    pub fn total(&self, kind: RootWeight) -> u64 {
        match kind {
            RootWeight::Gamma => self.gamma,
            RootWeight::GammaCheck => self.gamma_check,
            RootWeight::Gamma1 => self.gamma1,
            RootWeight::Gamma2 => self.gamma2,
        }
    }
}

/// Every weight the samplers need, precomputed in `O(|E| log d_max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightIndex {
    /// Per-node weights, one vector per [`RootWeight`].
    pub(crate) node_weights: [Vec<u64>; 4],
    /// Cumulative sums of `node_weights` over nodes.
    pub(crate) node_acc: [Vec<u64>; 4],
    /// `acc_sigma[offset(v) + i] = Σ_{j≤i} (d_{N_v[j]} − 1)`, aligned with the adjacency.
    pub(crate) acc_sigma: Vec<u64>,
    /// Same layout with weights `d_{x,v} d_{v,x}`.
    pub(crate) acc_sigma_check: Vec<u64>,
    pub(crate) constants: Constants,
}

fn overflow(what: &'static str) -> Error {
    Error::Overflow(what)
}

fn binomial(n: u64, k: u64) -> u128 {
    if n < k {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn prefix_sums(values: &[u64], what: &'static str) -> Result<Vec<u64>> {
    let mut acc = Vec::with_capacity(values.len());
    let mut total = 0u64;
    for &x in values {
        total = total.checked_add(x).ok_or(overflow(what))?;
        acc.push(total);
    }
    Ok(acc)
}

impl WeightIndex {
    pub fn build(graph: &Graph, order: &TotalOrder) -> Result<Self> {
        let n = graph.node_count();
        let m2 = 2 * graph.edge_count();
        let mut weights: [Vec<u64>; 4] = std::array::from_fn(|_| Vec::with_capacity(n));
        let mut sigma = Vec::with_capacity(m2);
        let mut sigma_check = Vec::with_capacity(m2);
        let (mut lambda3, mut lambda4) = (0u64, 0u64);

        for v in 0..n {
            let dv = graph.degree(v) as u64;
            let mut s = 0u64;
            let mut sq = 0u128;
            let mut check = 0u64;
            for &x in graph.neighbors(v) {
                let w = graph.degree(x) as u64 - 1;
                s = s.checked_add(w).ok_or(overflow("neighbor degree sum"))?;
                sq += (w as u128) * (w as u128);
                sigma.push(s);
                let c = (order.count_above(v, x) as u64)
                    .checked_mul(order.count_above(x, v) as u64)
                    .ok_or(overflow("gamma_check"))?;
                check = check.checked_add(c).ok_or(overflow("gamma_check"))?;
                sigma_check.push(check);
            }
            let gamma = dv.saturating_sub(1).checked_mul(s).ok_or(overflow("gamma"))?;
            let gamma1 = (dv.saturating_sub(1) * dv.saturating_sub(2))
                .checked_mul(s)
                .ok_or(overflow("gamma1"))?;
            let gamma2: u64 = ((s as u128) * (s as u128) - sq)
                .try_into()
                .map_err(|_| overflow("gamma2"))?;
            weights[RootWeight::Gamma.slot()].push(gamma);
            weights[RootWeight::GammaCheck.slot()].push(check);
            weights[RootWeight::Gamma1.slot()].push(gamma1);
            weights[RootWeight::Gamma2.slot()].push(gamma2);

            let c3: u64 = binomial(dv, 3).try_into().map_err(|_| overflow("lambda3"))?;
            let c4: u64 = binomial(dv, 4).try_into().map_err(|_| overflow("lambda4"))?;
            lambda3 = lambda3.checked_add(c3).ok_or(overflow("lambda3"))?;
            lambda4 = lambda4.checked_add(c4).ok_or(overflow("lambda4"))?;
        }

        let node_acc = [
            prefix_sums(&weights[0], "gamma")?,
            prefix_sums(&weights[1], "gamma_check")?,
            prefix_sums(&weights[2], "gamma1")?,
            prefix_sums(&weights[3], "gamma2")?,
        ];
        let total = |k: RootWeight| node_acc[k.slot()].last().copied().unwrap_or(0);
        let constants = Constants {
            gamma: total(RootWeight::Gamma),
            gamma_check: total(RootWeight::GammaCheck),
            gamma1: total(RootWeight::Gamma1),
            gamma2: total(RootWeight::Gamma2),
            lambda3,
            lambda4,
        };
        Ok(Self {
            node_weights: weights,
            node_acc,
            acc_sigma: sigma,
            acc_sigma_check: sigma_check,
            constants,
        })
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    pub fn node_weight(&self, kind: RootWeight, v: usize) -> u64 {
        self.node_weights[kind.slot()][v]
    }

    pub fn node_weights(&self, kind: RootWeight) -> &[u64] {
        &self.node_weights[kind.slot()]
    }

    /// Cumulative weights over nodes; the last entry is the global total.
    pub fn cumulative(&self, kind: RootWeight) -> &[u64] {
        &self.node_acc[kind.slot()]
    }

    /// Cumulative `d_x − 1` over `N_v` in adjacency order.
    pub fn sigma_acc<'a>(&'a self, graph: &Graph, v: usize) -> &'a [u64] {
        &self.acc_sigma[graph.offset(v)..graph.offset(v) + graph.degree(v)]
    }

    /// Cumulative `d_{x,v} d_{v,x}` over `N_v` in adjacency order.
    pub fn sigma_check_acc<'a>(&'a self, graph: &Graph, v: usize) -> &'a [u64] {
        &self.acc_sigma_check[graph.offset(v)..graph.offset(v) + graph.degree(v)]
    }

    /// `Σ_{x∈N_v} (d_x − 1)`.
    pub fn sigma_total(&self, graph: &Graph, v: usize) -> u64 {
        self.sigma_acc(graph, v).last().copied().unwrap_or(0)
    }

    /// Unnormalized `τ⁽ᵛ⁾` weights `(d_u − 1)(S_v − (d_u − 1))` in adjacency order.
    pub fn tau_weights(&self, graph: &Graph, v: usize) -> Vec<u64> {
        let s = self.sigma_total(graph, v);
        graph
            .neighbors(v)
            .iter()
            .map(|&u| {
                let w = graph.degree(u) as u64 - 1;
                w * (s - w)
            })
            .collect()
    }

    /// Draws a node with probability `weight_v / total`.
    pub fn sample_node<S: DrawSource>(&self, kind: RootWeight, src: &mut S) -> Result<usize> {
        let acc = self.cumulative(kind);
        if acc.last().copied().unwrap_or(0) == 0 {
            return Err(Error::NoEligibleStructure(format!("total {} weight is zero", kind.name())));
        }
        src.draw(Choice::Root, Domain::Cumulative(acc))
    }

    /// Draws `u ∈ N_v` with probability `(d_u − 1) / Σ_{x∈N_v} (d_x − 1)`.
    pub fn sample_neighbor_sigma<S: DrawSource>(&self, graph: &Graph, v: usize, src: &mut S) -> Result<usize> {
        let acc = self.sigma_acc(graph, v);
        if acc.last().copied().unwrap_or(0) == 0 {
            return Err(Error::NoEligibleStructure(format!("every neighbor of node {v} is a leaf")));
        }
        let i = src.draw(Choice::U, Domain::Cumulative(acc))?;
        Ok(graph.neighbors(v)[i])
    }

    /// Draws `u ∈ N_v` with probability `d_{u,v} d_{v,u} / Γ̌_v`.
    pub fn sample_neighbor_sigma_check<S: DrawSource>(
        &self,
        graph: &Graph,
        v: usize,
        src: &mut S,
    ) -> Result<usize> {
        let acc = self.sigma_check_acc(graph, v);
        if acc.last().copied().unwrap_or(0) == 0 {
            return Err(Error::NoEligibleStructure(format!("node {v} centers no ordered 3-path")));
        }
        let i = src.draw(Choice::U, Domain::Cumulative(acc))?;
        Ok(graph.neighbors(v)[i])
    }

    /// Draws `u ∈ N_v` with probability `(d_u − 1)(S_v − (d_u − 1)) / Γ_v⁽²⁾`.
    ///
    /// When no neighbor carries more than half of `S_v` this proposes from
    /// the `d_u − 1` weights and accepts with probability
    /// `(S_v − (d_u − 1)) / S_v`, which succeeds at least half the time.
    /// Otherwise the exact weights are accumulated on the fly.
    pub fn sample_neighbor_tau<S: DrawSource>(&self, graph: &Graph, v: usize, src: &mut S) -> Result<usize> {
        if self.node_weight(RootWeight::Gamma2, v) == 0 {
            return Err(Error::NoEligibleStructure(format!("node {v} centers no 5-path")));
        }
        let acc = self.sigma_acc(graph, v);
        let s = acc[acc.len() - 1];
        let heaviest = graph.neighbors(v).iter().map(|&x| graph.degree(x) as u64 - 1).max().unwrap_or(0);
        if 2 * heaviest <= s {
            loop {
                let i = src.draw(Choice::U, Domain::Cumulative(acc))?;
                let u = graph.neighbors(v)[i];
                let keep = s - (graph.degree(u) as u64 - 1);
                if src.draw(Choice::Accept, Domain::Bernoulli { accept: keep, total: s })? == 1 {
                    return Ok(u);
                }
                src.reject(Choice::U)?;
            }
        }
        let mut tau = self.tau_weights(graph, v);
        let mut total = 0u64;
        for w in tau.iter_mut() {
            total += *w;
            *w = total;
        }
        let i = src.draw(Choice::U, Domain::Cumulative(&tau))?;
        Ok(graph.neighbors(v)[i])
    }

    /// Draws `w ∈ N_v − {u}` with probability `(d_w − 1) / Σ_{y∈N_v−{u}} (d_y − 1)` by
    /// cutting `u`'s interval out of the cumulative range.
    pub fn sample_neighbor_mu_excluding<S: DrawSource>(
        &self,
        graph: &Graph,
        v: usize,
        u: usize,
        src: &mut S,
    ) -> Result<usize> {
        let acc = self.sigma_acc(graph, v);
        let pos = graph.position(v, u).ok_or_else(|| {
            Error::InvalidArgument(format!("node {u} is not a neighbor of node {v}"))
        })?;
        let domain = Domain::CumulativeExcluding(acc, pos);
        if domain.size() == 0 {
            return Err(Error::NoEligibleStructure(format!(
                "no non-leaf neighbor of node {v} besides node {u}"
            )));
        }
        let i = src.draw(Choice::W, domain)?;
        Ok(graph.neighbors(v)[i])
    }
}

/// Uniform draw from `N_v` minus at most two excluded nodes.
pub fn sample_uniform_excluding<S: DrawSource>(
    graph: &Graph,
    v: usize,
    excluded: &[usize],
    choice: Choice,
    src: &mut S,
) -> Result<usize> {
    if excluded.len() > 2 {
        return Err(Error::InvalidArgument("at most two exclusions are supported".into()));
    }
    let mut positions = [0usize; 2];
    let mut count = 0;
    for &x in excluded {
        if let Some(p) = graph.position(v, x) {
            positions[count] = p;
            count += 1;
        }
    }
    let domain = Domain::uniform_excluding(graph.degree(v), &positions[..count]);
    if domain.size() == 0 {
        return Err(Error::NoEligibleStructure(format!("no neighbor of node {v} is left to draw")));
    }
    Ok(graph.neighbors(v)[src.draw(choice, domain)?])
}

/// Uniform draw from a non-empty slice.
pub fn sample_uniform<S: DrawSource>(nodes: &[usize], choice: Choice, src: &mut S) -> Result<usize> {
    if nodes.is_empty() {
        return Err(Error::NoEligibleStructure("empty neighbor set".into()));
    }
    Ok(nodes[src.draw(choice, Domain::Uniform(nodes.len()))?])
}

/// A graph bundled with its total order and weight index.
#[derive(Debug, Clone)]
pub struct IndexedGraph {
    pub graph: Graph,
    pub order: TotalOrder,
    pub weights: WeightIndex,
}

impl IndexedGraph {
    pub fn new(graph: Graph) -> Result<Self> {
        let order = TotalOrder::build(&graph);
        let weights = WeightIndex::build(&graph, &order)?;
        Ok(Self { graph, order, weights })
    }

    /// Reuses a previously built weight index (e.g. loaded from the cache).
    pub fn with_weights(graph: Graph, weights: WeightIndex) -> Result<Self> {
        if weights.node_weights[0].len() != graph.node_count()
            || weights.acc_sigma.len() != 2 * graph.edge_count()
        {
            return Err(Error::Cache("weight index does not match the graph".into()));
        }
        let order = TotalOrder::build(&graph);
        Ok(Self { graph, order, weights })
    }

    pub fn constants(&self) -> Constants {
        self.weights.constants()
    }
}

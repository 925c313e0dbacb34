//! Exact census of 4- and 5-node connected induced subgraphs, and exact
//! counts of the non-induced patterns the samplers are weighted by.
//!
//! The census uses exclusion-ordered expansion: every subgraph is grown only
//! from its smallest node, and a node may join the extension set only when
//! it is larger than that root and not yet adjacent to the current subgraph,
//! so each connected node set is produced exactly once.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::MotifCatalog;
use crate::error::{Error, Result};
use crate::estimators::motif_label;
use crate::graph::Graph;
use crate::weights::IndexedGraph;

/// Default refusal threshold on the projected number of subgraphs.
pub const DEFAULT_CAP: u128 = 1_000_000_000;

/// Exact non-induced subgraph counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCounts {
    pub triangles: u64,
    /// Paths on 4 nodes.
    pub path4: u64,
    /// Stars with 3 leaves (`Λ₃`).
    pub star3: u64,
    /// Paths on 5 nodes.
    pub path5: u64,
    /// 3-stars with one leg extended by an edge.
    pub fork: u64,
    /// Stars with 4 leaves (`Λ₄`).
    pub star4: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCounts {
    /// `n4[i - 1]`: 4-node subgraphs of motif `i`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n4: Option<Vec<u64>>,
    /// `n5[i - 1]`: 5-node subgraphs of motif `i`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n5: Option<Vec<u64>>,
    pub patterns: PatternCounts,
}

impl ExactCounts {
    pub fn total4(&self) -> Option<u64> {
        self.n4.as_ref().map(|v| v.iter().sum())
    }

    pub fn total5(&self) -> Option<u64> {
        self.n5.as_ref().map(|v| v.iter().sum())
    }

    /// Counts of motif size `nodes` as floats, for use as ground truth.
    pub fn truth(&self, nodes: usize) -> Option<Vec<f64>> {
        let v = if nodes == 4 { self.n4.as_ref() } else { self.n5.as_ref() };
        v.map(|v| v.iter().map(|&x| x as f64).collect())
    }

    /// Reads counts from JSON, either bare or nested under a `counts` key
    /// as written by the command-line tool.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let inner = value.get("counts").cloned().unwrap_or(value);
        Ok(serde_json::from_value(inner)?)
    }

    /// Same column layout as an estimate report; the count is the estimate
    /// and every error column is zero or empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "motif_id,estimate,variance,stderr,nrmse,ci_low,ci_high")?;
        for (nodes, counts) in [(4, &self.n4), (5, &self.n5)] {
            if let Some(counts) = counts {
                for (i, &c) in counts.iter().enumerate() {
                    writeln!(out, "{},{c},0,,,{c},{c}", motif_label(nodes, i + 1))?;
                }
            }
        }
        Ok(())
    }
}

/// Upper bound on the number of connected induced `k`-node subgraphs: each
/// has a spanning tree, and the non-induced trees are bounded by the weight
/// totals (`Λ₃ + Γ/2` for 4 nodes, `Λ₄ + (Γ⁽¹⁾ + Γ⁽²⁾)/2` for 5 nodes).
pub fn projected_count(g: &IndexedGraph, k: usize) -> u128 {
    let c = g.constants();
    match k {
        4 => c.lambda3 as u128 + c.gamma as u128 / 2,
        5 => c.lambda4 as u128 + (c.gamma1 as u128 + c.gamma2 as u128) / 2,
        _ => 0,
    }
}

/// Refuses with [`Error::ScaleCap`] when the projection exceeds `cap`.
pub fn check_cap(g: &IndexedGraph, k: usize, cap: u128) -> Result<()> {
    let projected = projected_count(g, k);
    if projected > cap {
        return Err(Error::ScaleCap { projected, cap });
    }
    Ok(())
}

struct Census<'a> {
    graph: &'a Graph,
    catalog: &'a MotifCatalog,
    k: usize,
    /// Number of subgraph nodes equal or adjacent to each node.
    blocked: Vec<u32>,
    sub: Vec<usize>,
    counts: Vec<u64>,
}

impl<'a> Census<'a> {
    fn new(graph: &'a Graph, k: usize) -> Self {
        Self {
            graph,
            catalog: MotifCatalog::global(),
            k,
            blocked: vec![0; graph.node_count()],
            sub: Vec::with_capacity(k),
            counts: vec![0; if k == 4 { 6 } else { 21 }],
        }
    }

    fn mark(&mut self, w: usize, delta: i32) {
        let bump = |b: &mut u32| *b = (*b as i32 + delta) as u32;
        bump(&mut self.blocked[w]);
        for &x in self.graph.neighbors(w) {
            bump(&mut self.blocked[x]);
        }
    }

    fn record(&mut self, nodes: &[usize]) {
        let mask = self.graph.induced_mask(nodes);
        let id = if self.k == 4 { self.catalog.classify4_mask(mask) } else { self.catalog.classify5_mask(mask) };
        self.counts[id.expect("expansion only produces connected sets") - 1] += 1;
    }

    fn root(&mut self, v: usize) {
        let ext: Vec<usize> = self.graph.neighbors(v).iter().copied().filter(|&u| u > v).collect();
        self.sub.push(v);
        self.mark(v, 1);
        self.extend(v, ext);
        self.mark(v, -1);
        self.sub.pop();
    }

    fn extend(&mut self, root: usize, mut ext: Vec<usize>) {
        if self.sub.len() + 1 == self.k {
            let mut nodes = [0usize; 5];
            nodes[..self.sub.len()].copy_from_slice(&self.sub);
            for &w in &ext {
                nodes[self.k - 1] = w;
                self.record(&nodes[..self.k]);
            }
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            next.extend(self.graph.neighbors(w).iter().copied().filter(|&u| u > root && self.blocked[u] == 0));
            self.sub.push(w);
            self.mark(w, 1);
            self.extend(root, next);
            self.mark(w, -1);
            self.sub.pop();
        }
    }
}

/// Counts every connected induced `k`-node subgraph by motif class.
/// No scale guard; see [`enumerate_cis_capped`].
pub fn enumerate_cis(graph: &Graph, k: usize) -> Result<Vec<u64>> {
    if k != 4 && k != 5 {
        return Err(Error::InvalidArgument(format!("subgraph size must be 4 or 5, got {k}")));
    }
    let width = if k == 4 { 6 } else { 21 };
    let counts = (0..graph.node_count())
        .into_par_iter()
        .fold(
            || Census::new(graph, k),
            |mut census, v| {
                census.root(v);
                census
            },
        )
        .map(|c| c.counts)
        .reduce(|| vec![0; width], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    Ok(counts)
}

/// [`enumerate_cis`] behind the projected-count guard.
pub fn enumerate_cis_capped(g: &IndexedGraph, k: usize, cap: u128) -> Result<Vec<u64>> {
    check_cap(g, k, cap)?;
    enumerate_cis(&g.graph, k)
}

fn common_neighbors(graph: &Graph, a: usize, b: usize) -> u64 {
    let (x, y) = (graph.neighbors(a), graph.neighbors(b));
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn to_u64(x: i128, what: &'static str) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::Overflow(what))
}

/// Exact non-induced pattern counts from degrees and common neighborhoods.
pub fn count_noninduced_patterns(g: &IndexedGraph) -> Result<PatternCounts> {
    let graph = &g.graph;
    let deg = |v: usize| graph.degree(v) as i128;
    let c2 = |n: i128| if n < 2 { 0 } else { n * (n - 1) / 2 };

    let mut tri_edges = 0i128;
    let mut path4 = 0i128;
    let mut fork = 0i128;
    for c in 0..graph.node_count() {
        for &x in graph.neighbors(c) {
            let common = common_neighbors(graph, c, x) as i128;
            if c < x {
                tri_edges += common;
                path4 += (deg(c) - 1) * (deg(x) - 1);
            }
            if deg(c) >= 3 {
                fork += c2(deg(c) - 1) * (deg(x) - 1) - (deg(c) - 2) * common;
            }
        }
    }
    // every triangle is seen once from each of its edges
    let triangles = tri_edges / 3;
    path4 -= 3 * triangles;

    let mut path5 = 0i128;
    for c in 0..graph.node_count() {
        let nb = graph.neighbors(c);
        for (i, &b) in nb.iter().enumerate() {
            for &d in &nb[i + 1..] {
                let mut count = (deg(b) - 1) * (deg(d) - 1) - (common_neighbors(graph, b, d) as i128 - 1);
                if graph.has_edge(b, d) {
                    count -= deg(b) + deg(d) - 3;
                }
                path5 += count;
            }
        }
    }

    let constants = g.constants();
    Ok(PatternCounts {
        triangles: to_u64(triangles, "triangles")?,
        path4: to_u64(path4, "4-node paths")?,
        star3: constants.lambda3,
        path5: to_u64(path5, "5-node paths")?,
        fork: to_u64(fork, "forks")?,
        star4: constants.lambda4,
    })
}

/// Census of the requested sizes plus pattern counts, behind the guard.
pub fn exact_counts(g: &IndexedGraph, sizes: &[usize], cap: u128) -> Result<ExactCounts> {
    for &k in sizes {
        check_cap(g, k, cap)?;
    }
    let mut out = ExactCounts { patterns: count_noninduced_patterns(g)?, ..Default::default() };
    for &k in sizes {
        let counts = enumerate_cis(&g.graph, k)?;
        if k == 4 {
            out.n4 = Some(counts);
        } else {
            out.n5 = Some(counts);
        }
    }
    Ok(out)
}

/// Brute-force census over all `k`-subsets; only for tiny graphs.
pub fn naive_census(graph: &Graph, k: usize) -> Vec<u64> {
    let catalog = MotifCatalog::global();
    let n = graph.node_count();
    let mut counts = vec![0; if k == 4 { 6 } else { 21 }];
    let mut idx: Vec<usize> = (0..k).collect();
    if n < k {
        return counts;
    }
    loop {
        let mask = graph.induced_mask(&idx);
        let id = if k == 4 { catalog.classify4_mask(mask) } else { catalog.classify5_mask(mask) };
        if let Some(id) = id {
            counts[id - 1] += 1;
        }
        // next combination in lexicographic order
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return counts;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

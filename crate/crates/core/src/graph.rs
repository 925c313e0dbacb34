//! Immutable undirected simple graph in compressed sparse row form.
//!
//! Nodes are renumbered densely in order of first appearance in the input;
//! `external_ids` maps each dense index back to the identifier used in the
//! source file. Every adjacency list is strictly sorted by dense index so that
//! edge membership is a binary search.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    external_ids: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Parses a SNAP-style edge list.
    ///
    /// Lines starting with `#` and blank lines are skipped. Every other line
    /// must hold two whitespace-separated integer IDs. Direction, duplicate
    /// edges and self-loops are discarded.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut ids: HashMap<u64, usize> = HashMap::new();
        let mut external_ids = Vec::new();
        let mut edges = Vec::new();
        let mut intern = |id: u64, external_ids: &mut Vec<u64>| {
            *ids.entry(id).or_insert_with(|| {
                external_ids.push(id);
                external_ids.len() - 1
            })
        };

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let mut next_id = || -> Result<u64> {
                let tok = tokens.next().ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    message: "expected two node IDs".into(),
                })?;
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("invalid node ID {tok:?}"),
                })
            };
            let a = next_id()?;
            let b = next_id()?;
            if let Some(extra) = tokens.next() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("unexpected trailing token {extra:?}"),
                });
            }
            let a = intern(a, &mut external_ids);
            let b = intern(b, &mut external_ids);
            edges.push((a, b));
        }

        let graph = Self::build(external_ids, edges);
        if graph.edge_count == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(graph)
    }

    /// Builds a graph on nodes `0..node_count` whose external IDs equal their
    /// indices. Isolated nodes are kept. Self-loops and duplicates are dropped.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= node_count {
                return Err(Error::InvalidNode(u));
            }
            if v >= node_count {
                return Err(Error::InvalidNode(v));
            }
            list.push((u, v));
        }
        Ok(Self::build((0..node_count as u64).collect(), list))
    }

    fn build(external_ids: Vec<u64>, edges: Vec<(usize, usize)>) -> Self {
        let n = external_ids.len();
        let mut pairs: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .flat_map(|(a, b)| [(a, b), (b, a)])
            .collect();
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(a, _) in &pairs {
            offsets[a + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors: Vec<usize> = pairs.iter().map(|&(_, b)| b).collect();
        let edge_count = neighbors.len() / 2;
        Self { offsets, neighbors, external_ids, edge_count }
    }

    pub fn node_count(&self) -> usize {
        self.external_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbors of `v`, sorted by dense index.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Offset of `v`'s adjacency inside the flat neighbor array; per-node
    /// arrays aligned with the adjacency use the same offsets.
    #[inline]
    pub(crate) fn offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn external_id(&self, v: usize) -> u64 {
        self.external_ids[v]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn check_node(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode(v))
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Position of `u` inside `v`'s adjacency list, if adjacent.
    #[inline]
    pub fn position(&self, v: usize, u: usize) -> Option<usize> {
        self.neighbors(v).binary_search(&u).ok()
    }

    /// Each undirected edge once as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u).iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Writes the normalized edge list: one `a b` line per edge in external
    /// IDs, `a < b`, sorted. Reloading it gives back the same list.
    pub fn write_normalized<W: Write>(&self, mut out: W) -> Result<()> {
        let mut edges: Vec<(u64, u64)> = self
            .edges()
            .map(|(u, v)| {
                let (a, b) = (self.external_ids[u], self.external_ids[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        for (a, b) in edges {
            writeln!(out, "{a} {b}")?;
        }
        Ok(())
    }

    /// SHA-256 of the normalized edge list, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        let mut buf = Vec::new();
        self.write_normalized(&mut buf).expect("writing to a Vec cannot fail");
        hasher.update(&buf);
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// The subgraph induced on `nodes`, as a bitmask over node pairs
    /// `(i, j)`, `i < j`, enumerated row by row.
    pub fn induced_mask(&self, nodes: &[usize]) -> u16 {
        let mut mask = 0u16;
        let mut bit = 0;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if self.has_edge(nodes[i], nodes[j]) {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        mask
    }
}

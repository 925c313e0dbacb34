//! The degree-then-index total order `≻` and the order-restricted
//! neighborhoods `N_{u,v} = { x ∈ N_u : x ≻ v }`.

use crate::error::Result;
use crate::graph::Graph;

/// A strict total order on nodes: `u ≻ v` iff `rank[u] > rank[v]`.
///
/// Higher degree ranks higher; equal degrees are broken by the larger dense
/// index. Alongside the ranks it keeps a copy of every adjacency list sorted
/// by rank, so `N_{u,v}` is always a suffix of `u`'s rank-sorted list.
#[derive(Debug, Clone)]
pub struct TotalOrder {
    rank: Vec<usize>,
    by_rank: Vec<usize>,
    offsets: Vec<usize>,
}

impl TotalOrder {
    pub fn build(graph: &Graph) -> Self {
        let n = graph.node_count();
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.sort_unstable_by_key(|&v| (graph.degree(v), v));
        let mut rank = vec![0; n];
        for (r, &v) in nodes.iter().enumerate() {
            rank[v] = r;
        }

        let offsets = graph.offsets().to_vec();
        let mut by_rank = Vec::with_capacity(2 * graph.edge_count());
        for v in 0..n {
            let start = by_rank.len();
            by_rank.extend_from_slice(graph.neighbors(v));
            by_rank[start..].sort_unstable_by_key(|&x| rank[x]);
        }
        Self { rank, by_rank, offsets }
    }

    #[inline]
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// `u ≻ v`.
    #[inline]
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.rank[u] > self.rank[v]
    }

    /// Neighbors of `u` sorted by ascending rank.
    #[inline]
    pub fn neighbors_by_rank(&self, u: usize) -> &[usize] {
        &self.by_rank[self.offsets[u]..self.offsets[u + 1]]
    }

    /// `N_{u,v}` without bounds checks on `u` and `v`.
    #[inline]
    pub fn above(&self, u: usize, v: usize) -> &[usize] {
        let list = self.neighbors_by_rank(u);
        let threshold = self.rank[v];
        let start = list.partition_point(|&x| self.rank[x] <= threshold);
        &list[start..]
    }

    /// `d_{u,v} = |N_{u,v}|`.
    #[inline]
    pub fn count_above(&self, u: usize, v: usize) -> usize {
        self.above(u, v).len()
    }

    /// `N_{u,v}` with node validation. `v` need not be adjacent to `u`.
    pub fn restricted_neighbors<'a>(&'a self, graph: &Graph, u: usize, v: usize) -> Result<&'a [usize]> {
        graph.check_node(u)?;
        graph.check_node(v)?;
        Ok(self.above(u, v))
    }
}

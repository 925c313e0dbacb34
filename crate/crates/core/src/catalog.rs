//! The 6 four-node and 21 five-node connected motif classes.
//!
//! Classes are generated by brute force (every adjacency bitmask, deduped by
//! minimum-over-permutations canonical form). Each class is then given its
//! motif ID by counting how many copies of the seed patterns it contains and
//! matching that vector against the reference table below. A class whose
//! counts match no row, or match a row already taken, aborts the build.
//!
//! Small graphs are stored as bitmasks over node pairs `(i, j)`, `i < j`,
//! enumerated row by row: for 5 nodes bit 0 is `(0,1)`, bit 3 is `(0,4)`,
//! bit 4 is `(1,2)` and bit 9 is `(3,4)`.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// `(φ⁽¹⁾, φ⁽²⁾)` for motifs 1..=6: copies of the 4-path and of the 3-star.
pub const PHI4: [(u64, u64); 6] = [(1, 0), (0, 1), (4, 0), (2, 1), (6, 2), (12, 4)];

/// `(φ⁽¹⁾, φ⁽²⁾, φ⁽³⁾)` for motifs 1..=21: copies of the fork tree, the
/// 5-path and the 4-star.
pub const PHI5: [(u64, u64, u64); 21] = [
    (0, 1, 0),
    (0, 0, 1),
    (1, 0, 0),
    (1, 2, 0),
    (2, 2, 0),
    (0, 5, 0),
    (2, 1, 0),
    (2, 0, 1),
    (4, 4, 0),
    (4, 7, 0),
    (5, 2, 1),
    (4, 4, 1),
    (6, 6, 0),
    (10, 10, 1),
    (9, 6, 1),
    (12, 6, 2),
    (10, 14, 0),
    (20, 24, 1),
    (20, 18, 2),
    (36, 36, 3),
    (60, 60, 5),
];

/// Seed patterns whose (non-induced) copies define the φ coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pattern {
    Path4,
    Star3,
    Path5,
    ForkTree,
    Star4,
}

impl Pattern {
    pub fn graph(self) -> SmallGraph {
        match self {
            Pattern::Path4 => SmallGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]),
            Pattern::Star3 => SmallGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]),
            Pattern::Path5 => SmallGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
            Pattern::ForkTree => SmallGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]),
            Pattern::Star4 => SmallGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]),
        }
    }
}

#[inline]
fn pair_bit(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // pairs before row i, then offset within the row
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// A graph on at most 5 nodes stored as a pair bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    pub n: usize,
    pub mask: u16,
}

impl SmallGraph {
    pub fn new(n: usize, mask: u16) -> Self {
        debug_assert!(n <= 5);
        Self { n, mask }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut mask = 0u16;
        for &(a, b) in edges {
            mask |= 1 << pair_bit(n, a, b);
        }
        Self { n, mask }
    }

    pub fn from_matrix<const N: usize>(adj: &[[bool; N]; N]) -> Self {
        let mut mask = 0u16;
        for i in 0..N {
            for j in i + 1..N {
                if adj[i][j] {
                    mask |= 1 << pair_bit(N, i, j);
                }
            }
        }
        Self { n: N, mask }
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.mask & (1 << pair_bit(self.n, i, j)) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(i, j)).count()
    }

    pub fn triangle_count(&self) -> usize {
        let mut t = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    if self.has_edge(a, b) && self.has_edge(b, c) && self.has_edge(a, c) {
                        t += 1;
                    }
                }
            }
        }
        t
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u8;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for y in 0..self.n {
                if seen & (1 << y) == 0 && self.has_edge(x, y) {
                    seen |= 1 << y;
                    stack.push(y);
                }
            }
        }
        seen.count_ones() as usize == self.n
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut mask = 0u16;
        for (i, j) in self.edges() {
            mask |= 1 << pair_bit(self.n, perm[i], perm[j]);
        }
        Self { n: self.n, mask }
    }

    /// Minimum mask over all relabelings.
    pub fn canonical(&self) -> Self {
        let mut best = self.mask;
        for perm in permutations(self.n) {
            best = best.min(self.permuted(&perm).mask);
        }
        Self { n: self.n, mask: best }
    }

    /// Classification key: edge count, ascending degree sequence, triangles.
    pub fn key(&self) -> MotifKey {
        let mut degrees: Vec<u8> = (0..self.n).map(|i| self.degree(i) as u8).collect();
        degrees.sort_unstable();
        MotifKey {
            edges: self.edge_count() as u8,
            degrees,
            triangles: self.triangle_count() as u8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MotifKey {
    pub edges: u8,
    pub degrees: Vec<u8>,
    pub triangles: u8,
}

/// All permutations of `0..n` (at most 120 for the sizes used here).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Number of (not necessarily induced) subgraphs of `host` isomorphic to
/// `pattern`: edge-preserving injections divided by the pattern's
/// automorphism count.
pub fn count_pattern_subgraphs(host: SmallGraph, pattern: Pattern) -> Result<u64> {
    count_copies(host, pattern.graph())
}

/// Same as [`count_pattern_subgraphs`] for an arbitrary pattern graph.
pub fn count_copies(host: SmallGraph, pattern: SmallGraph) -> Result<u64> {
    if pattern.n > host.n {
        return Err(Error::InvalidArgument(format!(
            "pattern on {} nodes does not fit a host on {} nodes",
            pattern.n, host.n
        )));
    }
    let embeddings = count_embeddings(host, pattern);
    let automorphisms = count_embeddings(pattern, pattern);
    Ok(embeddings / automorphisms)
}

fn count_embeddings(host: SmallGraph, pattern: SmallGraph) -> u64 {
    let edges = pattern.edges();
    let mut image = vec![usize::MAX; pattern.n];
    fn rec(k: usize, image: &mut [usize], used: u8, host: SmallGraph, edges: &[(usize, usize)]) -> u64 {
        if k == image.len() {
            return edges.iter().all(|&(a, b)| host.has_edge(image[a], image[b])) as u64;
        }
        let mut total = 0;
        for x in 0..host.n {
            if used & (1 << x) == 0 {
                image[k] = x;
                total += rec(k + 1, image, used | (1 << x), host, edges);
            }
        }
        total
    }
    rec(0, &mut image, 0, host, &edges)
}

/// One motif class.
#[derive(Debug, Clone, Serialize)]
pub struct MotifInfo {
    pub id: usize,
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub key: MotifKey,
    pub phi: Vec<u64>,
    #[serde(skip)]
    pub canonical_mask: u16,
}

#[derive(Debug, Clone)]
pub struct MotifCatalog {
    motifs4: Vec<MotifInfo>,
    motifs5: Vec<MotifInfo>,
    class4: Vec<u8>,
    class5: Vec<u8>,
}

impl MotifCatalog {
    /// Generates and verifies the catalog. Takes a few milliseconds; prefer
    /// [`MotifCatalog::global`] for repeated use.
    pub fn build() -> Result<Self> {
        let classes4 = connected_classes(4);
        let classes5 = connected_classes(5);

        let mut motifs4: Vec<Option<MotifInfo>> = vec![None; 6];
        for g in classes4 {
            let phi = vec![
                count_pattern_subgraphs(g, Pattern::Path4)?,
                count_pattern_subgraphs(g, Pattern::Star3)?,
            ];
            let id = PHI4
                .iter()
                .position(|&(a, b)| [a, b] == phi[..])
                .ok_or_else(|| Error::InvalidArgument(format!("4-node class {:?} has unmatched φ {phi:?}", g.edges())))?
                + 1;
            if motifs4[id - 1].is_some() {
                return Err(Error::InvalidArgument(format!("4-node φ row {id} matched twice")));
            }
            motifs4[id - 1] = Some(MotifInfo { id, nodes: 4, edges: g.edges(), key: g.key(), phi, canonical_mask: g.mask });
        }

        let mut motifs5: Vec<Option<MotifInfo>> = vec![None; 21];
        for g in classes5 {
            let phi = vec![
                count_pattern_subgraphs(g, Pattern::ForkTree)?,
                count_pattern_subgraphs(g, Pattern::Path5)?,
                count_pattern_subgraphs(g, Pattern::Star4)?,
            ];
            let id = PHI5
                .iter()
                .position(|&(a, b, c)| [a, b, c] == phi[..])
                .ok_or_else(|| Error::InvalidArgument(format!("5-node class {:?} has unmatched φ {phi:?}", g.edges())))?
                + 1;
            if motifs5[id - 1].is_some() {
                return Err(Error::InvalidArgument(format!("5-node φ row {id} matched twice")));
            }
            motifs5[id - 1] = Some(MotifInfo { id, nodes: 5, edges: g.edges(), key: g.key(), phi, canonical_mask: g.mask });
        }

        let motifs4: Vec<MotifInfo> = motifs4
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidArgument("a 4-node φ row is unmatched".into()))?;
        let motifs5: Vec<MotifInfo> = motifs5
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidArgument("a 5-node φ row is unmatched".into()))?;

        let class4 = key_table(4, &motifs4)?;
        let class5 = key_table(5, &motifs5)?;
        Ok(Self { motifs4, motifs5, class4, class5 })
    }

    /// Process-wide catalog, built on first use.
    pub fn global() -> &'static MotifCatalog {
        static CATALOG: OnceLock<MotifCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| MotifCatalog::build().expect("motif catalog failed verification"))
    }

    pub fn motifs4(&self) -> &[MotifInfo] {
        &self.motifs4
    }

    pub fn motifs5(&self) -> &[MotifInfo] {
        &self.motifs5
    }

    /// Motif ID of a 4-node induced subgraph given as a pair mask, `None`
    /// when disconnected.
    #[inline]
    pub fn classify4_mask(&self, mask: u16) -> Option<usize> {
        match self.class4[mask as usize] {
            0 => None,
            id => Some(id as usize),
        }
    }

    #[inline]
    pub fn classify5_mask(&self, mask: u16) -> Option<usize> {
        match self.class5[mask as usize] {
            0 => None,
            id => Some(id as usize),
        }
    }

    pub fn classify4(&self, adj: &[[bool; 4]; 4]) -> Option<usize> {
        self.classify4_mask(SmallGraph::from_matrix(adj).mask)
    }

    pub fn classify5(&self, adj: &[[bool; 5]; 5]) -> Option<usize> {
        self.classify5_mask(SmallGraph::from_matrix(adj).mask)
    }

    /// `(φ⁽¹⁾, φ⁽²⁾)` of 4-node motif `id`.
    pub fn phi4(&self, id: usize) -> (u64, u64) {
        let p = &self.motifs4[id - 1].phi;
        (p[0], p[1])
    }

    /// `(φ⁽¹⁾, φ⁽²⁾, φ⁽³⁾)` of 5-node motif `id`.
    pub fn phi5(&self, id: usize) -> (u64, u64, u64) {
        let p = &self.motifs5[id - 1].phi;
        (p[0], p[1], p[2])
    }

    /// Motifs reachable by the fork-tree sampler (`φ⁽¹⁾ > 0`).
    pub fn omega1(&self) -> Vec<usize> {
        (1..=21).filter(|&i| self.phi5(i).0 > 0).collect()
    }

    /// Motifs reachable by the 5-path sampler (`φ⁽²⁾ > 0`).
    pub fn omega2(&self) -> Vec<usize> {
        (1..=21).filter(|&i| self.phi5(i).1 > 0).collect()
    }

    /// Motifs containing a 4-star (`φ⁽³⁾ > 0`).
    pub fn omega3(&self) -> Vec<usize> {
        (1..=21).filter(|&i| self.phi5(i).2 > 0).collect()
    }

    /// `Ω₃` without the 4-star itself.
    pub fn omega3_star(&self) -> Vec<usize> {
        self.omega3().into_iter().filter(|&i| i != 2).collect()
    }

    /// JSON listing of every motif: edge list, key and φ values.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "four_node": self.motifs4,
            "five_node": self.motifs5,
        })
    }
}

fn connected_classes(n: usize) -> Vec<SmallGraph> {
    let pairs = n * (n - 1) / 2;
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0..(1u32 << pairs) {
        let g = SmallGraph::new(n, mask as u16);
        if g.is_connected() {
            seen.insert(g.canonical().mask);
        }
    }
    seen.into_iter().map(|m| SmallGraph::new(n, m)).collect()
}

/// Builds the mask → ID table from classification keys, failing if two
/// motifs share a key.
fn key_table(n: usize, motifs: &[MotifInfo]) -> Result<Vec<u8>> {
    let mut by_key: HashMap<MotifKey, usize> = HashMap::new();
    for m in motifs {
        let key = if n == 4 { key4(&m.key) } else { m.key.clone() };
        if let Some(prev) = by_key.insert(key, m.id) {
            return Err(Error::InvalidArgument(format!(
                "{n}-node motifs {prev} and {} share a classification key",
                m.id
            )));
        }
    }
    let pairs = n * (n - 1) / 2;
    let mut table = vec![0u8; 1 << pairs];
    for mask in 0..(1u32 << pairs) {
        let g = SmallGraph::new(n, mask as u16);
        if !g.is_connected() {
            continue;
        }
        let key = if n == 4 { key4(&g.key()) } else { g.key() };
        table[mask as usize] = *by_key
            .get(&key)
            .ok_or_else(|| Error::InvalidArgument(format!("no motif for key {key:?}")))? as u8;
    }
    Ok(table)
}

/// Edge count and degree sequence determine a connected 4-node graph.
fn key4(key: &MotifKey) -> MotifKey {
    MotifKey { edges: key.edges, degrees: key.degrees.clone(), triangles: 0 }
}

//! Oracles shared by the integration tests: an exhaustive outcome-tree
//! enumerator over exact rationals, brute-force weight totals and census,
//! and the published coefficient tables typed in by hand.
#![allow(dead_code)]

use std::collections::BTreeMap;

use graphlet_sampling::draw::{Choice, Domain, DrawSource};
use graphlet_sampling::samplers::Outcome;
use graphlet_sampling::{generators, Error, Graph, MotifCatalog, Result, Sampler};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: u64, d: u64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

// Published pattern counts per motif.
pub const PHI4_1: [u64; 6] = [1, 0, 4, 2, 6, 12];
pub const PHI4_2: [u64; 6] = [0, 1, 0, 1, 2, 4];
pub const PHI5_1: [u64; 21] = [0, 0, 1, 1, 2, 0, 2, 2, 4, 4, 5, 4, 6, 10, 9, 12, 10, 20, 20, 36, 60];
pub const PHI5_2: [u64; 21] = [1, 0, 0, 2, 2, 5, 1, 0, 4, 7, 2, 4, 6, 10, 6, 6, 14, 24, 18, 36, 60];
pub const PHI5_3: [u64; 21] = [0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 1, 2, 0, 1, 2, 3, 5];

/// Walks every path of a sampler's decision tree by replaying a prefix
/// and advancing an odometer over the outcome lists of each draw.
pub struct Enumerator {
    path: Vec<(usize, usize)>,
    pos: usize,
    prob: Q,
    root: Option<usize>,
    root_prob: Q,
}

impl Enumerator {
    fn new() -> Self {
        Self { path: Vec::new(), pos: 0, prob: Q::one(), root: None, root_prob: Q::one() }
    }

    fn restart(&mut self) {
        self.pos = 0;
        self.prob = Q::one();
        self.root = None;
        self.root_prob = Q::one();
    }

    fn advance(&mut self) -> bool {
        self.path.truncate(self.pos);
        while let Some(last) = self.path.last_mut() {
            last.0 += 1;
            if last.0 < last.1 {
                return true;
            }
            self.path.pop();
        }
        false
    }
}

impl DrawSource for Enumerator {
    fn begin_trial(&mut self, _trial: u64) {}

    fn draw(&mut self, choice: Choice, domain: Domain<'_>) -> Result<usize> {
        let outs = domain.outcomes();
        assert!(!outs.is_empty(), "empty domain at {choice}");
        if self.pos == self.path.len() {
            self.path.push((0, outs.len()));
        }
        let (k, n) = self.path[self.pos];
        assert_eq!(n, outs.len(), "replay diverged");
        self.pos += 1;
        let (idx, w) = outs[k];
        let p = q(w, domain.size());
        self.prob *= &p;
        if choice == Choice::Root {
            self.root = Some(idx);
            self.root_prob = p;
        }
        Ok(idx)
    }

    fn reject(&mut self, _choice: Choice) -> Result<()> {
        Err(Error::Rejected)
    }
}

/// Exact distribution of `f`'s result. Rejected branches are dropped and
/// the remaining mass under each root value is rescaled to that root's
/// probability, which is what retrying does.
pub fn enumerate<T: Ord + Clone>(mut f: impl FnMut(&mut Enumerator) -> Result<T>) -> BTreeMap<T, Q> {
    let mut e = Enumerator::new();
    let mut raw: Vec<(Option<usize>, T, Q)> = Vec::new();
    let mut accepted: BTreeMap<Option<usize>, Q> = BTreeMap::new();
    let mut root_prob: BTreeMap<Option<usize>, Q> = BTreeMap::new();
    loop {
        e.restart();
        match f(&mut e) {
            Ok(out) => {
                *accepted.entry(e.root).or_insert_with(Q::zero) += &e.prob;
                root_prob.insert(e.root, e.root_prob.clone());
                raw.push((e.root, out, e.prob.clone()));
            }
            Err(Error::Rejected) => {}
            Err(other) => panic!("sampler failed during enumeration: {other}"),
        }
        if !e.advance() {
            break;
        }
    }
    let mut dist = BTreeMap::new();
    for (root, out, p) in raw {
        let scaled = p * &root_prob[&root] / &accepted[&root];
        *dist.entry(out).or_insert_with(Q::zero) += scaled;
    }
    dist
}

/// Outcome of one trial as an ordered key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Key {
    Hit(usize),
    NonCredited(usize),
    Degenerate,
}

pub fn key(o: Outcome) -> Key {
    match o {
        Outcome::Hit(i) => Key::Hit(i),
        Outcome::NonCredited(i) => Key::NonCredited(i),
        Outcome::Degenerate => Key::Degenerate,
    }
}

pub fn trial_distribution(sampler: &Sampler<'_>) -> BTreeMap<Key, Q> {
    enumerate(|src| sampler.trial(src).map(key))
}

// ---- brute-force oracles

/// `a ≻ b`: higher degree, then higher index.
pub fn succ(g: &Graph, a: usize, b: usize) -> bool {
    (g.degree(a), a) > (g.degree(b), b)
}

pub fn adj(g: &Graph, a: usize, b: usize) -> bool {
    g.neighbors(a).contains(&b)
}

/// Weight totals counted as sampler tuples:
/// `Γ`: (v,u,w,r) with u,w ∈ N_v distinct, r ∈ N_u − v;
/// `Γ̌`: the same with w ≻ u and r ≻ v;
/// `Γ⁽¹⁾`: (v,u,w,r,t) with u,w,r ∈ N_v distinct, t ∈ N_u − v;
/// `Γ⁽²⁾`: (v,u,w,r,t) with u,w ∈ N_v distinct, r ∈ N_u − v, t ∈ N_w − v.
pub fn brute_totals(g: &Graph) -> [u64; 4] {
    let mut out = [0u64; 4];
    for v in 0..g.node_count() {
        let nv = g.neighbors(v);
        for &u in nv {
            for &w in nv {
                if w == u {
                    continue;
                }
                for &r in g.neighbors(u) {
                    if r == v {
                        continue;
                    }
                    out[0] += 1;
                    if succ(g, w, u) && succ(g, r, v) {
                        out[1] += 1;
                    }
                }
                for &r in nv {
                    if r == u || r == w {
                        continue;
                    }
                    out[2] += g.neighbors(u).iter().filter(|&&t| t != v).count() as u64;
                }
                let ru = g.neighbors(u).iter().filter(|&&r| r != v).count() as u64;
                let tw = g.neighbors(w).iter().filter(|&&t| t != v).count() as u64;
                out[3] += ru * tw;
            }
        }
    }
    out
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ C(d, 3)` and `Σ C(d, 4)`.
pub fn brute_lambdas(g: &Graph) -> (u64, u64) {
    (0..g.node_count())
        .map(|v| g.degree(v) as u64)
        .fold((0, 0), |(a, b), d| (a + binom(d, 3), b + binom(d, 4)))
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn connected(g: &Graph, nodes: &[usize]) -> bool {
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..nodes.len() {
            if !seen[j] && adj(g, nodes[i], nodes[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Motif ID of every connected `k`-subset, by brute force.
pub fn brute_cis(g: &Graph, k: usize) -> Vec<(Vec<usize>, usize)> {
    let cat = MotifCatalog::global();
    subsets(g.node_count(), k)
        .into_iter()
        .filter(|s| connected(g, s))
        .map(|s| {
            let mut mask = 0u16;
            let mut bit = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if adj(g, s[i], s[j]) {
                        mask |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            let id = if k == 4 { cat.classify4_mask(mask) } else { cat.classify5_mask(mask) };
            (s, id.expect("connected subset classifies"))
        })
        .collect()
}

pub fn brute_census(g: &Graph, k: usize) -> Vec<u64> {
    let mut counts = vec![0u64; if k == 4 { 6 } else { 21 }];
    for (_, id) in brute_cis(g, k) {
        counts[id - 1] += 1;
    }
    counts
}

/// Ordered centered 3-paths `w − v − u − r` (w ≻ u, r ≻ v) on exactly the
/// node set `s`.
pub fn centered_paths(g: &Graph, s: &[usize]) -> u64 {
    let mut count = 0;
    for &v in s {
        for &u in s {
            if u == v || !adj(g, v, u) {
                continue;
            }
            for &w in s {
                for &r in s {
                    let distinct = w != v && w != u && r != v && r != u && w != r;
                    if distinct && adj(g, v, w) && adj(g, u, r) && succ(g, w, u) && succ(g, r, v) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Small named graphs plus twenty G(8, 1/2) samples.
pub fn small_graphs() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("K4".to_string(), generators::complete(4)),
        ("K5".into(), generators::complete(5)),
        ("C4".into(), generators::cycle(4)),
        ("P5".into(), generators::path(5)),
        ("fork".into(), generators::fork_tree()),
        ("banner".into(), generators::banner()),
        ("tadpole".into(), generators::tadpole()),
    ];
    let mut seed = 0;
    while out.len() < 27 {
        let g = generators::erdos_renyi(8, 0.5, seed);
        seed += 1;
        if g.edge_count() > 0 {
            out.push((format!("G(8,0.5) seed {}", seed - 1), g));
        }
    }
    out
}

// ---- statistics helpers

/// Pearson chi-square p-value of `observed` against `expected` counts.
/// Cells with expected count below 5 are pooled.
pub fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut po, mut pe) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 5.0 {
            po += o as f64;
            pe += e;
        } else {
            cells.push((o as f64, e));
        }
    }
    if pe > 0.0 {
        cells.push((po, pe));
    }
    assert!(cells.len() >= 2, "too few cells for a chi-square test");
    let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((cells.len() - 1) as f64).unwrap().cdf(stat)
}

/// Repeated estimates `out[run][i - 1]` and the first run's report, for
/// reuse of its analytic variance.
pub fn repeated_estimates(
    g: &graphlet_sampling::IndexedGraph,
    methods: &[graphlet_sampling::Method],
    budgets: &[u64],
    repeats: u64,
    seed: u64,
) -> (Vec<Vec<f64>>, graphlet_sampling::estimators::EstimateReport) {
    use graphlet_sampling::estimators;
    use rayon::prelude::*;
    let run = |r: u64| {
        let tallies: Vec<_> = methods
            .iter()
            .zip(budgets)
            .enumerate()
            .map(|(part, (&m, &k))| {
                let s = Sampler::new(g, m).unwrap();
                s.run(k, seed.wrapping_mul(1_000_003).wrapping_add(r * 7 + part as u64), 1).unwrap()
            })
            .collect();
        match &tallies[..] {
            [one] => estimators::estimate(one, g).unwrap(),
            [t5, p5] => estimators::estimate_moss5(t5, p5, g).unwrap(),
            _ => unreachable!(),
        }
    };
    let reports: Vec<_> = (0..repeats).into_par_iter().map(run).collect();
    let est = reports.iter().map(|r| r.estimates()).collect();
    (est, reports.into_iter().next().unwrap())
}

/// Expected per-run hits of each motif summed over the samplers.
pub fn expected_hits(
    g: &graphlet_sampling::IndexedGraph,
    methods: &[graphlet_sampling::Method],
    budgets: &[u64],
    truth: &[f64],
) -> Vec<f64> {
    let c = g.constants();
    let mut out = vec![0.0; truth.len()];
    for (&m, &k) in methods.iter().zip(budgets) {
        let p = graphlet_sampling::estimators::inclusion_probabilities(m, &c);
        for i in 0..truth.len() {
            out[i] += k as f64 * p[i] * truth[i];
        }
    }
    out
}

/// Coefficients of the motif derived from an identity: `Λ₃` for 4 nodes,
/// `Λ₄` for 5 nodes, both for motif 2.
pub fn derived_coefficients(nodes: usize) -> Vec<u64> {
    let mut c = if nodes == 4 { PHI4_2.to_vec() } else { PHI5_3.to_vec() };
    c[1] = 0;
    c
}

/// Motifs whose estimates are expected to be well behaved at the given
/// hits: direct motifs with at least `min_hits` expected hits, and the
/// derived motif when all its contributing motifs qualify.
pub fn eligible(nodes: usize, hits: &[f64], truth: &[f64], min_hits: f64) -> Vec<usize> {
    let coeff = derived_coefficients(nodes);
    (1..=truth.len())
        .filter(|&i| {
            if truth[i - 1] == 0.0 {
                return false;
            }
            if i == 2 {
                (0..truth.len()).all(|j| coeff[j] == 0 || truth[j] == 0.0 || hits[j] >= min_hits)
            } else {
                hits[i - 1] >= min_hits
            }
        })
        .collect()
}

//! Small named graphs and seeded random graph models used by tests,
//! examples and the experiment harness.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator edges are in range")
}

/// `K_n`.
pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Path on `n` nodes, `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|v| (v - 1, v)))
}

/// Cycle on `n` nodes.
pub fn cycle(n: usize) -> Graph {
    build(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Star with center `0` and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

/// 3-star centered at `0` with the edge to `3` subdivided by `4`.
pub fn fork_tree() -> Graph {
    build(5, [(0, 1), (0, 2), (0, 3), (3, 4)])
}

/// 4-cycle `0-1-2-3` with a pendant `4` on `0`.
pub fn banner() -> Graph {
    build(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
}

/// Triangle `0-1-2` with the tail `2-3-4`.
pub fn tadpole() -> Graph {
    build(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
}

/// Triangle `0-1-2` with a pendant `3` on `2`.
pub fn tailed_triangle() -> Graph {
    build(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
}

/// Erdős–Rényi `G(n, p)`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// Holme–Kim preferential attachment with triad formation: each new node
/// attaches `m` edges, the first preferentially and each later one closing a
/// triangle with probability `p_triad`.
pub fn powerlaw_cluster(n: usize, m: usize, p_triad: f64, seed: u64) -> Graph {
    assert!(m >= 1 && n > m, "need n > m >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    // endpoint multiset: a node appears once per incident edge
    let mut endpoints: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    let mut connect = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>, endpoints: &mut Vec<usize>| {
        adj[a].push(b);
        adj[b].push(a);
        endpoints.push(a);
        endpoints.push(b);
        edges.push((a, b));
    };
    for v in 1..=m {
        connect(0, v, &mut adj, &mut endpoints);
    }
    for v in m + 1..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        let mut last: Option<usize> = None;
        while targets.len() < m {
            let candidate = match last {
                Some(prev) if rng.gen_bool(p_triad) => {
                    let choices: Vec<usize> = adj[prev]
                        .iter()
                        .copied()
                        .filter(|x| *x != v && !targets.contains(x))
                        .collect();
                    choices.choose(&mut rng).copied()
                }
                _ => None,
            };
            let candidate = candidate.unwrap_or_else(|| loop {
                let x = endpoints[rng.gen_range(0..endpoints.len())];
                if x != v && !targets.contains(&x) {
                    break x;
                }
            });
            targets.push(candidate);
            last = Some(candidate);
        }
        for t in targets {
            connect(v, t, &mut adj, &mut endpoints);
        }
    }
    build(n, edges)
}

/// A co-authorship style graph: `papers` author teams of 2 to 5 members are
/// drawn and every team becomes a clique. Lead authors are picked
/// preferentially by past activity; co-authors come from the lead's existing
/// collaborators with probability `p_repeat`, otherwise uniformly.
pub fn collaboration(authors: usize, papers: usize, p_repeat: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); authors];
    let mut activity: Vec<usize> = (0..authors).collect();
    let mut edges = Vec::new();
    let team_sizes = [2usize, 2, 2, 3, 3, 3, 4, 4, 5];
    for _ in 0..papers {
        let size = *team_sizes.choose(&mut rng).expect("non-empty");
        let lead = activity[rng.gen_range(0..activity.len())];
        let mut team = vec![lead];
        let mut guard = 0;
        while team.len() < size && guard < 50 {
            guard += 1;
            let pool = &adj[*team.choose(&mut rng).expect("non-empty")];
            let pick = if !pool.is_empty() && rng.gen_bool(p_repeat) {
                pool[rng.gen_range(0..pool.len())]
            } else {
                rng.gen_range(0..authors)
            };
            if !team.contains(&pick) {
                team.push(pick);
            }
        }
        for i in 0..team.len() {
            activity.push(team[i]);
            for j in i + 1..team.len() {
                let (a, b) = (team[i], team[j]);
                if !adj[a].contains(&b) {
                    adj[a].push(b);
                    adj[b].push(a);
                    edges.push((a, b));
                }
            }
        }
    }
    build(authors, edges)
}

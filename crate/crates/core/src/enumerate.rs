//! Exhaustive enumeration of small connected graphs up to isomorphism,
//! and seeded random graph generators for sampling-based checks.

use crate::graph::{Graph, VertexId};
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashSet;

/// Largest size the enumerator accepts. Graphs are packed into a u64
/// adjacency mask (8x8 upper triangle) and canonicalized by minimizing
/// over all vertex permutations, which stays cheap through 7!.
pub const ENUMERATION_CAP: usize = 7;

/// All connected graphs with 1..=max_n vertices, one representative per
/// isomorphism class, grouped by size in ascending order.
///
/// Works level by level: every connected graph on n+1 vertices arises
/// from a connected graph on n vertices by re-attaching a spanning-tree
/// leaf, so augmenting each n-vertex graph with a new vertex joined to
/// every nonempty subset is exhaustive.
pub fn connected_graphs_up_to_iso(max_n: usize) -> Vec<Graph> {
    assert!(
        (1..=ENUMERATION_CAP).contains(&max_n),
        "enumeration supports 1..={ENUMERATION_CAP} vertices"
    );
    let mut out = Vec::new();
    let mut level: Vec<u64> = vec![0]; // the 1-vertex graph
    out.push(mask_to_graph(0, 1));
    for n in 1..max_n {
        let candidates: Vec<u64> = level
            .iter()
            .flat_map(|&mask| {
                (1u32..1 << n).map(move |attach| {
                    let mut child = mask;
                    for i in 0..n {
                        if attach >> i & 1 == 1 {
                            child |= edge_bit(i, n);
                        }
                    }
                    child
                })
            })
            .collect();
        let perms = permutations(n + 1);
        let canonical: Vec<u64> = candidates
            .into_par_iter()
            .map(|mask| canonical_form(mask, n + 1, &perms))
            .collect();
        let mut seen = HashSet::new();
        level = canonical
            .into_iter()
            .filter(|&c| seen.insert(c))
            .collect();
        level.sort_unstable();
        out.extend(level.iter().map(|&mask| mask_to_graph(mask, n + 1)));
    }
    out
}

fn edge_bit(i: usize, j: usize) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1 << (i * 8 + j)
}

fn canonical_form(mask: u64, n: usize, perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| {
            let mut out = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    if mask & edge_bit(i, j) != 0 {
                        out |= edge_bit(p[i], p[j]);
                    }
                }
            }
            out
        })
        .min()
        .unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

fn mask_to_graph(mask: u64, n: usize) -> Graph {
    let mut g = Graph::with_vertices(n);
    for i in 0..n {
        for j in i + 1..n {
            if mask & edge_bit(i, j) != 0 {
                g.add_edge(i as VertexId, j as VertexId).unwrap();
            }
        }
    }
    debug_assert!(g.is_connected());
    g
}

/// Random connected graph: a random recursive tree plus each remaining
/// pair independently with probability `extra_edge_prob`.
pub fn random_connected_graph<R: Rng>(n: u32, extra_edge_prob: f64, rng: &mut R) -> Graph {
    assert!(n >= 1);
    let mut g = Graph::with_vertices(n as usize);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v).unwrap();
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(extra_edge_prob) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Random connected graph with at least `pendants` degree-1 vertices:
/// a connected core on n - pendants vertices, then one new leaf per
/// pendant hung on a random core vertex.
pub fn random_graph_with_pendants<R: Rng>(
    n: u32,
    pendants: u32,
    extra_edge_prob: f64,
    rng: &mut R,
) -> Graph {
    assert!(pendants < n, "need at least one core vertex");
    let core = n - pendants;
    let mut g = random_connected_graph(core, extra_edge_prob, rng);
    for _ in 0..pendants {
        let host = rng.gen_range(0..core);
        let leaf = g.add_vertex();
        g.add_edge(host, leaf).unwrap();
    }
    g
}

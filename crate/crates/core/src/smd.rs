//! Strong metric dimension via the strong resolving graph.
//!
//! u is maximally distant from v when no neighbor of u is farther from
//! v than u is. Mutually maximally distant pairs form the edges of the
//! strong resolving graph G_SR; a minimum vertex cover of G_SR is a
//! minimum strong resolving set of the original graph.

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmdError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertices {0} and {1} are in different components")]
    DisconnectedPair(VertexId, VertexId),
    #[error("graph has {n} vertices, over the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

pub const STRONG_RESOLVING_CAP: usize = 12;
pub const VERTEX_COVER_ORACLE_CAP: usize = 14;

/// No neighbor of u is farther from v than u itself.
pub fn is_maximally_distant(g: &Graph, u: VertexId, v: VertexId) -> Result<bool, SmdError> {
    let row = g.bfs_distances(v)?;
    if !g.contains(u) {
        return Err(GraphError::MissingVertex(u).into());
    }
    let du = row.get(u).ok_or(SmdError::DisconnectedPair(u, v))?;
    Ok(g.neighbors(u)?
        .iter()
        .all(|&y| row.get(y).is_some_and(|dy| dy <= du)))
}

/// All unordered mutually-maximally-distant pairs, (min, max) ascending.
pub fn mmd_pairs(g: &Graph) -> Result<Vec<(VertexId, VertexId)>, SmdError> {
    if !g.is_connected() {
        return Err(SmdError::Disconnected);
    }
    let ids: Vec<VertexId> = g.vertices().collect();
    let bound = g.id_bound();
    // md[u][v] = u maximally distant from v
    let mut md = vec![false; bound * bound];
    for &v in &ids {
        let row = g.bfs_distances(v)?;
        for &u in &ids {
            if u == v {
                continue;
            }
            let du = row.get(u).expect("connected");
            if g
                .neighbors_unchecked(u)
                .iter()
                .all(|&y| row.get(y).is_some_and(|dy| dy <= du))
            {
                md[u as usize * bound + v as usize] = true;
            }
        }
    }
    let mut pairs = Vec::new();
    for (a, &u) in ids.iter().enumerate() {
        for &v in &ids[a + 1..] {
            if md[u as usize * bound + v as usize] && md[v as usize * bound + u as usize] {
                pairs.push((u, v));
            }
        }
    }
    Ok(pairs)
}

/// G_SR: same vertices, one edge per mutually maximally distant pair.
pub fn strong_resolving_graph(g: &Graph) -> Result<Graph, SmdError> {
    let mut sr = g.on_same_vertices();
    for (u, v) in mmd_pairs(g)? {
        sr.add_edge(u, v).expect("ids shared with source graph");
    }
    Ok(sr)
}

/// Exact minimum vertex cover, branch and bound. Isolated vertices are
/// skipped, pendant edges are kernelized (take the support vertex), and
/// branching tries the max-degree vertex in-cover first (ties to the
/// smallest id), against a greedy-matching lower bound.
pub fn min_vertex_cover(g: &Graph) -> Result<Vec<VertexId>, GraphError> {
    let bound = g.id_bound();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); bound];
    for v in g.vertices() {
        adj[v as usize] = g.neighbors(v)?.to_vec();
    }
    let mut best: Vec<u32> = g.vertices().filter(|&v| !adj[v as usize].is_empty()).collect();
    let mut current = Vec::new();
    branch_vc(&mut adj, &mut current, &mut best);
    best.sort_unstable();
    Ok(best)
}

fn branch_vc(adj: &mut [Vec<u32>], current: &mut Vec<u32>, best: &mut Vec<u32>) {
    // kernel: repeatedly take the neighbor of any degree-1 vertex
    let mut taken = Vec::new();
    loop {
        let pendant = adj
            .iter()
            .enumerate()
            .find(|(_, ns)| ns.len() == 1)
            .map(|(v, ns)| (v as u32, ns[0]));
        match pendant {
            Some((_, support)) => {
                taken.push(remove_into_cover(adj, support));
                current.push(support);
            }
            None => break,
        }
    }

    let live_edges = adj.iter().map(|ns| ns.len()).sum::<usize>() / 2;
    if live_edges == 0 {
        if current.len() < best.len() {
            *best = current.clone();
        }
    } else if current.len() + matching_lower_bound(adj) < best.len() {
        let v = adj
            .iter()
            .enumerate()
            .max_by_key(|(v, ns)| (ns.len(), std::cmp::Reverse(*v)))
            .map(|(v, _)| v as u32)
            .expect("live edges exist");

        // branch 1: v in the cover
        let undo = remove_into_cover(adj, v);
        current.push(v);
        branch_vc(adj, current, best);
        current.pop();
        restore(adj, undo);

        // branch 2: all neighbors of v in the cover
        let neighbors = adj[v as usize].clone();
        let mut undos = Vec::new();
        for w in &neighbors {
            undos.push(remove_into_cover(adj, *w));
            current.push(*w);
        }
        branch_vc(adj, current, best);
        for _ in &neighbors {
            current.pop();
        }
        for undo in undos.into_iter().rev() {
            restore(adj, undo);
        }
    }

    for undo in taken.into_iter().rev() {
        let v = undo.0;
        restore(adj, undo);
        debug_assert_eq!(current.last(), Some(&v));
        current.pop();
    }
}

type VcUndo = (u32, Vec<u32>);

fn remove_into_cover(adj: &mut [Vec<u32>], v: u32) -> VcUndo {
    let neighbors = std::mem::take(&mut adj[v as usize]);
    for &w in &neighbors {
        adj[w as usize].retain(|&x| x != v);
    }
    (v, neighbors)
}

fn restore(adj: &mut [Vec<u32>], undo: VcUndo) {
    let (v, neighbors) = undo;
    for &w in &neighbors {
        adj[w as usize].push(v);
    }
    adj[v as usize] = neighbors;
}

fn matching_lower_bound(adj: &[Vec<u32>]) -> usize {
    let mut used = vec![false; adj.len()];
    let mut size = 0;
    for v in 0..adj.len() {
        if used[v] {
            continue;
        }
        if let Some(&w) = adj[v].iter().find(|&&w| !used[w as usize]) {
            used[v] = true;
            used[w as usize] = true;
            size += 1;
        }
    }
    size
}

/// Reference oracle: smallest vertex subset covering every edge.
pub fn min_vertex_cover_bruteforce(g: &Graph, cap: usize) -> Result<Vec<VertexId>, SmdError> {
    let ids: Vec<VertexId> = g.vertices().collect();
    if ids.len() > cap {
        return Err(SmdError::CapExceeded { n: ids.len(), cap });
    }
    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    for size in 0..=ids.len() {
        let mut found: Option<Vec<VertexId>> = None;
        subsets_of_size(&ids, size, &mut |subset| {
            if found.is_none()
                && edges
                    .iter()
                    .all(|&(u, v)| subset.contains(&u) || subset.contains(&v))
            {
                found = Some(subset.to_vec());
            }
        });
        if let Some(cover) = found {
            return Ok(cover);
        }
    }
    unreachable!("all vertices always cover")
}

/// smd(g) = size of a minimum vertex cover of G_SR; returns the cover
/// as a witness strong resolving set.
pub fn strong_metric_dimension(g: &Graph) -> Result<(usize, Vec<VertexId>), SmdError> {
    let sr = strong_resolving_graph(g)?;
    let cover = min_vertex_cover(&sr)?;
    Ok((cover.len(), cover))
}

/// s strongly resolves (u, v) iff v lies on a shortest u-s path or u
/// lies on a shortest v-s path; checked on a precomputed matrix.
fn resolves(d: &[u32], n: usize, u: usize, v: usize, s: usize) -> bool {
    let duv = d[u * n + v] as u64;
    duv + d[v * n + s] as u64 == d[u * n + s] as u64
        || duv + d[u * n + s] as u64 == d[v * n + s] as u64
}

/// Reference oracle: smallest set strongly resolving every vertex pair.
pub fn min_strong_resolving_bruteforce(g: &Graph) -> Result<Vec<VertexId>, SmdError> {
    min_strong_resolving_bruteforce_with_cap(g, STRONG_RESOLVING_CAP)
}

pub fn min_strong_resolving_bruteforce_with_cap(
    g: &Graph,
    cap: usize,
) -> Result<Vec<VertexId>, SmdError> {
    if !g.is_connected() {
        return Err(SmdError::Disconnected);
    }
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    if n > cap {
        return Err(SmdError::CapExceeded { n, cap });
    }
    let mut d = vec![0u32; n * n];
    for (i, &v) in ids.iter().enumerate() {
        let row = g.bfs_distances(v).expect("connected");
        for (j, &w) in ids.iter().enumerate() {
            d[i * n + j] = row.get(w).expect("connected");
        }
    }
    let indices: Vec<usize> = (0..n).collect();
    for size in 0..=n {
        let mut found: Option<Vec<VertexId>> = None;
        subsets_of_size(&indices, size, &mut |subset| {
            if found.is_some() {
                return;
            }
            let ok = (0..n).all(|u| {
                (u + 1..n).all(|v| subset.iter().any(|&s| resolves(&d, n, u, v, s)))
            });
            if ok {
                found = Some(subset.iter().map(|&i| ids[i]).collect());
            }
        });
        if let Some(set) = found {
            return Ok(set);
        }
    }
    unreachable!("the full vertex set strongly resolves everything")
}

fn subsets_of_size<T: Copy>(items: &[T], size: usize, visit: &mut impl FnMut(&[T])) {
    fn rec<T: Copy>(
        items: &[T],
        start: usize,
        size: usize,
        acc: &mut Vec<T>,
        visit: &mut impl FnMut(&[T]),
    ) {
        if acc.len() == size {
            visit(acc);
            return;
        }
        let remaining = size - acc.len();
        for i in start..=items.len().saturating_sub(remaining) {
            acc.push(items[i]);
            rec(items, i + 1, size, acc, visit);
            acc.pop();
        }
    }
    if size > items.len() {
        return;
    }
    let mut acc = Vec::with_capacity(size);
    rec(items, 0, size, &mut acc, visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let mut g = Graph::with_vertices(n);
        for i in 1..n {
            g.add_edge((i - 1) as VertexId, i as VertexId).unwrap();
        }
        g
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::with_vertices(n);
        for i in 0..n {
            g.add_edge(i as VertexId, ((i + 1) % n) as VertexId).unwrap();
        }
        g
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::with_vertices(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u as VertexId, v as VertexId).unwrap();
            }
        }
        g
    }

    #[test]
    fn p3_maximal_distance_cases() {
        let g = path(3);
        assert!(is_maximally_distant(&g, 0, 2).unwrap());
        assert!(is_maximally_distant(&g, 2, 0).unwrap());
        assert!(!is_maximally_distant(&g, 1, 0).unwrap());
        assert!(is_maximally_distant(&g, 0, 1).unwrap());
        assert!(!is_maximally_distant(&g, 1, 2).unwrap());
    }

    #[test]
    fn p3_strong_resolving_graph() {
        let g = path(3);
        let sr = strong_resolving_graph(&g).unwrap();
        assert_eq!(sr.edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(sr.degree(1).unwrap(), 0);
    }

    #[test]
    fn c4_strong_resolving_graph_is_antipodal_matching() {
        let sr = strong_resolving_graph(&cycle(4)).unwrap();
        assert_eq!(sr.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn path_endpoints_are_the_only_mmd_pair() {
        for n in 2..=6 {
            let g = path(n);
            assert_eq!(mmd_pairs(&g).unwrap(), vec![(0, (n - 1) as VertexId)]);
        }
    }

    #[test]
    fn frozen_dimensions() {
        for n in 2..=6 {
            assert_eq!(strong_metric_dimension(&path(n)).unwrap().0, 1, "P_{n}");
        }
        assert_eq!(strong_metric_dimension(&cycle(4)).unwrap().0, 2);
        assert_eq!(strong_metric_dimension(&complete(4)).unwrap().0, 3);
        assert_eq!(strong_metric_dimension(&complete(3)).unwrap().0, 2);
    }

    #[test]
    fn single_vertex_has_dimension_zero() {
        let g = Graph::with_vertices(1);
        let (k, witness) = strong_metric_dimension(&g).unwrap();
        assert_eq!(k, 0);
        assert!(witness.is_empty());
        assert!(min_strong_resolving_bruteforce(&g).unwrap().is_empty());
    }

    #[test]
    fn brute_force_frozen_values() {
        assert_eq!(min_strong_resolving_bruteforce(&path(2)).unwrap().len(), 1);
        assert_eq!(min_strong_resolving_bruteforce(&complete(3)).unwrap().len(), 2);
        assert_eq!(min_strong_resolving_bruteforce(&cycle(4)).unwrap().len(), 2);
    }

    #[test]
    fn vertex_cover_small_cases() {
        assert_eq!(min_vertex_cover(&complete(3)).unwrap().len(), 2);
        assert_eq!(min_vertex_cover(&path(3)).unwrap(), vec![1]);
        assert!(min_vertex_cover(&Graph::with_vertices(4)).unwrap().is_empty());
        let two_k2 = {
            let mut g = Graph::with_vertices(4);
            g.add_edge(0, 2).unwrap();
            g.add_edge(1, 3).unwrap();
            g
        };
        assert_eq!(min_vertex_cover(&two_k2).unwrap().len(), 2);
    }

    #[test]
    fn vertex_cover_matches_oracle_on_stars_and_cycles() {
        for g in [path(6), cycle(5), cycle(6), complete(5)] {
            let fast = min_vertex_cover(&g).unwrap();
            let slow = min_vertex_cover_bruteforce(&g, 14).unwrap();
            assert_eq!(fast.len(), slow.len());
            for (u, v) in g.edges() {
                assert!(fast.contains(&u) || fast.contains(&v));
            }
        }
    }

    #[test]
    fn pendant_observation_example() {
        // star: leaves are pendants, center is the support
        let mut g = Graph::with_vertices(4);
        for leaf in 1..4 {
            g.add_edge(0, leaf).unwrap();
        }
        let sr = strong_resolving_graph(&g).unwrap();
        for u in 1..4u32 {
            for v in (u + 1)..4 {
                assert!(sr.has_edge(u, v), "pendants form a clique in G_SR");
            }
        }
        assert_eq!(sr.degree(0).unwrap(), 0, "support vertex isolated in G_SR");
    }

    #[test]
    fn disconnected_inputs_error() {
        let mut g = Graph::with_vertices(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(2, 3).unwrap();
        assert_eq!(mmd_pairs(&g).unwrap_err(), SmdError::Disconnected);
        assert_eq!(
            is_maximally_distant(&g, 0, 2).unwrap_err(),
            SmdError::DisconnectedPair(0, 2)
        );
    }

    #[test]
    fn caps_enforced() {
        let g = complete(13);
        assert!(matches!(
            min_strong_resolving_bruteforce(&g).unwrap_err(),
            SmdError::CapExceeded { n: 13, cap: 12 }
        ));
    }
}

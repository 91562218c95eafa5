//! Exact geodetic-set solvers.
//!
//! Every degree-1 vertex belongs to every geodetic set (nothing else can
//! cover it), so both solvers start from the pendant set. The
//! brute-force solver is the reference oracle; `decide_geodetic` is a
//! branch-and-bound decision procedure for slightly larger graphs.

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has {n} vertices, over the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

pub const BRUTEFORCE_CAP: usize = 16;

/// Dense-index view of a connected graph plus its distance matrix.
struct Matrix {
    ids: Vec<VertexId>,
    dist: Vec<u32>, // n*n
    n: usize,
}

impl Matrix {
    fn build(g: &Graph) -> Result<Self, SolveError> {
        if g.vertex_count() == 0 {
            return Err(SolveError::EmptyGraph);
        }
        if !g.is_connected() {
            return Err(SolveError::Disconnected);
        }
        let ids: Vec<VertexId> = g.vertices().collect();
        let n = ids.len();
        let mut dist = vec![0u32; n * n];
        for (i, &v) in ids.iter().enumerate() {
            let row = g.bfs_distances(v).expect("connected");
            for (j, &w) in ids.iter().enumerate() {
                dist[i * n + j] = row.get(w).expect("connected");
            }
        }
        Ok(Matrix { ids, dist, n })
    }

    fn d(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.n + j]
    }

    /// Indices not covered by any pair of `set`.
    fn uncovered(&self, set: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        'vertex: for w in 0..self.n {
            for (a, &i) in set.iter().enumerate() {
                let diw = self.d(i, w);
                if diw == 0 {
                    continue 'vertex;
                }
                for &j in &set[a + 1..] {
                    if diw as u64 + self.d(w, j) as u64 == self.d(i, j) as u64 {
                        continue 'vertex;
                    }
                }
            }
            out.push(w);
        }
        out
    }
}

/// Minimum geodetic set by exhaustive search over vertex subsets that
/// contain every pendant, in increasing size then lexicographic order.
pub fn min_geodetic_bruteforce(g: &Graph) -> Result<Vec<VertexId>, SolveError> {
    min_geodetic_bruteforce_with_cap(g, BRUTEFORCE_CAP)
}

pub fn min_geodetic_bruteforce_with_cap(
    g: &Graph,
    cap: usize,
) -> Result<Vec<VertexId>, SolveError> {
    let m = Matrix::build(g)?;
    if m.n > cap {
        return Err(SolveError::CapExceeded { n: m.n, cap });
    }
    if m.n == 1 {
        return Ok(vec![m.ids[0]]);
    }
    let pendants: Vec<usize> = (0..m.n)
        .filter(|&i| g.degree(m.ids[i]).unwrap() == 1)
        .collect();
    let pool: Vec<usize> = (0..m.n).filter(|i| !pendants.contains(i)).collect();
    for extra in 0..=pool.len() {
        let mut combo = Combinations::new(pool.len(), extra);
        while let Some(picked) = combo.next() {
            let mut set = pendants.clone();
            set.extend(picked.iter().map(|&p| pool[p]));
            if set.is_empty() {
                continue;
            }
            if m.uncovered(&set).is_empty() {
                let mut out: Vec<VertexId> = set.iter().map(|&i| m.ids[i]).collect();
                out.sort_unstable();
                return Ok(out);
            }
        }
    }
    unreachable!("the full vertex set is always geodetic")
}

/// Is there a geodetic set of size at most k? Returns a witness when so.
///
/// Branching: pick the uncovered vertex with the fewest candidate
/// coverers (smallest id on ties) and try each candidate in id order. A
/// vertex c is a candidate for w when w lies on some shortest path
/// leaving c; both endpoints of any covering pair satisfy that, so the
/// branching is exhaustive.
pub fn decide_geodetic(g: &Graph, k: usize) -> Result<Option<Vec<VertexId>>, SolveError> {
    let m = Matrix::build(g)?;
    let pendants: Vec<usize> = (0..m.n)
        .filter(|&i| g.degree(m.ids[i]).unwrap() == 1)
        .collect();
    if pendants.len() > k || k == 0 {
        return Ok(None);
    }
    // candidates(w): all c with w interior-or-endpoint on a shortest path from c
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); m.n];
    for w in 0..m.n {
        for c in 0..m.n {
            let dcw = m.d(c, w) as u64;
            if (0..m.n).any(|x| dcw + m.d(w, x) as u64 == m.d(c, x) as u64) {
                candidates[w].push(c);
            }
        }
    }
    let mut set = pendants;
    let found = search(&m, &candidates, &mut set, k);
    Ok(found.map(|set| {
        let mut out: Vec<VertexId> = set.iter().map(|&i| m.ids[i]).collect();
        out.sort_unstable();
        out
    }))
}

fn search(m: &Matrix, candidates: &[Vec<usize>], set: &mut Vec<usize>, k: usize) -> Option<Vec<usize>> {
    let uncovered = if set.is_empty() {
        (0..m.n).collect()
    } else {
        m.uncovered(set)
    };
    if uncovered.is_empty() && !set.is_empty() {
        return Some(set.clone());
    }
    if set.len() >= k {
        return None;
    }
    // fail-first: fewest open candidates, ties to the smallest id
    let branch_on = uncovered
        .iter()
        .copied()
        .min_by_key(|&w| {
            (
                candidates[w].iter().filter(|c| !set.contains(c)).count(),
                m.ids[w],
            )
        })
        .unwrap_or(0);
    for &c in &candidates[branch_on] {
        if set.contains(&c) {
            continue;
        }
        set.push(c);
        if let Some(hit) = search(m, candidates, set, k) {
            set.pop();
            return Some(hit);
        }
        set.pop();
    }
    None
}

/// Smallest k for which `decide_geodetic` succeeds, with a witness.
pub fn min_geodetic(g: &Graph) -> Result<Vec<VertexId>, SolveError> {
    let pendants = g.pendant_vertices().len();
    let mut k = pendants.max(1);
    if g.vertex_count() >= 2 {
        k = k.max(2);
    }
    loop {
        if let Some(witness) = decide_geodetic(g, k)? {
            return Ok(witness);
        }
        k += 1;
    }
}

/// Lexicographic k-combinations of 0..n.
struct Combinations {
    n: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let state = if k <= n {
            Some((0..k).collect())
        } else {
            None
        };
        Combinations { n, k, state }
    }

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.clone()?;
        // advance
        let idx = &mut self.state;
        if let Some(v) = idx {
            if self.k == 0 {
                *idx = None;
            } else {
                let mut i = self.k;
                loop {
                    if i == 0 {
                        *idx = None;
                        break;
                    }
                    i -= 1;
                    if v[i] + 1 <= self.n - (self.k - i) {
                        v[i] += 1;
                        for j in i + 1..self.k {
                            v[j] = v[j - 1] + 1;
                        }
                        break;
                    }
                }
            }
        }
        Some(current)
    }
}

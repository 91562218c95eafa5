//! Geodesic intervals and geodetic-set checks.
//!
//! `I(u, v)` is the set of vertices lying on at least one shortest
//! u-v path; a vertex set S is geodetic when the pairwise intervals
//! of S cover the whole graph.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{DistanceRow, Graph, GraphError, VertexId, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConvexityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertices {0} and {1} are in different components")]
    DisconnectedPair(VertexId, VertexId),
    #[error("generator set is empty")]
    EmptySet,
    #[error("graph is not connected")]
    Disconnected,
}

/// Vertices on shortest paths between the generators.
#[derive(Debug, Clone)]
pub struct IntervalSet {
    members: VertexSet,
    generators: Vec<VertexId>,
}

impl IntervalSet {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter()
    }

    pub fn generators(&self) -> &[VertexId] {
        &self.generators
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }
}

/// I(u, v): w is in the interval iff d(u,w) + d(w,v) = d(u,v).
pub fn interval(g: &Graph, u: VertexId, v: VertexId) -> Result<IntervalSet, ConvexityError> {
    let row_u = g.bfs_distances(u)?;
    let row_v = g.bfs_distances(v)?;
    let duv = row_u
        .get(v)
        .ok_or(ConvexityError::DisconnectedPair(u, v))? as u64;
    let mut members = VertexSet::with_bound(g.id_bound());
    for w in g.vertices() {
        if let (Some(a), Some(b)) = (row_u.get(w), row_v.get(w)) {
            if a as u64 + b as u64 == duv {
                members.insert(w);
            }
        }
    }
    Ok(IntervalSet {
        members,
        generators: vec![u, v],
    })
}

/// Union of I(s, t) over all generator pairs (s = t included, so the
/// generators themselves are always members).
pub fn interval_of_set(g: &Graph, s: &[VertexId]) -> Result<IntervalSet, ConvexityError> {
    if s.is_empty() {
        return Err(ConvexityError::EmptySet);
    }
    let rows = distance_rows(g, s)?;
    let first = &rows[0];
    for (i, &v) in s.iter().enumerate() {
        if first.get(v).is_none() {
            return Err(ConvexityError::DisconnectedPair(s[0], s[i]));
        }
    }
    Ok(interval_of_rows(g, s, &rows))
}

/// BFS rows for each generator, in order. Shared with callers that need
/// the rows themselves (solver, audits).
pub fn distance_rows(g: &Graph, s: &[VertexId]) -> Result<Vec<DistanceRow>, ConvexityError> {
    for &v in s {
        if !g.contains(v) {
            return Err(GraphError::MissingVertex(v).into());
        }
    }
    Ok(s.par_iter()
        .map(|&v| g.bfs_distances(v).expect("vertex checked above"))
        .collect())
}

pub(crate) fn interval_of_rows(g: &Graph, s: &[VertexId], rows: &[DistanceRow]) -> IntervalSet {
    let n = s.len();
    // d(s_i, s_j) read off row i
    let mut pair_dist = vec![None::<u32>; n * n];
    for i in 0..n {
        for j in 0..n {
            pair_dist[i * n + j] = rows[i].get(s[j]);
        }
    }
    let bound = g.id_bound();
    let member_flags: Vec<bool> = (0..bound as VertexId)
        .into_par_iter()
        .map(|w| {
            if !g.contains(w) {
                return false;
            }
            for i in 0..n {
                let Some(a) = rows[i].get(w) else { continue };
                if a == 0 {
                    return true; // w is a generator
                }
                for j in (i + 1)..n {
                    let (Some(b), Some(d)) = (rows[j].get(w), pair_dist[i * n + j]) else {
                        continue;
                    };
                    if a as u64 + b as u64 == d as u64 {
                        return true;
                    }
                }
            }
            false
        })
        .collect();
    let mut members = VertexSet::with_bound(bound);
    for w in g.vertices() {
        if member_flags[w as usize] {
            members.insert(w);
        }
    }
    IntervalSet {
        members,
        generators: s.to_vec(),
    }
}

#[derive(Debug, Clone)]
pub struct GeodeticCheck {
    pub is_geodetic: bool,
    /// Vertices not covered by any generator pair, ascending.
    pub uncovered: Vec<VertexId>,
}

/// Does I(s) cover every vertex of the (connected) graph?
pub fn is_geodetic(g: &Graph, s: &[VertexId]) -> Result<GeodeticCheck, ConvexityError> {
    if !g.is_connected() {
        return Err(ConvexityError::Disconnected);
    }
    if s.is_empty() {
        return Err(ConvexityError::EmptySet);
    }
    let cover = interval_of_set(g, s)?;
    let uncovered: Vec<VertexId> = g.vertices().filter(|&v| !cover.contains(v)).collect();
    Ok(GeodeticCheck {
        is_geodetic: uncovered.is_empty(),
        uncovered,
    })
}

//! Undirected simple graphs with dense integer vertex ids.
//!
//! Ids are handed out in creation order and are never reused: deleting
//! vertices leaves holes in the id space instead of renumbering, so BFS
//! rows and role maps stay index-aligned for the whole lifetime of a
//! graph and anything derived from it.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("self loops are not allowed (vertex {0})")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("path length must be at least 1")]
    EmptyPath,
}

#[derive(Debug, Clone, Default)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    alive: Vec<bool>,
    alive_count: usize,
    num_edges: usize,
    labels: BTreeMap<VertexId, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Edgeless graph on `n` fresh vertices (ids `0..n`).
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Edgeless copy sharing this graph's id space and alive set.
    /// Derived graphs (e.g. the strong resolving graph) keep vertex ids
    /// comparable with the original.
    pub fn on_same_vertices(&self) -> Self {
        Graph {
            adj: vec![Vec::new(); self.adj.len()],
            alive: self.alive.clone(),
            alive_count: self.alive_count,
            num_edges: 0,
            labels: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.adj.len() as VertexId;
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.alive_count += 1;
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adj[u as usize].contains(&v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.adj[u as usize].push(v);
        self.adj[v as usize].push(u);
        self.num_edges += 1;
        Ok(())
    }

    /// Connects `u` and `v` by a simple path of `len` edges through
    /// `len - 1` fresh internal vertices. `len == 1` degenerates to a
    /// plain edge. Returns the internal vertices in order from `u` to `v`.
    pub fn add_path(
        &mut self,
        u: VertexId,
        v: VertexId,
        len: u64,
    ) -> Result<Vec<VertexId>, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if len == 0 {
            return Err(GraphError::EmptyPath);
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut inner = Vec::with_capacity((len - 1) as usize);
        let mut prev = u;
        for _ in 1..len {
            let w = self.add_vertex();
            self.add_edge(prev, w)?;
            inner.push(w);
            prev = w;
        }
        self.add_edge(prev, v)?;
        Ok(inner)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.alive.len() && self.alive[v as usize]
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::MissingVertex(v))
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains(u) && self.adj[u as usize].contains(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.alive_count
    }

    pub fn edge_count(&self) -> usize {
        self.num_edges
    }

    /// One past the largest id ever created; sizes flat per-vertex arrays.
    pub fn id_bound(&self) -> usize {
        self.adj.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| a.then_some(i as VertexId))
    }

    /// Each undirected edge once, as (min, max).
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.adj[u as usize]
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        self.check(v)?;
        Ok(&self.adj[v as usize])
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.adj[v as usize].len())
    }

    pub(crate) fn neighbors_unchecked(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    /// All degree-1 vertices, ascending.
    pub fn pendant_vertices(&self) -> Vec<VertexId> {
        self.vertices()
            .filter(|&v| self.adj[v as usize].len() == 1)
            .collect()
    }

    pub fn bfs_distances(&self, source: VertexId) -> Result<DistanceRow, GraphError> {
        self.check(source)?;
        let mut dist = vec![UNREACHED; self.adj.len()];
        dist[source as usize] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in &self.adj[u as usize] {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(DistanceRow { source, dist })
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices().next() else {
            return true;
        };
        let row = self.bfs_distances(start).expect("start vertex is alive");
        self.vertices().all(|v| row.get(v).is_some())
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.adj.len()];
        let mut count = 0;
        for v in self.vertices() {
            if seen[v as usize] {
                continue;
            }
            count += 1;
            let mut stack = vec![v];
            seen[v as usize] = true;
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Acyclic check; holds iff |E| = |V| - #components.
    pub fn is_forest(&self) -> bool {
        self.num_edges == self.alive_count - self.component_count()
    }

    /// New graph with `remove` (and all incident edges) gone. Surviving
    /// vertices keep their ids; the freed ids are never handed out again.
    pub fn delete_vertices(&self, remove: &[VertexId]) -> Result<Graph, GraphError> {
        for &v in remove {
            self.check(v)?;
        }
        let mut dead = vec![false; self.adj.len()];
        for &v in remove {
            dead[v as usize] = true;
        }
        let mut g = self.clone();
        let mut removed_edges = 0;
        for v in self.vertices() {
            if dead[v as usize] {
                removed_edges += g.adj[v as usize].len();
                g.adj[v as usize] = Vec::new();
                g.alive[v as usize] = false;
                g.alive_count -= 1;
                g.labels.remove(&v);
            } else {
                g.adj[v as usize].retain(|&w| !dead[w as usize]);
            }
        }
        // Edges between two deleted vertices were counted twice.
        let both: usize = self
            .vertices()
            .filter(|&v| dead[v as usize])
            .map(|v| {
                self.adj[v as usize]
                    .iter()
                    .filter(|&&w| dead[w as usize])
                    .count()
            })
            .sum();
        g.num_edges -= removed_edges - both / 2;
        Ok(g)
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) -> Result<(), GraphError> {
        self.check(v)?;
        self.labels.insert(v, label.into());
        Ok(())
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, String> {
        &self.labels
    }
}

const UNREACHED: u32 = u32::MAX;

/// Hop distances from one source. Unreachable vertices have no entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRow {
    source: VertexId,
    dist: Vec<u32>,
}

impl DistanceRow {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn get(&self, v: VertexId) -> Option<u32> {
        match self.dist.get(v as usize) {
            Some(&d) if d != UNREACHED => Some(d),
            _ => None,
        }
    }
}

/// Flat vertex set over a graph's id space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    bits: Vec<bool>,
    count: usize,
}

impl VertexSet {
    pub fn with_bound(bound: usize) -> Self {
        VertexSet {
            bits: vec![false; bound],
            count: 0,
        }
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let slot = &mut self.bits[v as usize];
        if *slot {
            false
        } else {
            *slot = true;
            self.count += 1;
            true
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.get(v as usize).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as VertexId))
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<T: IntoIterator<Item = VertexId>>(iter: T) -> Self {
        let items: Vec<VertexId> = iter.into_iter().collect();
        let bound = items.iter().map(|&v| v as usize + 1).max().unwrap_or(0);
        let mut set = VertexSet::with_bound(bound);
        for v in items {
            set.insert(v);
        }
        set
    }
}

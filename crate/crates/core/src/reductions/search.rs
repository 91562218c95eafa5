//! Mixed graph searching on reduced instances.
//!
//! Searchers are placed, removed, and slid along edges. An edge becomes
//! clear when a searcher slides along it or when both its endpoints are
//! occupied at once. A cleared edge is recontaminated whenever it meets
//! a contaminated edge at an unguarded vertex, transitively. The
//! simulator enforces exactly these rules; the strategy generator emits
//! a choreography that clears any reduced instance with 17 searchers:
//! 13 parked on the anchors and 4 doing the legwork.

use super::{ReducedInstance, SetPart, Symbol};
use crate::graph::{Graph, VertexId};
use std::collections::HashMap;
use thiserror::Error;

pub const SEARCH_BUDGET: u32 = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchOp {
    Place { searcher: u32, at: VertexId },
    Remove { searcher: u32 },
    Slide { searcher: u32, to: VertexId },
}

#[derive(Debug, Clone)]
pub struct MixedSearchStrategy {
    pub budget: u32,
    pub segments: Vec<(String, Vec<SearchOp>)>,
}

impl MixedSearchStrategy {
    pub fn ops(&self) -> impl Iterator<Item = &SearchOp> {
        self.segments.iter().flat_map(|(_, ops)| ops.iter())
    }

    pub fn op_count(&self) -> usize {
        self.segments.iter().map(|(_, ops)| ops.len()).sum()
    }

    /// Copy of the strategy with one named segment dropped, for
    /// mutation checks. None if no segment has that name.
    pub fn without_segment(&self, name: &str) -> Option<MixedSearchStrategy> {
        if !self.segments.iter().any(|(n, _)| n == name) {
            return None;
        }
        Some(MixedSearchStrategy {
            budget: self.budget,
            segments: self
                .segments
                .iter()
                .filter(|(n, _)| n != name)
                .cloned()
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub all_cleared: bool,
    pub max_searchers: u32,
    pub uncleared_edges: usize,
    pub ops_applied: usize,
    pub recontaminations: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("searcher {0} is already placed")]
    AlreadyPlaced(u32),
    #[error("searcher {0} is not placed")]
    NotPlaced(u32),
    #[error("no vertex {0} to stand on")]
    UnknownVertex(VertexId),
    #[error("searcher {searcher} cannot slide {from} -> {to}: not an edge")]
    NotAnEdge { searcher: u32, from: VertexId, to: VertexId },
}

/// Incidence lists annotated with a stable id per undirected edge.
struct EdgeIndex {
    offsets: Vec<usize>,
    entries: Vec<(VertexId, u32)>,
    edges: usize,
}

impl EdgeIndex {
    fn build(g: &Graph) -> EdgeIndex {
        let bound = g.id_bound() as usize;
        let mut degree = vec![0usize; bound];
        for (u, v) in g.edges() {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = vec![0usize; bound + 1];
        for i in 0..bound {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut entries = vec![(0 as VertexId, 0u32); offsets[bound]];
        let mut cursor = offsets.clone();
        let mut edges = 0u32;
        for (u, v) in g.edges() {
            let e = edges;
            edges += 1;
            entries[cursor[u as usize]] = (v, e);
            cursor[u as usize] += 1;
            entries[cursor[v as usize]] = (u, e);
            cursor[v as usize] += 1;
        }
        EdgeIndex { offsets, entries, edges: edges as usize }
    }

    fn incident(&self, v: VertexId) -> &[(VertexId, u32)] {
        &self.entries[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    fn find(&self, u: VertexId, v: VertexId) -> Option<u32> {
        self.incident(u).iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }
}

struct SearchState<'g> {
    index: EdgeIndex,
    cleared: Vec<bool>,
    uncleared: usize,
    occupancy: Vec<u32>,
    position: HashMap<u32, VertexId>,
    max_in_use: u32,
    recontaminations: u64,
    graph: &'g Graph,
}

impl<'g> SearchState<'g> {
    fn new(graph: &'g Graph) -> SearchState<'g> {
        let index = EdgeIndex::build(graph);
        let edges = index.edges;
        SearchState {
            index,
            cleared: vec![false; edges],
            uncleared: edges,
            occupancy: vec![0; graph.id_bound() as usize],
            position: HashMap::new(),
            max_in_use: 0,
            recontaminations: 0,
            graph,
        }
    }

    fn clear_edge(&mut self, e: u32) {
        if !self.cleared[e as usize] {
            self.cleared[e as usize] = true;
            self.uncleared -= 1;
        }
    }

    /// Both-endpoints rule at a vertex a searcher just reached.
    fn arrival(&mut self, v: VertexId) {
        for i in self.index.offsets[v as usize]..self.index.offsets[v as usize + 1] {
            let (w, e) = self.index.entries[i];
            if self.occupancy[w as usize] > 0 {
                self.clear_edge(e);
            }
        }
    }

    /// Contamination closure after `start` lost its guard. Spreads from
    /// contaminated edges through unguarded vertices only.
    fn vacate(&mut self, start: VertexId) {
        self.occupancy[start as usize] -= 1;
        if self.occupancy[start as usize] > 0 {
            return;
        }
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            if self.occupancy[v as usize] > 0 {
                continue;
            }
            let span = self.index.offsets[v as usize]..self.index.offsets[v as usize + 1];
            let dirty = self.index.entries[span.clone()]
                .iter()
                .any(|&(_, e)| !self.cleared[e as usize]);
            if !dirty {
                continue;
            }
            for i in span {
                let (w, e) = self.index.entries[i];
                if self.cleared[e as usize] {
                    self.cleared[e as usize] = false;
                    self.uncleared += 1;
                    self.recontaminations += 1;
                    queue.push(w);
                }
            }
        }
    }

    fn apply(&mut self, op: &SearchOp) -> Result<(), SearchError> {
        match *op {
            SearchOp::Place { searcher, at } => {
                if self.position.contains_key(&searcher) {
                    return Err(SearchError::AlreadyPlaced(searcher));
                }
                if !self.graph.contains(at) {
                    return Err(SearchError::UnknownVertex(at));
                }
                self.position.insert(searcher, at);
                self.occupancy[at as usize] += 1;
                self.max_in_use = self.max_in_use.max(self.position.len() as u32);
                self.arrival(at);
            }
            SearchOp::Remove { searcher } => {
                let at = self
                    .position
                    .remove(&searcher)
                    .ok_or(SearchError::NotPlaced(searcher))?;
                self.vacate(at);
            }
            SearchOp::Slide { searcher, to } => {
                let from = *self
                    .position
                    .get(&searcher)
                    .ok_or(SearchError::NotPlaced(searcher))?;
                let e = self
                    .index
                    .find(from, to)
                    .ok_or(SearchError::NotAnEdge { searcher, from, to })?;
                self.clear_edge(e);
                self.occupancy[to as usize] += 1;
                self.position.insert(searcher, to);
                self.arrival(to);
                self.vacate(from);
            }
        }
        Ok(())
    }
}

pub fn simulate(g: &Graph, strategy: &MixedSearchStrategy) -> Result<SearchOutcome, SearchError> {
    let mut state = SearchState::new(g);
    let mut applied = 0usize;
    for op in strategy.ops() {
        state.apply(op)?;
        applied += 1;
    }
    Ok(SearchOutcome {
        all_cleared: state.uncleared == 0,
        max_searchers: state.max_in_use,
        uncleared_edges: state.uncleared,
        ops_applied: applied,
        recontaminations: state.recontaminations,
    })
}

const RUNNER_A: u32 = 14;
const RUNNER_B: u32 = 15;
const RUNNER_C: u32 = 16;
const RUNNER_D: u32 = 17;

/// Park, run the chain, leave. The chain's far end must already be safe
/// to abandon or guarded by someone else.
fn errand(ops: &mut Vec<SearchOp>, s: u32, chain: &[VertexId]) {
    ops.push(SearchOp::Place { searcher: s, at: chain[0] });
    for &v in &chain[1..] {
        ops.push(SearchOp::Slide { searcher: s, to: v });
    }
    ops.push(SearchOp::Remove { searcher: s });
}

/// Clear a pendant edge by momentarily standing on the leaf while the
/// host is guarded.
fn tap(ops: &mut Vec<SearchOp>, s: u32, leaf: VertexId) {
    ops.push(SearchOp::Place { searcher: s, at: leaf });
    ops.push(SearchOp::Remove { searcher: s });
}

/// The 17-searcher choreography for a reduced instance: anchors hold the
/// 13 commons for the whole run while four runners clear gadget by
/// gadget, never letting a cleared region touch an unguarded
/// contaminated edge.
pub fn search_strategy(inst: &ReducedInstance) -> MixedSearchStrategy {
    let idx = &inst.index;
    let n = inst.source.n();
    let m = inst.source.m() as u32;
    let chain = |a: VertexId, b: VertexId| {
        inst.path_between(a, b)
            .unwrap_or_else(|| panic!("construction path {a}-{b} not recorded"))
            .chain_from(a)
    };
    let pendant = |v: VertexId| {
        inst.pendant_of(v)
            .unwrap_or_else(|| panic!("vertex {v} should carry a pendant"))
    };
    let mut segments: Vec<(String, Vec<SearchOp>)> = Vec::new();

    let mut ops = Vec::new();
    let mut anchors: Vec<VertexId> = idx.g.to_vec();
    anchors.extend(idx.hub.iter().flatten());
    for (s, &at) in anchors.iter().enumerate() {
        ops.push(SearchOp::Place { searcher: s as u32 + 1, at });
    }
    for i in 1..=4 {
        tap(&mut ops, RUNNER_A, pendant(idx.g(i)));
    }
    for sym in [Symbol::P, Symbol::R] {
        for part in SetPart::ALL {
            tap(&mut ops, RUNNER_A, pendant(idx.hub(sym, part)));
        }
    }
    errand(&mut ops, RUNNER_A, &chain(idx.g(1), idx.g(2)));
    errand(&mut ops, RUNNER_A, &chain(idx.g(3), idx.g(4)));
    segments.push(("setup".into(), ops));

    for part in SetPart::ALL {
        for a in 1..=n {
            let mut ops = Vec::new();
            let (u, v, w) = (idx.elem_u(part, a), idx.elem_v(part, a), idx.elem_w(part, a));
            let gate = idx.gate(part, a);
            ops.push(SearchOp::Place { searcher: RUNNER_A, at: u });
            ops.push(SearchOp::Place { searcher: RUNNER_B, at: v });
            ops.push(SearchOp::Place { searcher: RUNNER_C, at: w });
            tap(&mut ops, RUNNER_D, pendant(u));
            tap(&mut ops, RUNNER_D, pendant(w));
            errand(&mut ops, RUNNER_D, &chain(u, w));
            errand(&mut ops, RUNNER_D, &chain(v, w));
            errand(&mut ops, RUNNER_D, &chain(w, idx.g(4)));
            errand(&mut ops, RUNNER_D, &chain(u, idx.hub(Symbol::P, part)));
            errand(&mut ops, RUNNER_D, &chain(u, idx.hub(Symbol::R, part)));
            // the q approach pauses on the gate so its pendant can be
            // tapped, then rolls the last step into the hub
            let uq = chain(u, idx.hub(Symbol::Q, part));
            debug_assert_eq!(uq[uq.len() - 2], gate);
            ops.push(SearchOp::Place { searcher: RUNNER_D, at: u });
            for &step in &uq[1..uq.len() - 1] {
                ops.push(SearchOp::Slide { searcher: RUNNER_D, to: step });
            }
            ops.push(SearchOp::Remove { searcher: RUNNER_A });
            tap(&mut ops, RUNNER_A, pendant(gate));
            ops.push(SearchOp::Slide { searcher: RUNNER_D, to: *uq.last().unwrap() });
            ops.push(SearchOp::Remove { searcher: RUNNER_D });
            errand(&mut ops, RUNNER_D, &chain(v, idx.hub(Symbol::Q, part)));
            ops.push(SearchOp::Remove { searcher: RUNNER_B });
            ops.push(SearchOp::Remove { searcher: RUNNER_C });
            segments.push((format!("element:{}:{a}", part.label()), ops));
        }
    }

    for i in 1..=n {
        let (z1, z2) = (idx.z1(i), idx.z2(i));
        let mut ops = Vec::new();
        ops.push(SearchOp::Place { searcher: RUNNER_A, at: z1 });
        ops.push(SearchOp::Place { searcher: RUNNER_B, at: z2 });
        tap(&mut ops, RUNNER_C, pendant(z2));
        errand(&mut ops, RUNNER_C, &chain(z1, z2));
        errand(&mut ops, RUNNER_C, &chain(z2, idx.g(1)));
        ops.push(SearchOp::Remove { searcher: RUNNER_B });
        errand(&mut ops, RUNNER_B, &chain(z1, idx.g(1)));
        errand(&mut ops, RUNNER_B, &chain(z1, idx.g(2)));
        segments.push((format!("selector:{i}:open"), ops));

        for j in 1..=m {
            let mut ops = Vec::new();
            let (x, y) = (idx.x(i, j), idx.y(i, j));
            ops.push(SearchOp::Place { searcher: RUNNER_B, at: x });
            ops.push(SearchOp::Place { searcher: RUNNER_C, at: y });
            tap(&mut ops, RUNNER_D, pendant(y));
            errand(&mut ops, RUNNER_D, &chain(x, y));
            errand(&mut ops, RUNNER_D, &chain(y, idx.g(2)));
            errand(&mut ops, RUNNER_D, &chain(y, idx.g(4)));
            ops.push(SearchOp::Remove { searcher: RUNNER_C });
            errand(&mut ops, RUNNER_D, &chain(x, z1));
            for sym in Symbol::ALL {
                for part in SetPart::ALL {
                    let fork = idx.branch[&(i, j, sym, part)];
                    // standing on the fork while x is guarded clears the
                    // connecting edge by occupancy
                    ops.push(SearchOp::Place { searcher: RUNNER_C, at: fork });
                    let full = chain(x, idx.hub(sym, part));
                    debug_assert_eq!(full[1], fork);
                    errand(&mut ops, RUNNER_D, &full[1..]);
                    errand(&mut ops, RUNNER_D, &chain(fork, idx.g(2)));
                    errand(&mut ops, RUNNER_D, &chain(fork, idx.g(3)));
                    ops.push(SearchOp::Remove { searcher: RUNNER_C });
                }
            }
            ops.push(SearchOp::Remove { searcher: RUNNER_B });
            segments.push((format!("selector:{i}:set:{j}"), ops));
        }

        let mut ops = Vec::new();
        ops.push(SearchOp::Remove { searcher: RUNNER_A });
        segments.push((format!("selector:{i}:close"), ops));
    }

    let mut ops = Vec::new();
    for s in 1..=13 {
        ops.push(SearchOp::Remove { searcher: s });
    }
    segments.push(("teardown".into(), ops));

    MixedSearchStrategy { budget: SEARCH_BUDGET, segments }
}

//! The matching-to-geodetic construction.
//!
//! Thirteen anchors (g1..g4 plus a p, q, r hub per coordinate part) are
//! shared by everything. Each selector gadget i owns one set vertex
//! x^i_j per family set, whose path lengths to the nine hubs encode the
//! set's coordinates in multiples of M around a base of M^2. Each
//! element gadget (part, a) owns a u, v, w triangle of long paths whose
//! hub distances encode a. Matching coordinates line routes up exactly;
//! mismatches shave off a multiple of 2M and reroute shortest paths away
//! from the q hubs, which is what the audits measure.

use super::{
    CommonKind, PathRecord, ReducedInstance, ReductionError, ReductionParams, RoleTag, SetPart,
    Symbol,
};
use crate::graph::{Graph, VertexId};
use crate::instances::ThreeDmInstance;

struct Builder {
    graph: Graph,
    roles: Vec<RoleTag>,
    paths: Vec<PathRecord>,
}

impl Builder {
    fn vertex(&mut self, role: RoleTag) -> VertexId {
        let v = self.graph.add_vertex();
        self.roles.push(role);
        v
    }

    fn pendant(&mut self, host: VertexId, role: RoleTag) -> Result<VertexId, ReductionError> {
        let p = self.vertex(role);
        self.graph.add_edge(host, p)?;
        Ok(p)
    }

    /// Lay down a fresh path and tag its interior. Returns the registry
    /// slot so callers can re-tag special interior vertices.
    fn path(&mut self, from: VertexId, to: VertexId, len: u64) -> Result<usize, ReductionError> {
        let internals = self.graph.add_path(from, to, len)?;
        for (off, _) in internals.iter().enumerate() {
            self.roles.push(RoleTag::PathInternal { from, to, pos: off as u64 + 1 });
        }
        self.paths.push(PathRecord { from, to, stated_len: len, internals });
        Ok(self.paths.len() - 1)
    }

    fn retag(&mut self, v: VertexId, role: RoleTag) {
        self.roles[v as usize] = role;
    }
}

/// Build the geodetic-set question for a matching instance: the graph,
/// the budget k = n + (number of degree-1 vertices), roles, and the
/// path registry.
pub fn reduce_3dm_to_geodetic(
    inst: &ThreeDmInstance,
    params: &ReductionParams,
) -> Result<ReducedInstance, ReductionError> {
    params.validate(inst.n())?;
    let n = inst.n() as u64;
    let m = inst.m() as u64;
    let scale = params.scale;
    let sq = scale
        .checked_mul(scale)
        .ok_or_else(|| ReductionError::BadParams("scale overflows".into()))?;
    let path_budget = 2 + 25 * n + 31 * n * m;
    let size_bound = path_budget
        .checked_mul(sq + 2 * n * scale + 1)
        .filter(|&b| b < u32::MAX as u64)
        .ok_or_else(|| {
            ReductionError::BadParams("construction would not fit 32-bit vertex ids".into())
        })?;
    let _ = size_bound;

    let mut b = Builder { graph: Graph::new(), roles: Vec::new(), paths: Vec::new() };

    let g: Vec<VertexId> = (1..=4)
        .map(|i| b.vertex(RoleTag::Common(CommonKind::G(i))))
        .collect();
    let mut hub = [[0 as VertexId; 3]; 3];
    for sym in Symbol::ALL {
        for part in SetPart::ALL {
            hub[sym.index()][part.index()] =
                b.vertex(RoleTag::Common(CommonKind::Hub(sym, part)));
        }
    }
    for i in 1..=4u8 {
        b.pendant(g[i as usize - 1], RoleTag::CommonPendant(CommonKind::G(i)))?;
    }
    for sym in Symbol::ALL {
        if sym == Symbol::Q {
            continue; // q hubs are reached through gates instead
        }
        for part in SetPart::ALL {
            b.pendant(
                hub[sym.index()][part.index()],
                RoleTag::CommonPendant(CommonKind::Hub(sym, part)),
            )?;
        }
    }

    b.path(g[0], g[1], sq)?;
    b.path(g[2], g[3], sq)?;

    for i in 1..=inst.n() {
        let z1 = b.vertex(RoleTag::SetZ1 { i });
        let z2 = b.vertex(RoleTag::SetZ2 { i });
        b.pendant(z2, RoleTag::SetZ2Pendant { i })?;
        b.path(z1, z2, sq)?;
        b.path(g[0], z1, sq)?;
        b.path(g[0], z2, sq)?;
        b.path(g[1], z1, sq)?;

        for (j, triple) in inst.sets().iter().enumerate() {
            let j = j as u32 + 1;
            let x = b.vertex(RoleTag::SetX { i, j });
            let y = b.vertex(RoleTag::SetY { i, j });
            b.pendant(y, RoleTag::SetYPendant { i, j })?;
            b.path(x, y, sq)?;
            b.path(z1, x, sq)?;
            b.path(g[3], y, sq)?;
            b.path(g[1], y, sq - 1)?;
            for sym in Symbol::ALL {
                for part in SetPart::ALL {
                    let coord = triple[part.index()] as u64;
                    let len = match sym {
                        Symbol::P => sq + 2 * coord * scale,
                        Symbol::Q => sq - coord * scale,
                        Symbol::R => sq - 2 * coord * scale,
                    };
                    let slot = b.path(x, hub[sym.index()][part.index()], len)?;
                    let fork = b.paths[slot].internals[0];
                    b.retag(fork, RoleTag::Branch { i, j, sym, part });
                    b.path(fork, g[1], sq)?;
                    b.path(fork, g[2], sq)?;
                }
            }
        }
    }

    for part in SetPart::ALL {
        for a in 1..=inst.n() {
            let au = a as u64;
            let u = b.vertex(RoleTag::ElemU { part, a });
            let v = b.vertex(RoleTag::ElemV { part, a });
            let w = b.vertex(RoleTag::ElemW { part, a });
            b.pendant(u, RoleTag::ElemUPendant { part, a })?;
            b.pendant(w, RoleTag::ElemWPendant { part, a })?;
            b.path(u, w, sq)?;
            b.path(v, w, sq)?;
            b.path(u, hub[Symbol::P.index()][part.index()], sq - 2 * au * scale)?;
            let slot = b.path(u, hub[Symbol::Q.index()][part.index()], sq + au * scale)?;
            let gate = *b.paths[slot].internals.last().unwrap();
            b.retag(gate, RoleTag::Gate { part, a });
            b.pendant(gate, RoleTag::GatePendant { part, a })?;
            b.path(u, hub[Symbol::R.index()][part.index()], sq + 2 * au * scale)?;
            b.path(v, hub[Symbol::Q.index()][part.index()], sq + au * scale)?;
            b.path(w, g[3], sq)?;
        }
    }

    let k = n + b.graph.pendant_vertices().len() as u64;
    ReducedInstance::assemble(b.graph, k, *params, inst.clone(), b.roles, b.paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ThreeDmInstance;
    use crate::reductions::{ReductionParams, SetPart, Symbol};

    fn tiny() -> ReducedInstance {
        let inst = ThreeDmInstance::new(1, vec![[1, 1, 1]]).unwrap();
        reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(5)).unwrap()
    }

    #[test]
    fn tiny_instance_shape() {
        let r = tiny();
        assert!(r.graph.is_connected());
        // 10 anchor pendants, one z2 pendant, one y pendant, and three
        // per element gadget
        assert_eq!(r.graph.pendant_vertices().len(), 21);
        assert_eq!(r.k, 22);
        let idx = &r.index;
        assert_eq!(r.graph.degree(idx.x(1, 1)).unwrap(), 11);
        assert_eq!(r.graph.degree(idx.gate(SetPart::Beta, 1)).unwrap(), 3);
        assert_eq!(r.graph.degree(idx.elem_v(SetPart::Alpha, 1)).unwrap(), 2);
        assert_eq!(r.graph.degree(idx.z1(1)).unwrap(), 4);
    }

    #[test]
    fn stated_lengths_encode_the_triple() {
        let inst = ThreeDmInstance::new(2, vec![[2, 1, 2], [1, 2, 1]]).unwrap();
        let r = reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(9)).unwrap();
        let sq = 81;
        let x = r.index.x(1, 1); // triple (2, 1, 2)
        let p_alpha = r.index.hub(Symbol::P, SetPart::Alpha);
        let q_beta = r.index.hub(Symbol::Q, SetPart::Beta);
        let r_gamma = r.index.hub(Symbol::R, SetPart::Gamma);
        assert_eq!(r.path_between(x, p_alpha).unwrap().stated_len, sq + 2 * 2 * 9);
        assert_eq!(r.path_between(x, q_beta).unwrap().stated_len, sq - 9);
        assert_eq!(r.path_between(x, r_gamma).unwrap().stated_len, sq - 2 * 2 * 9);
        let u = r.index.elem_u(SetPart::Gamma, 2);
        let q_gamma = r.index.hub(Symbol::Q, SetPart::Gamma);
        assert_eq!(r.path_between(u, q_gamma).unwrap().stated_len, sq + 2 * 9);
        let y = r.index.y(2, 2);
        assert_eq!(r.path_between(r.index.g(2), y).unwrap().stated_len, sq - 1);
    }

    #[test]
    fn anchors_break_all_cycles() {
        let r = tiny();
        let mut anchors: Vec<_> = r.index.g.to_vec();
        anchors.extend(r.index.hub.iter().flatten());
        let rest = r.graph.delete_vertices(&anchors).unwrap();
        assert!(rest.is_forest());
    }

    #[test]
    fn construction_is_deterministic() {
        let inst = ThreeDmInstance::new(2, vec![[1, 1, 2], [2, 2, 1], [1, 2, 1]]).unwrap();
        let a = reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(9)).unwrap();
        let b = reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(9)).unwrap();
        let ea: Vec<_> = a.graph.edges().collect();
        let eb: Vec<_> = b.graph.edges().collect();
        assert_eq!(ea, eb);
        assert_eq!(a.k, b.k);
    }

    #[test]
    fn undersized_scale_is_rejected() {
        let inst = ThreeDmInstance::new(2, vec![[1, 1, 1]]).unwrap();
        let err = reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(8));
        assert!(matches!(err, Err(ReductionError::BadParams(_))));
    }

    #[test]
    fn file_roundtrip_reproduces_the_instance() {
        let inst = ThreeDmInstance::new(2, vec![[2, 1, 2], [1, 2, 1]]).unwrap();
        let r = reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(9)).unwrap();
        let text = crate::io::write_graph_file(&r.to_graph_file());
        let parsed = crate::io::parse_graph_file(&text).unwrap();
        let back = ReducedInstance::from_graph_file(&parsed).unwrap();
        assert_eq!(back.k, r.k);
        assert_eq!(back.params, r.params);
        assert_eq!(back.source, r.source);
        assert_eq!(back.graph.vertex_count(), r.graph.vertex_count());
        assert_eq!(back.graph.edge_count(), r.graph.edge_count());
        assert_eq!(back.paths.len(), r.paths.len());
        for p in &r.paths {
            let q = back.path_between(p.from, p.to).expect("path survives roundtrip");
            assert_eq!(q.stated_len, p.stated_len);
            assert_eq!(q.internals, p.internals);
        }
        assert_eq!(back.roles, r.roles);
    }
}

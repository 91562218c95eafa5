//! Clause satisfiability to vertex cover.
//!
//! Each variable of each part becomes an edge between its two polarity
//! vertices, each clause becomes a triangle of occurrence vertices, and
//! each occurrence is linked to the vertex of the literal it stands
//! for. Covers of size 3n + 2m must take one side per variable edge and
//! two corners per triangle, and the corner left out forces its literal
//! to be the chosen side, so such a cover exists exactly when the
//! formula is satisfiable.

use super::{ReductionError, SetPart};
use crate::graph::{Graph, VertexId};
use crate::instances::{Assignment, E3p3Formula};
use crate::io::GraphFile;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcRole {
    /// Polarity vertex of variable `var` in part `part` (0..3).
    VarSide { part: u8, var: u32, positive: bool },
    /// Corner `slot` of the triangle for clause `clause` (0-based).
    Occurrence { clause: u32, slot: u8 },
}

impl fmt::Display for VcRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VcRole::VarSide { part, var, positive } => {
                let sign = if positive { "pos" } else { "neg" };
                write!(f, "side:{}:{var}:{sign}", SetPart::ALL[part as usize].label())
            }
            VcRole::Occurrence { clause, slot } => write!(f, "corner:{}:{slot}", clause + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SatVcInstance {
    pub graph: Graph,
    pub k: u64,
    pub roles: Vec<VcRole>,
    pub formula: E3p3Formula,
}

impl SatVcInstance {
    pub fn to_graph_file(&self) -> GraphFile {
        let mut file = GraphFile::bare(self.graph.clone());
        file.roles = self
            .roles
            .iter()
            .enumerate()
            .map(|(v, r)| (v as VertexId, r.to_string()))
            .collect();
        file.k = Some(self.k);
        file.params.insert("n".into(), self.formula.n().to_string());
        file.params.insert("m".into(), self.formula.m().to_string());
        file
    }
}

fn side_id(n: u32, part: usize, var: u32, positive: bool) -> VertexId {
    part as u32 * 2 * n + (var - 1) * 2 + u32::from(!positive)
}

fn corner_id(n: u32, clause: usize, slot: usize) -> VertexId {
    6 * n + 3 * clause as u32 + slot as u32
}

pub fn reduce_e3p3sat_to_vc(f: &E3p3Formula) -> Result<SatVcInstance, ReductionError> {
    let n = f.n();
    let m = f.m();
    let vertex_count = 6u64 * u64::from(n) + 3 * m as u64;
    if vertex_count > u64::from(u32::MAX) {
        return Err(ReductionError::BadParams(format!(
            "{vertex_count} vertices exceed the id space"
        )));
    }
    let mut graph = Graph::with_vertices(vertex_count as usize);
    let mut roles = Vec::with_capacity(vertex_count as usize);
    for part in 0..3usize {
        for var in 1..=n {
            for positive in [true, false] {
                debug_assert_eq!(side_id(n, part, var, positive), roles.len() as u32);
                roles.push(VcRole::VarSide { part: part as u8, var, positive });
            }
            graph.add_edge(side_id(n, part, var, true), side_id(n, part, var, false))?;
        }
    }
    for (q, clause) in f.clauses().iter().enumerate() {
        for slot in 0..3usize {
            debug_assert_eq!(corner_id(n, q, slot), roles.len() as u32);
            roles.push(VcRole::Occurrence { clause: q as u32, slot: slot as u8 });
        }
        for slot in 0..3usize {
            graph.add_edge(corner_id(n, q, slot), corner_id(n, q, (slot + 1) % 3))?;
        }
        for (slot, &lit) in clause.iter().enumerate() {
            let side = side_id(n, slot, lit.unsigned_abs(), lit > 0);
            graph.add_edge(corner_id(n, q, slot), side)?;
        }
    }
    let k = 3 * u64::from(n) + 2 * m as u64;
    Ok(SatVcInstance { graph, k, roles, formula: f.clone() })
}

/// The cover certified by a satisfying assignment: the chosen side of
/// every variable edge plus, per clause, the two corners other than the
/// first satisfied one. Always exactly 3n + 2m vertices.
pub fn sat_vc_witness(f: &E3p3Formula, asg: &Assignment) -> Result<Vec<VertexId>, ReductionError> {
    if !asg.satisfies(f) {
        return Err(ReductionError::BadSolution(
            "assignment does not satisfy the formula".into(),
        ));
    }
    let n = f.n();
    let mut cover = Vec::with_capacity(3 * n as usize + 2 * f.m());
    for part in 0..3usize {
        for var in 1..=n {
            cover.push(side_id(n, part, var, asg.part(part)[var as usize - 1]));
        }
    }
    for (q, clause) in f.clauses().iter().enumerate() {
        let satisfied = clause
            .iter()
            .enumerate()
            .position(|(part, &lit)| asg.part(part)[lit.unsigned_abs() as usize - 1] == (lit > 0))
            .expect("satisfying assignment leaves no clause empty");
        for slot in 0..3usize {
            if slot != satisfied {
                cover.push(corner_id(n, q, slot));
            }
        }
    }
    cover.sort_unstable();
    Ok(cover)
}

//! Checks that a reduced instance is exactly the graph the construction
//! promises, plus the semantic probes on top of it: which vertices the
//! pendant set leaves uncovered, how routes discriminate matching from
//! non-matching elements, and the two witness directions.

use super::{CommonKind, ReducedInstance, ReductionError, RoleTag, SetPart, Symbol};
use crate::convexity::{distance_rows, interval_of_set};
use crate::graph::{DistanceRow, VertexId, VertexSet};
use crate::instances::solve_3dm_bruteforce;
use std::collections::HashMap;

/// Recovering a set family solution from an arbitrary geodetic witness of
/// the output graph is not exercised end to end in this repository: the
/// graphs where that direction carries information are far beyond the
/// exact geodetic solvers, so no test can confirm it against an
/// independent oracle. The reproducible stand-in is the structured
/// decision route: read the family embedded in the artifact, decide it
/// with the matching oracle, and emit the forward witness.
pub const REVERSE_DIRECTION_NOTE: &str =
    "reverse extraction is documented as out of scope; decisions on reduced artifacts go through \
     the embedded source family and the matching oracle. Measured caveat: with two or more \
     elements per part, gate pendants sit two steps from each q hub and tie across the two \
     equal-length arcs of every other element loop in that part, so the pendant interval absorbs \
     the loops and budget-size complete sets exist regardless of the source answer; the graph \
     minimum therefore cannot separate yes from no families at that size, and only the \
     single-element-per-part case keeps the claimed-uncovered family exactly uncovered";

#[derive(Debug, Clone)]
pub struct AuditCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    fn check(&mut self, name: &'static str, pass: bool, detail: impl Into<String>) {
        self.checks.push(AuditCheck { name, pass, detail: detail.into() });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn merge(&mut self, other: AuditReport) {
        self.checks.extend(other.checks);
    }
}

/// Every structural promise of the construction, checked against the
/// actual graph: parameter floors, the full path inventory with the
/// lengths the source family dictates, true distances along every
/// recorded path, pendant bookkeeping, per-role degrees, and the anchors
/// forming a feedback vertex set.
pub fn assert_construction(inst: &ReducedInstance) -> AuditReport {
    let mut rep = AuditReport::default();
    let n = inst.source.n();
    let m = inst.source.m() as u64;
    let nl = n as u64;

    match inst.params.validate(n) {
        Ok(()) => rep.check("params", true, format!("scale {}", inst.params.scale)),
        Err(e) => rep.check("params", false, e.to_string()),
    }
    rep.check("connected", inst.graph.is_connected(), "");

    let expected = expected_inventory(inst);
    let mut missing = Vec::new();
    let mut wrong_len = Vec::new();
    for &(a, b, len) in &expected {
        match inst.path_between(a, b) {
            None => missing.push((a, b)),
            Some(p) if p.stated_len != len => wrong_len.push((a, b, p.stated_len, len)),
            Some(_) => {}
        }
    }
    rep.check(
        "path-inventory",
        missing.is_empty() && inst.paths.len() == expected.len(),
        format!(
            "{} recorded, {} expected, {} missing",
            inst.paths.len(),
            expected.len(),
            missing.len()
        ),
    );
    rep.check(
        "path-lengths",
        wrong_len.is_empty(),
        match wrong_len.first() {
            Some((a, b, got, want)) => {
                format!("path {a}-{b} has stated length {got}, expected {want}")
            }
            None => "all stated lengths match the source family".into(),
        },
    );

    // true distance must equal stated length, so every recorded path is
    // a shortest route and no tampering shortcut exists
    let mut sources: Vec<VertexId> = inst.paths.iter().map(|p| p.from).collect();
    sources.sort_unstable();
    sources.dedup();
    match distance_rows(&inst.graph, &sources) {
        Err(e) => rep.check("path-distances", false, e.to_string()),
        Ok(rows) => {
            let by_source: HashMap<VertexId, &DistanceRow> =
                sources.iter().copied().zip(rows.iter()).collect();
            let bad = inst.paths.iter().find(|p| {
                by_source[&p.from].get(p.to) != Some(p.stated_len.try_into().unwrap_or(u32::MAX))
            });
            rep.check(
                "path-distances",
                bad.is_none(),
                match bad {
                    Some(p) => format!(
                        "distance {:?} between {} and {} differs from stated {}",
                        by_source[&p.from].get(p.to),
                        p.from,
                        p.to,
                        p.stated_len
                    ),
                    None => format!("checked {} paths from {} sources", inst.paths.len(), sources.len()),
                },
            );
        }
    }

    let sum_len: u64 = inst.paths.iter().map(|p| p.stated_len).sum();
    let interior = inst
        .roles
        .iter()
        .filter(|r| {
            matches!(
                r,
                RoleTag::PathInternal { .. } | RoleTag::Branch { .. } | RoleTag::Gate { .. }
            )
        })
        .count() as u64;
    let pendant_roles = inst.roles.iter().filter(|r| is_pendant_role(r)).count() as u64;
    let expected_pendants = 10 + 10 * nl + nl * m;
    rep.check(
        "counts",
        interior == sum_len - inst.paths.len() as u64
            && inst.graph.edge_count() as u64 == sum_len + pendant_roles
            && inst.graph.pendant_vertices().len() as u64 == pendant_roles
            && pendant_roles == expected_pendants,
        format!(
            "{} vertices, {} edges, {} pendants",
            inst.graph.vertex_count(),
            inst.graph.edge_count(),
            pendant_roles
        ),
    );
    rep.check(
        "target",
        inst.k == nl + pendant_roles,
        format!("k = {} against {} + {}", inst.k, nl, pendant_roles),
    );

    let bad_degree = inst.graph.vertices().find(|&v| {
        expected_degree(inst, v)
            .map(|want| inst.graph.degree(v) != Ok(want))
            .unwrap_or(true)
    });
    rep.check(
        "degrees",
        bad_degree.is_none(),
        match bad_degree {
            Some(v) => format!(
                "vertex {v} ({}) has degree {:?}, expected {:?}",
                inst.role(v),
                inst.graph.degree(v),
                expected_degree(inst, v)
            ),
            None => "every role has its prescribed degree".into(),
        },
    );

    let mut anchors: Vec<VertexId> = inst.index.g.to_vec();
    anchors.extend(inst.index.hub.iter().flatten());
    match inst.graph.delete_vertices(&anchors) {
        Ok(rest) => rep.check(
            "anchor-feedback-set",
            rest.is_forest(),
            "removing the 13 anchors must leave a forest",
        ),
        Err(e) => rep.check("anchor-feedback-set", false, e.to_string()),
    }

    rep
}

/// Endpoint pairs and lengths the construction owes us, derived afresh
/// from the role index, the scale, and the source family.
fn expected_inventory(inst: &ReducedInstance) -> Vec<(VertexId, VertexId, u64)> {
    let idx = &inst.index;
    let s = inst.params.scale;
    let sq = s * s;
    let n = inst.source.n();
    let mut out = vec![(idx.g(1), idx.g(2), sq), (idx.g(3), idx.g(4), sq)];
    for i in 1..=n {
        let (z1, z2) = (idx.z1(i), idx.z2(i));
        out.push((z1, z2, sq));
        out.push((idx.g(1), z1, sq));
        out.push((idx.g(1), z2, sq));
        out.push((idx.g(2), z1, sq));
        for (j0, triple) in inst.source.sets().iter().enumerate() {
            let j = j0 as u32 + 1;
            let (x, y) = (idx.x(i, j), idx.y(i, j));
            out.push((x, y, sq));
            out.push((z1, x, sq));
            out.push((idx.g(4), y, sq));
            out.push((idx.g(2), y, sq - 1));
            for sym in Symbol::ALL {
                for part in SetPart::ALL {
                    let c = triple[part.index()] as u64;
                    let len = match sym {
                        Symbol::P => sq + 2 * c * s,
                        Symbol::Q => sq - c * s,
                        Symbol::R => sq - 2 * c * s,
                    };
                    out.push((x, idx.hub(sym, part), len));
                    if let Some(&fork) = idx.branch.get(&(i, j, sym, part)) {
                        out.push((fork, idx.g(2), sq));
                        out.push((fork, idx.g(3), sq));
                    }
                }
            }
        }
    }
    for part in SetPart::ALL {
        for a in 1..=n {
            let al = a as u64;
            let (u, v, w) = (idx.elem_u(part, a), idx.elem_v(part, a), idx.elem_w(part, a));
            out.push((u, w, sq));
            out.push((v, w, sq));
            out.push((u, idx.hub(Symbol::P, part), sq - 2 * al * s));
            out.push((u, idx.hub(Symbol::Q, part), sq + al * s));
            out.push((u, idx.hub(Symbol::R, part), sq + 2 * al * s));
            out.push((v, idx.hub(Symbol::Q, part), sq + al * s));
            out.push((w, idx.g(4), sq));
        }
    }
    out
}

fn is_pendant_role(r: &RoleTag) -> bool {
    matches!(
        r,
        RoleTag::CommonPendant(_)
            | RoleTag::SetYPendant { .. }
            | RoleTag::SetZ2Pendant { .. }
            | RoleTag::ElemUPendant { .. }
            | RoleTag::ElemWPendant { .. }
            | RoleTag::GatePendant { .. }
    )
}

fn expected_degree(inst: &ReducedInstance, v: VertexId) -> Option<usize> {
    let n = inst.source.n() as usize;
    let m = inst.source.m();
    Some(match inst.role(v) {
        RoleTag::PathInternal { .. } => 2,
        RoleTag::Branch { .. } => 4,
        RoleTag::Gate { .. } => 3,
        r if is_pendant_role(r) => 1,
        RoleTag::SetX { .. } => 11,
        RoleTag::SetY { .. } => 4,
        RoleTag::SetZ1 { .. } => m + 3,
        RoleTag::SetZ2 { .. } => 3,
        RoleTag::ElemU { .. } => 5,
        RoleTag::ElemV { .. } => 2,
        RoleTag::ElemW { .. } => 4,
        RoleTag::Common(CommonKind::G(1)) => 2 + 2 * n,
        RoleTag::Common(CommonKind::G(2)) => 2 + n + 10 * n * m,
        RoleTag::Common(CommonKind::G(3)) => 2 + 9 * n * m,
        RoleTag::Common(CommonKind::G(4)) => 2 + n * m + 3 * n,
        RoleTag::Common(CommonKind::Hub(Symbol::Q, _)) => n * m + 2 * n,
        RoleTag::Common(CommonKind::Hub(_, _)) => 1 + n * m + n,
        _ => return None,
    })
}

/// Interior vertices of the g1-to-z1 path of each selector gadget,
/// indexed by i - 1. These are exactly what the pendant set cannot see
/// on the selector side.
pub fn uncovered_g1_sets(inst: &ReducedInstance) -> Result<Vec<Vec<VertexId>>, ReductionError> {
    (1..=inst.source.n())
        .map(|i| {
            let p = inst
                .path_between(inst.index.g(1), inst.index.z1(i))
                .ok_or_else(|| super::bad_file(format!("no g1 path for selector {i}")))?;
            Ok(p.internals.clone())
        })
        .collect()
}

/// Per part and element a (index a - 1): the interior of the v-to-q-hub
/// path, v itself, and the interior of the v-to-w path. These stay
/// uncovered by pendants and are claimed exactly by matching routes.
pub fn uncovered_elem_sets(
    inst: &ReducedInstance,
) -> Result<[Vec<Vec<VertexId>>; 3], ReductionError> {
    let mut out: [Vec<Vec<VertexId>>; 3] = Default::default();
    for part in SetPart::ALL {
        for a in 1..=inst.source.n() {
            let v = inst.index.elem_v(part, a);
            let q = inst.index.hub(Symbol::Q, part);
            let w = inst.index.elem_w(part, a);
            let vq = inst
                .path_between(v, q)
                .ok_or_else(|| super::bad_file("element gadget missing its v-q path"))?;
            let vw = inst
                .path_between(v, w)
                .ok_or_else(|| super::bad_file("element gadget missing its v-w path"))?;
            let mut set = vq.internals.clone();
            set.push(v);
            set.extend_from_slice(&vw.internals);
            out[part.index()].push(set);
        }
    }
    Ok(out)
}

/// The pendant set covers everything except the union of the uncovered
/// sets, as an exact equality in both directions.
pub fn pendant_cover_check(inst: &ReducedInstance) -> Result<AuditReport, ReductionError> {
    let mut rep = AuditReport::default();
    let sq = inst.params.scale * inst.params.scale;
    let g1_sets = uncovered_g1_sets(inst)?;
    let elem_sets = uncovered_elem_sets(inst)?;

    let sizes_ok = g1_sets.iter().all(|s| s.len() as u64 == sq - 1)
        && SetPart::ALL.iter().all(|part| {
            elem_sets[part.index()]
                .iter()
                .enumerate()
                .all(|(a0, s)| {
                    s.len() as u64 == 2 * sq + (a0 as u64 + 1) * inst.params.scale - 1
                })
        });
    rep.check(
        "uncovered-sizes",
        sizes_ok,
        "selector sets hold M^2 - 1 vertices, element sets 2M^2 + aM - 1",
    );

    let mut expected = VertexSet::with_bound(inst.graph.id_bound());
    for set in g1_sets.iter().chain(elem_sets.iter().flatten()) {
        for &v in set {
            expected.insert(v);
        }
    }

    let pendants = inst.graph.pendant_vertices();
    let interval = interval_of_set(&inst.graph, &pendants)
        .map_err(|e| ReductionError::InvalidFile(e.to_string()))?;
    let mismatch = inst
        .graph
        .vertices()
        .find(|&v| interval.contains(v) == expected.contains(v));
    rep.check(
        "pendant-cover-exact",
        mismatch.is_none(),
        match mismatch {
            Some(v) => format!(
                "vertex {v} ({}) is {} by pendants but {} uncovered",
                inst.role(v),
                if interval.contains(v) { "covered" } else { "not covered" },
                if expected.contains(v) { "expected" } else { "not expected" },
            ),
            None => format!(
                "pendants cover {} of {} vertices, complement {}",
                interval.len(),
                inst.graph.vertex_count(),
                expected.len()
            ),
        },
    );
    Ok(rep)
}

/// How many members of `set` lie on a shortest route between a and b.
fn covered_members(
    row_a: &DistanceRow,
    row_b: &DistanceRow,
    dist: u32,
    set: &[VertexId],
) -> usize {
    set.iter()
        .filter(|&&v| match (row_a.get(v), row_b.get(v)) {
            (Some(da), Some(db)) => da + db == dist,
            _ => false,
        })
        .count()
}

/// The route-discrimination grid. For a probe h on the selector side
/// (each set vertex x and a midpoint of its z1 approach), routes to the
/// w of element gadget (part, a) run at 3M^2 + d(h, x) when the set's
/// coordinate matches a, and run 2|a - c|M shorter through the outer
/// hubs when it does not. On a match the whole uncovered element set
/// lies on shortest routes; on a mismatch none of it does. Selector z1
/// vertices and y-side probes never claim uncovered vertices.
pub fn discrimination_check(inst: &ReducedInstance) -> Result<AuditReport, ReductionError> {
    let mut rep = AuditReport::default();
    let idx = &inst.index;
    let scale = inst.params.scale;
    let sq = scale * scale;
    let n = inst.source.n();
    let m = inst.source.m() as u32;
    let elem_sets = uncovered_elem_sets(inst)?;
    let g1_sets = uncovered_g1_sets(inst)?;

    let mut sources: Vec<VertexId> = Vec::new();
    for part in SetPart::ALL {
        for a in 1..=n {
            sources.push(idx.elem_w(part, a));
        }
    }
    for i in 1..=n {
        sources.push(idx.z1(i));
    }
    let probe_at = |p: &super::PathRecord, start: VertexId| {
        // interior vertex nearest the middle, measured from `start`
        let chain = p.chain_from(start);
        chain[chain.len() / 2]
    };
    let mut x_probes: Vec<(u32, u32, VertexId, u64)> = Vec::new(); // (i, j, probe, d(probe, x))
    let mut y_probes: Vec<VertexId> = Vec::new();
    for i in 1..=n {
        for j in 1..=m {
            let x = idx.x(i, j);
            let zx = inst
                .path_between(idx.z1(i), x)
                .ok_or_else(|| super::bad_file("missing selector approach path"))?;
            let mid = probe_at(zx, x);
            let mid_pos = zx.chain_from(x).iter().position(|&v| v == mid).unwrap() as u64;
            x_probes.push((i, j, x, 0));
            x_probes.push((i, j, mid, mid_pos));
            let y = idx.y(i, j);
            let gy = inst
                .path_between(idx.g(4), y)
                .ok_or_else(|| super::bad_file("missing y return path"))?;
            y_probes.push(y);
            y_probes.push(probe_at(gy, y));
        }
    }
    sources.extend(x_probes.iter().map(|&(_, _, h, _)| h));
    sources.extend(&y_probes);
    let g1_pendant = inst
        .pendant_of(idx.g(1))
        .ok_or_else(|| super::bad_file("g1 lost its pendant"))?;
    sources.push(g1_pendant);
    let z2_pendants: Vec<VertexId> = (1..=n)
        .map(|i| {
            inst.pendant_of(idx.z2(i))
                .ok_or_else(|| super::bad_file("z2 lost its pendant"))
        })
        .collect::<Result<_, _>>()?;
    sources.extend(&z2_pendants);
    sources.sort_unstable();
    sources.dedup();

    let rows = distance_rows(&inst.graph, &sources)
        .map_err(|e| ReductionError::InvalidFile(e.to_string()))?;
    let row: HashMap<VertexId, &DistanceRow> =
        sources.iter().copied().zip(rows.iter()).collect();

    // matching coordinates put the whole element set on shortest routes;
    // mismatches shave 2|a-c|M off and miss the set entirely
    let mut grid_ok = true;
    let mut grid_detail = String::new();
    let mut distance_ok = true;
    let mut distance_detail = String::new();
    for &(i, j, h, dh) in &x_probes {
        let triple = inst.source.set(j).unwrap();
        for part in SetPart::ALL {
            let c = triple[part.index()] as u64;
            for a in 1..=n {
                let al = a as u64;
                let w = idx.elem_w(part, a);
                let gap = 2 * al.abs_diff(c) * scale;
                let expected_d = 3 * sq + dh - gap;
                let d = row[&h].get(w);
                if d != Some(expected_d as u32) {
                    distance_ok = false;
                    if distance_detail.is_empty() {
                        distance_detail = format!(
                            "probe for set {j} of selector {i}: d to w[{}, {a}] is {d:?}, expected {expected_d}",
                            part.label()
                        );
                    }
                    continue;
                }
                let set = &elem_sets[part.index()][a as usize - 1];
                let hits = covered_members(row[&h], row[&w], expected_d as u32, set);
                let want = if al == c { set.len() } else { 0 };
                if hits != want {
                    grid_ok = false;
                    if grid_detail.is_empty() {
                        grid_detail = format!(
                            "probe for set {j} of selector {i} vs element ({}, {a}): {hits} of {} covered, expected {want}",
                            part.label(),
                            set.len()
                        );
                    }
                }
            }
        }
    }
    rep.check(
        "route-distances",
        distance_ok,
        if distance_ok { format!("{} probes checked", x_probes.len()) } else { distance_detail },
    );
    rep.check("discrimination-grid", grid_ok, if grid_ok { "matches iff coordinates agree".into() } else { grid_detail });

    // z1 never reaches an uncovered element set by a shortest route
    let mut z1_ok = true;
    for i in 1..=n {
        let z1r = row[&idx.z1(i)];
        for part in SetPart::ALL {
            for a in 1..=n {
                let w = idx.elem_w(part, a);
                let d = z1r.get(w).unwrap_or(u32::MAX);
                let set = &elem_sets[part.index()][a as usize - 1];
                if covered_members(z1r, row[&w], d, set) != 0 {
                    z1_ok = false;
                }
            }
        }
    }
    rep.check("selector-probes", z1_ok, "z1 routes avoid the q hubs");

    // y-side probes paired with nearby pendants never reach the
    // selector uncovered sets
    let mut y_ok = true;
    let mut partners: Vec<VertexId> = vec![g1_pendant];
    partners.extend(&z2_pendants);
    for &h in &y_probes {
        let hr = row[&h];
        for &t in &partners {
            let d = match hr.get(t) {
                Some(d) => d,
                None => {
                    y_ok = false;
                    continue;
                }
            };
            for set in &g1_sets {
                if covered_members(hr, row[&t], d, set) != 0 {
                    y_ok = false;
                }
            }
        }
    }
    rep.check("return-probes", y_ok, "y routes stay off the selector paths");

    Ok(rep)
}

/// The geodetic witness a cover induces: all pendants plus, for the i-th
/// chosen set (in ascending index order), the x vertex of selector i.
pub fn forward_witness(
    inst: &ReducedInstance,
    chosen: &[u32],
) -> Result<Vec<VertexId>, ReductionError> {
    if !inst.source.is_exact_cover(chosen) {
        return Err(ReductionError::BadSolution(format!(
            "indices {chosen:?} do not exactly cover the family"
        )));
    }
    let mut sorted = chosen.to_vec();
    sorted.sort_unstable();
    let mut witness = inst.graph.pendant_vertices();
    for (i0, &j) in sorted.iter().enumerate() {
        witness.push(inst.index.x(i0 as u32 + 1, j));
    }
    witness.sort_unstable();
    Ok(witness)
}

/// Decide the geodetic question for a reduced artifact by solving the
/// embedded source family with the matching oracle; a yes comes with the
/// forward witness. See [`REVERSE_DIRECTION_NOTE`] for why the opposite
/// direction is not offered.
pub fn structured_decision(
    inst: &ReducedInstance,
) -> Result<Option<Vec<VertexId>>, ReductionError> {
    let solution = solve_3dm_bruteforce(&inst.source)
        .map_err(|e| ReductionError::BadParams(format!("source family out of oracle range: {e}")))?;
    match solution {
        Some(chosen) => Ok(Some(forward_witness(inst, &chosen)?)),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ThreeDmInstance;
    use crate::reductions::{reduce_3dm_to_geodetic, ReductionParams};

    fn tiny() -> ReducedInstance {
        let inst = ThreeDmInstance::new(1, vec![[1, 1, 1]]).unwrap();
        reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(5)).unwrap()
    }

    fn pair() -> ReducedInstance {
        let inst = ThreeDmInstance::new(2, vec![[1, 1, 1], [2, 2, 2]]).unwrap();
        reduce_3dm_to_geodetic(&inst, &ReductionParams::desk(9)).unwrap()
    }

    #[test]
    fn tiny_construction_passes_every_check() {
        let r = tiny();
        let rep = assert_construction(&r);
        assert!(rep.all_pass(), "failures: {:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn pair_construction_passes_every_check() {
        let r = pair();
        let rep = assert_construction(&r);
        assert!(rep.all_pass(), "failures: {:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn pendant_cover_is_exact_with_a_single_element_per_part() {
        let two_sets = ThreeDmInstance::new(1, vec![[1, 1, 1], [1, 1, 1]]).unwrap();
        let wide = reduce_3dm_to_geodetic(&two_sets, &ReductionParams::desk(5)).unwrap();
        for r in [tiny(), wide] {
            let rep = pendant_cover_check(&r).unwrap();
            assert!(rep.all_pass(), "failures: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn gate_ties_absorb_element_loops_with_two_elements_per_part() {
        // Each element loop is an even cycle: two arcs of equal length
        // M^2 + aM from the q hub, closing at w. A gate pendant of a
        // sibling element sits two steps from that hub, so its geodesics
        // to pndt(w) run along BOTH arcs, putting the whole loop inside
        // the pendant interval. The claimed-uncovered family then
        // shrinks to the selector side only, and the budget stops
        // depending on the source answer.
        let r = pair();
        let rep = pendant_cover_check(&r).unwrap();
        let by_name = |n: &str| rep.checks.iter().find(|c| c.name == n).unwrap();
        assert!(by_name("uncovered-sizes").pass);
        assert!(!by_name("pendant-cover-exact").pass);

        let m = u64::from(r.params.scale);
        let gate_pendant = r.pendant_of(r.index.gate(SetPart::Alpha, 2)).unwrap();
        let w_pendant = r.pendant_of(r.index.elem_w(SetPart::Alpha, 1)).unwrap();
        let v = r.index.elem_v(SetPart::Alpha, 1);
        let row_g = r.graph.bfs_distances(gate_pendant).unwrap();
        let row_v = r.graph.bfs_distances(v).unwrap();
        let through_v = u64::from(row_g.get(v).unwrap()) + u64::from(row_v.get(w_pendant).unwrap());
        assert_eq!(row_g.get(w_pendant).unwrap() as u64, 2 * m * m + m + 3);
        assert_eq!(through_v, 2 * m * m + m + 3, "the v arc carries a geodesic of the pair");

        // pendants cover everything except the g1-to-z1 interiors, so
        // topping up with one selector vertex per gadget reaches the
        // budget no matter which sets they encode
        let pendants = r.graph.pendant_vertices();
        let ip = crate::convexity::interval_of_set(&r.graph, &pendants).unwrap();
        for set in uncovered_g1_sets(&r).unwrap() {
            assert!(set.iter().all(|&u| !ip.contains(u)));
        }
        for sets in uncovered_elem_sets(&r).unwrap() {
            for set in sets {
                assert!(set.iter().all(|&u| ip.contains(u)));
            }
        }
        let mut topped = pendants.clone();
        topped.push(r.index.z1(1));
        topped.push(r.index.z1(2));
        assert_eq!(topped.len() as u64, r.k);
        assert!(crate::convexity::is_geodetic(&r.graph, &topped).unwrap().is_geodetic);
    }

    #[test]
    fn discrimination_grid_holds() {
        for r in [tiny(), pair()] {
            let rep = discrimination_check(&r).unwrap();
            assert!(rep.all_pass(), "failures: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn forward_witness_is_geodetic_and_tight() {
        let r = pair();
        let witness = forward_witness(&r, &[1, 2]).unwrap();
        assert_eq!(witness.len() as u64, r.k);
        let check = crate::convexity::is_geodetic(&r.graph, &witness).unwrap();
        assert!(check.is_geodetic, "uncovered: {:?}", &check.uncovered[..5.min(check.uncovered.len())]);
    }

    #[test]
    fn pendants_alone_are_not_geodetic() {
        let r = tiny();
        let pendants = r.graph.pendant_vertices();
        let check = crate::convexity::is_geodetic(&r.graph, &pendants).unwrap();
        assert!(!check.is_geodetic);
    }

    #[test]
    fn bad_solutions_are_rejected() {
        let r = pair();
        assert!(matches!(
            forward_witness(&r, &[1, 1]),
            Err(ReductionError::BadSolution(_))
        ));
        assert!(matches!(
            forward_witness(&r, &[1]),
            Err(ReductionError::BadSolution(_))
        ));
    }

    #[test]
    fn structured_decision_follows_the_source() {
        let yes = pair();
        assert!(structured_decision(&yes).unwrap().is_some());
        let no_inst = ThreeDmInstance::new(2, vec![[1, 1, 1], [2, 2, 1]]).unwrap();
        let no = reduce_3dm_to_geodetic(&no_inst, &ReductionParams::desk(9)).unwrap();
        assert!(structured_decision(&no).unwrap().is_none());
    }

    #[test]
    fn tampering_with_an_edge_is_caught() {
        let r = tiny();
        let mut g = r.graph.clone();
        // shortcut across the middle of the first recorded path
        let p = &r.paths[0];
        let a = p.internals[1];
        let b = p.internals[p.internals.len() - 2];
        g.add_edge(a, b).unwrap();
        let doctored = ReducedInstance::assemble(
            g,
            r.k,
            r.params,
            r.source.clone(),
            r.roles.clone(),
            r.paths.clone(),
        )
        .unwrap();
        let rep = assert_construction(&doctored);
        assert!(!rep.all_pass());
        let failed: Vec<&str> = rep.failures().map(|c| c.name).collect();
        assert!(failed.contains(&"path-distances") || failed.contains(&"degrees"));
    }

    #[test]
    fn witness_size_is_minimal_on_the_tiny_instance() {
        // k = pendants + 1 here, every geodetic set contains all
        // pendants, and pendants alone fail: so k is the exact minimum
        let r = tiny();
        let witness = forward_witness(&r, &[1]).unwrap();
        assert_eq!(witness.len() as u64, r.k);
        assert!(crate::convexity::is_geodetic(&r.graph, &witness).unwrap().is_geodetic);
        let pendants = r.graph.pendant_vertices();
        assert_eq!(pendants.len() as u64 + 1, r.k);
        assert!(!crate::convexity::is_geodetic(&r.graph, &pendants).unwrap().is_geodetic);
    }
}

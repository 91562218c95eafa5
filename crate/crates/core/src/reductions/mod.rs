//! Reductions between hard problems and the bookkeeping they need.
//!
//! The centerpiece maps a three-dimensional matching instance to a
//! geodetic-set question. The output graph is organized around 13 shared
//! anchor vertices and long induced paths whose exact lengths encode the
//! instance; every path is recorded in a registry so audits, witnesses,
//! and search strategies can reason about the construction without
//! re-deriving it from raw adjacency.

mod audit;
mod build;
mod search;
mod satvc;

pub use audit::{
    assert_construction, discrimination_check, forward_witness, pendant_cover_check,
    structured_decision, uncovered_elem_sets, uncovered_g1_sets, AuditCheck, AuditReport,
    REVERSE_DIRECTION_NOTE,
};
pub use build::reduce_3dm_to_geodetic;
pub use search::{
    search_strategy, simulate, MixedSearchStrategy, SearchOp, SearchOutcome, SEARCH_BUDGET,
};
pub use satvc::{reduce_e3p3sat_to_vc, sat_vc_witness, SatVcInstance, VcRole};

use crate::graph::{Graph, GraphError, VertexId};
use crate::instances::ThreeDmInstance;
use crate::io::{GraphFile, IoError};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed reduced instance: {0}")]
    InvalidFile(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("solution rejected: {0}")]
    BadSolution(String),
}

fn bad_file(msg: impl Into<String>) -> ReductionError {
    ReductionError::InvalidFile(msg.into())
}

/// Exact nonnegative rational, written `num/den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self, ReductionError> {
        if den == 0 {
            return Err(ReductionError::BadParams("ratio with zero denominator".into()));
        }
        if num == 0 {
            return Err(ReductionError::BadParams("ratio must be positive".into()));
        }
        Ok(Ratio { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// ceil(x / self)
    pub fn ceil_div_into(&self, x: u64) -> u64 {
        (x * self.den).div_ceil(self.num)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| ReductionError::BadParams(format!("expected `num/den`, got `{s}`")))?;
        let num = n
            .parse()
            .map_err(|_| ReductionError::BadParams(format!("bad numerator `{n}`")))?;
        let den = d
            .parse()
            .map_err(|_| ReductionError::BadParams(format!("bad denominator `{d}`")))?;
        Ratio::new(num, den)
    }
}

pub const DEFAULT_EPSILON: Ratio = Ratio { num: 1, den: 100 };

/// Scale parameters for the matching-to-geodetic construction.
///
/// Path lengths are quadratic in `scale` (called M below). Any M > 4n
/// keeps the intended routes strictly shortest; strict mode additionally
/// demands M >= ceil(2n / epsilon), the regime where the gap argument
/// goes through, and is what `auto` picks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionParams {
    pub scale: u64,
    pub epsilon: Ratio,
    pub strict: bool,
}

impl ReductionParams {
    pub fn desk(scale: u64) -> Self {
        ReductionParams { scale, epsilon: DEFAULT_EPSILON, strict: false }
    }

    pub fn strict(scale: u64, epsilon: Ratio) -> Self {
        ReductionParams { scale, epsilon, strict: true }
    }

    /// Smallest strict-mode scale for a given instance size.
    pub fn strict_auto(n: u32, epsilon: Ratio) -> Self {
        let floor = epsilon.ceil_div_into(2 * n as u64);
        // the shortest-route argument needs M > 4n regardless of epsilon
        let scale = floor.max(4 * n as u64 + 1);
        ReductionParams { scale, epsilon, strict: true }
    }

    pub fn validate(&self, n: u32) -> Result<(), ReductionError> {
        if self.scale <= 4 * n as u64 {
            return Err(ReductionError::BadParams(format!(
                "scale {} too small for n={n}: need more than {}",
                self.scale,
                4 * n as u64
            )));
        }
        if self.strict {
            let floor = self.epsilon.ceil_div_into(2 * n as u64);
            if self.scale < floor {
                return Err(ReductionError::BadParams(format!(
                    "strict mode with epsilon {} needs scale at least {floor}, got {}",
                    self.epsilon, self.scale
                )));
            }
        }
        Ok(())
    }
}

/// The three coordinate positions of a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetPart {
    Alpha,
    Beta,
    Gamma,
}

impl SetPart {
    pub const ALL: [SetPart; 3] = [SetPart::Alpha, SetPart::Beta, SetPart::Gamma];

    pub fn index(self) -> usize {
        match self {
            SetPart::Alpha => 0,
            SetPart::Beta => 1,
            SetPart::Gamma => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SetPart::Alpha => "alpha",
            SetPart::Beta => "beta",
            SetPart::Gamma => "gamma",
        }
    }

    fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "alpha" => SetPart::Alpha,
            "beta" => SetPart::Beta,
            "gamma" => SetPart::Gamma,
            _ => return None,
        })
    }
}

/// The three hub families. Per part, the p hub sits far from large
/// coordinates, the r hub close, and the q hub in between; the spread
/// between them is what separates matching from non-matching routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    P,
    Q,
    R,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::P, Symbol::Q, Symbol::R];

    pub fn index(self) -> usize {
        match self {
            Symbol::P => 0,
            Symbol::Q => 1,
            Symbol::R => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Symbol::P => "p",
            Symbol::Q => "q",
            Symbol::R => "r",
        }
    }

    fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "p" => Symbol::P,
            "q" => Symbol::Q,
            "r" => Symbol::R,
            _ => return None,
        })
    }
}

/// One of the 13 anchor vertices shared by the whole construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommonKind {
    /// g1..g4
    G(u8),
    Hub(Symbol, SetPart),
}

/// What a vertex is for. Indices i (selector gadget), j (set), and a
/// (element) are 1-based, matching the instance text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoleTag {
    Common(CommonKind),
    CommonPendant(CommonKind),
    /// Set vertex of selector gadget i for family set j.
    SetX { i: u32, j: u32 },
    SetY { i: u32, j: u32 },
    SetYPendant { i: u32, j: u32 },
    SetZ1 { i: u32 },
    SetZ2 { i: u32 },
    SetZ2Pendant { i: u32 },
    /// First internal vertex of the path from x^i_j toward a hub,
    /// additionally tied to g2 and g3.
    Branch { i: u32, j: u32, sym: Symbol, part: SetPart },
    ElemU { part: SetPart, a: u32 },
    ElemV { part: SetPart, a: u32 },
    ElemW { part: SetPart, a: u32 },
    ElemUPendant { part: SetPart, a: u32 },
    ElemWPendant { part: SetPart, a: u32 },
    /// Last internal vertex before the q hub on the u-path of element
    /// gadget (part, a); carries its own pendant.
    Gate { part: SetPart, a: u32 },
    GatePendant { part: SetPart, a: u32 },
    /// Interior vertex of a recorded path, keyed by the path's endpoint
    /// ids and the 1-based position from the `from` side.
    PathInternal { from: VertexId, to: VertexId, pos: u64 },
}

impl fmt::Display for RoleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleTag::Common(k) => write!(f, "common:{}", common_label(*k)),
            RoleTag::CommonPendant(k) => write!(f, "cpendant:{}", common_label(*k)),
            RoleTag::SetX { i, j } => write!(f, "x:{i}:{j}"),
            RoleTag::SetY { i, j } => write!(f, "y:{i}:{j}"),
            RoleTag::SetYPendant { i, j } => write!(f, "ypendant:{i}:{j}"),
            RoleTag::SetZ1 { i } => write!(f, "z1:{i}"),
            RoleTag::SetZ2 { i } => write!(f, "z2:{i}"),
            RoleTag::SetZ2Pendant { i } => write!(f, "z2pendant:{i}"),
            RoleTag::Branch { i, j, sym, part } => {
                write!(f, "branch:{i}:{j}:{}:{}", sym.label(), part.label())
            }
            RoleTag::ElemU { part, a } => write!(f, "u:{}:{a}", part.label()),
            RoleTag::ElemV { part, a } => write!(f, "v:{}:{a}", part.label()),
            RoleTag::ElemW { part, a } => write!(f, "w:{}:{a}", part.label()),
            RoleTag::ElemUPendant { part, a } => write!(f, "upendant:{}:{a}", part.label()),
            RoleTag::ElemWPendant { part, a } => write!(f, "wpendant:{}:{a}", part.label()),
            RoleTag::Gate { part, a } => write!(f, "gate:{}:{a}", part.label()),
            RoleTag::GatePendant { part, a } => write!(f, "gatependant:{}:{a}", part.label()),
            RoleTag::PathInternal { from, to, pos } => write!(f, "path:{from}:{to}:{pos}"),
        }
    }
}

fn common_label(k: CommonKind) -> String {
    match k {
        CommonKind::G(i) => format!("g{i}"),
        CommonKind::Hub(sym, part) => format!("{}:{}", sym.label(), part.label()),
    }
}

fn parse_common(rest: &[&str]) -> Option<CommonKind> {
    match rest {
        [g] if g.len() == 2 && g.starts_with('g') => {
            let i: u8 = g[1..].parse().ok()?;
            (1..=4).contains(&i).then_some(CommonKind::G(i))
        }
        [sym, part] => Some(CommonKind::Hub(
            Symbol::from_label(sym)?,
            SetPart::from_label(part)?,
        )),
        _ => None,
    }
}

impl FromStr for RoleTag {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks: Vec<&str> = s.split(':').collect();
        let err = || bad_file(format!("unrecognized role tag `{s}`"));
        let num = |t: &str| t.parse::<u32>().map_err(|_| err());
        let wide = |t: &str| t.parse::<u64>().map_err(|_| err());
        let part = |t: &str| SetPart::from_label(t).ok_or_else(err);
        Ok(match toks.as_slice() {
            ["common", rest @ ..] => RoleTag::Common(parse_common(rest).ok_or_else(err)?),
            ["cpendant", rest @ ..] => RoleTag::CommonPendant(parse_common(rest).ok_or_else(err)?),
            ["x", i, j] => RoleTag::SetX { i: num(i)?, j: num(j)? },
            ["y", i, j] => RoleTag::SetY { i: num(i)?, j: num(j)? },
            ["ypendant", i, j] => RoleTag::SetYPendant { i: num(i)?, j: num(j)? },
            ["z1", i] => RoleTag::SetZ1 { i: num(i)? },
            ["z2", i] => RoleTag::SetZ2 { i: num(i)? },
            ["z2pendant", i] => RoleTag::SetZ2Pendant { i: num(i)? },
            ["branch", i, j, sym, p] => RoleTag::Branch {
                i: num(i)?,
                j: num(j)?,
                sym: Symbol::from_label(sym).ok_or_else(err)?,
                part: part(p)?,
            },
            ["u", p, a] => RoleTag::ElemU { part: part(p)?, a: num(a)? },
            ["v", p, a] => RoleTag::ElemV { part: part(p)?, a: num(a)? },
            ["w", p, a] => RoleTag::ElemW { part: part(p)?, a: num(a)? },
            ["upendant", p, a] => RoleTag::ElemUPendant { part: part(p)?, a: num(a)? },
            ["wpendant", p, a] => RoleTag::ElemWPendant { part: part(p)?, a: num(a)? },
            ["gate", p, a] => RoleTag::Gate { part: part(p)?, a: num(a)? },
            ["gatependant", p, a] => RoleTag::GatePendant { part: part(p)?, a: num(a)? },
            ["path", from, to, pos] => RoleTag::PathInternal {
                from: num(from)?,
                to: num(to)?,
                pos: wide(pos)?,
            },
            _ => return Err(err()),
        })
    }
}

/// One long induced path laid down by the construction. `internals` runs
/// from the `from` side to the `to` side and has `stated_len - 1`
/// entries; `stated_len` is the intended hop count, which audits compare
/// against true graph distance.
#[derive(Debug, Clone)]
pub struct PathRecord {
    pub from: VertexId,
    pub to: VertexId,
    pub stated_len: u64,
    pub internals: Vec<VertexId>,
}

impl PathRecord {
    /// Full vertex chain starting at `start`, which must be an endpoint.
    pub fn chain_from(&self, start: VertexId) -> Vec<VertexId> {
        let mut chain = Vec::with_capacity(self.internals.len() + 2);
        chain.push(self.from);
        chain.extend_from_slice(&self.internals);
        chain.push(self.to);
        if start == self.from {
            chain
        } else {
            assert_eq!(start, self.to, "start must be a path endpoint");
            chain.reverse();
            chain
        }
    }
}

/// Fast lookup of the named vertices by role, all ids 1-based on the
/// instance side (selector i, set j, element a).
#[derive(Debug, Clone)]
pub struct RoleIndex {
    pub g: [VertexId; 4],
    /// hub[symbol][part]
    pub hub: [[VertexId; 3]; 3],
    pub z1: Vec<VertexId>,
    pub z2: Vec<VertexId>,
    /// x[i-1][j-1]
    pub x: Vec<Vec<VertexId>>,
    pub y: Vec<Vec<VertexId>>,
    pub branch: HashMap<(u32, u32, Symbol, SetPart), VertexId>,
    /// elem_*[part][a-1]
    pub elem_u: [Vec<VertexId>; 3],
    pub elem_v: [Vec<VertexId>; 3],
    pub elem_w: [Vec<VertexId>; 3],
    pub gate: [Vec<VertexId>; 3],
}

impl RoleIndex {
    pub fn g(&self, i: u8) -> VertexId {
        self.g[i as usize - 1]
    }

    pub fn hub(&self, sym: Symbol, part: SetPart) -> VertexId {
        self.hub[sym.index()][part.index()]
    }

    pub fn x(&self, i: u32, j: u32) -> VertexId {
        self.x[i as usize - 1][j as usize - 1]
    }

    pub fn y(&self, i: u32, j: u32) -> VertexId {
        self.y[i as usize - 1][j as usize - 1]
    }

    pub fn z1(&self, i: u32) -> VertexId {
        self.z1[i as usize - 1]
    }

    pub fn z2(&self, i: u32) -> VertexId {
        self.z2[i as usize - 1]
    }

    pub fn elem_u(&self, part: SetPart, a: u32) -> VertexId {
        self.elem_u[part.index()][a as usize - 1]
    }

    pub fn elem_v(&self, part: SetPart, a: u32) -> VertexId {
        self.elem_v[part.index()][a as usize - 1]
    }

    pub fn elem_w(&self, part: SetPart, a: u32) -> VertexId {
        self.elem_w[part.index()][a as usize - 1]
    }

    pub fn gate(&self, part: SetPart, a: u32) -> VertexId {
        self.gate[part.index()][a as usize - 1]
    }

    fn build(roles: &[RoleTag], n: u32, m: u32) -> Result<RoleIndex, ReductionError> {
        let n_us = n as usize;
        let m_us = m as usize;
        let unset = VertexId::MAX;
        let mut idx = RoleIndex {
            g: [unset; 4],
            hub: [[unset; 3]; 3],
            z1: vec![unset; n_us],
            z2: vec![unset; n_us],
            x: vec![vec![unset; m_us]; n_us],
            y: vec![vec![unset; m_us]; n_us],
            branch: HashMap::new(),
            elem_u: [vec![unset; n_us], vec![unset; n_us], vec![unset; n_us]],
            elem_v: [vec![unset; n_us], vec![unset; n_us], vec![unset; n_us]],
            elem_w: [vec![unset; n_us], vec![unset; n_us], vec![unset; n_us]],
            gate: [vec![unset; n_us], vec![unset; n_us], vec![unset; n_us]],
        };
        let put = |slot: &mut VertexId, v: VertexId, what: &str| {
            if *slot != unset {
                return Err(bad_file(format!("duplicate role {what}")));
            }
            *slot = v;
            Ok(())
        };
        let range = |val: u32, hi: u32, what: &str| {
            if val == 0 || val > hi {
                Err(bad_file(format!("{what} index {val} out of range 1..={hi}")))
            } else {
                Ok(val as usize - 1)
            }
        };
        for (v, role) in roles.iter().enumerate() {
            let v = v as VertexId;
            match *role {
                RoleTag::Common(CommonKind::G(i)) => put(&mut idx.g[i as usize - 1], v, "g")?,
                RoleTag::Common(CommonKind::Hub(sym, part)) => {
                    put(&mut idx.hub[sym.index()][part.index()], v, "hub")?
                }
                RoleTag::SetX { i, j } => {
                    let (i, j) = (range(i, n, "selector")?, range(j, m, "set")?);
                    put(&mut idx.x[i][j], v, "x")?
                }
                RoleTag::SetY { i, j } => {
                    let (i, j) = (range(i, n, "selector")?, range(j, m, "set")?);
                    put(&mut idx.y[i][j], v, "y")?
                }
                RoleTag::SetZ1 { i } => put(&mut idx.z1[range(i, n, "selector")?], v, "z1")?,
                RoleTag::SetZ2 { i } => put(&mut idx.z2[range(i, n, "selector")?], v, "z2")?,
                RoleTag::Branch { i, j, sym, part } => {
                    range(i, n, "selector")?;
                    range(j, m, "set")?;
                    if idx.branch.insert((i, j, sym, part), v).is_some() {
                        return Err(bad_file("duplicate branch role"));
                    }
                }
                RoleTag::ElemU { part, a } => {
                    put(&mut idx.elem_u[part.index()][range(a, n, "element")?], v, "u")?
                }
                RoleTag::ElemV { part, a } => {
                    put(&mut idx.elem_v[part.index()][range(a, n, "element")?], v, "v")?
                }
                RoleTag::ElemW { part, a } => {
                    put(&mut idx.elem_w[part.index()][range(a, n, "element")?], v, "w")?
                }
                RoleTag::Gate { part, a } => {
                    put(&mut idx.gate[part.index()][range(a, n, "element")?], v, "gate")?
                }
                _ => {}
            }
        }
        let mut all = Vec::new();
        all.extend(idx.g);
        all.extend(idx.hub.iter().flatten());
        all.extend(idx.z1.iter().chain(&idx.z2));
        all.extend(idx.x.iter().flatten());
        all.extend(idx.y.iter().flatten());
        for p in 0..3 {
            all.extend(&idx.elem_u[p]);
            all.extend(&idx.elem_v[p]);
            all.extend(&idx.elem_w[p]);
            all.extend(&idx.gate[p]);
        }
        if all.contains(&unset) {
            return Err(bad_file("a named role is missing"));
        }
        if idx.branch.len() != 9 * n_us * m_us {
            return Err(bad_file(format!(
                "expected {} branch vertices, found {}",
                9 * n_us * m_us,
                idx.branch.len()
            )));
        }
        Ok(idx)
    }
}

/// A built (or re-loaded) reduction target: the graph, the budget k, the
/// role of every vertex, and the registry of recorded paths.
#[derive(Debug, Clone)]
pub struct ReducedInstance {
    pub graph: Graph,
    pub k: u64,
    pub params: ReductionParams,
    pub source: ThreeDmInstance,
    pub roles: Vec<RoleTag>,
    pub paths: Vec<PathRecord>,
    pub index: RoleIndex,
    by_endpoints: HashMap<(VertexId, VertexId), usize>,
}

impl ReducedInstance {
    pub(crate) fn assemble(
        graph: Graph,
        k: u64,
        params: ReductionParams,
        source: ThreeDmInstance,
        roles: Vec<RoleTag>,
        paths: Vec<PathRecord>,
    ) -> Result<Self, ReductionError> {
        if roles.len() != graph.id_bound() as usize {
            return Err(bad_file(format!(
                "have {} roles for {} vertices",
                roles.len(),
                graph.id_bound()
            )));
        }
        let index = RoleIndex::build(&roles, source.n(), source.m() as u32)?;
        let mut by_endpoints = HashMap::with_capacity(paths.len());
        for (i, p) in paths.iter().enumerate() {
            if p.internals.len() as u64 + 1 != p.stated_len {
                return Err(bad_file("path internals disagree with its stated length"));
            }
            let key = endpoint_key(p.from, p.to);
            if by_endpoints.insert(key, i).is_some() {
                return Err(bad_file("two recorded paths share endpoints"));
            }
        }
        Ok(ReducedInstance { graph, k, params, source, roles, paths, index, by_endpoints })
    }

    pub fn role(&self, v: VertexId) -> &RoleTag {
        &self.roles[v as usize]
    }

    pub fn path_between(&self, a: VertexId, b: VertexId) -> Option<&PathRecord> {
        self.by_endpoints
            .get(&endpoint_key(a, b))
            .map(|&i| &self.paths[i])
    }

    /// The unique degree-1 neighbor, if any.
    pub fn pendant_of(&self, v: VertexId) -> Option<VertexId> {
        self.graph
            .neighbors(v)
            .ok()?
            .iter()
            .copied()
            .find(|&u| self.graph.degree(u) == Ok(1))
    }

    pub fn to_graph_file(&self) -> GraphFile {
        let mut file = GraphFile::bare(self.graph.clone());
        file.roles = self
            .roles
            .iter()
            .enumerate()
            .map(|(v, r)| (v as VertexId, r.to_string()))
            .collect();
        file.k = Some(self.k);
        file.params.insert("M".into(), self.params.scale.to_string());
        file.params.insert("n".into(), self.source.n().to_string());
        file.params.insert("m".into(), self.source.m().to_string());
        file.params
            .insert("epsilon".into(), self.params.epsilon.to_string());
        file.params
            .insert("strict".into(), if self.params.strict { "1" } else { "0" }.into());
        file.sources = self.source.sets().to_vec();
        file
    }

    /// Rebuild a full instance from a parsed file: roles come from `r`
    /// tags, the path registry from `path:<from>:<to>:<pos>` tags plus
    /// the two re-tagged specials (branch vertices at position 1,
    /// gates at the position next to the q hub), and the source family
    /// from `s` lines. Chains are re-walked and checked edge by edge.
    pub fn from_graph_file(file: &GraphFile) -> Result<Self, ReductionError> {
        let graph = file.graph.clone();
        if graph.vertex_count() != graph.id_bound() as usize {
            return Err(bad_file("vertex ids must be contiguous"));
        }
        let k = file.k.ok_or_else(|| bad_file("missing target k"))?;
        let get = |key: &str| {
            file.params
                .get(key)
                .ok_or_else(|| bad_file(format!("missing param {key}")))
        };
        let scale: u64 = get("M")?
            .parse()
            .map_err(|_| bad_file("malformed param M"))?;
        let n: u32 = get("n")?
            .parse()
            .map_err(|_| bad_file("malformed param n"))?;
        let m: u32 = get("m")?
            .parse()
            .map_err(|_| bad_file("malformed param m"))?;
        let epsilon: Ratio = get("epsilon")?.parse()?;
        let strict = match get("strict")?.as_str() {
            "0" => false,
            "1" => true,
            other => return Err(bad_file(format!("malformed param strict `{other}`"))),
        };
        let params = ReductionParams { scale, epsilon, strict };
        if file.sources.len() != m as usize {
            return Err(bad_file(format!(
                "param m={m} but {} source triples listed",
                file.sources.len()
            )));
        }
        let source = ThreeDmInstance::new(n, file.sources.clone())
            .map_err(|e| bad_file(format!("bad source family: {e}")))?;

        let mut roles: Vec<Option<RoleTag>> = vec![None; graph.id_bound() as usize];
        for (v, tag) in &file.roles {
            let parsed: RoleTag = tag.parse()?;
            let slot = &mut roles[*v as usize];
            if slot.is_some() {
                return Err(bad_file(format!("vertex {v} carries two roles")));
            }
            *slot = Some(parsed);
        }
        let roles: Vec<RoleTag> = roles
            .into_iter()
            .enumerate()
            .map(|(v, r)| r.ok_or_else(|| bad_file(format!("vertex {v} has no role"))))
            .collect::<Result<_, _>>()?;

        let paths = rebuild_paths(&graph, &roles)?;
        Self::assemble(graph, k, params, source, roles, paths)
    }
}

fn endpoint_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Regroup interior tags into ordered path records, re-inserting the
/// re-tagged specials at their physical positions.
fn rebuild_paths(graph: &Graph, roles: &[RoleTag]) -> Result<Vec<PathRecord>, ReductionError> {
    let mut groups: HashMap<(VertexId, VertexId), Vec<(u64, VertexId)>> = HashMap::new();
    for (v, role) in roles.iter().enumerate() {
        if let RoleTag::PathInternal { from, to, pos } = *role {
            groups.entry((from, to)).or_default().push((pos, v as VertexId));
        }
    }
    let mut keys: Vec<(VertexId, VertexId)> = groups.keys().copied().collect();
    keys.sort_unstable();
    let mut records = Vec::with_capacity(keys.len());
    for key in keys {
        let (from, to) = key;
        if !graph.contains(from) || !graph.contains(to) {
            return Err(bad_file(format!("path tag references missing vertex {from} or {to}")));
        }
        let mut tagged = groups.remove(&key).unwrap();
        tagged.sort_unstable();
        let max_pos = tagged.last().unwrap().0;
        // positions are dense except where a special replaced the tag
        let mut stated_len = max_pos + 1;
        let mut by_pos: HashMap<u64, VertexId> = HashMap::with_capacity(tagged.len());
        for (pos, v) in tagged {
            if pos == 0 || by_pos.insert(pos, v).is_some() {
                return Err(bad_file(format!("bad interior position {pos} on path {from}-{to}")));
            }
        }
        if !by_pos.contains_key(&1) {
            // a branch vertex stands at position 1 of a hub-bound path
            let branch = find_special_neighbor(graph, roles, from, to, true)?;
            by_pos.insert(1, branch);
        }
        // a gate may stand one step before the q hub, which is one past
        // the largest tagged position
        if is_uq_path(roles, from, to) {
            let gate = find_special_neighbor(graph, roles, from, to, false)?;
            by_pos.insert(max_pos + 1, gate);
            stated_len = max_pos + 2;
        }
        let mut internals = Vec::with_capacity(stated_len as usize - 1);
        for pos in 1..stated_len {
            let v = *by_pos
                .get(&pos)
                .ok_or_else(|| bad_file(format!("path {from}-{to} missing interior position {pos}")))?;
            internals.push(v);
        }
        let record = PathRecord { from, to, stated_len, internals };
        verify_chain(graph, &record)?;
        records.push(record);
    }
    Ok(records)
}

/// Does (from, to) look like the u-to-q-hub path of an element gadget?
fn is_uq_path(roles: &[RoleTag], from: VertexId, to: VertexId) -> bool {
    matches!(
        (&roles[from as usize], &roles[to as usize]),
        (
            RoleTag::ElemU { part: pu, .. },
            RoleTag::Common(CommonKind::Hub(Symbol::Q, ph)),
        ) if pu == ph
    )
}

fn find_special_neighbor(
    graph: &Graph,
    roles: &[RoleTag],
    from: VertexId,
    to: VertexId,
    at_from: bool,
) -> Result<VertexId, ReductionError> {
    let anchor = if at_from { from } else { to };
    let hits: Vec<VertexId> = graph
        .neighbors(anchor)
        .map_err(ReductionError::Graph)?
        .iter()
        .copied()
        .filter(|&v| match (&roles[v as usize], &roles[from as usize], &roles[to as usize]) {
            (
                RoleTag::Branch { i, j, sym, part },
                RoleTag::SetX { i: xi, j: xj },
                RoleTag::Common(CommonKind::Hub(hs, hp)),
            ) => at_from && i == xi && j == xj && sym == hs && part == hp,
            (
                RoleTag::Gate { part, a },
                RoleTag::ElemU { part: up, a: ua },
                RoleTag::Common(CommonKind::Hub(Symbol::Q, hp)),
            ) => !at_from && part == up && a == ua && part == hp,
            _ => false,
        })
        .collect();
    match hits.as_slice() {
        [v] => Ok(*v),
        _ => Err(bad_file(format!(
            "path {from}-{to}: could not locate its re-tagged interior vertex"
        ))),
    }
}

fn verify_chain(graph: &Graph, record: &PathRecord) -> Result<(), ReductionError> {
    let chain = record.chain_from(record.from);
    for pair in chain.windows(2) {
        if !graph.has_edge(pair[0], pair[1]) {
            return Err(bad_file(format!(
                "path {}-{} breaks between {} and {}",
                record.from, record.to, pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_parses_and_divides() {
        let r: Ratio = "1/100".parse().unwrap();
        assert_eq!(r.to_string(), "1/100");
        assert_eq!(r.ceil_div_into(2), 200);
        assert_eq!(r.ceil_div_into(3), 300);
        assert!("1/0".parse::<Ratio>().is_err());
        assert!("0/3".parse::<Ratio>().is_err());
        assert!("7".parse::<Ratio>().is_err());
        let third = Ratio::new(1, 3).unwrap();
        assert_eq!(third.ceil_div_into(2), 6);
        let two_thirds = Ratio::new(2, 3).unwrap();
        assert_eq!(two_thirds.ceil_div_into(5), 8); // ceil(15/2)
    }

    #[test]
    fn params_enforce_scale_floors() {
        assert!(ReductionParams::desk(9).validate(2).is_ok());
        assert!(ReductionParams::desk(8).validate(2).is_err());
        assert!(ReductionParams::desk(5).validate(1).is_ok());
        let strict = ReductionParams::strict_auto(1, DEFAULT_EPSILON);
        assert_eq!(strict.scale, 200);
        assert!(strict.validate(1).is_ok());
        assert!(ReductionParams::strict(199, DEFAULT_EPSILON).validate(1).is_err());
        // a loose epsilon still cannot undercut the 4n floor
        let loose = ReductionParams::strict_auto(2, Ratio::new(1, 1).unwrap());
        assert_eq!(loose.scale, 9);
    }

    #[test]
    fn role_tags_roundtrip_through_text() {
        let tags = [
            RoleTag::Common(CommonKind::G(3)),
            RoleTag::Common(CommonKind::Hub(Symbol::Q, SetPart::Beta)),
            RoleTag::CommonPendant(CommonKind::Hub(Symbol::R, SetPart::Gamma)),
            RoleTag::SetX { i: 2, j: 4 },
            RoleTag::SetYPendant { i: 1, j: 1 },
            RoleTag::SetZ2Pendant { i: 9 },
            RoleTag::Branch { i: 1, j: 2, sym: Symbol::P, part: SetPart::Alpha },
            RoleTag::ElemV { part: SetPart::Gamma, a: 7 },
            RoleTag::GatePendant { part: SetPart::Beta, a: 1 },
            RoleTag::PathInternal { from: 11, to: 902, pos: 80 },
        ];
        for tag in tags {
            let text = tag.to_string();
            assert!(!text.contains(' '));
            let back: RoleTag = text.parse().unwrap();
            assert_eq!(back, tag);
        }
        assert!("common:g5".parse::<RoleTag>().is_err());
        assert!("x:1".parse::<RoleTag>().is_err());
        assert!("gate:delta:1".parse::<RoleTag>().is_err());
    }
}

//! Text serialization for graphs and reduced instances.
//!
//! The native format is line-oriented:
//!
//! ```text
//! g <vertices> <edges>
//! e <u> <v>
//! r <v> <tag>
//! k <target>
//! param <key> <value>
//! s <a> <b> <c>
//! ```
//!
//! `#` starts a comment, blank lines are skipped. The `g` header comes
//! first; everything after it may appear in any order. `r`, `k`, `param`,
//! and `s` lines are optional. Unrecognized `param` keys are kept verbatim
//! so downstream readers can ignore what they don't understand.
//!
//! Writers compact vertex ids to 0..vertices-1 in ascending order of the
//! surviving ids, so files never contain holes left by deletions.

use crate::graph::{Graph, GraphError, VertexId};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, msg: msg.into() }
}

/// A graph plus the optional trailer sections of the native format.
#[derive(Debug, Clone, Default)]
pub struct GraphFile {
    pub graph: Graph,
    /// Role tags keyed by vertex id, in the graph's id space.
    pub roles: Vec<(VertexId, String)>,
    pub k: Option<u64>,
    pub params: BTreeMap<String, String>,
    pub sources: Vec<[u32; 3]>,
}

impl GraphFile {
    pub fn bare(graph: Graph) -> Self {
        GraphFile { graph, ..Default::default() }
    }
}

pub fn write_graph_file(file: &GraphFile) -> String {
    let g = &file.graph;
    let compact = compaction(g);
    let mut out = String::new();
    let _ = writeln!(out, "g {} {}", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let (a, b) = (compact[u as usize], compact[v as usize]);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let _ = writeln!(out, "e {a} {b}");
    }
    for (v, tag) in &file.roles {
        debug_assert!(!tag.contains(char::is_whitespace));
        let _ = writeln!(out, "r {} {}", compact[*v as usize], tag);
    }
    if let Some(k) = file.k {
        let _ = writeln!(out, "k {k}");
    }
    for (key, value) in &file.params {
        let _ = writeln!(out, "param {key} {value}");
    }
    for s in &file.sources {
        let _ = writeln!(out, "s {} {} {}", s[0], s[1], s[2]);
    }
    out
}

/// Old id to compacted id, indexed by old id. Dead slots stay at u32::MAX.
fn compaction(g: &Graph) -> Vec<VertexId> {
    let mut map = vec![u32::MAX; g.id_bound() as usize];
    for (next, v) in g.vertices().enumerate() {
        map[v as usize] = next as VertexId;
    }
    map
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("g") {
        return Err(parse_err(line_no, "expected `g <vertices> <edges>` header"));
    }
    let n: u32 = field(toks.next(), line_no, "vertex count")?;
    let m: usize = field(toks.next(), line_no, "edge count")?;

    let mut file = GraphFile::bare(Graph::with_vertices(n as usize));
    for (line_no, line) in lines {
        let mut toks = line.split_whitespace();
        match toks.next().unwrap() {
            "e" => {
                let u: u32 = field(toks.next(), line_no, "edge endpoint")?;
                let v: u32 = field(toks.next(), line_no, "edge endpoint")?;
                file.graph
                    .add_edge(u, v)
                    .map_err(|e| parse_err(line_no, e.to_string()))?;
            }
            "r" => {
                let v: u32 = field(toks.next(), line_no, "vertex id")?;
                let tag = toks
                    .next()
                    .ok_or_else(|| parse_err(line_no, "missing role tag"))?;
                if !file.graph.contains(v) {
                    return Err(parse_err(line_no, format!("role for unknown vertex {v}")));
                }
                file.roles.push((v, tag.to_string()));
            }
            "k" => {
                file.k = Some(field(toks.next(), line_no, "target value")?);
            }
            "param" => {
                let key = toks
                    .next()
                    .ok_or_else(|| parse_err(line_no, "missing param key"))?;
                let value = toks
                    .next()
                    .ok_or_else(|| parse_err(line_no, "missing param value"))?;
                file.params.insert(key.to_string(), value.to_string());
            }
            "s" => {
                let a: u32 = field(toks.next(), line_no, "triple entry")?;
                let b: u32 = field(toks.next(), line_no, "triple entry")?;
                let c: u32 = field(toks.next(), line_no, "triple entry")?;
                file.sources.push([a, b, c]);
            }
            other => {
                return Err(parse_err(line_no, format!("unknown line kind `{other}`")));
            }
        }
        if let Some(extra) = toks.next() {
            return Err(parse_err(line_no, format!("trailing token `{extra}`")));
        }
    }
    if file.graph.edge_count() != m {
        return Err(parse_err(
            0,
            format!(
                "header declared {m} edges but {} were listed",
                file.graph.edge_count()
            ),
        ));
    }
    Ok(file)
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, name: &str) -> Result<T, IoError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line, format!("missing or malformed {name}")))
}

/// Graphviz output. Roles become node labels.
pub fn graph_to_dot(file: &GraphFile) -> String {
    let g = &file.graph;
    let compact = compaction(g);
    let mut out = String::from("graph g {\n");
    for (v, tag) in &file.roles {
        let _ = writeln!(
            out,
            "  {} [label=\"{}\"];",
            compact[*v as usize],
            tag.replace('"', "\\\"")
        );
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", compact[u as usize], compact[v as usize]);
    }
    out.push_str("}\n");
    out
}

/// GraphML output with a single string-valued `role` node attribute.
pub fn graph_to_graphml(file: &GraphFile) -> String {
    let g = &file.graph;
    let compact = compaction(g);
    let roles: BTreeMap<VertexId, &str> = file
        .roles
        .iter()
        .map(|(v, t)| (compact[*v as usize], t.as_str()))
        .collect();
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
         <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n\
         <graph id=\"G\" edgedefault=\"undirected\">\n",
    );
    for (idx, _) in g.vertices().enumerate() {
        let id = idx as VertexId;
        match roles.get(&id) {
            Some(tag) => {
                let _ = writeln!(
                    out,
                    "<node id=\"n{id}\"><data key=\"role\">{}</data></node>",
                    xml_escape(tag)
                );
            }
            None => {
                let _ = writeln!(out, "<node id=\"n{id}\"/>");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(
            out,
            "<edge source=\"n{}\" target=\"n{}\"/>",
            compact[u as usize], compact[v as usize]
        );
    }
    out.push_str("</graph>\n</graphml>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

//! Graph input formats and the ODOF binary container.
//!
//! Two text formats are accepted: DIMACS shortest-path files (`p sp n m`
//! header, `a u v w` arc lines, `c` comments) and whitespace-separated edge
//! lists (optional `n <count>` header line, then `u v` or `u v w` lines).
//! Vertex ids are canonicalized to `0..n-1`; DIMACS ids are 1-based.
//!
//! Serialized artifacts live in a versioned container: magic bytes `ODOF`,
//! a format-version `u32`, then named sections.

use crate::graph::{Graph, GraphError, VertexId};
use serde::{de::DeserializeOwned, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use thiserror::Error;

pub const ODOF_MAGIC: &[u8; 4] = b"ODOF";
pub const ODOF_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph construction: {0}")]
    Graph(#[from] GraphError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad container magic (expected ODOF)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    BadVersion(u32),
    #[error("missing container section {0:?}")]
    MissingSection(String),
    #[error("section codec: {0}")]
    Codec(#[from] bincode::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dimacs,
    EdgeList,
}

/// A loaded graph: integer-weighted when every weight fits the scaled
/// integer domain, floating-point otherwise.
#[derive(Debug, Clone)]
pub enum LoadedGraph {
    Int(Graph<u64>),
    Float(Graph<f64>),
}

impl LoadedGraph {
    pub fn n(&self) -> usize {
        match self {
            LoadedGraph::Int(g) => g.n(),
            LoadedGraph::Float(g) => g.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            LoadedGraph::Int(g) => g.m(),
            LoadedGraph::Float(g) => g.m(),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        msg: msg.into(),
    }
}

struct RawInput {
    declared_n: Option<usize>,
    // (u, v, weight-as-string or None for unweighted lines)
    edges: Vec<(u64, u64, Option<String>)>,
    one_based: bool,
}

fn parse_dimacs(text: &str) -> Result<RawInput, IoError> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                let kind = tok.next().ok_or_else(|| parse_err(line_no, "missing problem kind"))?;
                if kind != "sp" {
                    return Err(parse_err(line_no, format!("unsupported problem kind {kind:?}")));
                }
                let n: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line_no, "bad vertex count"))?;
                declared_n = Some(n);
            }
            Some("a") => {
                let u: u64 = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line_no, "bad arc tail"))?;
                let v: u64 = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line_no, "bad arc head"))?;
                let w = tok
                    .next()
                    .ok_or_else(|| parse_err(line_no, "missing arc weight"))?;
                if u == 0 || v == 0 {
                    return Err(parse_err(line_no, "DIMACS vertex ids are 1-based"));
                }
                edges.push((u, v, Some(w.to_string())));
            }
            Some(other) => {
                return Err(parse_err(line_no, format!("unknown line kind {other:?}")));
            }
            None => unreachable!(),
        }
    }
    Ok(RawInput {
        declared_n,
        edges,
        one_based: true,
    })
}

fn parse_edge_list(text: &str) -> Result<RawInput, IoError> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    let mut arity: Option<usize> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "n" && toks.len() == 2 && declared_n.is_none() && edges.is_empty() {
            declared_n = Some(
                toks[1]
                    .parse()
                    .map_err(|_| parse_err(line_no, "bad vertex count"))?,
            );
            continue;
        }
        if toks.len() != 2 && toks.len() != 3 {
            return Err(parse_err(line_no, "expected 'u v' or 'u v w'"));
        }
        match arity {
            None => arity = Some(toks.len()),
            Some(a) if a != toks.len() => {
                return Err(parse_err(line_no, "mixed weighted and unweighted lines"))
            }
            _ => {}
        }
        let u: u64 = toks[0]
            .parse()
            .map_err(|_| parse_err(line_no, "bad vertex id"))?;
        let v: u64 = toks[1]
            .parse()
            .map_err(|_| parse_err(line_no, "bad vertex id"))?;
        let w = toks.get(2).map(|t| t.to_string());
        edges.push((u, v, w));
    }
    Ok(RawInput {
        declared_n,
        edges,
        one_based: false,
    })
}

/// Parses a graph from text in the declared format. Duplicate edges collapse
/// keeping the minimum weight; negative weights are rejected.
pub fn load_graph(text: &str, format: GraphFormat) -> Result<LoadedGraph, IoError> {
    let raw = match format {
        GraphFormat::Dimacs => parse_dimacs(text)?,
        GraphFormat::EdgeList => parse_edge_list(text)?,
    };
    let offset = u64::from(raw.one_based);
    let max_id = raw
        .edges
        .iter()
        .map(|&(u, v, _)| u.max(v))
        .max()
        .map(|m| m + 1 - offset)
        .unwrap_or(0);
    let n = raw.declared_n.unwrap_or(max_id as usize).max(max_id as usize);

    let weighted = raw.edges.iter().any(|(_, _, w)| w.is_some());
    let all_int = raw
        .edges
        .iter()
        .all(|(_, _, w)| w.as_deref().is_none_or(|s| s.parse::<u64>().is_ok()));
    if all_int {
        let mut edges = Vec::with_capacity(raw.edges.len());
        let mut nontrivial_weight = false;
        for (i, (u, v, w)) in raw.edges.iter().enumerate() {
            let w = match w {
                Some(s) => {
                    if s.starts_with('-') {
                        return Err(parse_err(i + 1, "negative weight rejected"));
                    }
                    s.parse::<u64>().map_err(|_| parse_err(i + 1, "bad weight"))?
                }
                None => 1,
            };
            if w != 1 {
                nontrivial_weight = true;
            }
            edges.push(((u - offset) as VertexId, (v - offset) as VertexId, w));
        }
        let is_weighted = weighted && nontrivial_weight;
        Ok(LoadedGraph::Int(Graph::from_edges(n, edges, is_weighted)?))
    } else {
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (i, (u, v, w)) in raw.edges.iter().enumerate() {
            let w = match w {
                Some(s) => {
                    let val: f64 = s.parse().map_err(|_| parse_err(i + 1, "bad weight"))?;
                    if val < 0.0 {
                        return Err(parse_err(i + 1, "negative weight rejected"));
                    }
                    val
                }
                None => 1.0,
            };
            edges.push(((u - offset) as VertexId, (v - offset) as VertexId, w));
        }
        Ok(LoadedGraph::Float(Graph::from_edges(n, edges, true)?))
    }
}

/// Versioned section container for serialized oracles and graphs.
#[derive(Debug, Default)]
pub struct Container {
    sections: BTreeMap<String, Vec<u8>>,
}

impl Container {
    pub fn new() -> Self {
        Container::default()
    }

    pub fn put<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), IoError> {
        self.sections
            .insert(name.to_string(), bincode::serialize(value)?);
        Ok(())
    }

    pub fn get<T: DeserializeOwned>(&self, name: &str) -> Result<T, IoError> {
        let bytes = self
            .sections
            .get(name)
            .ok_or_else(|| IoError::MissingSection(name.to_string()))?;
        Ok(bincode::deserialize(bytes)?)
    }

    pub fn has(&self, name: &str) -> bool {
        self.sections.contains_key(name)
    }

    pub fn section_names(&self) -> impl Iterator<Item = &str> {
        self.sections.keys().map(|s| s.as_str())
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<(), IoError> {
        w.write_all(ODOF_MAGIC)?;
        w.write_all(&ODOF_VERSION.to_le_bytes())?;
        w.write_all(&(self.sections.len() as u32).to_le_bytes())?;
        for (name, payload) in &self.sections {
            w.write_all(&(name.len() as u32).to_le_bytes())?;
            w.write_all(name.as_bytes())?;
            w.write_all(&(payload.len() as u64).to_le_bytes())?;
            w.write_all(payload)?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self, IoError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != ODOF_MAGIC {
            return Err(IoError::BadMagic);
        }
        let mut buf4 = [0u8; 4];
        r.read_exact(&mut buf4)?;
        let version = u32::from_le_bytes(buf4);
        if version != ODOF_VERSION {
            return Err(IoError::BadVersion(version));
        }
        r.read_exact(&mut buf4)?;
        let count = u32::from_le_bytes(buf4);
        let mut sections = BTreeMap::new();
        for _ in 0..count {
            r.read_exact(&mut buf4)?;
            let name_len = u32::from_le_bytes(buf4) as usize;
            let mut name = vec![0u8; name_len];
            r.read_exact(&mut name)?;
            let mut buf8 = [0u8; 8];
            r.read_exact(&mut buf8)?;
            let payload_len = u64::from_le_bytes(buf8) as usize;
            let mut payload = vec![0u8; payload_len];
            r.read_exact(&mut payload)?;
            let name = String::from_utf8(name)
                .map_err(|_| IoError::MissingSection("<invalid utf8>".into()))?;
            sections.insert(name, payload);
        }
        Ok(Container { sections })
    }

    pub fn write_file(&self, path: &std::path::Path) -> Result<(), IoError> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    pub fn read_file(path: &std::path::Path) -> Result<Self, IoError> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

const GRAPH_SECTION: &str = "graph";
const GRAPH_SCALAR_SECTION: &str = "graph-scalar";

/// Serializes a loaded graph into its own ODOF container.
pub fn save_graph_container(g: &LoadedGraph, path: &std::path::Path) -> Result<(), IoError> {
    let mut c = Container::new();
    match g {
        LoadedGraph::Int(g) => {
            c.put(GRAPH_SCALAR_SECTION, &"u64".to_string())?;
            c.put(GRAPH_SECTION, g)?;
        }
        LoadedGraph::Float(g) => {
            c.put(GRAPH_SCALAR_SECTION, &"f64".to_string())?;
            c.put(GRAPH_SECTION, g)?;
        }
    }
    c.write_file(path)
}

pub fn load_graph_container(path: &std::path::Path) -> Result<LoadedGraph, IoError> {
    let c = Container::read_file(path)?;
    let scalar: String = c.get(GRAPH_SCALAR_SECTION)?;
    match scalar.as_str() {
        "u64" => Ok(LoadedGraph::Int(c.get(GRAPH_SECTION)?)),
        "f64" => Ok(LoadedGraph::Float(c.get(GRAPH_SECTION)?)),
        other => Err(IoError::MissingSection(format!(
            "graph scalar {other:?}"
        ))),
    }
}

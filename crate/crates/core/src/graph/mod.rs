//! Finite directed multigraphs with named vertices and edges.
//!
//! Vertex declaration order is significant: it fixes the row/column order of
//! every matrix derived from a graph.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::IntMatrix;

pub mod builtin;
mod io;
mod isomorphism;
mod spi;

pub use builtin::{builtin, BUILTIN_NAMES};
pub use io::{parse_graph, render_graph};
pub use isomorphism::{graph_isomorphic, GraphIsomorphism, ISOMORPHISM_VERTEX_LIMIT};
pub use spi::{is_spi, supports_two_return_paths, SpiFailure, SpiReport};

/// What went wrong while reading a graph file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("{0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}, column {column}: {kind}")]
    Parse {
        line: usize,
        column: usize,
        kind: ParseErrorKind,
    },
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge identifier `{0}`")]
    DuplicateEdge(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown built-in graph `{0}` (known: {known})", known = BUILTIN_NAMES.join(", "))]
    UnknownBuiltin(String),
    #[error("graph has {vertices} vertices; isomorphism search is limited to {limit}")]
    SizeLimit { vertices: usize, limit: usize },
}

/// Identifiers match `[A-Za-z][A-Za-z0-9_']*`, optionally followed by one
/// collision suffix `#<digits>`.
pub fn is_valid_identifier(id: &str) -> bool {
    let (stem, suffix) = match id.split_once('#') {
        Some((stem, suffix)) => (stem, Some(suffix)),
        None => (id, None),
    };
    let mut chars = stem.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic());
    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    let suffix_ok = match suffix {
        None => true,
        Some(s) => !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()),
    };
    head_ok && tail_ok && suffix_ok
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub range: usize,
}

/// A finite directed multigraph `E = (E⁰, E¹, r, s)`.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from identifier lists, e.g.
    /// `Graph::from_parts(&["u"], &[("a", "u", "u")])`.
    pub fn from_parts(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for (id, s, r) in edges {
            let s = g.require_vertex(s)?;
            let r = g.require_vertex(r)?;
            g.add_edge(id, s, r)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<usize, GraphError> {
        if !is_valid_identifier(id) {
            return Err(GraphError::InvalidIdentifier(id.to_string()));
        }
        if self.vertex_index.contains_key(id) {
            return Err(GraphError::DuplicateVertex(id.to_string()));
        }
        let idx = self.vertices.len();
        self.vertices.push(id.to_string());
        self.vertex_index.insert(id.to_string(), idx);
        Ok(idx)
    }

    pub fn add_edge(&mut self, id: &str, source: usize, range: usize) -> Result<usize, GraphError> {
        if !is_valid_identifier(id) {
            return Err(GraphError::InvalidIdentifier(id.to_string()));
        }
        if self.edge_index.contains_key(id) {
            return Err(GraphError::DuplicateEdge(id.to_string()));
        }
        assert!(
            source < self.vertices.len() && range < self.vertices.len(),
            "edge endpoint out of range"
        );
        let idx = self.edges.len();
        self.edges.push(Edge {
            id: id.to_string(),
            source,
            range,
        });
        self.edge_index.insert(id.to_string(), idx);
        Ok(idx)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn require_vertex(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn source(&self, e: usize) -> usize {
        self.edges[e].source
    }

    pub fn range(&self, e: usize) -> usize {
        self.edges[e].range
    }

    /// Edges emitted by `v`, in declaration order.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.source == v)
            .map(|(i, _)| i)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.range == v).count()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_degree(v) == 0
    }

    /// Finite graphs: regular means "emits at least one edge".
    pub fn is_regular(&self, v: usize) -> bool {
        !self.is_sink(v)
    }

    pub fn regular_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_regular(v)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_sink(v)).collect()
    }

    pub fn has_sinks(&self) -> bool {
        (0..self.vertex_count()).any(|v| self.is_sink(v))
    }

    /// `counts[v][w]` = number of edges from `v` to `w`.
    pub fn edge_counts(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut counts = vec![vec![0usize; n]; n];
        for e in &self.edges {
            counts[e.source][e.range] += 1;
        }
        counts
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let counts = self.edge_counts();
        IntMatrix::from_fn(n, n, |i, j| counts[i][j].into())
    }

    /// Vertices reachable from `v` by a path of length >= 0.
    pub fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            for e in self.out_edges(x) {
                let y = self.range(e);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// `base` if unused as a vertex identifier, otherwise the first free
    /// `stem#k` for k = 2, 3, ...
    pub fn fresh_vertex_id(&self, base: &str) -> String {
        fresh_id(base, |s| self.vertex_index.contains_key(s))
    }

    pub fn fresh_edge_id(&self, base: &str) -> String {
        fresh_id(base, |s| self.edge_index.contains_key(s))
    }

    /// `g ⊔ h`: `h`'s identifiers are suffixed on collision; vertex order is
    /// `g`'s followed by `h`'s. Returns the union and the offsets of `h`'s
    /// vertices and edges inside it.
    pub fn disjoint_union_with_offsets(&self, other: &Graph) -> (Graph, usize, usize) {
        let mut union = self.clone();
        let vertex_offset = union.vertex_count();
        let edge_offset = union.edge_count();
        for v in &other.vertices {
            let id = union.fresh_vertex_id(v);
            union.add_vertex(&id).expect("fresh identifier");
        }
        for e in &other.edges {
            let id = union.fresh_edge_id(&e.id);
            union
                .add_edge(&id, e.source + vertex_offset, e.range + vertex_offset)
                .expect("fresh identifier");
        }
        (union, vertex_offset, edge_offset)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        self.disjoint_union_with_offsets(other).0
    }
}

fn fresh_id(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    let stem = match base.rsplit_once('#') {
        Some((stem, digits)) if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) => stem,
        _ => base,
    };
    (2..)
        .map(|k| format!("{stem}#{k}"))
        .find(|candidate| !taken(candidate))
        .expect("unbounded search")
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_graph(self))
    }
}

pub fn regular_vertices(g: &Graph) -> Vec<usize> {
    g.regular_vertices()
}

pub fn adjacency_matrix(g: &Graph) -> IntMatrix {
    g.adjacency_matrix()
}

pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    g.disjoint_union(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e_star() -> Graph {
        builtin("E_star").unwrap()
    }

    #[test]
    fn identifiers() {
        assert!(is_valid_identifier("v1"));
        assert!(is_valid_identifier("v1'"));
        assert!(is_valid_identifier("w_1''"));
        assert!(is_valid_identifier("v1#2"));
        assert!(!is_valid_identifier("1v"));
        assert!(!is_valid_identifier(""));
        assert!(!is_valid_identifier("v#"));
        assert!(!is_valid_identifier("v#2#3"));
        assert!(!is_valid_identifier("a-b"));
    }

    #[test]
    fn regular_vertices_examples() {
        assert_eq!(e_star().regular_vertices(), vec![0, 1]);
        let f = builtin("F_star").unwrap();
        let ids: Vec<_> = f
            .regular_vertices()
            .into_iter()
            .map(|v| f.vertex_id(v).to_string())
            .collect();
        assert_eq!(ids, ["v1", "v2"]);
        let single = Graph::from_parts(&["x"], &[]).unwrap();
        assert!(single.regular_vertices().is_empty());
    }

    #[test]
    fn adjacency_examples() {
        assert_eq!(
            e_star().adjacency_matrix(),
            IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]])
        );
        let ess = builtin("E_star_star").unwrap();
        assert_eq!(
            ess.adjacency_matrix(),
            IntMatrix::from_rows(&[vec![1, 1, 1, 0], vec![1, 1, 0, 0], vec![1, 0, 1, 1], vec![0, 0, 1, 1]])
        );
        let edgeless = Graph::from_parts(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(edgeless.adjacency_matrix(), IntMatrix::zeros(3, 3));
    }

    #[test]
    fn disjoint_union_examples() {
        let g = e_star();
        let u = g.disjoint_union(&g);
        assert_eq!((u.vertex_count(), u.edge_count()), (4, 8));
        assert_eq!(u.vertices(), ["v1", "v2", "v1#2", "v2#2"]);
        let a = u.adjacency_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i < 2) == (j < 2) { 1 } else { 0 };
                assert_eq!(a[(i, j)], expected.into());
            }
        }
        assert_eq!(g.disjoint_union(&Graph::new()), g);
        let r3f = builtin("R3").unwrap().disjoint_union(&builtin("F_star").unwrap());
        assert_eq!((r3f.vertex_count(), r3f.edge_count()), (4, 9));
    }

    #[test]
    fn fresh_ids_strip_existing_suffix() {
        let g = Graph::from_parts(&["v1", "v1#2"], &[]).unwrap();
        assert_eq!(g.fresh_vertex_id("v1"), "v1#3");
        assert_eq!(g.fresh_vertex_id("v1#2"), "v1#3");
        assert_eq!(g.fresh_vertex_id("v2"), "v2");
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Graph::from_parts(&["a", "a"], &[]),
            Err(GraphError::DuplicateVertex("a".into()))
        );
        assert_eq!(
            Graph::from_parts(&["a"], &[("e", "a", "b")]),
            Err(GraphError::UnknownVertex("b".into()))
        );
    }
}

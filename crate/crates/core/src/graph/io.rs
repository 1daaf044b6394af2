//! JSON graph files:
//!
//! ```json
//! { "vertices": ["v1", "v2"], "edges": [["e1", "v1", "v2"]] }
//! ```
//!
//! Semantic errors (duplicates, dangling endpoints, bad identifiers) are raised
//! from inside the deserializer so that they carry a line and column.

use std::cell::RefCell;
use std::fmt;

use serde::de::{self, DeserializeSeed, MapAccess, SeqAccess, Visitor};
use serde::Deserializer as _;

use super::{is_valid_identifier, Graph, GraphError, ParseErrorKind};

type Issue = RefCell<Option<ParseErrorKind>>;

fn fail<E: de::Error>(issue: &Issue, kind: ParseErrorKind) -> E {
    let err = E::custom(&kind);
    *issue.borrow_mut() = Some(kind);
    err
}

fn push_vertex<E: de::Error>(graph: &mut Graph, id: &str, issue: &Issue) -> Result<(), E> {
    if !is_valid_identifier(id) {
        return Err(fail(issue, ParseErrorKind::InvalidIdentifier(id.to_string())));
    }
    if graph.vertex_index(id).is_some() {
        return Err(fail(issue, ParseErrorKind::DuplicateIdentifier(id.to_string())));
    }
    graph.add_vertex(id).map(|_| ()).map_err(|e| E::custom(e))
}

fn push_edge<E: de::Error>(graph: &mut Graph, raw: (String, String, String), issue: &Issue) -> Result<(), E> {
    let (id, s, r) = raw;
    for ident in [&id, &s, &r] {
        if !is_valid_identifier(ident) {
            return Err(fail(issue, ParseErrorKind::InvalidIdentifier(ident.clone())));
        }
    }
    if graph.edge_index(&id).is_some() {
        return Err(fail(issue, ParseErrorKind::DuplicateIdentifier(id)));
    }
    let endpoint = |v: &str| {
        graph.vertex_index(v).ok_or_else(|| ParseErrorKind::DanglingEndpoint {
            edge: id.clone(),
            vertex: v.to_string(),
        })
    };
    let (s, r) = match (endpoint(&s), endpoint(&r)) {
        (Ok(s), Ok(r)) => (s, r),
        (Err(kind), _) | (_, Err(kind)) => return Err(fail(issue, kind)),
    };
    graph.add_edge(&id, s, r).map(|_| ()).map_err(|e| E::custom(e))
}

struct VerticesSeed<'a> {
    issue: &'a Issue,
}

impl<'de> DeserializeSeed<'de> for VerticesSeed<'_> {
    type Value = Graph;

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<Graph, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for VerticesSeed<'_> {
    type Value = Graph;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an array of vertex identifiers")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Graph, A::Error> {
        let mut graph = Graph::new();
        while let Some(id) = seq.next_element::<String>()? {
            push_vertex(&mut graph, &id, self.issue)?;
        }
        Ok(graph)
    }
}

struct EdgesSeed<'a> {
    graph: &'a mut Graph,
    issue: &'a Issue,
}

impl<'de> DeserializeSeed<'de> for EdgesSeed<'_> {
    type Value = ();

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<(), D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for EdgesSeed<'_> {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an array of [edge, source, range] triples")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        while seq
            .next_element_seed(EdgeSeed {
                graph: &mut *self.graph,
                issue: self.issue,
            })?
            .is_some()
        {}
        Ok(())
    }
}

/// One `[edge, source, range]` triple. Validation happens inside the triple
/// so that errors point at its line.
struct EdgeSeed<'a> {
    graph: &'a mut Graph,
    issue: &'a Issue,
}

impl<'de> DeserializeSeed<'de> for EdgeSeed<'_> {
    type Value = ();

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<(), D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for EdgeSeed<'_> {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an [edge, source, range] triple")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        let mut next = |i| {
            seq.next_element::<String>()?
                .ok_or_else(|| de::Error::invalid_length(i, &"three identifiers"))
        };
        let raw = (next(0)?, next(1)?, next(2)?);
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(4, &"three identifiers"));
        }
        push_edge(self.graph, raw, self.issue)
    }
}

struct GraphVisitor<'a> {
    issue: &'a Issue,
}

impl<'de> Visitor<'de> for GraphVisitor<'_> {
    type Value = Graph;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an object with \"vertices\" and \"edges\"")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Graph, A::Error> {
        let mut graph: Option<Graph> = None;
        // Edges listed before vertices are validated once the vertices are known.
        let mut early_edges: Option<Vec<(String, String, String)>> = None;
        let mut edges_seen = false;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "vertices" if graph.is_none() => {
                    graph = Some(map.next_value_seed(VerticesSeed { issue: self.issue })?);
                }
                "edges" if !edges_seen => {
                    edges_seen = true;
                    match graph.as_mut() {
                        Some(g) => map.next_value_seed(EdgesSeed {
                            graph: g,
                            issue: self.issue,
                        })?,
                        None => early_edges = Some(map.next_value()?),
                    }
                }
                "vertices" | "edges" => {
                    return Err(fail(
                        self.issue,
                        ParseErrorKind::Syntax(format!("duplicate key `{key}`")),
                    ))
                }
                other => {
                    return Err(fail(
                        self.issue,
                        ParseErrorKind::Syntax(format!("unknown key `{other}`")),
                    ))
                }
            }
        }
        let mut graph =
            graph.ok_or_else(|| fail(self.issue, ParseErrorKind::Syntax("missing key `vertices`".into())))?;
        if !edges_seen {
            return Err(fail(self.issue, ParseErrorKind::Syntax("missing key `edges`".into())));
        }
        for raw in early_edges.into_iter().flatten() {
            push_edge(&mut graph, raw, self.issue)?;
        }
        Ok(graph)
    }
}

/// Parses a graph file. Declaration order is preserved.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let issue: Issue = RefCell::new(None);
    let mut de = serde_json::Deserializer::from_str(text);
    let result = de
        .deserialize_map(GraphVisitor { issue: &issue })
        .and_then(|g| de.end().map(|_| g));
    result.map_err(|err| {
        let kind = issue
            .take()
            .unwrap_or_else(|| ParseErrorKind::Syntax(strip_position(&err)));
        GraphError::Parse {
            line: err.line(),
            column: err.column(),
            kind,
        }
    })
}

fn strip_position(err: &serde_json::Error) -> String {
    let text = err.to_string();
    match text.rfind(" at line ") {
        Some(pos) => text[..pos].to_string(),
        None => text,
    }
}

/// Canonical rendering: one edge per line, declaration order kept.
pub fn render_graph(g: &Graph) -> String {
    let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
    let vertices: Vec<String> = g.vertices().iter().map(|v| quote(v)).collect();
    let mut out = format!("{{\n  \"vertices\": [{}],\n  \"edges\": [", vertices.join(", "));
    for (i, e) in g.edges().iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&format!(
            "    [{}, {}, {}]",
            quote(&e.id),
            quote(g.vertex_id(e.source)),
            quote(g.vertex_id(e.range))
        ));
    }
    if g.edge_count() > 0 {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;

    #[test]
    fn parses_e_star() {
        let text = r#"{
            "vertices": ["v1", "v2"],
            "edges": [["e1","v1","v1"], ["e2","v1","v2"], ["e3","v2","v1"], ["e4","v2","v2"]]
        }"#;
        assert_eq!(parse_graph(text).unwrap(), builtin("E_star").unwrap());
    }

    #[test]
    fn empty_graph() {
        let g = parse_graph(r#"{"vertices": [], "edges": []}"#).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dangling_endpoint_has_position() {
        let text = "{\n  \"vertices\": [\"a\"],\n  \"edges\": [\n    [\"e\", \"a\", \"b\"]\n  ]\n}";
        match parse_graph(text) {
            Err(GraphError::Parse { line, kind, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(
                    kind,
                    ParseErrorKind::DanglingEndpoint {
                        edge: "e".into(),
                        vertex: "b".into()
                    }
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_endpoint_with_edges_first() {
        let text = r#"{"edges": [["e","a","b"]], "vertices": ["a"]}"#;
        assert!(matches!(
            parse_graph(text),
            Err(GraphError::Parse {
                kind: ParseErrorKind::DanglingEndpoint { .. },
                ..
            })
        ));
        let ok = r#"{"edges": [["e","a","a"]], "vertices": ["a"]}"#;
        assert_eq!(parse_graph(ok).unwrap().edge_count(), 1);
    }

    #[test]
    fn duplicates_and_syntax() {
        let dup = "{\"vertices\": [\"a\",\n \"a\"], \"edges\": []}";
        match parse_graph(dup) {
            Err(GraphError::Parse { line: 2, kind, .. }) => {
                assert_eq!(kind, ParseErrorKind::DuplicateIdentifier("a".into()))
            }
            other => panic!("unexpected {other:?}"),
        }
        let dup_edge = r#"{"vertices": ["a"], "edges": [["e","a","a"], ["e","a","a"]]}"#;
        assert!(matches!(
            parse_graph(dup_edge),
            Err(GraphError::Parse {
                kind: ParseErrorKind::DuplicateIdentifier(_),
                ..
            })
        ));
        assert!(matches!(
            parse_graph("{\"vertices\": [\"a\"], \"edges\": [}"),
            Err(GraphError::Parse {
                kind: ParseErrorKind::Syntax(_),
                ..
            })
        ));
        assert!(matches!(
            parse_graph(r#"{"vertices": ["9a"], "edges": []}"#),
            Err(GraphError::Parse {
                kind: ParseErrorKind::InvalidIdentifier(_),
                ..
            })
        ));
        assert!(parse_graph(r#"{"vertices": []}"#).is_err());
    }

    #[test]
    fn render_round_trips_builtins() {
        for name in crate::graph::BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            assert_eq!(parse_graph(&render_graph(&g)).unwrap(), g, "{name}");
        }
        assert_eq!(parse_graph(&render_graph(&Graph::new())).unwrap(), Graph::new());
    }
}

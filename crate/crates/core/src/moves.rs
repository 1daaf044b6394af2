//! Graph moves: the Cuntz splice, the double Cuntz splice, the Cohn graph
//! `E(V)` and source adjunction, with re-verified effects on invariants.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::classify::{invariants, GraphInvariants};
use crate::graph::{builtin, render_graph, supports_two_return_paths, Graph};
use crate::linalg::{k0_presentation, pointed_iso_exists, K0Element, PointedAbelianGroup, PointedIsoVerdict};
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("precondition failed: `{0}` is not regular")]
    NotRegular(String),
    #[error("precondition failed: `{0}` does not support two return paths")]
    ReturnPaths(String),
    #[error("precondition failed: `{0}` is a sink and cannot be in the completion set")]
    SinkInCompletionSet(String),
    #[error("precondition failed: the graph is empty")]
    EmptyGraph,
}

fn vertex(g: &Graph, id: &str) -> Result<usize, MoveError> {
    g.vertex_index(id)
        .ok_or_else(|| MoveError::UnknownVertex(id.to_string()))
}

fn check_splice_vertex(g: &Graph, id: &str) -> Result<usize, MoveError> {
    let u = vertex(g, id)?;
    if !g.is_regular(u) {
        return Err(MoveError::NotRegular(id.to_string()));
    }
    if !supports_two_return_paths(g, u) {
        return Err(MoveError::ReturnPaths(id.to_string()));
    }
    Ok(u)
}

/// `g ⊔ piece` joined by `d1: u → a`, `d2: a → u` where `a` is the first
/// vertex of `piece`. Returns the graph and the identifier of `a`.
fn attach(g: &Graph, u: usize, piece: &Graph) -> (Graph, String) {
    let (mut out, voff, _) = g.disjoint_union_with_offsets(piece);
    let d1 = out.fresh_edge_id("d1");
    out.add_edge(&d1, u, voff).expect("fresh identifier");
    let d2 = out.fresh_edge_id("d2");
    out.add_edge(&d2, voff, u).expect("fresh identifier");
    let a = out.vertex_id(voff).to_string();
    (out, a)
}

/// Cuntz splice at `u`; also returns the identifier of the attached copy of
/// `v1`.
pub fn cuntz_splice_with_attach(g: &Graph, u: &str) -> Result<(Graph, String), MoveError> {
    let u = check_splice_vertex(g, u)?;
    Ok(attach(g, u, &builtin::e_star()))
}

/// `g ⊔ E*` with `d1: u → v1`, `d2: v1 → u`.
pub fn cuntz_splice(g: &Graph, u: &str) -> Result<Graph, MoveError> {
    cuntz_splice_with_attach(g, u).map(|(h, _)| h)
}

pub fn double_cuntz_splice_with_attach(g: &Graph, u: &str) -> Result<(Graph, String), MoveError> {
    let u = check_splice_vertex(g, u)?;
    Ok(attach(g, u, &builtin::e_star_star()))
}

/// `g ⊔ E**` with `d1: u → w1`, `d2: w1 → u`.
pub fn double_cuntz_splice(g: &Graph, u: &str) -> Result<Graph, MoveError> {
    double_cuntz_splice_with_attach(g, u).map(|(h, _)| h)
}

/// Index of the primed copy of each vertex and edge in a Cohn graph, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohnCopies {
    pub vertex_copy: Vec<Option<usize>>,
    pub edge_copy: Vec<Option<usize>>,
}

pub fn cohn_graph_with_map(g: &Graph, complete_at: &[&str]) -> Result<(Graph, CohnCopies), MoveError> {
    let mut in_v = vec![false; g.vertex_count()];
    for id in complete_at {
        let v = vertex(g, id)?;
        if !g.is_regular(v) {
            return Err(MoveError::SinkInCompletionSet(id.to_string()));
        }
        in_v[v] = true;
    }
    let mut out = g.clone();
    let mut vertex_copy = vec![None; g.vertex_count()];
    for v in 0..g.vertex_count() {
        if g.is_regular(v) && !in_v[v] {
            let id = out.fresh_vertex_id(&format!("{}'", g.vertex_id(v)));
            vertex_copy[v] = Some(out.add_vertex(&id).expect("fresh identifier"));
        }
    }
    let mut edge_copy = vec![None; g.edge_count()];
    for e in 0..g.edge_count() {
        if let Some(target) = vertex_copy[g.range(e)] {
            let id = out.fresh_edge_id(&format!("{}'", g.edge(e).id));
            edge_copy[e] = Some(out.add_edge(&id, g.source(e), target).expect("fresh identifier"));
        }
    }
    Ok((out, CohnCopies { vertex_copy, edge_copy }))
}

/// `E(V)`: a primed sink `v'` for each regular `v ∉ V` and an edge
/// `e': s(e) → r(e)'` for each edge into such a vertex.
pub fn cohn_graph(g: &Graph, complete_at: &[&str]) -> Result<Graph, MoveError> {
    cohn_graph_with_map(g, complete_at).map(|(h, _)| h)
}

/// Adds a source `s` with one edge `es: s → u`.
pub fn add_source(g: &Graph, u: &str) -> Result<Graph, MoveError> {
    if g.is_empty() {
        return Err(MoveError::EmptyGraph);
    }
    let u = vertex(g, u)?;
    let mut out = g.clone();
    let s = out.add_vertex(&out.fresh_vertex_id("s")).expect("fresh identifier");
    out.add_edge(&out.fresh_edge_id("es"), s, u).expect("fresh identifier");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    CuntzSplice { at: String },
    DoubleCuntzSplice { at: String },
    Cohn { complete_at: Vec<String> },
    AddSource { at: String },
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::CuntzSplice { .. } => "cuntz-splice",
            Move::DoubleCuntzSplice { .. } => "double-cuntz-splice",
            Move::Cohn { .. } => "cohn",
            Move::AddSource { .. } => "add-source",
        }
    }

    pub fn apply(&self, g: &Graph) -> Result<Graph, MoveError> {
        match self {
            Move::CuntzSplice { at } => cuntz_splice(g, at),
            Move::DoubleCuntzSplice { at } => double_cuntz_splice(g, at),
            Move::Cohn { complete_at } => {
                let ids: Vec<&str> = complete_at.iter().map(String::as_str).collect();
                cohn_graph(g, &ids)
            }
            Move::AddSource { at } => add_source(g, at),
        }
    }

    pub fn parameters(&self) -> Value {
        match self {
            Move::CuntzSplice { at } | Move::DoubleCuntzSplice { at } | Move::AddSource { at } => json!({ "at": at }),
            Move::Cohn { complete_at } => json!({ "complete_at": complete_at }),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Cohn { complete_at } => write!(f, "cohn at {{{}}}", complete_at.join(", ")),
            Move::CuntzSplice { at } | Move::DoubleCuntzSplice { at } | Move::AddSource { at } => {
                write!(f, "{} at {at}", self.name())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct MoveReport {
    pub applied: Move,
    pub input: Graph,
    pub output: Graph,
    pub before: GraphInvariants,
    pub after: GraphInvariants,
    pub checks: Vec<Check>,
}

impl MoveReport {
    pub fn passed(&self) -> bool {
        crate::report::all_passed(&self.checks)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "move": self.applied.name(),
            "parameters": self.applied.parameters(),
            "input": render_graph(&self.input),
            "output": render_graph(&self.output),
            "before": self.before.to_json(),
            "after": self.after.to_json(),
        })
    }
}

/// Whether `(before.group, before.unit + shift)` and the output's pointed
/// group are isomorphic; `shift` is a class in the input group.
fn shifted_unit_check(
    name: &str,
    before: &PointedAbelianGroup,
    shift: &K0Element,
    after: &PointedAbelianGroup,
) -> Check {
    let unit = before.unit_class.checked_add(shift).expect("same group");
    let expected = match PointedAbelianGroup::new(before.free_rank, before.invariant_factors.clone(), unit) {
        Ok(p) => p,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    match pointed_iso_exists(&expected, after) {
        Ok(PointedIsoVerdict::Yes(w)) => {
            let ok = w.validate(&expected, after);
            Check::new(name, ok, format!("{expected} vs {after}"))
        }
        Ok(PointedIsoVerdict::No(reason)) => Check::new(name, false, reason),
        Ok(PointedIsoVerdict::Undecided(reason)) => Check::skip(name, reason),
        Err(e) => Check::skip(name, e.to_string()),
    }
}

fn determinant_check(name: &str, before: &GraphInvariants, after: &GraphInvariants, negate: bool) -> Check {
    match (&before.determinant, &after.determinant) {
        (Some(a), Some(b)) => {
            let expected = if negate { -a } else { a.clone() };
            Check::new(name, *b == expected, format!("{a} -> {b}"))
        }
        _ => Check::skip(name, "graph has sinks"),
    }
}

fn group_check(name: &str, before: &GraphInvariants, after: &GraphInvariants) -> Check {
    Check::new(
        name,
        before.group.same_group(&after.group),
        format!("{} -> {}", before.group.render_group(), after.group.render_group()),
    )
}

/// Applies `m` and re-checks the effect it is known to have on invariants.
pub fn apply_move_with_report(g: &Graph, m: &Move) -> Result<MoveReport, MoveError> {
    let output = m.apply(g)?;
    let before = invariants(g);
    let after = invariants(&output);
    let mut checks = Vec::new();
    match m {
        Move::CuntzSplice { at } | Move::DoubleCuntzSplice { at } => {
            if matches!(m, Move::DoubleCuntzSplice { .. }) {
                checks.push(determinant_check("determinant preserved", &before, &after, false));
                checks.push(group_check("K0 group preserved", &before, &after));
            } else {
                checks.push(determinant_check("determinant negated", &before, &after, true));
                checks.push(group_check("K0 invariant factors preserved", &before, &after));
            }
            let u = k0_presentation(g).vertex_class(at).expect("vertex exists").neg();
            checks.push(shifted_unit_check(
                "unit class shifted by -[u]",
                &before.group,
                &u,
                &after.group,
            ));
        }
        Move::Cohn { complete_at } => {
            let regular = g.regular_vertices();
            let outside: Vec<usize> = regular
                .iter()
                .copied()
                .filter(|&v| !complete_at.iter().any(|id| id == g.vertex_id(v)))
                .collect();
            let vertices = g.vertex_count() + outside.len();
            let edges = g.edge_count() + g.edges().iter().filter(|e| outside.contains(&e.range)).count();
            checks.push(Check::new(
                "vertex count",
                output.vertex_count() == vertices,
                format!("{} (expected {vertices})", output.vertex_count()),
            ));
            checks.push(Check::new(
                "edge count",
                output.edge_count() == edges,
                format!("{} (expected {edges})", output.edge_count()),
            ));
        }
        Move::AddSource { at } => {
            checks.push(group_check("K0 group preserved", &before, &after));
            let u = k0_presentation(g).vertex_class(at).expect("vertex exists").clone();
            checks.push(shifted_unit_check(
                "unit class shifted by [u]",
                &before.group,
                &u,
                &after.group,
            ));
            checks.push(determinant_check("determinant preserved", &before, &after, false));
        }
    }
    Ok(MoveReport {
        applied: m.clone(),
        input: g.clone(),
        output,
        before,
        after,
        checks,
    })
}

//! Structural predicates: the SPI condition and return-path counting.
//!
//! For a finite graph the singular vertices are exactly the sinks. An SPI
//! graph has a cycle, and a sink reaches no infinite path, so SPI graphs are
//! sink-free; "every vertex connects to every infinite path" then amounts to
//! "every vertex reaches every cyclic strongly connected component".

use std::fmt;

use super::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpiFailure {
    /// The vertices of a cycle none of whose vertices emits a second edge.
    CycleWithoutExit(Vec<String>),
    /// `vertex` cannot reach any vertex of the cyclic component `component`.
    Unreachable {
        vertex: String,
        component: Vec<String>,
    },
    Sink(String),
    NoCycle,
}

impl fmt::Display for SpiFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpiFailure::CycleWithoutExit(vs) => write!(f, "cycle without exit through {{{}}}", vs.join(", ")),
            SpiFailure::Unreachable { vertex, component } => {
                write!(
                    f,
                    "{vertex} does not reach cyclic component {{{}}}",
                    component.join(", ")
                )
            }
            SpiFailure::Sink(v) => write!(f, "sink {v}"),
            SpiFailure::NoCycle => f.write_str("no cycle"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiReport {
    pub is_spi: bool,
    pub failures: Vec<SpiFailure>,
}

/// Cycles that have no exit: every vertex on them has out-degree one.
fn exit_free_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let successor: Vec<Option<usize>> = (0..n)
        .map(|v| {
            let mut out = g.out_edges(v);
            match (out.next(), out.next()) {
                (Some(e), None) => Some(g.range(e)),
                _ => None,
            }
        })
        .collect();
    let mut claimed = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if claimed[start] || successor[start].is_none() {
            continue;
        }
        let mut path = vec![start];
        let mut x = start;
        let closes = loop {
            match successor[x] {
                Some(y) if y == start => break true,
                Some(y) if path.len() <= n && !path.contains(&y) => {
                    path.push(y);
                    x = y;
                }
                _ => break false,
            }
        };
        if closes {
            for &v in &path {
                claimed[v] = true;
            }
            path.sort_unstable();
            cycles.push(path);
        }
    }
    cycles
}

pub fn is_spi(g: &Graph) -> SpiReport {
    let n = g.vertex_count();
    let ids = |vs: &[usize]| vs.iter().map(|&v| g.vertex_id(v).to_string()).collect::<Vec<_>>();
    let mut failures = Vec::new();

    for cycle in exit_free_cycles(g) {
        failures.push(SpiFailure::CycleWithoutExit(ids(&cycle)));
    }
    for v in g.sinks() {
        failures.push(SpiFailure::Sink(g.vertex_id(v).to_string()));
    }

    let reach: Vec<Vec<bool>> = (0..n).map(|v| g.reachable_from(v)).collect();
    let on_cycle: Vec<bool> = (0..n).map(|v| g.out_edges(v).any(|e| reach[g.range(e)][v])).collect();
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in (0..n).filter(|&v| on_cycle[v]) {
        match components.iter_mut().find(|c| reach[c[0]][v] && reach[v][c[0]]) {
            Some(c) => c.push(v),
            None => components.push(vec![v]),
        }
    }
    for v in 0..n {
        for c in &components {
            if !reach[v][c[0]] {
                failures.push(SpiFailure::Unreachable {
                    vertex: g.vertex_id(v).to_string(),
                    component: ids(c),
                });
            }
        }
    }
    if components.is_empty() {
        failures.push(SpiFailure::NoCycle);
    }
    SpiReport {
        is_spi: failures.is_empty(),
        failures,
    }
}

/// Counts first-return cycles at `u` (closed paths from `u` that meet `u`
/// only at their ends and repeat no intermediate vertex), stopping at `limit`.
/// Returns the count and the vertices of the first cycle found.
fn first_return_cycles(g: &Graph, u: usize, limit: usize) -> (usize, Vec<usize>) {
    struct Search<'a> {
        g: &'a Graph,
        u: usize,
        limit: usize,
        visited: Vec<bool>,
        path: Vec<usize>,
        count: usize,
        first: Option<Vec<usize>>,
    }
    impl Search<'_> {
        fn walk(&mut self, v: usize) {
            let edges: Vec<usize> = self.g.out_edges(v).collect();
            for e in edges {
                if self.count >= self.limit {
                    return;
                }
                let w = self.g.range(e);
                if w == self.u {
                    self.count += 1;
                    if self.first.is_none() {
                        self.first = Some(self.path.clone());
                    }
                } else if !self.visited[w] {
                    self.visited[w] = true;
                    self.path.push(w);
                    self.walk(w);
                    self.path.pop();
                    self.visited[w] = false;
                }
            }
        }
    }
    let mut search = Search {
        g,
        u,
        limit,
        visited: vec![false; g.vertex_count()],
        path: vec![u],
        count: 0,
        first: None,
    };
    search.visited[u] = true;
    search.walk(u);
    (search.count, search.first.unwrap_or_default())
}

/// `u` supports at least two return paths: it lies on two distinct
/// first-return cycles, or on one whose vertices include a vertex lying on a
/// cycle that avoids `u`. Return paths need not be edge-disjoint.
pub fn supports_two_return_paths(g: &Graph, u: usize) -> bool {
    let (count, cycle) = first_return_cycles(g, u, 2);
    match count {
        0 => false,
        1 => cycle.iter().filter(|&&w| w != u).any(|&w| on_cycle_avoiding(g, w, u)),
        _ => true,
    }
}

fn on_cycle_avoiding(g: &Graph, w: usize, avoid: usize) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    seen[avoid] = true;
    let mut stack: Vec<usize> = g.out_edges(w).map(|e| g.range(e)).collect();
    while let Some(x) = stack.pop() {
        if x == w {
            return true;
        }
        if seen[x] {
            continue;
        }
        seen[x] = true;
        stack.extend(g.out_edges(x).map(|e| g.range(e)));
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin::{builtin, rose};

    #[test]
    fn spi_examples() {
        assert!(is_spi(&builtin("E_star").unwrap()).is_spi);
        assert!(is_spi(&builtin("E_star_star").unwrap()).is_spi);
        assert!(is_spi(&builtin("R3").unwrap()).is_spi);

        let one = is_spi(&rose(1));
        assert!(!one.is_spi);
        assert_eq!(one.failures, vec![SpiFailure::CycleWithoutExit(vec!["u".into()])]);

        let f = is_spi(&builtin("F_star").unwrap());
        assert!(!f.is_spi);
        assert!(f.failures.contains(&SpiFailure::Sink("v1'".into())));

        let acyclic = is_spi(&Graph::from_parts(&["a", "b"], &[("e", "a", "b")]).unwrap());
        assert!(acyclic.failures.contains(&SpiFailure::NoCycle));
        assert!(!is_spi(&Graph::new()).is_spi);
    }

    #[test]
    fn unreachable_component_is_reported() {
        // Two roses joined one way: the second cannot reach the first.
        let g = Graph::from_parts(
            &["a", "b"],
            &[
                ("a1", "a", "a"),
                ("a2", "a", "a"),
                ("ab", "a", "b"),
                ("b1", "b", "b"),
                ("b2", "b", "b"),
            ],
        )
        .unwrap();
        let report = is_spi(&g);
        assert_eq!(
            report.failures,
            vec![SpiFailure::Unreachable {
                vertex: "b".into(),
                component: vec!["a".into()]
            }]
        );
    }

    #[test]
    fn return_paths() {
        let r3 = builtin("R3").unwrap();
        assert!(supports_two_return_paths(&r3, 0));
        assert!(!supports_two_return_paths(&rose(1), 0));
        let g = Graph::from_parts(&["u", "w"], &[("a", "u", "w"), ("b", "w", "u"), ("c", "w", "w")]).unwrap();
        assert!(supports_two_return_paths(&g, 0));
        let plain = Graph::from_parts(&["u", "w"], &[("a", "u", "w"), ("b", "w", "u")]).unwrap();
        assert!(!supports_two_return_paths(&plain, 0));
        let parallel = Graph::from_parts(&["u", "w"], &[("a", "u", "w"), ("a2", "u", "w"), ("b", "w", "u")]).unwrap();
        assert!(supports_two_return_paths(&parallel, 0));
        let e_star = builtin("E_star").unwrap();
        assert!(supports_two_return_paths(&e_star, 0));
        assert!(supports_two_return_paths(&e_star, 1));
    }
}

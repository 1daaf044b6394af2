use super::{Graph, GraphError};

/// Graphs above this many vertices are refused.
pub const ISOMORPHISM_VERTEX_LIMIT: usize = 12;

/// `vertex_map[v]` / `edge_map[e]` give the image in the second graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIsomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl GraphIsomorphism {
    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Checks that the maps are bijections preserving sources and ranges.
    pub fn is_valid(&self, g: &Graph, h: &Graph) -> bool {
        let bijective = |map: &[usize], size: usize| {
            let mut hit = vec![false; size];
            map.len() == size && map.iter().all(|&x| x < size && !std::mem::replace(&mut hit[x], true))
        };
        bijective(&self.vertex_map, h.vertex_count())
            && bijective(&self.edge_map, h.edge_count())
            && g.edges().iter().zip(&self.edge_map).all(|(e, &f)| {
                let f = h.edge(f);
                f.source == self.vertex_map[e.source] && f.range == self.vertex_map[e.range]
            })
    }
}

struct Matcher {
    g_counts: Vec<Vec<usize>>,
    h_counts: Vec<Vec<usize>>,
    g_profile: Vec<(usize, usize, usize)>,
    h_profile: Vec<(usize, usize, usize)>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher {
    fn extend(&mut self, v: usize) -> bool {
        let n = self.map.len();
        if v == n {
            return true;
        }
        for w in 0..n {
            if self.used[w] || self.g_profile[v] != self.h_profile[w] {
                continue;
            }
            let consistent = (0..v).all(|u| {
                let mu = self.map[u];
                self.g_counts[v][u] == self.h_counts[w][mu] && self.g_counts[u][v] == self.h_counts[mu][w]
            });
            if !consistent {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.extend(v + 1) {
                return true;
            }
            self.used[w] = false;
        }
        false
    }
}

fn profiles(g: &Graph, counts: &[Vec<usize>]) -> Vec<(usize, usize, usize)> {
    (0..g.vertex_count())
        .map(|v| (g.out_degree(v), g.in_degree(v), counts[v][v]))
        .collect()
}

/// Backtracking search over vertex bijections in declaration order, pruned by
/// (out-degree, in-degree, loop count). Parallel edges are matched in
/// declaration order once the vertex map is fixed.
pub fn graph_isomorphic(g: &Graph, h: &Graph) -> Result<Option<GraphIsomorphism>, GraphError> {
    for graph in [g, h] {
        if graph.vertex_count() > ISOMORPHISM_VERTEX_LIMIT {
            return Err(GraphError::SizeLimit {
                vertices: graph.vertex_count(),
                limit: ISOMORPHISM_VERTEX_LIMIT,
            });
        }
    }
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let n = g.vertex_count();
    let g_counts = g.edge_counts();
    let h_counts = h.edge_counts();
    let mut g_sorted = profiles(g, &g_counts);
    let mut h_sorted = profiles(h, &h_counts);
    let g_profile = g_sorted.clone();
    let h_profile = h_sorted.clone();
    g_sorted.sort_unstable();
    h_sorted.sort_unstable();
    if g_sorted != h_sorted {
        return Ok(None);
    }
    let mut matcher = Matcher {
        g_counts,
        h_counts,
        g_profile,
        h_profile,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if !matcher.extend(0) {
        return Ok(None);
    }
    let vertex_map = matcher.map;
    let mut h_buckets: Vec<Vec<std::collections::VecDeque<usize>>> = vec![vec![Default::default(); n]; n];
    for (i, e) in h.edges().iter().enumerate() {
        h_buckets[e.source][e.range].push_back(i);
    }
    let edge_map = g
        .edges()
        .iter()
        .map(|e| {
            h_buckets[vertex_map[e.source]][vertex_map[e.range]]
                .pop_front()
                .expect("edge counts agree")
        })
        .collect();
    Ok(Some(GraphIsomorphism { vertex_map, edge_map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin::builtin;

    #[test]
    fn self_isomorphism_is_identity() {
        for name in crate::graph::BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            let iso = graph_isomorphic(&g, &g).unwrap().unwrap();
            assert!(iso.is_identity(), "{name}");
            assert!(iso.is_valid(&g, &g));
        }
    }

    #[test]
    fn relabelled_graph() {
        let g = Graph::from_parts(
            &["a", "b", "c"],
            &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a"), ("w", "a", "a")],
        )
        .unwrap();
        let h = Graph::from_parts(
            &["p", "q", "r"],
            &[("1a", "r", "r"), ("k", "q", "r"), ("m", "r", "p"), ("n", "p", "q")],
        );
        assert!(h.is_err());
        let h = Graph::from_parts(
            &["p", "q", "r"],
            &[("t", "r", "r"), ("k", "q", "r"), ("m", "r", "p"), ("n", "p", "q")],
        )
        .unwrap();
        let iso = graph_isomorphic(&g, &h).unwrap().unwrap();
        assert_eq!(iso.vertex_map, vec![2, 0, 1]);
        assert!(iso.is_valid(&g, &h));
        let back = graph_isomorphic(&h, &g).unwrap().unwrap();
        assert!(back.is_valid(&h, &g));
    }

    #[test]
    fn size_limit() {
        let mut g = Graph::new();
        for i in 0..13 {
            g.add_vertex(&format!("v{i}")).unwrap();
        }
        assert!(matches!(graph_isomorphic(&g, &g), Err(GraphError::SizeLimit { .. })));
    }
}

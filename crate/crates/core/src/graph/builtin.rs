//! The fixed graphs `E*`, `E**`, their Cohn graphs `F*`, `F**`, and the rose
//! with three petals.

use super::{Graph, GraphError};

pub const BUILTIN_NAMES: [&str; 5] = ["E_star", "E_star_star", "F_star", "F_star_star", "R3"];

/// `E*`: two vertices, each with a loop, joined in both directions.
/// `L(E*)` is the Leavitt algebra `L_2`.
pub fn e_star() -> Graph {
    Graph::from_parts(
        &["v1", "v2"],
        &[
            ("e1", "v1", "v1"),
            ("e2", "v1", "v2"),
            ("e3", "v2", "v1"),
            ("e4", "v2", "v2"),
        ],
    )
    .expect("well-formed")
}

/// `E**`: the Cuntz splice of `E*` at `v1`, drawn as the chain
/// `w4 - w3 - w1 - w2` with a loop at every vertex.
pub fn e_star_star() -> Graph {
    Graph::from_parts(&["w1", "w2", "w3", "w4"], &E_STAR_STAR_EDGES).expect("well-formed")
}

const E_STAR_STAR_EDGES: [(&str, &str, &str); 10] = [
    ("f1", "w1", "w1"),
    ("f2", "w1", "w2"),
    ("f3", "w2", "w1"),
    ("f4", "w2", "w2"),
    ("f5", "w1", "w3"),
    ("f6", "w3", "w1"),
    ("f7", "w3", "w3"),
    ("f8", "w3", "w4"),
    ("f9", "w4", "w3"),
    ("f10", "w4", "w4"),
];

/// `F*`: `E*` with a sink `v1'` receiving a copy of every edge into `v1`.
pub fn f_star() -> Graph {
    Graph::from_parts(
        &["v1", "v2", "v1'"],
        &[
            ("e1", "v1", "v1"),
            ("e2", "v1", "v2"),
            ("e3", "v2", "v1"),
            ("e4", "v2", "v2"),
            ("e1'", "v1", "v1'"),
            ("e3'", "v2", "v1'"),
        ],
    )
    .expect("well-formed")
}

/// `F**`: `E**` with a sink `w1'` receiving a copy of every edge into `w1`.
pub fn f_star_star() -> Graph {
    let mut edges = E_STAR_STAR_EDGES.to_vec();
    edges.extend([("f1'", "w1", "w1'"), ("f3'", "w2", "w1'"), ("f6'", "w3", "w1'")]);
    Graph::from_parts(&["w1", "w2", "w3", "w4", "w1'"], &edges).expect("well-formed")
}

/// One vertex `u` with three loops `l1, l2, l3`.
pub fn rose3() -> Graph {
    Graph::from_parts(&["u"], &[("l1", "u", "u"), ("l2", "u", "u"), ("l3", "u", "u")]).expect("well-formed")
}

/// A rose with `petals` loops `l1..` at a single vertex `u`.
pub fn rose(petals: usize) -> Graph {
    let mut g = Graph::new();
    let u = g.add_vertex("u").expect("valid");
    for k in 1..=petals {
        g.add_edge(&format!("l{k}"), u, u).expect("valid");
    }
    g
}

pub fn builtin(name: &str) -> Result<Graph, GraphError> {
    match name {
        "E_star" => Ok(e_star()),
        "E_star_star" => Ok(e_star_star()),
        "F_star" => Ok(f_star()),
        "F_star_star" => Ok(f_star_star()),
        "R3" => Ok(rose3()),
        other => Err(GraphError::UnknownBuiltin(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let f = f_star();
        assert_eq!(f.vertices(), ["v1", "v2", "v1'"]);
        let ids: Vec<_> = f.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["e1", "e2", "e3", "e4", "e1'", "e3'"]);

        let ess = e_star_star();
        assert_eq!((ess.vertex_count(), ess.edge_count()), (4, 10));
        let ids: Vec<_> = ess.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10"]);

        let r = rose3();
        assert_eq!((r.vertex_count(), r.edge_count()), (1, 3));
        assert_eq!(rose(3), r);

        assert_eq!(f_star_star().vertex_count(), 5);
        assert_eq!(f_star_star().edge_count(), 13);
        assert!(matches!(builtin("L2"), Err(GraphError::UnknownBuiltin(_))));
    }
}

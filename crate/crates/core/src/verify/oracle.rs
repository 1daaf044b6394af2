//! Brute-force reference computations, deliberately independent of the
//! algorithms they check.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{CohnAlgebra, Monomial};
use crate::graph::Graph;
use crate::linalg::{IntMatrix, PointedAbelianGroup};
use crate::moves::cohn_graph_with_map;

fn reachability(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    // reach[v][w]: a path of length ≥ 1 from v to w.
    let mut reach = vec![vec![false; n]; n];
    for e in g.edges() {
        reach[e.source][e.range] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// Simple and purely infinite by the ideal-lattice characterization: the
/// only hereditary saturated vertex sets are trivial, every cycle has an
/// exit, and every vertex reaches a cycle. Enumerates all vertex subsets.
pub fn spi_by_hereditary_saturated(g: &Graph) -> bool {
    let n = g.vertex_count();
    assert!(n <= 16, "oracle is exponential in the vertex count");
    if n == 0 {
        return false;
    }
    let ranges: Vec<Vec<usize>> = (0..n).map(|v| g.out_edges(v).map(|e| g.range(e)).collect()).collect();
    let full = (1u32 << n) - 1;
    for h in 1..full {
        let inside = |v: usize| h >> v & 1 == 1;
        let hereditary = (0..n)
            .filter(|&v| inside(v))
            .all(|v| ranges[v].iter().all(|&w| inside(w)));
        let saturated = (0..n)
            .filter(|&v| !inside(v) && !ranges[v].is_empty())
            .all(|v| !ranges[v].iter().all(|&w| inside(w)));
        if hereditary && saturated {
            return false;
        }
    }
    // A cycle without exit is a cycle through vertices of out-degree one.
    let single: Vec<Option<usize>> = ranges
        .iter()
        .map(|r| if r.len() == 1 { Some(r[0]) } else { None })
        .collect();
    for start in 0..n {
        let mut v = start;
        for _ in 0..n {
            match single[v] {
                Some(w) => v = w,
                None => break,
            }
            if v == start {
                return false;
            }
        }
    }
    let reach = reachability(g);
    let on_cycle: Vec<bool> = (0..n).map(|v| reach[v][v]).collect();
    (0..n).all(|v| on_cycle[v] || (0..n).any(|w| reach[v][w] && on_cycle[w]))
}

fn minor(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let sub = IntMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])].clone());
    sub.determinant().expect("square")
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Nonzero invariant factors from determinantal divisors: `d_k` is the gcd
/// of all `k × k` minors and `s_k = d_k / d_{k-1}`.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let mut factors = Vec::new();
    let mut previous = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let mut d = BigInt::zero();
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                d = d.gcd(&minor(m, &rows, &cols));
            }
        }
        if d.is_zero() {
            break;
        }
        factors.push(&d / &previous);
        previous = d;
    }
    factors
}

fn elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut all = vec![vec![]];
    for &d in orders {
        all = all
            .into_iter()
            .flat_map(|prefix| {
                (0..d).map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    all
}

/// Pointed isomorphism of finite groups by enumerating every homomorphism.
/// `None` when a group is infinite or has order above `limit`.
pub fn brute_force_pointed_iso(p: &PointedAbelianGroup, q: &PointedAbelianGroup, limit: u64) -> Option<bool> {
    if p.free_rank > 0 || q.free_rank > 0 {
        return None;
    }
    let orders =
        |g: &PointedAbelianGroup| -> Option<Vec<u64>> { g.invariant_factors.iter().map(ToPrimitive::to_u64).collect() };
    let (dp, dq) = (orders(p)?, orders(q)?);
    let (np, nq): (u64, u64) = (dp.iter().product(), dq.iter().product());
    if np > limit || nq > limit {
        return None;
    }
    if np != nq {
        return Some(false);
    }
    let unit = |g: &PointedAbelianGroup| -> Vec<u64> {
        g.unit_class
            .coords
            .iter()
            .map(|c| c.to_u64().expect("reduced"))
            .collect()
    };
    let (up, uq) = (unit(p), unit(q));
    let targets = elements(&dq);
    let order_divides = |x: &[u64], d: u64| x.iter().zip(&dq).all(|(xi, qi)| (xi * d).is_multiple_of(*qi));
    // Candidate images of each generator: elements killed by its order.
    let candidates: Vec<Vec<&Vec<u64>>> = dp
        .iter()
        .map(|&d| targets.iter().filter(|x| order_divides(x, d)).collect())
        .collect();
    let apply = |images: &[&Vec<u64>], x: &[u64]| -> Vec<u64> {
        (0..dq.len())
            .map(|i| images.iter().zip(x).map(|(img, c)| img[i] * c).sum::<u64>() % dq[i])
            .collect()
    };
    let sources = elements(&dp);
    let mut choice = vec![0usize; dp.len()];
    loop {
        let images: Vec<&Vec<u64>> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if apply(&images, &up) == uq {
            let mut seen = std::collections::HashSet::new();
            if sources.iter().all(|x| seen.insert(apply(&images, x))) {
                return Some(true);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Some(false);
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// All normal monomials of degree at most `max_degree`.
pub fn normal_monomials(ctx: &CohnAlgebra, max_degree: usize) -> Vec<Monomial> {
    let g = ctx.graph();
    // paths[k]: all paths of length k, as edge lists (k ≥ 1).
    let mut paths: Vec<Vec<Vec<usize>>> = vec![vec![], (0..g.edge_count()).map(|e| vec![e]).collect()];
    for k in 2..=max_degree {
        let next = paths[k - 1]
            .iter()
            .flat_map(|p| {
                let end = g.range(*p.last().expect("non-empty"));
                g.out_edges(end).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
        paths.push(next);
    }
    let mut out: Vec<Monomial> = (0..g.vertex_count()).map(Monomial::vertex).collect();
    for total in 1..=max_degree {
        for a in 0..=total {
            let b = total - a;
            let alphas: Vec<Vec<usize>> = if a == 0 { vec![vec![]] } else { paths[a].clone() };
            let betas: Vec<Vec<usize>> = if b == 0 { vec![vec![]] } else { paths[b].clone() };
            for alpha in &alphas {
                for beta in &betas {
                    let end = |p: &Vec<usize>| p.last().map(|&e| g.range(e));
                    let vertex = match (end(alpha), end(beta)) {
                        (Some(x), Some(y)) if x == y => x,
                        (Some(x), None) | (None, Some(x)) => x,
                        _ => continue,
                    };
                    let m = Monomial {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        vertex,
                    };
                    if ctx.is_normal(&m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Paths of the Cohn graph ending at a sink, as (start vertex, edges).
type SinkPath = (usize, Vec<usize>);

/// Action of `C(E, V)` on paths of `E(V)` ending at a sink, through
/// `v ↦ v + v'` and `e ↦ e + e'`. This module is faithful whenever every
/// vertex reaches a sink of `E(V)` and `E(V)` satisfies condition (L).
struct PathModule {
    cohn: Graph,
    vertex_copy: Vec<Option<usize>>,
    edge_copy: Vec<Option<usize>>,
}

impl PathModule {
    fn start(&self, p: &SinkPath) -> usize {
        p.0
    }

    fn vertex(&self, v: usize, p: &SinkPath) -> Option<SinkPath> {
        let s = self.start(p);
        (s == v || self.vertex_copy[v] == Some(s)).then(|| p.clone())
    }

    fn edge(&self, e: usize, p: &SinkPath) -> Option<SinkPath> {
        let s = self.start(p);
        [Some(e), self.edge_copy[e]]
            .into_iter()
            .flatten()
            .find(|&f| self.cohn.range(f) == s)
            .map(|f| {
                let mut edges = vec![f];
                edges.extend_from_slice(&p.1);
                (self.cohn.source(f), edges)
            })
    }

    fn ghost(&self, e: usize, p: &SinkPath) -> Option<SinkPath> {
        let first = *p.1.first()?;
        (first == e || self.edge_copy[e] == Some(first)).then(|| {
            let rest = p.1[1..].to_vec();
            let start = rest.first().map_or(self.cohn.range(first), |&f| self.cohn.source(f));
            (start, rest)
        })
    }

    fn monomial(&self, m: &Monomial, p: &SinkPath) -> Option<SinkPath> {
        if m.degree() == 0 {
            return self.vertex(m.vertex, p);
        }
        let mut q = p.clone();
        for &e in &m.beta {
            q = self.ghost(e, &q)?;
        }
        // After stripping β the path starts at r(β) or its copy.
        q = self.vertex(m.vertex, &q)?;
        for &e in m.alpha.iter().rev() {
            q = self.edge(e, &q)?;
        }
        Some(q)
    }

    fn sink_paths(&self, max_len: usize) -> Vec<SinkPath> {
        let g = &self.cohn;
        let mut layer: Vec<SinkPath> = g.sinks().into_iter().map(|s| (s, vec![])).collect();
        let mut all = layer.clone();
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|(s, edges)| {
                    g.edges()
                        .iter()
                        .enumerate()
                        .filter(move |(_, e)| e.range == *s)
                        .map(move |(f, e)| {
                            let mut next = vec![f];
                            next.extend_from_slice(edges);
                            (e.source, next)
                        })
                })
                .collect();
            all.extend(layer.iter().cloned());
        }
        all
    }
}

fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let (a, b) = (m[r][c].clone(), m[i][c].clone());
                for j in 0..cols {
                    let v = &m[i][j] * &a - &m[r][j] * &b;
                    m[i][j] = v;
                }
                let g = m[i].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                if !g.is_zero() && !g.is_one() {
                    for x in &mut m[i] {
                        *x /= &g;
                    }
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of the action of `monomials` on sink paths of length at most
/// `path_len` in the Cohn graph of `ctx`. The Cohn graph must have sinks.
pub fn monomial_rank(ctx: &Arc<CohnAlgebra>, monomials: &[Monomial], path_len: usize) -> usize {
    let g = ctx.graph();
    let complete: Vec<&str> = ctx.completion_set().into_iter().map(|v| g.vertex_id(v)).collect();
    let (cohn, copies) = cohn_graph_with_map(g, &complete).expect("completion set is regular");
    assert!(cohn.has_sinks(), "the path module is zero without sinks");
    let module = PathModule {
        cohn,
        vertex_copy: copies.vertex_copy,
        edge_copy: copies.edge_copy,
    };
    let inputs = module.sink_paths(path_len);
    let mut columns: HashMap<(usize, SinkPath), usize> = HashMap::new();
    let mut sparse: Vec<BTreeMap<usize, i64>> = Vec::new();
    for m in monomials {
        let mut row = BTreeMap::new();
        for (i, p) in inputs.iter().enumerate() {
            if let Some(q) = module.monomial(m, p) {
                let next = columns.len();
                let c = *columns.entry((i, q)).or_insert(next);
                *row.entry(c).or_insert(0) += 1;
            }
        }
        sparse.push(row);
    }
    let dense: Vec<Vec<BigInt>> = sparse
        .iter()
        .map(|row| {
            let mut v = vec![BigInt::zero(); columns.len()];
            for (&c, &x) in row {
                v[c] = BigInt::from(x);
            }
            v
        })
        .collect();
    rank(&dense)
}

/// Number of normal monomials of degree at most `max_degree` and the rank
/// of their action on sink paths. Equal numbers mean the monomials are
/// linearly independent.
pub fn normal_monomial_rank(ctx: &Arc<CohnAlgebra>, max_degree: usize, path_len: usize) -> (usize, usize) {
    let monomials = normal_monomials(ctx, max_degree);
    (monomials.len(), monomial_rank(ctx, &monomials, path_len))
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant_by_cofactors(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let sub = IntMatrix::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })].clone());
        let term = &m[(0, j)] * determinant_by_cofactors(&sub);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn determinants_agree(m: &IntMatrix) -> bool {
    m.determinant().expect("square") == determinant_by_cofactors(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin, builtin::rose};
    use crate::linalg::K0Element;

    #[test]
    fn spi_oracle_examples() {
        assert!(spi_by_hereditary_saturated(&builtin("E_star").unwrap()));
        assert!(spi_by_hereditary_saturated(&builtin("R3").unwrap()));
        assert!(!spi_by_hereditary_saturated(&builtin("F_star").unwrap()));
        assert!(!spi_by_hereditary_saturated(&rose(1)));
    }

    #[test]
    fn minors_oracle() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(invariant_factors_by_minors(&m), vec![BigInt::from(1), BigInt::from(6)]);
        let z = IntMatrix::zeros(2, 3);
        assert!(invariant_factors_by_minors(&z).is_empty());
    }

    #[test]
    fn brute_force_examples() {
        let z4 = |u: i64| PointedAbelianGroup::new(0, vec![BigInt::from(4)], K0Element::from_i64(&[u])).unwrap();
        assert_eq!(brute_force_pointed_iso(&z4(1), &z4(3), 100), Some(true));
        assert_eq!(brute_force_pointed_iso(&z4(1), &z4(2), 100), Some(false));
        assert_eq!(brute_force_pointed_iso(&z4(0), &z4(0), 2), None);
    }

    #[test]
    fn monomials_of_e_star_are_independent() {
        let c = CohnAlgebra::new(builtin("E_star").unwrap(), &["v2"]).unwrap();
        let (count, rank) = normal_monomial_rank(&c, 3, 5);
        assert_eq!(count, rank);
        assert!(count > 20);

        // e3 is the special edge at v2, so e3 e3* = v2 - e4 e4* is dependent.
        let mut with_special = normal_monomials(&c, 2);
        let e3 = c.graph().edge_index("e3").unwrap();
        with_special.push(Monomial {
            alpha: vec![e3],
            beta: vec![e3],
            vertex: c.graph().range(e3),
        });
        assert_eq!(monomial_rank(&c, &with_special, 5), with_special.len() - 1);
    }

    #[test]
    fn cofactor_determinant() {
        let m = IntMatrix::from_rows(&[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]]);
        assert_eq!(determinant_by_cofactors(&m), BigInt::from(-3));
        assert!(determinants_agree(&m));
    }
}

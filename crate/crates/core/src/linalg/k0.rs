use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{identity_minus_transpose, smith_normal_form, IntMatrix, LinalgError};
use crate::graph::Graph;

/// Coordinates in `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t`, free coordinates first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct K0Element {
    pub coords: Vec<BigInt>,
}

impl K0Element {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn zero(len: usize) -> Self {
        Self {
            coords: vec![BigInt::zero(); len],
        }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self {
            coords: coords.iter().map(|&c| c.into()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self, LinalgError> {
        if self.len() != other.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }
}

impl fmt::Display for K0Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finitely generated abelian group with a distinguished element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedAbelianGroup {
    pub free_rank: usize,
    /// Torsion orders, each at least 2, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    pub unit_class: K0Element,
}

impl PointedAbelianGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>, unit_class: K0Element) -> Result<Self, LinalgError> {
        let group = Self {
            free_rank,
            invariant_factors,
            unit_class,
        };
        for w in group.invariant_factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(LinalgError::Inconsistent(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        if group.invariant_factors.iter().any(|d| d < &BigInt::from(2)) {
            return Err(LinalgError::Inconsistent("invariant factors must be at least 2".into()));
        }
        let unit = group.reduce(&group.unit_class)?;
        Ok(Self {
            unit_class: unit,
            ..group
        })
    }

    pub fn dimension(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.dimension() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, if finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    pub fn zero(&self) -> K0Element {
        K0Element::zero(self.dimension())
    }

    /// Torsion coordinates reduced into `[0, d_i)`.
    pub fn reduce(&self, x: &K0Element) -> Result<K0Element, LinalgError> {
        if x.len() != self.dimension() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        let mut coords = x.coords.clone();
        for (c, d) in coords[self.free_rank..].iter_mut().zip(&self.invariant_factors) {
            *c = c.mod_floor(d);
        }
        Ok(K0Element { coords })
    }

    pub fn same_group(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }

    /// `Z^r (+) Z/d1 (+) ...` without the unit.
    pub fn render_group(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "Z^0".to_string()
        } else {
            parts.join(" (+) ")
        }
    }
}

impl fmt::Display for PointedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; unit={}", self.render_group(), self.unit_class)
    }
}

pub fn k0_element_equal(p: &PointedAbelianGroup, x: &K0Element, y: &K0Element) -> Result<bool, LinalgError> {
    Ok(p.reduce(x)? == p.reduce(y)?)
}

/// `K₀` of a graph: `Z^{E⁰}` modulo `[v] = Σ_{s(e)=v} [r(e)]` for each regular
/// vertex `v`, in canonical coordinates.
#[derive(Debug, Clone)]
pub struct K0Presentation {
    pub group: PointedAbelianGroup,
    pub vertices: Vec<String>,
    pub vertex_classes: Vec<K0Element>,
    /// One column per regular vertex.
    pub relations: IntMatrix,
    free_map: IntMatrix,
    torsion_map: IntMatrix,
}

impl K0Presentation {
    /// Class of `Σ x_v [v]`.
    pub fn class_of_vector(&self, x: &[BigInt]) -> Result<K0Element, LinalgError> {
        if x.len() != self.vertices.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.vertices.len(),
                found: x.len(),
            });
        }
        let mut coords = self.free_map.mul_vec(x);
        coords.extend(self.torsion_map.mul_vec(x));
        self.group.reduce(&K0Element { coords })
    }

    pub fn vertex_class(&self, id: &str) -> Option<&K0Element> {
        self.vertices
            .iter()
            .position(|v| v == id)
            .map(|i| &self.vertex_classes[i])
    }

    pub fn equal(&self, x: &K0Element, y: &K0Element) -> Result<bool, LinalgError> {
        k0_element_equal(&self.group, x, y)
    }
}

fn relation_matrix(g: &Graph) -> IntMatrix {
    let regular = g.regular_vertices();
    let mut r = IntMatrix::zeros(g.vertex_count(), regular.len());
    for (j, &v) in regular.iter().enumerate() {
        r[(v, j)] += 1;
        for e in g.out_edges(v) {
            r[(g.range(e), j)] -= 1;
        }
    }
    r
}

/// Row Hermite normal form with pivots taken from the last column backwards:
/// each pivot positive, entries in the pivot column of other rows reduced
/// into `[0, pivot)`. Unique for a given row lattice.
fn reversed_row_hermite(m: &IntMatrix) -> IntMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut pivot_row = 0;
    for c in (0..cols).rev() {
        if pivot_row == rows {
            break;
        }
        loop {
            let Some(best) = (pivot_row..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by_key(|&i| h[(i, c)].abs())
            else {
                break;
            };
            h.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if !h[(i, c)].is_zero() {
                    let q = h[(i, c)].div_floor(&h[(pivot_row, c)]);
                    h.add_row_multiple(i, pivot_row, &-q);
                    done &= h[(i, c)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, c)].is_zero() {
            continue;
        }
        if h[(pivot_row, c)].is_negative() {
            h.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = h[(i, c)].div_floor(&h[(pivot_row, c)]);
            h.add_row_multiple(i, pivot_row, &-q);
        }
        pivot_row += 1;
    }
    h
}

pub fn k0_presentation(g: &Graph) -> K0Presentation {
    let n = g.vertex_count();
    let relations = relation_matrix(g);
    let snf = smith_normal_form(&relations);
    let diagonal = snf.diagonal.diagonal();
    let rank = diagonal.iter().take_while(|d| !d.is_zero()).count();

    let torsion_rows: Vec<usize> = (0..rank).filter(|&i| diagonal[i] > BigInt::one()).collect();
    let invariant_factors: Vec<BigInt> = torsion_rows.iter().map(|&i| diagonal[i].clone()).collect();
    let torsion_map = IntMatrix::from_fn(torsion_rows.len(), n, |i, j| snf.left[(torsion_rows[i], j)].clone());
    let free_rows = IntMatrix::from_fn(n - rank, n, |i, j| snf.left[(rank + i, j)].clone());
    let free_map = reversed_row_hermite(&free_rows);

    let mut presentation = K0Presentation {
        group: PointedAbelianGroup {
            free_rank: n - rank,
            invariant_factors,
            unit_class: K0Element::zero(0),
        },
        vertices: g.vertices().to_vec(),
        vertex_classes: Vec::new(),
        relations,
        free_map,
        torsion_map,
    };
    let unit_vector = vec![BigInt::one(); n];
    presentation.group.unit_class = presentation.class_of_vector(&unit_vector).expect("length n");
    presentation.vertex_classes = (0..n)
        .map(|v| {
            let basis: Vec<BigInt> = (0..n)
                .map(|w| if v == w { BigInt::one() } else { BigInt::zero() })
                .collect();
            presentation.class_of_vector(&basis).expect("length n")
        })
        .collect();
    presentation
}

/// `det(I − Aᵗ)` by fraction-free elimination; `None` when the graph has a
/// sink (the presentation is then not square).
pub fn graph_determinant(g: &Graph) -> Option<BigInt> {
    if g.has_sinks() {
        return None;
    }
    let m = identity_minus_transpose(&g.adjacency_matrix());
    Some(m.determinant().expect("square"))
}

/// Shape of the relation matrix: vertices by regular vertices.
pub fn presentation_shape(g: &Graph) -> (usize, usize) {
    (g.vertex_count(), g.regular_vertices().len())
}

/// Whether every Smith diagonal entry of `I − Aᵗ` equals 1. Cross-checked
/// against the K₀ presentation.
pub fn has_trivial_k_theory(g: &Graph) -> Result<bool, LinalgError> {
    if let Some(v) = g.sinks().first() {
        return Err(LinalgError::SinkPresent(g.vertex_id(*v).to_string()));
    }
    let snf = smith_normal_form(&identity_minus_transpose(&g.adjacency_matrix()));
    let all_ones = snf.diagonal.diagonal().iter().all(One::is_one);
    if all_ones != k0_presentation(g).group.is_trivial() {
        return Err(LinalgError::Inconsistent(
            "Smith form of I - A^t disagrees with the K0 presentation".into(),
        ));
    }
    Ok(all_ones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;

    fn g(name: &str) -> Graph {
        builtin(name).unwrap()
    }

    #[test]
    fn e_star_and_e_star_star_are_trivial() {
        for name in ["E_star", "E_star_star"] {
            let p = k0_presentation(&g(name));
            assert!(p.group.is_trivial(), "{name}");
            assert_eq!(p.group.to_string(), "Z^0 ; unit=()");
        }
    }

    #[test]
    fn rose_three() {
        let p = k0_presentation(&g("R3"));
        assert_eq!(p.group.to_string(), "Z/2 ; unit=(1)");
        assert_eq!(p.vertex_class("u").unwrap(), &K0Element::from_i64(&[1]));
    }

    #[test]
    fn f_star_classes() {
        let p = k0_presentation(&g("F_star"));
        assert_eq!(p.group.to_string(), "Z ; unit=(-1)");
        let v1 = p.vertex_class("v1").unwrap();
        let v2 = p.vertex_class("v2").unwrap();
        let sink = p.vertex_class("v1'").unwrap();
        assert!(p.equal(v2, &sink.neg()).unwrap());
        assert!(p.equal(v1, &p.group.unit_class).unwrap());
        assert!(p.equal(v1, v1).unwrap());
    }

    #[test]
    fn f_star_star_classes() {
        let p = k0_presentation(&g("F_star_star"));
        assert_eq!(p.group.render_group(), "Z");
        let zero = p.group.zero();
        assert!(p.equal(p.vertex_class("w3").unwrap(), &zero).unwrap());
        assert!(p.equal(p.vertex_class("w4").unwrap(), &zero).unwrap());
        let sink = p.vertex_class("w1'").unwrap();
        assert!(p.equal(&p.group.unit_class, &sink.neg()).unwrap());
        assert_eq!(sink, &K0Element::from_i64(&[1]));
    }

    #[test]
    fn element_equality_checks_dimension() {
        let p = k0_presentation(&g("R3"));
        let bad = K0Element::from_i64(&[1, 0]);
        assert!(k0_element_equal(&p.group, &bad, &bad).is_err());
        assert!(k0_element_equal(&p.group, &K0Element::from_i64(&[3]), &K0Element::from_i64(&[1])).unwrap());
    }

    #[test]
    fn trivial_k_theory() {
        assert!(has_trivial_k_theory(&g("E_star")).unwrap());
        assert!(has_trivial_k_theory(&g("E_star_star")).unwrap());
        assert!(!has_trivial_k_theory(&g("R3")).unwrap());
        assert!(matches!(
            has_trivial_k_theory(&g("F_star")),
            Err(LinalgError::SinkPresent(_))
        ));
    }

    #[test]
    fn determinants() {
        assert_eq!(graph_determinant(&g("E_star")), Some(BigInt::from(-1)));
        assert_eq!(graph_determinant(&g("E_star_star")), Some(BigInt::from(1)));
        assert_eq!(graph_determinant(&g("R3")), Some(BigInt::from(-2)));
        assert_eq!(graph_determinant(&g("F_star")), None);
        assert_eq!(presentation_shape(&g("F_star")), (3, 2));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = IntMatrix::from_rows(&[vec![1, 1, -1], vec![0, 2, 3]]);
        let b = IntMatrix::from_rows(&[vec![1, 3, 2], vec![-1, -1, 1]]);
        assert_eq!(reversed_row_hermite(&a), reversed_row_hermite(&b));
    }

    #[test]
    fn edgeless_graph_is_free() {
        let p = k0_presentation(&Graph::from_parts(&["a", "b"], &[]).unwrap());
        assert_eq!(p.group.free_rank, 2);
        assert_eq!(p.group.to_string(), "Z^2 ; unit=(1,1)");
    }
}

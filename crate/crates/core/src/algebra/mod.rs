//! Exact arithmetic in relative Cohn path algebras `C(E, V)`.
//!
//! Elements are rational combinations of monomials `αβ*` with
//! `r(α) = r(β)`, excluding those where `α` and `β` end in the same special
//! edge of a vertex in `V`. The special edge of `v ∈ V` is its outgoing
//! edge with the least identifier; the relation `v = Σ ee*` is used to
//! rewrite `γγ*` for that edge only. With `V` all regular vertices this is
//! the Leavitt path algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::Graph;

mod expr;
mod family;
mod lemmas;
mod rewrite;

pub use expr::parse_expression;
pub use family::{
    check_relative_family, cohn_graph_images, FamilyFailure, FamilyReport, GeneratorImages, Homomorphism,
};
pub use lemmas::{
    assemble_conjugator, conjugation_pair_endomorphism, diagonal_k0_class, mvn_witnesses, verify_lemma44_k0,
    Conjugator, EquivalencePair, MvnWitnesses,
};
pub use rewrite::{Letter, Strategy};

/// Elements with more monomials than this are refused.
pub const MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("`{0}` names both a vertex and an edge")]
    AmbiguousIdentifier(String),
    #[error("`{0}` is not a regular vertex and cannot be in the completion set")]
    NotRegular(String),
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("element would exceed {limit} monomials")]
    TooLarge { limit: usize },
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("generator images fail the relations: {0}")]
    FamilyCheckFailed(String),
    #[error("element is not a combination of vertices and ee*-type monomials")]
    NotDiagonal,
}

/// `C(E, V)` for a fixed graph and completion set `V`.
#[derive(Debug)]
pub struct CohnAlgebra {
    graph: Graph,
    complete: Vec<bool>,
    special: Vec<Option<usize>>,
}

impl CohnAlgebra {
    pub fn new(graph: Graph, complete_at: &[&str]) -> Result<Arc<Self>, AlgebraError> {
        let mut complete = vec![false; graph.vertex_count()];
        for id in complete_at {
            let v = graph
                .vertex_index(id)
                .ok_or_else(|| AlgebraError::UnknownIdentifier(id.to_string()))?;
            if !graph.is_regular(v) {
                return Err(AlgebraError::NotRegular(id.to_string()));
            }
            complete[v] = true;
        }
        Ok(Arc::new(Self::build(graph, complete)))
    }

    /// The Leavitt path algebra: `V` = all regular vertices.
    pub fn leavitt(graph: Graph) -> Arc<Self> {
        let complete = (0..graph.vertex_count()).map(|v| graph.is_regular(v)).collect();
        Arc::new(Self::build(graph, complete))
    }

    fn build(graph: Graph, complete: Vec<bool>) -> Self {
        let special = (0..graph.vertex_count())
            .map(|v| {
                if !complete[v] {
                    return None;
                }
                graph
                    .out_edges(v)
                    .min_by(|&a, &b| graph.edge(a).id.cmp(&graph.edge(b).id))
            })
            .collect();
        Self {
            graph,
            complete,
            special,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn is_complete_at(&self, v: usize) -> bool {
        self.complete[v]
    }

    /// The completion set `V`, in vertex order.
    pub fn completion_set(&self) -> Vec<usize> {
        (0..self.graph.vertex_count()).filter(|&v| self.complete[v]).collect()
    }

    pub fn special_edge(&self, v: usize) -> Option<usize> {
        self.special[v]
    }

    fn is_special(&self, e: usize) -> bool {
        self.special[self.graph.source(e)] == Some(e)
    }

    pub fn vertex(self: &Arc<Self>, id: &str) -> Result<Element, AlgebraError> {
        let v = self
            .graph
            .vertex_index(id)
            .ok_or_else(|| AlgebraError::UnknownIdentifier(id.to_string()))?;
        Ok(self.vertex_at(v))
    }

    pub fn edge(self: &Arc<Self>, id: &str) -> Result<Element, AlgebraError> {
        let e = self
            .graph
            .edge_index(id)
            .ok_or_else(|| AlgebraError::UnknownIdentifier(id.to_string()))?;
        Ok(self.edge_at(e))
    }

    pub fn ghost(self: &Arc<Self>, id: &str) -> Result<Element, AlgebraError> {
        Ok(self.edge(id)?.star())
    }

    pub fn vertex_at(self: &Arc<Self>, v: usize) -> Element {
        Element::monomial(self, Monomial::vertex(v), BigRational::one())
    }

    pub fn edge_at(self: &Arc<Self>, e: usize) -> Element {
        let m = Monomial {
            alpha: vec![e],
            beta: vec![],
            vertex: self.graph.range(e),
        };
        Element::monomial(self, m, BigRational::one())
    }

    pub fn ghost_at(self: &Arc<Self>, e: usize) -> Element {
        self.edge_at(e).star()
    }

    /// `1 = Σ_v v`.
    pub fn unit(self: &Arc<Self>) -> Element {
        let terms = (0..self.graph.vertex_count())
            .map(|v| (Monomial::vertex(v), BigRational::one()))
            .collect();
        Element {
            ctx: Arc::clone(self),
            terms,
        }
    }

    pub fn zero(self: &Arc<Self>) -> Element {
        Element {
            ctx: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(self: &Arc<Self>, c: BigRational) -> Element {
        self.unit().scale(&c)
    }

    /// Whether `(α, β)` is a normal-form pair.
    pub fn is_normal(&self, m: &Monomial) -> bool {
        match (m.alpha.last(), m.beta.last()) {
            (Some(a), Some(b)) => a != b || !self.is_special(*a),
            _ => true,
        }
    }

    /// Product of two normal monomials as a normal-form combination.
    fn monomial_product(&self, x: &Monomial, y: &Monomial, out: &mut Vec<(BigRational, Monomial)>, c: BigRational) {
        let g = &self.graph;
        let start = |path: &[usize], base: usize| path.first().map_or(base, |&e| g.source(e));
        if start(&x.beta, x.vertex) != start(&y.alpha, y.vertex) {
            return;
        }
        let product = if y.alpha.len() >= x.beta.len() {
            if y.alpha[..x.beta.len()] != x.beta[..] {
                return;
            }
            let mut alpha = x.alpha.clone();
            alpha.extend_from_slice(&y.alpha[x.beta.len()..]);
            Monomial {
                alpha,
                beta: y.beta.clone(),
                vertex: y.vertex,
            }
        } else {
            if x.beta[..y.alpha.len()] != y.alpha[..] {
                return;
            }
            let mut beta = y.beta.clone();
            beta.extend_from_slice(&x.beta[y.alpha.len()..]);
            Monomial {
                alpha: x.alpha.clone(),
                beta,
                vertex: x.vertex,
            }
        };
        self.reduce_into(product, c, out);
    }

    /// Rewrites `α'γ (β'γ)*` with `γ` special into `α'β'* − Σ_{e≠γ} α'e (β'e)*`
    /// until normal.
    fn reduce_into(&self, m: Monomial, c: BigRational, out: &mut Vec<(BigRational, Monomial)>) {
        if self.is_normal(&m) {
            out.push((c, m));
            return;
        }
        let mut alpha = m.alpha;
        let mut beta = m.beta;
        let gamma = alpha.pop().expect("non-normal monomials have edges");
        beta.pop();
        let v = self.graph.source(gamma);
        for e in self.graph.out_edges(v).filter(|&e| e != gamma) {
            let mut a = alpha.clone();
            a.push(e);
            let mut b = beta.clone();
            b.push(e);
            out.push((
                -c.clone(),
                Monomial {
                    alpha: a,
                    beta: b,
                    vertex: self.graph.range(e),
                },
            ));
        }
        self.reduce_into(Monomial { alpha, beta, vertex: v }, c, out);
    }

    pub fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other)
    }
}

/// `αβ*` with `r(α) = r(β) = vertex` (the vertex itself when both are empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub vertex: usize,
}

impl Monomial {
    pub fn vertex(v: usize) -> Self {
        Self {
            alpha: vec![],
            beta: vec![],
            vertex: v,
        }
    }

    pub fn degree(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    pub fn star(&self) -> Self {
        Self {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            vertex: self.vertex,
        }
    }

    /// `α₁ … αₘ βₙ* … β₁*`, or the vertex alone.
    pub fn to_word(&self) -> Vec<Letter> {
        if self.degree() == 0 {
            return vec![Letter::Vertex(self.vertex)];
        }
        let mut word: Vec<Letter> = self.alpha.iter().map(|&e| Letter::Edge(e)).collect();
        word.extend(self.beta.iter().rev().map(|&e| Letter::Ghost(e)));
        word
    }

    pub fn render(&self, g: &Graph) -> String {
        if self.degree() == 0 {
            return g.vertex_id(self.vertex).to_string();
        }
        let mut parts: Vec<String> = self.alpha.iter().map(|&e| g.edge(e).id.clone()).collect();
        parts.extend(self.beta.iter().rev().map(|&e| format!("{}*", g.edge(e).id)));
        parts.join(" ")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
            .then_with(|| self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A normal-form element of a [`CohnAlgebra`]. No zero coefficients are stored.
#[derive(Clone)]
pub struct Element {
    ctx: Arc<CohnAlgebra>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Element {
    fn monomial(ctx: &Arc<CohnAlgebra>, m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub(crate) fn from_terms(
        ctx: &Arc<CohnAlgebra>,
        items: impl IntoIterator<Item = (BigRational, Monomial)>,
    ) -> Result<Self, AlgebraError> {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (c, m) in items {
            debug_assert!(ctx.is_normal(&m));
            let entry = terms.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
            if terms.len() > MAX_TERMS {
                return Err(AlgebraError::TooLarge { limit: MAX_TERMS });
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Self {
            ctx: Arc::clone(ctx),
            terms,
        })
    }

    pub fn context(&self) -> &Arc<CohnAlgebra> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == self.ctx.unit()
    }

    fn check(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check(other)?;
        let items = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|(m, c)| (c.clone(), m.clone()));
        Element::from_terms(&self.ctx, items)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Element {
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect()
        };
        Element {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    pub fn neg(&self) -> Element {
        self.scale(&-BigRational::one())
    }

    pub fn mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check(other)?;
        let mut out = Vec::new();
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                out.clear();
                self.ctx.monomial_product(x, y, &mut out, cx * cy);
                for (c, m) in out.drain(..) {
                    *acc.entry(m).or_insert_with(BigRational::zero) += c;
                }
                if acc.len() > MAX_TERMS {
                    return Err(AlgebraError::TooLarge { limit: MAX_TERMS });
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Element {
            ctx: Arc::clone(&self.ctx),
            terms: acc,
        })
    }

    /// The involution fixing vertices and exchanging `e` and `e*`.
    pub fn star(&self) -> Element {
        Element {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(m, c)| (m.star(), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<Element, AlgebraError> {
        let mut acc = self.ctx.unit();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Product of several elements, left to right.
    pub fn product(factors: &[&Element]) -> Result<Element, AlgebraError> {
        let (first, rest) = factors.split_first().expect("at least one factor");
        rest.iter().try_fold((*first).clone(), |acc, f| acc.mul(f))
    }

    /// Raw words with coefficients, one per monomial.
    pub fn to_words(&self) -> Vec<(BigRational, Vec<Letter>)> {
        self.terms.iter().map(|(m, c)| (c.clone(), m.to_word())).collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

fn render_coefficient(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let g = self.ctx.graph();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            if !magnitude.is_one() {
                write!(f, "{} ", render_coefficient(&magnitude))?;
            }
            f.write_str(&m.render(g))?;
        }
        Ok(())
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl ops::$trait<&Element> for &Element {
            type Output = Element;

            /// Panics on a context mismatch or size overflow; use the
            /// `Result`-returning method to handle those.
            fn $method(self, rhs: &Element) -> Element {
                Element::$inner(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

panicking_op!(Add, add, add);
panicking_op!(Sub, sub, sub);
panicking_op!(Mul, mul, mul);

impl ops::Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        Element::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;

    fn e_star() -> Arc<CohnAlgebra> {
        CohnAlgebra::leavitt(builtin("E_star").unwrap())
    }

    fn relative() -> Arc<CohnAlgebra> {
        CohnAlgebra::new(builtin("E_star").unwrap(), &["v2"]).unwrap()
    }

    #[test]
    fn generators() {
        let a = e_star();
        assert_eq!(a.unit().to_string(), "v1 + v2");
        let e1 = a.edge("e1").unwrap();
        let e2 = a.edge("e2").unwrap();
        assert_eq!((&a.ghost("e1").unwrap() * &e1).to_string(), "v1");
        assert!((&a.ghost("e1").unwrap() * &e2).is_zero());
        assert!(matches!(a.vertex("nope"), Err(AlgebraError::UnknownIdentifier(_))));
    }

    #[test]
    fn relative_rewrite_only_at_completion_set() {
        let c = relative();
        let e3 = c.edge("e3").unwrap();
        assert_eq!((&e3 * &e3.star()).to_string(), "v2 - e4 e4*");
        let e1 = c.edge("e1").unwrap();
        assert_eq!((&e1 * &e1.star()).to_string(), "e1 e1*");
    }

    #[test]
    fn sums_of_range_projections() {
        let a = e_star();
        let p = &a.edge("e1").unwrap() + &a.edge("e2").unwrap();
        assert!((&p.star() * &p).is_one());
        let e1 = a.edge("e1").unwrap();
        let e2 = a.edge("e2").unwrap();
        let sum = &(&e1 * &e1.star()) + &(&e2 * &e2.star());
        assert_eq!(sum, a.vertex("v1").unwrap());
    }

    #[test]
    fn context_mismatch() {
        let a = e_star();
        let b = e_star();
        assert_eq!(a.unit().mul(&b.unit()), Err(AlgebraError::ContextMismatch));
    }

    #[test]
    fn completion_set_must_be_regular() {
        let f = builtin("F_star").unwrap();
        assert!(matches!(
            CohnAlgebra::new(f, &["v1'"]),
            Err(AlgebraError::NotRegular(_))
        ));
    }

    #[test]
    fn printing() {
        let a = e_star();
        let e1 = a.edge("e1").unwrap();
        let x = &e1.scale(&BigRational::new(3.into(), 2.into())) - &a.vertex("v2").unwrap();
        assert_eq!(x.to_string(), "-v2 + 3/2 e1");
        assert_eq!(a.zero().to_string(), "0");
        let e4 = a.edge("e4").unwrap();
        let e2 = a.edge("e2").unwrap();
        let m = &(&e2 * &e4) * &(&e2 * &e4).star();
        assert_eq!(m.to_string(), "e2 e4 e4* e2*");
    }
}

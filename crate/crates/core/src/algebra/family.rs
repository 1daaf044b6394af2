//! Images of the canonical generators of `C(E, V)` in another algebra, and
//! the check that they satisfy the defining relations.

use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, CohnAlgebra, Element};
use crate::moves::cohn_graph_with_map;

/// Images of `v`, `e` and `e*` for every vertex and edge of the source.
#[derive(Debug, Clone)]
pub struct GeneratorImages {
    pub source: Arc<CohnAlgebra>,
    pub target: Arc<CohnAlgebra>,
    pub vertices: Vec<Element>,
    pub edges: Vec<Element>,
    pub ghosts: Vec<Element>,
}

impl GeneratorImages {
    pub fn new(
        source: &Arc<CohnAlgebra>,
        target: &Arc<CohnAlgebra>,
        vertices: Vec<Element>,
        edges: Vec<Element>,
        ghosts: Vec<Element>,
    ) -> Result<Self, AlgebraError> {
        let g = source.graph();
        if vertices.len() != g.vertex_count() || edges.len() != g.edge_count() || ghosts.len() != g.edge_count() {
            return Err(AlgebraError::Precondition(
                "every generator needs exactly one image".into(),
            ));
        }
        if vertices
            .iter()
            .chain(&edges)
            .chain(&ghosts)
            .any(|x| !x.context().same(target))
        {
            return Err(AlgebraError::ContextMismatch);
        }
        Ok(Self {
            source: Arc::clone(source),
            target: Arc::clone(target),
            vertices,
            edges,
            ghosts,
        })
    }

    pub fn identity(ctx: &Arc<CohnAlgebra>) -> Self {
        let g = ctx.graph();
        Self {
            source: Arc::clone(ctx),
            target: Arc::clone(ctx),
            vertices: (0..g.vertex_count()).map(|v| ctx.vertex_at(v)).collect(),
            edges: (0..g.edge_count()).map(|e| ctx.edge_at(e)).collect(),
            ghosts: (0..g.edge_count()).map(|e| ctx.ghost_at(e)).collect(),
        }
    }

    /// Images under `x ↦ f(x)` of the identity images.
    pub fn from_fn(
        source: &Arc<CohnAlgebra>,
        target: &Arc<CohnAlgebra>,
        mut f: impl FnMut(&Element) -> Result<Element, AlgebraError>,
    ) -> Result<Self, AlgebraError> {
        let id = Self::identity(source);
        let map = |xs: &[Element], f: &mut dyn FnMut(&Element) -> Result<Element, AlgebraError>| {
            xs.iter().map(f).collect::<Result<Vec<_>, _>>()
        };
        let vertices = map(&id.vertices, &mut f)?;
        let edges = map(&id.edges, &mut f)?;
        let ghosts = map(&id.ghosts, &mut f)?;
        Self::new(source, target, vertices, edges, ghosts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFailure {
    /// Which relation: 1 to 5.
    pub relation: u8,
    pub instance: String,
    pub found: String,
}

impl fmt::Display for FamilyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "relation {} fails at {}: got {}",
            self.relation, self.instance, self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyReport {
    pub checked: usize,
    pub failures: Vec<FamilyFailure>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, relation: u8, instance: impl FnOnce() -> String, lhs: &Element, rhs: &Element) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(FamilyFailure {
                relation,
                instance: instance(),
                found: format!("{lhs} vs {rhs}"),
            });
        }
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{} relation instances hold", self.checked)
        } else {
            let parts: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
            write!(
                f,
                "{} of {} instances fail: {}",
                self.failures.len(),
                self.checked,
                parts.join("; ")
            )
        }
    }
}

/// Checks relations (1)-(4) for all generators and the summation relation
/// (5) for the source's completion set, symbolically in the target.
pub fn check_relative_family(images: &GeneratorImages) -> Result<FamilyReport, AlgebraError> {
    let g = images.source.graph();
    let zero = images.target.zero();
    let p = &images.vertices;
    let s = &images.edges;
    let t = &images.ghosts;
    let mut report = FamilyReport::default();

    for v in 0..g.vertex_count() {
        for w in 0..g.vertex_count() {
            let expected = if v == w { &p[v] } else { &zero };
            report.expect(
                1,
                || format!("{} {}", g.vertex_id(v), g.vertex_id(w)),
                &p[v].mul(&p[w])?,
                expected,
            );
        }
    }
    for e in 0..g.edge_count() {
        let id = &g.edge(e).id;
        let (src, rng) = (g.source(e), g.range(e));
        report.expect(2, || format!("s({id}) {id}"), &p[src].mul(&s[e])?, &s[e]);
        report.expect(2, || format!("{id} r({id})"), &s[e].mul(&p[rng])?, &s[e]);
        report.expect(3, || format!("r({id}) {id}*"), &p[rng].mul(&t[e])?, &t[e]);
        report.expect(3, || format!("{id}* s({id})"), &t[e].mul(&p[src])?, &t[e]);
    }
    for e in 0..g.edge_count() {
        for f in 0..g.edge_count() {
            let expected = if e == f { &p[g.range(e)] } else { &zero };
            report.expect(
                4,
                || format!("{}* {}", g.edge(e).id, g.edge(f).id),
                &t[e].mul(&s[f])?,
                expected,
            );
        }
    }
    for v in images.source.completion_set() {
        let mut sum = zero.clone();
        for e in g.out_edges(v) {
            sum = sum.add(&s[e].mul(&t[e])?)?;
        }
        report.expect(5, || format!("at {}", g.vertex_id(v)), &sum, &p[v]);
    }
    Ok(report)
}

/// The algebra map determined by generator images that passed
/// [`check_relative_family`]; unchecked images cannot be turned into one.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    images: GeneratorImages,
}

impl Homomorphism {
    pub fn new(images: GeneratorImages) -> Result<Self, AlgebraError> {
        let report = check_relative_family(&images)?;
        if !report.passed() {
            return Err(AlgebraError::FamilyCheckFailed(report.to_string()));
        }
        Ok(Self { images })
    }

    pub fn images(&self) -> &GeneratorImages {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Result<Element, AlgebraError> {
        if !x.context().same(&self.images.source) {
            return Err(AlgebraError::ContextMismatch);
        }
        let mut acc = self.images.target.zero();
        for (m, c) in x.terms() {
            let mut term = if m.degree() == 0 {
                self.images.vertices[m.vertex].clone()
            } else {
                let mut factors = m.alpha.iter().map(|&e| &self.images.edges[e]);
                let first = factors.next().cloned();
                let mut prod = match first {
                    Some(x) => factors.try_fold(x, |acc, f| acc.mul(f))?,
                    None => self.images.ghosts[*m.beta.last().expect("degree > 0")].clone(),
                };
                let skip = usize::from(m.alpha.is_empty());
                for &e in m.beta.iter().rev().skip(skip) {
                    prod = prod.mul(&self.images.ghosts[e])?;
                }
                prod
            };
            term = term.scale(c);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// The map `C(E, V) → L(E(V))`: `v ↦ v + v'`, `e ↦ e + e'` and
/// `e* ↦ e* + e'*` where the primed copies exist, identity otherwise.
pub fn cohn_graph_images(source: &Arc<CohnAlgebra>) -> Result<GeneratorImages, AlgebraError> {
    let g = source.graph();
    let complete: Vec<&str> = source.completion_set().into_iter().map(|v| g.vertex_id(v)).collect();
    let (cohn, copies) = cohn_graph_with_map(g, &complete).map_err(|e| AlgebraError::Precondition(e.to_string()))?;
    let target = CohnAlgebra::leavitt(cohn);
    let vertices = (0..g.vertex_count())
        .map(|v| match copies.vertex_copy[v] {
            Some(c) => target.vertex_at(v).add(&target.vertex_at(c)),
            None => Ok(target.vertex_at(v)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let edges = (0..g.edge_count())
        .map(|e| match copies.edge_copy[e] {
            Some(c) => target.edge_at(e).add(&target.edge_at(c)),
            None => Ok(target.edge_at(e)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ghosts = edges.iter().map(Element::star).collect();
    GeneratorImages::new(source, &target, vertices, edges, ghosts)
}

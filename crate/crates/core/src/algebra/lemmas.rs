//! Constructions on idempotents: Murray-von Neumann witnesses, conjugators
//! assembled from them, the endomorphism `x ↦ p x p* + q x q*`, and the K₀
//! bookkeeping for the two Cohn graphs `F*` and `F**`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{cohn_graph_images, parse_expression, AlgebraError, CohnAlgebra, Element, GeneratorImages, Homomorphism};
use crate::graph::builtin;
use crate::linalg::{k0_presentation, K0Element, K0Presentation};
use crate::report::Check;

fn precondition(holds: bool, message: impl FnOnce() -> String) -> Result<(), AlgebraError> {
    if holds {
        Ok(())
    } else {
        Err(AlgebraError::Precondition(message()))
    }
}

fn is_idempotent(e: &Element) -> Result<bool, AlgebraError> {
    Ok(e.mul(e)? == *e)
}

/// Images of the generators under `φ(x) = p x p* + q x q*`, after checking
/// `p*p = q*q = 1` and `p*q = q*p = 0`.
pub fn conjugation_pair_endomorphism(
    ctx: &Arc<CohnAlgebra>,
    p: &Element,
    q: &Element,
) -> Result<GeneratorImages, AlgebraError> {
    let one = ctx.unit();
    let (ps, qs) = (p.star(), q.star());
    for (name, product, expected) in [
        ("p* p", ps.mul(p)?, &one),
        ("q* q", qs.mul(q)?, &one),
        ("p* q", ps.mul(q)?, &ctx.zero()),
        ("q* p", qs.mul(p)?, &ctx.zero()),
    ] {
        precondition(product == *expected, || {
            format!("{name} = {product}, expected {expected}")
        })?;
    }
    GeneratorImages::from_fn(ctx, ctx, |x| {
        Element::product(&[p, x, &ps])?.add(&Element::product(&[q, x, &qs])?)
    })
}

#[derive(Debug, Clone)]
pub struct MvnWitnesses {
    pub x: Element,
    pub y: Element,
    pub checks: Vec<Check>,
}

/// Given idempotents `e`, `f` with `e = vw` and `f = wv`, returns
/// `x = evf`, `y = fwe` and checks their defining identities.
pub fn mvn_witnesses(e: &Element, f: &Element, v: &Element, w: &Element) -> Result<MvnWitnesses, AlgebraError> {
    precondition(is_idempotent(e)?, || format!("e = {e} is not idempotent"))?;
    precondition(is_idempotent(f)?, || format!("f = {f} is not idempotent"))?;
    let vw = v.mul(w)?;
    precondition(vw == *e, || format!("vw = {vw} differs from e = {e}"))?;
    let wv = w.mul(v)?;
    precondition(wv == *f, || format!("wv = {wv} differs from f = {f}"))?;

    let x = Element::product(&[e, v, f])?;
    let y = Element::product(&[f, w, e])?;
    let xy = x.mul(&y)?;
    let yx = y.mul(&x)?;
    let checks = vec![
        Check::new("xy = e", xy == *e, xy.to_string()),
        Check::new("yx = f", yx == *f, yx.to_string()),
        Check::new("x = ex", e.mul(&x)? == x, ""),
        Check::new("x = xf", x.mul(f)? == x, ""),
        Check::new("y = fy", f.mul(&y)? == y, ""),
        Check::new("y = ye", y.mul(e)? == y, ""),
        Check::new("xyx = x", xy.mul(&x)? == x, ""),
        Check::new("yxy = y", yx.mul(&y)? == y, ""),
    ];
    Ok(MvnWitnesses { x, y, checks })
}

/// One `(x, y, e, f)` item: `xy = e`, `yx = f` with `x`, `y` compatible.
pub type EquivalencePair = (Element, Element, Element, Element);

#[derive(Debug, Clone)]
pub struct Conjugator {
    pub a: Element,
    pub b: Element,
    pub checks: Vec<Check>,
}

/// For complete orthogonal systems `e_i ~ f_i`, `a = Σ x_i` is invertible
/// with inverse `b = Σ y_i` and `b e_k a = f_k`.
pub fn assemble_conjugator(ctx: &Arc<CohnAlgebra>, pairs: &[EquivalencePair]) -> Result<Conjugator, AlgebraError> {
    precondition(!pairs.is_empty(), || "no pairs given".into())?;
    for (i, (x, y, e, f)) in pairs.iter().enumerate() {
        let k = i + 1;
        precondition(is_idempotent(e)?, || format!("e{k} is not idempotent"))?;
        precondition(is_idempotent(f)?, || format!("f{k} is not idempotent"))?;
        precondition(x.mul(y)? == *e, || format!("x{k} y{k} differs from e{k}"))?;
        precondition(y.mul(x)? == *f, || format!("y{k} x{k} differs from f{k}"))?;
        precondition(e.mul(x)? == *x && x.mul(f)? == *x, || {
            format!("x{k} is not e{k} x{k} f{k}")
        })?;
        precondition(f.mul(y)? == *y && y.mul(e)? == *y, || {
            format!("y{k} is not f{k} y{k} e{k}")
        })?;
    }
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            if i == j {
                continue;
            }
            let (i1, j1) = (i + 1, j + 1);
            precondition(pairs[i].2.mul(&pairs[j].2)?.is_zero(), || {
                format!("e{i1} and e{j1} are not orthogonal")
            })?;
            precondition(pairs[i].3.mul(&pairs[j].3)?.is_zero(), || {
                format!("f{i1} and f{j1} are not orthogonal")
            })?;
        }
    }
    let sum = |pick: fn(&EquivalencePair) -> &Element| pairs.iter().try_fold(ctx.zero(), |acc, p| acc.add(pick(p)));
    precondition(sum(|p| &p.2)?.is_one(), || "the e_i do not sum to 1".into())?;
    precondition(sum(|p| &p.3)?.is_one(), || "the f_i do not sum to 1".into())?;

    let a = sum(|p| &p.0)?;
    let b = sum(|p| &p.1)?;
    let ab = a.mul(&b)?;
    let ba = b.mul(&a)?;
    let mut checks = vec![
        Check::new("ab = 1", ab.is_one(), ab.to_string()),
        Check::new("ba = 1", ba.is_one(), ba.to_string()),
    ];
    for (k, (_, _, e, f)) in pairs.iter().enumerate() {
        let conj = Element::product(&[&b, e, &a])?;
        checks.push(Check::new(
            format!("b e{0} a = f{0}", k + 1),
            conj == *f,
            conj.to_string(),
        ));
    }
    Ok(Conjugator { a, b, checks })
}

/// K₀ class of `Σ c αα*` (vertices included) as `Σ c [r(α)]`. The
/// presentation must come from the element's graph.
pub fn diagonal_k0_class(presentation: &K0Presentation, x: &Element) -> Result<K0Element, AlgebraError> {
    let n = x.context().graph().vertex_count();
    let mut counts = vec![BigInt::zero(); n];
    for (m, c) in x.terms() {
        if m.alpha != m.beta || !c.is_integer() {
            return Err(AlgebraError::NotDiagonal);
        }
        counts[m.vertex] += c.to_integer();
    }
    presentation
        .class_of_vector(&counts)
        .map_err(|e| AlgebraError::Precondition(e.to_string()))
}

struct Side {
    presentation: K0Presentation,
    images: Homomorphism,
    /// Coordinate of the sink class (±1): the identification with `Z`.
    orientation: BigInt,
}

impl Side {
    fn new(graph: &str, complete_at: &[&str], sink: &str) -> Result<Self, AlgebraError> {
        let source = CohnAlgebra::new(builtin(graph).expect("built-in"), complete_at)?;
        let images = Homomorphism::new(cohn_graph_images(&source)?)?;
        let presentation = k0_presentation(images.images().target.graph());
        let sink_class = presentation.vertex_class(sink).expect("sink exists");
        let orientation = sink_class.coords.first().cloned().unwrap_or_default();
        Ok(Self {
            presentation,
            images,
            orientation,
        })
    }

    fn class(&self, id: &str) -> K0Element {
        self.presentation.vertex_class(id).expect("vertex exists").clone()
    }

    fn sum(&self, ids: &[&str]) -> K0Element {
        ids.iter()
            .map(|id| self.class(id))
            .reduce(|a, b| a.checked_add(&b).expect("same group"))
            .expect("non-empty")
    }

    fn eq(&self, x: &K0Element, y: &K0Element) -> bool {
        self.presentation.equal(x, y).unwrap_or(false)
    }

    /// Integer under `K₀ ≅ Z` sending the sink class to 1.
    fn to_integer(&self, x: &K0Element) -> BigInt {
        x.coords.first().cloned().unwrap_or_default() * &self.orientation
    }

    /// Class of the image of `text` (an element of the relative algebra).
    fn image_class(&self, text: &str) -> Result<K0Element, AlgebraError> {
        let x = parse_expression(&self.images.images().source, text)?;
        diagonal_k0_class(&self.presentation, &self.images.apply(&x)?)
    }
}

/// The K₀ equations behind the equivalences `q_{v1} ~ q_{w1}`,
/// `q_{v1'} ~ q_{w1'}` and `q_{v2} ~ q_{w2} + q_{w3} + q_{w4}`, computed
/// in `K₀(L(F*))` and `K₀(L(F**))`.
pub fn verify_lemma44_k0() -> Result<Vec<Check>, AlgebraError> {
    let single = Side::new("E_star", &["v2"], "v1'")?;
    let double = Side::new("E_star_star", &["w2", "w3", "w4"], "w1'")?;
    let mut checks = Vec::new();

    let s = &single;
    let unit = s.presentation.group.unit_class.clone();
    checks.push(Check::new("F*: [v1] = [1]", s.eq(&s.class("v1"), &unit), ""));
    checks.push(Check::new("F*: [v2] = [1]", s.eq(&s.class("v2"), &unit), ""));
    checks.push(Check::new("F*: -[v1'] = [1]", s.eq(&s.class("v1'").neg(), &unit), ""));

    let d = &double;
    let unit = d.presentation.group.unit_class.clone();
    let zero = d.presentation.group.zero();
    checks.push(Check::new("F**: [w3] = 0", d.eq(&d.class("w3"), &zero), ""));
    checks.push(Check::new("F**: [w4] = 0", d.eq(&d.class("w4"), &zero), ""));
    checks.push(Check::new("F**: [w1] = [1]", d.eq(&d.class("w1"), &unit), ""));
    checks.push(Check::new("F**: [w2] = [1]", d.eq(&d.class("w2"), &unit), ""));
    checks.push(Check::new("F**: -[w1'] = [1]", d.eq(&d.class("w1'").neg(), &unit), ""));

    for (side, name) in [(s, "F*"), (d, "F**")] {
        let g = &side.presentation.group;
        let generated = g.free_rank == 1 && g.invariant_factors.is_empty() && side.orientation.abs_is_one();
        let unit_is_minus_sink = side.to_integer(&g.unit_class) == -BigInt::one();
        checks.push(Check::new(
            format!("{name}: K0 = Z generated by the sink, unit = -[sink]"),
            generated && unit_is_minus_sink,
            g.to_string(),
        ));
    }

    let pairs = [
        ("[v1] = [w1]", s.sum(&["v1"]), d.sum(&["w1"])),
        ("[v1'] = [w1']", s.sum(&["v1'"]), d.sum(&["w1'"])),
        ("[v2] = [w2] + [w3] + [w4]", s.sum(&["v2"]), d.sum(&["w2", "w3", "w4"])),
        (
            "[1] = [1]",
            s.presentation.group.unit_class.clone(),
            d.presentation.group.unit_class.clone(),
        ),
    ];
    for (name, x, y) in pairs {
        let (a, b) = (s.to_integer(&x), d.to_integer(&y));
        checks.push(Check::new(format!("via sink: {name}"), a == b, format!("{a} vs {b}")));
    }

    let idempotents = [
        ("e1 e1* + e2 e2*", "f1 f1* + f2 f2* + f5 f5*"),
        ("v1 - e1 e1* - e2 e2*", "w1 - f1 f1* - f2 f2* - f5 f5*"),
        ("v2", "w2 + w3 + w4"),
    ];
    for (left, right) in idempotents {
        let (x, y) = (s.image_class(left)?, d.image_class(right)?);
        let (a, b) = (s.to_integer(&x), d.to_integer(&y));
        checks.push(Check::new(
            format!("image classes: [{left}] = [{right}]"),
            a == b,
            format!("{a} vs {b}"),
        ));
    }
    Ok(checks)
}

trait AbsIsOne {
    fn abs_is_one(&self) -> bool;
}

impl AbsIsOne for BigInt {
    fn abs_is_one(&self) -> bool {
        self.is_one() || (-self).is_one()
    }
}

//! Classification by `(K₀, [1], det(I − Aᵗ))` for graphs whose Leavitt path
//! algebras are simple and purely infinite, and the splice chain that
//! relates an instance with opposite determinant signs to the open case.

use std::fmt;

use num_bigint::{BigInt, Sign};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{is_spi, supports_two_return_paths, Graph, SpiReport};
use crate::linalg::{
    graph_determinant, k0_presentation, pointed_iso_exists, presentation_shape, PointedAbelianGroup, PointedIsoVerdict,
    PointedIsoWitness,
};
use crate::moves::{cuntz_splice, double_cuntz_splice, MoveError};
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInvariants {
    pub group: PointedAbelianGroup,
    /// `None` when the graph has sinks.
    pub determinant: Option<BigInt>,
    /// Vertices by regular vertices.
    pub shape: (usize, usize),
    pub spi: SpiReport,
}

pub fn invariants(g: &Graph) -> GraphInvariants {
    GraphInvariants {
        group: k0_presentation(g).group,
        determinant: graph_determinant(g),
        shape: presentation_shape(g),
        spi: is_spi(g),
    }
}

impl GraphInvariants {
    pub fn determinant_text(&self) -> String {
        match &self.determinant {
            Some(d) => d.to_string(),
            None => format!("n/a ({}x{} presentation)", self.shape.0, self.shape.1),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k0": self.group.render_group(),
            "free_rank": self.group.free_rank,
            "invariant_factors": self.group.invariant_factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "unit": self.group.unit_class.to_string(),
            "determinant": self.determinant.as_ref().map(ToString::to_string),
            "presentation_shape": [self.shape.0, self.shape.1],
            "spi": self.spi.is_spi,
            "spi_failures": self.spi.failures.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// `Z^0 ; unit=() ; det=-1 ; SPI=yes`
impl fmt::Display for GraphInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ; det={} ; SPI={}",
            self.group,
            self.determinant_text(),
            if self.spi.is_spi { "yes" } else { "no" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictTag {
    Isomorphic,
    NotIsomorphicByInvariant,
    /// Pointed K₀ agree, determinant signs differ: the open case.
    AKPInstance,
    Undecided,
    NotApplicable,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationVerdict {
    pub tag: VerdictTag,
    pub justification: String,
    pub left: GraphInvariants,
    pub right: GraphInvariants,
    pub witness: Option<PointedIsoWitness>,
}

impl ClassificationVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.tag.to_string(),
            "justification": self.justification,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "witness": self.witness.as_ref().map(|w| json!({
                "forward": w.forward.to_string(),
                "inverse": w.inverse.to_string(),
            })),
        })
    }
}

fn spi_failure_text(side: &str, report: &SpiReport) -> String {
    let parts: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
    format!("{side} graph fails the SPI condition: {}", parts.join("; "))
}

pub fn compare(g: &Graph, h: &Graph) -> ClassificationVerdict {
    let left = invariants(g);
    let right = invariants(h);
    let verdict = |tag, justification: String, witness| ClassificationVerdict {
        tag,
        justification,
        left: left.clone(),
        right: right.clone(),
        witness,
    };
    if !left.spi.is_spi {
        return verdict(VerdictTag::NotApplicable, spi_failure_text("first", &left.spi), None);
    }
    if !right.spi.is_spi {
        return verdict(VerdictTag::NotApplicable, spi_failure_text("second", &right.spi), None);
    }
    let witness = match pointed_iso_exists(&left.group, &right.group) {
        Err(e) => return verdict(VerdictTag::Undecided, e.to_string(), None),
        Ok(PointedIsoVerdict::No(reason)) => {
            return verdict(
                VerdictTag::NotIsomorphicByInvariant,
                format!("pointed K0 differ: {reason}"),
                None,
            )
        }
        Ok(PointedIsoVerdict::Undecided(reason)) => return verdict(VerdictTag::Undecided, reason, None),
        Ok(PointedIsoVerdict::Yes(w)) => w,
    };
    if !witness.validate(&left.group, &right.group) {
        return verdict(
            VerdictTag::Undecided,
            "pointed isomorphism failed re-validation".into(),
            None,
        );
    }
    let (dl, dr) = (left.determinant.clone(), right.determinant.clone());
    match (dl, dr) {
        (Some(a), Some(b)) if a == b => verdict(
            VerdictTag::Isomorphic,
            format!("pointed K0 isomorphic and det(I - A^t) equal ({a}); the classification criterion applies"),
            Some(witness),
        ),
        (Some(a), Some(b)) if a == -b.clone() => verdict(
            VerdictTag::AKPInstance,
            format!(
                "pointed K0 isomorphic but det(I - A^t) = {a} vs {b}; whether the algebras are isomorphic is the \
                 open algebraic Kirchberg-Phillips question"
            ),
            Some(witness),
        ),
        (a, b) => verdict(
            VerdictTag::Undecided,
            format!("determinants {a:?} and {b:?} are neither equal nor opposite"),
            Some(witness),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Move(#[from] MoveError),
}

fn require(holds: bool, message: impl FnOnce() -> String) -> Result<(), ClassifyError> {
    if holds {
        Ok(())
    } else {
        Err(ClassifyError::Precondition(message()))
    }
}

#[derive(Debug, Clone)]
pub struct ReductionChain {
    pub double_splice: Graph,
    pub splice: Graph,
    pub checks: Vec<Check>,
}

impl ReductionChain {
    pub fn passed(&self) -> bool {
        crate::report::all_passed(&self.checks)
    }
}

fn same_group_check(name: &str, a: &GraphInvariants, b: &GraphInvariants) -> Check {
    Check::new(
        name,
        a.group.same_group(&b.group),
        format!("{} vs {}", a.group.render_group(), b.group.render_group()),
    )
}

fn same_determinant_check(name: &str, a: &GraphInvariants, b: &GraphInvariants) -> Check {
    Check::new(
        name,
        a.determinant.is_some() && a.determinant == b.determinant,
        format!("{} vs {}", a.determinant_text(), b.determinant_text()),
    )
}

/// For SPI `e`, `f` with isomorphic pointed K₀ and opposite determinant
/// signs, builds `e_{u,--}` and `e_{u,-}` and checks that each matches the
/// K₀ group and determinant of `e` and `f` respectively. These are the
/// invariant-level hypotheses for Morita equivalence; no ring isomorphism is
/// claimed.
pub fn reduction_chain(e: &Graph, f: &Graph, u: &str) -> Result<ReductionChain, ClassifyError> {
    let ie = invariants(e);
    let i_f = invariants(f);
    require(ie.spi.is_spi, || spi_failure_text("first", &ie.spi))?;
    require(i_f.spi.is_spi, || spi_failure_text("second", &i_f.spi))?;
    let uv = e
        .vertex_index(u)
        .ok_or_else(|| ClassifyError::Move(MoveError::UnknownVertex(u.to_string())))?;
    require(supports_two_return_paths(e, uv), || {
        format!("`{u}` does not support two return paths")
    })?;
    match pointed_iso_exists(&ie.group, &i_f.group) {
        Ok(PointedIsoVerdict::Yes(_)) => {}
        Ok(other) => {
            return Err(ClassifyError::Precondition(format!(
                "pointed K0 not isomorphic: {other}"
            )))
        }
        Err(err) => {
            return Err(ClassifyError::Precondition(format!(
                "pointed K0 comparison failed: {err}"
            )))
        }
    }
    let (de, df) = (
        ie.determinant.clone().unwrap_or_default(),
        i_f.determinant.clone().unwrap_or_default(),
    );
    require(
        de.sign() != Sign::NoSign && de.sign() != df.sign() && df.sign() != Sign::NoSign,
        || format!("determinants {de} and {df} do not have opposite signs"),
    )?;

    let double_splice = double_cuntz_splice(e, u)?;
    let splice = cuntz_splice(e, u)?;
    let idd = invariants(&double_splice);
    let is = invariants(&splice);
    let checks = vec![
        same_group_check("K0(E_u--) = K0(E)", &idd, &ie),
        same_determinant_check("det(E_u--) = det(E)", &idd, &ie),
        same_group_check("K0(E_u-) = K0(F)", &is, &i_f),
        same_determinant_check("det(E_u-) = det(F)", &is, &i_f),
    ];
    Ok(ReductionChain {
        double_splice,
        splice,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignInstance {
    pub left: Sign,
    pub right: Sign,
    /// Signs differ while pointed K₀ agree.
    pub open_question_instance: bool,
}

pub fn sign_symbol(s: Sign) -> char {
    match s {
        Sign::Minus => '-',
        Sign::NoSign => '0',
        Sign::Plus => '+',
    }
}

impl fmt::Display for SignInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signs ({}, {})", sign_symbol(self.left), sign_symbol(self.right))?;
        if self.open_question_instance {
            f.write_str(" ; open-question instance")?;
        }
        Ok(())
    }
}

pub fn sign_question_instance(g: &Graph, h: &Graph) -> Result<SignInstance, ClassifyError> {
    let (a, b) = (invariants(g), invariants(h));
    require(a.spi.is_spi, || spi_failure_text("first", &a.spi))?;
    require(b.spi.is_spi, || spi_failure_text("second", &b.spi))?;
    let sign = |i: &GraphInvariants| i.determinant.as_ref().map_or(Sign::NoSign, BigInt::sign);
    let (left, right) = (sign(&a), sign(&b));
    let pointed = matches!(pointed_iso_exists(&a.group, &b.group), Ok(PointedIsoVerdict::Yes(_)));
    Ok(SignInstance {
        left,
        right,
        open_question_instance: left != right && pointed,
    })
}

//! A self-contained suite of exact checks of the worked examples and the
//! structural properties of moves, the algebra and the linear algebra.
//!
//! The suite is split into named blocks that can be run individually.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::algebra::{
    assemble_conjugator, check_relative_family, cohn_graph_images, conjugation_pair_endomorphism, mvn_witnesses,
    parse_expression, verify_lemma44_k0, AlgebraError, CohnAlgebra, Element, Homomorphism, Strategy,
};
use crate::graph::{builtin, graph_isomorphic, is_spi, parse_graph, Graph};
use crate::linalg::{
    graph_determinant, has_trivial_k_theory, identity_minus_transpose, k0_presentation, pointed_iso_exists,
    smith_normal_form, PointedIsoVerdict,
};
use crate::moves::{add_source, cohn_graph, cuntz_splice, cuntz_splice_with_attach, double_cuntz_splice};
use crate::report::Check;

pub mod oracle;
pub mod random;

/// Block names in run order.
pub const BLOCKS: [&str; 11] = [
    "determinants",
    "k0",
    "lemma44",
    "graphs",
    "double-splice",
    "moves",
    "cohn-family",
    "endomorphism",
    "witnesses",
    "properties",
    "trivial-k",
];

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Run only the block with this name.
    pub filter: Option<String>,
    /// Negate every computed determinant; the suite must then fail.
    pub inject_sign_fault: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            filter: None,
            inject_sign_fault: false,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BlockResult {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl BlockResult {
    pub fn passed(&self) -> bool {
        crate::report::all_passed(&self.checks)
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown block `{0}` (known: {known})", known = BLOCKS.join(", "))]
    UnknownBlock(String),
}

struct Ctx {
    fault: bool,
    seed: u64,
}

impl Ctx {
    fn det(&self, g: &Graph) -> Option<BigInt> {
        graph_determinant(g).map(|d| if self.fault { -d } else { d })
    }

    fn rng(&self, block: &str) -> rand_chacha::ChaCha8Rng {
        let salt = block
            .bytes()
            .fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(u64::from(b)));
        random::rng(self.seed ^ salt)
    }
}

fn b(name: &str) -> Graph {
    builtin(name).expect("built-in graph")
}

/// Turns an algebra error into a failed check rather than aborting the suite.
fn guarded(name: &str, f: impl FnOnce() -> Result<Vec<Check>, AlgebraError>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::new(name, false, e.to_string())])
}

pub fn run_suite(options: &SuiteOptions) -> Result<Vec<BlockResult>, VerifyError> {
    if let Some(f) = &options.filter {
        if !BLOCKS.contains(&f.as_str()) {
            return Err(VerifyError::UnknownBlock(f.clone()));
        }
    }
    let ctx = Ctx {
        fault: options.inject_sign_fault,
        seed: options.seed,
    };
    Ok(BLOCKS
        .iter()
        .filter(|name| options.filter.as_deref().is_none_or(|f| f == **name))
        .map(|&name| BlockResult {
            name,
            checks: run_block(&ctx, name),
        })
        .collect())
}

fn run_block(ctx: &Ctx, name: &str) -> Vec<Check> {
    match name {
        "determinants" => determinants(ctx),
        "k0" => k0_block(),
        "lemma44" => guarded("lemma44", verify_lemma44_k0),
        "graphs" => graphs(),
        "double-splice" => double_splice(ctx),
        "moves" => moves(ctx),
        "cohn-family" => guarded("cohn-family", cohn_family),
        "endomorphism" => guarded("endomorphism", endomorphism),
        "witnesses" => guarded("witnesses", witnesses),
        "properties" => properties(ctx),
        "trivial-k" => trivial_k(ctx),
        _ => unreachable!("validated block name"),
    }
}

fn determinants(ctx: &Ctx) -> Vec<Check> {
    let r3 = b("R3");
    let cases = [
        ("det E*", b("E_star"), -1),
        ("det E**", b("E_star_star"), 1),
        ("det R3", r3.clone(), -2),
        (
            "det cuntz_splice(R3, u)",
            cuntz_splice(&r3, "u").expect("R3 splices at u"),
            2,
        ),
    ];
    cases
        .into_iter()
        .map(|(name, g, expected)| {
            let d = ctx.det(&g);
            Check::new(name, d == Some(BigInt::from(expected)), format!("{d:?}"))
        })
        .collect()
}

fn k0_block() -> Vec<Check> {
    let mut checks = Vec::new();
    for name in ["E_star", "E_star_star"] {
        let p = k0_presentation(&b(name)).group;
        checks.push(Check::new(
            format!("K0 {name} trivial with unit 0"),
            p.is_trivial() && p.unit_class.coords.is_empty(),
            p.to_string(),
        ));
    }
    let p = k0_presentation(&b("R3")).group;
    let expected =
        p.free_rank == 0 && p.invariant_factors == [BigInt::from(2)] && p.unit_class.coords == [BigInt::one()];
    checks.push(Check::new("K0 R3 = Z/2 with unit 1", expected, p.to_string()));
    checks
}

fn iso_check(name: &str, g: &Graph, h: &Graph, expected: bool) -> Check {
    match graph_isomorphic(g, h) {
        Ok(found) => {
            let valid = found.as_ref().is_none_or(|m| m.is_valid(g, h));
            Check::new(
                name,
                found.is_some() == expected && valid,
                if found.is_some() {
                    "isomorphic"
                } else {
                    "not isomorphic"
                },
            )
        }
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn graphs() -> Vec<Check> {
    let spliced = cuntz_splice(&b("E_star"), "v1").expect("E* splices at v1");
    let f1 = cohn_graph(&b("E_star"), &["v2"]).expect("v2 is regular");
    let f2 = cohn_graph(&b("E_star_star"), &["w2", "w3", "w4"]).expect("regular vertices");
    let f_star_spliced = cuntz_splice(&b("F_star"), "v1").expect("F* splices at v1");
    vec![
        iso_check(
            "cuntz_splice(E*, v1) isomorphic to E**",
            &spliced,
            &b("E_star_star"),
            true,
        ),
        Check::new("cohn_graph(E*, {v2}) = F*", f1 == b("F_star"), ""),
        Check::new("cohn_graph(E**, {w2,w3,w4}) = F**", f2 == b("F_star_star"), ""),
        iso_check(
            "F** not isomorphic to cuntz_splice(F*, v1)",
            &b("F_star_star"),
            &f_star_spliced,
            false,
        ),
    ]
}

const DOUBLE_SPLICE_OF_R3: &str = r#"{
  "vertices": ["u", "w1", "w2", "w3", "w4"],
  "edges": [
    ["l1", "u", "u"], ["l2", "u", "u"], ["l3", "u", "u"],
    ["f1", "w1", "w1"], ["f2", "w1", "w2"], ["f3", "w2", "w1"], ["f4", "w2", "w2"],
    ["f5", "w1", "w3"], ["f6", "w3", "w1"], ["f7", "w3", "w3"], ["f8", "w3", "w4"],
    ["f9", "w4", "w3"], ["f10", "w4", "w4"],
    ["d1", "u", "w1"], ["d2", "w1", "u"]
  ]
}"#;

fn double_splice(ctx: &Ctx) -> Vec<Check> {
    let r3 = b("R3");
    let d = double_cuntz_splice(&r3, "u").expect("R3 splices at u");
    let drawn = parse_graph(DOUBLE_SPLICE_OF_R3).expect("well-formed");
    let (once, v1) = cuntz_splice_with_attach(&r3, "u").expect("R3 splices at u");
    let twice = cuntz_splice(&once, &v1).expect("second splice at v1");
    let (dd, dr) = (ctx.det(&d), ctx.det(&r3));
    vec![
        Check::new("double_cuntz_splice(R3, u) equals the drawn graph", d == drawn, ""),
        iso_check("double splice isomorphic to the iterated splice", &d, &twice, true),
        Check::new(
            "double splice preserves det on R3",
            dd.is_some() && dd == dr,
            format!("{dr:?} -> {dd:?}"),
        ),
    ]
}

/// Pointed K₀ of `g` and `h` isomorphic, with a re-validated witness.
fn pointed_equal(g: &Graph, h: &Graph) -> Result<bool, String> {
    let (p, q) = (k0_presentation(g).group, k0_presentation(h).group);
    match pointed_iso_exists(&p, &q) {
        Ok(PointedIsoVerdict::Yes(w)) => Ok(w.validate(&p, &q)),
        Ok(PointedIsoVerdict::No(_)) => Ok(false),
        Ok(PointedIsoVerdict::Undecided(reason)) => Err(reason),
        Err(e) => Err(e.to_string()),
    }
}

fn moves(ctx: &Ctx) -> Vec<Check> {
    const SAMPLES: usize = 50;
    let mut rng = ctx.rng("moves");
    let mut failures: [Vec<String>; 5] = Default::default();
    for _ in 0..SAMPLES {
        let (g, u) = random::random_spliceable_spi(&mut rng, 6);
        let label = || format!("{} at {u}", crate::graph::render_graph(&g).replace('\n', ""));
        let (s, v1) = cuntz_splice_with_attach(&g, &u).expect("valid splice vertex");
        let d = double_cuntz_splice(&g, &u).expect("valid splice vertex");
        let (dg, ds, dd) = (ctx.det(&g), ctx.det(&s), ctx.det(&d));
        if dg.is_none() || ds != dg.as_ref().map(|x| -x) {
            failures[0].push(label());
        }
        let (pg, ps) = (k0_presentation(&g).group, k0_presentation(&s).group);
        if pg.free_rank != ps.free_rank || pg.invariant_factors != ps.invariant_factors {
            failures[1].push(label());
        }
        if dd != dg {
            failures[2].push(label());
        }
        let twice = cuntz_splice(&s, &v1).expect("v1 supports two return paths");
        if !matches!(graph_isomorphic(&d, &twice), Ok(Some(_))) {
            failures[3].push(label());
        }
        let restored = add_source(&s, &u).expect("u exists");
        if pointed_equal(&restored, &g) != Ok(true) {
            failures[4].push(label());
        }
    }
    let names = [
        "cuntz splice negates det",
        "cuntz splice preserves K0 invariant factors",
        "double splice preserves det",
        "double splice isomorphic to iterated splice",
        "adding a source at u after splicing restores pointed K0",
    ];
    names
        .iter()
        .zip(failures)
        .map(|(name, fails)| {
            let details = if fails.is_empty() {
                format!("{SAMPLES} random SPI graphs")
            } else {
                format!("{} of {SAMPLES} fail, first: {}", fails.len(), fails[0])
            };
            Check::new(format!("{name} (random)"), fails.is_empty(), details)
        })
        .collect()
}

fn cohn_family() -> Result<Vec<Check>, AlgebraError> {
    let mut checks = Vec::new();
    for (graph, complete, target) in [
        ("E_star", &["v2"][..], "F_star"),
        ("E_star_star", &["w2", "w3", "w4"][..], "F_star_star"),
    ] {
        let source = CohnAlgebra::new(b(graph), complete)?;
        let images = cohn_graph_images(&source)?;
        let report = check_relative_family(&images)?;
        let label = format!("{graph} at {{{}}} into L({target})", complete.join(","));
        checks.push(Check::new(
            format!("family relations for {label}"),
            report.passed() && images.target.graph() == &b(target),
            report.to_string(),
        ));
        let phi = Homomorphism::new(images)?;
        let one = phi.apply(&source.unit())?;
        checks.push(Check::new(
            format!("unit preserved for {label}"),
            one.is_one(),
            one.to_string(),
        ));
    }
    Ok(checks)
}

fn endomorphism() -> Result<Vec<Check>, AlgebraError> {
    let a = CohnAlgebra::leavitt(b("E_star"));
    let p = parse_expression(&a, "e1 + e2")?;
    let q = parse_expression(&a, "e3 + e4")?;
    let (ps, qs) = (p.star(), q.star());
    let products = [
        ("p* p = 1", ps.mul(&p)?, a.unit()),
        ("q* q = 1", qs.mul(&q)?, a.unit()),
        ("p* q = 0", ps.mul(&q)?, a.zero()),
        ("q* p = 0", qs.mul(&p)?, a.zero()),
    ];
    let mut checks: Vec<Check> = products
        .into_iter()
        .map(|(name, got, want)| Check::new(name, got == want, got.to_string()))
        .collect();
    let images = conjugation_pair_endomorphism(&a, &p, &q)?;
    let report = check_relative_family(&images)?;
    checks.push(Check::new(
        "phi passes the family check",
        report.passed(),
        report.to_string(),
    ));
    let phi = Homomorphism::new(images)?;
    let one = phi.apply(&a.unit())?;
    checks.push(Check::new("phi(1) = 1", one.is_one(), one.to_string()));
    let identity = parse_expression(&a, "(e1+e2)*(e1+e2)(e3+e4)*(e3+e4)")?;
    checks.push(Check::new(
        "(e1+e2)*(e1+e2)(e3+e4)*(e3+e4) = 1",
        identity.is_one(),
        identity.to_string(),
    ));
    Ok(checks)
}

fn named(prefix: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|c| Check {
            name: format!("{prefix}: {}", c.name),
            ..c
        })
        .collect()
}

fn witnesses() -> Result<Vec<Check>, AlgebraError> {
    let a = CohnAlgebra::leavitt(b("E_star"));
    let e = |s: &str| parse_expression(&a, s);
    let mut checks = Vec::new();
    let first = mvn_witnesses(&e("e1 e1* + e4 e4*")?, &a.unit(), &e("e1 + e4")?, &e("(e1 + e4)*")?)?;
    checks.extend(named("e1e1*+e4e4* ~ 1", first.checks));
    let u = e("e1 e3* + e2 e4*")?;
    let (v1, v2) = (a.vertex("v1")?, a.vertex("v2")?);
    let second = mvn_witnesses(&v1, &v2, &u, &u.star())?;
    checks.extend(named("v1 ~ v2", second.checks));
    let square = u.mul(&u)?;
    checks.push(Check::new("u^2 = 0", square.is_zero(), square.to_string()));
    let conj = assemble_conjugator(
        &a,
        &[
            (u.clone(), u.star(), v1.clone(), v2.clone()),
            (u.star(), u.clone(), v2, v1),
        ],
    )?;
    let expected = e("e1 e3* + e2 e4* + e3 e1* + e4 e2*")?;
    checks.push(Check::new(
        "a = b = u + u*",
        conj.a == expected && conj.b == expected,
        conj.a.to_string(),
    ));
    checks.extend(named("conjugator", conj.checks));
    Ok(checks)
}

fn summary(name: &str, samples: usize, failure: Option<String>) -> Check {
    match failure {
        None => Check::new(name, true, format!("{samples} samples")),
        Some(first) => Check::new(name, false, format!("first failure: {first}")),
    }
}

fn rewriting_properties(rng: &mut impl Rng, samples: usize) -> Result<Vec<Check>, AlgebraError> {
    let contexts = [
        CohnAlgebra::leavitt(b("E_star")),
        CohnAlgebra::new(b("E_star"), &["v2"])?,
        CohnAlgebra::new(b("F_star_star"), &["w1", "w3"])?,
        CohnAlgebra::new(b("R3"), &[])?,
    ];
    let mut idempotence = None;
    let mut confluence = None;
    let mut product = None;
    for i in 0..samples {
        let c = &contexts[i % contexts.len()];
        let word = random::random_word(rng, c.graph(), 6);
        let one = crate::algebra::rational(1);
        let left = c.normalize(&[(one.clone(), word.clone())], Strategy::Leftmost)?;
        let right = c.normalize(&[(one, word.clone())], Strategy::Rightmost)?;
        let again = c.normalize(&left.to_words(), Strategy::Rightmost)?;
        let text = || format!("{word:?}");
        if again != left && idempotence.is_none() {
            idempotence = Some(text());
        }
        if left != right && confluence.is_none() {
            confluence = Some(text());
        }
        let by_product = word
            .iter()
            .map(|l| c.normalize(&[(crate::algebra::rational(1), vec![*l])], Strategy::Leftmost))
            .try_fold(c.unit(), |acc, x| acc.mul(&x?))?;
        if by_product != left && product.is_none() {
            product = Some(text());
        }
    }
    Ok(vec![
        summary("rewriting is idempotent", samples, idempotence),
        summary("leftmost and rightmost strategies agree", samples, confluence),
        summary("rewriting agrees with the monomial product", samples, product),
    ])
}

fn ring_axioms(rng: &mut impl Rng, samples: usize) -> Result<Check, AlgebraError> {
    let contexts = [
        CohnAlgebra::leavitt(b("E_star")),
        CohnAlgebra::new(b("E_star"), &["v2"])?,
    ];
    let mut failure = None;
    for i in 0..samples {
        let c: &Arc<CohnAlgebra> = &contexts[i % contexts.len()];
        let x = random::random_element(rng, c, 4)?;
        let y = random::random_element(rng, c, 4)?;
        let z = random::random_element(rng, c, 4)?;
        let laws: [(&str, Element, Element); 6] = [
            ("associativity", x.mul(&y)?.mul(&z)?, x.mul(&y.mul(&z)?)?),
            ("left distributivity", x.mul(&y.add(&z)?)?, x.mul(&y)?.add(&x.mul(&z)?)?),
            (
                "right distributivity",
                x.add(&y)?.mul(&z)?,
                x.mul(&z)?.add(&y.mul(&z)?)?,
            ),
            ("unit", c.unit().mul(&x)?, x.mul(&c.unit())?),
            (
                "involution reverses products",
                x.mul(&y)?.star(),
                y.star().mul(&x.star())?,
            ),
            ("additive inverse", x.add(&x.neg())?, c.zero()),
        ];
        for (law, lhs, rhs) in laws {
            if lhs != rhs && failure.is_none() {
                failure = Some(format!("{law} for x = {x}, y = {y}, z = {z}"));
            }
        }
        if c.unit().mul(&x)? != x && failure.is_none() {
            failure = Some(format!("1 x = x for x = {x}"));
        }
    }
    Ok(summary("ring axioms on random elements", samples, failure))
}

fn matrix_properties(rng: &mut impl Rng, samples: usize) -> Check {
    let mut failure = None;
    for _ in 0..samples {
        let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let m = random::random_matrix(rng, rows, cols, 6);
        let snf = smith_normal_form(&m);
        let product = &(&snf.left * &m) * &snf.right;
        let factors = snf.factors();
        let ok = snf.left.is_unimodular()
            && snf.right.is_unimodular()
            && product == snf.diagonal
            && snf.diagonal.is_diagonal()
            && is_divisibility_chain(&factors)
            && factors == oracle::invariant_factors_by_minors(&m);
        if !ok && failure.is_none() {
            failure = Some(m.to_string());
        }
    }
    summary("Smith form unimodular, divisible and matching minors", samples, failure)
}

/// Each factor divides the next; zeros only at the end.
fn is_divisibility_chain(factors: &[BigInt]) -> bool {
    factors.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    })
}

fn spi_property(rng: &mut impl Rng, samples: usize) -> Check {
    let mut failure = None;
    let mut positives = 0;
    for _ in 0..samples {
        let n = rng.gen_range(1..=5);
        let g = random::random_graph(rng, n, 3, false);
        let fast = is_spi(&g).is_spi;
        positives += usize::from(fast);
        if fast != oracle::spi_by_hereditary_saturated(&g) && failure.is_none() {
            failure = Some(crate::graph::render_graph(&g));
        }
    }
    let mut check = summary("SPI test agrees with the hereditary-saturated oracle", samples, failure);
    if check.passed() {
        check.details = format!("{samples} samples, {positives} SPI");
    }
    check
}

fn properties(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng("properties");
    let mut checks = guarded("rewriting properties", || rewriting_properties(&mut rng, 500));
    checks.extend(guarded("ring axioms", || ring_axioms(&mut rng, 100).map(|c| vec![c])));
    match CohnAlgebra::new(b("E_star"), &["v2"]) {
        Ok(c) => {
            let (count, rank) = oracle::normal_monomial_rank(&c, 3, 5);
            checks.push(Check::new(
                "normal monomials of degree <= 3 in C(E*, {v2}) are independent",
                count == rank,
                format!("{count} monomials, rank {rank}"),
            ));
        }
        Err(e) => checks.push(Check::new("basis soundness", false, e.to_string())),
    }
    checks.push(matrix_properties(&mut rng, 200));
    checks.push(spi_property(&mut rng, 300));
    checks
}

fn trivial_k(ctx: &Ctx) -> Vec<Check> {
    let mut rng = ctx.rng("trivial-k");
    let mut corpus: Vec<Graph> = ["E_star", "E_star_star", "R3"].iter().map(|n| b(n)).collect();
    corpus.push(cuntz_splice(&b("R3"), "u").expect("R3 splices at u"));
    while corpus.len() < 60 {
        let n = rng.gen_range(1..=5);
        corpus.push(random::random_graph(&mut rng, n, 3, true));
    }
    let mut failure = None;
    let mut trivial = 0;
    for g in &corpus {
        let claimed = match has_trivial_k_theory(g) {
            Ok(t) => t,
            Err(e) => {
                failure.get_or_insert_with(|| e.to_string());
                continue;
            }
        };
        trivial += usize::from(claimed);
        let snf = smith_normal_form(&identity_minus_transpose(&g.adjacency_matrix()));
        let all_ones = snf.diagonal.diagonal().iter().all(One::is_one);
        let unit_det = ctx.det(g).is_some_and(|d| d == BigInt::one() || d == -BigInt::one());
        if (claimed != all_ones || claimed != unit_det) && failure.is_none() {
            failure = Some(crate::graph::render_graph(g));
        }
    }
    let mut check = summary(
        "trivial K-theory iff Smith diagonal all 1 iff det = +-1",
        corpus.len(),
        failure,
    );
    if check.passed() {
        check.details = format!("{} sink-free graphs, {trivial} with trivial K-theory", corpus.len());
    }
    vec![check]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        for block in run_suite(&SuiteOptions::default()).unwrap() {
            for c in &block.checks {
                assert!(c.passed(), "{}: {c}", block.name);
            }
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let options = SuiteOptions {
            filter: Some("determinants".into()),
            inject_sign_fault: true,
            ..SuiteOptions::default()
        };
        let blocks = run_suite(&options).unwrap();
        assert_eq!(blocks.len(), 1);
        assert!(!blocks[0].passed());
    }

    #[test]
    fn unknown_filter() {
        let options = SuiteOptions {
            filter: Some("nope".into()),
            ..SuiteOptions::default()
        };
        assert!(matches!(run_suite(&options), Err(VerifyError::UnknownBlock(_))));
    }
}

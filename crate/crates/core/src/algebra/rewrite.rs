//! Normalization of raw words over the generators `v`, `e`, `e*` by
//! rewriting adjacent pairs. This is independent of the monomial product in
//! the parent module and serves as a cross-check of it.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgebraError, CohnAlgebra, Element, Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Vertex(usize),
    Edge(usize),
    Ghost(usize),
}

/// Which redex to contract first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

enum Step {
    Kill,
    Replace(Vec<Letter>),
    /// `γγ* → v − Σ_{e≠γ} ee*`
    Expand {
        vertex: usize,
        gamma: usize,
    },
}

impl CohnAlgebra {
    fn redex(&self, a: Letter, b: Letter) -> Option<Step> {
        use Letter::*;
        let g = &self.graph;
        let keep_if = |ok: bool, letter: Letter| Some(if ok { Step::Replace(vec![letter]) } else { Step::Kill });
        match (a, b) {
            (Vertex(v), Vertex(w)) => keep_if(v == w, a),
            (Vertex(v), Edge(e)) => keep_if(g.source(e) == v, b),
            (Edge(e), Vertex(v)) => keep_if(g.range(e) == v, a),
            (Vertex(v), Ghost(e)) => keep_if(g.range(e) == v, b),
            (Ghost(e), Vertex(v)) => keep_if(g.source(e) == v, a),
            (Ghost(e), Edge(f)) => {
                if e == f {
                    Some(Step::Replace(vec![Vertex(g.range(e))]))
                } else {
                    Some(Step::Kill)
                }
            }
            (Edge(e), Edge(f)) => (g.range(e) != g.source(f)).then_some(Step::Kill),
            // e* f* = (fe)*
            (Ghost(e), Ghost(f)) => (g.range(f) != g.source(e)).then_some(Step::Kill),
            (Edge(e), Ghost(f)) => {
                if g.range(e) != g.range(f) {
                    Some(Step::Kill)
                } else if e == f && self.is_special(e) {
                    Some(Step::Expand {
                        vertex: g.source(e),
                        gamma: e,
                    })
                } else {
                    None
                }
            }
        }
    }

    fn find_redex(&self, word: &[Letter], strategy: Strategy) -> Option<(usize, Step)> {
        let n = word.len();
        let probe = |i: usize| self.redex(word[i], word[i + 1]).map(|s| (i, s));
        match strategy {
            Strategy::Leftmost => (0..n.saturating_sub(1)).find_map(probe),
            Strategy::Rightmost => (0..n.saturating_sub(1)).rev().find_map(probe),
        }
    }

    /// An irreducible word `e…e f*…f*` (or a lone vertex) as a monomial.
    fn irreducible_to_monomial(&self, word: &[Letter]) -> Monomial {
        if let [Letter::Vertex(v)] = word {
            return Monomial::vertex(*v);
        }
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for letter in word {
            match *letter {
                Letter::Edge(e) => alpha.push(e),
                Letter::Ghost(e) => beta.push(e),
                Letter::Vertex(_) => unreachable!("vertices are absorbed in words of length > 1"),
            }
        }
        beta.reverse();
        let vertex = match (alpha.last(), beta.last()) {
            (Some(&e), _) | (None, Some(&e)) => self.graph.range(e),
            (None, None) => unreachable!("empty words are handled by the caller"),
        };
        Monomial { alpha, beta, vertex }
    }

    /// Normalizes a linear combination of raw words. The empty word is `1`.
    /// Ill-composed words vanish.
    pub fn normalize(
        self: &Arc<Self>,
        words: &[(BigRational, Vec<Letter>)],
        strategy: Strategy,
    ) -> Result<Element, AlgebraError> {
        let mut work: Vec<(BigRational, Vec<Letter>)> = Vec::new();
        for (c, w) in words {
            if c.is_zero() {
                continue;
            }
            if w.is_empty() {
                for v in 0..self.graph.vertex_count() {
                    work.push((c.clone(), vec![Letter::Vertex(v)]));
                }
            } else {
                work.push((c.clone(), w.clone()));
            }
        }
        let mut done: Vec<(BigRational, Monomial)> = Vec::new();
        while let Some((c, word)) = work.pop() {
            match self.find_redex(&word, strategy) {
                None => done.push((c, self.irreducible_to_monomial(&word))),
                Some((_, Step::Kill)) => {}
                Some((i, Step::Replace(letters))) => {
                    let mut next = word[..i].to_vec();
                    next.extend(letters);
                    next.extend_from_slice(&word[i + 2..]);
                    work.push((c, next));
                }
                Some((i, Step::Expand { vertex, gamma })) => {
                    let splice = |middle: &[Letter]| {
                        let mut next = word[..i].to_vec();
                        next.extend_from_slice(middle);
                        next.extend_from_slice(&word[i + 2..]);
                        next
                    };
                    for e in self.graph.out_edges(vertex).filter(|&e| e != gamma) {
                        work.push((-c.clone(), splice(&[Letter::Edge(e), Letter::Ghost(e)])));
                    }
                    work.push((c, splice(&[Letter::Vertex(vertex)])));
                }
            }
            if work.len() + done.len() > 4 * super::MAX_TERMS {
                return Err(AlgebraError::TooLarge {
                    limit: super::MAX_TERMS,
                });
            }
        }
        Element::from_terms(self, done)
    }

    /// Letter for an identifier, with `*` marking a ghost: `"e1*"`.
    pub fn letter(&self, token: &str) -> Result<Letter, AlgebraError> {
        let unknown = || AlgebraError::UnknownIdentifier(token.to_string());
        if let Some(edge) = token.strip_suffix('*') {
            return self.graph.edge_index(edge).map(Letter::Ghost).ok_or_else(unknown);
        }
        match (self.graph.vertex_index(token), self.graph.edge_index(token)) {
            (Some(_), Some(_)) => Err(AlgebraError::AmbiguousIdentifier(token.to_string())),
            (Some(v), None) => Ok(Letter::Vertex(v)),
            (None, Some(e)) => Ok(Letter::Edge(e)),
            (None, None) => Err(unknown()),
        }
    }

    /// Parses a space-separated word such as `"e1 v1 e3*"`.
    pub fn word(&self, text: &str) -> Result<Vec<Letter>, AlgebraError> {
        text.split_whitespace().map(|t| self.letter(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use crate::graph::builtin;

    fn norm(ctx: &Arc<CohnAlgebra>, text: &str) -> String {
        let w = ctx.word(text).unwrap();
        let left = ctx.normalize(&[(rational(1), w.clone())], Strategy::Leftmost).unwrap();
        let right = ctx.normalize(&[(rational(1), w)], Strategy::Rightmost).unwrap();
        assert_eq!(left, right, "{text}");
        left.to_string()
    }

    #[test]
    fn basic_relations() {
        let a = CohnAlgebra::leavitt(builtin("E_star").unwrap());
        assert_eq!(norm(&a, "e1 v2"), "0");
        assert_eq!(norm(&a, "v1 v1"), "v1");
        assert_eq!(norm(&a, "e1* e1"), "v1");
        assert_eq!(norm(&a, "e1* e2"), "0");
        assert_eq!(norm(&a, "e3 e1*"), "e3 e1*");
        assert_eq!(norm(&a, "e1 e1*"), "v1 - e2 e2*");
        let sum = a
            .normalize(
                &[
                    (rational(1), a.word("e1 e1*").unwrap()),
                    (rational(1), a.word("e2 e2*").unwrap()),
                ],
                Strategy::Leftmost,
            )
            .unwrap();
        assert_eq!(sum.to_string(), "v1");
        assert!(a
            .normalize(&[(rational(1), vec![])], Strategy::Leftmost)
            .unwrap()
            .is_one());
    }

    #[test]
    fn nested_expansion() {
        let a = CohnAlgebra::leavitt(builtin("E_star").unwrap());
        // e1 (e1 e1*) e1* → e1 e1* - e1 e2 e2* e1* → v1 - e2 e2* - e1 e2 e2* e1*
        assert_eq!(norm(&a, "e1 e1 e1* e1*"), "v1 - e2 e2* - e1 e2 e2* e1*");
    }

    #[test]
    fn agrees_with_product() {
        let a = CohnAlgebra::new(builtin("F_star_star").unwrap(), &["w1", "w3"]).unwrap();
        let words = ["f2 f3 f1' f1'*", "f5 f6 f1* f6* f5*", "f1 f2 f3 f3* f2* f1*"];
        for text in words {
            let letters = a.word(text).unwrap();
            let by_words = a
                .normalize(&[(rational(1), letters.clone())], Strategy::Rightmost)
                .unwrap();
            let by_product = letters
                .iter()
                .map(|l| match *l {
                    Letter::Vertex(v) => a.vertex_at(v),
                    Letter::Edge(e) => a.edge_at(e),
                    Letter::Ghost(e) => a.ghost_at(e),
                })
                .reduce(|x, y| &x * &y)
                .unwrap();
            assert_eq!(by_words, by_product, "{text}");
        }
    }
}

//! Expressions such as `(e1 + e2)* (e1 + e2)` or `3/2 v1 - e1 e1*`.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor factor*            juxtaposition is multiplication
//! factor := atom '*'*                 postfix involution
//! atom   := ident | int ('/' int)? | '(' expr ')'
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgebraError, CohnAlgebra, Element};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Slash,
    Star,
    Open,
    Close,
}

fn error(position: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, AlgebraError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let simple = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '/' => Some(Token::Slash),
            '*' => Some(Token::Star),
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            _ => None,
        };
        if let Some(t) = simple {
            tokens.push((pos, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().map(|(_, c)| c).collect();
            tokens.push((pos, Token::Int(digits.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || matches!(chars[i].1, '_' | '\'')) {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i].1 == '#' && chars[i + 1].1.is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
            }
            let ident: String = chars[start..i].iter().map(|(_, c)| c).collect();
            tokens.push((pos, Token::Ident(ident)));
        } else {
            return Err(error(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    ctx: &'a Arc<CohnAlgebra>,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Element, AlgebraError> {
        let negate = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                true
            }
            Some(Token::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Token::Ident(_) | Token::Int(_) | Token::Open))
    }

    fn term(&mut self) -> Result<Element, AlgebraError> {
        if !self.starts_factor() {
            return Err(error(self.offset(), "expected a term"));
        }
        let mut acc = self.factor()?;
        while self.starts_factor() {
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element, AlgebraError> {
        let mut x = self.atom()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            x = x.star();
        }
        Ok(x)
    }

    fn atom(&mut self) -> Result<Element, AlgebraError> {
        let at = self.offset();
        let token = self.peek().cloned();
        self.pos += 1;
        match token {
            Some(Token::Ident(id)) => self.identifier(&id, at),
            Some(Token::Int(n)) => {
                let mut value = BigRational::from_integer(n);
                if self.peek() == Some(&Token::Slash) {
                    self.pos += 1;
                    let at = self.offset();
                    match self.peek().cloned() {
                        Some(Token::Int(d)) if !d.is_zero() => {
                            self.pos += 1;
                            value /= BigRational::from_integer(d);
                        }
                        Some(Token::Int(_)) => return Err(error(at, "division by zero")),
                        _ => return Err(error(at, "expected an integer denominator")),
                    }
                }
                Ok(self.ctx.scalar(value))
            }
            Some(Token::Open) => {
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(error(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(error(at, "expected an identifier, number or `(`")),
            None => Err(error(at, "unexpected end of input")),
        }
    }

    fn identifier(&self, id: &str, at: usize) -> Result<Element, AlgebraError> {
        let g = self.ctx.graph();
        match (g.vertex_index(id), g.edge_index(id)) {
            (Some(_), Some(_)) => Err(error(at, format!("`{id}` names both a vertex and an edge"))),
            (Some(v), None) => Ok(self.ctx.vertex_at(v)),
            (None, Some(e)) => Ok(self.ctx.edge_at(e)),
            (None, None) => Err(error(at, format!("unknown identifier `{id}`"))),
        }
    }
}

pub fn parse_expression(ctx: &Arc<CohnAlgebra>, text: &str) -> Result<Element, AlgebraError> {
    let mut parser = Parser {
        ctx,
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let value = parser.expr()?;
    match parser.peek() {
        None => Ok(value),
        Some(Token::Close) => Err(error(parser.offset(), "unbalanced `)`")),
        Some(_) => Err(error(parser.offset(), "unexpected token")),
    }
}

//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := rational | variable | '(' expr ')'
//! rational := int ('/' nat)?
//! ```
//!
//! Whitespace is ignored and multiplication must be written out.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{Monomial, Polynomial};
use crate::exactmath::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at position {position}")]
    UnknownVariable { position: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::UnknownVariable { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().map(|c| c.1).collect();
            toks.push((pos, Tok::Int(digits.parse().expect("ascii digits"))));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            toks.push((pos, Tok::Ident(chars[start..i].iter().map(|c| c.1).collect())));
        } else if "+-*/^()".contains(ch) {
            toks.push((pos, Tok::Sym(ch)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { position: pos, message: format!("unexpected character '{ch}'") });
        }
    }
    Ok(Lexer { toks, end: text.len() })
}

struct Parser<'a> {
    lexer: Lexer,
    at: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.lexer.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.lexer.toks.get(self.at).map_or(self.lexer.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.pos(), message: message.into() })
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if self.eat('^') {
            let e = self.nat("exponent")?;
            let e: u32 = match u32::try_from(&e) {
                Ok(v) if v <= 10_000 => v,
                _ => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn nat(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let q = if self.eat('/') {
                    let d = self.nat("denominator")?;
                    if d.is_zero() {
                        return Err(ParseError::Syntax { position: pos, message: "zero denominator".into() });
                    }
                    Scalar::new(n, d)
                } else {
                    Scalar::from_integer(n)
                };
                Ok(Polynomial::constant(self.nvars(), q))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match self.names.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::term(Monomial::var(self.nvars(), i), Scalar::from_integer(1.into()))),
                    None => Err(ParseError::UnknownVariable { position: pos, name }),
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` over the variables `names` (in ring order).
pub fn parse_polynomial_in(text: &str, names: &[String]) -> Result<Polynomial, ParseError> {
    let lexer = lex(text)?;
    let mut p = Parser { lexer, at: 0, names };
    let out = p.expr()?;
    if p.at != p.lexer.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

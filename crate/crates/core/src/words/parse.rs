//! The word DSL: `.` composes left to right, `+`/`-` add, parentheses group.
//!
//! Letters: hom and corner names, `e^-1` for corner inverses, `Delta[seq]`,
//! `1[A]` for identities, `h@0` / `h@1` for homotopy endpoints, and names of
//! stored words. Positions in errors are 1-based character columns.

use std::sync::Arc;

use crate::algebra::GAlgebra;
use crate::corner::CornerEmbedding;
use crate::error::WordError;
use crate::hom::GHom;
use crate::homotopy::Homotopy;
use crate::path::Endpoint;
use crate::splitexact::SplitExact;

use super::{Generator, MorphismWord};

/// Name resolution for the parser.
pub trait Registry {
    fn algebra(&self, name: &str) -> Option<Arc<GAlgebra>>;
    fn hom(&self, name: &str) -> Option<Arc<GHom>>;
    fn corner(&self, name: &str) -> Option<Arc<CornerEmbedding>>;
    fn sequence(&self, name: &str) -> Option<Arc<SplitExact>>;
    fn homotopy(&self, name: &str) -> Option<Arc<Homotopy>>;
    fn word(&self, name: &str) -> Option<MorphismWord>;
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Atom(String),
    Dot,
    Plus,
    Minus,
    Open,
    Close,
    End,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, WordError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = k + 1;
        match c {
            _ if c.is_whitespace() => k += 1,
            '.' | '·' => {
                out.push((Token::Dot, pos));
                k += 1;
            }
            '+' => {
                out.push((Token::Plus, pos));
                k += 1;
            }
            '-' | '−' => {
                out.push((Token::Minus, pos));
                k += 1;
            }
            '(' => {
                out.push((Token::Open, pos));
                k += 1;
            }
            ')' => {
                out.push((Token::Close, pos));
                k += 1;
            }
            _ if c.is_alphanumeric() || c == '_' => {
                let start = k;
                while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_' || chars[k] == '\'') {
                    k += 1;
                }
                // suffixes: [name], ^-1, @digits
                if k < chars.len() && chars[k] == '[' {
                    let close = chars[k..].iter().position(|&x| x == ']').ok_or(WordError::Unbalanced { pos: k + 1 })?;
                    k += close + 1;
                } else if chars[k..].starts_with(&['^', '-', '1']) {
                    k += 3;
                } else if k < chars.len() && chars[k] == '@' {
                    k += 1;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
                out.push((Token::Atom(chars[start..k].iter().collect()), pos));
            }
            _ => return Err(WordError::Syntax { pos, found: format!("{c:?}") }),
        }
    }
    out.push((Token::End, chars.len() + 1));
    Ok(out)
}

fn resolve(reg: &dyn Registry, atom: &str, pos: usize) -> Result<MorphismWord, WordError> {
    let unknown = || WordError::Unknown { pos, name: atom.to_string() };
    if let Some(inner) = atom.strip_suffix(']') {
        let (head, arg) = inner.split_once('[').ok_or_else(unknown)?;
        let g = match head {
            "1" | "id" => Generator::Identity(reg.algebra(arg).ok_or_else(unknown)?),
            "Delta" | "Δ" => Generator::Split(reg.sequence(arg).ok_or_else(unknown)?),
            _ => return Err(unknown()),
        };
        return Ok(MorphismWord::generator(g));
    }
    if let Some(name) = atom.strip_suffix("^-1") {
        return Ok(MorphismWord::generator(Generator::CornerInv(reg.corner(name).ok_or_else(unknown)?)));
    }
    if let Some((name, t)) = atom.split_once('@') {
        let h = reg.homotopy(name).ok_or_else(unknown)?;
        let t: u32 = t.parse().map_err(|_| WordError::NotEndpoint(name.to_string()))?;
        let end = Endpoint::from_index(t).ok_or_else(|| WordError::NotEndpoint(name.to_string()))?;
        return Ok(MorphismWord::generator(Generator::Endpoint(h, end)));
    }
    if let Some(h) = reg.hom(atom) {
        return Ok(MorphismWord::generator(Generator::Hom(h)));
    }
    if let Some(e) = reg.corner(atom) {
        return Ok(MorphismWord::generator(Generator::Corner(e)));
    }
    reg.word(atom).ok_or_else(unknown)
}

struct Parser<'a> {
    reg: &'a dyn Registry,
    tokens: Vec<(Token, usize)>,
    at: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &(Token, usize) {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<MorphismWord, WordError> {
        let first = self.unary()?;
        let mut terms = vec![first];
        let mut pos = None;
        loop {
            match self.peek().clone() {
                (Token::Plus, p) => {
                    self.bump();
                    pos.get_or_insert(p);
                    terms.push(self.unary()?);
                }
                (Token::Minus, p) => {
                    self.bump();
                    pos.get_or_insert(p);
                    let t = self.unary()?;
                    terms.push(MorphismWord::neg(t));
                }
                _ => break,
            }
        }
        if terms.len() == 1 {
            return Ok(terms.pop().expect("one term"));
        }
        MorphismWord::plus_at(terms, pos.unwrap_or(0))
    }

    fn unary(&mut self) -> Result<MorphismWord, WordError> {
        if self.peek().0 == Token::Minus {
            self.bump();
            return Ok(MorphismWord::neg(self.unary()?));
        }
        self.composition()
    }

    fn composition(&mut self) -> Result<MorphismWord, WordError> {
        let mut w = self.primary()?;
        while let (Token::Dot, pos) = self.peek().clone() {
            self.bump();
            let right = self.primary()?;
            w = MorphismWord::compose_at(w, right, pos)?;
        }
        Ok(w)
    }

    fn primary(&mut self) -> Result<MorphismWord, WordError> {
        match self.bump() {
            (Token::Atom(a), pos) => resolve(self.reg, &a, pos),
            (Token::Open, pos) => {
                let w = self.sum()?;
                match self.bump() {
                    (Token::Close, _) => Ok(w),
                    (Token::End, _) => Err(WordError::Unbalanced { pos }),
                    (t, p) => Err(WordError::Syntax { pos: p, found: describe(&t) }),
                }
            }
            (Token::Close, pos) => Err(WordError::Unbalanced { pos }),
            (t, pos) => Err(WordError::Syntax { pos, found: describe(&t) }),
        }
    }
}

fn describe(t: &Token) -> String {
    match t {
        Token::Atom(a) => format!("identifier {a:?}"),
        Token::Dot => "'.'".into(),
        Token::Plus => "'+'".into(),
        Token::Minus => "'-'".into(),
        Token::Open => "'('".into(),
        Token::Close => "')'".into(),
        Token::End => "end of input".into(),
    }
}

/// Parses and type-checks a word.
pub fn parse(text: &str, reg: &dyn Registry) -> Result<MorphismWord, WordError> {
    let mut p = Parser { reg, tokens: lex(text)?, at: 0 };
    let w = p.sum()?;
    match p.bump() {
        (Token::End, _) => Ok(w),
        (Token::Close, pos) => Err(WordError::Unbalanced { pos }),
        (t, pos) => Err(WordError::Syntax { pos, found: describe(&t) }),
    }
}

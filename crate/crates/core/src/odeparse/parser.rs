use num_traits::ToPrimitive;

use super::lexer::{lex, Spanned, Tok};
use crate::error::{Error, Result};
use crate::expr::{normalize, BarKind, Expr, Tree, VarId, MAX_JET_ORDER, Q};

/// Which identifiers an expression may mention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// Right-hand sides of ODEs: x, y, y' (alias p) only.
    Ode,
    /// Everything with a surface name.
    Full,
}

pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    alphabet: Alphabet,
}

fn syntax(col: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        column: col,
        message: message.into(),
    }
}

impl Parser {
    pub fn new(text: &str, alphabet: Alphabet) -> Result<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            alphabet,
        })
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn expect_end(&mut self) -> Result<()> {
        let t = self.peek();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(syntax(t.col, "unexpected trailing input"))
        }
    }

    pub fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            Err(syntax(t.col, format!("expected {what}")))
        }
    }

    pub fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    pub fn peek_col(&self) -> usize {
        self.peek().col
    }

    pub fn next_spanned(&mut self) -> Spanned {
        self.bump()
    }

    pub fn expr(&mut self) -> Result<Tree> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Tree::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Tree::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Tree> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Tree::mul(lhs, self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Tree::div(lhs, self.unary()?);
                }
                Tok::Int(_) | Tok::Ident(..) | Tok::LParen => {
                    return Err(syntax(
                        self.peek().col,
                        "implicit multiplication is not supported",
                    ))
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Tree> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Tree::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Tree> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                let e = n
                    .to_u32()
                    .ok_or_else(|| syntax(t.col, "exponent too large"))?;
                Ok(Tree::pow(base, e))
            }
            _ => Err(syntax(t.col, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Tree> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(Tree::Num(Q::from_integer(n))),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(syntax(close.col, "expected ')'"));
                }
                Ok(e)
            }
            Tok::Ident(name, primes) => Ok(Tree::Var(self.resolve(&name, primes, t.col)?)),
            Tok::End => Err(syntax(t.col, "unexpected end of input")),
            _ => Err(syntax(t.col, "expected a number, a variable or '('")),
        }
    }

    fn resolve(&self, name: &str, primes: usize, col: usize) -> Result<VarId> {
        if name == "y" {
            return match primes {
                0 => Ok(VarId::Y),
                1 => Ok(VarId::P),
                2 if self.alphabet == Alphabet::Full => Ok(VarId::Y2),
                2 => Err(syntax(col, "y'' may only appear on the left-hand side")),
                _ => Err(Error::HigherDerivative(col)),
            };
        }
        if primes > 0 {
            return Err(syntax(col, format!("unexpected apostrophe after '{name}'")));
        }
        match name {
            "x" => return Ok(VarId::X),
            "p" => return Ok(VarId::P),
            _ => {}
        }
        if self.alphabet == Alphabet::Ode {
            return Err(syntax(col, format!("unknown variable '{name}'")));
        }
        resolve_full(name).ok_or_else(|| syntax(col, format!("unknown variable '{name}'")))
    }
}

fn letters(s: &str, allowed: &[char]) -> Option<Vec<u32>> {
    let mut counts = vec![0u32; allowed.len()];
    for c in s.chars() {
        let i = allowed.iter().position(|a| *a == c)?;
        counts[i] += 1;
    }
    Some(counts)
}

fn resolve_full(name: &str) -> Option<VarId> {
    match name {
        "a" => return Some(VarId::A),
        "f" => return Some(VarId::F),
        "xb" => return Some(VarId::XB),
        "yb" => return Some(VarId::YB),
        "pb" => return Some(VarId::PB),
        "fb" => return Some(VarId::FB),
        "yb2" => return Some(VarId::barred_jet(BarKind::Y2, 0, 0)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("f_") {
        let c = letters(rest, &['x', 'y', 'p'])?;
        if rest.is_empty() || c.iter().sum::<u32>() > MAX_JET_ORDER {
            return None;
        }
        return Some(VarId::jet(c[0] as u8, c[1] as u8, c[2] as u8));
    }
    for (prefix, kind) in [("xb_", BarKind::X), ("yb_", BarKind::Y)] {
        if let Some(rest) = name.strip_prefix(prefix) {
            let c = letters(rest, &['x', 'y'])?;
            if rest.is_empty() || c.iter().sum::<u32>() > MAX_JET_ORDER {
                return None;
            }
            return Some(VarId::barred_jet(kind, c[0] as u8, c[1] as u8));
        }
    }
    if name.starts_with(|c: char| c.is_ascii_uppercase()) {
        return Some(VarId::token(name));
    }
    None
}

/// A parsed ODE `y'' = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeInput {
    pub rhs: Expr,
    pub source_text: String,
}

pub fn parse_ode(text: &str) -> Result<OdeInput> {
    let mut p = Parser::new(text, Alphabet::Ode)?;
    let first = p.next_spanned();
    match &first.tok {
        Tok::Ident(name, 2) if name == "y" => {}
        Tok::Ident(..) | Tok::Int(_) => return Err(Error::NotSecondOrder),
        Tok::End => return Err(syntax(first.col, "empty input")),
        _ => return Err(Error::NotSecondOrder),
    }
    if *p.peek_tok() != Tok::Eq {
        if matches!(p.peek_tok(), Tok::End) {
            return Err(syntax(p.peek_col(), "expected '='"));
        }
        return Err(Error::NotSecondOrder);
    }
    p.next_spanned();
    let tree = p.expr()?;
    p.expect_end()?;
    Ok(OdeInput {
        rhs: normalize(&tree)?,
        source_text: text.to_string(),
    })
}

/// Parses an expression over the full surface alphabet.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text, Alphabet::Full)?;
    let tree = p.expr()?;
    p.expect_end()?;
    normalize(&tree)
}

/// Parses an expression in x, y, y' only.
pub fn parse_rhs(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text, Alphabet::Ode)?;
    let tree = p.expr()?;
    p.expect_end()?;
    normalize(&tree)
}

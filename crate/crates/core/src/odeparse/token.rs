use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Expr, VarId};

/// A differential invariant name: `I<k>` followed by a word of derivation
/// indices, or the essential invariant `X` (x̄ = x).
///
/// In `I1_31` the indices are applied left to right, so it denotes
/// X₁(X₃(I₁)).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantToken {
    Essential,
    Word { base: u8, word: Vec<u8> },
}

impl InvariantToken {
    pub fn fundamental(base: u8) -> InvariantToken {
        InvariantToken::Word {
            base,
            word: Vec::new(),
        }
    }

    /// The token obtained by applying one more derivation.
    pub fn extended(&self, k: u8) -> Option<InvariantToken> {
        match self {
            InvariantToken::Essential => None,
            InvariantToken::Word { base, word } => {
                let mut w = word.clone();
                w.push(k);
                Some(InvariantToken::Word {
                    base: *base,
                    word: w,
                })
            }
        }
    }

    pub fn var(&self) -> VarId {
        VarId::token(&self.to_string())
    }

    pub fn expr(&self) -> Expr {
        Expr::var(self.var())
    }

    /// Recognizes token variables; placeholders and other names give `None`.
    pub fn from_var(v: &VarId) -> Option<InvariantToken> {
        match v {
            VarId::Token(name) => parse_invariant_token(name).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for InvariantToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantToken::Essential => f.write_str("X"),
            InvariantToken::Word { base, word } => {
                write!(f, "I{base}")?;
                if !word.is_empty() {
                    f.write_str("_")?;
                    for k in word {
                        write!(f, "{k}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

pub fn parse_invariant_token(text: &str) -> Result<InvariantToken> {
    let bad = |column: usize, message: &str| Error::Syntax {
        column,
        message: message.to_string(),
    };
    if text == "X" {
        return Ok(InvariantToken::Essential);
    }
    let chars: Vec<char> = text.chars().collect();
    if chars.first() != Some(&'I') {
        return Err(bad(1, "invariant tokens start with 'I' or are 'X'"));
    }
    let base = match chars.get(1) {
        Some(c @ '1'..='3') => c.to_digit(10).unwrap() as u8,
        Some(_) => return Err(bad(2, "fundamental invariant index must be 1, 2 or 3")),
        None => return Err(bad(2, "missing fundamental invariant index")),
    };
    let mut word = Vec::new();
    match chars.get(2) {
        None => {}
        Some('_') => {
            if chars.len() == 3 {
                return Err(bad(4, "empty derivation word"));
            }
            for (i, c) in chars.iter().enumerate().skip(3) {
                match c {
                    '1'..='4' => word.push(c.to_digit(10).unwrap() as u8),
                    _ => return Err(bad(i + 1, "derivation indices must be 1, 2, 3 or 4")),
                }
            }
        }
        Some(_) => return Err(bad(3, "expected '_' before the derivation word")),
    }
    Ok(InvariantToken::Word { base, word })
}

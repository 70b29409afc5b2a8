//! Surface syntax for ODEs, expressions and invariant tokens.
//!
//! ```text
//! ode     = "y''" "=" expr
//! expr    = term { ("+" | "-") term }
//! term    = unary { ("*" | "/") unary }
//! unary   = "-" unary | power
//! power   = atom [ "^" integer ]
//! atom    = integer | name | "(" expr ")"
//! ```
//!
//! Names: `x`, `y`, `y'` (or `p`); in full expressions also `a`, `f`, jet
//! symbols `f_xp`, barred variables `xb yb pb fb`, barred jets `yb_xy`, and
//! tokens starting with an uppercase letter (`I1_31`, `X`).

mod lexer;
mod parser;
mod printer;
mod token;

pub use parser::{parse_expr, parse_ode, parse_rhs, Alphabet, OdeInput, Parser};
pub use printer::{print_expr, print_ode, print_poly};
pub use token::{parse_invariant_token, InvariantToken};

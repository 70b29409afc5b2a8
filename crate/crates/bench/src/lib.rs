//! Inputs shared by the benchmarks.

use odeq_core::engine::pushforward;
use odeq_core::expr::Bindings;
use odeq_core::{parse_expr, Expr, VarId};

/// The equation mapped to the Rayleigh equation by x̄ = x, ȳ = y²/2.
pub const RAYLEIGH_SOURCE: &str = "-y^3*y'^4 - y'^2/y - (1/2)*y";

pub const EMDEN_FOWLER: &str = "1/(x*y^2)";

pub const REID: &str = "y'/x + 4*y^2/x^3";

pub fn expr(text: &str) -> Expr {
    parse_expr(text).expect("benchmark input parses")
}

/// `y'' = f` pulled back through x̄ = ξ, ȳ = η, written in x, y, y'.
pub fn scrambled(f: &str, xi: &str, eta: &str) -> Expr {
    let g = pushforward(&expr(f), &expr(xi), &expr(eta)).expect("invertible scramble");
    let mut b = Bindings::new();
    b.insert(VarId::XB, Expr::x());
    b.insert(VarId::YB, Expr::y());
    b.insert(VarId::PB, Expr::p());
    g.substitute(&b).expect("substitution")
}

use num_traits::{One, Signed};

use crate::expr::{Base, Expr, Monomial, Poly, VarId, Q};

fn var_name(v: &VarId) -> String {
    match v {
        VarId::Base(Base::Y2) => "y''".to_string(),
        _ => v.to_string(),
    }
}

fn monomial_str(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .pairs()
        .iter()
        .map(|(v, e)| {
            if *e == 1 {
                var_name(v)
            } else {
                format!("{}^{}", var_name(v), e)
            }
        })
        .collect();
    parts.join("*")
}

fn magnitude_str(c: &Q) -> String {
    let c = c.abs();
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Prints a polynomial as a sum of terms in decreasing monomial order.
pub fn print_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        if m.is_one() {
            out.push_str(&magnitude_str(&mag));
        } else if mag.is_one() {
            out.push_str(&monomial_str(m));
        } else if mag.is_integer() {
            out.push_str(&format!("{}*{}", mag.numer(), monomial_str(m)));
        } else {
            out.push_str(&format!("({})*{}", magnitude_str(&mag), monomial_str(m)));
        }
    }
    out
}

fn needs_parens_as_factor(p: &Poly) -> bool {
    if p.len() > 1 {
        return true;
    }
    match p.terms().first() {
        Some((m, c)) => m.pairs().len() > 1 || (!m.is_one() && !c.is_one()) || c.is_negative(),
        None => false,
    }
}

/// Deterministic surface form of an expression; `parse_expr` inverts it.
pub fn print_expr(e: &Expr) -> String {
    let num = print_poly(e.num());
    if e.den().is_one() {
        return num;
    }
    let n = if e.num().len() > 1 {
        format!("({num})")
    } else {
        num
    };
    let d = print_poly(e.den());
    let d = if needs_parens_as_factor(e.den()) {
        format!("({d})")
    } else {
        d
    };
    format!("{n}/{d}")
}

pub fn print_ode(rhs: &Expr) -> String {
    format!("y'' = {}", print_expr(rhs))
}

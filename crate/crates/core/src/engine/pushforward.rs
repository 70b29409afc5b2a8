use crate::diffalg::{Ranking, Relation, TriangularSet};
use crate::error::{Error, Result};
use crate::expr::{Expr, TotalDerivative, VarId};

use super::chgt::triangularize;
use super::tower::{tower_reduce_set, Tower};

const SOURCE: [VarId; 3] = [VarId::P, VarId::Y, VarId::X];

fn not_invertible(e: Error) -> Error {
    match e {
        Error::NotIndependent | Error::DivisionByZero | Error::SeparantVanishes(_) => {
            Error::NotInvertible
        }
        other => other,
    }
}

/// The right-hand side of the equation obtained from `y'' = f` under the
/// point transformation x̄ = ξ(x, y), ȳ = η(x, y), written in x̄, ȳ, p̄.
pub fn pushforward(f: &Expr, xi: &Expr, eta: &Expr) -> Result<Expr> {
    for e in [xi, eta] {
        if e.contains_any(|v| *v != VarId::X && *v != VarId::Y) {
            return Err(Error::Unsupported(format!(
                "{e} is not a function of x and y"
            )));
        }
    }
    let d = TotalDerivative::new(f.clone());
    let dxi = xi.derive(&d)?;
    if dxi.is_zero() {
        return Err(Error::NotInvertible);
    }
    let deta = eta.derive(&d)?;
    let pbar = &deta / &dxi;
    let g = pbar.derive(&d)? / &dxi;

    let eqs = [
        (Expr::var(VarId::XB) - xi).num().clone(),
        (Expr::var(VarId::YB) - eta).num().clone(),
        (Expr::var(VarId::PB) * &dxi - &deta).num().clone(),
    ];
    let polys = triangularize(&eqs, &SOURCE).map_err(not_invertible)?;
    let mut rels = Vec::new();
    for (p, v) in polys.iter().zip(&SOURCE) {
        rels.push(Relation::from_poly(p, v).ok_or(Error::NotInvertible)?);
    }
    let set = TriangularSet::new(Ranking::elimination(&SOURCE), rels)?;
    let set = tower_reduce_set(&set).map_err(not_invertible)?;
    let out = Tower::new(&set).reduce(&g).map_err(not_invertible)?;
    if out.contains_any(|v| SOURCE.contains(v)) {
        return Err(Error::NotInvertible);
    }
    Ok(out)
}

/// Composition ψ∘φ of point transformations given as (ξ, η) pairs.
pub fn compose(outer: (&Expr, &Expr), inner: (&Expr, &Expr)) -> Result<(Expr, Expr)> {
    let mut b = crate::expr::Bindings::new();
    b.insert(VarId::X, inner.0.clone());
    b.insert(VarId::Y, inner.1.clone());
    Ok((outer.0.substitute(&b)?, outer.1.substitute(&b)?))
}

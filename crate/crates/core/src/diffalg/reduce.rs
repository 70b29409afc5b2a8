use super::relation::TriangularSet;
use crate::error::{Error, Result};
use crate::expr::{Barred, Base, Expr, Jet, Poly, VarId, MAX_JET_ORDER};

/// Which source coordinate a partial derivative is taken with respect to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    X,
    Y,
}

fn partial_image(v: &VarId, wrt: Coord) -> Result<Option<Poly>> {
    Ok(match v {
        VarId::Base(Base::X) => (wrt == Coord::X).then(Poly::one),
        VarId::Base(Base::Y) => (wrt == Coord::Y).then(Poly::one),
        VarId::Base(_) | VarId::Token(_) => None,
        VarId::Jet(j) => {
            let n = match wrt {
                Coord::X => Jet::new(j.x + 1, j.y, j.p),
                Coord::Y => Jet::new(j.x, j.y + 1, j.p),
            };
            if n.order() > MAX_JET_ORDER {
                return Err(Error::JetOrderExceeded);
            }
            Some(Poly::var(VarId::Jet(n)))
        }
        VarId::Barred(b) if b.is_differentiable() => {
            let n = match wrt {
                Coord::X => Barred::jet(b.kind, b.dx + 1, b.dy),
                Coord::Y => Barred::jet(b.kind, b.dx, b.dy + 1),
            };
            if n.order() > MAX_JET_ORDER {
                return Err(Error::JetOrderExceeded);
            }
            Some(Poly::var(VarId::Barred(n)))
        }
        VarId::Barred(_) => {
            return Err(Error::Unsupported(format!(
                "partial derivative of {v} in x or y"
            )))
        }
    })
}

/// Partial derivative of a polynomial in which x̄, ȳ and their jets are
/// functions of (x, y).
pub fn partial(p: &Poly, wrt: Coord) -> Result<Poly> {
    let mut acc = Poly::zero();
    for v in p.vars() {
        if let Some(img) = partial_image(&v, wrt)? {
            acc = acc.add(&p.diff(&v).mul(&img));
        }
    }
    Ok(acc)
}

/// `(dx, dy)` such that `w` is the `∂x^dx ∂y^dy` derivative of `u`, if any.
fn derivative_offset(u: &VarId, w: &VarId) -> Option<(u8, u8)> {
    match (u, w) {
        (VarId::Barred(a), VarId::Barred(b))
            if a.kind == b.kind
                && a.is_differentiable()
                && b.dx >= a.dx
                && b.dy >= a.dy
                && a != b =>
        {
            Some((b.dx - a.dx, b.dy - a.dy))
        }
        _ => None,
    }
}

/// Finds the highest ranked variable of `p` that is a proper derivative of a
/// leader, together with the differentiated relation that eliminates it.
fn proper_derivative(p: &Poly, c: &TriangularSet) -> Result<Option<(VarId, Poly)>> {
    let ranking = c.ranking();
    let mut best: Option<(VarId, &VarId, (u8, u8))> = None;
    for w in p.vars() {
        for r in c.relations() {
            if let Some(off) = derivative_offset(r.leader(), &w) {
                let better = match &best {
                    None => true,
                    Some((bw, _, _)) => ranking.cmp(&w, bw) == std::cmp::Ordering::Greater,
                };
                if better {
                    best = Some((w.clone(), r.leader(), off));
                }
                break;
            }
        }
    }
    let Some((w, u, (dx, dy))) = best else {
        return Ok(None);
    };
    let mut rel = c.get(u).expect("leader present").poly();
    for _ in 0..dx {
        rel = partial(&rel, Coord::X)?;
    }
    for _ in 0..dy {
        rel = partial(&rel, Coord::Y)?;
    }
    Ok(Some((w, rel)))
}

/// Ritt full reduction: returns `(r, h)` with `h·target ≡ r` modulo the
/// differential ideal of `c`, where `h` is a product of initials and
/// separants and `r` is reduced with respect to every relation.
pub fn ritt_full_reduce(target: &Poly, c: &TriangularSet) -> Result<(Poly, Poly)> {
    let mut r = target.clone();
    let mut h = Poly::one();
    while let Some((w, rel)) = proper_derivative(&r, c)? {
        let (nr, k) = r.prem_exp(&rel, &w);
        if k > 0 {
            h = h.mul(&rel.lc_in(&w).pow(k));
        }
        r = nr;
    }
    for rel in c.relations().iter().rev() {
        let v = rel.leader();
        if r.degree_in(v) < rel.degree() {
            continue;
        }
        let p = rel.poly();
        let (nr, k) = r.prem_exp(&p, v);
        if k > 0 {
            h = h.mul(&p.lc_in(v).pow(k));
        }
        r = nr;
    }
    Ok((r, h))
}

/// `r / h` from the Ritt reduction, as a canonical expression.
pub fn normal_form(target: &Poly, c: &TriangularSet) -> Result<Expr> {
    let (r, h) = ritt_full_reduce(target, c)?;
    Expr::new(r, h)
}

/// Normal form of a fraction; fails when the denominator reduces to zero.
pub fn normal_form_expr(e: &Expr, c: &TriangularSet) -> Result<Expr> {
    if c.is_empty() {
        return Ok(e.clone());
    }
    let n = normal_form(e.num(), c)?;
    if e.den().is_one() {
        return Ok(n);
    }
    let d = normal_form(e.den(), c)?;
    n.checked_div(&d)
}

/// Whether `e` vanishes modulo `c`: its numerator reduces to zero.
pub fn reduces_to_zero(e: &Expr, c: &TriangularSet) -> Result<bool> {
    Ok(ritt_full_reduce(e.num(), c)?.0.is_zero())
}

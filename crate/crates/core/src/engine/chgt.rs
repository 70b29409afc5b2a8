use crate::cartan::{functionally_independent, normalize_parameter, Specializer, TokenDerivation};
use crate::diffalg::{degree_reduce, ritt_full_reduce, Ranking, Relation, TriangularSet};
use crate::error::{Error, Result};
use crate::expr::{bar, gcd, gcd_many, resultant, Bindings, Derivation, Expr, Poly, VarId};
use crate::groupoids::GroupoidId;

use super::tower::tower_reduce_set;

/// `lhs = rhs` fixing the parameter a; `lhs` is an expression in tokens.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    pub lhs: Expr,
    pub rhs: Expr,
}

/// p̄, ȳ, x̄ from highest to lowest rank.
pub const UNKNOWNS: [VarId; 3] = [VarId::PB, VarId::YB, VarId::XB];

/// The value of a fixed by the normalizations on `f`, if any.
pub fn parameter_value(normalizations: &[Normalization], f: &Expr) -> Result<Option<Expr>> {
    match normalizations {
        [] => Ok(None),
        [n] => normalize_parameter(&n.lhs, &n.rhs, f).map(Some),
        _ => Err(Error::Unsupported("more than one normalization".into())),
    }
}

/// Values of the invariant expressions on `f` after normalizing a.
pub fn invariant_values(
    invariants: &[Expr],
    normalizations: &[Normalization],
    f: &Expr,
) -> Result<Vec<Expr>> {
    let a = parameter_value(normalizations, f)?;
    let mut s = Specializer::new(f)?;
    let mut out = Vec::new();
    for inv in invariants {
        let mut v = s.expr(inv)?;
        if let Some(a) = &a {
            v = v.substitute_one(&VarId::A, a)?;
        }
        if v.contains_var(&VarId::A) {
            return Err(Error::Unsupported(format!(
                "invariant {inv} still depends on a"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

fn nested_coeffs(p: &Poly, vars: &[VarId], out: &mut Vec<Poly>) {
    match vars.split_first() {
        None => out.push(p.clone()),
        Some((v, rest)) => {
            for c in p.coeffs_in(v) {
                if !c.is_zero() {
                    nested_coeffs(&c, rest, out);
                }
            }
        }
    }
}

/// Removes factors free of the unknowns, powers of single unknowns and
/// repeated factors in the leader.
pub(crate) fn clean(p: &Poly, unknowns: &[VarId], leader: Option<&VarId>) -> Poly {
    let mut coeffs = Vec::new();
    nested_coeffs(p, unknowns, &mut coeffs);
    let content = gcd_many(coeffs.iter());
    let mut p = if content.is_constant() {
        p.clone()
    } else {
        p.div_exact(&content).expect("content divides")
    };
    for v in unknowns {
        while p.degree_in(v) > 0 && p.coeffs_in(v)[0].is_zero() {
            p = p.div_exact(&Poly::var(v.clone())).expect("monomial factor");
        }
    }
    if let Some(v) = leader {
        if p.degree_in(v) > 1 {
            let g = gcd(&p, &p.diff(v));
            if g.degree_in(v) > 0 {
                p = p.div_exact(&g).expect("gcd divides");
            }
        }
    }
    p.integer_primitive().1
}

/// Successive elimination of the unknowns, highest first, leaving one
/// relation per unknown.
/// Each level is then lowered by pseudo-gcds with the other equations that
/// still involve its leader, reduced modulo the levels below.
pub fn triangularize(eqs: &[Poly], unknowns: &[VarId]) -> Result<Vec<Poly>> {
    let mut pending: Vec<Poly> = eqs.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut pivots = Vec::new();
    let mut secondary: Vec<Vec<Poly>> = Vec::new();
    for v in unknowns {
        let (with, without): (Vec<Poly>, Vec<Poly>) =
            pending.into_iter().partition(|p| p.contains_var(v));
        pending = without;
        let with: Vec<Poly> = with.iter().map(|p| clean(p, unknowns, Some(v))).collect();
        let Some(ix) = (0..with.len()).min_by_key(|&i| (with[i].degree_in(v), with[i].len()))
        else {
            return Err(Error::NotIndependent);
        };
        let pivot = with[ix].clone();
        let mut seconds = Vec::new();
        for (i, e) in with.iter().enumerate() {
            if i == ix {
                continue;
            }
            let mut r = e.prem(&pivot, v);
            if r.contains_var(v) {
                seconds.push(clean(&r, unknowns, Some(v)));
                r = resultant(&pivot, &r, v);
            }
            if !r.is_zero() {
                pending.push(clean(&r, unknowns, None));
            }
        }
        pivots.push(pivot);
        secondary.push(seconds);
    }
    // bottom-up refinement
    let mut lower: Vec<Relation> = Vec::new();
    let ranking = Ranking::elimination(unknowns);
    for i in (0..unknowns.len()).rev() {
        let v = &unknowns[i];
        let below = TriangularSet::new(ranking.clone(), lower.clone())?;
        for s in &secondary[i] {
            if let Some(g) = pseudo_gcd(&pivots[i], s, v, unknowns, &below)? {
                if g.degree_in(v) < pivots[i].degree_in(v) {
                    pivots[i] = g;
                }
            }
        }
        lower.push(Relation::from_poly(&pivots[i], v).ok_or(Error::NotIndependent)?);
    }
    Ok(pivots)
}

/// Last nonzero pseudo-remainder of `a` and `b` in `v`, with coefficients
/// reduced modulo `below`; `None` when they have no common factor.
fn pseudo_gcd(
    a: &Poly,
    b: &Poly,
    v: &VarId,
    unknowns: &[VarId],
    below: &TriangularSet,
) -> Result<Option<Poly>> {
    let (mut a, mut b) = (a.clone(), b.clone());
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = ritt_full_reduce(&a.prem(&b, v), below)?.0;
        if r.is_zero() {
            return Ok(Some(b));
        }
        if r.degree_in(v) == 0 {
            return Ok(None);
        }
        a = b;
        b = clean(&r, unknowns, Some(v));
    }
}

fn annihilators(g: GroupoidId, v: &VarId) -> Vec<TokenDerivation> {
    let ks = if *v == VarId::XB {
        g.groupoid().annihilators(true)
    } else if *v == VarId::YB {
        g.groupoid().annihilators(false)
    } else {
        Vec::new()
    };
    ks.into_iter().map(TokenDerivation).collect()
}

/// Lowers relation degrees with derivations annihilating x̄ (then ȳ) until
/// the set has the requested degree.
pub fn reduce_to_degree(set: TriangularSet, g: GroupoidId, degree: u64) -> Result<TriangularSet> {
    let mut set = set;
    'outer: while set.degree() > degree {
        for v in [VarId::XB, VarId::YB] {
            if set.get(&v).is_none_or(|r| r.degree() < 2) {
                continue;
            }
            let ann = annihilators(g, &v);
            let refs: Vec<&dyn Derivation> = ann.iter().map(|d| d as &dyn Derivation).collect();
            if let Ok(next) = degree_reduce(&set, &v, &refs) {
                set = tower_reduce_set(&next)?;
                continue 'outer;
            }
        }
        return Err(Error::CannotReduce(format!(
            "degree {} above {degree}",
            set.degree()
        )));
    }
    Ok(set)
}

/// The necessary form of the change of coordinates onto `y'' = rhs`: a
/// triangular set in x̄, ȳ, p̄ whose coefficients are invariant tokens.
pub fn chgt_coords(
    rhs: &Expr,
    g: GroupoidId,
    invariants: &[Expr],
    normalizations: &[Normalization],
    symmetry_degree: u32,
) -> Result<TriangularSet> {
    let values = invariant_values(invariants, normalizations, rhs)?;
    let [a, b, c] = values.as_slice() else {
        return Err(Error::Unsupported(
            "exactly three invariants are required".into(),
        ));
    };
    if !functionally_independent(&[a.clone(), b.clone(), c.clone()])? {
        return Err(Error::NotIndependent);
    }
    let mut back = Bindings::new();
    let mut eqs = Vec::new();
    for (i, (inv, v)) in invariants.iter().zip(&values).enumerate() {
        let k = Expr::token(&format!("K{}", i + 1));
        back.insert(VarId::token(&format!("K{}", i + 1)), inv.clone());
        eqs.push((k - bar(v)?).num().clone());
    }
    let polys = triangularize(&eqs, &UNKNOWNS)?;
    let mut rels = Vec::new();
    for (p, v) in polys.iter().zip(&UNKNOWNS) {
        let r = Relation::from_poly(p, v).ok_or(Error::NotIndependent)?;
        let r = r
            .map_coeffs(|c| c.substitute(&back))?
            .ok_or(Error::NotIndependent)?;
        rels.push(r);
    }
    let set = tower_reduce_set(&TriangularSet::new(Ranking::barred(), rels)?)?;
    reduce_to_degree(set, g, symmetry_degree as u64)
}

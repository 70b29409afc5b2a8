use super::reduce::normal_form_expr;
use super::relation::{Relation, TriangularSet};
use crate::error::{Error, Result};
use crate::expr::{Derivation, Expr, VarId};

/// Differentiates the coefficients of the monic relation for `v` by a
/// derivation that annihilates `v`. The result is a relation of lower degree
/// satisfied by every zero of the original one, or `None` if it collapses.
fn derived_relation(rel: &Relation, x: &dyn Derivation) -> Result<Option<Relation>> {
    let monic = rel.monic_form();
    let d = monic.degree() as usize;
    let coeffs = monic.coeffs()[..d]
        .iter()
        .map(|c| c.derive(x))
        .collect::<Result<Vec<Expr>>>()?;
    Ok(Relation::from_coeffs(rel.leader().clone(), coeffs))
}

/// Lowers the degree of the relation for `v` by differentiating it with
/// derivations known to annihilate `v`, tried in the given order. Other
/// relations are reduced against the new one afterwards.
pub fn degree_reduce(
    c: &TriangularSet,
    v: &VarId,
    annihilators: &[&dyn Derivation],
) -> Result<TriangularSet> {
    let original = c
        .get(v)
        .ok_or_else(|| Error::LeaderOutsideUnknowns(v.to_string()))?;
    for var in original.vars() {
        if !c.ranking().is_parameter(&var) {
            return Err(Error::Unsupported(format!(
                "coefficients of the relation for {v} involve the unknown {var}"
            )));
        }
    }
    let mut rel = original.clone();
    let mut reduced = false;
    for x in annihilators {
        while rel.degree() >= 2 {
            match derived_relation(&rel, *x)? {
                Some(next) => {
                    rel = next;
                    reduced = true;
                }
                None => break,
            }
        }
        if rel.degree() == 1 {
            break;
        }
    }
    if !reduced {
        return Err(Error::CannotReduce(v.to_string()));
    }
    let single = TriangularSet::new(c.ranking().clone(), vec![rel.clone()])?;
    let mut rels = vec![rel];
    for other in c.relations() {
        if other.leader() == v {
            continue;
        }
        let needs = other.coeffs().iter().any(|k| k.contains_var(v));
        if !needs {
            rels.push(other.clone());
            continue;
        }
        let r = other
            .map_coeffs(|k| normal_form_expr(k, &single))?
            .ok_or_else(|| Error::CannotReduce(other.leader().to_string()))?;
        rels.push(r);
    }
    TriangularSet::new(c.ranking().clone(), rels)
}

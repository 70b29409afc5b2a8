use std::collections::HashMap;

use super::reduce::{normal_form, normal_form_expr};
use super::relation::TriangularSet;
use crate::error::{Error, Result};
use crate::expr::{gcd, Derivation, Expr, TotalDerivative, VarId};

/// Extends a derivation to the leaders of a triangular set by implicit
/// differentiation: for a relation `R(v, lower leaders, parameters) = 0`,
/// `D(v) = −(Σ ∂R/∂w · D(w)) / S_R` over the other variables `w`.
pub struct ImplicitDerivation<'a> {
    set: &'a TriangularSet,
    base: &'a dyn Derivation,
    values: HashMap<VarId, Expr>,
}

impl<'a> ImplicitDerivation<'a> {
    pub fn new(set: &'a TriangularSet, base: &'a dyn Derivation) -> Result<ImplicitDerivation<'a>> {
        let mut d = ImplicitDerivation {
            set,
            base,
            values: HashMap::new(),
        };
        for rel in set.relations() {
            let v = rel.leader().clone();
            let p = rel.poly();
            let sep_poly = p.diff(&v);
            let sep = normal_form(&sep_poly, set)?;
            // a repeated factor makes the separant vanish on that component
            if sep.is_zero() || (rel.degree() > 1 && gcd(&p, &sep_poly).degree_in(&v) > 0) {
                return Err(Error::SeparantVanishes(v.to_string()));
            }
            let mut acc = Expr::zero();
            for w in p.vars() {
                if w == v {
                    continue;
                }
                let img = match d.values.get(&w) {
                    Some(e) => Some(e.clone()),
                    None => base.image(&w)?,
                };
                if let Some(img) = img {
                    if !img.is_zero() {
                        acc = acc + Expr::from_poly(p.diff(&w)) * img;
                    }
                }
            }
            let acc = normal_form_expr(&acc, set)?;
            let value = normal_form_expr(&(-acc / &sep), set)?;
            d.values.insert(v, value);
        }
        Ok(d)
    }

    pub fn value(&self, leader: &VarId) -> Option<&Expr> {
        self.values.get(leader)
    }

    /// Applies the derivation and reduces the result modulo the set.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        normal_form_expr(&e.derive(self)?, self.set)
    }
}

impl Derivation for ImplicitDerivation<'_> {
    fn image(&self, v: &VarId) -> Result<Option<Expr>> {
        match self.values.get(v) {
            Some(e) => Ok(Some(e.clone())),
            None => self.base.image(v),
        }
    }
}

/// `D(v)` for a leader `v`, expressed modulo the set.
pub fn implicit_derivative(c: &TriangularSet, v: &VarId, d: &dyn Derivation) -> Result<Expr> {
    let imp = ImplicitDerivation::new(c, d)?;
    imp.value(v)
        .cloned()
        .ok_or_else(|| Error::LeaderOutsideUnknowns(v.to_string()))
}

/// `D_x v` for a leader `v`, with `D_x = ∂x + p∂y + f∂p`.
pub fn implicit_total_derivative(c: &TriangularSet, v: &VarId, f: &Expr) -> Result<Expr> {
    implicit_derivative(c, v, &TotalDerivative::new(f.clone()))
}

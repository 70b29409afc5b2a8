use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::poly::{Monomial, Poly, Q};
use super::rat::Expr;
use super::var::{BarKind, Barred, Jet, VarId, MAX_JET_ORDER};
use crate::error::{Error, Result};

pub type Bindings = HashMap<VarId, Expr>;
pub type Point = HashMap<VarId, Q>;

impl Expr {
    /// Formal partial derivative, every variable independent.
    pub fn diff(&self, v: &VarId) -> Expr {
        let dn = self.num().diff(v);
        if self.den().is_one() {
            return Expr::from_poly(dn);
        }
        let dd = self.den().diff(v);
        if dd.is_zero() {
            return Expr::new(dn, self.den().clone()).expect("nonzero denominator");
        }
        let n = dn.mul(self.den()).sub(&self.num().mul(&dd));
        Expr::new(n, self.den().pow(2)).expect("nonzero denominator")
    }

    /// Simultaneous substitution of variables by expressions.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Expr> {
        if bindings.is_empty() || !self.vars().iter().any(|v| bindings.contains_key(v)) {
            return Ok(self.clone());
        }
        let (n1, d1) = substitute_poly(self.num(), bindings);
        let (n2, d2) = substitute_poly(self.den(), bindings);
        if n2.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Expr::new(n1.mul(&d2), d1.mul(&n2))
    }

    pub fn substitute_one(&self, v: &VarId, value: &Expr) -> Result<Expr> {
        let mut b = Bindings::new();
        b.insert(v.clone(), value.clone());
        self.substitute(&b)
    }

    pub fn eval_at(&self, point: &Point) -> Result<Q> {
        let lookup = |v: &VarId| point.get(v).cloned();
        let d = self
            .den()
            .eval_rational(&lookup)
            .map_err(|v| Error::UnboundVariable(v.to_string()))?;
        let n = self
            .num()
            .eval_rational(&lookup)
            .map_err(|v| Error::UnboundVariable(v.to_string()))?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(n / d)
    }

    pub fn derive(&self, d: &dyn Derivation) -> Result<Expr> {
        derive(self, d)
    }
}

/// `P(bindings)` as a polynomial fraction `(numerator, denominator)` built with
/// polynomial arithmetic only; the caller normalizes once.
fn substitute_poly(p: &Poly, bindings: &Bindings) -> (Poly, Poly) {
    let mut max_exp: BTreeMap<&VarId, u32> = BTreeMap::new();
    for (m, _) in p.terms() {
        for (v, e) in m.pairs() {
            if bindings.contains_key(v) {
                let slot = max_exp.entry(v).or_insert(0);
                *slot = (*slot).max(*e);
            }
        }
    }
    let mut den = Poly::one();
    for (v, e) in &max_exp {
        let b = &bindings[*v];
        if !b.den().is_one() {
            den = den.mul(&b.den().pow(*e));
        }
    }
    let mut pow_cache: HashMap<(VarId, u32, bool), Poly> = HashMap::new();
    let mut get_pow = |v: &VarId, e: u32, of_den: bool| -> Poly {
        if e == 0 {
            return Poly::one();
        }
        pow_cache
            .entry((v.clone(), e, of_den))
            .or_insert_with(|| {
                let b = &bindings[v];
                if of_den {
                    b.den().pow(e)
                } else {
                    b.num().pow(e)
                }
            })
            .clone()
    };
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut t = Poly::one();
        for (v, e) in m.pairs() {
            if bindings.contains_key(v) {
                t = t.mul(&get_pow(v, *e, false));
            } else {
                rest.push((v.clone(), *e));
            }
        }
        for (v, max) in &max_exp {
            let missing = max - m.exponent(v);
            if missing > 0 && !bindings[*v].den().is_one() {
                t = t.mul(&get_pow(v, missing, true));
            }
        }
        let rest = Monomial::from_pairs(rest);
        num = num.add(&t.mul_monomial(&rest, c));
    }
    (num, den)
}

/// A derivation of the expression field, given by the images of variables.
pub trait Derivation {
    /// Image of `v`; `Ok(None)` stands for zero.
    fn image(&self, v: &VarId) -> Result<Option<Expr>>;
}

fn derive_poly(p: &Poly, d: &dyn Derivation) -> Result<Expr> {
    let mut acc = Expr::zero();
    for v in p.vars() {
        if let Some(img) = d.image(&v)? {
            if img.is_zero() {
                continue;
            }
            let dv = Expr::from_poly(p.diff(&v));
            acc = acc + dv * img;
        }
    }
    Ok(acc)
}

pub fn derive(e: &Expr, d: &dyn Derivation) -> Result<Expr> {
    let dn = derive_poly(e.num(), d)?;
    if e.den().is_one() {
        return Ok(dn);
    }
    let dd = derive_poly(e.den(), d)?;
    let den = Expr::from_poly(e.den().clone());
    let num = Expr::from_poly(e.num().clone());
    let top = dn * &den - num * dd;
    Ok(top / den.pow(2))
}

/// Partial derivative `∂/∂v` as a [`Derivation`].
pub struct Partial(pub VarId);

impl Derivation for Partial {
    fn image(&self, v: &VarId) -> Result<Option<Expr>> {
        Ok((v == &self.0).then(Expr::one))
    }
}

/// A derivation given by an explicit table of images; other variables map to 0.
#[derive(Clone, Debug, Default)]
pub struct VectorField {
    pub images: HashMap<VarId, Expr>,
}

impl VectorField {
    pub fn new() -> VectorField {
        VectorField::default()
    }

    pub fn with(mut self, v: VarId, img: Expr) -> VectorField {
        self.images.insert(v, img);
        self
    }
}

impl Derivation for VectorField {
    fn image(&self, v: &VarId) -> Result<Option<Expr>> {
        Ok(self.images.get(v).cloned())
    }
}

pub fn jet_var(x: u32, y: u32, p: u32) -> Result<VarId> {
    if x + y + p > MAX_JET_ORDER {
        return Err(Error::JetOrderExceeded);
    }
    Ok(VarId::jet(x as u8, y as u8, p as u8))
}

/// The total derivative `D_x = ∂x + p ∂y + f ∂p`, extended to jet symbols of
/// `f` and to jets of the barred functions x̄(x, y), ȳ(x, y).
#[derive(Clone, Debug)]
pub struct TotalDerivative {
    pub f: Expr,
}

impl TotalDerivative {
    pub fn new(f: Expr) -> TotalDerivative {
        TotalDerivative { f }
    }

    /// `D_x` with `f` left as the jet symbol `f`.
    pub fn symbolic() -> TotalDerivative {
        TotalDerivative {
            f: Expr::var(VarId::F),
        }
    }
}

impl Derivation for TotalDerivative {
    fn image(&self, v: &VarId) -> Result<Option<Expr>> {
        match v {
            VarId::Base(b) => Ok(match b {
                super::var::Base::X => Some(Expr::one()),
                super::var::Base::Y => Some(Expr::p()),
                super::var::Base::P => Some(self.f.clone()),
                super::var::Base::A => None,
                super::var::Base::Y2 => {
                    return Err(Error::Unsupported("total derivative of y''".into()))
                }
            }),
            VarId::Jet(j) => {
                let (i, k, l) = (j.x as u32, j.y as u32, j.p as u32);
                let fx = Expr::var(jet_var(i + 1, k, l)?);
                let fy = Expr::var(jet_var(i, k + 1, l)?);
                let fp = Expr::var(jet_var(i, k, l + 1)?);
                Ok(Some(fx + Expr::p() * fy + &self.f * fp))
            }
            VarId::Barred(b) if b.is_differentiable() => {
                let bx = Barred::jet(b.kind, b.dx + 1, b.dy);
                let by = Barred::jet(b.kind, b.dx, b.dy + 1);
                if bx.order() > MAX_JET_ORDER {
                    return Err(Error::JetOrderExceeded);
                }
                Ok(Some(
                    Expr::var(VarId::Barred(bx)) + Expr::p() * Expr::var(VarId::Barred(by)),
                ))
            }
            VarId::Barred(_) => Err(Error::Unsupported(format!("total derivative of {v}"))),
            VarId::Token(_) => Ok(None),
        }
    }
}

/// Replaces every jet symbol `f_{ijk}` by the corresponding partial of `f`.
pub fn specialize_jets(e: &Expr, f: &Expr) -> Result<Expr> {
    let mut bindings = Bindings::new();
    for v in e.vars() {
        if let VarId::Jet(j) = &v {
            bindings.insert(v.clone(), jet_value(f, j));
        }
    }
    e.substitute(&bindings)
}

pub fn jet_value(f: &Expr, j: &Jet) -> Expr {
    let mut g = f.clone();
    for _ in 0..j.x {
        g = g.diff(&VarId::X);
    }
    for _ in 0..j.y {
        g = g.diff(&VarId::Y);
    }
    for _ in 0..j.p {
        g = g.diff(&VarId::P);
    }
    g
}

/// Replaces x̄, ȳ, p̄ by x, y, p (and f̄ by f).
pub fn unbar(e: &Expr) -> Result<Expr> {
    let mut b = Bindings::new();
    for v in e.vars() {
        if let Some(u) = v.unbarred() {
            b.insert(v.clone(), Expr::var(u));
        }
    }
    e.substitute(&b)
}

/// Replaces x, y, p by x̄, ȳ, p̄.
pub fn bar(e: &Expr) -> Result<Expr> {
    let mut b = Bindings::new();
    for v in e.vars() {
        if matches!(v, VarId::Base(_)) {
            if let Some(u) = v.barred() {
                b.insert(v.clone(), Expr::var(u));
            }
        }
    }
    e.substitute(&b)
}

pub fn barred_jet(kind: BarKind, dx: u8, dy: u8) -> Expr {
    Expr::var(VarId::barred_jet(kind, dx, dy))
}

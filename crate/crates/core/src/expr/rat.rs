use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{q, Poly, Q};
use super::var::VarId;
use crate::error::{Error, Result};

/// A rational function in canonical form.
///
/// The numerator and denominator are coprime, the denominator has coprime
/// integer coefficients and a positive leading coefficient, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(q(n))
    }

    pub fn constant(c: Q) -> Expr {
        Expr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::constant(super::poly::qf(n, d))
    }

    pub fn var(v: VarId) -> Expr {
        Expr {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn x() -> Expr {
        Expr::var(VarId::X)
    }

    pub fn y() -> Expr {
        Expr::var(VarId::Y)
    }

    pub fn p() -> Expr {
        Expr::var(VarId::P)
    }

    pub fn a() -> Expr {
        Expr::var(VarId::A)
    }

    pub fn token(name: &str) -> Expr {
        Expr::var(VarId::token(name))
    }

    pub fn from_poly(p: Poly) -> Expr {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    /// Canonical `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Expr> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            return Ok(Expr::with_unit_den(num, den));
        }
        let n = num.div_exact(&g).expect("gcd divides numerator");
        let d = den.div_exact(&g).expect("gcd divides denominator");
        Ok(Expr::with_unit_den(n, d))
    }

    /// Normalizes the denominator's unit, assuming `num` and `den` coprime.
    fn with_unit_den(num: Poly, den: Poly) -> Expr {
        if den.is_constant() {
            let c = den.as_constant().unwrap();
            return Expr {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let (s, d) = den.integer_primitive();
        if s.is_one() {
            return Expr { num, den: d };
        }
        Expr {
            num: num.scale(&s.recip()),
            den: d,
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn contains_var(&self, v: &VarId) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn contains_any(&self, pred: impl Fn(&VarId) -> bool) -> bool {
        self.vars().iter().any(pred)
    }

    pub fn scale(&self, c: &Q) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add_ref(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Expr::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            let n = self.num.add(&other.num);
            return Expr::new(n, self.den.clone()).expect("nonzero denominator");
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            if n.is_zero() {
                return Expr::zero();
            }
            // coprime denominators: any common factor of n and b·d would
            // divide one of b, d and then a or c, contradicting canonicity
            return Expr::with_unit_den(n, self.den.mul(&other.den));
        }
        let bd = self.den.div_exact(&g).unwrap();
        let dd = other.den.div_exact(&g).unwrap();
        let n = self.num.mul(&dd).add(&other.num.mul(&bd));
        if n.is_zero() {
            return Expr::zero();
        }
        let g2 = gcd(&n, &g);
        let (n, g) = if g2.is_one() {
            (n, g)
        } else {
            (n.div_exact(&g2).unwrap(), g.div_exact(&g2).unwrap())
        };
        Expr::with_unit_den(n, bd.mul(&dd).mul(&g))
    }

    pub fn sub_ref(&self, other: &Expr) -> Expr {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul_ref(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Expr::from_poly(self.num.mul(&other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (
                self.num.div_exact(&g1).unwrap(),
                other.den.div_exact(&g1).unwrap(),
            )
        };
        let (c, b) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (
                other.num.div_exact(&g2).unwrap(),
                self.den.div_exact(&g2).unwrap(),
            )
        };
        Expr::with_unit_den(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Expr::with_unit_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Expr {
        Expr {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn powi(&self, e: i32) -> Result<Expr> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow((-e) as u32))
        }
    }

    /// Sum of many terms with a single final normalization when they share
    /// denominators; falls back to pairwise addition otherwise.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Expr {
        let mut acc = Expr::zero();
        for e in items {
            acc = acc.add_ref(e);
        }
        acc
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::odeparse::print_expr(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::odeparse::print_expr(self))
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Q> for Expr {
    fn from(c: Q) -> Self {
        Expr::constant(c)
    }
}

impl From<VarId> for Expr {
    fn from(v: VarId) -> Self {
        Expr::var(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                self.$inner(rhs)
            }
        }
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$inner(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Div<&Expr> for &Expr {
    type Output = Expr;
    /// Panics on division by zero; use [`Expr::checked_div`] for untrusted input.
    fn div(self, rhs: &Expr) -> Expr {
        self.checked_div(rhs).expect("division by zero expression")
    }
}

impl Div<Expr> for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        &self / &rhs
    }
}

impl Div<&Expr> for Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        &self / rhs
    }
}

impl Div<Expr> for &Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        self / &rhs
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.neg_ref()
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_expansion_cancels() {
        let (x, y) = (Expr::x(), Expr::y());
        let e = (&x + &y).pow(2) - x.pow(2) - Expr::int(2) * &x * &y - y.pow(2);
        assert!(e.is_zero());
    }

    #[test]
    fn gcd_cancellation() {
        let x = Expr::x();
        let e = (x.pow(2) - Expr::one()) / (&x - Expr::one());
        assert_eq!(e, x + Expr::one());
    }

    #[test]
    fn power_of_monomial() {
        let e = (Expr::y().pow(2) / Expr::int(2)).pow(3);
        assert_eq!(e, Expr::y().pow(6) / Expr::int(8));
    }

    #[test]
    fn denominator_unit_is_normalized() {
        let a = Expr::one() / (Expr::int(-2) * Expr::x());
        let b = Expr::frac(-1, 2) / Expr::x();
        assert_eq!(a, b);
        assert!(a.den().lc() > Q::zero());
    }

    #[test]
    fn division_by_zero_reported() {
        assert_eq!(
            Expr::x().checked_div(&Expr::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn addition_with_shared_factor() {
        let x = Expr::x();
        let y = Expr::y();
        let a = Expr::one() / (&x * &y);
        let b = Expr::one() / (&x * (&y + Expr::one()));
        let s = &a + &b;
        let expect = (Expr::int(2) * &y + Expr::one()) / (&x * &y * (&y + Expr::one()));
        assert_eq!(s, expect);
        assert!((s - a - b).is_zero());
    }
}

//! Arithmetic in the residue ring of a triangular set, perfect powers and
//! binomial factorizations used to split branches.

use num_traits::Signed;

use crate::diffalg::{Relation, TriangularSet};
use crate::error::{Error, Result};
use crate::expr::{Expr, Monomial, Poly, VarId, Q};

/// Dense univariate polynomial with coefficients in the lower tower.
type UPoly = Vec<Expr>;

fn trim(mut u: UPoly) -> UPoly {
    while u.last().is_some_and(|c| c.is_zero()) {
        u.pop();
    }
    u
}

/// Normal forms modulo a triangular set whose relations define a tower of
/// field extensions: denominators are inverted, not just cleared.
pub struct Tower<'a> {
    set: &'a TriangularSet,
}

impl<'a> Tower<'a> {
    pub fn new(set: &'a TriangularSet) -> Tower<'a> {
        Tower { set }
    }

    /// The canonical representative of `e`: reduced in every leader, with
    /// leaders absent from denominators. Fails with `DivisionByZero` if a
    /// denominator vanishes, and with `NotInvertible` on a zero divisor.
    pub fn reduce(&self, e: &Expr) -> Result<Expr> {
        self.level(e, self.set.len())
    }

    fn level(&self, e: &Expr, k: usize) -> Result<Expr> {
        if k == 0 {
            return Ok(e.clone());
        }
        let rel = &self.set.relations()[k - 1];
        let v = rel.leader();
        let lower = |c: &Expr| self.level(c, k - 1);
        let to_u = |p: &Poly| -> Result<UPoly> {
            let coeffs = p
                .coeffs_in(v)
                .into_iter()
                .map(|c| lower(&Expr::from_poly(c)))
                .collect::<Result<_>>()?;
            Ok(trim(coeffs))
        };
        let r = trim(rel.coeffs().iter().map(lower).collect::<Result<_>>()?);
        if r.len() < 2 {
            return Err(Error::SeparantVanishes(v.to_string()));
        }
        let num = self.urem(to_u(e.num())?, &r, k)?;
        if !e.den().contains_var(v) {
            let den = lower(&Expr::from_poly(e.den().clone()))?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let inv = lower(&den.inv()?)?;
            let num: UPoly = num
                .iter()
                .map(|c| lower(&(c * &inv)))
                .collect::<Result<_>>()?;
            return Ok(compose(&trim(num), v));
        }
        let den = self.urem(to_u(e.den())?, &r, k)?;
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.uinv(den, &r, k)?;
        let prod = self.umul(&num, &inv, k)?;
        Ok(compose(&self.urem(prod, &r, k)?, v))
    }

    fn umul(&self, a: &UPoly, b: &UPoly, k: usize) -> Result<UPoly> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = vec![Expr::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        let out = out
            .iter()
            .map(|c| self.level(c, k - 1))
            .collect::<Result<_>>()?;
        Ok(trim(out))
    }

    fn divrem(&self, mut a: UPoly, b: &UPoly, k: usize) -> Result<(UPoly, UPoly)> {
        let lb = b.last().expect("nonzero divisor");
        let inv = self.level(&lb.inv()?, k - 1)?;
        let mut q = vec![Expr::zero(); a.len().saturating_sub(b.len()) + 1];
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = self.level(&(a.last().expect("nonempty") * &inv), k - 1)?;
            for (j, bj) in b.iter().enumerate() {
                a[shift + j] = self.level(&(&a[shift + j] - &(&c * bj)), k - 1)?;
            }
            q[shift] = c;
            a.pop();
            a = trim(a);
        }
        Ok((trim(q), a))
    }

    fn urem(&self, a: UPoly, b: &UPoly, k: usize) -> Result<UPoly> {
        Ok(self.divrem(a, b, k)?.1)
    }

    /// Inverse of `d` modulo `r` by the extended Euclidean algorithm.
    fn uinv(&self, d: UPoly, r: &UPoly, k: usize) -> Result<UPoly> {
        let (mut r0, mut r1) = (r.clone(), d);
        let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![Expr::one()]);
        while r1.len() > 1 {
            let (q, rem) = self.divrem(r0, &r1, k)?;
            if rem.is_empty() {
                return Err(Error::NotInvertible);
            }
            let qs = self.umul(&q, &s1, k)?;
            let mut next = s0;
            next.resize(next.len().max(qs.len()), Expr::zero());
            for (i, c) in qs.iter().enumerate() {
                next[i] = self.level(&(&next[i] - c), k - 1)?;
            }
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = trim(next);
        }
        let c = self.level(&r1[0].inv()?, k - 1)?;
        let s = s1
            .iter()
            .map(|x| self.level(&(x * &c), k - 1))
            .collect::<Result<_>>()?;
        Ok(trim(s))
    }
}

fn compose(u: &UPoly, v: &VarId) -> Expr {
    let x = Expr::var(v.clone());
    let mut acc = Expr::zero();
    for c in u.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

/// Reduces each relation's coefficients modulo the relations below it.
pub fn tower_reduce_set(set: &TriangularSet) -> Result<TriangularSet> {
    let mut done: Vec<Relation> = Vec::new();
    for rel in set.relations() {
        let below = TriangularSet::new(set.ranking().clone(), done.clone())?;
        let tower = Tower::new(&below);
        let reduced = rel
            .map_coeffs(|c| tower.reduce(c))?
            .ok_or_else(|| Error::SeparantVanishes(rel.leader().to_string()))?;
        done.push(reduced);
    }
    TriangularSet::new(set.ranking().clone(), done)
}

fn rational_root(c: &Q, d: u32) -> Option<Q> {
    if c.is_negative() {
        return if d % 2 == 1 {
            rational_root(&-c, d).map(|r| -r)
        } else {
            None
        };
    }
    let n = c.numer().nth_root(d);
    let m = c.denom().nth_root(d);
    let r = Q::new(n, m);
    (num_traits::pow(r.clone(), d as usize) == *c).then_some(r)
}

fn monomial_root(m: &Monomial, d: u32) -> Option<Monomial> {
    let mut pairs = Vec::new();
    for (v, e) in m.pairs() {
        if e % d != 0 {
            return None;
        }
        pairs.push((v.clone(), e / d));
    }
    Some(Monomial::from_pairs(pairs))
}

/// The polynomial `r` with `r^d = p` and positive leading coefficient when
/// `d` is even, if it exists.
pub fn poly_root(p: &Poly, d: u32) -> Option<Poly> {
    if d == 1 || p.is_zero() {
        return Some(p.clone());
    }
    let (m0, c0) = p.leading()?;
    let lead = Poly::monomial(monomial_root(m0, d)?, rational_root(c0, d)?);
    let mut r = lead.clone();
    let (lm, lc) = lead.leading().cloned().expect("nonzero");
    let denom_m = Monomial::from_pairs(
        lm.pairs()
            .iter()
            .map(|(v, e)| (v.clone(), e * (d - 1)))
            .collect(),
    );
    let denom_c: Q = num_traits::pow(lc, d as usize - 1) * Q::from_integer(d.into());
    for _ in 0..=p.len() {
        let rest = p.sub(&r.pow(d));
        let Some((m, c)) = rest.leading() else {
            return Some(r);
        };
        if !denom_m.divides(m) {
            return None;
        }
        let t = Poly::monomial(denom_m.quotient_of(m), c / &denom_c);
        r = r.add(&t);
    }
    (r.pow(d) == *p).then_some(r)
}

/// `r` with `r^d = e`, for a rational function `e`.
pub fn expr_root(e: &Expr, d: u32) -> Option<Expr> {
    let n = poly_root(e.num(), d)?;
    let m = poly_root(e.den(), d)?;
    Expr::new(n, m).ok()
}

/// Integer coefficients of the k-th cyclotomic polynomial, ascending.
pub fn cyclotomic(k: u32) -> Vec<i64> {
    // x^k − 1 divided by Φ_j for every proper divisor j
    let mut num = vec![0i64; k as usize + 1];
    num[0] = -1;
    num[k as usize] = 1;
    for j in 1..k {
        if k.is_multiple_of(j) {
            num = int_div(&num, &cyclotomic(j));
        }
    }
    num
}

fn int_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = a[i + db] / b[db];
        q[i] = c;
        for (j, bj) in b.iter().enumerate() {
            a[i + j] -= c * bj;
        }
    }
    q
}

/// Factors `v^(m·e) − s^e` into `Φ_k(v^m, s)` for the divisors `k` of `e`,
/// homogenized. Each factor is returned as a polynomial relation in `v`.
pub fn binomial_factors(v: &VarId, m: u32, e: u32, s: &Expr) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for k in 1..=e {
        if !e.is_multiple_of(k) {
            continue;
        }
        let phi = cyclotomic(k);
        let deg = phi.len() - 1;
        let mut coeffs = vec![Expr::zero(); deg * m as usize + 1];
        for (i, c) in phi.iter().enumerate() {
            coeffs[i * m as usize] = Expr::int(*c) * s.pow((deg - i) as u32);
        }
        out.push(Relation::from_coeffs(v.clone(), coeffs).ok_or(Error::DivisionByZero)?);
    }
    Ok(out)
}

/// Splits a relation whose coefficients are free of unknowns into factors
/// over Q(x, y, p) when it is a shifted binomial `(v + t)^n = c` with `c` a
/// perfect power. Otherwise returns the relation itself.
pub fn split_relation(rel: &Relation) -> Result<Vec<Relation>> {
    let n = rel.degree();
    if n < 2 {
        return Ok(vec![rel.clone()]);
    }
    let monic = rel.monic_form();
    let c = monic.coeffs();
    let v = rel.leader();
    // v = w − t with t = c_{n−1}/n
    let t = &c[n as usize - 1] / Expr::int(n as i64);
    let w = Expr::var(v.clone()) + &t;
    let shifted = monic
        .expr()
        .substitute_one(v, &(Expr::var(v.clone()) - &t))?;
    let sc = shifted.num().coeffs_in(v);
    let den = Expr::from_poly(shifted.den().clone());
    let middle_zero = sc
        .iter()
        .enumerate()
        .all(|(i, p)| i == 0 || i == n as usize || p.is_zero());
    if !middle_zero || sc.len() != n as usize + 1 {
        return Ok(vec![rel.clone()]);
    }
    let lead = Expr::from_poly(sc[n as usize].clone()) / &den;
    let cst = -(Expr::from_poly(sc[0].clone()) / &den) / &lead;
    if cst.is_zero() {
        return Ok(vec![rel.clone()]);
    }
    // w^n = cst with the largest e | n such that cst is an e-th power
    for e in (2..=n).rev() {
        if !n.is_multiple_of(e) {
            continue;
        }
        let Some(s) = expr_root(&cst, e) else {
            continue;
        };
        let factors = binomial_factors(v, n / e, e, &s)?;
        let mut out = Vec::new();
        for f in factors {
            let shifted_back = f.expr().substitute_one(v, &w)?;
            let r = Relation::from_poly(shifted_back.num(), v).ok_or(Error::DivisionByZero)?;
            out.push(r);
        }
        return Ok(out);
    }
    Ok(vec![rel.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::Ranking;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
    }

    #[test]
    fn perfect_powers() {
        let y = Expr::y();
        let e = y.pow(6) / Expr::int(8);
        assert_eq!(expr_root(&e, 3), Some(y.pow(2) / Expr::int(2)));
        let sq = (Expr::x() + Expr::int(2) * &y).pow(2) / Expr::x().pow(4);
        assert_eq!(
            expr_root(&sq, 2),
            Some((Expr::x() + Expr::int(2) * &y) / Expr::x().pow(2))
        );
        assert_eq!(expr_root(&(Expr::x() + Expr::one()), 2), None);
        assert_eq!(expr_root(&(-y.pow(3)), 3), Some(-y.clone()));
        assert_eq!(expr_root(&(-y.pow(2)), 2), None);
    }

    #[test]
    fn splitting_binomials() {
        let y = Expr::y();
        let sq = Relation::monic(VarId::YB, 2, &y.pow(2)).unwrap();
        let parts: Vec<String> = split_relation(&sq)
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect();
        assert_eq!(parts, vec!["yb = y", "yb = -y"]);
        let cube = Relation::monic(VarId::YB, 3, &y.pow(3)).unwrap();
        let parts = split_relation(&cube).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].to_string(), "yb = y");
        assert_eq!(parts[1].degree(), 2);
        // (yb + x)^2 = y^2
        let yb = Expr::var(VarId::YB);
        let shifted = (&yb + Expr::x()).pow(2) - y.pow(2);
        let rel = Relation::from_poly(shifted.num(), &VarId::YB).unwrap();
        let parts: Vec<String> = split_relation(&rel)
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect();
        assert_eq!(parts, vec!["yb = -x + y", "yb = -x - y"]);
        let irreducible = Relation::monic(VarId::YB, 2, &Expr::x()).unwrap();
        assert_eq!(split_relation(&irreducible).unwrap(), vec![irreducible]);
    }

    #[test]
    fn tower_inverts_denominators() {
        // yb^2 = 2y: 1/yb = yb/(2y)
        let set = TriangularSet::new(
            Ranking::barred(),
            vec![Relation::monic(VarId::YB, 2, &(Expr::int(2) * Expr::y())).unwrap()],
        )
        .unwrap();
        let t = Tower::new(&set);
        let yb = Expr::var(VarId::YB);
        assert_eq!(
            t.reduce(&(Expr::one() / &yb)).unwrap(),
            &yb / (Expr::int(2) * Expr::y())
        );
        assert_eq!(
            t.reduce(&yb.pow(3)).unwrap(),
            Expr::int(2) * Expr::y() * &yb
        );
        let e = (yb.pow(4) + Expr::one()) / (&yb + Expr::one());
        let r = t.reduce(&e).unwrap();
        assert!(!r.den().contains_var(&VarId::YB));
        assert_eq!(
            t.reduce(&(r * (&yb + Expr::one()) - Expr::from_poly(e.num().clone())))
                .unwrap(),
            Expr::zero()
        );
    }

    #[test]
    fn tower_two_levels() {
        // xb^2 = x, yb^2 = xb
        let xb = Expr::var(VarId::XB);
        let yb = Expr::var(VarId::YB);
        let set = TriangularSet::new(
            Ranking::barred(),
            vec![
                Relation::monic(VarId::XB, 2, &Expr::x()).unwrap(),
                Relation::monic(VarId::YB, 2, &xb).unwrap(),
            ],
        )
        .unwrap();
        let t = Tower::new(&set);
        assert_eq!(t.reduce(&yb.pow(4)).unwrap(), Expr::x());
        assert_eq!(
            t.reduce(&(Expr::one() / &yb)).unwrap(),
            &xb * &yb / Expr::x()
        );
    }
}

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::var::VarId;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    vars: SmallVec<[(VarId, u32); 4]>,
    deg: u32,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: VarId, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        let mut vars = SmallVec::new();
        vars.push((v, e));
        Monomial { vars, deg: e }
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Monomial {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut vars: SmallVec<[(VarId, u32); 4]> = SmallVec::new();
        for (v, e) in pairs {
            match vars.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => vars.push((v, e)),
            }
        }
        let deg = vars.iter().map(|(_, e)| e).sum();
        Monomial { vars, deg }
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.vars
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        self.vars
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.vars[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = SmallVec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            match self.vars[i].0.cmp(&other.vars[j].0) {
                Ordering::Less => {
                    vars.push(self.vars[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    vars.push(other.vars[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    vars.push((self.vars[i].0.clone(), self.vars[i].1 + other.vars[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend(self.vars[i..].iter().cloned());
        vars.extend(other.vars[j..].iter().cloned());
        Monomial {
            vars,
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.vars.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let pairs = other
            .vars
            .iter()
            .map(|(v, e)| (v.clone(), e - self.exponent(v)))
            .collect();
        Monomial::from_pairs(pairs)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let pairs = self
            .vars
            .iter()
            .map(|(v, e)| (v.clone(), (*e).min(other.exponent(v))))
            .collect();
        Monomial::from_pairs(pairs)
    }

    /// Removes `v` entirely, returning its former exponent.
    pub fn without(&self, v: &VarId) -> (Monomial, u32) {
        match self.vars.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let mut vars = self.vars.clone();
                let (_, e) = vars.remove(i);
                (
                    Monomial {
                        vars,
                        deg: self.deg - e,
                    },
                    e,
                )
            }
            Err(_) => (self.clone(), 0),
        }
    }
}

impl Ord for Monomial {
    /// Graded lex: total degree first, then the exponent of the smallest
    /// variable decides.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.vars.iter().zip(other.vars.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
        self.vars.len().cmp(&other.vars.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients. Terms are kept
/// sorted by decreasing monomial, so the first term is the leading one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(q(n))
    }

    pub fn var(v: VarId) -> Poly {
        Poly {
            terms: vec![(Monomial::var(v, 1), Q::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from unsorted terms, merging duplicates.
    pub fn from_terms(mut terms: Vec<(Monomial, Q)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Q)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Q)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Q {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut s = BTreeSet::new();
        for (m, _) in &self.terms {
            for (v, _) in m.pairs() {
                s.insert(v.clone());
            }
        }
        s
    }

    pub fn contains_var(&self, v: &VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    pub fn degree_in(&self, v: &VarId) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(v))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients with respect to `v`, indexed by exponent.
    pub fn coeffs_in(&self, v: &VarId) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                // removing a variable can break the order only among terms of
                // one bucket; re-sort without merging since monomials stay distinct
                t.sort_by(|a, b| b.0.cmp(&a.0));
                Poly { terms: t }
            })
            .collect()
    }

    pub fn from_coeffs_in(v: &VarId, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(v.clone(), e as u32);
            for (m, k) in &c.terms {
                terms.push((m.mul(&vm), k.clone()));
            }
        }
        let mut p = Poly { terms };
        p.terms.sort_by(|a, b| b.0.cmp(&a.0));
        p
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: &VarId) -> Poly {
        let d = self.degree_in(v);
        let mut terms: Vec<(Monomial, Q)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(v) == d)
            .map(|(m, c)| (m.without(v).0, c.clone()))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() < other.terms.len() {
            return other.mul(self);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            terms: acc
                .into_iter()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn diff(&self, v: &VarId) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let (rest, _) = m.without(v);
            let nm = rest.mul(&Monomial::var(v.clone(), e - 1));
            terms.push((nm, c * q(e as i64)));
        }
        Poly::from_terms(terms)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.recip();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                terms.push((dm.quotient_of(m), c * &inv));
            }
            return Some(Poly { terms });
        }
        let (dm, dc) = &d.terms[0];
        let inv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            if !dm.divides(m) {
                return None;
            }
            let qm = dm.quotient_of(m);
            let qc = c * &inv;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Pseudo-remainder of `self` by `d` with respect to `v`:
    /// `lc_v(d)^k · self = q·d + r` with `deg_v r < deg_v d` and
    /// `k = max(deg_v self − deg_v d + 1, 0)`.
    pub fn prem(&self, d: &Poly, v: &VarId) -> Poly {
        self.prem_exp(d, v).0
    }

    /// Like [`Poly::prem`], also returning the exponent `k` of the multiplier.
    pub fn prem_exp(&self, d: &Poly, v: &VarId) -> (Poly, u32) {
        let dn = d.degree_in(v);
        if dn == 0 {
            return (Poly::zero(), 1);
        }
        let rd0 = self.degree_in(v);
        if self.is_zero() || rd0 < dn {
            return (self.clone(), 0);
        }
        let lcd = d.lc_in(v);
        let k = rd0 - dn + 1;
        let mut r = self.clone();
        let mut e = k;
        while !r.is_zero() {
            let rd = r.degree_in(v);
            if rd < dn {
                break;
            }
            let lcr = r.lc_in(v);
            let t = d
                .mul(&lcr)
                .mul_monomial(&Monomial::var(v.clone(), rd - dn), &Q::one());
            r = r.mul(&lcd).sub(&t);
            e -= 1;
        }
        if e > 0 {
            r = r.mul(&lcd.pow(e));
        }
        (r, k)
    }

    /// Rewrites the polynomial as `scale · primitive` where `primitive` has
    /// coprime integer coefficients and a positive leading coefficient.
    pub fn integer_primitive(&self) -> (Q, Poly) {
        if self.is_zero() {
            return (Q::one(), Poly::zero());
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut scale = BigRational::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            scale = -scale;
        }
        let inv = scale.recip();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * &inv))
            .collect();
        (scale, Poly { terms })
    }

    pub fn eval_rational(&self, point: &dyn Fn(&VarId) -> Option<Q>) -> Result<Q, VarId> {
        let mut cache: BTreeMap<&VarId, Q> = BTreeMap::new();
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                let val = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = point(v).ok_or_else(|| v.clone())?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                t *= num_traits::pow(val, *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", c)?;
            for (v, e) in m.pairs() {
                write!(f, "*{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

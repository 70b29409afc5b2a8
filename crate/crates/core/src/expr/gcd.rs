//! Multivariate polynomial gcd over the rationals.
//!
//! Results are normalized to coprime integer coefficients with a positive
//! leading coefficient. The general case runs a subresultant remainder
//! sequence in a chosen main variable with recursive contents. Before that, a
//! modular evaluation test proves coprimality cheaply, which is by far the
//! common outcome inside rational-function arithmetic.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Monomial, Poly, Q};
use super::var::VarId;

const PRIME: u64 = 2_147_483_647;

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.integer_primitive().1;
    }
    if b.is_zero() {
        return a.integer_primitive().1;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let (m, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let mut g = m.terms()[0].0.clone();
        for (t, _) in other.terms() {
            g = g.gcd(t);
            if g.is_one() {
                break;
            }
        }
        return Poly::monomial(g, Q::one());
    }
    let (ma, a) = split_monomial_content(a);
    let (mb, b) = split_monomial_content(b);
    let mg = ma.gcd(&mb);
    let g = gcd_no_monomial(&a, &b);
    g.mul_monomial(&mg, &Q::one()).integer_primitive().1
}

pub fn gcd_many<'a>(items: impl IntoIterator<Item = &'a Poly>) -> Poly {
    let mut g = Poly::zero();
    for p in items {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn split_monomial_content(p: &Poly) -> (Monomial, Poly) {
    let mut m = p.terms()[0].0.clone();
    for (t, _) in p.terms().iter().skip(1) {
        if m.is_one() {
            break;
        }
        m = m.gcd(t);
    }
    if m.is_one() {
        return (m, p.clone());
    }
    let terms = p
        .terms()
        .iter()
        .map(|(t, c)| (m.quotient_of(t), c.clone()))
        .collect();
    (m, Poly::from_terms(terms))
}

fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let va = a.vars();
    let vb = b.vars();
    // a variable present on one side only divides out through contents
    if let Some(u) = va.difference(&vb).next() {
        return gcd_with_coeffs(b, a, u);
    }
    if let Some(u) = vb.difference(&va).next() {
        return gcd_with_coeffs(a, b, u);
    }
    let a = a.integer_primitive().1;
    let b = b.integer_primitive().1;
    if a == b {
        return a;
    }
    if provably_coprime(&a, &b, &va) {
        return Poly::one();
    }
    let vars: Vec<VarId> = va.iter().cloned().collect();
    if let Some(g) = heuristic_gcd(&to_int(&a), &to_int(&b), &vars) {
        return from_int(g).integer_primitive().1;
    }
    let v = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .expect("nonconstant polynomial has a variable")
        .clone();
    recursive_gcd(&a, &b, &v)
}

type IntPoly = Vec<(Monomial, BigInt)>;

/// Coefficients of a polynomial with integer coefficients.
fn to_int(p: &Poly) -> IntPoly {
    p.terms()
        .iter()
        .map(|(m, c)| (m.clone(), c.to_integer()))
        .collect()
}

fn from_int(p: IntPoly) -> Poly {
    Poly::from_terms(
        p.into_iter()
            .map(|(m, c)| (m, Q::from_integer(c)))
            .collect(),
    )
}

fn int_content(p: &IntPoly) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
}

fn max_norm(p: &IntPoly) -> BigInt {
    p.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

fn int_degree(p: &IntPoly, v: &VarId) -> u32 {
    p.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
}

fn eval_int(p: &IntPoly, v: &VarId, at: &BigInt) -> IntPoly {
    let mut powers = vec![BigInt::one()];
    for _ in 0..int_degree(p, v) {
        let next = powers.last().unwrap() * at;
        powers.push(next);
    }
    let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
    for (m, c) in p {
        let (rest, e) = m.without(v);
        *acc.entry(rest).or_default() += c * &powers[e as usize];
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Inverse of evaluation at `at` using balanced digits.
fn interpolate(g: &IntPoly, v: &VarId, at: &BigInt) -> IntPoly {
    let half = at / 2;
    let mut out = Vec::new();
    for (m, c) in g {
        let mut c = c.clone();
        let mut e = 0;
        while !c.is_zero() {
            let mut r = c.mod_floor(at);
            if r > half {
                r -= at;
            }
            c = (c - &r) / at;
            if !r.is_zero() {
                out.push((m.mul(&Monomial::var(v.clone(), e)), r));
            }
            e += 1;
        }
    }
    out
}

/// Exact quotient over the integers, `None` unless `d` divides `a` in Z[vars].
fn int_div_exact(a: &IntPoly, d: &IntPoly) -> Option<IntPoly> {
    let (dm, dc) = d.iter().max_by(|s, t| s.0.cmp(&t.0))?;
    let mut rem: BTreeMap<Monomial, BigInt> = a.iter().cloned().collect();
    let mut quot = Vec::new();
    while let Some((m, c)) = rem.pop_last() {
        if !dm.divides(&m) {
            return None;
        }
        let (qc, r) = c.div_rem(dc);
        if !r.is_zero() {
            return None;
        }
        let qm = dm.quotient_of(&m);
        for (tm, tc) in d {
            if tm == dm {
                continue;
            }
            let k = qm.mul(tm);
            let v = rem.entry(k.clone()).or_default();
            *v -= &qc * tc;
            if v.is_zero() {
                rem.remove(&k);
            }
        }
        quot.push((qm, qc));
    }
    Some(quot)
}

const HEURISTIC_BITS: u64 = 1_000_000;

/// Heuristic gcd by evaluation at large integers and balanced-digit
/// reconstruction. A candidate is accepted only after trial division, so a
/// returned value is always the true gcd up to sign; `None` means give up.
fn heuristic_gcd(a: &IntPoly, b: &IntPoly, vars: &[VarId]) -> Option<IntPoly> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (ca, cb) = (int_content(a), int_content(b));
    let cg = ca.gcd(&cb);
    let Some((v, rest)) = vars.split_first() else {
        return Some(vec![(Monomial::one(), cg)]);
    };
    let a: IntPoly = a.iter().map(|(m, c)| (m.clone(), c / &ca)).collect();
    let b: IntPoly = b.iter().map(|(m, c)| (m.clone(), c / &cb)).collect();
    let deg = u64::from(int_degree(&a, v).max(int_degree(&b, v))) + 1;
    let mut xi: BigInt = max_norm(&a).min(max_norm(&b)) * 2 + 2;
    for _ in 0..6 {
        if xi.bits() * deg > HEURISTIC_BITS {
            return None;
        }
        let ea = eval_int(&a, v, &xi);
        let eb = eval_int(&b, v, &xi);
        if let Some(gv) = heuristic_gcd(&ea, &eb, rest) {
            let g = interpolate(&gv, v, &xi);
            let k = int_content(&g);
            if !k.is_zero() {
                let g: IntPoly = g.into_iter().map(|(m, c)| (m, c / &k)).collect();
                if int_div_exact(&a, &g).is_some() && int_div_exact(&b, &g).is_some() {
                    return Some(g.into_iter().map(|(m, c)| (m, c * &cg)).collect());
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn gcd_with_coeffs(other: &Poly, p: &Poly, u: &VarId) -> Poly {
    let mut g = other.clone();
    for c in p.coeffs_in(u) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn content_in(p: &Poly, v: &VarId) -> Poly {
    gcd_many(p.coeffs_in(v).iter().filter(|c| !c.is_zero()))
}

fn primitive_in(p: &Poly, v: &VarId) -> Poly {
    let c = content_in(p, v);
    if c.is_constant() {
        return p.integer_primitive().1;
    }
    p.div_exact(&c)
        .expect("content divides")
        .integer_primitive()
        .1
}

fn recursive_gcd(a: &Poly, b: &Poly, v: &VarId) -> Poly {
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = subresultant(&pa, &pb, v);
    c.mul(&g).integer_primitive().1
}

/// Primitive part of the last nonzero subresultant of `a` and `b`, both
/// primitive with respect to `v`.
fn subresultant(a: &Poly, b: &Poly, v: &VarId) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    if b.degree_in(v) == 0 {
        return Poly::one();
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = a.prem(&b, v);
        if r.is_zero() {
            return primitive_in(&b, v);
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        let denom = g.mul(&h.pow(delta));
        b = r.div_exact(&denom).expect("subresultant division is exact");
        g = a.lc_in(v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant scaling is exact"),
        };
    }
}

/// Resultant of `a` and `b` with respect to `v`, up to sign, by the
/// subresultant algorithm.
pub fn resultant(a: &Poly, b: &Poly, v: &VarId) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if db == 0 {
        return b.pow(da);
    }
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    a = a.div_exact(&ca).expect("content divides");
    b = b.div_exact(&cb).expect("content divides");
    let t = ca.pow(db).mul(&cb.pow(da));
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = a.prem(&b, v);
        if r.is_zero() {
            return Poly::zero();
        }
        a = b;
        b = r
            .div_exact(&g.mul(&h.pow(delta)))
            .expect("subresultant division is exact");
        g = a.lc_in(v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant scaling is exact"),
        };
        if b.degree_in(v) == 0 {
            break;
        }
    }
    let n = a.degree_in(v);
    let last = if n == 0 {
        h
    } else {
        b.pow(n)
            .div_exact(&h.pow(n - 1))
            .expect("subresultant scaling is exact")
    };
    t.mul(&last)
}

fn to_mod(c: &Q) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = c.numer().mod_floor(&p).to_u64()?;
    let d = c.denom().mod_floor(&p).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(n * inv_mod(d) % PRIME)
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

/// Image of `p` in `Z_p[v]` after evaluating every other variable.
fn univariate_image(p: &Poly, v: &VarId, point: &dyn Fn(&VarId) -> u64) -> Option<Vec<u64>> {
    let d = p.degree_in(v) as usize;
    let mut out = vec![0u64; d + 1];
    for (m, c) in p.terms() {
        let mut t = to_mod(c)?;
        let mut e_v = 0usize;
        for (w, e) in m.pairs() {
            if w == v {
                e_v = *e as usize;
            } else {
                t = t * pow_mod(point(w), *e as u64) % PRIME;
            }
        }
        out[e_v] = (out[e_v] + t) % PRIME;
    }
    Some(out)
}

fn trim(p: &mut Vec<u64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn uni_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    loop {
        if b.len() == 1 && b[0] == 0 {
            return a.len() - 1;
        }
        // a mod b
        let lb = inv_mod(*b.last().unwrap());
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let shift = a.len() - b.len();
            let factor = a.last().unwrap() * lb % PRIME;
            for (i, bi) in b.iter().enumerate() {
                let sub = factor * bi % PRIME;
                a[i + shift] = (a[i + shift] + PRIME - sub) % PRIME;
            }
            a.pop();
            trim(&mut a);
            if a.is_empty() {
                a.push(0);
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Sound coprimality test: when the leading coefficients survive the
/// evaluation, the gcd image has at least the true degree in `v`, so a
/// degree-0 image in every variable proves the gcd is constant.
fn provably_coprime(a: &Poly, b: &Poly, vars: &BTreeSet<VarId>) -> bool {
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15 ^ (a.len() as u64) << 17 ^ b.len() as u64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        2 + seed % (PRIME - 3)
    };
    let list: Vec<VarId> = vars.iter().cloned().collect();
    let values: Vec<u64> = list.iter().map(|_| next()).collect();
    let point = |w: &VarId| -> u64 {
        let i = list.binary_search(w).expect("variable in set");
        values[i]
    };
    for v in &list {
        let (ia, ib) = match (
            univariate_image(a, v, &point),
            univariate_image(b, v, &point),
        ) {
            (Some(x), Some(y)) => (x, y),
            _ => return false,
        };
        if *ia.last().unwrap() == 0 || *ib.last().unwrap() == 0 {
            return false;
        }
        if uni_gcd_degree(ia, ib) > 0 {
            return false;
        }
    }
    true
}

/// Least common multiple, normalized like [`gcd`].
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    a.div_exact(&g)
        .expect("gcd divides")
        .mul(b)
        .integer_primitive()
        .1
}

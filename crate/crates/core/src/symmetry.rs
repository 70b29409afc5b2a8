//! Point symmetries: determining equations for the generator `ξ ∂x + η ∂y`,
//! completion of linear PDE systems, solution dimensions and signatures.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{gcd, gcd_many, lcm, Expr, Poly, VarId, Q};
use crate::groupoids::{Deriv, Fun, GroupoidId};

/// Highest derivative order considered during completion.
pub const COMPLETION_CAP: u32 = 6;

/// A linear form `Σ c·u` in derivatives `u` of ξ, η with coefficients in Q(x, y).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearForm {
    terms: BTreeMap<Deriv, Expr>,
}

impl LinearForm {
    pub fn zero() -> LinearForm {
        LinearForm::default()
    }

    pub fn term(d: Deriv, c: Expr) -> LinearForm {
        let mut f = LinearForm::zero();
        f.add_term(d, c);
        f
    }

    pub fn add_term(&mut self, d: Deriv, c: Expr) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&d) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(d, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Deriv, Expr> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leader(&self) -> Option<(&Deriv, &Expr)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, d: &Deriv) -> Option<&Expr> {
        self.terms.get(d)
    }

    fn add_scaled(&mut self, other: &LinearForm, k: &Expr) {
        for (d, c) in &other.terms {
            self.add_term(*d, c * k);
        }
    }

    fn scale(&self, k: &Expr) -> LinearForm {
        let mut out = LinearForm::zero();
        out.add_scaled(self, k);
        out
    }

    /// Total derivative in x or y; the coefficients depend on (x, y).
    pub fn differentiate(&self, in_x: bool) -> LinearForm {
        let v = if in_x { VarId::X } else { VarId::Y };
        let mut out = LinearForm::zero();
        for (d, c) in &self.terms {
            out.add_term(*d, c.diff(&v));
            let shifted = if in_x {
                Deriv::new(d.fun, d.dx + 1, d.dy)
            } else {
                Deriv::new(d.fun, d.dx, d.dy + 1)
            };
            out.add_term(shifted, c.clone());
        }
        out
    }

    fn differentiate_by(&self, dx: u32, dy: u32) -> LinearForm {
        let mut out = self.clone();
        for _ in 0..dx {
            out = out.differentiate(true);
        }
        for _ in 0..dy {
            out = out.differentiate(false);
        }
        out
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{d}")?;
            } else {
                write!(f, "({c})*{d}")?;
            }
        }
        Ok(())
    }
}

/// Homogeneous linear equations `form = 0` in ξ, η and their derivatives.
#[derive(Clone, Debug, Default)]
pub struct LinearPdeSystem {
    pub equations: Vec<LinearForm>,
}

impl LinearPdeSystem {
    /// Joins the system with `constraints`, each asserting that a derivative vanishes.
    pub fn with_constraints(&self, constraints: &[Deriv]) -> LinearPdeSystem {
        let mut equations = self.equations.clone();
        equations.extend(
            constraints
                .iter()
                .map(|d| LinearForm::term(*d, Expr::one())),
        );
        LinearPdeSystem { equations }
    }

    pub fn dimension(&self) -> Result<u32> {
        let mut c = Completion::default();
        c.complete(self.equations.clone())?;
        c.parametric_count()
    }
}

/// Determining equations for point symmetries of `y'' = f`, one for each
/// power of p in the numerator of the linearized symmetry condition.
pub fn determining_system(f: &Expr) -> LinearPdeSystem {
    let p = Expr::p();
    let (fx, fy, fp) = (f.diff(&VarId::X), f.diff(&VarId::Y), f.diff(&VarId::P));
    let xi = |dx, dy| Deriv::new(Fun::Xi, dx, dy);
    let eta = |dx, dy| Deriv::new(Fun::Eta, dx, dy);
    let (one, two, three) = (Expr::one(), Expr::int(2), Expr::int(3));
    let p2 = p.pow(2);
    let contributions: Vec<(Deriv, Expr)> = vec![
        (eta(2, 0), one.clone()),
        (eta(1, 1), &two * &p),
        (xi(2, 0), -&p),
        (eta(0, 2), p2.clone()),
        (xi(1, 1), -(&two * &p2)),
        (xi(0, 2), -p.pow(3)),
        (eta(0, 1), f.clone()),
        (xi(1, 0), -(&two * f)),
        (xi(0, 1), -(&three * &p * f)),
        (xi(0, 0), -fx),
        (eta(0, 0), -fy),
        (eta(1, 0), -fp.clone()),
        (eta(0, 1), -(&p * &fp)),
        (xi(1, 0), &p * &fp),
        (xi(0, 1), &p2 * &fp),
    ];
    let mut coeffs: BTreeMap<Deriv, Expr> = BTreeMap::new();
    for (d, c) in contributions {
        let e = coeffs.remove(&d).unwrap_or_else(Expr::zero) + c;
        coeffs.insert(d, e);
    }
    let den = coeffs
        .values()
        .fold(Poly::one(), |acc, c| lcm(&acc, c.den()));
    let den = Expr::from_poly(den);
    let mut by_power: BTreeMap<usize, LinearForm> = BTreeMap::new();
    for (d, c) in &coeffs {
        let cleared = c * &den;
        debug_assert!(cleared.den().is_one());
        for (k, ck) in cleared.num().coeffs_in(&VarId::P).into_iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            by_power
                .entry(k)
                .or_default()
                .add_term(*d, Expr::from_poly(ck));
        }
    }
    let equations = by_power.into_values().filter(|e| !e.is_zero()).collect();
    LinearPdeSystem { equations }
}

/// Solution dimension of the determining system restricted to a groupoid.
pub fn dimension(sys: &LinearPdeSystem, extra: &[Deriv]) -> Result<u32> {
    sys.with_constraints(extra).dimension()
}

/// `ka·a − kb·b`.
fn combine(a: &LinearForm, ka: &Expr, b: &LinearForm, kb: &Expr) -> LinearForm {
    let mut out = a.scale(ka);
    out.add_scaled(b, &-kb);
    out
}

/// The form with denominators cleared and the content of its coefficients
/// removed, leading coefficient positive.
fn primitive(f: &LinearForm) -> LinearForm {
    if f.is_zero() {
        return f.clone();
    }
    let den = f
        .terms
        .values()
        .fold(Poly::one(), |acc, c| lcm(&acc, c.den()));
    let den = Expr::from_poly(den);
    let nums: Vec<Poly> = f.terms.values().map(|c| (c * &den).num().clone()).collect();
    let content = gcd_many(nums.iter());
    let nums: Vec<Poly> = nums
        .iter()
        .map(|n| n.div_exact(&content).expect("content divides"))
        .collect();
    // integer content across all coefficients
    let (mut num_gcd, mut den_lcm) = (BigInt::zero(), BigInt::one());
    for (_, c) in nums.iter().flat_map(|n| n.terms()) {
        num_gcd = num_gcd.gcd(c.numer());
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut scale = Q::new(den_lcm, num_gcd);
    if nums.last().expect("nonzero").lc() < Q::zero() {
        scale = -scale;
    }
    let mut out = LinearForm::zero();
    for (d, n) in f.terms.keys().zip(nums) {
        out.terms.insert(*d, Expr::from_poly(n.scale(&scale)));
    }
    out
}

/// Multipliers `(ka, kb)` with `ka·a = kb·b` of least degree.
fn cofactors(a: &Expr, b: &Expr) -> (Expr, Expr) {
    let g = gcd(a.num(), b.num());
    let q = |e: &Expr| Expr::from_poly(e.num().div_exact(&g).expect("gcd divides"));
    (q(b), q(a))
}

/// Completion with polynomial coefficients: solved forms keep their leading
/// coefficient, and eliminations are fraction-free.
#[derive(Default)]
struct Completion {
    solved: BTreeMap<Deriv, LinearForm>,
    prolonged: HashMap<Deriv, LinearForm>,
}

impl Completion {
    fn leader_below(&self, d: &Deriv) -> Option<Deriv> {
        self.solved.keys().find(|l| d.is_derivative_of(l)).copied()
    }

    fn solved_form_for(&mut self, d: &Deriv) -> LinearForm {
        if let Some(f) = self.solved.get(d) {
            return f.clone();
        }
        if let Some(f) = self.prolonged.get(d) {
            return f.clone();
        }
        let l = self.leader_below(d).expect("principal derivative");
        let f = self.solved[&l].differentiate_by(d.dx - l.dx, d.dy - l.dy);
        self.prolonged.insert(*d, f.clone());
        f
    }

    fn reduce(&mut self, eq: LinearForm) -> LinearForm {
        self.reduce_except(eq, None)
    }

    /// Reduces every term except `keep`, which stays as it is.
    fn reduce_except(&mut self, eq: LinearForm, keep: Option<Deriv>) -> LinearForm {
        let mut eq = primitive(&eq);
        loop {
            let target = eq
                .terms
                .iter()
                .rev()
                .find(|(d, _)| Some(**d) != keep && self.leader_below(d).is_some())
                .map(|(d, c)| (*d, c.clone()));
            let Some((d, c)) = target else {
                return eq;
            };
            let f = self.solved_form_for(&d);
            let (ka, kb) = cofactors(&c, f.coeff(&d).expect("leading term"));
            eq = primitive(&combine(&eq, &ka, &f, &kb));
        }
    }

    fn insert(&mut self, eq: LinearForm) -> Vec<LinearForm> {
        let lead = *eq.leader().expect("nonzero").0;
        let displaced: Vec<Deriv> = self
            .solved
            .keys()
            .filter(|l| l.is_derivative_of(&lead))
            .copied()
            .collect();
        let mut requeue: Vec<LinearForm> = displaced
            .iter()
            .map(|l| self.solved.remove(l).expect("present"))
            .collect();
        self.solved.insert(lead, eq);
        self.prolonged.clear();
        // keep every tail reduced with respect to the new leader
        let stale: Vec<Deriv> = self
            .solved
            .iter()
            .filter(|(l, f)| {
                **l != lead && f.terms.keys().any(|d| d != *l && d.is_derivative_of(&lead))
            })
            .map(|(l, _)| *l)
            .collect();
        for l in stale {
            let f = self.solved.remove(&l).expect("present");
            let f = self.reduce_except(f, Some(l));
            self.solved.insert(l, f);
            self.prolonged.clear();
        }
        // compatibility conditions with every other leader of the same function
        for other in self.solved.keys().copied().collect::<Vec<_>>() {
            if other == lead || other.fun != lead.fun {
                continue;
            }
            let (mx, my) = (lead.dx.max(other.dx), lead.dy.max(other.dy));
            let top = Deriv::new(lead.fun, mx, my);
            let a = self.solved[&lead].differentiate_by(mx - lead.dx, my - lead.dy);
            let b = self.solved[&other].differentiate_by(mx - other.dx, my - other.dy);
            let (kb, ka) = cofactors(
                b.coeff(&top).expect("leading term"),
                a.coeff(&top).expect("leading term"),
            );
            requeue.push(combine(&b, &kb, &a, &ka));
        }
        requeue
    }

    fn complete(&mut self, equations: Vec<LinearForm>) -> Result<()> {
        let mut queue = equations;
        // process low-order equations first so that leaders stay minimal
        queue.sort_by(|a, b| b.leader().map(|l| *l.0).cmp(&a.leader().map(|l| *l.0)));
        while let Some(eq) = queue.pop() {
            let r = self.reduce(eq);
            let Some((lead, _)) = r.leader() else {
                continue;
            };
            if lead.order() > COMPLETION_CAP {
                return Err(Error::CompletionDiverged(COMPLETION_CAP));
            }
            let mut more = self.insert(r);
            for e in &more {
                if e.leader()
                    .is_some_and(|(l, _)| l.order() > 2 * COMPLETION_CAP)
                {
                    return Err(Error::CompletionDiverged(COMPLETION_CAP));
                }
            }
            queue.append(&mut more);
            queue.sort_by(|a, b| b.leader().map(|l| *l.0).cmp(&a.leader().map(|l| *l.0)));
        }
        Ok(())
    }

    /// Derivatives of order ≤ cap that are not derivatives of a leader.
    fn parametric_count(&self) -> Result<u32> {
        let mut n = 0;
        for fun in [Fun::Xi, Fun::Eta] {
            for order in 0..=COMPLETION_CAP {
                for dx in 0..=order {
                    let d = Deriv::new(fun, dx, order - dx);
                    if self.leader_below(&d).is_none() {
                        if order == COMPLETION_CAP {
                            return Err(Error::CompletionDiverged(COMPLETION_CAP));
                        }
                        n += 1;
                    }
                }
            }
        }
        Ok(n)
    }
}

/// Symmetry dimensions `d1…d7` relative to Φ1…Φ7.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub d: [u32; 7],
}

impl Signature {
    pub fn new(d: [u32; 7]) -> Signature {
        Signature { d }
    }

    pub fn get(&self, g: GroupoidId) -> u32 {
        self.d[g.index() - 1]
    }

    /// `(d1, d3, d5)`.
    pub fn s1(&self) -> (u32, u32, u32) {
        (self.d[0], self.d[2], self.d[4])
    }

    /// `(d2, d4, d6)`.
    pub fn s2(&self) -> (u32, u32, u32) {
        (self.d[1], self.d[3], self.d[5])
    }

    pub fn d7(&self) -> u32 {
        self.d[6]
    }

    pub fn matches(&self, other: &Signature) -> bool {
        self.d7() == other.d7() && (self.s1() == other.s1() || self.s2() == other.s2())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.d;
        write!(
            f,
            "(({},{},{}),({},{},{}),{})",
            d[0], d[2], d[4], d[1], d[3], d[5], d[6]
        )
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Signature> {
        let bad = |message: &str| Error::Syntax {
            column: 1,
            message: message.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("((")
            .and_then(|r| r.split_once("),("))
            .ok_or_else(|| bad("expected ((a,b,c),(d,e,f),g)"))?;
        let (first, rest) = inner;
        let (second, last) = rest
            .split_once("),")
            .ok_or_else(|| bad("expected ((a,b,c),(d,e,f),g)"))?;
        let last = last
            .strip_suffix(')')
            .ok_or_else(|| bad("missing closing parenthesis"))?;
        let nums = |part: &str| -> Result<Vec<u32>> {
            part.split(',')
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| bad(&format!("not a dimension: '{t}'")))
                })
                .collect()
        };
        let (a, b, g) = (nums(first)?, nums(second)?, nums(last)?);
        if a.len() != 3 || b.len() != 3 || g.len() != 1 {
            return Err(bad("expected ((a,b,c),(d,e,f),g)"));
        }
        Ok(Signature::new([a[0], b[0], a[1], b[1], a[2], b[2], g[0]]))
    }
}

/// Computes all seven dimensions; they are independent and run in parallel.
pub fn signature(f: &Expr) -> Result<Signature> {
    let sys = determining_system(f);
    let dims: Vec<u32> = GroupoidId::ALL
        .par_iter()
        .map(|g| dimension(&sys, &g.groupoid().infinitesimal_constraints()))
        .collect::<Result<_>>()?;
    let mut d = [0; 7];
    d.copy_from_slice(&dims);
    Ok(Signature::new(d))
}

pub fn matches(s: &Signature, t: &Signature) -> bool {
    s.matches(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odeparse::parse_rhs;

    fn rhs(s: &str) -> Expr {
        parse_rhs(s).unwrap()
    }

    #[test]
    fn free_particle_determining_equations() {
        let sys = determining_system(&Expr::zero());
        let shown: Vec<String> = sys.equations.iter().map(|e| e.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "eta_xx",
                "(-1)*xi_xx + (2)*eta_xy",
                "(-2)*xi_xy + eta_yy",
                "(-1)*xi_yy"
            ]
        );
    }

    #[test]
    fn p_free_component_for_painleve_type() {
        let f = rhs("6*y^2 + x");
        let sys = determining_system(&f);
        let e0 = &sys.equations[0];
        let y = Expr::y();
        assert_eq!(e0.coeff(&Deriv::new(Fun::Eta, 2, 0)), Some(&Expr::one()));
        assert_eq!(
            e0.coeff(&Deriv::new(Fun::Eta, 0, 0)),
            Some(&(Expr::int(-12) * &y))
        );
        assert_eq!(e0.coeff(&Deriv::new(Fun::Eta, 0, 1)), Some(&f));
        assert_eq!(
            e0.coeff(&Deriv::new(Fun::Xi, 1, 0)),
            Some(&(Expr::int(-2) * &f))
        );
        assert_eq!(e0.coeff(&Deriv::new(Fun::Xi, 0, 0)), Some(&Expr::int(-1)));
        assert_eq!(e0.terms().len(), 5);
    }

    #[test]
    fn rational_rhs_gives_polynomial_coefficients() {
        let f = rhs("(y^2 + x*y)/x^5");
        for e in determining_system(&f).equations {
            assert!(e.terms().values().all(|c| c.is_polynomial()));
        }
    }

    #[test]
    fn dimensions() {
        let sys = determining_system(&Expr::zero());
        assert_eq!(dimension(&sys, &[]).unwrap(), 8);
        let ray = determining_system(&rhs("-y'^4 - y"));
        let c = |g: GroupoidId| g.groupoid().infinitesimal_constraints();
        assert_eq!(dimension(&ray, &c(GroupoidId::Phi1)).unwrap(), 0);
        assert_eq!(dimension(&ray, &c(GroupoidId::Phi3)).unwrap(), 1);
        assert_eq!(dimension(&ray, &c(GroupoidId::Phi7)).unwrap(), 1);
        let emden = determining_system(&rhs("1/(x*y^2)"));
        assert_eq!(dimension(&emden, &c(GroupoidId::Phi3)).unwrap(), 0);
    }

    #[test]
    fn signatures() {
        let ray = signature(&rhs("-y'^4 - y")).unwrap();
        assert_eq!(ray.to_string(), "((0,1,1),(1,1,1),1)");
        assert_eq!(signature(&rhs("6*y^2 + x")).unwrap().d7(), 0);
        assert_eq!(signature(&Expr::zero()).unwrap().d7(), 8);
    }

    #[test]
    fn signature_text_round_trip() {
        let s: Signature = "((0,1,1),(1,1,1),1)".parse().unwrap();
        assert_eq!(s.d, [0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
        assert!("((0,1),(1,1,1),1)".parse::<Signature>().is_err());
        assert!("(0,1,1),(1,1,1),1".parse::<Signature>().is_err());
    }

    #[test]
    fn matching_rule() {
        let s: Signature = "((0,1,1),(1,1,1),1)".parse().unwrap();
        let t: Signature = "((0,1,1),(0,0,0),1)".parse().unwrap();
        let u: Signature = "((0,1,1),(1,1,1),2)".parse().unwrap();
        assert!(matches(&s, &s));
        assert!(matches(&s, &t) && matches(&t, &s));
        assert!(!matches(&s, &u));
    }
}

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::ranking::Ranking;
use crate::error::{Error, Result};
use crate::expr::{lcm, Bindings, Expr, Poly, VarId};
use crate::odeparse::print_expr;

/// `c_d·v^d + … + c_1·v + c_0 = 0` with coefficients free of the leader `v`.
///
/// Coefficients are stored in ascending degree order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    leader: VarId,
    coeffs: Vec<Expr>,
}

impl Relation {
    /// Builds a relation from coefficients, dropping vanishing top terms.
    /// Returns `None` when nothing of positive degree remains.
    pub fn from_coeffs(leader: VarId, mut coeffs: Vec<Expr>) -> Option<Relation> {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return None;
        }
        Some(Relation { leader, coeffs })
    }

    /// The polynomial `p` seen as a relation in `leader`.
    pub fn from_poly(p: &Poly, leader: &VarId) -> Option<Relation> {
        let (_, p) = p.integer_primitive();
        let coeffs = p
            .coeffs_in(leader)
            .into_iter()
            .map(Expr::from_poly)
            .collect();
        Relation::from_coeffs(leader.clone(), coeffs)
    }

    /// `v^d = rhs`, where `rhs` is polynomial in `v` of degree below `d`.
    pub fn monic(leader: VarId, degree: u32, rhs: &Expr) -> Result<Relation> {
        if rhs.den().contains_var(&leader) {
            return Err(Error::Unsupported(format!(
                "denominator of the relation for {leader} depends on it"
            )));
        }
        if rhs.num().degree_in(&leader) >= degree {
            return Err(Error::Unsupported(format!(
                "right-hand side degree in {leader} is not below {degree}"
            )));
        }
        let den = Expr::from_poly(rhs.den().clone());
        let mut coeffs: Vec<Expr> = vec![Expr::zero(); degree as usize + 1];
        for (i, c) in rhs.num().coeffs_in(&leader).into_iter().enumerate() {
            coeffs[i] = -(Expr::from_poly(c) / &den);
        }
        coeffs[degree as usize] = Expr::one();
        Ok(Relation { leader, coeffs })
    }

    /// `v = value`.
    pub fn solved_for(leader: VarId, value: &Expr) -> Relation {
        Relation {
            leader,
            coeffs: vec![-value.clone(), Expr::one()],
        }
    }

    pub fn leader(&self) -> &VarId {
        &self.leader
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn initial(&self) -> &Expr {
        self.coeffs
            .last()
            .expect("relation has a leading coefficient")
    }

    /// The relation with denominators cleared, as a primitive polynomial.
    pub fn poly(&self) -> Poly {
        let mut l = Poly::one();
        for c in &self.coeffs {
            if !c.den().is_one() {
                l = lcm(&l, c.den());
            }
        }
        let mut parts = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let scaled = if c.den().is_one() {
                c.num().mul(&l)
            } else {
                c.num()
                    .mul(&l.div_exact(c.den()).expect("lcm is a multiple"))
            };
            parts.push(scaled);
        }
        Poly::from_coeffs_in(&self.leader, &parts)
            .integer_primitive()
            .1
    }

    pub fn expr(&self) -> Expr {
        let v = Expr::var(self.leader.clone());
        let mut acc = Expr::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc + c * v.pow(i as u32);
        }
        acc
    }

    pub fn separant(&self) -> Expr {
        self.expr().diff(&self.leader)
    }

    /// The value of the leader when the relation is linear.
    pub fn solved(&self) -> Option<Expr> {
        if self.degree() == 1 {
            Some(-(&self.coeffs[0] / &self.coeffs[1]))
        } else {
            None
        }
    }

    /// Right-hand side of the monic form `v^d = rhs`.
    pub fn monic_rhs(&self) -> Expr {
        let d = self.degree() as usize;
        let v = Expr::var(self.leader.clone());
        let init = &self.coeffs[d];
        let mut acc = Expr::zero();
        for i in 0..d {
            acc = acc - (&self.coeffs[i] / init) * v.pow(i as u32);
        }
        acc
    }

    pub fn monic_form(&self) -> Relation {
        let init = self.initial().clone();
        let coeffs = self.coeffs.iter().map(|c| c / &init).collect();
        Relation {
            leader: self.leader.clone(),
            coeffs,
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut s = BTreeSet::new();
        for c in &self.coeffs {
            s.extend(c.vars());
        }
        s
    }

    /// Substitutes into the coefficients. `Ok(None)` when the relation
    /// degenerates to degree 0.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Option<Relation>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute(bindings))
            .collect::<Result<Vec<_>>>()?;
        Ok(Relation::from_coeffs(self.leader.clone(), coeffs))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Expr) -> Result<Expr>) -> Result<Option<Relation>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Relation::from_coeffs(self.leader.clone(), coeffs))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = if self.degree() == 1 {
            self.leader.to_string()
        } else {
            format!("{}^{}", self.leader, self.degree())
        };
        write!(f, "{} = {}", lhs, print_expr(&self.monic_rhs()))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Relations with distinct leaders, sorted by increasing leader rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularSet {
    relations: Vec<Relation>,
    ranking: Ranking,
}

impl TriangularSet {
    pub fn new(ranking: Ranking, mut relations: Vec<Relation>) -> Result<TriangularSet> {
        relations.sort_by(|a, b| ranking.cmp(a.leader(), b.leader()));
        for w in relations.windows(2) {
            if ranking.cmp(w[0].leader(), w[1].leader()) == Ordering::Equal {
                return Err(Error::Unsupported(format!(
                    "two relations share the leader {}",
                    w[0].leader()
                )));
            }
        }
        for r in &relations {
            if ranking.is_parameter(r.leader()) {
                return Err(Error::Unsupported(format!(
                    "leader {} is a parameter of the ranking",
                    r.leader()
                )));
            }
            for v in r.vars() {
                if !ranking.is_parameter(&v) && ranking.cmp(&v, r.leader()) != Ordering::Less {
                    return Err(Error::Unsupported(format!(
                        "coefficient of the relation for {} involves {}",
                        r.leader(),
                        v
                    )));
                }
            }
        }
        Ok(TriangularSet { relations, ranking })
    }

    pub fn empty(ranking: Ranking) -> TriangularSet {
        TriangularSet {
            relations: Vec::new(),
            ranking,
        }
    }

    pub fn from_polys(ranking: Ranking, polys: &[Poly]) -> Result<TriangularSet> {
        let mut rels = Vec::new();
        for p in polys {
            let leader = ranking
                .leader(p)
                .ok_or_else(|| Error::Unsupported("polynomial without a leader".into()))?;
            rels.push(Relation::from_poly(p, &leader).expect("leader occurs"));
        }
        TriangularSet::new(ranking, rels)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn get(&self, leader: &VarId) -> Option<&Relation> {
        self.relations.iter().find(|r| r.leader() == leader)
    }

    pub fn leaders(&self) -> Vec<VarId> {
        self.relations.iter().map(|r| r.leader().clone()).collect()
    }

    pub fn is_leader(&self, v: &VarId) -> bool {
        self.relations.iter().any(|r| r.leader() == v)
    }

    /// Product of the relation degrees.
    pub fn degree(&self) -> u64 {
        self.relations.iter().map(|r| r.degree() as u64).product()
    }

    pub fn is_quasi_linear(&self) -> bool {
        self.relations.iter().all(|r| r.degree() == 1)
    }

    /// `(dim, deg)` of the finite system in `unknowns`: unknowns that are
    /// not leaders are free, and the degree is the product of the degrees.
    pub fn dim_and_deg(&self, unknowns: &[VarId]) -> Result<(usize, u64)> {
        for l in self.leaders() {
            if !unknowns.contains(&l) {
                return Err(Error::LeaderOutsideUnknowns(l.to_string()));
            }
        }
        Ok((unknowns.len() - self.relations.len(), self.degree()))
    }

    /// Replaces (or inserts) the relation for `r.leader()`.
    pub fn with_relation(&self, r: Relation) -> Result<TriangularSet> {
        let mut rels: Vec<Relation> = self
            .relations
            .iter()
            .filter(|x| x.leader() != r.leader())
            .cloned()
            .collect();
        rels.push(r);
        TriangularSet::new(self.ranking.clone(), rels)
    }

    pub fn push(&mut self, r: Relation) -> Result<()> {
        *self = self.with_relation(r)?;
        Ok(())
    }
}

impl fmt::Display for TriangularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.relations.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")
    }
}

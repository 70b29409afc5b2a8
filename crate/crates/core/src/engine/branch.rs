use std::fmt;

use crate::cartan::{functionally_independent, Specializer};
use crate::diffalg::{reduces_to_zero, ImplicitDerivation, Relation, TriangularSet};
use crate::error::{Error, Result};
use crate::expr::{bar, gcd, BarKind, Bindings, Expr, Partial, TotalDerivative, VarId};

use super::chgt::{invariant_values, parameter_value};
use super::table::TargetEntry;
use super::tower::{split_relation, Tower};

/// A candidate change of coordinates: relations in x̄, ȳ, p̄ over Q(x, y, p).
#[derive(Clone, Debug, PartialEq)]
pub struct TransformationBranch {
    pub relations: TriangularSet,
    /// Root choices made while splitting, one per split relation.
    pub note: Vec<String>,
}

impl TransformationBranch {
    pub fn is_explicit(&self) -> bool {
        self.relations.is_quasi_linear()
    }

    pub fn degree(&self) -> u64 {
        self.relations.degree()
    }

    /// The value of `v` when its relation is linear.
    pub fn value(&self, v: &VarId) -> Option<Expr> {
        self.relations.get(v).and_then(Relation::solved)
    }
}

impl fmt::Display for TransformationBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.relations)
    }
}

fn no_candidate(e: &Error) -> bool {
    matches!(
        e,
        Error::ParameterAbsent
            | Error::DivisionByZero
            | Error::NotIndependent
            | Error::SeparantVanishes(_)
    )
}

/// Specializes the necessary form of `entry` on the source equation `f`.
/// `Ok(None)` means the entry cannot match `f`.
pub fn specialize_entry(entry: &TargetEntry, f: &Expr) -> Result<Option<TransformationBranch>> {
    if entry.is_signature_only() {
        return Ok(None);
    }
    match specialize_inner(entry, f) {
        Err(e) if no_candidate(&e) => Ok(None),
        other => other,
    }
}

fn specialize_inner(entry: &TargetEntry, f: &Expr) -> Result<Option<TransformationBranch>> {
    let a = parameter_value(&entry.normalizations, f)?;
    let mut s = Specializer::new(f)?;
    let mut rels = Vec::new();
    for rel in entry.necessary_form.relations() {
        let mut coeffs = Vec::with_capacity(rel.coeffs().len());
        for c in rel.coeffs() {
            let mut v = s.expr(c)?;
            if let Some(a) = &a {
                v = v.substitute_one(&VarId::A, a)?;
            }
            if v.contains_var(&VarId::A) {
                return Ok(None);
            }
            coeffs.push(v);
        }
        let Some(r) = Relation::from_coeffs(rel.leader().clone(), coeffs) else {
            return Ok(None);
        };
        if r.degree() != rel.degree() {
            return Ok(None);
        }
        if r.degree() > 1 {
            let p = r.poly();
            if gcd(&p, &p.diff(r.leader())).degree_in(r.leader()) > 0 {
                return Ok(None);
            }
        }
        rels.push(r);
    }
    if !entry.invariants.is_empty() {
        let values = match invariant_values(&entry.invariants, &entry.normalizations, f) {
            Ok(v) => v,
            Err(Error::Unsupported(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if let [x, y, z] = values.as_slice() {
            if !functionally_independent(&[x.clone(), y.clone(), z.clone()])? {
                return Ok(None);
            }
        }
    }
    let relations = TriangularSet::new(entry.necessary_form.ranking().clone(), rels)?;
    Ok(Some(TransformationBranch {
        relations,
        note: Vec::new(),
    }))
}

fn free_of_unknowns(r: &Relation) -> bool {
    r.coeffs()
        .iter()
        .all(|c| !c.contains_any(|v| matches!(v, VarId::Barred(_))))
}

/// Splits a branch along rational factors of its relations, lowest leader
/// first. Components whose relations collapse are dropped; explicit
/// components come first.
pub fn split_branch(branch: &TransformationBranch) -> Result<Vec<TransformationBranch>> {
    let ranking = branch.relations.ranking().clone();
    let mut comps: Vec<(Vec<Relation>, Vec<String>)> = vec![(Vec::new(), branch.note.clone())];
    for rel in branch.relations.relations() {
        let mut next = Vec::new();
        for (done, note) in comps {
            let below = TriangularSet::new(ranking.clone(), done.clone())?;
            let tower = Tower::new(&below);
            let reduced = match rel.map_coeffs(|c| tower.reduce(c)) {
                Ok(Some(r)) if r.degree() == rel.degree() => r,
                Ok(_)
                | Err(Error::DivisionByZero | Error::NotInvertible | Error::SeparantVanishes(_)) => {
                    continue
                }
                Err(e) => return Err(e),
            };
            if reduced.degree() < 2 || !free_of_unknowns(&reduced) {
                let mut done = done;
                done.push(reduced);
                next.push((done, note));
                continue;
            }
            let factors = split_relation(&reduced)?;
            let many = factors.len() > 1;
            for factor in factors {
                let mut done = done.clone();
                let mut note = note.clone();
                if many {
                    note.push(format!("{factor} from {}", reduced.monic_form()));
                }
                done.push(factor);
                next.push((done, note));
            }
        }
        comps = next;
    }
    let mut out = Vec::new();
    for (rels, note) in comps {
        out.push(TransformationBranch {
            relations: TriangularSet::new(ranking.clone(), rels)?,
            note,
        });
    }
    out.sort_by_key(|b| !b.is_explicit());
    Ok(out)
}

fn implicit_value(d: &ImplicitDerivation<'_>, v: VarId) -> Result<Expr> {
    d.apply(&Expr::var(v))
}

/// Checks, modulo the branch relations, that the branch lies in the entry's
/// groupoid, satisfies the contact condition and maps `y'' = f` onto the
/// entry's equation.
pub fn verify(f: &Expr, branch: &TransformationBranch, entry: &TargetEntry) -> Result<bool> {
    let set = &branch.relations;
    for v in [VarId::XB, VarId::YB, VarId::PB] {
        if !set.is_leader(&v) {
            return Err(Error::LeaderOutsideUnknowns(v.to_string()));
        }
    }
    let (px, py, pp) = (Partial(VarId::X), Partial(VarId::Y), Partial(VarId::P));
    let dp = ImplicitDerivation::new(set, &pp)?;
    for v in [VarId::XB, VarId::YB] {
        if !implicit_value(&dp, v)?.is_zero() {
            return Ok(false);
        }
    }
    let dx = ImplicitDerivation::new(set, &px)?;
    let dy = ImplicitDerivation::new(set, &py)?;
    let mut jets = Bindings::new();
    for (kind, v) in [(BarKind::X, VarId::XB), (BarKind::Y, VarId::YB)] {
        jets.insert(
            VarId::barred_jet(kind, 1, 0),
            implicit_value(&dx, v.clone())?,
        );
        jets.insert(VarId::barred_jet(kind, 0, 1), implicit_value(&dy, v)?);
    }
    let g = entry.groupoid.groupoid();
    for eq in g.defining_equations() {
        if !reduces_to_zero(&eq.substitute(&jets)?, set)? {
            return Ok(false);
        }
    }
    for ineq in g.inequations() {
        if reduces_to_zero(&ineq.substitute(&jets)?, set)? {
            return Ok(false);
        }
    }
    let total = TotalDerivative::new(f.clone());
    let d = ImplicitDerivation::new(set, &total)?;
    let dxb = implicit_value(&d, VarId::XB)?;
    let dyb = implicit_value(&d, VarId::YB)?;
    let dpb = implicit_value(&d, VarId::PB)?;
    if !reduces_to_zero(&(Expr::var(VarId::PB) * &dxb - dyb), set)? {
        return Ok(false);
    }
    reduces_to_zero(&(dpb - bar(&entry.rhs)? * dxb), set)
}

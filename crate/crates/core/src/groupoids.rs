//! The seven transformation groupoids Φ1–Φ7 acting on (x, y), their defining
//! systems, prolongation to y′ and y″, and linearized constraints.

use std::fmt;
use std::str::FromStr;

use crate::diffalg::{normal_form_expr, Ranking, Relation, TriangularSet};
use crate::error::{Error, Result};
use crate::expr::{barred_jet, BarKind, Derivation, Expr, TotalDerivative, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupoidId {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    Phi5,
    Phi6,
    Phi7,
}

impl GroupoidId {
    pub const ALL: [GroupoidId; 7] = [
        GroupoidId::Phi1,
        GroupoidId::Phi2,
        GroupoidId::Phi3,
        GroupoidId::Phi4,
        GroupoidId::Phi5,
        GroupoidId::Phi6,
        GroupoidId::Phi7,
    ];

    /// 1 for Φ1, …, 7 for Φ7.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(i: usize) -> Option<GroupoidId> {
        GroupoidId::ALL.get(i.checked_sub(1)?).copied()
    }

    pub fn groupoid(self) -> Groupoid {
        Groupoid::new(self)
    }

    /// Groupoids known to contain this one, nearest first.
    pub fn supersets(self) -> &'static [GroupoidId] {
        use GroupoidId::*;
        match self {
            Phi1 => &[Phi3, Phi5, Phi7],
            Phi3 => &[Phi5, Phi7],
            Phi5 => &[Phi7],
            Phi2 => &[Phi4, Phi6, Phi7],
            Phi4 => &[Phi6, Phi7],
            Phi6 => &[Phi7],
            Phi7 => &[],
        }
    }
}

impl fmt::Display for GroupoidId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi{}", self.index())
    }
}

impl FromStr for GroupoidId {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupoidId> {
        s.strip_prefix("phi")
            .and_then(|d| d.parse::<usize>().ok())
            .and_then(GroupoidId::from_index)
            .ok_or_else(|| Error::Syntax {
                column: 1,
                message: format!("unknown groupoid '{s}'"),
            })
    }
}

/// How one target coordinate depends on the source coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordForm {
    /// x̄ = x (resp. ȳ = y).
    Identity,
    /// x̄ = x + C.
    Shift,
    /// x̄ = ξ(x) (resp. ȳ = η(y)).
    OwnVariable,
    /// x̄ = ξ(x, y).
    Free,
}

/// Unknown function of the infinitesimal generator `ξ ∂x + η ∂y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fun {
    Xi,
    Eta,
}

/// The derivative `∂x^dx ∂y^dy` of ξ or η.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Deriv {
    pub fun: Fun,
    pub dx: u32,
    pub dy: u32,
}

impl Deriv {
    pub fn new(fun: Fun, dx: u32, dy: u32) -> Deriv {
        Deriv { fun, dx, dy }
    }

    pub fn order(&self) -> u32 {
        self.dx + self.dy
    }

    /// Whether `self` is `∂x^i ∂y^j` of `other` for some i, j ≥ 0.
    pub fn is_derivative_of(&self, other: &Deriv) -> bool {
        self.fun == other.fun && self.dx >= other.dx && self.dy >= other.dy
    }
}

/// Orderly: total order first, then the number of x-derivatives, then η ≻ ξ.
impl Ord for Deriv {
    fn cmp(&self, other: &Deriv) -> std::cmp::Ordering {
        (self.order(), self.dx, self.fun).cmp(&(other.order(), other.dx, other.fun))
    }
}

impl PartialOrd for Deriv {
    fn partial_cmp(&self, other: &Deriv) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.fun {
            Fun::Xi => "xi",
            Fun::Eta => "eta",
        })?;
        if self.order() > 0 {
            f.write_str("_")?;
            for _ in 0..self.dx {
                f.write_str("x")?;
            }
            for _ in 0..self.dy {
                f.write_str("y")?;
            }
        }
        Ok(())
    }
}

/// A groupoid of point transformations `(x, y) ↦ (x̄, ȳ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Groupoid {
    pub id: GroupoidId,
    pub xi_form: CoordForm,
    pub eta_form: CoordForm,
}

/// A triangular set on barred jets together with the non-vanishing
/// conditions of the transformation.
#[derive(Clone, Debug)]
pub struct ProlongedSystem {
    pub order: u32,
    pub relations: TriangularSet,
    pub inequations: Vec<Expr>,
}

fn xb_jet(dx: u8, dy: u8) -> Expr {
    barred_jet(BarKind::X, dx, dy)
}

fn yb_jet(dx: u8, dy: u8) -> Expr {
    barred_jet(BarKind::Y, dx, dy)
}

impl Groupoid {
    pub fn new(id: GroupoidId) -> Groupoid {
        use CoordForm::*;
        let (xi_form, eta_form) = match id {
            GroupoidId::Phi1 => (Identity, Free),
            GroupoidId::Phi2 => (Free, Identity),
            GroupoidId::Phi3 => (Shift, Free),
            GroupoidId::Phi4 => (Free, Shift),
            GroupoidId::Phi5 => (OwnVariable, Free),
            GroupoidId::Phi6 => (Free, OwnVariable),
            GroupoidId::Phi7 => (Free, Free),
        };
        Groupoid {
            id,
            xi_form,
            eta_form,
        }
    }

    /// Defining equations `e = 0` on (x̄, ȳ) and their first jets.
    pub fn defining_equations(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        match self.xi_form {
            CoordForm::Identity => out.push(xb_jet(0, 0) - Expr::x()),
            CoordForm::Shift => {
                out.push(xb_jet(1, 0) - Expr::one());
                out.push(xb_jet(0, 1));
            }
            CoordForm::OwnVariable => out.push(xb_jet(0, 1)),
            CoordForm::Free => {}
        }
        match self.eta_form {
            CoordForm::Identity => out.push(yb_jet(0, 0) - Expr::y()),
            CoordForm::Shift => {
                out.push(yb_jet(1, 0));
                out.push(yb_jet(0, 1) - Expr::one());
            }
            CoordForm::OwnVariable => out.push(yb_jet(1, 0)),
            CoordForm::Free => {}
        }
        out
    }

    /// Non-vanishing conditions: the Jacobian, simplified by the form.
    pub fn inequations(&self) -> Vec<Expr> {
        use CoordForm::*;
        let e = match (self.xi_form, self.eta_form) {
            (Identity | Shift, _) => yb_jet(0, 1),
            (_, Identity | Shift) => xb_jet(1, 0),
            (OwnVariable, _) | (_, OwnVariable) => xb_jet(1, 0) * yb_jet(0, 1),
            (Free, Free) => xb_jet(1, 0) * yb_jet(0, 1) - xb_jet(0, 1) * yb_jet(1, 0),
        };
        vec![e]
    }

    pub fn defining_system(&self) -> ProlongedSystem {
        let polys: Vec<_> = self
            .defining_equations()
            .iter()
            .map(|e| e.num().clone())
            .collect();
        let relations = TriangularSet::from_polys(Ranking::barred(), &polys)
            .expect("defining equations form a triangular set");
        ProlongedSystem {
            order: 0,
            relations,
            inequations: self.inequations(),
        }
    }

    /// Prolongs the defining system to order `q` ≤ 2 through
    /// `η_q = D_x η_{q−1} / D_x ξ`. With `f_symbolic`, y″ is replaced by the
    /// jet symbol `f` and ȳ″ by the symbol `f̄`.
    pub fn prolong(&self, q: u32, f_symbolic: bool) -> Result<ProlongedSystem> {
        if q > 2 {
            return Err(Error::Unsupported(format!("prolongation to order {q}")));
        }
        let mut sys = self.defining_system();
        if q == 0 {
            return Ok(sys);
        }
        let source_second = if f_symbolic {
            Expr::var(VarId::F)
        } else {
            Expr::var(VarId::Y2)
        };
        let dx = TotalDerivative::new(source_second);
        let dxi = normal_form_expr(&xb_jet(0, 0).derive(&dx)?, &sys.relations)?;
        let mut eta = yb_jet(0, 0);
        let leaders = [
            VarId::PB,
            if f_symbolic {
                VarId::FB
            } else {
                VarId::barred_jet(BarKind::Y2, 0, 0)
            },
        ];
        for leader in leaders.iter().take(q as usize) {
            let next = eta.derive(&dx as &dyn Derivation)?.checked_div(&dxi)?;
            let next = normal_form_expr(&next, &sys.relations)?;
            let lhs = Expr::var(leader.clone()) - &next;
            let rel = Relation::from_poly(lhs.num(), leader).expect("leader occurs");
            sys.relations.push(rel)?;
            eta = next;
        }
        sys.order = q;
        Ok(sys)
    }

    /// Linearized constraints: each listed derivative of ξ or η vanishes.
    pub fn infinitesimal_constraints(&self) -> Vec<Deriv> {
        let mut out = Vec::new();
        for (form, fun) in [(self.xi_form, Fun::Xi), (self.eta_form, Fun::Eta)] {
            match form {
                CoordForm::Identity => out.push(Deriv::new(fun, 0, 0)),
                CoordForm::Shift => {
                    out.push(Deriv::new(fun, 1, 0));
                    out.push(Deriv::new(fun, 0, 1));
                }
                CoordForm::OwnVariable => match fun {
                    Fun::Xi => out.push(Deriv::new(fun, 0, 1)),
                    Fun::Eta => out.push(Deriv::new(fun, 1, 0)),
                },
                CoordForm::Free => {}
            }
        }
        out
    }

    /// Indices of the invariant derivations that annihilate x̄ (`for_x`) or ȳ.
    pub fn annihilators(&self, for_x: bool) -> Vec<u8> {
        if for_x
            && matches!(
                self.xi_form,
                CoordForm::Identity | CoordForm::Shift | CoordForm::OwnVariable
            )
        {
            vec![1, 2]
        } else {
            vec![1]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::reduces_to_zero;
    use crate::expr::Bindings;

    #[test]
    fn phi3_defining_system() {
        let s = GroupoidId::Phi3.groupoid().defining_system();
        let rels: Vec<String> = s
            .relations
            .relations()
            .iter()
            .map(|r| r.to_string())
            .collect();
        assert_eq!(rels, vec!["xb_y = 0", "xb_x = 1"]);
        assert_eq!(s.inequations, vec![yb_jet(0, 1)]);
    }

    #[test]
    fn phi1_and_phi7_defining_systems() {
        let s1 = GroupoidId::Phi1.groupoid().defining_system();
        assert_eq!(s1.relations.relations()[0].to_string(), "xb = x");
        let s7 = GroupoidId::Phi7.groupoid().defining_system();
        assert!(s7.relations.is_empty());
        assert_eq!(
            s7.inequations,
            vec![xb_jet(1, 0) * yb_jet(0, 1) - xb_jet(0, 1) * yb_jet(1, 0)]
        );
    }

    #[test]
    fn phi3_prolongation_matches_fixed_target_shape() {
        let s = GroupoidId::Phi3.groupoid().prolong(2, true).unwrap();
        let pb = s.relations.get(&VarId::PB).unwrap().solved().unwrap();
        assert_eq!(pb, yb_jet(1, 0) + Expr::p() * yb_jet(0, 1));
        let fb = s.relations.get(&VarId::FB).unwrap().solved().unwrap();
        let p = Expr::p();
        let expect = yb_jet(2, 0)
            + Expr::int(2) * &p * yb_jet(1, 1)
            + p.pow(2) * yb_jet(0, 2)
            + Expr::var(VarId::F) * yb_jet(0, 1);
        assert_eq!(fb, expect);
    }

    #[test]
    fn phi7_first_prolongation() {
        let s = GroupoidId::Phi7.groupoid().prolong(1, false).unwrap();
        let pb = s.relations.get(&VarId::PB).unwrap().solved().unwrap();
        let p = Expr::p();
        let expect = (yb_jet(1, 0) + &p * yb_jet(0, 1)) / (xb_jet(1, 0) + &p * xb_jet(0, 1));
        assert_eq!(pb, expect);
    }

    #[test]
    fn identity_data_gives_identity_prolongation() {
        let s = GroupoidId::Phi7.groupoid().prolong(2, true).unwrap();
        let mut b = Bindings::new();
        for (kind, dx, dy, v) in [
            (BarKind::X, 1, 0, 1),
            (BarKind::X, 0, 1, 0),
            (BarKind::Y, 1, 0, 0),
            (BarKind::Y, 0, 1, 1),
            (BarKind::X, 2, 0, 0),
            (BarKind::X, 1, 1, 0),
            (BarKind::X, 0, 2, 0),
            (BarKind::Y, 2, 0, 0),
            (BarKind::Y, 1, 1, 0),
            (BarKind::Y, 0, 2, 0),
        ] {
            b.insert(VarId::barred_jet(kind, dx, dy), Expr::int(v));
        }
        let pb = s.relations.get(&VarId::PB).unwrap().solved().unwrap();
        assert_eq!(pb.substitute(&b).unwrap(), Expr::p());
        let fb = s.relations.get(&VarId::FB).unwrap().solved().unwrap();
        assert_eq!(fb.substitute(&b).unwrap(), Expr::var(VarId::F));
    }

    #[test]
    fn prolongation_is_quasi_linear() {
        for id in GroupoidId::ALL {
            for q in 1..=2 {
                for sym in [false, true] {
                    let s = id.groupoid().prolong(q, sym).unwrap();
                    assert!(s.relations.is_quasi_linear(), "{id} q={q}");
                }
            }
        }
    }

    #[test]
    fn containments_reduce_to_zero() {
        let pairs = [
            (GroupoidId::Phi1, GroupoidId::Phi3),
            (GroupoidId::Phi3, GroupoidId::Phi5),
            (GroupoidId::Phi5, GroupoidId::Phi7),
            (GroupoidId::Phi2, GroupoidId::Phi4),
            (GroupoidId::Phi4, GroupoidId::Phi6),
            (GroupoidId::Phi6, GroupoidId::Phi7),
        ];
        for (small, large) in pairs {
            for q in 0..=2 {
                let s = small.groupoid().prolong(q, true).unwrap();
                let l = large.groupoid().prolong(q, true).unwrap();
                for r in l.relations.relations() {
                    let e = Expr::from_poly(r.poly());
                    assert!(
                        reduces_to_zero(&e, &s.relations).unwrap(),
                        "{small} ⊂ {large}, q={q}: {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn constraints_and_annihilators() {
        let c3 = GroupoidId::Phi3.groupoid().infinitesimal_constraints();
        assert_eq!(
            c3,
            vec![Deriv::new(Fun::Xi, 1, 0), Deriv::new(Fun::Xi, 0, 1)]
        );
        assert!(GroupoidId::Phi7
            .groupoid()
            .infinitesimal_constraints()
            .is_empty());
        assert_eq!(
            GroupoidId::Phi1.groupoid().infinitesimal_constraints(),
            vec![Deriv::new(Fun::Xi, 0, 0)]
        );
        assert_eq!(GroupoidId::Phi3.groupoid().annihilators(true), vec![1, 2]);
        assert_eq!(GroupoidId::Phi7.groupoid().annihilators(true), vec![1]);
        assert_eq!("phi4".parse::<GroupoidId>().unwrap(), GroupoidId::Phi4);
        assert!("phi8".parse::<GroupoidId>().is_err());
    }
}

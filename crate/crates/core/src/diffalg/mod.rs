//! Rankings, triangular sets of relations, Ritt reduction and implicit
//! derivatives at bounded jet order.

mod degree;
mod implicit;
mod ranking;
mod reduce;
mod relation;

pub use degree::degree_reduce;
pub use implicit::{implicit_derivative, implicit_total_derivative, ImplicitDerivation};
pub use ranking::{Matcher, Ranking};
pub use reduce::{
    normal_form, normal_form_expr, partial, reduces_to_zero, ritt_full_reduce, Coord,
};
pub use relation::{Relation, TriangularSet};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::expr::{BarKind, Derivation, Expr, Poly, VarId, VectorField};

    fn xb() -> Expr {
        Expr::var(VarId::XB)
    }
    fn yb() -> Expr {
        Expr::var(VarId::YB)
    }
    fn pb() -> Expr {
        Expr::var(VarId::PB)
    }

    fn set(rels: Vec<Relation>) -> TriangularSet {
        TriangularSet::new(Ranking::barred(), rels).unwrap()
    }

    fn emden_symmetry_set() -> TriangularSet {
        let (x, y, p) = (Expr::x(), Expr::y(), Expr::p());
        set(vec![
            Relation::solved_for(VarId::PB, &(yb() * &p / &y)),
            Relation::monic(VarId::YB, 3, &y.pow(3)).unwrap(),
            Relation::solved_for(VarId::XB, &x),
        ])
    }

    #[test]
    fn single_division_step() {
        let c = set(vec![
            Relation::monic(VarId::YB, 3, &Expr::y().pow(3)).unwrap()
        ]);
        let (r, h) = ritt_full_reduce(&yb().pow(4).num().clone(), &c).unwrap();
        assert_eq!(Expr::from_poly(r), Expr::y().pow(3) * yb());
        assert!(h.is_one());
        assert_eq!(
            normal_form(yb().pow(4).num(), &c).unwrap(),
            Expr::y().pow(3) * yb()
        );
    }

    #[test]
    fn emden_membership() {
        let c = emden_symmetry_set();
        let t = Expr::y() * pb() - yb() * Expr::p();
        let (r, _) = ritt_full_reduce(t.num(), &c).unwrap();
        assert!(r.is_zero());
        let t2 = xb() * pb() - Expr::x() * yb() * Expr::p() / Expr::y();
        assert!(normal_form_expr(&t2, &c).unwrap().is_zero());
        assert_eq!(normal_form(&Poly::var(VarId::Y), &c).unwrap(), Expr::y());
    }

    #[test]
    fn linear_leader_substitution() {
        let c = set(vec![Relation::solved_for(VarId::XB, &Expr::x())]);
        assert_eq!(
            normal_form(xb().pow(2).num(), &c).unwrap(),
            Expr::x().pow(2)
        );
    }

    #[test]
    fn dim_and_degree() {
        let c = emden_symmetry_set();
        assert_eq!(
            c.dim_and_deg(&[VarId::XB, VarId::YB, VarId::PB]).unwrap(),
            (0, 3)
        );
        let k = set(vec![
            Relation::monic(VarId::YB, 2, &Expr::y().pow(2)).unwrap(),
            Relation::solved_for(VarId::XB, &Expr::x()),
        ]);
        assert_eq!(k.dim_and_deg(&[VarId::XB, VarId::YB]).unwrap(), (0, 2));
        let one = set(vec![Relation::solved_for(VarId::XB, &Expr::x())]);
        assert_eq!(one.dim_and_deg(&[VarId::XB, VarId::YB]).unwrap(), (1, 1));
        assert!(matches!(
            one.dim_and_deg(&[VarId::YB]),
            Err(Error::LeaderOutsideUnknowns(_))
        ));
    }

    #[test]
    fn implicit_total_derivatives() {
        let f = Expr::var(VarId::F);
        let half = set(vec![Relation::solved_for(
            VarId::YB,
            &(Expr::y().pow(2) / Expr::int(2)),
        )]);
        assert_eq!(
            implicit_total_derivative(&half, &VarId::YB, &f).unwrap(),
            Expr::y() * Expr::p()
        );
        let id = set(vec![Relation::solved_for(VarId::XB, &Expr::x())]);
        assert_eq!(
            implicit_total_derivative(&id, &VarId::XB, &f).unwrap(),
            Expr::one()
        );
        let cube = set(vec![
            Relation::monic(VarId::YB, 3, &Expr::y().pow(3)).unwrap()
        ]);
        assert_eq!(
            implicit_total_derivative(&cube, &VarId::YB, &f).unwrap(),
            Expr::y().pow(2) * Expr::p() / yb().pow(2)
        );
    }

    #[test]
    fn separant_vanishing_is_reported() {
        let c = set(vec![Relation::monic(VarId::YB, 2, &Expr::zero()).unwrap()]);
        assert!(matches!(
            implicit_total_derivative(&c, &VarId::YB, &Expr::zero()),
            Err(Error::SeparantVanishes(_))
        ));
    }

    #[test]
    fn proper_derivatives_are_eliminated() {
        // x̄ = x·y implies x̄_x = y and x̄_xy = 1
        let c = set(vec![Relation::solved_for(
            VarId::XB,
            &(Expr::x() * Expr::y()),
        )]);
        let xbx = Expr::var(VarId::barred_jet(BarKind::X, 1, 0));
        let xbxy = Expr::var(VarId::barred_jet(BarKind::X, 1, 1));
        assert_eq!(normal_form_expr(&xbx, &c).unwrap(), Expr::y());
        assert_eq!(normal_form_expr(&(xbxy * &xbx), &c).unwrap(), Expr::y());
    }

    fn token_derivation() -> VectorField {
        VectorField::new().with(VarId::token("G"), Expr::token("H"))
    }

    #[test]
    fn degree_reduce_perfect_square() {
        let g = Expr::token("G");
        let rhs = Expr::int(2) * &g * xb() - g.pow(2);
        let c = set(vec![Relation::monic(VarId::XB, 2, &rhs).unwrap()]);
        let d = token_derivation();
        let ann: [&dyn Derivation; 1] = [&d];
        let out = degree_reduce(&c, &VarId::XB, &ann).unwrap();
        assert_eq!(out.get(&VarId::XB).unwrap().solved(), Some(g));
    }

    #[test]
    fn degree_reduce_constant_fails() {
        let c = set(vec![
            Relation::monic(VarId::XB, 2, &Expr::token("C")).unwrap()
        ]);
        let d = token_derivation();
        let ann: [&dyn Derivation; 1] = [&d];
        assert!(matches!(
            degree_reduce(&c, &VarId::XB, &ann),
            Err(Error::CannotReduce(_))
        ));
    }

    #[test]
    fn degree_reduce_cross_reduces() {
        let g = Expr::token("G");
        let rhs = Expr::int(2) * &g * xb() - g.pow(2);
        let c = set(vec![
            Relation::solved_for(VarId::YB, &xb().pow(2)),
            Relation::monic(VarId::XB, 2, &rhs).unwrap(),
        ]);
        let d = token_derivation();
        let ann: [&dyn Derivation; 1] = [&d];
        let out = degree_reduce(&c, &VarId::XB, &ann).unwrap();
        assert_eq!(out.get(&VarId::YB).unwrap().solved(), Some(g.pow(2)));
    }
}

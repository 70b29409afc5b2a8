use std::cmp::Ordering;

use crate::expr::{BarKind, Poly, VarId};

/// Selects the variables belonging to one ranking group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matcher {
    Var(VarId),
    /// All barred variables of a kind, jets included.
    Kind(BarKind),
    AnyBarred,
    Jets,
    Tokens,
}

impl Matcher {
    pub fn matches(&self, v: &VarId) -> bool {
        match (self, v) {
            (Matcher::Var(w), _) => w == v,
            (Matcher::Kind(k), VarId::Barred(b)) => b.kind == *k,
            (Matcher::AnyBarred, VarId::Barred(_)) => true,
            (Matcher::Jets, VarId::Jet(_)) => true,
            (Matcher::Tokens, VarId::Token(_)) => true,
            _ => false,
        }
    }
}

/// An elimination ranking: groups listed highest first, the fixed variable
/// order inside a group. Variables matched by no group are parameters and
/// rank below everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    groups: Vec<Matcher>,
}

impl Ranking {
    pub fn new(groups: Vec<Matcher>) -> Ranking {
        Ranking { groups }
    }

    /// One group per unknown, highest first.
    pub fn elimination(unknowns: &[VarId]) -> Ranking {
        Ranking {
            groups: unknowns.iter().cloned().map(Matcher::Var).collect(),
        }
    }

    /// p̄ ≻ ȳ-jets ≻ x̄-jets, the ranking used for changes of coordinates.
    pub fn barred() -> Ranking {
        Ranking {
            groups: vec![
                Matcher::Kind(BarKind::F),
                Matcher::Kind(BarKind::Y2),
                Matcher::Kind(BarKind::P),
                Matcher::Kind(BarKind::Y),
                Matcher::Kind(BarKind::X),
            ],
        }
    }

    pub fn groups(&self) -> &[Matcher] {
        &self.groups
    }

    fn group_of(&self, v: &VarId) -> usize {
        self.groups
            .iter()
            .position(|g| g.matches(v))
            .unwrap_or(self.groups.len())
    }

    pub fn is_parameter(&self, v: &VarId) -> bool {
        self.group_of(v) == self.groups.len()
    }

    /// `Greater` when `a` ranks above `b`.
    pub fn cmp(&self, a: &VarId, b: &VarId) -> Ordering {
        self.group_of(b)
            .cmp(&self.group_of(a))
            .then_with(|| a.cmp(b))
    }

    /// The highest ranked non-parameter variable of `p`.
    pub fn leader(&self, p: &Poly) -> Option<VarId> {
        p.vars()
            .into_iter()
            .filter(|v| !self.is_parameter(v))
            .max_by(|a, b| self.cmp(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barred_ranking_orders_groups() {
        let r = Ranking::barred();
        assert_eq!(r.cmp(&VarId::PB, &VarId::YB), Ordering::Greater);
        assert_eq!(r.cmp(&VarId::YB, &VarId::XB), Ordering::Greater);
        assert_eq!(r.cmp(&VarId::XB, &VarId::token("I1")), Ordering::Greater);
        let yx = VarId::barred_jet(BarKind::Y, 1, 0);
        assert_eq!(r.cmp(&yx, &VarId::YB), Ordering::Greater);
        assert!(r.is_parameter(&VarId::X));
    }

    #[test]
    fn leader_skips_parameters() {
        let r = Ranking::barred();
        let p = Poly::var(VarId::XB)
            .mul(&Poly::var(VarId::Y))
            .add(&Poly::var(VarId::P));
        assert_eq!(r.leader(&p), Some(VarId::XB));
        assert_eq!(r.leader(&Poly::var(VarId::X)), None);
    }
}

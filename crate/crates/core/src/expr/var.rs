use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Highest total differentiation order allowed for jet symbols `f_{ijk}`.
pub const MAX_JET_ORDER: u32 = 8;

/// Coordinates of the base jet space and the frame parameter.
///
/// `Y2` is the second derivative `y''`; it only shows up while prolonging a
/// groupoid without substituting the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    X,
    Y,
    P,
    A,
    Y2,
}

/// A partial derivative `f_{x^i y^j p^k}` of the right-hand side symbol `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Jet {
    pub x: u8,
    pub y: u8,
    pub p: u8,
}

impl Jet {
    pub const F: Jet = Jet { x: 0, y: 0, p: 0 };

    pub fn new(x: u8, y: u8, p: u8) -> Jet {
        Jet { x, y, p }
    }

    pub fn order(&self) -> u32 {
        self.x as u32 + self.y as u32 + self.p as u32
    }
}

impl Ord for Jet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| (self.x, self.y, self.p).cmp(&(other.x, other.y, other.p)))
    }
}

impl PartialOrd for Jet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which target-side quantity a barred variable denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BarKind {
    /// x̄ = ξ(x, y)
    X,
    /// ȳ = η(x, y)
    Y,
    /// p̄ = ȳ′
    P,
    /// ȳ″ before the target right-hand side is substituted
    Y2,
    /// the target right-hand side f̄(x̄, ȳ, p̄) kept as a symbol
    F,
}

/// A barred (target-side) variable. `dx`/`dy` are partial derivatives with
/// respect to the source coordinates and are only meaningful for x̄ and ȳ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Barred {
    pub kind: BarKind,
    pub dx: u8,
    pub dy: u8,
}

impl Barred {
    pub const X: Barred = Barred {
        kind: BarKind::X,
        dx: 0,
        dy: 0,
    };
    pub const Y: Barred = Barred {
        kind: BarKind::Y,
        dx: 0,
        dy: 0,
    };
    pub const P: Barred = Barred {
        kind: BarKind::P,
        dx: 0,
        dy: 0,
    };
    pub const Y2: Barred = Barred {
        kind: BarKind::Y2,
        dx: 0,
        dy: 0,
    };
    pub const F: Barred = Barred {
        kind: BarKind::F,
        dx: 0,
        dy: 0,
    };

    pub fn jet(kind: BarKind, dx: u8, dy: u8) -> Barred {
        Barred { kind, dx, dy }
    }

    pub fn order(&self) -> u32 {
        self.dx as u32 + self.dy as u32
    }

    pub fn is_differentiable(&self) -> bool {
        matches!(self.kind, BarKind::X | BarKind::Y)
    }
}

impl Ord for Barred {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| self.order().cmp(&other.order()))
            .then_with(|| self.dx.cmp(&other.dx))
    }
}

impl PartialOrd for Barred {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A variable of the fixed alphabet.
///
/// The derived order (base ≺ jet ≺ barred ≺ token) is the variable order used
/// by the monomial order; it never changes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    Base(Base),
    Jet(Jet),
    Barred(Barred),
    /// An invariant token such as `I1_31`, the essential invariant `X`, or an
    /// internal placeholder.
    Token(Arc<str>),
}

impl VarId {
    pub const X: VarId = VarId::Base(Base::X);
    pub const Y: VarId = VarId::Base(Base::Y);
    pub const P: VarId = VarId::Base(Base::P);
    pub const A: VarId = VarId::Base(Base::A);
    pub const Y2: VarId = VarId::Base(Base::Y2);
    pub const F: VarId = VarId::Jet(Jet::F);
    pub const XB: VarId = VarId::Barred(Barred::X);
    pub const YB: VarId = VarId::Barred(Barred::Y);
    pub const PB: VarId = VarId::Barred(Barred::P);
    pub const FB: VarId = VarId::Barred(Barred::F);

    pub fn jet(x: u8, y: u8, p: u8) -> VarId {
        VarId::Jet(Jet::new(x, y, p))
    }

    pub fn barred_jet(kind: BarKind, dx: u8, dy: u8) -> VarId {
        VarId::Barred(Barred::jet(kind, dx, dy))
    }

    pub fn token(name: &str) -> VarId {
        VarId::Token(Arc::from(name))
    }

    pub fn is_token(&self) -> bool {
        matches!(self, VarId::Token(_))
    }

    pub fn is_barred(&self) -> bool {
        matches!(self, VarId::Barred(_))
    }

    /// Source coordinate counterpart of a barred coordinate (x̄ → x, ...).
    pub fn unbarred(&self) -> Option<VarId> {
        match self {
            VarId::Barred(b) if b.order() == 0 => match b.kind {
                BarKind::X => Some(VarId::X),
                BarKind::Y => Some(VarId::Y),
                BarKind::P => Some(VarId::P),
                BarKind::Y2 => Some(VarId::Y2),
                BarKind::F => Some(VarId::F),
            },
            _ => None,
        }
    }

    /// Barred counterpart of a source coordinate (x → x̄, ...).
    pub fn barred(&self) -> Option<VarId> {
        match self {
            VarId::Base(Base::X) => Some(VarId::XB),
            VarId::Base(Base::Y) => Some(VarId::YB),
            VarId::Base(Base::P) => Some(VarId::PB),
            VarId::Base(Base::Y2) => Some(VarId::Barred(Barred::Y2)),
            VarId::Jet(j) if *j == Jet::F => Some(VarId::FB),
            _ => None,
        }
    }
}

fn push_letters(out: &mut String, letter: char, n: u8) {
    for _ in 0..n {
        out.push(letter);
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Base(Base::X) => f.write_str("x"),
            VarId::Base(Base::Y) => f.write_str("y"),
            VarId::Base(Base::P) => f.write_str("y'"),
            VarId::Base(Base::A) => f.write_str("a"),
            VarId::Base(Base::Y2) => f.write_str("y2"),
            VarId::Jet(j) => {
                if j.order() == 0 {
                    return f.write_str("f");
                }
                let mut s = String::from("f_");
                push_letters(&mut s, 'x', j.x);
                push_letters(&mut s, 'y', j.y);
                push_letters(&mut s, 'p', j.p);
                f.write_str(&s)
            }
            VarId::Barred(b) => {
                let mut s = String::from(match b.kind {
                    BarKind::X => "xb",
                    BarKind::Y => "yb",
                    BarKind::P => "pb",
                    BarKind::Y2 => "yb2",
                    BarKind::F => "fb",
                });
                if b.order() > 0 {
                    s.push('_');
                    push_letters(&mut s, 'x', b.dx);
                    push_letters(&mut s, 'y', b.dy);
                }
                f.write_str(&s)
            }
            VarId::Token(name) => f.write_str(name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_order_is_base_jet_barred_token() {
        let mut v = vec![
            VarId::token("I1"),
            VarId::XB,
            VarId::jet(0, 1, 0),
            VarId::P,
            VarId::X,
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                VarId::X,
                VarId::P,
                VarId::jet(0, 1, 0),
                VarId::XB,
                VarId::token("I1")
            ]
        );
    }

    #[test]
    fn jets_are_graded() {
        assert!(Jet::new(0, 0, 2) > Jet::new(1, 0, 0));
        assert!(Jet::new(1, 0, 0) > Jet::new(0, 1, 0));
        assert!(Jet::F < Jet::new(0, 0, 1));
    }

    #[test]
    fn display_names() {
        assert_eq!(VarId::jet(1, 0, 1).to_string(), "f_xp");
        assert_eq!(VarId::barred_jet(BarKind::Y, 1, 1).to_string(), "yb_xy");
        assert_eq!(VarId::P.to_string(), "y'");
    }
}

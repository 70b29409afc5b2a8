//! Exact multivariate rational functions over a fixed jet alphabet.

mod calculus;
mod gcd;
mod poly;
mod rat;
mod tree;
mod var;

pub use calculus::{
    bar, barred_jet, derive, jet_value, jet_var, specialize_jets, unbar, Bindings, Derivation,
    Partial, Point, TotalDerivative, VectorField,
};
pub use gcd::{gcd, gcd_many, lcm, resultant};
pub use poly::{q, qf, Monomial, Poly, Q};
pub use rat::Expr;
pub use tree::{normalize, Tree};
pub use var::{BarKind, Barred, Base, Jet, VarId, MAX_JET_ORDER};

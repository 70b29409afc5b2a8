//! Equivalence engine for second-order ODEs `y'' = f(x, y, y')` with rational
//! right-hand sides.
//!
//! The pipeline computes a symmetry signature, selects candidate targets from
//! a table of normal forms, specializes precomputed invariant relations on the
//! input, and verifies the resulting change of coordinates symbolically.

pub mod cartan;
pub mod diffalg;
pub mod engine;
pub mod error;
pub mod expr;
pub mod groupoids;
pub mod odeparse;
pub mod symmetry;

pub use error::{Error, Result};
pub use expr::{Expr, VarId};
pub use odeparse::{parse_expr, parse_ode, print_expr, InvariantToken};

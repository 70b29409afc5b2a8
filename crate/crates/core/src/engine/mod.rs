//! Target table, necessary forms of changes of coordinates, specialization
//! on an input equation, pushforward and verification.

mod branch;
mod chgt;
mod pushforward;
mod solve;
mod table;
mod tower;

pub use branch::{specialize_entry, split_branch, verify, TransformationBranch};
pub use chgt::{
    chgt_coords, invariant_values, parameter_value, reduce_to_degree, triangularize, Normalization,
    UNKNOWNS,
};
pub use tower::{
    binomial_factors, cyclotomic, expr_root, poly_root, split_relation, tower_reduce_set, Tower,
};

pub use pushforward::{compose, pushforward};
pub use solve::{entry_branches, newdsolve, solve_with_signature, Match};
pub use table::{
    default_table, default_table_text, load_table, load_table_str, parse_table, save_table,
    LoadedTable, TargetEntry,
};

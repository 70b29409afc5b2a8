use rayon::prelude::*;

use crate::error::Result;
use crate::expr::Expr;
use crate::symmetry::{matches, signature, Signature};

use super::branch::{specialize_entry, split_branch, verify, TransformationBranch};
use super::table::TargetEntry;

/// A target entry together with a verified change of coordinates onto it.
#[derive(Clone, Debug, PartialEq)]
pub struct Match {
    pub entry_id: String,
    pub branch: TransformationBranch,
}

/// Verified components of the entry's necessary form specialized on `f`.
pub fn entry_branches(f: &Expr, entry: &TargetEntry) -> Result<Vec<TransformationBranch>> {
    let Some(branch) = specialize_entry(entry, f)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for b in split_branch(&branch)? {
        if verify(f, &b, entry).unwrap_or(false) {
            out.push(b);
        }
    }
    Ok(out)
}

/// Entries of `table` equivalent to `y'' = f`, in table order, each with its
/// verified branches (explicit ones first). Per-entry failures count as no
/// match; a failing signature computation aborts.
pub fn newdsolve(f: &Expr, table: &[TargetEntry]) -> Result<Vec<Match>> {
    Ok(solve_with_signature(f, &signature(f)?, table))
}

/// Like [`newdsolve`] with the signature of `f` already known.
pub fn solve_with_signature(f: &Expr, sig: &Signature, table: &[TargetEntry]) -> Vec<Match> {
    let found: Vec<Vec<TransformationBranch>> = table
        .par_iter()
        .map(|e| {
            if matches(&e.signature, sig) {
                entry_branches(f, e).unwrap_or_default()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut out = Vec::new();
    for (e, branches) in table.iter().zip(found) {
        out.extend(branches.into_iter().map(|branch| Match {
            entry_id: e.id.clone(),
            branch,
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::{Ranking, Relation, TriangularSet};
    use crate::engine::default_table;
    use crate::expr::VarId;
    use crate::odeparse::{parse_expr, parse_rhs};

    const RAYLEIGH_SOURCE: &str = "-y^3*y'^4 - y'^2/y - (1/2)*y";

    fn entry(id: &str) -> TargetEntry {
        default_table().into_iter().find(|e| e.id == id).unwrap()
    }

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn rayleigh_specialized_on_source() {
        let f = parse_rhs(RAYLEIGH_SOURCE).unwrap();
        let b = specialize_entry(&entry("kamke-72"), &f).unwrap().unwrap();
        assert_eq!(b.value(&VarId::XB), Some(e("x")));
        let yb = b.relations.get(&VarId::YB).unwrap();
        assert_eq!((yb.degree(), yb.monic_rhs()), (3, e("y^6/8")));
        let pb = b.relations.get(&VarId::PB).unwrap().solved().unwrap();
        assert_eq!(pb.vars().into_iter().filter(|v| *v == VarId::YB).count(), 1);
        assert_eq!(pb.num().degree_in(&VarId::YB), 1);
    }

    #[test]
    fn rayleigh_rejects_free_particle() {
        assert_eq!(
            specialize_entry(&entry("kamke-72"), &Expr::zero()).unwrap(),
            None
        );
    }

    #[test]
    fn rayleigh_solved() {
        let f = parse_rhs(RAYLEIGH_SOURCE).unwrap();
        let found = newdsolve(&f, &default_table()).unwrap();
        assert_eq!(found[0].entry_id, "kamke-72");
        let b = &found[0].branch;
        assert_eq!(
            (b.value(&VarId::XB), b.value(&VarId::YB)),
            (Some(e("x")), Some(e("y^2/2")))
        );
        assert_eq!(b.value(&VarId::PB), Some(e("y*y'")));
        assert!(found.iter().all(|m| m.entry_id == "kamke-72"));
        assert_eq!(found.iter().map(|m| m.branch.degree()).sum::<u64>(), 3);
    }

    #[test]
    fn fake_branch_fails() {
        let f = parse_rhs(RAYLEIGH_SOURCE).unwrap();
        let rels = vec![
            Relation::solved_for(VarId::XB, &e("x")),
            Relation::solved_for(VarId::YB, &e("y")),
            Relation::solved_for(VarId::PB, &e("y'")),
        ];
        let b = TransformationBranch {
            relations: TriangularSet::new(Ranking::barred(), rels).unwrap(),
            note: vec![],
        };
        assert!(!verify(&f, &b, &entry("kamke-72")).unwrap());
    }

    #[test]
    fn emden_self_equivalence() {
        let en = entry("kamke-11");
        let b = specialize_entry(&en, &en.rhs).unwrap().unwrap();
        assert_eq!(b.value(&VarId::XB), Some(e("x")));
        let yb = b.relations.get(&VarId::YB).unwrap();
        assert_eq!((yb.degree(), yb.monic_rhs()), (3, e("y^3")));
        assert_eq!(b.value(&VarId::PB), Some(e("yb*y'/y")));
        let branches = entry_branches(&en.rhs, &en).unwrap();
        assert_eq!(branches[0].value(&VarId::YB), Some(e("y")));
        assert_eq!(branches.iter().map(|b| b.degree()).sum::<u64>(), 3);
    }

    #[test]
    fn cubic_sign_symmetry() {
        let en = entry("kamke-8");
        let branches = entry_branches(&en.rhs, &en).unwrap();
        let ys: Vec<_> = branches.iter().map(|b| b.value(&VarId::YB)).collect();
        assert_eq!(ys, vec![Some(e("y")), Some(e("-y"))]);
    }

    #[test]
    fn free_particle_unmatched() {
        assert!(newdsolve(&Expr::zero(), &default_table())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn painleve_has_no_form() {
        let en = entry("kamke-3");
        assert_eq!(specialize_entry(&en, &en.rhs).unwrap(), None);
    }
}

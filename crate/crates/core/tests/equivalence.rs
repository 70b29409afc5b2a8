use odeq_core::engine::{
    compose, default_table, entry_branches, newdsolve, pushforward, TargetEntry,
};
use odeq_core::expr::Bindings;
use odeq_core::groupoids::GroupoidId;
use odeq_core::symmetry::{signature, Signature};
use odeq_core::{parse_expr, Expr, VarId};

fn e(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

fn unbar(f: &Expr) -> Expr {
    let mut b = Bindings::new();
    b.insert(VarId::XB, Expr::x());
    b.insert(VarId::YB, Expr::y());
    b.insert(VarId::PB, Expr::p());
    f.substitute(&b).unwrap()
}

/// (ψ, ψ⁻¹) pairs inside each groupoid.
fn scrambles(g: GroupoidId) -> Vec<[(&'static str, &'static str); 2]> {
    match g {
        GroupoidId::Phi3 => vec![
            [("x + 2", "x*y"), ("x - 2", "y/(x - 2)")],
            [("x - 1", "y/x"), ("x + 1", "(x + 1)*y")],
            [("x", "y + x^2"), ("x", "y - x^2")],
        ],
        GroupoidId::Phi1 => vec![
            [("x", "x*y"), ("x", "y/x")],
            [("x", "y/x"), ("x", "x*y")],
            [("x", "y + x^2"), ("x", "y - x^2")],
        ],
        _ => Vec::new(),
    }
}

fn explicit_map(b: &odeq_core::engine::TransformationBranch) -> Option<(Expr, Expr)> {
    Some((b.value(&VarId::XB)?, b.value(&VarId::YB)?))
}

fn with_forms() -> Vec<TargetEntry> {
    default_table()
        .into_iter()
        .filter(|e| !e.is_signature_only())
        .collect()
}

#[test]
fn form_degree_matches_symmetry_degree() {
    for en in with_forms() {
        let branches = entry_branches(&en.rhs, &en).unwrap();
        let total: u64 = branches.iter().map(|b| b.degree()).sum();
        assert_eq!(
            en.necessary_form.degree(),
            en.symmetry_degree as u64,
            "{}",
            en.id
        );
        assert_eq!(total, en.symmetry_degree as u64, "{}", en.id);
    }
}

#[test]
fn scramble_and_recover() {
    let table = default_table();
    for en in with_forms() {
        let own: Vec<(Expr, Expr)> = entry_branches(&en.rhs, &en)
            .unwrap()
            .iter()
            .filter_map(explicit_map)
            .collect();
        for [(sx, sy), (ix, iy)] in scrambles(en.groupoid) {
            let (psi, inv) = ((e(sx), e(sy)), (e(ix), e(iy)));
            let source = unbar(&pushforward(&en.rhs, &inv.0, &inv.1).unwrap());
            let sig = signature(&source).unwrap();
            // Φ1, Φ3, Φ5 are normalized by these ψ; Φ2, Φ4, Φ6 are not
            assert!(
                sig.matches(&en.signature),
                "{} under {sx}, {sy}: {sig}",
                en.id
            );
            assert_eq!(
                (sig.s1(), sig.d7()),
                (en.signature.s1(), en.signature.d7()),
                "{}",
                en.id
            );
            let found = newdsolve(&source, &table).unwrap();
            let ours: Vec<_> = found.iter().filter(|m| m.entry_id == en.id).collect();
            assert!(
                !ours.is_empty(),
                "{} not recovered under ({sx}, {sy})",
                en.id
            );
            let maps: Vec<(Expr, Expr)> = ours
                .iter()
                .filter_map(|m| explicit_map(&m.branch))
                .collect();
            assert!(maps.contains(&psi), "{}: {maps:?}", en.id);
            for (mx, my) in &maps {
                let sym = compose((mx, my), (&inv.0, &inv.1)).unwrap();
                assert!(own.contains(&sym), "{}: {sym:?} is not a symmetry", en.id);
            }
        }
    }
}

#[test]
fn second_triple_can_change_under_scrambling() {
    // x ∂x + y ∂y is a symmetry of the Reid equation lying in Φ6; pulled back
    // by x̄ = x + 2, ȳ = x·y it becomes (x + 2) ∂x − (2y/x) ∂y, outside Φ6
    let reid = default_table()
        .into_iter()
        .find(|e| e.id == "reid")
        .unwrap();
    let source = unbar(&pushforward(&reid.rhs, &e("x - 2"), &e("y/(x - 2)")).unwrap());
    let sig = signature(&source).unwrap();
    assert_eq!(
        reid.signature,
        "((0,0,1),(0,0,1),1)".parse::<Signature>().unwrap()
    );
    assert_eq!(sig, "((0,0,1),(0,0,0),1)".parse::<Signature>().unwrap());
    assert!(sig.matches(&reid.signature));
}

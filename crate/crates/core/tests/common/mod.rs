#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use odeq_core::diffalg::{reduces_to_zero, ritt_full_reduce, Ranking, TriangularSet};
use odeq_core::expr::{gcd, normalize, BarKind, Monomial, Poly, Tree, Q};
use odeq_core::groupoids::GroupoidId;
use odeq_core::{parse_expr, print_expr, Expr, VarId};

pub fn pool() -> Vec<VarId> {
    vec![
        VarId::X,
        VarId::Y,
        VarId::P,
        VarId::A,
        VarId::XB,
        VarId::YB,
        VarId::PB,
        VarId::jet(0, 1, 1),
        VarId::barred_jet(BarKind::Y, 1, 0),
        VarId::token("I1_31"),
        VarId::token("I2_1"),
    ]
}

pub fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

pub fn tree(vars: usize) -> impl Strategy<Value = Tree> {
    let vs = pool();
    let leaf = prop_oneof![
        rational().prop_map(Tree::Num),
        (0..vars).prop_map(move |i| Tree::Var(vs[i].clone())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::div(a, b)),
            inner.clone().prop_map(Tree::neg),
            (inner, 0u32..=3).prop_map(|(a, e)| Tree::pow(a, e)),
        ]
    })
}

/// Fully parenthesized source text for a tree.
pub fn source(t: &Tree) -> String {
    match t {
        Tree::Num(c) if c.denom() == &1.into() => format!("({})", c.numer()),
        Tree::Num(c) => format!("({}/{})", c.numer(), c.denom()),
        Tree::Var(v) => v.to_string(),
        Tree::Add(a, b) => format!("({} + {})", source(a), source(b)),
        Tree::Sub(a, b) => format!("({} - {})", source(a), source(b)),
        Tree::Mul(a, b) => format!("({}*{})", source(a), source(b)),
        Tree::Div(a, b) => format!("({}/{})", source(a), source(b)),
        Tree::Neg(a) => format!("(-{})", source(a)),
        Tree::Pow(a, e) => format!("({}^{e})", source(a)),
    }
}

/// Direct evaluation in Q; `None` when some divisor vanishes.
pub fn eval(t: &Tree, pt: &HashMap<VarId, Q>) -> Option<Q> {
    Some(match t {
        Tree::Num(c) => c.clone(),
        Tree::Var(v) => pt[v].clone(),
        Tree::Add(a, b) => eval(a, pt)? + eval(b, pt)?,
        Tree::Sub(a, b) => eval(a, pt)? - eval(b, pt)?,
        Tree::Mul(a, b) => eval(a, pt)? * eval(b, pt)?,
        Tree::Div(a, b) => {
            let d = eval(b, pt)?;
            if d.is_zero() {
                return None;
            }
            eval(a, pt)? / d
        }
        Tree::Neg(a) => -eval(a, pt)?,
        Tree::Pow(a, e) => num_traits::pow(eval(a, pt)?, *e as usize),
    })
}

pub fn point_value() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

pub fn poly_in(vars: Vec<VarId>, max_terms: usize) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, n), -5i64..=5),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        Poly::from_terms(
            terms
                .into_iter()
                .map(|(es, c)| {
                    let pairs = vars
                        .iter()
                        .cloned()
                        .zip(es)
                        .filter(|(_, e)| *e > 0)
                        .collect();
                    (Monomial::from_pairs(pairs), Q::from_integer(c.into()))
                })
                .collect(),
        )
    })
}

pub fn eval_poly(p: &Poly, pt: &HashMap<VarId, Q>) -> Q {
    p.eval_rational(&|v| pt.get(v).cloned()).unwrap()
}

pub fn round_trip(t: Tree) -> Result<(), TestCaseError> {
    let Ok(e) = normalize(&t) else { return Ok(()) };
    let printed = print_expr(&e);
    prop_assert_eq!(&parse_expr(&printed).unwrap(), &e, "{}", printed);
    prop_assert_eq!(print_expr(&parse_expr(&printed).unwrap()), printed);
    let text = source(&t);
    prop_assert_eq!(parse_expr(&text), Ok(e), "{}", text);
    Ok(())
}

pub fn agrees_with_evaluation(t: Tree, pts: Vec<Vec<Q>>) -> Result<(), TestCaseError> {
    let Ok(e) = normalize(&t) else { return Ok(()) };
    let vars = pool();
    for values in pts {
        let pt: HashMap<VarId, Q> = vars[..4].iter().cloned().zip(values).collect();
        if let Some(v) = eval(&t, &pt) {
            prop_assert_eq!(e.eval_at(&pt).unwrap(), v, "{}", print_expr(&e));
        }
    }
    Ok(())
}

/// Two random parts, a target, leading coefficients and powers, and a point.
pub type RittCase = (Poly, Poly, Poly, (i64, u32, i64, u32), Vec<Q>);

pub fn ritt_case() -> impl Strategy<Value = RittCase> {
    (
        poly_in(vec![VarId::X, VarId::XB], 4),
        poly_in(vec![VarId::X, VarId::XB, VarId::YB], 4),
        poly_in(vec![VarId::X, VarId::XB, VarId::YB], 8),
        (1i64..=3, 1u32..=3, 1i64..=3, 1u32..=2),
        prop::collection::vec(point_value(), 3),
    )
}

/// Builds a triangular set vanishing at a random point and checks
/// h·t = r there.
pub fn ritt_sound((g1, g2, t, lead, values): RittCase) -> Result<(), TestCaseError> {
    let pt: HashMap<VarId, Q> = [VarId::X, VarId::XB, VarId::YB]
        .into_iter()
        .zip(values)
        .collect();
    let (c1, e1, c2, e2) = lead;
    // the leading powers exceed anything the random parts contribute
    let t1 = g1.add(&Poly::monomial(
        Monomial::var(VarId::XB, e1 + 2),
        Q::from_integer(c1.into()),
    ));
    let t2 = g2.add(&Poly::monomial(
        Monomial::var(VarId::YB, e2 + 2),
        Q::from_integer(c2.into()),
    ));
    let t1 = t1.sub(&Poly::constant(eval_poly(&t1, &pt)));
    let t2 = t2.sub(&Poly::constant(eval_poly(&t2, &pt)));
    let set = TriangularSet::from_polys(Ranking::elimination(&[VarId::YB, VarId::XB]), &[t1, t2])
        .unwrap();
    let (r, h) = ritt_full_reduce(&t, &set).unwrap();
    for rel in set.relations() {
        prop_assert!(r.degree_in(rel.leader()) < rel.degree());
    }
    prop_assert_eq!(eval_poly(&h, &pt) * eval_poly(&t, &pt), eval_poly(&r, &pt));
    Ok(())
}

pub fn common_factor((a, b, c): (Poly, Poly, Poly)) -> Result<(), TestCaseError> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Ok(());
    }
    let (ac, bc) = (a.mul(&c), b.mul(&c));
    let g = gcd(&ac, &bc);
    prop_assert!(g.div_exact(&c).is_some(), "{} does not divide {}", c, g);
    let (ca, cb) = (ac.div_exact(&g).unwrap(), bc.div_exact(&g).unwrap());
    prop_assert!(gcd(&ca, &cb).is_constant());
    Ok(())
}

/// Groupoids whose prolongation at order 1 or 2 is not quasi-linear.
pub fn non_quasi_linear_prolongations() -> Vec<String> {
    let mut bad = Vec::new();
    for g in GroupoidId::ALL {
        for q in 1..=2 {
            for symbolic in [true, false] {
                match g.groupoid().prolong(q, symbolic) {
                    Ok(sys) if sys.relations.is_quasi_linear() && sys.order == q => {}
                    _ => bad.push(format!("{g} at order {q}")),
                }
            }
        }
    }
    bad
}

/// Relations of a larger groupoid that do not vanish on a smaller one.
pub fn containment_failures() -> Vec<String> {
    use GroupoidId::*;
    let pairs = [
        (Phi1, Phi3),
        (Phi3, Phi5),
        (Phi5, Phi7),
        (Phi2, Phi4),
        (Phi4, Phi6),
        (Phi6, Phi7),
    ];
    let mut bad = Vec::new();
    for (small, large) in pairs {
        for q in 0..=2 {
            let s = small.groupoid().prolong(q, true).unwrap();
            let l = large.groupoid().prolong(q, true).unwrap();
            for r in l.relations.relations() {
                if !reduces_to_zero(&Expr::from_poly(r.poly()), &s.relations).unwrap() {
                    bad.push(format!("{small} in {large} at order {q}: {r}"));
                }
            }
        }
    }
    bad
}

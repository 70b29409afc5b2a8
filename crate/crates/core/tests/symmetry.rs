use proptest::prelude::*;

use odeq_core::engine::default_table;
use odeq_core::groupoids::GroupoidId;
use odeq_core::odeparse::parse_rhs;
use odeq_core::symmetry::{determining_system, dimension, signature, LinearPdeSystem, Signature};

fn monotone(s: &Signature) -> bool {
    let d = s.d;
    d[0] <= d[2] && d[2] <= d[4] && d[4] <= d[6] && d[1] <= d[3] && d[3] <= d[5] && d[5] <= d[6]
}

#[test]
fn shipped_signatures_are_monotone() {
    for en in default_table() {
        assert!(monotone(&en.signature), "{}: {}", en.id, en.signature);
        assert_eq!(signature(&en.rhs).unwrap(), en.signature, "{}", en.id);
    }
}

#[test]
fn free_particle_has_full_projective_algebra() {
    let s = signature(&parse_rhs("0").unwrap()).unwrap();
    assert_eq!(s.d7(), 8);
    assert!(monotone(&s));
}

fn signature_strategy() -> impl Strategy<Value = Signature> {
    prop::array::uniform7(0u32..=3).prop_map(Signature::new)
}

proptest! {
    #[test]
    fn matching_is_reflexive_and_symmetric(s in signature_strategy(), t in signature_strategy()) {
        prop_assert!(s.matches(&s));
        prop_assert_eq!(s.matches(&t), t.matches(&s));
    }

    #[test]
    fn signature_text_round_trips(s in signature_strategy()) {
        prop_assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dimension_ignores_equation_order(
        which in 0usize..4,
        g in 1usize..=7,
        perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let rhs = ["-y'^4 - y", "y^3 + x*y", "1/(x*y^2)", "y'/x + 4*y^2/x^3"][which];
        let sys = determining_system(&parse_rhs(rhs).unwrap());
        let constraints = GroupoidId::from_index(g).unwrap().groupoid().infinitesimal_constraints();
        let base = dimension(&sys, &constraints).unwrap();
        let order: Vec<usize> = perm.into_iter().filter(|i| *i < sys.equations.len()).collect();
        let shuffled = LinearPdeSystem { equations: order.iter().map(|i| sys.equations[*i].clone()).collect() };
        prop_assert_eq!(dimension(&shuffled, &constraints).unwrap(), base);
    }
}

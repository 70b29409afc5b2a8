mod common;

use proptest::prelude::*;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_print_round_trip(t in tree(11)) {
        round_trip(t)?;
    }

    #[test]
    fn canonical_form_agrees_with_evaluation(
        t in tree(4),
        pts in prop::collection::vec(prop::collection::vec(point_value(), 4), 5),
    ) {
        agrees_with_evaluation(t, pts)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ritt_reduction_is_sound(case in ritt_case()) {
        ritt_sound(case)?;
    }

    #[test]
    fn gcd_recovers_common_factor(
        a in poly_in(vec![odeq_core::VarId::X, odeq_core::VarId::Y], 4),
        b in poly_in(vec![odeq_core::VarId::X, odeq_core::VarId::Y], 4),
        c in poly_in(vec![odeq_core::VarId::X, odeq_core::VarId::Y], 3),
    ) {
        common_factor((a, b, c))?;
    }
}

#[test]
fn prolongations_are_quasi_linear() {
    assert_eq!(non_quasi_linear_prolongations(), Vec::<String>::new());
}

#[test]
fn groupoid_containments_reduce_to_zero() {
    assert_eq!(containment_failures(), Vec::<String>::new());
}

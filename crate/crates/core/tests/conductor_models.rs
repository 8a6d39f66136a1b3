mod common;

use common::{locally_equal, models, quotient_conductor, LOCAL_ORDER};

#[test]
fn formulas_match_quotient_conductor() {
    for m in models() {
        let c = quotient_conductor(&m.curve);
        assert!(locally_equal(&c, &m.formula, LOCAL_ORDER), "{}: conductor {:?} vs formula {:?}", m.name, c.groebner(), m.formula.groebner());
    }
}

#[test]
fn formulas_are_proper_and_nontrivial() {
    for m in models() {
        assert!(!m.formula.is_unit(), "{}", m.name);
        assert!(!locally_equal(&m.formula, &darboux::ideals::Ideal::unit(&common::xy()), LOCAL_ORDER), "{}", m.name);
    }
}

#[test]
fn wrong_lambda_is_detected() {
    use darboux::conductor::mixed_derivative_gens;
    use darboux::ideals::Ideal;
    let v = common::xy();
    let model = models().into_iter().find(|m| m.name == "nodal tangential").unwrap();
    let c = quotient_conductor(&model.curve);
    let wrong = Ideal::new(&v, mixed_derivative_gens(&common::p("x^2 + 4*y", &v), &common::p("y", &v), &darboux::Rational::from(-2)));
    assert!(!locally_equal(&c, &wrong, LOCAL_ORDER));
}

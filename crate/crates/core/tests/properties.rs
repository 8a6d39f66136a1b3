//! Randomized invariants of the algebra core and the forward oracle.

mod common;

use common::algebra::{check_factorization, check_resultant, check_s_polynomials, check_squarefree, form, ideal_sample, univariate_product as univariate_product_of};
use common::reference;
use darboux::forward::{equal_up_to_scaling, translate_camera};
use darboux::ideals::TermOrder;
use darboux::poly::trial_divide;
use darboux::{Poly, QPoly, Rational, Vars};
use num_traits::One;
use proptest::prelude::*;

fn small_ideal() -> impl Strategy<Value = Vec<(u32, Vec<i64>)>> {
    prop::collection::vec((1u32..=3, prop::collection::vec(-3i64..=3, 10)), 2..=3)
}

fn poly_in_w(max_deg: usize) -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-9i64..=9, -9i64..=9, -9i64..=9), 2..=max_deg + 1)
}

fn univariate_product() -> impl Strategy<Value = QPoly> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, 2..=4), 1u32..=3), 1..=4).prop_map(|fs| univariate_product_of(&fs))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, .. ProptestConfig::default() })]

    #[test]
    fn s_polynomials_reduce_to_zero(gens in small_ideal()) {
        let gens = ideal_sample(&gens);
        prop_assume!(!gens.is_empty());
        prop_assert_eq!(check_s_polynomials(&gens), Ok(()));
    }

    #[test]
    fn resultant_commutes_with_specialization(p in poly_in_w(4), q in poly_in_w(4), y0 in -7i64..=7, z0 in -7i64..=7) {
        let r = check_resultant(&p, &q, y0, z0);
        prop_assume!(r.is_some());
        prop_assert_eq!(r.unwrap(), Ok(()));
    }

    #[test]
    fn squarefree_reconstructs(p in univariate_product()) {
        prop_assert_eq!(check_squarefree(&p), Ok(()));
    }

    #[test]
    fn factorization_reconstructs(p in univariate_product()) {
        prop_assert_eq!(check_factorization(&p), Ok(()));
    }

    #[test]
    fn trial_divide_is_exact(a in prop::collection::vec(-4i64..=4, 6), b in prop::collection::vec(-4i64..=4, 3), k in 0u32..=3) {
        let p = form(2, &a);
        let d = form(1, &b);
        prop_assume!(!p.is_zero() && !d.is_zero());
        let (q, m) = trial_divide(&(&p * &d.pow(k)), &d).unwrap();
        prop_assert!(m >= k);
        prop_assert_eq!(&q * &d.pow(m), &p * &d.pow(k));
        prop_assert!(q.div_exact(&d).is_none());
    }

    #[test]
    fn ring_operations_are_exact(a in prop::collection::vec(-9i64..=9, 10), b in prop::collection::vec(-9i64..=9, 10)) {
        let (p, q) = (form(3, &a), form(2, &b));
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        prop_assert_eq!((&p * &q).div_exact(&q).filter(|_| !q.is_zero()).unwrap_or_else(|| p.clone()), p.clone());
    }

    #[test]
    fn camera_translation_is_an_action(p in prop::collection::vec(-3i64..=3, 3), q in prop::collection::vec(-3i64..=3, 3)) {
        let f = darboux::forward::make_cyclide(&darboux::forward::torus(3, 1)).unwrap();
        let r = |v: &[i64]| -> [Rational; 3] { std::array::from_fn(|i| Rational::from(v[i])) };
        let sum: Vec<i64> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
        let once = translate_camera(&f, &r(&p));
        let direct = translate_camera(&f, &r(&sum));
        prop_assume!(once.is_ok() && direct.is_ok());
        let two = translate_camera(&once.unwrap(), &r(&q)).unwrap();
        prop_assert_eq!(two, direct.unwrap());
    }

    #[test]
    fn scaling_equivalence(d1 in 1i64..=4, d2 in -4i64..=-1, mu in 1i64..=5) {
        let vars = Vars::xyzw();
        let f = darboux::forward::make_cyclide(&darboux::forward::torus(2, 1)).unwrap();
        let scale = |p: &QPoly, d: i64, m: i64| -> QPoly {
            let img = [Poly::var(&vars, 0), Poly::var(&vars, 1), Poly::var(&vars, 2), Poly::var(&vars, 3).scale(&Rational::from(d))];
            p.compose(&img).scale(&Rational::from(m))
        };
        let g = scale(&f, d1, mu);
        let h = scale(&g, d2, 1);
        prop_assert!(equal_up_to_scaling(&f, &f).is_some());
        prop_assert!(equal_up_to_scaling(&f, &g).is_some());
        prop_assert!(equal_up_to_scaling(&g, &f).is_some());
        prop_assert!(equal_up_to_scaling(&g, &h).is_some());
        prop_assert!(equal_up_to_scaling(&f, &h).is_some());
    }
}

#[test]
fn reference_remainder_detects_nonmembers() {
    let v = Vars::xyz();
    let basis = vec![common::p("x - y", &v)];
    assert!(!reference::remainder(&common::p("x + y", &v), &basis, TermOrder::Grevlex).is_zero());
    assert!(reference::remainder(&common::p("x^2 - y^2", &v), &basis, TermOrder::Grevlex).is_zero());
}

#[test]
fn reference_sylvester_small_case() {
    // Res(w - 2, w - 3) = 2 - 3.
    let p = vec![Rational::from(-2), Rational::one()];
    let q = vec![Rational::from(-3), Rational::one()];
    assert_eq!(reference::sylvester(&p, &q), Rational::from(-1));
}

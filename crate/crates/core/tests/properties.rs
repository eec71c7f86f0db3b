use num_complex::Complex64;
use proptest::prelude::*;
use sl3char::d4::elements;
use sl3char::gluing::apply_qstar;
use sl3char::oracle::{rng_for, sample_point};
use sl3char::poisson::{bracket, pants, torus};
use sl3char::poly::int;
use sl3char::ring::{random_element, reduce, ring_mul};
use sl3char::{Poly, RingElement, VarIndex, NVARS};

fn element(seed: u64, terms: usize, degree: u16) -> RingElement {
    random_element(&mut rng_for(seed, 0), terms, degree)
}

fn poly(seed: u64) -> Poly {
    element(seed, 5, 3).to_poly()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn ring_axioms(s1: u64, s2: u64, s3: u64) {
        let (a, b, c) = (element(s1, 4, 3), element(s2, 4, 3), element(s3, 4, 3));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &RingElement::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn reduce_is_a_homomorphism(s1: u64, s2: u64) {
        let (f, g) = (poly(s1), poly(s2));
        let t5 = Poly::t(5);
        let (f, g) = (&f * &t5, &g * &t5.pow(2));
        prop_assert_eq!(reduce(&(&f * &g)), ring_mul(&reduce(&f), &reduce(&g)));
        prop_assert_eq!(reduce(&(&f + &g)), &reduce(&f) + &reduce(&g));
        let r = reduce(&f);
        prop_assert_eq!(reduce(&r.to_poly()), r);
    }

    #[test]
    fn partial_leibniz(s1: u64, s2: u64, slot in 0..NVARS) {
        let (f, g) = (poly(s1), poly(s2));
        let v = VarIndex::from_slot(slot);
        prop_assert_eq!((&f * &g).partial(v), &(&f.partial(v) * &g) + &(&f * &g.partial(v)));
    }

    #[test]
    fn canonical_text_round_trips(s: u64) {
        let f = poly(s);
        let back: Poly = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn substitution_commutes_with_evaluation(s1: u64, s2: u64) {
        let f = poly(s1);
        let images: std::collections::BTreeMap<_, _> =
            VarIndex::ALL.iter().enumerate().map(|(k, &v)| (v, poly(s2.wrapping_add(k as u64)))).collect();
        let point = sample_point(s2, 0).unwrap();
        let moved: [Complex64; NVARS] =
            std::array::from_fn(|k| images[&VarIndex::from_slot(k)].eval(point.values()));
        let lhs = f.substitute(&images).unwrap().eval(point.values());
        let rhs = f.eval(&moved);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn d4_acts_by_ring_automorphisms(s1: u64, s2: u64) {
        let (f, g) = (element(s1, 3, 3), element(s2, 3, 3));
        let group = elements();
        for x in &group {
            prop_assert_eq!(x.apply(&(&f * &g)), &x.apply(&f) * &x.apply(&g));
            for y in &group {
                prop_assert_eq!(x.apply(&y.apply(&f)), x.compose(y).apply(&f));
            }
        }
    }

    #[test]
    fn bracket_axioms(s1: u64, s2: u64, s3: u64) {
        let (f, g, h) = (element(s1, 3, 2), element(s2, 3, 2), element(s3, 3, 2));
        for bv in [pants(), torus()] {
            prop_assert_eq!(bracket(&f, &g, bv), -bracket(&g, &f, bv));
            prop_assert_eq!(
                bracket(&f, &(&g * &h), bv),
                &(&bracket(&f, &g, bv) * &h) + &(&g * &bracket(&f, &h, bv))
            );
            let lin = &g.scale(&int(3)) + &h;
            prop_assert_eq!(
                bracket(&f, &lin, bv),
                &bracket(&f, &g, bv).scale(&int(3)) + &bracket(&f, &h, bv)
            );
        }
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn qstar_is_a_ring_homomorphism(s1: u64, s2: u64) {
        let (f, g) = (element(s1, 2, 2), element(s2, 2, 2));
        prop_assert_eq!(apply_qstar(&(&f * &g)), &apply_qstar(&f) * &apply_qstar(&g));
        prop_assert_eq!(apply_qstar(&(&f + &g)), &apply_qstar(&f) + &apply_qstar(&g));
    }
}

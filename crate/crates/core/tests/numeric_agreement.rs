//! Exact results evaluated on sampled matrix pairs.

use num_complex::Complex64;
use sl3char::d4::elements;
use sl3char::gluing::qstar;
use sl3char::oracle::{
    certify_identity, defining_word, determine_t5_action, rng_for, sample_point, T5Action, Word,
};
use sl3char::poisson::{bracket, Surface};
use sl3char::ring::random_element;
use sl3char::{relation, Exec, RingElement, VarIndex};

#[test]
fn generator_brackets_match_bivector_contraction() {
    for surface in [Surface::Pants, Surface::Torus] {
        let bv = surface.bivector();
        let numeric = bv.numeric();
        for k in 0..20 {
            let point = sample_point(3, k).unwrap();
            let m = numeric.matrix(point.values());
            for i in VarIndex::ALL {
                for j in VarIndex::ALL {
                    let exact = bracket(&RingElement::generator(i), &RingElement::generator(j), bv);
                    let value = exact.eval(point.values());
                    let entry = m[(i.slot(), j.slot())];
                    assert!(
                        (value - entry).norm() <= 1e-8 * (1.0 + entry.norm()),
                        "{surface} {i} {j}"
                    );
                }
            }
        }
    }
}

#[test]
fn reduced_brackets_agree_with_gradient_contraction() {
    for surface in [Surface::Pants, Surface::Torus] {
        let bv = surface.bivector();
        let numeric = bv.numeric();
        for k in 0..20u64 {
            let f = random_element(&mut rng_for(100 + k, 0), 3, 3);
            let g = random_element(&mut rng_for(200 + k, 0), 3, 3);
            let point = sample_point(5, k).unwrap();
            let p = point.values();
            let m = numeric.matrix(p);
            let df: Vec<Complex64> = f.gradient().iter().map(|d| d.eval(p)).collect();
            let dg: Vec<Complex64> = g.gradient().iter().map(|d| d.eval(p)).collect();
            let mut direct = Complex64::new(0.0, 0.0);
            for a in 0..9 {
                for b in 0..9 {
                    direct += df[a] * m[(a, b)] * dg[b];
                }
            }
            let exact = bracket(&f, &g, bv).eval(p);
            assert!(
                (exact - direct).norm() <= 1e-7 * (1.0 + direct.norm()),
                "{surface} {exact} {direct}"
            );
        }
    }
}

#[test]
fn coordinate_words_certify_tautologically() {
    for v in VarIndex::ALL {
        let r = certify_identity(
            &sl3char::Poly::var(v),
            &[defining_word(v)],
            20,
            1,
            Exec::default(),
        )
        .unwrap();
        assert!(r <= 1e-10, "{v}: {r}");
    }
}

#[test]
fn p_is_sum_of_commutator_traces() {
    let words = [Word::parse("abAB").unwrap(), Word::parse("baBA").unwrap()];
    let r = certify_identity(relation().p(), &words, 50, 2, Exec::default()).unwrap();
    assert!(r <= 1e-8, "{r}");
}

#[test]
fn t5_actions_follow_flip_parity() {
    for g in elements() {
        let expected = if g.t5_flips() {
            T5Action::Flipped
        } else {
            T5Action::Fixed
        };
        assert_eq!(
            determine_t5_action(&g, 20, 4).unwrap(),
            expected,
            "{}",
            g.name()
        );
    }
}

#[test]
fn qstar_images_certify() {
    let residuals = qstar().certify(30, 9, Exec::default()).unwrap();
    for (v, r) in residuals {
        assert!(r <= 1e-8, "{v}: {r}");
    }
}

#[test]
fn sequential_and_parallel_sampling_agree() {
    let a = sl3char::oracle::sample_points(8, 16, Exec::Sequential).unwrap();
    let b = sl3char::oracle::sample_points(8, 16, Exec::Parallel).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.values(), y.values());
    }
}

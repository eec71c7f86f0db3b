//! Values measured once by independent computation and frozen here.

use sl3char::d4::D4Element;
use sl3char::gluing::{qstar, verify_anti_poisson};
use sl3char::oracle::{determine_t5_action, T5Action};
use sl3char::poisson::{pants, torus};
use sl3char::{relation, Exec, VarIndex};

#[test]
fn term_counts() {
    assert_eq!(relation().p().len(), 10);
    assert_eq!(relation().q().len(), 73);
    assert_eq!(qstar().image(VarIndex::T5).to_poly().len(), 41);
    assert_eq!(pants().entries().count(), 3);
    assert_eq!(torus().entries().count(), 24);
}

#[test]
fn gluing_sign_is_plus_one() {
    let report = verify_anti_poisson(Exec::default());
    assert_eq!(report.sign, Some(1));
    let minus_fails: Vec<(i8, i8)> = report
        .pairs
        .iter()
        .filter(|p| !p.minus)
        .map(|p| (p.i.value(), p.j.value()))
        .collect();
    assert_eq!(minus_fails, vec![(4, -4), (4, 5), (-4, 5)]);
}

#[test]
fn named_t5_actions() {
    let cases = [
        (D4Element::identity(), T5Action::Fixed),
        (D4Element::swap(), T5Action::Flipped),
        (D4Element::invert_first(), T5Action::Flipped),
        (D4Element::invert_both(), T5Action::Fixed),
        (D4Element::invert_second(), T5Action::Flipped),
    ];
    for (g, expected) in cases {
        assert_eq!(
            determine_t5_action(&g, 10, 21).unwrap(),
            expected,
            "{}",
            g.name()
        );
    }
}

use sl3char::poly::rat;
use sl3char::{relation, Poly, RingElement, VarIndex};
use sl3char_cli::expr::{parse, parse_element, ExprError, Expression};
use sl3char_cli::run;

fn t(i: i64) -> Poly {
    Poly::t(i)
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = vec![];
    let mut err = vec![];
    let code = run(
        std::iter::once("sl3char").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn parses_torus_coefficient() {
    let e = parse_element("t(3) - 1/3 * t(1)*t(2)").unwrap();
    assert_eq!(e.to_poly(), t(3) - (t(1) * t(2)).scale(&rat(1, 3)));
}

#[test]
fn commutator_trace_is_t5() {
    assert_eq!(parse_element("tr(abAB)").unwrap(), RingElement::t5());
    assert_eq!(parse_element("tr(BabA)").unwrap(), RingElement::t5());
    let sum = parse_element("tr(abAB) + tr(baBA)").unwrap();
    assert_eq!(sum.to_poly(), relation().p().clone());
    assert_eq!(parse_element("tr()").unwrap().to_poly(), Poly::from_int(3));
}

#[test]
fn rejects_unknown_variables_and_words() {
    match parse("t(6)") {
        Err(ExprError::UnknownVariable {
            index: 6,
            offset: 2,
        }) => {}
        other => panic!("{other:?}"),
    }
    assert!(parse("t(6)")
        .unwrap_err()
        .to_string()
        .contains("unknown variable"));
    assert!(matches!(
        parse("tr(aabb)"),
        Err(ExprError::UnknownTrace { .. })
    ));
    assert!(matches!(
        parse("t(1) +"),
        Err(ExprError::Syntax { offset: 6, .. })
    ));
    assert!(matches!(
        parse("t(1) t(2)"),
        Err(ExprError::Syntax { offset: 5, .. })
    ));
    assert!(matches!(parse("1/0"), Err(ExprError::Syntax { .. })));
}

#[test]
fn precedence_and_associativity() {
    let v = |i| Box::new(Expression::Var(VarIndex::new(i).unwrap()));
    assert_eq!(
        parse("-t(1)^2").unwrap(),
        Expression::Neg(Box::new(Expression::Pow(v(1), 2)))
    );
    assert_eq!(
        parse("t(1) - t(2) - t(3)").unwrap(),
        Expression::Sub(Box::new(Expression::Sub(v(1), v(2))), v(3))
    );
    assert_eq!(
        parse("t(1) * t(2) ^ 2").unwrap(),
        Expression::Mul(v(1), Box::new(Expression::Pow(v(2), 2)))
    );
    assert_eq!(
        parse_element("(t(1) + 1)^2 - t(1)^2 - 2*t(1)")
            .unwrap()
            .to_poly(),
        Poly::one()
    );
    assert_eq!(parse_element("-t(1) - -t(1)").unwrap(), RingElement::zero());
}

#[test]
fn t5_powers_reduce() {
    let e = parse_element("t(5)^2").unwrap();
    let rel = relation();
    assert_eq!(
        e,
        RingElement::new(-rel.q().clone(), rel.p().clone()).unwrap()
    );
}

#[test]
fn bracket_command_prints_p_minus_2t5() {
    let (code, out, _) = invoke(&["bracket", "--surface", "pants", "t(4)", "t(-4)"]);
    assert_eq!(code, 0);
    let printed: Poly = out.trim().parse().unwrap();
    assert_eq!(printed, relation().p() - &t(5).scale(&rat(2, 1)));
}

#[test]
fn sample_zero_is_empty_and_valid() {
    let (code, out, _) = invoke(&["sample", "--count", "0"]);
    assert_eq!(code, 0);
    assert_eq!(
        serde_json::from_str::<serde_json::Value>(&out).unwrap(),
        serde_json::json!([])
    );
    let (code, out, _) = invoke(&["sample", "--count", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn sample_json_carries_matrices() {
    let (code, out, _) = invoke(&["sample", "--count", "2", "--seed", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(v[0]["a"].is_array() && v[0]["b"].is_array());
    assert!(v[0]["values"]["t(5)"].is_array());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(invoke(&["verify", "nonsense"]).0, 2);
    assert_eq!(
        invoke(&["bracket", "--surface", "annulus", "t(1)", "t(2)"]).0,
        2
    );
    let (code, _, err) = invoke(&["bracket", "--surface", "torus", "t(6)", "t(2)"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown variable"));
}

#[test]
fn verify_report_schema() {
    let (code, out, _) = invoke(&["verify", "elimination", "--json", "--seed", "4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "sl3char.report/1");
    assert_eq!(v["suite"], "elimination");
    assert_eq!(v["seed"], 4);
    assert_eq!(v["pass"], true);
    assert!(v.get("timings_ms").is_none());
    let (_, out, _) = invoke(&["verify", "casimirs", "--json", "--timings"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["timings_ms"]["total"].is_number());
}

#[test]
fn anti_poisson_reports_sign() {
    let (code, out, _) = invoke(&["verify", "anti-poisson", "--json", "--samples", "20"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sign"], 1);
}

#[test]
fn rank_histogram() {
    let (code, out, _) = invoke(&["rank", "--surface", "torus", "--samples", "10", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["histogram"]["6"], 10);
}

#[test]
fn ring_dump_lists_p_and_q() {
    let (code, out, _) = invoke(&["ring", "dump"]);
    assert_eq!(code, 0);
    assert!(out.contains("P (10 terms)") && out.contains("Q (73 terms)"));
}

#[test]
fn sequential_and_parallel_reports_match() {
    let (_, a, _) = invoke(&["verify", "transversality", "--json", "--samples", "30"]);
    let (_, b, _) = invoke(&[
        "verify",
        "transversality",
        "--json",
        "--samples",
        "30",
        "--sequential",
    ]);
    assert_eq!(a, b);
}

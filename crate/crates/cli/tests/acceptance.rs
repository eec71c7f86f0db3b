//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use sl3char::d4::GroupRingElement;
use sl3char::poly::int;
use sl3char::{relation, tol, Exec};
use sl3char_cli::suites::{self, Check, Settings};

const SEED: u64 = 7;

type Criterion = fn() -> (bool, String);

fn settings(samples: usize) -> Settings {
    Settings {
        seed: SEED,
        samples,
        tol_sym: 1e-8,
        tol_rank: tol::RANK,
        exec: Exec::Parallel,
    }
}

fn all(checks: Vec<Check>) -> (bool, String) {
    let pass = checks.iter().all(|c| c.pass);
    let detail = checks
        .iter()
        .map(|c| {
            format!(
                "[{} {}] {}",
                c.name,
                if c.pass { "ok" } else { "FAILED" },
                c.detail
            )
        })
        .collect::<Vec<_>>()
        .join(" ");
    (pass, detail)
}

fn ring_construction() -> (bool, String) {
    all(vec![suites::ring_construction()])
}

fn relation_residual() -> (bool, String) {
    all(vec![suites::relation_residual(&settings(200)).unwrap()])
}

fn d4_integrity() -> (bool, String) {
    let rel = relation();
    let s = GroupRingElement::symmetrizer();
    let invariant = sl3char::d4::elements()
        .iter()
        .all(|g| &g.apply_poly(rel.p()) == rel.p() && &g.apply_poly(rel.q()) == rel.q())
        && s.apply_poly(rel.p()) == rel.p().scale(&int(8));
    let (pass, detail) = all(vec![suites::d4_integrity(50, SEED).unwrap()]);
    (
        pass && invariant,
        format!("{detail} [P, Q fixed by every element: {invariant}]"),
    )
}

fn poisson_axioms() -> (bool, String) {
    all(vec![
        suites::poisson_axioms(SEED, 50),
        suites::jacobi(Exec::Parallel),
        suites::centrality(),
    ])
}

fn casimirs() -> (bool, String) {
    all(vec![suites::casimirs()])
}

fn qstar_certification() -> (bool, String) {
    all(vec![suites::qstar_certification(&settings(100)).unwrap()])
}

fn anti_poisson() -> (bool, String) {
    let (check, _) = suites::anti_poisson(Exec::Parallel);
    all(vec![check])
}

fn ranks() -> (bool, String) {
    all(suites::ranks(&settings(200)).unwrap())
}

fn transversality() -> (bool, String) {
    let (check, diagnostics) = suites::transversality(&settings(200)).unwrap();
    let (pass, detail) = all(vec![check]);
    (pass, format!("{detail} {}", diagnostics.join("; ")))
}

fn elimination() -> (bool, String) {
    all(vec![suites::elimination()])
}

fn reproducibility() -> (bool, String) {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sl3char"))
            .args(["verify", "all", "--seed", "7", "--json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = a.status.success() && b.status.success();
    (
        identical && ok,
        format!(
            "two runs of `verify all --seed 7 --json`: {} bytes, byte-identical: {identical}, exit codes {:?}/{:?}",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("ring construction", ring_construction),
        ("relation residual", relation_residual),
        ("D4 integrity", d4_integrity),
        ("Poisson axioms", poisson_axioms),
        ("Casimirs", casimirs),
        ("q* certification", qstar_certification),
        ("anti-Poisson sign", anti_poisson),
        ("bi-vector ranks", ranks),
        ("transversality", transversality),
        ("elimination", elimination),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {}: {name}: {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

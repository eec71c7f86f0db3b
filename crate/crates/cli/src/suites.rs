//! Verification suites. Each check is a plain function so the acceptance
//! tests can call them with their own sample counts.

use clap::ValueEnum;
use serde::Serialize;
use sl3char::d4::{elements, GroupRingElement};
use sl3char::gluing::{qstar, restricted_bivector, verify_anti_poisson};
use sl3char::leaves::{elimination_check, transversality_survey, EXPECTED};
use sl3char::oracle::{
    certify_identity, determine_t5_action, rng_for, sample_point, T5Action, Word,
};
use sl3char::poisson::{bracket, casimir_check, jacobi_defect, p_minus_t5, pants, torus, Surface};
use sl3char::poly::int;
use sl3char::ring::random_element;
use sl3char::{linalg, relation, tol, Exec, Poly, RingElement, VarIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Casimirs,
    Jacobi,
    AntiPoisson,
    Transversality,
    Elimination,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Casimirs => "casimirs",
            Suite::Jacobi => "jacobi",
            Suite::AntiPoisson => "anti-poisson",
            Suite::Transversality => "transversality",
            Suite::Elimination => "elimination",
            Suite::All => "all",
        }
    }

    const PARTS: [Suite; 6] = [
        Suite::Identities,
        Suite::Casimirs,
        Suite::Jacobi,
        Suite::AntiPoisson,
        Suite::Transversality,
        Suite::Elimination,
    ];
}

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub seed: u64,
    pub samples: usize,
    pub tol_sym: f64,
    pub tol_rank: f64,
    pub exec: Exec,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 0,
            samples: 200,
            tol_sym: tol::SYMBOLIC_NUMERIC,
            tol_rank: tol::RANK,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub sign: Option<i8>,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

type Res<T> = sl3char::Result<T>;

pub fn run_suite(suite: Suite, s: &Settings) -> Res<Outcome> {
    let mut out = Outcome::default();
    match suite {
        Suite::All => {
            for part in Suite::PARTS {
                let o = run_suite(part, s)?;
                out.checks.extend(o.checks);
                out.diagnostics.extend(o.diagnostics);
                out.sign = out.sign.or(o.sign);
            }
        }
        Suite::Identities => {
            out.push(ring_construction());
            out.push(relation_residual(s)?);
            out.push(d4_integrity(s.samples, s.seed)?);
            out.push(commutator_sum(s)?);
            out.push(qstar_certification(s)?);
        }
        Suite::Casimirs => {
            out.push(casimirs());
            out.push(centrality());
        }
        Suite::Jacobi => {
            out.push(poisson_axioms(s.seed, 50));
            out.push(jacobi(s.exec));
        }
        Suite::AntiPoisson => {
            let (check, sign) = anti_poisson(s.exec);
            out.push(check);
            out.sign = sign;
            out.checks.extend(ranks(s)?);
        }
        Suite::Transversality => {
            let (check, diagnostics) = transversality(s)?;
            out.push(check);
            out.diagnostics = diagnostics;
        }
        Suite::Elimination => out.push(elimination()),
    }
    Ok(out)
}

pub fn ring_construction() -> Check {
    let rel = relation();
    let threes: [_; 9] = std::array::from_fn(|_| int(3));
    let p3 = rel.p().eval_exact(&threes);
    let q3 = rel.q().eval_exact(&threes);
    let invariant = GroupRingElement::symmetrizer().apply_poly(rel.p()) == rel.p().scale(&int(8))
        && GroupRingElement::symmetrizer().apply_poly(rel.q()) == rel.q().scale(&int(8));
    let (dp, dq) = (rel.p().degree(), rel.q().degree());
    let pass = p3 == int(6) && q3 == int(9) && dp == Some(4) && dq == Some(6) && invariant;
    Check::new(
        "ring-construction",
        pass,
        format!(
            "P(3..3) = {p3}, Q(3..3) = {q3}, deg P = {}, deg Q = {}, terms {}/{}, D4-invariant: {invariant}",
            dp.unwrap_or(0),
            dq.unwrap_or(0),
            rel.p().len(),
            rel.q().len()
        ),
    )
}

pub fn relation_residual(s: &Settings) -> Res<Check> {
    let points = sl3char::oracle::sample_points(s.seed, s.samples, s.exec)?;
    let worst = points
        .iter()
        .map(|p| p.relation_residual())
        .fold(0.0, f64::max);
    Ok(Check::new(
        "relation-residual",
        worst <= tol::RELATION,
        format!(
            "max relative residual {worst:.3e} over {} points (tolerance {:.0e})",
            points.len(),
            tol::RELATION
        ),
    ))
}

pub fn d4_integrity(samples: usize, seed: u64) -> Res<Check> {
    let group = elements();
    let closed = group.len() == 8
        && group
            .iter()
            .all(|x| group.iter().all(|y| group.contains(&x.compose(y))));
    let mut mismatches = vec![];
    for g in &group {
        let expected = if g.t5_flips() {
            T5Action::Flipped
        } else {
            T5Action::Fixed
        };
        match determine_t5_action(g, samples, seed) {
            Ok(a) if a == expected => {}
            Ok(a) => mismatches.push(format!("{}: {a:?}", g.name())),
            Err(e) => mismatches.push(format!("{}: {e}", g.name())),
        }
    }
    let detail = if mismatches.is_empty() {
        format!("order 8, closed: {closed}; t5 action matches flip parity for all 8 elements at {samples} samples")
    } else {
        format!("closed: {closed}; mismatches: {}", mismatches.join(", "))
    };
    Ok(Check::new(
        "d4-integrity",
        closed && mismatches.is_empty(),
        detail,
    ))
}

pub fn commutator_sum(s: &Settings) -> Res<Check> {
    let words = [Word::parse("abAB")?, Word::parse("baBA")?];
    let r = certify_identity(relation().p(), &words, s.samples, s.seed, s.exec)?;
    Ok(Check::new(
        "p-commutator-sum",
        r <= s.tol_sym,
        format!("P = tr(abAB) + tr(baBA): max relative residual {r:.3e}"),
    ))
}

pub fn qstar_certification(s: &Settings) -> Res<Check> {
    let residuals = qstar().certify(s.samples, s.seed, s.exec)?;
    let worst = residuals.iter().map(|&(_, r)| r).fold(0.0, f64::max);
    let failing: Vec<String> = residuals
        .iter()
        .filter(|&&(_, r)| r > s.tol_sym)
        .map(|(v, r)| format!("{v} ({r:.3e})"))
        .collect();
    let detail = if failing.is_empty() {
        format!(
            "9 images certified against their words at {} samples, max residual {worst:.3e}, t(5) image has {} terms",
            s.samples,
            qstar().image(VarIndex::T5).to_poly().len()
        )
    } else {
        format!("failing: {}", failing.join(", "))
    };
    Ok(Check::new(
        "qstar-certification",
        failing.is_empty(),
        detail,
    ))
}

pub fn casimirs() -> Check {
    let pants_ok: Vec<bool> = [1, -1, 2, -2, 3, -3]
        .iter()
        .map(|&i| {
            casimir_check(
                pants(),
                &RingElement::generator(VarIndex::new(i).expect("valid")),
            )
        })
        .collect();
    let t5 = casimir_check(torus(), &RingElement::t5());
    let other = casimir_check(torus(), &p_minus_t5());
    let pass = pants_ok.iter().all(|&b| b) && t5 && other;
    Check::new(
        "casimirs",
        pass,
        format!("pants t(+-1), t(+-2), t(+-3): {pants_ok:?}; torus t(5): {t5}, P - t(5): {other}"),
    )
}

pub fn centrality() -> Check {
    let f = RingElement::from_poly(relation().polynomial());
    let zero_reduced = f.is_zero();
    let mut failing = vec![];
    for surface in [Surface::Pants, Surface::Torus] {
        let bv = surface.bivector();
        // Bracket the unreduced relation polynomial via its gradient.
        let grad = relation().polynomial().gradient();
        for v in VarIndex::ALL {
            let g = RingElement::generator(v);
            let dg = g.gradient();
            let mut acc = Poly::zero();
            for (i, j, c) in bv.entries() {
                let cross = &(&grad[i.slot()] * &dg[j.slot()]) - &(&grad[j.slot()] * &dg[i.slot()]);
                acc += &(&c.to_poly() * &cross);
            }
            if !sl3char::reduce(&acc).is_zero() {
                failing.push(format!("{surface}/{v}"));
            }
        }
    }
    Check::new(
        "relation-centrality",
        zero_reduced && failing.is_empty(),
        if failing.is_empty() {
            "{t5^2 - P t5 + Q, t(i)} reduces to 0 for all nine generators on both surfaces"
                .to_string()
        } else {
            format!("nonzero: {}", failing.join(", "))
        },
    )
}

pub fn poisson_axioms(seed: u64, pairs: usize) -> Check {
    let mut failing = vec![];
    for k in 0..pairs as u64 {
        let f = random_element(&mut rng_for(seed, 2 * k), 3, 2);
        let g = random_element(&mut rng_for(seed, 2 * k + 1), 3, 2);
        let h = random_element(&mut rng_for(seed ^ 0xa5a5, k), 2, 2);
        for surface in [Surface::Pants, Surface::Torus] {
            let bv = surface.bivector();
            let fg = bracket(&f, &g, bv);
            let antisym = fg == -bracket(&g, &f, bv);
            let leibniz = bracket(&f, &(&g * &h), bv) == &(&fg * &h) + &(&g * &bracket(&f, &h, bv));
            if !(antisym && leibniz) {
                failing.push(format!("pair {k} on {surface}"));
            }
        }
    }
    Check::new(
        "poisson-axioms",
        failing.is_empty(),
        if failing.is_empty() {
            format!("antisymmetry and Leibniz exact on {pairs} random pairs per bi-vector")
        } else {
            format!("failing: {}", failing.join(", "))
        },
    )
}

pub fn generator_triples() -> Vec<(VarIndex, VarIndex, VarIndex)> {
    let all = VarIndex::ALL;
    let mut out = vec![];
    for a in 0..all.len() {
        for b in a + 1..all.len() {
            for c in b + 1..all.len() {
                out.push((all[a], all[b], all[c]));
            }
        }
    }
    out
}

pub fn jacobi(exec: Exec) -> Check {
    let triples = generator_triples();
    let mut failing = vec![];
    for surface in [Surface::Pants, Surface::Torus] {
        let bv = surface.bivector();
        let zero = exec.map_slice(&triples, |&(i, j, k)| {
            let g = RingElement::generator;
            jacobi_defect(bv, &g(i), &g(j), &g(k)).is_zero()
        });
        for (t, ok) in triples.iter().zip(zero) {
            if !ok {
                failing.push(format!("{surface} ({}, {}, {})", t.0, t.1, t.2));
            }
        }
    }
    Check::new(
        "jacobi",
        failing.is_empty(),
        if failing.is_empty() {
            format!(
                "defect reduces to 0 for all {} generator triples on both bi-vectors",
                triples.len()
            )
        } else {
            format!("nonzero defect: {}", failing.join(", "))
        },
    )
}

pub fn anti_poisson(exec: Exec) -> (Check, Option<i8>) {
    let report = verify_anti_poisson(exec);
    let failing = report.failing_pairs();
    let detail = match report.sign {
        Some(s) => format!(
            "s = {s:+}: {{q*f, q*g}}_torus + s q*{{f, g}}_pants = 0 for all {} generator pairs",
            report.pairs.len()
        ),
        None => format!(
            "no uniform sign; pairs failing s = +1: {:?}",
            failing
                .iter()
                .map(|(i, j)| format!("({i}, {j})"))
                .collect::<Vec<_>>()
        ),
    };
    (
        Check::new("anti-poisson", report.sign.is_some(), detail),
        report.sign,
    )
}

pub fn ranks(s: &Settings) -> Res<Vec<Check>> {
    let restricted = restricted_bivector();
    let (np, nt) = (pants().numeric(), torus().numeric());
    let rows = s
        .exec
        .map_range(s.samples, |k| -> Res<(usize, usize, usize)> {
            let point = sample_point(s.seed, k as u64)?;
            let p = point.values();
            Ok((
                restricted.rank_at(p, s.tol_rank),
                linalg::numeric_rank(&np.matrix(p), s.tol_rank),
                linalg::numeric_rank(&nt.matrix(p), s.tol_rank),
            ))
        });
    let rows: Vec<_> = rows.into_iter().collect::<Res<_>>()?;
    let n = rows.len().max(1) as f64;
    let freq = |f: &dyn Fn(&(usize, usize, usize)) -> bool| {
        rows.iter().filter(|r| f(r)).count() as f64 / n
    };
    let mk = |name: &str, what: &str, target: usize, f: f64| {
        Check::new(
            name,
            f >= 0.95,
            format!(
                "{what} rank {target} at {:.1}% of {} points",
                100.0 * f,
                rows.len()
            ),
        )
    };
    Ok(vec![
        mk(
            "restricted-rank",
            "restricted (t4, t-4, t5) bi-vector",
            2,
            freq(&|r| r.0 == 2),
        ),
        mk("pants-rank", "pants bi-vector", 2, freq(&|r| r.1 == 2)),
        mk("torus-rank", "torus bi-vector", 6, freq(&|r| r.2 == 6)),
    ])
}

pub fn transversality(s: &Settings) -> Res<(Check, Vec<String>)> {
    let summary = transversality_survey(s.seed, s.samples, s.tol_rank, s.exec)?;
    let total = summary.samples.max(1) as f64;
    let expected = summary.expected as f64 / total;
    let pants = summary.pants_dim_2 as f64 / total;
    let torus = summary.torus_dim_6 as f64 / total;
    let diagnosed = summary.exceptions.iter().all(|(_, why)| !why.is_empty());
    let pass = expected >= 0.95 && pants >= 0.95 && torus >= 0.95 && diagnosed;
    let detail = format!(
        "{:?} at {:.1}% of {} points; pants dim 2: {:.1}%, torus dim 6: {:.1}%, pants projection rank 2: {}/{}; {} flagged",
        EXPECTED,
        100.0 * expected,
        summary.samples,
        100.0 * pants,
        100.0 * torus,
        summary.projection_rank_2,
        summary.generic,
        summary.exceptions.len()
    );
    let diagnostics = summary
        .exceptions
        .iter()
        .map(|(k, why)| format!("transversality sample {k}: {why}"))
        .collect();
    Ok((Check::new("transversality", pass, detail), diagnostics))
}

pub fn elimination() -> Check {
    let r = elimination_check();
    let show = |c: &Option<String>| c.clone().unwrap_or_else(|| "non-constant".into());
    Check::new(
        "elimination",
        r.passes(),
        format!(
            "deg_t4 Q = {}; substitution solves P = C: {}; cleared main branch degree {} in t(-4), leading coefficient {}; special branch degree {} in t(4), leading coefficient {}",
            r.q_degree_t4,
            r.substitution_solves_p,
            r.main_degree,
            show(&r.main_leading),
            r.special_degree,
            show(&r.special_leading)
        ),
    )
}

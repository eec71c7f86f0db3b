//! The pullback `q*` along the gluing map from the pants to the torus, and
//! the check that it reverses Poisson brackets.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::oracle::{certify_identity, Word};
use crate::par::Exec;
use crate::poisson::{bracket, p_minus_t5, pants, torus};
use crate::poly::{NumericPoly, Point9, Poly};
use crate::ring::{reduce, RingElement};
use crate::tol;
use crate::var::{VarIndex, NVARS};

const FIXTURE: &str = include_str!("../data/qstar_images.txt");

/// Samples and seed used to certify each image against its trace word.
pub const CERTIFY_SAMPLES: usize = 24;
pub const CERTIFY_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct QStarTable {
    images: Vec<RingElement>,
    words: Vec<Word>,
}

impl QStarTable {
    pub fn image(&self, v: VarIndex) -> &RingElement {
        &self.images[v.slot()]
    }

    /// The word whose trace the image of `v` equals.
    pub fn word(&self, v: VarIndex) -> &Word {
        &self.words[v.slot()]
    }

    /// `q*(f)`, reduced.
    pub fn apply(&self, f: &RingElement) -> RingElement {
        let map: BTreeMap<VarIndex, Poly> = VarIndex::ALL
            .iter()
            .map(|&v| (v, self.image(v).to_poly()))
            .collect();
        let p = f
            .to_poly()
            .substitute(&map)
            .expect("all nine images present");
        reduce(&p)
    }

    /// Largest relative residual of each image against its word, over samples.
    pub fn certify(&self, samples: usize, seed: u64, exec: Exec) -> Result<Vec<(VarIndex, f64)>> {
        VarIndex::ALL
            .iter()
            .map(|&v| {
                let r = certify_identity(
                    &self.image(v).to_poly(),
                    &[self.word(v).clone()],
                    samples,
                    seed,
                    exec,
                )?;
                Ok((v, r))
            })
            .collect()
    }
}

/// Parses the image table. Entries are `t(i) @ word = poly`; indented lines
/// continue the previous entry and `#` starts a comment line.
pub fn parse_qstar_table(text: &str) -> Result<QStarTable> {
    let mut entries: Vec<(usize, String)> = vec![];
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let trimmed = line.trim_end();
        if trimmed.trim_start().starts_with('#') || trimmed.trim().is_empty() {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            match entries.last_mut() {
                Some((_, body)) => {
                    body.push(' ');
                    body.push_str(trimmed.trim());
                }
                None => return parse_error(start, "continuation line before first entry"),
            }
        } else {
            entries.push((start, trimmed.to_string()));
        }
    }

    let mut images: Vec<Option<RingElement>> = vec![None; NVARS];
    let mut words: Vec<Option<Word>> = vec![None; NVARS];
    for (start, body) in entries {
        let (head, rhs) = body.split_once('=').ok_or(Error::Parse {
            offset: start,
            message: "expected '='".into(),
        })?;
        let (lhs, word) = head.split_once('@').ok_or(Error::Parse {
            offset: start,
            message: "expected '@ word'".into(),
        })?;
        let lhs: Poly = lhs.trim().parse().map_err(|e| shift(e, start))?;
        let v = match lhs.terms().next() {
            Some((m, c)) if lhs.len() == 1 && c == &crate::poly::int(1) && m.degree() == 1 => {
                m.support().next().expect("degree one").0
            }
            _ => return parse_error(start, "left side must be a single t(i)"),
        };
        let rhs: Poly = rhs.parse().map_err(|e| shift(e, start + head.len() + 1))?;
        images[v.slot()] = Some(reduce(&rhs));
        words[v.slot()] = Some(Word::parse(word.trim())?);
    }

    images[VarIndex::TM3.slot()] = Some(p_minus_t5());
    words[VarIndex::TM3.slot()] = Some(Word::parse("AbaB")?);

    let mut out_images = Vec::with_capacity(NVARS);
    let mut out_words = Vec::with_capacity(NVARS);
    for v in VarIndex::ALL {
        out_images.push(images[v.slot()].take().ok_or(Error::MissingImage(v))?);
        out_words.push(words[v.slot()].take().ok_or(Error::MissingImage(v))?);
    }
    Ok(QStarTable {
        images: out_images,
        words: out_words,
    })
}

fn parse_error<T>(offset: usize, message: &str) -> Result<T> {
    Err(Error::Parse {
        offset,
        message: message.into(),
    })
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + by,
            message,
        },
        other => other,
    }
}

/// Parses the bundled table and certifies every image numerically.
pub fn build_qstar() -> Result<QStarTable> {
    let table = parse_qstar_table(FIXTURE)?;
    for (v, residual) in table.certify(CERTIFY_SAMPLES, CERTIFY_SEED, Exec::default())? {
        if residual > tol::SYMBOLIC_NUMERIC {
            return Err(Error::Certification {
                what: format!("q*({v})"),
                residual,
                tolerance: tol::SYMBOLIC_NUMERIC,
            });
        }
    }
    Ok(table)
}

/// The bundled, certified table. Panics if the bundled data fails to certify.
pub fn qstar() -> &'static QStarTable {
    static TABLE: OnceLock<QStarTable> = OnceLock::new();
    TABLE.get_or_init(|| build_qstar().unwrap_or_else(|e| panic!("bundled q* table: {e}")))
}

pub fn apply_qstar(f: &RingElement) -> RingElement {
    qstar().apply(f)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub i: VarIndex,
    pub j: VarIndex,
    /// `{q* t_i, q* t_j}` on the torus vanishes.
    pub torus_zero: bool,
    /// Holds with `s = +1` in `{q*f, q*g} + s q*{f, g} = 0`.
    pub plus: bool,
    /// Holds with `s = -1`.
    pub minus: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AntiPoissonReport {
    pub pairs: Vec<PairCheck>,
    /// `Some(s)` when a single sign works for every pair.
    pub sign: Option<i8>,
}

impl AntiPoissonReport {
    pub fn failing_pairs(&self) -> Vec<(VarIndex, VarIndex)> {
        let ok = |p: &PairCheck| match self.sign {
            Some(1) => p.plus,
            Some(_) => p.minus,
            None => false,
        };
        self.pairs
            .iter()
            .filter(|p| !ok(p))
            .map(|p| (p.i, p.j))
            .collect()
    }
}

pub fn generator_pairs() -> Vec<(VarIndex, VarIndex)> {
    let mut out = vec![];
    for (k, &i) in VarIndex::ALL.iter().enumerate() {
        for &j in &VarIndex::ALL[k + 1..] {
            out.push((i, j));
        }
    }
    out
}

pub fn check_pair(i: VarIndex, j: VarIndex) -> PairCheck {
    let q = qstar();
    let lhs = bracket(q.image(i), q.image(j), torus());
    let pants_bracket = bracket(
        &RingElement::generator(i),
        &RingElement::generator(j),
        pants(),
    );
    let rhs = q.apply(&pants_bracket);
    PairCheck {
        i,
        j,
        torus_zero: lhs.is_zero(),
        plus: (&lhs + &rhs).is_zero(),
        minus: (&lhs - &rhs).is_zero(),
    }
}

pub fn verify_anti_poisson(exec: Exec) -> AntiPoissonReport {
    let pairs = exec.map_slice(&generator_pairs(), |&(i, j)| check_pair(i, j));
    let sign = if pairs.iter().all(|p| p.plus) {
        Some(1)
    } else if pairs.iter().all(|p| p.minus) {
        Some(-1)
    } else {
        None
    };
    AntiPoissonReport { pairs, sign }
}

/// The torus bi-vector restricted to `(t4, t-4, t5)` after pulling back:
/// `{q* t4, q* t-4} = a`, `{q* t4, q* t5} = b`, `{q* t-4, q* t5} = c`.
pub struct RestrictedBiVector {
    pub a: RingElement,
    pub b: RingElement,
    pub c: RingElement,
    numeric: [(NumericPoly, NumericPoly); 3],
}

pub fn restricted_bivector() -> &'static RestrictedBiVector {
    static R: OnceLock<RestrictedBiVector> = OnceLock::new();
    R.get_or_init(|| {
        let q = qstar();
        let (x, y, z) = (
            q.image(VarIndex::T4),
            q.image(VarIndex::TM4),
            q.image(VarIndex::T5),
        );
        let (a, b, c) = (
            bracket(x, y, torus()),
            bracket(x, z, torus()),
            bracket(y, z, torus()),
        );
        let numeric = [&a, &b, &c].map(|e| (NumericPoly::from(e.a()), NumericPoly::from(e.b())));
        RestrictedBiVector { a, b, c, numeric }
    })
}

impl RestrictedBiVector {
    pub fn matrix(&self, point: &Point9) -> DMatrix<Complex64> {
        let t5 = point[VarIndex::T5.slot()];
        let [a, b, c] = self
            .numeric
            .each_ref()
            .map(|(x, y)| x.eval(point) + y.eval(point) * t5);
        let z = Complex64::new(0.0, 0.0);
        DMatrix::from_row_slice(3, 3, &[z, a, b, -a, z, c, -b, -c, z])
    }

    pub fn rank_at(&self, point: &Point9, tol: f64) -> usize {
        linalg::numeric_rank(&self.matrix(point), tol)
    }
}

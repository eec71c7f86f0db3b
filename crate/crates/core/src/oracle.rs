//! Numeric ground truth from sampled `SL(3,C)` pairs.
//!
//! Every sample `k` under seed `s` draws from its own ChaCha stream
//! `(s, k)`, so results do not depend on how the work is scheduled.

use std::fmt;

use nalgebra::Matrix3 as NMatrix3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::d4::{elements_with_words, D4Element, Generator};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::poly::{NumericPoly, Point9, Poly};
use crate::ring::relation;
use crate::tol;
use crate::var::{VarIndex, NVARS};

pub type Matrix3 = NMatrix3<Complex64>;

const MAX_REJECTIONS: usize = 10_000;

/// `a = x1`, `A = x1^-1`, `b = x2`, `B = x2^-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses letters `a`, `A`, `b`, `B`.
    pub fn parse(s: &str) -> Result<Word> {
        s.char_indices()
            .map(|(i, ch)| match ch {
                'a' => Ok(Letter::A),
                'A' => Ok(Letter::AInv),
                'b' => Ok(Letter::B),
                'B' => Ok(Letter::BInv),
                _ => Err(Error::Parse {
                    offset: i,
                    message: format!("'{ch}' is not one of a, A, b, B"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn freely_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Cyclically reduced, then the least rotation. Two words with the same
    /// form have equal traces.
    pub fn cyclic_normal_form(&self) -> Word {
        let mut w = self.freely_reduced().0;
        while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
            w.remove(0);
            w.pop();
        }
        (0..w.len())
            .map(|k| {
                let mut r = w.clone();
                r.rotate_left(k);
                r
            })
            .min()
            .map(Word)
            .unwrap_or_default()
    }

    /// Image under the substitution `a -> image_a`, `b -> image_b`.
    pub fn substitute(&self, image_a: &Word, image_b: &Word) -> Word {
        let inv_a = image_a.inverse();
        let inv_b = image_b.inverse();
        let mut out = vec![];
        for l in &self.0 {
            let piece = match l {
                Letter::A => image_a,
                Letter::AInv => &inv_a,
                Letter::B => image_b,
                Letter::BInv => &inv_b,
            };
            out.extend_from_slice(&piece.0);
        }
        Word(out)
    }

    /// Applies the outer automorphism of a generator.
    pub fn apply_generator(&self, g: Generator) -> Word {
        let (a, b) = match g {
            Generator::Swap => (vec![Letter::B], vec![Letter::A]),
            Generator::InvertFirst => (vec![Letter::AInv], vec![Letter::B]),
        };
        self.substitute(&Word(a), &Word(b))
    }

    /// Applies `s1 ∘ s2 ∘ ... ∘ sk` for the word `[s1, ..., sk]`.
    pub fn apply_generators(&self, word: &[Generator]) -> Word {
        word.iter()
            .rev()
            .fold(self.clone(), |w, &g| w.apply_generator(g))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// The word whose trace is the generator `v`.
pub fn defining_word(v: VarIndex) -> Word {
    let text = match v.value() {
        1 => "a",
        -1 => "A",
        2 => "b",
        -2 => "B",
        3 => "ab",
        -3 => "AB",
        4 => "aB",
        -4 => "Ab",
        _ => "abAB",
    };
    Word::parse(text).expect("static word")
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Entries with real and imaginary parts uniform on `[-1, 1]`, rejected when
/// `|det| < 0.05`, then scaled by the principal cube root of `1/det`.
pub fn sample_sl3_with<R: Rng + ?Sized>(rng: &mut R) -> Result<Matrix3> {
    for _ in 0..MAX_REJECTIONS {
        let m = Matrix3::from_fn(|_, _| {
            Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
        });
        let det = m.determinant();
        if det.norm() < tol::MIN_ABS_DET {
            continue;
        }
        let scale = det.inv().powf(1.0 / 3.0);
        return Ok(m * scale);
    }
    Err(Error::SamplingRejected(MAX_REJECTIONS))
}

pub fn sample_sl3(seed: u64) -> Result<Matrix3> {
    sample_sl3_with(&mut rng_for(seed, 0))
}

/// The matrix pair for sample `index` under `seed`.
pub fn sample_pair(seed: u64, index: u64) -> Result<(Matrix3, Matrix3)> {
    let mut rng = rng_for(seed, index);
    let a = sample_sl3_with(&mut rng)?;
    let b = sample_sl3_with(&mut rng)?;
    Ok((a, b))
}

fn inverse(m: &Matrix3) -> Matrix3 {
    m.try_inverse().expect("unimodular matrix is invertible")
}

pub fn word_eval(w: &Word, a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let (ai, bi) = (inverse(a), inverse(b));
    w.letters().iter().fold(Matrix3::identity(), |acc, l| {
        acc * match l {
            Letter::A => a,
            Letter::AInv => &ai,
            Letter::B => b,
            Letter::BInv => &bi,
        }
    })
}

/// Nine trace coordinates together with the pair that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterPoint {
    #[serde(serialize_with = "ser_point")]
    values: Point9,
    #[serde(serialize_with = "ser_matrix")]
    a: Matrix3,
    #[serde(serialize_with = "ser_matrix")]
    b: Matrix3,
}

fn ser_point<S: serde::Serializer>(p: &Point9, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(NVARS))?;
    for v in VarIndex::ALL {
        map.serialize_entry(&v.to_string(), &[p[v.slot()].re, p[v.slot()].im])?;
    }
    map.end()
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix3, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..3)
        .map(|i| (0..3).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    rows.serialize(s)
}

impl CharacterPoint {
    pub fn values(&self) -> &Point9 {
        &self.values
    }

    pub fn get(&self, v: VarIndex) -> Complex64 {
        self.values[v.slot()]
    }

    pub fn matrices(&self) -> (&Matrix3, &Matrix3) {
        (&self.a, &self.b)
    }

    /// `|t5^2 - P t5 + Q| / (1 + |t5|^2)`.
    pub fn relation_residual(&self) -> f64 {
        relation_residual(&self.values)
    }

    /// `|P^2 - 4Q|` at this point.
    pub fn discriminant(&self) -> f64 {
        let rel = relation();
        let p = rel.p().eval(&self.values);
        (p * p - rel.q().eval(&self.values) * 4.0).norm()
    }

    /// The point of the identity representation, all coordinates 3.
    pub fn identity() -> Self {
        character_point(&Matrix3::identity(), &Matrix3::identity()).expect("identity point")
    }
}

pub fn relation_residual(values: &Point9) -> f64 {
    let t5 = values[VarIndex::T5.slot()];
    relation().polynomial().eval(values).norm() / (1.0 + t5.norm_sqr())
}

pub fn character_point(a: &Matrix3, b: &Matrix3) -> Result<CharacterPoint> {
    let values: Point9 = std::array::from_fn(|slot| {
        word_eval(&defining_word(VarIndex::from_slot(slot)), a, b).trace()
    });
    let residual = relation_residual(&values);
    if residual.is_nan() || residual > tol::RELATION {
        return Err(Error::RelationResidual {
            residual,
            tolerance: tol::RELATION,
        });
    }
    Ok(CharacterPoint {
        values,
        a: *a,
        b: *b,
    })
}

pub fn sample_point(seed: u64, index: u64) -> Result<CharacterPoint> {
    let (a, b) = sample_pair(seed, index)?;
    character_point(&a, &b)
}

pub fn sample_points(seed: u64, count: usize, exec: Exec) -> Result<Vec<CharacterPoint>> {
    exec.map_range(count, |k| sample_point(seed, k as u64))
        .into_iter()
        .collect()
}

/// `|a - b| / (1 + |b|)`.
pub fn relative_residual(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / (1.0 + reference.norm())
}

/// Max over samples of `|p(point) - sum_w tr(w)| / (1 + |sum_w tr(w)|)`.
pub fn certify_identity(
    p: &Poly,
    words: &[Word],
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<f64> {
    let numeric = NumericPoly::from(p);
    let residuals = exec.map_range(samples, |k| -> Result<f64> {
        let point = sample_point(seed, k as u64)?;
        let (a, b) = point.matrices();
        let trace: Complex64 = words.iter().map(|w| word_eval(w, a, b).trace()).sum();
        Ok(relative_residual(numeric.eval(point.values()), trace))
    });
    residuals
        .into_iter()
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum T5Action {
    Fixed,
    Flipped,
}

/// Applies `g`'s automorphism to the commutator word and decides, by sampling,
/// whether its trace is `t5` or `P - t5`. Also checks that the automorphism
/// moves the eight other coordinates as `g`'s index permutation says.
pub fn determine_t5_action(g: &D4Element, samples: usize, seed: u64) -> Result<T5Action> {
    let word = elements_with_words()
        .into_iter()
        .find(|(h, _)| h == g)
        .map(|(_, w)| w)
        .expect("every element has a word");
    let unclassified = || Error::UnclassifiedAction {
        element: g.name().to_string(),
    };
    let p = NumericPoly::from(relation().p());
    let mut fixed = true;
    let mut flipped = true;
    for k in 0..samples {
        let point = sample_point(seed, k as u64)?;
        let (a, b) = point.matrices();
        for v in VarIndex::BASE {
            let image = defining_word(v).apply_generators(&word);
            let tr = word_eval(&image, a, b).trace();
            if relative_residual(tr, point.get(g.image(v))) > tol::SYMBOLIC_NUMERIC {
                return Err(unclassified());
            }
        }
        let image = defining_word(VarIndex::T5).apply_generators(&word);
        let tr = word_eval(&image, a, b).trace();
        let t5 = point.get(VarIndex::T5);
        fixed &= relative_residual(tr, t5) <= tol::SYMBOLIC_NUMERIC;
        flipped &= relative_residual(tr, p.eval(point.values()) - t5) <= tol::SYMBOLIC_NUMERIC;
    }
    match (fixed, flipped) {
        (true, false) => Ok(T5Action::Fixed),
        (false, true) => Ok(T5Action::Flipped),
        _ => Err(unclassified()),
    }
}

//! The coordinate ring `R[t5] / (t5^2 - P t5 + Q)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use crate::d4::GroupRingElement;
use crate::error::{Error, Result};
use crate::poly::{int, rat, Monomial, Point9, Poly, Rational};
use crate::var::{VarIndex, NVARS};

fn t(i: i64) -> Poly {
    Poly::t(i)
}

fn mono(factors: &[(i64, u16)]) -> Poly {
    let mut e = [0u16; NVARS];
    for &(i, k) in factors {
        e[VarIndex::new(i).unwrap().slot()] += k;
    }
    Poly::term(
        Rational::from_integer(1.into()),
        Monomial::from_exponents(e),
    )
}

/// `P`: symmetrized degree-4 seed, minus 3.
pub fn build_p() -> Poly {
    let seed = (mono(&[(1, 1), (-1, 1), (2, 1), (-2, 1)])
        - mono(&[(1, 1), (-2, 1), (-4, 1)]).scale(&int(4))
        + mono(&[(1, 1), (-1, 1)]).scale(&int(2))
        + mono(&[(3, 1), (-3, 1)]).scale(&int(2)))
    .scale(&rat(1, 8));
    GroupRingElement::symmetrizer().apply_poly(&seed) - Poly::from_int(3)
}

/// `Q`: symmetrized degree-6 seed, plus 9.
pub fn build_q() -> Poly {
    let terms: &[(i64, &[(i64, u16)])] = &[
        (2, &[(-2, 1), (-1, 2), (1, 2), (2, 1)]),
        (4, &[(1, 2), (2, 2), (3, 1)]),
        (-4, &[(1, 3), (-2, 1), (2, 1)]),
        (-8, &[(-4, 1), (-2, 1), (-1, 1), (1, 2)]),
        (-4, &[(4, 1), (3, 1), (2, 1), (1, 1), (-2, 1)]),
        (8, &[(1, 1), (3, 1), (-4, 2)]),
        (8, &[(-4, 1), (1, 1), (2, 2)]),
        (-8, &[(3, 2), (2, 1), (1, 1)]),
        (4, &[(4, 1), (-3, 1), (2, 2)]),
        (1, &[(-2, 1), (-1, 1), (2, 1), (1, 1)]),
        (1, &[(-3, 1), (-4, 1), (3, 1), (4, 1)]),
        (4, &[(-3, 1), (-1, 1), (3, 1), (1, 1)]),
        (4, &[(1, 3)]),
        (4, &[(3, 3)]),
        (12, &[(-4, 1), (-2, 1), (1, 1)]),
        (-12, &[(-4, 1), (2, 1), (3, 1)]),
        (-12, &[(1, 1), (-1, 1)]),
        (-12, &[(3, 1), (-3, 1)]),
    ];
    let seed = terms
        .iter()
        .fold(Poly::zero(), |acc, (c, f)| acc + mono(f).scale(&int(*c)))
        .scale(&rat(1, 8));
    GroupRingElement::symmetrizer().apply_poly(&seed) + Poly::from_int(9)
}

/// The defining relation `t5^2 - P t5 + Q` and its two coefficients.
#[derive(Debug)]
pub struct Relation {
    p: Poly,
    q: Poly,
    full: Poly,
}

impl Relation {
    fn build() -> Self {
        let p = build_p();
        let q = build_q();
        let t5 = t(5);
        let full = &t5 * &t5 - &p * &t5 + &q;
        Relation { p, q, full }
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    /// `t5^2 - P t5 + Q` as a polynomial in nine variables.
    pub fn polynomial(&self) -> &Poly {
        &self.full
    }

    /// `P^2 - 4Q`, vanishing exactly where the two roots in `t5` coincide.
    pub fn discriminant(&self) -> Poly {
        &self.p * &self.p - self.q.scale(&int(4))
    }
}

/// Shared `P`, `Q`, built once.
pub fn relation() -> &'static Relation {
    static REL: OnceLock<Relation> = OnceLock::new();
    REL.get_or_init(Relation::build)
}

/// Canonical residue `a + b t5` with `a`, `b` free of `t5`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct RingElement {
    a: Poly,
    b: Poly,
}

impl RingElement {
    pub fn new(a: Poly, b: Poly) -> Result<Self> {
        for p in [&a, &b] {
            if p.contains(VarIndex::T5) {
                return Err(Error::NotT5Free(p.to_string()));
            }
        }
        Ok(RingElement { a, b })
    }

    /// Crate-internal constructor for parts already known to be `t5`-free.
    pub(crate) fn from_parts(a: Poly, b: Poly) -> Self {
        debug_assert!(!a.contains(VarIndex::T5) && !b.contains(VarIndex::T5));
        RingElement { a, b }
    }

    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn one() -> Self {
        RingElement::from_parts(Poly::one(), Poly::zero())
    }

    pub fn t5() -> Self {
        RingElement::from_parts(Poly::zero(), Poly::one())
    }

    pub fn generator(v: VarIndex) -> Self {
        if v == VarIndex::T5 {
            Self::t5()
        } else {
            RingElement::from_parts(Poly::var(v), Poly::zero())
        }
    }

    pub fn from_poly(p: &Poly) -> Self {
        reduce(p)
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_poly(&self) -> Poly {
        &self.a + &(&self.b * &t(5))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RingElement::from_parts(self.a.scale(c), self.b.scale(c))
    }

    pub fn eval(&self, point: &Point9) -> Complex64 {
        self.a.eval(point) + self.b.eval(point) * point[VarIndex::T5.slot()]
    }

    /// Formal partials in the nine variables: `d/dt_i (a + b t5)` for
    /// `i != 5`, and `b` for `t5`.
    pub fn gradient(&self) -> [Poly; NVARS] {
        let t5 = t(5);
        std::array::from_fn(|slot| {
            let v = VarIndex::from_slot(slot);
            if v == VarIndex::T5 {
                self.b.clone()
            } else {
                self.a.partial(v) + &self.b.partial(v) * &t5
            }
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(RingElement::one(), |acc, _| ring_mul(&acc, self))
    }
}

/// Rewrites `t5^n -> P t5^(n-1) - Q t5^(n-2)` from the top degree down.
pub fn reduce(p: &Poly) -> RingElement {
    let mut coeffs = p.coefficients_in(VarIndex::T5);
    let rel = relation();
    while coeffs.len() > 2 {
        let top = coeffs.pop().unwrap();
        let n = coeffs.len();
        coeffs[n - 1] += &(&top * &rel.p);
        coeffs[n - 2] -= &(&top * &rel.q);
    }
    coeffs.resize(2, Poly::zero());
    let b = coeffs.pop().unwrap();
    let a = coeffs.pop().unwrap();
    RingElement::from_parts(a, b)
}

/// `(a1 + b1 t5)(a2 + b2 t5)` with `t5^2 = P t5 - Q`.
pub fn ring_mul(e: &RingElement, f: &RingElement) -> RingElement {
    let rel = relation();
    let bb = &e.b * &f.b;
    let a = &(&e.a * &f.a) - &(&bb * &rel.q);
    let b = &(&(&e.a * &f.b) + &(&e.b * &f.a)) + &(&bb * &rel.p);
    RingElement::from_parts(a, b)
}

/// Projection to the first eight coordinates, plus the other root of the
/// relation over that image.
pub fn branched_projection(point: &Point9) -> ([Complex64; 8], Complex64) {
    let base: [Complex64; 8] = std::array::from_fn(|i| point[i]);
    let companion = relation().p().eval(point) - point[VarIndex::T5.slot()];
    (base, companion)
}

/// Random reduced element with small integer coefficients, for property checks.
pub fn random_element<R: Rng + ?Sized>(
    rng: &mut R,
    max_terms: usize,
    max_degree: u16,
) -> RingElement {
    let nterms = rng.random_range(1..=max_terms);
    let mut p = Poly::zero();
    for _ in 0..nterms {
        let mut e = [0u16; NVARS];
        let deg = rng.random_range(0..=max_degree);
        for _ in 0..deg {
            e[rng.random_range(0..NVARS)] += 1;
        }
        let c = rng.random_range(-5i64..=5);
        p.add_term(Monomial::from_exponents(e), int(c));
    }
    reduce(&p)
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, rhs: RingElement) -> RingElement {
        &self + &rhs
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        RingElement::from_parts(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, rhs: RingElement) -> RingElement {
        &self - &rhs
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        RingElement::from_parts(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::from_parts(-self.a, -self.b)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::from_parts(-&self.a, -&self.b)
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        ring_mul(&self, &rhs)
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        ring_mul(self, rhs)
    }
}

/// Printed as the canonical polynomial `a + b t5`.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

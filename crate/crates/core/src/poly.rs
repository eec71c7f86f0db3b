//! Exact sparse polynomials over `Q` in the nine trace generators.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose order is graded
//! (total degree first) and then lexicographic along
//! `t(1), t(-1), ..., t(-4), t(5)`. Zero coefficients are never stored, so
//! structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::var::{VarIndex, NVARS};

pub type Rational = BigRational;

/// Point in `C^9`, indexed by [`VarIndex::slot`].
pub type Point9 = [Complex64; NVARS];

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector. A zero entry means the variable is absent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial([u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: VarIndex) -> Self {
        let mut e = [0; NVARS];
        e[v.slot()] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: [u16; NVARS]) -> Self {
        Monomial(exps)
    }

    pub fn exponent(&self, v: VarIndex) -> u16 {
        self.0[v.slot()]
    }

    pub fn exponents(&self) -> &[u16; NVARS] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Variables with nonzero exponent, in the fixed order.
    pub fn support(&self) -> impl Iterator<Item = (VarIndex, u16)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (VarIndex::from_slot(i), e))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Monomial(e)
    }

    fn with_exponent(&self, v: VarIndex, exp: u16) -> Monomial {
        let mut e = self.0;
        e[v.slot()] = exp;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn var(v: VarIndex) -> Self {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    /// `t(i)` by signed subscript; panics on an invalid subscript.
    pub fn t(i: i64) -> Self {
        Poly::var(VarIndex::new(i).expect("valid trace index"))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::ONE)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Degree in a single variable; `None` for the zero polynomial.
    pub fn degree_in(&self, v: VarIndex) -> Option<u16> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    pub fn contains(&self, v: VarIndex) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Splits `self = sum_k c_k * v^k` and returns `[c_0, c_1, ...]`, each free of `v`.
    pub fn coefficients_in(&self, v: VarIndex) -> Vec<Poly> {
        let top = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(); top + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(v) as usize;
            out[k].add_term(m.with_exponent(v, 0), c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative, all nine variables independent.
    pub fn partial(&self, v: VarIndex) -> Poly {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            out.insert(m.with_exponent(v, e - 1), c * int(i64::from(e)));
        }
        // Distinct monomials stay distinct after lowering one exponent, so no merging.
        Poly { terms: out }
    }

    pub fn gradient(&self) -> [Poly; NVARS] {
        std::array::from_fn(|i| self.partial(VarIndex::from_slot(i)))
    }

    /// Simultaneous substitution of every occurring variable.
    pub fn substitute(&self, images: &BTreeMap<VarIndex, Poly>) -> Result<Poly> {
        let mut powers: [Vec<Poly>; NVARS] = Default::default();
        for m in self.terms.keys() {
            for (v, e) in m.support() {
                let img = images.get(&v).ok_or(Error::MissingImage(v))?;
                let cache = &mut powers[v.slot()];
                if cache.is_empty() {
                    cache.push(Poly::one());
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * img;
                    cache.push(next);
                }
            }
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(c.clone());
            for (v, e) in m.support() {
                prod = &prod * &powers[v.slot()][e as usize];
            }
            for (k, x) in prod.terms {
                accumulate(&mut acc, k, x);
            }
        }
        Ok(Poly::from_accumulator(acc))
    }

    /// Substitutes a single variable, leaving the others untouched.
    pub fn substitute_one(&self, v: VarIndex, image: &Poly) -> Poly {
        let images: BTreeMap<_, _> = VarIndex::ALL
            .iter()
            .map(|&w| (w, if w == v { image.clone() } else { Poly::var(w) }))
            .collect();
        self.substitute(&images).expect("all images present")
    }

    /// Renames variables by a map on indices (no expansion needed).
    pub fn rename(&self, f: impl Fn(VarIndex) -> VarIndex) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let mut e = [0u16; NVARS];
            for (v, k) in m.support() {
                e[f(v).slot()] += k;
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    pub fn eval(&self, point: &Point9) -> Complex64 {
        NumericPoly::from(self).eval(point)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, point: &[Rational; NVARS]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.support() {
                t *= num_traits::pow(point[v.slot()].clone(), e as usize);
            }
            total += t;
        }
        total
    }

    fn from_accumulator(acc: HashMap<Monomial, Rational>) -> Poly {
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

fn accumulate(acc: &mut HashMap<Monomial, Rational>, m: Monomial, c: Rational) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => *e.get_mut() += c,
    }
}

/// Floating-point image of a [`Poly`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    terms: Vec<(f64, Monomial)>,
    max_exp: [u16; NVARS],
}

impl From<&Poly> for NumericPoly {
    fn from(p: &Poly) -> Self {
        let mut max_exp = [0u16; NVARS];
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| {
                for (slot, &e) in m.0.iter().enumerate() {
                    max_exp[slot] = max_exp[slot].max(e);
                }
                (c.to_f64().expect("finite coefficient"), *m)
            })
            .collect();
        NumericPoly { terms, max_exp }
    }
}

impl NumericPoly {
    pub fn eval(&self, point: &Point9) -> Complex64 {
        let powers: [Vec<Complex64>; NVARS] = std::array::from_fn(|slot| {
            let mut pw = Vec::with_capacity(self.max_exp[slot] as usize + 1);
            let mut x = Complex64::one();
            pw.push(x);
            for _ in 0..self.max_exp[slot] {
                x *= point[slot];
                pw.push(x);
            }
            pw
        });
        self.terms
            .iter()
            .map(|(c, m)| {
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(Complex64::new(*c, 0.0), |acc, (slot, &e)| {
                        acc * powers[slot][e as usize]
                    })
            })
            .sum()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.terms.len() == 1 {
            let (m, c) = rhs.terms.iter().next().unwrap();
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return rhs.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                accumulate(&mut acc, m1.mul(m2), c1 * c2);
            }
        }
        Poly::from_accumulator(acc)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.support() {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Canonical text: terms from the leading monomial down, e.g.
/// `-1/3 * t(1) * t(2) + t(3)`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs} * {m}")?;
            }
        }
        Ok(())
    }
}

/// Reader for the canonical text form (and a little more: arbitrary term
/// order, repeated factors, optional `*` before a factor). General
/// expressions with parentheses belong to the CLI parser.
impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Poly> {
        CanonicalReader {
            src: s.as_bytes(),
            pos: 0,
        }
        .poly()
    }
}

struct CanonicalReader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl CanonicalReader<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn signed_integer(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let start = self.pos;
        let n = self.integer()?;
        let n = n.to_i64().ok_or(Error::Parse {
            offset: start,
            message: "integer too large".into(),
        })?;
        Ok(if neg { -n } else { n })
    }

    fn factor(&mut self, mono: &mut [u16; NVARS]) -> Result<()> {
        let at = self.pos;
        if !(self.eat(b't') && self.eat(b'(')) {
            self.pos = at;
            return self.err("expected t(i)");
        }
        let idx_at = self.pos;
        let idx = self.signed_integer()?;
        let v = VarIndex::new(idx).map_err(|e| Error::Parse {
            offset: idx_at,
            message: e.to_string(),
        })?;
        if !self.eat(b')') {
            return self.err("expected ')'");
        }
        let mut e = 1u16;
        if self.eat(b'^') {
            let exp = self.integer()?;
            e = exp.to_u16().ok_or(Error::Parse {
                offset: self.pos,
                message: "exponent too large".into(),
            })?;
        }
        mono[v.slot()] += e;
        Ok(())
    }

    fn term(&mut self, negate: bool) -> Result<(Monomial, Rational)> {
        let mut coeff = Rational::one();
        let mut mono = [0u16; NVARS];
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let n = self.integer()?;
                    let d = if self.eat(b'/') {
                        let d = self.integer()?;
                        if d.is_zero() {
                            return self.err("zero denominator");
                        }
                        d
                    } else {
                        BigInt::one()
                    };
                    coeff *= Rational::new(n, d);
                }
                Some(b't') => self.factor(&mut mono)?,
                _ => return self.err("expected coefficient or t(i)"),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        if negate {
            coeff = -coeff;
        }
        Ok((Monomial(mono), coeff))
    }

    fn poly(mut self) -> Result<Poly> {
        let mut p = Poly::zero();
        let mut negate = self.eat(b'-');
        if !negate {
            self.eat(b'+');
        }
        loop {
            let (m, c) = self.term(negate)?;
            p.add_term(m, c);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: i64) -> Poly {
        Poly::t(i)
    }

    #[test]
    fn cancellation_and_doubling() {
        assert!((t(1) + -t(1)).is_zero());
        let x = &t(1) * &t(2);
        assert_eq!(&x + &x, x.scale(&int(2)));
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (t(1) - t(2)) * (t(1) + t(2));
        assert_eq!(lhs, t(1).pow(2) - t(2).pow(2));
        assert_eq!(Poly::one() * &lhs, lhs);
    }

    #[test]
    fn partials() {
        assert_eq!((t(4) * t(-4)).partial(VarIndex::T4), t(-4));
        assert!(Poly::from_int(7).partial(VarIndex::T1).is_zero());
        let p = t(1).pow(3) * t(2);
        assert_eq!(p.partial(VarIndex::T1), (t(1).pow(2) * t(2)).scale(&int(3)));
    }

    #[test]
    fn substitution() {
        let p = t(1) * t(2) + t(3);
        let mut images: BTreeMap<_, _> = VarIndex::ALL.iter().map(|&v| (v, Poly::var(v))).collect();
        assert_eq!(p.substitute(&images).unwrap(), p);
        images.insert(VarIndex::T1, Poly::zero());
        assert_eq!(p.substitute(&images).unwrap(), t(3));
        images.remove(&VarIndex::T3);
        assert!(matches!(
            p.substitute(&images),
            Err(Error::MissingImage(VarIndex::T3))
        ));
    }

    #[test]
    fn eval_identity_point() {
        let three = [Complex64::new(3.0, 0.0); NVARS];
        assert_eq!(t(1).eval(&three), Complex64::new(3.0, 0.0));
        let p = (t(1) * t(-4)).scale(&rat(1, 3)) - Poly::from_int(2);
        assert!((p.eval(&three) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ordering_is_graded_then_lex() {
        let p = t(3) - (t(1) * t(2)).scale(&rat(1, 3)) + t(5).pow(2) + t(1);
        let mons: Vec<_> = p.terms().map(|(m, _)| *m).collect();
        let mut sorted = mons.clone();
        sorted.sort();
        assert_eq!(mons, sorted);
        assert_eq!(p.to_string(), "-1/3 * t(1) * t(2) + t(5)^2 + t(1) + t(3)");
    }

    #[test]
    fn display_round_trip() {
        let p = t(3) - (t(1) * t(2)).scale(&rat(1, 3)) - Poly::from_int(5)
            + t(-4).pow(3).scale(&rat(-7, 2));
        let text = p.to_string();
        assert_eq!(text.parse::<Poly>().unwrap(), p);
        assert_eq!("0".parse::<Poly>().unwrap(), Poly::zero());
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn reader_errors_carry_offsets() {
        match "t(1) + t(6)".parse::<Poly>() {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 9);
                assert!(message.contains("unknown variable"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!("t(1) +".parse::<Poly>().is_err());
        assert!("1/0".parse::<Poly>().is_err());
    }

    #[test]
    fn coefficients_in_splits() {
        let p = t(5).pow(2) * t(1) + t(5) * t(2) + Poly::from_int(3);
        let c = p.coefficients_in(VarIndex::T5);
        assert_eq!(c, vec![Poly::from_int(3), t(2), t(1)]);
    }
}

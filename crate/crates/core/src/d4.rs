//! The order-8 group generated by the outer automorphisms
//! `x1 <-> x2` and `x1 -> x1^-1`, acting on trace-coordinate indices.
//!
//! Composition `g.compose(h)` applies `h` first. Every element carries the
//! parity of its word length in the generators; odd elements send
//! `t(5) -> P - t(5)`, even ones fix `t(5)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::poly::{Poly, Rational};
use crate::ring::{relation, RingElement};
use crate::var::{VarIndex, NVARS};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Generator {
    /// `x1 <-> x2`; on indices `(1,2)(-1,-2)(4,-4)`.
    Swap,
    /// `x1 -> x1^-1`; on indices `(1,-1)(3,-4)(-3,4)`.
    InvertFirst,
}

impl Generator {
    pub fn element(self) -> D4Element {
        match self {
            Generator::Swap => D4Element::from_transpositions(&[(1, 2), (-1, -2), (4, -4)], true),
            Generator::InvertFirst => {
                D4Element::from_transpositions(&[(1, -1), (3, -4), (-3, 4)], true)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct D4Element {
    perm: [u8; NVARS],
    t5_flips: bool,
}

impl D4Element {
    pub fn identity() -> Self {
        D4Element {
            perm: std::array::from_fn(|i| i as u8),
            t5_flips: false,
        }
    }

    fn from_transpositions(pairs: &[(i64, i64)], t5_flips: bool) -> Self {
        let mut g = D4Element::identity();
        for &(a, b) in pairs {
            let a = VarIndex::new(a).unwrap().slot();
            let b = VarIndex::new(b).unwrap().slot();
            g.perm.swap(a, b);
        }
        g.t5_flips = t5_flips;
        g
    }

    /// 𝔱
    pub fn swap() -> Self {
        Generator::Swap.element()
    }

    /// 𝔦₁
    pub fn invert_first() -> Self {
        Generator::InvertFirst.element()
    }

    /// 𝔦 = 𝔦₁𝔱𝔦₁𝔱, every generator inverted.
    pub fn invert_both() -> Self {
        let i1t = Self::invert_first().compose(&Self::swap());
        i1t.compose(&i1t)
    }

    /// 𝔦₂ = 𝔱𝔦₁𝔱.
    pub fn invert_second() -> Self {
        Self::swap()
            .compose(&Self::invert_first())
            .compose(&Self::swap())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &D4Element) -> D4Element {
        D4Element {
            perm: std::array::from_fn(|i| self.perm[other.perm[i] as usize]),
            t5_flips: self.t5_flips ^ other.t5_flips,
        }
    }

    pub fn inverse(&self) -> D4Element {
        let mut perm = [0u8; NVARS];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j as usize] = i as u8;
        }
        D4Element {
            perm,
            t5_flips: self.t5_flips,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == D4Element::identity()
    }

    pub fn t5_flips(&self) -> bool {
        self.t5_flips
    }

    pub fn image(&self, v: VarIndex) -> VarIndex {
        VarIndex::from_slot(self.perm[v.slot()] as usize)
    }

    pub fn order(&self) -> usize {
        let mut g = *self;
        let mut n = 1;
        while !g.is_identity() {
            g = g.compose(self);
            n += 1;
        }
        n
    }

    /// Cycle notation on the signed indices, e.g. `(1,2)(-1,-2)(4,-4)`.
    pub fn cycles(&self) -> String {
        let mut seen = [false; NVARS];
        let mut out = String::new();
        for start in 0..NVARS {
            if seen[start] || self.perm[start] as usize == start {
                continue;
            }
            let mut cycle = vec![];
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(VarIndex::from_slot(i).value().to_string());
                i = self.perm[i] as usize;
            }
            out.push_str(&format!("({})", cycle.join(",")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Short name in terms of 𝔱, 𝔦₁, 𝔦, 𝔦₂.
    pub fn name(&self) -> &'static str {
        let t = D4Element::swap();
        let i = D4Element::invert_both();
        let i1 = D4Element::invert_first();
        let i2 = D4Element::invert_second();
        let table = [
            (D4Element::identity(), "1"),
            (t, "t"),
            (i, "i"),
            (i1, "i1"),
            (i2, "i2"),
            (i.compose(&t), "it"),
            (i1.compose(&t), "i1t"),
            (i2.compose(&t), "i2t"),
        ];
        table
            .iter()
            .find(|(g, _)| g == self)
            .map(|(_, n)| *n)
            .unwrap_or("?")
    }

    /// Permutes the variables of a polynomial; with a flip, also rewrites
    /// `t(5) -> P - t(5)`.
    pub fn apply_poly(&self, p: &Poly) -> Poly {
        let renamed = p.rename(|v| self.image(v));
        if self.t5_flips && renamed.contains(VarIndex::T5) {
            let img = relation().p() - &Poly::var(VarIndex::T5);
            renamed.substitute_one(VarIndex::T5, &img)
        } else {
            renamed
        }
    }

    /// `a + b t5 -> g(a) + g(b) P - g(b) t5` when flipping, plain renaming otherwise.
    pub fn apply(&self, f: &RingElement) -> RingElement {
        let a = f.a().rename(|v| self.image(v));
        let b = f.b().rename(|v| self.image(v));
        if self.t5_flips {
            RingElement::from_parts(&a + &(&b * relation().p()), -b)
        } else {
            RingElement::from_parts(a, b)
        }
    }
}

impl fmt::Display for D4Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The eight elements with a shortest generator word each (word `[s1, s2]`
/// means `s1 ∘ s2`), in breadth-first order from the identity.
pub fn elements_with_words() -> Vec<(D4Element, Vec<Generator>)> {
    let gens = [Generator::Swap, Generator::InvertFirst];
    let mut out = vec![(D4Element::identity(), vec![])];
    let mut frontier = 0;
    while frontier < out.len() {
        let (g, word) = out[frontier].clone();
        for s in gens {
            let h = s.element().compose(&g);
            if !out.iter().any(|(x, _)| *x == h) {
                let mut w = vec![s];
                w.extend(word.iter().copied());
                out.push((h, w));
            }
        }
        frontier += 1;
    }
    out
}

pub fn elements() -> Vec<D4Element> {
    elements_with_words().into_iter().map(|(g, _)| g).collect()
}

/// Formal `Q`-linear combination of group elements, kept in the order written.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElement {
    terms: Vec<(Rational, D4Element)>,
}

impl GroupRingElement {
    pub fn from_terms(terms: Vec<(Rational, D4Element)>) -> Self {
        GroupRingElement { terms }
    }

    fn signed(terms: &[(i64, D4Element)]) -> Self {
        GroupRingElement {
            terms: terms
                .iter()
                .map(|&(s, g)| (Rational::from_integer(s.into()), g))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(Rational, D4Element)] {
        &self.terms
    }

    /// 𝕊, the sum of all eight elements.
    pub fn symmetrizer() -> Self {
        GroupRingElement {
            terms: elements()
                .into_iter()
                .map(|g| (Rational::one(), g))
                .collect(),
        }
    }

    /// Σ₁ = 1 + 𝔦 − 𝔦₁ − 𝔦₂
    pub fn sigma1() -> Self {
        Self::signed(&[
            (1, D4Element::identity()),
            (1, D4Element::invert_both()),
            (-1, D4Element::invert_first()),
            (-1, D4Element::invert_second()),
        ])
    }

    /// Σ₂ = 1 + 𝔦 − 𝔱 − 𝔦𝔱
    pub fn sigma2() -> Self {
        let t = D4Element::swap();
        let i = D4Element::invert_both();
        Self::signed(&[
            (1, D4Element::identity()),
            (1, i),
            (-1, t),
            (-1, i.compose(&t)),
        ])
    }

    /// (1/2)Σ₁Σ₂ written out as 1 + 𝔦 − 𝔦₁ − 𝔦₂ − 𝔱 − 𝔦𝔱 + 𝔦₁𝔱 + 𝔦₂𝔱.
    pub fn half_sigma1_sigma2() -> Self {
        let t = D4Element::swap();
        let i = D4Element::invert_both();
        let i1 = D4Element::invert_first();
        let i2 = D4Element::invert_second();
        Self::signed(&[
            (1, D4Element::identity()),
            (1, i),
            (-1, i1),
            (-1, i2),
            (-1, t),
            (-1, i.compose(&t)),
            (1, i1.compose(&t)),
            (1, i2.compose(&t)),
        ])
    }

    /// `1 - 𝔦`
    pub fn one_minus_invert_both() -> Self {
        Self::signed(&[(1, D4Element::identity()), (-1, D4Element::invert_both())])
    }

    pub fn mul(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut terms: Vec<(Rational, D4Element)> = vec![];
        for (c1, g1) in &self.terms {
            for (c2, g2) in &other.terms {
                let g = g1.compose(g2);
                let c = c1 * c2;
                match terms.iter_mut().find(|(_, h)| *h == g) {
                    Some((acc, _)) => *acc += c,
                    None => terms.push((c, g)),
                }
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        GroupRingElement { terms }
    }

    pub fn scale(&self, c: &Rational) -> GroupRingElement {
        GroupRingElement {
            terms: self
                .terms
                .iter()
                .map(|(x, g)| (x * c, *g))
                .filter(|(x, _)| !x.is_zero())
                .collect(),
        }
    }

    /// Order-insensitive normal form, for comparing sums.
    pub fn normalized(&self) -> BTreeMap<D4Element, Rational> {
        let mut out: BTreeMap<D4Element, Rational> = BTreeMap::new();
        for (c, g) in &self.terms {
            *out.entry(*g).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn apply(&self, f: &RingElement) -> RingElement {
        self.terms
            .iter()
            .fold(RingElement::zero(), |acc, (c, g)| acc + g.apply(f).scale(c))
    }

    pub fn apply_poly(&self, p: &Poly) -> Poly {
        self.terms
            .iter()
            .fold(Poly::zero(), |acc, (c, g)| acc + g.apply_poly(p).scale(c))
    }
}

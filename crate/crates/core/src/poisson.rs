//! Poisson bi-vectors for the three-holed sphere (pants) and the one-holed
//! torus, and brackets obtained by contracting them against `df ⊗ dg`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::d4::GroupRingElement;
use crate::linalg;
use crate::poly::{rat, NumericPoly, Point9, Poly};
use crate::ring::{reduce, relation, RingElement};
use crate::var::{VarIndex, NVARS};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Pants,
    Torus,
}

impl Surface {
    pub fn bivector(self) -> &'static BiVector {
        match self {
            Surface::Pants => pants(),
            Surface::Torus => torus(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Surface::Pants => "pants",
            Surface::Torus => "torus",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Surface {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pants" => Ok(Surface::Pants),
            "torus" => Ok(Surface::Torus),
            other => Err(format!(
                "unknown surface '{other}' (expected pants or torus)"
            )),
        }
    }
}

/// Antisymmetric array of coefficients over the coordinate ring. Only the
/// entry with `i < j` in the fixed variable order is stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BiVector {
    coeffs: BTreeMap<(VarIndex, VarIndex), RingElement>,
}

impl BiVector {
    /// The coefficient of `d/dt_i ∧ d/dt_j`, with `a_ji = -a_ij`.
    pub fn get(&self, i: VarIndex, j: VarIndex) -> RingElement {
        if i == j {
            return RingElement::zero();
        }
        let (key, sign) = if i < j {
            ((i, j), false)
        } else {
            ((j, i), true)
        };
        match self.coeffs.get(&key) {
            Some(c) if sign => -c,
            Some(c) => c.clone(),
            None => RingElement::zero(),
        }
    }

    /// Adds `c d/dt_i ∧ d/dt_j`.
    pub fn add_wedge(&mut self, i: VarIndex, j: VarIndex, c: &RingElement) {
        if i == j {
            return;
        }
        let (key, c) = if i < j {
            ((i, j), c.clone())
        } else {
            ((j, i), -c)
        };
        let entry = self.coeffs.entry(key).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Adds `s(c d/dt_i ∧ d/dt_j)`: each term `x·g` contributes
    /// `x g(c) d/dt_g(i) ∧ d/dt_g(j)`, in the order written.
    pub fn add_group_ring_wedge(
        &mut self,
        s: &GroupRingElement,
        i: VarIndex,
        j: VarIndex,
        c: &RingElement,
    ) {
        for (x, g) in s.terms() {
            self.add_wedge(g.image(i), g.image(j), &g.apply(c).scale(x));
        }
    }

    /// Stored nonzero entries `(i, j, a_ij)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (VarIndex, VarIndex, &RingElement)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn numeric(&self) -> NumericBiVector {
        NumericBiVector {
            entries: self
                .coeffs
                .iter()
                .map(|(&(i, j), c)| (i, j, NumericPoly::from(c.a()), NumericPoly::from(c.b())))
                .collect(),
        }
    }
}

/// Floating-point copy of a [`BiVector`] for evaluation at many points.
pub struct NumericBiVector {
    entries: Vec<(VarIndex, VarIndex, NumericPoly, NumericPoly)>,
}

impl NumericBiVector {
    pub fn matrix(&self, point: &Point9) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(NVARS, NVARS);
        let t5 = point[VarIndex::T5.slot()];
        for (i, j, a, b) in &self.entries {
            let v = a.eval(point) + b.eval(point) * t5;
            m[(i.slot(), j.slot())] = v;
            m[(j.slot(), i.slot())] = -v;
        }
        m
    }
}

fn v(i: i64) -> VarIndex {
    VarIndex::new(i).unwrap()
}

/// `∂/∂t(-4) (Q - t5 P)`, the pants coefficient `a_{4,5}`.
pub fn pants_a45() -> RingElement {
    let rel = relation();
    let f = rel.q() - &(&Poly::t(5) * rel.p());
    reduce(&f.partial(VarIndex::TM4))
}

pub fn build_bivector_pants() -> BiVector {
    let rel = relation();
    let mut bv = BiVector::default();
    let p_minus_2t5 = RingElement::new(rel.p().clone(), Poly::from_int(-2)).expect("t5-free");
    bv.add_wedge(VarIndex::T4, VarIndex::TM4, &p_minus_2t5);
    bv.add_group_ring_wedge(
        &GroupRingElement::one_minus_invert_both(),
        VarIndex::T4,
        VarIndex::T5,
        &pants_a45(),
    );
    bv
}

/// The four seed coefficients of the torus bi-vector.
pub fn torus_seeds() -> [(VarIndex, VarIndex, RingElement); 4] {
    let t = |i| Poly::t(i);
    let third = rat(1, 3);
    let a12 = t(3) - (t(1) * t(2)).scale(&third);
    let a13 = (t(1) * t(3)).scale(&rat(2, 3)) - t(-1) * t(2) + t(-4);
    let a1m3 = -t(-2) + (t(1) * t(-3)).scale(&third);
    let a34 = -t(1).pow(2) + t(-1) - t(-4) * t(-2) - t(2) * t(-3) + t(-1) * t(2) * t(-2)
        - (t(3) * t(4)).scale(&third);
    [
        (v(1), v(2), RingElement::from_poly(&a12)),
        (v(3), v(4), RingElement::from_poly(&a34)),
        (v(1), v(3), RingElement::from_poly(&a13)),
        (v(1), v(-3), RingElement::from_poly(&a1m3)),
    ]
}

pub fn build_bivector_torus() -> BiVector {
    let [s12, s34, s13, s1m3] = torus_seeds();
    let half = GroupRingElement::half_sigma1_sigma2();
    let mut bv = BiVector::default();
    bv.add_group_ring_wedge(&GroupRingElement::sigma1(), s12.0, s12.1, &s12.2);
    bv.add_group_ring_wedge(&GroupRingElement::sigma2(), s34.0, s34.1, &s34.2);
    bv.add_group_ring_wedge(&half, s13.0, s13.1, &s13.2);
    bv.add_group_ring_wedge(&half, s1m3.0, s1m3.1, &s1m3.2);
    bv
}

pub fn pants() -> &'static BiVector {
    static PANTS: OnceLock<BiVector> = OnceLock::new();
    PANTS.get_or_init(build_bivector_pants)
}

pub fn torus() -> &'static BiVector {
    static TORUS: OnceLock<BiVector> = OnceLock::new();
    TORUS.get_or_init(build_bivector_torus)
}

/// `{f, g} = sum_{i<j} a_ij (df/dt_i dg/dt_j - df/dt_j dg/dt_i)`, reduced.
pub fn bracket(f: &RingElement, g: &RingElement, bv: &BiVector) -> RingElement {
    let df = f.gradient();
    let dg = g.gradient();
    let mut acc = Poly::zero();
    for (i, j, c) in bv.entries() {
        let (fi, fj, gi, gj) = (&df[i.slot()], &df[j.slot()], &dg[i.slot()], &dg[j.slot()]);
        let mut cross = Poly::zero();
        if !fi.is_zero() && !gj.is_zero() {
            cross += &(fi * gj);
        }
        if !fj.is_zero() && !gi.is_zero() {
            cross -= &(fj * gi);
        }
        if !cross.is_zero() {
            acc += &(&c.to_poly() * &cross);
        }
    }
    reduce(&acc)
}

/// Whether `f` brackets to zero with all nine generators.
pub fn casimir_check(bv: &BiVector, f: &RingElement) -> bool {
    VarIndex::ALL
        .iter()
        .all(|&v| bracket(f, &RingElement::generator(v), bv).is_zero())
}

/// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`.
pub fn jacobi_defect(
    bv: &BiVector,
    f: &RingElement,
    g: &RingElement,
    h: &RingElement,
) -> RingElement {
    let fgh = bracket(f, &bracket(g, h, bv), bv);
    let ghf = bracket(g, &bracket(h, f, bv), bv);
    let hfg = bracket(h, &bracket(f, g, bv), bv);
    &(&fgh + &ghf) + &hfg
}

pub fn bivector_rank_at(bv: &BiVector, point: &Point9, tol: f64) -> usize {
    linalg::numeric_rank(&bv.numeric().matrix(point), tol)
}

/// `P - t5` as a ring element.
pub fn p_minus_t5() -> RingElement {
    RingElement::new(relation().p().clone(), Poly::from_int(-1)).expect("t5-free")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generator(i: i64) -> RingElement {
        RingElement::generator(VarIndex::new(i).unwrap())
    }

    #[test]
    fn pants_coefficients() {
        let bv = pants();
        let rel = relation();
        let expected = RingElement::new(rel.p().clone(), Poly::from_int(-2)).unwrap();
        assert_eq!(bv.get(v(4), v(-4)), expected);
        assert_eq!(bv.get(v(-4), v(4)), -&expected);
        assert!(bv.get(v(1), v(2)).is_zero());
        assert_eq!(bv.get(v(4), v(5)), pants_a45());
        assert_eq!(bv.entries().count(), 3);
    }

    #[test]
    fn pants_a45_is_derivative_of_relation_part() {
        let rel = relation();
        let direct = rel.q().partial(VarIndex::TM4) - &Poly::t(5) * &rel.p().partial(VarIndex::TM4);
        assert_eq!(pants_a45().to_poly(), direct);
    }

    #[test]
    fn pants_brackets() {
        let rel = relation();
        let b = bracket(&generator(4), &generator(-4), pants());
        assert_eq!(
            b,
            RingElement::new(rel.p().clone(), Poly::from_int(-2)).unwrap()
        );
        let f = generator(3) + generator(-4);
        assert!(bracket(&f, &f, pants()).is_zero());
        assert!(casimir_check(pants(), &generator(1)));
    }

    #[test]
    fn torus_coefficients() {
        let bv = torus();
        let t = |i| Poly::t(i);
        let a12 = t(3) - (t(1) * t(2)).scale(&rat(1, 3));
        assert_eq!(bv.get(v(1), v(2)).to_poly(), a12);
        let am12 = -(t(-4) - (t(-1) * t(2)).scale(&rat(1, 3)));
        assert_eq!(bv.get(v(-1), v(2)).to_poly(), am12);
        for i in VarIndex::ALL {
            assert!(bv.get(i, VarIndex::T5).is_zero());
        }
        assert_eq!(bracket(&generator(1), &generator(2), bv).to_poly(), a12);
    }

    #[test]
    fn casimir_examples() {
        assert!(casimir_check(torus(), &RingElement::t5()));
        assert!(casimir_check(torus(), &p_minus_t5()));
        assert!(!casimir_check(torus(), &generator(1)));
    }

    #[test]
    fn jacobi_on_pants_sample_triple() {
        let d = jacobi_defect(pants(), &generator(4), &generator(-4), &RingElement::t5());
        assert!(d.is_zero());
    }
}

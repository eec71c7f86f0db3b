//! Boundary maps, leaf tangent spaces as Jacobian kernels, transversality of
//! the pants and torus leaves, and the elimination that bounds their
//! intersection.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::linalg::{self, Kernel};
use crate::oracle::{sample_point, CharacterPoint};
use crate::par::Exec;
use crate::poisson::Surface;
use crate::poly::{NumericPoly, Point9, Poly, Rational};
use crate::ring::relation;
use crate::tol;
use crate::var::{VarIndex, NVARS};
use crate::Result;

/// Leaf dimensions, sum and intersection at a generic point.
pub const EXPECTED: (usize, usize, usize, usize) = (2, 6, 8, 0);

const PANTS_BOUNDARY: [VarIndex; 6] = [
    VarIndex::T1,
    VarIndex::TM1,
    VarIndex::T2,
    VarIndex::TM2,
    VarIndex::T3,
    VarIndex::TM3,
];

pub fn boundary_pants(point: &Point9) -> [Complex64; 6] {
    PANTS_BOUNDARY.map(|v| point[v.slot()])
}

/// `(t5, P - t5)`.
pub fn boundary_torus(point: &Point9) -> [Complex64; 2] {
    let t5 = point[VarIndex::T5.slot()];
    [t5, gradients().p.eval(point) - t5]
}

/// A fiber of a boundary map.
#[derive(Clone, Debug, Serialize)]
pub struct LeafSpec {
    pub surface: Surface,
    pub level: Vec<Complex64>,
}

impl LeafSpec {
    /// The leaf through `point`.
    pub fn through(surface: Surface, point: &Point9) -> Self {
        let level = match surface {
            Surface::Pants => boundary_pants(point).to_vec(),
            Surface::Torus => boundary_torus(point).to_vec(),
        };
        LeafSpec { surface, level }
    }

    /// Largest relative deviation of `point`'s boundary values from the level.
    pub fn deviation(&self, point: &Point9) -> f64 {
        LeafSpec::through(self.surface, point)
            .level
            .iter()
            .zip(&self.level)
            .map(|(x, y)| (x - y).norm() / (1.0 + y.norm()))
            .fold(0.0, f64::max)
    }

    pub fn expected_dim(&self) -> usize {
        match self.surface {
            Surface::Pants => EXPECTED.0,
            Surface::Torus => EXPECTED.1,
        }
    }
}

struct Gradients {
    p: NumericPoly,
    relation: Vec<NumericPoly>,
    p_grad: Vec<NumericPoly>,
}

fn gradients() -> &'static Gradients {
    static G: OnceLock<Gradients> = OnceLock::new();
    G.get_or_init(|| {
        let rel = relation();
        Gradients {
            p: NumericPoly::from(rel.p()),
            relation: rel
                .polynomial()
                .gradient()
                .iter()
                .map(NumericPoly::from)
                .collect(),
            p_grad: rel.p().gradient().iter().map(NumericPoly::from).collect(),
        }
    })
}

fn unit_row(v: VarIndex) -> Vec<Complex64> {
    let mut row = vec![Complex64::zero(); NVARS];
    row[v.slot()] = Complex64::new(1.0, 0.0);
    row
}

fn eval_row(polys: &[NumericPoly], point: &Point9) -> Vec<Complex64> {
    polys.iter().map(|p| p.eval(point)).collect()
}

/// Rows are differentials of the defining functions of the leaf, or of the
/// relation alone when `surface` is `None`.
pub fn jacobian(surface: Option<Surface>, point: &Point9) -> DMatrix<Complex64> {
    let g = gradients();
    let mut rows = vec![eval_row(&g.relation, point)];
    match surface {
        None => {}
        Some(Surface::Pants) => rows.extend(PANTS_BOUNDARY.iter().map(|&v| unit_row(v))),
        Some(Surface::Torus) => {
            let e5 = unit_row(VarIndex::T5);
            let mut p_minus = eval_row(&g.p_grad, point);
            p_minus[VarIndex::T5.slot()] -= Complex64::new(1.0, 0.0);
            rows.push(e5);
            rows.push(p_minus);
        }
    }
    DMatrix::from_row_iterator(rows.len(), NVARS, rows.into_iter().flatten())
}

pub fn tangent_space(point: &Point9, spec: &LeafSpec, tol: f64) -> Kernel {
    linalg::kernel(&jacobian(Some(spec.surface), point), tol)
}

pub fn ambient_tangent_space(point: &Point9, tol: f64) -> Kernel {
    linalg::kernel(&jacobian(None, point), tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    pub dim_l3: usize,
    pub dim_l1: usize,
    pub dim_ambient: usize,
    pub dim_sum: usize,
    pub dim_intersection: usize,
    /// `|P^2 - 4Q|` at the point.
    pub discriminant: f64,
    /// Smallest retained singular value relative to the largest, over the
    /// pants, torus and stacked-basis matrices.
    pub min_retained: f64,
    /// Rank of the pants tangent space projected to `(t4, t-4, t5)`.
    pub pants_projection_rank: usize,
    pub generic: bool,
}

impl TangentReport {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (
            self.dim_l3,
            self.dim_l1,
            self.dim_sum,
            self.dim_intersection,
        )
    }

    pub fn is_expected(&self) -> bool {
        self.dims() == EXPECTED
    }

    /// Why the point was flagged, if it was.
    pub fn singularity(&self) -> Option<String> {
        let mut why = vec![];
        if self.discriminant < tol::SINGULARITY {
            why.push(format!("|P^2-4Q| = {:.3e}", self.discriminant));
        }
        if self.min_retained < tol::SINGULARITY {
            why.push(format!(
                "smallest retained singular value {:.3e}",
                self.min_retained
            ));
        }
        if (self.dim_l3, self.dim_l1, self.dim_ambient) != (EXPECTED.0, EXPECTED.1, 8) {
            why.push(format!(
                "kernel dimensions ({}, {}, {})",
                self.dim_l3, self.dim_l1, self.dim_ambient
            ));
        }
        (!why.is_empty()).then(|| why.join("; "))
    }
}

fn relative_min(k: &Kernel) -> f64 {
    match (k.singular_values.first(), k.smallest_retained()) {
        (Some(&max), Some(min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

pub fn transversality_check(point: &Point9, tol: f64) -> TangentReport {
    let pants = tangent_space(point, &LeafSpec::through(Surface::Pants, point), tol);
    let torus = tangent_space(point, &LeafSpec::through(Surface::Torus, point), tol);
    let ambient = ambient_tangent_space(point, tol);

    let mut stacked = DMatrix::zeros(NVARS, pants.dim() + torus.dim());
    stacked
        .view_mut((0, 0), (NVARS, pants.dim()))
        .copy_from(&pants.basis);
    stacked
        .view_mut((0, pants.dim()), (NVARS, torus.dim()))
        .copy_from(&torus.basis);
    let sv = linalg::singular_values(&stacked);
    let dim_sum = linalg::rank_from_singular_values(&sv, tol);
    let stacked_min = match sv.first() {
        Some(&max) if dim_sum > 0 => sv[dim_sum - 1] / max,
        _ => 0.0,
    };

    let rows = [VarIndex::T4, VarIndex::TM4, VarIndex::T5].map(|v| v.slot());
    let projection = pants.basis.select_rows(rows.iter());

    let discriminant = {
        let p = gradients().p.eval(point);
        let t5 = point[VarIndex::T5.slot()];
        // P^2 - 4Q = (2 t5 - P)^2 on the hypersurface.
        (t5 * 2.0 - p).norm_sqr()
    };

    let mut report = TangentReport {
        dim_l3: pants.dim(),
        dim_l1: torus.dim(),
        dim_ambient: ambient.dim(),
        dim_sum,
        dim_intersection: (pants.dim() + torus.dim()).saturating_sub(dim_sum),
        discriminant,
        min_retained: relative_min(&pants)
            .min(relative_min(&torus))
            .min(stacked_min),
        pants_projection_rank: linalg::numeric_rank(&projection, tol),
        generic: true,
    };
    report.generic = report.singularity().is_none();
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalitySummary {
    pub samples: usize,
    pub generic: usize,
    /// Generic points with dimensions `(2, 6, 8, 0)`.
    pub expected: usize,
    pub pants_dim_2: usize,
    pub torus_dim_6: usize,
    pub projection_rank_2: usize,
    /// `(sample index, diagnostic)` for every flagged point.
    pub exceptions: Vec<(usize, String)>,
}

impl TransversalitySummary {
    pub fn frequency(&self, count: usize) -> f64 {
        if self.generic == 0 {
            0.0
        } else {
            count as f64 / self.generic as f64
        }
    }
}

pub fn transversality_survey(
    seed: u64,
    samples: usize,
    tol: f64,
    exec: Exec,
) -> Result<TransversalitySummary> {
    let reports = exec.map_range(samples, |k| -> Result<TangentReport> {
        let point: CharacterPoint = sample_point(seed, k as u64)?;
        Ok(transversality_check(point.values(), tol))
    });
    let mut summary = TransversalitySummary {
        samples,
        generic: 0,
        expected: 0,
        pants_dim_2: 0,
        torus_dim_6: 0,
        projection_rank_2: 0,
        exceptions: vec![],
    };
    for (k, r) in reports.into_iter().enumerate() {
        let r = r?;
        if let Some(why) = r.singularity() {
            summary.exceptions.push((k, why));
            continue;
        }
        summary.generic += 1;
        summary.expected += usize::from(r.is_expected());
        summary.pants_dim_2 += usize::from(r.dim_l3 == EXPECTED.0);
        summary.torus_dim_6 += usize::from(r.dim_l1 == EXPECTED.1);
        summary.projection_rank_2 += usize::from(r.pants_projection_rank == 2);
        if !r.is_expected() {
            summary.exceptions.push((
                k,
                format!("dimensions {:?} at an unflagged point", r.dims()),
            ));
        }
    }
    Ok(summary)
}

/// Polynomial in two fresh symbols `C`, `D` with coefficients in the trace
/// variables, keyed by `(deg C, deg D)`.
#[derive(Clone, Debug, Default, PartialEq)]
struct ParamPoly(BTreeMap<(u16, u16), Poly>);

impl ParamPoly {
    fn from_poly(p: Poly) -> Self {
        let mut out = ParamPoly::default();
        out.add(0, 0, p);
        out
    }

    fn symbol(c: u16, d: u16) -> Self {
        let mut out = ParamPoly::default();
        out.add(c, d, Poly::one());
        out
    }

    fn add(&mut self, c: u16, d: u16, p: Poly) {
        let e = self.0.entry((c, d)).or_default();
        *e += &p;
        if e.is_zero() {
            self.0.remove(&(c, d));
        }
    }

    fn plus(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (&(c, d), p) in &other.0 {
            out.add(c, d, p.clone());
        }
        out
    }

    fn minus(&self, other: &ParamPoly) -> ParamPoly {
        self.plus(&other.times_poly(&Poly::from_int(-1)))
    }

    fn times(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::default();
        for (&(c1, d1), p1) in &self.0 {
            for (&(c2, d2), p2) in &other.0 {
                out.add(c1 + c2, d1 + d2, p1 * p2);
            }
        }
        out
    }

    fn times_poly(&self, p: &Poly) -> ParamPoly {
        self.times(&ParamPoly::from_poly(p.clone()))
    }

    fn pow(&self, n: u32) -> ParamPoly {
        (0..n).fold(ParamPoly::from_poly(Poly::one()), |acc, _| acc.times(self))
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree_in(&self, v: VarIndex) -> u16 {
        self.0
            .values()
            .filter_map(|p| p.degree_in(v))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `v^k`, still a polynomial in `C`, `D`.
    fn coefficient_in(&self, v: VarIndex, k: u16) -> ParamPoly {
        let mut out = ParamPoly::default();
        for (&(c, d), p) in &self.0 {
            if let Some(q) = p.coefficients_in(v).into_iter().nth(k as usize) {
                out.add(c, d, q);
            }
        }
        out
    }

    /// The value when this has no `C`, `D` or trace variables.
    fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => self.0.get(&(0, 0)).and_then(Poly::as_constant),
            _ => None,
        }
    }

    fn substitute_one(&self, v: VarIndex, image: &Poly) -> ParamPoly {
        ParamPoly(
            self.0
                .iter()
                .map(|(&k, p)| (k, p.substitute_one(v, image)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        )
    }

    fn eval(&self, point: &Point9, c: Complex64, d: Complex64) -> (Complex64, f64) {
        let mut total = Complex64::zero();
        let mut scale = 0.0;
        for (&(i, j), p) in &self.0 {
            let x = NumericPoly::from(p).eval(point) * c.powu(u32::from(i)) * d.powu(u32::from(j));
            total += x;
            scale += x.norm();
        }
        (total, scale)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationReport {
    pub q_degree_t4: u16,
    /// `P` with the substituted `t4` equals `C` after clearing the denominator.
    pub substitution_solves_p: bool,
    pub main_degree: u16,
    /// Leading coefficient in `t(-4)`, printed verbatim; `None` if not constant.
    pub main_leading: Option<String>,
    pub special_degree: u16,
    pub special_leading: Option<String>,
}

impl EliminationReport {
    pub fn passes(&self) -> bool {
        let nonzero = |c: &Option<String>| c.as_deref().is_some_and(|s| s != "0");
        self.q_degree_t4 == 3
            && self.substitution_solves_p
            && self.main_degree == 6
            && nonzero(&self.main_leading)
            && self.special_degree == 3
            && nonzero(&self.special_leading)
    }
}

struct Elimination {
    report: EliminationReport,
    cleared: ParamPoly,
}

fn t(i: i64) -> Poly {
    Poly::t(i)
}

/// The denominator `t(-4) - t(-1) t(2)` of the solved `t4`.
pub fn denominator() -> Poly {
    t(-4) - t(-1) * t(2)
}

/// Numerator of the solved `t4`, without its `C` term.
fn numerator_base() -> Poly {
    t(-4) * t(-2) * t(1) - t(-1) * t(1) - t(-2) * t(2) + t(-3) * t(1) * t(2)
        - t(-2) * t(-1) * t(1) * t(2)
        - t(-3) * t(3)
        + t(-2) * t(-1) * t(3)
        + Poly::from_int(3)
}

fn elimination() -> &'static Elimination {
    static E: OnceLock<Elimination> = OnceLock::new();
    E.get_or_init(|| {
        let rel = relation();
        let den = ParamPoly::from_poly(denominator());
        let num = ParamPoly::symbol(1, 0).plus(&ParamPoly::from_poly(numerator_base()));
        let c = ParamPoly::symbol(1, 0);
        let d = ParamPoly::symbol(0, 1);

        let p_coeffs = rel.p().coefficients_in(VarIndex::T4);
        let mut p_cleared = c.times(&den).times_poly(&Poly::from_int(-1));
        for (k, pk) in p_coeffs.iter().enumerate() {
            let k = k as u32;
            p_cleared = p_cleared.plus(&num.pow(k).times(&den.pow(1 - k)).times_poly(pk));
        }

        let q_coeffs = rel.q().coefficients_in(VarIndex::T4);
        let q_degree_t4 = (q_coeffs.len() - 1) as u16;
        let mut cleared = d
            .times(&den.pow(q_degree_t4.into()))
            .times_poly(&Poly::from_int(-1));
        for (k, qk) in q_coeffs.iter().enumerate() {
            let k = k as u32;
            cleared = cleared.plus(
                &num.pow(k)
                    .times(&den.pow(u32::from(q_degree_t4) - k))
                    .times_poly(qk),
            );
        }
        let main_degree = cleared.degree_in(VarIndex::TM4);
        let main_leading = cleared
            .coefficient_in(VarIndex::TM4, main_degree)
            .as_constant()
            .map(|r| r.to_string());

        let special = ParamPoly::from_poly(rel.q().clone())
            .minus(&d)
            .substitute_one(VarIndex::TM4, &(t(-1) * t(2)));
        let special_degree = special.degree_in(VarIndex::T4);
        let special_leading = special
            .coefficient_in(VarIndex::T4, special_degree)
            .as_constant()
            .map(|r| r.to_string());

        Elimination {
            report: EliminationReport {
                q_degree_t4,
                substitution_solves_p: p_cleared.is_zero(),
                main_degree,
                main_leading,
                special_degree,
                special_leading,
            },
            cleared,
        }
    })
}

pub fn elimination_check() -> EliminationReport {
    elimination().report.clone()
}

/// Relative value of the cleared intersection polynomial at a point, with
/// `C = P(point)` and `D = Q(point)`. A point's own `t(-4)` is always a root,
/// so this is near zero on the hypersurface. Root counting is not attempted.
pub fn intersection_residual(point: &Point9) -> f64 {
    let rel = relation();
    let c = NumericPoly::from(rel.p()).eval(point);
    let d = NumericPoly::from(rel.q()).eval(point);
    let (value, scale) = elimination().cleared.eval(point, c, d);
    value.norm() / (1.0 + scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn threes() -> Point9 {
        [Complex64::new(3.0, 0.0); NVARS]
    }

    #[test]
    fn boundaries_at_identity() {
        assert!(boundary_pants(&threes())
            .iter()
            .all(|z| (z - 3.0).norm() < 1e-12));
        let [a, b] = boundary_torus(&threes());
        assert!((a - 3.0).norm() < 1e-12 && (b - 3.0).norm() < 1e-12);
    }

    #[test]
    fn identity_is_flagged() {
        let r = transversality_check(&threes(), tol::RANK);
        assert!(!r.generic);
        assert!(r.singularity().unwrap().contains("P^2-4Q"));
    }

    #[test]
    fn elimination_values() {
        let r = elimination_check();
        assert_eq!(r.q_degree_t4, 3);
        assert!(r.substitution_solves_p);
        assert_eq!((r.main_degree, r.main_leading.as_deref()), (6, Some("1")));
        assert_eq!(
            (r.special_degree, r.special_leading.as_deref()),
            (3, Some("1"))
        );
        assert!(r.passes());
    }

    #[test]
    fn sampled_point_is_root_of_cleared_polynomial() {
        for k in 0..5 {
            let p = sample_point(11, k).unwrap();
            assert!(intersection_residual(p.values()) < 1e-9);
        }
    }
}

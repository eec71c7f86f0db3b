//! Complex SVD helpers: numeric rank and kernels.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Singular values, largest first.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Count of singular values above `tol * sigma_max`; zero for the zero matrix.
pub fn rank_from_singular_values(s: &[f64], tol: f64) -> usize {
    match s.first() {
        Some(&max) if max > 0.0 => s.iter().filter(|&&x| x > tol * max).count(),
        _ => 0,
    }
}

pub fn numeric_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    rank_from_singular_values(&singular_values(m), tol)
}

#[derive(Clone, Debug)]
pub struct Kernel {
    /// Orthonormal basis, one vector per column.
    pub basis: DMatrix<Complex64>,
    /// All singular values of the input, largest first.
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

impl Kernel {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Smallest singular value counted toward the rank.
    pub fn smallest_retained(&self) -> Option<f64> {
        self.rank.checked_sub(1).map(|i| self.singular_values[i])
    }
}

/// Kernel of an `m x n` matrix (rows are covectors), via the SVD of the
/// matrix zero-padded to at least `n` rows.
pub fn kernel(m: &DMatrix<Complex64>, tol: f64) -> Kernel {
    let n = m.ncols();
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::<Complex64>::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let mut cols = vec![];
    for (k, &s) in sv.iter().enumerate() {
        if max == 0.0 || s <= tol * max {
            cols.push(v_t.row(k).transpose().map(|z| z.conj()));
        }
    }
    let basis = if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    let mut sorted = sv;
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.truncate(m.nrows().min(n));
    let rank = rank_from_singular_values(&sorted, tol);
    Kernel {
        basis,
        singular_values: sorted,
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn antisymmetric_ranks_are_even() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.),
                c(1.),
                c(2.),
                c(-1.),
                c(0.),
                c(3.),
                c(-2.),
                c(-3.),
                c(0.),
            ],
        );
        assert_eq!(numeric_rank(&m, 1e-8), 2);
        assert_eq!(numeric_rank(&DMatrix::zeros(3, 3), 1e-8), 0);
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[c(1.), c(1.), c(0.)]);
        let k = kernel(&m, 1e-8);
        assert_eq!(k.dim(), 2);
        assert_eq!(k.rank, 1);
        let prod = &m * &k.basis;
        assert!(prod.iter().all(|z| z.norm() < 1e-12));
    }
}

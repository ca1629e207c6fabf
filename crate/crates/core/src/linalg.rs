//! Small dense linear algebra kernels.
//!
//! Everything here targets tiny systems (a handful of rows), so the
//! implementations favour exactness and simplicity: LU with partial pivoting
//! for real solves, cyclic Jacobi for complex Hermitian eigenproblems, and a
//! Householder reflection used for unitary state preparation.

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{real, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular or numerically rank-deficient (condition estimate {condition_estimate:.3e})")]
    Singular { condition_estimate: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("cannot build a reflection for a zero vector")]
    ZeroVector,
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[S]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    /// Maximum absolute deviation from symmetry; zero for a 1x1 matrix.
    pub fn symmetry_deviation(&self) -> S {
        let mut dev = S::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let d = (self[(i, j)] - self[(j, i)]).abs();
                if d > dev {
                    dev = d;
                }
            }
        }
        dev
    }

    pub fn mat_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve `a x = b` by LU decomposition with partial pivoting.
///
/// Fails with a crude condition estimate (max/min pivot magnitude) when a
/// pivot collapses relative to the matrix scale.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<Vec<S>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: b.len() });
    }

    let mut lu = a.clone();
    let mut x = b.to_vec();
    let scale = a
        .data()
        .iter()
        .fold(S::zero(), |acc, v| if v.abs() > acc { v.abs() } else { acc });
    let pivot_floor = scale * S::epsilon() * real(n as f64);

    let mut max_pivot = S::zero();
    let mut min_pivot = S::infinity();
    for col in 0..n {
        let mut pivot_row = col;
        for r in (col + 1)..n {
            if lu[(r, col)].abs() > lu[(pivot_row, col)].abs() {
                pivot_row = r;
            }
        }
        let pivot = lu[(pivot_row, col)];
        if pivot.abs() <= pivot_floor {
            let cond = if min_pivot > S::zero() && min_pivot.is_finite() {
                (max_pivot / min_pivot).to_f64().unwrap_or(f64::INFINITY)
            } else {
                f64::INFINITY
            };
            return Err(LinalgError::Singular {
                condition_estimate: if pivot.abs() > S::zero() {
                    (max_pivot / pivot.abs()).to_f64().unwrap_or(f64::INFINITY)
                } else {
                    cond.max(f64::INFINITY)
                },
            });
        }
        if pivot_row != col {
            for c in 0..n {
                let tmp = lu[(col, c)];
                lu[(col, c)] = lu[(pivot_row, c)];
                lu[(pivot_row, c)] = tmp;
            }
            x.swap(col, pivot_row);
        }
        if pivot.abs() > max_pivot {
            max_pivot = pivot.abs();
        }
        if pivot.abs() < min_pivot {
            min_pivot = pivot.abs();
        }
        for r in (col + 1)..n {
            let factor = lu[(r, col)] / lu[(col, col)];
            lu[(r, col)] = factor;
            for c in (col + 1)..n {
                let sub = factor * lu[(col, c)];
                lu[(r, c)] = lu[(r, c)] - sub;
            }
            let sub = factor * x[col];
            x[r] = x[r] - sub;
        }
    }

    for col in (0..n).rev() {
        x[col] = x[col] / lu[(col, col)];
        for r in 0..col {
            let sub = lu[(r, col)] * x[col];
            x[r] = x[r] - sub;
        }
    }
    Ok(x)
}

/// Eigendecomposition of a complex Hermitian matrix.
pub struct HermitianEigen<S> {
    /// Eigenvalues, ascending.
    pub values: Vec<S>,
    /// Eigenvectors as columns, row-major storage, matching `values` order.
    pub vectors: Vec<Complex<S>>,
    /// Matrix dimension.
    pub dim: usize,
}

impl<S: Scalar> HermitianEigen<S> {
    pub fn vector(&self, k: usize) -> Vec<Complex<S>> {
        (0..self.dim).map(|r| self.vectors[r * self.dim + k]).collect()
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices (row-major, length n*n).
///
/// The input is assumed Hermitian; only the upper triangle and real parts of
/// the diagonal are trusted.
pub fn hermitian_eigen<S: Scalar>(
    matrix: &[Complex<S>],
    n: usize,
) -> Result<HermitianEigen<S>, LinalgError> {
    if matrix.len() != n * n {
        return Err(LinalgError::DimensionMismatch { expected: n * n, got: matrix.len() });
    }
    let mut a = matrix.to_vec();
    let mut v = vec![Complex::<S>::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = Complex::one();
    }
    if n <= 1 {
        return Ok(HermitianEigen {
            values: a.first().map(|c| c.re).into_iter().collect(),
            vectors: v,
            dim: n,
        });
    }

    let scale = a
        .iter()
        .fold(S::zero(), |acc, c| if c.norm() > acc { c.norm() } else { acc })
        .max(S::one());
    let stop = scale * S::epsilon() * real((n * n) as f64);
    let max_sweeps = 64;

    for sweep in 0..=max_sweeps {
        let mut off = S::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        if sweep == max_sweeps {
            return Err(LinalgError::NoConvergence { sweeps: max_sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g <= stop * real(1e-2) {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Phase factor so the rotated 2x2 block is real symmetric.
                let u = apq / g;
                let tau = (aqq - app) / (real::<S>(2.0) * g);
                let t = if tau >= S::zero() {
                    S::one() / (tau + (S::one() + tau * tau).sqrt())
                } else {
                    -S::one() / (-tau + (S::one() + tau * tau).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = t * c;
                // J[p][p]=c, J[p][q]=s*u, J[q][p]=-s*conj(u), J[q][q]=c
                let su = u * s;
                let su_conj = u.conj() * s;
                // Columns: A <- A J
                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = arp * c - arq * su_conj;
                    a[r * n + q] = arp * su + arq * c;
                }
                // Rows: A <- J^dagger A
                for col in 0..n {
                    let apc = a[p * n + col];
                    let aqc = a[q * n + col];
                    a[p * n + col] = apc * c - aqc * su;
                    a[q * n + col] = apc * su_conj + aqc * c;
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = vrp * c - vrq * su_conj;
                    v[r * n + q] = vrp * su + vrq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<S> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let values: Vec<S> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = vec![Complex::<S>::zero(); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + new_col] = v[r * n + old_col];
        }
    }
    Ok(HermitianEigen { values, vectors, dim: n })
}

/// Unitary `U` (row-major, d x d) with `U v = e0` for a normalized vector `v`.
///
/// Built from a Householder reflection onto `arg(v[0]) * e0` followed by a
/// diagonal phase correction; for real `v` with `v[0] > 0` this is the plain
/// real reflection.
pub fn reflection_to_zero_ket<S: Scalar>(
    v: &[Complex<S>],
) -> Result<Vec<Complex<S>>, LinalgError> {
    let d = v.len();
    let norm_sqr = v.iter().fold(S::zero(), |acc, c| acc + c.norm_sqr());
    if norm_sqr <= S::zero() {
        return Err(LinalgError::ZeroVector);
    }

    let v0 = v[0];
    let u = if v0.norm() > S::zero() {
        v0 / v0.norm()
    } else {
        Complex::one()
    };

    // Cancellation-free choice: w = v + u*e0, so H = I - 2 w w^dagger / |w|^2
    // maps v -> -u*e0 and |w|^2 = 2(1 + |v0|) never collapses.
    let mut w = v.to_vec();
    w[0] = w[0] + u;
    let wn = w.iter().fold(S::zero(), |acc, c| acc + c.norm_sqr());

    let mut mat = vec![Complex::<S>::zero(); d * d];
    let two_over = real::<S>(2.0) / wn;
    for r in 0..d {
        for c in 0..d {
            let outer = w[r] * w[c].conj() * two_over;
            let id = if r == c { Complex::one() } else { Complex::<S>::zero() };
            mat[r * d + c] = id - outer;
        }
    }
    // Phase correction on row 0 turns -u*e0 into e0.
    let fix = -u.conj();
    for entry in mat.iter_mut().take(d) {
        *entry = *entry * fix;
    }
    Ok(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_known_3x3() {
        let a = Matrix::<f64>::from_rows(&[
            &[2.0, 1.0, -1.0][..],
            &[-3.0, -1.0, 2.0][..],
            &[-2.0, 1.0, 2.0][..],
        ]);
        let x = solve(&a, &[8.0, -11.0, -3.0]).unwrap();
        let expected = [2.0, 3.0, -1.0];
        for (got, want) in x.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn solve_requires_pivoting() {
        // Zero in the leading position forces a row swap.
        let a = Matrix::<f64>::from_rows(&[&[0.0, 1.0][..], &[1.0, 0.0][..]]);
        let x = solve(&a, &[3.0, 7.0]).unwrap();
        assert!((x[0] - 7.0).abs() < 1e-14);
        assert!((x[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn solve_reports_singular_with_condition() {
        let a = Matrix::from_rows(&[&[1.0, 2.0][..], &[2.0, 4.0][..]]);
        match solve(&a, &[1.0, 2.0]) {
            Err(LinalgError::Singular { condition_estimate }) => {
                assert!(condition_estimate > 1e10);
            }
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn eigen_diagonal_matrix() {
        let m = vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
        let eig = hermitian_eigen(&m, 2).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_pauli_x() {
        let m = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let eig = hermitian_eigen(&m, 2).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        let v = eig.vector(1);
        // (1,1)/sqrt(2) up to phase
        assert!((v[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v[0] - v[1]).norm() < 1e-12);
    }

    #[test]
    fn eigen_complex_hermitian_known_values() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)];
        let eig = hermitian_eigen(&m, 2).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_satisfies_defining_equation_on_random_hermitian() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for n in 2..=8usize {
            let mut m = vec![c(0.0, 0.0); n * n];
            for r in 0..n {
                for col in r..n {
                    let re: f64 = rng.random_range(-1.0..1.0);
                    let im: f64 = if r == col { 0.0 } else { rng.random_range(-1.0..1.0) };
                    m[r * n + col] = c(re, im);
                    m[col * n + r] = c(re, -im);
                }
            }
            let eig = hermitian_eigen(&m, n).unwrap();
            // A v_k = lambda_k v_k
            for k in 0..n {
                let vk = eig.vector(k);
                for r in 0..n {
                    let av: Complex64 = (0..n).map(|j| m[r * n + j] * vk[j]).sum();
                    let diff = (av - vk[r] * eig.values[k]).norm();
                    assert!(diff < 1e-10, "n={n} k={k} r={r} diff={diff}");
                }
            }
            // V^dagger V = I
            for i in 0..n {
                for j in 0..n {
                    let dot: Complex64 =
                        (0..n).map(|r| eig.vector(i)[r].conj() * eig.vector(j)[r]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn reflection_maps_vector_to_zero_ket() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for d in [2usize, 4, 8] {
            for _ in 0..50 {
                let mut v: Vec<Complex64> =
                    (0..d).map(|_| c(rng.random_range(-1.0..1.0), 0.0)).collect();
                let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                if n < 1e-3 {
                    continue;
                }
                for x in v.iter_mut() {
                    *x /= n;
                }
                let u = reflection_to_zero_ket(&v).unwrap();
                let mapped: Vec<Complex64> = (0..d)
                    .map(|r| (0..d).map(|col| u[r * d + col] * v[col]).sum())
                    .collect();
                assert!((mapped[0] - c(1.0, 0.0)).norm() < 1e-12);
                for x in mapped.iter().skip(1) {
                    assert!(x.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn reflection_handles_aligned_input() {
        let v = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let u = reflection_to_zero_ket(&v).unwrap();
        assert!((u[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((u[3] - c(1.0, 0.0)).norm() < 1e-15);
    }
}

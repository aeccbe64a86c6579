//! Thin linear-algebra layer over `faer`: triplet assembly, sparse direct
//! solves with residual checks, and dense symmetric generalized eigenvalue
//! problems.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};

use crate::error::{R13Error, Result};

/// Coordinate-format accumulator; duplicates are summed on conversion.
#[derive(Debug, Clone, Default)]
pub struct TripletBuilder {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    /// Empty `nrows × ncols` accumulator.
    pub fn new(nrows: usize, ncols: usize) -> Self {
        TripletBuilder {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    /// Adds `v` at `(r, c)`; exact zeros are dropped.
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.nrows && c < self.ncols);
        if v != 0.0 {
            self.entries.push((r, c, v));
        }
    }

    /// Appends every entry of `other`, scaled by `factor`.
    pub fn extend_scaled(&mut self, other: &TripletBuilder, factor: f64) {
        for &(r, c, v) in &other.entries {
            self.add(r, c, factor * v);
        }
    }

    /// Appends every entry of `other` transposed and scaled by `factor`.
    pub fn extend_transposed(&mut self, other: &TripletBuilder, factor: f64) {
        for &(r, c, v) in &other.entries {
            self.add(c, r, factor * v);
        }
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Raw entries.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Compressed sparse column matrix.
    pub fn to_sparse(&self) -> Result<SparseColMat<usize, f64>> {
        let trip: Vec<Triplet<usize, usize, f64>> =
            self.entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &trip)
            .map_err(|e| R13Error::Solver(format!("sparse assembly failed: {e:?}")))
    }

    /// Dense matrix.
    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::<f64>::zeros(self.nrows, self.ncols);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.entries.iter().map(|&(r, c, v)| x[r] * v * y[c]).sum()
    }
}

/// Euclidean norm.
pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Result of a direct solve.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Solution vector.
    pub x: Vec<f64>,
    /// `‖A x − b‖ / ‖b‖` (absolute when `b = 0`).
    pub relative_residual: f64,
}

/// Factorized sparse matrix, reusable for several right-hand sides.
pub struct SparseLu {
    matrix: TripletBuilder,
    lu: faer::sparse::linalg::solvers::Lu<usize, f64>,
}

impl SparseLu {
    /// Factorizes a square matrix with partial pivoting.
    pub fn new(a: &TripletBuilder) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(R13Error::InvalidArgument("LU needs a square matrix".into()));
        }
        let sp = a.to_sparse()?;
        let lu = sp
            .sp_lu()
            .map_err(|e| R13Error::Solver(format!("sparse LU factorization failed: {e:?}")))?;
        Ok(SparseLu { matrix: a.clone(), lu })
    }

    /// Solves `A x = b` and reports the relative residual; fails when the
    /// solution is not finite or the residual exceeds `tol`.
    pub fn solve(&self, b: &[f64], tol: f64) -> Result<SolveOutcome> {
        let n = b.len();
        let mut rhs = Mat::<f64>::from_fn(n, 1, |i, _| b[i]);
        self.lu.solve_in_place(rhs.as_mut());
        let x: Vec<f64> = (0..n).map(|i| rhs[(i, 0)]).collect();
        if x.iter().any(|v| !v.is_finite()) {
            return Err(R13Error::Solver("linear solve produced non-finite values (singular system)".into()));
        }
        let ax = self.matrix.matvec(&x);
        let r: Vec<f64> = ax.iter().zip(b).map(|(a, b)| a - b).collect();
        let bn = norm2(b);
        let relative_residual = if bn > 0.0 { norm2(&r) / bn } else { norm2(&r) };
        if relative_residual > tol {
            return Err(R13Error::Solver(format!(
                "linear solve residual {relative_residual:e} exceeds tolerance {tol:e}"
            )));
        }
        Ok(SolveOutcome { x, relative_residual })
    }
}

/// Eigenvalues (ascending) of the symmetric-definite pencil `A x = λ B x`.
///
/// `B` is factorized as `L Lᵀ` and the eigenvalues of `L⁻¹ A L⁻ᵀ` are
/// returned; only the lower triangles of `A` and `B` are read after
/// symmetrization.
pub fn generalized_eigenvalues(a: &Mat<f64>, b: &Mat<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(R13Error::InvalidArgument("pencil matrices must be square and equal in size".into()));
    }
    let bs = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (b[(i, j)] + b[(j, i)]));
    let llt = bs
        .llt(Side::Lower)
        .map_err(|e| R13Error::Solver(format!("Cholesky of the norm matrix failed: {e:?}")))?;
    let l = llt.L();
    let mut x = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, x.as_mut(), faer::Par::Seq);
    let mut c = x.transpose().to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, c.as_mut(), faer::Par::Seq);
    let cs = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    cs.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| R13Error::Solver(format!("symmetric eigensolve failed: {e:?}")))
}

/// Eigenvalues (ascending) of a symmetric matrix.
pub fn symmetric_eigenvalues(a: &Mat<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    let s = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    s.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| R13Error::Solver(format!("symmetric eigensolve failed: {e:?}")))
}

/// Singular values (nonincreasing) of a dense matrix.
pub fn singular_values(a: &Mat<f64>) -> Result<Vec<f64>> {
    a.singular_values()
        .map_err(|e| R13Error::Solver(format!("SVD failed: {e:?}")))
}

/// Singular values of `L_r⁻¹ G L_c⁻ᵀ` where `M_r = L_r L_rᵀ` and
/// `M_c = L_c L_cᵀ` are the (symmetric positive definite) row and column
/// Gram matrices; these are the stationary values of
/// `yᵀGx / (‖y‖_{M_r} ‖x‖_{M_c})`.
pub fn whitened_singular_values(g: &Mat<f64>, m_row: &Mat<f64>, m_col: &Mat<f64>) -> Result<Vec<f64>> {
    let chol = |m: &Mat<f64>| {
        let n = m.nrows();
        let s = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
        s.llt(Side::Lower)
            .map(|c| c.L().to_owned())
            .map_err(|e| R13Error::Solver(format!("Cholesky of a Gram matrix failed: {e:?}")))
    };
    let lr = chol(m_row)?;
    let lc = chol(m_col)?;
    let mut x = g.to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(lr.as_ref(), x.as_mut(), faer::Par::Seq);
    let mut y = x.transpose().to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(lc.as_ref(), y.as_mut(), faer::Par::Seq);
    singular_values(&y)
}

/// Restricts a dense matrix to the given row and column index sets.
pub fn submatrix(a: &Mat<f64>, rows: &[usize], cols: &[usize]) -> Mat<f64> {
    Mat::<f64>::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_solve_small_system() {
        let mut t = TripletBuilder::new(3, 3);
        for (r, c, v) in [(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0), (2, 2, 2.0), (0, 0, 1.0)] {
            t.add(r, c, v);
        }
        let lu = SparseLu::new(&t).unwrap();
        let out = lu.solve(&[1.0, 2.0, 4.0], 1e-12).unwrap();
        assert!((5.0 * out.x[0] + out.x[1] - 1.0).abs() < 1e-14);
        assert!((out.x[2] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pencil_eigenvalues() {
        let a = Mat::<f64>::from_fn(2, 2, |i, j| if i == j { [2.0, 6.0][i] } else { 0.0 });
        let b = Mat::<f64>::from_fn(2, 2, |i, j| if i == j { [1.0, 2.0][i] } else { 0.0 });
        let ev = generalized_eigenvalues(&a, &b).unwrap();
        assert!((ev[0] - 2.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn singular_system_detected() {
        let mut t = TripletBuilder::new(2, 2);
        t.add(0, 0, 1.0);
        t.add(0, 1, 1.0);
        t.add(1, 0, 1.0);
        t.add(1, 1, 1.0);
        let r = SparseLu::new(&t).and_then(|lu| lu.solve(&[1.0, 0.0], 1e-8));
        assert!(r.is_err());
    }
}

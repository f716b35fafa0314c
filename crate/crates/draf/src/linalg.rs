//! Dense symmetric linear algebra behind the hyperplane and rotation splits:
//! cyclic-Jacobi eigendecomposition, generalized Rayleigh-quotient problems,
//! Cholesky factorization, null-space bases and log-determinants.
//!
//! Everything here operates on small dense matrices (a node split works in
//! `mtry + 1` dimensions), so a simple, accurate Jacobi sweep beats pulling in
//! a large-scale eigensolver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative pivot floor used to declare a matrix numerically rank deficient
/// during Cholesky factorization: a pivot must exceed `RANK_TOL * trace / d`.
pub const RANK_TOL: f64 = 1e-12;

/// Default relative threshold for null-space detection: eigenvalues at or
/// below `NULL_SPACE_TOL * lambda_max` count as zero.
pub const NULL_SPACE_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        DenseMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Symmetry check used by the symmetric-only entry points:
    /// `|a_ij - a_ji| <= 1e-12 * max|a|`.
    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let tol = 1e-12 * self.max_abs();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^t A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// `self^t * other`.
    pub fn transpose_matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Adds `delta` along the diagonal.
    pub fn add_scaled_identity(&self, delta: f64) -> DenseMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += delta;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// One eigenvalue with its unit-norm eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Regularization applied by [`solve_generalized_rayleigh`] when a matrix in
/// the pencil is numerically rank deficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    /// No regularization; the denominator must be positive definite.
    None,
    /// A Cholesky-failing denominator matrix `H` is replaced by
    /// `H + delta_rel * trace(H)/dim * I`.
    Tikhonov { delta_rel: f64 },
    /// A rank-deficient numerator restricts the search to its null space and
    /// maximizes the denominator form there. `tol` is relative to the largest
    /// eigenvalue of the numerator.
    NullSpace { tol: f64 },
}

fn check_symmetric(a: &DenseMatrix) -> Result<()> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

/// Full spectrum of a symmetric matrix via cyclic Jacobi sweeps.
///
/// Pairs come back ascending by eigenvalue, vectors mutually orthonormal.
/// Each vector's sign is fixed so its largest-magnitude component is
/// positive, which keeps serialized models reproducible.
pub fn sym_eig(a: &DenseMatrix) -> Result<Vec<EigenPair>> {
    check_symmetric(a)?;
    let n = a.rows();
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    let norm = m.fro_norm();
    let stop = 1e-14 * norm;

    if norm > 0.0 {
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = {
                let mut s = 0.0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        s += 2.0 * m[(i, j)] * m[(i, j)];
                    }
                }
                s.sqrt()
            };
            if off <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|i| EigenPair {
            value: m[(i, i)],
            vector: v.column(i),
        })
        .collect();
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    for pair in &mut pairs {
        normalize_sign(&mut pair.vector);
    }
    Ok(pairs)
}

fn jacobi_rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq.abs() <= f64::MIN_POSITIVE {
        return;
    }
    let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = m.rows();
    // A <- G^t A G for the (p, q) rotation.
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = c * akp - s * akq;
        m[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = c * apk - s * aqk;
        m[(q, k)] = s * apk + c * aqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn normalize_sign(v: &mut [f64]) {
    let mut idx = 0;
    let mut best = 0.0;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn normalize_unit(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Lower-triangular Cholesky factor of a symmetric matrix, or `None` when a
/// pivot falls at or below `RANK_TOL * trace / d` — the crate's numerical
/// rank-deficiency signal.
pub fn cholesky(a: &DenseMatrix) -> Option<DenseMatrix> {
    if !a.is_square() {
        return None;
    }
    let d = a.rows();
    let floor = (RANK_TOL * a.trace() / d as f64).max(0.0);
    let mut l = DenseMatrix::zeros(d, d);
    for j in 0..d {
        let mut s = a[(j, j)];
        for k in 0..j {
            s -= l[(j, k)] * l[(j, k)];
        }
        if s <= floor {
            return None;
        }
        let ljj = s.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..d {
            let mut t = a[(i, j)];
            for k in 0..j {
                t -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = t / ljj;
        }
    }
    Some(l)
}

/// Solves `L x = b` for lower-triangular `L`.
fn solve_lower(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Solves `L^t x = b` for lower-triangular `L`.
fn solve_lower_transpose(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Solves `L L^t x = b` given the Cholesky factor `L`.
pub fn cholesky_solve(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    solve_lower_transpose(l, &solve_lower(l, b))
}

/// `ln det A` for a symmetric positive definite matrix, via Cholesky.
pub fn log_det_psd(a: &DenseMatrix) -> Result<f64> {
    check_symmetric(a)?;
    let l = cholesky(a).ok_or(Error::NotPositiveDefinite)?;
    Ok((0..a.rows()).map(|i| 2.0 * l[(i, i)].ln()).sum())
}

/// Orthonormal basis of the numerical null space of a symmetric PSD matrix:
/// eigenvectors whose eigenvalue is at most `tol * lambda_max`. Full-rank
/// input yields a matrix with zero columns.
pub fn null_space_basis(p: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let pairs = sym_eig(p)?;
    let lambda_max = pairs.last().map(|e| e.value.max(0.0)).unwrap_or(0.0);
    let cutoff = tol * lambda_max;
    let kept: Vec<&EigenPair> = pairs.iter().filter(|e| e.value <= cutoff).collect();
    let d = p.rows();
    let mut basis = DenseMatrix::zeros(d, kept.len());
    for (j, pair) in kept.iter().enumerate() {
        for i in 0..d {
            basis[(i, j)] = pair.vector[i];
        }
    }
    Ok(basis)
}

/// All eigenpairs of the symmetric-definite pencil `P r = lambda Q r`,
/// ascending, via Cholesky reduction of `Q`. Vectors are unit-norm.
pub fn generalized_eig(p: &DenseMatrix, q: &DenseMatrix) -> Result<Vec<EigenPair>> {
    let l = cholesky(q).ok_or(Error::NotPositiveDefinite)?;
    let d = p.rows();
    // C = L^-1 P L^-t, built column by column.
    let mut c = DenseMatrix::zeros(d, d);
    // First M = L^-1 P (solving one column of P at a time).
    let mut m = DenseMatrix::zeros(d, d);
    for j in 0..d {
        let col = solve_lower(&l, &p.column(j));
        for i in 0..d {
            m[(i, j)] = col[i];
        }
    }
    // Then C^t = L^-1 M^t, i.e. row i of C solves against row i of M.
    for i in 0..d {
        let row: Vec<f64> = (0..d).map(|j| m[(i, j)]).collect();
        let sol = solve_lower(&l, &row);
        for j in 0..d {
            c[(i, j)] = sol[j];
        }
    }
    // Symmetrize away round-off before Jacobi.
    for i in 0..d {
        for j in (i + 1)..d {
            let avg = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = avg;
            c[(j, i)] = avg;
        }
    }
    let mut pairs = sym_eig(&c)?;
    for pair in &mut pairs {
        let mut r = solve_lower_transpose(&l, &pair.vector);
        normalize_unit(&mut r);
        normalize_sign(&mut r);
        pair.vector = r;
    }
    Ok(pairs)
}

/// Restricts the quadratic form of `den` to the null space of `num` and
/// maximizes it there (the null-space regularization step). Returns the
/// maximizing unit vector, or `None` when `num` has no null space.
fn null_space_extreme(num: &DenseMatrix, den: &DenseMatrix, tol: f64) -> Result<Option<Vec<f64>>> {
    let basis = null_space_basis(num, tol)?;
    let k = basis.cols();
    if k == 0 {
        return Ok(None);
    }
    // Restrict: B = O^t den O, top eigenvector w, then map back through O.
    let den_o = den.matmul(&basis);
    let mut restricted = basis.transpose_matmul(&den_o);
    for i in 0..k {
        for j in (i + 1)..k {
            let avg = 0.5 * (restricted[(i, j)] + restricted[(j, i)]);
            restricted[(i, j)] = avg;
            restricted[(j, i)] = avg;
        }
    }
    let pairs = sym_eig(&restricted)?;
    let top = pairs.last().expect("nonempty spectrum");
    let mut vector = if top.value > 0.0 {
        basis.matvec(&top.vector)
    } else {
        // Denominator form vanishes on the whole null space; any basis
        // direction is equally (un)informative.
        basis.column(0)
    };
    normalize_unit(&mut vector);
    normalize_sign(&mut vector);
    Ok(Some(vector))
}

fn tikhonov_if_needed(h: &DenseMatrix, delta_rel: f64) -> DenseMatrix {
    if cholesky(h).is_some() {
        h.clone()
    } else {
        let delta = delta_rel * h.trace() / h.rows() as f64;
        h.add_scaled_identity(delta)
    }
}

/// Extremal solutions of the pair of Rayleigh-quotient problems over the
/// pencil `(P, Q)`:
///
/// * `r_min` minimizes `r^t P r / r^t Q r` — the smallest-eigenvalue pair of
///   `P r = lambda Q r`;
/// * `r_max` minimizes the swapped quotient `r^t Q r / r^t P r`, which is the
///   largest-eigenvalue pair of the same pencil, so one decomposition serves
///   both problems.
///
/// `P` and `Q` must be symmetric PSD of equal dimension. With
/// [`Regularization::None`], `Q` must be positive definite. Tikhonov mode
/// bumps the diagonal of whichever denominator matrix fails Cholesky.
/// Null-space mode searches the null space of a rank-deficient numerator for
/// the direction maximizing the opposing form; an `r_max` obtained that way
/// reports `value = +inf` (its denominator form is exactly zero).
pub fn solve_generalized_rayleigh(
    p: &DenseMatrix,
    q: &DenseMatrix,
    reg: Regularization,
) -> Result<(EigenPair, EigenPair)> {
    check_symmetric(p)?;
    check_symmetric(q)?;
    if p.rows() != q.rows() {
        return Err(Error::ShapeMismatch(p.rows(), p.cols(), q.rows(), q.cols()));
    }

    match reg {
        Regularization::None => {
            let pairs = generalized_eig(p, q)?;
            Ok((
                pairs.first().expect("nonempty").clone(),
                pairs.last().expect("nonempty").clone(),
            ))
        }
        Regularization::Tikhonov { delta_rel } => {
            let p_reg = tikhonov_if_needed(p, delta_rel);
            let q_reg = tikhonov_if_needed(q, delta_rel);
            let pairs = generalized_eig(&p_reg, &q_reg)?;
            Ok((
                pairs.first().expect("nonempty").clone(),
                pairs.last().expect("nonempty").clone(),
            ))
        }
        Regularization::NullSpace { tol } => solve_null_space(p, q, tol),
    }
}

fn solve_null_space(p: &DenseMatrix, q: &DenseMatrix, tol: f64) -> Result<(EigenPair, EigenPair)> {
    let p_full_rank = cholesky(p).is_some();
    let q_full_rank = cholesky(q).is_some();

    // Shared regular decomposition when Q admits it.
    let regular = if q_full_rank {
        Some(generalized_eig(p, q)?)
    } else {
        None
    };
    // Swapped pencil (Q, P) when only P admits it; its spectrum is the
    // reciprocal of the regular one.
    let swapped = if !q_full_rank && p_full_rank {
        Some(generalized_eig(q, p)?)
    } else {
        None
    };

    let r_min = if !p_full_rank {
        match null_space_extreme(p, q, tol)? {
            Some(vector) => EigenPair { value: 0.0, vector },
            None => regular_min(p, q, &regular, &swapped, tol)?,
        }
    } else {
        regular_min(p, q, &regular, &swapped, tol)?
    };

    let r_max = if !q_full_rank {
        match null_space_extreme(q, p, tol)? {
            Some(vector) => EigenPair {
                value: f64::INFINITY,
                vector,
            },
            None => regular_max(p, q, &regular, &swapped, tol)?,
        }
    } else {
        regular_max(p, q, &regular, &swapped, tol)?
    };

    Ok((r_min, r_max))
}

fn regular_min(
    p: &DenseMatrix,
    q: &DenseMatrix,
    regular: &Option<Vec<EigenPair>>,
    swapped: &Option<Vec<EigenPair>>,
    tol: f64,
) -> Result<EigenPair> {
    if let Some(pairs) = regular {
        return Ok(pairs.first().expect("nonempty").clone());
    }
    if let Some(pairs) = swapped {
        let top = pairs.last().expect("nonempty");
        let value = if top.value > 0.0 {
            1.0 / top.value
        } else {
            f64::INFINITY
        };
        return Ok(EigenPair {
            value,
            vector: top.vector.clone(),
        });
    }
    // Both matrices ill conditioned yet without a detectable null space:
    // nudge the denominator just enough to factor.
    let bumped = q.add_scaled_identity(tol.max(RANK_TOL) * q.trace().max(1.0) / q.rows() as f64);
    let pairs = generalized_eig(p, &bumped)?;
    Ok(pairs.first().expect("nonempty").clone())
}

fn regular_max(
    p: &DenseMatrix,
    q: &DenseMatrix,
    regular: &Option<Vec<EigenPair>>,
    swapped: &Option<Vec<EigenPair>>,
    tol: f64,
) -> Result<EigenPair> {
    if let Some(pairs) = regular {
        return Ok(pairs.last().expect("nonempty").clone());
    }
    if let Some(pairs) = swapped {
        let bottom = pairs.first().expect("nonempty");
        let value = if bottom.value > 0.0 {
            1.0 / bottom.value
        } else {
            f64::INFINITY
        };
        return Ok(EigenPair {
            value,
            vector: bottom.vector.clone(),
        });
    }
    let bumped = q.add_scaled_identity(tol.max(RANK_TOL) * q.trace().max(1.0) / q.rows() as f64);
    let pairs = generalized_eig(p, &bumped)?;
    Ok(pairs.last().expect("nonempty").clone())
}

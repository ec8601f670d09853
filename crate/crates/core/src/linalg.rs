//! Symmetric rank-2 inverse updates.
//!
//! For a symmetric invertible `B` with inverse `C`, the perturbed matrix
//! `M = B + mu (e_i e_j^T + e_j e_i^T)` has the closed-form inverse
//!
//! ```text
//! M^-1 = C - alpha (C_i C_j^T + C_j C_i^T - beta C_i C_i^T - gamma C_j C_j^T)
//! alpha = mu (1 + mu c_ij) / ((1 + mu c_ij)^2 - mu^2 c_ii c_jj)
//! beta  = mu c_jj / (1 + mu c_ij)
//! gamma = mu c_ii / (1 + mu c_ij)
//! ```
//!
//! obtained by applying Sherman-Morrison twice. Both denominators must be
//! nonzero; these conditions are sufficient but not necessary for `M` to be
//! invertible, so [`Error::SingularUpdate`] does not imply `M` is singular.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Denominators below this magnitude are rejected.
pub const SINGULARITY_TOLERANCE: f64 = 1e-10;

const SHERMAN_MORRISON_TOLERANCE: f64 = 1e-12;

/// Maintained inverse `C = B^-1` with its column sums and grand total.
#[derive(Debug, Clone)]
pub struct InverseState {
    inverse: DMatrix<f64>,
    col_sums: DVector<f64>,
    total: f64,
}

/// Scalars of one rank-2 step, shared by the dense and lazy paths.
#[derive(Debug, Clone, Copy)]
struct Rank2Coefficients {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

fn rank2_coefficients(cii: f64, cjj: f64, cij: f64, mu: f64) -> Result<Rank2Coefficients> {
    let d1 = 1.0 + mu * cij;
    if d1.abs() < SINGULARITY_TOLERANCE {
        return Err(Error::SingularUpdate { denominator: d1 });
    }
    let d2 = d1 * d1 - mu * mu * cii * cjj;
    if d2.abs() < SINGULARITY_TOLERANCE {
        return Err(Error::SingularUpdate { denominator: d2 });
    }
    Ok(Rank2Coefficients {
        alpha: mu * d1 / d2,
        beta: mu * cjj / d1,
        gamma: mu * cii / d1,
    })
}

fn check_indices(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "rank-2 update needs distinct indices below {n}, got ({i}, {j})"
        )));
    }
    Ok(())
}

impl InverseState {
    /// Wraps an already computed symmetric inverse.
    pub fn from_inverse(inverse: DMatrix<f64>) -> Result<InverseState> {
        if !inverse.is_square() {
            return Err(Error::InvalidArgument("inverse must be square".into()));
        }
        let col_sums = DVector::from_iterator(
            inverse.ncols(),
            inverse.column_iter().map(|c| c.sum()),
        );
        let total = col_sums.sum();
        Ok(InverseState {
            inverse,
            col_sums,
            total,
        })
    }

    /// Inverts `b` directly (LU) and wraps the result.
    pub fn invert(b: &DMatrix<f64>) -> Result<InverseState> {
        let inverse = b.clone().try_inverse().ok_or(Error::SingularMatrix)?;
        InverseState::from_inverse(inverse)
    }

    pub fn dim(&self) -> usize {
        self.inverse.nrows()
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn col_sums(&self) -> &DVector<f64> {
        &self.col_sums
    }

    /// `1^T C 1`.
    pub fn total(&self) -> f64 {
        self.total
    }

    fn coefficients(&self, i: usize, j: usize, mu: f64) -> Result<Rank2Coefficients> {
        check_indices(self.dim(), i, j)?;
        let c = &self.inverse;
        rank2_coefficients(c[(i, i)], c[(j, j)], c[(i, j)], mu)
    }

    /// Inverse of `B + mu (e_i e_j^T + e_j e_i^T)`.
    pub fn rank2_update(&self, i: usize, j: usize, mu: f64) -> Result<InverseState> {
        let mut next = self.clone();
        next.apply_rank2(i, j, mu)?;
        Ok(next)
    }

    /// In-place form of [`InverseState::rank2_update`]; `O(n^2)`.
    pub fn apply_rank2(&mut self, i: usize, j: usize, mu: f64) -> Result<()> {
        let Rank2Coefficients { alpha, beta, gamma } = self.coefficients(i, j, mu)?;
        let ci = self.inverse.column(i).into_owned();
        let cj = self.inverse.column(j).into_owned();
        let (si, sj) = (self.col_sums[i], self.col_sums[j]);
        let n = self.dim();
        for q in 0..n {
            let (ai, aj) = (ci[q], cj[q]);
            for p in 0..n {
                let delta = ci[p] * aj + cj[p] * ai - beta * ci[p] * ai - gamma * cj[p] * aj;
                self.inverse[(p, q)] -= alpha * delta;
            }
        }
        for p in 0..n {
            self.col_sums[p] -= alpha * (ci[p] * sj + cj[p] * si - beta * ci[p] * si - gamma * cj[p] * sj);
        }
        self.total -= alpha * (2.0 * si * sj - beta * si * si - gamma * sj * sj);
        Ok(())
    }

    /// `1^T M^-1 1` for the perturbed matrix, from `c_ii, c_jj, c_ij`, the two
    /// column sums and the total only; `O(1)`.
    pub fn toggled_grw_sum(&self, i: usize, j: usize, mu: f64) -> Result<f64> {
        let Rank2Coefficients { alpha, beta, gamma } = self.coefficients(i, j, mu)?;
        let (si, sj) = (self.col_sums[i], self.col_sums[j]);
        Ok(self.total - alpha * (2.0 * si * sj - beta * si * si - gamma * sj * sj))
    }
}

impl InverseState {
    /// State on the index subset `indices`: the principal submatrix of `C`,
    /// the full-matrix column sums at those indices and the same total.
    ///
    /// Rank-2 updates whose indices lie in the subset only read and write
    /// these entries, so applying them to the restricted state (with local
    /// indices) tracks the same block and the same grand sum as updating
    /// the full inverse.
    pub fn restrict(&self, indices: &[usize]) -> InverseState {
        let k = indices.len();
        InverseState {
            inverse: DMatrix::from_fn(k, k, |p, q| self.inverse[(indices[p], indices[q])]),
            col_sums: DVector::from_fn(k, |p, _| self.col_sums[indices[p]]),
            total: self.total,
        }
    }
}

/// `(A + u v^T)^-1 = A^-1 - A^-1 u v^T A^-1 / (1 + v^T A^-1 u)`.
pub fn sherman_morrison(
    a_inv: &DMatrix<f64>,
    u: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    let n = a_inv.nrows();
    if !a_inv.is_square() || u.len() != n || v.len() != n {
        return Err(Error::InvalidArgument("dimension mismatch in Sherman-Morrison".into()));
    }
    let a_inv_u = a_inv * u;
    let v_a_inv = a_inv.tr_mul(v);
    let denominator = 1.0 + v.dot(&a_inv_u);
    if denominator.abs() < SHERMAN_MORRISON_TOLERANCE {
        return Err(Error::SingularUpdate { denominator });
    }
    Ok(a_inv - (a_inv_u * v_a_inv.transpose()) / denominator)
}

/// One applied step of an [`UpdateChain`]: the columns `C_i`, `C_j` of the
/// inverse before the step and the step's coefficients.
#[derive(Debug, Clone)]
struct ChainStep {
    col_i: DVector<f64>,
    col_j: DVector<f64>,
    coef: Rank2Coefficients,
}

/// A sequence of rank-2 updates on top of a base [`InverseState`], kept in
/// factored form. The updated inverse is never materialized; a column costs
/// `O(t n)` after `t` steps, which makes chains of a few dozen updates much
/// cheaper than refactoring an `n x n` matrix.
#[derive(Debug, Clone)]
pub struct UpdateChain<'a> {
    base: &'a InverseState,
    steps: Vec<ChainStep>,
    total: f64,
}

impl<'a> UpdateChain<'a> {
    pub fn new(base: &'a InverseState) -> UpdateChain<'a> {
        UpdateChain {
            base,
            steps: Vec::new(),
            total: base.total,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Column `p` of the current inverse.
    pub fn column(&self, p: usize) -> DVector<f64> {
        let mut col = self.base.inverse.column(p).into_owned();
        for step in &self.steps {
            let (ai, aj) = (step.col_i[p], step.col_j[p]);
            let Rank2Coefficients { alpha, beta, gamma } = step.coef;
            // C_i (C_j[p] - beta C_i[p]) + C_j (C_i[p] - gamma C_j[p])
            col.axpy(-alpha * (aj - beta * ai), &step.col_i, 1.0);
            col.axpy(-alpha * (ai - gamma * aj), &step.col_j, 1.0);
        }
        col
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    fn prepare(&self, i: usize, j: usize, mu: f64) -> Result<(DVector<f64>, DVector<f64>, Rank2Coefficients)> {
        check_indices(self.base.dim(), i, j)?;
        let col_i = self.column(i);
        let col_j = self.column(j);
        let coef = rank2_coefficients(col_i[i], col_j[j], col_i[j], mu)?;
        Ok((col_i, col_j, coef))
    }

    fn sum_after(&self, col_i: &DVector<f64>, col_j: &DVector<f64>, coef: Rank2Coefficients) -> f64 {
        let (si, sj) = (col_i.sum(), col_j.sum());
        let Rank2Coefficients { alpha, beta, gamma } = coef;
        self.total - alpha * (2.0 * si * sj - beta * si * si - gamma * sj * sj)
    }

    pub fn apply(&mut self, i: usize, j: usize, mu: f64) -> Result<()> {
        let (col_i, col_j, coef) = self.prepare(i, j, mu)?;
        self.total = self.sum_after(&col_i, &col_j, coef);
        self.steps.push(ChainStep { col_i, col_j, coef });
        Ok(())
    }

    /// Grand sum after one more update, without recording it.
    pub fn toggled_sum(&self, i: usize, j: usize, mu: f64) -> Result<f64> {
        let (col_i, col_j, coef) = self.prepare(i, j, mu)?;
        Ok(self.sum_after(&col_i, &col_j, coef))
    }

    /// Dense inverse after all steps.
    pub fn materialize(&self) -> DMatrix<f64> {
        let n = self.base.dim();
        DMatrix::from_fn(n, n, |p, q| self.column(q)[p])
    }
}

//! Dense reference eigensolver for small pencils.

use nalgebra::{DMatrix, SymmetricEigen};

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

pub fn to_dense(a: &CsrMatrix) -> DMatrix<f64> {
    let n = a.dim();
    let mut d = DMatrix::zeros(n, n);
    for (i, j, v) in a.triplets() {
        d[(i, j)] = v;
    }
    d
}

/// All eigenvalues of `A x = λ M x`, ascending, via Cholesky reduction
/// `L⁻¹ A L⁻ᵀ` of the standard problem.
pub fn generalized_eigenvalues(a: &CsrMatrix, m: &CsrMatrix) -> Result<Vec<f64>> {
    let ad = to_dense(a);
    let md = to_dense(m);
    let chol = md
        .cholesky()
        .ok_or_else(|| Error::InvariantViolation("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvariantViolation("singular Cholesky factor".into()))?;
    let c = &linv * ad * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

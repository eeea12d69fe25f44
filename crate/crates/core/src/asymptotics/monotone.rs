//! Eigenvalues as functions of the aperture on a fixed reference mesh.

use serde::Serialize;

use crate::discretize::{assemble_reference_pencil, mesh_threshold, StructuredMesh};
use crate::eigensolve::{lowest_eigenpairs, InertiaCounter};
use crate::error::{Error, Result};
use crate::fibers::validate_alpha;

/// Relative slack allowed between consecutive apertures.
pub const MONOTONE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityTable {
    pub alpha: f64,
    pub thetas: Vec<f64>,
    /// `energies[i][k]`: the `k+1`-th eigenvalue at `thetas[i]`, absent when
    /// it lies at or above the threshold.
    pub energies: Vec<Vec<Option<f64>>>,
    pub threshold: f64,
    pub nodes: usize,
    /// `(i, k)` pairs with `E_k(θ_i) > E_k(θ_{i+1})` beyond the tolerance.
    pub violations: Vec<(usize, usize)>,
}

impl MonotonicityTable {
    pub fn check(&self) -> Result<()> {
        if let Some(&(i, k)) = self.violations.first() {
            return Err(Error::InvariantViolation(format!(
                "E_{} decreases from θ = {} to θ = {}: {:?} > {:?}",
                k + 1,
                self.thetas[i],
                self.thetas[i + 1],
                self.energies[i][k],
                self.energies[i + 1][k]
            )));
        }
        Ok(())
    }
}

/// Lowest `k` eigenvalues below the threshold for each aperture in
/// `thetas` (strictly increasing), on a reference-frame mesh of the `d = 3`
/// axisymmetric fiber.
pub fn monotonicity_sweep(alpha: f64, thetas: &[f64], k: usize, mesh: &StructuredMesh) -> Result<MonotonicityTable> {
    validate_alpha(alpha)?;
    if k == 0 {
        return Err(Error::param("k", "need at least one eigenvalue"));
    }
    if thetas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::param("theta_list", "apertures must be strictly increasing"));
    }
    let rp = assemble_reference_pencil(3, mesh)?;
    let threshold = mesh_threshold(alpha, mesh.h_t);
    let mut energies = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let p = rp.at(theta, alpha)?;
        let below = InertiaCounter::new(&p).count(threshold)?.count.min(k);
        let mut row = vec![None; k];
        if below > 0 {
            let sigma = threshold - 0.25 * alpha * alpha;
            let res = lowest_eigenpairs(&p, below, sigma)?;
            if !res.converged {
                return Err(Error::NonConvergence(format!("eigenpairs at θ = {theta}")));
            }
            for (slot, &v) in row.iter_mut().zip(&res.eigenvalues) {
                if v < threshold {
                    *slot = Some(v);
                }
            }
        }
        energies.push(row);
    }
    let mut violations = Vec::new();
    for i in 0..energies.len().saturating_sub(1) {
        for j in 0..k {
            if let (Some(a), Some(b)) = (energies[i][j], energies[i + 1][j]) {
                if a > b + MONOTONE_RTOL * a.abs().max(b.abs()) {
                    violations.push((i, j));
                }
            }
        }
    }
    Ok(MonotonicityTable {
        alpha,
        thetas: thetas.to_vec(),
        energies,
        threshold,
        nodes: mesh.node_count(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{build_mesh, TruncatedDomain};
    use std::f64::consts::PI;

    fn mesh() -> StructuredMesh {
        let dom = TruncatedDomain::reference(12.0, 6.0).unwrap().with_back(3.0).unwrap();
        build_mesh(&dom, 0.15).unwrap()
    }

    #[test]
    fn eigenvalues_grow_with_the_aperture() {
        let m = mesh();
        let t = monotonicity_sweep(2.0, &[PI / 12.0, PI / 8.0, PI / 6.0, PI / 4.0], 3, &m).unwrap();
        t.check().unwrap();
        assert!(t.energies[0][0].is_some());
    }

    #[test]
    fn repeated_aperture_is_reproducible() {
        let m = mesh();
        let a = monotonicity_sweep(2.0, &[PI / 10.0], 2, &m).unwrap();
        let b = monotonicity_sweep(2.0, &[PI / 10.0], 2, &m).unwrap();
        assert_eq!(a.energies, b.energies);
    }

    #[test]
    fn rejects_unsorted_apertures() {
        assert!(monotonicity_sweep(2.0, &[0.5, 0.4], 1, &mesh()).is_err());
    }
}

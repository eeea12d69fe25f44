//! Certified lower bound for the axisymmetric counting function.
//!
//! On a half-strip of half-width `R tanθ` around the ray, starting at distance
//! `2R + 1/sinθ` from the tip, the fiber form dominates a tensor product of an
//! interval δ-problem across the ray and an inverse-square operator along it.
//! Dirichlet conditions on the strip boundary make its counting function a
//! lower bound for the full one.

use serde::Serialize;

use super::delta::dirichlet_ground_energy;
use super::inverse_square::{inverse_square_count, InverseSquareProblem};
use super::BoundaryCondition;
use crate::error::{Error, Result};
use crate::fibers::{ray_potential_strength, ConeConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorBound {
    pub count: usize,
    /// Lowest eigenvalue of the transverse interval problem.
    pub transverse_energy: f64,
    /// Rescaled depth handed to the inverse-square counter.
    pub scaled_depth: f64,
    pub warning: Option<String>,
}

/// Lower bound for the number of fiber eigenvalues below `-α²/4 - e` with
/// truncation scale `r`.
pub fn tensor_lower_bound_count(cfg: &ConeConfig, r: f64, e: f64) -> Result<TensorBound> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param("R", format!("must be positive, got {r}")));
    }
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::param("E", format!("depth must be positive, got {e}")));
    }
    let (sin, tan) = (cfg.theta.sin(), cfg.theta.tan());
    let e1 = dirichlet_ground_energy(cfg.alpha, r * tan)?;
    let shifted = 0.25 * cfg.alpha * cfg.alpha + e + e1;
    let mut warning = None;
    if e1 >= 0.0 {
        warning = Some(format!(
            "R = {r} too small: the transverse interval carries no bound state"
        ));
    }
    if shifted <= 0.0 {
        return Ok(TensorBound {
            count: 0,
            transverse_energy: e1,
            scaled_depth: 0.0,
            warning: Some(format!("R = {r} too small: shifted depth {shifted:e} is not positive")),
        });
    }
    let scale = 2.0 * r + 1.0 / sin;
    let f = shifted * scale * scale;
    let p = InverseSquareProblem::new(ray_potential_strength(cfg.theta), BoundaryCondition::Dirichlet)?;
    let count = inverse_square_count(&p, f)?;
    Ok(TensorBound {
        count,
        transverse_energy: e1,
        scaled_depth: f,
        warning,
    })
}
